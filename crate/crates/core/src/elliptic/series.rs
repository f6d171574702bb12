//! Truncated power series in the parameter m = k².
//!
//! The combinations ι₂…ι₆ of K and E vanish to high order at k = 0, so direct
//! evaluation loses most significant digits for small k. Forming them as
//! series and stripping the known leading zeros keeps full relative accuracy.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

/// Number of retained coefficients; m ≤ 0.49 on the series branch.
pub const TERMS: usize = 120;

#[derive(Clone, Debug, PartialEq)]
pub struct MSeries(pub Vec<f64>);

impl MSeries {
    /// c₀ + c₁ m
    pub fn linear(c0: f64, c1: f64) -> Self {
        let mut v = vec![0.0; TERMS];
        v[0] = c0;
        v[1] = c1;
        MSeries(v)
    }

    pub fn add(&self, o: &Self) -> Self {
        MSeries(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        MSeries(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        MSeries(self.0.iter().map(|a| a * s).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.0.len().min(o.0.len());
        let mut v = vec![0.0; n];
        for (i, a) in self.0.iter().enumerate().take(n) {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in o.0.iter().enumerate().take(n - i) {
                v[i + j] += a * b;
            }
        }
        MSeries(v)
    }

    /// Divides by m^j, discarding coefficients that vanish identically.
    pub fn div_m_pow(&self, j: usize) -> Self {
        let mut v = self.0[j..].to_vec();
        v.resize(self.0.len(), 0.0);
        MSeries(v)
    }

    pub fn eval(&self, m: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * m + c)
    }
}

/// Series of K and E in m.
pub fn complete_series() -> &'static (MSeries, MSeries) {
    static CELL: OnceLock<(MSeries, MSeries)> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut kc = vec![0.0; TERMS];
        let mut ec = vec![0.0; TERMS];
        let mut r = 1.0_f64;
        for n in 0..TERMS {
            if n > 0 {
                r *= (2 * n - 1) as f64 / (2 * n) as f64;
            }
            let a = r * r;
            kc[n] = FRAC_PI_2 * a;
            ec[n] = FRAC_PI_2 * a / (1.0 - 2.0 * n as f64);
        }
        (MSeries(kc), MSeries(ec))
    })
}

/// Reduced combinations ι_i / m^{v_i} with their valuations v_i.
pub struct IotaSeries {
    pub i2: MSeries,
    pub i3: MSeries,
    pub i4: MSeries,
    pub i5: MSeries,
    pub i6: MSeries,
    /// (K − 8ι₄/m²)/m
    pub k8: MSeries,
}

pub const V2: usize = 1;
pub const V3: usize = 1;
pub const V4: usize = 2;
pub const V5: usize = 4;
pub const V6: usize = 1;

pub fn iota_series() -> &'static IotaSeries {
    static CELL: OnceLock<IotaSeries> = OnceLock::new();
    CELL.get_or_init(|| {
        let (k, e) = complete_series();
        let one_minus_m = MSeries::linear(1.0, -1.0);
        let two_minus_m = MSeries::linear(2.0, -1.0);
        let i2 = k.sub(e);
        let i4 = two_minus_m.mul(k).sub(&e.scale(2.0));
        let i6 = e.sub(k).add(&MSeries::linear(0.0, 1.0).mul(k));
        let ek = e.mul(k);
        let kk = k.mul(k);
        let ee = e.mul(e);
        let i5 = two_minus_m
            .mul(&ek)
            .add(&one_minus_m.mul(&kk))
            .sub(&ee.scale(3.0));
        // ι₃ (1 − m) is the polynomial part; the division is done at evaluation time.
        let i3 = ee
            .scale(3.0)
            .sub(&MSeries::linear(5.0, -4.0).mul(&ek))
            .add(&one_minus_m.mul(&kk).scale(2.0));
        let i4r = i4.div_m_pow(V4);
        let k8 = k.sub(&i4r.scale(8.0)).div_m_pow(1);
        IotaSeries {
            k8,
            i2: i2.div_m_pow(V2),
            i3: i3.div_m_pow(V3),
            i4: i4r,
            i5: i5.div_m_pow(V5),
            i6: i6.div_m_pow(V6),
        }
    })
}
