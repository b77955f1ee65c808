use std::f64::consts::PI;

use num_complex::Complex64;

use super::dd::CDD;
use super::gamma::{is_nonpositive_integer, pochhammer, recip_gamma};

/// Error estimates above this threshold mark a value as imprecise.
pub const PRECISION_THRESHOLD: f64 = 1e-8;

/// Switch between the convergent series and the Poincare expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimePolicy {
    pub series_radius: f64,
    pub asymptotic_terms: usize,
}

impl Default for RegimePolicy {
    fn default() -> Self {
        Self {
            series_radius: 40.0,
            asymptotic_terms: 12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Series,
    Asymptotic,
}

/// A value of **M** with the regime that produced it and a relative error
/// estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MEval {
    pub value: Complex64,
    pub regime: Regime,
    pub error_estimate: f64,
}

impl MEval {
    pub fn is_precise(&self) -> bool {
        self.error_estimate <= PRECISION_THRESHOLD
    }
}

/// Olver's confluent hypergeometric function
/// **M**(a; b; z) = sum_k (a)_k z^k / (Gamma(b+k) k!), i.e. 1F1 / Gamma(b).
///
/// |z| <= `series_radius` uses the series summed in double-double
/// arithmetic (the terms reach ~e^{|z|} on the imaginary axis before
/// cancelling). Beyond it the Poincare expansion with both exponential
/// branches is used; its first omitted terms give the error estimate.
pub fn olver_m(a: Complex64, b: Complex64, z: Complex64, policy: &RegimePolicy) -> MEval {
    if z.norm() <= policy.series_radius {
        olver_m_series(a, b, z)
    } else {
        olver_m_asymptotic(a, b, z, policy.asymptotic_terms)
    }
}

/// Series branch of [`olver_m`], usable at any z (cost grows with |z|).
pub fn olver_m_series(a: Complex64, b: Complex64, z: Complex64) -> MEval {
    let zero = Complex64::new(0.0, 0.0);
    // First nonvanishing term: 1/Gamma(b+k) = 0 for b+k in {0, -1, ...}.
    let mut k0 = 0usize;
    let first = if is_nonpositive_integer(b) {
        k0 = (-b.re) as usize + 1;
        let mut fact = 1.0;
        for j in 1..=k0 {
            fact *= j as f64;
        }
        pochhammer(a, k0) * z.powu(k0 as u32) / fact
    } else {
        recip_gamma(b)
    };
    if first == zero {
        return MEval {
            value: zero,
            regime: Regime::Series,
            error_estimate: 0.0,
        };
    }
    let zd = CDD::from_c64(z);
    let mut term = CDD::from_c64(first);
    let mut sum = CDD::default();
    let mut max_term: f64 = 0.0;
    let mut k = k0;
    let znorm = z.norm();
    loop {
        sum = sum + term;
        let tn = term.norm_approx();
        max_term = max_term.max(tn);
        let num = CDD::shifted(a, k as f64) * zd;
        let den = CDD::shifted(b, k as f64) * CDD::from_c64(Complex64::new(k as f64 + 1.0, 0.0));
        let next = term * num / den;
        let nn = next.norm_approx();
        let s = sum.norm_approx();
        k += 1;
        term = next;
        if nn == 0.0 {
            break;
        }
        if (k as f64) > znorm && nn < 0.5 * tn && nn <= 1e-33 * s.max(1e-300) {
            break;
        }
        if k > 20_000 {
            break;
        }
    }
    let value = sum.to_c64();
    let scale = value.norm();
    let error_estimate = if scale == 0.0 {
        0.0
    } else {
        4e-16 + 1e-31 * max_term / scale
    };
    MEval {
        value,
        regime: Regime::Series,
        error_estimate,
    }
}

/// Poincare expansion of **M**(a; b; z) for large |z| with `terms` terms in
/// each of the two series:
///
/// e^{+-pi i a} z^{-a}/Gamma(b-a) sum (a)_s (a-b+1)_s/s! (-z)^{-s}
///   + e^z z^{a-b}/Gamma(a) sum (1-a)_s (b-a)_s/s! z^{-s},
///
/// with the upper sign for Im z > 0, the lower for Im z < 0 and cos(pi a)
/// on the real axis.
pub fn olver_m_asymptotic(a: Complex64, b: Complex64, z: Complex64, terms: usize) -> MEval {
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let phase = if z.im > 0.0 {
        (i * PI * a).exp()
    } else if z.im < 0.0 {
        (-i * PI * a).exp()
    } else {
        (PI * a).cos()
    };
    let lnz = z.ln();
    let pre1 = phase * (-a * lnz).exp() * recip_gamma(b - a);
    let pre2 = (z + (a - b) * lnz).exp() * recip_gamma(a);

    let series = |p: Complex64, q: Complex64, w: Complex64| {
        // sum_{s<terms} (p)_s (q)_s / s! w^s, plus the first omitted term
        let mut t = one;
        let mut acc = Complex64::new(0.0, 0.0);
        for s in 0..terms {
            acc += t;
            let sf = s as f64;
            t = t * (p + sf) * (q + sf) / (sf + 1.0) * w;
        }
        (acc, t)
    };
    let (s1, r1) = series(a, a - b + 1.0, -1.0 / z);
    let (s2, r2) = series(one - a, b - a, 1.0 / z);
    let value = pre1 * s1 + pre2 * s2;
    let remainder = (pre1 * r1).norm() + (pre2 * r2).norm();
    let scale = value.norm();
    let error_estimate = if scale == 0.0 {
        if remainder == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        remainder / scale
    };
    MEval {
        value,
        regime: Regime::Asymptotic,
        error_estimate,
    }
}
