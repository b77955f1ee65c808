//! Special functions with complex parameters: log-gamma, Olver's **M**,
//! Bessel J, conical Legendre and Gegenbauer functions, Harish-Chandra c.

mod bessel;
mod confluent;
pub(crate) mod dd;
mod gamma;
mod legendre;

pub use bessel::bessel_j;
pub use confluent::{olver_m, olver_m_asymptotic, olver_m_series, MEval, Regime, RegimePolicy, PRECISION_THRESHOLD};
pub use gamma::{gamma, harish_chandra_c, is_nonpositive_integer, log_gamma, plancherel_density, pochhammer, recip_gamma};
pub use legendre::{conical_legendre_p, gegenbauer_c, gegenbauer_c_complex};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("pole of Gamma at {0}")]
    Pole(f64),
    #[error("argument outside the supported domain: {0}")]
    Domain(String),
    #[error("asymptotic remainder estimate {0:e} exceeds the precision threshold")]
    PrecisionLoss(f64),
}

/// [`olver_m`] that retries an imprecise asymptotic evaluation, first with
/// the Poincare expansion truncated near its smallest term, then with the
/// series up to 1.25 times the switch radius. Reports loss of precision if
/// every attempt is imprecise.
pub fn olver_m_checked(a: Complex64, b: Complex64, z: Complex64, policy: &RegimePolicy) -> Result<Complex64, SpecFunError> {
    let e = olver_m(a, b, z, policy);
    if e.is_precise() || e.regime == Regime::Series {
        return if e.is_precise() { Ok(e.value) } else { Err(SpecFunError::PrecisionLoss(e.error_estimate)) };
    }
    let terms = ((z.norm() / 2.0) as usize).clamp(policy.asymptotic_terms, 60);
    let longer = olver_m_asymptotic(a, b, z, terms);
    if longer.is_precise() {
        return Ok(longer.value);
    }
    if z.norm() <= 1.25 * policy.series_radius {
        let s = olver_m_series(a, b, z);
        if s.is_precise() {
            return Ok(s.value);
        }
    }
    Err(SpecFunError::PrecisionLoss(e.error_estimate.min(longer.error_estimate)))
}

/// log Gamma(z) that reports the poles instead of returning infinity.
pub fn log_gamma_checked(z: Complex64) -> Result<Complex64, SpecFunError> {
    if is_nonpositive_integer(z) {
        Err(SpecFunError::Pole(z.re))
    } else {
        Ok(log_gamma(z))
    }
}
