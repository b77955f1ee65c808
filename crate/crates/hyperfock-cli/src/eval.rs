use clap::ValueEnum;
use num_complex::Complex64;

use hyperfock::fockmap::fourier_closed_form;
use hyperfock::scattering::s_kernel;
use hyperfock::waves::{coulomb_plane_wave, hyperbolic_plane_wave, repulsive_plane_wave};
use hyperfock::{SpectralParams, SphereDirection};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expr {
    /// Coulomb plane wave psi(x; theta).
    Psi,
    /// Repulsive plane wave psi^-(x; theta).
    #[value(name = "psi_minus")]
    PsiMinus,
    /// Hyperbolic plane wave e_lambda(u; theta), |u| < 1.
    #[value(name = "e_lambda")]
    ELambda,
    /// Scattering kernel S_lambda(theta, theta').
    #[value(name = "s_kernel")]
    SKernel,
    /// Closed-form dilated Fourier transform of psi at xi.
    #[value(name = "fourier_closed")]
    FourierClosed,
}

/// Arguments of one point evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalArgs {
    pub expr: Expr,
    pub x: Vec<f64>,
    pub theta: Option<Vec<f64>>,
    pub theta_p: Option<Vec<f64>>,
    pub hbar: f64,
    pub lambda: f64,
}

fn direction(v: &Option<Vec<f64>>, d: usize, flag: &str) -> Result<SphereDirection, CliError> {
    match v {
        None => Ok(SphereDirection::axis(d)),
        Some(v) if v.len() != d => Err(CliError::Usage(format!("{flag} has {} components, expected {d}", v.len()))),
        Some(v) => Ok(SphereDirection::from_vector(v)?),
    }
}

pub fn evaluate(a: &EvalArgs) -> Result<Complex64, CliError> {
    if a.expr == Expr::SKernel {
        let theta = a.theta.as_ref().ok_or_else(|| CliError::Usage("s_kernel needs --theta".into()))?;
        let d = theta.len();
        let t = direction(&a.theta, d, "--theta")?;
        let tp = match &a.theta_p {
            Some(_) => direction(&a.theta_p, d, "--theta-p")?,
            None => return Err(CliError::Usage("s_kernel needs --theta-p".into())),
        };
        return Ok(s_kernel(a.lambda, d, &t, &tp)?);
    }
    let d = a.x.len();
    if d < 2 {
        return Err(CliError::Usage("--x needs at least 2 components".into()));
    }
    let theta = direction(&a.theta, d, "--theta")?;
    let params = || SpectralParams::new(d, a.hbar, a.lambda);
    Ok(match a.expr {
        Expr::Psi => coulomb_plane_wave(&params()?, &a.x, &theta)?,
        Expr::PsiMinus => repulsive_plane_wave(&params()?, &a.x, &theta)?,
        Expr::ELambda => hyperbolic_plane_wave(a.lambda, &a.x, &theta)?,
        Expr::FourierClosed => fourier_closed_form(&params()?, &a.x, &theta)?.value,
        Expr::SKernel => unreachable!(),
    })
}
