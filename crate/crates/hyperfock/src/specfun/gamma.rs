use std::f64::consts::PI;

use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// True when z is 0, -1, -2, ...
pub fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// log Gamma(z), continued from the positive real axis (Lanczos, g = 7,
/// nine coefficients; reflection for Re z < 1/2).
///
/// At the poles z = 0, -1, ... the result is +infinity in the real part.
pub fn log_gamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    if z.re < 0.5 {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - log_gamma(1.0 - z);
    }
    let zm = z - 1.0;
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (zm + k as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (zm + 0.5) * t.ln() - t + acc.ln()
}

/// log sin(pi z) without overflow for large |Im z|.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 1.0 {
        return (PI * z).sin().ln();
    }
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z}), |e^{2 i pi z}| < 1.
    let i = Complex64::new(0.0, 1.0);
    let w = (2.0 * i * PI * z).exp();
    Complex64::new(0.5f64.ln(), PI / 2.0) - i * PI * z + (1.0 - w).ln()
}

/// Gamma(z); infinite at the poles.
pub fn gamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    log_gamma(z).exp()
}

/// 1 / Gamma(z), entire; exactly zero at the poles of Gamma.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    (-log_gamma(z)).exp()
}

/// Rising factorial (a)_k = Gamma(a+k)/Gamma(a), by direct product for k <= 64.
pub fn pochhammer(a: Complex64, k: usize) -> Complex64 {
    if k <= 64 {
        let mut p = Complex64::new(1.0, 0.0);
        for j in 0..k {
            p *= a + j as f64;
        }
        p
    } else if is_nonpositive_integer(a) && (-a.re) < k as f64 {
        Complex64::new(0.0, 0.0)
    } else {
        (log_gamma(a + k as f64) - log_gamma(a)).exp()
    }
}

/// Harish-Chandra function c(lambda) = 2^{d-2} Gamma(d/2) Gamma(i lambda)
/// / (sqrt(pi) Gamma((d-1)/2 + i lambda)) of hyperbolic d-space.
pub fn harish_chandra_c(lambda: f64, d: usize) -> Option<Complex64> {
    if lambda == 0.0 || d < 2 {
        return None;
    }
    let il = Complex64::new(0.0, lambda);
    let df = d as f64;
    let log = (df - 2.0) * std::f64::consts::LN_2 + log_gamma(Complex64::new(df / 2.0, 0.0)) + log_gamma(il)
        - 0.5 * PI.ln()
        - log_gamma((df - 1.0) / 2.0 + il);
    Some(log.exp())
}

/// Plancherel density |c(lambda)|^{-2}; zero at lambda = 0.
pub fn plancherel_density(lambda: f64, d: usize) -> f64 {
    match harish_chandra_c(lambda, d) {
        Some(c) => 1.0 / c.norm_sqr(),
        None => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classical_values() {
        assert!(log_gamma(c(1.0, 0.0)).norm() < 1e-15);
        assert!((log_gamma(c(0.5, 0.0)) - c(PI.sqrt().ln(), 0.0)).norm() < 1e-14);
        assert!((gamma(c(5.0, 0.0)) - c(24.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn modulus_on_imaginary_axis() {
        // |Gamma(i)|^2 = pi / sinh(pi)
        let g = gamma(c(0.0, 1.0));
        assert!((g.norm_sqr() - PI / PI.sinh()).abs() < 1e-12 * g.norm_sqr());
        // |Gamma(1/2 + i y)|^2 = pi / cosh(pi y)
        let y = 3.5;
        let g = gamma(c(0.5, y));
        let expect = PI / (PI * y).cosh();
        assert!((g.norm_sqr() - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn reference_values() {
        // mpmath.loggamma, 30 digits, rounded to f64.
        let cases = [
            (c(0.3, 2.7), c(-3.519_878_385_242_761_5, -0.324_307_209_106_458_8)),
            (c(-4.2, 1.1), c(-4.974_088_140_122_202, -13.052_279_497_849_197)),
            (c(30.0, -40.0), c(49.232_808_494_070_3, -143.834_795_822_664_83)),
        ];
        for (z, lg) in cases {
            let got = log_gamma(z).exp();
            let want = lg.exp();
            assert!((got - want).norm() <= 1e-13 * want.norm(), "{z}: {got} vs {want}");
        }
    }

    #[test]
    fn recurrence_and_reflection() {
        for &z in &[c(0.2, 0.3), c(-2.7, 4.0), c(12.0, -30.0), c(1e-3, -1e-3)] {
            let lhs = gamma(z + 1.0);
            let rhs = z * gamma(z);
            assert!((lhs - rhs).norm() <= 1e-13 * lhs.norm());
        }
    }

    #[test]
    fn poles_and_reciprocal() {
        assert_eq!(recip_gamma(c(-3.0, 0.0)), c(0.0, 0.0));
        assert!(log_gamma(c(0.0, 0.0)).re.is_infinite());
        assert!((recip_gamma(c(4.0, 0.0)) - c(1.0 / 6.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pochhammer_paths() {
        assert_eq!(pochhammer(c(2.3, 1.0), 0), c(1.0, 0.0));
        assert!((pochhammer(c(1.0, 0.0), 6) - c(720.0, 0.0)).norm() < 1e-12);
        let i = c(0.0, 1.0);
        let direct = pochhammer(i, 3);
        assert!((direct - c(-3.0, 1.0)).norm() < 1e-14);
        let ratio = (log_gamma(i + 3.0) - log_gamma(i)).exp();
        assert!((direct - ratio).norm() <= 1e-13 * direct.norm());
    }

    #[test]
    fn harish_chandra_values() {
        assert!(harish_chandra_c(0.0, 2).is_none());
        assert_eq!(plancherel_density(0.0, 3), 0.0);
        // d = 2, lambda = 1
        let cval = harish_chandra_c(1.0, 2).unwrap();
        let expect = gamma(c(0.0, 1.0)).norm_sqr() / (PI * gamma(c(0.5, 1.0)).norm_sqr());
        assert!((cval.norm_sqr() - expect).abs() < 1e-12 * expect);
        // d = 3: |c|^{-2} = lambda^2
        for &l in &[1.0, 2.0, 4.0] {
            assert!((plancherel_density(l, 3) - l * l).abs() < 1e-11 * l * l);
        }
        for &l in &[0.3, 1.7, 5.0] {
            for d in 2..6 {
                let p = plancherel_density(l, d);
                assert!(p > 0.0);
                assert!((p - plancherel_density(-l, d)).abs() <= 1e-13 * p);
            }
        }
    }
}
