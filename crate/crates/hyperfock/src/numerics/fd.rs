use super::NumericsError;

/// Central-difference Jacobian of `map` at `point`; row i holds the partial
/// derivatives of output component i. `map` returns `None` where it is
/// undefined.
pub fn finite_difference_jacobian<F>(map: F, point: &[f64], h: f64) -> Result<Vec<Vec<f64>>, NumericsError>
where
    F: Fn(&[f64]) -> Option<Vec<f64>>,
{
    if !(h > 0.0) {
        return Err(NumericsError::InvalidArgument("step h must be positive".into()));
    }
    let n = point.len();
    let m = map(point).ok_or(NumericsError::SingularStencil)?.len();
    let mut jac = vec![vec![0.0; n]; m];
    let mut probe = point.to_vec();
    for j in 0..n {
        probe[j] = point[j] + h;
        let plus = map(&probe).ok_or(NumericsError::SingularStencil)?;
        probe[j] = point[j] - h;
        let minus = map(&probe).ok_or(NumericsError::SingularStencil)?;
        probe[j] = point[j];
        if plus.len() != m || minus.len() != m {
            return Err(NumericsError::InvalidArgument("map changed output dimension".into()));
        }
        for i in 0..m {
            jac[i][j] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    Ok(jac)
}
