use crate::error::{Error, Result};

/// Points whose squared-norm ratio `‖w‖²/D²` exceeds 1 by at most this much are treated as
/// lying on the sphere boundary.
pub const BOUNDARY_SLACK: f64 = 1e-9;

/// Lifts `w` from the radius-`radius` ball onto the unit sphere in one more dimension:
/// `π(w) = (w_1, …, w_d, D·√(1 − ‖w‖²/D²)) / D`.
pub fn project(w: &[f64], radius: f64) -> Result<Vec<f64>> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid("D", format!("radius must be positive, got {radius}")));
    }
    let sq: f64 = w.iter().map(|v| v * v).sum();
    let rest = 1.0 - sq / (radius * radius);
    if rest < -BOUNDARY_SLACK || !rest.is_finite() {
        return Err(Error::OutsideBall { norm: sq.sqrt(), radius });
    }
    let mut out: Vec<f64> = w.iter().map(|v| v / radius).collect();
    out.push(rest.max(0.0).sqrt());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pole_and_boundary() {
        assert_eq!(project(&[0.0, 0.0], 2.0).unwrap(), vec![0.0, 0.0, 1.0]);
        assert_eq!(project(&[2.0, 0.0], 2.0).unwrap(), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn interior_point() {
        let p = project(&[1.0, 1.0], 2.0).unwrap();
        assert_eq!(p[0], 0.5);
        assert_eq!(p[1], 0.5);
        assert!((p[2] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn boundary_rounding_is_clamped() {
        let r = 3f64.sqrt();
        let p = project(&[1.0, 1.0, 1.0], r).unwrap();
        assert_eq!(p[3], 0.0);
    }

    #[test]
    fn errors() {
        assert!(matches!(project(&[3.0], 2.0), Err(Error::OutsideBall { .. })));
        assert!(project(&[0.0], 0.0).is_err());
        assert!(project(&[0.0], -1.0).is_err());
    }
}
