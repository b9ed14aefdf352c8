//! Closed-form utility bounds. Logs are natural.

use crate::error::{Error, Result};

/// ObjDisc excess normalized loss that holds with probability `1 − β`:
/// `14 G D² √(2(d+1) ln(4/β) ln(1/δ)) / (n τ ε)`.
#[allow(clippy::too_many_arguments)]
pub fn bound_objdisc(
    lipschitz: f64,
    radius: f64,
    dim: usize,
    step: f64,
    epsilon: f64,
    delta: f64,
    beta: f64,
    n: usize,
) -> Result<f64> {
    check_common(epsilon, delta, beta, n)?;
    let inner = 2.0 * (dim as f64 + 1.0) * (4.0 / beta).ln() * (1.0 / delta).ln();
    Ok(14.0 * lipschitz * radius * radius * inner.max(0.0).sqrt() / (n as f64 * step * epsilon))
}

/// ObjSamp excess loss, `γ(A + D) + k√(BE) + α(C + 1)` with
///
/// - `A = 4 G D∞ (1 + ln(2/β)) / ε`
/// - `B = 250 G² d² D∞² (1 + ln(2/β)) / ε`
/// - `C = (1 + ln(2/β)) / (10 ε)`
/// - `D = √(ln(4/β) / 2)`
/// - `E = D₂ √(2d) / n`
///
/// `k` is 1, or 2 when `double_root` is set (`σB + E/σ = 2√(BE)` at `σ = √(E/B)`).
#[allow(clippy::too_many_arguments)]
pub fn bound_objsamp(
    dim: usize,
    n: usize,
    diameter_l2: f64,
    diameter_linf: f64,
    lipschitz: f64,
    epsilon: f64,
    delta: f64,
    beta: f64,
    alpha: f64,
    double_root: bool,
) -> Result<f64> {
    check_common(epsilon, delta, beta, n)?;
    let (d, nf) = (dim as f64, n as f64);
    let gamma = (epsilon / nf).sqrt() * d.powf(1.25) * diameter_l2.sqrt();
    if gamma > 1.0 {
        return Err(Error::GammaTooLarge { gamma });
    }
    let tail = 1.0 + (2.0 / beta).ln();
    let a = 4.0 * lipschitz * diameter_linf * tail / epsilon;
    let b = 250.0 * lipschitz * lipschitz * d * d * diameter_linf * diameter_linf * tail / epsilon;
    let c = tail / (10.0 * epsilon);
    let dd = ((4.0 / beta).ln() / 2.0).max(0.0).sqrt();
    let e = diameter_l2 * (2.0 * d).sqrt() / nf;
    let k = if double_root { 2.0 } else { 1.0 };
    Ok(gamma * (a + dd) + k * (b * e).sqrt() + alpha * (c + 1.0))
}

/// RSPM excess loss up to constants: `m √(m ln(2m/β) ln(1/δ)) / (ε n)`.
pub fn bound_rspm(m_sep: usize, epsilon: f64, delta: f64, beta: f64, n: usize) -> Result<f64> {
    check_common(epsilon, delta, beta, n)?;
    let m = m_sep as f64;
    let inner = m * (2.0 * m / beta).ln() * (1.0 / delta).ln();
    Ok(m * inner.max(0.0).sqrt() / (epsilon * n as f64))
}

fn check_common(epsilon: f64, delta: f64, beta: f64, n: usize) -> Result<()> {
    if !(epsilon > 0.0) {
        return Err(Error::invalid("epsilon", "must be positive"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid("delta", "must lie in (0, 1)"));
    }
    if !(beta > 0.0) {
        return Err(Error::invalid("beta", "must be positive"));
    }
    if n == 0 {
        return Err(Error::invalid("n", "must be positive"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn objdisc_examples() {
        let v = bound_objdisc(1.0, 1.0, 1, 1.0, 1.0, 1.0 / E, 4.0 / E, 14).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        let half = bound_objdisc(1.0, 1.0, 1, 1.0, 1.0, 1.0 / E, 4.0 / E, 28).unwrap();
        assert!((half - 1.0).abs() < 1e-12);
        assert!(bound_objdisc(1.0, 1.0, 3, 1.0, 1.0, 0.1, 4.0 - 1e-13, 10).unwrap() < 1e-5);
    }

    #[test]
    fn rspm_examples() {
        assert_eq!(bound_rspm(1, 1.0, 1.0 / E, 2.0, 10).unwrap(), 0.0);
        // ln(2m/β) = 1 with m = 4
        let v = bound_rspm(4, 0.5, 1.0 / E, 8.0 / E, 10).unwrap();
        assert!((v - 8.0 / 5.0).abs() < 1e-12);
        let v16 = bound_rspm(16, 0.5, 1.0 / E, 32.0 / E, 10).unwrap();
        assert!((v16 / v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn objsamp_vanishes_and_is_monotone() {
        let at = |d: usize, n: usize| bound_objsamp(d, n, 1.0, 1.0, 1.0, 1.0, 0.1, 0.05, 0.0, false).unwrap();
        assert!(at(1, 1 << 40) < 1e-4);
        for d in 1..5 {
            let mut prev = f64::INFINITY;
            for n in [1_000usize, 4_000, 16_000, 64_000, 256_000] {
                let v = at(d, n);
                assert!(v <= prev);
                prev = v;
                if d > 1 {
                    assert!(v >= at(d - 1, n));
                }
            }
        }
    }

    #[test]
    fn objsamp_root_factor() {
        let one = bound_objsamp(2, 10_000, 2.0, 1.0, 1.0, 1.0, 0.1, 0.05, 0.3, false).unwrap();
        let two = bound_objsamp(2, 10_000, 2.0, 1.0, 1.0, 1.0, 0.1, 0.05, 0.3, true).unwrap();
        let tail = 1.0 + (40.0f64).ln();
        let root = (250.0 * 4.0 * tail * 2.0 * 2.0 / 10_000.0f64).sqrt();
        assert!((two - one - root).abs() < 1e-12);
    }

    #[test]
    fn rspm_to_objdisc_ratio_tracks_d_sqrt_tau() {
        // τ-grid of [−1, 1]^d cut to the unit ball, separator of size 2(d − 1)/τ
        let mut ratios = Vec::new();
        for d in [2usize, 4, 8, 16, 32] {
            for tau in [1.0, 0.5, 0.25, 0.125] {
                let m = (2.0 * (d as f64 - 1.0) / tau).ceil() as usize;
                let objdisc = bound_objdisc(1.0 / tau, 1.0, d, tau, 1.0, 1e-6, 0.05, 1000).unwrap();
                let rspm = bound_rspm(m, 1.0, 1e-6, 0.05, 1000).unwrap();
                ratios.push(rspm / objdisc / (d as f64 * tau.sqrt()));
            }
        }
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(0.0, f64::max);
        assert!(hi / lo < 10.0, "normalized ratios span {lo}..{hi}");
    }
}
