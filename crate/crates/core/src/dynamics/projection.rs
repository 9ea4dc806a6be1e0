use rayon::prelude::*;

use super::kak::{exp_q, kak_decompose};
use super::Trajectory;
use crate::error::{Error, Result};
use crate::liealg::CMatrix;
use crate::model::{hamiltonian, lax_matrix, CouplingParams, PhasePoint};

/// Solves the flow by projecting `y(t) = e^{Q₀} e^{t L₀}`.
///
/// Positions are the KAK positions of `y(t)`; momenta are the diagonal of the
/// upper-left block of `k_R(t)⁻¹ L₀ k_R(t)`. The normalization `e^{t L₀}` (rather
/// than `e^{t L₀ / 2}`) gives `q̇(0) = p₀`, see [`projection_velocity_check`].
pub fn projection_solve(x0: &PhasePoint, c: &CouplingParams, times: &[f64]) -> Result<Trajectory> {
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || times.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(Error::InvalidConfig(
            "projection times must be nonnegative and strictly increasing".into(),
        ));
    }
    let l0 = lax_matrix(x0, c).value;
    let e0 = exp_q(x0.q());
    let states = times
        .par_iter()
        .map(|&t| project_at(x0, &l0, &e0, t))
        .collect::<Result<Vec<_>>>()?;
    let energy = states.iter().map(|x| hamiltonian(x, c)).collect();
    Ok(Trajectory {
        times: times.to_vec(),
        states,
        energy,
    })
}

fn project_at(x0: &PhasePoint, l0: &CMatrix, e0: &CMatrix, t: f64) -> Result<PhasePoint> {
    if t == 0.0 {
        return Ok(x0.clone());
    }
    let n = x0.n();
    let y = e0 * (l0 * num_complex::Complex64::new(t, 0.0)).exp();
    let kak = kak_decompose(&y).map_err(|e| match e {
        Error::EigenvalueCollision { detail, .. } => Error::EigenvalueCollision { t, detail },
        other => other,
    })?;
    let lt = kak.k_right.adjoint() * l0 * &kak.k_right;
    let p = (0..n).map(|k| lt[(k, k)].re).collect();
    PhasePoint::new(kak.q, p).map_err(|e| Error::EigenvalueCollision {
        t,
        detail: e.to_string(),
    })
}

/// Short-time oracle for the time normalization of the projection.
#[derive(Debug, Clone)]
pub struct VelocityCheck {
    /// Richardson-extrapolated `q̇(0)` from symmetric quotients at `h = 1e-3, 1e-4`.
    pub velocity: Vec<f64>,
    /// `max_c |q̇_c(0) − p_c|`.
    pub max_error: f64,
}

/// Estimates `q̇(0)` from the projected curve and compares it with `p₀`.
///
/// Uses `(q(h) − q(−h)) / 2h`; the free flow runs backwards just as well, and
/// the one-sided quotient carries an `O(h)` force term that swamps `1e-6` near
/// walls even after extrapolation.
pub fn projection_velocity_check(x0: &PhasePoint, c: &CouplingParams) -> Result<VelocityCheck> {
    const H_COARSE: f64 = 1e-3;
    const H_FINE: f64 = 1e-4;
    let l0 = lax_matrix(x0, c).value;
    let e0 = exp_q(x0.q());
    let quotient = |h: f64| -> Result<Vec<f64>> {
        let fwd = project_at(x0, &l0, &e0, h)?;
        let bwd = project_at(x0, &l0, &e0, -h)?;
        Ok(fwd
            .q()
            .iter()
            .zip(bwd.q())
            .map(|(a, b)| (a - b) / (2.0 * h))
            .collect())
    };
    let fine = quotient(H_FINE)?;
    let coarse = quotient(H_COARSE)?;
    let ratio = (H_COARSE / H_FINE).powi(2);
    let velocity: Vec<f64> = fine
        .iter()
        .zip(&coarse)
        .map(|(f, g)| (ratio * f - g) / (ratio - 1.0))
        .collect();
    let max_error = velocity
        .iter()
        .zip(x0.p())
        .map(|(v, p)| (v - p).abs())
        .fold(0.0, f64::max);
    Ok(VelocityCheck {
        velocity,
        max_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::integrate_at;
    use crate::model::make_couplings;

    #[test]
    fn zero_time_is_identity() {
        let c = make_couplings(1.0, 1.2, 0.7).unwrap();
        let x0 = PhasePoint::new(vec![1.2, 0.5], vec![0.3, -0.2]).unwrap();
        let traj = projection_solve(&x0, &c, &[0.0]).unwrap();
        assert_eq!(traj.states[0], x0);
    }

    #[test]
    fn short_time_velocity_is_momentum() {
        let c = make_couplings(0.9, 1.4, 0.5).unwrap();
        let x0 = PhasePoint::new(vec![1.8, 1.0, 0.4], vec![0.6, -0.3, 0.2]).unwrap();
        let check = projection_velocity_check(&x0, &c).unwrap();
        assert!(check.max_error < 1e-6, "{}", check.max_error);
    }

    #[test]
    fn short_time_check_near_a_wall() {
        let c = make_couplings(-1.9, -1.2, 0.74).unwrap();
        let x0 = PhasePoint::new(vec![1.2, 0.9, 0.3], vec![0.8, -0.5, 0.6]).unwrap();
        let check = projection_velocity_check(&x0, &c).unwrap();
        assert!(check.max_error < 1e-6, "{}", check.max_error);
    }

    #[test]
    fn agrees_with_ode() {
        let c = make_couplings(1.0, 1.2, 0.7).unwrap();
        let x0 = PhasePoint::new(vec![1.5, 0.6], vec![0.4, -0.3]).unwrap();
        let times: Vec<f64> = (0..=20).map(|k| k as f64 * 0.1).collect();
        let proj = projection_solve(&x0, &c, &times).unwrap();
        let ode = integrate_at(&x0, &c, &times, 1e-11, 1e-13).unwrap();
        for (a, b) in proj.states.iter().zip(&ode.states) {
            for k in 0..2 {
                assert!((a.q()[k] - b.q()[k]).abs() < 1e-6);
                assert!((a.p()[k] - b.p()[k]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn rejects_bad_times() {
        let c = make_couplings(1.0, 1.2, 0.7).unwrap();
        let x0 = PhasePoint::new(vec![1.0], vec![0.0]).unwrap();
        assert!(projection_solve(&x0, &c, &[0.5, 0.1]).is_err());
        assert!(projection_solve(&x0, &c, &[-0.1]).is_err());
    }
}
