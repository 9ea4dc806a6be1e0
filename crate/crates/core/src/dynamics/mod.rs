//! Time evolution of the Sutherland system.
//!
//! Two independent routes: direct integration of Hamilton's equations, and
//! the projection method, where the free flow `y(t) = e^{Q₀} e^{t L₀}` on the
//! group is pushed down to positions through the KAK decomposition.

mod integrate;
mod kak;
mod projection;

pub use integrate::{hamilton_rhs, integrate, integrate_at, IntegratorConfig, Method, Trajectory};
pub use kak::{kak_decompose, KakFactors, COLLISION_TOL};
pub use projection::{projection_solve, projection_velocity_check, VelocityCheck};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::liealg::{commutator, max_abs, re, CMatrix};
use crate::model::{b_matrix, lax_matrix, CouplingParams};

/// Central-difference Lax residual `‖(L_{k+1} − L_{k−1})/(t_{k+1} − t_{k−1}) − [B, L_k]‖_max`
/// at each interior sample; endpoints are `None`.
pub fn lax_residual_series(traj: &Trajectory, c: &CouplingParams) -> Result<Vec<Option<f64>>> {
    let len = traj.len();
    if len < 3 {
        return Err(Error::TooFewSamples(len));
    }
    let laxes: Vec<CMatrix> = traj.states.iter().map(|x| lax_matrix(x, c).value).collect();
    let mut out = vec![None; len];
    for k in 1..len - 1 {
        let h = traj.times[k + 1] - traj.times[k - 1];
        let dl = (&laxes[k + 1] - &laxes[k - 1]) * re(1.0 / h);
        let b = b_matrix(traj.states[k].q(), c)?.value;
        out[k] = Some(max_abs(&(dl - commutator(&b, &laxes[k]))));
    }
    Ok(out)
}

/// Largest interior Lax residual along the trajectory.
pub fn lax_residual(traj: &Trajectory, c: &CouplingParams) -> Result<f64> {
    Ok(lax_residual_series(traj, c)?
        .into_iter()
        .flatten()
        .fold(0.0, f64::max))
}

/// Five-point stencil `(−L_{k+2} + 8L_{k+1} − 8L_{k−1} + L_{k−2}) / 12h` in
/// place of the central quotient. Samples must be evenly spaced.
pub fn lax_residual_five_point(traj: &Trajectory, c: &CouplingParams) -> Result<f64> {
    let len = traj.len();
    if len < 5 {
        return Err(Error::TooFewSamples(len));
    }
    let h = traj.times[1] - traj.times[0];
    if traj
        .times
        .windows(2)
        .any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h)
    {
        return Err(Error::InvalidConfig(
            "five-point residual needs evenly spaced samples".into(),
        ));
    }
    let laxes: Vec<CMatrix> = traj.states.iter().map(|x| lax_matrix(x, c).value).collect();
    let mut worst = 0.0f64;
    for k in 2..len - 2 {
        let dl = (&laxes[k - 2] - &laxes[k + 2] + (&laxes[k + 1] - &laxes[k - 1]) * re(8.0))
            * re(1.0 / (12.0 * h));
        let b = b_matrix(traj.states[k].q(), c)?.value;
        worst = worst.max(max_abs(&(dl - commutator(&b, &laxes[k]))));
    }
    Ok(worst)
}

/// Eigenvalues of a general complex matrix, sorted by real then imaginary part.
pub fn spectrum(m: &CMatrix) -> Result<Vec<Complex64>> {
    let schur = m
        .clone()
        .try_schur(f64::EPSILON, 10_000)
        .ok_or(Error::EigenFailure)?;
    let mut eig: Vec<Complex64> = schur
        .eigenvalues()
        .ok_or(Error::EigenFailure)?
        .iter()
        .copied()
        .collect();
    eig.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(eig)
}

/// Largest distance between paired eigenvalues. Pairs are formed greedily by
/// closeness, so nearly equal real parts cannot swap partners.
pub fn spectrum_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|u, v| u.0.total_cmp(&v.0).then(u.1.cmp(&v.1)).then(u.2.cmp(&v.2)));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut worst = 0.0f64;
    for (d, i, j) in pairs {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            worst = worst.max(d);
        }
    }
    worst
}

/// Spectral drift of `L` relative to the first sample, one value per sample.
pub fn spectral_drift_series(traj: &Trajectory, c: &CouplingParams) -> Result<Vec<f64>> {
    let Some(first) = traj.states.first() else {
        return Ok(Vec::new());
    };
    let reference = spectrum(&lax_matrix(first, c).value)?;
    traj.states
        .iter()
        .map(|x| {
            Ok(spectrum_distance(
                &reference,
                &spectrum(&lax_matrix(x, c).value)?,
            ))
        })
        .collect()
}

/// `max_t ‖spec L(t) − spec L(0)‖_∞`.
pub fn spectral_drift(traj: &Trajectory, c: &CouplingParams) -> Result<f64> {
    Ok(spectral_drift_series(traj, c)?
        .into_iter()
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::build_basis;
    use crate::model::{bl_commutator_closed, make_couplings, PhasePoint};

    fn rk4(dt: f64, t_end: f64, stride: usize) -> IntegratorConfig {
        IntegratorConfig {
            method: Method::Rk4,
            dt,
            rtol: 1e-10,
            atol: 1e-12,
            t_end,
            sample_stride: stride,
        }
    }

    #[test]
    fn spectrum_distance_pairs_by_proximity() {
        let a = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 1e-3)];
        let b = [Complex64::new(1.0, 1e-3), Complex64::new(1.0, 0.0)];
        assert_eq!(spectrum_distance(&a, &b), 0.0);
    }

    #[test]
    fn lax_equation_along_solution() {
        let c = make_couplings(1.0, 1.2, 0.7).unwrap();
        let x0 = PhasePoint::new(vec![1.6, 0.7], vec![0.3, -0.4]).unwrap();
        let traj = integrate(&x0, &c, &rk4(1e-3, 0.5, 1)).unwrap();
        assert!(lax_residual(&traj, &c).unwrap() < 1e-5);
        assert!(spectral_drift(&traj, &c).unwrap() < 1e-8);
        let traces: Vec<f64> = traj
            .states
            .iter()
            .map(|x| lax_matrix(x, &c).value.trace().norm())
            .collect();
        assert!(traces.iter().all(|t| *t < 1e-14));
    }

    #[test]
    fn five_point_residual_is_fourth_order() {
        let c = make_couplings(0.7, 1.0, -0.5).unwrap();
        let x0 = PhasePoint::new(vec![2.34, 1.1], vec![0.4, -0.3]).unwrap();
        let coarse = integrate(&x0, &c, &rk4(4e-3, 1.0, 1)).unwrap();
        let fine = integrate(&x0, &c, &rk4(2e-3, 1.0, 1)).unwrap();
        let (a, b) = (
            lax_residual_five_point(&coarse, &c).unwrap(),
            lax_residual_five_point(&fine, &c).unwrap(),
        );
        assert!(b < lax_residual(&fine, &c).unwrap() * 1e-2);
        assert!(a / b > 12.0 && a / b < 20.0, "ratio {}", a / b);
        let mut uneven = fine.clone();
        uneven.times[3] += 1e-4;
        assert!(lax_residual_five_point(&uneven, &c).is_err());
    }

    #[test]
    fn perturbed_curve_violates_lax_equation() {
        let c = make_couplings(1.0, 1.2, 0.7).unwrap();
        let x0 = PhasePoint::new(vec![1.6, 0.7], vec![0.8, -0.5]).unwrap();
        let mut traj = integrate(&x0, &c, &rk4(1e-3, 0.5, 1)).unwrap();
        traj.states = traj
            .states
            .iter()
            .map(|x| x.with_p(x.p().iter().map(|v| v * 1.01).collect()).unwrap())
            .collect();
        assert!(lax_residual(&traj, &c).unwrap() > 1e-3);
    }

    #[test]
    fn constant_curve_residual_is_commutator_norm() {
        let c = make_couplings(1.0, 1.2, 0.7).unwrap();
        let x = PhasePoint::new(vec![1.2, 0.4], vec![0.0, 0.0]).unwrap();
        let traj = Trajectory {
            times: vec![0.0, 0.1, 0.2],
            states: vec![x.clone(); 3],
            energy: vec![0.0; 3],
        };
        let basis = build_basis(2).unwrap();
        let expected = max_abs(&bl_commutator_closed(&x, &c, &basis));
        let got = lax_residual(&traj, &c).unwrap();
        assert!((got - expected).abs() < 1e-12 * expected);
        assert!(lax_residual_series(
            &Trajectory {
                times: vec![0.0, 1.0],
                states: vec![x.clone(); 2],
                energy: vec![0.0; 2]
            },
            &c
        )
        .is_err());
    }

    #[test]
    fn rk4_drift_converges_at_fourth_order() {
        let c = make_couplings(1.0, 1.2, 0.7).unwrap();
        let x0 = PhasePoint::new(vec![1.3, 0.5], vec![0.9, -0.6]).unwrap();
        let coarse = integrate(&x0, &c, &rk4(0.02, 2.0, 1)).unwrap();
        let fine = integrate(&x0, &c, &rk4(0.01, 2.0, 1)).unwrap();
        let d1 = spectral_drift(&coarse, &c).unwrap();
        let d2 = spectral_drift(&fine, &c).unwrap();
        let ratio = d1 / d2;
        assert!(ratio > 10.0 && ratio < 24.0, "ratio {ratio}");
    }
}
