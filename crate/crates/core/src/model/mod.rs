//! Couplings, phase-space points and the model-level matrices.

mod lax;
mod partner;
mod rmatrix;

pub use lax::{lax_matrix, lax_via_basis, LaxMatrix};
pub use partner::{
    b_matrix, b_matrix_via_r, bl_commutator_closed, hyperbolic_identity, r_apply, r_apply_trace,
    BMatrix,
};
pub use rmatrix::{r_constant_part, r_dynamical_part, r_matrix_basis, r_matrix_standard, RMatrix};

use crate::error::{Error, Result};

/// Smallest admissible distance to a chamber wall.
pub const MIN_CHAMBER_GAP: f64 = 1e-8;

/// Lax-side parameters `(μ, ν, κ)` and the Hamiltonian couplings they induce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    pub mu: f64,
    pub nu: f64,
    pub kappa: f64,
    /// `g² = μ²`
    pub g2: f64,
    /// `g₁² = νκ / 2`
    pub g1sq: f64,
    /// `g₂² = (ν − κ)² / 2`
    pub g2sq: f64,
}

impl CouplingParams {
    pub fn new(mu: f64, nu: f64, kappa: f64) -> Result<Self> {
        if !(mu.is_finite() && nu.is_finite() && kappa.is_finite()) {
            return Err(Error::InvalidCouplings("non-finite parameter".into()));
        }
        if mu == 0.0 {
            return Err(Error::InvalidCouplings("mu must be non-zero".into()));
        }
        if nu == 0.0 {
            return Err(Error::InvalidCouplings("nu must be non-zero".into()));
        }
        let g2 = mu * mu;
        let g1sq = 0.5 * nu * kappa;
        let g2sq = 0.5 * (nu - kappa) * (nu - kappa);
        if g1sq <= -0.25 * g2sq {
            return Err(Error::InvalidCouplings(format!(
                "g1^2 = {g1sq} must exceed -g2^2/4 = {}",
                -0.25 * g2sq
            )));
        }
        Ok(Self {
            mu,
            nu,
            kappa,
            g2,
            g1sq,
            g2sq,
        })
    }

    /// Same `(μ, ν)` with a different `κ`.
    pub fn with_kappa(&self, kappa: f64) -> Result<Self> {
        Self::new(self.mu, self.nu, kappa)
    }
}

/// Shorthand for [`CouplingParams::new`].
pub fn make_couplings(mu: f64, nu: f64, kappa: f64) -> Result<CouplingParams> {
    CouplingParams::new(mu, nu, kappa)
}

/// Rejects `q` unless `q₁ > … > q_n > 0` with every gap at least [`MIN_CHAMBER_GAP`].
pub fn check_chamber(q: &[f64]) -> Result<()> {
    if q.is_empty() {
        return Err(Error::ZeroDimension);
    }
    if q.iter().any(|x| !x.is_finite()) {
        return Err(Error::ChamberViolation("non-finite coordinate".into()));
    }
    let gap = chamber_gap(q);
    if gap < MIN_CHAMBER_GAP {
        return Err(Error::ChamberViolation(format!(
            "distance to wall {gap:e} below {MIN_CHAMBER_GAP:e}"
        )));
    }
    Ok(())
}

/// `min(q_n, min_c (q_c − q_{c+1}))`, the distance to the nearest wall.
pub fn chamber_gap(q: &[f64]) -> f64 {
    let last = q.last().copied().unwrap_or(f64::NAN);
    q.windows(2).map(|w| w[0] - w[1]).fold(last, f64::min)
}

/// A point `(q, p)` of the phase space with `q` in the open Weyl chamber.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    q: Vec<f64>,
    p: Vec<f64>,
}

impl PhasePoint {
    pub fn new(q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if q.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: q.len(),
                found: p.len(),
            });
        }
        check_chamber(&q)?;
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidConfig("non-finite momentum".into()));
        }
        Ok(Self { q, p })
    }

    /// Skips the chamber check; used for finite-difference stencils.
    pub(crate) fn new_unchecked(q: Vec<f64>, p: Vec<f64>) -> Self {
        Self { q, p }
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn with_p(&self, p: Vec<f64>) -> Result<Self> {
        Self::new(self.q.clone(), p)
    }
}

fn sinh_inv_sq(x: f64) -> f64 {
    let s = x.sinh();
    1.0 / (s * s)
}

/// `d/dx sinh⁻²(x) = −2 cosh x / sinh³ x`.
fn sinh_inv_sq_prime(x: f64) -> f64 {
    let s = x.sinh();
    -2.0 * x.cosh() / (s * s * s)
}

/// The Sutherland Hamiltonian.
pub fn hamiltonian(x: &PhasePoint, c: &CouplingParams) -> f64 {
    let (q, p) = (x.q(), x.p());
    let n = q.len();
    let kinetic = 0.5 * p.iter().map(|v| v * v).sum::<f64>();
    let one_body: f64 = q
        .iter()
        .map(|&qc| c.g1sq * sinh_inv_sq(qc) + c.g2sq * sinh_inv_sq(2.0 * qc))
        .sum();
    let mut pair = 0.0;
    for a in 0..n {
        for b in (a + 1)..n {
            pair += c.g2 * (sinh_inv_sq(q[a] - q[b]) + sinh_inv_sq(q[a] + q[b]));
        }
    }
    kinetic + one_body + pair
}

/// Analytic `∂H/∂q_c`.
pub fn hamiltonian_dq(q: &[f64], c: &CouplingParams) -> Vec<f64> {
    let n = q.len();
    (0..n)
        .map(|k| {
            let qk = q[k];
            let mut g = c.g1sq * sinh_inv_sq_prime(qk) + 2.0 * c.g2sq * sinh_inv_sq_prime(2.0 * qk);
            for d in (0..n).filter(|&d| d != k) {
                g += c.g2 * (sinh_inv_sq_prime(qk - q[d]) + sinh_inv_sq_prime(qk + q[d]));
            }
            g
        })
        .collect()
}
