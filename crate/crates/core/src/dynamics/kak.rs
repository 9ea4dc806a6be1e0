use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::liealg::{build_c, max_abs, re, CMatrix};

/// Minimal separation, in `q` units, between recovered positions and from zero.
pub const COLLISION_TOL: f64 = 1e-10;

const GROUP_TOL: f64 = 1e-9;

/// `y = k_L e^{Q} k_R⁻¹` with `k_L`, `k_R` unitary and commuting with `C`.
#[derive(Debug, Clone)]
pub struct KakFactors {
    /// Positions in descending order.
    pub q: Vec<f64>,
    pub k_left: CMatrix,
    pub k_right: CMatrix,
}

impl KakFactors {
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.q.len();
        let mut left = self.k_left.clone();
        for (col, &qc) in self.q.iter().enumerate() {
            left.column_mut(col).scale_mut(qc.exp());
            left.column_mut(n + col).scale_mut((-qc).exp());
        }
        left * self.k_right.adjoint()
    }
}

/// KAK factors of a regular element of `U(n, n)`.
///
/// Positions are `ln σ` for the `n` largest singular values `σ` of `y`. Each
/// left column `v_c` is paired with `C v_c`, the singular vector for `1/σ_c`;
/// the residual `M` gauge is fixed by making the first nonzero entry of every
/// `v_c` real and nonnegative. Then `k_R e_c = e^{−q_c} y* v_c` and
/// `k_R e_{n+c} = C k_R e_c`.
///
/// Working with `y` rather than `y y*` keeps the absolute error of the small
/// singular values at `ε‖y‖` instead of `ε‖y‖²`.
pub fn kak_decompose(y: &CMatrix) -> Result<KakFactors> {
    let dim = y.nrows();
    if dim == 0 || !dim.is_multiple_of(2) || y.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: y.ncols(),
        });
    }
    let n = dim / 2;
    let c = build_c(n)?;
    let residual = max_abs(&(y.adjoint() * &c * y - &c));
    if residual > GROUP_TOL * max_abs(y).powi(2).max(1.0) {
        return Err(Error::NotInGroup { residual });
    }

    let svd = y
        .clone()
        .try_svd(true, false, f64::EPSILON, 10_000)
        .ok_or(Error::EigenFailure)?;
    let u = svd.u.as_ref().ok_or(Error::EigenFailure)?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let q: Vec<f64> = order[..n]
        .iter()
        .map(|&i| svd.singular_values[i].ln())
        .collect();
    for w in q.windows(2) {
        if !(w[0] - w[1] > COLLISION_TOL) {
            return Err(Error::EigenvalueCollision {
                t: f64::NAN,
                detail: format!("positions {} and {} coincide", w[0], w[1]),
            });
        }
    }
    if !(q[n - 1] > COLLISION_TOL) {
        return Err(Error::EigenvalueCollision {
            t: f64::NAN,
            detail: format!("position {} at the boundary", q[n - 1]),
        });
    }

    let mut k_left = CMatrix::zeros(dim, dim);
    let mut k_right = CMatrix::zeros(dim, dim);
    for (col, &idx) in order[..n].iter().enumerate() {
        let mut v = u.column(idx).into_owned();
        let scale = v.norm();
        if let Some(z) = v.iter().find(|z| z.norm() > 1e-12 * scale).copied() {
            v *= z.conj() / z.norm();
        }
        let w = (y.adjoint() * &v) * re((-q[col]).exp());
        k_left.set_column(n + col, &(&c * &v));
        k_left.set_column(col, &v);
        k_right.set_column(n + col, &(&c * &w));
        k_right.set_column(col, &w);
    }
    Ok(KakFactors { q, k_left, k_right })
}

/// `exp Q(q)` as a diagonal matrix.
pub(crate) fn exp_q(q: &[f64]) -> CMatrix {
    let n = q.len();
    CMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if i != j {
            Complex64::default()
        } else if i < n {
            re(q[i].exp())
        } else {
            re((-q[i - n]).exp())
        }
    })
}
