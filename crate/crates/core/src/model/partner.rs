//! The operator `R(q)`, the Lax partner `B = ½(L + R L)` and the closed form
//! of `[B, L]`.

use std::f64::consts::SQRT_2;

use super::lax::lax_matrix;
use super::rmatrix::RMatrix;
use super::{check_chamber, hamiltonian_dq, CouplingParams, PhasePoint};
use crate::error::{Error, Result};
use crate::liealg::{
    algebra_residual, max_abs, partial_trace_2, re, trace_product, AlgebraElement, BasisSet,
    CMatrix, Part, RootLabel, Sign, TensorElement, I, STRUCTURE_TOL,
};

/// `R(q) Y = 2 Σ coth α(q) ⟨X⁻_α, Y⟩ X⁺_α − 2 Σ sinh⁻¹ α(q) ⟨X⁻ⁱ_α, Y⟩ Z_α − Y*`.
pub fn r_apply(q: &[f64], y: &CMatrix, basis: &BasisSet) -> Result<AlgebraElement> {
    check_chamber(q)?;
    if y.nrows() != 2 * basis.n() || y.ncols() != 2 * basis.n() {
        return Err(Error::DimensionMismatch {
            expected: 2 * basis.n(),
            found: y.nrows(),
        });
    }
    let residual = algebra_residual(y);
    if residual > STRUCTURE_TOL * max_abs(y).max(1.0) {
        return Err(Error::NotInAlgebra { residual });
    }
    let mut out = -y.adjoint();
    for &root in basis.roots() {
        let alpha = root.value(q);
        let parts: &[Part] = match root {
            RootLabel::Double(_) => &[Part::Imag],
            _ => &[Part::Real, Part::Imag],
        };
        for &part in parts {
            let pairing = trace_product(basis.x(root, Sign::Minus, part), y).re;
            out += basis.x(root, Sign::Plus, part) * re(2.0 * pairing / alpha.tanh());
        }
        let pairing = trace_product(basis.x(root, Sign::Minus, Part::Imag), y).re;
        out -= basis.z(root) * re(2.0 * pairing / alpha.sinh());
    }
    Ok(AlgebraElement::new_unchecked(out))
}

/// `R Y = tr₂(r₁₂ (1 ⊗ Y))`.
pub fn r_apply_trace(r: &RMatrix, y: &CMatrix) -> Result<CMatrix> {
    let dim = r.tensor.factor_dim();
    if y.nrows() != dim || y.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: y.nrows(),
        });
    }
    let prod = r.tensor.matrix() * TensorElement::lift2(y).matrix();
    partial_trace_2(&TensorElement::from_matrix(r.tensor.n(), prod)?)
}

/// `B = [[S, T], [T, S]]`, anti-Hermitian and depending only on `q`.
#[derive(Debug, Clone)]
pub struct BMatrix {
    pub value: CMatrix,
    pub s: CMatrix,
    pub t: CMatrix,
}

/// Closed-form `S`, `T` blocks.
pub fn b_matrix(q: &[f64], c: &CouplingParams) -> Result<BMatrix> {
    check_chamber(q)?;
    let n = q.len();
    let mut s = CMatrix::zeros(n, n);
    let mut t = CMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            if a == b {
                let x = 2.0 * q[a];
                let sh2 = x.sinh().powi(2);
                t[(a, a)] = I * ((c.nu * x.cosh() + c.kappa) / sh2);
                let mut diag = (c.nu + c.kappa * x.cosh()) / sh2;
                for d in (0..n).filter(|&d| d != a) {
                    diag += c.mu
                        * (1.0 / (q[a] - q[d]).sinh().powi(2) + 1.0 / (q[a] + q[d]).sinh().powi(2));
                }
                s[(a, a)] = I * diag;
            } else {
                let sum = q[a] + q[b];
                let diff = q[a] - q[b];
                t[(a, b)] = I * (c.mu * sum.cosh() / sum.sinh().powi(2));
                s[(a, b)] = I * (-c.mu * diff.cosh() / diff.sinh().powi(2));
            }
        }
    }
    let mut value = CMatrix::zeros(2 * n, 2 * n);
    value.view_mut((0, 0), (n, n)).copy_from(&s);
    value.view_mut((n, n), (n, n)).copy_from(&s);
    value.view_mut((0, n), (n, n)).copy_from(&t);
    value.view_mut((n, 0), (n, n)).copy_from(&t);
    Ok(BMatrix { value, s, t })
}

/// `½ (L + R(q) L)` evaluated at the full phase point.
pub fn b_matrix_via_r(x: &PhasePoint, c: &CouplingParams, basis: &BasisSet) -> Result<CMatrix> {
    let l = lax_matrix(x, c).value;
    let rl = r_apply(x.q(), &l, basis)?;
    Ok((&l + rl.matrix()) * re(0.5))
}

/// Closed form of `[B, L]`: `X⁻ⁱ` terms weighted by momenta and `−√2 Σ ∂H/∂q_c D⁻_c`.
pub fn bl_commutator_closed(x: &PhasePoint, c: &CouplingParams, basis: &BasisSet) -> CMatrix {
    let (q, p) = (x.q(), x.p());
    let n = q.len();
    let mut out = CMatrix::zeros(2 * n, 2 * n);
    for a in 0..n {
        for b in (a + 1)..n {
            let d = q[a] - q[b];
            let s = q[a] + q[b];
            let wd = 2.0 * c.mu * (p[a] - p[b]) * d.cosh() / d.sinh().powi(2);
            let ws = 2.0 * c.mu * (p[a] + p[b]) * s.cosh() / s.sinh().powi(2);
            out += basis.x(RootLabel::Difference(a, b), Sign::Minus, Part::Imag) * re(wd);
            out += basis.x(RootLabel::Sum(a, b), Sign::Minus, Part::Imag) * re(ws);
        }
    }
    let grad = hamiltonian_dq(q, c);
    for k in 0..n {
        let y = 2.0 * q[k];
        let w = 2.0 * SQRT_2 * p[k] * (c.nu * y.cosh() + c.kappa) / y.sinh().powi(2);
        out += basis.x(RootLabel::Double(k), Sign::Minus, Part::Imag) * re(w);
        out -= basis.d_minus(k) * re(SQRT_2 * grad[k]);
    }
    out
}

/// Both sides of
/// `cosh x / sinh² x · 1/sinh y − cosh y / sinh² y · 1/sinh x = (sinh⁻² x − sinh⁻² y) / sinh(x + y)`.
pub fn hyperbolic_identity(x: f64, y: f64) -> Result<(f64, f64)> {
    if x == 0.0 || y == 0.0 || x + y == 0.0 {
        return Err(Error::Singular(format!("x = {x}, y = {y}")));
    }
    let (sx, sy) = (x.sinh(), y.sinh());
    let lhs = x.cosh() / (sx * sx) / sy - y.cosh() / (sy * sy) / sx;
    let rhs = (1.0 / (sx * sx) - 1.0 / (sy * sy)) / (x + y).sinh();
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{build_basis, commutator};
    use crate::model::{make_couplings, r_matrix_basis};

    #[test]
    fn r_on_m_is_identity() {
        let basis = build_basis(3).unwrap();
        let q = [1.5, 0.8, 0.2];
        let d = basis.d_plus(1);
        let out = r_apply(&q, d, &basis).unwrap();
        assert!(max_abs(&(out.matrix() - d)) < 1e-15);
    }

    #[test]
    fn r_on_hermitian_root_vector() {
        let basis = build_basis(2).unwrap();
        let q = [1.1, 0.35];
        for &root in basis.roots() {
            let x = basis.x(root, Sign::Minus, Part::Imag);
            let a = root.value(&q);
            let expected = basis.x(root, Sign::Plus, Part::Imag) * re(2.0 / a.tanh())
                - basis.z(root) * re(2.0 / a.sinh())
                - x;
            let out = r_apply(&q, x, &basis).unwrap();
            assert!(max_abs(&(out.matrix() - expected)) < 1e-14);
        }
    }

    #[test]
    fn r_routes_agree() {
        let basis = build_basis(3).unwrap();
        let c = make_couplings(1.2, 0.9, 0.4).unwrap();
        let x = PhasePoint::new(vec![1.9, 1.0, 0.3], vec![0.5, -0.2, 0.9]).unwrap();
        let l = lax_matrix(&x, &c).value;
        let r = r_matrix_basis(x.q(), &basis).unwrap();
        let a = r_apply(x.q(), &l, &basis).unwrap();
        let b = r_apply_trace(&r, &l).unwrap();
        assert!(max_abs(&(a.matrix() - b)) < 1e-12);
        assert!(algebra_residual(a.matrix()) < 1e-12);
    }

    #[test]
    fn r_rejects_non_algebra_input() {
        let basis = build_basis(1).unwrap();
        let y = CMatrix::identity(2, 2);
        assert!(matches!(
            r_apply(&[0.5], &y, &basis),
            Err(Error::NotInAlgebra { .. })
        ));
    }

    #[test]
    fn b_single_particle() {
        let c = make_couplings(1.0, 1.3, 0.4).unwrap();
        let q = 0.6f64;
        let b = b_matrix(&[q], &c).unwrap();
        let sh2 = (2.0 * q).sinh().powi(2);
        let ch = (2.0 * q).cosh();
        assert!((b.s[(0, 0)] - I * ((1.3 + 0.4 * ch) / sh2)).norm() < 1e-15);
        assert!((b.t[(0, 0)] - I * ((1.3 * ch + 0.4) / sh2)).norm() < 1e-15);
    }

    #[test]
    fn b_routes_agree_and_are_momentum_free() {
        let basis = build_basis(3).unwrap();
        let c = make_couplings(-0.7, 1.6, -0.5).unwrap();
        let q = vec![2.2, 1.3, 0.45];
        let closed = b_matrix(&q, &c).unwrap();
        let x1 = PhasePoint::new(q.clone(), vec![1.0; 3]).unwrap();
        let x0 = PhasePoint::new(q, vec![0.0; 3]).unwrap();
        let b1 = b_matrix_via_r(&x1, &c, &basis).unwrap();
        let b0 = b_matrix_via_r(&x0, &c, &basis).unwrap();
        assert!(max_abs(&(&b1 - &b0)) < 1e-12);
        assert!(max_abs(&(&b1 - &closed.value)) < 1e-12);
        assert!(max_abs(&(closed.value.adjoint() + &closed.value)) < 1e-15);
    }

    #[test]
    fn closed_commutator_matches_direct() {
        let basis = build_basis(3).unwrap();
        let c = make_couplings(1.1, 0.8, 0.3).unwrap();
        let x = PhasePoint::new(vec![1.7, 0.9, 0.35], vec![-0.4, 0.6, 1.1]).unwrap();
        let b = b_matrix(x.q(), &c).unwrap().value;
        let l = lax_matrix(&x, &c).value;
        let direct = commutator(&b, &l);
        let closed = bl_commutator_closed(&x, &c, &basis);
        assert!(max_abs(&(direct - closed)) < 1e-10);
    }

    #[test]
    fn closed_commutator_at_rest_is_force_only() {
        let basis = build_basis(2).unwrap();
        let c = make_couplings(1.0, 1.2, 0.7).unwrap();
        let x = PhasePoint::new(vec![1.4, 0.5], vec![0.0, 0.0]).unwrap();
        let closed = bl_commutator_closed(&x, &c, &basis);
        let grad = hamiltonian_dq(x.q(), &c);
        let expected =
            (basis.d_minus(0) * re(grad[0]) + basis.d_minus(1) * re(grad[1])) * re(-SQRT_2);
        assert!(max_abs(&(closed - expected)) < 1e-15);
    }

    #[test]
    fn hyperbolic_identity_values() {
        let (l, r) = hyperbolic_identity(0.8, 0.8).unwrap();
        assert_eq!((l, r), (0.0, 0.0));
        let (l, r) = hyperbolic_identity(0.7, 0.3).unwrap();
        assert!((l - r).abs() < 1e-14);
        let (l, r) = hyperbolic_identity(2.0, -0.5).unwrap();
        assert!((l - r).abs() < 1e-14);
        assert!(hyperbolic_identity(1.0, -1.0).is_err());
        assert!(hyperbolic_identity(0.0, 1.0).is_err());
    }
}
