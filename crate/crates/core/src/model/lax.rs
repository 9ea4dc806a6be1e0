use std::f64::consts::SQRT_2;

use num_complex::Complex64;

use super::{CouplingParams, PhasePoint};
use crate::liealg::{build_c, re, BasisSet, CMatrix, Part, RootLabel, Sign, I};

/// `L = L_𝔭 − κ i C` with its Hermitian and central pieces kept apart.
#[derive(Debug, Clone)]
pub struct LaxMatrix {
    pub value: CMatrix,
    /// `[[𝒜, ℬ], [−ℬ, −𝒜]]`
    pub hermitian_part: CMatrix,
    /// `−κ i C`
    pub central_part: CMatrix,
}

/// Diagonal of `ℬ`: `i (ν + κ cosh 2q) / sinh 2q`, imaginary part only.
pub(crate) fn boundary_coefficient(qc: f64, c: &CouplingParams) -> f64 {
    (c.nu + c.kappa * (2.0 * qc).cosh()) / (2.0 * qc).sinh()
}

fn central_part(n: usize, c: &CouplingParams) -> CMatrix {
    build_c(n).expect("n > 0 for a valid phase point") * (I * -c.kappa)
}

/// Entrywise construction from the `𝒜`, `ℬ` blocks.
pub fn lax_matrix(x: &PhasePoint, c: &CouplingParams) -> LaxMatrix {
    let (q, p) = (x.q(), x.p());
    let n = q.len();
    let mut lp = CMatrix::zeros(2 * n, 2 * n);
    for a in 0..n {
        for b in 0..n {
            let (av, bv) = if a == b {
                (re(p[a]), I * boundary_coefficient(q[a], c))
            } else {
                (
                    I * (-c.mu / (q[a] - q[b]).sinh()),
                    I * (c.mu / (q[a] + q[b]).sinh()),
                )
            };
            lp[(a, b)] = av;
            lp[(a, n + b)] = bv;
            lp[(n + a, b)] = -bv;
            lp[(n + a, n + b)] = -av;
        }
    }
    let central = central_part(n, c);
    LaxMatrix {
        value: &lp + &central,
        hermitian_part: lp,
        central_part: central,
    }
}

/// Assembles `L` from the orthonormal basis: `√2 Σ p_c D⁻_c`, the long-root
/// `X⁻ⁱ` terms, the short-root `X⁻ⁱ` terms and the central piece.
pub fn lax_via_basis(x: &PhasePoint, c: &CouplingParams, basis: &BasisSet) -> LaxMatrix {
    let (q, p) = (x.q(), x.p());
    let n = q.len();
    let mut lp = CMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        lp += basis.d_minus(k) * re(SQRT_2 * p[k]);
        lp -= basis.x(RootLabel::Double(k), Sign::Minus, Part::Imag)
            * re(SQRT_2 * boundary_coefficient(q[k], c));
    }
    for a in 0..n {
        for b in (a + 1)..n {
            let diff = basis.x(RootLabel::Difference(a, b), Sign::Minus, Part::Imag);
            let sum = basis.x(RootLabel::Sum(a, b), Sign::Minus, Part::Imag);
            lp -= diff * re(2.0 * c.mu / (q[a] - q[b]).sinh());
            lp -= sum * re(2.0 * c.mu / (q[a] + q[b]).sinh());
        }
    }
    let central = central_part(n, c);
    LaxMatrix {
        value: &lp + &central,
        hermitian_part: lp,
        central_part: central,
    }
}

impl LaxMatrix {
    pub fn trace(&self) -> Complex64 {
        self.value.trace()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{algebra_residual, build_basis, max_abs, refined_decompose};
    use crate::model::{hamiltonian, make_couplings};

    #[test]
    fn single_particle_entries() {
        let c = make_couplings(1.0, 1.0, 0.0).unwrap();
        let x = PhasePoint::new(vec![0.5], vec![0.3]).unwrap();
        let l = lax_matrix(&x, &c);
        let s = 1.0f64.sinh();
        let expected =
            CMatrix::from_row_slice(2, 2, &[re(0.3), I * (1.0 / s), -I * (1.0 / s), re(-0.3)]);
        assert!(max_abs(&(l.value - expected)) < 1e-15);
    }

    #[test]
    fn structure_of_l() {
        let c = make_couplings(0.8, -1.3, 0.6).unwrap();
        let x = PhasePoint::new(vec![2.0, 1.2, 0.3], vec![0.4, -1.0, 0.7]).unwrap();
        let l = lax_matrix(&x, &c);
        assert!(l.trace().norm() < 1e-15);
        assert!(algebra_residual(&l.value) < 1e-14);
        let h = &l.hermitian_part;
        assert!(max_abs(&(h.adjoint() - h)) == 0.0);
        let n = 3;
        let a = h.view((0, 0), (n, n)).into_owned();
        let b = h.view((0, n), (n, n)).into_owned();
        assert!(max_abs(&(a.adjoint() - &a)) == 0.0);
        assert!(max_abs(&(b.adjoint() + &b)) == 0.0);
        assert!(max_abs(&(b.transpose() - &b)) == 0.0);
    }

    #[test]
    fn basis_assembly_agrees_and_quarter_trace_is_energy() {
        let c = make_couplings(1.1, 0.7, -0.4).unwrap();
        let x = PhasePoint::new(vec![2.4, 1.5, 0.9, 0.2], vec![0.3, -0.8, 1.2, 0.05]).unwrap();
        let basis = build_basis(4).unwrap();
        let l1 = lax_matrix(&x, &c);
        let l2 = lax_via_basis(&x, &c, &basis);
        assert!(max_abs(&(&l1.value - &l2.value)) < 1e-12);
        let quarter = (&l1.value * &l1.value).trace().re / 4.0;
        assert!((quarter - hamiltonian(&x, &c)).abs() < 1e-10);
    }

    #[test]
    fn zero_momentum_has_no_d_minus_component() {
        let c = make_couplings(1.0, 1.5, 0.5).unwrap();
        let x = PhasePoint::new(vec![1.0, 0.4], vec![0.0, 0.0]).unwrap();
        let basis = build_basis(2).unwrap();
        let l = lax_via_basis(&x, &c, &basis);
        let parts = refined_decompose(&l.value).unwrap();
        assert!(max_abs(&parts.a) == 0.0);
    }
}
