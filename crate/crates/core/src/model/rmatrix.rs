//! The dynamical r-matrix `r₁₂(q)`, built independently from the adapted
//! basis and from elementary matrices.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::check_chamber;
use crate::error::Result;
use crate::liealg::{BasisLabel, BasisSet, Part, RootLabel, Sign, TensorElement};

#[derive(Debug, Clone)]
pub struct RMatrix {
    pub tensor: TensorElement,
    /// `r^{A,B}` keyed by canonical basis positions, when built from the basis.
    pub coefficients: Option<BTreeMap<(usize, usize), f64>>,
}

impl RMatrix {
    fn from_coefficients(basis: &BasisSet, coefficients: BTreeMap<(usize, usize), f64>) -> Self {
        let mut tensor = TensorElement::zeros(basis.n());
        for (&(a, b), &w) in &coefficients {
            tensor.add_kron(basis.element(a), basis.element(b), w);
        }
        Self {
            tensor,
            coefficients: Some(coefficients),
        }
    }

    /// Coefficient records `(T_A, T_B, r^{A,B})` in canonical order.
    pub fn labelled_coefficients(&self, basis: &BasisSet) -> Vec<(BasisLabel, BasisLabel, f64)> {
        self.coefficients
            .iter()
            .flatten()
            .map(|(&(a, b), &w)| (basis.labels()[a], basis.labels()[b], w))
            .collect()
    }
}

struct Coefficients<'a> {
    basis: &'a BasisSet,
    map: BTreeMap<(usize, usize), f64>,
}

impl<'a> Coefficients<'a> {
    fn new(basis: &'a BasisSet) -> Self {
        Self {
            basis,
            map: BTreeMap::new(),
        }
    }

    fn add(&mut self, a: BasisLabel, b: BasisLabel, w: f64) {
        let key = (
            self.basis.position(a).expect("label in basis"),
            self.basis.position(b).expect("label in basis"),
        );
        *self.map.entry(key).or_insert(0.0) += w;
    }

    fn dynamical(&mut self, q: &[f64]) {
        for &root in self.basis.roots() {
            let alpha = root.value(q);
            let parts: &[Part] = match root {
                RootLabel::Double(_) => &[Part::Imag],
                _ => &[Part::Real, Part::Imag],
            };
            for &part in parts {
                self.add(
                    BasisLabel::X(root, Sign::Plus, part),
                    BasisLabel::X(root, Sign::Minus, part),
                    2.0 / alpha.tanh(),
                );
            }
            // Z_α expanded over D⁺.
            let x = BasisLabel::X(root, Sign::Minus, Part::Imag);
            let w = -2.0 / alpha.sinh();
            match root {
                RootLabel::Double(c) => self.add(BasisLabel::DPlus(c), x, w),
                RootLabel::Difference(a, b) | RootLabel::Sum(a, b) => {
                    self.add(BasisLabel::DPlus(a), x, w * FRAC_1_SQRT_2);
                    self.add(BasisLabel::DPlus(b), x, w * FRAC_1_SQRT_2);
                }
            }
        }
    }

    fn constant(&mut self) {
        for &label in self.basis.labels() {
            self.add(label, label, -1.0);
        }
    }
}

/// `r₁₂(q)` from the adapted basis: the `coth` and `sinh⁻¹` sums plus the
/// constant `−Σ T_A ⊗ T_A`.
pub fn r_matrix_basis(q: &[f64], basis: &BasisSet) -> Result<RMatrix> {
    check_chamber(q)?;
    let mut c = Coefficients::new(basis);
    c.dynamical(q);
    c.constant();
    Ok(RMatrix::from_coefficients(basis, c.map))
}

/// Only the two `q`-dependent sums of [`r_matrix_basis`].
pub fn r_dynamical_part(q: &[f64], basis: &BasisSet) -> Result<RMatrix> {
    check_chamber(q)?;
    let mut c = Coefficients::new(basis);
    c.dynamical(q);
    Ok(RMatrix::from_coefficients(basis, c.map))
}

/// The constant remainder `−Σ_c (D⁺⊗D⁺ + D⁻⊗D⁻) − Σ_{α,ε} (X⁺⊗X⁺ + X⁻⊗X⁻)`.
pub fn r_constant_part(basis: &BasisSet) -> RMatrix {
    let mut c = Coefficients::new(basis);
    c.constant();
    RMatrix::from_coefficients(basis, c.map)
}

/// `r₁₂(q)` written directly in elementary matrices `e_{k,l} ⊗ e_{m,o}`.
pub fn r_matrix_standard(q: &[f64]) -> Result<RMatrix> {
    check_chamber(q)?;
    let n = q.len();
    let dim = 2 * n;
    let mut t = TensorElement::zeros(n).into_matrix();
    let mut put = |(k, l): (usize, usize), (m, o): (usize, usize), w: f64| {
        t[(k * dim + m, l * dim + o)] += Complex64::new(w, 0.0);
    };

    for a in 0..n {
        for b in 0..n {
            let (na, nb) = (n + a, n + b);
            if a != b {
                let ct = 1.0 / (q[a] - q[b]).tanh();
                // (e_ab + e_{n+a,n+b}) ⊗ (e_ba − e_{n+b,n+a})
                for first in [(a, b), (na, nb)] {
                    put(first, (b, a), ct);
                    put(first, (nb, na), -ct);
                }
                let w = 0.5 / (q[a] - q[b]).sinh();
                for d in [a, na, b, nb] {
                    put((d, d), (a, b), w);
                    put((d, d), (na, nb), -w);
                }
            }
            let ct = 1.0 / (q[a] + q[b]).tanh();
            // (e_{a,n+b} + e_{n+a,b}) ⊗ (e_{n+b,a} − e_{b,n+a})
            for first in [(a, nb), (na, b)] {
                put(first, (nb, a), ct);
                put(first, (b, na), -ct);
            }
            let w = -0.5 / (q[a] + q[b]).sinh();
            for d in [a, na, b, nb] {
                put((d, d), (a, nb), w);
                put((d, d), (na, b), -w);
            }
            put((a, b), (nb, na), 1.0);
            put((na, nb), (b, a), 1.0);
            put((a, nb), (b, na), 1.0);
            put((na, b), (nb, a), 1.0);
        }
    }
    Ok(RMatrix {
        tensor: TensorElement::from_matrix(n, t)?,
        coefficients: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{build_basis, max_abs};

    #[test]
    fn basis_and_standard_forms_agree() {
        for q in [vec![0.6], vec![1.3, 0.4], vec![2.1, 1.2, 0.5]] {
            let basis = build_basis(q.len()).unwrap();
            let rb = r_matrix_basis(&q, &basis).unwrap();
            let rs = r_matrix_standard(&q).unwrap();
            assert!(max_abs(&(rb.tensor.matrix() - rs.tensor.matrix())) < 1e-12);
        }
    }

    #[test]
    fn split_into_dynamical_and_constant() {
        let q = [1.7, 0.8, 0.25];
        let basis = build_basis(3).unwrap();
        let full = r_matrix_basis(&q, &basis).unwrap();
        let dynamical = r_dynamical_part(&q, &basis).unwrap();
        let constant = r_constant_part(&basis);
        let sum = &dynamical.tensor + &constant.tensor;
        assert!(max_abs(&(full.tensor.matrix() - sum.matrix())) < 1e-15);
    }

    #[test]
    fn constant_part_is_q_independent() {
        let basis = build_basis(2).unwrap();
        let r1 = r_matrix_standard(&[1.0, 0.3]).unwrap();
        let r2 = r_matrix_standard(&[2.2, 0.9]).unwrap();
        let diff = &r1.tensor - &r2.tensor;
        let diff_dyn = &r_dynamical_part(&[1.0, 0.3], &basis).unwrap().tensor
            - &r_dynamical_part(&[2.2, 0.9], &basis).unwrap().tensor;
        assert!(max_abs(&(diff.matrix() - diff_dyn.matrix())) < 1e-12);
    }

    #[test]
    fn n1_specialization() {
        let q = 0.45f64;
        let r = r_matrix_standard(&[q]).unwrap();
        let ct = 1.0 / (2.0 * q).tanh();
        let cs = 1.0 / (2.0 * q).sinh();
        // (e_{0,1} + e_{1,0}) ⊗ (e_{1,0} − e_{0,1}) coth 2q, plus the constant e_{0,1}⊗e_{0,1} term.
        assert!((r.tensor.get(0, 1, 1, 0).re - ct).abs() < 1e-15);
        assert!((r.tensor.get(0, 1, 0, 1).re - (1.0 - ct)).abs() < 1e-15);
        // −½ sinh⁻¹(2q)·2(e_00 + e_11) ⊗ (e_01 − e_10)
        assert!((r.tensor.get(0, 0, 0, 1).re + cs).abs() < 1e-15);
        assert!((r.tensor.get(1, 1, 1, 0).re - cs).abs() < 1e-15);
    }

    #[test]
    fn dynamical_part_blows_up_near_walls() {
        let basis = build_basis(2).unwrap();
        let far = r_dynamical_part(&[1.0, 0.5], &basis).unwrap();
        let near = r_dynamical_part(&[1.0, 1.0 - 5e-4], &basis).unwrap();
        let far_max = max_abs(far.tensor.matrix());
        let near_max = max_abs(near.tensor.matrix());
        assert!(near_max > 1e3 && near_max > 100.0 * far_max);
        assert!(r_matrix_standard(&[1.0, 1.0]).is_err());
    }
}
