//! Orthonormal basis of u(n,n) adapted to the refined decomposition.
//!
//! Elements are enumerated in a fixed canonical order: every `D⁺_c`, every
//! `D⁻_c`, then the roots (differences by `(a, b)`, sums by `(a, b)`, doubles
//! by `c`), each root contributing `X⁺ʳ, X⁺ⁱ, X⁻ʳ, X⁻ⁱ` where defined.
//! Long roots `2e_c` carry only the imaginary part.

use std::collections::HashMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use super::{elementary, re, tensor::TensorElement, CMatrix, I};
use crate::error::{Error, Result};

/// Positive root of type `C_n`. Indices are zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootLabel {
    /// `e_a − e_b`, `a < b`.
    Difference(usize, usize),
    /// `e_a + e_b`, `a < b`.
    Sum(usize, usize),
    /// `2 e_c`.
    Double(usize),
}

impl RootLabel {
    /// Evaluates the root on `q`.
    pub fn value(&self, q: &[f64]) -> f64 {
        match *self {
            RootLabel::Difference(a, b) => q[a] - q[b],
            RootLabel::Sum(a, b) => q[a] + q[b],
            RootLabel::Double(c) => 2.0 * q[c],
        }
    }

    pub fn is_valid(&self, n: usize) -> bool {
        match *self {
            RootLabel::Difference(a, b) | RootLabel::Sum(a, b) => a < b && b < n,
            RootLabel::Double(c) => c < n,
        }
    }

    /// All positive roots in canonical order.
    pub fn positive_roots(n: usize) -> Vec<RootLabel> {
        let mut roots = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in (a + 1)..n {
                roots.push(RootLabel::Difference(a, b));
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                roots.push(RootLabel::Sum(a, b));
            }
        }
        roots.extend((0..n).map(RootLabel::Double));
        roots
    }

    /// Real and imaginary parts for short roots; long roots carry only `Imag`.
    pub fn parts(&self) -> &'static [Part] {
        match self {
            RootLabel::Double(_) => &[Part::Imag],
            _ => &[Part::Real, Part::Imag],
        }
    }
}

impl fmt::Display for RootLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RootLabel::Difference(a, b) => write!(f, "e{}-e{}", a + 1, b + 1),
            RootLabel::Sum(a, b) => write!(f, "e{}+e{}", a + 1, b + 1),
            RootLabel::Double(c) => write!(f, "2e{}", c + 1),
        }
    }
}

/// Evaluates `α(q)`.
pub fn root_value(alpha: RootLabel, q: &[f64]) -> f64 {
    alpha.value(q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    /// Anti-Hermitian, spans `𝔪^⊥`.
    Plus,
    /// Hermitian, spans `𝔞^⊥`.
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    Real,
    Imag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    DPlus(usize),
    DMinus(usize),
    X(RootLabel, Sign, Part),
}

impl BasisLabel {
    /// `+1` for Hermitian elements, `−1` for anti-Hermitian ones; equals
    /// `⟨T, T⟩` and therefore the sign relating an element to its dual.
    pub fn norm_sign(&self) -> f64 {
        match self {
            BasisLabel::DPlus(_) | BasisLabel::X(_, Sign::Plus, _) => -1.0,
            BasisLabel::DMinus(_) | BasisLabel::X(_, Sign::Minus, _) => 1.0,
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::DPlus(c) => write!(f, "D+[{}]", c + 1),
            BasisLabel::DMinus(c) => write!(f, "D-[{}]", c + 1),
            BasisLabel::X(root, sign, part) => {
                let s = if *sign == Sign::Plus { '+' } else { '-' };
                let p = if *part == Part::Real { 'r' } else { 'i' };
                write!(f, "X{s}{p}[{root}]")
            }
        }
    }
}

/// The full basis together with duals and the `Z_α ∈ 𝔪` elements.
#[derive(Debug, Clone)]
pub struct BasisSet {
    n: usize,
    labels: Vec<BasisLabel>,
    elements: Vec<CMatrix>,
    duals: Vec<CMatrix>,
    index: HashMap<BasisLabel, usize>,
    roots: Vec<RootLabel>,
    z: HashMap<RootLabel, CMatrix>,
}

impl BasisSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn roots(&self) -> &[RootLabel] {
        &self.roots
    }

    /// Position of a label in the canonical order.
    pub fn position(&self, label: BasisLabel) -> Option<usize> {
        self.index.get(&label).copied()
    }

    pub fn element(&self, idx: usize) -> &CMatrix {
        &self.elements[idx]
    }

    pub fn dual(&self, idx: usize) -> &CMatrix {
        &self.duals[idx]
    }

    pub fn get(&self, label: BasisLabel) -> &CMatrix {
        &self.elements[self.index[&label]]
    }

    pub fn d_plus(&self, c: usize) -> &CMatrix {
        self.get(BasisLabel::DPlus(c))
    }

    pub fn d_minus(&self, c: usize) -> &CMatrix {
        self.get(BasisLabel::DMinus(c))
    }

    pub fn x(&self, root: RootLabel, sign: Sign, part: Part) -> &CMatrix {
        self.get(BasisLabel::X(root, sign, part))
    }

    pub fn z(&self, root: RootLabel) -> &CMatrix {
        &self.z[&root]
    }

    pub fn iter(&self) -> impl Iterator<Item = (BasisLabel, &CMatrix)> {
        self.labels.iter().copied().zip(self.elements.iter())
    }

    /// Coordinates `⟨T^A, Y⟩` of `Y` in canonical order.
    pub fn coordinates(&self, y: &CMatrix) -> Vec<f64> {
        self.duals
            .iter()
            .map(|d| super::trace_product(d, y).re)
            .collect()
    }

    /// `Σ_A coeff_A T_A`.
    pub fn expand(&self, coeffs: &[f64]) -> CMatrix {
        let dim = 2 * self.n;
        let mut out = CMatrix::zeros(dim, dim);
        for (c, t) in coeffs.iter().zip(&self.elements) {
            if *c != 0.0 {
                out += t * re(*c);
            }
        }
        out
    }

    /// Gram matrix `⟨T_A, T_B⟩`.
    pub fn gram(&self) -> Vec<Vec<f64>> {
        self.elements
            .iter()
            .map(|a| {
                self.elements
                    .iter()
                    .map(|b| super::trace_product(a, b).re)
                    .collect()
            })
            .collect()
    }
}

/// Builds all `4n²` basis elements, their duals and the `Z_α`.
pub fn build_basis(n: usize) -> Result<BasisSet> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let dim = 2 * n;
    let e = |k: usize, l: usize| elementary(dim, k, l);
    let s = FRAC_1_SQRT_2;

    let mut labels = Vec::with_capacity(4 * n * n);
    let mut elements = Vec::with_capacity(4 * n * n);

    let d_plus: Vec<CMatrix> = (0..n)
        .map(|c| (e(c, c) + e(n + c, n + c)) * (I * s))
        .collect();
    for (c, d) in d_plus.iter().enumerate() {
        labels.push(BasisLabel::DPlus(c));
        elements.push(d.clone());
    }
    for c in 0..n {
        labels.push(BasisLabel::DMinus(c));
        elements.push((e(c, c) - e(n + c, n + c)) * re(s));
    }

    let roots = RootLabel::positive_roots(n);
    for &root in &roots {
        for sign in [Sign::Plus, Sign::Minus] {
            for &part in root.parts() {
                labels.push(BasisLabel::X(root, sign, part));
                elements.push(root_vector(dim, n, root, sign, part));
            }
        }
    }

    let duals = labels
        .iter()
        .zip(&elements)
        .map(|(l, t)| t * re(l.norm_sign()))
        .collect();
    let index = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let z = roots
        .iter()
        .map(|&root| {
            let zm = match root {
                RootLabel::Difference(a, b) | RootLabel::Sum(a, b) => {
                    (&d_plus[a] + &d_plus[b]) * re(s)
                }
                RootLabel::Double(c) => d_plus[c].clone(),
            };
            (root, zm)
        })
        .collect();

    Ok(BasisSet {
        n,
        labels,
        elements,
        duals,
        index,
        roots,
        z,
    })
}

fn root_vector(dim: usize, n: usize, root: RootLabel, sign: Sign, part: Part) -> CMatrix {
    let e = |k: usize, l: usize| elementary(dim, k, l);
    let pm = if sign == Sign::Plus { 1.0 } else { -1.0 };
    match (root, part) {
        (RootLabel::Double(c), _) => (e(c, n + c) + e(n + c, c) * re(pm)) * (-I * FRAC_1_SQRT_2),
        (RootLabel::Difference(a, b), Part::Real) => {
            (e(a, b) - e(b, a) * re(pm) + e(n + a, n + b) * re(pm) - e(n + b, n + a)) * re(0.5)
        }
        (RootLabel::Sum(a, b), Part::Real) => {
            (e(a, n + b) - e(b, n + a) + e(n + a, b) * re(pm) - e(n + b, a) * re(pm)) * re(-0.5)
        }
        (RootLabel::Difference(a, b), Part::Imag) => {
            (e(a, b) + e(b, a) * re(pm) + e(n + a, n + b) * re(pm) + e(n + b, n + a))
                * Complex64::new(0.0, 0.5)
        }
        (RootLabel::Sum(a, b), Part::Imag) => {
            (e(a, n + b) + e(b, n + a) + e(n + a, b) * re(pm) + e(n + b, a) * re(pm))
                * Complex64::new(0.0, -0.5)
        }
    }
}

/// Quadratic Casimir `Ω₁₂ = Σ_A T_A ⊗ T^A`.
pub fn casimir(n: usize) -> Result<TensorElement> {
    let basis = build_basis(n)?;
    let dim = 2 * n;
    let mut acc = TensorElement::zeros(n);
    for idx in 0..basis.len() {
        acc.add_kron(basis.element(idx), basis.dual(idx), 1.0);
    }
    debug_assert_eq!(acc.matrix().nrows(), dim * dim);
    Ok(acc)
}
