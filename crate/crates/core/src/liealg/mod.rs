//! Dense complex matrices and the real form u(n,n).
//!
//! The algebra is realized as `N × N` complex matrices (`N = 2n`) satisfying
//! `Y* C + C Y = 0` with the hyperbolic form `C = [[0, 1], [1, 0]]`. The
//! invariant pairing is `⟨Y, Z⟩ = tr(Y Z)`, negative definite on the
//! anti-Hermitian part and positive definite on the Hermitian part.

mod basis;
mod tensor;

pub use basis::{build_basis, casimir, root_value, BasisLabel, BasisSet, Part, RootLabel, Sign};
pub use tensor::{kron, partial_trace_2, swap, TensorElement};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex square matrix.
pub type CMatrix = DMatrix<Complex64>;

/// Absolute tolerance for structural identities.
pub const STRUCTURE_TOL: f64 = 1e-12;

/// The imaginary unit.
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Real scalar as a complex number.
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// The involutory Hermitian matrix `[[0, 1_n], [1_n, 0]]`.
pub fn build_c(n: usize) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let big = 2 * n;
    Ok(CMatrix::from_fn(big, big, |i, j| {
        if j == (i + n) % big {
            re(1.0)
        } else {
            Complex64::default()
        }
    }))
}

/// `Q(q) = diag(q_1, …, q_n, −q_1, …, −q_n)`.
pub fn q_matrix(q: &[f64]) -> CMatrix {
    let n = q.len();
    CMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if i != j {
            Complex64::default()
        } else if i < n {
            re(q[i])
        } else {
            re(-q[i - n])
        }
    })
}

/// Elementary matrix `e_{k,l}` of size `dim`.
pub fn elementary(dim: usize, k: usize, l: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(k, l)] = re(1.0);
    m
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `|Y* C + C Y|_max` for an even-dimensional square matrix.
pub fn algebra_residual(y: &CMatrix) -> f64 {
    let n = y.nrows() / 2;
    let big = 2 * n;
    // C permutes the two halves, so (Y*C)_{ij} = conj(Y_{(j+n) mod N, i}) and (CY)_{ij} = Y_{(i+n) mod N, j}.
    let mut worst = 0.0f64;
    for i in 0..big {
        for j in 0..big {
            let v = y[((j + n) % big, i)].conj() + y[((i + n) % big, j)];
            worst = worst.max(v.norm());
        }
    }
    worst
}

/// An element of u(n,n).
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement(CMatrix);

impl AlgebraElement {
    /// Validates the defining relation at `1e-12`, scaled by the entry magnitude
    /// when that exceeds one.
    pub fn new(mat: CMatrix) -> Result<Self> {
        check_square_even(&mat)?;
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let residual = algebra_residual(&mat);
        if residual > STRUCTURE_TOL * max_abs(&mat).max(1.0) {
            return Err(Error::NotInAlgebra { residual });
        }
        Ok(Self(mat))
    }

    pub(crate) fn new_unchecked(mat: CMatrix) -> Self {
        Self(mat)
    }

    pub fn n(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }
}

impl AsRef<CMatrix> for AlgebraElement {
    fn as_ref(&self) -> &CMatrix {
        &self.0
    }
}

fn check_square_even(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    if m.nrows() == 0 || !m.nrows().is_multiple_of(2) {
        return Err(Error::ZeroDimension);
    }
    Ok(())
}

/// `⟨Y, Z⟩ = tr(Y Z)`. The imaginary part vanishes on u(n,n) and is dropped.
pub fn bilinear(y: &CMatrix, z: &CMatrix) -> Result<f64> {
    if y.shape() != z.shape() {
        return Err(Error::DimensionMismatch {
            expected: y.nrows(),
            found: z.nrows(),
        });
    }
    Ok(trace_product(y, z).re)
}

/// `tr(Y Z)` without forming the product.
pub(crate) fn trace_product(y: &CMatrix, z: &CMatrix) -> Complex64 {
    let dim = y.nrows();
    let mut acc = Complex64::default();
    for i in 0..dim {
        for k in 0..dim {
            acc += y[(i, k)] * z[(k, i)];
        }
    }
    acc
}

/// Components of `𝔤 = 𝔪 ⊕ 𝔪^⊥ ⊕ 𝔞 ⊕ 𝔞^⊥`.
#[derive(Debug, Clone)]
pub struct RefinedParts {
    /// Diagonal anti-Hermitian part, `diag(iχ, iχ)`.
    pub m: CMatrix,
    /// Off-diagonal anti-Hermitian part.
    pub m_perp: CMatrix,
    /// Diagonal Hermitian part, `Q(q)` for some real `q`.
    pub a: CMatrix,
    /// Off-diagonal Hermitian part.
    pub a_perp: CMatrix,
}

impl RefinedParts {
    pub fn sum(&self) -> CMatrix {
        &self.m + &self.m_perp + &self.a + &self.a_perp
    }
}

/// Splits `Y ∈ 𝔤` along the Cartan decomposition and then into diagonal and
/// off-diagonal pieces.
pub fn refined_decompose(y: &CMatrix) -> Result<RefinedParts> {
    check_square_even(y)?;
    let residual = algebra_residual(y);
    if residual > STRUCTURE_TOL * max_abs(y).max(1.0) {
        return Err(Error::NotInAlgebra { residual });
    }
    let adj = y.adjoint();
    let k = (y - &adj) * re(0.5);
    let p = (y + &adj) * re(0.5);
    let (m, m_perp) = split_diagonal(&k);
    let (a, a_perp) = split_diagonal(&p);
    Ok(RefinedParts {
        m,
        m_perp,
        a,
        a_perp,
    })
}

fn split_diagonal(x: &CMatrix) -> (CMatrix, CMatrix) {
    let diag = CMatrix::from_diagonal(&x.diagonal());
    let off = x - &diag;
    (diag, off)
}
