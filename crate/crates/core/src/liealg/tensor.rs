//! Elements of `𝔤 ⊗ 𝔤` as `N² × N²` matrices.
//!
//! Index convention: the entry `(i, j) ⊗ (k, l)` lives at row `i·N + k`,
//! column `j·N + l` (zero-based). This is the ordinary Kronecker product
//! layout, so `A ⊗ B` acts on `x ⊗ y` as `(A x) ⊗ (B y)`.

use num_complex::Complex64;

use super::{commutator, re, CMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TensorElement {
    n: usize,
    mat: CMatrix,
}

impl TensorElement {
    pub fn zeros(n: usize) -> Self {
        let big = 4 * n * n;
        Self {
            n,
            mat: CMatrix::zeros(big, big),
        }
    }

    pub fn from_matrix(n: usize, mat: CMatrix) -> Result<Self> {
        let big = 4 * n * n;
        if mat.nrows() != big || mat.ncols() != big {
            return Err(Error::DimensionMismatch {
                expected: big,
                found: mat.nrows(),
            });
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { n, mat })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Matrix size `N = 2n` of each tensor factor.
    pub fn factor_dim(&self) -> usize {
        2 * self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Entry at `(i, j) ⊗ (k, l)`.
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        let dim = self.factor_dim();
        self.mat[(i * dim + k, j * dim + l)]
    }

    /// `self += w · (a ⊗ b)`, touching only the nonzero pattern of `a` and `b`.
    pub fn add_kron(&mut self, a: &CMatrix, b: &CMatrix, w: f64) {
        let dim = self.factor_dim();
        let nz = |m: &CMatrix| -> Vec<(usize, usize, Complex64)> {
            let mut out = Vec::new();
            for j in 0..dim {
                for i in 0..dim {
                    let v = m[(i, j)];
                    if v != Complex64::default() {
                        out.push((i, j, v));
                    }
                }
            }
            out
        };
        let bz = nz(b);
        for (i, j, av) in nz(a) {
            let aw = av * w;
            for &(k, l, bv) in &bz {
                self.mat[(i * dim + k, j * dim + l)] += aw * bv;
            }
        }
    }

    /// `Y ⊗ 1`.
    pub fn lift1(y: &CMatrix) -> Self {
        let dim = y.nrows();
        Self {
            n: dim / 2,
            mat: y.kronecker(&CMatrix::identity(dim, dim)),
        }
    }

    /// `1 ⊗ Y`.
    pub fn lift2(y: &CMatrix) -> Self {
        let dim = y.nrows();
        Self {
            n: dim / 2,
            mat: CMatrix::identity(dim, dim).kronecker(y),
        }
    }

    /// `[self, other]` in the tensor representation.
    pub fn commutator(&self, other: &TensorElement) -> TensorElement {
        Self {
            n: self.n,
            mat: commutator(&self.mat, &other.mat),
        }
    }

    pub fn scale(&self, w: f64) -> TensorElement {
        Self {
            n: self.n,
            mat: &self.mat * re(w),
        }
    }
}

impl std::ops::Add for &TensorElement {
    type Output = TensorElement;
    fn add(self, rhs: &TensorElement) -> TensorElement {
        TensorElement {
            n: self.n,
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl std::ops::Sub for &TensorElement {
    type Output = TensorElement;
    fn sub(self, rhs: &TensorElement) -> TensorElement {
        TensorElement {
            n: self.n,
            mat: &self.mat - &rhs.mat,
        }
    }
}

/// `Y ⊗ Z` under the crate-wide index convention.
pub fn kron(y: &CMatrix, z: &CMatrix) -> Result<TensorElement> {
    if y.shape() != z.shape()
        || y.nrows() != y.ncols()
        || !y.nrows().is_multiple_of(2)
        || y.nrows() == 0
    {
        return Err(Error::DimensionMismatch {
            expected: y.nrows(),
            found: z.nrows(),
        });
    }
    Ok(TensorElement {
        n: y.nrows() / 2,
        mat: y.kronecker(z),
    })
}

/// Exchanges the two tensor factors: `swap(A ⊗ B) = B ⊗ A`.
pub fn swap(t: &TensorElement) -> TensorElement {
    let dim = t.factor_dim();
    let big = dim * dim;
    let mat = CMatrix::from_fn(big, big, |row, col| {
        let (i, k) = (row / dim, row % dim);
        let (j, l) = (col / dim, col % dim);
        t.mat[(k * dim + i, l * dim + j)]
    });
    TensorElement { n: t.n, mat }
}

/// Partial trace over the second factor: `tr₂(X ⊗ Y) = tr(Y) X`.
pub fn partial_trace_2(t: &TensorElement) -> Result<CMatrix> {
    let dim = t.factor_dim();
    if t.mat.nrows() != dim * dim {
        return Err(Error::DimensionMismatch {
            expected: dim * dim,
            found: t.mat.nrows(),
        });
    }
    Ok(CMatrix::from_fn(dim, dim, |i, j| {
        (0..dim).map(|k| t.mat[(i * dim + k, j * dim + k)]).sum()
    }))
}
