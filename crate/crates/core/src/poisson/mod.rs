//! Canonical Poisson brackets on the Sutherland phase space, `{q_c, p_d} = δ_cd`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::liealg::{max_abs, re, swap, trace_product, CMatrix, TensorElement};
use crate::model::{hamiltonian, hamiltonian_dq, lax_matrix, CouplingParams, PhasePoint, RMatrix};

mod extended;

pub use extended::{involution_residual_extended, involution_residuals_extended, EXTENDED_BITS};

/// Central finite-difference step used as the universal oracle.
pub const FD_STEP: f64 = 1e-6;

/// Partial derivatives of a scalar observable.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub dq: Vec<Complex64>,
    pub dp: Vec<Complex64>,
}

/// A complex-valued function on phase space, optionally with an analytic gradient.
pub trait Observable {
    fn value(&self, x: &PhasePoint) -> Complex64;

    fn gradient(&self, _x: &PhasePoint) -> Option<Gradient> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientMode {
    /// Analytic gradients only; error if an observable has none.
    Analytic,
    /// Central differences for every observable.
    FiniteDifference,
    /// Analytic when available, central differences otherwise.
    Auto,
}

/// Central-difference gradient with step `h`.
pub fn fd_gradient(f: &dyn Observable, x: &PhasePoint, h: f64) -> Gradient {
    let n = x.n();
    let shifted = |which_q: bool, c: usize, delta: f64| {
        let mut q = x.q().to_vec();
        let mut p = x.p().to_vec();
        if which_q {
            q[c] += delta;
        } else {
            p[c] += delta;
        }
        f.value(&PhasePoint::new_unchecked(q, p))
    };
    let diff =
        |which_q: bool, c: usize| (shifted(which_q, c, h) - shifted(which_q, c, -h)) / (2.0 * h);
    Gradient {
        dq: (0..n).map(|c| diff(true, c)).collect(),
        dp: (0..n).map(|c| diff(false, c)).collect(),
    }
}

fn resolve_gradient(f: &dyn Observable, x: &PhasePoint, mode: GradientMode) -> Result<Gradient> {
    match mode {
        GradientMode::Analytic => f.gradient(x).ok_or(Error::GradientUnavailable),
        GradientMode::FiniteDifference => Ok(fd_gradient(f, x, FD_STEP)),
        GradientMode::Auto => Ok(f.gradient(x).unwrap_or_else(|| fd_gradient(f, x, FD_STEP))),
    }
}

fn bracket_of(gf: &Gradient, gg: &Gradient) -> Complex64 {
    gf.dq
        .iter()
        .zip(&gf.dp)
        .zip(gg.dq.iter().zip(&gg.dp))
        .map(|((fq, fp), (gq, gp))| fq * gp - fp * gq)
        .sum()
}

/// `{f, g} = Σ_c (∂f/∂q_c ∂g/∂p_c − ∂f/∂p_c ∂g/∂q_c)`.
pub fn canonical_bracket(
    f: &dyn Observable,
    g: &dyn Observable,
    x: &PhasePoint,
    mode: GradientMode,
) -> Result<Complex64> {
    let gf = resolve_gradient(f, x, mode)?;
    let gg = resolve_gradient(g, x, mode)?;
    Ok(bracket_of(&gf, &gg))
}

fn unit(n: usize, c: usize) -> Vec<Complex64> {
    (0..n).map(|k| re(if k == c { 1.0 } else { 0.0 })).collect()
}

/// The coordinate `q_c`.
#[derive(Debug, Clone, Copy)]
pub struct Coordinate(pub usize);

impl Observable for Coordinate {
    fn value(&self, x: &PhasePoint) -> Complex64 {
        re(x.q()[self.0])
    }
    fn gradient(&self, x: &PhasePoint) -> Option<Gradient> {
        Some(Gradient {
            dq: unit(x.n(), self.0),
            dp: vec![Complex64::default(); x.n()],
        })
    }
}

/// The momentum `p_c`.
#[derive(Debug, Clone, Copy)]
pub struct Momentum(pub usize);

impl Observable for Momentum {
    fn value(&self, x: &PhasePoint) -> Complex64 {
        re(x.p()[self.0])
    }
    fn gradient(&self, x: &PhasePoint) -> Option<Gradient> {
        Some(Gradient {
            dq: vec![Complex64::default(); x.n()],
            dp: unit(x.n(), self.0),
        })
    }
}

/// The Hamiltonian.
#[derive(Debug, Clone, Copy)]
pub struct Energy(pub CouplingParams);

impl Observable for Energy {
    fn value(&self, x: &PhasePoint) -> Complex64 {
        re(hamiltonian(x, &self.0))
    }
    fn gradient(&self, x: &PhasePoint) -> Option<Gradient> {
        Some(Gradient {
            dq: hamiltonian_dq(x.q(), &self.0).into_iter().map(re).collect(),
            dp: x.p().iter().copied().map(re).collect(),
        })
    }
}

/// A single Lax matrix entry `L_{ij}`.
#[derive(Debug, Clone, Copy)]
pub struct LaxEntry {
    pub i: usize,
    pub j: usize,
    pub couplings: CouplingParams,
}

impl Observable for LaxEntry {
    fn value(&self, x: &PhasePoint) -> Complex64 {
        lax_matrix(x, &self.couplings).value[(self.i, self.j)]
    }
    fn gradient(&self, x: &PhasePoint) -> Option<Gradient> {
        let d = lax_partials(x, &self.couplings);
        Some(Gradient {
            dq: d.dq.iter().map(|m| m[(self.i, self.j)]).collect(),
            dp: d.dp.iter().map(|m| m[(self.i, self.j)]).collect(),
        })
    }
}

/// The spectral invariant `tr L^k`.
#[derive(Debug, Clone, Copy)]
pub struct LaxPowerTrace {
    pub k: u32,
    pub couplings: CouplingParams,
}

impl Observable for LaxPowerTrace {
    fn value(&self, x: &PhasePoint) -> Complex64 {
        let l = lax_matrix(x, &self.couplings).value;
        powers(&l, self.k as usize)[self.k as usize].trace()
    }
    /// `∂ tr L^k = k tr(L^{k−1} ∂L)`.
    fn gradient(&self, x: &PhasePoint) -> Option<Gradient> {
        let l = lax_matrix(x, &self.couplings).value;
        let d = lax_partials(x, &self.couplings);
        Some(power_trace_gradient(
            &powers(&l, self.k as usize),
            self.k as usize,
            &d,
        ))
    }
}

fn powers(l: &CMatrix, k: usize) -> Vec<CMatrix> {
    let dim = l.nrows();
    let mut out = Vec::with_capacity(k + 1);
    out.push(CMatrix::identity(dim, dim));
    for i in 1..=k {
        let next = &out[i - 1] * l;
        out.push(next);
    }
    out
}

fn power_trace_gradient(powers: &[CMatrix], k: usize, d: &LaxPartials) -> Gradient {
    if k == 0 {
        let n = d.dq.len();
        return Gradient {
            dq: vec![Complex64::default(); n],
            dp: vec![Complex64::default(); n],
        };
    }
    let base = &powers[k - 1];
    let kk = k as f64;
    Gradient {
        dq: d.dq.iter().map(|m| trace_product(base, m) * kk).collect(),
        dp: d.dp.iter().map(|m| trace_product(base, m) * kk).collect(),
    }
}

/// `∂L/∂q_c` and `∂L/∂p_c` for every `c`.
#[derive(Debug, Clone)]
pub struct LaxPartials {
    pub dq: Vec<CMatrix>,
    pub dp: Vec<CMatrix>,
}

/// Analytic derivatives of the `sinh` kernels in `𝒜` and `ℬ`.
pub fn lax_partials(x: &PhasePoint, c: &CouplingParams) -> LaxPartials {
    let q = x.q();
    let n = q.len();
    let dim = 2 * n;
    let i = Complex64::new(0.0, 1.0);
    let mut dq = vec![CMatrix::zeros(dim, dim); n];
    let dp = (0..n)
        .map(|k| {
            let mut m = CMatrix::zeros(dim, dim);
            m[(k, k)] = re(1.0);
            m[(n + k, n + k)] = re(-1.0);
            m
        })
        .collect();

    // Places v at (a,b) of block 𝒜 (and −v in the lower-right block) or of ℬ
    // (and −v in the lower-left block).
    let put_a = |m: &mut CMatrix, a: usize, b: usize, v: Complex64| {
        m[(a, b)] += v;
        m[(n + a, n + b)] -= v;
    };
    let put_b = |m: &mut CMatrix, a: usize, b: usize, v: Complex64| {
        m[(a, n + b)] += v;
        m[(n + a, b)] -= v;
    };

    for a in 0..n {
        for b in 0..n {
            if a == b {
                // ∂/∂q of i(ν + κ cosh 2q)/sinh 2q = −2i(ν cosh 2q + κ)/sinh² 2q
                let y = 2.0 * q[a];
                let v = i * (-2.0 * (c.nu * y.cosh() + c.kappa) / y.sinh().powi(2));
                put_b(&mut dq[a], a, a, v);
                continue;
            }
            // 𝒜_ab = −iμ / sinh(q_a − q_b): derivative in the difference is iμ cosh/sinh².
            let d = q[a] - q[b];
            let va = i * (c.mu * d.cosh() / d.sinh().powi(2));
            put_a(&mut dq[a], a, b, va);
            put_a(&mut dq[b], a, b, -va);
            // ℬ_ab = iμ / sinh(q_a + q_b): derivative in the sum is −iμ cosh/sinh².
            let s = q[a] + q[b];
            let vb = i * (-c.mu * s.cosh() / s.sinh().powi(2));
            put_b(&mut dq[a], a, b, vb);
            put_b(&mut dq[b], a, b, vb);
        }
    }
    LaxPartials { dq, dp }
}

/// Central-difference partials of [`lax_matrix`] with step `h`.
pub fn lax_partials_fd(x: &PhasePoint, c: &CouplingParams, h: f64) -> LaxPartials {
    let n = x.n();
    let eval = |q: Vec<f64>, p: Vec<f64>| lax_matrix(&PhasePoint::new_unchecked(q, p), c).value;
    let stencil = |which_q: bool, k: usize| {
        let mut qp = x.q().to_vec();
        let mut pp = x.p().to_vec();
        let mut qm = x.q().to_vec();
        let mut pm = x.p().to_vec();
        if which_q {
            qp[k] += h;
            qm[k] -= h;
        } else {
            pp[k] += h;
            pm[k] -= h;
        }
        (eval(qp, pp) - eval(qm, pm)) * re(0.5 / h)
    };
    LaxPartials {
        dq: (0..n).map(|k| stencil(true, k)).collect(),
        dp: (0..n).map(|k| stencil(false, k)).collect(),
    }
}

/// `{L₁, L₂}` with entries `{L_ij, L_kl}` at `(i, j) ⊗ (k, l)`.
pub fn lax_tensor_bracket_from(partials: &LaxPartials) -> TensorElement {
    let n = partials.dq.len();
    let mut t = TensorElement::zeros(n);
    for (dq, dp) in partials.dq.iter().zip(&partials.dp) {
        t.add_kron(dq, dp, 1.0);
        t.add_kron(dp, dq, -1.0);
    }
    t
}

pub fn lax_tensor_bracket(x: &PhasePoint, c: &CouplingParams) -> TensorElement {
    lax_tensor_bracket_from(&lax_partials(x, c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketMethod {
    Analytic,
    FiniteDifference,
}

impl BracketMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            BracketMethod::Analytic => "analytic",
            BracketMethod::FiniteDifference => "finite-difference",
        }
    }
}

/// Outcome of checking `{L₁, L₂} = [r₁₂, L₁] − [r₂₁, L₂]` at one point.
#[derive(Debug, Clone)]
pub struct BracketReport {
    pub n: usize,
    pub seed: Option<u64>,
    pub point: PhasePoint,
    pub residual_max: f64,
    pub residual_fro: f64,
    pub method: BracketMethod,
}

/// `[r₁₂, L₁] − [r₂₁, L₂]` as an `N² × N²` matrix.
pub fn rmatrix_bracket_rhs(r: &RMatrix, l: &CMatrix) -> TensorElement {
    let l1 = TensorElement::lift1(l);
    let l2 = TensorElement::lift2(l);
    let r21 = swap(&r.tensor);
    &r.tensor.commutator(&l1) - &r21.commutator(&l2)
}

/// Residual of the r-matrix bracket at `x`; `r` must be built at `x.q()`.
pub fn rmatrix_identity_residual(
    x: &PhasePoint,
    c: &CouplingParams,
    r: &RMatrix,
    method: BracketMethod,
) -> Result<BracketReport> {
    if r.tensor.n() != x.n() {
        return Err(Error::DimensionMismatch {
            expected: x.n(),
            found: r.tensor.n(),
        });
    }
    let partials = match method {
        BracketMethod::Analytic => lax_partials(x, c),
        BracketMethod::FiniteDifference => lax_partials_fd(x, c, FD_STEP),
    };
    let lhs = lax_tensor_bracket_from(&partials);
    let l = lax_matrix(x, c).value;
    let residual = &lhs - &rmatrix_bracket_rhs(r, &l);
    Ok(BracketReport {
        n: x.n(),
        seed: None,
        point: x.clone(),
        residual_max: max_abs(residual.matrix()),
        residual_fro: residual.matrix().norm(),
        method,
    })
}

/// `|{tr L^j, tr L^k}|` with analytic gradients.
pub fn involution_residual(x: &PhasePoint, c: &CouplingParams, j: u32, k: u32) -> Result<f64> {
    let dim = 2 * x.n() as u32;
    if !(1..=dim).contains(&j) || !(1..=dim).contains(&k) {
        return Err(Error::InvalidConfig(format!(
            "power indices must lie in 1..={dim}, got ({j}, {k})"
        )));
    }
    let l = lax_matrix(x, c).value;
    let d = lax_partials(x, c);
    let pw = powers(&l, j.max(k) as usize);
    let gj = power_trace_gradient(&pw, j as usize, &d);
    let gk = power_trace_gradient(&pw, k as usize, &d);
    Ok(bracket_of(&gj, &gk).norm())
}
