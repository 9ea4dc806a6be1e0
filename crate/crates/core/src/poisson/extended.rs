//! Involution brackets in multiple precision.
//!
//! `{tr L^j, tr L^k}` is a sum of products of size `‖L‖^{j+k}` that cancel
//! exactly, so in doubles it bottoms out near `1e-16 ‖L‖^{j+k}`. Here `L`, its
//! partials and the bracket are evaluated with [`EXTENDED_BITS`] of mantissa
//! at the exact binary values of the inputs.

use std::ops::{Add, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;

use crate::error::{Error, Result};
use crate::model::{CouplingParams, PhasePoint};

pub const EXTENDED_BITS: usize = 192;

type F = FBig<HalfEven, 2>;

fn lift(x: f64) -> F {
    F::try_from(x)
        .expect("finite input")
        .with_precision(EXTENDED_BITS)
        .value()
}

#[derive(Clone)]
struct Cx {
    re: F,
    im: F,
}

impl Cx {
    fn zero() -> Self {
        Cx {
            re: lift(0.0),
            im: lift(0.0),
        }
    }
    fn real(x: F) -> Self {
        Cx {
            re: x,
            im: lift(0.0),
        }
    }
    fn imag(x: F) -> Self {
        Cx {
            re: lift(0.0),
            im: x,
        }
    }
    fn norm(&self) -> f64 {
        let re = self.re.to_f64().value();
        let im = self.im.to_f64().value();
        re.hypot(im)
    }
}

impl Add for &Cx {
    type Output = Cx;
    fn add(self, o: &Cx) -> Cx {
        Cx {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl Sub for &Cx {
    type Output = Cx;
    fn sub(self, o: &Cx) -> Cx {
        Cx {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl Mul for &Cx {
    type Output = Cx;
    fn mul(self, o: &Cx) -> Cx {
        Cx {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for &Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

/// Dense square matrix, row-major.
#[derive(Clone)]
struct Mat {
    dim: usize,
    data: Vec<Cx>,
}

impl Mat {
    fn zeros(dim: usize) -> Self {
        Mat {
            dim,
            data: vec![Cx::zero(); dim * dim],
        }
    }
    fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Cx::real(lift(1.0));
        }
        m
    }
    fn at(&self, i: usize, j: usize) -> &Cx {
        &self.data[i * self.dim + j]
    }
    fn add_at(&mut self, i: usize, j: usize, v: &Cx) {
        let k = i * self.dim + j;
        self.data[k] = &self.data[k] + v;
    }
    fn mul(&self, o: &Mat) -> Mat {
        let d = self.dim;
        let mut out = Mat::zeros(d);
        let zero = lift(0.0);
        for i in 0..d {
            for k in 0..d {
                let a = self.at(i, k);
                if a.re == zero && a.im == zero {
                    continue;
                }
                for j in 0..d {
                    let v = a * o.at(k, j);
                    out.add_at(i, j, &v);
                }
            }
        }
        out
    }
    /// `tr(self · o)`
    fn trace_product(&self, o: &Mat) -> Cx {
        let d = self.dim;
        let mut acc = Cx::zero();
        for i in 0..d {
            for j in 0..d {
                acc = &acc + &(self.at(i, j) * o.at(j, i));
            }
        }
        acc
    }
}

fn sinh_cosh(x: &F) -> (F, F) {
    let e = x.exp();
    let ei = lift(1.0) / &e;
    let half = lift(0.5);
    ((&e - &ei) * &half, (&e + &ei) * &half)
}

/// `L` and `∂L/∂q_c`, mirroring the double-precision construction.
fn lax_and_partials(x: &PhasePoint, c: &CouplingParams) -> (Mat, Vec<Mat>) {
    let q: Vec<F> = x.q().iter().map(|&v| lift(v)).collect();
    let n = q.len();
    let (mu, nu, kappa) = (lift(c.mu), lift(c.nu), lift(c.kappa));
    let two = lift(2.0);
    let mut l = Mat::zeros(2 * n);
    let mut dq = vec![Mat::zeros(2 * n); n];

    let put_a = |m: &mut Mat, a: usize, b: usize, v: &Cx| {
        m.add_at(a, b, v);
        m.add_at(n + a, n + b, &-v);
    };
    let put_b = |m: &mut Mat, a: usize, b: usize, v: &Cx| {
        m.add_at(a, n + b, v);
        m.add_at(n + a, b, &-v);
    };

    for a in 0..n {
        put_a(&mut l, a, a, &Cx::real(lift(x.p()[a])));
        let y = &two * &q[a];
        let (s, ch) = sinh_cosh(&y);
        put_b(&mut l, a, a, &Cx::imag((&nu + &kappa * &ch) / &s));
        let dv = -(&two * (&nu * &ch + &kappa)) / (&s * &s);
        put_b(&mut dq[a], a, a, &Cx::imag(dv));
        // −κ i C
        let central = Cx::imag(-kappa.clone());
        l.add_at(a, n + a, &central);
        l.add_at(n + a, a, &central);
        for b in 0..n {
            if a == b {
                continue;
            }
            let (sd, cd) = sinh_cosh(&(&q[a] - &q[b]));
            put_a(&mut l, a, b, &Cx::imag(-(&mu / &sd)));
            let va = Cx::imag(&mu * &cd / (&sd * &sd));
            put_a(&mut dq[a], a, b, &va);
            put_a(&mut dq[b], a, b, &-&va);
            let (ss, cs) = sinh_cosh(&(&q[a] + &q[b]));
            put_b(&mut l, a, b, &Cx::imag(&mu / &ss));
            let vb = Cx::imag(-(&mu * &cs) / (&ss * &ss));
            put_b(&mut dq[a], a, b, &vb);
            put_b(&mut dq[b], a, b, &vb);
        }
    }
    (l, dq)
}

/// Gradients of `tr L^k` for `k = 1..=kmax`, as `(∂_q, ∂_p)`.
fn power_trace_gradients(
    x: &PhasePoint,
    c: &CouplingParams,
    kmax: usize,
) -> Vec<(Vec<Cx>, Vec<Cx>)> {
    let n = x.n();
    let (l, dq) = lax_and_partials(x, c);
    let mut base = Mat::identity(2 * n);
    let mut out = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        let kk = Cx::real(lift(k as f64));
        let gq = dq.iter().map(|m| &kk * &base.trace_product(m)).collect();
        let gp = (0..n)
            .map(|a| &kk * &(base.at(a, a) - base.at(n + a, n + a)))
            .collect();
        out.push((gq, gp));
        base = base.mul(&l);
    }
    out
}

fn bracket(f: &(Vec<Cx>, Vec<Cx>), g: &(Vec<Cx>, Vec<Cx>)) -> Cx {
    let mut acc = Cx::zero();
    for c in 0..f.0.len() {
        acc = &acc + &(&(&f.0[c] * &g.1[c]) - &(&f.1[c] * &g.0[c]));
    }
    acc
}

/// `|{tr L^j, tr L^k}|` for every `1 ≤ j < k ≤ 2n`, as `(j, k, value)`.
pub fn involution_residuals_extended(x: &PhasePoint, c: &CouplingParams) -> Vec<(u32, u32, f64)> {
    let kmax = 2 * x.n();
    let grads = power_trace_gradients(x, c, kmax);
    let mut out = Vec::new();
    for j in 1..=kmax {
        for k in j + 1..=kmax {
            let v = bracket(&grads[j - 1], &grads[k - 1]).norm();
            out.push((j as u32, k as u32, v));
        }
    }
    out
}

/// Single pair version of [`involution_residuals_extended`].
pub fn involution_residual_extended(
    x: &PhasePoint,
    c: &CouplingParams,
    j: u32,
    k: u32,
) -> Result<f64> {
    let dim = 2 * x.n() as u32;
    if !(1..=dim).contains(&j) || !(1..=dim).contains(&k) {
        return Err(Error::InvalidConfig(format!(
            "power indices must lie in 1..={dim}, got ({j}, {k})"
        )));
    }
    let grads = power_trace_gradients(x, c, j.max(k) as usize);
    Ok(bracket(&grads[j as usize - 1], &grads[k as usize - 1]).norm())
}
