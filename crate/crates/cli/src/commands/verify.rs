//! Property sweep over seeded phase-space points.

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use suther_lax::liealg::{build_basis, commutator, max_abs, q_matrix, re, BasisSet, Sign};
use suther_lax::model::{
    b_matrix, b_matrix_via_r, bl_commutator_closed, hamiltonian, hyperbolic_identity, lax_matrix,
    lax_via_basis, r_apply, r_apply_trace, r_dynamical_part, r_matrix_basis, r_matrix_standard,
    CouplingParams, PhasePoint,
};
use suther_lax::poisson::{
    involution_residuals_extended, lax_partials, lax_partials_fd, rmatrix_identity_residual,
    BracketMethod, EXTENDED_BITS, FD_STEP,
};
use suther_lax::sampling::{random_point, sample_rng};
use suther_lax::Result;

use crate::config::RunConfig;
use crate::report::{self, fmt_f64, num, Outcome, Table, EXIT_CHECK_FAILED, EXIT_PASS};

/// Chamber gap of the sampled points.
pub const SAMPLE_GAP: f64 = 0.1;

pub struct CheckSpec {
    pub name: &'static str,
    pub tolerance: f64,
    pub description: &'static str,
}

/// Per-sample checks, in report order.
pub const CHECKS: &[CheckSpec] = &[
    CheckSpec {
        name: "basis_root_action",
        tolerance: 1e-12,
        description: "[Q, X(a,+-,e)] - a(q) X(a,-+,e), max-abs",
    },
    CheckSpec {
        name: "hamiltonian_lax",
        tolerance: 1e-10,
        description: "|H - tr(L^2)/4|",
    },
    CheckSpec {
        name: "lax_basis_expansion",
        tolerance: 1e-12,
        description: "entrywise L vs L assembled from the basis, max-abs",
    },
    CheckSpec {
        name: "r_basis_vs_standard",
        tolerance: 1e-12,
        description: "r from basis coefficients vs r from elementary matrices, max-abs",
    },
    CheckSpec {
        name: "r_operator_dual",
        tolerance: 1e-12,
        description: "R(q)Y closed form vs tr_2(r (1 x Y)), max-abs",
    },
    CheckSpec {
        name: "b_dual",
        tolerance: 1e-12,
        description: "(L + R L)/2 vs closed-form S/T blocks, max-abs",
    },
    CheckSpec {
        name: "b_momentum_independence",
        tolerance: 1e-12,
        description: "(L + R L)/2 at two momenta, max-abs",
    },
    CheckSpec {
        name: "bl_commutator",
        tolerance: 1e-10,
        description: "closed-form [B, L] vs direct commutator, max-abs",
    },
    CheckSpec {
        name: "lax_partials_fd",
        tolerance: 1e-6,
        description: "analytic dL/dq vs central differences, relative max-abs",
    },
    CheckSpec {
        name: "bracket_identity",
        tolerance: 1e-8,
        description: "{L1,L2} - ([r12,L1] - [r21,L2]) with analytic partials, max-abs",
    },
    CheckSpec {
        name: "bracket_identity_fd",
        tolerance: 1e-5,
        description: "same residual with finite-difference partials, max-abs",
    },
    CheckSpec {
        name: "involution",
        tolerance: 1e-9,
        description: "max |{tr L^j, tr L^k}| over 1 <= j < k <= 2n",
    },
    CheckSpec {
        name: "kappa0_specialization",
        tolerance: 1e-8,
        description: "bracket residual at kappa = 0 with only the q-dependent part of r",
    },
    CheckSpec {
        name: "hyperbolic_identity",
        tolerance: 1e-10,
        description: "sinh identity at pairs of root values, relative",
    },
];

fn sample_residuals(
    i: u64,
    cfg: &RunConfig,
    basis: &BasisSet,
    c0: &CouplingParams,
) -> Result<Vec<f64>> {
    let c = &cfg.couplings;
    let mut rng = sample_rng(cfg.seed, i);
    let x = random_point(cfg.n, SAMPLE_GAP, &mut rng)?;
    let q = x.q();
    let n = cfg.n;

    let qm = q_matrix(q);
    let mut root_action = 0.0f64;
    for &root in basis.roots() {
        let a = root.value(q);
        for &part in root.parts() {
            let plus = basis.x(root, Sign::Plus, part);
            let minus = basis.x(root, Sign::Minus, part);
            root_action = root_action
                .max(max_abs(&(commutator(&qm, plus) - minus * re(a))))
                .max(max_abs(&(commutator(&qm, minus) - plus * re(a))));
        }
    }

    let lax = lax_matrix(&x, c);
    let l = &lax.value;
    let quarter = (l * l).trace() * 0.25;
    let ham = (quarter - re(hamiltonian(&x, c))).norm();
    let lax_basis = max_abs(&(lax_via_basis(&x, c, basis).value - l));

    let rb = r_matrix_basis(q, basis)?;
    let rs = r_matrix_standard(q)?;
    let r_std = max_abs(&(rb.tensor.matrix() - rs.tensor.matrix()));

    let coeffs: Vec<f64> = (0..basis.len())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    let y = basis.expand(&coeffs);
    let mut r_dual = 0.0f64;
    for z in [&y, l] {
        let closed = r_apply(q, z, basis)?;
        r_dual = r_dual.max(max_abs(&(r_apply_trace(&rb, z)? - closed.matrix())));
    }

    let b_closed = b_matrix(q, c)?.value;
    let b_r = b_matrix_via_r(&x, c, basis)?;
    let b_dual = max_abs(&(&b_r - &b_closed));
    let p2: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let b_r2 = b_matrix_via_r(&x.with_p(p2)?, c, basis)?;
    let b_indep = max_abs(&(&b_r2 - &b_r));
    let bl = max_abs(&(bl_commutator_closed(&x, c, basis) - commutator(&b_closed, l)));

    let an = lax_partials(&x, c);
    let fd = lax_partials_fd(&x, c, FD_STEP);
    let partials = an
        .dq
        .iter()
        .zip(&fd.dq)
        .map(|(a, f)| max_abs(&(a - f)) / max_abs(a).max(1.0))
        .fold(0.0, f64::max);

    let bracket = rmatrix_identity_residual(&x, c, &rb, BracketMethod::Analytic)?.residual_max;
    let bracket_fd =
        rmatrix_identity_residual(&x, c, &rb, BracketMethod::FiniteDifference)?.residual_max;
    let involution = involution_residuals_extended(&x, c)
        .into_iter()
        .map(|(_, _, v)| v)
        .fold(0.0, f64::max);
    let rd = r_dynamical_part(q, basis)?;
    let kappa0 = rmatrix_identity_residual(&x, c0, &rd, BracketMethod::Analytic)?.residual_max;

    let mut hyper = 0.0f64;
    let values: Vec<f64> = basis.roots().iter().map(|r| r.value(q)).collect();
    for (k, &u) in values.iter().enumerate() {
        for &v in &values[k + 1..] {
            let (lhs, rhs) = hyperbolic_identity(u, v)?;
            hyper = hyper.max((lhs - rhs).abs() / rhs.abs().max(1.0));
        }
    }

    Ok(vec![
        root_action,
        ham,
        lax_basis,
        r_std,
        r_dual,
        b_dual,
        b_indep,
        bl,
        partials,
        bracket,
        bracket_fd,
        involution,
        kappa0,
        hyper,
    ])
}

/// Gram matrix against the signature `diag(±1)`.
fn gram_residual(basis: &BasisSet) -> f64 {
    let g = basis.gram();
    let mut worst = 0.0f64;
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let expected = if i == j {
                basis.labels()[i].norm_sign()
            } else {
                0.0
            };
            worst = worst.max((v - expected).abs());
        }
    }
    worst
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let basis = build_basis(cfg.n)?;
    let c0 = cfg.couplings.with_kappa(0.0)?;
    let per_sample = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|i| sample_residuals(i, cfg, &basis, &c0))
        .collect::<Result<Vec<_>>>()?;

    let mut rows: Vec<(&str, f64, f64, Option<usize>, &str)> = vec![(
        "basis_gram",
        gram_residual(&basis),
        1e-12,
        None,
        "Gram matrix vs diag(-1 for D+ and X+, +1 for D- and X-), max-abs",
    )];
    for (k, spec) in CHECKS.iter().enumerate() {
        let (worst_idx, worst) = per_sample.iter().enumerate().map(|(i, r)| (i, r[k])).fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, v)| {
                if v > acc.1 || v.is_nan() {
                    (i, v)
                } else {
                    acc
                }
            },
        );
        rows.push((
            spec.name,
            worst,
            spec.tolerance,
            Some(worst_idx),
            spec.description,
        ));
    }

    let mut all_pass = true;
    let mut checks = Vec::new();
    let mut table = Table::new(["check", "max_residual", "tolerance", "worst_sample", "pass"]);
    for (name, worst, tol, idx, description) in rows {
        let pass = worst <= tol;
        all_pass &= pass;
        checks.push(json!({
            "name": name,
            "description": description,
            "max_residual": num(worst),
            "tolerance": num(tol),
            "worst_sample": idx,
            "pass": pass,
        }));
        table.push(vec![
            name.to_string(),
            fmt_f64(worst),
            fmt_f64(tol),
            idx.map(|i| i.to_string()).unwrap_or_default(),
            pass.to_string(),
        ]);
    }

    let mut m = report::header("verify");
    m.insert("n".into(), json!(cfg.n));
    m.insert("couplings".into(), report::couplings(&cfg.couplings));
    m.insert("seed".into(), json!(cfg.seed));
    m.insert("samples".into(), json!(cfg.samples));
    m.insert("sample_min_gap".into(), num(SAMPLE_GAP));
    m.insert("involution_precision_bits".into(), json!(EXTENDED_BITS));
    m.insert("checks".into(), Value::Array(checks));
    m.insert("pass".into(), json!(all_pass));
    Ok(Outcome {
        exit: if all_pass {
            EXIT_PASS
        } else {
            EXIT_CHECK_FAILED
        },
        report: Value::Object(m),
        table: Some(table),
    })
}

/// The point for sample `i`, as used by the sweep.
pub fn sample_point(cfg: &RunConfig, i: u64) -> Result<PhasePoint> {
    random_point(cfg.n, SAMPLE_GAP, &mut sample_rng(cfg.seed, i))
}
