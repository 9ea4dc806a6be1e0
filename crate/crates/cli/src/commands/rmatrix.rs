//! Dump of `r₁₂(q)` in basis coefficients and in elementary matrices.

use serde_json::{json, Value};
use suther_lax::liealg::{build_basis, max_abs};
use suther_lax::model::{r_constant_part, r_dynamical_part, r_matrix_basis, r_matrix_standard};
use suther_lax::Result;

use crate::config::RunConfig;
use crate::report::{self, fmt_f64, num, Outcome, Table, EXIT_CHECK_FAILED, EXIT_PASS};

pub const EXPANSION_TOL: f64 = 1e-12;

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let x = cfg
        .point
        .as_ref()
        .expect("validated: rmatrix has explicit q");
    let q = x.q();
    let n = q.len();
    let dim = 2 * n;
    let basis = build_basis(n)?;
    let rb = r_matrix_basis(q, &basis)?;
    let rs = r_matrix_standard(q)?;
    let constant = r_constant_part(&basis);
    let dynamical = r_dynamical_part(q, &basis)?;
    let constant_keys = constant.coefficients.as_ref().expect("basis-built");

    let mut table = Table::new(["view", "row", "col", "re", "im", "q_dependent"]);
    let mut basis_records = Vec::new();
    for (&(a, b), &w) in rb.coefficients.iter().flatten() {
        if w == 0.0 {
            continue;
        }
        let (row, col) = (basis.labels()[a].to_string(), basis.labels()[b].to_string());
        let q_dep = !constant_keys.contains_key(&(a, b));
        basis_records.push(json!({
            "row": row, "col": col, "re": num(w), "im": num(0.0), "q_dependent": q_dep,
        }));
        table.push(vec![
            "basis".into(),
            row,
            col,
            fmt_f64(w),
            fmt_f64(0.0),
            q_dep.to_string(),
        ]);
    }

    let mut standard_records = Vec::new();
    let m = rs.tensor.matrix();
    for r in 0..dim * dim {
        for s in 0..dim * dim {
            let z = m[(r, s)];
            if z.re == 0.0 && z.im == 0.0 {
                continue;
            }
            // (i, j) ⊗ (k, l) sits at row i·N + k, column j·N + l.
            let (i, k) = (r / dim + 1, r % dim + 1);
            let (j, l) = (s / dim + 1, s % dim + 1);
            let dz = dynamical.tensor.matrix()[(r, s)];
            let q_dep = dz.re != 0.0 || dz.im != 0.0;
            standard_records.push(json!({
                "row": [i, k], "col": [j, l], "re": num(z.re), "im": num(z.im), "q_dependent": q_dep,
            }));
            table.push(vec![
                "standard".into(),
                format!("{i}.{k}"),
                format!("{j}.{l}"),
                fmt_f64(z.re),
                fmt_f64(z.im),
                q_dep.to_string(),
            ]);
        }
    }

    let expansion = max_abs(&(rb.tensor.matrix() - rs.tensor.matrix()));
    let pass = expansion <= EXPANSION_TOL;
    let mut rep = report::header("rmatrix");
    rep.insert("n".into(), json!(n));
    rep.insert("q".into(), report::nums(q));
    rep.insert(
        "index_convention".into(),
        json!("standard records: row (i,k), col (j,l) for e_ij (x) e_kl, 1-based"),
    );
    rep.insert("basis".into(), Value::Array(basis_records));
    rep.insert("standard".into(), Value::Array(standard_records));
    rep.insert(
        "expansion_check".into(),
        json!({ "max_abs": num(expansion), "tolerance": num(EXPANSION_TOL), "pass": pass }),
    );
    rep.insert("pass".into(), json!(pass));
    Ok(Outcome {
        exit: if pass { EXIT_PASS } else { EXIT_CHECK_FAILED },
        report: Value::Object(rep),
        table: Some(table),
    })
}
