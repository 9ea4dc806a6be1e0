//! Trajectory with per-sample energy, spectral drift and Lax residual.

use serde_json::{json, Value};
use suther_lax::dynamics::{
    integrate, lax_residual_series, spectral_drift_series, Method, Trajectory,
};
use suther_lax::model::PhasePoint;
use suther_lax::sampling::{random_point, sample_rng};
use suther_lax::{Error, Result};

use crate::config::RunConfig;
use crate::report::{self, fmt_f64, num, Outcome, Table, EXIT_ABORT, EXIT_PASS};

/// Chamber gap of a seeded initial point.
pub const SEEDED_GAP: f64 = 0.3;

/// `--q/--p` if given, otherwise a point drawn from stream 0 of the seed.
pub fn initial_point(cfg: &RunConfig) -> Result<PhasePoint> {
    match &cfg.point {
        Some(x) => Ok(x.clone()),
        None => random_point(cfg.n, SEEDED_GAP, &mut sample_rng(cfg.seed, 0)),
    }
}

pub fn integrator_json(cfg: &RunConfig) -> Value {
    let i = &cfg.integrator;
    json!({
        "method": match i.method { Method::Rk4 => "rk4", Method::Rk45 => "rk45" },
        "dt": num(i.dt),
        "rtol": num(i.rtol),
        "atol": num(i.atol),
        "t_end": num(i.t_end),
        "stride": i.sample_stride,
    })
}

fn table(traj: &Trajectory, spec: &[f64], lax: &[Option<f64>]) -> Table {
    let n = traj.states.first().map_or(0, |x| x.n());
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|k| format!("q_{k}")));
    header.extend((1..=n).map(|k| format!("p_{k}")));
    header.extend(["H".into(), "spec_drift".into(), "lax_residual".into()]);
    let mut t = Table::new(header);
    for (k, x) in traj.states.iter().enumerate() {
        let mut row = vec![fmt_f64(traj.times[k])];
        row.extend(x.q().iter().map(|&v| fmt_f64(v)));
        row.extend(x.p().iter().map(|&v| fmt_f64(v)));
        row.push(fmt_f64(traj.energy[k]));
        row.push(fmt_f64(spec[k]));
        row.push(
            lax.get(k)
                .copied()
                .flatten()
                .map(fmt_f64)
                .unwrap_or_default(),
        );
        t.push(row);
    }
    t
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let c = &cfg.couplings;
    let x0 = initial_point(cfg)?;
    let (traj, abort) = match integrate(&x0, c, &cfg.integrator) {
        Ok(t) => (t, None),
        Err(Error::WallApproach { t, partial }) => (*partial, Some(t)),
        Err(e) => return Err(e),
    };
    let spec = spectral_drift_series(&traj, c)?;
    let lax = if traj.len() >= 3 {
        lax_residual_series(&traj, c)?
    } else {
        vec![None; traj.len()]
    };

    let mut m = report::header("simulate");
    m.insert("n".into(), json!(cfg.n));
    m.insert("couplings".into(), report::couplings(c));
    m.insert(
        "initial_point".into(),
        json!({
            "source": if cfg.point.is_some() { "explicit" } else { "seeded" },
            "seed": if cfg.point.is_some() { Value::Null } else { json!(cfg.seed) },
            "q": report::nums(x0.q()),
            "p": report::nums(x0.p()),
        }),
    );
    m.insert("integrator".into(), integrator_json(cfg));
    m.insert("rows".into(), json!(traj.len()));
    m.insert("max_energy_drift".into(), num(traj.energy_drift()));
    m.insert(
        "max_spec_drift".into(),
        num(spec.iter().copied().fold(0.0, f64::max)),
    );
    m.insert(
        "final_spec_drift".into(),
        num(spec.last().copied().unwrap_or(0.0)),
    );
    m.insert(
        "max_lax_residual".into(),
        lax.iter()
            .flatten()
            .copied()
            .reduce(f64::max)
            .map_or(Value::Null, num),
    );
    if let Some(last) = traj.states.last() {
        m.insert("final_point".into(), report::point(last));
    }
    let exit = match abort {
        None => {
            m.insert("status".into(), json!("ok"));
            EXIT_PASS
        }
        Some(t) => {
            m.insert("status".into(), json!("aborted"));
            m.insert(
                "error".into(),
                json!(format!(
                    "trajectory approached a chamber wall at t = {}",
                    fmt_f64(t)
                )),
            );
            EXIT_ABORT
        }
    };
    Ok(Outcome {
        exit,
        report: Value::Object(m),
        table: Some(table(&traj, &spec, &lax)),
    })
}
