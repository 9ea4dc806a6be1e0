use crate::error::{Error, Result};
use crate::model::{
    chamber_gap, hamiltonian, hamiltonian_dq, CouplingParams, PhasePoint, MIN_CHAMBER_GAP,
};

/// `(q̇, ṗ) = (p, −∂H/∂q)`.
pub fn hamilton_rhs(x: &PhasePoint, c: &CouplingParams) -> (Vec<f64>, Vec<f64>) {
    let dp = hamiltonian_dq(x.q(), c).into_iter().map(|g| -g).collect();
    (x.p().to_vec(), dp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Classical fourth-order Runge–Kutta with fixed step `dt`.
    Rk4,
    /// Dormand–Prince 5(4) with error control; `dt` is the output spacing.
    Rk45,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    pub dt: f64,
    pub rtol: f64,
    pub atol: f64,
    pub t_end: f64,
    /// Record every `sample_stride`-th grid point.
    pub sample_stride: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::Rk45,
            dt: 1e-3,
            rtol: 1e-10,
            atol: 1e-12,
            t_end: 2.0,
            sample_stride: 10,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, name: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        positive(self.dt, "dt")?;
        positive(self.t_end, "t_end")?;
        if self.method == Method::Rk45 {
            positive(self.rtol, "rtol")?;
            positive(self.atol, "atol")?;
        }
        if self.sample_stride == 0 {
            return Err(Error::InvalidConfig("stride must be at least 1".into()));
        }
        Ok(())
    }

    /// Times of the recorded samples.
    pub fn sample_times(&self) -> Vec<f64> {
        let steps = (self.t_end / self.dt).round() as usize;
        (0..=steps)
            .step_by(self.sample_stride)
            .map(|k| k as f64 * self.dt)
            .collect()
    }
}

/// Sampled phase-space curve with the energy at each sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PhasePoint>,
    pub energy: Vec<f64>,
}

impl Trajectory {
    fn start(x0: &PhasePoint, c: &CouplingParams) -> Self {
        Self {
            times: vec![0.0],
            states: vec![x0.clone()],
            energy: vec![hamiltonian(x0, c)],
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `max_t |H(t) − H(0)|`.
    pub fn energy_drift(&self) -> f64 {
        let Some(&e0) = self.energy.first() else {
            return 0.0;
        };
        self.energy
            .iter()
            .map(|e| (e - e0).abs())
            .fold(0.0, f64::max)
    }

    fn push(&mut self, t: f64, x: PhasePoint, c: &CouplingParams) {
        self.energy.push(hamiltonian(&x, c));
        self.times.push(t);
        self.states.push(x);
    }
}

type State = Vec<f64>;

fn pack(x: &PhasePoint) -> State {
    x.q().iter().chain(x.p()).copied().collect()
}

fn derivative(y: &[f64], c: &CouplingParams) -> State {
    let n = y.len() / 2;
    let (q, p) = y.split_at(n);
    let mut out = p.to_vec();
    out.extend(hamiltonian_dq(q, c).into_iter().map(|g| -g));
    out
}

fn axpy(y: &[f64], h: f64, terms: &[(&[f64], f64)]) -> State {
    let mut out = y.to_vec();
    for (k, w) in terms {
        for (o, v) in out.iter_mut().zip(k.iter()) {
            *o += h * w * v;
        }
    }
    out
}

fn unpack(y: &[f64], t: f64, partial: &Trajectory) -> Result<PhasePoint> {
    let n = y.len() / 2;
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::StepFailure {
            t,
            reason: "non-finite state".into(),
        });
    }
    let q = y[..n].to_vec();
    if !(chamber_gap(&q) >= MIN_CHAMBER_GAP) {
        return Err(Error::WallApproach {
            t,
            partial: Box::new(partial.clone()),
        });
    }
    PhasePoint::new(q, y[n..].to_vec())
}

fn rk4_step(y: &[f64], h: f64, c: &CouplingParams) -> State {
    let k1 = derivative(y, c);
    let k2 = derivative(&axpy(y, h, &[(&k1, 0.5)]), c);
    let k3 = derivative(&axpy(y, h, &[(&k2, 0.5)]), c);
    let k4 = derivative(&axpy(y, h, &[(&k3, 1.0)]), c);
    axpy(
        y,
        h,
        &[
            (&k1, 1.0 / 6.0),
            (&k2, 1.0 / 3.0),
            (&k3, 1.0 / 3.0),
            (&k4, 1.0 / 6.0),
        ],
    )
}

// Dormand–Prince tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// One Dormand–Prince step: fifth-order solution and scaled error norm.
fn dopri_step(y: &[f64], h: f64, c: &CouplingParams, rtol: f64, atol: f64) -> (State, f64) {
    let k1 = derivative(y, c);
    let k2 = derivative(&axpy(y, h, &[(&k1, A21)]), c);
    let k3 = derivative(&axpy(y, h, &[(&k1, A31), (&k2, A32)]), c);
    let k4 = derivative(&axpy(y, h, &[(&k1, A41), (&k2, A42), (&k3, A43)]), c);
    let k5 = derivative(
        &axpy(y, h, &[(&k1, A51), (&k2, A52), (&k3, A53), (&k4, A54)]),
        c,
    );
    let k6 = derivative(
        &axpy(
            y,
            h,
            &[(&k1, A61), (&k2, A62), (&k3, A63), (&k4, A64), (&k5, A65)],
        ),
        c,
    );
    let y_new = axpy(
        y,
        h,
        &[(&k1, B1), (&k3, B3), (&k4, B4), (&k5, B5), (&k6, B6)],
    );
    let k7 = derivative(&y_new, c);
    let err_vec = axpy(
        &vec![0.0; y.len()],
        h,
        &[
            (&k1, E1),
            (&k3, E3),
            (&k4, E4),
            (&k5, E5),
            (&k6, E6),
            (&k7, E7),
        ],
    );
    let sq: f64 = err_vec
        .iter()
        .zip(y.iter().zip(&y_new))
        .map(|(e, (a, b))| {
            let scale = atol + rtol * a.abs().max(b.abs());
            (e / scale).powi(2)
        })
        .sum();
    let err = if y_new.iter().all(|v| v.is_finite()) {
        (sq / y.len() as f64).sqrt()
    } else {
        f64::INFINITY
    };
    (y_new, err)
}

/// Adaptive integration from `t0` to `t1`; `h` carries the step size across calls.
fn dopri_segment(
    y: &mut State,
    t0: f64,
    t1: f64,
    h: &mut f64,
    c: &CouplingParams,
    rtol: f64,
    atol: f64,
) -> Result<()> {
    let mut t = t0;
    let mut rejections = 0usize;
    while t < t1 {
        let last = t + *h >= t1;
        let step = if last { t1 - t } else { *h };
        if step <= f64::EPSILON * t1.abs().max(1.0) * 4.0 && !last {
            return Err(Error::StepFailure {
                t,
                reason: format!("step size underflow ({step:e})"),
            });
        }
        let (y_new, err) = dopri_step(y, step, c, rtol, atol);
        if err <= 1.0 {
            *y = y_new;
            t = if last { t1 } else { t + step };
            rejections = 0;
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            // A clipped final step says nothing about the natural step size.
            if !last {
                *h = step * factor;
            } else {
                *h = (*h).max(step * factor.min(1.0));
            }
        } else {
            rejections += 1;
            if rejections > 100 {
                return Err(Error::StepFailure {
                    t,
                    reason: "too many rejected steps".into(),
                });
            }
            let factor = if err.is_finite() {
                (0.9 * err.powf(-0.2)).clamp(0.1, 1.0)
            } else {
                0.1
            };
            *h = step * factor;
        }
    }
    Ok(())
}

/// Integrates Hamilton's equations, recording every `sample_stride`-th grid point.
pub fn integrate(
    x0: &PhasePoint,
    c: &CouplingParams,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    match cfg.method {
        Method::Rk4 => {
            let steps = (cfg.t_end / cfg.dt).round() as usize;
            let mut traj = Trajectory::start(x0, c);
            let mut y = pack(x0);
            for k in 1..=steps {
                y = rk4_step(&y, cfg.dt, c);
                let t = k as f64 * cfg.dt;
                let x = unpack(&y, t, &traj)?;
                if k % cfg.sample_stride == 0 {
                    traj.push(t, x, c);
                }
            }
            Ok(traj)
        }
        Method::Rk45 => integrate_at(x0, c, &cfg.sample_times(), cfg.rtol, cfg.atol),
    }
}

/// Adaptive integration reporting the state at the requested times.
/// `times` must start at zero and increase strictly.
pub fn integrate_at(
    x0: &PhasePoint,
    c: &CouplingParams,
    times: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<Trajectory> {
    if times.first() != Some(&0.0) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidConfig(
            "sample times must start at 0 and increase strictly".into(),
        ));
    }
    let mut traj = Trajectory::start(x0, c);
    let mut y = pack(x0);
    let mut h = (times.get(1).copied().unwrap_or(1.0) * 0.1).min(1e-2);
    for w in times.windows(2) {
        dopri_segment(&mut y, w[0], w[1], &mut h, c, rtol, atol)?;
        let x = unpack(&y, w[1], &traj)?;
        traj.push(w[1], x, c);
    }
    Ok(traj)
}
