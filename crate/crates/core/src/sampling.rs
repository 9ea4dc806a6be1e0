//! Seeded random points and couplings for property sweeps.
//!
//! Every sample draws from its own ChaCha8 stream (`seed`, stream = sample
//! index), so a sweep gives the same numbers however it is split across threads.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{CouplingParams, PhasePoint};

/// Width added on top of the minimal gap for each spacing.
pub const GAP_SPREAD: f64 = 0.6;

pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Positions `q_1 > … > q_n > 0` with `q_n` and every neighbouring gap in
/// `[min_gap, min_gap + GAP_SPREAD)`, momenta uniform in `[-1, 1)`.
pub fn random_point<R: Rng + ?Sized>(n: usize, min_gap: f64, rng: &mut R) -> Result<PhasePoint> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if !(min_gap.is_finite() && min_gap > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "min_gap must be positive, got {min_gap}"
        )));
    }
    let mut q = Vec::with_capacity(n);
    let mut acc = 0.0;
    for _ in 0..n {
        acc += min_gap + rng.random_range(0.0..GAP_SPREAD);
        q.push(acc);
    }
    q.reverse();
    let p = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    PhasePoint::new(q, p)
}

/// Positions only, as for [`random_point`].
pub fn random_positions<R: Rng + ?Sized>(n: usize, min_gap: f64, rng: &mut R) -> Result<Vec<f64>> {
    Ok(random_point(n, min_gap, rng)?.q().to_vec())
}

/// `|μ|, |ν|` uniform in `[0.5, 2]` with random signs, `κ` uniform in `[-1, 1]`.
/// Draws with `|ν + κ| < 1e-3` are redrawn.
pub fn random_couplings<R: Rng + ?Sized>(rng: &mut R) -> CouplingParams {
    loop {
        let signed = |r: &mut R| {
            let v: f64 = r.random_range(0.5..=2.0);
            if r.random_bool(0.5) {
                v
            } else {
                -v
            }
        };
        let mu = signed(rng);
        let nu = signed(rng);
        let kappa: f64 = rng.random_range(-1.0..=1.0);
        if (nu + kappa).abs() < 1e-3 {
            continue;
        }
        if let Ok(c) = CouplingParams::new(mu, nu, kappa) {
            return c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::chamber_gap;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: f64 = sample_rng(7, 3).random();
        let b: f64 = sample_rng(7, 3).random();
        let c: f64 = sample_rng(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn points_respect_gap() {
        for i in 0..200 {
            let mut rng = sample_rng(1, i);
            let x = random_point(4, 0.1, &mut rng).unwrap();
            assert!(chamber_gap(x.q()) >= 0.1);
            assert!(x.p().iter().all(|p| p.abs() <= 1.0));
        }
    }

    #[test]
    fn couplings_in_range() {
        let mut rng = sample_rng(2, 0);
        for _ in 0..500 {
            let c = random_couplings(&mut rng);
            assert!((0.5..=2.0).contains(&c.mu.abs()));
            assert!((0.5..=2.0).contains(&c.nu.abs()));
            assert!((-1.0..=1.0).contains(&c.kappa));
        }
    }

    #[test]
    fn bad_arguments() {
        let mut rng = sample_rng(0, 0);
        assert!(random_point(0, 0.1, &mut rng).is_err());
        assert!(random_point(2, 0.0, &mut rng).is_err());
    }
}
