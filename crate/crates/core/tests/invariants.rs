use proptest::prelude::*;
use suther_lax::dynamics::kak_decompose;
use suther_lax::liealg::{algebra_residual, build_basis, max_abs, re, CMatrix};
use suther_lax::model::{
    b_matrix, b_matrix_via_r, hamiltonian, lax_matrix, r_matrix_basis, r_matrix_standard,
    CouplingParams, PhasePoint,
};
use suther_lax::poisson::{rmatrix_identity_residual, BracketMethod};

/// Positions built from the smallest one upward, `gaps[0]` being `q_n`.
fn point(gaps: Vec<f64>, p: Vec<f64>) -> PhasePoint {
    let mut q: Vec<f64> = gaps
        .iter()
        .scan(0.0, |acc, g| {
            *acc += g;
            Some(*acc)
        })
        .collect();
    q.reverse();
    PhasePoint::new(q, p).unwrap()
}

fn phase_point(n: usize) -> impl Strategy<Value = PhasePoint> {
    (
        prop::collection::vec(0.1..1.2f64, n),
        prop::collection::vec(-1.5..1.5f64, n),
    )
        .prop_map(|(g, p)| point(g, p))
}

fn any_point() -> impl Strategy<Value = PhasePoint> {
    (1usize..=3).prop_flat_map(phase_point)
}

fn couplings() -> impl Strategy<Value = CouplingParams> {
    (-2.0..2.0f64, -2.0..2.0f64, -1.0..1.0f64)
        .prop_filter("valid", |(mu, nu, k)| {
            mu.abs() > 0.1 && nu.abs() > 0.1 && (nu + k).abs() > 1e-2
        })
        .prop_map(|(mu, nu, k)| CouplingParams::new(mu, nu, k).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lax_matrix_lies_in_the_algebra(x in any_point(), c in couplings()) {
        let l = lax_matrix(&x, &c).value;
        prop_assert!(algebra_residual(&l) < 1e-12 * max_abs(&l).max(1.0));
        prop_assert!(l.trace().norm() < 1e-12);
    }

    #[test]
    fn energy_is_a_quarter_trace_square(x in any_point(), c in couplings()) {
        let l = lax_matrix(&x, &c).value;
        let h = hamiltonian(&x, &c);
        let q = (&l * &l).trace() * 0.25;
        prop_assert!((q - re(h)).norm() < 1e-10 * h.abs().max(1.0));
    }

    #[test]
    fn r_matrix_views_agree(x in any_point()) {
        let basis = build_basis(x.n()).unwrap();
        let rb = r_matrix_basis(x.q(), &basis).unwrap();
        let rs = r_matrix_standard(x.q()).unwrap();
        prop_assert!(max_abs(&(rb.tensor.matrix() - rs.tensor.matrix())) < 1e-12);
    }

    #[test]
    fn bracket_identity_holds(x in any_point(), c in couplings()) {
        let r = r_matrix_basis(x.q(), &build_basis(x.n()).unwrap()).unwrap();
        let rep = rmatrix_identity_residual(&x, &c, &r, BracketMethod::Analytic).unwrap();
        prop_assert!(rep.residual_max < 1e-8, "residual {}", rep.residual_max);
    }

    #[test]
    fn partner_ignores_momenta(
        x in phase_point(2),
        p in prop::collection::vec(-2.0..2.0f64, 2),
        c in couplings(),
    ) {
        let basis = build_basis(2).unwrap();
        let b = b_matrix(x.q(), &c).unwrap().value;
        let b1 = b_matrix_via_r(&x, &c, &basis).unwrap();
        let b2 = b_matrix_via_r(&x.with_p(p).unwrap(), &c, &basis).unwrap();
        prop_assert!(max_abs(&(&b1 - &b)) < 1e-12);
        prop_assert!(max_abs(&(&b2 - &b)) < 1e-12);
        prop_assert!(max_abs(&(&b + b.adjoint())) < 1e-12);
    }

    #[test]
    fn kak_recovers_positions(x in any_point(), c in couplings(), t in 0.0..0.5f64) {
        // e^{Q} e^{tL} with L Hermitian lies in the group.
        let n = x.n();
        let l = lax_matrix(&x, &c).value;
        let mut eq = CMatrix::zeros(2 * n, 2 * n);
        for (k, &v) in x.q().iter().enumerate() {
            eq[(k, k)] = re(v.exp());
            eq[(n + k, n + k)] = re((-v).exp());
        }
        let herm = (&l + l.adjoint()) * re(0.5);
        let y = &eq * (herm * re(t)).exp();
        let f = kak_decompose(&y).unwrap();
        prop_assert!(max_abs(&(f.reconstruct() - &y)) < 1e-9 * max_abs(&y).max(1.0));
        let at_rest = kak_decompose(&eq).unwrap();
        for (a, b) in at_rest.q.iter().zip(x.q()) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }
}
