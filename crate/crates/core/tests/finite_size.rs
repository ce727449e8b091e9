//! Frozen values for the ball constructions at desk-scale n, computed by a
//! separate dense enumeration. At these sizes the OR-extended pair is still
//! better correlated, relative to rhs_similar, than the ball with its dual.

use monocorr::bounds::BoundReport;
use monocorr::families::{example31, hamming_ball_mu};

// (n, a, cov/rhs_similar for (A', B'), cov/rhs_similar for (A, dual A))
const FROZEN: [(usize, f64, f64, f64); 6] = [
    (12, 0.25, 0.3360942906971017, 0.2612519949946574),
    (12, 0.125, 0.3568154483267739, 0.24303009025191621),
    (12, 0.0625, 0.4387208084749896, 0.24303009025191621),
    (18, 0.25, 0.3631438199961473, 0.2806903333137633),
    (18, 0.125, 0.371353181202544, 0.2494506975532076),
    (18, 0.0625, 0.3860172547592792, 0.2433886628600698),
];

fn similar_ratio(f: &monocorr::FunctionTable, g: &monocorr::FunctionTable) -> f64 {
    let r = BoundReport::new(f, g).unwrap();
    r.cov / r.rhs.similar
}

#[test]
fn extended_pair_ratio_matches_frozen_values() {
    for (n, a, ext, _) in FROZEN {
        let e = example31(n, a).unwrap();
        let got = similar_ratio(&e.a_prime, &e.b_prime.table);
        assert!((got - ext).abs() < 1e-9, "n={n} a={a}: {got} vs {ext}");
    }
}

#[test]
fn ball_dual_ratio_matches_frozen_values() {
    for (n, a, _, dual) in FROZEN {
        let a_ball = hamming_ball_mu(n, a).unwrap().table;
        let got = similar_ratio(&a_ball, &a_ball.dual().unwrap());
        assert!((got - dual).abs() < 1e-9, "n={n} a={a}: {got} vs {dual}");
    }
}

#[test]
fn extended_pair_is_not_yet_below_ball_dual() {
    for (n, a, ext, dual) in FROZEN {
        assert!(ext > dual, "n={n} a={a}");
    }
}
