mod common;

use common::{config, rq, theta_near};
use proptest::prelude::*;
use scatterlab::csd::{build_csd, g_cones};
use scatterlab::lattice::{MTilde, MVec};
use scatterlab::presets;
use scatterlab::rat::{q, qi, qvec, Q};
use scatterlab::seriesrep::TruncatedSeries;
use scatterlab::theta::{
    broken_lines, check_theta_mutation, check_theta_transitivity, cone_containing, theta, theta_is_positive,
    theta_via_path,
};

fn mt(m: &[i64]) -> MTilde {
    MTilde::new(qvec(m), vec![0; m.len()])
}

#[test]
fn theta_of_zero_is_one() {
    let d = build_csd(&presets::seed("B2").unwrap(), 4).unwrap();
    let t = theta(&d, &mt(&[0, 0]), &[q(-3, 7), q(5, 11)], 4).unwrap();
    assert_eq!(t, TruncatedSeries::one(2, 4));
}

#[test]
fn single_line_inside_a_g_cone() {
    for name in ["A2", "B2", "G2"] {
        let s = presets::seed(name).unwrap();
        let d = build_csd(&s, 5).unwrap();
        let avoid = d.hyperplanes();
        for (i, (_, cone)) in g_cones(&s, 10).unwrap().iter().enumerate() {
            let m: Vec<i64> = cone
                .rays()
                .iter()
                .fold(vec![0, 0], |acc, r| acc.iter().zip(r).map(|(a, b)| a + i64::try_from(b).unwrap()).collect());
            let m0 = mt(&m);
            let q_end = cone.general_point(i as u64, &avoid).unwrap();
            let lines = broken_lines(&d, &m0, &q_end, 5).unwrap();
            assert_eq!(lines.len(), 1, "{name} cone {i}");
            assert!(lines[0].bends.is_empty());
        }
    }
}

#[test]
fn a2_negative_direction_matches_path_expansion() {
    // m0 = -f_1 seen from C^+: one straight line and one line bending once on e_1^perp.
    let s = presets::seed("A2").unwrap();
    let d = build_csd(&s, 4).unwrap();
    let m0 = mt(&[-1, 0]);
    let q_end = vec![q(5, 3), q(2, 7)];
    let lines = broken_lines(&d, &m0, &q_end, 4).unwrap();
    assert_eq!(lines.len(), 2);
    let cones = g_cones(&s, 8).unwrap();
    let via = theta_via_path(&d, &m0, cone_containing(&cones, &m0.m).unwrap(), &q_end, 4).unwrap();
    assert_eq!(theta(&d, &m0, &q_end, 4).unwrap(), via);
    // Independent expansion: x^{-f_1} (1 + x^{p_1^*(e_1)}).
    let mut want = TruncatedSeries::monomial(m0, 4);
    want.add_term(vec![1, 0], Q::from_integer(1.into()));
    assert_eq!(via, want);
}

#[test]
fn cross_cone_cases_agree_with_path_products() {
    let mut cases = 0;
    for name in ["A2", "B2"] {
        let s = presets::seed(name).unwrap();
        let d = build_csd(&s, 4).unwrap();
        let cones = g_cones(&s, 10).unwrap();
        for m in [
            [-1, 0],
            [0, -1],
            [-1, -1],
            [-2, 1],
            [1, -2],
            [-1, 2],
            [2, -1],
            [-3, 1],
            [1, -3],
            [-2, -1],
            [-1, 3],
            [3, -2],
        ] {
            let m0 = mt(&m);
            let cone = cone_containing(&cones, &m0.m).unwrap();
            let q_end = vec![q(13, 7), q(9, 5)];
            let a = theta(&d, &m0, &q_end, 4).unwrap();
            let b = theta_via_path(&d, &m0, cone, &q_end, 4).unwrap();
            assert_eq!(a, b, "{name} m0={m:?}");
            cases += 1;
        }
    }
    assert!(cases >= 24);
}

#[test]
fn transitivity_across_walls() {
    let a2 = build_csd(&presets::seed("A2").unwrap(), 4).unwrap();
    // Adjacent chambers of A2 across the wall (1,1), whose support is the ray (1,-1).
    let c = check_theta_transitivity(&a2, &mt(&[-1, 1]), &[q(7, 4), q(-2, 9)], &[q(2, 7), q(-11, 5)], 4).unwrap();
    assert!(c.agrees(), "{} vs {}", c.left, c.right);
    let b2 = build_csd(&presets::seed("B2").unwrap(), 4).unwrap();
    // From C^+ to the fourth quadrant, crossing e_2^perp and then the outgoing walls.
    for m in [[-1, 0], [0, -1], [2, -1], [-1, 1]] {
        let c = check_theta_transitivity(&b2, &mt(&m), &[q(3, 2), q(2, 3)], &[q(1, 5), q(-7, 3)], 4).unwrap();
        assert!(c.agrees(), "B2 m0={m:?}: {} vs {}", c.left, c.right);
    }
    // Same chamber: the path crosses nothing.
    let c = check_theta_transitivity(&b2, &mt(&[-1, 0]), &[q(3, 2), q(2, 3)], &[q(1, 2), q(7, 3)], 4).unwrap();
    assert!(c.agrees() && c.left == c.right);
}

#[test]
fn mutation_of_theta_functions() {
    let a2 = presets::seed("A2").unwrap();
    let c = check_theta_mutation(&a2, 0, &mt(&[-1, 1]), &[q(3, 2), q(5, 4)], 4).unwrap();
    assert!(c.agrees(), "{} vs {}", c.left, c.right);
    // Q and m0 both in H_1^-: both sides are the plain monomial.
    let c = check_theta_mutation(&a2, 0, &mt(&[-2, -3]), &[q(-3, 2), q(-5, 4)], 4).unwrap();
    assert!(c.agrees());
    assert_eq!(c.left.terms.len(), 1);
    for name in ["B2", "C2", "A1(1)"] {
        let s = presets::seed(name).unwrap();
        for k in 0..2 {
            for q_end in [vec![q(3, 2), q(5, 4)], vec![q(-7, 5), q(2, 3)], vec![q(4, 9), q(-9, 4)]] {
                for m in [[-1, 0], [1, -1], [-1, 2]] {
                    let c = check_theta_mutation(&s, k, &mt(&m), &q_end, 3).unwrap();
                    assert!(c.agrees(), "{name} k={k} m0={m:?}: {} vs {}", c.left, c.right);
                }
            }
        }
    }
}

#[test]
fn broken_line_counts_correspond_under_mutation() {
    // Finite type: every theta function is a polynomial, so both line sets are complete at this cutoff.
    let s = presets::seed("A2").unwrap();
    let level = 6;
    let d = build_csd(&s, level).unwrap();
    let s2 = s.mutate(0).unwrap();
    let d2 = build_csd(&s2, level).unwrap();
    let data = &s.data;
    for m in [[-1, 0], [0, -1], [-1, 1], [1, 1]] {
        for q_end in [vec![q(3, 2), q(5, 4)], vec![q(-7, 5), q(2, 3)]] {
            let m0 = mt(&m);
            let n1 = broken_lines(&d, &m0, &q_end, level).unwrap().len();
            let q2 = data.m_coordinate_change(0, &data.t_k(0, &q_end)).unwrap();
            let m02 = scatterlab::theta::mtilde_coordinate_change(data, 0, &data.t_tilde_k(0, &m0)).unwrap();
            let n2 = broken_lines(&d2, &m02, &q2, level).unwrap().len();
            assert_eq!(n1, n2, "m0={m:?} Q={q_end:?}");
        }
    }
}

fn random_point(r: usize) -> impl Strategy<Value = MVec> {
    prop::collection::vec((-400i64..400).prop_filter("nonzero", |x| *x != 0), r)
        .prop_map(|v| v.into_iter().map(rq).collect())
}

fn random_exponent(r: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, r)
}

proptest! {
    #![proptest_config(config(50))]

    #[test]
    fn straight_line_regime(m in prop::collection::vec(0i64..=3, 2), q in prop::collection::vec(1i64..400, 2)) {
        let d = build_csd(&presets::seed("B2").unwrap(), 4).unwrap();
        let q_end: MVec = q.into_iter().map(rq).collect();
        let m0 = mt(&m);
        let lines = broken_lines(&d, &m0, &q_end, 4).unwrap();
        prop_assert_eq!(lines.len(), 1);
        prop_assert!(lines[0].bends.is_empty());
        prop_assert_eq!(theta(&d, &m0, &q_end, 4).unwrap(), TruncatedSeries::monomial(m0, 4));
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn positivity_rank2(which in 0usize..4, m in random_exponent(2), q_end in random_point(2)) {
        let name = ["A2", "B2", "G2", "A1(1)"][which];
        let d = build_csd(&presets::seed(name).unwrap(), 5).unwrap();
        let t = theta_near(&d, &mt(&m), &q_end, 5);
        prop_assert!(theta_is_positive(&t), "{} m0={:?}: {}", name, m, t);
    }

    #[test]
    fn positivity_a3(m in random_exponent(3), q_end in random_point(3)) {
        let d = build_csd(&presets::seed("A3").unwrap(), 4).unwrap();
        let t = theta_near(&d, &mt(&m), &q_end, 4);
        prop_assert!(theta_is_positive(&t), "m0={:?}: {}", m, t);
    }

    #[test]
    fn degree_filtration(m in random_exponent(2), q_end in random_point(2)) {
        let s = presets::seed("A1(1)").unwrap();
        let big = build_csd(&s, 5).unwrap();
        let small = build_csd(&s, 3).unwrap();
        let m0 = mt(&m);
        if big.in_support(&q_end) {
            return Ok(());
        }
        let (Ok(t5), Ok(t3)) = (theta(&big, &m0, &q_end, 5), theta(&small, &m0, &q_end, 3)) else {
            return Ok(());
        };
        prop_assert_eq!(t5.truncate(3), t3);
    }

    #[test]
    fn constant_within_a_chamber(m in random_exponent(2), t in 1i64..25) {
        // Points of the open chamber of B2 between the rays (1,-2) and (0,-1).
        let d = build_csd(&presets::seed("B2").unwrap(), 5).unwrap();
        let p1 = vec![q(2, 7), qi(-1)];
        let p2 = vec![q(t, 50), qi(-1)];
        let m0 = mt(&m);
        prop_assert_eq!(theta_near(&d, &m0, &p1, 5), theta_near(&d, &m0, &p2, 5));
    }
}
