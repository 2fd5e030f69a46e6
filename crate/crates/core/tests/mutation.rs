use scatterlab::csd::build_csd;
use scatterlab::mutation::{csd_equivalent, degree_factor, mutate_csd, mutated_diagram, support_transported};
use scatterlab::presets;
use std::time::Instant;

#[test]
fn mutation_commutes_with_construction() {
    for name in ["A2", "B2", "C2", "G2", "A1(1)", "A3"] {
        let s = presets::seed(name).unwrap();
        for k in 0..s.rank() {
            for level in 2..=4 {
                let start = Instant::now();
                let mutated = mutated_diagram(&s, k, level).unwrap();
                let rebuilt = build_csd(&s.mutate(k).unwrap(), level).unwrap();
                assert!(csd_equivalent(&mutated, &rebuilt, level).unwrap(), "{name} k={k} level={level}");
                assert_eq!(mutated.normals(), rebuilt.normals(), "{name} k={k} level={level}");
                assert!(start.elapsed().as_secs() < 60, "{name} k={k} level={level}");
            }
        }
    }
}

#[test]
fn supports_are_transported() {
    for name in ["A2", "B2", "G2", "A1(1)", "A3"] {
        let s = presets::seed(name).unwrap();
        for k in 0..s.rank() {
            let level = 4;
            let d = build_csd(&s, level * degree_factor(&s.data, k)).unwrap();
            let m = mutated_diagram(&s, k, level).unwrap();
            assert!(support_transported(&d, &m, k).unwrap(), "{name} k={k}");
        }
    }
}

#[test]
fn mutating_twice_returns_the_diagram() {
    for name in ["A2", "B2", "G2", "A3"] {
        let s = presets::seed(name).unwrap();
        for k in 0..s.rank() {
            let level = 3;
            let back = s.mutate(k).unwrap().mutate(k).unwrap();
            assert_eq!(back.data, s.data, "{name} k={k}");
            let once = mutated_diagram(&s, k, level * degree_factor(&s.mutate(k).unwrap().data, k)).unwrap();
            let mut twice = mutate_csd(&once, k).unwrap();
            twice.cutoff = level;
            twice.walls.retain(|w| w.degree() <= level);
            let original = build_csd(&s, level).unwrap();
            assert!(csd_equivalent(&twice, &original, level).unwrap(), "{name} k={k}");
            assert_eq!(twice.normals(), original.normals(), "{name} k={k}");
        }
    }
}

#[test]
fn a2_mutation_is_a_relabelling() {
    // Both A2 seeds are of type A2, so the mutated diagram again has three walls.
    let s = presets::seed("A2").unwrap();
    for k in 0..2 {
        let m = mutated_diagram(&s, k, 5).unwrap();
        assert_eq!(m.merged().walls.len(), 3, "k={k}");
    }
}
