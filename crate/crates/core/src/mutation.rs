//! Mutation of scattering diagrams and equivalence testing.
//!
//! Mutating in direction `k` splits every wall along `e_k^perp`, moves the part
//! in `H_k^+ = {z_k >= 0}` by `S_k`, rewrites everything in the mutated seed's
//! coordinates and re-joins incoming hyperplanes that were cut in two.

use crate::cones::{Cone, IVec};
use crate::csd::{check_consistency, path_ordered_product, perp, ScatteringDiagram, Wall};
use crate::lattice::{FixedData, MVec};
use crate::rat::q;
use crate::seriesrep::signed_products_equivalent;
use crate::{Error, Result};
use num_traits::{Signed, Zero};
use rand::Rng;

/// `1 + max_j |b_kj|`, bounding how much mutation in direction `k` can shrink degrees.
pub fn degree_factor(data: &FixedData, k: usize) -> i64 {
    1 + data.b()[k].iter().map(|x| x.abs()).max().unwrap_or(0)
}

/// Cutoff at which to build a diagram so that its mutation in direction `k` is
/// complete up to degree `level`.
pub fn mutation_level(data: &FixedData, k: usize, level: i64) -> i64 {
    level * degree_factor(data, k)
}

fn map_wall(data: &FixedData, k: usize, support: &Cone, normal: &[i64], plus: bool, w: &Wall) -> Result<Wall> {
    let (support, normal) = if plus {
        (support.image(|z| data.s_k(k, z)), data.s_k_star(k, normal))
    } else {
        (support.clone(), normal.to_vec())
    };
    let support = support.image(|z| data.m_coordinate_change(k, z).expect("direction checked"));
    let normal = data.coordinate_change(k, &normal)?;
    if normal.iter().any(|&x| x < 0) {
        return Err(Error::Internal(format!(
            "mutated normal {normal:?} leaves the positive cone; the admissible region is violated"
        )));
    }
    Wall::new(&data.mutate(k)?, support, normal, w.t, w.s.clone())
}

/// Whether two supports are the complementary closed halves of one hyperplane.
fn complementary_halves(a: &Cone, b: &Cone) -> bool {
    let (fa, fb) = (a.facets(), b.facets());
    fa.len() == 1
        && fb.len() == 1
        && a.rays().len() == 1
        && b.rays().len() == 1
        && a.equations() == b.equations()
        && fa[0].iter().zip(&fb[0]).all(|(x, y)| *x == -y)
}

fn rejoin(walls: Vec<Wall>) -> Vec<Wall> {
    let mut out: Vec<Wall> = Vec::new();
    let mut used = vec![false; walls.len()];
    for i in 0..walls.len() {
        if used[i] {
            continue;
        }
        let w = &walls[i];
        let partner = (i + 1..walls.len()).find(|&j| {
            !used[j]
                && walls[j].normal == w.normal
                && walls[j].t == w.t
                && walls[j].s == w.s
                && complementary_halves(&w.support, &walls[j].support)
        });
        match partner {
            Some(j) => {
                used[j] = true;
                let eq: &IVec = &w.support.equations()[0];
                out.push(Wall { support: Cone::hyperplane(eq), ..w.clone() });
            }
            None => out.push(w.clone()),
        }
        used[i] = true;
    }
    out
}

/// Mutation of a built diagram in direction `k`, expressed in the mutated seed.
///
/// The result is exact up to degree `cutoff / degree_factor`, which becomes its
/// cutoff; walls above it are dropped.
pub fn mutate_csd(d: &ScatteringDiagram, k: usize) -> Result<ScatteringDiagram> {
    let data = d.data();
    let r = d.rank();
    data.transition_matrix(k)?;
    let seed = d.seed.mutate(k)?;
    let ek = data.e(k);
    let hk = perp(data, &ek);
    let neg: IVec = hk.iter().map(|x| -x).collect();
    let mut walls = Vec::new();
    for w in &d.walls {
        if w.normal == ek {
            // The wall on e_k^perp is replaced by the one for e'_k = -e_k.
            let support = w.support.image(|z| data.m_coordinate_change(k, z).expect("direction checked"));
            walls.push(Wall::new(&seed.data, support, seed.data.e(k), w.t, w.s.clone())?);
            continue;
        }
        let minus = w.support.intersect_half(&neg);
        if minus.dim() + 1 == r {
            walls.push(map_wall(data, k, &minus, &w.normal, false, w)?);
        }
        let plus = w.support.intersect_half(&hk);
        if plus.dim() + 1 == r {
            walls.push(map_wall(data, k, &plus, &w.normal, true, w)?);
        }
    }
    let cutoff = (d.cutoff / degree_factor(data, k)).max(1);
    let walls = rejoin(walls).into_iter().filter(|w| w.degree() <= cutoff).collect();
    Ok(ScatteringDiagram::new(seed, cutoff, walls).sorted())
}

/// A straight path from a general point of `C^+` to a general point of `C^-`
/// that is admissible for both diagrams.
fn crossing_path(d1: &ScatteringDiagram, d2: &ScatteringDiagram, level: i64) -> Result<Vec<MVec>> {
    let r = d1.rank();
    let mut rng = crate::cones::sampler(0xC0DE);
    for _ in 0..64 {
        let p: MVec = (0..r).map(|_| q(rng.random_range(64..4096), 64)).collect();
        let m: MVec = (0..r).map(|_| q(-rng.random_range(64..4096), 64)).collect();
        let path = vec![p, m];
        if path_ordered_product(&d1.reduced(level), &path, level).is_ok()
            && path_ordered_product(&d2.reduced(level), &path, level).is_ok()
        {
            return Ok(path);
        }
    }
    Err(Error::NotGeneral { reason: "no admissible path from C+ to C-".into(), suggestion: None })
}

/// Whether two consistent diagrams over the same fixed data are equivalent
/// modulo `G^{>level}`, decided by their `C^+ -> C^-` path-ordered products.
pub fn csd_equivalent(d1: &ScatteringDiagram, d2: &ScatteringDiagram, level: i64) -> Result<bool> {
    if d1.data() != d2.data() {
        return crate::invalid("diagrams are over different fixed data");
    }
    for (name, d) in [("first", d1), ("second", d2)] {
        let rep = check_consistency(d, level)?;
        if let Some(f) = rep.failures.first() {
            return Err(Error::Inconsistent(format!("{name} diagram: {f}")));
        }
    }
    g_elements_equal(d1, d2, level)
}

/// Compares the `C^+ -> C^-` products without checking consistency first.
pub fn g_elements_equal(d1: &ScatteringDiagram, d2: &ScatteringDiagram, level: i64) -> Result<bool> {
    let path = crossing_path(d1, d2, level)?;
    let p1 = path_ordered_product(&d1.reduced(level), &path, level)?;
    let p2 = path_ordered_product(&d2.reduced(level), &path, level)?;
    Ok(signed_products_equivalent(d1.data(), &p1.factors, Some(&p1.signs), &p2.factors, Some(&p2.signs), level))
}

/// Checks that `T_k` maps the support of `d` into the support of `mutated` at
/// sample points of the walls of `d` whose images have degree at most the mutated cutoff.
pub fn support_transported(d: &ScatteringDiagram, mutated: &ScatteringDiagram, k: usize) -> Result<bool> {
    let data = d.data();
    let avoid = d.hyperplanes();
    for (i, w) in d.walls.iter().enumerate() {
        let z = w.support.general_point(i as u64 + 101, &avoid)?;
        if z[k].is_zero() {
            continue;
        }
        let n = if z[k].is_positive() { data.s_k_star(k, &w.normal) } else { w.normal.clone() };
        let n = data.coordinate_change(k, &n)?;
        if w.t * crate::rat::deg(&n) > mutated.cutoff {
            continue;
        }
        let moved = data.t_k(k, &z);
        let z2 = data.m_coordinate_change(k, &moved)?;
        if !mutated.in_support(&z2) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds `D_level` for the mutated seed by mutating a diagram of the original seed.
pub fn mutated_diagram(seed: &crate::lattice::Seed, k: usize, level: i64) -> Result<ScatteringDiagram> {
    let d = crate::csd::build_csd(seed, mutation_level(&seed.data, k, level))?;
    let mut m = mutate_csd(&d, k)?;
    m.cutoff = level;
    m.walls.retain(|w| w.degree() <= level);
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csd::build_csd;
    use crate::lattice::Seed;
    use crate::presets;
    use crate::rat::qvec;

    #[test]
    fn a2_mutation_matches_rebuild() {
        let s = presets::seed("A2").unwrap();
        for k in 0..2 {
            let m = mutated_diagram(&s, k, 4).unwrap();
            let rebuilt = build_csd(&s.mutate(k).unwrap(), 4).unwrap();
            assert_eq!(m.normals(), rebuilt.normals());
            assert!(csd_equivalent(&m, &rebuilt, 4).unwrap());
        }
    }

    #[test]
    fn incoming_wall_of_direction_k() {
        let s = presets::seed("A2").unwrap();
        let d = build_csd(&s, 2).unwrap();
        let m = mutate_csd(&d, 0).unwrap();
        let w = m.walls.iter().find(|w| w.normal == vec![1, 0]).unwrap();
        assert_eq!(w.support, Cone::hyperplane(&perp(m.data(), &[1, 0])));
    }

    #[test]
    fn wall_in_negative_half_is_fixed() {
        // The A2 outgoing ray R(1,-1) has z_2 < 0, so mutation in direction 2 leaves it in place.
        let s = presets::seed("A2").unwrap();
        let d = build_csd(&s, 4).unwrap();
        let m = mutate_csd(&d, 1).unwrap();
        let data = d.data();
        let z = data.m_coordinate_change(1, &qvec(&[1, -1])).unwrap();
        assert!(m.in_support(&z));
        assert!(support_transported(&d, &m, 1).unwrap());
    }

    #[test]
    fn double_mutation_returns_equivalent_diagram() {
        let s = presets::seed("B2").unwrap();
        let level = 3;
        let f = degree_factor(&s.data, 0);
        let d = build_csd(&s, level * f * f).unwrap();
        let twice = mutate_csd(&mutate_csd(&d, 0).unwrap(), 0).unwrap();
        assert_eq!(twice.data(), d.data());
        let back = ScatteringDiagram::new(Seed::initial(twice.data().clone()), twice.cutoff, twice.walls.clone());
        assert!(csd_equivalent(&back, &build_csd(&s, level).unwrap(), level).unwrap());
    }

    #[test]
    fn inequivalent_diagrams_are_detected() {
        let s = presets::seed("A2").unwrap();
        let d = build_csd(&s, 3).unwrap();
        let mut e = d.clone();
        e.walls.retain(|w| w.normal != vec![1, 1]);
        assert!(!g_elements_equal(&d, &e, 3).unwrap());
        assert!(csd_equivalent(&d, &e, 3).is_err());
        assert!(csd_equivalent(&d, &d.split_unit().unwrap(), 3).unwrap());
    }
}
