//! Broken lines and theta functions.
//!
//! A broken line for `m~0` ending at `Q` is a piecewise-linear path whose
//! segments carry monomials `c_j x^{m~_j}`. The first segment is unbounded and
//! carries `x^{m~0}`; on a segment with exponent `m~_j = (m_j, n_j)` the path
//! moves with velocity `-m_j`. Crossing a wall it may bend, replacing the
//! monomial by a term of `(1 + x^{p_1^*(t n)})^{s |<delta(n) n, m_j>|}` times it.
//!
//! Lines are enumerated backwards from `Q`: for every candidate final shift `a`
//! the search walks along `+m`, and at each wall either passes or undoes a bend
//! by `k p_1^*(n)`. The shift degree drops at every undone bend, so the search
//! terminates.

use crate::cones::{sampler, Cone};
use crate::csd::{build_csd, line_meets, path_ordered_product, ScatteringDiagram, Wall};
use crate::lattice::{FixedData, MTilde, MVec, NVec, Seed};
use crate::rat::{deg, fmt_q, q, qadd, qi, qscale, to_i64, Q};
use crate::seriesrep::TruncatedSeries;
use crate::{invalid, Error, Result};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt;

/// A bend of a broken line, recorded in forward time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bend {
    pub point: MVec,
    pub normal: NVec,
    /// The monomial is multiplied by `coefficient x^{power p_1^*(normal)}`.
    pub power: i64,
    pub coefficient: Q,
}

/// A broken line ending at a fixed point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrokenLine {
    pub initial: MTilde,
    pub bends: Vec<Bend>,
    /// Final monomial coefficient.
    pub coefficient: Q,
    /// Final shift `a` with final exponent `m~0 + p_1^*(a)`.
    pub shift: NVec,
}

impl BrokenLine {
    /// Exponent of the final monomial.
    pub fn exponent(&self, data: &FixedData) -> MTilde {
        self.initial.add(&data.p1_star(&self.shift))
    }

    /// Exponents carried by the segments, in forward order.
    pub fn segment_exponents(&self, data: &FixedData) -> Vec<MTilde> {
        let mut out = vec![self.initial.clone()];
        for b in &self.bends {
            let last = out.last().expect("nonempty").clone();
            out.push(last.add(&data.p1_star(&b.normal).scaled(b.power)));
        }
        out
    }
}

impl fmt::Display for BrokenLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} x^(m0 + {:?})", fmt_q(&self.coefficient), self.shift)?;
        for b in &self.bends {
            let p: Vec<String> = b.point.iter().map(fmt_q).collect();
            write!(f, " | bend {}*{:?} x{} at ({})", b.power, b.normal, fmt_q(&b.coefficient), p.join(","))?;
        }
        Ok(())
    }
}

/// A candidate point moved off the support of `d` by a small dyadic offset.
pub fn nudge(d: &ScatteringDiagram, z: &[Q], salt: u64) -> Option<MVec> {
    let mut rng = sampler(0x7E7A ^ salt);
    for attempt in 0..64 {
        let scale = q(1, 1 << (10 + attempt % 8));
        let cand: MVec = z.iter().map(|x| x + &scale * qi(rng.random_range(-7..=7))).collect();
        if !d.in_support(&cand) {
            return Some(cand);
        }
    }
    None
}

fn not_general(d: &ScatteringDiagram, q_end: &[Q], reason: String) -> Error {
    Error::NotGeneral { reason, suggestion: nudge(d, q_end, 1) }
}

struct Search<'a> {
    d: &'a ScatteringDiagram,
    walls: Vec<&'a Wall>,
    m0: MTilde,
    q_end: MVec,
    out: Vec<BrokenLine>,
}

impl Search<'_> {
    fn data(&self) -> &FixedData {
        self.d.data()
    }

    /// Wall crossings of the ray `p + s m`, `s > 0`, grouped by `s`.
    fn crossings(&self, p: &[Q], m: &[Q]) -> Result<Vec<(Q, Vec<usize>)>> {
        let data = self.data();
        let mut hits: Vec<(Q, usize)> = Vec::new();
        for (wi, w) in self.walls.iter().enumerate() {
            let pn = data.pairing(&w.normal, p);
            let mn = data.pairing(&w.normal, m);
            if mn.is_zero() {
                if pn.is_zero() && line_meets(&w.support, p, m, None) {
                    return Err(not_general(self.d, &self.q_end, format!("a broken line runs inside wall {wi}")));
                }
                continue;
            }
            let s = -&pn / &mn;
            if !s.is_positive() {
                continue;
            }
            let x = qadd(p, &qscale(&s, m));
            if !w.support.contains(&x) {
                continue;
            }
            if !w.support.in_relint(&x) {
                return Err(not_general(self.d, &self.q_end, format!("a broken line meets the boundary of wall {wi}")));
            }
            hits.push((s, wi));
        }
        hits.sort();
        let mut groups: Vec<(Q, Vec<usize>)> = Vec::new();
        for (s, wi) in hits {
            match groups.last_mut() {
                Some((s0, g)) if *s0 == s => {
                    if self.walls[g[0]].normal != self.walls[wi].normal {
                        return Err(not_general(self.d, &self.q_end, "a broken line passes through a joint".into()));
                    }
                    g.push(wi);
                }
                _ => groups.push((s, vec![wi])),
            }
        }
        Ok(groups)
    }

    /// Coefficients of `y^k`, `k <= kmax`, in the product of `(1 + y^t)^{s E}` over a group.
    fn bend_polynomial(&self, group: &[usize], e: &Q, kmax: i64) -> Vec<Q> {
        let mut poly = vec![Q::zero(); kmax as usize + 1];
        poly[0] = Q::one();
        for &wi in group {
            let w = self.walls[wi];
            let expo = &w.s * e;
            let mut next = vec![Q::zero(); poly.len()];
            let mut b = Q::one();
            let mut j = 0i64;
            while j * w.t <= kmax && !b.is_zero() {
                for (i, c) in poly.iter().enumerate() {
                    let idx = i + (j * w.t) as usize;
                    if idx < next.len() && !c.is_zero() {
                        next[idx] += c * &b;
                    }
                }
                b = b * (&expo - qi(j)) / qi(j + 1);
                j += 1;
            }
            poly = next;
        }
        poly
    }

    fn current_m(&self, a: &[i64]) -> MVec {
        let pa = self.data().p_star(a);
        qadd(&self.m0.m, &pa)
    }

    /// Walks backwards from `p` on a segment with shift `a`; `bends` is in backward order.
    fn trace(&mut self, p: MVec, a: NVec, bends: Vec<Bend>, final_shift: &NVec, final_coeff: &Q) -> Result<()> {
        let m = self.current_m(&a);
        let groups = if m.iter().all(|x| x.is_zero()) { Vec::new() } else { self.crossings(&p, &m)? };
        if a.iter().all(|&x| x == 0) {
            let mut fwd = bends;
            fwd.reverse();
            self.out.push(BrokenLine {
                initial: self.m0.clone(),
                bends: fwd,
                coefficient: final_coeff.clone(),
                shift: final_shift.clone(),
            });
            return Ok(());
        }
        for (s, group) in groups {
            let n = self.walls[group[0]].normal.clone();
            let kmax = (0..a.len()).filter(|&i| n[i] > 0).map(|i| a[i] / n[i]).min().unwrap_or(0);
            if kmax == 0 {
                continue;
            }
            let data = self.data();
            let d0 = data.delta_primitive(&n);
            let e = (data.pairing(&n, &m) * qi(d0)).abs();
            let poly = self.bend_polynomial(&group, &e, kmax);
            let x = qadd(&p, &qscale(&s, &m));
            for k in 1..=kmax {
                let c = &poly[k as usize];
                if c.is_zero() {
                    continue;
                }
                let a2: NVec = a.iter().zip(&n).map(|(x, y)| x - k * y).collect();
                let mut b2 = bends.clone();
                b2.push(Bend { point: x.clone(), normal: n.clone(), power: k, coefficient: c.clone() });
                self.trace(x.clone(), a2, b2, final_shift, &(final_coeff * c))?;
            }
        }
        Ok(())
    }
}

fn check_initial(data: &FixedData, m0: &MTilde) -> Result<()> {
    let r = data.rank();
    if m0.m.len() != r || m0.n.len() != r {
        return invalid("initial exponent has the wrong rank");
    }
    if m0.m.iter().any(|x| !x.is_integer()) {
        return invalid("initial exponent must have an integral m-part");
    }
    Ok(())
}

/// Every shift `a >= 0` of degree at most `level`.
fn shifts(r: usize, level: i64) -> Vec<NVec> {
    let mut out = vec![vec![]];
    for _ in 0..r {
        let mut next = Vec::new();
        for v in &out {
            let used = deg(v);
            for x in 0..=(level - used) {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// All broken lines for `m~0` ending at `q_end` whose final shift has degree at most `level`.
///
/// `q_end` must lie off the support of `D_level`. Violations of general
/// position are reported with a nearby suggested endpoint.
pub fn broken_lines(d: &ScatteringDiagram, m0: &MTilde, q_end: &[Q], level: i64) -> Result<Vec<BrokenLine>> {
    let data = d.data();
    check_initial(data, m0)?;
    if level > d.cutoff {
        return invalid(format!("level {level} exceeds the diagram cutoff {}", d.cutoff));
    }
    if q_end.len() != data.rank() {
        return invalid("endpoint has the wrong rank");
    }
    let walls: Vec<&Wall> = d.walls.iter().filter(|w| w.degree() <= level).collect();
    if walls.iter().any(|w| w.support.contains(q_end)) {
        return Err(not_general(d, q_end, "endpoint lies on a wall".into()));
    }
    let mut search = Search { d, walls, m0: m0.clone(), q_end: q_end.to_vec(), out: Vec::new() };
    for a in shifts(data.rank(), level) {
        search.trace(q_end.to_vec(), a.clone(), Vec::new(), &a, &Q::one())?;
    }
    Ok(search.out)
}

/// `theta_{Q, m~0}` modulo shift degree `level + 1`, as a series with base `m~0`.
pub fn theta(d: &ScatteringDiagram, m0: &MTilde, q_end: &[Q], level: i64) -> Result<TruncatedSeries> {
    let lines = broken_lines(d, m0, q_end, level)?;
    Ok(sum_lines(m0, &lines, level))
}

/// Sums the final monomials of a set of broken lines.
pub fn sum_lines(m0: &MTilde, lines: &[BrokenLine], level: i64) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(m0.clone(), level);
    for l in lines {
        out.add_term(l.shift.clone(), l.coefficient.clone());
    }
    out
}

/// `theta_{Q, m~0}` as `p_gamma(x^{m~0})` for a path from a general point of
/// `source`, a cone containing `m0`, to `q_end`, which must lie in the interior of `C^+`.
pub fn theta_via_path(
    d: &ScatteringDiagram,
    m0: &MTilde,
    source: &Cone,
    q_end: &[Q],
    level: i64,
) -> Result<TruncatedSeries> {
    let data = d.data();
    check_initial(data, m0)?;
    if !source.contains(&m0.m) {
        return invalid("the source cone does not contain m0");
    }
    if q_end.iter().any(|x| !x.is_positive()) {
        return invalid("the endpoint must lie in the interior of the positive chamber");
    }
    let reduced = d.reduced(level);
    let avoid = d.hyperplanes();
    let mono = TruncatedSeries::monomial(m0.clone(), level);
    let mut last = None;
    for salt in 0..32u64 {
        let start = source.general_point(0x9A7 + salt, &avoid)?;
        match path_ordered_product(&reduced, &[start, q_end.to_vec()], level) {
            Ok(pp) => return Ok(pp.act(data, &mono)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// The first G-cone in `cones` containing `m`.
pub fn cone_containing<'a>(cones: &'a [(Vec<usize>, Cone)], m: &[Q]) -> Option<&'a Cone> {
    cones.iter().map(|(_, c)| c).find(|c| c.contains(m))
}

/// Outcome of comparing two theta functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaComparison {
    pub left: TruncatedSeries,
    pub right: TruncatedSeries,
}

impl ThetaComparison {
    pub fn agrees(&self) -> bool {
        self.left == self.right
    }
}

/// Compares `theta_{Q'}` with `p_gamma(theta_Q)` along the segment from `Q` to `Q'`.
pub fn check_theta_transitivity(
    d: &ScatteringDiagram,
    m0: &MTilde,
    q1: &[Q],
    q2: &[Q],
    level: i64,
) -> Result<ThetaComparison> {
    let t1 = theta(d, m0, q1, level)?;
    let t2 = theta(d, m0, q2, level)?;
    let pp = path_ordered_product(&d.reduced(level), &[q1.to_vec(), q2.to_vec()], level)?;
    Ok(ThetaComparison { left: t2, right: pp.act(d.data(), &t1) })
}

/// Rewrites an element of the principal extension into the mutated seed's coordinates.
pub fn mtilde_coordinate_change(data: &FixedData, k: usize, mt: &MTilde) -> Result<MTilde> {
    Ok(MTilde { m: data.m_coordinate_change(k, &mt.m)?, n: data.coordinate_change(k, &mt.n)? })
}

/// Checks the mutation rule for theta functions: with `Q' = T_k(Q)` and
/// `m~0' = T~_k(m~0)`, the theta function of the mutated seed equals
/// `S~_k(theta_{Q, m~0})` when `Q_k > 0` and `theta_{Q, m~0}` when `Q_k < 0`.
///
/// Both sides are compared in the mutated seed modulo shift degree `level + 1`.
/// The original side is computed at a cutoff high enough to contain every term
/// of the mutated side.
pub fn check_theta_mutation(seed: &Seed, k: usize, m0: &MTilde, q_end: &[Q], level: i64) -> Result<ThetaComparison> {
    let data = &seed.data;
    check_initial(data, m0)?;
    data.transition_matrix(k)?;
    if q_end[k].is_zero() {
        return invalid("the endpoint must lie off e_k^perp");
    }
    let beta = data.b()[k].iter().map(|x| x.abs()).max().unwrap_or(0);
    let m0k = to_i64(&m0.m[k]).expect("checked integral");
    let big = (1 + beta) * level + m0k.abs();
    let d = build_csd(seed, big)?;
    let before = theta(&d, m0, q_end, big)?;

    let mutated_seed = seed.mutate(k)?;
    let nd = &mutated_seed.data;
    let d2 = build_csd(&mutated_seed, level)?;
    let q2 = data.m_coordinate_change(k, &data.t_k(k, q_end))?;
    let m02 = mtilde_coordinate_change(data, k, &data.t_tilde_k(k, m0))?;
    let after = theta(&d2, &m02, &q2, level)?;

    let plus = q_end[k].is_positive();
    let mut moved = TruncatedSeries::zero(m02.clone(), level);
    for (a, c) in &before.terms {
        let e = before.exponent(data, a);
        let e = if plus { data.s_tilde_k(k, &e) } else { e };
        let e2 = mtilde_coordinate_change(data, k, &e)?;
        let diff = e2.sub(&m02);
        let expected = nd.p1_star(&diff.n);
        if expected.m != diff.m {
            return Err(Error::Internal("a mutated theta exponent is not a principal shift".into()));
        }
        if deg(&diff.n) > level {
            continue;
        }
        if diff.n.iter().any(|&x| x < 0) {
            // Only reachable if the mutation rule fails; keep it so the comparison reports it.
            moved.terms.insert(diff.n.clone(), c.clone());
            continue;
        }
        moved.add_term(diff.n.clone(), c.clone());
    }
    Ok(ThetaComparison { left: after, right: moved })
}

/// Whether every theta coefficient is a positive integer.
pub fn theta_is_positive(t: &TruncatedSeries) -> bool {
    t.has_positive_integer_coefficients()
}

/// Collects the final exponents of a set of broken lines by count, for display.
pub fn line_histogram(lines: &[BrokenLine]) -> BTreeMap<NVec, usize> {
    let mut out = BTreeMap::new();
    for l in lines {
        *out.entry(l.shift.clone()).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csd::g_cones;
    use crate::presets;
    use crate::rat::qvec;

    fn mt(m: &[i64], r: usize) -> MTilde {
        MTilde::new(qvec(m), vec![0; r])
    }

    fn pts() -> Vec<MVec> {
        vec![
            vec![q(7, 3), q(5, 4)],
            vec![q(-7, 3), q(5, 4)],
            vec![q(-5, 3), q(-9, 4)],
            vec![q(7, 3), q(-5, 9)],
            vec![q(3, 7), q(-5, 2)],
        ]
    }

    #[test]
    fn straight_line_regime() {
        let s = presets::seed("A2").unwrap();
        let d = build_csd(&s, 4).unwrap();
        let m0 = mt(&[2, 1], 2);
        let t = theta(&d, &m0, &[q(3, 2), q(5, 7)], 4).unwrap();
        assert_eq!(t, TruncatedSeries::monomial(m0, 4));
    }

    #[test]
    fn a2_theta_of_negative_f1() {
        // x^{-f_1}: the cluster variable (1 + x^{p_1^*(e_1)}) x^{-f_1} seen from C^+.
        let s = presets::seed("A2").unwrap();
        let d = build_csd(&s, 4).unwrap();
        let m0 = mt(&[-1, 0], 2);
        let t = theta(&d, &m0, &[q(3, 2), q(5, 7)], 4).unwrap();
        let mut want = TruncatedSeries::monomial(m0, 4);
        want.add_term(vec![1, 0], Q::one());
        assert_eq!(t, want);
    }

    #[test]
    fn broken_lines_match_path_products() {
        let cones = g_cones(&presets::seed("A2").unwrap(), 8).unwrap();
        for name in ["A2", "B2", "C2"] {
            let s = presets::seed(name).unwrap();
            let level = 5;
            let d = build_csd(&s, level).unwrap();
            let cones = if name == "A2" { cones.clone() } else { g_cones(&s, 8).unwrap() };
            for m in [[-1, 0], [0, -1], [-1, -1], [1, -2], [-2, 1], [-1, 2], [2, -1]] {
                let m0 = mt(&m, 2);
                let cone = cone_containing(&cones, &m0.m).unwrap();
                let q_end = vec![q(11, 7), q(13, 5)];
                let a = theta(&d, &m0, &q_end, level).unwrap();
                let b = theta_via_path(&d, &m0, cone, &q_end, level).unwrap();
                assert_eq!(a, b, "{name} m0={m:?}");
                assert!(theta_is_positive(&a));
            }
        }
    }

    #[test]
    fn transitivity_between_chambers() {
        let s = presets::seed("A1(1)").unwrap();
        let d = build_csd(&s, 4).unwrap();
        let m0 = mt(&[-1, 1], 2);
        let p = pts();
        for i in 0..p.len() {
            for j in 0..p.len() {
                if i != j {
                    let c = check_theta_transitivity(&d, &m0, &p[i], &p[j], 4).unwrap();
                    assert!(c.agrees(), "{i}->{j}: {} vs {}", c.left, c.right);
                }
            }
        }
    }

    #[test]
    fn mutation_rule() {
        let s = presets::seed("B2").unwrap();
        for k in 0..2 {
            for q_end in pts() {
                for m in [[-1, 0], [1, -1], [0, 2]] {
                    let c = check_theta_mutation(&s, k, &mt(&m, 2), &q_end, 3).unwrap();
                    assert!(c.agrees(), "k={k} m={m:?}: {} vs {}", c.left, c.right);
                }
            }
        }
    }

    #[test]
    fn endpoint_on_wall_suggests_perturbation() {
        let s = presets::seed("A2").unwrap();
        let d = build_csd(&s, 3).unwrap();
        match theta(&d, &mt(&[1, 0], 2), &[qi(0), qi(1)], 3) {
            Err(Error::NotGeneral { suggestion: Some(z), .. }) => assert!(!d.in_support(&z)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn shift_enumeration() {
        assert_eq!(shifts(2, 2).len(), 6);
        assert_eq!(shifts(3, 1).len(), 4);
    }
}
