//! Walls, scattering diagrams, joints and path-ordered products, together with
//! the degree-by-degree construction of cluster scattering diagrams, consistency
//! verification, G-cones and the admissible-region test.
//!
//! Coordinates follow [`crate::lattice`]: normals are integer vectors in the
//! seed's `e`-basis and points of `M_R` are rational vectors in the `f`-basis.
//! A wall with normal `n`, multiplicity `t` and exponent `s` carries the element
//! `Psi[t n]^{s delta(t n)}`, whose wall function is `(1 + x^{p_1^*(t n)})^s`.

use crate::cones::{ivec_to_q, q_to_ivec, Cone, IVec};
use crate::dilogprod::{join, order_with, Factor, ScaledForm};
use crate::lattice::{FixedData, MVec, NVec, Seed};
use crate::rat::{deg, lcm_i64, primitive_part, q_zero, qadd, qi, qscale, qsub, qvec, rref, scale_vec, vec_gcd, Q};
use crate::seriesrep::{basis_monomials, product_action, TruncatedSeries};
use crate::{invalid, Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

/// Euclidean normal of the hyperplane `n^perp` in `f`-coordinates, primitive.
pub fn perp(data: &FixedData, n: &[i64]) -> IVec {
    let l = data.delta().iter().fold(1, |a, &d| lcm_i64(a, d));
    let v: IVec = n.iter().zip(data.delta()).map(|(&a, &d)| BigInt::from(a * (l / d))).collect();
    crate::cones::iprimitive(&v)
}

/// Primitive `n` with `n^perp = a^perp`, the inverse of [`perp`] up to sign.
pub fn normal_of(data: &FixedData, a: &[BigInt]) -> NVec {
    let v: IVec = a.iter().zip(data.delta()).map(|(x, &d)| x * BigInt::from(d)).collect();
    crate::cones::iprimitive(&v).iter().map(|x| x.to_i64().expect("normal fits in i64")).collect()
}

fn dot_iq(a: &[BigInt], z: &[Q]) -> Q {
    a.iter().zip(z).fold(Q::zero(), |acc, (x, y)| if x.is_zero() { acc } else { acc + y * Q::from_integer(x.clone()) })
}

/// A wall `(support, Psi[t n]^{s delta(t n)})` with primitive normal `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub support: Cone,
    pub normal: NVec,
    pub t: i64,
    pub s: Q,
}

impl Wall {
    /// Checks that the support is a codimension-one cone inside `normal^perp`.
    pub fn new(data: &FixedData, support: Cone, normal: NVec, t: i64, s: Q) -> Result<Wall> {
        let r = data.rank();
        if normal.len() != r || support.ambient() != r {
            return invalid("wall dimensions do not match the rank");
        }
        if normal.iter().any(|&x| x < 0) || vec_gcd(&normal) != 1 {
            return invalid(format!("wall normal {normal:?} is not a primitive positive vector"));
        }
        if t <= 0 || !s.is_positive() {
            return invalid("wall multiplicity and exponent must be positive");
        }
        if support.dim() + 1 != r {
            return invalid(format!("wall support has dimension {} in rank {r}", support.dim()));
        }
        if !support.inside_hyperplane(&perp(data, &normal)) {
            return invalid(format!("wall support is not contained in {normal:?}^perp"));
        }
        Ok(Wall { support, normal, t, s })
    }

    /// Degree `t deg(n)` of the wall element.
    pub fn degree(&self) -> i64 {
        self.t * deg(&self.normal)
    }

    /// The wall element as a single factor `[t n]^{s delta(n) / t}`.
    pub fn element(&self, data: &FixedData) -> Factor {
        let d0 = data.delta_primitive(&self.normal);
        Factor::new(scale_vec(self.t, &self.normal), &self.s * qi(d0) / qi(self.t))
    }

    /// Whether `p*(n)` lies in the support.
    pub fn is_incoming(&self, data: &FixedData) -> bool {
        self.support.contains(&data.p_star(&self.normal))
    }
}

fn cmp_walls(a: &Wall, b: &Wall) -> std::cmp::Ordering {
    (&a.normal, &a.support, a.t, &a.s).cmp(&(&b.normal, &b.support, b.t, &b.s))
}

/// A finite collection of walls over a seed, truncated at a degree cutoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScatteringDiagram {
    pub seed: Seed,
    pub cutoff: i64,
    pub walls: Vec<Wall>,
}

impl ScatteringDiagram {
    pub fn new(seed: Seed, cutoff: i64, walls: Vec<Wall>) -> Self {
        ScatteringDiagram { seed, cutoff, walls }
    }

    pub fn data(&self) -> &FixedData {
        &self.seed.data
    }

    pub fn rank(&self) -> usize {
        self.seed.rank()
    }

    /// The reduction `D_level`: walls of degree above `level` are dropped.
    pub fn reduced(&self, level: i64) -> Self {
        let walls = self.walls.iter().filter(|w| w.degree() <= level).cloned().collect();
        ScatteringDiagram { seed: self.seed.clone(), cutoff: level.min(self.cutoff), walls }
    }

    /// Distinct normals of walls.
    pub fn normals(&self) -> BTreeSet<NVec> {
        self.walls.iter().map(|w| w.normal.clone()).collect()
    }

    /// Walls in canonical order.
    pub fn sorted(&self) -> Self {
        let mut out = self.clone();
        out.walls.sort_by(cmp_walls);
        out
    }

    /// Splits every wall into walls with `s = 1`; fails on a non-integral exponent.
    pub fn split_unit(&self) -> Result<Self> {
        let mut walls = Vec::new();
        for w in &self.walls {
            let Some(s) = w.s.to_integer().to_i64().filter(|_| w.s.is_integer()) else {
                return invalid(format!("wall exponent {} is not an integer", crate::rat::fmt_q(&w.s)));
            };
            for _ in 0..s {
                walls.push(Wall { s: Q::one(), ..w.clone() });
            }
        }
        Ok(ScatteringDiagram { seed: self.seed.clone(), cutoff: self.cutoff, walls })
    }

    /// Combines walls with equal support, normal and `t` by adding exponents.
    pub fn merged(&self) -> Self {
        let mut acc: BTreeMap<(NVec, Cone, i64), Q> = BTreeMap::new();
        for w in &self.walls {
            *acc.entry((w.normal.clone(), w.support.clone(), w.t)).or_insert_with(q_zero) += &w.s;
        }
        let walls = acc.into_iter().map(|((normal, support, t), s)| Wall { support, normal, t, s }).collect();
        ScatteringDiagram { seed: self.seed.clone(), cutoff: self.cutoff, walls }
    }

    /// Whether `z` lies on the support of some wall.
    pub fn in_support(&self, z: &[Q]) -> bool {
        self.walls.iter().any(|w| w.support.contains(z))
    }

    /// Hyperplanes a general point should avoid: wall hyperplanes and wall facets.
    pub fn hyperplanes(&self) -> Vec<IVec> {
        let mut set: BTreeSet<IVec> = BTreeSet::new();
        for w in &self.walls {
            set.insert(perp(self.data(), &w.normal));
            for a in w.support.facets() {
                set.insert(a.clone());
            }
        }
        set.into_iter().collect()
    }
}

/// The incoming walls `(e_i^perp, Psi[e_i]^{delta_i})`.
pub fn incoming_walls(seed: &Seed) -> ScatteringDiagram {
    let data = &seed.data;
    let walls = (0..seed.rank())
        .map(|i| {
            let e = data.e(i);
            Wall { support: Cone::hyperplane(&perp(data, &e)), normal: e, t: 1, s: Q::one() }
        })
        .collect();
    ScatteringDiagram::new(seed.clone(), 1, walls)
}

/// Classification of a joint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JointKind {
    Parallel,
    Perpendicular,
}

/// A codimension-two cone where walls meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Joint {
    pub cone: Cone,
    pub member_walls: Vec<usize>,
    pub kind: JointKind,
}

/// A chamber of the arrangement cut out on a codimension-two subspace `L` by the walls through it.
#[derive(Debug, Clone)]
struct Cell {
    cone: Cone,
    point: MVec,
    members: Vec<usize>,
    /// Members with at least two distinct normals.
    independent: bool,
    /// Some member has the cell on its relative boundary.
    boundary: bool,
    perpendicular: bool,
}

impl Cell {
    fn needs_loop(&self) -> bool {
        (self.members.len() >= 2 && (self.independent || self.boundary)) || (self.members.len() == 1 && self.boundary)
    }
}

/// All walls whose normals lie in a rank-two sublattice `N_L`, cut along `L = N_L^perp`.
#[derive(Debug, Clone)]
struct Group {
    lspace: Cone,
    basis: (NVec, NVec),
    perpendicular: bool,
    cells: Vec<Cell>,
}

/// Canonical key of the rational span of two vectors; `None` if they are dependent.
fn span_key(a: &[i64], b: &[i64]) -> Option<Vec<IVec>> {
    let rows = rref(&[qvec(a), qvec(b)]);
    if rows.len() < 2 {
        return None;
    }
    Some(rows.iter().map(|r| q_to_ivec(r)).collect())
}

fn salt_of(parts: &[u64]) -> u64 {
    parts.iter().fold(0x51a7_u64, |h, &p| h.rotate_left(17) ^ p.wrapping_mul(0x2545_f491_4f6c_dd1d))
}

/// Enumerates codimension-two subspaces spanned by joints of `d` and their chambers.
/// With `with_facets`, subspaces spanned by facets of wall supports are included,
/// which catches walls ending on a stratum where no second normal is present.
fn groups(d: &ScatteringDiagram, with_facets: bool) -> Result<Vec<Group>> {
    let data = d.data();
    let r = d.rank();
    let normals: Vec<NVec> = d.normals().into_iter().collect();
    let mut keys: BTreeMap<Vec<IVec>, (NVec, NVec)> = BTreeMap::new();
    for (i, a) in normals.iter().enumerate() {
        for b in &normals[i + 1..] {
            if let Some(k) = span_key(a, b) {
                keys.entry(k).or_insert_with(|| (a.clone(), b.clone()));
            }
        }
    }
    if with_facets {
        for w in &d.walls {
            for a in w.support.facets() {
                let m = normal_of(data, a);
                if let Some(k) = span_key(&w.normal, &m) {
                    keys.entry(k).or_insert_with(|| (w.normal.clone(), m));
                }
            }
        }
    }
    let avoid = d.hyperplanes();
    let perps: Vec<IVec> = d.walls.iter().map(|w| perp(data, &w.normal)).collect();
    let mut out = Vec::new();
    for (gi, (_, (v1, v2))) in keys.into_iter().enumerate() {
        let lspace = Cone::from_constraints(r, &[perp(data, &v1), perp(data, &v2)], &[]);
        let mut cuts: BTreeSet<IVec> = BTreeSet::new();
        let mut any = false;
        for (w, pw) in d.walls.iter().zip(&perps) {
            if !lspace.inside_hyperplane(pw) {
                continue;
            }
            let wl = w.support.intersect(&lspace);
            if wl.dim() + 2 != r {
                continue;
            }
            any = true;
            for a in wl.facets() {
                let first = a.iter().find(|x| !x.is_zero()).expect("nonzero facet");
                let a = if first.is_negative() { a.iter().map(|x| -x).collect() } else { a.clone() };
                cuts.insert(a);
            }
        }
        if !any {
            continue;
        }
        let mut chambers = vec![lspace.clone()];
        for a in &cuts {
            let neg: IVec = a.iter().map(|x| -x).collect();
            let mut next = Vec::new();
            for c in &chambers {
                if c.inside_hyperplane(a) {
                    next.push(c.clone());
                    continue;
                }
                for h in [a, &neg] {
                    let piece = c.intersect_half(h);
                    if piece.dim() == c.dim() {
                        next.push(piece);
                    }
                }
            }
            chambers = next;
        }
        let perpendicular = !data.skew(&v1, &v2).is_zero();
        let mut cells = Vec::new();
        for (ci, ch) in chambers.into_iter().enumerate() {
            cells.push(make_cell(d, ch, &avoid, salt_of(&[gi as u64, ci as u64]))?);
        }
        for c in cells.iter_mut() {
            c.perpendicular = perpendicular
                && c.members
                    .iter()
                    .any(|&i| c.members.iter().any(|&j| !data.skew(&d.walls[i].normal, &d.walls[j].normal).is_zero()));
        }
        out.push(Group { lspace, basis: (v1, v2), perpendicular, cells });
    }
    Ok(out)
}

fn make_cell(d: &ScatteringDiagram, ch: Cone, avoid: &[IVec], salt: u64) -> Result<Cell> {
    for attempt in 0..16u64 {
        let point =
            if ch.is_zero() { vec![Q::zero(); d.rank()] } else { ch.general_point(salt_of(&[salt, attempt]), avoid)? };
        let members: Vec<usize> = (0..d.walls.len()).filter(|&i| d.walls[i].support.contains(&point)).collect();
        if !members.iter().all(|&i| d.walls[i].support.contains_cone(&ch)) {
            continue;
        }
        let independent = members.iter().any(|&i| d.walls[i].normal != d.walls[members[0]].normal);
        let boundary = members.iter().any(|&i| !d.walls[i].support.in_relint(&point));
        return Ok(Cell { cone: ch, point, members, independent, boundary, perpendicular: false });
    }
    Err(Error::NotGeneral { reason: "no general point found on a joint".into(), suggestion: None })
}

/// Joints of `d`: codimension-two cells lying in at least two walls.
///
/// Cells of one subspace with identical member walls are reported as a single
/// joint on the whole subspace.
pub fn find_joints(d: &ScatteringDiagram) -> Result<Vec<Joint>> {
    let mut out = Vec::new();
    for g in groups(d, true)? {
        let kind_of = |c: &Cell| if c.perpendicular { JointKind::Perpendicular } else { JointKind::Parallel };
        let joints: Vec<&Cell> = g.cells.iter().filter(|c| c.members.len() >= 2).collect();
        if joints.is_empty() {
            continue;
        }
        let uniform = joints.len() == g.cells.len() && joints.iter().all(|c| c.members == joints[0].members);
        if uniform {
            out.push(Joint {
                cone: g.lspace.clone(),
                member_walls: joints[0].members.clone(),
                kind: kind_of(joints[0]),
            });
        } else {
            for c in joints {
                out.push(Joint { cone: c.cone.clone(), member_walls: c.members.clone(), kind: kind_of(c) });
            }
        }
    }
    Ok(out)
}

/// `|{u_1, u_2}|` for a lattice basis of the rank-two sublattice spanned by `v1, v2`.
fn joint_scale(data: &FixedData, v1: &[i64], v2: &[i64]) -> Q {
    let r = v1.len();
    let mut g = 0i64;
    for i in 0..r {
        for j in i + 1..r {
            g = crate::rat::gcd_i64(g, crate::rat::det2(v1, v2, i, j));
        }
    }
    data.skew(v1, v2).abs() / qi(g)
}

/// Whether the wall lies in the "second quadrant" at `point`, i.e. contains
/// points `point + eps p*(n)` for small `eps > 0`.
fn second_quadrant(data: &FixedData, w: &Wall, point: &[Q]) -> bool {
    let p = data.p_star(&w.normal);
    w.support.facets().iter().filter(|a| dot_iq(a, point).is_zero()).all(|a| !dot_iq(a, &p).is_negative())
}

/// Sorts factors so that `{n', n} >= 0` for every adjacent pair `[n'][n]`.
fn anti_order(data: &FixedData, c: &mut [Factor]) {
    c.sort_by(|a, b| {
        let s = data.skew(&a.n, &b.n);
        if s.is_positive() {
            std::cmp::Ordering::Less
        } else if s.is_negative() {
            std::cmp::Ordering::Greater
        } else {
            (a.deg(), &a.n).cmp(&(b.deg(), &b.n))
        }
    });
}

/// The anti-ordered incoming product at a perpendicular cell, and its ordered form
/// modulo `G^{>level}`, both with exponents in the original normalization.
fn order_at_cell(d: &ScatteringDiagram, g: &Group, cell: &Cell, level: i64) -> Result<(Vec<Factor>, Vec<Factor>)> {
    let data = d.data();
    let c0 = joint_scale(data, &g.basis.0, &g.basis.1);
    let mut cin: Vec<Factor> = cell
        .members
        .iter()
        .map(|&i| &d.walls[i])
        .filter(|w| second_quadrant(data, w, &cell.point))
        .map(|w| w.element(data))
        .collect();
    anti_order(data, &mut cin);
    let scaled: Vec<Factor> = cin.iter().map(|f| Factor::new(f.n.clone(), &f.c * &c0)).collect();
    let form = ScaledForm { data, scale: c0.clone() };
    let res = order_with(level, &scaled, &form)?;
    let res = res.into_iter().map(|f| Factor::new(f.n, f.c / &c0)).collect();
    Ok((cin, res))
}

/// The new wall data `(n, t, s)` produced at one cell at degree `level`.
fn new_factors(d: &ScatteringDiagram, g: &Group, cell: &Cell, level: i64) -> Result<Vec<(NVec, i64, Q)>> {
    let data = d.data();
    let (_, res) = order_at_cell(d, g, cell, level)?;
    let mut out = Vec::new();
    for f in res.into_iter().filter(|f| f.deg() == level) {
        let (t, n0) = primitive_part(&f.n);
        let s = &f.c * qi(t) / qi(data.delta_primitive(&n0));
        out.push((n0, t, s));
    }
    Ok(out)
}

fn attach(data: &FixedData, base: &Cone, n: NVec, t: i64, s: Q) -> Result<Wall> {
    let dir: MVec = data.p_star(&n).iter().map(|x| -x).collect();
    let support = base.extend(&dir);
    if support.dim() + 1 != data.rank() {
        return Err(Error::Internal(format!("attached cone for normal {n:?} is not of codimension one")));
    }
    Wall::new(data, support, n, t, s)
}

/// Walls of degree `level + 1` attached to the perpendicular joints of `d`.
fn attach_walls(d: &ScatteringDiagram, level: i64) -> Result<Vec<Wall>> {
    let data = d.data();
    let mut out = Vec::new();
    for g in groups(d, false)? {
        if !g.perpendicular {
            continue;
        }
        let mut produced: Vec<Vec<(NVec, i64, Q)>> = Vec::new();
        for cell in &g.cells {
            if cell.perpendicular && cell.independent {
                produced.push(new_factors(d, &g, cell, level + 1)?);
            } else {
                produced.push(Vec::new());
            }
        }
        let common: Vec<(NVec, i64, Q)> =
            produced[0].iter().filter(|x| produced.iter().all(|p| p.contains(x))).cloned().collect();
        for (n, t, s) in &common {
            out.push(attach(data, &g.lspace, n.clone(), *t, s.clone())?);
        }
        for (cell, list) in g.cells.iter().zip(&produced) {
            for (n, t, s) in list.iter().filter(|x| !common.contains(x)) {
                out.push(attach(data, &cell.cone, n.clone(), *t, s.clone())?);
            }
        }
    }
    out.sort_by(cmp_walls);
    Ok(out)
}

/// The reduction `D_level` of a positive realization of the cluster scattering diagram of `seed`.
pub fn build_csd(seed: &Seed, level: i64) -> Result<ScatteringDiagram> {
    if seed.rank() < 2 {
        return invalid("diagram construction needs rank at least 2");
    }
    if level < 1 {
        return invalid("the cutoff degree must be a positive integer");
    }
    let mut d = incoming_walls(seed);
    for cur in 1..level {
        d.cutoff = cur;
        let added = attach_walls(&d, cur)?;
        d.walls.extend(added);
    }
    d.cutoff = level;
    Ok(d)
}

/// A signed product `g_s^{eps_s} ... g_1^{eps_1}` recorded along a curve.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PathProduct {
    /// Factors from left to right; the rightmost is crossed first.
    pub factors: Vec<Factor>,
    pub signs: Vec<i32>,
    /// Crossed walls, aligned with `factors`.
    pub walls: Vec<usize>,
}

impl PathProduct {
    /// Applies the product to a series.
    pub fn act(&self, data: &FixedData, f: &TruncatedSeries) -> TruncatedSeries {
        product_action(data, &self.factors, f, Some(&self.signs))
    }

    /// The product traversed backwards.
    pub fn inverse(&self) -> PathProduct {
        PathProduct {
            factors: self.factors.iter().rev().cloned().collect(),
            signs: self.signs.iter().rev().map(|s| -s).collect(),
            walls: self.walls.iter().rev().cloned().collect(),
        }
    }

    /// Whether the product acts trivially modulo shift degree `cutoff`.
    pub fn is_identity(&self, data: &FixedData, cutoff: i64) -> bool {
        basis_monomials(data, cutoff).iter().all(|m| &self.act(data, m) == m)
    }
}

impl fmt::Display for PathProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "id");
        }
        for (x, s) in self.factors.iter().zip(&self.signs) {
            if *s < 0 {
                write!(f, "({x})^-1")?;
            } else {
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

/// Path-ordered product of `D_level` along the polyline through `path`.
///
/// Every waypoint must be off the walls, crossings must be transversal and hit
/// walls in their relative interiors, and walls crossed at the same point must
/// share their normal.
pub fn path_ordered_product(d: &ScatteringDiagram, path: &[MVec], level: i64) -> Result<PathProduct> {
    let data = d.data();
    for (i, z) in path.iter().enumerate() {
        if let Some(w) = d.walls.iter().position(|w| w.degree() <= level && w.support.contains(z)) {
            return Err(Error::NotAdmissible(format!("waypoint {i} lies on wall {w}")));
        }
    }
    let mut crossings: Vec<(usize, Q, usize, i32)> = Vec::new();
    for (seg, ab) in path.windows(2).enumerate() {
        let (a, b) = (&ab[0], &ab[1]);
        let dir = qsub(b, a);
        for (wi, w) in d.walls.iter().enumerate() {
            if w.degree() > level {
                continue;
            }
            let pa = data.pairing(&w.normal, a);
            let pb = data.pairing(&w.normal, b);
            if pa.is_zero() && pb.is_zero() {
                if line_meets(&w.support, a, &dir, Some(Q::one())) {
                    return Err(Error::NotAdmissible(format!("segment {seg} runs inside wall {wi}")));
                }
                continue;
            }
            if (pa.is_positive() && pb.is_positive()) || (pa.is_negative() && pb.is_negative()) {
                continue;
            }
            let tau = &pa / (&pa - &pb);
            let p = qadd(a, &qscale(&tau, &dir));
            if !w.support.contains(&p) {
                continue;
            }
            if !w.support.in_relint(&p) {
                return Err(Error::NotAdmissible(format!("segment {seg} crosses the boundary of wall {wi}")));
            }
            let sign = if pb < pa { 1 } else { -1 };
            crossings.push((seg, tau, wi, sign));
        }
    }
    crossings.sort();
    for w in crossings.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 == w[1].1 && d.walls[w[0].2].normal != d.walls[w[1].2].normal {
            return Err(Error::NotAdmissible(format!(
                "walls {} and {} with different normals are crossed at the same point",
                w[0].2, w[1].2
            )));
        }
    }
    let mut pp = PathProduct::default();
    for (_, _, wi, sign) in crossings.into_iter().rev() {
        pp.factors.push(d.walls[wi].element(data));
        pp.signs.push(sign);
        pp.walls.push(wi);
    }
    Ok(pp)
}

/// Whether `a + tau dir` meets the cone for some `tau >= 0`, bounded above by `upper` if given.
pub(crate) fn line_meets(c: &Cone, a: &[Q], dir: &[Q], upper: Option<Q>) -> bool {
    let mut lo = Q::zero();
    let mut hi = upper;
    for eq in c.equations() {
        let (x, y) = (dot_iq(eq, a), dot_iq(eq, dir));
        if y.is_zero() {
            if !x.is_zero() {
                return false;
            }
        } else {
            let tau = -x / y;
            lo = lo.max(tau.clone());
            hi = Some(hi.map_or(tau.clone(), |h| h.min(tau)));
        }
    }
    for f in c.facets() {
        let (x, y) = (dot_iq(f, a), dot_iq(f, dir));
        if y.is_zero() {
            if x.is_negative() {
                return false;
            }
        } else {
            let tau = -x / &y;
            if y.is_positive() {
                lo = lo.max(tau);
            } else {
                hi = Some(hi.map_or(tau.clone(), |h| h.min(tau)));
            }
        }
    }
    hi.is_none_or(|h| lo <= h)
}

/// Product of the elements of all walls containing a general point `z`.
pub fn total_wall_element(d: &ScatteringDiagram, z: &[Q]) -> Result<Vec<Factor>> {
    let data = d.data();
    let hits: Vec<&Wall> = d.walls.iter().filter(|w| w.support.contains(z)).collect();
    for w in &hits {
        if !w.support.in_relint(z) {
            return Err(Error::NotGeneral { reason: "point lies on the boundary of a wall".into(), suggestion: None });
        }
        if w.normal != hits[0].normal {
            return Err(Error::NotGeneral {
                reason: "point lies on walls with different normals".into(),
                suggestion: None,
            });
        }
    }
    let mut f: Vec<Factor> = hits.iter().map(|w| w.element(data)).collect();
    f.sort_by(|a, b| (a.deg(), &a.n).cmp(&(b.deg(), &b.n)));
    Ok(join(&f))
}

/// A joint whose loop product is not the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointFailure {
    pub cell: Cone,
    pub point: MVec,
    pub walls: Vec<usize>,
    pub product: String,
    /// Action of the loop on the first generating monomial it moves.
    pub residual: String,
}

impl fmt::Display for JointFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pt: Vec<String> = self.point.iter().map(crate::rat::fmt_q).collect();
        write!(
            f,
            "joint through ({}) with walls {:?}: loop product {} acts as {}",
            pt.join(", "),
            self.walls,
            self.product,
            self.residual
        )
    }
}

/// Outcome of a consistency check.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConsistencyReport {
    pub checked: usize,
    pub failures: Vec<JointFailure>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A small square loop around `cell` crossing exactly its member walls.
fn joint_loop(d: &ScatteringDiagram, g: &Group, cell: &Cell, level: i64, salt: u64) -> Result<PathProduct> {
    let data = d.data();
    let eqs: Vec<MVec> = g.lspace.equations().iter().map(|a| ivec_to_q(a)).collect();
    let mut rng = crate::cones::sampler(salt);
    for _ in 0..32 {
        let r1 = crate::rat::q(rng.random_range(1..64), 64);
        let r2 = crate::rat::q(rng.random_range(1..64), 64);
        let u1 = qadd(&eqs[0], &qscale(&r1, &eqs[1]));
        let u2 = qsub(&eqs[1], &qscale(&r2, &eqs[0]));
        let dirs: Vec<MVec> = [(1, 1), (-1, 1), (-1, -1), (1, -1)]
            .iter()
            .map(|&(a, b)| qadd(&qscale(&qi(a), &u1), &qscale(&qi(b), &u2)))
            .collect();
        let clean = cell.members.iter().all(|&i| dirs.iter().all(|v| !data.pairing(&d.walls[i].normal, v).is_zero()));
        if !clean {
            continue;
        }
        let mut eps = Q::one();
        for _ in 0..80 {
            let mut path: Vec<MVec> = dirs.iter().map(|v| qadd(&cell.point, &qscale(&eps, v))).collect();
            path.push(path[0].clone());
            if let Ok(pp) = path_ordered_product(d, &path, level) {
                if crossings_match(d, cell, &pp) {
                    return Ok(pp);
                }
            }
            eps /= qi(2);
        }
    }
    Err(Error::Internal("could not construct a loop around a joint".into()))
}

/// Each member is crossed twice when the cell is interior to it and once otherwise; nothing else is crossed.
fn crossings_match(d: &ScatteringDiagram, cell: &Cell, pp: &PathProduct) -> bool {
    if !pp.walls.iter().all(|w| cell.members.contains(w)) {
        return false;
    }
    cell.members.iter().all(|&m| {
        let want = if d.walls[m].support.in_relint(&cell.point) { 2 } else { 1 };
        pp.walls.iter().filter(|&&w| w == m).count() == want
    })
}

fn residual(data: &FixedData, pp: &PathProduct, cutoff: i64) -> String {
    for m in basis_monomials(data, cutoff) {
        let img = pp.act(data, &m);
        if img != m {
            return format!("x^{:?} -> {}", m.base, img);
        }
    }
    "identity".into()
}

/// Verifies that the loop product around every joint of `D_level` is the identity modulo `G^{>level}`.
pub fn check_consistency(d: &ScatteringDiagram, level: i64) -> Result<ConsistencyReport> {
    let dl = d.reduced(level);
    let data = dl.data();
    let mut report = ConsistencyReport::default();
    for (gi, g) in groups(&dl, true)?.iter().enumerate() {
        for (ci, cell) in g.cells.iter().enumerate() {
            if !cell.needs_loop() {
                continue;
            }
            report.checked += 1;
            let pp = joint_loop(&dl, g, cell, level, salt_of(&[gi as u64, ci as u64, 7]))?;
            if !pp.is_identity(data, level) {
                report.failures.push(JointFailure {
                    cell: cell.cone.clone(),
                    point: cell.point.clone(),
                    walls: cell.members.clone(),
                    product: pp.to_string(),
                    residual: residual(data, &pp, level),
                });
            }
        }
    }
    Ok(report)
}

/// `T_{k,s}^{-1}` applied to a cone lying on one side of `e_k^perp`, in the coordinates of `data`.
fn pull_back(data: &FixedData, s: &Seed, k: usize, c: &Cone) -> Result<Cone> {
    let e = &s.basis[k];
    let p = data.p_star(e);
    let dk = qi(data.delta()[k]);
    let gens = c.generators();
    let signs: Vec<Q> = gens.iter().map(|g| data.pairing(e, g)).collect();
    if signs.iter().all(|x| !x.is_negative()) {
        Ok(Cone::from_generators(
            c.ambient(),
            &gens.iter().zip(&signs).map(|(g, h)| qsub(g, &qscale(&(h * &dk), &p))).collect::<Vec<_>>(),
        ))
    } else if signs.iter().all(|x| !x.is_positive()) {
        Ok(c.clone())
    } else {
        Err(Error::Internal("a cone straddles the mutation hyperplane".into()))
    }
}

/// G-cones reached by mutation words of length at most `max_depth`, pulled back
/// to the coordinates of `seed`; equal cones are reported once.
pub fn g_cones(seed: &Seed, max_depth: usize) -> Result<Vec<(Vec<usize>, Cone)>> {
    let data = &seed.data;
    let r = seed.rank();
    let start = Seed::initial(data.clone());
    let mut seen: BTreeSet<Cone> = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue: VecDeque<(Seed, Vec<Seed>)> = VecDeque::new();
    queue.push_back((start, Vec::new()));
    while let Some((s, chain)) = queue.pop_front() {
        let ineqs: Vec<IVec> = s.basis.iter().map(|e| perp(data, e)).collect();
        let mut c = Cone::from_constraints(r, &[], &ineqs);
        for (j, prev) in chain.iter().enumerate().rev() {
            c = pull_back(data, prev, s.word[j], &c)?;
        }
        if !seen.insert(c.clone()) {
            continue;
        }
        out.push((s.word.clone(), c));
        if s.word.len() >= max_depth {
            continue;
        }
        for k in 0..r {
            if s.word.last() == Some(&k) {
                continue;
            }
            let next = s.mutate(k)?;
            let mut ch = chain.clone();
            ch.push(s.clone());
            queue.push_back((next, ch));
        }
    }
    Ok(out)
}

/// A face of a G-cone whose total wall element differs from `Psi[n]^{delta(n)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceMismatch {
    pub word: Vec<usize>,
    pub normal: NVec,
    pub found: Vec<Factor>,
}

/// Checks that every face of the given G-cones with normal of degree at most the
/// cutoff carries exactly `Psi[n]^{delta(n)}` in `d`.
pub fn check_g_cone_faces(d: &ScatteringDiagram, cones: &[(Vec<usize>, Cone)]) -> Result<Vec<FaceMismatch>> {
    let data = d.data();
    let avoid = d.hyperplanes();
    let mut out = Vec::new();
    for (ci, (word, c)) in cones.iter().enumerate() {
        for (fi, a) in c.facets().iter().enumerate() {
            let mut n = normal_of(data, a);
            if n.iter().all(|&x| x <= 0) {
                n = n.iter().map(|x| -x).collect();
            }
            if n.iter().any(|&x| x < 0) {
                return Err(Error::Internal(format!("G-cone face normal {n:?} is not sign-coherent")));
            }
            if deg(&n) > d.cutoff {
                continue;
            }
            let face = c.intersect_hyperplane(a);
            let z = face.general_point(salt_of(&[ci as u64, fi as u64, 11]), &avoid)?;
            let found = total_wall_element(d, &z)?;
            let want = vec![Factor::new(n.clone(), qi(data.delta_primitive(&n)))];
            if found != want {
                out.push(FaceMismatch { word: word.clone(), normal: n, found });
            }
        }
    }
    Ok(out)
}

/// An outgoing wall leaving the admissible region in direction `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleViolation {
    pub wall: usize,
    pub k: usize,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AdmissibleReport {
    pub checked: usize,
    pub violations: Vec<AdmissibleViolation>,
}

impl AdmissibleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The `k`-th coordinate of the normal `a` after mutation in direction `k`,
/// seen from a point on the `H_k^+` side (`plus`) or the `H_k^-` side.
pub fn mutated_coordinate(data: &FixedData, a: &[i64], k: usize, plus: bool) -> i64 {
    let b = data.b();
    let sum: i64 = (0..a.len())
        .map(|j| {
            let x = if plus { (-b[k][j]).max(0) } else { b[k][j].max(0) };
            x * a[j]
        })
        .sum();
    -a[k] + sum
}

/// Checks `b'_k >= 0` at a general point of every outgoing wall.
pub fn admissible_region_check(d: &ScatteringDiagram) -> Result<AdmissibleReport> {
    let data = d.data();
    let r = d.rank();
    let axes: Vec<IVec> = (0..r).map(|k| perp(data, &data.e(k))).collect();
    let mut report = AdmissibleReport::default();
    for (wi, w) in d.walls.iter().enumerate() {
        if w.is_incoming(data) || (0..r).any(|i| w.normal == data.e(i)) {
            continue;
        }
        report.checked += 1;
        let z = w.support.general_point(salt_of(&[wi as u64, 13]), &axes)?;
        for k in 0..r {
            let v = mutated_coordinate(data, &w.normal, k, z[k].is_positive());
            if v < 0 {
                report.violations.push(AdmissibleViolation { wall: wi, k, value: v });
            }
        }
    }
    Ok(report)
}
