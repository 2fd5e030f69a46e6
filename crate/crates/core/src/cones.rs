//! Exact rational polyhedral cones in double description.
//!
//! A [`Cone`] stores both views in canonical form: the lineality space and the
//! extremal rays (generators), and the equations and facet inequalities
//! (constraints). The geometry is Euclidean in the coordinates of the ambient
//! space, so a constraint `a` means `a . z >= 0` (or `= 0` for equations).

use crate::rat::{qdot, rref, Q};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

pub type IVec = Vec<BigInt>;

/// Environment variable overriding the seed of every perturbation.
pub const SEED_ENV: &str = "SCATTERLAB_SEED";
const DEFAULT_SEED: u64 = 0x5ca7_7e12;

/// Base seed for deterministic sampling, read once from [`SEED_ENV`].
pub fn base_seed() -> u64 {
    static SEED: OnceLock<u64> = OnceLock::new();
    *SEED.get_or_init(|| std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED))
}

/// Deterministic random source derived from the base seed and a caller salt.
pub fn sampler(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(base_seed() ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

fn iqdot(a: &[BigInt], z: &[Q]) -> Q {
    a.iter().zip(z).fold(Q::zero(), |acc, (x, y)| if x.is_zero() { acc } else { acc + y * Q::from_integer(x.clone()) })
}

/// Divides out the content of an integer vector.
pub fn iprimitive(v: &[BigInt]) -> IVec {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
        if g.is_one() {
            return v.to_vec();
        }
    }
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// `alpha * u - beta * w`, made primitive.
fn comb(alpha: &BigInt, u: &[BigInt], beta: &BigInt, w: &[BigInt]) -> IVec {
    let v: IVec = u.iter().zip(w).map(|(x, y)| alpha * x - beta * y).collect();
    iprimitive(&v)
}

fn neg(v: &[BigInt]) -> IVec {
    v.iter().map(|x| -x).collect()
}

fn to_q_rows(rows: &[IVec]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect()).collect()
}

fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Primitive integer vector in the direction of a rational vector.
pub fn q_to_ivec(v: &[Q]) -> IVec {
    crate::rat::primitive_int(v)
}

pub fn ivec_to_q(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(|x| Q::from_integer(x.clone())).collect()
}

/// Converts `i64` coordinates to an integer vector.
pub fn ivec(v: &[i64]) -> IVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn rank(rows: &[IVec]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    crate::rat::rank_q(&to_q_rows(rows))
}

/// Lineality space and extremal rays of `{x : E x = 0, I x >= 0}`.
fn h_to_v(d: usize, eqs: &[IVec], ineqs: &[IVec]) -> (Vec<IVec>, Vec<IVec>) {
    let mut lin: Vec<IVec> =
        (0..d).map(|i| (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut rays: Vec<IVec> = Vec::new();
    let mut processed: Vec<IVec> = Vec::new();
    let constraints = eqs.iter().map(|a| (a, true)).chain(ineqs.iter().map(|a| (a, false)));
    for (a, is_eq) in constraints {
        if is_zero_vec(a) {
            continue;
        }
        if let Some(idx) = lin.iter().position(|l| !idot(a, l).is_zero()) {
            let mut l0 = lin.remove(idx);
            let mut al0 = idot(a, &l0);
            if al0.is_negative() {
                l0 = neg(&l0);
                al0 = -al0;
            }
            for l in lin.iter_mut() {
                let al = idot(a, l);
                if !al.is_zero() {
                    *l = comb(&al0, l, &al, &l0);
                }
            }
            for p in rays.iter_mut() {
                let ap = idot(a, p);
                if !ap.is_zero() {
                    *p = comb(&al0, p, &ap, &l0);
                }
            }
            if !is_eq {
                rays.push(iprimitive(&l0));
            }
        } else {
            let vals: Vec<BigInt> = rays.iter().map(|p| idot(a, p)).collect();
            let mut next: Vec<IVec> = Vec::new();
            for (p, v) in rays.iter().zip(&vals) {
                if v.is_zero() || (!is_eq && v.is_positive()) {
                    next.push(p.clone());
                }
            }
            let target = d as isize - lin.len() as isize - 2;
            let tight: Vec<Vec<bool>> =
                rays.iter().map(|p| processed.iter().map(|c| idot(c, p).is_zero()).collect()).collect();
            for (i, vp) in vals.iter().enumerate() {
                if !vp.is_positive() {
                    continue;
                }
                for (j, vn) in vals.iter().enumerate() {
                    if !vn.is_negative() {
                        continue;
                    }
                    let common: Vec<IVec> = processed
                        .iter()
                        .enumerate()
                        .filter(|(c, _)| tight[i][*c] && tight[j][*c])
                        .map(|(_, row)| row.clone())
                        .collect();
                    let adjacent = if target < 0 {
                        false
                    } else if target == 0 {
                        true
                    } else {
                        common.len() >= target as usize && rank(&common) == target as usize
                    };
                    if adjacent {
                        next.push(comb(vp, &rays[j], vn, &rays[i]));
                    }
                }
            }
            rays = next;
        }
        processed.push(a.clone());
    }
    (lin, rays)
}

/// Reduced row echelon basis of a subspace with primitive integer rows.
fn canon_subspace(basis: &[IVec]) -> Vec<IVec> {
    if basis.is_empty() {
        return Vec::new();
    }
    rref(&to_q_rows(basis)).iter().map(|r| q_to_ivec(r)).collect()
}

/// Rational orthogonal basis of the span of `basis` (Gram-Schmidt).
fn orthogonal_basis(basis: &[IVec]) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = Vec::new();
    for b in basis {
        let mut v = ivec_to_q(b);
        for u in &out {
            let c = qdot(&v, u) / qdot(u, u);
            for (x, y) in v.iter_mut().zip(u) {
                *x -= &c * y;
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            out.push(v);
        }
    }
    out
}

/// Projects onto the orthogonal complement of a subspace and makes the result primitive.
fn project_out(v: &[BigInt], ortho: &[Vec<Q>]) -> IVec {
    if ortho.is_empty() {
        return iprimitive(v);
    }
    let mut w = ivec_to_q(v);
    for u in ortho {
        let c = qdot(&w, u) / qdot(u, u);
        if !c.is_zero() {
            for (x, y) in w.iter_mut().zip(u) {
                *x -= &c * y;
            }
        }
    }
    q_to_ivec(&w)
}

fn canon_rays(rays: &[IVec], lin: &[IVec]) -> Vec<IVec> {
    let ortho = orthogonal_basis(lin);
    let mut out: Vec<IVec> = rays.iter().map(|r| project_out(r, &ortho)).filter(|r| !is_zero_vec(r)).collect();
    out.sort();
    out.dedup();
    out
}

/// A rational polyhedral cone with both generator and constraint descriptions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    ambient: usize,
    lineality: Vec<IVec>,
    rays: Vec<IVec>,
    equations: Vec<IVec>,
    facets: Vec<IVec>,
}

impl Cone {
    fn from_parts(d: usize, lin: Vec<IVec>, rays: Vec<IVec>, eqs: Vec<IVec>, facets: Vec<IVec>) -> Cone {
        let lineality = canon_subspace(&lin);
        let rays = canon_rays(&rays, &lineality);
        let equations = canon_subspace(&eqs);
        let facets = canon_rays(&facets, &equations);
        Cone { ambient: d, lineality, rays, equations, facets }
    }

    /// The cone generated by integer vectors (nonnegative combinations).
    pub fn from_int_generators(d: usize, gens: &[IVec]) -> Cone {
        let (eqs, facets) = h_to_v(d, &[], gens);
        let (lin, rays) = h_to_v(d, &eqs, &facets);
        Cone::from_parts(d, lin, rays, eqs, facets)
    }

    /// The cone generated by rational vectors; a line is given as a `+v, -v` pair.
    pub fn from_generators(d: usize, gens: &[Vec<Q>]) -> Cone {
        let ints: Vec<IVec> = gens.iter().map(|g| q_to_ivec(g)).filter(|g| !is_zero_vec(g)).collect();
        Cone::from_int_generators(d, &ints)
    }

    /// The cone `{z : eqs . z = 0, ineqs . z >= 0}`.
    pub fn from_constraints(d: usize, eqs: &[IVec], ineqs: &[IVec]) -> Cone {
        let (lin, rays) = h_to_v(d, eqs, ineqs);
        let mut dual_gens: Vec<IVec> = rays.clone();
        for l in &lin {
            dual_gens.push(l.clone());
            dual_gens.push(neg(l));
        }
        let (eq2, facets) = h_to_v(d, &[], &dual_gens);
        Cone::from_parts(d, lin, rays, eq2, facets)
    }

    pub fn zero(d: usize) -> Cone {
        Cone::from_int_generators(d, &[])
    }

    pub fn full(d: usize) -> Cone {
        Cone::from_constraints(d, &[], &[])
    }

    /// The hyperplane `a^perp`.
    pub fn hyperplane(a: &[BigInt]) -> Cone {
        Cone::from_constraints(a.len(), &[a.to_vec()], &[])
    }

    /// The half-space `a . z >= 0`.
    pub fn half_space(a: &[BigInt]) -> Cone {
        Cone::from_constraints(a.len(), &[], &[a.to_vec()])
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn lineality(&self) -> &[IVec] {
        &self.lineality
    }

    /// Extremal rays modulo the lineality space.
    pub fn rays(&self) -> &[IVec] {
        &self.rays
    }

    pub fn equations(&self) -> &[IVec] {
        &self.equations
    }

    /// Facet inequalities `a . z >= 0`, irredundant.
    pub fn facets(&self) -> &[IVec] {
        &self.facets
    }

    /// Dimension of the linear span.
    pub fn dim(&self) -> usize {
        self.ambient - self.equations.len()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    /// Generators as rational vectors: lineality in `+/-` pairs first, then rays.
    pub fn generators(&self) -> Vec<Vec<Q>> {
        let mut out = Vec::new();
        for l in &self.lineality {
            out.push(ivec_to_q(l));
            out.push(ivec_to_q(&neg(l)));
        }
        for r in &self.rays {
            out.push(ivec_to_q(r));
        }
        out
    }

    fn int_generators(&self) -> Vec<IVec> {
        let mut out = Vec::new();
        for l in &self.lineality {
            out.push(l.clone());
            out.push(neg(l));
        }
        out.extend(self.rays.iter().cloned());
        out
    }

    pub fn contains(&self, z: &[Q]) -> bool {
        self.equations.iter().all(|a| iqdot(a, z).is_zero()) && self.facets.iter().all(|a| !iqdot(a, z).is_negative())
    }

    /// Membership in the relative interior.
    pub fn in_relint(&self, z: &[Q]) -> bool {
        self.equations.iter().all(|a| iqdot(a, z).is_zero()) && self.facets.iter().all(|a| iqdot(a, z).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.int_generators().iter().all(|g| self.contains(&ivec_to_q(g)))
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        Cone::from_constraints(self.ambient, &eqs, &ineqs)
    }

    /// Intersection with the closed half-space `a . z >= 0`.
    pub fn intersect_half(&self, a: &[BigInt]) -> Cone {
        let mut ineqs = self.facets.clone();
        ineqs.push(a.to_vec());
        Cone::from_constraints(self.ambient, &self.equations, &ineqs)
    }

    /// Intersection with the hyperplane `a^perp`.
    pub fn intersect_hyperplane(&self, a: &[BigInt]) -> Cone {
        let mut eqs = self.equations.clone();
        eqs.push(a.to_vec());
        Cone::from_constraints(self.ambient, &eqs, &self.facets)
    }

    /// Image under a linear map.
    pub fn image(&self, f: impl Fn(&[Q]) -> Vec<Q>) -> Cone {
        let gens: Vec<Vec<Q>> = self.generators().iter().map(|g| f(g)).collect();
        Cone::from_generators(self.ambient, &gens)
    }

    /// Minkowski sum with the linear span of `vectors`.
    pub fn add_span(&self, vectors: &[IVec]) -> Cone {
        let mut gens = self.int_generators();
        for v in vectors {
            gens.push(v.clone());
            gens.push(neg(v));
        }
        Cone::from_int_generators(self.ambient, &gens)
    }

    /// Cone generated by this cone and one more vector.
    pub fn extend(&self, v: &[Q]) -> Cone {
        let mut gens = self.int_generators();
        gens.push(q_to_ivec(v));
        Cone::from_int_generators(self.ambient, &gens)
    }

    /// Faces of codimension one inside the cone.
    pub fn facet_cones(&self) -> Vec<Cone> {
        self.facets.iter().map(|a| self.intersect_hyperplane(a)).collect()
    }

    /// Basis of the linear span.
    pub fn span_basis(&self) -> Vec<IVec> {
        let k = crate::rat::kernel_q(&to_q_rows(&self.equations), self.ambient);
        k.iter().map(|v| q_to_ivec(v)).collect()
    }

    /// Whether the cone lies in the hyperplane `a^perp`.
    pub fn inside_hyperplane(&self, a: &[BigInt]) -> bool {
        self.int_generators().iter().all(|g| idot(a, g).is_zero())
    }

    /// A deterministic point of the relative interior avoiding every hyperplane
    /// `a^perp` in `avoid` that does not contain the whole cone.
    pub fn general_point(&self, salt: u64, avoid: &[IVec]) -> Result<Vec<Q>> {
        let d = self.ambient;
        if self.is_zero() {
            return Err(Error::NotGeneral { reason: "the zero cone has no general point".into(), suggestion: None });
        }
        let relevant: Vec<&IVec> = avoid.iter().filter(|a| !self.inside_hyperplane(a)).collect();
        let mut rng = sampler(salt);
        let den = Q::from_integer(BigInt::from(1u64 << 12));
        for attempt in 0..256 {
            let spread: i64 = if attempt < 16 { 1 << 8 } else { 1 << 16 };
            let mut z = vec![Q::zero(); d];
            for r in &self.rays {
                let w = Q::from_integer(BigInt::from(rng.random_range((1i64 << 12)..(1i64 << 12) + spread))) / &den;
                for (x, y) in z.iter_mut().zip(r) {
                    *x += &w * Q::from_integer(y.clone());
                }
            }
            for l in &self.lineality {
                let w = Q::from_integer(BigInt::from(rng.random_range(-spread..=spread))) / &den;
                for (x, y) in z.iter_mut().zip(l) {
                    *x += &w * Q::from_integer(y.clone());
                }
            }
            if relevant.iter().all(|a| !iqdot(a, &z).is_zero()) && self.in_relint(&z) {
                return Ok(z);
            }
        }
        Err(Error::NotGeneral { reason: "could not find a general point in the cone".into(), suggestion: None })
    }
}
