//! Dilogarithm products and the pentagon-relation ordering algorithm.
//!
//! A product is a list of factors `Psi[n]^c` written left to right; the
//! rightmost factor acts first. The ordering engine is generic over an
//! integer-valued skew form `bf`, so it runs unchanged on the rank-2 lattice
//! and on the rank-2 sublattice spanned by the normals at a joint.

use crate::lattice::FixedData;
use crate::rat::{deg, fmt_q, qi, to_i64, vec_gcd, Q};
use crate::{invalid, Error, Result};
use num_traits::{One, Signed, Zero};
use std::fmt;

/// The factor `Psi[n]^c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub n: Vec<i64>,
    pub c: Q,
}

impl Factor {
    pub fn new(n: Vec<i64>, c: Q) -> Self {
        Factor { n, c }
    }

    pub fn deg(&self) -> i64 {
        deg(&self.n)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n: Vec<String> = self.n.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]^{}", n.join(","), fmt_q(&self.c))
    }
}

/// Formats a product as `[n]^c[n']^c'...`.
pub fn display_product(c: &[Factor]) -> String {
    c.iter().map(|f| f.to_string()).collect()
}

/// Integer-valued skew form driving the ordering engine.
pub trait SkewForm {
    fn bf(&self, a: &[i64], b: &[i64]) -> i64;
}

impl<F: Fn(&[i64], &[i64]) -> i64> SkewForm for F {
    fn bf(&self, a: &[i64], b: &[i64]) -> i64 {
        self(a, b)
    }
}

/// The rank-2 form with `{e_2, e_1} = 1`.
pub fn rank2_form(a: &[i64], b: &[i64]) -> i64 {
    a[1] * b[0] - a[0] * b[1]
}

/// The skew form of fixed data divided by `scale`, required to be integral on its inputs.
pub struct ScaledForm<'a> {
    pub data: &'a FixedData,
    pub scale: Q,
}

impl SkewForm for ScaledForm<'_> {
    fn bf(&self, a: &[i64], b: &[i64]) -> i64 {
        let v = self.data.skew(a, b) / &self.scale;
        to_i64(&v).expect("scaled skew form is integral on the joint lattice")
    }
}

/// Every adjacent pair `[n']^c' [n]^c` has `{n', n} <= 0`, and parallel pairs have non-decreasing degree.
pub fn is_ordered<F: SkewForm + ?Sized>(c: &[Factor], bf: &F) -> bool {
    c.windows(2).all(|w| {
        let b = bf.bf(&w[0].n, &w[1].n);
        b < 0 || (b == 0 && w[0].deg() <= w[1].deg())
    })
}

/// Every adjacent pair has `{n', n} >= 0`.
pub fn is_anti_ordered<F: SkewForm + ?Sized>(c: &[Factor], bf: &F) -> bool {
    c.windows(2).all(|w| bf.bf(&w[0].n, &w[1].n) >= 0)
}

/// The pentagon relation `Psi[n']^{1/c} Psi[n]^{1/c} = Psi[n]^{1/c} Psi[n+n']^{1/c} Psi[n']^{1/c}`
/// for `{n', n} = c > 0`.
pub fn pentagon_rewrite(data: &FixedData, left: &Factor, right: &Factor) -> Result<Vec<Factor>> {
    let c = data.skew(&left.n, &right.n);
    if !c.is_positive() {
        return invalid(format!("pair {left}{right} is not exchangeable: skew value {}", fmt_q(&c)));
    }
    let unit = Q::one() / &c;
    if left.c != unit || right.c != unit {
        return invalid(format!("pentagon needs exponents 1/{} on both factors", fmt_q(&c)));
    }
    let sum: Vec<i64> = left.n.iter().zip(&right.n).map(|(a, b)| a + b).collect();
    Ok(vec![right.clone(), Factor::new(sum, unit.clone()), left.clone()])
}

/// Merges adjacent factors with equal `n`, summing exponents.
pub fn join(c: &[Factor]) -> Vec<Factor> {
    let mut out: Vec<Factor> = Vec::with_capacity(c.len());
    for f in c {
        match out.last_mut() {
            Some(last) if last.n == f.n => last.c += &f.c,
            _ => out.push(f.clone()),
        }
    }
    out
}

/// Splits a `p`-exchangeable pair into unit factors `[n]^{1/p}`.
pub fn decompose_unit(p: i64, pair: &[Factor]) -> Result<Vec<Factor>> {
    if p <= 0 {
        return invalid("decomposition level must be positive");
    }
    let unit = Q::one() / qi(p);
    let mut out = Vec::new();
    for f in pair {
        let count = &f.c * qi(p);
        let k = to_i64(&count).ok_or_else(|| Error::Invalid(format!("exponent of {f} is not a multiple of 1/{p}")))?;
        for _ in 0..k {
            out.push(Factor::new(f.n.clone(), unit.clone()));
        }
    }
    Ok(out)
}

/// Splits factors with integer exponent greater than one into unit factors.
fn decompose_initial(c: Vec<Factor>) -> Vec<Factor> {
    if !c.iter().any(|f| f.c.is_integer() && f.c > Q::one()) {
        return c;
    }
    let mut out = Vec::with_capacity(c.len());
    for f in c {
        if f.c.is_integer() && f.c > Q::one() {
            let k = to_i64(&f.c).expect("integral exponent");
            for _ in 0..k {
                out.push(Factor::new(f.n.clone(), Q::one()));
            }
        } else {
            out.push(f);
        }
    }
    out
}

struct Engine<'a, F: SkewForm + ?Sized> {
    level: i64,
    bf: &'a F,
}

impl<F: SkewForm + ?Sized> Engine<'_, F> {
    /// Orders a product up to `G^{>level}` by the `p`-pentagon relation only.
    fn order_partial(&self, p: i64, mut res: Vec<Factor>) -> Vec<Factor> {
        let unit = Q::one() / qi(p);
        let mut i = 0usize;
        while i + 1 < res.len() {
            let (a, b) = (&res[i], &res[i + 1]);
            let v = self.bf.bf(&a.n, &b.n);
            let mut acted = false;
            if v == 0 {
                if a.deg() > b.deg() {
                    res.swap(i, i + 1);
                    acted = true;
                }
            } else if v > 0 {
                if a.deg() + b.deg() > self.level {
                    res.swap(i, i + 1);
                    acted = true;
                } else if v == p && a.c == unit && b.c == unit {
                    let sum: Vec<i64> = a.n.iter().zip(&b.n).map(|(x, y)| x + y).collect();
                    let left = res[i].clone();
                    res[i] = res[i + 1].clone();
                    res[i + 1] = left;
                    res.insert(i + 1, Factor::new(sum, unit.clone()));
                    acted = true;
                }
            }
            if acted {
                i = i.saturating_sub(1);
            } else {
                i += 1;
            }
        }
        res
    }

    /// The recursive subroutine at level `p`.
    fn order_p(&self, p: i64, mut res: Vec<Factor>) -> Result<Vec<Factor>> {
        while !is_ordered(&res, self.bf) {
            if p == 1 {
                res = decompose_initial(res);
            }
            res = self.order_partial(p, res);
            let found = res.windows(2).position(|w| self.bf.bf(&w[0].n, &w[1].n) > 0);
            if let Some(i) = found {
                let q = self.bf.bf(&res[i].n, &res[i + 1].n);
                if q > self.level * self.level {
                    return Err(Error::Internal(format!("subroutine level {q} exceeds the square of the cutoff")));
                }
                let cin = decompose_unit(q, &res[i..i + 2])
                    .map_err(|e| Error::Internal(format!("ordering reached a failing state: {e}")))?;
                let cout = self.order_p(q, cin)?;
                res.splice(i..i + 2, cout);
            } else if !is_ordered(&res, self.bf) {
                return Err(Error::Internal("ordering stalled on an unordered product".into()));
            }
        }
        Ok(join(&res))
    }
}

fn validate(level: i64, c: &[Factor]) -> Result<()> {
    if level <= 0 {
        return invalid("the cutoff degree must be a positive integer");
    }
    for f in c {
        if f.n.iter().any(|&x| x < 0) || f.n.iter().all(|&x| x == 0) {
            return invalid(format!("factor {f} is not in the positive cone"));
        }
        let s = &f.c * qi(vec_gcd(&f.n));
        if !(s.is_integer() && s.is_positive()) {
            return invalid(format!("factor {f} is not of the form [tn]^(s/t) with positive integers s, t"));
        }
    }
    Ok(())
}

/// Orders a product of factors `Psi[t n]^{s/t}` modulo `G^{>level}` under an
/// arbitrary integral skew form. Factors of degree above the cutoff are dropped.
pub fn order_with<F: SkewForm + ?Sized>(level: i64, c: &[Factor], bf: &F) -> Result<Vec<Factor>> {
    validate(level, c)?;
    let out = if c.len() <= 1 { c.to_vec() } else { Engine { level, bf }.order_p(1, c.to_vec())? };
    Ok(out.into_iter().filter(|f| f.deg() <= level).collect())
}

/// Orders a rank-2 product with the standard form `{e_2, e_1} = 1`.
pub fn order(level: i64, c: &[Factor]) -> Result<Vec<Factor>> {
    order_with(level, c, &rank2_form)
}

/// Shorthand for building rank-2 products from `(n1, n2, c)` triples.
pub fn product(items: &[(i64, i64, Q)]) -> Vec<Factor> {
    items.iter().map(|(a, b, c)| Factor::new(vec![*a, *b], c.clone())).collect()
}

/// Parses triples `[n1, .., nr, c]` with the exponent last.
pub fn from_triples(items: &[(Vec<i64>, Q)]) -> Vec<Factor> {
    items.iter().map(|(n, c)| Factor::new(n.clone(), c.clone())).collect()
}

/// Total exponent of `n` in a product; zero if absent.
pub fn exponent_of(c: &[Factor], n: &[i64]) -> Q {
    c.iter().filter(|f| f.n == n).fold(Q::zero(), |acc, f| acc + &f.c)
}

/// Whether a rank-2 normal `n` lies strictly inside the irrational cone of the
/// non-affine region for `delta = (d1, d2)`, i.e. whether
/// `2 / (d2 + sqrt(D)) < n1 / n2 < 2 / (d2 - sqrt(D))` with `D = d2 (d2 - 4 / d1)`.
///
/// Clearing the square roots gives the exact test `d2 n1^2 - d1 d2 n1 n2 + d1 n2^2 < 0`.
/// Always false when `d1 d2 <= 4`.
pub fn in_badlands(d1: i64, d2: i64, n: &[i64]) -> bool {
    let (a, b) = (n[0] as i128, n[1] as i128);
    let (d1, d2) = (d1 as i128, d2 as i128);
    a > 0 && b > 0 && d2 * a * a - d1 * d2 * a * b + d1 * b * b < 0
}

/// Every positive `n` (primitive or not) with `deg(n) <= max_deg` inside the region of [`in_badlands`].
pub fn badlands_normals(d1: i64, d2: i64, max_deg: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for total in 2..=max_deg {
        for a in 1..total {
            let n = vec![a, total - a];
            if in_badlands(d1, d2, &n) {
                out.push(n);
            }
        }
    }
    out
}
