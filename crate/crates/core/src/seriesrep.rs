//! Truncated series in the principal x-representation and the y-representation.
//!
//! A monomial `x^{m~}` of a [`TruncatedSeries`] is stored by its shift `a`
//! relative to the series base: `m~ = base + sum a_i p_1^*(e_i)`. The shift
//! degree `sum a_i` is the grading used for truncation. Because the vectors
//! `p_1^*(e_i)` are independent, the shift is a faithful coordinate.

use crate::dilogprod::Factor;
use crate::lattice::{FixedData, MTilde};
use crate::rat::{deg, fmt_q, qi, Q};
use crate::{invalid, Result};
use num_traits::{One, Zero};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

pub type Shift = Vec<i64>;

fn add_into(terms: &mut BTreeMap<Shift, Q>, key: Shift, c: Q) {
    match terms.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// A formal power series `sum_a c_a x^{base + a}` truncated at shift degree `cutoff`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub base: MTilde,
    pub terms: BTreeMap<Shift, Q>,
    pub cutoff: i64,
}

impl TruncatedSeries {
    /// The single monomial `x^{base}`.
    pub fn monomial(base: MTilde, cutoff: i64) -> Self {
        let r = base.n.len();
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; r], Q::one());
        TruncatedSeries { base, terms, cutoff }
    }

    pub fn one(r: usize, cutoff: i64) -> Self {
        TruncatedSeries::monomial(MTilde::zero(r), cutoff)
    }

    pub fn zero(base: MTilde, cutoff: i64) -> Self {
        TruncatedSeries { base, terms: BTreeMap::new(), cutoff }
    }

    pub fn rank(&self) -> usize {
        self.base.n.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, shift: &[i64]) -> Q {
        self.terms.get(shift).cloned().unwrap_or_else(Q::zero)
    }

    /// Adds `c x^{base + shift}`, dropping terms above the cutoff.
    pub fn add_term(&mut self, shift: Shift, c: Q) {
        if c.is_zero() || deg(&shift) > self.cutoff {
            return;
        }
        add_into(&mut self.terms, shift, c);
    }

    /// The absolute exponent of a shift.
    pub fn exponent(&self, data: &FixedData, shift: &[i64]) -> MTilde {
        let mut out = self.base.clone();
        for (i, &a) in shift.iter().enumerate() {
            if a != 0 {
                out = out.add(&data.p1_star(&data.e(i)).scaled(a));
            }
        }
        out
    }

    /// Truncates to a smaller cutoff.
    pub fn truncate(&self, cutoff: i64) -> Self {
        TruncatedSeries {
            base: self.base.clone(),
            terms: self.terms.iter().filter(|(s, _)| deg(s) <= cutoff).map(|(s, c)| (s.clone(), c.clone())).collect(),
            cutoff: cutoff.min(self.cutoff),
        }
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<Self> {
        if self.base != other.base || self.cutoff != other.cutoff {
            return invalid("series with different bases or cutoffs cannot be added");
        }
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = TruncatedSeries::zero(self.base.clone(), self.cutoff);
        for (s, v) in &self.terms {
            out.add_term(s.clone(), v * c);
        }
        out
    }

    /// Product of series; bases add and shifts add.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<Self> {
        if self.cutoff != other.cutoff {
            return invalid("series with different cutoffs cannot be multiplied");
        }
        let mut out = TruncatedSeries::zero(self.base.add(&other.base), self.cutoff);
        for (s1, c1) in &self.terms {
            let d1 = deg(s1);
            for (s2, c2) in &other.terms {
                if d1 + deg(s2) <= self.cutoff {
                    let s: Shift = s1.iter().zip(s2).map(|(a, b)| a + b).collect();
                    out.add_term(s, c1 * c2);
                }
            }
        }
        Ok(out)
    }

    /// Whether every coefficient is a positive integer.
    pub fn has_positive_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer() && c > &Q::zero())
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(s, c)| format!("{}*x^{:?}", fmt_q(c), s)).collect();
        write!(f, "x^({:?}) * ({})", self.base, parts.join(" + "))
    }
}

/// `(1 + x^{v})^E` as a series with zero base, truncated at `cutoff`.
pub fn binomial_series(r: usize, v: &[i64], e: &Q, cutoff: i64) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(MTilde::zero(r), cutoff);
    let dv = deg(v);
    let mut b = Q::one();
    let mut k = 0i64;
    loop {
        if b.is_zero() || k * dv > cutoff {
            break;
        }
        out.add_term(v.iter().map(|x| x * k).collect(), b.clone());
        b = b * (e - qi(k)) / qi(k + 1);
        k += 1;
        if dv == 0 {
            break;
        }
    }
    out
}

/// Applies `Psi[v]^{c}` (with `c` already signed): `x^{m~} -> x^{m~} (1 + x^{p_1^*(v)})^{c <v, m~>_1}`.
fn apply_power(data: &FixedData, v: &[i64], c: &Q, f: &TruncatedSeries) -> TruncatedSeries {
    let r = data.rank();
    let base_pair = data.pairing1(v, &f.base);
    let skews: Vec<Q> = (0..r).map(|i| data.skew(v, &data.e(i))).collect();
    let dv = deg(v);
    let mut out = TruncatedSeries::zero(f.base.clone(), f.cutoff);
    for (a, coeff) in &f.terms {
        let mut pair = base_pair.clone();
        for (ai, si) in a.iter().zip(&skews) {
            if *ai != 0 {
                pair += si * qi(*ai);
            }
        }
        let e = c * pair;
        let da = deg(a);
        let mut b = Q::one();
        let mut k = 0i64;
        while da + k * dv <= f.cutoff && !b.is_zero() {
            let s: Shift = a.iter().zip(v).map(|(x, y)| x + k * y).collect();
            out.add_term(s, coeff * &b);
            b = b * (&e - qi(k)) / qi(k + 1);
            k += 1;
        }
    }
    out
}

/// The normalized wall automorphism for `Psi[t n0]^{s delta(t n0)}` raised to `sign`:
/// `x^{m~} -> x^{m~} (1 + x^{p_1^*(t n0)})^{sign s <delta(n0) n0, m~>_1}`.
pub fn wall_action(
    data: &FixedData,
    n0: &[i64],
    t: i64,
    s_exp: &Q,
    sign: i32,
    f: &TruncatedSeries,
) -> Result<TruncatedSeries> {
    let d0 = data.delta_primitive(n0);
    if s_exp.is_integer() && f.base.m.iter().all(|x| x.is_integer()) {
        let scaled: Vec<i64> = n0.iter().map(|x| x * d0).collect();
        for a in f.terms.keys() {
            let e = f.exponent(data, a);
            if !data.pairing1(&scaled, &e).is_integer() {
                return invalid("wall exponent is not integral on an integral monomial");
            }
        }
    }
    let v: Vec<i64> = n0.iter().map(|x| x * t).collect();
    // Psi[t n0]^{c} acts with exponent c t <n0, m~>; here c t = s delta(n0).
    let c = s_exp * qi(d0) / qi(t) * qi(sign as i64);
    Ok(apply_power(data, &v, &c, f))
}

/// Applies one factor `Psi[n]^c`, or its inverse when `sign = -1`.
pub fn factor_action(data: &FixedData, factor: &Factor, sign: i32, f: &TruncatedSeries) -> TruncatedSeries {
    let c = &factor.c * qi(sign as i64);
    apply_power(data, &factor.n, &c, f)
}

/// Applies a product right to left (the rightmost factor acts first).
pub fn product_action(data: &FixedData, c: &[Factor], f: &TruncatedSeries, signs: Option<&[i32]>) -> TruncatedSeries {
    let mut out = f.clone();
    for (i, factor) in c.iter().enumerate().rev() {
        let sign = signs.map_or(1, |s| s[i]);
        out = factor_action(data, factor, sign, &out);
    }
    out
}

/// The monomials `x^{f_i}` and `x^{e_i}`, which generate the representation.
pub fn basis_monomials(data: &FixedData, cutoff: i64) -> Vec<TruncatedSeries> {
    let r = data.rank();
    let mut out = Vec::with_capacity(2 * r);
    for i in 0..r {
        out.push(TruncatedSeries::monomial(MTilde::new(data.f(i), vec![0; r]), cutoff));
    }
    for i in 0..r {
        out.push(TruncatedSeries::monomial(MTilde::new(vec![Q::zero(); r], data.e(i)), cutoff));
    }
    out
}

/// Whether two signed products act identically modulo shift degree `cutoff`.
pub fn signed_products_equivalent(
    data: &FixedData,
    c1: &[Factor],
    s1: Option<&[i32]>,
    c2: &[Factor],
    s2: Option<&[i32]>,
    cutoff: i64,
) -> bool {
    basis_monomials(data, cutoff).iter().all(|m| product_action(data, c1, m, s1) == product_action(data, c2, m, s2))
}

/// Whether two products are equal modulo `G^{>cutoff}`, decided on the generating monomials.
pub fn products_equivalent(data: &FixedData, c1: &[Factor], c2: &[Factor], cutoff: i64) -> bool {
    signed_products_equivalent(data, c1, None, c2, None, cutoff)
}

/// The derivation `X_n(x^{m~}) = <n, m~>_1 x^{m~ + p_1^*(n)}`.
pub fn x_derivation(data: &FixedData, n: &[i64], f: &TruncatedSeries) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(f.base.clone(), f.cutoff);
    for (a, c) in &f.terms {
        let e = f.exponent(data, a);
        let pair = data.pairing1(n, &e);
        let s: Shift = a.iter().zip(n).map(|(x, y)| x + y).collect();
        out.add_term(s, c * pair);
    }
    out
}

/// A truncated series in the variables `y^{n}`, `n` in `N^+` or zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YSeries {
    pub terms: BTreeMap<Vec<i64>, Q>,
    pub cutoff: i64,
}

impl YSeries {
    pub fn monomial(n: Vec<i64>, cutoff: i64) -> Self {
        let mut terms = BTreeMap::new();
        if deg(&n) <= cutoff {
            terms.insert(n, Q::one());
        }
        YSeries { terms, cutoff }
    }

    pub fn zero(cutoff: i64) -> Self {
        YSeries { terms: BTreeMap::new(), cutoff }
    }

    pub fn add_term(&mut self, n: Vec<i64>, c: Q) {
        if c.is_zero() || deg(&n) > self.cutoff {
            return;
        }
        add_into(&mut self.terms, n, c);
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = YSeries::zero(self.cutoff);
        for (n, v) in &self.terms {
            out.add_term(n.clone(), v * c);
        }
        out
    }

    pub fn sub(&self, other: &YSeries) -> Self {
        let mut out = self.clone();
        for (n, v) in &other.terms {
            out.add_term(n.clone(), -v.clone());
        }
        out
    }
}

/// The derivation `X~_n(y^{n'}) = {n, n'} y^{n' + n}`.
pub fn y_derivation(data: &FixedData, n: &[i64], f: &YSeries) -> YSeries {
    let mut out = YSeries::zero(f.cutoff);
    for (m, c) in &f.terms {
        let s: Vec<i64> = m.iter().zip(n).map(|(x, y)| x + y).collect();
        out.add_term(s, c * data.skew(n, m));
    }
    out
}
