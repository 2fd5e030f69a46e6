//! Randomized verification suites shared by the command line and the tests.
//!
//! Every suite is deterministic for a given salt (and `SCATTERLAB_SEED`) and
//! returns a report listing the failing instances.

use crate::cones::sampler;
use crate::dilogprod::{is_anti_ordered, order, pentagon_rewrite, rank2_form, Factor};
use crate::lattice::{FixedData, MTilde};
use crate::presets::rank2;
use crate::rat::{binom_q, deg, fmt_q, primitive_part, qi, vec_gcd, Q};
use crate::seriesrep::{
    basis_monomials, factor_action, products_equivalent, x_derivation, y_derivation, TruncatedSeries, YSeries,
};
use crate::Result;
use num_traits::{One, Signed};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Outcome of a randomized suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub runs: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.runs > 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} runs, {} failures", self.name, self.runs, self.failures.len())?;
        for x in self.failures.iter().take(5) {
            write!(f, "\n  {x}")?;
        }
        Ok(())
    }
}

fn random_primitive(rng: &mut ChaCha8Rng, max: i64) -> Vec<i64> {
    loop {
        let v = vec![rng.random_range(0..=max), rng.random_range(0..=max)];
        if v.iter().any(|&x| x > 0) && vec_gcd(&v) == 1 {
            return v;
        }
    }
}

/// A random valid anti-ordered rank-2 product whose factors have degree at most `level`.
///
/// Factors have the form `Psi[t n0]^{s/t}` with `n0` primitive and `s, t` positive integers.
pub fn random_anti_ordered(rng: &mut ChaCha8Rng, level: i64) -> Vec<Factor> {
    let count = rng.random_range(2..=4);
    let mut out: Vec<Factor> = Vec::new();
    while out.len() < count {
        let n0 = random_primitive(rng, 3);
        let tmax = level / deg(&n0);
        if tmax == 0 {
            continue;
        }
        let t = rng.random_range(1..=tmax.min(2));
        let s = rng.random_range(1..=3);
        out.push(Factor::new(n0.iter().map(|x| x * t).collect(), Q::new(s.into(), t.into())));
    }
    // Anti-ordered: a factor precedes b whenever {a, b} > 0, i.e. steeper normals first.
    out.sort_by(|a, b| rank2_form(&b.n, &a.n).cmp(&0).then(deg(&a.n).cmp(&deg(&b.n))));
    out
}

/// Whether a factor `Psi[v]^c` has the form `Psi[t n0]^{s/t}` with `s` a positive integer.
fn integral_positive(f: &Factor) -> bool {
    let (t, _) = primitive_part(&f.n);
    let s = &f.c * qi(t);
    s.is_integer() && s.is_positive()
}

/// Orders `count` random anti-ordered inputs at levels up to `max_level` and checks
/// that the output is ordered, equals the input in the representation, and has
/// positive integral exponents.
pub fn oracle_suite(count: usize, max_level: i64, salt: u64) -> Result<SuiteReport> {
    let data = rank2(1, 1)?;
    let mut rng = sampler(0x07AC ^ salt);
    let mut failures = Vec::new();
    let form = |a: &[i64], b: &[i64]| rank2_form(a, b);
    for i in 0..count {
        let level = rng.random_range(2..=max_level);
        let input = random_anti_ordered(&mut rng, level);
        let text = crate::dilogprod::display_product(&input);
        if !is_anti_ordered(&input, &form) {
            failures.push(format!("#{i}: generator produced a non anti-ordered input {text}"));
            continue;
        }
        let out = order(level, &input)?;
        if !products_equivalent(&data, &input, &out, level) {
            failures.push(format!("#{i}: order({level}, {text}) differs from its input"));
        }
        if let Some(f) = out.iter().find(|f| !integral_positive(f)) {
            failures.push(format!("#{i}: order({level}, {text}) has exponent {} on {:?}", fmt_q(&f.c), f.n));
        }
    }
    Ok(SuiteReport { name: "oracle", runs: count, failures })
}

/// Random pairs `n, n'` with `{n', n} = c` in `{1, 2, 3}`, checking the pentagon
/// relation in the representation at `level`.
pub fn pentagon_suite(count: usize, level: i64, salt: u64) -> Result<SuiteReport> {
    let data = rank2(1, 1)?;
    let mut rng = sampler(0x9E47 ^ salt);
    let mut failures = Vec::new();
    let mut runs = 0;
    while runs < count {
        let a = random_primitive(&mut rng, 3);
        let b = random_primitive(&mut rng, 3);
        let c = data.skew(&a, &b);
        if !(c.is_positive() && c <= qi(3)) {
            continue;
        }
        runs += 1;
        let unit = Q::one() / &c;
        let left = Factor::new(a.clone(), unit.clone());
        let right = Factor::new(b.clone(), unit);
        let rhs = pentagon_rewrite(&data, &left, &right)?;
        if !products_equivalent(&data, &[left, right], &rhs, level) {
            failures.push(format!("pentagon fails for n'={a:?}, n={b:?}, c={}", fmt_q(&c)));
        }
    }
    Ok(SuiteReport { name: "pentagon", runs, failures })
}

/// `[X~_{n1}, X~_{n2}] = {n1, n2} X~_{n1+n2}` on every `y`-monomial of small degree.
pub fn bracket_suite(count: usize, level: i64, salt: u64) -> Result<SuiteReport> {
    let mut rng = sampler(0xB7AC ^ salt);
    let mut failures = Vec::new();
    let mut i = 0;
    while i < count {
        let (d1, d2) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let data = rank2(d1, d2)?;
        let n1 = random_primitive(&mut rng, 2);
        let n2 = random_primitive(&mut rng, 2);
        let rest = level - deg(&n1) - deg(&n2);
        if rest < 0 {
            continue;
        }
        i += 1;
        let sum: Vec<i64> = n1.iter().zip(&n2).map(|(a, b)| a + b).collect();
        let c = data.skew(&n1, &n2);
        for a in 0..=rest {
            for b in 0..=(rest - a) {
                let y = YSeries::monomial(vec![a, b], level);
                let l1 = y_derivation(&data, &n1, &y_derivation(&data, &n2, &y));
                let l2 = y_derivation(&data, &n2, &y_derivation(&data, &n1, &y));
                let rhs = y_derivation(&data, &sum, &y).scale(&c);
                if l1.sub(&l2) != rhs {
                    failures.push(format!("#{i}: bracket of {n1:?}, {n2:?} on y^[{a},{b}] with delta ({d1},{d2})"));
                }
            }
        }
    }
    Ok(SuiteReport { name: "bracket", runs: count, failures })
}

/// `Psi[n']^{delta(n')} X_n Psi[n']^{-delta(n')} = sum_j binom(alpha, j) X_{n + j n'}`
/// for `{delta(n') n', n} = alpha > 0`, checked on the generating monomials.
pub fn conjugation_suite(count: usize, level: i64, salt: u64) -> Result<SuiteReport> {
    let mut rng = sampler(0xC0A7 ^ salt);
    let mut failures = Vec::new();
    let mut runs = 0;
    while runs < count {
        let (d1, d2) = (rng.random_range(1..=2), rng.random_range(1..=2));
        let data = rank2(d1, d2)?;
        let np = random_primitive(&mut rng, 2);
        let n = random_primitive(&mut rng, 2);
        let dp = data.delta_primitive(&np);
        let scaled: Vec<i64> = np.iter().map(|x| x * dp).collect();
        let alpha = data.skew(&scaled, &n);
        if !alpha.is_positive() || alpha > qi(3) || deg(&n) + deg(&np) > level {
            continue;
        }
        runs += 1;
        let psi = Factor::new(np.clone(), qi(dp));
        let alpha_i = alpha.to_integer().try_into().unwrap_or(0u32);
        for m in basis_monomials(&data, level) {
            let inner = factor_action(&data, &psi, -1, &m);
            let lhs = factor_action(&data, &psi, 1, &x_derivation(&data, &n, &inner));
            let mut rhs = TruncatedSeries::zero(m.base.clone(), level);
            for j in 0..=alpha_i {
                let v: Vec<i64> = n.iter().zip(&np).map(|(a, b)| a + j as i64 * b).collect();
                rhs = rhs.add(&x_derivation(&data, &v, &m).scale(&binom_q(&qi(alpha_i as i64), j)))?;
            }
            if lhs != rhs {
                failures
                    .push(format!("conjugation of X_{n:?} by Psi[{np:?}] with delta ({d1},{d2}) on x^{:?}", m.base));
                break;
            }
        }
    }
    Ok(SuiteReport { name: "conjugation", runs, failures })
}

/// A random element of `M° + N` with small entries, for theta checks.
pub fn random_exponent(rng: &mut ChaCha8Rng, data: &FixedData, positive: bool) -> MTilde {
    let r = data.rank();
    let lo = if positive { 0 } else { -2 };
    loop {
        let m: Vec<Q> = (0..r).map(|_| qi(rng.random_range(lo..=2))).collect();
        if m.iter().any(|x| !num_traits::Zero::is_zero(x)) {
            return MTilde::new(m, vec![0; r]);
        }
    }
}
