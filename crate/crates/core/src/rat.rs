//! Rational and integer-vector helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_zero() -> Q {
    Q::zero()
}

pub fn is_int(x: &Q) -> bool {
    x.denom().is_one()
}

/// Converts an integral rational to `i64`.
pub fn to_i64(x: &Q) -> Option<i64> {
    if is_int(x) {
        x.numer().to_i64()
    } else {
        None
    }
}

/// Renders `x` as `p` or `p/q`.
pub fn fmt_q(x: &Q) -> String {
    if is_int(x) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                None
            } else {
                Some(Q::new(a, b))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn lcm_i64(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

/// gcd of the absolute values of the entries (0 for the zero vector).
pub fn vec_gcd(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Splits `v = t * v0` with `v0` primitive and `t > 0`.
pub fn primitive_part(v: &[i64]) -> (i64, Vec<i64>) {
    let g = vec_gcd(v);
    if g == 0 {
        return (0, v.to_vec());
    }
    (g, v.iter().map(|x| x / g).collect())
}

pub fn is_positive_vec(v: &[i64]) -> bool {
    v.iter().all(|&x| x >= 0) && v.iter().any(|&x| x > 0)
}

pub fn deg(v: &[i64]) -> i64 {
    v.iter().sum()
}

pub fn add_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale_vec(t: i64, a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| t * x).collect()
}

pub fn qvec(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| qi(x)).collect()
}

pub fn qdot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn qadd(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn qsub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn qscale(t: &Q, a: &[Q]) -> Vec<Q> {
    a.iter().map(|x| t * x).collect()
}

pub fn qneg(a: &[Q]) -> Vec<Q> {
    a.iter().map(|x| -x).collect()
}

/// Scales a rational vector to the primitive integer vector with the same direction.
pub fn primitive_int(v: &[Q]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn big_to_q(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(|x| Q::from_integer(x.clone())).collect()
}

/// Integer binomial-type coefficient `E (E-1) ... (E-k+1) / k!` for rational `E`.
pub fn binom_q(e: &Q, k: u32) -> Q {
    let mut acc = Q::one();
    for j in 0..k {
        acc = acc * (e - qi(j as i64)) / qi(j as i64 + 1);
    }
    acc
}

/// Sign of a rational as -1, 0, 1.
pub fn sgn(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Rank of a rational matrix (rows).
pub fn rank_q(rows: &[Vec<Q>]) -> usize {
    rref(rows).len()
}

/// Reduced row echelon form; returns the nonzero rows.
pub fn rref(rows: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    if m.is_empty() {
        return m;
    }
    let ncols = m[0].len();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let piv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x / &piv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let row_r = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&row_r) {
                    *x = &*x - &f * y;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Basis of the right kernel `{x : rows * x = 0}` of a rational matrix with `ncols` columns.
pub fn kernel_q(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let red = rref(rows);
    let mut pivots = Vec::new();
    for row in &red {
        let c = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
        pivots.push(c);
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for (row, &pc) in red.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn det2(a: &[i64], b: &[i64], i: usize, j: usize) -> i64 {
    a[i] * b[j] - a[j] * b[i]
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}
