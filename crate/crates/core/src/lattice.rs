//! Fixed data, seeds, pairings and the (piecewise-)linear mutation maps.
//!
//! Every vector is a coefficient vector relative to the basis of the seed that
//! owns it: elements of `N` use the basis `e_1..e_r` (see [`NVec`]) and elements
//! of `M_R` use the dual basis `f_1..f_r` with `f_i = e_i^* / delta_i` (see [`MVec`]).
//! Directions `k` are zero-based throughout the library.

use crate::rat::{gcd_i64, lcm_i64, primitive_part, q, qi, qvec, Q};
use crate::{invalid, Error, Result};
use num_traits::{One, Signed, Zero};

/// An element of `N` in `e`-coordinates.
pub type NVec = Vec<i64>;
/// An element of `M_R` in `f`-coordinates.
pub type MVec = Vec<Q>;

/// An element of the principal extension `M° ⊕ N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MTilde {
    pub m: MVec,
    pub n: NVec,
}

impl MTilde {
    pub fn new(m: MVec, n: NVec) -> Self {
        MTilde { m, n }
    }

    pub fn zero(r: usize) -> Self {
        MTilde { m: vec![Q::zero(); r], n: vec![0; r] }
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(|x| x.is_zero()) && self.n.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &MTilde) -> MTilde {
        MTilde {
            m: self.m.iter().zip(&other.m).map(|(a, b)| a + b).collect(),
            n: self.n.iter().zip(&other.n).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scaled(&self, c: i64) -> MTilde {
        MTilde { m: self.m.iter().map(|a| a * qi(c)).collect(), n: self.n.iter().map(|a| a * c).collect() }
    }

    pub fn sub(&self, other: &MTilde) -> MTilde {
        self.add(&other.scaled(-1))
    }
}

/// Fixed data: the skew form `omega` (with `omega[i][j] = {e_i, e_j}`) and the
/// skew-symmetrizer `delta`. The exchange matrix is `b_ij = delta_i * omega_ij`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FixedData {
    omega: Vec<Vec<Q>>,
    delta: Vec<i64>,
    b: Vec<Vec<i64>>,
}

impl FixedData {
    /// Builds fixed data from a skew form and symmetrizer, validating both invariants.
    pub fn new(omega: Vec<Vec<Q>>, delta: Vec<i64>) -> Result<Self> {
        let r = delta.len();
        if r == 0 {
            return invalid("rank must be positive");
        }
        if omega.len() != r || omega.iter().any(|row| row.len() != r) {
            return invalid("omega must be an r x r matrix matching delta");
        }
        if delta.iter().any(|&d| d <= 0) {
            return invalid("delta entries must be positive integers");
        }
        let mut b = vec![vec![0i64; r]; r];
        for i in 0..r {
            for j in 0..r {
                if omega[i][j] != -omega[j][i].clone() {
                    return invalid("omega is not skew-symmetric");
                }
                let bij = &omega[i][j] * qi(delta[i]);
                if !bij.is_integer() {
                    return invalid("delta_i * omega_ij must be an integer");
                }
                b[i][j] = crate::rat::to_i64(&bij).ok_or_else(|| Error::Invalid("entry overflow".into()))?;
            }
        }
        Ok(FixedData { omega, delta, b })
    }

    /// Decomposes `B = Delta * Omega`; rejects pairs for which `Delta^{-1} B` is not skew.
    pub fn from_exchange_matrix(b: &[Vec<i64>], delta: &[i64]) -> Result<Self> {
        let r = delta.len();
        if b.len() != r || b.iter().any(|row| row.len() != r) {
            return invalid("B must be an r x r matrix matching delta");
        }
        if delta.iter().any(|&d| d <= 0) {
            return invalid("delta entries must be positive integers");
        }
        let omega: Vec<Vec<Q>> = (0..r).map(|i| (0..r).map(|j| q(b[i][j], delta[i])).collect()).collect();
        for i in 0..r {
            for j in 0..r {
                if omega[i][j] != -omega[j][i].clone() {
                    return Err(Error::NotSkewSymmetrizable);
                }
            }
        }
        FixedData::new(omega, delta.to_vec())
    }

    pub fn rank(&self) -> usize {
        self.delta.len()
    }

    pub fn omega(&self) -> &[Vec<Q>] {
        &self.omega
    }

    pub fn delta(&self) -> &[i64] {
        &self.delta
    }

    /// The exchange matrix `B = Delta * Omega`.
    pub fn b(&self) -> &[Vec<i64>] {
        &self.b
    }

    fn check_direction(&self, k: usize) -> Result<()> {
        if k >= self.rank() {
            return Err(Error::Direction { k, rank: self.rank() });
        }
        Ok(())
    }

    /// Canonical pairing `<n, z> = sum n_i z_i / delta_i`.
    pub fn pairing(&self, n: &[i64], z: &[Q]) -> Q {
        let mut acc = Q::zero();
        for i in 0..self.rank() {
            if n[i] != 0 && !z[i].is_zero() {
                acc += &z[i] * q(n[i], self.delta[i]);
            }
        }
        acc
    }

    /// Canonical pairing for a rational element of `N_R`.
    pub fn pairing_q(&self, n: &[Q], z: &[Q]) -> Q {
        let mut acc = Q::zero();
        for i in 0..self.rank() {
            acc += &n[i] * &z[i] / qi(self.delta[i]);
        }
        acc
    }

    /// The skew form `{n, n'} = n^T Omega n'`.
    pub fn skew(&self, n: &[i64], n2: &[i64]) -> Q {
        let mut acc = Q::zero();
        for i in 0..self.rank() {
            if n[i] == 0 {
                continue;
            }
            for j in 0..self.rank() {
                if n2[j] != 0 {
                    acc += &self.omega[i][j] * qi(n[i] * n2[j]);
                }
            }
        }
        acc
    }

    /// `p*(n) = B n` as an integer vector in `f`-coordinates.
    pub fn p_star_int(&self, n: &[i64]) -> Vec<i64> {
        (0..self.rank()).map(|i| (0..self.rank()).map(|j| self.b[i][j] * n[j]).sum()).collect()
    }

    /// `p*(n) = B n` in `f`-coordinates; satisfies `<n', p*(n)> = {n', n}`.
    pub fn p_star(&self, n: &[i64]) -> MVec {
        qvec(&self.p_star_int(n))
    }

    /// `p_1^*(n) = (B n, n)`.
    pub fn p1_star(&self, n: &[i64]) -> MTilde {
        MTilde { m: self.p_star(n), n: n.to_vec() }
    }

    /// `<n, m~>_1 = <n, m>`.
    pub fn pairing1(&self, n: &[i64], mt: &MTilde) -> Q {
        self.pairing(n, &mt.m)
    }

    /// Normalization factor for a primitive vector, a positive integer.
    pub fn delta_primitive(&self, n0: &[i64]) -> i64 {
        n0.iter().zip(&self.delta).fold(1, |acc, (&a, &d)| lcm_i64(acc, d / gcd_i64(a.abs(), d)))
    }

    /// Normalization factor `delta(n)`: the smallest positive rational with `delta(n) n` in `N°`.
    pub fn delta_of(&self, n: &[i64]) -> Result<Q> {
        let (t, n0) = primitive_part(n);
        if t == 0 {
            return invalid("normalization factor of the zero vector");
        }
        Ok(q(self.delta_primitive(&n0), t))
    }

    /// Rescaling by `lambda`: `omega' = lambda omega`, `delta'_i = delta_i / lambda`.
    pub fn rescale(&self, lambda: &Q) -> Result<FixedData> {
        if !lambda.is_positive() {
            return invalid("rescaling factor must be positive");
        }
        let mut delta = Vec::with_capacity(self.rank());
        for &d in &self.delta {
            let nd = qi(d) / lambda;
            if !nd.is_integer() {
                return invalid(format!("delta_i / lambda is not an integer for delta_i = {d}"));
            }
            delta.push(crate::rat::to_i64(&nd).expect("integral"));
        }
        let omega = self.omega.iter().map(|row| row.iter().map(|x| x * lambda).collect()).collect();
        FixedData::new(omega, delta)
    }

    /// The transition matrix `A` for mutation in direction `k`: the columns of `A`
    /// are the new basis vectors `e'_j` written in the old basis, and `a' = A a`.
    pub fn transition_matrix(&self, k: usize) -> Result<Vec<Vec<i64>>> {
        self.check_direction(k)?;
        let r = self.rank();
        let mut a = vec![vec![0i64; r]; r];
        for (j, row) in a.iter_mut().enumerate() {
            row[j] = 1;
        }
        for j in 0..r {
            a[k][j] = if j == k { -1 } else { self.b[k][j].max(0) };
        }
        Ok(a)
    }

    /// Fixed data expressed in the mutated basis: `Omega' = A^T Omega A`, `delta' = delta`.
    pub fn mutate(&self, k: usize) -> Result<FixedData> {
        let a = self.transition_matrix(k)?;
        let r = self.rank();
        let mut omega = vec![vec![Q::zero(); r]; r];
        for i in 0..r {
            for j in 0..r {
                let mut acc = Q::zero();
                for p in 0..r {
                    if a[p][i] == 0 {
                        continue;
                    }
                    for s in 0..r {
                        if a[s][j] != 0 {
                            acc += &self.omega[p][s] * qi(a[p][i] * a[s][j]);
                        }
                    }
                }
                omega[i][j] = acc;
            }
        }
        FixedData::new(omega, self.delta.clone())
    }

    /// Rewrites the coefficients of a fixed element of `N` from basis `e` to `e'`.
    pub fn coordinate_change(&self, k: usize, n: &[i64]) -> Result<NVec> {
        let a = self.transition_matrix(k)?;
        Ok(a.iter().map(|row| row.iter().zip(n).map(|(x, y)| x * y).sum()).collect())
    }

    /// Rewrites the coefficients of a fixed element of `M_R` from basis `f` to `f'`:
    /// `z' = D A^T D^{-1} z`.
    pub fn m_coordinate_change(&self, k: usize, z: &[Q]) -> Result<MVec> {
        let a = self.transition_matrix(k)?;
        let r = self.rank();
        Ok((0..r)
            .map(|i| {
                let mut acc = Q::zero();
                for j in 0..r {
                    if a[j][i] != 0 {
                        acc += &z[j] * q(a[j][i], self.delta[j]);
                    }
                }
                acc * qi(self.delta[i])
            })
            .collect())
    }

    /// `S_k(z) = z + z_k p*(e_k)`.
    pub fn s_k(&self, k: usize, z: &[Q]) -> MVec {
        let zk = z[k].clone();
        (0..self.rank()).map(|i| &z[i] + &zk * qi(self.b[i][k])).collect()
    }

    /// Inverse of [`FixedData::s_k`]: `z - z_k p*(e_k)`.
    pub fn s_k_inv(&self, k: usize, z: &[Q]) -> MVec {
        let zk = z[k].clone();
        (0..self.rank()).map(|i| &z[i] - &zk * qi(self.b[i][k])).collect()
    }

    /// `S_k^*(n) = n + {delta_k e_k, n} e_k`.
    pub fn s_k_star(&self, k: usize, n: &[i64]) -> NVec {
        let c: i64 = (0..self.rank()).map(|j| self.b[k][j] * n[j]).sum();
        let mut out = n.to_vec();
        out[k] += c;
        out
    }

    /// Inverse of [`FixedData::s_k_star`].
    pub fn s_k_star_inv(&self, k: usize, n: &[i64]) -> NVec {
        let c: i64 = (0..self.rank()).map(|j| self.b[k][j] * n[j]).sum();
        let mut out = n.to_vec();
        out[k] -= c;
        out
    }

    /// Piecewise-linear `T_k`: `S_k` on `z_k >= 0`, the identity on `z_k <= 0`.
    pub fn t_k(&self, k: usize, z: &[Q]) -> MVec {
        if z[k].is_positive() {
            self.s_k(k, z)
        } else {
            z.to_vec()
        }
    }

    /// Inverse of [`FixedData::t_k`] (`S_k` preserves the sign of `z_k`).
    pub fn t_k_inv(&self, k: usize, z: &[Q]) -> MVec {
        if z[k].is_positive() {
            self.s_k_inv(k, z)
        } else {
            z.to_vec()
        }
    }

    /// `S~_k(m~) = m~ + <delta_k e_k, m~>_1 p_1^*(e_k)`.
    pub fn s_tilde_k(&self, k: usize, mt: &MTilde) -> MTilde {
        let mk = mt.m[k].clone();
        let r = self.rank();
        let m = (0..r).map(|i| &mt.m[i] + &mk * qi(self.b[i][k])).collect();
        let mut n = mt.n.clone();
        let mk_int = crate::rat::to_i64(&mk).expect("principal exponents have integral m-part");
        n[k] += mk_int;
        MTilde { m, n }
    }

    /// Inverse of [`FixedData::s_tilde_k`].
    pub fn s_tilde_k_inv(&self, k: usize, mt: &MTilde) -> MTilde {
        let mk = mt.m[k].clone();
        let r = self.rank();
        let m = (0..r).map(|i| &mt.m[i] - &mk * qi(self.b[i][k])).collect();
        let mut n = mt.n.clone();
        n[k] -= crate::rat::to_i64(&mk).expect("principal exponents have integral m-part");
        MTilde { m, n }
    }

    /// Piecewise-linear `T~_k`, deciding the side by the `m`-part.
    pub fn t_tilde_k(&self, k: usize, mt: &MTilde) -> MTilde {
        if mt.m[k].is_positive() {
            self.s_tilde_k(k, mt)
        } else {
            mt.clone()
        }
    }

    /// Standard basis vector `e_i`.
    pub fn e(&self, i: usize) -> NVec {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        v
    }

    /// Dual basis vector `f_i`.
    pub fn f(&self, i: usize) -> MVec {
        let mut v = vec![Q::zero(); self.rank()];
        v[i] = Q::one();
        v
    }
}

/// A seed: fixed data expressed in its own basis, plus the mutation word leading
/// to it and its basis written in the coordinates of the initial seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    pub data: FixedData,
    /// Mutation directions applied to the initial seed, in order.
    pub word: Vec<usize>,
    /// `basis[i]` is `e_i` of this seed in initial `e`-coordinates.
    pub basis: Vec<NVec>,
}

impl Seed {
    pub fn initial(data: FixedData) -> Seed {
        let r = data.rank();
        let basis = (0..r).map(|i| data.e(i)).collect();
        Seed { data, word: Vec::new(), basis }
    }

    pub fn rank(&self) -> usize {
        self.data.rank()
    }

    /// Seed mutation in direction `k`.
    pub fn mutate(&self, k: usize) -> Result<Seed> {
        let a = self.data.transition_matrix(k)?;
        let r = self.rank();
        let basis: Vec<NVec> = (0..r)
            .map(|j| {
                let mut v = vec![0i64; r];
                for i in 0..r {
                    if a[i][j] != 0 {
                        for (x, y) in v.iter_mut().zip(&self.basis[i]) {
                            *x += a[i][j] * y;
                        }
                    }
                }
                v
            })
            .collect();
        let mut word = self.word.clone();
        word.push(k);
        Ok(Seed { data: self.data.mutate(k)?, word, basis })
    }

    /// Writes an element given in this seed's `e`-coordinates in initial coordinates.
    pub fn to_initial_n(&self, n: &[i64]) -> NVec {
        let r = self.rank();
        let mut v = vec![0i64; r];
        for (i, &c) in n.iter().enumerate() {
            if c != 0 {
                for (x, y) in v.iter_mut().zip(&self.basis[i]) {
                    *x += c * y;
                }
            }
        }
        v
    }

    /// Writes an element of `M_R` given in initial `f`-coordinates in this seed's
    /// `f`-coordinates, using `z'_i = delta_i <e'_i, z>`.
    pub fn from_initial_m(&self, z: &[Q]) -> MVec {
        (0..self.rank())
            .map(|i| {
                let e_i = &self.basis[i];
                let mut acc = Q::zero();
                for j in 0..self.rank() {
                    if e_i[j] != 0 {
                        acc += &z[j] * q(e_i[j], self.data.delta[j]);
                    }
                }
                acc * qi(self.data.delta[i])
            })
            .collect()
    }
}

/// Matrix mutation of an exchange matrix in the sign-symmetric form.
pub fn matrix_mutation(b: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
    let r = b.len();
    let mut out = vec![vec![0i64; r]; r];
    for i in 0..r {
        for j in 0..r {
            out[i][j] = if i == k || j == k {
                -b[i][j]
            } else {
                b[i][j] + b[i][k].max(0) * b[k][j].max(0) - (-b[i][k]).max(0) * (-b[k][j]).max(0)
            };
        }
    }
    out
}
