//! Integer congruence classes of skew-symmetric matrices.
//!
//! A skew form is brought to block form `diag(d_1 J, d_2 J, ..., 0)` with
//! `J = [[0,1],[-1,0]]` and `d_1 | d_2 | ...` by unimodular basis changes.

use serde::Serialize;

use crate::cartan::{CartanData, Word};
use crate::error::{Error, Result};
use crate::torus::SkewMatrix;

pub type IntMatrix = Vec<Vec<i64>>;

/// `S_kl = C_{w_k, w_l}` for `k < l`.
pub fn s_matrix(data: &CartanData, w: &[usize]) -> SkewMatrix {
    SkewMatrix::from_word(data, w)
}

/// The invariants `d_1 | d_2 | ...` of a skew form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorSequence {
    pub divisors: Vec<i64>,
}

impl DivisorSequence {
    pub fn rank(&self) -> usize {
        2 * self.divisors.len()
    }

    /// `c_1 = d_1`, `c_k = d_k / d_{k-1}`.
    pub fn quotients(&self) -> Vec<i64> {
        let mut prev = 1;
        self.divisors
            .iter()
            .map(|&d| {
                let c = d / prev;
                prev = d;
                c
            })
            .collect()
    }
}

/// An integer matrix with determinant `±1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnimodularMatrix {
    pub rows: IntMatrix,
}

impl UnimodularMatrix {
    pub fn identity(m: usize) -> Self {
        UnimodularMatrix { rows: (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect() }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn det(&self) -> i64 {
        int_det(&self.rows)
    }

    /// `T S T^t`.
    pub fn congruence(&self, s: &IntMatrix) -> IntMatrix {
        mat_mul(&mat_mul(&self.rows, s), &transpose(&self.rows))
    }
}

pub fn transpose(a: &IntMatrix) -> IntMatrix {
    let n = a.first().map(|r| r.len()).unwrap_or(0);
    (0..n).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = b.first().map(|r| r.len()).unwrap_or(0);
    a.iter().map(|r| (0..n).map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum()).collect()).collect()
}

/// Exact determinant by fraction-free elimination.
pub fn int_det(a: &IntMatrix) -> i64 {
    let n = a.len();
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else { return 0 };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    if n == 0 {
        return 1;
    }
    (sign * m[n - 1][n - 1]) as i64
}

/// Congruence reduction of a skew form.
#[derive(Clone, Debug, Serialize)]
pub struct SkewNormalForm {
    /// `T` with `T S T^t = block`.
    pub transform: UnimodularMatrix,
    /// `T^{-1}`.
    pub inverse: IntMatrix,
    pub divisors: DivisorSequence,
    pub block: IntMatrix,
    /// Same form with `d_k` at `(k, m+1-k)`, present when the corank is at most one.
    pub antidiagonal: Option<Antidiagonal>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Antidiagonal {
    pub transform: UnimodularMatrix,
    pub matrix: IntMatrix,
}

impl SkewNormalForm {
    pub fn rank(&self) -> usize {
        self.divisors.rank()
    }

    /// The Pfaffian of the original form, zero unless it is nondegenerate.
    pub fn pfaffian(&self) -> i64 {
        let m = self.transform.size();
        if self.rank() < m {
            return 0;
        }
        // Pf(T S T^t) = det(T) Pf(S)
        self.transform.det() * self.divisors.divisors.iter().product::<i64>()
    }
}

struct Reducer {
    m: IntMatrix,
    t: IntMatrix,
    tinv: IntMatrix,
}

impl Reducer {
    /// Basis change `e_r += c e_s`.
    fn add(&mut self, r: usize, s: usize, c: i64) {
        if c == 0 {
            return;
        }
        let n = self.m.len();
        for j in 0..n {
            self.m[r][j] += c * self.m[s][j];
        }
        for i in 0..n {
            self.m[i][r] += c * self.m[i][s];
        }
        for j in 0..n {
            self.t[r][j] += c * self.t[s][j];
        }
        for i in 0..n {
            self.tinv[i][s] -= c * self.tinv[i][r];
        }
    }

    fn swap(&mut self, r: usize, s: usize) {
        if r == s {
            return;
        }
        self.m.swap(r, s);
        for row in self.m.iter_mut() {
            row.swap(r, s);
        }
        self.t.swap(r, s);
        for row in self.tinv.iter_mut() {
            row.swap(r, s);
        }
    }

    fn negate(&mut self, r: usize) {
        let n = self.m.len();
        for j in 0..n {
            self.m[r][j] = -self.m[r][j];
            self.m[j][r] = -self.m[j][r];
            self.t[r][j] = -self.t[r][j];
            self.tinv[j][r] = -self.tinv[j][r];
        }
    }

    /// Smallest nonzero entry `(k, l)`, `k < l`, in the trailing square from `p`.
    fn pivot(&self, p: usize) -> Option<(usize, usize)> {
        let n = self.m.len();
        let mut best: Option<(usize, usize)> = None;
        for k in p..n {
            for l in k + 1..n {
                let v = self.m[k][l].abs();
                if v != 0 && best.is_none_or(|(a, b)| v < self.m[a][b].abs()) {
                    best = Some((k, l));
                }
            }
        }
        best
    }

    /// Reduces rows and columns `p, p+1`; returns `false` when a smaller remainder appeared.
    fn clear_block(&mut self, p: usize) -> bool {
        let n = self.m.len();
        let d = self.m[p][p + 1];
        let mut clean = true;
        for r in p + 2..n {
            let c = self.m[p][r].div_euclid(d);
            self.add(r, p + 1, -c);
            let c = self.m[p + 1][r].div_euclid(d);
            self.add(r, p, c);
            if self.m[p][r] != 0 || self.m[p + 1][r] != 0 {
                clean = false;
            }
        }
        clean
    }

    fn reduce(&mut self) -> Vec<i64> {
        let n = self.m.len();
        let mut divisors = Vec::new();
        let mut p = 0;
        while p + 1 < n {
            let Some((k, l)) = self.pivot(p) else { break };
            self.swap(p, k);
            self.swap(p + 1, l);
            if self.m[p][p + 1] < 0 {
                self.negate(p + 1);
            }
            if !self.clear_block(p) {
                continue;
            }
            let d = self.m[p][p + 1];
            let bad = (p + 2..n).flat_map(|r| (r + 1..n).map(move |s| (r, s))).find(|&(r, s)| self.m[r][s] % d != 0);
            if let Some((r, _)) = bad {
                self.add(p, r, 1);
                continue;
            }
            divisors.push(d);
            p += 2;
        }
        divisors
    }
}

/// Block normal form with unimodular transform and inverse.
pub fn skew_normal_form(s: &SkewMatrix) -> SkewNormalForm {
    let n = s.size();
    let id = UnimodularMatrix::identity(n).rows;
    let mut red = Reducer { m: s.entries().to_vec(), t: id.clone(), tinv: id };
    let divisors = DivisorSequence { divisors: red.reduce() };
    let rank = divisors.rank();
    let antidiagonal = (rank + 1 >= n).then(|| {
        // block k sits at (2k, 2k+1); move it to (k, n-1-k)
        let mut perm = vec![0usize; n];
        for k in 0..divisors.divisors.len() {
            perm[k] = 2 * k;
            perm[n - 1 - k] = 2 * k + 1;
        }
        if n % 2 == 1 {
            perm[n / 2] = n - 1;
        }
        let rows: IntMatrix = perm.iter().map(|&i| red.t[i].clone()).collect();
        let matrix: IntMatrix = perm.iter().map(|&i| perm.iter().map(|&j| red.m[i][j]).collect()).collect();
        Antidiagonal { transform: UnimodularMatrix { rows }, matrix }
    });
    SkewNormalForm { transform: UnimodularMatrix { rows: red.t }, inverse: red.tinv, divisors, block: red.m, antidiagonal }
}

/// Outcome of an equivalence test.
#[derive(Clone, Debug, Serialize)]
pub struct Equivalence {
    /// Congruent under some integer matrix of determinant `±1`.
    pub equivalent: bool,
    /// Congruent under some integer matrix of determinant `1`.
    pub sl_equivalent: bool,
    /// `T` with `S' = T S T^t`, of determinant `1` whenever that is possible.
    pub witness: Option<UnimodularMatrix>,
}

/// Decides whether `S' = T S T^t` for a unimodular `T`.
pub fn equivalent(s: &SkewMatrix, s2: &SkewMatrix) -> Result<Equivalence> {
    if s.size() != s2.size() {
        return Err(Error::SizeMismatch(s.size(), s2.size()));
    }
    let n = s.size();
    let a = skew_normal_form(s);
    let b = skew_normal_form(s2);
    if a.divisors != b.divisors {
        return Ok(Equivalence { equivalent: false, sl_equivalent: false, witness: None });
    }
    // S' = T2^{-1} T1 S T1^t T2^{-t}
    let mut left = b.inverse.clone();
    let mut witness = UnimodularMatrix { rows: mat_mul(&left, &a.transform.rows) };
    let mut sl = witness.det() == 1;
    if !sl && a.rank() < n {
        // negating a kernel vector of the block form is an automorphism of determinant -1
        for row in left.iter_mut() {
            row[n - 1] = -row[n - 1];
        }
        witness = UnimodularMatrix { rows: mat_mul(&left, &a.transform.rows) };
        sl = true;
    }
    Ok(Equivalence { equivalent: true, sl_equivalent: sl, witness: Some(witness) })
}

/// Divisor sequences of `S(w)` for each word.
pub fn divisors_for_words(data: &CartanData, words: &[Word]) -> Vec<DivisorSequence> {
    words.iter().map(|w| skew_normal_form(&s_matrix(data, w)).divisors).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::parse_word;

    fn check_form(s: &SkewMatrix) -> SkewNormalForm {
        let nf = skew_normal_form(s);
        let n = s.size();
        assert_eq!(nf.transform.congruence(&s.entries().to_vec()), nf.block);
        assert!(nf.transform.det().abs() == 1);
        assert_eq!(mat_mul(&nf.transform.rows, &nf.inverse), UnimodularMatrix::identity(n).rows);
        for (k, &d) in nf.divisors.divisors.iter().enumerate() {
            assert_eq!(nf.block[2 * k][2 * k + 1], d);
            if k > 0 {
                assert_eq!(d % nf.divisors.divisors[k - 1], 0);
            }
        }
        if let Some(ad) = &nf.antidiagonal {
            assert_eq!(ad.transform.congruence(&s.entries().to_vec()), ad.matrix);
        }
        nf
    }

    #[test]
    fn examples() {
        let a2 = CartanData::a2();
        let s = s_matrix(&a2, &parse_word("1,2,1").unwrap());
        assert_eq!(s.entries(), &[vec![0, -1, 2], vec![1, 0, -1], vec![-2, 1, 0]]);
        let nf = check_form(&s);
        assert_eq!(nf.divisors.divisors, vec![1]);
        assert_eq!(nf.rank(), 2);
        let ad = nf.antidiagonal.unwrap();
        assert_eq!(ad.matrix, vec![vec![0, 0, 1], vec![0, 0, 0], vec![-1, 0, 0]]);

        let b2 = CartanData::b2();
        let s = s_matrix(&b2, &parse_word("1,2,1,2").unwrap());
        let e = s.entries();
        assert_eq!([e[0][1], e[0][2], e[0][3], e[1][2], e[1][3], e[2][3]], [-2, 2, -2, -2, 4, -2]);
        check_form(&s);

        assert_eq!(s_matrix(&a2, &[0]).entries(), &[vec![0]]);
        assert!(check_form(&SkewMatrix::zero(3)).divisors.divisors.is_empty());
        let j = SkewMatrix::new(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(check_form(&j).divisors.divisors, vec![1]);
    }

    #[test]
    fn divisibility_fixup() {
        let s = SkewMatrix::new(vec![vec![0, 2, 0, 0], vec![-2, 0, 0, 0], vec![0, 0, 0, 3], vec![0, 0, -3, 0]]).unwrap();
        let nf = check_form(&s);
        assert_eq!(nf.divisors.divisors, vec![1, 6]);
        assert_eq!(nf.divisors.quotients(), vec![1, 6]);
        assert_eq!(nf.pfaffian().abs(), 6);
    }

    #[test]
    fn equivalence() {
        let a2 = CartanData::a2();
        let s = s_matrix(&a2, &parse_word("1,2,1").unwrap());
        let s2 = s_matrix(&a2, &parse_word("2,1,2").unwrap());
        let e = equivalent(&s, &s2).unwrap();
        assert!(e.equivalent && e.sl_equivalent);
        let t = e.witness.unwrap();
        assert_eq!(t.det(), 1);
        assert_eq!(t.congruence(&s.entries().to_vec()), s2.entries());
        assert!(!equivalent(&s, &SkewMatrix::zero(3)).unwrap().equivalent);
        assert_eq!(equivalent(&s, &SkewMatrix::zero(2)).unwrap_err(), Error::SizeMismatch(3, 2));
    }

    #[test]
    fn orientation_matters_for_full_rank() {
        let j = SkewMatrix::new(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let jt = SkewMatrix::new(vec![vec![0, -1], vec![1, 0]]).unwrap();
        let e = equivalent(&j, &jt).unwrap();
        assert!(e.equivalent);
        assert!(!e.sl_equivalent);
        assert_eq!(e.witness.unwrap().congruence(&j.entries().to_vec()), jt.entries());
    }
}
