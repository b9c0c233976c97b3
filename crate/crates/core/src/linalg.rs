//! Exact linear algebra over `Q(q)` with modular rank prediction.

use crate::scalars::{Poly, RatFun};

pub type Matrix = Vec<Vec<RatFun>>;

const PRIME: u64 = 2_305_843_009_213_693_951; // 2^61 - 1
const POINTS: [u64; 6] = [1_234_567_891, 987_654_321_123, 31_415_926_535, 271_828_182_845, 161_803_398_874, 141_421_356_237];

fn weight(x: &RatFun) -> usize {
    x.num().terms().len() + x.den().terms().len() + x.num().degree().unwrap_or(0) as usize + x.den().degree().unwrap_or(0) as usize
}

fn eval_matrix(m: &Matrix, x: u64) -> Option<Vec<Vec<u64>>> {
    let mut out = Vec::with_capacity(m.len());
    for row in m {
        let mut r = Vec::with_capacity(row.len());
        for e in row {
            r.push(e.eval_mod(x, PRIME)?);
        }
        out.push(r);
    }
    Some(out)
}

fn mulmod(a: u64, b: u64) -> u64 {
    (a as u128 * b as u128 % PRIME as u128) as u64
}

fn invmod(a: u64) -> u64 {
    let mut r: u128 = 1;
    let mut b = a as u128;
    let mut e = PRIME - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % PRIME as u128;
        }
        b = b * b % PRIME as u128;
        e >>= 1;
    }
    r as u64
}

/// Greedy lexicographically-first independent rows of a matrix over `F_p`.
fn greedy_rows_mod(m: &[Vec<u64>]) -> Vec<usize> {
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new(); // (pivot column, reduced row)
    let mut chosen = Vec::new();
    for (i, row) in m.iter().enumerate() {
        let mut v = row.clone();
        for (pc, b) in &basis {
            if v[*pc] != 0 {
                let f = v[*pc];
                for c in 0..ncols {
                    v[c] = (v[c] + PRIME - mulmod(f, b[c])) % PRIME;
                }
            }
        }
        if let Some(pc) = v.iter().position(|x| *x != 0) {
            let inv = invmod(v[pc]);
            for x in v.iter_mut() {
                *x = mulmod(*x, inv);
            }
            basis.push((pc, v));
            chosen.push(i);
        }
    }
    chosen
}

/// Lexicographically-first independent rows, predicted at a random point and
/// returned only when `check` certifies the prediction.
pub fn predicted_rows(m: &Matrix) -> Vec<usize> {
    for &x in POINTS.iter() {
        if let Some(e) = eval_matrix(m, x) {
            return greedy_rows_mod(&e);
        }
    }
    independent_rows(m)
}

fn poly_weight(x: &Poly) -> usize {
    x.terms().len() + x.degree().unwrap_or(0) as usize
}

/// Clears denominators row by row; row scaling leaves the row space unchanged.
fn to_poly_rows(m: &Matrix) -> Vec<Vec<Poly>> {
    m.iter()
        .map(|row| {
            let mut l = Poly::one();
            for e in row.iter().filter(|e| !e.den().is_one()) {
                let g = Poly::gcd(&l, e.den());
                l = &l * &e.den().div_exact(&g).expect("gcd divides");
            }
            let scaled: Vec<Poly> = row
                .iter()
                .map(|e| if e.is_zero() { Poly::zero() } else { (&l * e.num()).div_exact(e.den()).expect("lcm") })
                .collect();
            let content = scaled.iter().fold(num_bigint::BigInt::from(0), |acc, p| num_integer::Integer::gcd(&acc, &p.content()));
            if content > num_bigint::BigInt::from(1) {
                scaled.iter().map(|p| p.div_exact_int(&content)).collect()
            } else {
                scaled
            }
        })
        .collect()
}

/// Fraction-free Gauss-Jordan elimination over `Z[q]`. On success every pivot
/// entry equals the returned common pivot and all other pivot-column entries vanish.
fn bareiss_jordan(a: &mut [Vec<Poly>]) -> Option<(Vec<usize>, Poly)> {
    let nrows = a.len();
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut prev = Poly::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r >= nrows {
            break;
        }
        let best = (r..nrows).filter(|&i| !a[i][c].is_zero()).min_by_key(|&i| poly_weight(&a[i][c]));
        let Some(p) = best else { continue };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in 0..nrows {
            if i == r {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..ncols {
                if j == c {
                    continue;
                }
                let t = if f.is_zero() || a[r][j].is_zero() {
                    &piv * &a[i][j]
                } else {
                    &(&piv * &a[i][j]) - &(&f * &a[r][j])
                };
                a[i][j] = if prev.is_one() { t } else { t.div_exact(&prev)? };
            }
            a[i][c] = Poly::zero();
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    Some((pivots, prev))
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let mut a = to_poly_rows(m);
    let Some((pivots, common)) = bareiss_jordan(&mut a) else {
        return rref_direct(m);
    };
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let inv = RatFun::from_poly(common).inv().expect("nonzero pivot");
    for (i, row) in m.iter_mut().enumerate() {
        for j in 0..ncols {
            row[j] = if i < pivots.len() {
                if a[i][j].is_zero() {
                    RatFun::zero()
                } else {
                    &RatFun::from_poly(a[i][j].clone()) * &inv
                }
            } else {
                RatFun::zero()
            };
        }
    }
    pivots
}

/// Elimination directly over `Q(q)`.
fn rref_direct(m: &mut Matrix) -> Vec<usize> {
    let nrows = m.len();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r >= nrows {
            break;
        }
        let best = (r..nrows).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| weight(&m[i][c]));
        let Some(p) = best else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for j in c..ncols {
            if !m[r][j].is_zero() {
                m[r][j] = &m[r][j] * &inv;
            }
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    if !m[r][j].is_zero() {
                        let t = &f * &m[r][j];
                        m[i][j] = &m[i][j] - &t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of `{v : m v = 0}`; one vector per free column with a 1 in that column.
pub fn nullspace(m: &Matrix, ncols: usize) -> Vec<Vec<RatFun>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let mut out = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![RatFun::zero(); ncols];
        v[free] = RatFun::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&a[r][free];
        }
        out.push(v);
    }
    out
}

/// Greedy lexicographically-first independent rows computed exactly.
pub fn independent_rows(m: &Matrix) -> Vec<usize> {
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut basis: Vec<(usize, Vec<RatFun>)> = Vec::new();
    let mut chosen = Vec::new();
    for (i, row) in m.iter().enumerate() {
        let mut v = row.clone();
        for (pc, b) in &basis {
            if !v[*pc].is_zero() {
                let f = v[*pc].clone();
                for c in 0..ncols {
                    if !b[c].is_zero() {
                        v[c] = &v[c] - &(&f * &b[c]);
                    }
                }
            }
        }
        if let Some(pc) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[pc].inv().unwrap();
            for x in v.iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
            basis.push((pc, v));
            chosen.push(i);
        }
    }
    chosen
}

/// Solves `a x = b` for square nonsingular `a`, with `b` given as columns.
pub fn solve(a: &Matrix, rhs: &[Vec<RatFun>]) -> Option<Vec<Vec<RatFun>>> {
    let n = a.len();
    let k = rhs.len();
    let mut aug: Matrix = (0..n)
        .map(|i| {
            let mut row = a[i].clone();
            for col in rhs {
                row.push(col[i].clone());
            }
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some((0..k).map(|j| (0..n).map(|i| aug[i][n + j].clone()).collect()).collect())
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let ident: Vec<Vec<RatFun>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { RatFun::one() } else { RatFun::zero() }).collect())
        .collect();
    let cols = solve(a, &ident)?;
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

pub fn mat_vec(m: &Matrix, v: &[RatFun]) -> Vec<RatFun> {
    m.iter()
        .map(|row| {
            let mut acc = RatFun::zero();
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
            acc
        })
        .collect()
}

pub fn dot(a: &[RatFun], b: &[RatFun]) -> RatFun {
    let mut acc = RatFun::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

/// Whether the row spaces of two matrices with equal column counts coincide.
pub fn same_row_space(a: &Matrix, b: &Matrix) -> bool {
    let ra = rank(a);
    let rb = rank(b);
    if ra != rb {
        return false;
    }
    let mut both = a.clone();
    both.extend(b.iter().cloned());
    rank(&both) == ra
}
