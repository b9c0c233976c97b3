//! Cartan data, reflections, reduced words and weight sequences.
//!
//! Letters of words are stored 0-based; text forms are 1-based.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// A word `(i_1, ..., i_m)` in the simple reflections, 0-based.
pub type Word = Vec<usize>;

/// Default node cap for braid-orbit enumeration.
pub const ORBIT_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanData {
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    d: Vec<i64>,
    #[serde(skip)]
    c: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct CartanFile {
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    d: Vec<i64>,
}

impl CartanData {
    /// Validates a symmetrizable Cartan matrix together with its symmetrizer.
    pub fn new(a: Vec<Vec<i64>>, d: Vec<i64>) -> Result<Self> {
        let r = a.len();
        if d.len() != r || a.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidCartan("matrix must be square and match d".into()));
        }
        if d.iter().any(|&x| x <= 0) {
            return Err(Error::InvalidCartan("d must be positive".into()));
        }
        for i in 0..r {
            if a[i][i] != 2 {
                return Err(Error::InvalidCartan(format!("a_{}{} != 2", i + 1, i + 1)));
            }
            for j in 0..r {
                if i == j {
                    continue;
                }
                if a[i][j] > 0 {
                    return Err(Error::InvalidCartan(format!("a_{}{} > 0", i + 1, j + 1)));
                }
                if (a[i][j] == 0) != (a[j][i] == 0) {
                    return Err(Error::InvalidCartan(format!("a_{}{} and a_{}{} disagree on zero", i + 1, j + 1, j + 1, i + 1)));
                }
                if d[i] * a[i][j] != d[j] * a[j][i] {
                    return Err(Error::InvalidCartan("d does not symmetrize A".into()));
                }
            }
        }
        let c = (0..r).map(|i| (0..r).map(|j| d[i] * a[i][j]).collect()).collect();
        Ok(CartanData { a, d, c })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: CartanFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(f.a, f.d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    /// Type `A_r`.
    pub fn type_a(r: usize) -> Self {
        let a = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| if i == j { 2 } else if i.abs_diff(j) == 1 { -1 } else { 0 })
                    .collect()
            })
            .collect();
        Self::new(a, vec![1; r]).expect("type A is valid")
    }

    pub fn a2() -> Self {
        Self::type_a(2)
    }

    pub fn a3() -> Self {
        Self::type_a(3)
    }

    /// `B_2` with `a_12 = -2`, `a_21 = -1`, `d = (1, 2)`.
    pub fn b2() -> Self {
        Self::new(vec![vec![2, -2], vec![-1, 2]], vec![1, 2]).expect("B2 is valid")
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn c(&self, i: usize, j: usize) -> i64 {
        self.c[i][j]
    }

    pub fn d(&self, i: usize) -> i64 {
        self.d[i]
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn symmetrized(&self) -> &[Vec<i64>] {
        &self.c
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.d
    }

    /// Stable identifier used in cache keys.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        digest.iter().take(12).map(|b| format!("{:02x}", b)).collect()
    }

    /// Order of `s_i s_j` from `a_ij a_ji`; `None` when infinite.
    pub fn braid_length(&self, i: usize, j: usize) -> Option<usize> {
        match self.a[i][j] * self.a[j][i] {
            0 => Some(2),
            1 => Some(3),
            2 => Some(4),
            3 => Some(6),
            _ => None,
        }
    }

    /// `(x, y) = sum x_i C_ij y_j`.
    pub fn form(&self, x: &[i64], y: &[i64]) -> i64 {
        let r = self.rank();
        let mut s = 0;
        for i in 0..r {
            if x[i] == 0 {
                continue;
            }
            for j in 0..r {
                s += x[i] * self.c[i][j] * y[j];
            }
        }
        s
    }

    pub fn check_word(&self, w: &[usize]) -> Result<()> {
        for &i in w {
            if i >= self.rank() {
                return Err(Error::IndexOutOfRange { index: i + 1, rank: self.rank() });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Lattice {
    Root,
    Coroot,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootVector {
    pub coords: Vec<i64>,
    pub lattice: Lattice,
}

impl RootVector {
    pub fn simple(r: usize, i: usize, lattice: Lattice) -> Self {
        let mut coords = vec![0; r];
        coords[i] = 1;
        RootVector { coords, lattice }
    }
}

/// Simple reflection `s_i`; roots use `a_ij`, coroots use the transpose.
pub fn reflect(data: &CartanData, i: usize, v: &RootVector) -> Result<RootVector> {
    let r = data.rank();
    if i >= r {
        return Err(Error::IndexOutOfRange { index: i + 1, rank: r });
    }
    if v.coords.len() != r {
        return Err(Error::SizeMismatch(v.coords.len(), r));
    }
    let mut coords = v.coords.clone();
    let shift: i64 = (0..r)
        .map(|j| {
            let a = match v.lattice {
                Lattice::Root => data.a(i, j),
                Lattice::Coroot => data.a(j, i),
            };
            a * v.coords[j]
        })
        .sum();
    coords[i] -= shift;
    Ok(RootVector { coords, lattice: v.lattice })
}

/// `s_{i_1} ... s_{i_{k-1}}(simple_{i_k})` for every `k`.
fn partial_vectors(data: &CartanData, w: &[usize], lattice: Lattice) -> Result<Vec<RootVector>> {
    data.check_word(w)?;
    let r = data.rank();
    let mut out = Vec::with_capacity(w.len());
    for k in 0..w.len() {
        let mut v = RootVector::simple(r, w[k], lattice);
        for &j in w[..k].iter().rev() {
            v = reflect(data, j, &v)?;
        }
        out.push(v);
    }
    Ok(out)
}

/// Partial roots `beta_k` of a word.
pub fn partial_roots(data: &CartanData, w: &[usize]) -> Result<Vec<RootVector>> {
    partial_vectors(data, w, Lattice::Root)
}

pub fn is_reduced(data: &CartanData, w: &[usize]) -> bool {
    match partial_roots(data, w) {
        Ok(roots) => roots.iter().all(|b| b.coords.iter().all(|&c| c >= 0)),
        Err(_) => false,
    }
}

pub fn format_word(w: &[usize]) -> String {
    let s: Vec<String> = w.iter().map(|i| (i + 1).to_string()).collect();
    format!("({})", s.join(","))
}

/// Parses `"1,2,1"` (1-based) into a 0-based word; the empty string is the empty word.
pub fn parse_word(s: &str) -> Result<Word> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|x| {
            let v: usize = x.trim().parse().map_err(|_| Error::Parse(format!("bad letter '{}'", x)))?;
            if v == 0 {
                return Err(Error::Parse("letters are 1-based".into()));
            }
            Ok(v - 1)
        })
        .collect()
}

/// All words obtained from `w` by one braid move, with the move position and pair.
pub fn braid_neighbors(data: &CartanData, w: &[usize]) -> Vec<(Word, usize, usize, usize)> {
    let mut out = Vec::new();
    let m = w.len();
    for p in 0..m.saturating_sub(1) {
        let (i, j) = (w[p], w[p + 1]);
        if i == j {
            continue;
        }
        let Some(l) = data.braid_length(i, j) else { continue };
        if p + l > m {
            continue;
        }
        let ok = (0..l).all(|k| w[p + k] == if k % 2 == 0 { i } else { j });
        if ok {
            let mut nw = w.to_vec();
            for k in 0..l {
                nw[p + k] = if k % 2 == 0 { j } else { i };
            }
            out.push((nw, p, i, j));
        }
    }
    out
}

/// The braid-move orbit of a reduced word.
pub fn enumerate_reduced(data: &CartanData, w: &[usize]) -> Result<BTreeSet<Word>> {
    enumerate_reduced_capped(data, w, ORBIT_CAP)
}

pub fn enumerate_reduced_capped(data: &CartanData, w: &[usize], cap: usize) -> Result<BTreeSet<Word>> {
    data.check_word(w)?;
    if !is_reduced(data, w) {
        return Err(Error::NotReduced(format_word(w)));
    }
    let mut seen: BTreeSet<Word> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(w.to_vec());
    queue.push_back(w.to_vec());
    while let Some(cur) = queue.pop_front() {
        for (nw, ..) in braid_neighbors(data, &cur) {
            if seen.insert(nw.clone()) {
                if seen.len() > cap {
                    return Err(Error::OrbitCapExceeded(cap));
                }
                queue.push_back(nw);
            }
        }
    }
    Ok(seen)
}

/// One step of a braid path: the move at `position` turning `(i,j,i,..)` into `(j,i,j,..)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidMove {
    pub position: usize,
    pub i: usize,
    pub j: usize,
    pub length: usize,
    pub result: Word,
}

/// Shortest braid path from `src` to `dst` using only moves whose length is allowed.
pub fn braid_path(data: &CartanData, src: &[usize], dst: &[usize], allowed: &dyn Fn(usize) -> bool) -> Option<Vec<BraidMove>> {
    let mut prev: HashMap<Word, (Word, BraidMove)> = HashMap::new();
    let mut queue = VecDeque::new();
    let start = src.to_vec();
    let mut seen: BTreeSet<Word> = BTreeSet::new();
    seen.insert(start.clone());
    queue.push_back(start.clone());
    while let Some(cur) = queue.pop_front() {
        if cur == dst {
            let mut path = Vec::new();
            let mut node = cur;
            while node != start {
                let (p, mv) = prev.remove(&node).unwrap();
                path.push(mv);
                node = p;
            }
            path.reverse();
            return Some(path);
        }
        for (nw, p, i, j) in braid_neighbors(data, &cur) {
            let l = data.braid_length(i, j).unwrap();
            if !allowed(l) {
                continue;
            }
            if seen.insert(nw.clone()) {
                if seen.len() > ORBIT_CAP {
                    return None;
                }
                let mv = BraidMove { position: p, i, j, length: l, result: nw.clone() };
                prev.insert(nw.clone(), (cur.clone(), mv));
                queue.push_back(nw);
            }
        }
    }
    None
}

/// `(a_1..a_m)` with `a_k = lambda(s_{i_1}..s_{i_{k-1}}(coroot_{i_k}))`.
pub fn weight_sequence(data: &CartanData, lambda: &[i64], w: &[usize]) -> Result<Vec<i64>> {
    if lambda.len() != data.rank() {
        return Err(Error::SizeMismatch(lambda.len(), data.rank()));
    }
    if !is_reduced(data, w) {
        data.check_word(w)?;
        return Err(Error::NotReduced(format_word(w)));
    }
    let vs = partial_vectors(data, w, Lattice::Coroot)?;
    Ok(vs.iter().map(|v| v.coords.iter().zip(lambda).map(|(c, l)| c * l).sum()).collect())
}

/// A reduced word for the longest element, when the group is finite.
pub fn longest_word(data: &CartanData) -> Option<Word> {
    let r = data.rank();
    let mut w: Word = Vec::new();
    let limit = 200;
    loop {
        let mut extended = false;
        for i in 0..r {
            let mut cand = w.clone();
            cand.push(i);
            if is_reduced(data, &cand) {
                w = cand;
                extended = true;
                break;
            }
        }
        if !extended {
            return Some(w);
        }
        if w.len() > limit {
            return None;
        }
    }
}

/// All reduced words of length at most `max_len`, grouped by braid orbit.
pub fn reduced_orbits(data: &CartanData, max_len: usize) -> Vec<BTreeSet<Word>> {
    let mut orbits: Vec<BTreeSet<Word>> = Vec::new();
    let mut covered: BTreeSet<Word> = BTreeSet::new();
    let mut layer: Vec<Word> = vec![Vec::new()];
    for len in 0..=max_len {
        let mut next = Vec::new();
        for w in &layer {
            if !covered.contains(w) {
                let orb = enumerate_reduced(data, w).expect("reduced");
                covered.extend(orb.iter().cloned());
                orbits.push(orb);
            }
            if len < max_len {
                for i in 0..data.rank() {
                    let mut c = w.clone();
                    c.push(i);
                    if is_reduced(data, &c) {
                        next.push(c);
                    }
                }
            }
        }
        next.sort();
        next.dedup();
        layer = next;
    }
    orbits
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[usize]) -> Word {
        s.iter().map(|x| x - 1).collect()
    }

    #[test]
    fn validation() {
        assert!(CartanData::new(vec![vec![2, -1], vec![0, 2]], vec![1, 1]).is_err());
        assert!(CartanData::new(vec![vec![2, -2], vec![-1, 2]], vec![1, 1]).is_err());
        let b2 = CartanData::b2();
        assert_eq!(b2.symmetrized(), &[vec![2, -2], vec![-2, 4]]);
        let parsed = CartanData::from_json(r#"{"A":[[2,-1],[-1,2]],"d":[1,1]}"#).unwrap();
        assert_eq!(parsed, CartanData::a2());
    }

    #[test]
    fn reflections() {
        let a2 = CartanData::a2();
        let a1 = RootVector::simple(2, 0, Lattice::Root);
        let a2v = RootVector::simple(2, 1, Lattice::Root);
        assert_eq!(reflect(&a2, 0, &a2v).unwrap().coords, vec![1, 1]);
        assert_eq!(reflect(&a2, 0, &a1).unwrap().coords, vec![-1, 0]);
        let c2 = RootVector::simple(2, 1, Lattice::Coroot);
        assert_eq!(reflect(&a2, 0, &c2).unwrap().coords, vec![1, 1]);
        assert!(matches!(reflect(&a2, 5, &a1), Err(Error::IndexOutOfRange { .. })));
        // B2 distinguishes the two actions
        let b2 = CartanData::b2();
        let r = reflect(&b2, 0, &RootVector::simple(2, 1, Lattice::Root)).unwrap();
        let c = reflect(&b2, 0, &RootVector::simple(2, 1, Lattice::Coroot)).unwrap();
        assert_eq!(r.coords, vec![2, 1]);
        assert_eq!(c.coords, vec![1, 1]);
    }

    #[test]
    fn reducedness() {
        let a2 = CartanData::a2();
        assert!(is_reduced(&a2, &w(&[1, 2, 1])));
        assert!(!is_reduced(&a2, &w(&[1, 1])));
        assert!(!is_reduced(&a2, &w(&[1, 2, 1, 2])));
        assert!(is_reduced(&a2, &[]));
        let roots = partial_roots(&a2, &w(&[1, 2, 1, 2])).unwrap();
        assert_eq!(roots[3].coords, vec![-1, 0]);
    }

    #[test]
    fn orbits() {
        let a2 = CartanData::a2();
        let o = enumerate_reduced(&a2, &w(&[1, 2, 1])).unwrap();
        assert_eq!(o.into_iter().collect::<Vec<_>>(), vec![w(&[1, 2, 1]), w(&[2, 1, 2])]);
        assert_eq!(enumerate_reduced(&a2, &w(&[1])).unwrap().len(), 1);
        assert!(matches!(enumerate_reduced(&a2, &w(&[1, 1])), Err(Error::NotReduced(_))));
        let a3 = CartanData::a3();
        let w0 = longest_word(&a3).unwrap();
        assert_eq!(w0.len(), 6);
        assert_eq!(enumerate_reduced(&a3, &w0).unwrap().len(), 16);
        let b2 = CartanData::b2();
        assert_eq!(enumerate_reduced(&b2, &longest_word(&b2).unwrap()).unwrap().len(), 2);
    }

    #[test]
    fn weight_sequences() {
        let a2 = CartanData::a2();
        assert_eq!(weight_sequence(&a2, &[1, 0], &w(&[1, 2])).unwrap(), vec![1, 1]);
        assert_eq!(weight_sequence(&a2, &[1, 1], &w(&[1, 2, 1])).unwrap(), vec![1, 2, 1]);
        assert_eq!(weight_sequence(&a2, &[0, 1], &w(&[1, 2])).unwrap()[0], 0);
        assert!(weight_sequence(&a2, &[1, 1], &w(&[1, 1])).is_err());
    }

    #[test]
    fn words_parse() {
        assert_eq!(parse_word("1,2,1").unwrap(), vec![0, 1, 0]);
        assert_eq!(format_word(&[0, 1, 0]), "(1,2,1)");
        assert!(parse_word("0,1").is_err());
    }
}
