//! Fixed-length bitsets and elimination over GF(2).

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut s = BitSet::new(len);
        for i in idx {
            s.insert(i);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn and_count(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }

    pub fn lowest(&self) -> Option<usize> {
        self.iter().next()
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Rank of a family of vectors over GF(2).
pub fn gf2_rank(rows: &[BitSet]) -> usize {
    let mut basis: Vec<BitSet> = Vec::new();
    for r in rows {
        let mut v = r.clone();
        for b in &basis {
            if let Some(p) = b.lowest() {
                if v.contains(p) {
                    v.xor_with(b);
                }
            }
        }
        if !v.is_empty() {
            // keep the basis reduced on pivots so later rows eliminate cleanly
            let p = v.lowest().unwrap();
            for b in basis.iter_mut() {
                if b.contains(p) {
                    b.xor_with(&v);
                }
            }
            basis.push(v);
        }
    }
    basis.len()
}

/// Solves `rows[k] . x = rhs[k]` over GF(2) for `x` of length `nvars`.
/// Free variables are set to zero. Returns `None` when inconsistent.
pub fn gf2_solve(rows: &[BitSet], rhs: &[bool], nvars: usize) -> Option<Vec<bool>> {
    assert_eq!(rows.len(), rhs.len());
    let mut m: Vec<(BitSet, bool)> = rows.iter().cloned().zip(rhs.iter().copied()).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for col in 0..nvars {
        let Some(p) = (r..m.len()).find(|&k| m[k].0.contains(col)) else {
            continue;
        };
        m.swap(r, p);
        let (prow, pb) = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k != r && row.0.contains(col) {
                row.0.xor_with(&prow);
                row.1 ^= pb;
            }
        }
        pivots.push((r, col));
        r += 1;
    }
    if m[r..].iter().any(|(_, b)| *b) {
        return None;
    }
    let mut x = vec![false; nvars];
    for (row, col) in pivots {
        x[col] = m[row].1;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iter_and_count() {
        let s = BitSet::from_indices(130, [0, 5, 64, 129]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 5, 64, 129]);
        assert_eq!(s.count(), 4);
    }

    #[test]
    fn solve_small_system() {
        let rows = vec![BitSet::from_indices(3, [0, 1]), BitSet::from_indices(3, [1, 2])];
        let x = gf2_solve(&rows, &[true, false], 3).unwrap();
        assert!(x[0] ^ x[1]);
        assert!(!(x[1] ^ x[2]));
    }

    #[test]
    fn inconsistent_system() {
        let rows = vec![BitSet::from_indices(2, [0, 1]), BitSet::from_indices(2, [0, 1])];
        assert!(gf2_solve(&rows, &[true, false], 2).is_none());
        assert_eq!(gf2_rank(&rows), 1);
    }
}
