//! Dense bit vectors and incremental row echelon forms over the two-element field.

use std::fmt;

/// A fixed-length dense vector over F₂ packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut b = Self::zeros(len);
        for i in ones {
            b.flip(i);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Parity of the inner product with `other`.
    pub fn dot(&self, other: &Bits) -> bool {
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones() & 1;
        }
        acc == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Incrementally maintained reduced basis of a subspace of F₂ⁿ.
///
/// Rows are kept keyed by their leading bit so membership and insertion are a
/// single reduction pass.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    rows: Vec<Bits>,
    pivot_of: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            rows: Vec::new(),
            pivot_of: vec![None; len],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the current basis in place.
    pub fn reduce(&self, v: &mut Bits) {
        debug_assert_eq!(v.len(), self.len);
        // Each stored row has a distinct leading bit and is zero before it, so
        // scanning leading bits in increasing order clears them all.
        let mut start = 0;
        while let Some(p) = first_one_from(v, start) {
            if let Some(r) = self.pivot_of[p] {
                v.xor_assign(&self.rows[r]);
            }
            start = p + 1;
        }
    }

    pub fn contains(&self, v: &Bits) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Insert `v`; returns `true` when it was independent of the current span.
    pub fn insert(&mut self, v: Bits) -> bool {
        let mut w = v;
        self.reduce(&mut w);
        match w.first_one() {
            None => false,
            Some(p) => {
                self.pivot_of[p] = Some(self.rows.len());
                self.rows.push(w);
                true
            }
        }
    }
}

fn first_one_from(v: &Bits, start: usize) -> Option<usize> {
    if start >= v.len {
        return None;
    }
    let words = v.words();
    let mut wi = start / 64;
    let mut w = words[wi] & (!0u64 << (start % 64));
    loop {
        if w != 0 {
            return Some(wi * 64 + w.trailing_zeros() as usize);
        }
        wi += 1;
        if wi >= words.len() {
            return None;
        }
        w = words[wi];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_roundtrip() {
        let b = Bits::from_indices(130, [0, 63, 64, 129]);
        assert_eq!(b.ones().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(b.count_ones(), 4);
        assert_eq!(b.first_one(), Some(0));
    }

    #[test]
    fn echelon_detects_dependence() {
        let mut e = Echelon::new(4);
        assert!(e.insert(Bits::from_indices(4, [0, 1])));
        assert!(e.insert(Bits::from_indices(4, [1, 2])));
        assert!(!e.insert(Bits::from_indices(4, [0, 2])));
        assert!(e.contains(&Bits::from_indices(4, [0, 2])));
        assert!(!e.contains(&Bits::from_indices(4, [3])));
        assert_eq!(e.rank(), 2);
    }
}
