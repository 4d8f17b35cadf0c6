//! Minimum-weight nontrivial cycles and cocycles of the middle degree.
//!
//! A middle vector is nontrivial exactly when it satisfies the checks and
//! pairs oddly with some representative of the dual (co)homology. Both tests
//! are folded into one syndrome per qubit: check bits followed by one bit per
//! dual representative. A support is a logical iff its check part vanishes and
//! its logical part does not.

use std::collections::HashMap;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::bits::{Bits, Echelon};
use crate::complex::ChainComplex2;
use crate::error::{Error, Result};
use crate::matrix::BinMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Cycles of `boundaries[0]` modulo the image of `boundaries[1]`.
    Homology,
    /// Cocycles of `boundaries[1]` modulo the image of `boundaries[0]ᵀ`.
    Cohomology,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Direct enumeration while the number of supports of the current weight
    /// stays below the threshold, meet-in-the-middle above it.
    Auto { direct_limit: u64 },
    Direct,
    MeetInTheMiddle,
}

#[derive(Clone, Copy, Debug)]
pub struct DistanceOptions {
    /// Largest weight examined; `None` means the qubit count.
    pub budget: Option<usize>,
    pub strategy: Strategy,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self {
            budget: None,
            strategy: Strategy::Auto {
                direct_limit: 2_000_000,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceResult {
    pub distance: usize,
    /// A minimum-weight logical; the lexicographically first one when found
    /// by direct enumeration.
    pub witness: Vec<usize>,
}

struct Syndromes {
    words: usize,
    check_mask: Vec<u64>,
    logical_mask: Vec<u64>,
    per_qubit: Vec<Vec<u64>>,
}

impl Syndromes {
    fn is_logical(&self, s: &[u64]) -> bool {
        let mut checks = 0;
        let mut logical = 0;
        for i in 0..self.words {
            checks |= s[i] & self.check_mask[i];
            logical |= s[i] & self.logical_mask[i];
        }
        checks == 0 && logical != 0
    }

    fn check_key(&self, s: &[u64]) -> Vec<u64> {
        s.iter().zip(&self.check_mask).map(|(a, m)| a & m).collect()
    }

    fn logical_key(&self, s: &[u64]) -> Vec<u64> {
        s.iter().zip(&self.logical_mask).map(|(a, m)| a & m).collect()
    }
}

/// Representatives of `ker(kernel_of) / rowspace(modulo)`, one per class of a basis.
fn quotient_basis(kernel_of: &BinMatrix, modulo: &BinMatrix) -> Vec<Bits> {
    let n = kernel_of.ncols();
    let mut ech = Echelon::new(n);
    for r in modulo.to_bit_rows() {
        ech.insert(r);
    }
    kernel_of
        .kernel_basis()
        .into_iter()
        .filter(|v| ech.insert(v.clone()))
        .collect()
}

fn syndromes(c: &ChainComplex2, side: Side) -> Result<Syndromes> {
    if c.len() != 3 {
        return Err(Error::WrongShape(format!(
            "distance needs a three-term complex, got {} degrees",
            c.len()
        )));
    }
    let (d1, d2) = (c.boundary(0), c.boundary(1));
    let (checks, logicals) = match side {
        Side::Homology => (d1.clone(), quotient_basis(&d2.transpose(), d1)),
        Side::Cohomology => (d2.transpose(), quotient_basis(d1, &d2.transpose())),
    };
    if logicals.is_empty() {
        return Err(Error::NoLogical);
    }
    let q = c.dims()[1];
    let nc = checks.nrows();
    let len = nc + logicals.len();
    let words = len.div_ceil(64).max(1);
    let mut check_mask = vec![0u64; words];
    let mut logical_mask = vec![0u64; words];
    for i in 0..len {
        let m = if i < nc { &mut check_mask } else { &mut logical_mask };
        m[i / 64] |= 1 << (i % 64);
    }
    let per_qubit = (0..q)
        .map(|j| {
            let mut w = vec![0u64; words];
            for &r in checks.col(j) {
                w[r / 64] ^= 1 << (r % 64);
            }
            for (k, l) in logicals.iter().enumerate() {
                if l.get(j) {
                    let b = nc + k;
                    w[b / 64] ^= 1 << (b % 64);
                }
            }
            w
        })
        .collect();
    Ok(Syndromes {
        words,
        check_mask,
        logical_mask,
        per_qubit,
    })
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Calls `visit(support, syndrome)` on every `w`-subset of `0..n` in
/// lexicographic order, stopping early when `visit` returns `true`.
fn for_each_subset(
    syn: &Syndromes,
    w: usize,
    mut visit: impl FnMut(&[usize], &[u64]) -> bool,
) -> bool {
    let n = syn.per_qubit.len();
    if w > n {
        return false;
    }
    let mut idx: Vec<usize> = Vec::with_capacity(w);
    // acc[d] holds the syndrome of idx[..d]
    let mut acc = vec![vec![0u64; syn.words]; w + 1];
    fn rec(
        syn: &Syndromes,
        n: usize,
        w: usize,
        start: usize,
        idx: &mut Vec<usize>,
        acc: &mut [Vec<u64>],
        visit: &mut dyn FnMut(&[usize], &[u64]) -> bool,
    ) -> bool {
        let d = idx.len();
        if d == w {
            return visit(idx, &acc[d]);
        }
        for j in start..=n - (w - d) {
            let (lo, hi) = acc.split_at_mut(d + 1);
            for ((t, a), b) in hi[0].iter_mut().zip(&lo[d]).zip(&syn.per_qubit[j]) {
                *t = a ^ b;
            }
            idx.push(j);
            if rec(syn, n, w, j + 1, idx, acc, visit) {
                return true;
            }
            idx.pop();
        }
        false
    }
    rec(syn, n, w, 0, &mut idx, &mut acc, &mut visit)
}

fn search_direct(syn: &Syndromes, w: usize) -> Option<Vec<usize>> {
    let mut found = None;
    for_each_subset(syn, w, |s, acc| {
        if syn.is_logical(acc) {
            found = Some(s.to_vec());
            true
        } else {
            false
        }
    });
    found
}

struct Half {
    logical: Vec<u64>,
    support: Vec<usize>,
    /// Some other support with the same check syndrome but a different logical part.
    other: Option<Vec<usize>>,
}

/// Exact provided no logical of weight below `w` exists: a hit `S △ T` is a
/// logical of weight at most `w`, hence exactly `w`.
fn search_mitm(syn: &Syndromes, w: usize) -> Option<Vec<usize>> {
    let (w1, w2) = (w.div_ceil(2), w / 2);
    let mut table: HashMap<Vec<u64>, Half> = HashMap::new();
    for_each_subset(syn, w2, |s, acc| {
        let key = syn.check_key(acc);
        let logical = syn.logical_key(acc);
        match table.get_mut(&key) {
            None => {
                table.insert(
                    key,
                    Half {
                        logical,
                        support: s.to_vec(),
                        other: None,
                    },
                );
            }
            Some(h) => {
                if h.other.is_none() && h.logical != logical {
                    h.other = Some(s.to_vec());
                }
            }
        }
        false
    });
    let mut best: Option<Vec<usize>> = None;
    for_each_subset(syn, w1, |t, acc| {
        let Some(h) = table.get(&syn.check_key(acc)) else {
            return false;
        };
        let partner = if h.logical != syn.logical_key(acc) {
            &h.support
        } else if let Some(o) = &h.other {
            o
        } else {
            return false;
        };
        let mut v: Vec<usize> = t
            .iter()
            .chain(partner.iter())
            .copied()
            .collect();
        v.sort_unstable();
        // symmetric difference
        let mut out = Vec::with_capacity(v.len());
        let mut i = 0;
        while i < v.len() {
            if i + 1 < v.len() && v[i] == v[i + 1] {
                i += 2;
            } else {
                out.push(v[i]);
                i += 1;
            }
        }
        best = Some(out);
        true
    });
    best
}

/// Minimum weight of a nontrivial middle (co)homology class representative.
pub fn distance(c: &ChainComplex2, side: Side, budget: Option<usize>) -> Result<DistanceResult> {
    distance_with(
        c,
        side,
        DistanceOptions {
            budget,
            ..Default::default()
        },
    )
}

pub fn distance_with(c: &ChainComplex2, side: Side, opts: DistanceOptions) -> Result<DistanceResult> {
    let syn = syndromes(c, side)?;
    let q = syn.per_qubit.len();
    let budget = opts.budget.unwrap_or(q).min(q);
    for w in 1..=budget {
        let mitm = match opts.strategy {
            Strategy::Direct => false,
            Strategy::MeetInTheMiddle => w >= 2,
            Strategy::Auto { direct_limit } => w >= 2 && binomial(q, w) > direct_limit,
        };
        let hit = if mitm {
            search_mitm(&syn, w)
        } else {
            search_direct(&syn, w)
        };
        if let Some(witness) = hit {
            return Ok(DistanceResult {
                distance: witness.len(),
                witness,
            });
        }
    }
    Err(Error::ExceedsBudget { budget })
}

fn ratio_string<S: Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// Code-level systolic ratio `d_hom · d_cohom / n`, kept exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SystolicReport {
    pub d_hom: usize,
    pub d_cohom: usize,
    pub n: usize,
    #[serde(serialize_with = "ratio_string")]
    pub sr: Ratio<u64>,
}

pub fn systolic_ratio(c: &ChainComplex2, budget: Option<usize>) -> Result<SystolicReport> {
    let d_hom = distance(c, Side::Homology, budget)?.distance;
    let d_cohom = distance(c, Side::Cohomology, budget)?.distance;
    let n = c.dims()[1];
    Ok(SystolicReport {
        d_hom,
        d_cohom,
        n,
        sr: Ratio::new((d_hom * d_cohom) as u64, n as u64),
    })
}
