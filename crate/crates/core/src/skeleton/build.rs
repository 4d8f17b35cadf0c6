use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{check_three_term, Attachment, HandleSkeleton, Hub, Origin, SkeletonConfig, Stage};
use crate::complex::ChainComplexZ;
use crate::error::{Error, Result};

fn small(v: &num_bigint::BigInt) -> Result<i64> {
    v.to_i64()
        .ok_or_else(|| Error::InvalidArgument(format!("lifted entry {v} does not fit in i64")))
}

/// One 0-handle and one 3-handle attached to it per X-stabilizer.
pub fn build_x(c: &ChainComplexZ) -> Result<HandleSkeleton> {
    let dims = check_three_term(c)?;
    let mut sk = HandleSkeleton::empty(dims, SkeletonConfig::default());
    for i in 0..dims[0] {
        let zero = sk.push(0, Origin::XStabilizer(i), Vec::new(), None);
        let three = sk.push(3, Origin::XStabilizer(i), vec![Attachment { target: zero, degree: 1 }], None);
        sk.x_handles.push((zero, three));
    }
    Ok(sk)
}

/// Congested variant: a single 0-handle shared by every 3-handle, so its
/// contact count grows with the number of X-stabilizers.
pub fn build_x_shared(c: &ChainComplexZ) -> Result<HandleSkeleton> {
    let dims = check_three_term(c)?;
    let mut sk = HandleSkeleton::empty(dims, SkeletonConfig::default());
    if dims[0] == 0 {
        return Ok(sk);
    }
    let zero = sk.push(0, Origin::XStabilizer(0), Vec::new(), None);
    for i in 0..dims[0] {
        let three = sk.push(3, Origin::XStabilizer(i), vec![Attachment { target: zero, degree: 1 }], None);
        sk.x_handles.push((zero, three));
    }
    Ok(sk)
}

/// One "4-handle" per qubit: a 4-sphere with one puncture per unit of the
/// qubit's column in the lifted X-check map, each glued with degree ±1 to
/// the 3-handle of its X-stabilizer.
pub fn attach_qubit_handles(mut sk: HandleSkeleton, c: &ChainComplexZ) -> Result<HandleSkeleton> {
    sk.require(Stage::X)?;
    if check_three_term(c)? != sk.dims {
        return Err(Error::DimensionMismatch("complex differs from the one the skeleton was built from".into()));
    }
    let d1 = c.boundary(0);
    for i in 0..sk.dims[1] {
        let mut atts = Vec::new();
        let mut slots = Vec::new();
        for (x, v) in d1.col(i) {
            let e = small(v)?;
            for _ in 0..e.unsigned_abs() {
                atts.push(Attachment {
                    target: sk.x_handles[*x].1,
                    degree: e.signum(),
                });
                slots.push((*x, e.signum()));
            }
        }
        let id = sk.push(4, Origin::Qubit(i), atts, None);
        sk.qubit_handles.push(id);
        sk.slots.push(slots);
    }
    sk.stage = Stage::QX;
    Ok(sk)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairingPolicy {
    /// Match the k-th positive half-edge at a vertex with the k-th negative.
    FirstFit,
    /// Shuffle the negative half-edges at each vertex before matching.
    Random(u64),
}

/// A copy of a qubit's punctured sphere; a coefficient `c` contributes `|c|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RedVertex {
    pub qubit: usize,
    pub copy: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HalfEdge {
    pub red: usize,
    /// X-stabilizer.
    pub black: usize,
    pub sign: i8,
    /// Boundary sphere of the qubit this half-edge comes from.
    pub slot: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingComponent {
    pub reds: Vec<usize>,
    pub blacks: Vec<usize>,
    /// Pairs joining reds of this component.
    pub edges: usize,
    pub betti1: usize,
}

/// The bipartite half-edge graph of one Z-stabilizer and a pairing of
/// opposite-sign half-edges at every X-stabilizer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingWitness {
    pub z: usize,
    pub reds: Vec<RedVertex>,
    pub blacks: Vec<usize>,
    pub half_edges: Vec<HalfEdge>,
    /// (positive half-edge, negative half-edge).
    pub pairs: Vec<(usize, usize)>,
    pub components: Vec<PairingComponent>,
}

impl PairingWitness {
    /// Signed half-edge sum at each black vertex.
    pub fn signed_sums(&self) -> BTreeMap<usize, i64> {
        let mut sums: BTreeMap<usize, i64> = self.blacks.iter().map(|&b| (b, 0)).collect();
        for h in &self.half_edges {
            *sums.entry(h.black).or_default() += i64::from(h.sign);
        }
        sums
    }

    pub fn total_betti1(&self) -> usize {
        self.components.iter().map(|c| c.betti1).sum()
    }
}

/// Pair the half-edges of Z-stabilizer `z`. The signed sum at every black
/// vertex is the `(x, z)` entry of the product of the lifted check maps, so a
/// nonzero sum means the lift is not admissible.
pub fn euler_pairing(
    sk: &HandleSkeleton,
    c: &ChainComplexZ,
    z: usize,
    policy: PairingPolicy,
) -> Result<PairingWitness> {
    if sk.stage < Stage::QX {
        return Err(Error::WrongStage {
            expected: Stage::QX.to_string(),
            found: sk.stage.to_string(),
        });
    }
    if z >= sk.dims[2] {
        return Err(Error::InvalidArgument(format!("Z-stabilizer {z} out of range 0..{}", sk.dims[2])));
    }
    let mut reds = Vec::new();
    let mut half_edges = Vec::new();
    for (q, v) in c.boundary(1).col(z) {
        let coeff = small(v)?;
        for copy in 0..coeff.unsigned_abs() as usize {
            let red = reds.len();
            reds.push(RedVertex { qubit: *q, copy });
            for (slot, &(x, s)) in sk.slots[*q].iter().enumerate() {
                half_edges.push(HalfEdge {
                    red,
                    black: x,
                    sign: (s * coeff.signum()) as i8,
                    slot,
                });
            }
        }
    }
    let mut at: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, h) in half_edges.iter().enumerate() {
        let e = at.entry(h.black).or_default();
        if h.sign > 0 {
            e.0.push(i);
        } else {
            e.1.push(i);
        }
    }
    let mut rng = match policy {
        PairingPolicy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed.wrapping_add(z as u64))),
        PairingPolicy::FirstFit => None,
    };
    let mut pairs = Vec::new();
    for (&x, (pos, neg)) in at.iter_mut() {
        if pos.len() != neg.len() {
            return Err(Error::NonZeroSignedSum {
                z,
                x,
                sum: pos.len() as i64 - neg.len() as i64,
            });
        }
        if let Some(rng) = rng.as_mut() {
            neg.shuffle(rng);
        }
        pairs.extend(pos.iter().copied().zip(neg.iter().copied()));
    }
    let blacks: Vec<usize> = at.keys().copied().collect();
    let components = components(&reds, &half_edges, &pairs);
    Ok(PairingWitness {
        z,
        reds,
        blacks,
        half_edges,
        pairs,
        components,
    })
}

/// Components of the graph on reds whose edges are the pairs; each is a
/// connected sum of `betti1 = edges − reds + 1` copies of `S¹ × S³`.
fn components(reds: &[RedVertex], half_edges: &[HalfEdge], pairs: &[(usize, usize)]) -> Vec<PairingComponent> {
    let mut parent: Vec<usize> = (0..reds.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b) in pairs {
        let (ra, rb) = (find(&mut parent, half_edges[a].red), find(&mut parent, half_edges[b].red));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut by_root: BTreeMap<usize, (Vec<usize>, BTreeSet<usize>, usize)> = BTreeMap::new();
    for r in 0..reds.len() {
        let root = find(&mut parent, r);
        by_root.entry(root).or_default().0.push(r);
    }
    for h in half_edges {
        let root = find(&mut parent, h.red);
        by_root.get_mut(&root).expect("root present").1.insert(h.black);
    }
    for &(a, _) in pairs {
        let root = find(&mut parent, half_edges[a].red);
        by_root.get_mut(&root).expect("root present").2 += 1;
    }
    by_root
        .into_values()
        .map(|(reds, blacks, edges)| PairingComponent {
            betti1: edges + 1 - reds.len(),
            reds,
            blacks: blacks.into_iter().collect(),
            edges,
        })
        .collect()
}

/// Parent links of a heap-shaped tree on `n` nodes: node `k ≥ 1` joins
/// `(k − 1) / 2`, so every node meets at most three links.
fn heap_links(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).map(|k| ((k - 1) / 2, k))
}

/// One "5-handle" per Z-stabilizer, glued with degree ±1 to each copy of its
/// qubits' handles, plus the internal handles: `f(i) − 1` 1-handles joining
/// the spheres of each qubit handle, `components − 1` 1-handles joining the
/// boundary components of each 5-handle, and `betti1` 2-handles per
/// component.
pub fn attach_z_handles(mut sk: HandleSkeleton, c: &ChainComplexZ, policy: PairingPolicy) -> Result<HandleSkeleton> {
    sk.require(Stage::QX)?;
    if check_three_term(c)? != sk.dims {
        return Err(Error::DimensionMismatch("complex differs from the one the skeleton was built from".into()));
    }
    for q in 0..sk.dims[1] {
        let owner = sk.qubit_handles[q];
        let slots = sk.slots[q].clone();
        for (a, b) in heap_links(slots.len()) {
            let (xa, xb) = (slots[a].0, slots[b].0);
            let atts = vec![
                Attachment { target: sk.x_handles[xa].1, degree: 1 },
                Attachment { target: sk.x_handles[xb].1, degree: 1 },
            ];
            let h = sk.push(1, Origin::Internal1 { owner }, atts, Some(owner));
            sk.qubit_links.push((h, xa, xb));
        }
    }
    for z in 0..sk.dims[2] {
        let w = euler_pairing(&sk, c, z, policy)?;
        let atts = c
            .boundary(1)
            .col(z)
            .iter()
            .map(|(q, v)| {
                let coeff = small(v)?;
                let unit = Attachment {
                    target: sk.qubit_handles[*q],
                    degree: coeff.signum(),
                };
                Ok(std::iter::repeat_n(unit, coeff.unsigned_abs() as usize))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let owner = sk.push(5, Origin::ZStabilizer(z), atts, None);
        sk.z_handles.push(owner);
        let first_hub = sk.hubs.len();
        for (k, comp) in w.components.iter().enumerate() {
            let anchor = sk.qubit_handles[w.reds[comp.reds[0]].qubit];
            sk.hubs.push(Hub {
                z,
                component: k,
                anchor,
                arc_to: comp.blacks.first().copied(),
            });
            for _ in 0..comp.betti1 {
                sk.push(2, Origin::Internal2 { owner }, vec![Attachment { target: anchor, degree: 1 }], Some(owner));
            }
        }
        for (a, b) in heap_links(w.components.len()) {
            let (ha, hb) = (first_hub + a, first_hub + b);
            let atts = vec![
                Attachment { target: sk.hubs[ha].anchor, degree: 1 },
                Attachment { target: sk.hubs[hb].anchor, degree: 1 },
            ];
            let h = sk.push(1, Origin::Internal1 { owner }, atts, Some(owner));
            sk.hub_links.push((h, ha, hb));
        }
        sk.pairings.push(w);
    }
    sk.stage = Stage::ZQX;
    Ok(sk)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::matrix::IntMatrix;

    /// Qubits a, b with ∂a = X₁ − X₂, ∂b = X₂ − X₁ and one Z-stabilizer a + b.
    pub(crate) fn two_qubit() -> ChainComplexZ {
        let d1 = IntMatrix::from_rows_i64(&[&[1, -1], &[-1, 1]]);
        let d2 = IntMatrix::from_rows_i64(&[&[1], &[1]]);
        ChainComplexZ::from_boundaries(vec![d1, d2]).unwrap()
    }

    fn built(c: &ChainComplexZ) -> HandleSkeleton {
        let sk = attach_qubit_handles(build_x(c).unwrap(), c).unwrap();
        attach_z_handles(sk, c, PairingPolicy::FirstFit).unwrap()
    }

    #[test]
    fn x_stage() {
        let c = ChainComplexZ::zero(vec![0, 0, 0]).unwrap();
        assert!(build_x(&c).unwrap().handles().is_empty());
        let sk = build_x(&two_qubit()).unwrap();
        assert_eq!(sk.handles().len(), 4);
        assert_eq!(sk.stats().max_contact, 1);
        assert!(build_x(&ChainComplexZ::zero(vec![1, 1]).unwrap()).is_err());
    }

    #[test]
    fn five_punctures_for_a_weight_five_column() {
        let d1 = IntMatrix::from_rows_i64(&[&[2, 0], &[3, 0]]);
        let d2 = IntMatrix::zeros(2, 0);
        let c = ChainComplexZ::from_boundaries(vec![d1, d2]).unwrap();
        let sk = attach_qubit_handles(build_x(&c).unwrap(), &c).unwrap();
        let q = &sk.handles()[sk.qubit_handles()[0]];
        let to = |x: usize| q.attachments.iter().filter(|a| a.target == sk.x_handles()[x].1).count();
        assert_eq!((to(0), to(1)), (2, 3));
        assert_eq!(sk.sphere_counts(), vec![5, 0]);
        assert!(sk.handles()[sk.qubit_handles()[1]].attachments.is_empty());
    }

    #[test]
    fn two_qubit_pairing() {
        let c = two_qubit();
        let sk = attach_qubit_handles(build_x(&c).unwrap(), &c).unwrap();
        let w = euler_pairing(&sk, &c, 0, PairingPolicy::FirstFit).unwrap();
        assert_eq!(w.half_edges.len(), 4);
        assert!(w.signed_sums().values().all(|&s| s == 0));
        assert_eq!(w.components.len(), 1);
        assert_eq!(w.components[0].betti1, 1);
        let sk = attach_z_handles(sk, &c, PairingPolicy::FirstFit).unwrap();
        let internal: Vec<_> = sk
            .handles()
            .iter()
            .filter(|h| matches!(h.origin, Origin::Internal1 { owner } | Origin::Internal2 { owner } if owner == sk.z_handles()[0]))
            .map(|h| h.index)
            .collect();
        assert_eq!(internal, vec![2]);
    }

    #[test]
    fn non_admissible_lift_names_the_vertex() {
        let d1 = IntMatrix::from_rows_i64(&[&[1, 1], &[-1, 1]]);
        let d2 = IntMatrix::from_rows_i64(&[&[1], &[1]]);
        let c = ChainComplexZ::new(vec![2, 2, 1], vec![d1, d2]).unwrap();
        let sk = attach_qubit_handles(build_x(&c).unwrap(), &c).unwrap();
        assert_eq!(
            euler_pairing(&sk, &c, 0, PairingPolicy::FirstFit),
            Err(Error::NonZeroSignedSum { z: 0, x: 0, sum: 2 })
        );
    }

    #[test]
    fn empty_z_boundary_is_top_cell_only() {
        let d1 = IntMatrix::from_rows_i64(&[&[1]]);
        let d2 = IntMatrix::zeros(1, 1);
        let c = ChainComplexZ::from_boundaries(vec![d1, d2]).unwrap();
        let sk = built(&c);
        let w = &sk.pairings()[0];
        assert!(w.reds.is_empty() && w.components.is_empty());
        let z = &sk.handles()[sk.z_handles()[0]];
        assert!(z.attachments.is_empty());
        assert!(!sk.handles().iter().any(|h| h.parent == Some(z.id)));
    }

    #[test]
    fn stage_order_is_enforced() {
        let c = two_qubit();
        let sk = build_x(&c).unwrap();
        assert!(matches!(
            attach_z_handles(sk.clone(), &c, PairingPolicy::FirstFit),
            Err(Error::WrongStage { .. })
        ));
        assert!(euler_pairing(&sk, &c, 0, PairingPolicy::FirstFit).is_err());
    }

    #[test]
    fn heap_tree_fan_in() {
        let mut deg = vec![0; 20];
        for (a, b) in heap_links(20) {
            deg[a] += 1;
            deg[b] += 1;
        }
        assert!(deg.iter().all(|&d| d <= 3));
        assert_eq!(heap_links(20).count(), 19);
    }
}
