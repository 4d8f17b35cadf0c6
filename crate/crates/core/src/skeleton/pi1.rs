use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{Attachment, CycleBasis, HandleSkeleton, Origin, Stage};
use crate::decongestion::{cycle_basis, CycleBasisOptions, Multigraph};
use crate::error::{Error, Result};

/// What killing the fundamental group produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pi1Data {
    #[serde(skip)]
    pub graph: Multigraph,
    /// Handle each graph edge runs through.
    pub edge_handles: Vec<usize>,
    pub basis: CycleBasis,
    pub max_multiplicity: usize,
    pub retries_used: usize,
    /// Disk handle per basis cycle.
    pub disks: Vec<usize>,
    pub coloring: HeightColoring,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightColoring {
    /// Height of each disk.
    pub colors: Vec<usize>,
    pub count: usize,
    pub load: usize,
}

/// First-fit coloring of disks, each given as the cells it passes through,
/// so that no cell holds more than `load` disks of one color.
pub fn color_hypergraph(disks: &[Vec<usize>], load: usize) -> HeightColoring {
    let load = load.max(1);
    let mut used: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut colors = Vec::with_capacity(disks.len());
    let mut count = 0;
    for cells in disks {
        let full = |c: usize, used: &HashMap<usize, Vec<usize>>| {
            cells
                .iter()
                .any(|cell| used.get(cell).and_then(|v| v.get(c)).is_some_and(|&n| n >= load))
        };
        let mut c = 0;
        while full(c, &used) {
            c += 1;
        }
        for &cell in cells {
            let v = used.entry(cell).or_default();
            if v.len() <= c {
                v.resize(c + 1, 0);
            }
            v[c] += 1;
        }
        colors.push(c);
        count = count.max(c + 1);
    }
    HeightColoring { colors, count, load }
}

/// Attach one 2-handle along each cycle of a weakly fundamental basis of the
/// skeleton's 1-skeleton graph, then assign heights to the disks.
pub fn kill_pi1(mut sk: HandleSkeleton, seed: u64) -> Result<HandleSkeleton> {
    sk.require(Stage::ZQX)?;
    let (graph, edge_handles) = sk.one_skeleton();
    let opts = CycleBasisOptions {
        degree_cap: sk.config.degree_cap,
        ..CycleBasisOptions::new(seed)
    };
    let run = cycle_basis(&graph, opts)?;
    let mut disks = Vec::with_capacity(run.basis.len());
    let mut cells = Vec::with_capacity(run.basis.len());
    for (b, cycle) in run.basis.cycles.iter().enumerate() {
        let mut traversed: BTreeMap<usize, i64> = BTreeMap::new();
        for &e in cycle {
            let edge = graph.edge(e);
            *traversed.entry(edge_handles[e]).or_default() += 1;
            for v in [edge.u, edge.v] {
                *traversed.entry(sk.vertex_handle(v)).or_default() += 1;
            }
        }
        let atts = traversed
            .iter()
            .map(|(&target, &degree)| Attachment { target, degree })
            .collect();
        cells.push(traversed.into_keys().collect::<Vec<_>>());
        disks.push(sk.push(2, Origin::Pi1Disk(b), atts, None));
    }
    let coloring = color_hypergraph(&cells, sk.config.height_load);
    sk.pi1 = Some(Pi1Data {
        graph,
        edge_handles,
        basis: run.basis,
        max_multiplicity: run.max_multiplicity,
        retries_used: run.retries_used,
        disks,
        coloring,
    });
    sk.stage = Stage::ZQXPlus;
    Ok(sk)
}

/// Heights of the fundamental-group disks under the skeleton's load.
pub fn height_coloring(sk: &HandleSkeleton) -> Result<HeightColoring> {
    let pi1 = sk.pi1.as_ref().ok_or_else(|| Error::WrongStage {
        expected: Stage::ZQXPlus.to_string(),
        found: sk.stage.to_string(),
    })?;
    let cells: Vec<Vec<usize>> = pi1
        .disks
        .iter()
        .map(|&d| sk.handles[d].attachments.iter().map(|a| a.target).collect())
        .collect();
    Ok(color_hypergraph(&cells, sk.config.height_load))
}

/// Glue a mirror copy along the boundary: handle `h` of index `k` gains a
/// mirror of index `11 − k` whose contacts mirror those of `h`.
pub fn double(mut sk: HandleSkeleton) -> Result<HandleSkeleton> {
    if sk.stage == Stage::Double {
        return Err(Error::InvalidArgument("skeleton is already doubled".into()));
    }
    let n = sk.handles.len();
    let mirrored: Vec<_> = sk
        .handles
        .iter()
        .map(|h| {
            let mut m = h.clone();
            m.id += n;
            m.index = 11 - h.index;
            m.attachments.iter_mut().for_each(|a| a.target += n);
            m.parent = h.parent.map(|p| p + n);
            m.mirror_of = Some(h.id);
            m
        })
        .collect();
    sk.handles.extend(mirrored);
    sk.stage = Stage::Double;
    Ok(sk)
}

#[cfg(test)]
mod tests {
    use super::super::build::{attach_qubit_handles, attach_z_handles, build_x, PairingPolicy};
    use super::*;
    use crate::codes::gen_toric;
    use crate::decongestion::{verify_spanning, verify_weakly_fundamental};
    use crate::lifting::naive_lift;
    use crate::matrix::IntMatrix;
    use crate::ChainComplexZ;

    fn to_zqx(c: &ChainComplexZ) -> HandleSkeleton {
        let sk = attach_qubit_handles(build_x(c).unwrap(), c).unwrap();
        attach_z_handles(sk, c, PairingPolicy::FirstFit).unwrap()
    }

    #[test]
    fn coloring_pigeonhole() {
        assert_eq!(color_hypergraph(&[vec![0], vec![1], vec![2]], 2).count, 1);
        for k in 1..10 {
            let disks = vec![vec![7]; k];
            assert_eq!(color_hypergraph(&disks, 2).count, k.div_ceil(2));
        }
        assert_eq!(color_hypergraph(&[], 2).count, 0);
    }

    #[test]
    fn tree_skeleton_needs_no_disks() {
        // one qubit joining two X-stabilizers: the 1-skeleton is a single edge
        let d1 = IntMatrix::from_rows_i64(&[&[1], &[-1]]);
        let c = ChainComplexZ::from_boundaries(vec![d1, IntMatrix::zeros(1, 0)]).unwrap();
        let sk = kill_pi1(to_zqx(&c), 0).unwrap();
        assert!(sk.pi1().unwrap().disks.is_empty());
        assert_eq!(sk.stage(), Stage::ZQXPlus);
    }

    #[test]
    fn two_qubit_basis_has_rank_size() {
        let c = super::super::build::tests::two_qubit();
        let sk = to_zqx(&c);
        let (g, _) = sk.one_skeleton();
        let sk = kill_pi1(sk, 1).unwrap();
        assert_eq!(sk.pi1().unwrap().basis.len(), g.cycle_rank());
    }

    #[test]
    fn toric_basis_verifies() {
        let c = naive_lift(&gen_toric(2));
        // the naive toric lift is not admissible; pairing would fail
        assert!(attach_z_handles(attach_qubit_handles(build_x(&c).unwrap(), &c).unwrap(), &c, PairingPolicy::FirstFit).is_err());
        let c = crate::lifting::product_lift(&crate::codes::gen_cycle(2), &crate::codes::gen_cycle(2)).unwrap();
        let sk = kill_pi1(to_zqx(&c), 3).unwrap();
        let pi1 = sk.pi1().unwrap();
        assert!(verify_weakly_fundamental(&pi1.graph, &pi1.basis).ok);
        assert!(verify_spanning(&pi1.graph, &pi1.basis).ok);
        assert_eq!(height_coloring(&sk).unwrap(), pi1.coloring);
    }

    #[test]
    fn doubling_mirrors_indices() {
        let d1 = IntMatrix::zeros(1, 0);
        let c = ChainComplexZ::from_boundaries(vec![d1, IntMatrix::zeros(0, 0)]).unwrap();
        let sk = double(build_x(&c).unwrap()).unwrap();
        let idx: Vec<u8> = sk.handles().iter().map(|h| h.index).collect();
        assert_eq!(idx, vec![0, 3, 11, 8]);
        assert_eq!(sk.stats().max_contact, 1);
        assert!(double(sk).is_err());
        let empty = ChainComplexZ::zero(vec![0, 0, 0]).unwrap();
        assert!(double(build_x(&empty).unwrap()).unwrap().handles().is_empty());
    }
}
