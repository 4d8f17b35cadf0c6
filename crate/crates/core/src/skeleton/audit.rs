use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::{check_three_term, HandleSkeleton, Origin, Stage};
use crate::complex::ChainComplexZ;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    /// 1 for the X-check map (4- to 3-handles), 2 for the Z-check map
    /// (5- to 4-handles).
    pub map: u8,
    pub row: usize,
    pub col: usize,
    pub expected: i64,
    pub found: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MiddleReport {
    pub ok: bool,
    pub mismatch: Option<Mismatch>,
}

fn first_mismatch(map: u8, expected: BTreeMap<(usize, usize), i64>, found: BTreeMap<(usize, usize), i64>) -> Option<Mismatch> {
    let keys: BTreeSet<_> = expected.keys().chain(found.keys()).copied().collect();
    keys.into_iter().find_map(|(row, col)| {
        let e = expected.get(&(row, col)).copied().unwrap_or(0);
        let f = found.get(&(row, col)).copied().unwrap_or(0);
        (e != f).then_some(Mismatch {
            map,
            row,
            col,
            expected: e,
            found: f,
        })
    })
}

/// The signed attachment degrees of 5- onto 4-handles and of 4- onto
/// 3-handles reproduce the lifted boundary maps, under the bijection of code
/// handles with cells. Only the original half of a double is read.
pub fn verify_middle_complex(sk: &HandleSkeleton, c: &ChainComplexZ) -> Result<MiddleReport> {
    if sk.stage < Stage::ZQX {
        return Err(Error::WrongStage {
            expected: Stage::ZQX.to_string(),
            found: sk.stage.to_string(),
        });
    }
    if check_three_term(c)? != sk.dims {
        return Err(Error::DimensionMismatch("complex differs from the one the skeleton was built from".into()));
    }
    let three_of: BTreeMap<usize, usize> = sk.x_handles.iter().enumerate().map(|(x, &(_, t))| (t, x)).collect();
    let qubit_of: BTreeMap<usize, usize> = sk.qubit_handles.iter().enumerate().map(|(q, &h)| (h, q)).collect();
    let expected = |j: usize| -> BTreeMap<(usize, usize), i64> {
        c.boundary(j)
            .entries()
            .map(|(r, col, v)| ((r, col), v.to_i64().unwrap_or(i64::MAX)))
            .collect()
    };
    let mut found1 = BTreeMap::new();
    for (q, &h) in sk.qubit_handles.iter().enumerate() {
        for a in &sk.handles[h].attachments {
            if let Some(&x) = three_of.get(&a.target) {
                *found1.entry((x, q)).or_insert(0) += a.degree;
            }
        }
    }
    let mut found2 = BTreeMap::new();
    for (z, &h) in sk.z_handles.iter().enumerate() {
        for a in &sk.handles[h].attachments {
            if let Some(&q) = qubit_of.get(&a.target) {
                *found2.entry((q, z)).or_insert(0) += a.degree;
            }
        }
    }
    found1.retain(|_, v| *v != 0);
    found2.retain(|_, v| *v != 0);
    let mismatch = first_mismatch(1, expected(0), found1).or_else(|| first_mismatch(2, expected(1), found2));
    Ok(MiddleReport {
        ok: mismatch.is_none(),
        mismatch,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongestionReport {
    /// Distinct handles in contact, before height subdivision.
    pub raw_max: usize,
    pub raw_histogram: Vec<usize>,
    /// Contacts after subdividing cells by height: disks touching a handle
    /// count only within the busiest height, and a disk, cut into one piece
    /// per cell it crosses, counts at most three contacts per piece.
    pub max: usize,
    pub histogram: Vec<usize>,
    pub threshold: usize,
    pub congested: bool,
}

fn histogram(values: &[usize]) -> Vec<usize> {
    let mut h = vec![0; values.iter().copied().max().map_or(0, |m| m + 1)];
    for &v in values {
        h[v] += 1;
    }
    h
}

pub fn congestion_audit(sk: &HandleSkeleton) -> CongestionReport {
    let contacts = sk.contacts();
    let color_of = |h: usize| match sk.handles[h].origin {
        Origin::Pi1Disk(b) => Some(sk.pi1.as_ref().map_or(0, |p| p.coloring.colors[b])),
        _ => None,
    };
    let raw: Vec<usize> = contacts.iter().map(BTreeSet::len).collect();
    let refined: Vec<usize> = contacts
        .iter()
        .enumerate()
        .map(|(h, adj)| {
            if color_of(h).is_some() {
                return adj.len().min(3);
            }
            let mut per_color: BTreeMap<usize, usize> = BTreeMap::new();
            let mut others = 0;
            for &t in adj {
                match color_of(t) {
                    Some(c) => *per_color.entry(c).or_default() += 1,
                    None => others += 1,
                }
            }
            others + per_color.values().copied().max().unwrap_or(0)
        })
        .collect();
    let max = refined.iter().copied().max().unwrap_or(0);
    CongestionReport {
        raw_max: raw.iter().copied().max().unwrap_or(0),
        raw_histogram: histogram(&raw),
        max,
        histogram: histogram(&refined),
        threshold: sk.config.congestion_threshold,
        congested: max > sk.config.congestion_threshold,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeReport {
    pub counts: Vec<usize>,
    pub total_handles: usize,
    /// `x + q + z`.
    pub code_cells: usize,
    pub ratio: f64,
    pub pi1_handles: usize,
    /// Total length of the cycles the disks are attached along.
    pub disk_area: usize,
    /// Number of heights each cell is cut into.
    pub subdivision_factor: usize,
    /// Non-disk handles times the subdivision factor, plus the disk area.
    pub refined_volume: usize,
    /// Cells needed to cap off second homology with a ball, `N^(11/9)` for
    /// `N` total handles. Reported only; no handles are built for it.
    pub b2_adjustment: f64,
}

pub fn volume_report(sk: &HandleSkeleton) -> VolumeReport {
    let stats = sk.stats();
    let total_handles = sk.handles.len();
    let code_cells: usize = sk.dims.iter().sum();
    let mut pi1_handles = 0;
    let mut disk_area = 0;
    for h in &sk.handles {
        if let Origin::Pi1Disk(b) = h.origin {
            pi1_handles += 1;
            disk_area += sk.pi1.as_ref().map_or(0, |p| p.basis.cycles[b].len());
        }
    }
    let subdivision_factor = sk.pi1.as_ref().map_or(1, |p| p.coloring.count.max(1));
    VolumeReport {
        counts: stats.counts,
        total_handles,
        code_cells,
        ratio: if code_cells == 0 {
            0.0
        } else {
            total_handles as f64 / code_cells as f64
        },
        pi1_handles,
        disk_area,
        subdivision_factor,
        refined_volume: (total_handles - pi1_handles) * subdivision_factor + disk_area,
        b2_adjustment: (total_handles as f64).powf(11.0 / 9.0),
    }
}

/// Graphviz rendering of the contact graph.
pub fn to_dot(sk: &HandleSkeleton) -> String {
    let mut s = String::from("graph skeleton {\n");
    for h in &sk.handles {
        let label = match h.origin {
            Origin::XStabilizer(i) => format!("X{i}"),
            Origin::Qubit(i) => format!("q{i}"),
            Origin::ZStabilizer(i) => format!("Z{i}"),
            Origin::Internal1 { owner } => format!("i1@{owner}"),
            Origin::Internal2 { owner } => format!("i2@{owner}"),
            Origin::Pi1Disk(b) => format!("disk{b}"),
        };
        let mark = if h.mirror_of.is_some() { "'" } else { "" };
        writeln!(s, "  h{} [label=\"{}{mark} [{}]\"];", h.id, label, h.index).expect("write to string");
    }
    for (a, adj) in sk.contacts().iter().enumerate() {
        for &b in adj.range(a + 1..) {
            writeln!(s, "  h{a} -- h{b};").expect("write to string");
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::super::build::{attach_qubit_handles, attach_z_handles, build_x, build_x_shared, PairingPolicy};
    use super::super::pi1::{double, kill_pi1};
    use super::*;
    use crate::codes::gen_cycle;
    use crate::lifting::product_lift;
    use crate::matrix::IntMatrix;

    fn toric_plus(l: usize) -> (ChainComplexZ, HandleSkeleton) {
        let c = product_lift(&gen_cycle(l), &gen_cycle(l)).unwrap();
        let sk = attach_qubit_handles(build_x(&c).unwrap(), &c).unwrap();
        let sk = attach_z_handles(sk, &c, PairingPolicy::FirstFit).unwrap();
        (c.clone(), kill_pi1(sk, 7).unwrap())
    }

    #[test]
    fn round_trip_and_injected_fault() {
        let (c, mut sk) = toric_plus(2);
        assert!(verify_middle_complex(&sk, &c).unwrap().ok);
        let q = sk.qubit_handles[0];
        sk.handles[q].attachments[0].degree *= -1;
        let r = verify_middle_complex(&sk, &c).unwrap();
        assert!(!r.ok);
        assert_eq!(r.mismatch.unwrap().map, 1);
        let empty = ChainComplexZ::zero(vec![0, 0, 0]).unwrap();
        let sk = attach_z_handles(
            attach_qubit_handles(build_x(&empty).unwrap(), &empty).unwrap(),
            &empty,
            PairingPolicy::FirstFit,
        )
        .unwrap();
        assert!(verify_middle_complex(&sk, &empty).unwrap().ok);
    }

    #[test]
    fn shared_zero_handle_congests() {
        let mut maxes = Vec::new();
        for x in [8, 16, 32] {
            let c = ChainComplexZ::from_boundaries(vec![IntMatrix::zeros(x, 0), IntMatrix::zeros(0, 0)]).unwrap();
            let sk = build_x_shared(&c).unwrap();
            let a = congestion_audit(&sk);
            maxes.push(a.max);
            assert_eq!(congestion_audit(&build_x(&c).unwrap()).max, 1);
            assert_eq!(a.congested, x > 16);
        }
        assert_eq!(maxes, vec![8, 16, 32]);
    }

    #[test]
    fn doubling_keeps_congestion() {
        let (_, sk) = toric_plus(3);
        let before = congestion_audit(&sk);
        let after = congestion_audit(&double(sk).unwrap());
        assert_eq!(before.max, after.max);
        assert_eq!(before.raw_max, after.raw_max);
    }

    #[test]
    fn volume_bookkeeping() {
        let c = product_lift(&gen_cycle(3), &gen_cycle(3)).unwrap();
        let sk = attach_z_handles(attach_qubit_handles(build_x(&c).unwrap(), &c).unwrap(), &c, PairingPolicy::FirstFit).unwrap();
        let before = volume_report(&sk);
        let plus = kill_pi1(sk, 0).unwrap();
        let after = volume_report(&plus);
        assert_eq!(after.total_handles - before.total_handles, after.pi1_handles);
        assert_eq!(
            after.refined_volume,
            before.total_handles * after.subdivision_factor + after.disk_area
        );
        assert_eq!(after.code_cells, 36);
        let empty = ChainComplexZ::zero(vec![0, 0, 0]).unwrap();
        assert_eq!(volume_report(&build_x(&empty).unwrap()).total_handles, 0);
    }

    #[test]
    fn dot_lists_contacts() {
        let c = ChainComplexZ::from_boundaries(vec![IntMatrix::zeros(1, 0), IntMatrix::zeros(0, 0)]).unwrap();
        let dot = to_dot(&build_x(&c).unwrap());
        assert!(dot.contains("h0 -- h1;"));
    }
}
