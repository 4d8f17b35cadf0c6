//! Handle inventory of the manifold built from a lifted three-term complex.
//!
//! Handles are records with incidence data, not embedded geometry. The
//! stages follow the construction order: 0- and 3-handles per X-stabilizer,
//! punctured-sphere "4-handles" per qubit, "5-handles" per Z-stabilizer with
//! their internal 1- and 2-handles, disks killing the fundamental group, and
//! finally the double, which mirrors each index-k handle to index `11 − k`.
//!
//! The complex is read with `dims = [x, q, z]`, `boundaries[0]` the lifted
//! X-check map (qubits to X-stabilizers) and `boundaries[1]` the lifted
//! Z-check map (Z-stabilizers to qubits).

mod audit;
mod build;
mod pi1;
mod push;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::complex::ChainComplexZ;
use crate::decongestion::{CycleBasis, Multigraph};
use crate::error::{Error, Result};

pub use audit::{
    congestion_audit, to_dot, verify_middle_complex, volume_report, CongestionReport, MiddleReport,
    Mismatch, VolumeReport,
};
pub use build::{
    attach_qubit_handles, attach_z_handles, build_x, build_x_shared, euler_pairing, HalfEdge,
    PairingComponent, PairingPolicy, PairingWitness, RedVertex,
};
pub use pi1::{color_hypergraph, double, height_coloring, kill_pi1, HeightColoring, Pi1Data};
pub use push::{mc_push, push_image_area, MonteCarloReport, PushOptions, Simplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Stage {
    X,
    QX,
    ZQX,
    #[serde(rename = "ZQX+")]
    ZQXPlus,
    Double,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::X => "x",
            Stage::QX => "qx",
            Stage::ZQX => "zqx",
            Stage::ZQXPlus => "zqx+",
            Stage::Double => "double",
        })
    }
}

impl std::str::FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Stage::X),
            "qx" => Ok(Stage::QX),
            "zqx" => Ok(Stage::ZQX),
            "zqx+" => Ok(Stage::ZQXPlus),
            "double" => Ok(Stage::Double),
            other => Err(Error::InvalidArgument(format!("unknown stage {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Origin {
    XStabilizer(usize),
    Qubit(usize),
    ZStabilizer(usize),
    /// Internal 1-handle inside the given qubit or Z-stabilizer handle.
    Internal1 { owner: usize },
    /// Internal 2-handle inside the given Z-stabilizer handle.
    Internal2 { owner: usize },
    /// Disk killing the given cycle of the fundamental-group basis.
    Pi1Disk(usize),
}

/// `target` is a handle this one attaches to. `degree` is a signed degree for
/// code handles and a contact multiplicity for internal handles and disks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Attachment {
    pub target: usize,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HandleRecord {
    pub id: usize,
    pub index: u8,
    pub origin: Origin,
    pub attachments: Vec<Attachment>,
    /// The code handle an internal handle lives in.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parent: Option<usize>,
    /// For handles of the mirrored half of the double, the original.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mirror_of: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SkeletonConfig {
    /// Maximum number of disks of one height allowed in a cell.
    pub height_load: usize,
    /// Degree cap handed to the cycle basis construction.
    pub degree_cap: usize,
    /// Refined contact counts above this are reported as congested.
    pub congestion_threshold: usize,
}

impl Default for SkeletonConfig {
    fn default() -> Self {
        Self {
            height_load: 2,
            degree_cap: 64,
            congestion_threshold: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkeletonStats {
    /// `counts[k]` handles of index `k`, for `k` in `0..=11`.
    pub counts: Vec<usize>,
    pub max_contact: usize,
}

/// A hub of the fundamental-group graph: one boundary component of a
/// Z-stabilizer's attaching region.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hub {
    pub z: usize,
    pub component: usize,
    /// Qubit handle the component is anchored in.
    pub anchor: usize,
    /// X-stabilizer the anchor arc runs to, if the component touches one.
    pub arc_to: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HandleSkeleton {
    handles: Vec<HandleRecord>,
    stage: Stage,
    config: SkeletonConfig,
    dims: [usize; 3],
    /// Per X-stabilizer, its 0-handle and 3-handle.
    x_handles: Vec<(usize, usize)>,
    qubit_handles: Vec<usize>,
    /// Per qubit, the X-stabilizer and sign of each boundary sphere.
    slots: Vec<Vec<(usize, i64)>>,
    z_handles: Vec<usize>,
    pairings: Vec<PairingWitness>,
    /// Qubit-side internal 1-handles as (handle, X-stabilizer, X-stabilizer).
    qubit_links: Vec<(usize, usize, usize)>,
    hubs: Vec<Hub>,
    /// Z-side internal 1-handles as (handle, hub, hub).
    hub_links: Vec<(usize, usize, usize)>,
    pi1: Option<Pi1Data>,
}

impl HandleSkeleton {
    fn empty(dims: [usize; 3], config: SkeletonConfig) -> Self {
        Self {
            handles: Vec::new(),
            stage: Stage::X,
            config,
            dims,
            x_handles: Vec::new(),
            qubit_handles: Vec::new(),
            slots: Vec::new(),
            z_handles: Vec::new(),
            pairings: Vec::new(),
            qubit_links: Vec::new(),
            hubs: Vec::new(),
            hub_links: Vec::new(),
            pi1: None,
        }
    }

    fn push(&mut self, index: u8, origin: Origin, attachments: Vec<Attachment>, parent: Option<usize>) -> usize {
        let id = self.handles.len();
        self.handles.push(HandleRecord {
            id,
            index,
            origin,
            attachments,
            parent,
            mirror_of: None,
        });
        id
    }

    fn require(&self, expected: Stage) -> Result<()> {
        if self.stage == expected {
            Ok(())
        } else {
            Err(Error::WrongStage {
                expected: expected.to_string(),
                found: self.stage.to_string(),
            })
        }
    }

    pub fn handles(&self) -> &[HandleRecord] {
        &self.handles
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn config(&self) -> &SkeletonConfig {
        &self.config
    }

    pub fn with_config(mut self, config: SkeletonConfig) -> Self {
        self.config = config;
        self
    }

    /// Dimensions `[x, q, z]` of the complex the skeleton was built from.
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn x_handles(&self) -> &[(usize, usize)] {
        &self.x_handles
    }

    pub fn qubit_handles(&self) -> &[usize] {
        &self.qubit_handles
    }

    pub fn z_handles(&self) -> &[usize] {
        &self.z_handles
    }

    pub fn pairings(&self) -> &[PairingWitness] {
        &self.pairings
    }

    pub fn hubs(&self) -> &[Hub] {
        &self.hubs
    }

    pub fn pi1(&self) -> Option<&Pi1Data> {
        self.pi1.as_ref()
    }

    /// Number of boundary spheres of each qubit handle, the column `ℓ1`
    /// norms of the lifted X-check map.
    pub fn sphere_counts(&self) -> Vec<usize> {
        self.slots.iter().map(Vec::len).collect()
    }

    /// Symmetric contact relation: distinct handles joined by an attachment
    /// or a parent link.
    pub fn contacts(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.handles.len()];
        for h in &self.handles {
            let others = h.attachments.iter().map(|a| a.target).chain(h.parent);
            for t in others {
                if t != h.id {
                    adj[h.id].insert(t);
                    adj[t].insert(h.id);
                }
            }
        }
        adj
    }

    pub fn stats(&self) -> SkeletonStats {
        let mut counts = vec![0; 12];
        for h in &self.handles {
            counts[h.index as usize] += 1;
        }
        let max_contact = self.contacts().iter().map(BTreeSet::len).max().unwrap_or(0);
        SkeletonStats {
            counts,
            max_contact,
        }
    }

    /// The graph whose cycles generate the fundamental group: one vertex per
    /// X-stabilizer 0-handle then one per hub; edges are qubit-side internal
    /// 1-handles, Z-side internal 1-handles and hub anchor arcs. Also returns
    /// the handle each edge runs through.
    pub fn one_skeleton(&self) -> (Multigraph, Vec<usize>) {
        let x = self.x_handles.len();
        let mut g = Multigraph::new(x + self.hubs.len());
        let mut through = Vec::new();
        for &(h, a, b) in &self.qubit_links {
            g.add_edge(a, b).expect("X-stabilizer in range");
            through.push(h);
        }
        for &(h, a, b) in &self.hub_links {
            g.add_edge(x + a, x + b).expect("hub in range");
            through.push(h);
        }
        for (i, hub) in self.hubs.iter().enumerate() {
            if let Some(t) = hub.arc_to {
                g.add_edge(x + i, t).expect("X-stabilizer in range");
                through.push(hub.anchor);
            }
        }
        (g, through)
    }

    /// Handle standing for a vertex of [`Self::one_skeleton`].
    pub fn vertex_handle(&self, v: usize) -> usize {
        let x = self.x_handles.len();
        if v < x {
            self.x_handles[v].0
        } else {
            self.z_handles[self.hubs[v - x].z]
        }
    }
}

fn check_three_term(c: &ChainComplexZ) -> Result<[usize; 3]> {
    match *c.dims() {
        [x, q, z] => Ok([x, q, z]),
        _ => Err(Error::WrongShape(format!(
            "expected a three-term complex, got {} terms",
            c.dims().len()
        ))),
    }
}
