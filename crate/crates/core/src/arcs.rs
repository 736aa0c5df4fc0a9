//! Arc identity through intersection coordinates against the base
//! triangulation, transported across flips.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::triangulation::{CombTriangulation, EdgeId, MarkedPoint, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArcId(pub u32);

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcRecord {
    pub id: ArcId,
    /// `i(e, arc)` for every base edge `e`, with `-1` marking the base edge
    /// the arc is equal to.
    pub base_coords: Vec<i64>,
    pub endpoints: (MarkedPoint, MarkedPoint),
}

/// Append-only map from coordinate vectors to dense arc ids.
#[derive(Clone, Debug, Default)]
pub struct ArcRegistry {
    records: Vec<ArcRecord>,
    index: HashMap<Vec<i64>, ArcId>,
}

impl ArcRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get_or_insert(&mut self, coords: &[i64], endpoints: (MarkedPoint, MarkedPoint)) -> ArcId {
        if let Some(&id) = self.index.get(coords) {
            return id;
        }
        let id = ArcId(self.records.len() as u32);
        self.records.push(ArcRecord { id, base_coords: coords.to_vec(), endpoints });
        self.index.insert(coords.to_vec(), id);
        id
    }

    pub fn lookup(&self, coords: &[i64]) -> Option<ArcId> {
        self.index.get(coords).copied()
    }

    pub fn record(&self, id: ArcId) -> Result<&ArcRecord> {
        self.records.get(id.0 as usize).ok_or(Error::UnknownArc(id))
    }

    pub fn records(&self) -> &[ArcRecord] {
        &self.records
    }
}

/// Intersection number of a fixed arc with the new diagonal of a flip, from
/// its values on the quadrilateral sides `a, b, c, d` and the old diagonal
/// `x` (labelled as in [`crate::triangulation::Quadrilateral`]).
///
/// Values use the `-1` convention for "the fixed arc is this edge"; the
/// result is `-1` exactly when the fixed arc is the new diagonal.
pub fn flip_value(a: i64, b: i64, c: i64, d: i64, x: i64) -> i64 {
    if x == -1 {
        return 1;
    }
    if a == -1 || b == -1 || c == -1 || d == -1 {
        return 0;
    }
    // pieces in the first triangle: terminal segments at each corner, then
    // normal arcs between pairs of sides
    let tau0 = (b - a - x).max(0);
    let tau1 = (x - a - b).max(0);
    let tau2 = (a - b - x).max(0);
    let (a1, b1, x1) = (a - tau2, b - tau0, x - tau1);
    let n0 = (a1 + x1 - b1) / 2;
    let n1 = (a1 + b1 - x1) / 2;

    let sigma0 = (c - d - x).max(0);
    let sigma2 = (d - x - c).max(0);
    let sigma3 = (x - c - d).max(0);
    let (c1, d1, x2) = (c - sigma0, d - sigma2, x - sigma3);
    let m0 = (d1 + x2 - c1) / 2;
    let m3 = (c1 + d1 - x2) / 2;

    let overlap = |lo1: i64, hi1: i64, lo2: i64, hi2: i64| (hi1.min(hi2) - lo1.max(lo2)).max(0);
    if overlap(n0, n0 + tau1, m0, m0 + sigma3) > 0 {
        return -1;
    }
    let cross = overlap(0, n0, m0 + sigma3, x) + overlap(n0 + tau1, x, 0, m0);
    n1 + m3 + tau0 + tau2 + sigma0 + sigma2 + cross
}

/// Updates a vector of values indexed by current edges for the flip of `e`
/// in `tri` (before the flip).
pub fn transport_row(tri: &CombTriangulation, e: EdgeId, row: &mut [i64]) -> Result<()> {
    let quad = tri.quadrilateral(e)?;
    let value = |side: Side| match side {
        Side::Edge(f) => row[f.0],
        Side::Boundary(_) => 0,
    };
    let new = flip_value(value(quad.a), value(quad.b), value(quad.c), value(quad.d), row[e.0]);
    row[e.0] = new;
    Ok(())
}

/// A triangulation together with the coordinates of each of its edges.
#[derive(Clone, Debug)]
pub struct TransportState {
    node: CombTriangulation,
    /// `matrix[e][f] = i(base edge e, current edge f)`.
    matrix: Vec<Vec<i64>>,
    arcs: Vec<ArcId>,
}

impl TransportState {
    /// State at the base triangulation; registers its edges as arcs `0..E`.
    pub fn base(tri: CombTriangulation, registry: &mut ArcRegistry) -> Self {
        let n = tri.num_edges();
        let matrix: Vec<Vec<i64>> =
            (0..n).map(|e| (0..n).map(|f| if e == f { -1 } else { 0 }).collect()).collect();
        let mut state = Self { node: tri, matrix, arcs: Vec::new() };
        state.arcs = (0..n).map(|f| state.register(EdgeId(f), registry)).collect();
        state
    }

    fn register(&self, f: EdgeId, registry: &mut ArcRegistry) -> ArcId {
        let column = self.column(f);
        registry.get_or_insert(&column, self.node.edge_endpoints(f))
    }

    pub fn node(&self) -> &CombTriangulation {
        &self.node
    }

    pub fn column(&self, f: EdgeId) -> Vec<i64> {
        self.matrix.iter().map(|row| row[f.0]).collect()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn identify_edge_arc(&self, f: EdgeId) -> ArcId {
        self.arcs[f.0]
    }

    pub fn arcs(&self) -> &[ArcId] {
        &self.arcs
    }

    pub fn edge_of(&self, arc: ArcId) -> Option<EdgeId> {
        self.arcs.iter().position(|&a| a == arc).map(EdgeId)
    }

    pub fn transport_flip(&self, e: EdgeId, registry: &mut ArcRegistry) -> Result<TransportState> {
        let mut matrix = self.matrix.clone();
        for row in &mut matrix {
            transport_row(&self.node, e, row)?;
        }
        let node = self.node.flip(e)?;
        let mut out = Self { node, matrix, arcs: self.arcs.clone() };
        out.arcs[e.0] = out.register(e, registry);
        Ok(out)
    }
}
