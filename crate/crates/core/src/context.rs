//! The enumeration context: every triangulation reached so far, with its
//! transported coordinates, and the arc registry they share.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::arcs::{transport_row, ArcId, ArcRegistry, TransportState};
use crate::error::{Error, Result};
use crate::surface::SurfaceSignature;
use crate::triangulation::{CombTriangulation, Decomposition, EdgeId, Region, Side};

#[derive(Clone, Debug)]
pub struct TriNode {
    pub state: TransportState,
    /// Arc ids of the edges, sorted.
    pub arcs: Vec<ArcId>,
    /// Node and edge whose flip first produced this node.
    pub parent: Option<(usize, EdgeId)>,
    children: Vec<Option<usize>>,
}

impl TriNode {
    pub fn tri(&self) -> &CombTriangulation {
        self.state.node()
    }

    pub fn edge_of(&self, arc: ArcId) -> Option<EdgeId> {
        self.state.edge_of(arc)
    }

    pub fn contains(&self, arc: ArcId) -> bool {
        self.arcs.binary_search(&arc).is_ok()
    }
}

/// A neighbour of a polygonalisation in the complex.
#[derive(Clone, Debug)]
pub struct Neighbor {
    pub arcs: Vec<ArcId>,
    pub witness: usize,
    pub arc: ArcId,
    pub added: bool,
}

#[derive(Debug)]
pub struct Context {
    signature: Arc<SurfaceSignature>,
    registry: ArcRegistry,
    nodes: Vec<TriNode>,
    by_arcs: HashMap<Vec<ArcId>, usize>,
    host: Vec<usize>,
    common_hosts: HashMap<(ArcId, ArcId), Option<usize>>,
    violations: Vec<String>,
}

impl Context {
    pub fn new(signature: SurfaceSignature) -> Result<Self> {
        let tri = signature.base_triangulation()?;
        let mut registry = ArcRegistry::new();
        let state = TransportState::base(tri, &mut registry);
        let mut ctx = Self {
            signature: Arc::new(signature),
            registry,
            nodes: Vec::new(),
            by_arcs: HashMap::new(),
            host: Vec::new(),
            common_hosts: HashMap::new(),
            violations: Vec::new(),
        };
        ctx.insert_node(state, None);
        Ok(ctx)
    }

    pub fn signature(&self) -> &SurfaceSignature {
        &self.signature
    }

    pub fn registry(&self) -> &ArcRegistry {
        &self.registry
    }

    pub fn node(&self, idx: usize) -> &TriNode {
        &self.nodes[idx]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_of_arcs(&self, arcs: &[ArcId]) -> Option<usize> {
        self.by_arcs.get(arcs).copied()
    }

    /// Inconsistencies met while building nodes; empty when arc identity is
    /// path independent.
    pub fn consistency_violations(&self) -> &[String] {
        &self.violations
    }

    fn insert_node(&mut self, state: TransportState, parent: Option<(usize, EdgeId)>) -> usize {
        let mut arcs = state.arcs().to_vec();
        arcs.sort_unstable();
        let before = arcs.len();
        arcs.dedup();
        if arcs.len() != before {
            self.violations.push(format!("triangulation with repeated arcs {:?}", state.arcs()));
        }
        let idx = self.nodes.len();
        while self.host.len() < self.registry.len() {
            self.host.push(idx);
        }
        let edges = state.node().num_edges();
        self.by_arcs.insert(arcs.clone(), idx);
        self.nodes.push(TriNode { state, arcs, parent, children: vec![None; edges] });
        idx
    }

    /// Index of the triangulation obtained by flipping `e` in node `idx`.
    pub fn flip_node(&mut self, idx: usize, e: EdgeId) -> Result<usize> {
        let node = &self.nodes[idx];
        if e.0 >= node.children.len() {
            return Err(Error::UnknownEdge(e.0));
        }
        if let Some(child) = node.children[e.0] {
            return Ok(child);
        }
        let state = node.state.transport_flip(e, &mut self.registry)?;
        let new_arc = state.identify_edge_arc(e);
        let mut arcs = state.arcs().to_vec();
        arcs.sort_unstable();
        let child = match self.by_arcs.get(&arcs) {
            Some(&existing) => {
                self.check_same_triangulation(existing, &state);
                existing
            }
            None => self.insert_node(state, Some((idx, e))),
        };
        self.nodes[idx].children[e.0] = Some(child);
        let back = self.nodes[child].edge_of(new_arc);
        if let Some(f) = back {
            match self.nodes[child].children[f.0] {
                Some(prev) if prev != idx => {
                    self.violations.push(format!("flip involution broken between nodes {idx} and {child}"));
                }
                _ => self.nodes[child].children[f.0] = Some(idx),
            }
        }
        Ok(child)
    }

    fn check_same_triangulation(&mut self, existing: usize, state: &TransportState) {
        let old = &self.nodes[existing].state;
        if shapes(old) != shapes(state) {
            self.violations.push(format!("node {existing} reached with a different triangle structure"));
        }
    }

    /// All flippable edges of a node, flipped and cached.
    pub fn expand(&mut self, idx: usize) -> Result<Vec<(EdgeId, usize)>> {
        let edges: Vec<EdgeId> = self.nodes[idx].tri().edges().collect();
        let mut out = Vec::new();
        for e in edges {
            if self.nodes[idx].tri().is_flippable(e)? {
                out.push((e, self.flip_node(idx, e)?));
            }
        }
        Ok(out)
    }

    /// Triangulations reachable from `start` by flipping only edges whose
    /// arcs are not pinned, in BFS order.
    pub fn pinned_closure(&mut self, start: usize, pinned: &[ArcId]) -> Result<Vec<usize>> {
        let mut seen = HashSet::from([start]);
        let mut order = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(idx) = queue.pop_front() {
            let edges: Vec<EdgeId> = self.nodes[idx].tri().edges().collect();
            for e in edges {
                let arc = self.nodes[idx].state.identify_edge_arc(e);
                if pinned.contains(&arc) || !self.nodes[idx].tri().is_flippable(e)? {
                    continue;
                }
                let child = self.flip_node(idx, e)?;
                if seen.insert(child) {
                    order.push(child);
                    queue.push_back(child);
                }
            }
        }
        Ok(order)
    }

    /// Regions of the multiarc `keep` (a subset of the node's arcs).
    pub fn decompose(&self, idx: usize, keep: &[ArcId]) -> Decomposition {
        let node = &self.nodes[idx];
        node.tri().decompose(|e| !keep.contains(&node.state.identify_edge_arc(e)))
    }

    pub fn regions(&self, idx: usize, keep: &[ArcId]) -> Vec<Region> {
        self.decompose(idx, keep).regions
    }

    pub fn is_polygonalisation(&self, idx: usize, keep: &[ArcId]) -> bool {
        self.decompose(idx, keep).all_polygons()
    }

    /// Arcs of `keep` whose two sides lie in distinct regions.
    pub fn removable_arcs(&self, idx: usize, keep: &[ArcId]) -> Vec<ArcId> {
        let node = &self.nodes[idx];
        let dec = self.decompose(idx, keep);
        keep.iter()
            .copied()
            .filter(|&arc| {
                let e = node.edge_of(arc).expect("kept arc belongs to the witness");
                let [s, t] = node.tri().edge_slots(e);
                dec.region_of_slot(s) != dec.region_of_slot(t)
            })
            .collect()
    }

    /// Diagonals of the polygons of `keep`, each with a triangulation
    /// containing `keep` and the diagonal.
    pub fn addable_arcs(&mut self, idx: usize, keep: &[ArcId]) -> Result<Vec<(ArcId, usize)>> {
        let closure = self.pinned_closure(idx, keep)?;
        let mut found: HashMap<ArcId, usize> = HashMap::new();
        for &n in &closure {
            for &arc in &self.nodes[n].arcs {
                if !keep.contains(&arc) {
                    found.entry(arc).or_insert(n);
                }
            }
        }
        let mut out: Vec<(ArcId, usize)> = found.into_iter().collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Neighbours of the polygonalisation `keep` witnessed by node `idx`.
    pub fn neighbors(&mut self, idx: usize, keep: &[ArcId]) -> Result<Vec<Neighbor>> {
        let mut out = Vec::new();
        for arc in self.removable_arcs(idx, keep) {
            let arcs: Vec<ArcId> = keep.iter().copied().filter(|&a| a != arc).collect();
            out.push(Neighbor { arcs, witness: idx, arc, added: false });
        }
        for (arc, witness) in self.addable_arcs(idx, keep)? {
            let mut arcs = keep.to_vec();
            arcs.push(arc);
            arcs.sort_unstable();
            out.push(Neighbor { arcs, witness, arc, added: true });
        }
        Ok(out)
    }

    pub fn host(&self, arc: ArcId) -> Result<usize> {
        self.host.get(arc.0 as usize).copied().ok_or(Error::ArcNotWitnessed(arc))
    }

    /// Flip path from the base triangulation to `idx`.
    fn path_to(&self, mut idx: usize) -> Vec<(usize, EdgeId)> {
        let mut path = Vec::new();
        while let Some((parent, e)) = self.nodes[idx].parent {
            path.push((parent, e));
            idx = parent;
        }
        path.reverse();
        path
    }

    /// Values `i(arc, f)` for every edge `f` of node `idx`.
    pub fn coordinates_at(&self, arc: ArcId, idx: usize) -> Result<Vec<i64>> {
        let mut row = self.registry.record(arc)?.base_coords.clone();
        for (step, e) in self.path_to(idx) {
            transport_row(self.nodes[step].tri(), e, &mut row)?;
        }
        Ok(row)
    }

    /// Geometric intersection number, read at the edge carrying `a` in a
    /// triangulation containing it.
    pub fn intersection_number(&self, a: ArcId, b: ArcId) -> Result<u64> {
        let (a, b) = match (self.host(a), self.host(b)) {
            (Ok(_), _) => (a, b),
            (Err(_), Ok(_)) => (b, a),
            (Err(err), Err(_)) => return Err(err),
        };
        self.registry.record(b).map_err(|_| Error::ArcNotWitnessed(b))?;
        if a == b {
            return Ok(0);
        }
        self.intersection_via(a, b)
    }

    /// `i(a, b)` computed through the host triangulation of `a`.
    pub fn intersection_via(&self, a: ArcId, b: ArcId) -> Result<u64> {
        let idx = self.host(a)?;
        let row = self.coordinates_at(b, idx)?;
        let e = self.nodes[idx].edge_of(a).expect("host contains the arc");
        Ok(row[e.0].max(0) as u64)
    }

    /// A triangulation containing both arcs, if they are disjoint.
    pub fn common_host(&mut self, a: ArcId, b: ArcId) -> Result<Option<usize>> {
        let key = (a.min(b), a.max(b));
        if let Some(&found) = self.common_hosts.get(&key) {
            return Ok(found);
        }
        let found = if a == b {
            Some(self.host(a)?)
        } else if self.intersection_number(a, b)? != 0 {
            None
        } else {
            let start = self.host(a)?;
            let closure = self.pinned_closure(start, &[a])?;
            closure.into_iter().find(|&n| self.nodes[n].contains(b))
        };
        self.common_hosts.insert(key, found);
        Ok(found)
    }

    /// For a folded pair returns `(outer, doubled)`: the loop enclosing the
    /// monogon and the arc running into it.
    pub fn folded_roles(&mut self, a: ArcId, b: ArcId) -> Result<Option<(ArcId, ArcId)>> {
        if a == b {
            return Ok(None);
        }
        let Some(idx) = self.common_host(a, b)? else {
            return Ok(None);
        };
        let node = &self.nodes[idx];
        for region in self.regions(idx, &[a, b]) {
            if !region.is_disk || region.interior_marked_count != 0 || region.side_count() != 3 {
                continue;
            }
            let labels: Vec<Option<ArcId>> = region
                .side_cycle()
                .iter()
                .map(|&(_, side)| side.edge().map(|e| node.state.identify_edge_arc(e)))
                .collect();
            let count = |x: ArcId| labels.iter().filter(|&&l| l == Some(x)).count();
            match (count(a), count(b)) {
                (1, 2) => return Ok(Some((a, b))),
                (2, 1) => return Ok(Some((b, a))),
                _ => {}
            }
        }
        Ok(None)
    }

    pub fn is_folded_pair(&mut self, a: ArcId, b: ArcId) -> Result<bool> {
        Ok(self.folded_roles(a, b)?.is_some())
    }

    pub fn cuts_off_once_marked_monogon(&self, a: ArcId) -> Result<bool> {
        let record = self.registry.record(a).map_err(|_| Error::ArcNotWitnessed(a))?;
        if record.endpoints.0 != record.endpoints.1 {
            return Ok(false);
        }
        let idx = self.host(a)?;
        Ok(self
            .regions(idx, &[a])
            .iter()
            .any(|r| r.is_disk && r.side_count() == 1 && r.interior_marked_count == 1))
    }

    /// Whether some triangulation contains both arcs and stays a
    /// polygonalisation after removing them together.
    pub fn simultaneously_removable(&mut self, a: ArcId, b: ArcId) -> Result<bool> {
        if a == b {
            return Ok(false);
        }
        let Some(start) = self.common_host(a, b)? else {
            return Ok(false);
        };
        for idx in self.pinned_closure(start, &[a, b])? {
            let keep: Vec<ArcId> = self.nodes[idx].arcs.iter().copied().filter(|&x| x != a && x != b).collect();
            if self.is_polygonalisation(idx, &keep) {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn shapes(st: &TransportState) -> Vec<[Option<ArcId>; 3]> {
    st.node().triangle_shapes(|side| match side {
        Side::Edge(f) => Some(st.identify_edge_arc(f)),
        Side::Boundary(_) => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(sig: &str) -> Context {
        Context::new(sig.parse().unwrap()).unwrap()
    }

    fn arc_by_endpoints(c: &Context, x: u32, y: u32) -> ArcId {
        c.registry()
            .records()
            .iter()
            .find(|r| (r.endpoints.0 .0, r.endpoints.1 .0) == (x.min(y), x.max(y)))
            .unwrap()
            .id
    }

    fn flood(c: &mut Context) {
        let mut queue = VecDeque::from([0]);
        let mut seen = HashSet::from([0]);
        while let Some(idx) = queue.pop_front() {
            for (_, child) in c.expand(idx).unwrap() {
                if seen.insert(child) {
                    queue.push_back(child);
                }
            }
        }
    }

    #[test]
    fn flip_graph_sizes() {
        for (sig, count) in [("0,0:5", 5), ("0,0:6", 14), ("0,0:7", 42), ("0,1:3", 10), ("0,1:4", 35), ("0,3:", 4)] {
            let mut c = ctx(sig);
            flood(&mut c);
            assert_eq!(c.node_count(), count, "{sig}");
            assert!(c.consistency_violations().is_empty(), "{sig}: {:?}", c.consistency_violations());
        }
    }

    #[test]
    fn hexagon_intersections() {
        let mut c = ctx("0,0:6");
        flood(&mut c);
        assert_eq!(c.registry().len(), 9);
        let a02 = arc_by_endpoints(&c, 0, 2);
        let a13 = arc_by_endpoints(&c, 1, 3);
        let a03 = arc_by_endpoints(&c, 0, 3);
        assert_eq!(c.intersection_number(a02, a13).unwrap(), 1);
        assert_eq!(c.intersection_number(a02, a03).unwrap(), 0);
        assert_eq!(c.intersection_number(a02, a02).unwrap(), 0);
        assert!(matches!(c.intersection_number(ArcId(99), ArcId(98)), Err(Error::ArcNotWitnessed(_))));
        assert!(!c.is_folded_pair(a02, a03).unwrap());
        assert!(!c.cuts_off_once_marked_monogon(a02).unwrap());
    }

    #[test]
    fn punctured_triangle_folds() {
        let mut c = ctx("0,1:3");
        flood(&mut c);
        let records = c.registry().records().to_vec();
        let loops: Vec<ArcId> = records.iter().filter(|r| r.endpoints.0 == r.endpoints.1).map(|r| r.id).collect();
        // the puncture carries the last label
        let radii: Vec<ArcId> = records.iter().filter(|r| r.endpoints.1 .0 == 3).map(|r| r.id).collect();
        assert_eq!(records.len(), 9);
        assert_eq!(loops.len(), 3);
        assert_eq!(radii.len(), 3);
        for &l in &loops {
            assert!(c.cuts_off_once_marked_monogon(l).unwrap());
        }
        for &r in &radii {
            assert!(!c.cuts_off_once_marked_monogon(r).unwrap());
        }
        let mut folded = 0;
        for &l in &loops {
            for &r in &radii {
                if let Some((outer, doubled)) = c.folded_roles(l, r).unwrap() {
                    assert_eq!((outer, doubled), (l, r));
                    folded += 1;
                }
            }
        }
        assert_eq!(folded, 3);
        assert!(!c.is_folded_pair(radii[0], radii[1]).unwrap());
    }

    #[test]
    fn neighbors_of_the_empty_hexagon() {
        let mut c = ctx("0,0:6");
        let adds = c.addable_arcs(0, &[]).unwrap();
        assert_eq!(adds.len(), 9);
        assert!(c.removable_arcs(0, &[]).is_empty());
        let base = c.node(0).arcs.clone();
        assert!(c.is_polygonalisation(0, &base));
        assert!(c.addable_arcs(0, &base).unwrap().is_empty());
    }
}
