//! Combinatorial ideal triangulations as glued triangles.
//!
//! Triangle `t` has corners `0, 1, 2` in counter-clockwise order and side
//! slot `k` runs from corner `k` to corner `k + 1`. Two slots of one
//! interior edge are glued orientation-reversingly: corner `i` of the first
//! meets corner `j + 1` of the second and vice versa.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::DisjointSet;
use crate::report::{Check, Report};
use crate::surface::SurfaceSignature;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Label of a marked point of the surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedPoint(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub tri: usize,
    pub side: usize,
}

impl Slot {
    pub fn new(tri: usize, side: usize) -> Self {
        debug_assert!(side < 3);
        Self { tri, side }
    }

    pub fn index(self) -> usize {
        3 * self.tri + self.side
    }

    pub fn next(self) -> Self {
        Self::new(self.tri, (self.side + 1) % 3)
    }

    pub fn prev(self) -> Self {
        Self::new(self.tri, (self.side + 2) % 3)
    }
}

/// What sits in a side slot: half of an interior edge, or a boundary segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Edge(EdgeId),
    Boundary(usize),
}

impl Side {
    pub fn edge(self) -> Option<EdgeId> {
        match self {
            Side::Edge(e) => Some(e),
            Side::Boundary(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CombTriangulation {
    signature: Arc<SurfaceSignature>,
    corners: Vec<[MarkedPoint; 3]>,
    sides: Vec<Side>,
    edge_slots: Vec<[Slot; 2]>,
}

/// The quadrilateral around a flippable edge.
///
/// With the diagonal running between corners `P0` and `P2` of the
/// quadrilateral `P0 P1 P2 P3` (counter-clockwise), the sides are
/// `a = P0P1`, `b = P1P2`, `c = P2P3`, `d = P3P0`, and the flip replaces
/// the diagonal with `P1P3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Quadrilateral {
    pub a: Side,
    pub b: Side,
    pub c: Side,
    pub d: Side,
}

/// A triangle with two of its sides glued to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FoldedTriangle {
    pub tri: usize,
    /// The side glued to itself, running out to the enclosed marked point.
    pub doubled: EdgeId,
    /// The remaining side, enclosing the monogon.
    pub outer: Side,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub triangles: Vec<usize>,
    /// Boundary walks of the region; a disk has exactly one.
    pub side_cycles: Vec<Vec<(Slot, Side)>>,
    pub interior_marked_count: usize,
    pub euler_characteristic: i64,
    pub is_disk: bool,
}

impl Region {
    pub fn side_count(&self) -> usize {
        self.side_cycles.iter().map(Vec::len).sum()
    }

    /// The boundary walk of a disk region.
    pub fn side_cycle(&self) -> &[(Slot, Side)] {
        self.side_cycles.first().map_or(&[], Vec::as_slice)
    }

    pub fn is_polygon(&self) -> bool {
        self.is_disk && self.interior_marked_count == 0 && self.side_count() >= 3
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub regions: Vec<Region>,
    region_of_tri: Vec<usize>,
}

impl Decomposition {
    pub fn region_of_slot(&self, slot: Slot) -> usize {
        self.region_of_tri[slot.tri]
    }

    pub fn all_polygons(&self) -> bool {
        self.regions.iter().all(Region::is_polygon)
    }
}

impl CombTriangulation {
    /// Assembles a triangulation without validating it; see
    /// [`CombTriangulation::euler_verify`].
    pub fn from_raw_parts(
        signature: Arc<SurfaceSignature>,
        corners: Vec<[MarkedPoint; 3]>,
        sides: Vec<Side>,
        edge_slots: Vec<[Slot; 2]>,
    ) -> Self {
        Self { signature, corners, sides, edge_slots }
    }

    pub fn signature(&self) -> &SurfaceSignature {
        &self.signature
    }

    pub fn num_triangles(&self) -> usize {
        self.corners.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_slots.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edge_slots.len()).map(EdgeId)
    }

    pub fn side(&self, slot: Slot) -> Side {
        self.sides[slot.index()]
    }

    pub fn slots(&self) -> impl Iterator<Item = Slot> + '_ {
        (0..self.corners.len()).flat_map(|t| (0..3).map(move |k| Slot::new(t, k)))
    }

    pub fn edge_slots(&self, e: EdgeId) -> [Slot; 2] {
        self.edge_slots[e.0]
    }

    pub fn partner(&self, slot: Slot) -> Option<Slot> {
        match self.side(slot) {
            Side::Edge(e) => {
                let [a, b] = self.edge_slots[e.0];
                Some(if a == slot { b } else { a })
            }
            Side::Boundary(_) => None,
        }
    }

    /// Marked point at the start of `slot`.
    pub fn corner(&self, slot: Slot) -> MarkedPoint {
        self.corners[slot.tri][slot.side]
    }

    pub fn triangle_corners(&self, tri: usize) -> [MarkedPoint; 3] {
        self.corners[tri]
    }

    /// Endpoints of an edge, smaller label first.
    pub fn edge_endpoints(&self, e: EdgeId) -> (MarkedPoint, MarkedPoint) {
        let slot = self.edge_slots[e.0][0];
        let (x, y) = (self.corner(slot), self.corner(slot.next()));
        (x.min(y), x.max(y))
    }

    fn check_edge(&self, e: EdgeId) -> Result<()> {
        if e.0 < self.edge_slots.len() {
            Ok(())
        } else {
            Err(Error::UnknownEdge(e.0))
        }
    }

    pub fn is_flippable(&self, e: EdgeId) -> Result<bool> {
        self.check_edge(e)?;
        let [a, b] = self.edge_slots[e.0];
        Ok(a.tri != b.tri)
    }

    pub fn quadrilateral(&self, e: EdgeId) -> Result<Quadrilateral> {
        if !self.is_flippable(e)? {
            return Err(Error::NotFlippable(e.0));
        }
        let [s0, s1] = self.edge_slots[e.0];
        Ok(Quadrilateral {
            a: self.side(s0.next()),
            b: self.side(s0.prev()),
            c: self.side(s1.next()),
            d: self.side(s1.prev()),
        })
    }

    /// Replaces edge `e` by the other diagonal of its quadrilateral. The new
    /// diagonal keeps the index `e`.
    pub fn flip(&self, e: EdgeId) -> Result<CombTriangulation> {
        if !self.is_flippable(e)? {
            return Err(Error::NotFlippable(e.0));
        }
        let [s0, s1] = self.edge_slots[e.0];
        let (t1, t2) = (s0.tri, s1.tri);
        let p = self.corner(s0);
        let q = self.corner(s0.next());
        let r = self.corner(s0.prev());
        let s = self.corner(s1.prev());
        let (a, b, c, d) = (s0.next(), s0.prev(), s1.next(), s1.prev());

        let remap = |slot: Slot| -> Slot {
            if slot == a {
                Slot::new(t2, 1)
            } else if slot == b {
                Slot::new(t1, 0)
            } else if slot == c {
                Slot::new(t1, 1)
            } else if slot == d {
                Slot::new(t2, 0)
            } else if slot == s0 {
                Slot::new(t1, 2)
            } else if slot == s1 {
                Slot::new(t2, 2)
            } else {
                slot
            }
        };

        let mut out = self.clone();
        out.corners[t1] = [r, p, s];
        out.corners[t2] = [s, q, r];
        out.sides[Slot::new(t1, 0).index()] = self.side(b);
        out.sides[Slot::new(t1, 1).index()] = self.side(c);
        out.sides[Slot::new(t2, 0).index()] = self.side(d);
        out.sides[Slot::new(t2, 1).index()] = self.side(a);
        out.sides[Slot::new(t1, 2).index()] = Side::Edge(e);
        out.sides[Slot::new(t2, 2).index()] = Side::Edge(e);
        for (k, pair) in self.edge_slots.iter().enumerate() {
            out.edge_slots[k] = [remap(pair[0]), remap(pair[1])];
        }
        Ok(out)
    }

    pub fn folded_triangles(&self) -> Vec<FoldedTriangle> {
        let mut out = Vec::new();
        for t in 0..self.num_triangles() {
            for k in 0..3 {
                let slot = Slot::new(t, k);
                if let Some(other) = self.partner(slot) {
                    // report each fold once, from its first slot
                    if other.tri == t && other.side > k {
                        let third = (0..3).find(|&m| m != k && m != other.side).unwrap();
                        out.push(FoldedTriangle {
                            tri: t,
                            doubled: self.side(slot).edge().unwrap(),
                            outer: self.side(Slot::new(t, third)),
                        });
                    }
                }
            }
        }
        out
    }

    /// Components of the surface cut along every edge that is *not* removed.
    pub fn decompose(&self, removed: impl Fn(EdgeId) -> bool) -> Decomposition {
        let f = self.num_triangles();
        let is_removed = |slot: Slot| matches!(self.side(slot), Side::Edge(e) if removed(e));

        let mut tris = DisjointSet::new(f);
        let mut corners = DisjointSet::new(3 * f);
        let mut removed_edges = Vec::new();
        for (k, &[s, t]) in self.edge_slots.iter().enumerate() {
            if removed(EdgeId(k)) {
                tris.union(s.tri, t.tri);
                corners.union(s.index(), t.next().index());
                corners.union(s.next().index(), t.index());
                removed_edges.push(s.tri);
            }
        }

        let mut region_of_root = std::collections::HashMap::new();
        let mut region_of_tri = vec![0; f];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for t in 0..f {
            let root = tris.find(t);
            let id = *region_of_root.entry(root).or_insert_with(|| {
                members.push(Vec::new());
                members.len() - 1
            });
            region_of_tri[t] = id;
            members[id].push(t);
        }

        let mut edges_in = vec![0i64; members.len()];
        for tri in removed_edges {
            edges_in[region_of_tri[tri]] += 1;
        }

        // a corner class is open when one of its corners touches a kept side
        let mut open = vec![false; 3 * f];
        for t in 0..f {
            for k in 0..3 {
                let slot = Slot::new(t, k);
                if !is_removed(slot) || !is_removed(slot.prev()) {
                    let root = corners.find(slot.index());
                    open[root] = true;
                }
            }
        }

        let mut regions = Vec::with_capacity(members.len());
        for (id, tri_list) in members.into_iter().enumerate() {
            let mut roots: Vec<usize> =
                tri_list.iter().flat_map(|&t| (0..3).map(move |k| 3 * t + k)).map(|c| corners.find(c)).collect();
            roots.sort_unstable();
            roots.dedup();
            let interior = roots.iter().filter(|&&r| !open[r]).count();

            let mut visited = std::collections::HashSet::new();
            let mut side_cycles = Vec::new();
            let mut side_slots = 0i64;
            for &t in &tri_list {
                for k in 0..3 {
                    let start = Slot::new(t, k);
                    if is_removed(start) {
                        continue;
                    }
                    side_slots += 1;
                    if visited.contains(&start) {
                        continue;
                    }
                    let mut cycle = Vec::new();
                    let mut cur = start;
                    loop {
                        visited.insert(cur);
                        cycle.push((cur, self.side(cur)));
                        let mut cand = cur.next();
                        while is_removed(cand) {
                            cand = self.partner(cand).unwrap().next();
                        }
                        if cand == start {
                            break;
                        }
                        cur = cand;
                    }
                    side_cycles.push(cycle);
                }
            }

            let chi = roots.len() as i64 - (edges_in[id] + side_slots) + tri_list.len() as i64;
            regions.push(Region {
                triangles: tri_list,
                side_cycles,
                interior_marked_count: interior,
                euler_characteristic: chi,
                is_disk: chi == 1,
            });
        }
        Decomposition { regions, region_of_tri }
    }

    /// Regions left after deleting the edges in `removed`.
    pub fn regions_after_removal(&self, removed: &[EdgeId]) -> Vec<Region> {
        self.decompose(|e| removed.contains(&e)).regions
    }

    /// Checks every structural invariant of a triangulation of its signature.
    pub fn euler_verify(&self) -> Report {
        let sig = &*self.signature;
        let mut report = Report::new("triangulation", sig.to_string());
        let f = self.num_triangles();

        let mut shape = Check::new("slot-structure", "glued triangles");
        shape.observe(self.sides.len() == 3 * f, || {
            format!("{} slots for {} triangles", self.sides.len(), f)
        });
        let shape_ok = shape.passed();
        report.push(shape);
        if !shape_ok {
            return report;
        }

        let mut gluing = Check::new("gluing-involution", "glued triangles");
        for (k, &[s, t]) in self.edge_slots.iter().enumerate() {
            let ok = s != t
                && s.tri < f
                && t.tri < f
                && self.side(s) == Side::Edge(EdgeId(k))
                && self.side(t) == Side::Edge(EdgeId(k));
            gluing.observe(ok, || format!("edge {k} has slots {s:?}, {t:?}"));
        }
        for slot in self.slots() {
            if let Side::Edge(e) = self.side(slot) {
                let ok = e.0 < self.edge_slots.len() && self.edge_slots[e.0].contains(&slot);
                gluing.observe(ok, || format!("slot {slot:?} claims unglued edge {e}"));
            }
        }
        let gluing_ok = gluing.passed();
        report.push(gluing);
        if !gluing_ok {
            return report;
        }

        let boundary_slots = self.slots().filter(|&s| matches!(self.side(s), Side::Boundary(_))).count();
        let mut counts = Check::new("slot-counts", "triangulations have E(S) arcs and F(S) faces");
        counts.observe(self.num_edges() as i64 == sig.complexity(), || {
            format!("{} interior edges, expected {}", self.num_edges(), sig.complexity())
        });
        counts.observe(boundary_slots as u32 == sig.total_boundary_marked(), || {
            format!("{} boundary slots, expected {}", boundary_slots, sig.total_boundary_marked())
        });
        counts.observe(f as i64 == sig.face_count(), || {
            format!("{} triangles, expected {}", f, sig.face_count())
        });
        report.push(counts);

        let mut corners = DisjointSet::new(3 * f);
        let mut labels = Check::new("corner-labels", "marked points are corner orbits");
        for &[s, t] in &self.edge_slots {
            corners.union(s.index(), t.next().index());
            corners.union(s.next().index(), t.index());
            labels.observe(self.corner(s) == self.corner(t.next()) && self.corner(s.next()) == self.corner(t), || {
                format!("glued corners of {s:?} and {t:?} disagree")
            });
        }
        let mut label_of_root = std::collections::HashMap::new();
        for slot in self.slots() {
            let root = corners.find(slot.index());
            let label = self.corner(slot);
            let seen = *label_of_root.entry(root).or_insert(label);
            labels.observe(seen == label, || format!("orbit of {slot:?} carries two labels"));
        }
        let mut distinct: Vec<MarkedPoint> = label_of_root.values().copied().collect();
        distinct.sort();
        distinct.dedup();
        labels.observe(distinct.len() == label_of_root.len(), || "two orbits share a label".into());
        labels.observe(distinct.len() as u32 == sig.total_marked(), || {
            format!("{} marked points, expected {}", distinct.len(), sig.total_marked())
        });
        report.push(labels);

        let mut euler = Check::new("euler-characteristic", "V - E + F = 2 - 2g - b");
        let chi = label_of_root.len() as i64 - (self.num_edges() + boundary_slots) as i64 + f as i64;
        euler.observe(chi == sig.euler_characteristic(), || {
            format!("chi = {chi}, expected {}", sig.euler_characteristic())
        });
        report.push(euler);

        let whole = self.decompose(|_| true);
        let mut connected = Check::new("connected", "surfaces are connected");
        connected.observe(whole.regions.len() == 1, || format!("{} components", whole.regions.len()));
        report.push(connected);

        if let [region] = whole.regions.as_slice() {
            let mut boundary = Check::new("boundary-cycles", "boundary components carry p_i marked points");
            let mut found: Vec<u32> = region.side_cycles.iter().map(|c| c.len() as u32).collect();
            let mut expected = sig.boundary_marked().to_vec();
            found.sort_unstable();
            expected.sort_unstable();
            boundary.observe(found == expected, || format!("boundary cycles {found:?}, expected {expected:?}"));
            boundary.observe(region.interior_marked_count as u32 == sig.interior_marked(), || {
                format!("{} interior marked points, expected {}", region.interior_marked_count, sig.interior_marked())
            });
            report.push(boundary);
        }
        report
    }

    /// Triangles described by their side contents, as a sorted list; two
    /// triangulations with the same arcs must agree on this.
    pub fn triangle_shapes<T: Ord + Copy>(&self, label: impl Fn(Side) -> T) -> Vec<[T; 3]> {
        let mut out: Vec<[T; 3]> = (0..self.num_triangles())
            .map(|t| {
                let sides = [0, 1, 2].map(|k| label(self.side(Slot::new(t, k))));
                // canonical rotation keeps the cyclic order
                let rotations = [sides, [sides[1], sides[2], sides[0]], [sides[2], sides[0], sides[1]]];
                *rotations.iter().min().unwrap()
            })
            .collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(sig: &str) -> CombTriangulation {
        sig.parse::<SurfaceSignature>().unwrap().base_triangulation().unwrap()
    }

    fn chords(t: &CombTriangulation) -> Vec<(u32, u32)> {
        let mut out: Vec<_> = t.edges().map(|e| t.edge_endpoints(e)).map(|(a, b)| (a.0, b.0)).collect();
        out.sort();
        out
    }

    #[test]
    fn pentagon_fan_verifies_and_flips() {
        let t = tri("0,0:5");
        assert!(t.euler_verify().passed());
        assert_eq!(chords(&t), vec![(0, 2), (0, 3)]);
        assert!(t.is_flippable(EdgeId(0)).unwrap());
        assert!(t.is_flippable(EdgeId(1)).unwrap());
        let flipped = t.flip(EdgeId(0)).unwrap();
        assert!(flipped.euler_verify().passed());
        assert_eq!(chords(&flipped), vec![(0, 3), (1, 3)]);
        let back = flipped.flip(EdgeId(0)).unwrap();
        assert_eq!(chords(&back), chords(&t));
        assert!(matches!(t.is_flippable(EdgeId(7)), Err(Error::UnknownEdge(7))));
    }

    #[test]
    fn pentagon_five_cycle_of_flips() {
        let t = tri("0,0:5");
        let mut cur = t.clone();
        for step in 0..5 {
            cur = cur.flip(EdgeId(step % 2)).unwrap();
            assert!(cur.euler_verify().passed());
        }
        assert_eq!(chords(&cur), chords(&t));
    }

    #[test]
    fn deleting_a_gluing_fails_verification() {
        let t = tri("0,0:5");
        let mut sides = t.sides.clone();
        let [s, u] = t.edge_slots[1];
        sides[s.index()] = Side::Boundary(90);
        sides[u.index()] = Side::Boundary(91);
        let broken = CombTriangulation::from_raw_parts(
            t.signature.clone(),
            t.corners.clone(),
            sides,
            t.edge_slots[..1].to_vec(),
        );
        let report = broken.euler_verify();
        assert!(!report.passed());
        assert_eq!(report.check("slot-counts").unwrap().status, crate::report::Status::Fail);
    }

    #[test]
    fn annulus_triangulation_counts() {
        let t = tri("0,0:2+1");
        let report = t.euler_verify();
        assert!(report.passed(), "{report}");
        let labels: std::collections::BTreeSet<_> =
            (0..t.num_triangles()).flat_map(|i| t.triangle_corners(i)).collect();
        assert_eq!(labels.len(), 3);
    }

    #[test]
    fn folded_triangles_in_punctured_surfaces() {
        assert!(tri("0,0:6").folded_triangles().is_empty());
        // base of the punctured triangle: the puncture edge is folded inside
        // the loop {0,0}
        let t = tri("0,1:3");
        let folds = t.folded_triangles();
        assert_eq!(folds.len(), 1);
        let fold = folds[0];
        assert!(matches!(fold.outer, Side::Edge(_)));
        let (x, y) = t.edge_endpoints(fold.doubled);
        assert_ne!(x, y);
        if let Side::Edge(outer) = fold.outer {
            let (u, v) = t.edge_endpoints(outer);
            assert_eq!(u, v);
            // the loop can be flipped, the doubled edge cannot
            assert!(t.is_flippable(outer).unwrap());
        }
        assert!(!t.is_flippable(fold.doubled).unwrap());
    }

    #[test]
    fn regions_in_the_pentagon() {
        let t = tri("0,0:5");
        let regions = t.regions_after_removal(&[EdgeId(0)]);
        let mut sizes: Vec<usize> = regions.iter().map(Region::side_count).collect();
        sizes.sort();
        assert_eq!(sizes, vec![3, 4]);
        assert!(regions.iter().all(Region::is_polygon));

        let regions = t.regions_after_removal(&[EdgeId(0), EdgeId(1)]);
        assert_eq!(regions.len(), 1);
        assert_eq!(regions[0].side_count(), 5);
        assert!(regions[0].is_disk);
        assert_eq!(regions[0].triangles.len(), 3);
    }

    #[test]
    fn region_enclosing_the_puncture() {
        let t = tri("0,1:3");
        let all: Vec<EdgeId> = t.edges().collect();
        let regions = t.regions_after_removal(&all);
        assert_eq!(regions.len(), 1);
        assert_eq!(regions[0].interior_marked_count, 1);
        assert!(regions[0].is_disk);
        assert!(!regions[0].is_polygon());
        assert_eq!(regions[0].side_count(), 3);
    }

    #[test]
    fn region_triangle_counts_sum_to_faces() {
        for sig in ["0,0:7", "0,1:4", "0,0:2+1", "1,1:", "0,2:1", "1,0:2"] {
            let t = tri(sig);
            let n = t.num_edges();
            for mask in 0..(1u32 << n) {
                let regions = t.decompose(|e| mask & (1 << e.0) != 0).regions;
                let total: usize = regions.iter().map(|r| r.triangles.len()).sum();
                assert_eq!(total, t.num_triangles(), "{sig} mask {mask}");
            }
        }
    }

    #[test]
    fn flips_preserve_validity_across_surfaces() {
        for sig in ["0,0:6", "0,1:3", "0,0:2+1", "0,3:", "1,1:", "0,2:1", "0,0:1+1"] {
            let t = tri(sig);
            for e in t.edges() {
                if t.is_flippable(e).unwrap() {
                    let f = t.flip(e).unwrap();
                    let report = f.euler_verify();
                    assert!(report.passed(), "{sig} flip {e}: {report}");
                }
            }
        }
    }
}
