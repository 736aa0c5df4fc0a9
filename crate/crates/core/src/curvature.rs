//! Positive curvature systems found from cubes and from dual fat graphs,
//! orientation recovery from unlabelled combinatorics, and deficiency
//! classification.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::arcs::ArcId;
use crate::complex::{four_cycles, PolComplex};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::report::{Check, Report, Status};
use crate::triangulation::Side;

/// Dual of a polygonalisation: a vertex per region, an edge per arc, with
/// the cyclic order of edge ends around each region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FatGraph {
    pub regions: usize,
    pub edges: Vec<FatEdge>,
    /// Edge indices met along the boundary of each region, in order.
    pub rotation: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FatEdge {
    pub arc: ArcId,
    pub ends: [usize; 2],
}

impl FatEdge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }
}

impl FatGraph {
    /// Embedded cycles of length at least 3, each as a closed walk of
    /// `(region, edge leaving it)`, listed once.
    pub fn embedded_cycles(&self) -> Vec<Vec<(usize, usize)>> {
        let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.regions];
        for (i, e) in self.edges.iter().enumerate() {
            if !e.is_loop() {
                incident[e.ends[0]].push((i, e.ends[1]));
                incident[e.ends[1]].push((i, e.ends[0]));
            }
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for start in 0..self.regions {
            let mut path = vec![];
            let mut on_path = vec![false; self.regions];
            on_path[start] = true;
            self.extend_cycle(start, start, &incident, &mut path, &mut on_path, &mut seen, &mut out);
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_cycle(
        &self,
        start: usize,
        at: usize,
        incident: &[Vec<(usize, usize)>],
        path: &mut Vec<(usize, usize)>,
        on_path: &mut [bool],
        seen: &mut HashSet<Vec<usize>>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        for &(edge, next) in &incident[at] {
            if next == start && path.len() >= 2 && path[0].1 != edge {
                let mut cycle = path.clone();
                cycle.push((at, edge));
                let mut key: Vec<usize> = cycle.iter().map(|&(_, e)| e).collect();
                key.sort_unstable();
                if seen.insert(key) {
                    out.push(cycle);
                }
            } else if next > start && !on_path[next] {
                on_path[next] = true;
                path.push((at, edge));
                self.extend_cycle(start, next, incident, path, on_path, seen, out);
                path.pop();
                on_path[next] = false;
            }
        }
    }
}

/// The dual fat graph of `arcs`, read off a triangulation containing them.
pub fn dual_fat_graph(ctx: &Context, witness: usize, arcs: &[ArcId]) -> Result<FatGraph> {
    let node = ctx.node(witness);
    let tri = node.tri();
    let dec = ctx.decompose(witness, arcs);
    let mut edges = Vec::with_capacity(arcs.len());
    let mut edge_of_arc = HashMap::new();
    for &arc in arcs {
        let e = node.edge_of(arc).ok_or(Error::NoWitness)?;
        let [s, t] = tri.edge_slots(e);
        edge_of_arc.insert(arc, edges.len());
        edges.push(FatEdge { arc, ends: [dec.region_of_slot(s), dec.region_of_slot(t)] });
    }
    let rotation = dec
        .regions
        .iter()
        .map(|r| {
            r.side_cycles
                .iter()
                .flatten()
                .filter_map(|&(_, side)| match side {
                    Side::Edge(f) => edge_of_arc.get(&node.state.identify_edge_arc(f)).copied(),
                    Side::Boundary(_) => None,
                })
                .collect()
        })
        .collect();
    Ok(FatGraph { regions: dec.regions.len(), edges, rotation })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositiveCurvatureSystem {
    /// Arcs of the base vertex.
    pub base: Vec<ArcId>,
    /// The arcs of the edges of the system, sorted.
    pub arcs: Vec<ArcId>,
    /// Regions and the arcs crossed by a curve meeting each arc once; empty
    /// when found from cubes.
    pub cycle_witness: Vec<(usize, ArcId)>,
}

/// Systems read from embedded cycles of the dual fat graph.
pub fn find_pcs_curvewise(ctx: &Context, witness: usize, arcs: &[ArcId]) -> Result<Vec<PositiveCurvatureSystem>> {
    let fat = dual_fat_graph(ctx, witness, arcs)?;
    let mut out: Vec<PositiveCurvatureSystem> = fat
        .embedded_cycles()
        .into_iter()
        .map(|cycle| {
            let cycle_witness: Vec<(usize, ArcId)> = cycle.iter().map(|&(r, e)| (r, fat.edges[e].arc)).collect();
            let mut set: Vec<ArcId> = cycle_witness.iter().map(|&(_, a)| a).collect();
            set.sort_unstable();
            PositiveCurvatureSystem { base: arcs.to_vec(), arcs: set, cycle_witness }
        })
        .collect();
    out.sort_by(|x, y| x.arcs.cmp(&y.arcs));
    Ok(out)
}

/// Whether the vertex `P + X` (symmetric difference) is present, with
/// `None` when the ball is too small to tell.
fn flip_set(cx: &PolComplex, dist: Option<&[usize]>, v: usize, set: &[ArcId]) -> Option<bool> {
    let p = &cx.vertices[v];
    let mut arcs: Vec<ArcId> = p.arcs.iter().copied().filter(|a| !set.contains(a)).collect();
    arcs.extend(set.iter().copied().filter(|&a| !p.contains(a)));
    arcs.sort_unstable();
    if cx.vertex_of(&arcs).is_some() {
        return Some(true);
    }
    match (dist, cx.radius()) {
        (Some(d), Some(r)) if d[v].saturating_add(set.len()) > r => None,
        _ => Some(false),
    }
}

/// Systems at `v` from the cube structure alone: minimal sets of at least
/// three edges at `v` that span no cube while all their proper subsets do.
pub fn find_pcs_cubewise(cx: &PolComplex, v: usize) -> Result<Vec<PositiveCurvatureSystem>> {
    let dist = cx.distances();
    pcs_sets(cx, dist.as_deref(), v).map(|sets| {
        sets.into_iter()
            .map(|arcs| PositiveCurvatureSystem { base: cx.vertices[v].arcs.clone(), arcs, cycle_witness: Vec::new() })
            .collect()
    })
}

fn pcs_sets(cx: &PolComplex, dist: Option<&[usize]>, v: usize) -> Result<Vec<Vec<ArcId>>> {
    if let (Some(d), Some(r)) = (dist, cx.radius()) {
        if d[v] >= r {
            return Err(Error::FrontierVertex(v));
        }
    }
    let mut labels: Vec<ArcId> =
        cx.graph().neighbors(v).iter().map(|&w| cx.edge_between(v, w).expect("adjacent").arc).collect();
    labels.sort_unstable();
    let mut faces: HashSet<Vec<ArcId>> = labels.iter().map(|&a| vec![a]).collect();
    let mut out = Vec::new();
    while !faces.is_empty() {
        let mut ordered: Vec<&Vec<ArcId>> = faces.iter().collect();
        ordered.sort();
        let mut next = HashSet::new();
        for set in ordered {
            let last = *set.last().expect("non-empty");
            for &x in labels.iter().filter(|&&x| x > last) {
                let mut candidate = set.clone();
                candidate.push(x);
                let closed = (0..candidate.len() - 1).all(|skip| {
                    let mut sub = candidate.clone();
                    sub.remove(skip);
                    faces.contains(&sub)
                });
                if !closed {
                    continue;
                }
                match flip_set(cx, dist, v, &candidate) {
                    Some(true) => {
                        next.insert(candidate);
                    }
                    Some(false) if candidate.len() >= 3 => out.push(candidate),
                    Some(false) => {}
                    None => return Err(Error::FrontierVertex(v)),
                }
            }
        }
        faces = next;
    }
    out.sort();
    Ok(out)
}

/// How an orientation was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Evidence {
    /// A system at an endpoint of a parallel edge `steps` squares away.
    Curvature { steps: usize, size: usize },
    /// Neither edge within two squares lies in a system; degrees differ.
    Degree,
}

impl Evidence {
    /// Distance from the edge of the farthest vertex consulted.
    pub fn radius(&self) -> usize {
        match *self {
            Evidence::Curvature { steps, size } => steps + size,
            Evidence::Degree => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Orientation {
    pub upper: usize,
    pub lower: usize,
    pub evidence: Evidence,
}

/// Orientation recovery over one complex, caching systems per vertex.
pub struct OrientationRecovery<'a> {
    cx: &'a PolComplex,
    dist: Option<Vec<usize>>,
    /// For an ordered edge, the ordered edges opposite it in a square.
    parallel: HashMap<(usize, usize), Vec<(usize, usize)>>,
    systems: HashMap<usize, Result<Vec<Vec<ArcId>>>>,
}

impl<'a> OrientationRecovery<'a> {
    pub fn new(cx: &'a PolComplex) -> Self {
        let mut parallel: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
        for [v, u, z, w] in four_cycles(cx.graph()) {
            for (a, b, c, d) in [(v, u, w, z), (v, w, u, z)] {
                parallel.entry((a, b)).or_default().push((c, d));
                parallel.entry((c, d)).or_default().push((a, b));
                parallel.entry((b, a)).or_default().push((d, c));
                parallel.entry((d, c)).or_default().push((b, a));
            }
        }
        Self { cx, dist: cx.distances(), parallel, systems: HashMap::new() }
    }

    fn systems_at(&mut self, v: usize) -> Result<&[Vec<ArcId>]> {
        if !self.systems.contains_key(&v) {
            let found = pcs_sets(self.cx, self.dist.as_deref(), v);
            self.systems.insert(v, found);
        }
        match &self.systems[&v] {
            Ok(sets) => Ok(sets),
            Err(e) => Err(e.clone()),
        }
    }

    /// Size of a system at `v` containing the edge to `w`, if any.
    fn system_through(&mut self, v: usize, w: usize) -> Result<Option<usize>> {
        let arc = self.cx.edge_between(v, w).expect("adjacent").arc;
        Ok(self.systems_at(v)?.iter().find(|s| s.contains(&arc)).map(Vec::len))
    }

    /// Whether the `E + 2` neighbourhood of the edge lies inside the ball.
    pub fn is_certified(&self, edge: usize) -> bool {
        match (&self.dist, self.cx.radius()) {
            (Some(d), Some(r)) => {
                let e = &self.cx.edges[edge];
                let far = d[e.upper].max(d[e.lower]);
                far.saturating_add(self.cx.complexity().max(0) as usize + 2) <= r
            }
            _ => true,
        }
    }

    /// Decides which endpoint of `edge` is the larger polygonalisation
    /// without reading the stored orientation or vertex arc sets.
    pub fn recover(&mut self, edge: usize) -> Result<Orientation> {
        let e = self.cx.edges[edge];
        if !self.is_certified(edge) {
            let d = self.dist.as_ref().expect("balls have distances");
            return Err(Error::FrontierVertex(if d[e.upper] >= d[e.lower] { e.upper } else { e.lower }));
        }
        let (x, y) = (e.upper.min(e.lower), e.upper.max(e.lower));
        let mut layer: Vec<(usize, usize)> = vec![(x, y)];
        let mut visited: HashSet<(usize, usize)> = layer.iter().copied().collect();
        for steps in 0..=2 {
            // votes for x being the larger endpoint, with the system size
            let mut votes: Vec<(bool, usize)> = Vec::new();
            for &(v, u) in &layer {
                if let Some(size) = self.system_through(v, u)? {
                    votes.push((true, size));
                }
                if let Some(size) = self.system_through(u, v)? {
                    votes.push((false, size));
                }
            }
            if let Some(&(x_upper, _)) = votes.first() {
                if votes.iter().any(|&(b, _)| b != x_upper) {
                    return Err(Error::Undecidable(edge));
                }
                let size = votes.iter().map(|&(_, s)| s).min().unwrap_or(0);
                let (upper, lower) = if x_upper { (x, y) } else { (y, x) };
                return Ok(Orientation { upper, lower, evidence: Evidence::Curvature { steps, size } });
            }
            let mut next = Vec::new();
            for pair in &layer {
                for &q in self.parallel.get(pair).map_or(&[][..], Vec::as_slice) {
                    if visited.insert(q) {
                        next.push(q);
                    }
                }
            }
            layer = next;
        }
        let g = self.cx.graph();
        match g.degree(x).cmp(&g.degree(y)) {
            std::cmp::Ordering::Less => Ok(Orientation { upper: x, lower: y, evidence: Evidence::Degree }),
            std::cmp::Ordering::Greater => Ok(Orientation { upper: y, lower: x, evidence: Evidence::Degree }),
            std::cmp::Ordering::Equal => Err(Error::Undecidable(edge)),
        }
    }
}

pub fn recover_orientation(cx: &PolComplex, edge: usize) -> Result<Orientation> {
    OrientationRecovery::new(cx).recover(edge)
}

/// Arc counts of every vertex from recovered orientations: `E` minus the
/// longest ascending chain to a maximal vertex.
pub fn classify_all(cx: &PolComplex) -> Result<Vec<i64>> {
    cx.require_full()?;
    let mut recovery = OrientationRecovery::new(cx);
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); cx.vertices.len()];
    for edge in 0..cx.edges.len() {
        let o = recovery.recover(edge)?;
        up[o.lower].push(o.upper);
    }
    // longest ascending chain, by repeated relaxation in topological order
    let mut indegree = vec![0usize; cx.vertices.len()];
    for ups in &up {
        for &w in ups {
            indegree[w] += 1;
        }
    }
    let mut order: Vec<usize> = (0..cx.vertices.len()).filter(|&v| indegree[v] == 0).collect();
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &w in &up[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                order.push(w);
            }
        }
    }
    if order.len() != cx.vertices.len() {
        return Err(Error::Undecidable(0));
    }
    let mut chain = vec![0i64; cx.vertices.len()];
    for &v in order.iter().rev() {
        chain[v] = up[v].iter().map(|&w| chain[w] + 1).max().unwrap_or(0);
    }
    Ok(chain.into_iter().map(|c| cx.complexity() - c).collect())
}

pub fn classify_deficiency(cx: &PolComplex, v: usize) -> Result<i64> {
    Ok(classify_all(cx)?[v])
}

pub fn is_nonpositively_curved(cx: &PolComplex) -> Result<bool> {
    cx.require_full()?;
    let dist = cx.distances();
    for v in 0..cx.vertices.len() {
        if !pcs_sets(cx, dist.as_deref(), v)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Systems found at one vertex, or why it could not be examined.
#[derive(Clone, Debug, Serialize)]
pub struct VertexCurvature {
    pub vertex: usize,
    pub certified: bool,
    pub systems: Vec<PositiveCurvatureSystem>,
}

/// Curve-based systems at every vertex whose neighbourhood is exact.
pub fn pcs_census(ctx: &Context, cx: &PolComplex) -> Result<Vec<VertexCurvature>> {
    if cx.witness.len() != cx.vertices.len() {
        return Err(Error::NoWitness);
    }
    let dist = cx.distances();
    let mut out = Vec::with_capacity(cx.vertices.len());
    for v in 0..cx.vertices.len() {
        let certified = pcs_sets(cx, dist.as_deref(), v).is_ok();
        let systems =
            if certified { find_pcs_curvewise(ctx, cx.witness[v], &cx.vertices[v].arcs)? } else { Vec::new() };
        out.push(VertexCurvature { vertex: v, certified, systems });
    }
    Ok(out)
}

fn is_disk(cx: &PolComplex) -> bool {
    let s = &cx.signature;
    s.genus() == 0 && s.interior_marked() == 0 && s.boundary_components() == 1
}

/// Criterion equivalence, downwardness, disk flatness, and recovery of
/// orientations and arc counts.
pub fn curvature_report(ctx: &Context, cx: &PolComplex) -> Result<Report> {
    if cx.witness.len() != cx.vertices.len() {
        return Err(Error::NoWitness);
    }
    let mut report = Report::new("curvature", cx.signature.to_string());
    let dist = cx.distances();
    let mut agree = Check::new("cube-and-curve-criteria-agree", "positive curvature via dual fat graph cycles");
    let mut downward = Check::new("systems-point-down", "positive curvature criterion");
    let mut embedded = Check::new("cycle-witness-embedded", "curve meeting each polygon at most once");
    let mut flat = Check::new("disk-complexes-flat", "disk complexes satisfy the link condition");
    let mut found = 0usize;
    for v in 0..cx.vertices.len() {
        let Ok(cube_sets) = pcs_sets(cx, dist.as_deref(), v) else { continue };
        let curve = find_pcs_curvewise(ctx, cx.witness[v], &cx.vertices[v].arcs)?;
        let curve_sets: Vec<Vec<ArcId>> = curve.iter().map(|s| s.arcs.clone()).collect();
        agree.observe(curve_sets == cube_sets, || {
            format!("vertex {v}: cubes give {cube_sets:?}, dual cycles give {curve_sets:?}")
        });
        for s in &curve {
            embedded.observe(s.cycle_witness.len() == s.arcs.len() && s.arcs.len() >= 3, || {
                format!("vertex {v}: witness {:?}", s.cycle_witness)
            });
        }
        for set in &cube_sets {
            found += 1;
            for &a in set {
                downward.observe(cx.removal(v, a).is_some(), || format!("vertex {v}: {a} of {set:?} is not removable"));
            }
        }
        if is_disk(cx) {
            flat.observe(cube_sets.is_empty(), || format!("vertex {v} carries {cube_sets:?}"));
        }
    }
    report.push(agree.vacuous_if_empty());
    report.push(downward.vacuous_if_empty());
    report.push(embedded.vacuous_if_empty());
    report.push(flat.vacuous_if_empty());
    let mut census = Check::new("systems-found", "positive curvature systems");
    census.instances = found;
    if found == 0 {
        census = census.with_status(Status::NoQualifyingInstances);
    }
    report.push(census);

    let mut orient = Check::new("orientation-recovered", "containment from the neighbourhood of an edge");
    let mut recovery = OrientationRecovery::new(cx);
    for edge in 0..cx.edges.len() {
        if !recovery.is_certified(edge) {
            continue;
        }
        let truth = cx.edges[edge];
        match recovery.recover(edge) {
            Ok(o) => orient.observe(o.upper == truth.upper, || {
                format!("edge {}-{}: recovered {} as larger ({:?})", truth.upper, truth.lower, o.upper, o.evidence)
            }),
            Err(err) => orient.observe(false, || format!("edge {}-{}: {err}", truth.upper, truth.lower)),
        }
    }
    report.push(orient.vacuous_if_empty());

    let mut deficiency = Check::new("deficiency-recovered", "arc counts from ascending chains");
    if cx.is_full() {
        match classify_all(cx) {
            Ok(counts) => {
                for (v, p) in cx.vertices.iter().enumerate() {
                    let truth = cx.complexity() - p.deficiency;
                    deficiency.observe(counts[v] == truth, || format!("vertex {v}: recovered {}, actual {truth}", counts[v]));
                }
            }
            Err(err) => deficiency.fail(err.to_string()),
        }
        report.push(deficiency.vacuous_if_empty());
    } else {
        report.push(deficiency.with_status(Status::NoQualifyingInstances));
    }
    Ok(report)
}

/// Largest consulted radius over recovered edges, for edges that were decided.
pub fn orientation_radii(cx: &PolComplex) -> Vec<(usize, Result<usize>)> {
    let mut recovery = OrientationRecovery::new(cx);
    let certified: Vec<usize> = (0..cx.edges.len()).filter(|&e| recovery.is_certified(e)).collect();
    certified.into_iter().map(|e| (e, recovery.recover(e).map(|o| o.evidence.radius()))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{enumerate_ball, enumerate_full, DEFAULT_VERTEX_CAP};

    fn full(sig: &str) -> (Context, PolComplex) {
        let mut ctx = Context::new(sig.parse().unwrap()).unwrap();
        let cx = enumerate_full(&mut ctx, DEFAULT_VERTEX_CAP).unwrap();
        (ctx, cx)
    }

    #[test]
    fn disk_duals_are_trees() {
        let (ctx, cx) = full("0,0:6");
        for v in 0..cx.vertices.len() {
            let fat = dual_fat_graph(&ctx, cx.witness[v], &cx.vertices[v].arcs).unwrap();
            assert_eq!(fat.edges.len(), cx.vertices[v].arcs.len());
            assert_eq!(fat.regions, fat.edges.len() + 1);
            assert!(fat.embedded_cycles().is_empty());
            assert!(find_pcs_cubewise(&cx, v).unwrap().is_empty());
        }
        assert!(is_nonpositively_curved(&cx).unwrap());
    }

    #[test]
    fn annulus_triangulation_has_a_triangle_system() {
        let mut ctx = Context::new("0,0:2+1".parse().unwrap()).unwrap();
        let cx = enumerate_ball(&mut ctx, None, 5, DEFAULT_VERTEX_CAP).unwrap();
        let mut found = false;
        for v in 0..cx.vertices.len() {
            let Ok(cubes) = find_pcs_cubewise(&cx, v) else { continue };
            let curves = find_pcs_curvewise(&ctx, cx.witness[v], &cx.vertices[v].arcs).unwrap();
            let a: Vec<_> = cubes.iter().map(|s| s.arcs.clone()).collect();
            let b: Vec<_> = curves.iter().map(|s| s.arcs.clone()).collect();
            assert_eq!(a, b, "vertex {v}");
            found |= b.iter().any(|s| s.len() == 3);
        }
        assert!(found);
        let report = curvature_report(&ctx, &cx).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn orientation_and_deficiency_on_disks() {
        for sig in ["0,0:5", "0,0:6"] {
            let (ctx, cx) = full(sig);
            let report = curvature_report(&ctx, &cx).unwrap();
            assert!(report.passed(), "{report}");
        }
        let (_, cx) = full("0,0:6");
        let empty = cx.vertex_of(&[]).unwrap();
        assert_eq!(classify_deficiency(&cx, empty).unwrap(), 0);
        let tri = cx.vertices.iter().position(|p| p.arcs.len() == 3).unwrap();
        assert_eq!(classify_deficiency(&cx, tri).unwrap(), 3);
    }

    #[test]
    fn punctured_polygons_recover_orientation() {
        for sig in ["0,1:3", "0,1:4"] {
            let (ctx, cx) = full(sig);
            let report = curvature_report(&ctx, &cx).unwrap();
            assert!(report.passed(), "{sig}: {report}");
        }
    }

    #[test]
    fn ball_rejects_full_only_queries() {
        let mut ctx = Context::new("0,0:2+1".parse().unwrap()).unwrap();
        let cx = enumerate_ball(&mut ctx, None, 2, DEFAULT_VERTEX_CAP).unwrap();
        assert!(matches!(classify_all(&cx), Err(Error::ModeError(_))));
        let far = cx.frontier[0];
        assert!(matches!(find_pcs_cubewise(&cx, far), Err(Error::FrontierVertex(_))));
        let edge = cx.edges.iter().position(|e| e.upper == far || e.lower == far).unwrap();
        assert!(matches!(recover_orientation(&cx, edge), Err(Error::FrontierVertex(_))));
    }
}
