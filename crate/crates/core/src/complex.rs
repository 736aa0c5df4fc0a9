//! Exact enumeration of the polygonalisation complex, fully or as a ball,
//! with cubes, strata and the structural checks on squares and cubes.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::arcs::ArcId;
use crate::context::Context;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::report::{Check, Report, Status};
use crate::surface::SurfaceSignature;

pub const DEFAULT_VERTEX_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Polygonalisation {
    pub arcs: Vec<ArcId>,
    pub deficiency: i64,
}

impl Polygonalisation {
    pub fn contains(&self, arc: ArcId) -> bool {
        self.arcs.binary_search(&arc).is_ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Engine,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Mode {
    Full,
    Ball { center: usize, radius: usize },
}

/// An edge `upper - lower`, where `upper = lower + {arc}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexEdge {
    pub upper: usize,
    pub lower: usize,
    pub arc: ArcId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    pub bottom: usize,
    pub top: usize,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcEntry {
    pub id: ArcId,
    pub base_coords: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct PolComplex {
    pub signature: SurfaceSignature,
    pub arcs: Vec<ArcEntry>,
    pub vertices: Vec<Polygonalisation>,
    pub edges: Vec<ComplexEdge>,
    pub mode: Mode,
    pub frontier: Vec<usize>,
    pub source: Source,
    /// Context node of a triangulation containing each vertex; empty when
    /// the complex was not built by an engine run.
    pub witness: Vec<usize>,
    index: HashMap<Vec<ArcId>, usize>,
    edge_index: HashMap<(usize, usize), usize>,
    graph: Graph,
}

impl PolComplex {
    /// Builds lookup tables; vertices must already be in canonical order.
    pub fn assemble(
        signature: SurfaceSignature,
        arcs: Vec<ArcEntry>,
        vertices: Vec<Polygonalisation>,
        edges: Vec<ComplexEdge>,
        mode: Mode,
        source: Source,
        witness: Vec<usize>,
    ) -> Self {
        let index = vertices.iter().enumerate().map(|(i, v)| (v.arcs.clone(), i)).collect();
        let edge_index = edges
            .iter()
            .enumerate()
            .map(|(i, e)| ((e.upper.min(e.lower), e.upper.max(e.lower)), i))
            .collect();
        let graph = Graph::from_edges(vertices.len(), edges.iter().map(|e| (e.upper, e.lower)));
        let frontier = match mode {
            Mode::Full => Vec::new(),
            Mode::Ball { center, radius } => graph
                .distances_from(center)
                .iter()
                .enumerate()
                .filter(|(_, d)| **d == Some(radius))
                .map(|(i, _)| i)
                .collect(),
        };
        Self { signature, arcs, vertices, edges, mode, frontier, source, witness, index, edge_index, graph }
    }

    /// Rebuilds lookup tables after fields were edited in place.
    pub fn reassemble(self) -> Self {
        Self::assemble(self.signature, self.arcs, self.vertices, self.edges, self.mode, self.source, self.witness)
    }

    pub fn is_full(&self) -> bool {
        self.mode == Mode::Full
    }

    pub fn require_full(&self) -> Result<()> {
        match self.mode {
            Mode::Full => Ok(()),
            Mode::Ball { radius, .. } => Err(Error::ModeError(format!("ball of radius {radius}"))),
        }
    }

    pub fn complexity(&self) -> i64 {
        self.signature.complexity()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_of(&self, arcs: &[ArcId]) -> Option<usize> {
        self.index.get(arcs).copied()
    }

    pub fn edge_between(&self, v: usize, w: usize) -> Option<&ComplexEdge> {
        self.edge_index.get(&(v.min(w), v.max(w))).map(|&i| &self.edges[i])
    }

    pub fn edge_id(&self, v: usize, w: usize) -> Option<usize> {
        self.edge_index.get(&(v.min(w), v.max(w))).copied()
    }

    /// Edge distance from the centre of a ball; `None` in full mode.
    pub fn distances(&self) -> Option<Vec<usize>> {
        match self.mode {
            Mode::Full => None,
            Mode::Ball { center, .. } => {
                Some(self.graph.distances_from(center).into_iter().map(|d| d.unwrap_or(usize::MAX)).collect())
            }
        }
    }

    pub fn radius(&self) -> Option<usize> {
        match self.mode {
            Mode::Full => None,
            Mode::Ball { radius, .. } => Some(radius),
        }
    }

    /// Vertex counts indexed by deficiency.
    pub fn deficiency_census(&self) -> Vec<usize> {
        let max = self.vertices.iter().map(|v| v.deficiency.max(0) as usize).max().unwrap_or(0);
        let mut out = vec![0; max + 1];
        for v in &self.vertices {
            out[v.deficiency.max(0) as usize] += 1;
        }
        out
    }

    /// Arcs occurring in at least one vertex, sorted.
    pub fn arcs_in_vertices(&self) -> Vec<ArcId> {
        let mut out: Vec<ArcId> = self.vertices.iter().flat_map(|v| v.arcs.iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn has_arc(&self, arc: ArcId) -> bool {
        self.arcs.iter().any(|a| a.id == arc)
    }

    /// The vertex `P - {arc}`, if `arc` is removable from `P`.
    pub fn removal(&self, v: usize, arc: ArcId) -> Option<usize> {
        let p = &self.vertices[v];
        if !p.contains(arc) {
            return None;
        }
        let arcs: Vec<ArcId> = p.arcs.iter().copied().filter(|&a| a != arc).collect();
        self.vertex_of(&arcs)
    }

    /// The vertex `P + {arc}`, if `arc` is addable to `P`.
    pub fn addition(&self, v: usize, arc: ArcId) -> Option<usize> {
        let p = &self.vertices[v];
        if p.contains(arc) {
            return None;
        }
        let mut arcs = p.arcs.clone();
        arcs.push(arc);
        arcs.sort_unstable();
        self.vertex_of(&arcs)
    }
}

/// A context node whose triangulation contains every arc of `arcs`.
pub fn witness_for(ctx: &Context, arcs: &[ArcId]) -> Option<usize> {
    (0..ctx.node_count()).find(|&n| arcs.iter().all(|&a| ctx.node(n).contains(a)))
}

/// The full complex, by BFS from the base triangulation.
pub fn enumerate_full(ctx: &mut Context, cap: usize) -> Result<PolComplex> {
    let start = ctx.node(0).arcs.clone();
    explore(ctx, start, 0, None, cap)
}

/// The exact ball of the given radius around `center` (the base
/// triangulation when `None`).
pub fn enumerate_ball(ctx: &mut Context, center: Option<&[ArcId]>, radius: usize, cap: usize) -> Result<PolComplex> {
    let (arcs, witness) = match center {
        None => (ctx.node(0).arcs.clone(), 0),
        Some(arcs) => {
            let mut arcs = arcs.to_vec();
            arcs.sort_unstable();
            let witness = witness_for(ctx, &arcs).ok_or(Error::NoWitness)?;
            if !ctx.is_polygonalisation(witness, &arcs) {
                return Err(Error::NoWitness);
            }
            (arcs, witness)
        }
    };
    explore(ctx, arcs, witness, Some(radius), cap)
}

fn explore(
    ctx: &mut Context,
    start: Vec<ArcId>,
    start_witness: usize,
    radius: Option<usize>,
    cap: usize,
) -> Result<PolComplex> {
    let e_count = ctx.signature().complexity();
    let mut arcs_of: Vec<Vec<ArcId>> = vec![start.clone()];
    let mut witness = vec![start_witness];
    let mut dist = vec![0usize];
    let mut index: HashMap<Vec<ArcId>, usize> = HashMap::from([(start, 0)]);
    let mut edges: HashMap<(usize, usize), ArcId> = HashMap::new();
    let mut queue = VecDeque::from([0usize]);

    while let Some(v) = queue.pop_front() {
        if radius.is_some_and(|r| dist[v] >= r) {
            continue;
        }
        let current = arcs_of[v].clone();
        for nb in ctx.neighbors(witness[v], &current)? {
            let w = match index.get(&nb.arcs) {
                Some(&w) => w,
                None => {
                    if arcs_of.len() >= cap {
                        return Err(Error::EnumerationDiverged { cap });
                    }
                    let w = arcs_of.len();
                    index.insert(nb.arcs.clone(), w);
                    arcs_of.push(nb.arcs);
                    witness.push(nb.witness);
                    dist.push(dist[v] + 1);
                    queue.push_back(w);
                    w
                }
            };
            let (upper, lower) = if nb.added { (w, v) } else { (v, w) };
            edges.insert((upper, lower), nb.arc);
        }
    }

    let mut order: Vec<usize> = (0..arcs_of.len()).collect();
    order.sort_by(|&a, &b| arcs_of[a].cmp(&arcs_of[b]));
    let mut new_id = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        new_id[old] = new;
    }
    let vertices: Vec<Polygonalisation> = order
        .iter()
        .map(|&old| Polygonalisation { arcs: arcs_of[old].clone(), deficiency: e_count - arcs_of[old].len() as i64 })
        .collect();
    let witness: Vec<usize> = order.iter().map(|&old| witness[old]).collect();
    let mut edge_list: Vec<ComplexEdge> = edges
        .into_iter()
        .map(|((u, l), arc)| ComplexEdge { upper: new_id[u], lower: new_id[l], arc })
        .collect();
    edge_list.sort_by_key(|e| (e.upper.min(e.lower), e.upper.max(e.lower)));

    let arcs = ctx
        .registry()
        .records()
        .iter()
        .map(|r| ArcEntry { id: r.id, base_coords: r.base_coords.clone() })
        .collect();
    let mode = match radius {
        None => Mode::Full,
        Some(radius) => Mode::Ball { center: new_id[0], radius },
    };
    Ok(PolComplex::assemble(ctx.signature().clone(), arcs, vertices, edge_list, mode, Source::Engine, witness))
}

/// All interval cubes of dimension at least two, found from their tops.
pub fn cubes(cx: &PolComplex) -> Vec<Cube> {
    let mut out = Vec::new();
    for (top, p) in cx.vertices.iter().enumerate() {
        let down: Vec<ArcId> = p.arcs.iter().copied().filter(|&a| cx.removal(top, a).is_some()).collect();
        // level k holds the removable k-subsets (as positions into `down`)
        let mut level: HashSet<Vec<usize>> = (0..down.len()).map(|i| vec![i]).collect();
        let mut k = 1;
        while !level.is_empty() {
            let mut next = HashSet::new();
            let mut sorted: Vec<&Vec<usize>> = level.iter().collect();
            sorted.sort();
            for set in sorted {
                for x in set.last().unwrap() + 1..down.len() {
                    let mut candidate = set.clone();
                    candidate.push(x);
                    let closed = (0..candidate.len() - 1).all(|skip| {
                        let sub: Vec<usize> =
                            candidate.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &y)| y).collect();
                        level.contains(&sub)
                    });
                    if !closed {
                        continue;
                    }
                    let removed: Vec<ArcId> = candidate.iter().map(|&i| down[i]).collect();
                    let arcs: Vec<ArcId> = p.arcs.iter().copied().filter(|a| !removed.contains(a)).collect();
                    if let Some(bottom) = cx.vertex_of(&arcs) {
                        out.push(Cube { bottom, top, dimension: k + 1 });
                        next.insert(candidate);
                    }
                }
            }
            level = next;
            k += 1;
        }
    }
    out.sort();
    out
}

/// Cube counts indexed by dimension (entries 0 and 1 are vertices and edges).
pub fn cube_census(cx: &PolComplex) -> Vec<usize> {
    let list = cubes(cx);
    let max = list.iter().map(|c| c.dimension).max().unwrap_or(1);
    let mut out = vec![0; max + 1];
    out[0] = cx.vertices.len();
    out[1] = cx.edges.len();
    for c in list {
        out[c.dimension] += 1;
    }
    out
}

/// The four vertices of a square, as `(bottom, middle1, middle2, top)`.
pub fn square_vertices(cx: &PolComplex, square: &Cube) -> Option<[usize; 4]> {
    let bottom = &cx.vertices[square.bottom];
    let top = &cx.vertices[square.top];
    let extra: Vec<ArcId> = top.arcs.iter().copied().filter(|a| !bottom.contains(*a)).collect();
    if extra.len() != 2 {
        return None;
    }
    let m1 = cx.addition(square.bottom, extra[0])?;
    let m2 = cx.addition(square.bottom, extra[1])?;
    Some([square.bottom, m1, m2, square.top])
}

/// Embedded 4-cycles `v - u - z - w - v`, each listed once with `v` the
/// smallest vertex and `u < w`.
pub fn four_cycles(g: &Graph) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for v in 0..g.len() {
        let nbrs: Vec<usize> = g.neighbors(v).iter().copied().filter(|&x| x > v).collect();
        for (i, &u) in nbrs.iter().enumerate() {
            for &w in &nbrs[i + 1..] {
                for &z in g.neighbors(u) {
                    if z > v && z != w && g.has_edge(z, w) {
                        out.push([v, u, z, w]);
                    }
                }
            }
        }
    }
    out
}

/// Opposite edges of every 4-cycle carry equal labels and parallel
/// orientations, and every 4-cycle spans a square.
pub fn verify_square_lemma(cx: &PolComplex) -> Report {
    let mut report = Report::new("square-lemma", cx.signature.to_string());
    let mut labels = Check::new("square-lemma-labels", "square lemma");
    let mut spans = Check::new("four-cycles-span-squares", "cube characterisation");
    let up = |a: usize, b: usize| cx.edge_between(a, b).map(|e| (e.arc, e.upper == a));
    for [v, u, z, w] in four_cycles(cx.graph()) {
        for (p, q, r, s) in [(v, u, w, z), (v, w, u, z)] {
            // edge p-q is opposite to edge r-s
            let ok = match (up(p, q), up(r, s)) {
                (Some((a1, o1)), Some((a2, o2))) => a1 == a2 && o1 == o2,
                _ => false,
            };
            labels.observe(ok, || format!("4-cycle {v}-{u}-{z}-{w}: edge {p}-{q} is not parallel to {r}-{s}"));
        }
        let quad = [v, u, z, w];
        let bottom = *quad.iter().min_by_key(|&&x| cx.vertices[x].arcs.len()).unwrap();
        let top = *quad.iter().max_by_key(|&&x| cx.vertices[x].arcs.len()).unwrap();
        let b = &cx.vertices[bottom];
        let t = &cx.vertices[top];
        let is_square = t.arcs.len() == b.arcs.len() + 2
            && b.arcs.iter().all(|&a| t.contains(a))
            && quad.iter().all(|&x| {
                let m = &cx.vertices[x];
                b.arcs.iter().all(|&a| m.contains(a)) && m.arcs.iter().all(|&a| t.contains(a))
            });
        spans.observe(is_square, || format!("4-cycle {v}-{u}-{z}-{w} is not an interval"));
    }
    report.push(labels.vacuous_if_empty());
    report.push(spans.vacuous_if_empty());
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub pol: Vec<usize>,
    pub complement: Vec<usize>,
    pub boundary_pol: Vec<usize>,
    pub boundary_complement: Vec<usize>,
}

pub fn stratum(cx: &PolComplex, arc: ArcId) -> Result<Stratum> {
    if !cx.has_arc(arc) {
        return Err(Error::UnknownArc(arc));
    }
    let mut s = Stratum { pol: Vec::new(), complement: Vec::new(), boundary_pol: Vec::new(), boundary_complement: Vec::new() };
    for (v, p) in cx.vertices.iter().enumerate() {
        if p.contains(arc) {
            s.pol.push(v);
            if cx.removal(v, arc).is_some() {
                s.boundary_pol.push(v);
            }
        } else {
            s.complement.push(v);
            if cx.addition(v, arc).is_some() {
                s.boundary_complement.push(v);
            }
        }
    }
    Ok(s)
}

/// Induced subgraph on vertices of deficiency at most one, with the
/// original vertex indices.
pub fn flip_subcomplex(cx: &PolComplex) -> Result<(Vec<usize>, Graph)> {
    cx.require_full()?;
    let members: Vec<usize> = (0..cx.vertices.len()).filter(|&v| cx.vertices[v].deficiency <= 1).collect();
    let g = cx.graph().induced(&members);
    Ok((members, g))
}

/// Vertices below `v` (subsets reachable by removals), including `v`.
fn down_set(cx: &PolComplex, v: usize) -> Vec<usize> {
    walk(cx, v, |x, y| cx.vertices[y].arcs.len() < cx.vertices[x].arcs.len())
}

fn up_set(cx: &PolComplex, v: usize) -> Vec<usize> {
    walk(cx, v, |x, y| cx.vertices[y].arcs.len() > cx.vertices[x].arcs.len())
}

fn walk(cx: &PolComplex, v: usize, step: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    let mut seen = HashSet::from([v]);
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        for &y in cx.graph().neighbors(x) {
            if step(x, y) && seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<usize> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// Unions of vertices below a common vertex, and intersections of vertices
/// above one, are vertices.
pub fn closure_check(cx: &PolComplex) -> Check {
    let mut check = Check::new("union-intersection-closure", "polygon containment");
    if !cx.is_full() {
        return check.with_status(Status::NoQualifyingInstances);
    }
    let mut union_seen = HashSet::new();
    let mut meet_seen = HashSet::new();
    for r in 0..cx.vertices.len() {
        let below = down_set(cx, r);
        for (i, &p) in below.iter().enumerate() {
            for &q in &below[i + 1..] {
                if !union_seen.insert((p, q)) {
                    continue;
                }
                let mut arcs: Vec<ArcId> = cx.vertices[p].arcs.iter().chain(&cx.vertices[q].arcs).copied().collect();
                arcs.sort_unstable();
                arcs.dedup();
                check.observe(cx.vertex_of(&arcs).is_some(), || format!("union of vertices {p} and {q} below {r}"));
            }
        }
        let above = up_set(cx, r);
        for (i, &p) in above.iter().enumerate() {
            for &q in &above[i + 1..] {
                if !meet_seen.insert((p, q)) {
                    continue;
                }
                let arcs: Vec<ArcId> =
                    cx.vertices[p].arcs.iter().copied().filter(|&a| cx.vertices[q].contains(a)).collect();
                check.observe(cx.vertex_of(&arcs).is_some(), || format!("intersection of vertices {p} and {q} above {r}"));
            }
        }
    }
    check.vacuous_if_empty()
}

/// Adjacent triangulations with an arc removable from both but not from
/// their intersection are joined by a four-step detour along which the arc
/// stays removable.
pub fn pentagon_detour_check(cx: &PolComplex) -> Check {
    let mut check = Check::new("pentagon-detour", "pentagon detour lemma");
    if !cx.is_full() {
        return check.with_status(Status::NoQualifyingInstances);
    }
    // flip graph: triangulations joined through deficiency-one vertices
    let mut flips: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for (q, p) in cx.vertices.iter().enumerate() {
        if p.deficiency != 1 {
            continue;
        }
        let tops: Vec<usize> =
            cx.graph().neighbors(q).iter().copied().filter(|&t| cx.vertices[t].deficiency == 0).collect();
        for (i, &t1) in tops.iter().enumerate() {
            for &t2 in &tops[i + 1..] {
                flips.entry(t1).or_default().push((t2, q));
                flips.entry(t2).or_default().push((t1, q));
            }
        }
    }
    let removable = |v: usize, arc: ArcId| cx.removal(v, arc).is_some();
    let mut keys: Vec<usize> = flips.keys().copied().collect();
    keys.sort_unstable();
    for &t in &keys {
        for &(t2, q) in &flips[&t] {
            if t2 < t {
                continue;
            }
            for &arc in &cx.vertices[q].arcs {
                if !(removable(t, arc) && removable(t2, arc)) || removable(q, arc) {
                    continue;
                }
                let found = detour(&flips, t, t2, 4, &mut vec![t], &|v| removable(v, arc));
                check.observe(found, || format!("no detour between triangulations {t} and {t2} for arc {arc}"));
            }
        }
    }
    check.vacuous_if_empty()
}

fn detour(
    flips: &HashMap<usize, Vec<(usize, usize)>>,
    at: usize,
    target: usize,
    steps: usize,
    path: &mut Vec<usize>,
    ok: &dyn Fn(usize) -> bool,
) -> bool {
    if steps == 0 {
        return at == target;
    }
    for &(next, q) in flips.get(&at).map_or(&[][..], Vec::as_slice) {
        if path.contains(&next) && !(next == target && steps == 1) {
            continue;
        }
        if !ok(next) || !ok(q) {
            continue;
        }
        path.push(next);
        let found = detour(flips, next, target, steps - 1, path, ok);
        path.pop();
        if found {
            return true;
        }
    }
    false
}

/// Triangulation vertices have `E` arcs and `F` triangular regions.
pub fn triangulation_vertex_check(cx: &PolComplex, ctx: &Context) -> Check {
    let mut check = Check::new("triangulation-vertices", "triangulations have E(S) arcs and F(S) faces");
    let e = cx.complexity();
    let f = cx.signature.face_count();
    for (v, p) in cx.vertices.iter().enumerate() {
        if p.deficiency != 0 {
            continue;
        }
        let regions = ctx.regions(cx.witness[v], &p.arcs);
        let ok = p.arcs.len() as i64 == e
            && regions.len() as i64 == f
            && regions.iter().all(|r| r.is_disk && r.side_count() == 3);
        check.observe(ok, || format!("vertex {v} has {} arcs and {} regions", p.arcs.len(), regions.len()));
    }
    check.vacuous_if_empty()
}

/// Vertices are polygonalisations and edges differ by their labelled arc.
pub fn edge_label_check(cx: &PolComplex) -> Check {
    let mut check = Check::new("edge-symmetric-difference", "polygonalisation complex");
    for e in &cx.edges {
        let upper = &cx.vertices[e.upper];
        let lower = &cx.vertices[e.lower];
        let ok = upper.contains(e.arc)
            && upper.arcs.len() == lower.arcs.len() + 1
            && upper.arcs.iter().filter(|&&a| a != e.arc).eq(lower.arcs.iter());
        check.observe(ok, || format!("edge {}-{} labelled {}", e.upper, e.lower, e.arc));
    }
    check
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn full(sig: &str) -> (Context, PolComplex) {
        let mut ctx = Context::new(sig.parse().unwrap()).unwrap();
        let cx = enumerate_full(&mut ctx, DEFAULT_VERTEX_CAP).unwrap();
        (ctx, cx)
    }

    #[test]
    fn pentagon_counts() {
        let (_, cx) = full("0,0:5");
        assert_eq!(cx.vertices.len(), 11);
        assert_eq!(cx.edges.len(), 15);
        assert_eq!(cx.deficiency_census(), vec![5, 5, 1]);
        assert_eq!(cube_census(&cx), vec![11, 15, 5]);
        let (_, g) = flip_subcomplex(&cx).unwrap();
        assert_eq!(g.len(), 10);
        assert_eq!(g.edge_count(), 10);
        assert!(g.is_connected());
        assert!(verify_square_lemma(&cx).passed());
    }

    #[test]
    fn hexagon_counts() {
        let (ctx, cx) = full("0,0:6");
        assert_eq!(cube_census(&cx), vec![45, 93, 63, 14]);
        assert!(closure_check(&cx).passed());
        assert!(triangulation_vertex_check(&cx, &ctx).passed());
        assert!(edge_label_check(&cx).passed());
        let report = verify_square_lemma(&cx);
        assert!(report.passed(), "{report}");
        assert_eq!(report.check("square-lemma-labels").unwrap().instances, 2 * 63);
    }

    #[test]
    fn exceptional_shapes() {
        let (_, cx) = full("0,0:4");
        assert_eq!((cx.vertices.len(), cx.edges.len()), (3, 2));
        let (_, cx) = full("0,3:");
        assert_eq!((cx.vertices.len(), cx.edges.len()), (7, 6));
        assert_eq!(cx.graph().degree_sequence(), vec![1, 1, 1, 2, 2, 2, 3]);
        let (_, cx) = full("0,1:2");
        assert_eq!((cx.vertices.len(), cx.edges.len()), (5, 4));
        assert_eq!(cx.graph().degree_sequence(), vec![1, 1, 2, 2, 2]);
        let (_, cx) = full("0,1:1");
        assert_eq!((cx.vertices.len(), cx.edges.len()), (1, 0));
    }

    #[test]
    fn annulus_ball_is_a_path() {
        let mut ctx = Context::new("0,0:1+1".parse().unwrap()).unwrap();
        let cx = enumerate_ball(&mut ctx, None, 3, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(cx.vertices.len(), 7);
        assert_eq!(cx.edges.len(), 6);
        assert_eq!(cx.graph().degree_sequence(), vec![1, 1, 2, 2, 2, 2, 2]);
        assert_eq!(cx.frontier.len(), 2);
        assert!(matches!(flip_subcomplex(&cx), Err(Error::ModeError(_))));
        let cx0 = enumerate_ball(&mut ctx, None, 0, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(cx0.vertices.len(), 1);
    }

    #[test]
    fn enumeration_cap_is_reported() {
        let mut ctx = Context::new("0,0:2+1".parse().unwrap()).unwrap();
        assert!(matches!(enumerate_full(&mut ctx, 50), Err(Error::EnumerationDiverged { cap: 50 })));
    }

    #[test]
    fn pentagon_stratum() {
        let (_, cx) = full("0,0:5");
        let a = cx.vertices.iter().find(|v| v.arcs.len() == 1).unwrap().arcs[0];
        let s = stratum(&cx, a).unwrap();
        assert_eq!(s.pol.len(), 3);
        assert_eq!(s.complement.len(), 8);
        assert!(cx.graph().is_connected_on(&s.boundary_pol));
        assert!(matches!(stratum(&cx, ArcId(77)), Err(Error::UnknownArc(_))));
    }

    #[test]
    fn corrupted_label_is_caught() {
        let (_, mut cx) = full("0,0:6");
        let other = cx.edges[1].arc;
        let idx = cx.edges.iter().position(|e| e.arc != other).unwrap();
        cx.edges[idx].arc = other;
        let cx = cx.reassemble();
        let report = verify_square_lemma(&cx);
        assert!(!report.passed());
        assert!(report.failures().next().unwrap().counterexample.is_some());
    }

    #[test]
    fn detours_exist_on_punctured_polygons() {
        for sig in ["0,1:3", "0,1:4"] {
            let (_, cx) = full(sig);
            let check = pentagon_detour_check(&cx);
            assert!(check.passed(), "{sig}: {check:?}");
        }
    }
}
