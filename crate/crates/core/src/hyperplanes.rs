//! Hyperplanes as parallel classes of edges, separation, the crossing graph
//! and its comparison with the arc graph.

use std::collections::{HashMap, HashSet};

use crate::arcs::ArcId;
use crate::complex::{cubes, square_vertices, stratum, PolComplex};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::graph::{DisjointSet, Graph};
use crate::report::{Check, Report, Status};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub arc: ArcId,
    /// Indices into the complex's edge list.
    pub edges: Vec<usize>,
    /// Whether every edge of the class carries `arc`.
    pub consistent: bool,
}

/// Parallel classes of edges together with the squares that define them.
#[derive(Clone, Debug)]
pub struct HyperplaneSet {
    pub hyperplanes: Vec<Hyperplane>,
    pub class_of_edge: Vec<usize>,
    /// Each square as two pairs of opposite edges.
    pub squares: Vec<[[usize; 2]; 2]>,
}

impl HyperplaneSet {
    pub fn of_arc(&self, arc: ArcId) -> Option<usize> {
        self.hyperplanes.iter().position(|h| h.arc == arc)
    }
}

pub fn hyperplanes(cx: &PolComplex) -> HyperplaneSet {
    let mut squares = Vec::new();
    for cube in cubes(cx).iter().filter(|c| c.dimension == 2) {
        let Some([b, m1, m2, t]) = square_vertices(cx, cube) else { continue };
        let edge = |x, y| cx.edge_id(x, y);
        if let (Some(e1), Some(e2), Some(e3), Some(e4)) = (edge(b, m1), edge(m2, t), edge(b, m2), edge(m1, t)) {
            squares.push([[e1, e2], [e3, e4]]);
        }
    }
    let mut classes = DisjointSet::new(cx.edges.len());
    for [[e1, e2], [e3, e4]] in &squares {
        classes.union(*e1, *e2);
        classes.union(*e3, *e4);
    }
    let mut id_of_root = HashMap::new();
    let mut hyperplanes: Vec<Hyperplane> = Vec::new();
    let mut class_of_edge = vec![0; cx.edges.len()];
    for (e, edge) in cx.edges.iter().enumerate() {
        let root = classes.find(e);
        let id = *id_of_root.entry(root).or_insert_with(|| {
            hyperplanes.push(Hyperplane { arc: edge.arc, edges: Vec::new(), consistent: true });
            hyperplanes.len() - 1
        });
        let h = &mut hyperplanes[id];
        h.edges.push(e);
        h.consistent &= h.arc == edge.arc;
        class_of_edge[e] = id;
    }
    HyperplaneSet { hyperplanes, class_of_edge, squares }
}

/// The carrier graph of the hyperplane of `arc`: a vertex per edge of the
/// class, joined when the edges are opposite in a square.
pub fn hyperplane_graph(cx: &PolComplex, arc: ArcId) -> Result<Graph> {
    let set = hyperplanes(cx);
    hyperplane_graph_in(&set, arc)
}

pub fn hyperplane_graph_in(set: &HyperplaneSet, arc: ArcId) -> Result<Graph> {
    let h = set.of_arc(arc).ok_or(Error::UnknownArc(arc))?;
    let members = &set.hyperplanes[h].edges;
    let local: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut g = Graph::new(members.len());
    for pair in set.squares.iter().flatten() {
        if let (Some(&x), Some(&y)) = (local.get(&pair[0]), local.get(&pair[1])) {
            g.add_edge(x, y);
        }
    }
    g.finish();
    Ok(g)
}

/// Components of the complex with the edges of one hyperplane deleted.
fn cut_components(cx: &PolComplex, set: &HyperplaneSet, h: usize) -> (Vec<Option<usize>>, usize) {
    let removed: HashSet<usize> = set.hyperplanes[h].edges.iter().copied().collect();
    cx.graph()
        .components_filtered(|_| true, |v, w| cx.edge_id(v, w).is_some_and(|e| !removed.contains(&e)))
}

/// Hyperplane structure: bijection with arcs, label consistency,
/// embeddedness, separation into the stratum and its complement, and
/// connectivity of strata and their boundaries.
pub fn hyperplane_report(cx: &PolComplex) -> Result<Report> {
    cx.require_full()?;
    let mut report = Report::new("sageev", cx.signature.to_string());
    let set = hyperplanes(cx);

    let mut bijection = Check::new("arc-hyperplane-bijection", "hyperplanes are indexed by arcs");
    let arcs = cx.arcs_in_vertices();
    let mut labels: Vec<ArcId> = set.hyperplanes.iter().map(|h| h.arc).collect();
    labels.sort_unstable();
    bijection.observe(labels == arcs, || format!("{} hyperplanes for {} arcs", labels.len(), arcs.len()));
    report.push(bijection);

    let mut consistent = Check::new("constant-arc-labels", "square lemma");
    for (i, h) in set.hyperplanes.iter().enumerate() {
        consistent.observe(h.consistent, || format!("hyperplane {i} mixes arc labels"));
    }
    report.push(consistent.vacuous_if_empty());

    let mut embedded = Check::new("embedded-hyperplanes", "hyperplanes are embedded");
    for [[e1, _], [e3, _]] in &set.squares {
        let ok = set.class_of_edge[*e1] != set.class_of_edge[*e3];
        embedded.observe(ok, || format!("square through edges {e1} and {e3} meets one hyperplane twice"));
    }
    report.push(embedded.vacuous_if_empty());

    let mut separation = Check::new("separates-into-stratum", "hyperplanes are two-sided and separate");
    let mut strata = Check::new("strata-connected", "strata are connected");
    let mut boundaries = Check::new("stratum-boundaries-connected", "boundary strata are connected");
    for (h, hyp) in set.hyperplanes.iter().enumerate() {
        let s = stratum(cx, hyp.arc)?;
        let (label, count) = cut_components(cx, &set, h);
        let side_ok = count == 2
            && !s.pol.is_empty()
            && !s.complement.is_empty()
            && s.pol.iter().all(|&v| label[v] == label[s.pol[0]])
            && s.complement.iter().all(|&v| label[v] == label[s.complement[0]])
            && label[s.pol[0]] != label[s.complement[0]];
        separation.observe(side_ok, || format!("deleting hyperplane of {} leaves {count} components", hyp.arc));
        let g = cx.graph();
        strata.observe(g.is_connected_on(&s.pol) && g.is_connected_on(&s.complement), || {
            format!("stratum of {} or its complement is disconnected", hyp.arc)
        });
        boundaries.observe(g.is_connected_on(&s.boundary_pol) && g.is_connected_on(&s.boundary_complement), || {
            format!("boundary stratum of {} is disconnected", hyp.arc)
        });
    }
    report.push(separation.vacuous_if_empty());
    report.push(strata.vacuous_if_empty());
    report.push(boundaries.vacuous_if_empty());
    report.push(separation_census(cx, &set)?);
    Ok(report)
}

/// Separation of one hyperplane, as its own report.
pub fn separation_check(cx: &PolComplex, arc: ArcId) -> Result<Report> {
    cx.require_full()?;
    let set = hyperplanes(cx);
    let h = set.of_arc(arc).ok_or(Error::UnknownArc(arc))?;
    let s = stratum(cx, arc)?;
    let (label, count) = cut_components(cx, &set, h);
    let mut report = Report::new("separation", format!("{} / {}", cx.signature, arc));
    let mut check = Check::new("separates-into-stratum", "hyperplanes are two-sided and separate");
    check.observe(count == 2, || format!("{count} components"));
    for &v in &s.pol {
        check.observe(label[v] == label[s.pol[0]], || format!("vertex {v} split from its stratum"));
    }
    for &v in &s.complement {
        let ok = label[v] == label[s.complement[0]] && s.pol.first().is_none_or(|&p| label[p] != label[v]);
        check.observe(ok, || format!("vertex {v} split from the complement"));
    }
    report.push(check);
    Ok(report)
}

/// For every vertex pair the separating hyperplanes are those of the arcs
/// in the symmetric difference, at most `2E` of them.
pub fn separation_census(cx: &PolComplex, set: &HyperplaneSet) -> Result<Check> {
    cx.require_full()?;
    let mut check = Check::new("separating-set-is-symmetric-difference", "at most 2E(S) separating hyperplanes");
    let labels: Vec<Vec<Option<usize>>> = (0..set.hyperplanes.len()).map(|h| cut_components(cx, set, h).0).collect();
    let bound = 2 * cx.complexity().max(0) as usize;
    let n = cx.vertices.len();
    for p in 0..n {
        for q in p + 1..n {
            let mut separating: Vec<ArcId> =
                (0..set.hyperplanes.len()).filter(|&h| labels[h][p] != labels[h][q]).map(|h| set.hyperplanes[h].arc).collect();
            separating.sort_unstable();
            let (a, b) = (&cx.vertices[p], &cx.vertices[q]);
            let mut diff: Vec<ArcId> = a
                .arcs
                .iter()
                .filter(|&&x| !b.contains(x))
                .chain(b.arcs.iter().filter(|&&x| !a.contains(x)))
                .copied()
                .collect();
            diff.sort_unstable();
            check.observe(separating == diff && separating.len() <= bound, || {
                format!("vertices {p}, {q}: separated by {separating:?}, symmetric difference {diff:?}")
            });
        }
    }
    Ok(check.vacuous_if_empty())
}

/// Whether the four quadrants of the two hyperplanes are all non-empty.
pub fn crossing_quadrant(cx: &PolComplex, a: ArcId, b: ArcId) -> Result<bool> {
    cx.require_full()?;
    let mut seen = [false; 4];
    for v in &cx.vertices {
        seen[2 * v.contains(a) as usize + v.contains(b) as usize] = true;
    }
    Ok(seen.iter().all(|&x| x))
}

/// Distinct, disjoint and not forming a folded triangle.
pub fn crossing_combinatorial(ctx: &mut Context, a: ArcId, b: ArcId) -> Result<bool> {
    Ok(a != b && ctx.intersection_number(a, b)? == 0 && !ctx.is_folded_pair(a, b)?)
}

/// A graph whose vertices are arcs (standing for their hyperplanes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcGraph {
    pub arcs: Vec<ArcId>,
    pub graph: Graph,
}

impl ArcGraph {
    fn build(arcs: Vec<ArcId>, mut adjacent: impl FnMut(ArcId, ArcId) -> Result<bool>) -> Result<Self> {
        let mut graph = Graph::new(arcs.len());
        for i in 0..arcs.len() {
            for j in i + 1..arcs.len() {
                if adjacent(arcs[i], arcs[j])? {
                    graph.add_edge(i, j);
                }
            }
        }
        graph.finish();
        Ok(Self { arcs, graph })
    }

    pub fn index(&self, arc: ArcId) -> Option<usize> {
        self.arcs.binary_search(&arc).ok()
    }

    pub fn has_edge(&self, a: ArcId, b: ArcId) -> bool {
        match (self.index(a), self.index(b)) {
            (Some(i), Some(j)) => self.graph.has_edge(i, j),
            _ => false,
        }
    }

    pub fn edges(&self) -> Vec<(ArcId, ArcId)> {
        self.graph.edges().into_iter().map(|(i, j)| (self.arcs[i], self.arcs[j])).collect()
    }

    pub fn distance(&self, a: ArcId, b: ArcId) -> Option<usize> {
        let (i, j) = (self.index(a)?, self.index(b)?);
        self.graph.distances_from(i)[j]
    }
}

/// Crossing graph from the quadrant definition.
pub fn quadrant_crossing_graph(cx: &PolComplex) -> Result<ArcGraph> {
    cx.require_full()?;
    ArcGraph::build(cx.arcs_in_vertices(), |a, b| crossing_quadrant(cx, a, b))
}

/// Crossing graph from disjointness and folded pairs.
pub fn crossing_graph(ctx: &mut Context, arcs: Vec<ArcId>) -> Result<ArcGraph> {
    ArcGraph::build(arcs, |a, b| crossing_combinatorial(ctx, a, b))
}

/// Arcs joined when disjoint.
pub fn arc_graph(ctx: &mut Context, arcs: Vec<ArcId>) -> Result<ArcGraph> {
    ArcGraph::build(arcs, |a, b| Ok(ctx.intersection_number(a, b)? == 0))
}

pub fn link(cr: &ArcGraph, arc: ArcId) -> Vec<ArcId> {
    cr.index(arc).map_or_else(Vec::new, |i| cr.graph.neighbors(i).iter().map(|&j| cr.arcs[j]).collect())
}

/// Whether `link(a)` is a proper subset of `link(b)`.
pub fn folded_via_links(cr: &ArcGraph, a: ArcId, b: ArcId) -> bool {
    let la = link(cr, a);
    let lb = link(cr, b);
    la.len() < lb.len() && la.iter().all(|x| lb.contains(x))
}

/// The crossing graph with edges added between hyperplanes whose links are
/// strictly nested.
pub fn reconstruct_arc_graph(cr: &ArcGraph) -> ArcGraph {
    let mut graph = cr.graph.clone();
    for (i, &a) in cr.arcs.iter().enumerate() {
        for (j, &b) in cr.arcs.iter().enumerate() {
            if i != j && folded_via_links(cr, a, b) {
                graph.add_edge(i, j);
            }
        }
    }
    graph.finish();
    ArcGraph { arcs: cr.arcs.clone(), graph }
}

/// Whether some geodesic from `a` to `b` avoids consecutive folded pairs.
pub fn fold_free_geodesic_exists(
    graph: &ArcGraph,
    folded: &dyn Fn(ArcId, ArcId) -> bool,
    a: ArcId,
    b: ArcId,
) -> bool {
    let (Some(s), Some(t)) = (graph.index(a), graph.index(b)) else { return false };
    let from_s = graph.graph.distances_from(s);
    let from_t = graph.graph.distances_from(t);
    let Some(d) = from_s[t] else { return false };
    let on_geodesic = |v: usize| matches!((from_s[v], from_t[v]), (Some(x), Some(y)) if x + y == d);
    let mut reach = vec![false; graph.arcs.len()];
    reach[s] = true;
    let mut layer = vec![s];
    for _ in 0..d {
        let mut next = Vec::new();
        for &v in &layer {
            for &w in graph.graph.neighbors(v) {
                if !reach[w]
                    && on_geodesic(w)
                    && from_s[w] == from_s[v].map(|x| x + 1)
                    && !folded(graph.arcs[v], graph.arcs[w])
                {
                    reach[w] = true;
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    reach[t]
}

/// All folded pairs among `arcs`, as `(outer, doubled)`.
pub fn folded_pairs(ctx: &mut Context, arcs: &[ArcId]) -> Result<HashSet<(ArcId, ArcId)>> {
    let mut out = HashSet::new();
    for (i, &a) in arcs.iter().enumerate() {
        for &b in &arcs[i + 1..] {
            if let Some(pair) = ctx.folded_roles(a, b)? {
                out.insert(pair);
            }
        }
    }
    Ok(out)
}

/// The three characterisations of crossing hyperplanes agree.
pub fn crossing_equivalence(ctx: &mut Context, cx: &PolComplex) -> Result<Check> {
    cx.require_full()?;
    let mut check = Check::new("crossing-characterisations-agree", "equivalent characterisations of crossing");
    let arcs = cx.arcs_in_vertices();
    for (i, &a) in arcs.iter().enumerate() {
        for &b in &arcs[i + 1..] {
            let quadrant = crossing_quadrant(cx, a, b)?;
            let combinatorial = crossing_combinatorial(ctx, a, b)?;
            let removable = ctx.simultaneously_removable(a, b)?;
            check.observe(quadrant == combinatorial && combinatorial == removable, || {
                format!("{a}, {b}: quadrants {quadrant}, disjoint-unfolded {combinatorial}, co-removable {removable}")
            });
        }
    }
    Ok(check.vacuous_if_empty())
}

/// Distances in the crossing graph against the arc graph.
pub fn distance_comparison(ctx: &mut Context, cx: &PolComplex) -> Result<Report> {
    cx.require_full()?;
    let mut report = Report::new("distances", cx.signature.to_string());
    let arcs = cx.arcs_in_vertices();
    let cr = quadrant_crossing_graph(cx)?;
    let ag = arc_graph(ctx, arcs.clone())?;
    let folded = folded_pairs(ctx, &arcs)?;
    let is_folded = |a: ArcId, b: ArcId| folded.contains(&(a, b)) || folded.contains(&(b, a));

    let mut qi = Check::new("quasi-isometry-bounds", "crossing graph is (1,2)-quasi-isometric to the arc graph");
    let mut near = Check::new("adjacent-arcs-bound", "disjoint arcs have hyperplanes at distance at most 2");
    let mut second = Check::new("distance-two-bound", "arcs at distance 2 have hyperplanes at distance at most 4");
    let mut exempt = Check::new("disconnected-pairs-exempt", "distances are finite");
    let mut geodesic = Check::new("fold-free-geodesics", "geodesics without folds");
    let dist_a: Vec<Vec<Option<usize>>> = (0..arcs.len()).map(|i| ag.graph.distances_from(i)).collect();
    let dist_c: Vec<Vec<Option<usize>>> = (0..arcs.len()).map(|i| cr.graph.distances_from(i)).collect();
    for i in 0..arcs.len() {
        for j in i + 1..arcs.len() {
            let (Some(da), Some(dc)) = (dist_a[i][j], dist_c[i][j]) else {
                exempt.instances += 1;
                continue;
            };
            let (a, b) = (arcs[i], arcs[j]);
            qi.observe(da <= dc && dc <= da + 2, || format!("{a}, {b}: arc distance {da}, crossing distance {dc}"));
            if da == 1 {
                near.observe(dc <= 2, || format!("{a}, {b}: crossing distance {dc}"));
            }
            if da == 2 {
                second.observe(dc <= 4, || format!("{a}, {b}: crossing distance {dc}"));
            }
            if da >= 3 {
                geodesic.observe(fold_free_geodesic_exists(&ag, &is_folded, a, b), || {
                    format!("{a}, {b}: every geodesic has a fold")
                });
            }
        }
    }
    report.push(qi.vacuous_if_empty());
    report.push(near.vacuous_if_empty());
    report.push(second.vacuous_if_empty());
    if exempt.instances == 0 {
        exempt = exempt.with_status(Status::NoQualifyingInstances);
    }
    report.push(exempt);
    report.push(geodesic.vacuous_if_empty());
    Ok(report)
}

/// Nested links characterise folded pairs, and adding nested-link edges to
/// the crossing graph recovers the arc graph.
pub fn fold_report(ctx: &mut Context, cx: &PolComplex) -> Result<Report> {
    cx.require_full()?;
    let mut report = Report::new("folds", cx.signature.to_string());
    let arcs = cx.arcs_in_vertices();
    let cr = quadrant_crossing_graph(cx)?;
    let folded = folded_pairs(ctx, &arcs)?;
    let mut links = Check::new("nested-links-are-folds", "nested links characterise folded pairs");
    for &a in &arcs {
        for &b in &arcs {
            if a == b {
                continue;
            }
            let nested = folded_via_links(&cr, a, b);
            let is_fold = folded.contains(&(a, b));
            links.observe(nested == is_fold, || format!("{a}, {b}: nested links {nested}, folded (outer, doubled) {is_fold}"));
        }
    }
    report.push(links.vacuous_if_empty());

    let mut rebuild = Check::new("arc-graph-reconstruction", "the arc graph is recovered from the crossing graph");
    let rebuilt = reconstruct_arc_graph(&cr);
    let ag = arc_graph(ctx, arcs)?;
    for (a, b) in rebuilt.edges() {
        rebuild.observe(ag.has_edge(a, b), || format!("added edge {a}-{b} joins intersecting arcs"));
    }
    for (a, b) in ag.edges() {
        rebuild.observe(rebuilt.has_edge(a, b), || format!("disjoint arcs {a}, {b} not joined"));
    }
    report.push(rebuild.vacuous_if_empty());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{enumerate_full, DEFAULT_VERTEX_CAP};

    fn full(sig: &str) -> (Context, PolComplex) {
        let mut ctx = Context::new(sig.parse().unwrap()).unwrap();
        let cx = enumerate_full(&mut ctx, DEFAULT_VERTEX_CAP).unwrap();
        (ctx, cx)
    }

    fn chord(ctx: &Context, x: u32, y: u32) -> ArcId {
        ctx.registry().records().iter().find(|r| (r.endpoints.0 .0, r.endpoints.1 .0) == (x, y)).unwrap().id
    }

    #[test]
    fn pentagon_hyperplanes() {
        let (ctx, cx) = full("0,0:5");
        let set = hyperplanes(&cx);
        assert_eq!(set.hyperplanes.len(), 5);
        let a = chord(&ctx, 0, 2);
        let g = hyperplane_graph(&cx, a).unwrap();
        assert_eq!((g.len(), g.edge_count()), (3, 2));
        let sep = separation_check(&cx, a).unwrap();
        assert!(sep.passed(), "{sep}");
        assert!(hyperplane_report(&cx).unwrap().passed());
        let cr = quadrant_crossing_graph(&cx).unwrap();
        assert_eq!(cr.graph.degree_sequence(), vec![2; 5]);
        assert!(cr.graph.is_connected());
        assert!(crossing_quadrant(&cx, a, chord(&ctx, 2, 4)).unwrap());
        assert!(!crossing_quadrant(&cx, a, chord(&ctx, 1, 3)).unwrap());
        let mut l = link(&cr, a);
        l.sort();
        let mut expected = vec![chord(&ctx, 2, 4), chord(&ctx, 0, 3)];
        expected.sort();
        assert_eq!(l, expected);
    }

    #[test]
    fn hexagon_carriers() {
        let (ctx, cx) = full("0,0:6");
        assert_eq!(hyperplanes(&cx).hyperplanes.len(), 9);
        let short = hyperplane_graph(&cx, chord(&ctx, 0, 2)).unwrap();
        assert_eq!((short.len(), short.edge_count()), (11, 15));
        let long = hyperplane_graph(&cx, chord(&ctx, 0, 3)).unwrap();
        assert_eq!((long.len(), long.edge_count()), (9, 12));
        assert_eq!(long.degree_sequence(), vec![2, 2, 2, 2, 3, 3, 3, 3, 4]);
        let cr = quadrant_crossing_graph(&cx).unwrap();
        let degree = |a| cr.graph.degree(cr.index(a).unwrap());
        assert_eq!(degree(chord(&ctx, 0, 2)), 5);
        assert_eq!(degree(chord(&ctx, 0, 3)), 4);
        assert!(matches!(hyperplane_graph(&cx, ArcId(50)), Err(Error::UnknownArc(_))));
    }

    #[test]
    fn square_path_has_isolated_hyperplanes() {
        let (mut ctx, cx) = full("0,0:4");
        let cr = quadrant_crossing_graph(&cx).unwrap();
        assert_eq!((cr.arcs.len(), cr.graph.edge_count()), (2, 0));
        let ag = arc_graph(&mut ctx, cr.arcs.clone()).unwrap();
        assert_eq!(ag.graph.edge_count(), 0);
        for h in &hyperplanes(&cx).hyperplanes {
            assert_eq!(h.edges.len(), 1);
        }
    }

    #[test]
    fn punctured_triangle_links() {
        let (mut ctx, cx) = full("0,1:3");
        let report = fold_report(&mut ctx, &cx).unwrap();
        assert!(report.passed(), "{report}");
        let eq = crossing_equivalence(&mut ctx, &cx).unwrap();
        assert!(eq.passed(), "{eq:?}");
        let d = distance_comparison(&mut ctx, &cx).unwrap();
        assert!(d.passed(), "{d}");
    }

    #[test]
    fn ball_refuses_distances() {
        let mut ctx = Context::new("0,0:1+1".parse().unwrap()).unwrap();
        let cx = crate::complex::enumerate_ball(&mut ctx, None, 2, DEFAULT_VERTEX_CAP).unwrap();
        assert!(matches!(distance_comparison(&mut ctx, &cx), Err(Error::ModeError(_))));
    }
}
