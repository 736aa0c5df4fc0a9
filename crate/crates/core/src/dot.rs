//! Graphviz export of complexes, crossing graphs and hyperplane carriers.

use std::fmt::Write;

use crate::arcs::ArcId;
use crate::complex::PolComplex;
use crate::error::Result;
use crate::graph::Graph;
use crate::hyperplanes::{hyperplanes, hyperplane_graph_in, ArcGraph};

/// Fill colour for a vertex of the given deficiency.
pub fn deficiency_color(deficiency: i64) -> &'static str {
    match deficiency {
        0 => "red",
        1 => "blue",
        2 => "green",
        _ => "gray",
    }
}

fn label(arcs: &[ArcId]) -> String {
    let parts: Vec<String> = arcs.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn complex_dot(cx: &PolComplex) -> String {
    let mut out = String::from("graph complex {\n  node [style=filled];\n");
    for (i, v) in cx.vertices.iter().enumerate() {
        let _ = writeln!(out, "  v{i} [label=\"{}\", fillcolor={}];", label(&v.arcs), deficiency_color(v.deficiency));
    }
    for e in &cx.edges {
        let (a, b) = (e.upper.min(e.lower), e.upper.max(e.lower));
        let _ = writeln!(out, "  v{a} -- v{b} [label=\"{}\"];", e.arc);
    }
    out.push_str("}\n");
    out
}

pub fn arc_graph_dot(name: &str, g: &ArcGraph) -> String {
    let mut out = format!("graph {name} {{\n");
    for a in &g.arcs {
        let _ = writeln!(out, "  {a};");
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "  {a} -- {b};");
    }
    out.push_str("}\n");
    out
}

/// The carrier of the hyperplane of `arc`, each node an edge of the complex.
pub fn hyperplane_dot(cx: &PolComplex, arc: ArcId) -> Result<String> {
    let set = hyperplanes(cx);
    let g: Graph = hyperplane_graph_in(&set, arc)?;
    let h = set.of_arc(arc).expect("graph built");
    let members = &set.hyperplanes[h].edges;
    let mut out = format!("graph hyperplane_{arc} {{\n");
    for (i, &e) in members.iter().enumerate() {
        let edge = &cx.edges[e];
        let _ = writeln!(out, "  m{i} [label=\"v{}-v{}\"];", edge.upper.min(edge.lower), edge.upper.max(edge.lower));
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "  m{a} -- m{b};");
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{enumerate_full, DEFAULT_VERTEX_CAP};
    use crate::context::Context;

    #[test]
    fn pentagon_colours() {
        let mut ctx = Context::new("0,0:5".parse().unwrap()).unwrap();
        let cx = enumerate_full(&mut ctx, DEFAULT_VERTEX_CAP).unwrap();
        let dot = complex_dot(&cx);
        assert_eq!(dot.matches("fillcolor=red").count(), 5);
        assert_eq!(dot.matches("fillcolor=blue").count(), 5);
        assert_eq!(dot.matches("fillcolor=green").count(), 1);
        assert_eq!(dot.matches(" -- ").count(), 15);
        assert_eq!(dot, complex_dot(&cx));
    }
}
