//! Brute-force model of the complex of a convex polygon through chords.

use std::collections::HashMap;

use crate::arcs::ArcId;
use crate::complex::{ArcEntry, ComplexEdge, Mode, PolComplex, Polygonalisation, Source};
use crate::error::{Error, Result};
use crate::surface::SurfaceSignature;

pub const DEFAULT_MAX_SIDES: u32 = 10;

/// A diagonal `{i, j}` of the convex `n`-gon with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chord(pub u32, pub u32);

impl Chord {
    pub fn new(i: u32, j: u32) -> Self {
        Chord(i.min(j), i.max(j))
    }
}

/// Whether the endpoints strictly interleave around the cycle.
pub fn chord_cross(c1: Chord, c2: Chord) -> bool {
    let inside = |x: u32| c1.0 < x && x < c1.1;
    let shared = c1.0 == c2.0 || c1.0 == c2.1 || c1.1 == c2.0 || c1.1 == c2.1;
    !shared && inside(c2.0) != inside(c2.1)
}

/// All diagonals of the `n`-gon in lexicographic order.
pub fn chords(n: u32) -> Vec<Chord> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 2..n {
            if !(i == 0 && j == n - 1) {
                out.push(Chord(i, j));
            }
        }
    }
    out
}

/// All pairwise non-crossing chord sets, lexicographic on sorted lists.
pub fn enumerate_dissections(n: u32) -> Vec<Vec<Chord>> {
    let all = chords(n);
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend(&all, 0, &mut current, &mut out);
    out.sort();
    out
}

fn extend(all: &[Chord], from: usize, current: &mut Vec<Chord>, out: &mut Vec<Vec<Chord>>) {
    out.push(current.clone());
    for k in from..all.len() {
        if current.iter().all(|&c| !chord_cross(c, all[k])) {
            current.push(all[k]);
            extend(all, k + 1, current, out);
            current.pop();
        }
    }
}

/// Coordinates of a chord against the fan `{0, j + 2}` from corner 0.
pub fn fan_coordinates(n: u32, chord: Chord) -> Vec<i64> {
    (0..n.saturating_sub(3))
        .map(|j| {
            let fan = Chord(0, j + 2);
            if fan == chord {
                -1
            } else {
                chord_cross(fan, chord) as i64
            }
        })
        .collect()
}

pub fn oracle_complex(n: u32) -> Result<PolComplex> {
    oracle_complex_capped(n, DEFAULT_MAX_SIDES)
}

pub fn oracle_complex_capped(n: u32, max_sides: u32) -> Result<PolComplex> {
    if n < 3 || n > max_sides {
        return Err(Error::UnsupportedSignature(format!("oracle polygon with {n} sides (allowed 3..={max_sides})")));
    }
    let signature = SurfaceSignature::polygon(n);
    let all = chords(n);
    let id_of: HashMap<Chord, ArcId> = all.iter().enumerate().map(|(i, &c)| (c, ArcId(i as u32))).collect();
    let e = signature.complexity();

    let vertices: Vec<Polygonalisation> = enumerate_dissections(n)
        .into_iter()
        .map(|d| {
            let mut arcs: Vec<ArcId> = d.iter().map(|c| id_of[c]).collect();
            arcs.sort_unstable();
            Polygonalisation { deficiency: e - arcs.len() as i64, arcs }
        })
        .collect();
    let index: HashMap<&[ArcId], usize> = vertices.iter().enumerate().map(|(i, v)| (v.arcs.as_slice(), i)).collect();
    let mut edges = Vec::new();
    for (upper, v) in vertices.iter().enumerate() {
        for &arc in &v.arcs {
            let rest: Vec<ArcId> = v.arcs.iter().copied().filter(|&a| a != arc).collect();
            edges.push(ComplexEdge { upper, lower: index[rest.as_slice()], arc });
        }
    }
    edges.sort_by_key(|e| (e.upper.min(e.lower), e.upper.max(e.lower)));
    let arcs = all
        .iter()
        .map(|&c| ArcEntry { id: id_of[&c], base_coords: fan_coordinates(n, c) })
        .collect();
    Ok(PolComplex::assemble(signature, arcs, vertices, edges, Mode::Full, Source::Oracle, Vec::new()))
}

/// Compares two complexes, identifying arcs through their coordinates.
/// Returns the first difference found.
pub fn compare_complexes(left: &PolComplex, right: &PolComplex) -> Option<String> {
    let by_coords: HashMap<&[i64], ArcId> =
        right.arcs.iter().map(|a| (a.base_coords.as_slice(), a.id)).collect();
    let mut map: HashMap<ArcId, ArcId> = HashMap::new();
    for a in &left.arcs {
        match by_coords.get(a.base_coords.as_slice()) {
            Some(&b) => {
                map.insert(a.id, b);
            }
            None => return Some(format!("arc {} with coordinates {:?} has no counterpart", a.id, a.base_coords)),
        }
    }
    if left.vertices.len() != right.vertices.len() || left.edges.len() != right.edges.len() {
        return Some(format!(
            "sizes differ: {} vertices / {} edges against {} / {}",
            left.vertices.len(),
            left.edges.len(),
            right.vertices.len(),
            right.edges.len()
        ));
    }
    let translate = |arcs: &[ArcId]| -> Vec<ArcId> {
        let mut out: Vec<ArcId> = arcs.iter().map(|a| map[a]).collect();
        out.sort_unstable();
        out
    };
    let mut vertex_map = vec![0; left.vertices.len()];
    for (v, p) in left.vertices.iter().enumerate() {
        match right.vertex_of(&translate(&p.arcs)) {
            Some(w) => vertex_map[v] = w,
            None => return Some(format!("vertex {v} {:?} is missing", p.arcs)),
        }
    }
    for e in &left.edges {
        let (u, l) = (vertex_map[e.upper], vertex_map[e.lower]);
        match right.edge_between(u, l) {
            Some(f) if f.upper == u && f.arc == map[&e.arc] => {}
            _ => return Some(format!("edge {}-{} labelled {} has no counterpart", e.upper, e.lower, e.arc)),
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{cube_census, enumerate_full, DEFAULT_VERTEX_CAP};
    use crate::context::Context;

    #[test]
    fn crossing_examples() {
        assert!(chord_cross(Chord::new(0, 2), Chord::new(1, 3)));
        assert!(!chord_cross(Chord::new(0, 2), Chord::new(2, 4)));
        // 1 lies strictly between 0 and 3, 5 does not
        assert!(chord_cross(Chord::new(0, 3), Chord::new(1, 5)));
        assert!(!chord_cross(Chord::new(0, 3), Chord::new(4, 5)));
    }

    #[test]
    fn dissection_counts() {
        let counts: Vec<usize> = (3..=8).map(|n| enumerate_dissections(n).len()).collect();
        assert_eq!(counts, vec![1, 3, 11, 45, 197, 903]);
    }

    #[test]
    fn oracle_cube_counts() {
        assert_eq!(cube_census(&oracle_complex(4).unwrap()), vec![3, 2]);
        assert_eq!(cube_census(&oracle_complex(5).unwrap()), vec![11, 15, 5]);
        assert_eq!(cube_census(&oracle_complex(6).unwrap()), vec![45, 93, 63, 14]);
        assert!(oracle_complex(11).is_err());
        assert!(oracle_complex(2).is_err());
    }

    #[test]
    fn engine_matches_oracle_on_small_polygons() {
        for n in 3..=7 {
            let mut ctx = Context::new(SurfaceSignature::polygon(n)).unwrap();
            let engine = enumerate_full(&mut ctx, DEFAULT_VERTEX_CAP).unwrap();
            let oracle = oracle_complex(n).unwrap();
            assert_eq!(compare_complexes(&engine, &oracle), None, "n = {n}");
            assert_eq!(compare_complexes(&oracle, &engine), None, "n = {n}");
        }
    }
}
