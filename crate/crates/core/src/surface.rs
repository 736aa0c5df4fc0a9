//! Topological type of a marked surface and its complexity invariants.
//!
//! A signature is written `g,s:p1+p2+...+pb`: genus, number of interior
//! marked points, then the number of marked points on each boundary
//! component. A closed surface has an empty boundary part, e.g. `0,3:`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::triangulation::{CombTriangulation, MarkedPoint, Side, Slot};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SurfaceSignature {
    genus: u32,
    interior_marked: u32,
    boundary_marked: Vec<u32>,
}

impl SurfaceSignature {
    pub fn new(genus: u32, interior_marked: u32, boundary_marked: Vec<u32>) -> Result<Self> {
        if boundary_marked.contains(&0) {
            return Err(Error::InvalidSignature(
                "every boundary component needs a marked point".into(),
            ));
        }
        if interior_marked + boundary_marked.iter().sum::<u32>() == 0 {
            return Err(Error::InvalidSignature("no marked points".into()));
        }
        Ok(Self { genus, interior_marked, boundary_marked })
    }

    /// Disk with `n` boundary marked points.
    pub fn polygon(n: u32) -> Self {
        Self::new(0, 0, vec![n]).expect("polygon with n >= 1")
    }

    /// Disk with one interior and `p` boundary marked points.
    pub fn punctured_polygon(p: u32) -> Self {
        Self::new(0, 1, vec![p]).expect("punctured polygon with p >= 1")
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn interior_marked(&self) -> u32 {
        self.interior_marked
    }

    pub fn boundary_marked(&self) -> &[u32] {
        &self.boundary_marked
    }

    pub fn boundary_components(&self) -> u32 {
        self.boundary_marked.len() as u32
    }

    pub fn total_boundary_marked(&self) -> u32 {
        self.boundary_marked.iter().sum()
    }

    pub fn total_marked(&self) -> u32 {
        self.interior_marked + self.total_boundary_marked()
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary_components() as i64
    }

    /// Number of arcs in an ideal triangulation, `6g + 3b + 3s + p - 6`.
    pub fn complexity(&self) -> i64 {
        6 * self.genus as i64
            + 3 * self.boundary_components() as i64
            + 3 * self.interior_marked as i64
            + self.total_boundary_marked() as i64
            - 6
    }

    /// Number of triangles in an ideal triangulation, `4g + 2b + 2s + p - 4`.
    pub fn face_count(&self) -> i64 {
        4 * self.genus as i64
            + 2 * self.boundary_components() as i64
            + 2 * self.interior_marked as i64
            + self.total_boundary_marked() as i64
            - 4
    }

    pub fn is_exceptional(&self) -> bool {
        self.face_count() < 3
    }

    /// Deterministic triangulation realising the signature.
    ///
    /// Built from a single polygon whose sides are read off a word: the first
    /// boundary component (when there is one), then one commutator
    /// `a b a' b'` per handle, one folded pair `c c'` per remaining puncture,
    /// and `d B.. d'` for each further boundary component. The polygon is
    /// fan-triangulated from corner 0. For a disk, corner `k` is boundary
    /// marked point `k` and the base arcs are the chords `{0, k}`.
    pub fn base_triangulation(&self) -> Result<CombTriangulation> {
        let word = self.polygon_word();
        let len = word.len();
        if len < 3 || self.complexity() < 0 {
            return Err(Error::UnsupportedSignature(self.to_string()));
        }
        let faces = len - 2;

        let polygon_side_slot = |i: usize| -> Slot {
            if i == 0 {
                Slot::new(0, 0)
            } else if i == len - 1 {
                Slot::new(len - 3, 2)
            } else {
                Slot::new(i - 1, 1)
            }
        };

        let mut sides = vec![Side::Boundary(usize::MAX); 3 * faces];
        let mut edge_slots: Vec<[Slot; 2]> = Vec::new();

        let pair_count = word.iter().filter_map(|l| l.pair()).max().map_or(0, |m| m + 1);
        let mut first_seen: Vec<Option<Slot>> = vec![None; pair_count];
        let mut pair_edge: Vec<usize> = vec![usize::MAX; pair_count];
        let mut boundary_index = 0;
        // Paired sides become the first edges, in order of first occurrence.
        let mut pending = Vec::new();
        for (i, letter) in word.iter().enumerate() {
            let slot = polygon_side_slot(i);
            match *letter {
                Letter::Boundary => {
                    sides[slot.index()] = Side::Boundary(boundary_index);
                    boundary_index += 1;
                }
                Letter::Glued(pair) => match first_seen[pair] {
                    None => {
                        first_seen[pair] = Some(slot);
                        pair_edge[pair] = pending.len();
                        pending.push(slot);
                    }
                    Some(first) => {
                        let id = pair_edge[pair];
                        edge_slots.push([first, slot]);
                        debug_assert_eq!(edge_slots.len() - 1, id);
                    }
                },
            }
        }
        for m in 2..=len.saturating_sub(2) {
            edge_slots.push([Slot::new(m - 2, 2), Slot::new(m - 1, 0)]);
        }
        for (id, pair) in edge_slots.iter().enumerate() {
            for slot in pair {
                sides[slot.index()] = Side::Edge(crate::triangulation::EdgeId(id));
            }
        }

        // Marked points are the orbits of triangle corners under the gluing.
        let mut orbits = crate::graph::DisjointSet::new(3 * faces);
        for [s, t] in &edge_slots {
            orbits.union(s.index(), t.next().index());
            orbits.union(s.next().index(), t.index());
        }
        let polygon_corner_rep = |c: usize| -> usize {
            if c == 0 {
                0
            } else {
                // corner c (1 <= c <= len-1) is corner 1 of triangle c-1, or
                // corner 2 of triangle len-3 for the last one
                if c <= len - 2 {
                    Slot::new(c - 1, 1).index()
                } else {
                    Slot::new(len - 3, 2).index()
                }
            }
        };
        let mut label_of_root = std::collections::HashMap::new();
        for c in 0..len {
            let root = orbits.find(polygon_corner_rep(c));
            let next = label_of_root.len() as u32;
            label_of_root.entry(root).or_insert(next);
        }
        let mut corners = vec![[MarkedPoint(0); 3]; faces];
        for (t, tri) in corners.iter_mut().enumerate() {
            for (k, corner) in tri.iter_mut().enumerate() {
                let root = orbits.find(Slot::new(t, k).index());
                *corner = MarkedPoint(label_of_root[&root]);
            }
        }

        Ok(CombTriangulation::from_raw_parts(
            Arc::new(self.clone()),
            corners,
            sides,
            edge_slots,
        ))
    }

    fn polygon_word(&self) -> Vec<Letter> {
        let mut word = Vec::new();
        let mut next_pair = 0;
        let mut pair = || {
            next_pair += 1;
            next_pair - 1
        };
        let (first_boundary, punctures_as_folds) = match self.boundary_marked.first() {
            Some(&p) => (Some(p), self.interior_marked),
            None => (None, self.interior_marked.saturating_sub(1)),
        };
        if let Some(p) = first_boundary {
            word.extend(std::iter::repeat_n(Letter::Boundary, p as usize));
        }
        for _ in 0..self.genus {
            let a = pair();
            let b = pair();
            word.extend([Letter::Glued(a), Letter::Glued(b), Letter::Glued(a), Letter::Glued(b)]);
        }
        for _ in 0..punctures_as_folds {
            let c = pair();
            word.extend([Letter::Glued(c), Letter::Glued(c)]);
        }
        for &p in self.boundary_marked.iter().skip(1) {
            let d = pair();
            word.push(Letter::Glued(d));
            word.extend(std::iter::repeat_n(Letter::Boundary, p as usize));
            word.push(Letter::Glued(d));
        }
        word
    }
}

#[derive(Clone, Copy, Debug)]
enum Letter {
    Boundary,
    Glued(usize),
}

impl Letter {
    fn pair(&self) -> Option<usize> {
        match self {
            Letter::Glued(p) => Some(*p),
            Letter::Boundary => None,
        }
    }
}

impl fmt::Display for SurfaceSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}:", self.genus, self.interior_marked)?;
        for (i, p) in self.boundary_marked.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for SurfaceSignature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |position: usize, message: &str| Error::Parse {
            position,
            message: message.to_string(),
        };
        let number = |text: &str, start: usize| -> Result<u32> {
            if text.is_empty() {
                return Err(parse_err(start, "expected a number"));
            }
            if let Some(bad) = text.find(|c: char| !c.is_ascii_digit()) {
                return Err(parse_err(start + bad, "expected a digit"));
            }
            text.parse::<u32>().map_err(|_| parse_err(start, "number out of range"))
        };

        let comma = s.find(',').ok_or_else(|| parse_err(s.len(), "expected ','"))?;
        let colon = s.find(':').ok_or_else(|| parse_err(s.len(), "expected ':'"))?;
        if colon < comma {
            return Err(parse_err(colon, "':' before ','"));
        }
        let genus = number(&s[..comma], 0)?;
        let interior = number(&s[comma + 1..colon], comma + 1)?;
        let rest = &s[colon + 1..];
        let mut boundary = Vec::new();
        if !rest.is_empty() {
            let mut offset = colon + 1;
            for part in rest.split('+') {
                let p = number(part, offset)?;
                if p == 0 {
                    return Err(parse_err(offset, "boundary components need a marked point"));
                }
                boundary.push(p);
                offset += part.len() + 1;
            }
        }
        SurfaceSignature::new(genus, interior, boundary)
            .map_err(|e| parse_err(0, &e.to_string()))
    }
}

impl TryFrom<String> for SurfaceSignature {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        value.parse()
    }
}

impl From<SurfaceSignature> for String {
    fn from(sig: SurfaceSignature) -> Self {
        sig.to_string()
    }
}
