//! Canonical JSON documents for complexes, with digests, atomic writes and
//! an on-disk enumeration cache.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arcs::ArcId;
use crate::complex::{cubes, enumerate_ball, enumerate_full, ArcEntry, ComplexEdge, Mode, PolComplex, Polygonalisation, Source};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::surface::SurfaceSignature;

pub const FORMAT_VERSION: &str = "polycx/1";
pub const CACHE_ENV: &str = "POLYCX_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".polycx-cache";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: usize,
    pub arcs: Vec<ArcId>,
    pub deficiency: i64,
}

/// Which endpoint of an edge is the larger polygonalisation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeOrientation {
    VContainsW,
    WContainsV,
}

/// An edge with `v < w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub v: usize,
    pub w: usize,
    pub arc: ArcId,
    pub orientation: EdgeOrientation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeEntry {
    pub bottom: usize,
    pub top: usize,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub format_version: String,
    pub signature: String,
    pub arcs: Vec<ArcEntry>,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cubes: Option<Vec<CubeEntry>>,
    pub mode: Mode,
    pub frontier: Vec<usize>,
    pub source: Source,
    pub content_digest: String,
}

impl ComplexDocument {
    pub fn from_complex(cx: &PolComplex, include_cubes: bool) -> Self {
        let vertices = cx
            .vertices
            .iter()
            .enumerate()
            .map(|(id, p)| VertexEntry { id, arcs: p.arcs.clone(), deficiency: p.deficiency })
            .collect();
        let mut edges: Vec<EdgeEntry> = cx
            .edges
            .iter()
            .map(|e| {
                let (v, w) = (e.upper.min(e.lower), e.upper.max(e.lower));
                let orientation = if e.upper == v { EdgeOrientation::VContainsW } else { EdgeOrientation::WContainsV };
                EdgeEntry { v, w, arc: e.arc, orientation }
            })
            .collect();
        edges.sort_by_key(|e| (e.v, e.w));
        let cubes = include_cubes.then(|| {
            cubes(cx).into_iter().map(|c| CubeEntry { bottom: c.bottom, top: c.top, dimension: c.dimension }).collect()
        });
        let mut doc = Self {
            format_version: FORMAT_VERSION.to_string(),
            signature: cx.signature.to_string(),
            arcs: cx.arcs.clone(),
            vertices,
            edges,
            cubes,
            mode: cx.mode,
            frontier: cx.frontier.clone(),
            source: cx.source,
            content_digest: String::new(),
        };
        doc.content_digest = doc.compute_digest();
        doc
    }

    /// SHA-256 of the canonical JSON with the digest field blanked.
    pub fn compute_digest(&self) -> String {
        let mut blank = self.clone();
        blank.content_digest.clear();
        let bytes = serde_json::to_vec(&blank).expect("documents serialise");
        hex::encode(Sha256::digest(&bytes))
    }

    /// Rebuilds the complex after checking the document's structure.
    pub fn to_complex(&self) -> Result<PolComplex> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Document(format!("unsupported format version {}", self.format_version)));
        }
        let signature: SurfaceSignature = self.signature.parse()?;
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            if v.id != i {
                return Err(Error::Document(format!("vertex ids are not dense at {i}")));
            }
            if v.arcs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Document(format!("vertex {i} arcs are not sorted")));
            }
            vertices.push(Polygonalisation { arcs: v.arcs.clone(), deficiency: v.deficiency });
        }
        if vertices.windows(2).any(|w| w[0].arcs >= w[1].arcs) {
            return Err(Error::Document("vertices are not in canonical order".into()));
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            if e.v >= e.w || e.w >= vertices.len() {
                return Err(Error::Document(format!("edge {}-{} is malformed", e.v, e.w)));
            }
            let (upper, lower) = match e.orientation {
                EdgeOrientation::VContainsW => (e.v, e.w),
                EdgeOrientation::WContainsV => (e.w, e.v),
            };
            edges.push(ComplexEdge { upper, lower, arc: e.arc });
        }
        if let Mode::Ball { center, .. } = self.mode {
            if center >= vertices.len() {
                return Err(Error::Document(format!("ball centre {center} out of range")));
            }
        }
        Ok(PolComplex::assemble(signature, self.arcs.clone(), vertices, edges, self.mode, self.source, Vec::new()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses a document and verifies its digest.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text)?;
        let actual = doc.compute_digest();
        if actual != doc.content_digest {
            return Err(Error::Document(format!("digest mismatch: recorded {}, computed {actual}", doc.content_digest)));
        }
        Ok(doc)
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error.to_string()))?;
    Ok(())
}

pub fn write_document(path: &Path, doc: &ComplexDocument) -> Result<()> {
    write_atomic(path, &doc.to_json()?)
}

pub fn read_document(path: &Path) -> Result<ComplexDocument> {
    ComplexDocument::from_json(&fs::read_to_string(path)?)
}

/// Enumeration request: the full complex or the ball around the base
/// triangulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Request {
    Full,
    Ball { radius: usize },
}

pub fn enumerate(ctx: &mut Context, request: Request, cap: usize) -> Result<PolComplex> {
    match request {
        Request::Full => enumerate_full(ctx, cap),
        Request::Ball { radius } => enumerate_ball(ctx, None, radius, cap),
    }
}

pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV).map_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR), PathBuf::from)
}

pub fn cache_key(signature: &SurfaceSignature, request: Request) -> String {
    let sig: String =
        signature.to_string().chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    let mode = match request {
        Request::Full => "full".to_string(),
        Request::Ball { radius } => format!("ball{radius}"),
    };
    let version = FORMAT_VERSION.replace('/', "");
    format!("{sig}-{mode}-{version}.json")
}

/// Loads the document from `dir` or enumerates and stores it.
pub fn cached_document(dir: &Path, signature: &SurfaceSignature, request: Request, cap: usize) -> Result<ComplexDocument> {
    let path = dir.join(cache_key(signature, request));
    if let Ok(doc) = read_document(&path) {
        if doc.signature == signature.to_string() {
            return Ok(doc);
        }
    }
    let mut ctx = Context::new(signature.clone())?;
    let cx = enumerate(&mut ctx, request, cap)?;
    let doc = ComplexDocument::from_complex(&cx, false);
    write_document(&path, &doc)?;
    Ok(doc)
}

/// Re-expresses `doc` in the arc ids of `ctx`, matching arcs by their
/// coordinates, and attaches witnesses where the engine knows one.
/// Returns the complex and the vertices with no witness.
pub fn attach(ctx: &Context, doc: &ComplexDocument) -> Result<(PolComplex, Vec<usize>)> {
    let mut cx = doc.to_complex()?;
    let mut map = std::collections::HashMap::new();
    for a in &cx.arcs {
        let id = ctx
            .registry()
            .lookup(&a.base_coords)
            .ok_or_else(|| Error::Document(format!("arc {} with coordinates {:?} is unknown", a.id, a.base_coords)))?;
        map.insert(a.id, id);
    }
    let translate = |a: &ArcId| map.get(a).copied().ok_or(Error::UnknownArc(*a));
    for v in &mut cx.vertices {
        v.arcs = v.arcs.iter().map(translate).collect::<Result<_>>()?;
        v.arcs.sort_unstable();
    }
    for e in &mut cx.edges {
        e.arc = translate(&e.arc)?;
    }
    for a in &mut cx.arcs {
        a.id = map[&a.id];
    }
    cx.arcs.sort_by_key(|a| a.id);
    // renumber vertices into canonical order for the new ids
    let mut order: Vec<usize> = (0..cx.vertices.len()).collect();
    order.sort_by(|&a, &b| cx.vertices[a].arcs.cmp(&cx.vertices[b].arcs));
    let mut new_id = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        new_id[old] = new;
    }
    cx.vertices = order.iter().map(|&old| cx.vertices[old].clone()).collect();
    for e in &mut cx.edges {
        e.upper = new_id[e.upper];
        e.lower = new_id[e.lower];
    }
    cx.edges.sort_by_key(|e| (e.upper.min(e.lower), e.upper.max(e.lower)));
    if let Mode::Ball { center, radius } = cx.mode {
        cx.mode = Mode::Ball { center: new_id[center], radius };
    }
    let mut missing = Vec::new();
    cx.witness = cx
        .vertices
        .iter()
        .enumerate()
        .map(|(v, p)| {
            crate::complex::witness_for(ctx, &p.arcs).unwrap_or_else(|| {
                missing.push(v);
                0
            })
        })
        .collect();
    Ok((cx.reassemble(), missing))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::DEFAULT_VERTEX_CAP;

    fn doc(sig: &str) -> ComplexDocument {
        let mut ctx = Context::new(sig.parse().unwrap()).unwrap();
        ComplexDocument::from_complex(&enumerate_full(&mut ctx, DEFAULT_VERTEX_CAP).unwrap(), true)
    }

    #[test]
    fn round_trip() {
        let d = doc("0,0:6");
        let back = ComplexDocument::from_json(&d.to_json().unwrap()).unwrap();
        assert_eq!(back, d);
        let cx = back.to_complex().unwrap();
        assert_eq!(ComplexDocument::from_complex(&cx, true), d);
        assert_eq!(d.vertices.len(), 45);
    }

    #[test]
    fn deterministic_digest() {
        assert_eq!(doc("0,1:3").content_digest, doc("0,1:3").content_digest);
        assert_ne!(doc("0,1:3").content_digest, doc("0,0:6").content_digest);
    }

    #[test]
    fn tampering_is_detected() {
        let mut d = doc("0,0:5");
        d.edges[0].arc = ArcId(4);
        assert!(matches!(ComplexDocument::from_json(&d.to_json().unwrap()), Err(Error::Document(_))));
    }

    #[test]
    fn atomic_write_and_cache() {
        let dir = tempfile::tempdir().unwrap();
        let sig: SurfaceSignature = "0,0:5".parse().unwrap();
        let first = cached_document(dir.path(), &sig, Request::Full, DEFAULT_VERTEX_CAP).unwrap();
        let path = dir.path().join(cache_key(&sig, Request::Full));
        assert!(path.exists());
        let second = cached_document(dir.path(), &sig, Request::Full, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(first, second);
        assert_eq!(read_document(&path).unwrap(), first);
    }

    #[test]
    fn attach_maps_arcs_by_coordinates() {
        let mut ctx = Context::new("0,0:6".parse().unwrap()).unwrap();
        let cx = enumerate_full(&mut ctx, DEFAULT_VERTEX_CAP).unwrap();
        let oracle = crate::oracle::oracle_complex(6).unwrap();
        let (attached, missing) = attach(&ctx, &ComplexDocument::from_complex(&oracle, false)).unwrap();
        assert!(missing.is_empty());
        assert_eq!(attached.vertices, cx.vertices);
        assert_eq!(attached.edges, cx.edges);
    }
}
