//! Enumeration and verification of polygonalisation complexes of marked
//! surfaces.

pub mod arcs;
pub mod complex;
pub mod context;
pub mod curvature;
pub mod dot;
pub mod error;
pub mod graph;
pub mod hyperplanes;
pub mod io;
pub mod oracle;
pub mod report;
pub mod surface;
pub mod triangulation;
pub mod verify;

pub use arcs::{ArcId, ArcRecord, ArcRegistry, TransportState};
pub use error::{Error, Result};
pub use report::{Check, Report, Status};
pub use surface::SurfaceSignature;
pub use triangulation::{CombTriangulation, EdgeId, MarkedPoint, Region, Side, Slot};
