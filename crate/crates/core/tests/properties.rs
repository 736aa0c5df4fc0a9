//! Randomised invariants of signatures, flips and arc transport.

use polycx_core::arcs::{ArcRegistry, TransportState};
use polycx_core::context::Context;
use polycx_core::surface::SurfaceSignature;
use polycx_core::triangulation::EdgeId;
use proptest::prelude::*;

const SURFACES: &[&str] = &["0,0:7", "0,1:4", "0,0:2+1", "1,1:", "0,2:1", "1,0:1", "0,4:"];

/// A signature with at least one triangle, kept small.
fn signature() -> impl Strategy<Value = SurfaceSignature> {
    (0u32..2, 0u32..3, prop::collection::vec(1u32..4, 0..3)).prop_filter_map("no triangulation", |(g, s, b)| {
        let sig = SurfaceSignature::new(g, s, b).ok()?;
        (sig.face_count() >= 1 && sig.complexity() >= 1).then_some(sig)
    })
}

/// Flips the flippable edge chosen by each index in turn.
fn walk(sig: &SurfaceSignature, choices: &[usize]) -> (TransportState, ArcRegistry) {
    let mut registry = ArcRegistry::new();
    let mut state = TransportState::base(sig.base_triangulation().unwrap(), &mut registry);
    for &c in choices {
        let flippable: Vec<EdgeId> =
            state.node().edges().filter(|&e| state.node().is_flippable(e).unwrap()).collect();
        if flippable.is_empty() {
            break;
        }
        state = state.transport_flip(flippable[c % flippable.len()], &mut registry).unwrap();
    }
    (state, registry)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn signature_round_trips(sig in signature()) {
        let text = sig.to_string();
        let back: SurfaceSignature = text.parse().unwrap();
        prop_assert_eq!(&back, &sig);
        let b = sig.boundary_components() as i64;
        let p = sig.total_boundary_marked() as i64;
        let (g, s) = (sig.genus() as i64, sig.interior_marked() as i64);
        prop_assert_eq!(sig.complexity(), 6 * g + 3 * b + 3 * s + p - 6);
        prop_assert_eq!(sig.face_count(), 4 * g + 2 * b + 2 * s + p - 4);
        prop_assert_eq!(sig.is_exceptional(), sig.face_count() < 3);
    }

    #[test]
    fn base_triangulation_is_valid(sig in signature()) {
        let tri = sig.base_triangulation().unwrap();
        prop_assert_eq!(tri.num_edges() as i64, sig.complexity());
        prop_assert_eq!(tri.num_triangles() as i64, sig.face_count());
        let report = tri.euler_verify();
        prop_assert!(report.passed(), "{}", report);
    }

    #[test]
    fn random_flips_keep_structure(which in 0..SURFACES.len(), choices in prop::collection::vec(0usize..16, 0..25)) {
        let sig: SurfaceSignature = SURFACES[which].parse().unwrap();
        let (state, _) = walk(&sig, &choices);
        let report = state.node().euler_verify();
        prop_assert!(report.passed(), "{}", report);
        let mut arcs = state.arcs().to_vec();
        arcs.sort_unstable();
        arcs.dedup();
        prop_assert_eq!(arcs.len(), state.node().num_edges());
    }

    #[test]
    fn flips_are_involutions(which in 0..SURFACES.len(), choices in prop::collection::vec(0usize..16, 0..20), pick in 0usize..16) {
        let sig: SurfaceSignature = SURFACES[which].parse().unwrap();
        let (state, mut registry) = walk(&sig, &choices);
        let flippable: Vec<EdgeId> = state.node().edges().filter(|&e| state.node().is_flippable(e).unwrap()).collect();
        prop_assume!(!flippable.is_empty());
        let e = flippable[pick % flippable.len()];
        let twice = state.transport_flip(e, &mut registry).unwrap().transport_flip(e, &mut registry).unwrap();
        prop_assert_eq!(twice.matrix(), state.matrix());
        prop_assert_eq!(twice.arcs(), state.arcs());
    }

    #[test]
    fn coordinates_identify_arcs(which in 0..SURFACES.len(), choices in prop::collection::vec(0usize..16, 0..20)) {
        let sig: SurfaceSignature = SURFACES[which].parse().unwrap();
        let (state, registry) = walk(&sig, &choices);
        for e in state.node().edges() {
            let id = state.identify_edge_arc(e);
            prop_assert_eq!(registry.lookup(&state.column(e)), Some(id));
            let record = registry.record(id).unwrap();
            prop_assert_eq!(&record.base_coords, &state.column(e));
            let (a, b) = state.node().edge_endpoints(e);
            prop_assert_eq!(record.endpoints, (a, b));
        }
    }
}

#[test]
fn intersection_numbers_are_symmetric_on_a_ball() {
    let mut ctx = Context::new("0,1:4".parse().unwrap()).unwrap();
    let cx = polycx_core::complex::enumerate_full(&mut ctx, 10_000).unwrap();
    let arcs = cx.arcs_in_vertices();
    for &a in &arcs {
        for &b in &arcs {
            assert_eq!(ctx.intersection_via(a, b).unwrap(), ctx.intersection_via(b, a).unwrap(), "{a} {b}");
        }
    }
}
