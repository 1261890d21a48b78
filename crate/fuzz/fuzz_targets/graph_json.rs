//! Fuzzes the geometric-graph JSON decoder: arbitrary input must either fail
//! with a structured error or yield a graph whose invariants hold and whose
//! stretch computation terminates without panicking.

#![no_main]

use libfuzzer_sys::fuzz_target;

use dilation::GeometricGraph;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(graph) = GeometricGraph::from_json_str(text) else { return };

    // Edges are normalized (i < j), sorted, and deduplicated by construction.
    let edges = graph.edges();
    for w in edges.windows(2) {
        assert!(w[0] < w[1], "edges sorted and distinct");
    }
    for &(a, b) in edges {
        assert!(a < b && b < graph.vertex_count());
    }

    // Round-trip through the encoder.
    let reparsed =
        GeometricGraph::from_json_str(&graph.to_json_string()).expect("serialized form parses");
    assert_eq!(graph.edges(), reparsed.edges());
    assert_eq!(graph.vertex_count(), reparsed.vertex_count());

    // Keep the quadratic/cubic work bounded: small graphs get the full
    // stretch computation, which must not panic and never reports < 1.
    if graph.vertex_count() <= 24 {
        if let Ok(report) = graph.stretch_factor() {
            assert!(report.stretch >= 1.0 || report.stretch.is_infinite());
        }
    }
});
