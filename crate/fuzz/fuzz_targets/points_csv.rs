//! Fuzzes the point-set CSV parser: arbitrary input must either fail with a
//! structured error or produce a set that round-trips through serialization.

#![no_main]

use libfuzzer_sys::fuzz_target;

use dilation::PointSet;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(points) = PointSet::from_csv_str(text) else { return };
    // Accepted input: serialization must round-trip exactly (coordinates are
    // emitted with full f64 precision).
    let csv = points.to_csv_string();
    let reparsed = PointSet::from_csv_str(&csv).expect("serialized form parses");
    assert_eq!(points.len(), reparsed.len());
    for (a, b) in points.points().iter().zip(reparsed.points()) {
        assert_eq!(a.x.to_bits(), b.x.to_bits());
        assert_eq!(a.y.to_bits(), b.y.to_bits());
    }
});
