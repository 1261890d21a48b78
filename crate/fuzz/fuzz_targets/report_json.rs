//! Fuzzes the dilation-report JSON decoder: arbitrary input must either fail
//! with a structured error or round-trip through the encoder.

#![no_main]

use libfuzzer_sys::fuzz_target;

use dilation::DilationReport;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(report) = DilationReport::from_json_str(text) else { return };
    let reparsed =
        DilationReport::from_json_str(&report.to_json_string()).expect("serialized form parses");
    assert_eq!(report.stretch.to_bits(), reparsed.stretch.to_bits());
    assert_eq!(report.witness_pair, reparsed.witness_pair);
    assert_eq!(report.witness_path, reparsed.witness_path);
});
