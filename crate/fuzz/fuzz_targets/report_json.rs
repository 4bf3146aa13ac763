#![no_main]

use gravkerr::metrology::MetrologyReport;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(report) = MetrologyReport::from_json(text) {
        let again = MetrologyReport::from_json(&report.to_json()).expect("round trip");
        assert_eq!(again, report);
    }
});
