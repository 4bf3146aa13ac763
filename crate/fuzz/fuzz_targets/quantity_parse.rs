#![no_main]

use gravkerr_cli::units::{parse_number, parse_quantity, Dimension};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = parse_number(text) {
        assert!(x.is_finite());
    }
    for dim in [Dimension::Length, Dimension::Time, Dimension::Power, Dimension::Angle, Dimension::Intensity] {
        if let Ok(x) = parse_quantity(text, dim) {
            assert!(x.is_finite());
        }
    }
});
