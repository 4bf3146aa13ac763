#![no_main]

use gravkerr::fock::{PureState, TwoModeState};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(state) = TwoModeState::from_csv(text) {
        let again = TwoModeState::from_csv(&state.to_csv()).expect("round trip");
        assert_eq!(again.matrix(), state.matrix());
        assert!(state.norm_sqr() <= 1.0 + 1e-9);
    }
});
