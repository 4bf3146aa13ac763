#![no_main]

use gravkerr::fock::{PureState, SingleModeState};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(state) = SingleModeState::from_csv(text) {
        // accepted states survive a round trip
        let again = SingleModeState::from_csv(&state.to_csv()).expect("round trip");
        assert_eq!(again.amplitudes(), state.amplitudes());
        assert!(state.norm_sqr() <= 1.0 + 1e-9);
    }
});
