#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = tscc::io::parse_config(text) {
        assert!(config.validate().is_ok());
        assert!(config.distances.iter().all(|d| d % 4 == 0 && *d > 0));
    }
});
