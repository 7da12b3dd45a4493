#![no_main]

use libfuzzer_sys::fuzz_target;
use lockdown_core::config::RunConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = RunConfig::parse(text) {
        let again = RunConfig::parse(&cfg.serialize()).expect("serialized config parses");
        assert_eq!(cfg, again);
    }
});
