#![no_main]

use libfuzzer_sys::fuzz_target;
use lockdown_core::ethics::Allocation;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(x) = text.parse::<Allocation>() {
        assert!(!x.is_empty());
        let again: Allocation = x.to_string().parse().expect("display form parses");
        assert_eq!(x, again);
    }
});
