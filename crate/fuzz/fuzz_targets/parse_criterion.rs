#![no_main]

use libfuzzer_sys::fuzz_target;
use lockdown_core::ethics::{parse_criteria, WelfareCriterion};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(crit) = text.parse::<WelfareCriterion>() {
        let again: WelfareCriterion = crit.to_string().parse().expect("canonical spec parses");
        assert_eq!(crit, again);
    }
    let _ = parse_criteria(text);
});
