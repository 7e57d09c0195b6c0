#![no_main]

use libfuzzer_sys::fuzz_target;
use solenoid_core::presentation::parse_u64_list;

fuzz_target!(|data: &str| {
    if let Ok(xs) = parse_u64_list(data) {
        let joined = xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        assert_eq!(parse_u64_list(&joined).unwrap(), xs);
    }
});
