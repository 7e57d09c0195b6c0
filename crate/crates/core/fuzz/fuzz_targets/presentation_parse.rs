#![no_main]

use libfuzzer_sys::fuzz_target;
use solenoid_core::presentation;

fuzz_target!(|data: &str| {
    let _ = presentation::parse(data);
});
