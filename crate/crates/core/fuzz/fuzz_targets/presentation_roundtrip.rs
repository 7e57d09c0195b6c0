#![no_main]

use libfuzzer_sys::fuzz_target;
use solenoid_core::presentation::{parse, Presentation};

fuzz_target!(|data: &str| {
    let Ok(p) = parse(data) else { return };
    let text = p.render();
    let back: Presentation = parse(&text).expect("rendered presentation must parse");
    assert_eq!(back, p);
    assert_eq!(back.render(), text);
});
