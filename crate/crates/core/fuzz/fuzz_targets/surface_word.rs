#![no_main]

use libfuzzer_sys::fuzz_target;
use solenoid_core::bundles::{h0, SurfaceGroupWord};

// first byte picks the genus, the rest is the word text
fuzz_target!(|data: &[u8]| {
    let Some((&g, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    if let Ok(w) = SurfaceGroupWord::parse(u32::from(g % 8), text) {
        let again = SurfaceGroupWord::parse(w.genus(), &w.to_string()).expect("display must reparse");
        assert_eq!(h0(&again), h0(&w));
    }
});
