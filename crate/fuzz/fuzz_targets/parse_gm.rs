#![no_main]

use libfuzzer_sys::fuzz_target;
use sdcode::LinearCode;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for dep in [false, true] {
        if let Ok(c) = LinearCode::parse_gm(text, dep) {
            // round trip through the writer
            let back = LinearCode::parse_gm(&c.to_gm(), false).expect("writer output must parse");
            assert_eq!(back.rows(), c.rows());
        }
    }
    let _ = LinearCode::parse_gm_many(text, true);
});
