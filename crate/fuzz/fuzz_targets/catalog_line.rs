#![no_main]

use libfuzzer_sys::fuzz_target;
use sdcode::catalog::{parse_catalog, CatalogLine};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(line) = CatalogLine::parse(text, 1) {
        let again = CatalogLine::parse(&line.to_string(), 1).expect("display output must parse");
        assert_eq!(again.to_string(), line.to_string());
    }
    let _ = parse_catalog(text);
});
