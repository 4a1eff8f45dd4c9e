#![no_main]

use libfuzzer_sys::fuzz_target;
use sdcode::catalog::{ingest_str, IngestFormat};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if text.len() > 4096 {
        return;
    }
    let _ = ingest_str(text, IngestFormat::Gm, true);
    let _ = ingest_str(text, IngestFormat::CatalogLine, false);
});
