#![no_main]

use libfuzzer_sys::fuzz_target;
use sdcode::Permutation;

fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let n = n as usize % 65;
    if let Ok(p) = Permutation::parse_cycles(n, text) {
        let q = Permutation::parse_cycles(n, &p.to_cycle_string()).expect("cycle string must parse");
        assert_eq!(p, q);
    }
});
