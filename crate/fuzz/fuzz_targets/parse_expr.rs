#![no_main]

use libfuzzer_sys::fuzz_target;
use phiform::expr::parse;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(e) = parse(src) {
        // Rendering a normalized expression must parse back to the same value.
        let n = e.normalize();
        let back = parse(&n.to_string()).expect("rendered expressions parse");
        assert_eq!(back.normalize(), n);
    }
});
