#![no_main]

use libfuzzer_sys::fuzz_target;
use phiform::report::Report;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(r) = Report::from_json(src) {
        let text = r.to_json();
        let again = Report::from_json(&text).expect("serialized report reparses");
        assert_eq!(again.to_json(), text);
        let _ = r.render_text();
        let _ = r.exit_code();
    }
});
