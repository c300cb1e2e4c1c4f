#![no_main]

use libfuzzer_sys::fuzz_target;
use phiform::maxwell::Angle;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(a) = Angle::parse(src) {
        let _ = a.cos();
        let _ = a.sin();
    }
});
