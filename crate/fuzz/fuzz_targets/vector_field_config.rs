#![no_main]

use libfuzzer_sys::fuzz_target;
use phiform::config::VectorFieldConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = VectorFieldConfig::from_json(src) {
        let again = VectorFieldConfig::from_json(&cfg.to_json()).expect("serialized config reparses");
        assert_eq!(again, cfg);
        let _ = cfg.field();
    }
});
