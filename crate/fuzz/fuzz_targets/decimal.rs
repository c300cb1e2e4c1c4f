#![no_main]

use libfuzzer_sys::fuzz_target;
use phiform::expr::{parse_decimal, Point4, ScalarExpr};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let (Some(q), Ok(f)) = (parse_decimal(src), src.trim().parse::<f64>()) {
        // The exact value must round to the float the same text denotes.
        let v = ScalarExpr::rational(q).eval(&Point4::new(0.0, 0.0, 0.0, 0.0)).expect("constant");
        assert!(!v.is_finite() || (v - f).abs() <= 1e-12 * f.abs().max(f64::MIN_POSITIVE));
    }
});
