#![no_main]

use chebfib::kernels::SumVariant;
use chebfib::verify::Suite;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(suite) = s.parse::<Suite>() {
        assert_eq!(suite.name(), s);
    }
    if let Ok(v) = s.parse::<SumVariant>() {
        assert_eq!(v.name().parse::<SumVariant>().ok(), Some(v));
    }
});
