#![no_main]

use chebfib::QuadExt;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(q) = s.parse::<QuadExt>() {
        let back: QuadExt = q.to_string().parse().expect("display output parses");
        assert_eq!(back, q);
    }
});
