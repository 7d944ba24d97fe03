#![no_main]

use libfuzzer_sys::fuzz_target;
use rankwave::io::parse_curve_csv;

fuzz_target!(|data: &str| {
    if let Ok(t) = parse_curve_csv(data) {
        assert_eq!(t.s.len(), t.points.len());
        if let Some(r0) = &t.r0 {
            assert_eq!(r0.len(), t.s.len());
        }
        if let Some(r1) = &t.r1 {
            assert_eq!(r1.len(), t.s.len());
        }
    }
});
