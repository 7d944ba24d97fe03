#![no_main]

use libfuzzer_sys::fuzz_target;
use rankwave::funcs::parse_func1;

fuzz_target!(|data: &str| {
    if let Ok(f) = parse_func1(data) {
        // evaluation may produce non-finite values but must not panic
        for x in [-1.0, 0.0, 0.5, 2.0] {
            let _ = f.eval(x);
            let _ = f.deriv(x);
        }
    }
});
