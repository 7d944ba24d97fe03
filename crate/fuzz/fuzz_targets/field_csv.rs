#![no_main]

use libfuzzer_sys::fuzz_target;
use rankwave::io::parse_field_csv;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    let _ = parse_field_csv(&text);
});
