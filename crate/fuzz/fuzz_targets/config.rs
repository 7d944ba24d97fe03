#![no_main]

use libfuzzer_sys::fuzz_target;
use rankwave::io::Config;

fuzz_target!(|data: &str| {
    let Ok(mut cfg) = Config::parse(data) else { return };
    // every accepted key must also be accepted as an override
    let keys: Vec<String> = cfg.keys().map(str::to_string).collect();
    for k in keys {
        let _ = cfg.set_override(&format!("{k}=1"));
        assert!(cfg.contains(&k));
    }
});
