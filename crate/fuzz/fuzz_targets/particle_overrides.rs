#![no_main]

use gravdit::catalog;
use gravdit::run_config::parse_particle_overrides;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(map) = parse_particle_overrides(&text) {
        let mut cat = catalog();
        cat.apply_overrides(&map).expect("accepted overrides apply cleanly");
        for p in cat.iter() {
            assert!(p.mass.is_finite() && p.mass > 0.0);
        }
    }
});
