#![no_main]

use gravdit::run_config::{parse_config, RunConfig, Scenario};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(layer) = parse_config(text) {
        // Resolution validates every field; it must reject, never panic.
        for scenario in [Scenario::A, Scenario::B] {
            if let Ok(cfg) = RunConfig::resolve(scenario, layer.clone()) {
                assert!(cfg.z < 0.0);
                assert!(cfg.points >= 2);
                if let Some(w) = cfg.window {
                    assert!(w.t_start >= 0.0 && w.t_end > w.t_start);
                }
            }
        }
    }
});
