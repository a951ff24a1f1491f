#![no_main]

use libfuzzer_sys::fuzz_target;

// Small enough that every accepted config compiles quickly.
const STATE_CAP: usize = 2_000;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(mut spec) = attnplan::pursuit::load_spec(text) else { return };
    spec.state_cap = spec.state_cap.min(STATE_CAP);
    if let Ok(world) = attnplan::pursuit::compile(&spec) {
        let m = &world.mdp;
        for s in 0..m.num_states() {
            for a in 0..m.num_actions() {
                let total: f64 = m.transition(s, a).map(|(_, p)| p).sum();
                assert!((total - 1.0).abs() < 1e-9);
            }
        }
    }
});
