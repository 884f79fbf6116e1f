#![no_main]
use libfuzzer_sys::fuzz_target;
use relaxlab::harness::{Config, Scenario};

fuzz_target!(|data: &str| {
    let Ok(cfg) = Config::parse(data) else {
        return;
    };
    // canonical form must parse back to the same config
    let back = Config::parse(&cfg.canonical()).expect("canonical config reparses");
    assert_eq!(back.hash(), cfg.hash());
    // validation synthesizes fields; keep grids small
    let small = cfg
        .grid
        .n_per_dim
        .checked_pow(cfg.grid.dim.min(3) as u32)
        .is_some_and(|n| n <= 1 << 12);
    if small {
        let _ = Scenario::from_config(&cfg);
    }
});
