#![no_main]

use libfuzzer_sys::fuzz_target;
use ordstate::checker::check_program;
use ordstate::interp::{run, RunOptions, RunOutcome};
use ordstate::opm::OpmInstance;
use ordstate::surface::parse;

// Accepted programs must never get stuck or break the heap invariants.
fuzz_target!(|data: &str| {
    let Ok(e) = parse(data) else { return };
    let opm = OpmInstance::default();
    let Ok(typed) = check_program(&e, &opm) else { return };
    let r = run(&typed.core, &opm, RunOptions { fuel: 2_000, paranoid: true });
    assert!(!matches!(r.outcome, RunOutcome::Stuck(_)), "{:?}", r.outcome);
    assert!(r.violations.is_empty());
});
