#![no_main]

use libfuzzer_sys::fuzz_target;
use ordstate::opm::OpmInstance;
use ordstate::regex::{equivalent, parse};

fuzz_target!(|data: &str| {
    if let Ok(r) = parse(data) {
        let again = parse(&r.to_string()).expect("printed regex parses");
        if let Ok(same) = equivalent(&r, &again) {
            assert!(same);
        }
    }
    for name in OpmInstance::NAMES {
        let _ = OpmInstance::by_name(name).unwrap().parse_index(data);
    }
});
