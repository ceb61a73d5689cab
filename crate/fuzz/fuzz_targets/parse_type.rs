#![no_main]

use libfuzzer_sys::fuzz_target;
use ordstate::surface::{parse_type, pretty_type};

fuzz_target!(|data: &str| {
    if let Ok(t) = parse_type(data) {
        let printed = pretty_type(&t);
        let again = parse_type(&printed).expect("printed type parses");
        assert_eq!(pretty_type(&again), printed);
    }
});
