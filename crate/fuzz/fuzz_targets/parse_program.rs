#![no_main]

use libfuzzer_sys::fuzz_target;
use ordstate::surface::{parse, pretty};

fuzz_target!(|data: &str| {
    if let Ok(e) = parse(data) {
        let printed = pretty(&e);
        let again = parse(&printed).expect("printed program parses");
        assert_eq!(again.erase_spans(), e.erase_spans());
    }
});
