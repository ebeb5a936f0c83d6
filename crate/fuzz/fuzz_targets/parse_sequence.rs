#![no_main]

use hpfcc::hp::parse_sequence;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(seq) = parse_sequence(text) {
        let printed = seq.to_string();
        assert_eq!(parse_sequence(&printed).unwrap(), seq);
        assert_eq!(seq.h_indices().len(), printed.matches('H').count());
    }
});
