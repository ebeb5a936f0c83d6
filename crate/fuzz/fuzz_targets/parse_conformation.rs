#![no_main]

use hpfcc::energy;
use hpfcc::hp::parse_conformation;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Parsing is linear, but feasibility checks allocate per point.
    if text.len() > 1 << 16 {
        return;
    }
    if let Ok((seq, conf)) = parse_conformation(text) {
        assert!(conf.validate().is_feasible());
        assert!(energy(&conf, &seq).unwrap() <= 0);
        let (seq2, conf2) = parse_conformation(&conf.to_text(&seq)).unwrap();
        assert_eq!((seq2, conf2), (seq, conf));
    }
});
