#![no_main]

use hpfcc::hp::{convert_aa_to_hp, HydrophobicityTable};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let table = HydrophobicityTable::default();
    if let Ok(seq) = convert_aa_to_hp(text, &table) {
        assert_eq!(seq.len(), text.chars().filter(|c| !c.is_whitespace()).count());
    }
});
