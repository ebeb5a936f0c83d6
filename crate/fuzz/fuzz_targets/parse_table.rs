#![no_main]

use hpfcc::hp::{convert_aa_to_hp, HydrophobicityTable};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(table) = HydrophobicityTable::parse(text) {
        let known: String = ('A'..='Z').filter(|&c| table.classify(c).is_some()).collect();
        if !known.is_empty() {
            assert_eq!(convert_aa_to_hp(&known, &table).unwrap().len(), known.len());
        }
    }
});
