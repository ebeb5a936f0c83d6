#![no_main]

use hpfcc::bench::{parse_instances, read_fasta};
use hpfcc::hp::HydrophobicityTable;
use libfuzzer_sys::fuzz_target;
use std::collections::HashSet;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = read_fasta(text);
    let table = HydrophobicityTable::default();
    for convert in [None, Some(&table)] {
        if let Ok(instances) = parse_instances(text, convert) {
            let names: HashSet<&str> = instances.iter().map(|i| i.name.as_str()).collect();
            assert_eq!(names.len(), instances.len());
            assert!(instances.iter().all(|i| i.lower_bound.is_none_or(|l| l <= 0)));
            assert!(instances.iter().all(|i| !i.sequence.is_empty()));
        }
    }
});
