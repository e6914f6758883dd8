#![no_main]

use libfuzzer_sys::fuzz_target;
use tscc::io::{read_jsonl, write_jsonl};

fuzz_target!(|data: &[u8]| {
    let Ok(points) = read_jsonl(data) else {
        return;
    };
    assert!(points.iter().all(|p| p.failures <= p.trials));
    // Anything accepted survives a write and a second read.
    let mut buf = Vec::new();
    write_jsonl(&mut buf, &points).unwrap();
    assert_eq!(read_jsonl(&buf[..]).unwrap().len(), points.len());
});
