#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use tscc::correctability::Correctability;
use tscc::TsccCode;

fn code() -> &'static TsccCode {
    static CODE: OnceLock<TsccCode> = OnceLock::new();
    CODE.get_or_init(|| TsccCode::new(4).unwrap())
}

fn rank() -> &'static Correctability<'static> {
    static RANK: OnceLock<Correctability<'static>> = OnceLock::new();
    RANK.get_or_init(|| Correctability::new(code()))
}

// Each byte names an erased qubit; small erasures are also checked
// against exhaustive search.
fuzz_target!(|data: &[u8]| {
    let code = code();
    let mut erased: Vec<usize> = data.iter().map(|&b| b as usize % code.n()).collect();
    erased.sort_unstable();
    erased.dedup();
    let c = rank();
    let verdict = c.tscc(&erased).unwrap();
    assert!(verdict.rhs <= verdict.lhs);
    assert_eq!(verdict, c.tscc_direct(&erased).unwrap());
    if erased.len() <= 10 {
        assert_eq!(verdict.correctable, c.brute_force(&erased).unwrap());
    }
});
