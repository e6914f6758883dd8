#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use tscc::correctability::Correctability;
use tscc::decoder::decode;
use tscc::{ErasurePattern, Mode, Pauli, PauliOperator, TsccCode};

fn code() -> &'static TsccCode {
    static CODE: OnceLock<TsccCode> = OnceLock::new();
    CODE.get_or_init(|| TsccCode::new(8).unwrap())
}

fn rank() -> &'static Correctability<'static> {
    static RANK: OnceLock<Correctability<'static>> = OnceLock::new();
    RANK.get_or_init(|| Correctability::new(code()))
}

// Byte 0 picks the mode; each later byte pair is (qubit, Pauli).
fuzz_target!(|data: &[u8]| {
    let Some((&head, rest)) = data.split_first() else {
        return;
    };
    let code = code();
    let n = code.n();
    let mode = if head & 1 == 0 { Mode::Partial } else { Mode::Maximal };
    let mut erased = Vec::new();
    let mut error = PauliOperator::identity(n);
    for pair in rest.chunks_exact(2) {
        let q = pair[0] as usize % n;
        erased.push(q);
        error.set(q, Pauli::ALL[pair[1] as usize % 4]);
    }
    erased.sort_unstable();
    erased.dedup();
    let pattern = ErasurePattern::new(n, erased.iter().copied(), error).unwrap();
    let out = decode(code, mode, &pattern).unwrap();
    let residual = pattern.error() * &out.estimate;
    assert!(residual.support().iter().all(|q| pattern.is_erased(*q)));
    assert!(code.stabilizers().syndrome(&residual).is_zero());
    if mode == Mode::Maximal {
        let stacks = rank().stacks(&erased).unwrap();
        if stacks.iter().all(|v| v.correctable) {
            assert!(!out.failed);
        }
    }
});
