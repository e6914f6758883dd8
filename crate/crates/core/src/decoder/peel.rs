//! Peeling of isolated erasures with TSCC checks.
//!
//! A check is exclusive to an erased qubit when that qubit is the only erased
//! qubit in its support; its outcome then depends on that qubit's error
//! alone. A qubit whose exclusive checks admit exactly one of I, X, Y, Z is
//! corrected and dropped from the erasure. Passes repeat until nothing
//! changes, since every removal can expose new exclusive checks.

use crate::code::TsccCode;
use crate::lattice::Hypergraph;
use crate::pauli::{Pauli, PauliOperator};

use super::syndrome::{w2_pauli, SyndromeSet};

/// Correction found by peeling and the erasures it could not resolve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelOutcome {
    pub estimate: PauliOperator,
    /// Remaining erased qubits, ascending.
    pub remaining: Vec<usize>,
}

/// Qubits in the support of `W2^face`: every corner of the face's triangles.
pub(crate) fn w2_support(code: &TsccCode, face: usize) -> impl Iterator<Item = usize> + '_ {
    code.hg.faces[face]
        .triangles
        .iter()
        .flat_map(|&v| [3 * v, 3 * v + 1, 3 * v + 2])
}

pub fn peel(code: &TsccCode, erased: &[usize], syn: &mut SyndromeSet) -> PeelOutcome {
    let faces = code.num_faces();
    let mut estimate = PauliOperator::identity(code.n());
    let mut w1_count = vec![0u32; faces];
    let mut w2_count = vec![0u32; faces];
    for &q in erased {
        let at = code.hg.faces_at(q);
        w1_count[at[Hypergraph::stack_of(q).idx()]] += 1;
        for f in at {
            w2_count[f] += 1;
        }
    }

    let mut remaining: Vec<usize> = erased.to_vec();
    loop {
        let before = remaining.len();
        remaining.retain(|&q| {
            let at = code.hg.faces_at(q);
            let own = at[Hypergraph::stack_of(q).idx()];
            let consistent = |p: Pauli| {
                (w1_count[own] != 1 || p.x() == syn.w1.get(own))
                    && at
                        .iter()
                        .all(|&f| w2_count[f] != 1 || (!p.commutes(w2_pauli(code, f, q))) == syn.w2.get(f))
            };
            let mut candidates = Pauli::ALL.into_iter().filter(|&p| consistent(p));
            let (Some(p), None) = (candidates.next(), candidates.next()) else {
                return true;
            };
            estimate.apply(q, p);
            syn.apply(code, q, p);
            w1_count[own] -= 1;
            for f in at {
                w2_count[f] -= 1;
            }
            false
        });
        if remaining.len() == before {
            break;
        }
    }
    PeelOutcome { estimate, remaining }
}
