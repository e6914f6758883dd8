//! Check outcomes for a given error.
//!
//! Every qubit touches few checks: the W1 check of its own face, the W2
//! checks of the three faces at its triangle, and on its stack the color-code
//! checks of those same three faces. Extraction therefore accumulates
//! per-qubit contributions, and decoding stages reuse the same update to
//! keep the syndrome in step with the running correction.

use crate::code::{CheckType, TsccCode};
use crate::gf2::BitVec;
use crate::lattice::{Color, Hypergraph};
use crate::pauli::{Pauli, PauliOperator};
use crate::schedule::Mode;

/// Syndrome bits indexed by face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndromeSet {
    pub mode: Mode,
    pub w1: BitVec,
    pub w2: BitVec,
    /// Z-type color-code checks per stack; they flag X components.
    pub cc_x: [BitVec; 3],
    /// X-type color-code checks per stack; they flag Z components. Only
    /// maintained in maximal mode.
    pub cc_z: [BitVec; 3],
}

/// The Pauli that `W2^face` applies to qubit `q`, which must lie on one of
/// the face's triangles.
#[inline]
pub fn w2_pauli(code: &TsccCode, face: usize, q: usize) -> Pauli {
    if Hypergraph::stack_of(q) == code.hg.faces[face].color.prev() {
        Pauli::X
    } else {
        Pauli::Y
    }
}

impl SyndromeSet {
    pub fn zeros(mode: Mode, faces: usize) -> Self {
        let z = || BitVec::zeros(faces);
        Self {
            mode,
            w1: z(),
            w2: z(),
            cc_x: [z(), z(), z()],
            cc_z: [z(), z(), z()],
        }
    }

    /// Flips every check that anticommutes with `p` acting on qubit `q`.
    #[inline]
    pub fn apply(&mut self, code: &TsccCode, q: usize, p: Pauli) {
        if p == Pauli::I {
            return;
        }
        let stack = Hypergraph::stack_of(q).idx();
        let faces = code.hg.faces_at(q);
        if p.x() {
            self.w1.flip(faces[stack]);
        }
        for f in faces {
            if !p.commutes(w2_pauli(code, f, q)) {
                self.w2.flip(f);
            }
            if p.x() {
                self.cc_x[stack].flip(f);
            }
            if p.z() && self.mode == Mode::Maximal {
                self.cc_z[stack].flip(f);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.w1.is_zero()
            && self.w2.is_zero()
            && self.cc_x.iter().all(BitVec::is_zero)
            && self.cc_z.iter().all(BitVec::is_zero)
    }

    /// Y-type color-code outcome, the XOR of the X and Z types.
    pub fn cc_y(&self, stack: Color, face: usize) -> bool {
        self.cc_x[stack.idx()].get(face) ^ self.cc_z[stack.idx()].get(face)
    }

    /// W2 outcome rebuilt from the three stacks through the hypercycle
    /// identity: X on the stack before the face color, Y on the other two.
    pub fn w2_from_stacks(&self, code: &TsccCode, face: usize) -> bool {
        let x_stack = code.hg.faces[face].color.prev();
        let x_check = self.cc_z[x_stack.idx()].get(face);
        x_check ^ self.cc_y(x_stack.next(), face) ^ self.cc_y(x_stack.prev(), face)
    }
}

/// Outcomes of every check the mode measures, for the given error.
///
/// In maximal mode the W2 bits are assembled from the stack outcomes.
pub fn extract_syndrome(code: &TsccCode, mode: Mode, error: &PauliOperator) -> SyndromeSet {
    let mut syn = SyndromeSet::zeros(mode, code.num_faces());
    for q in error.support() {
        syn.apply(code, q, error.get(q));
    }
    if mode == Mode::Maximal {
        let w2 = (0..code.num_faces()).filter(|&f| syn.w2_from_stacks(code, f));
        syn.w2 = BitVec::from_indices(code.num_faces(), w2);
    }
    syn
}

/// Reference extraction by explicit symplectic commutation with every check
/// operator. Slow; used to cross-check [`extract_syndrome`].
pub fn extract_syndrome_dense(code: &TsccCode, mode: Mode, error: &PauliOperator) -> SyndromeSet {
    let faces = code.num_faces();
    let bits = |ops: &[PauliOperator]| BitVec::from_indices(faces, (0..faces).filter(|&f| !ops[f].commutes(error)));
    let mut syn = SyndromeSet::zeros(mode, faces);
    syn.w1 = bits(&code.w1);
    syn.w2 = bits(&code.w2);
    for c in Color::ALL {
        syn.cc_x[c.idx()] = bits(code.cc_stabs(c, CheckType::Z));
        if mode == Mode::Maximal {
            syn.cc_z[c.idx()] = bits(code.cc_stabs(c, CheckType::X));
        }
    }
    syn
}
