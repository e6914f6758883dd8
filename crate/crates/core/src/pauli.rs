//! Pauli operators in the binary symplectic picture, with phases dropped.

use std::fmt;
use std::ops::{Mul, MulAssign};

use serde::{Deserialize, Serialize};

use crate::gf2::{BitMatrix, BitVec, RowSpace};

/// Single-qubit Pauli, up to phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    #[inline]
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    #[inline]
    pub fn x(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    #[inline]
    pub fn z(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    #[inline]
    pub fn commutes(self, other: Pauli) -> bool {
        (self.x() & other.z()) == (self.z() & other.x())
    }
}

/// Single-qubit product up to phase.
impl Mul for Pauli {
    type Output = Pauli;

    #[inline]
    fn mul(self, other: Pauli) -> Pauli {
        Pauli::from_bits(self.x() ^ other.x(), self.z() ^ other.z())
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// An n-qubit Pauli operator stored as separate X and Z bit vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVec,
    z: BitVec,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    pub fn from_parts(x: BitVec, z: BitVec) -> Self {
        assert_eq!(x.len(), z.len(), "x and z parts must have equal length");
        Self { x, z }
    }

    /// Inverse of [`PauliOperator::symplectic`].
    pub fn from_symplectic(v: &BitVec) -> Self {
        assert!(v.len() % 2 == 0, "symplectic vector must have even length");
        let n = v.len() / 2;
        Self {
            x: v.slice(0, n),
            z: v.slice(n, n),
        }
    }

    pub fn single(n: usize, qubit: usize, p: Pauli) -> Self {
        let mut op = Self::identity(n);
        op.set(qubit, p);
        op
    }

    /// The same Pauli `p` on every listed qubit.
    pub fn uniform<I: IntoIterator<Item = usize>>(n: usize, qubits: I, p: Pauli) -> Self {
        let mut op = Self::identity(n);
        for q in qubits {
            op.set(q, p);
        }
        op
    }

    pub fn from_paulis<I: IntoIterator<Item = (usize, Pauli)>>(n: usize, terms: I) -> Self {
        let mut op = Self::identity(n);
        for (q, p) in terms {
            op.set(q, op.get(q) * p);
        }
        op
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn x_part(&self) -> &BitVec {
        &self.x
    }

    #[inline]
    pub fn z_part(&self) -> &BitVec {
        &self.z
    }

    #[inline]
    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x.get(q), self.z.get(q))
    }

    #[inline]
    pub fn set(&mut self, q: usize, p: Pauli) {
        self.x.set(q, p.x());
        self.z.set(q, p.z());
    }

    /// Multiplies a single-qubit Pauli into position `q`.
    #[inline]
    pub fn apply(&mut self, q: usize, p: Pauli) {
        if p.x() {
            self.x.flip(q);
        }
        if p.z() {
            self.z.flip(q);
        }
    }

    /// `[x | z]`, length 2n.
    pub fn symplectic(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// True when the operator has no Z component.
    pub fn is_x_type(&self) -> bool {
        self.z.is_zero()
    }

    /// True when the operator has no X component.
    pub fn is_z_type(&self) -> bool {
        self.x.is_zero()
    }

    pub fn support(&self) -> Vec<usize> {
        let mut s = self.x.clone();
        for (a, b) in s.words_mut().iter_mut().zip(self.z.words()) {
            *a |= b;
        }
        s.iter_ones().collect()
    }

    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Symplectic commutation test. Panics if the qubit counts differ.
    pub fn commutes(&self, other: &PauliOperator) -> bool {
        assert_eq!(self.n(), other.n(), "qubit count mismatch");
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    /// Keeps only the listed qubits; everything else becomes identity.
    pub fn restrict(&self, qubits: &[usize]) -> PauliOperator {
        let mut out = PauliOperator::identity(self.n());
        for &q in qubits {
            out.set(q, self.get(q));
        }
        out
    }
}

impl MulAssign<&PauliOperator> for PauliOperator {
    fn mul_assign(&mut self, rhs: &PauliOperator) {
        assert_eq!(self.n(), rhs.n(), "qubit count mismatch");
        self.x.xor_assign(&rhs.x);
        self.z.xor_assign(&rhs.z);
    }
}

impl Mul<&PauliOperator> for &PauliOperator {
    type Output = PauliOperator;

    fn mul(self, rhs: &PauliOperator) -> PauliOperator {
        let mut out = self.clone();
        out *= rhs;
        out
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOperator(n={}; {self})", self.n())
    }
}

impl fmt::Display for PauliOperator {
    /// Sparse form such as `X0 Z3 Y7`; the identity prints as `I`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let support = self.support();
        if support.is_empty() {
            return write!(f, "I");
        }
        for (i, q) in support.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{q}", self.get(*q))?;
        }
        Ok(())
    }
}

/// Phase-free product.
pub fn product(a: &PauliOperator, b: &PauliOperator) -> PauliOperator {
    a * b
}

pub fn commutes(a: &PauliOperator, b: &PauliOperator) -> bool {
    a.commutes(b)
}

/// An ordered list of operators on a common number of qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSet {
    n: usize,
    ops: Vec<PauliOperator>,
}

impl OperatorSet {
    pub fn new(n: usize) -> Self {
        Self { n, ops: Vec::new() }
    }

    pub fn from_ops(n: usize, ops: Vec<PauliOperator>) -> Self {
        for (i, op) in ops.iter().enumerate() {
            assert_eq!(op.n(), n, "operator {i} acts on the wrong number of qubits");
        }
        Self { n, ops }
    }

    pub fn push(&mut self, op: PauliOperator) {
        assert_eq!(op.n(), self.n, "qubit count mismatch");
        self.ops.push(op);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    #[inline]
    pub fn ops(&self) -> &[PauliOperator] {
        &self.ops
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PauliOperator> {
        self.ops.iter()
    }

    /// Rows are the symplectic vectors `[x | z]`.
    pub fn matrix(&self) -> BitMatrix {
        let rows: Vec<BitVec> = self.ops.iter().map(PauliOperator::symplectic).collect();
        BitMatrix::from_rows(2 * self.n, &rows)
    }

    pub fn rank(&self) -> usize {
        self.matrix().rank()
    }

    pub fn row_space(&self) -> RowSpace {
        let rows: Vec<BitVec> = self.ops.iter().map(PauliOperator::symplectic).collect();
        RowSpace::from_rows(2 * self.n, rows.iter())
    }

    /// Bit `i` is set iff operator `i` anticommutes with `error`.
    pub fn syndrome(&self, error: &PauliOperator) -> BitVec {
        assert_eq!(error.n(), self.n, "qubit count mismatch");
        BitVec::from_indices(
            self.ops.len(),
            self.ops
                .iter()
                .enumerate()
                .filter(|(_, op)| !op.commutes(error))
                .map(|(i, _)| i),
        )
    }

    /// Membership of `candidate` in the group generated by this set.
    pub fn in_group(&self, candidate: &PauliOperator) -> bool {
        assert_eq!(candidate.n(), self.n, "qubit count mismatch");
        self.row_space().contains(&candidate.symplectic())
    }

    /// Product of the operators whose indices are set in `mask`.
    pub fn combine(&self, mask: &BitVec) -> PauliOperator {
        assert_eq!(mask.len(), self.ops.len());
        let mut out = PauliOperator::identity(self.n);
        for i in mask.iter_ones() {
            out *= &self.ops[i];
        }
        out
    }
}

impl<'a> IntoIterator for &'a OperatorSet {
    type Item = &'a PauliOperator;
    type IntoIter = std::slice::Iter<'a, PauliOperator>;

    fn into_iter(self) -> Self::IntoIter {
        self.ops.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn op_strategy(n: usize) -> impl Strategy<Value = PauliOperator> {
        prop::collection::vec(0u8..4, n).prop_map(move |v| {
            PauliOperator::from_paulis(n, v.into_iter().enumerate().map(|(q, p)| (q, Pauli::ALL[p as usize])))
        })
    }

    /// Per-qubit anticommutation count, independent of the packed dot products.
    fn naive_commutes(a: &PauliOperator, b: &PauliOperator) -> bool {
        (0..a.n()).filter(|&q| !a.get(q).commutes(b.get(q))).count() % 2 == 0
    }

    #[test]
    fn basic_commutation() {
        let x0 = PauliOperator::single(1, 0, Pauli::X);
        let z0 = PauliOperator::single(1, 0, Pauli::Z);
        assert!(!x0.commutes(&z0));
        assert!(x0.commutes(&x0));
        let zz = PauliOperator::uniform(2, [0, 1], Pauli::Z);
        let xx = PauliOperator::uniform(2, [0, 1], Pauli::X);
        assert!(zz.commutes(&xx));
    }

    #[test]
    fn products() {
        let p = PauliOperator::from_paulis(3, [(0, Pauli::X), (2, Pauli::Y)]);
        assert!((&p * &p).is_identity());
        let y = &PauliOperator::single(1, 0, Pauli::X) * &PauliOperator::single(1, 0, Pauli::Z);
        assert_eq!(y.get(0), Pauli::Y);
    }

    #[test]
    #[should_panic(expected = "qubit count mismatch")]
    fn size_mismatch_panics() {
        PauliOperator::identity(2).commutes(&PauliOperator::identity(3));
    }

    #[test]
    fn display_is_sparse() {
        let p = PauliOperator::from_paulis(8, [(0, Pauli::X), (3, Pauli::Z), (7, Pauli::Y)]);
        assert_eq!(p.to_string(), "X0 Z3 Y7");
        assert_eq!(PauliOperator::identity(4).to_string(), "I");
    }

    #[test]
    fn identity_has_empty_syndrome_and_is_in_every_group() {
        let checks = OperatorSet::from_ops(3, vec![PauliOperator::uniform(3, [0, 1], Pauli::Z)]);
        assert!(checks.syndrome(&PauliOperator::identity(3)).is_zero());
        assert!(checks.in_group(&PauliOperator::identity(3)));
    }

    proptest! {
        #[test]
        fn commutation_matches_naive_and_is_symmetric(a in op_strategy(70), b in op_strategy(70)) {
            prop_assert_eq!(a.commutes(&b), naive_commutes(&a, &b));
            prop_assert_eq!(a.commutes(&b), b.commutes(&a));
        }

        #[test]
        fn syndrome_is_linear(
            checks in prop::collection::vec(op_strategy(20), 1..12),
            e1 in op_strategy(20),
            e2 in op_strategy(20),
        ) {
            let set = OperatorSet::from_ops(20, checks);
            let mut lhs = set.syndrome(&e1);
            lhs.xor_assign(&set.syndrome(&e2));
            prop_assert_eq!(set.syndrome(&(&e1 * &e2)), lhs);
        }

        #[test]
        fn random_products_lie_in_group(
            gens in prop::collection::vec(op_strategy(16), 1..10),
            pick in any::<u16>(),
        ) {
            let set = OperatorSet::from_ops(16, gens);
            let mask = BitVec::from_indices(set.len(), (0..set.len()).filter(|i| (pick >> i) & 1 == 1));
            prop_assert!(set.in_group(&set.combine(&mask)));
        }

        #[test]
        fn weight_counts_support(a in op_strategy(90)) {
            prop_assert_eq!(a.weight(), (0..90).filter(|&q| a.get(q) != Pauli::I).count());
            prop_assert_eq!(a.support().len(), a.weight());
        }
    }
}
