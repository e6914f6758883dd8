//! Rank tests for erasure correctability.
//!
//! An erasure `E` is correctable when every Pauli supported on `E` with zero
//! TSCC syndrome is a gauge element. Counting both sides gives
//! `2|E| = rank(H_E) + rank(G) - rank(G_Ē)`, where `M_S` keeps the x and z
//! columns of the qubits in `S`. The right side never exceeds the left.
//!
//! Gauge elements supported on `E` are exactly the vectors on `E` that are
//! symplectically orthogonal to `C(G)` restricted to `E`, and `C(G)` is
//! spanned by the stabilizers and the bare logicals. So
//! `rank(G) - rank(G_Ē) = 2|E| - rank([H; L]_E)`, which only touches the
//! erased columns. [`Correctability::tscc`] uses that form;
//! [`Correctability::tscc_direct`] evaluates the definition.

use serde::Serialize;

use crate::code::TsccCode;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec, RowSpace};
use crate::lattice::{Color, Hypergraph};
use crate::pauli::{Pauli, PauliOperator};

/// Largest kernel dimension the brute-force oracle will enumerate.
pub const ORACLE_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CorrectabilityVerdict {
    pub correctable: bool,
    /// `2|E|`.
    pub lhs: usize,
    /// `rank(H_E) + rank(G) - rank(G_Ē)`.
    pub rhs: usize,
}

impl CorrectabilityVerdict {
    fn new(lhs: usize, rhs: usize) -> Self {
        assert!(rhs <= lhs, "correctability rank bound violated: rhs {rhs} > lhs {lhs}");
        Self {
            correctable: lhs == rhs,
            lhs,
            rhs,
        }
    }
}

/// Matrices shared by every test on one code, built once.
pub struct Correctability<'a> {
    code: &'a TsccCode,
    h: BitMatrix,
    g: BitMatrix,
    g_rank: usize,
    h_logicals: BitMatrix,
    gauge_space: RowSpace,
    stacks: [StackCode; 3],
}

struct StackCode {
    qubits: Vec<usize>,
    h: BitMatrix,
    rank: usize,
}

/// Symplectic columns `(q, n + q)` of each qubit, in qubit order.
fn columns(n: usize, qubits: impl IntoIterator<Item = usize>) -> Vec<usize> {
    qubits.into_iter().flat_map(|q| [q, n + q]).collect()
}

fn restricted_rank(m: &BitMatrix, cols: &[usize]) -> usize {
    m.column_submatrix(cols).expect("qubit index within code").rank()
}

impl<'a> Correctability<'a> {
    pub fn new(code: &'a TsccCode) -> Self {
        let h = code.stabilizers().matrix();
        let g = code.gauge.matrix();
        let g_rank = g.rank();
        let mut rows: Vec<BitVec> = (0..h.rows()).map(|r| h.row(r)).collect();
        rows.extend(code.logicals.iter().map(PauliOperator::symplectic));
        let h_logicals = BitMatrix::from_rows(2 * code.n(), &rows);
        let stacks = Color::ALL.map(|c| {
            let qubits: Vec<usize> = (0..code.n()).filter(|&q| Hypergraph::stack_of(q) == c).collect();
            let h = code
                .stack_checks(c)
                .matrix()
                .column_submatrix(&columns(code.n(), qubits.iter().copied()))
                .expect("stack qubits within code");
            let rank = h.rank();
            StackCode { qubits, h, rank }
        });
        Self {
            code,
            h,
            g,
            g_rank,
            h_logicals,
            gauge_space: code.gauge.row_space(),
            stacks,
        }
    }

    pub fn code(&self) -> &TsccCode {
        self.code
    }

    fn check_range(&self, erased: &[usize]) -> Result<()> {
        match erased.iter().find(|&&q| q >= self.code.n()) {
            Some(&q) => Err(Error::ColumnOutOfRange {
                index: q,
                cols: self.code.n(),
            }),
            None => Ok(()),
        }
    }

    /// Rank test, evaluated through the centralizer identity.
    pub fn tscc(&self, erased: &[usize]) -> Result<CorrectabilityVerdict> {
        self.check_range(erased)?;
        let cols = columns(self.code.n(), erased.iter().copied());
        let lhs = cols.len();
        let rhs = restricted_rank(&self.h, &cols) + lhs - restricted_rank(&self.h_logicals, &cols);
        Ok(CorrectabilityVerdict::new(lhs, rhs))
    }

    /// Rank test, evaluated from the definition with the full gauge matrix.
    pub fn tscc_direct(&self, erased: &[usize]) -> Result<CorrectabilityVerdict> {
        self.check_range(erased)?;
        let n = self.code.n();
        let mut mask = vec![false; n];
        for &q in erased {
            mask[q] = true;
        }
        let cols = columns(n, erased.iter().copied());
        let rest = columns(n, (0..n).filter(|&q| !mask[q]));
        let lhs = cols.len();
        let rhs = restricted_rank(&self.h, &cols) + self.g_rank - restricted_rank(&self.g, &rest);
        Ok(CorrectabilityVerdict::new(lhs, rhs))
    }

    /// Per-stack rank test on the three color codes. Passing on all three is
    /// sufficient for the maximal decoder to succeed.
    pub fn stacks(&self, erased: &[usize]) -> Result<[CorrectabilityVerdict; 3]> {
        self.check_range(erased)?;
        let n = self.code.n();
        let mut mask = vec![false; n];
        for &q in erased {
            mask[q] = true;
        }
        Ok(self.stacks.each_ref().map(|s| {
            // Columns of the stack matrix are local: 2i, 2i + 1 for its i-th qubit.
            let (mut inside, mut outside) = (Vec::new(), Vec::new());
            for (i, &q) in s.qubits.iter().enumerate() {
                let target = if mask[q] { &mut inside } else { &mut outside };
                target.extend([2 * i, 2 * i + 1]);
            }
            let lhs = inside.len();
            let rhs = restricted_rank(&s.h, &inside) + s.rank - restricted_rank(&s.h, &outside);
            CorrectabilityVerdict::new(lhs, rhs)
        }))
    }

    pub fn stack_correctable(&self, erased: &[usize]) -> Result<bool> {
        Ok(self.stacks(erased)?.iter().all(|v| v.correctable))
    }

    /// Enumerates every syndrome-free Pauli on `erased` and tests each for
    /// gauge membership.
    pub fn brute_force(&self, erased: &[usize]) -> Result<bool> {
        self.check_range(erased)?;
        let n = self.code.n();
        let stabs = self.code.stabilizers();
        // Column 2i is X on erased[i], column 2i + 1 is Z on it.
        let singles: Vec<PauliOperator> = erased
            .iter()
            .flat_map(|&q| {
                [
                    PauliOperator::single(n, q, Pauli::X),
                    PauliOperator::single(n, q, Pauli::Z),
                ]
            })
            .collect();
        let mut m = BitMatrix::zeros(stabs.len(), singles.len());
        for (r, s) in stabs.iter().enumerate() {
            for (c, p) in singles.iter().enumerate() {
                m.set(r, c, !s.commutes(p));
            }
        }
        let kernel = m.nullspace_basis();
        if kernel.len() > ORACLE_CAP {
            return Err(Error::OracleCap {
                dim: kernel.len(),
                cap: ORACLE_CAP,
            });
        }
        let basis: Vec<PauliOperator> = kernel
            .iter()
            .map(|v| {
                let mut op = PauliOperator::identity(n);
                for c in v.iter_ones() {
                    op *= &singles[c];
                }
                op
            })
            .collect();
        // Gray-code walk over all 2^k kernel elements.
        let mut current = PauliOperator::identity(n);
        for i in 1u64..(1u64 << basis.len()) {
            current *= &basis[i.trailing_zeros() as usize];
            if !self.gauge_space.contains(&current.symplectic()) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn tscc_correctable(code: &TsccCode, erased: &[usize]) -> Result<CorrectabilityVerdict> {
    Correctability::new(code).tscc(erased)
}

pub fn stack_correctable(code: &TsccCode, erased: &[usize]) -> Result<bool> {
    Correctability::new(code).stack_correctable(erased)
}

pub fn brute_force_correctable(code: &TsccCode, erased: &[usize]) -> Result<bool> {
    Correctability::new(code).brute_force(erased)
}
