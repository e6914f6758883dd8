//! Per-cluster correction stages.
//!
//! Each color code is decoded by a deterministic linear solve on the erased
//! columns of its check matrix. Any syndrome-consistent estimate supported
//! on the erasure is as good as any other up to the logical ambiguity the
//! erasure itself leaves.

use crate::code::TsccCode;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::lattice::{Color, Hypergraph};
use crate::pauli::{OperatorSet, Pauli, PauliOperator};

use super::cluster::Cluster;
use super::syndrome::SyndromeSet;

/// Color-code erasure decoder on an arbitrary single-type check set.
///
/// Z-type checks yield an X-type estimate and X-type checks a Z-type one,
/// supported only on `erased`.
pub fn cc_erasure_decode(checks: &OperatorSet, erased: &[usize], syn: &BitVec) -> Result<PauliOperator> {
    let n = checks.n();
    let z_type = checks.iter().all(PauliOperator::is_z_type);
    let x_type = checks.iter().all(PauliOperator::is_x_type);
    if !z_type && !x_type {
        return Err(Error::MixedCheckTypes);
    }
    // Z-type checks see X errors through their z half.
    let offset = if z_type { n } else { 0 };
    let cols: Vec<usize> = erased.iter().map(|&q| q + offset).collect();
    let sub = checks.matrix().column_submatrix(&cols)?;
    let x = sub.solve(syn).ok_or(Error::InconsistentSyndrome)?;
    let p = if z_type { Pauli::X } else { Pauli::Z };
    Ok(PauliOperator::uniform(n, x.iter_ones().map(|j| erased[j]), p))
}

/// Solves the system restricted to the faces the columns touch. Returns the
/// selected columns.
fn solve_local(
    faces: usize,
    cols: &[usize],
    faces_of: impl Fn(usize) -> [usize; 3],
    syn: &BitVec,
) -> Result<Vec<usize>> {
    if cols.is_empty() {
        return Ok(Vec::new());
    }
    let mut row_of = vec![u32::MAX; faces];
    let mut rows = Vec::new();
    for &c in cols {
        for f in faces_of(c) {
            if row_of[f] == u32::MAX {
                row_of[f] = rows.len() as u32;
                rows.push(f);
            }
        }
    }
    let mut m = BitMatrix::zeros(rows.len(), cols.len());
    for (j, &c) in cols.iter().enumerate() {
        for f in faces_of(c) {
            m.set(row_of[f] as usize, j, true);
        }
    }
    let rhs = BitVec::from_indices(rows.len(), (0..rows.len()).filter(|&i| syn.get(rows[i])));
    let x = m.solve(&rhs).ok_or(Error::InconsistentSyndrome)?;
    Ok(x.iter_ones().map(|j| cols[j]).collect())
}

fn stack_qubits(cluster: &Cluster, stack: Color) -> Vec<usize> {
    cluster
        .qubits
        .iter()
        .copied()
        .filter(|&q| Hypergraph::stack_of(q) == stack)
        .collect()
}

/// Bit-flip stage: decode each stack against its Z-type checks and fold the
/// estimate back into the syndrome, which also updates the W2 bits.
pub fn correct_x(code: &TsccCode, cluster: &Cluster, syn: &mut SyndromeSet) -> Result<PauliOperator> {
    let mut est = PauliOperator::identity(code.n());
    for stack in Color::ALL {
        let cols = stack_qubits(cluster, stack);
        let faces_of = |q: usize| code.hg.faces_at(q);
        for q in solve_local(code.num_faces(), &cols, faces_of, &syn.cc_x[stack.idx()])? {
            est.apply(q, Pauli::X);
            syn.apply(code, q, Pauli::X);
        }
    }
    Ok(est)
}

/// Phase-flip stage without gauge fixing: decode the parent color code on
/// the triangles, using W2 outcomes as its X-type checks, and lift each
/// parent-vertex flip to the lowest erased qubit of that triangle.
pub fn correct_z_plain(code: &TsccCode, cluster: &Cluster, syn: &mut SyndromeSet) -> Result<PauliOperator> {
    let mut vertices: Vec<usize> = cluster.qubits.iter().map(|&q| Hypergraph::parent_vertex(q)).collect();
    vertices.dedup();
    let faces_of = |v: usize| code.hg.colex.vertex_faces[v];
    let mut est = PauliOperator::identity(code.n());
    for v in solve_local(code.num_faces(), &vertices, faces_of, &syn.w2)? {
        let q = *cluster
            .qubits
            .iter()
            .find(|&&q| Hypergraph::parent_vertex(q) == v)
            .expect("selected triangle has an erased corner");
        est.apply(q, Pauli::Z);
        syn.apply(code, q, Pauli::Z);
    }
    Ok(est)
}

/// Phase-flip stage with gauge fixing: decode each stack against its X-type
/// checks. Clearing the stacks clears W2 as well.
pub fn correct_z_gauge(code: &TsccCode, cluster: &Cluster, syn: &mut SyndromeSet) -> Result<PauliOperator> {
    let mut est = PauliOperator::identity(code.n());
    for stack in Color::ALL {
        let cols = stack_qubits(cluster, stack);
        let faces_of = |q: usize| code.hg.faces_at(q);
        for q in solve_local(code.num_faces(), &cols, faces_of, &syn.cc_z[stack.idx()])? {
            est.apply(q, Pauli::Z);
            syn.apply(code, q, Pauli::Z);
        }
    }
    Ok(est)
}
