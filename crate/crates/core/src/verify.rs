//! Named pass/fail report over the lattice, the code and both schedules.

use serde::Serialize;

use crate::code::TsccCode;
use crate::lattice::{hypergraph, EdgeKind, Hypergraph};
use crate::schedule::{build_schedule, validate_schedule, GaugeRef, Mode};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyEntry {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl VerifyEntry {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn counts(name: &str, expected: &[(&str, usize)], got: &[usize]) -> Self {
        let passed = expected.iter().zip(got).all(|(e, g)| e.1 == *g);
        let detail = expected
            .iter()
            .zip(got)
            .map(|((label, e), g)| format!("{label} {g} (expected {e})"))
            .collect::<Vec<_>>()
            .join(", ");
        Self::new(name, passed, detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub d: usize,
    pub entries: Vec<VerifyEntry>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerifyEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }
}

fn lattice_entries(hg: &Hypergraph, out: &mut Vec<VerifyEntry>) {
    let d = hg.d();
    let f = hg.num_faces();
    let colex = &hg.colex;
    out.push(VerifyEntry::counts(
        "colex-counts",
        &[("faces", d * d / 2), ("vertices", 2 * f), ("edges", 3 * f)],
        &[colex.faces.len(), colex.num_vertices, colex.edges.len()],
    ));
    let solid = hg.rank2.iter().filter(|e| e.kind == EdgeKind::Solid).count();
    out.push(VerifyEntry::counts(
        "hypergraph-counts",
        &[
            ("qubits", 3 * d * d),
            ("triangles", 2 * f),
            ("solid edges", 3 * f),
            ("dashed edges", 3 * f),
            ("rectangles", 3 * f),
        ],
        &[hg.n, hg.rank3.len(), solid, hg.rank2.len() - solid, hg.rects.len()],
    ));
    let one_per_stack = hg
        .rank3
        .iter()
        .all(|t| t.iter().enumerate().all(|(i, &q)| Hypergraph::stack_of(q).idx() == i));
    out.push(VerifyEntry::new(
        "triangle-spans-all-stacks",
        one_per_stack,
        "each triangle has one corner per stack",
    ));
    let mut kinds = vec![(0u8, 0u8); hg.n];
    for e in &hg.rank2 {
        for &q in &e.qubits {
            match e.kind {
                EdgeKind::Solid => kinds[q].0 += 1,
                EdgeKind::Dashed => kinds[q].1 += 1,
            }
        }
    }
    let bad = kinds.iter().position(|&k| k != (1, 1));
    out.push(VerifyEntry::new(
        "solid-dashed-alternate",
        bad.is_none(),
        match bad {
            Some(q) => format!("qubit {q} has {:?} solid/dashed edges", kinds[q]),
            None => "every corner has one solid and one dashed edge".into(),
        },
    ));
}

fn schedule_entries(code: &TsccCode, out: &mut Vec<VerifyEntry>) {
    let f = code.num_faces();
    for mode in [Mode::Partial, Mode::Maximal] {
        let schedule = match build_schedule(code, mode) {
            Ok(s) => s,
            Err(e) => {
                out.push(VerifyEntry::new(format!("schedule-{mode}"), false, e.to_string()));
                continue;
            }
        };
        out.push(match validate_schedule(code, &schedule) {
            Ok(()) => VerifyEntry::new(
                format!("schedule-{mode}"),
                true,
                format!("{} recipes exact and sequenced", schedule.recipes.len()),
            ),
            Err(e) => VerifyEntry::new(format!("schedule-{mode}"), false, e.to_string()),
        });
        let third = match mode {
            Mode::Partial => ("ZZ", 4 * f),
            Mode::Maximal => ("four-body", 3 * f),
        };
        let third_ok = schedule.rounds[2].iter().all(|g| {
            matches!(
                (mode, g),
                (Mode::Partial, GaugeRef::Gen(_)) | (Mode::Maximal, GaugeRef::Four(_))
            )
        });
        let mut entry = VerifyEntry::counts(
            &format!("round-sizes-{mode}"),
            &[("XX", 3 * f), ("YY", 3 * f), third],
            &[
                schedule.rounds[0].len(),
                schedule.rounds[1].len(),
                schedule.rounds[2].len(),
            ],
        );
        entry.passed &= third_ok;
        out.push(entry);
        if mode == Mode::Maximal {
            out.push(VerifyEntry::counts(
                "maximal-independent-checks",
                &[("rank", 6 * f - 12)],
                &[schedule.independent_checks(code)],
            ));
        }
    }
}

/// Builds the code at distance `d` and evaluates every named check. A
/// distance the lattice cannot realize yields a single failing entry.
pub fn verify(d: usize) -> VerifyReport {
    let mut entries = Vec::new();
    let hg = match hypergraph(d) {
        Ok(hg) => hg,
        Err(e) => {
            entries.push(VerifyEntry::new("lattice", false, e.to_string()));
            return VerifyReport { d, entries };
        }
    };
    entries.push(VerifyEntry::new("lattice", true, "2-colex built and validated"));
    lattice_entries(&hg, &mut entries);
    let code = match TsccCode::assemble(hg) {
        Ok(c) => c,
        Err(e) => {
            entries.push(VerifyEntry::new("code-assembly", false, e.to_string()));
            return VerifyReport { d, entries };
        }
    };
    entries.extend(
        code.check_invariants()
            .into_iter()
            .map(|r| VerifyEntry::new(r.name, r.passed, r.detail)),
    );
    schedule_entries(&code, &mut entries);
    VerifyReport { d, entries }
}
