//! Gauge-measurement schedules and the recipes that rebuild every check from
//! measured gauge outcomes.
//!
//! Both schedules measure three rounds: every `XX` edge, then every `YY`
//! edge, then Z-type operators. Partial gauge fixing uses the two-body
//! triangle `ZZ` generators in the last round; order-maximal fixing uses the
//! four-body rectangle operators instead. Those commute with every X and Y
//! check a stack reads on faces of its own color, which a lone `ZZ` would
//! disturb.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::code::{CheckType, GaugeKind, TsccCode};
use crate::error::{Error, Result};
use crate::lattice::{Color, EdgeKind, Hypergraph};
use crate::pauli::{OperatorSet, PauliOperator};

/// Which gauge-fixing strategy a schedule or decoder uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Partial,
    Maximal,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Partial => "partial",
            Mode::Maximal => "maximal",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "partial" => Ok(Mode::Partial),
            "maximal" => Ok(Mode::Maximal),
            other => Err(Error::Parse(format!(
                "unknown mode `{other}` (expected partial or maximal)"
            ))),
        }
    }
}

/// A measured gauge operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GaugeRef {
    /// Index into the code's two-body gauge generators.
    Gen(usize),
    /// Index of a rectangle; the operator is Z on its four corners.
    Four(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    /// 1, 2 or 3.
    pub round: u8,
    pub op: GaugeRef,
}

/// A check whose outcome the schedule produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckId {
    W1(usize),
    W2(usize),
    Cc { stack: Color, face: usize, kind: CheckType },
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckId::W1(face) => write!(f, "W1[{face}]"),
            CheckId::W2(face) => write!(f, "W2[{face}]"),
            CheckId::Cc { stack, face, kind } => write!(f, "B{kind:?}[{face}]_{stack}"),
        }
    }
}

/// How a check outcome is obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Recipe {
    /// Product of these gauge outcomes, in measurement order.
    Direct(Vec<Step>),
    /// XOR of the outcomes of these other checks.
    Indirect(Vec<CheckId>),
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasurementSchedule {
    pub mode: Mode,
    pub rounds: [Vec<GaugeRef>; 3],
    pub recipes: Vec<(CheckId, Recipe)>,
}

impl MeasurementSchedule {
    pub fn recipe(&self, id: CheckId) -> Option<&Recipe> {
        self.recipes.iter().find(|(c, _)| *c == id).map(|(_, r)| r)
    }

    /// Rank of the set of distinct checks the schedule fixes.
    pub fn independent_checks(&self, code: &TsccCode) -> usize {
        let ops = self.recipes.iter().map(|(id, _)| target(code, *id).clone()).collect();
        OperatorSet::from_ops(code.n(), ops).rank()
    }
}

pub fn gauge_op(code: &TsccCode, g: GaugeRef) -> &PauliOperator {
    match g {
        GaugeRef::Gen(i) => &code.gauge.ops()[i],
        GaugeRef::Four(i) => &code.four_body[i],
    }
}

pub fn target(code: &TsccCode, id: CheckId) -> &PauliOperator {
    match id {
        CheckId::W1(f) => &code.w1[f],
        CheckId::W2(f) => &code.w2[f],
        CheckId::Cc { stack, face, kind } => code.cc_stab(stack, face, kind),
    }
}

pub fn recipe_product(code: &TsccCode, steps: &[Step]) -> PauliOperator {
    let mut acc = PauliOperator::identity(code.n());
    for s in steps {
        acc *= gauge_op(code, s.op);
    }
    acc
}

/// Each operator must commute with the product of all earlier ones.
/// Returns the first offending position.
pub fn sequencing_violation(code: &TsccCode, steps: &[Step]) -> Option<usize> {
    let mut acc = PauliOperator::identity(code.n());
    for (j, s) in steps.iter().enumerate() {
        let op = gauge_op(code, s.op);
        if !op.commutes(&acc) {
            return Some(j);
        }
        acc *= op;
    }
    None
}

pub fn validate_sequencing(code: &TsccCode, steps: &[Step]) -> bool {
    sequencing_violation(code, steps).is_none()
}

fn gen_step(code: &TsccCode, round: u8, g: usize) -> Step {
    debug_assert!(g < code.gauge.len());
    Step {
        round,
        op: GaugeRef::Gen(g),
    }
}

/// Gauge steps for the boundary edges of `face` of the given kind.
fn sigma1_steps(code: &TsccCode, face: usize, kind: EdgeKind) -> Vec<Step> {
    let round = if kind == EdgeKind::Dashed { 1 } else { 2 };
    code.hg.faces[face]
        .sigma1
        .iter()
        .filter(|&&e| code.hg.rank2[e].kind == kind)
        .map(|&e| gen_step(code, round, code.edge_gauge[e]))
        .collect()
}

fn w1_steps(code: &TsccCode, face: usize) -> Vec<Step> {
    let mut steps = sigma1_steps(code, face, EdgeKind::Dashed);
    steps.extend(sigma1_steps(code, face, EdgeKind::Solid));
    steps
}

/// Partial-mode recipe for `(B^Z_face)_stack`: the boundary cycle, then a
/// triangle `ZZ` push from the face's own corners onto `stack`.
pub fn z_stab_decomposition(code: &TsccCode, stack: Color, face: usize) -> Vec<Step> {
    let mut steps = w1_steps(code, face);
    let own = code.hg.faces[face].color;
    if own != stack {
        for &v in &code.hg.faces[face].triangles {
            for g in code.zz_pair(v, own, stack) {
                steps.push(gen_step(code, 3, g));
            }
        }
    }
    steps
}

/// Maximal-mode recipe for `(B^Z_face)_stack` with the face color different
/// from the stack: the boundary cycle, then the rectangles along the
/// boundary that separate this face from faces of the stack's color.
fn z_stab_four_body(code: &TsccCode, stack: Color, face: usize) -> Vec<Step> {
    let mut steps = w1_steps(code, face);
    let hg = &code.hg;
    for &e in &hg.colex.faces[face].edges {
        let fs = hg.colex.edges[e].faces;
        let other = if fs[0] == face { fs[1] } else { fs[0] };
        if hg.faces[other].color == stack {
            steps.push(Step {
                round: 3,
                op: GaugeRef::Four(e),
            });
        }
    }
    steps
}

/// Partial-mode recipe for `W2^face`: outer `XX` edges, then the inner and
/// outer `YY` edges, then `ZZ` on the two corners of each triangle that lie
/// off the face.
pub fn w2_decomposition(code: &TsccCode, face: usize) -> Vec<Step> {
    let hg = &code.hg;
    let hf = &hg.faces[face];
    let outer = |kind: EdgeKind, round: u8| {
        hf.outer
            .iter()
            .filter(move |&&e| hg.rank2[e].kind == kind)
            .map(move |&e| gen_step(code, round, code.edge_gauge[e]))
    };
    let mut steps: Vec<Step> = outer(EdgeKind::Dashed, 1).collect();
    steps.extend(sigma1_steps(code, face, EdgeKind::Solid));
    steps.extend(outer(EdgeKind::Solid, 2));
    let (a, b) = (hf.color.prev(), hf.color.next());
    for &v in &hf.triangles {
        for g in code.zz_pair(v, a, b) {
            steps.push(gen_step(code, 3, g));
        }
    }
    steps
}

/// Gauge edges of `kind` joining two stack-`stack` corners of the face's
/// triangles. These are the direct one-round recipes of X and Y checks.
fn stack_edge_steps(code: &TsccCode, stack: Color, face: usize, kind: EdgeKind) -> Vec<Step> {
    let hg = &code.hg;
    let tri = &hg.faces[face].triangles;
    let on_face = |q: usize| Hypergraph::stack_of(q) == stack && tri.contains(&Hypergraph::parent_vertex(q));
    let round = if kind == EdgeKind::Dashed { 1 } else { 2 };
    let mut edges: Vec<usize> = hg
        .faces
        .iter()
        .flat_map(|f| f.sigma1.iter().chain(&f.outer))
        .copied()
        .filter(|&e| {
            let r = &hg.rank2[e];
            r.kind == kind && on_face(r.qubits[0]) && on_face(r.qubits[1])
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    edges
        .into_iter()
        .map(|e| gen_step(code, round, code.edge_gauge[e]))
        .collect()
}

/// Maximal-mode recipe for an X-type check: direct from round 1 on faces of
/// the stack color and its predecessor, otherwise the XOR of the Z and Y checks.
pub fn x_stab_decomposition(code: &TsccCode, stack: Color, face: usize) -> Recipe {
    table_entry(code, stack, face, CheckType::X)
}

/// The maximal-mode recipe for one color-code check.
///
/// Per stack `c`, with `c+` and `c-` the next and previous colors:
/// X checks come straight from round 1 on faces colored `c` and `c-`, Y
/// checks from round 2 on faces colored `c` and `c+`, and Z checks from round
/// 3 on faces not colored `c`. The remaining entry of each type is the XOR
/// of the other two types on the same face.
pub fn table_entry(code: &TsccCode, stack: Color, face: usize, kind: CheckType) -> Recipe {
    let color = code.hg.faces[face].color;
    let cc = |kind| CheckId::Cc { stack, face, kind };
    match kind {
        CheckType::X if color == stack || color == stack.prev() => {
            Recipe::Direct(stack_edge_steps(code, stack, face, EdgeKind::Dashed))
        }
        CheckType::X => Recipe::Indirect(vec![cc(CheckType::Z), cc(CheckType::Y)]),
        CheckType::Y if color == stack || color == stack.next() => {
            Recipe::Direct(stack_edge_steps(code, stack, face, EdgeKind::Solid))
        }
        CheckType::Y => Recipe::Indirect(vec![cc(CheckType::X), cc(CheckType::Z)]),
        CheckType::Z if color == stack => Recipe::Indirect(vec![cc(CheckType::X), cc(CheckType::Y)]),
        CheckType::Z => Recipe::Direct(z_stab_four_body(code, stack, face)),
    }
}

/// Assembles and validates the schedule for `mode`.
pub fn build_schedule(code: &TsccCode, mode: Mode) -> Result<MeasurementSchedule> {
    let kind_gens = |k: GaugeKind| {
        code.gauge_meta
            .iter()
            .enumerate()
            .filter(move |(_, g)| g.kind == k)
            .map(|(i, _)| GaugeRef::Gen(i))
            .collect::<Vec<_>>()
    };
    let third = match mode {
        Mode::Partial => kind_gens(GaugeKind::ZZ),
        Mode::Maximal => (0..code.four_body.len()).map(GaugeRef::Four).collect(),
    };
    let rounds = [kind_gens(GaugeKind::XX), kind_gens(GaugeKind::YY), third];

    let faces = 0..code.num_faces();
    let mut recipes = Vec::new();
    for f in faces.clone() {
        recipes.push((CheckId::W1(f), Recipe::Direct(w1_steps(code, f))));
    }
    match mode {
        Mode::Partial => {
            for f in faces.clone() {
                recipes.push((CheckId::W2(f), Recipe::Direct(w2_decomposition(code, f))));
            }
            for stack in Color::ALL {
                for f in faces.clone() {
                    let id = CheckId::Cc {
                        stack,
                        face: f,
                        kind: CheckType::Z,
                    };
                    recipes.push((id, Recipe::Direct(z_stab_decomposition(code, stack, f))));
                }
            }
        }
        Mode::Maximal => {
            for kind in CheckType::ALL {
                for stack in Color::ALL {
                    for f in faces.clone() {
                        let id = CheckId::Cc { stack, face: f, kind };
                        recipes.push((id, table_entry(code, stack, f, kind)));
                    }
                }
            }
            for f in faces.clone() {
                let x_stack = code.hg.faces[f].color.prev();
                let parts = vec![
                    CheckId::Cc {
                        stack: x_stack,
                        face: f,
                        kind: CheckType::X,
                    },
                    CheckId::Cc {
                        stack: x_stack.next(),
                        face: f,
                        kind: CheckType::Y,
                    },
                    CheckId::Cc {
                        stack: x_stack.prev(),
                        face: f,
                        kind: CheckType::Y,
                    },
                ];
                recipes.push((CheckId::W2(f), Recipe::Indirect(parts)));
            }
        }
    }

    let schedule = MeasurementSchedule { mode, rounds, recipes };
    validate_schedule(code, &schedule)?;
    Ok(schedule)
}

/// True if `id` bottoms out in direct recipes without revisiting a check.
fn resolves(schedule: &MeasurementSchedule, id: CheckId, path: &mut Vec<CheckId>) -> bool {
    if path.contains(&id) {
        return false;
    }
    match schedule.recipe(id) {
        None => false,
        Some(Recipe::Direct(_)) => true,
        Some(Recipe::Indirect(parts)) => {
            path.push(id);
            let ok = parts.iter().all(|&p| resolves(schedule, p, path));
            path.pop();
            ok
        }
    }
}

/// Checks every recipe: exact product, round membership and order,
/// sequencing, and that indirect recipes resolve without cycles.
pub fn validate_schedule(code: &TsccCode, schedule: &MeasurementSchedule) -> Result<()> {
    let fail = |id: CheckId, position: usize, reason: String| Error::Schedule {
        check: id.to_string(),
        position,
        reason,
    };
    let in_round: Vec<std::collections::HashSet<GaugeRef>> =
        schedule.rounds.iter().map(|r| r.iter().copied().collect()).collect();
    for (id, recipe) in &schedule.recipes {
        let id = *id;
        match recipe {
            Recipe::Direct(steps) => {
                let mut last = 1;
                for (j, s) in steps.iter().enumerate() {
                    if !(1..=3).contains(&s.round) || !in_round[s.round as usize - 1].contains(&s.op) {
                        return Err(fail(id, j, format!("{:?} is not measured in round {}", s.op, s.round)));
                    }
                    if s.round < last {
                        return Err(fail(id, j, "steps go back to an earlier round".into()));
                    }
                    last = s.round;
                }
                if let Some(j) = sequencing_violation(code, steps) {
                    return Err(fail(id, j, "anticommutes with the product of earlier steps".into()));
                }
                if recipe_product(code, steps) != *target(code, id) {
                    return Err(fail(id, steps.len(), "product differs from the target check".into()));
                }
            }
            Recipe::Indirect(parts) => {
                let mut acc = PauliOperator::identity(code.n());
                for (j, p) in parts.iter().enumerate() {
                    if !resolves(schedule, *p, &mut vec![id]) {
                        return Err(fail(
                            id,
                            j,
                            format!("constituent {p} does not resolve to measured gauge outcomes"),
                        ));
                    }
                    acc *= target(code, *p);
                }
                if acc != *target(code, id) {
                    return Err(fail(
                        id,
                        parts.len(),
                        "constituents do not multiply to the target".into(),
                    ));
                }
            }
        }
    }
    for (r, batch) in schedule.rounds.iter().enumerate() {
        let ops: Vec<&PauliOperator> = batch.iter().map(|&g| gauge_op(code, g)).collect();
        for (i, a) in ops.iter().enumerate() {
            if let Some(j) = ops[i + 1..].iter().position(|b| !a.commutes(b)) {
                return Err(Error::Schedule {
                    check: format!("round {}", r + 1),
                    position: i,
                    reason: format!("batch operator anticommutes with batch operator {}", i + 1 + j),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code4() -> TsccCode {
        TsccCode::new(4).unwrap()
    }

    #[test]
    fn both_schedules_validate_at_d4() {
        let code = code4();
        for mode in [Mode::Partial, Mode::Maximal] {
            build_schedule(&code, mode).unwrap();
        }
    }

    #[test]
    fn round_sizes() {
        let code = code4();
        let f = code.num_faces();
        let p = build_schedule(&code, Mode::Partial).unwrap();
        assert_eq!(p.rounds.each_ref().map(Vec::len), [3 * f, 3 * f, 4 * f]);
        let m = build_schedule(&code, Mode::Maximal).unwrap();
        assert_eq!(m.rounds.each_ref().map(Vec::len), [3 * f, 3 * f, 3 * f]);
    }

    #[test]
    fn single_step_is_valid() {
        let code = code4();
        assert!(validate_sequencing(&code, &[gen_step(&code, 1, 0)]));
        assert!(validate_sequencing(&code, &[]));
    }

    #[test]
    fn some_permutation_of_a_w1_recipe_breaks_sequencing() {
        let code = code4();
        let square = (0..code.num_faces())
            .find(|&f| code.hg.faces[f].corners.len() == 4)
            .unwrap();
        let steps = w1_steps(&code, square);
        assert!(validate_sequencing(&code, &steps));
        let mut found = false;
        for i in 0..steps.len() - 1 {
            let mut swapped = steps.clone();
            swapped.swap(i, i + 1);
            if !validate_sequencing(&code, &swapped) {
                found = true;
            }
        }
        assert!(found, "no adjacent swap violates sequencing");
    }

    #[test]
    fn table_shape() {
        let code = code4();
        let r = Color::Red;
        let face_of = |c: Color| code.hg.faces_of_color(c).next().unwrap();
        let direct = |rec: Recipe| matches!(rec, Recipe::Direct(_));
        assert!(direct(table_entry(&code, r, face_of(Color::Red), CheckType::X)));
        assert!(direct(table_entry(&code, r, face_of(Color::Blue), CheckType::X)));
        assert_eq!(
            table_entry(&code, r, face_of(Color::Green), CheckType::X),
            Recipe::Indirect(vec![
                CheckId::Cc {
                    stack: r,
                    face: face_of(Color::Green),
                    kind: CheckType::Z
                },
                CheckId::Cc {
                    stack: r,
                    face: face_of(Color::Green),
                    kind: CheckType::Y
                },
            ])
        );
        if let Recipe::Direct(steps) = table_entry(&code, r, face_of(Color::Red), CheckType::X) {
            assert!(steps.iter().all(|s| s.round == 1));
        }
    }
}
