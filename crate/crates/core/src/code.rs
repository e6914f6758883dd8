//! The subsystem color code built on the inflated hypergraph: gauge
//! generators, the two stabilizer families, the three color-code stacks, the
//! four-body rectangle operators, and bare logical operators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec, RowSpace};
use crate::lattice::{Color, EdgeKind, Hypergraph};
use crate::pauli::{OperatorSet, Pauli, PauliOperator};

/// Pauli type of a color-code check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckType {
    X,
    Y,
    Z,
}

impl CheckType {
    pub const ALL: [CheckType; 3] = [CheckType::X, CheckType::Y, CheckType::Z];

    pub fn pauli(self) -> Pauli {
        match self {
            CheckType::X => Pauli::X,
            CheckType::Y => Pauli::Y,
            CheckType::Z => Pauli::Z,
        }
    }

    fn idx(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GaugeKind {
    XX,
    YY,
    ZZ,
}

/// Provenance of one two-body gauge generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GaugeSource {
    /// A rank-2 edge of the hypergraph.
    Edge(usize),
    /// A pair of corners of the triangle at this colex vertex.
    Triangle { vertex: usize, pair: [Color; 2] },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaugeGenerator {
    pub kind: GaugeKind,
    pub qubits: [usize; 2],
    pub source: GaugeSource,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    /// Gauge qubits.
    pub r: usize,
    /// Independent stabilizer generators.
    pub s: usize,
}

/// Outcome of one named structural check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl InvariantReport {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

/// Immutable code object shared by schedules, decoders and simulations.
#[derive(Clone, Debug)]
pub struct TsccCode {
    pub hg: Hypergraph,
    pub params: CodeParams,
    /// Order: every XX edge, every YY edge, then two ZZ pairs per triangle.
    pub gauge: OperatorSet,
    pub gauge_meta: Vec<GaugeGenerator>,
    /// Gauge index of each rank-2 edge.
    pub edge_gauge: Vec<usize>,
    /// Gauge index of `Z_r Z_g` at each triangle; `Z_g Z_b` follows it.
    pub zz_base: Vec<usize>,
    pub w1: Vec<PauliOperator>,
    pub w2: Vec<PauliOperator>,
    /// `cc[stack][type][face]`.
    cc: [[Vec<PauliOperator>; 3]; 3],
    /// Z on the four corners of each rectangle.
    pub four_body: Vec<PauliOperator>,
    /// Symplectic pairs `(X̄1, Z̄1, X̄2, Z̄2)`.
    pub logicals: [PauliOperator; 4],
}

impl TsccCode {
    /// Builds the code for distance `d` and runs every structural check.
    pub fn new(d: usize) -> Result<Self> {
        Self::build(crate::lattice::hypergraph(d)?)
    }

    /// Builds the code and fails with the first violated relation.
    pub fn build(hg: Hypergraph) -> Result<Self> {
        let code = Self::assemble(hg)?;
        if let Some(bad) = code.check_invariants().into_iter().find(|r| !r.passed) {
            return Err(Error::Invariant {
                relation: bad.name.to_string(),
                detail: bad.detail,
            });
        }
        Ok(code)
    }

    /// Builds all operators without running the structural checks.
    pub fn assemble(hg: Hypergraph) -> Result<Self> {
        let n = hg.n;
        let mut gauge = OperatorSet::new(n);
        let mut meta = Vec::new();
        let mut edge_gauge = vec![usize::MAX; hg.rank2.len()];
        for (kind, edge_kind, p) in [
            (GaugeKind::XX, EdgeKind::Dashed, Pauli::X),
            (GaugeKind::YY, EdgeKind::Solid, Pauli::Y),
        ] {
            for (ei, e) in hg.rank2.iter().enumerate().filter(|(_, e)| e.kind == edge_kind) {
                edge_gauge[ei] = gauge.len();
                gauge.push(PauliOperator::uniform(n, e.qubits, p));
                meta.push(GaugeGenerator {
                    kind,
                    qubits: e.qubits,
                    source: GaugeSource::Edge(ei),
                });
            }
        }
        let mut zz_base = Vec::with_capacity(hg.rank3.len());
        for (v, tri) in hg.rank3.iter().enumerate() {
            zz_base.push(gauge.len());
            for pair in [[Color::Red, Color::Green], [Color::Green, Color::Blue]] {
                let qubits = [tri[pair[0].idx()], tri[pair[1].idx()]];
                gauge.push(PauliOperator::uniform(n, qubits, Pauli::Z));
                meta.push(GaugeGenerator {
                    kind: GaugeKind::ZZ,
                    qubits,
                    source: GaugeSource::Triangle { vertex: v, pair },
                });
            }
        }

        let stack_qubits = |f: usize, c: Color| hg.faces[f].triangles.iter().map(move |&v| Hypergraph::qubit(v, c));
        let num_faces = hg.faces.len();
        let w1: Vec<PauliOperator> = (0..num_faces)
            .map(|f| PauliOperator::uniform(n, hg.faces[f].corners.iter().copied(), Pauli::Z))
            .collect();
        let w2: Vec<PauliOperator> = (0..num_faces)
            .map(|f| {
                let x_stack = hg.faces[f].color.prev();
                PauliOperator::from_paulis(
                    n,
                    Color::ALL.into_iter().flat_map(|c| {
                        let p = if c == x_stack { Pauli::X } else { Pauli::Y };
                        stack_qubits(f, c).map(move |q| (q, p))
                    }),
                )
            })
            .collect();
        let cc = Color::ALL.map(|c| {
            CheckType::ALL.map(|t| {
                (0..num_faces)
                    .map(|f| PauliOperator::uniform(n, stack_qubits(f, c), t.pauli()))
                    .collect()
            })
        });
        let four_body = hg
            .rects
            .iter()
            .map(|r| PauliOperator::uniform(n, r.qubits, Pauli::Z))
            .collect();

        let stabs = OperatorSet::from_ops(n, w1.iter().chain(&w2).cloned().collect());
        let gauge_rank = gauge.rank();
        let s = stabs.rank();
        if gauge_rank < s || (gauge_rank - s) % 2 != 0 || n < (gauge_rank - s) / 2 + s {
            return Err(Error::Invariant {
                relation: "parameters".into(),
                detail: format!("rank(G) = {gauge_rank}, rank(S) = {s} are inconsistent"),
            });
        }
        let r = (gauge_rank - s) / 2;
        let params = CodeParams { n, k: n - r - s, r, s };
        let logicals = bare_logicals(&gauge, &stabs, params.k)?;

        Ok(Self {
            hg,
            params,
            gauge,
            gauge_meta: meta,
            edge_gauge,
            zz_base,
            w1,
            w2,
            cc,
            four_body,
            logicals,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.hg.n
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.hg.d()
    }

    #[inline]
    pub fn num_faces(&self) -> usize {
        self.hg.faces.len()
    }

    /// The color-code check of Pauli type `t` on face `f` of `stack`.
    #[inline]
    pub fn cc_stab(&self, stack: Color, face: usize, t: CheckType) -> &PauliOperator {
        &self.cc[stack.idx()][t.idx()][face]
    }

    pub fn cc_stabs(&self, stack: Color, t: CheckType) -> &[PauliOperator] {
        &self.cc[stack.idx()][t.idx()]
    }

    /// Gauge index of the ZZ operator on two corners of triangle `v`. The
    /// `(r, b)` pair is not a generator and needs two; see [`Self::zz_pair`].
    pub fn zz_generator(&self, v: usize, a: Color, b: Color) -> Option<usize> {
        match (a.min(b), a.max(b)) {
            (Color::Red, Color::Green) => Some(self.zz_base[v]),
            (Color::Green, Color::Blue) => Some(self.zz_base[v] + 1),
            _ => None,
        }
    }

    /// Gauge indices whose product is `Z_a Z_b` on triangle `v`.
    pub fn zz_pair(&self, v: usize, a: Color, b: Color) -> Vec<usize> {
        match self.zz_generator(v, a, b) {
            Some(g) => vec![g],
            None => vec![self.zz_base[v], self.zz_base[v] + 1],
        }
    }

    pub fn stabilizers(&self) -> OperatorSet {
        OperatorSet::from_ops(self.n(), self.w1.iter().chain(&self.w2).cloned().collect())
    }

    /// Color-code checks of one stack: X-type rows then Z-type rows.
    pub fn stack_checks(&self, stack: Color) -> OperatorSet {
        OperatorSet::from_ops(
            self.n(),
            self.cc_stabs(stack, CheckType::X)
                .iter()
                .chain(self.cc_stabs(stack, CheckType::Z))
                .cloned()
                .collect(),
        )
    }

    pub fn logical_set(&self) -> OperatorSet {
        OperatorSet::from_ops(self.n(), self.logicals.to_vec())
    }

    /// Every named structural relation, evaluated independently.
    pub fn check_invariants(&self) -> Vec<InvariantReport> {
        let f = self.num_faces();
        let d = self.d();
        let p = self.params;
        let mut out = Vec::new();

        out.push(InvariantReport::new(
            "parameters",
            p.n == 3 * d * d && p.k == 2 && p.r == 4 * f && p.s == 2 * f - 2 && p.r == 2 * d * d,
            format!("n={} k={} r={} s={} (|F|={f})", p.n, p.k, p.r, p.s),
        ));
        let gauge_rank = self.gauge.rank();
        out.push(InvariantReport::new(
            "gauge-rank",
            self.gauge.len() == 10 * f && gauge_rank == 10 * f - 2,
            format!("{} generators, rank {gauge_rank}", self.gauge.len()),
        ));

        let stabs = self.stabilizers();
        let stab_rank = stabs.rank();
        out.push(InvariantReport::new(
            "stabilizer-rank",
            stab_rank == 2 * f - 2,
            format!("rank {stab_rank} over {} generators", stabs.len()),
        ));
        out.push(check_commute_all(
            "stabilizers-commute-with-gauge",
            stabs.ops(),
            self.gauge.ops(),
        ));
        let gauge_space = self.gauge.row_space();
        out.push(check_in_span("stabilizers-in-gauge-group", stabs.ops(), &gauge_space));

        let faces_of = |c: Color| self.hg.faces_of_color(c).collect::<Vec<_>>();
        let prod = |ops: &[PauliOperator], faces: &[usize]| {
            let mut acc = PauliOperator::identity(self.n());
            for &i in faces {
                acc *= &ops[i];
            }
            acc
        };
        let (fr, fg, fb) = (faces_of(Color::Red), faces_of(Color::Green), faces_of(Color::Blue));
        let lhs = &prod(&self.w2, &fr) * &prod(&self.w2, &fg);
        let rhs = &prod(&self.w1, &fb) * &prod(&self.w1, &fr);
        out.push(InvariantReport::new(
            "dependency-w2-rg",
            lhs == rhs,
            format!("residual {}", &lhs * &rhs),
        ));
        let lhs = &prod(&self.w2, &fr) * &prod(&self.w2, &fb);
        let rhs = &prod(&self.w1, &fg) * &prod(&self.w1, &fb);
        out.push(InvariantReport::new(
            "dependency-w2-rb",
            lhs == rhs,
            format!("residual {}", &lhs * &rhs),
        ));
        let null = stabs.matrix().transpose().nullspace_basis().len();
        out.push(InvariantReport::new(
            "stabilizer-dependency-count",
            null == 2,
            format!("{null} dependencies among {} generators", stabs.len()),
        ));

        let mut cc_ok = true;
        let mut cc_detail = String::new();
        for c in Color::ALL {
            for t in CheckType::ALL {
                let ops = self.cc_stabs(c, t);
                let all = PauliOperator::uniform(
                    self.n(),
                    (0..self.n()).filter(|&q| Hypergraph::stack_of(q) == c),
                    t.pauli(),
                );
                for faces in [&fr, &fg, &fb] {
                    if prod(ops, faces) != all {
                        cc_ok = false;
                        cc_detail = format!("stack {c}, type {t:?}");
                    }
                }
            }
            let rank = self.stack_checks(c).rank();
            if rank != 2 * f - 4 {
                cc_ok = false;
                cc_detail = format!("stack {c} has rank {rank}, expected {}", 2 * f - 4);
            }
        }
        out.push(InvariantReport::new("color-code-dependencies", cc_ok, cc_detail));

        let all_cc: Vec<PauliOperator> = Color::ALL
            .iter()
            .flat_map(|&c| {
                CheckType::ALL
                    .iter()
                    .flat_map(move |&t| self.cc_stabs(c, t).iter().cloned())
            })
            .collect();
        out.push(check_commute_all("color-codes-abelian", &all_cc, &all_cc));
        out.push(check_commute_all(
            "color-codes-commute-with-stabilizers",
            &all_cc,
            stabs.ops(),
        ));
        out.push(check_in_span("color-codes-in-gauge-group", &all_cc, &gauge_space));
        // A rectangle between faces of colors a and b touches stack a on two
        // adjacent corners of the a-face, so it commutes with own-color checks
        // of every stack but not with checks on the third face at a corner.
        let own_color_cc: Vec<PauliOperator> = Color::ALL
            .iter()
            .flat_map(|&c| {
                let z = self.cc_stabs(c, CheckType::Z).iter().cloned();
                let own = self
                    .hg
                    .faces_of_color(c)
                    .flat_map(move |f| [CheckType::X, CheckType::Y].map(|t| self.cc_stab(c, f, t).clone()));
                z.chain(own).collect::<Vec<_>>()
            })
            .collect();
        out.push(check_commute_all(
            "four-body-commutes-with-own-color-checks",
            &self.four_body,
            &own_color_cc,
        ));
        out.push(check_commute_all(
            "four-body-commutes-with-stabilizers",
            &self.four_body,
            stabs.ops(),
        ));
        out.push(check_commute_all(
            "four-body-mutually-commute",
            &self.four_body,
            &self.four_body,
        ));
        out.push(check_in_span("four-body-in-gauge-group", &self.four_body, &gauge_space));

        let mut hyper_ok = true;
        let mut hyper_detail = String::new();
        for face in 0..f {
            let x_stack = self.hg.faces[face].color.prev();
            let mut acc = self.cc_stab(x_stack, face, CheckType::X).clone();
            acc *= self.cc_stab(x_stack.next(), face, CheckType::Y);
            acc *= self.cc_stab(x_stack.prev(), face, CheckType::Y);
            if acc != self.w2[face] {
                hyper_ok = false;
                hyper_detail = format!("face {face}");
            }
        }
        out.push(InvariantReport::new("hypercycle-identity", hyper_ok, hyper_detail));

        let l = &self.logicals;
        let pairing = (0..4).all(|i| {
            (0..4).all(|j| {
                let expect_anti = i != j && i / 2 == j / 2;
                l[i].commutes(&l[j]) != expect_anti
            })
        });
        out.push(InvariantReport::new(
            "logical-pairing",
            pairing,
            format!("weights {:?}", l.iter().map(PauliOperator::weight).collect::<Vec<_>>()),
        ));
        out.push(check_commute_all("logicals-commute-with-gauge", l, self.gauge.ops()));
        let outside = l.iter().all(|op| !gauge_space.contains(&op.symplectic()));
        out.push(InvariantReport::new("logicals-outside-gauge-group", outside, ""));
        out
    }
}

fn check_commute_all(name: &'static str, a: &[PauliOperator], b: &[PauliOperator]) -> InvariantReport {
    for (i, x) in a.iter().enumerate() {
        if let Some(j) = b.iter().position(|y| !x.commutes(y)) {
            return InvariantReport::new(name, false, format!("operator {i} anticommutes with {j}"));
        }
    }
    InvariantReport::new(name, true, format!("{} x {} pairs", a.len(), b.len()))
}

fn check_in_span(name: &'static str, ops: &[PauliOperator], space: &RowSpace) -> InvariantReport {
    match ops.iter().position(|op| !space.contains(&op.symplectic())) {
        Some(i) => InvariantReport::new(name, false, format!("operator {i} is outside the span")),
        None => InvariantReport::new(name, true, format!("{} operators", ops.len())),
    }
}

/// Basis of the centralizer `C(G)` as symplectic vectors `[x | z]`.
pub fn centralizer_basis(gauge: &OperatorSet) -> Vec<BitVec> {
    let n = gauge.n();
    let swap: Vec<usize> = (n..2 * n).chain(0..n).collect();
    let m: BitMatrix = gauge
        .matrix()
        .column_submatrix(&swap)
        .expect("swap permutation is in range");
    m.nullspace_basis()
}

#[inline]
fn omega(a: &BitVec, b: &BitVec) -> bool {
    let n = a.len() / 2;
    a.slice(0, n).dot(&b.slice(n, n)) ^ a.slice(n, n).dot(&b.slice(0, n))
}

fn sym_weight(words: &[u64], nw: usize) -> usize {
    (0..nw).map(|i| (words[i] | words[nw + i]).count_ones() as usize).sum()
}

/// Bare logical operators: `C(G)` modulo the stabilizer, in symplectic pairs,
/// each reduced in weight by multiplying with stabilizers.
fn bare_logicals(gauge: &OperatorSet, stabs: &OperatorSet, k: usize) -> Result<[PauliOperator; 4]> {
    let n = gauge.n();
    let cg = centralizer_basis(gauge);
    let mut space = stabs.row_space();
    let mut reps: Vec<BitVec> = cg.iter().filter(|v| space.insert((*v).clone())).cloned().collect();
    if reps.len() != 2 * k || k != 2 {
        return Err(Error::Invariant {
            relation: "logical-count".into(),
            detail: format!("found {} logical directions, expected 4", reps.len()),
        });
    }

    // Symplectic Gram-Schmidt on the quotient.
    let mut basis = Vec::with_capacity(4);
    while let Some(a) = reps.pop() {
        let Some(pos) = reps.iter().position(|b| omega(&a, b)) else {
            return Err(Error::Invariant {
                relation: "logical-pairing".into(),
                detail: "degenerate symplectic form on C(G)/S".into(),
            });
        };
        let b = reps.swap_remove(pos);
        for u in reps.iter_mut() {
            let (ua, ub) = (omega(u, &a), omega(u, &b));
            if ub {
                u.xor_assign(&a);
            }
            if ua {
                u.xor_assign(&b);
            }
        }
        basis.push(a);
        basis.push(b);
    }

    let ops: Vec<PauliOperator> = if cg.len() <= 20 {
        lightest_by_class(&cg, &basis)
    } else {
        let stab_vecs: Vec<BitVec> = stabs.iter().map(PauliOperator::symplectic).collect();
        basis.iter().map(|v| greedy_reduce(v.clone(), &stab_vecs)).collect()
    }
    .into_iter()
    .map(|v| PauliOperator::from_symplectic(&v))
    .collect();
    debug_assert!(ops.iter().all(|o| o.n() == n));
    Ok(ops.try_into().expect("exactly four logicals"))
}

fn greedy_reduce(mut v: BitVec, stabs: &[BitVec]) -> BitVec {
    let weight = |v: &BitVec| PauliOperator::from_symplectic(v).weight();
    let mut best = weight(&v);
    loop {
        let mut improved = false;
        for s in stabs {
            let mut t = v.clone();
            t.xor_assign(s);
            let w = weight(&t);
            if w < best {
                best = w;
                v = t;
                improved = true;
            }
        }
        if !improved {
            return v;
        }
    }
}

/// Enumerates all of `C(G)`, keeps the lightest element of every logical
/// class, and assembles a symplectic basis from the lightest classes.
fn lightest_by_class(cg: &[BitVec], basis: &[BitVec]) -> Vec<BitVec> {
    let len = cg[0].len();
    let n = len / 2;
    // Pack x and z halves separately so weights are word popcounts.
    let pack = |v: &BitVec| {
        let mut w = v.slice(0, n).words().to_vec();
        w.extend_from_slice(v.slice(n, n).words());
        w
    };
    let nw = n.div_ceil(64);
    // Class coordinates relative to (X1, Z1, X2, Z2): the X_i coefficient is
    // the pairing with Z_i and vice versa.
    let class_of = |v: &BitVec| (0..4).fold(0usize, |acc, i| acc | (usize::from(omega(v, &basis[i ^ 1])) << i));
    let gens: Vec<(Vec<u64>, usize)> = cg.iter().map(|v| (pack(v), class_of(v))).collect();

    let mut best: Vec<Option<(usize, Vec<u64>)>> = vec![None; 16];
    let mut cur = vec![0u64; 2 * nw];
    let mut cls = 0usize;
    for step in 1u64..(1u64 << gens.len()) {
        let bit = step.trailing_zeros() as usize;
        for (a, b) in cur.iter_mut().zip(&gens[bit].0) {
            *a ^= b;
        }
        cls ^= gens[bit].1;
        if cls == 0 {
            continue;
        }
        let w = sym_weight(&cur, nw);
        if best[cls].as_ref().map_or(true, |(bw, _)| w < *bw) {
            best[cls] = Some((w, cur.clone()));
        }
    }
    let weight = |c: usize| best[c].as_ref().map_or(usize::MAX, |(w, _)| *w);
    // Symplectic form on class labels (bits X1, Z1, X2, Z2).
    let form = |a: usize, b: usize| {
        let swapped = ((b & 0b0101) << 1) | ((b & 0b1010) >> 1);
        (a & swapped).count_ones() % 2 == 1
    };
    let pick = |filter: &dyn Fn(usize) -> bool| {
        (1..16)
            .filter(|&c| filter(c))
            .min_by_key(|&c| (weight(c), c))
            .expect("class exists")
    };
    let a = pick(&|_| true);
    let b = pick(&|c| form(a, c));
    let c = pick(&|c| !form(a, c) && !form(b, c));
    let e = pick(&|x| !form(a, x) && !form(b, x) && form(c, x));
    [a, b, c, e]
        .into_iter()
        .map(|cl| {
            let (_, words) = best[cl].clone().expect("class populated");
            let mut v = BitVec::zeros(len);
            for q in 0..n {
                if (words[q / 64] >> (q % 64)) & 1 == 1 {
                    v.set(q, true);
                }
                if (words[nw + q / 64] >> (q % 64)) & 1 == 1 {
                    v.set(n + q, true);
                }
            }
            v
        })
        .collect()
}
