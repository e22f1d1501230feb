//! Tower-level analytics over the place engine: rational place counts, genus
//! through Riemann-Hurwitz, the S-set, the odd- and even-case verifiers, the
//! residue-pattern predictor cross-check, and an independent brute-force
//! chain oracle.
//!
//! The predictor here is a transcription of the ramification case analysis
//! on residue chains; it deliberately shares no code with the engine and is
//! compared against it, never trusted by it.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::engine::{
    self, extend, EngineError, InertPolicy, OutcomeKind, Place, SplitOutcome,
};
use crate::gf::{FieldCtx, FieldElement, GfError, ProjectivePoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("an odd extension degree is required (got {0})")]
    NeedOdd(u32),
    #[error("an even extension degree is required (got {0})")]
    NeedEven(u32),
    #[error("constant field degree {0} exceeds the cap of 64")]
    ConstantFieldOverflow(u32),
    #[error("residue chain fits no known pattern at level {level}, branch {branch}")]
    UnclassifiablePattern { branch: String, level: u32 },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// The set S of field elements beta with h(beta) != 0 whose image under
/// beta -> beta/(beta^2+beta+1) has trace zero.
#[derive(Debug, Clone)]
pub struct SSet {
    pub s: u32,
    pub members: Vec<FieldElement>,
}

impl SSet {
    pub fn size(&self) -> u64 {
        self.members.len() as u64
    }
}

/// Exhaustive scan of the field.
pub fn compute_s_set(ctx: &FieldCtx) -> SSet {
    let members = ctx
        .elements()
        .filter(|b| !ctx.h_eval(*b).is_zero())
        .filter(|b| ctx.trace(ctx.f_map(*b).expect("h != 0")) == 0)
        .collect();
    SSet {
        s: ctx.degree(),
        members,
    }
}

/// The five base residues above which the tower may ramify.
pub fn locus_residues(ctx: &FieldCtx) -> Vec<ProjectivePoint> {
    let mut locus = vec![
        ProjectivePoint::Finite(ctx.zero()),
        ProjectivePoint::Finite(ctx.one()),
    ];
    locus.extend(ctx.h_roots().into_iter().map(ProjectivePoint::Finite));
    locus.push(ProjectivePoint::Infinity);
    locus
}

fn chain_starts_in_locus(ctx: &FieldCtx, p: &Place) -> bool {
    locus_residues(ctx).contains(&p.residue_chain()[0])
}

/// Per-level counts from a rational census run (inert places dropped from
/// the frontier, tallied as degree-2).
#[derive(Debug, Clone)]
pub struct RationalCensus {
    pub s: u32,
    /// Rational (degree-one) places at each level 0..=depth.
    pub n: Vec<u64>,
    /// New degree-2 places tallied at each step.
    pub inert2: Vec<u64>,
    /// Ramification events at each step.
    pub ram: Vec<u64>,
    /// Level counts of places whose whole chain is finite and off the
    /// roots of h (the shape the chain oracle counts).
    pub finite_nonroot: Vec<u64>,
    /// Every ramification event had m = 1 (d = 2(e-1)).
    pub weakly_ramified: bool,
    /// Every ramified place's chain starts in the five-point locus.
    pub locus_confined: bool,
    /// Degree bookkeeping at every step:
    /// N_i + 2 inert2_i + (ramified multiplicities) = 2 N_{i-1}.
    pub conservation_ok: bool,
}

pub fn rational_census(
    ctx: &FieldCtx,
    depth: u32,
    window: usize,
) -> Result<RationalCensus, CensusError> {
    let run = engine::extend_tree(engine::root_places(ctx, window), depth, InertPolicy::Tally)?;
    let mut out = RationalCensus {
        s: ctx.degree(),
        n: Vec::new(),
        inert2: Vec::new(),
        ram: Vec::new(),
        finite_nonroot: Vec::new(),
        weakly_ramified: true,
        locus_confined: true,
        conservation_ok: true,
    };
    for level in &run.levels {
        out.n.push(level.places.len() as u64);
        out.inert2.push(level.new_inert2 as u64);
        out.ram.push(level.new_ram.len() as u64);
        out.finite_nonroot.push(
            level
                .places
                .iter()
                .filter(|p| p.chain_is_finite_nonroot())
                .count() as u64,
        );
        for ev in &level.new_ram {
            if ev.m != 1 || ev.d != 2 * (ev.e - 1) {
                out.weakly_ramified = false;
            }
        }
        for p in &level.places {
            if !p.ram_record().is_empty() && !chain_starts_in_locus(ctx, p) {
                out.locus_confined = false;
            }
        }
    }
    for i in 1..out.n.len() {
        if out.n[i] + out.ram[i] + 2 * out.inert2[i] != 2 * out.n[i - 1] {
            out.conservation_ok = false;
        }
    }
    Ok(out)
}

/// Independent census oracle: enumeration of chains (b_0,...,b_i) with
/// h(b_j) != 0 for all j and (b_{j+1}^2 + b_{j+1})(b_j^2 + b_j + 1) = b_j,
/// using only the defining relation (no division, no series, no engine).
pub fn oracle_chain_count(ctx: &FieldCtx, depth: u32) -> Vec<u64> {
    let admissible: Vec<FieldElement> = ctx
        .elements()
        .filter(|b| !ctx.h_eval(*b).is_zero())
        .collect();
    // endpoint value -> number of chains ending there
    let mut frontier: BTreeMap<u64, u64> = BTreeMap::new();
    for b in &admissible {
        *frontier.entry(b.bits()).or_insert(0) += 1;
    }
    let mut counts = vec![frontier.values().sum::<u64>()];
    for _ in 0..depth {
        let mut next: BTreeMap<u64, u64> = BTreeMap::new();
        for (&bits, &mult) in &frontier {
            let b = ctx.el(bits);
            let hb = ctx.h_eval(b);
            for c in &admissible {
                let lhs = ctx.mul(ctx.add(ctx.square(*c), *c), hb);
                if lhs == b {
                    *next.entry(c.bits()).or_insert(0) += mult;
                }
            }
        }
        counts.push(next.values().sum::<u64>());
        frontier = next;
    }
    counts
}

/// Genus columns computed with Riemann-Hurwitz over the trees above the
/// ramification locus.
#[derive(Debug, Clone)]
pub struct GenusTable {
    /// Constant field degree the run settled on (doubling on inert events).
    pub constant_degree: u32,
    pub g: Vec<u64>,
    /// Different-degree sum contributed by each step.
    pub step_diff: Vec<u64>,
    /// The per-step accumulation agrees with the cumulative formula
    /// 2g_i - 2 = -2^(i+1) + sum of transitive different exponents.
    pub cumulative_consistent: bool,
    pub weakly_ramified: bool,
}

pub fn genus_table(
    ctx: &FieldCtx,
    depth: u32,
    window: usize,
) -> Result<GenusTable, CensusError> {
    let s = ctx.degree();
    let mut degree = if s % 2 == 0 { s } else { 2 * s };
    loop {
        if degree > 64 {
            return Err(CensusError::ConstantFieldOverflow(degree));
        }
        // e and d are invariant under constant field extension, so the run
        // happens over a field where all five locus residues are rational;
        // an inert event anywhere above the locus doubles the field.
        let big = if degree == s {
            ctx.clone()
        } else {
            FieldCtx::new(degree)?
        };
        let roots = engine::roots_at(&big, &locus_residues(&big), window);
        match engine::extend_tree(roots, depth, InertPolicy::Error) {
            Err(EngineError::InertEncountered { .. }) => {
                degree *= 2;
                continue;
            }
            Err(e) => return Err(e.into()),
            Ok(run) => {
                let mut g: Vec<i64> = vec![0];
                let mut step_diff = vec![0u64];
                let mut weakly_ramified = true;
                let mut cumulative_consistent = true;
                for (i, level) in run.levels.iter().enumerate().skip(1) {
                    let diff: u64 = level.new_ram.iter().map(|ev| ev.d as u64).sum();
                    for ev in &level.new_ram {
                        if ev.m != 1 {
                            weakly_ramified = false;
                        }
                    }
                    let prev = g[i - 1];
                    // 2g' - 2 = 2(2g - 2) + diff
                    let two_g_minus_2 = 2 * (2 * prev - 2) + diff as i64;
                    assert!(two_g_minus_2 % 2 == 0, "odd different degree sum");
                    g.push(two_g_minus_2 / 2 + 1);
                    step_diff.push(diff);
                    // cumulative check against transitive different exponents
                    let cum: u64 = level.places.iter().map(|p| p.cumulative_d()).sum();
                    let lhs = 2 * g[i] - 2;
                    let rhs = -(1i64 << (i + 1)) + cum as i64;
                    if lhs != rhs {
                        cumulative_consistent = false;
                    }
                }
                return Ok(GenusTable {
                    constant_degree: degree,
                    g: g.into_iter().map(|x| x as u64).collect(),
                    step_diff,
                    cumulative_consistent,
                    weakly_ramified,
                });
            }
        }
    }
}

/// Verdict of the odd-case count check: N is exactly 2(|S|+1) at every
/// level, and within every split pair exactly one member splits while the
/// other goes inert at the next step.
#[derive(Debug, Clone)]
pub struct OddVerdict {
    pub s_size: u64,
    pub n: Vec<u64>,
    pub counts_match: bool,
    pub pair_structure_ok: bool,
    pub no_ramification: bool,
}

impl OddVerdict {
    pub fn ok(&self) -> bool {
        self.counts_match && self.pair_structure_ok && self.no_ramification
    }
}

pub fn verify_odd_case(
    ctx: &FieldCtx,
    depth: u32,
    window: usize,
) -> Result<OddVerdict, CensusError> {
    if ctx.degree() % 2 == 0 {
        return Err(CensusError::NeedOdd(ctx.degree()));
    }
    let s_size = compute_s_set(ctx).size();
    let expected = 2 * (s_size + 1);
    let mut verdict = OddVerdict {
        s_size,
        n: vec![engine::root_places(ctx, window).len() as u64],
        counts_match: true,
        pair_structure_ok: true,
        no_ramification: true,
    };
    let mut frontier = engine::root_places(ctx, window);
    for level in 1..=depth {
        let mut next = Vec::new();
        // outcome kind per extended place, keyed by its branch id
        let mut kind_of: BTreeMap<String, OutcomeKind> = BTreeMap::new();
        for p in &frontier {
            let branch = p.branch_id().to_string();
            match extend(p)? {
                SplitOutcome::Split(a, b) => {
                    kind_of.insert(branch, OutcomeKind::Split);
                    next.push(a);
                    next.push(b);
                }
                SplitOutcome::Inert(_) => {
                    kind_of.insert(branch, OutcomeKind::Inert);
                }
                SplitOutcome::Ramified(c) => {
                    verdict.no_ramification = false;
                    next.push(c);
                }
            }
        }
        // Every place of level >= 1 in the odd case was born in a split
        // pair; siblings share their branch prefix. Each pair must show
        // exactly one split and one inert continuation.
        if level >= 2 {
            let mut by_parent: BTreeMap<&str, Vec<OutcomeKind>> = BTreeMap::new();
            for (branch, kind) in &kind_of {
                by_parent
                    .entry(&branch[..branch.len() - 1])
                    .or_default()
                    .push(*kind);
            }
            for kinds in by_parent.values() {
                let splits = kinds.iter().filter(|k| **k == OutcomeKind::Split).count();
                let inerts = kinds.iter().filter(|k| **k == OutcomeKind::Inert).count();
                if !(kinds.len() == 2 && splits == 1 && inerts == 1) {
                    verdict.pair_structure_ok = false;
                }
            }
        }
        verdict.n.push(next.len() as u64);
        if next.len() as u64 != expected {
            verdict.counts_match = false;
        }
        frontier = next;
    }
    Ok(verdict)
}

/// Verdict of the even-case splitting check: the two poles of x_2 above the
/// zero of x_0 + 1 exist with the expected ramification record, and every
/// descendant splits at every subsequent step.
#[derive(Debug, Clone)]
pub struct EvenVerdict {
    pub pole_count: u64,
    pub poles_ok: bool,
    pub all_descendants_split: bool,
    /// N_i >= 2^(i-1) for i = 2..=depth (from a full rational census).
    pub n_lower_bound_ok: bool,
    pub n: Vec<u64>,
}

impl EvenVerdict {
    pub fn ok(&self) -> bool {
        self.pole_count == 2
            && self.poles_ok
            && self.all_descendants_split
            && self.n_lower_bound_ok
    }
}

pub fn verify_even_splitting(
    ctx: &FieldCtx,
    depth: u32,
    window: usize,
) -> Result<EvenVerdict, CensusError> {
    if ctx.degree() % 2 == 1 {
        return Err(CensusError::NeedEven(ctx.degree()));
    }
    let one_root = engine::roots_at(ctx, &[ProjectivePoint::Finite(ctx.one())], window);
    let to_level2 = engine::extend_tree(one_root, 2.min(depth), InertPolicy::Tally)?;
    let level2 = &to_level2.levels[to_level2.levels.len() - 1].places;
    let poles: Vec<&Place> = level2
        .iter()
        .filter(|p| p.residue_chain().last() == Some(&ProjectivePoint::Infinity))
        .collect();
    let mut verdict = EvenVerdict {
        pole_count: poles.len() as u64,
        poles_ok: true,
        all_descendants_split: true,
        n_lower_bound_ok: true,
        n: Vec::new(),
    };
    for p in &poles {
        let rec = p.ram_record();
        if rec.len() != 1 || rec[0].e != 2 || rec[0].m != 1 || rec[0].d != 2 {
            verdict.poles_ok = false;
        }
    }
    // every descendant of the two poles splits at every later step
    let mut frontier: Vec<Place> = poles.into_iter().cloned().collect();
    for _ in 2..depth {
        let mut next = Vec::new();
        for p in &frontier {
            match extend(p)? {
                SplitOutcome::Split(a, b) => {
                    next.push(a);
                    next.push(b);
                }
                _ => {
                    verdict.all_descendants_split = false;
                }
            }
        }
        frontier = next;
    }
    let census = rational_census(ctx, depth, window)?;
    for (i, &n) in census.n.iter().enumerate().skip(2) {
        if n < (1u64 << (i - 1)) {
            verdict.n_lower_bound_ok = false;
        }
    }
    verdict.n = census.n;
    Ok(verdict)
}

// ---------------------------------------------------------------------------
// The residue-pattern predictor (shares no code with the engine).

/// Position of a place inside the repeating chain patterns above the zero
/// of x_0 + 1, together with the order of vanishing of x_k + 1 at the most
/// recent zero of x_k + 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AutomatonState {
    pub pos: PatternPos,
    /// nu(x_k + 1) at the governing zero of x_k + 1: 1 or 2.
    pub one_nu: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatternPos {
    /// At a zero of x_k + 1.
    AtOne,
    /// At a zero of x_{k+1} + beta for an h-root beta, directly above one.
    BetaAfterOne,
    /// At a pole of x_{k+2} above the h-root zero.
    PoleAfterBeta,
    /// Inside a run of zeros of x_j above such a pole.
    ZeroRun,
}

#[derive(Debug, Clone)]
pub struct Disagreement {
    pub branch: String,
    pub level: u32,
    pub predicted: OutcomeKind,
    pub engine: OutcomeKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ChildClass {
    Zero,
    One,
    HRoot,
    Pole,
}

/// Predicted outcome and the residue classes of the predicted children.
/// The zero of x_k + 1 splits into the two h-root zeros, whose fate is the
/// two-valued ramification condition: order 1 ramifies totally, order 2
/// splits into two poles; poles and zeros themselves always split into a
/// zero and a zero-of-x+1.
fn predict(state: AutomatonState) -> (OutcomeKind, Vec<(ChildClass, AutomatonState)>) {
    use PatternPos::*;
    let beta_state = AutomatonState {
        pos: BetaAfterOne,
        one_nu: state.one_nu,
    };
    let pole_state = AutomatonState {
        pos: PoleAfterBeta,
        one_nu: 2,
    };
    match (state.pos, state.one_nu) {
        (AtOne, _) => (
            OutcomeKind::Split,
            vec![(ChildClass::HRoot, beta_state), (ChildClass::HRoot, beta_state)],
        ),
        (BetaAfterOne, 1) => (OutcomeKind::Ramified, vec![(ChildClass::Pole, pole_state)]),
        (BetaAfterOne, _) => (
            OutcomeKind::Split,
            vec![(ChildClass::Pole, pole_state), (ChildClass::Pole, pole_state)],
        ),
        (PoleAfterBeta | ZeroRun, _) => (
            OutcomeKind::Split,
            vec![
                (
                    ChildClass::Zero,
                    AutomatonState {
                        pos: ZeroRun,
                        one_nu: 2,
                    },
                ),
                (
                    ChildClass::One,
                    AutomatonState {
                        pos: AtOne,
                        one_nu: 2,
                    },
                ),
            ],
        ),
    }
}

fn classify(ctx: &FieldCtx, p: ProjectivePoint) -> Option<ChildClass> {
    match p {
        ProjectivePoint::Infinity => Some(ChildClass::Pole),
        ProjectivePoint::Finite(b) => {
            if b == ctx.zero() {
                Some(ChildClass::Zero)
            } else if b == ctx.one() {
                Some(ChildClass::One)
            } else if ctx.h_eval(b).is_zero() {
                Some(ChildClass::HRoot)
            } else {
                None
            }
        }
    }
}

/// Walk every place above the zero of x_0 + 1, predict each step from the
/// residue pattern alone, and compare with the engine's independent
/// decision. Returns all disagreements (expected: none).
pub fn automaton_crosscheck(
    ctx: &FieldCtx,
    depth: u32,
    window: usize,
) -> Result<Vec<Disagreement>, CensusError> {
    if ctx.degree() != 2 {
        return Err(CensusError::NeedEven(ctx.degree()));
    }
    let root = engine::roots_at(ctx, &[ProjectivePoint::Finite(ctx.one())], window)
        .pop()
        .expect("one root");
    let mut disagreements = Vec::new();
    let mut frontier: Vec<(Place, AutomatonState)> = vec![(
        root,
        AutomatonState {
            pos: PatternPos::AtOne,
            one_nu: 1,
        },
    )];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (place, state) in &frontier {
            let (predicted_kind, children_pred) = predict(*state);
            let outcome = extend(place)?;
            if outcome.kind() != predicted_kind {
                disagreements.push(Disagreement {
                    branch: place.branch_id().to_string(),
                    level: place.level(),
                    predicted: predicted_kind,
                    engine: outcome.kind(),
                });
                continue;
            }
            let children: Vec<Place> = match outcome {
                SplitOutcome::Split(a, b) => vec![a, b],
                SplitOutcome::Ramified(c) => vec![c],
                SplitOutcome::Inert(_) => vec![],
            };
            // match engine children to predicted classes by residue
            let mut remaining = children_pred.clone();
            for child in children {
                let class = classify(ctx, *child.residue_chain().last().unwrap())
                    .ok_or_else(|| CensusError::UnclassifiablePattern {
                        branch: child.branch_id().to_string(),
                        level: child.level(),
                    })?;
                let Some(idx) = remaining.iter().position(|(c, _)| *c == class) else {
                    return Err(CensusError::UnclassifiablePattern {
                        branch: child.branch_id().to_string(),
                        level: child.level(),
                    });
                };
                let (_, st) = remaining.swap_remove(idx);
                next.push((child, st));
            }
        }
        frontier = next;
    }
    Ok(disagreements)
}

// ---------------------------------------------------------------------------
// Assembled report.

#[derive(Debug, Clone, Serialize)]
pub struct LevelRow {
    pub i: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub inert2: u64,
    pub g: u64,
    pub nu: f64,
    pub gamma: f64,
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub s: u32,
    pub levels: Vec<LevelRow>,
    pub verdicts: BTreeMap<String, bool>,
}

/// Assemble counts, genus, rate columns, and the verdict flags for the
/// requested parity.
pub fn limit_report(
    ctx: &FieldCtx,
    depth: u32,
    window: usize,
) -> Result<CensusReport, CensusError> {
    let census = rational_census(ctx, depth, window)?;
    let genus = genus_table(ctx, depth, window)?;
    let mut verdicts = BTreeMap::new();
    let mut levels = Vec::new();
    let mut gamma_bounded = true;
    let mut gamma_monotone = true;
    let mut lambda_ok = true;
    for i in 0..=depth as usize {
        let n = census.n[i];
        let g = genus.g[i];
        let pow = (1u64 << i) as f64;
        levels.push(LevelRow {
            i: i as u32,
            n,
            inert2: census.inert2[i],
            g,
            nu: n as f64 / pow,
            gamma: g as f64 / pow,
            lambda: if g >= 1 {
                Some(n as f64 / g as f64)
            } else {
                None
            },
        });
        if g > 4 * (1u64 << i) {
            gamma_bounded = false;
        }
        if i > 0 && 2 * genus.g[i - 1] > g {
            gamma_monotone = false;
        }
        if g >= 1 && 8 * n < g {
            lambda_ok = false;
        }
    }
    verdicts.insert("gamma_at_most_4".into(), gamma_bounded);
    verdicts.insert("gamma_monotone".into(), gamma_monotone);
    verdicts.insert(
        "weakly_ramified".into(),
        census.weakly_ramified && genus.weakly_ramified,
    );
    verdicts.insert("ramification_locus_confined".into(), census.locus_confined);
    verdicts.insert("degree_conservation".into(), census.conservation_ok);
    verdicts.insert(
        "riemann_hurwitz_consistent".into(),
        genus.cumulative_consistent,
    );
    if ctx.degree() % 2 == 1 {
        let odd = verify_odd_case(ctx, depth, window)?;
        verdicts.insert("odd_count_constant".into(), odd.counts_match);
        verdicts.insert("odd_pair_structure".into(), odd.pair_structure_ok);
        // nu halves to zero exactly when N is the constant 2(|S|+1)
        verdicts.insert("nu_halves_to_zero".into(), odd.counts_match);
    } else {
        let even = verify_even_splitting(ctx, depth, window)?;
        verdicts.insert("even_poles_split_completely".into(), even.ok());
        verdicts.insert("n_at_least_2_pow_i_minus_1".into(), even.n_lower_bound_ok);
        verdicts.insert("lambda_at_least_one_eighth".into(), lambda_ok);
    }
    Ok(CensusReport {
        s: ctx.degree(),
        levels,
        verdicts,
    })
}

impl CensusReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.values().all(|v| *v)
    }

    /// Tab-separated table, one row per level; lambda shows an em dash
    /// until the genus is positive.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("i\tN\tinert2\tg\tnu\tgamma\tlambda\n");
        for row in &self.levels {
            let lambda = match row.lambda {
                Some(l) => format!("{l:.6}"),
                None => "—".to_string(),
            };
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{}\n",
                row.i, row.n, row.inert2, row.g, row.nu, row.gamma, lambda
            ));
        }
        for (name, ok) in &self.verdicts {
            out.push_str(&format!(
                "# verdict\t{}\t{}\n",
                name,
                if *ok { "PASS" } else { "FAIL" }
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
