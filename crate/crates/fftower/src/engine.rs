//! The place-splitting engine.
//!
//! Given a degree-one place of the level-i function field as local data (the
//! expansion of x_i in a uniformizer), [`extend`] computes all places above
//! it one level up: split, inert, or ramified. The decision procedure is
//! Kummer reduction plus Artin-Schreier pole-order reduction; nothing here
//! consults the residue-pattern predictor, which is validated *against*
//! this engine from the census module.

use std::sync::Arc;

use thiserror::Error;

use crate::gf::{FieldCtx, FieldElement, GfError, ProjectivePoint};
use crate::series::{LaurentSeries, SeriesError};

/// Default series window (coefficients of guaranteed precision).
pub const DEFAULT_WINDOW: usize = 64;

/// Internal precision retries double the window this many times.
const MAX_RETRIES: u32 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("series precision exhausted (window {0})")]
    Precision(usize),
    #[error("ramified continuation failed its self-test: {0}")]
    SelfTest(&'static str),
    #[error("inert place at level {level} on branch {branch}")]
    InertEncountered { branch: String, level: u32 },
    #[error(transparent)]
    Series(SeriesError),
    #[error(transparent)]
    Field(#[from] GfError),
}

impl From<SeriesError> for EngineError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::PrecisionExhausted => EngineError::Precision(0),
            other => EngineError::Series(other),
        }
    }
}

/// One ramification event: the step F_{level+1}/F_level at which a place
/// was totally ramified, with reduced pole order m and different exponent d.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RamEvent {
    pub level: u32,
    pub e: u32,
    pub m: u32,
    pub d: u32,
}

#[derive(Clone)]
enum Lineage {
    Root {
        residue: ProjectivePoint,
    },
    Split {
        parent: Arc<Place>,
        theta: FieldElement,
    },
    Ramified {
        parent: Arc<Place>,
    },
    Inert {
        parent: Arc<Place>,
    },
}

/// A degree-one place of the level-i field, given by local data at that
/// place: the residue chain x_0(P),...,x_i(P), the expansion of x_i in the
/// current uniformizer, and the accumulated ramification record.
#[derive(Clone)]
pub struct Place {
    ctx: FieldCtx,
    level: u32,
    residue_chain: Vec<ProjectivePoint>,
    x_series: LaurentSeries,
    ram_record: Vec<RamEvent>,
    residue_degree: u32,
    branch_id: String,
    window: usize,
    lineage: Lineage,
}

impl std::fmt::Debug for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Place(level={}, branch={}, chain={:?}, deg={})",
            self.level, self.branch_id, self.residue_chain, self.residue_degree
        )
    }
}

impl Place {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn residue_chain(&self) -> &[ProjectivePoint] {
        &self.residue_chain
    }

    pub fn x_series(&self) -> &LaurentSeries {
        &self.x_series
    }

    pub fn ram_record(&self) -> &[RamEvent] {
        &self.ram_record
    }

    pub fn residue_degree(&self) -> u32 {
        self.residue_degree
    }

    pub fn branch_id(&self) -> &str {
        &self.branch_id
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// Total ramification index over the level-0 restriction.
    pub fn total_e(&self) -> u64 {
        self.ram_record.iter().map(|r| r.e as u64).product()
    }

    /// Different exponent over the level-0 restriction (transitivity).
    pub fn cumulative_d(&self) -> u64 {
        let mut d: u64 = 0;
        for ev in &self.ram_record {
            d = ev.d as u64 + ev.e as u64 * d;
        }
        d
    }

    /// True when every chain entry is finite and avoids the roots of
    /// T^2+T+1 (the shape counted by the brute-force chain oracle).
    pub fn chain_is_finite_nonroot(&self) -> bool {
        self.residue_chain.iter().all(|p| match p {
            ProjectivePoint::Finite(b) => !self.ctx.h_eval(*b).is_zero(),
            ProjectivePoint::Infinity => false,
        })
    }

    /// Rebuild this place from its root with a larger series window.
    pub fn with_window(&self, window: usize) -> Result<Place, EngineError> {
        match &self.lineage {
            Lineage::Root { residue } => Ok(root_place(&self.ctx, *residue, window)),
            Lineage::Split { parent, theta } => {
                let par = parent.with_window(window)?;
                match extend_once(&par)? {
                    SplitOutcome::Split(a, b) => {
                        for child in [a, b] {
                            if let Lineage::Split { theta: t, .. } = &child.lineage {
                                if t == theta {
                                    return Ok(child);
                                }
                            }
                        }
                        Err(EngineError::SelfTest("split branch vanished on retry"))
                    }
                    _ => Err(EngineError::SelfTest("outcome kind changed on retry")),
                }
            }
            Lineage::Ramified { parent } => {
                let par = parent.with_window(window)?;
                match extend_once(&par)? {
                    SplitOutcome::Ramified(c) => Ok(c),
                    _ => Err(EngineError::SelfTest("outcome kind changed on retry")),
                }
            }
            Lineage::Inert { parent } => {
                let par = parent.with_window(window)?;
                match extend_once(&par)? {
                    SplitOutcome::Inert(c) => Ok(c),
                    _ => Err(EngineError::SelfTest("outcome kind changed on retry")),
                }
            }
        }
    }
}

/// How one place decomposes one level up. Relative degrees always sum to 2:
/// split is 1+1, inert is one place of doubled residue degree, ramified is
/// one place with e = 2.
pub enum SplitOutcome {
    Split(Place, Place),
    Inert(Place),
    Ramified(Place),
}

impl SplitOutcome {
    pub fn kind(&self) -> OutcomeKind {
        match self {
            SplitOutcome::Split(..) => OutcomeKind::Split,
            SplitOutcome::Inert(_) => OutcomeKind::Inert,
            SplitOutcome::Ramified(_) => OutcomeKind::Ramified,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutcomeKind {
    Split,
    Inert,
    Ramified,
}

fn root_place(ctx: &FieldCtx, residue: ProjectivePoint, window: usize) -> Place {
    let (x_series, branch_id) = match residue {
        ProjectivePoint::Finite(beta) => (
            LaurentSeries::from_terms(ctx, &[(0, beta), (1, ctx.one())]),
            format!("b{}", beta.bits()),
        ),
        ProjectivePoint::Infinity => (
            LaurentSeries::monomial(ctx, ctx.one(), -1),
            "binf".to_string(),
        ),
    };
    Place {
        ctx: ctx.clone(),
        level: 0,
        residue_chain: vec![residue],
        x_series,
        ram_record: vec![],
        residue_degree: 1,
        branch_id,
        window,
        lineage: Lineage::Root { residue },
    }
}

/// The q+1 degree-one places of the rational function field: x = beta + t
/// for each beta, and x = 1/t at infinity.
pub fn root_places(ctx: &FieldCtx, window: usize) -> Vec<Place> {
    let mut out: Vec<Place> = ctx
        .elements()
        .map(|beta| root_place(ctx, ProjectivePoint::Finite(beta), window))
        .collect();
    out.push(root_place(ctx, ProjectivePoint::Infinity, window));
    out
}

/// Root places at a chosen list of residues (used by genus runs over the
/// ramification locus).
pub fn roots_at(ctx: &FieldCtx, residues: &[ProjectivePoint], window: usize) -> Vec<Place> {
    residues
        .iter()
        .map(|r| root_place(ctx, *r, window))
        .collect()
}

/// Artin-Schreier pole-order reduction: repeatedly strip even-order pole
/// terms of g with substitutions u = c t^(-k), so that the original
/// generator y = y' + U satisfies y'^2 + y' = g_reduced. Terminates with
/// either an odd-order pole (ramified direction) or valuation >= 0
/// (trace test pending). Returns (g_reduced, U).
pub fn as_reduce(
    g: &LaurentSeries,
) -> Result<(LaurentSeries, LaurentSeries), EngineError> {
    let ctx = g.ctx().clone();
    let mut red = g.clone();
    let mut acc = LaurentSeries::zero(&ctx);
    loop {
        let Some(v) = red.valuation()? else { break };
        if v >= 0 || v.rem_euclid(2) == 1 {
            break;
        }
        let k = -v / 2;
        let c = ctx.sqrt(red.leading().expect("nonzero series has a leading term"));
        let u = LaurentSeries::monomial(&ctx, c, -k);
        let u_sq = u.mul(&u)?;
        red = red.add(&u_sq)?.add(&u)?;
        acc = acc.add(&u)?;
    }
    #[cfg(debug_assertions)]
    {
        // congruence check: red + acc^2 + acc = g to precision
        let back = red
            .add(&acc.mul(&acc).unwrap())
            .unwrap()
            .add(&acc)
            .unwrap()
            .sub(g)
            .unwrap();
        debug_assert!(back.is_zero_window(), "reduction congruence broken");
    }
    Ok((red, acc))
}

/// Extend a place one level, retrying internally with a doubled window on
/// precision exhaustion.
pub fn extend(p: &Place) -> Result<SplitOutcome, EngineError> {
    let mut window = p.window;
    for retry in 0..=MAX_RETRIES {
        let attempt;
        let place = if retry == 0 {
            p
        } else {
            window *= 2;
            attempt = p.with_window(window)?;
            &attempt
        };
        match extend_once(place) {
            Err(EngineError::Precision(_)) => continue,
            other => return other,
        }
    }
    Err(EngineError::Precision(window))
}

fn extend_once(p: &Place) -> Result<SplitOutcome, EngineError> {
    let ctx = &p.ctx;
    let w = p.window;
    let x = &p.x_series;
    // g = f(x) = x / (x^2 + x + 1), valid for any valuation of x
    let hx = x.mul(x)?.add(x)?.add(&LaurentSeries::one(ctx))?;
    let g = x.mul(&hx.invert(w)?)?;
    let (g_red, u_acc) = as_reduce(&g)?;
    match g_red.valuation()? {
        Some(v) if v < 0 => {
            debug_assert_eq!(v.rem_euclid(2), 1, "reduction left an even pole order");
            ramified_child(p, &g_red, &u_acc, (-v) as u32)
        }
        _ => {
            let c0 = g_red.coeff(0)?;
            match ctx.solve_artin_schreier(c0) {
                Some((th0, th1)) => {
                    let parent = Arc::new(p.clone());
                    let a = split_child(&parent, &g_red, &u_acc, th0, '0')?;
                    let b = split_child(&parent, &g_red, &u_acc, th1, '1')?;
                    debug_assert!(split_residues_consistent(ctx, &a, &b));
                    Ok(SplitOutcome::Split(a, b))
                }
                None => {
                    let parent = Arc::new(p.clone());
                    Ok(SplitOutcome::Inert(Place {
                        ctx: ctx.clone(),
                        level: p.level + 1,
                        residue_chain: p.residue_chain.clone(),
                        x_series: p.x_series.clone(),
                        ram_record: p.ram_record.clone(),
                        residue_degree: p.residue_degree * 2,
                        branch_id: format!("{}i", p.branch_id),
                        window: w,
                        lineage: Lineage::Inert { parent },
                    }))
                }
            }
        }
    }
}

fn split_residues_consistent(ctx: &FieldCtx, a: &Place, b: &Place) -> bool {
    match (
        a.residue_chain.last().unwrap(),
        b.residue_chain.last().unwrap(),
    ) {
        (ProjectivePoint::Finite(ra), ProjectivePoint::Finite(rb)) => {
            ctx.add(*ra, *rb) == ctx.one()
        }
        (ProjectivePoint::Infinity, ProjectivePoint::Infinity) => true,
        _ => false,
    }
}

fn split_child(
    parent: &Arc<Place>,
    g_red: &LaurentSeries,
    u_acc: &LaurentSeries,
    theta: FieldElement,
    tag: char,
) -> Result<Place, EngineError> {
    let p = parent.as_ref();
    let y = g_red.hensel_solve_as(theta, p.window)?.add(u_acc)?;
    let residue = y.residue()?;
    let mut chain = p.residue_chain.clone();
    chain.push(residue);
    Ok(Place {
        ctx: p.ctx.clone(),
        level: p.level + 1,
        residue_chain: chain,
        x_series: y,
        ram_record: p.ram_record.clone(),
        residue_degree: p.residue_degree,
        branch_id: format!("{}{}", p.branch_id, tag),
        window: p.window,
        lineage: Lineage::Split {
            parent: parent.clone(),
            theta,
        },
    })
}

/// Totally ramified continuation. With m the reduced (odd) pole order of
/// g_red, the new uniformizer is fixed as s = t^((m+1)/2) * y'; t(s) is
/// recovered from G(t) = s^2 + s t^((m+1)/2) with G = t^(m+1) g_red by
/// reversion and a fixed-point iteration, then x_{i+1} = y' + U(t(s)).
fn ramified_child(
    p: &Place,
    g_red: &LaurentSeries,
    u_acc: &LaurentSeries,
    m: u32,
) -> Result<SplitOutcome, EngineError> {
    let ctx = &p.ctx;
    let w = p.window;
    let half = ((m + 1) / 2) as i64;
    let g_shift = g_red.shift((m + 1) as i64); // valuation 1
    let rev = g_shift.inverse_composition(w)?;
    let s_mono = LaurentSeries::uniformizer(ctx);
    let s_sq = LaurentSeries::monomial(ctx, ctx.one(), 2);
    // Start from t0 = H(s^2) and drive G(t) + s^2 + s t^half to zero. The
    // naive re-substitution t <- H(s^2 + s t^half) gains one coefficient per
    // pass; a Newton step on the same equation converges quadratically to
    // the same fixed point, which the self-test below certifies.
    let g_deriv = g_shift.derivative();
    let mut t = rev.compose(&s_sq, w)?;
    let mut stable = false;
    for _ in 0..64 {
        let resid = g_shift
            .compose(&t, w)?
            .add(&s_sq)?
            .add(&s_mono.mul(&t.pow(half, w)?)?)?;
        if resid.is_zero_window() {
            stable = true;
            break;
        }
        let mut slope = g_deriv.compose(&t, w)?;
        if half % 2 == 1 {
            slope = slope.add(&s_mono.mul(&t.pow(half - 1, w)?)?)?;
        }
        t = t.add(&resid.mul(&slope.invert(w)?)?)?;
    }
    if !stable {
        return Err(EngineError::Precision(w));
    }
    let y_prime = s_mono.mul(&t.pow(-half, w)?)?;
    // Self-test: t must pull back to s-order 2, and the Artin-Schreier
    // relation must reproduce the reduced generator along t(s).
    if t.valuation()? != Some(2) {
        return Err(EngineError::SelfTest(
            "pulled-back uniformizer is not order 2",
        ));
    }
    let lhs = y_prime.mul(&y_prime)?.add(&y_prime)?;
    let rhs = g_red.compose(&t, w)?;
    if !lhs.sub(&rhs)?.is_zero_window() {
        return Err(EngineError::SelfTest(
            "y'^2 + y' does not reproduce the reduced generator",
        ));
    }
    let x_child = y_prime.add(&u_acc.compose(&t, w)?)?;
    let mut chain = p.residue_chain.clone();
    chain.push(ProjectivePoint::Infinity);
    let mut record = p.ram_record.clone();
    record.push(RamEvent {
        level: p.level,
        e: 2,
        m,
        d: m + 1,
    });
    Ok(SplitOutcome::Ramified(Place {
        ctx: ctx.clone(),
        level: p.level + 1,
        residue_chain: chain,
        x_series: x_child,
        ram_record: record,
        residue_degree: p.residue_degree,
        branch_id: format!("{}r", p.branch_id),
        window: w,
        lineage: Lineage::Ramified {
            parent: Arc::new(p.clone()),
        },
    }))
}

/// What to do with inert places during a tree run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InertPolicy {
    /// Drop from the frontier, tallying the degree-2 place (rational census).
    Tally,
    /// Refuse: the caller restarts over a doubled constant field (genus run).
    Error,
}

/// One level of a breadth-first tree run.
pub struct LevelFrontier {
    pub places: Vec<Place>,
    /// Degree-2 places created at this step (inert events).
    pub new_inert2: usize,
    /// Ramification events created at this step.
    pub new_ram: Vec<RamEvent>,
}

pub struct TreeRun {
    pub levels: Vec<LevelFrontier>,
}

/// Breadth-first application of [`extend`] for `depth` levels.
pub fn extend_tree(
    roots: Vec<Place>,
    depth: u32,
    policy: InertPolicy,
) -> Result<TreeRun, EngineError> {
    let mut levels = vec![LevelFrontier {
        places: roots,
        new_inert2: 0,
        new_ram: vec![],
    }];
    for _ in 0..depth {
        let prev = &levels.last().unwrap().places;
        let mut places = Vec::with_capacity(prev.len() * 2);
        let mut new_inert2 = 0usize;
        let mut new_ram = Vec::new();
        for place in prev {
            match extend(place)? {
                SplitOutcome::Split(a, b) => {
                    places.push(a);
                    places.push(b);
                }
                SplitOutcome::Ramified(c) => {
                    new_ram.push(*c.ram_record.last().unwrap());
                    places.push(c);
                }
                SplitOutcome::Inert(q) => match policy {
                    InertPolicy::Tally => new_inert2 += 1,
                    InertPolicy::Error => {
                        return Err(EngineError::InertEncountered {
                            branch: q.branch_id.clone(),
                            level: q.level,
                        })
                    }
                },
            }
        }
        // relative-degree conservation at every step
        debug_assert_eq!(
            2 * prev.len(),
            places.len() + new_ram.len() + 2 * new_inert2
        );
        levels.push(LevelFrontier {
            places,
            new_inert2,
            new_ram,
        });
    }
    Ok(TreeRun { levels })
}

#[cfg(test)]
mod tests {
    use super::*;

    const W: usize = 64;

    fn f4() -> FieldCtx {
        FieldCtx::new(2).unwrap()
    }

    fn root_at(ctx: &FieldCtx, bits: u64) -> Place {
        root_place(ctx, ProjectivePoint::Finite(ctx.el(bits)), W)
    }

    #[test]
    fn root_place_counts() {
        assert_eq!(root_places(&FieldCtx::new(1).unwrap(), W).len(), 3);
        assert_eq!(root_places(&f4(), W).len(), 5);
        assert_eq!(root_places(&FieldCtx::new(3).unwrap(), W).len(), 9);
    }

    #[test]
    fn as_reduce_examples() {
        let k = f4();
        // already odd order: untouched, m = 1
        let g = LaurentSeries::monomial(&k, k.one(), -1);
        let (red, u) = as_reduce(&g).unwrap();
        assert_eq!(red.valuation().unwrap(), Some(-1));
        assert_eq!(u.valuation().unwrap(), None);
        // one reduction step: t^-2 -> t^-1 with u = t^-1
        let g = LaurentSeries::monomial(&k, k.one(), -2);
        let (red, u) = as_reduce(&g).unwrap();
        assert_eq!(red.valuation().unwrap(), Some(-1));
        assert_eq!(u.valuation().unwrap(), Some(-1));
        assert_eq!(u.coeff(-1).unwrap(), k.one());
        // the h-root direction over F4 reduces to m = 1
        let alpha = k.el(2);
        let x = LaurentSeries::from_terms(&k, &[(0, alpha), (1, k.one())]);
        let hx = x
            .mul(&x)
            .unwrap()
            .add(&x)
            .unwrap()
            .add(&LaurentSeries::one(&k))
            .unwrap();
        let g = x.mul(&hx.invert(W).unwrap()).unwrap();
        let (red, _) = as_reduce(&g).unwrap();
        assert_eq!(red.valuation().unwrap(), Some(-1), "m = 1");
    }

    #[test]
    fn zero_place_splits_into_zero_and_one() {
        for s in [1u32, 2, 3] {
            let k = FieldCtx::new(s).unwrap();
            let p0 = root_at(&k, 0);
            match extend(&p0).unwrap() {
                SplitOutcome::Split(a, b) => {
                    assert_eq!(
                        a.residue_chain().last(),
                        Some(&ProjectivePoint::Finite(k.zero()))
                    );
                    assert_eq!(
                        b.residue_chain().last(),
                        Some(&ProjectivePoint::Finite(k.one()))
                    );
                }
                _ => panic!("expected split at the zero of x"),
            }
        }
    }

    #[test]
    fn one_place_splits_into_h_roots_over_f4() {
        let k = f4();
        let p1 = root_at(&k, 1);
        match extend(&p1).unwrap() {
            SplitOutcome::Split(a, b) => {
                assert_eq!(
                    a.residue_chain().last(),
                    Some(&ProjectivePoint::Finite(k.el(2)))
                );
                assert_eq!(
                    b.residue_chain().last(),
                    Some(&ProjectivePoint::Finite(k.el(3)))
                );
            }
            _ => panic!("expected split at the zero of x+1"),
        }
    }

    #[test]
    fn h_root_place_ramifies_with_different_exponent_two() {
        let k = f4();
        for bits in [2u64, 3] {
            let p = root_at(&k, bits);
            match extend(&p).unwrap() {
                SplitOutcome::Ramified(c) => {
                    assert_eq!(
                        c.residue_chain().last(),
                        Some(&ProjectivePoint::Infinity)
                    );
                    assert_eq!(
                        c.ram_record(),
                        &[RamEvent {
                            level: 0,
                            e: 2,
                            m: 1,
                            d: 2
                        }]
                    );
                    // simple pole of the new generator upstairs
                    assert_eq!(c.x_series().valuation().unwrap(), Some(-1));
                }
                _ => panic!("expected total ramification at an h-root"),
            }
        }
    }

    #[test]
    fn infinity_splits_into_zero_and_one() {
        let k = f4();
        let pinf = root_place(&k, ProjectivePoint::Infinity, W);
        match extend(&pinf).unwrap() {
            SplitOutcome::Split(a, b) => {
                assert_eq!(
                    a.residue_chain().last(),
                    Some(&ProjectivePoint::Finite(k.zero()))
                );
                assert_eq!(
                    b.residue_chain().last(),
                    Some(&ProjectivePoint::Finite(k.one()))
                );
            }
            _ => panic!("expected split at the pole of x"),
        }
    }

    #[test]
    fn inert_continuation_over_f2() {
        // Over F2 the child of P0 with residue 1 has trace(f(1)) = 1.
        let k = FieldCtx::new(1).unwrap();
        let p0 = root_at(&k, 0);
        let SplitOutcome::Split(_, child1) = extend(&p0).unwrap() else {
            panic!("P0 splits");
        };
        match extend(&child1).unwrap() {
            SplitOutcome::Inert(q) => {
                assert_eq!(q.residue_degree(), 2);
                assert_eq!(q.level(), 2);
            }
            _ => panic!("expected inert continuation"),
        }
    }

    #[test]
    fn depth_one_census_over_f4_has_eight_rational_places() {
        let k = f4();
        let run = extend_tree(root_places(&k, W), 1, InertPolicy::Tally).unwrap();
        assert_eq!(run.levels[1].places.len(), 8);
        assert_eq!(run.levels[1].new_inert2, 0);
        assert_eq!(run.levels[1].new_ram.len(), 2);
    }

    #[test]
    fn depth_zero_tree_returns_roots() {
        let k = f4();
        let run = extend_tree(root_places(&k, W), 0, InertPolicy::Tally).unwrap();
        assert_eq!(run.levels.len(), 1);
        assert_eq!(run.levels[0].places.len(), 5);
    }

    #[test]
    fn level_two_poles_over_the_one_place_have_order_two() {
        // s = 2: chain 1 -> beta -> infinity with nu(x_2) = -2.
        let k = f4();
        let run = extend_tree(vec![root_at(&k, 1)], 2, InertPolicy::Tally).unwrap();
        let level2 = &run.levels[2].places;
        assert_eq!(level2.len(), 2);
        for p in level2 {
            assert_eq!(p.residue_chain().last(), Some(&ProjectivePoint::Infinity));
            assert_eq!(p.x_series().valuation().unwrap(), Some(-2));
            assert_eq!(
                p.ram_record(),
                &[RamEvent {
                    level: 1,
                    e: 2,
                    m: 1,
                    d: 2
                }]
            );
        }
    }

    #[test]
    fn weak_ramification_and_locus_on_a_deep_run() {
        let k = f4();
        let run = extend_tree(root_places(&k, W), 6, InertPolicy::Tally).unwrap();
        let locus: Vec<ProjectivePoint> = {
            let mut l: Vec<_> = [0u64, 1]
                .iter()
                .map(|b| ProjectivePoint::Finite(k.el(*b)))
                .collect();
            l.extend(k.h_roots().into_iter().map(ProjectivePoint::Finite));
            l.push(ProjectivePoint::Infinity);
            l
        };
        for level in &run.levels {
            for p in &level.places {
                for ev in p.ram_record() {
                    assert_eq!(ev.m, 1, "weak ramification: m = 1 everywhere");
                    assert_eq!(ev.d, 2 * (ev.e - 1));
                }
                if !p.ram_record().is_empty() {
                    assert!(
                        locus.contains(&p.residue_chain()[0]),
                        "ramified chain must start in the locus: {p:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn split_children_residues_differ_by_one_or_are_both_poles() {
        let k = f4();
        let run = extend_tree(root_places(&k, W), 5, InertPolicy::Tally).unwrap();
        for level in &run.levels[..run.levels.len() - 1] {
            for p in &level.places {
                if let SplitOutcome::Split(a, b) = extend(p).unwrap() {
                    assert!(split_residues_consistent(&k, &a, &b), "{p:?}");
                }
            }
        }
    }

    #[test]
    fn precision_retry_rebuilds_lineage() {
        // A window too small to survive several levels forces the internal
        // doubling retry to walk the lineage.
        let k = f4();
        let tiny = root_place(&k, ProjectivePoint::Finite(k.el(1)), 8);
        let run = extend_tree(vec![tiny], 4, InertPolicy::Tally).unwrap();
        assert!(!run.levels[4].places.is_empty());
        for p in &run.levels[4].places {
            assert_eq!(p.residue_chain().len() as u32, p.level() + 1);
        }
    }
}
