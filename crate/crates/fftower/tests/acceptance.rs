//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Every tolerance here is exact (integer or exact-rational comparison);
//! nothing is floating point.
//!
//! Run with `cargo test --release --test acceptance -- --nocapture` to see
//! the per-criterion lines.

use fftower::census::{
    automaton_crosscheck, compute_s_set, genus_table, limit_report, oracle_chain_count,
    rational_census, verify_even_splitting, verify_odd_case,
};
use fftower::engine::{extend, root_places, RamEvent, SplitOutcome, DEFAULT_WINDOW};
use fftower::gf::{FieldCtx, ProjectivePoint};
use fftower::symbolic::{run_catalog, IDENTITIES};

const W: usize = DEFAULT_WINDOW;

fn report(number: u32, ok: bool, detail: &str) {
    println!(
        "[{}] criterion {number}: {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {number} failed: {detail}");
}

#[test]
fn criterion_01_odd_case_count() {
    // s = 1: N(F_i) = 4 exactly for i = 1..12
    let k1 = FieldCtx::new(1).unwrap();
    let c1 = rational_census(&k1, 12, W).unwrap();
    let ok1 = c1.n[1..=12].iter().all(|&n| n == 4);
    // s = 3: |S| fixed beforehand by exhaustive scan (= 1), N = 2(|S|+1)
    let k3 = FieldCtx::new(3).unwrap();
    let s3 = compute_s_set(&k3).size();
    let expected3 = 2 * (s3 + 1);
    let c3 = rational_census(&k3, 10, W).unwrap();
    let ok3 = s3 == 1 && c3.n[1..=10].iter().all(|&n| n == expected3);
    report(
        1,
        ok1 && ok3,
        &format!(
            "N constant: s=1 gives {:?} (want 4), s=3 gives {:?} (want {expected3})",
            &c1.n[1..=12],
            &c3.n[1..=10]
        ),
    );
}

#[test]
fn criterion_02_odd_case_asymptotics() {
    // nu_i = 2(|S|+1)/2^i exactly, halving at every level.
    let mut ok = true;
    let mut detail = String::new();
    for s in [1u32, 3] {
        let k = FieldCtx::new(s).unwrap();
        let size = compute_s_set(&k).size();
        let c = rational_census(&k, 10, W).unwrap();
        for i in 1..=10usize {
            // exact rational check: N_i / 2^i == 2(|S|+1) / 2^i
            if c.n[i] != 2 * (size + 1) {
                ok = false;
            }
            // halving: nu_i = 2 * nu_{i+1} as exact fractions
            if i < 10 && c.n[i] * (1u64 << (i + 1)) != 2 * c.n[i + 1] * (1u64 << i) {
                ok = false;
            }
        }
        detail.push_str(&format!("s={s}: nu_i = {}/2^i; ", 2 * (size + 1)));
    }
    report(2, ok, detail.trim_end_matches("; "));
}

#[test]
fn criterion_03_even_case_splitting() {
    let k = FieldCtx::new(2).unwrap();
    let v = verify_even_splitting(&k, 12, W).unwrap();
    let bound_checked: Vec<u64> = v.n[2..=12].to_vec();
    report(
        3,
        v.ok(),
        &format!(
            "two poles of x_2 over the zero of x_0+1 (found {}), records ok: {}, all descendants split to depth 12: {}, N_i >= 2^(i-1): {} (N = {:?})",
            v.pole_count, v.poles_ok, v.all_descendants_split, v.n_lower_bound_ok, bound_checked
        ),
    );
}

#[test]
fn criterion_04_genus_bound() {
    let mut ok = true;
    let mut gs = Vec::new();
    for s in [1u32, 2] {
        let k = FieldCtx::new(s).unwrap();
        let t = genus_table(&k, 10, W).unwrap();
        if t.g[0] != 0 || t.g[1] != 1 {
            ok = false;
        }
        for i in 0..=10usize {
            if t.g[i] > 4 * (1u64 << i) {
                ok = false;
            }
            if i > 0 && 2 * t.g[i - 1] > t.g[i] {
                ok = false;
            }
        }
        gs.push((s, t.g.clone()));
    }
    if gs[0].1 != gs[1].1 {
        ok = false; // the genus is a geometric invariant
    }
    report(
        4,
        ok,
        &format!("g = {:?} for s in {{1,2}}, g0=0, g1=1, gamma monotone and <= 4", gs[0].1),
    );
}

#[test]
fn criterion_05_limit_bound() {
    let k = FieldCtx::new(2).unwrap();
    let c = rational_census(&k, 12, W).unwrap();
    let g = genus_table(&k, 12, W).unwrap();
    let mut ok = true;
    for i in 2..=12usize {
        if g.g[i] >= 1 && 8 * c.n[i] < g.g[i] {
            ok = false;
        }
    }
    report(
        5,
        ok,
        &format!(
            "lambda_i = N_i/g_i >= 1/8 exactly for i=2..12 (N_12 = {}, g_12 = {})",
            c.n[12], g.g[12]
        ),
    );
}

#[test]
fn criterion_06_level_one_structure() {
    // all six clauses of the level-1 decomposition over F4
    let k = FieldCtx::new(2).unwrap();
    let alpha = k.el(2);
    let mut ok = true;
    let mut notes = Vec::new();
    for root in root_places(&k, W) {
        let chain0 = root.residue_chain()[0];
        match extend(&root).unwrap() {
            SplitOutcome::Split(a, b) => {
                let (ra, rb) = (
                    *a.residue_chain().last().unwrap(),
                    *b.residue_chain().last().unwrap(),
                );
                let expect: (ProjectivePoint, ProjectivePoint) = match chain0 {
                    ProjectivePoint::Finite(v) if v == k.zero() => (
                        ProjectivePoint::Finite(k.zero()),
                        ProjectivePoint::Finite(k.one()),
                    ),
                    ProjectivePoint::Finite(v) if v == k.one() => (
                        ProjectivePoint::Finite(alpha),
                        ProjectivePoint::Finite(k.add(alpha, k.one())),
                    ),
                    ProjectivePoint::Infinity => (
                        ProjectivePoint::Finite(k.zero()),
                        ProjectivePoint::Finite(k.one()),
                    ),
                    _ => {
                        ok = false;
                        notes.push(format!("{chain0:?} split unexpectedly"));
                        continue;
                    }
                };
                if (ra, rb) != expect {
                    ok = false;
                    notes.push(format!("{chain0:?} split to {ra:?},{rb:?}"));
                }
            }
            SplitOutcome::Ramified(c) => {
                let is_h_root = matches!(chain0, ProjectivePoint::Finite(v) if k.h_eval(v).is_zero());
                let rec_ok = c.ram_record()
                    == [RamEvent {
                        level: 0,
                        e: 2,
                        m: 1,
                        d: 2,
                    }];
                if !is_h_root || !rec_ok
                    || c.residue_chain().last() != Some(&ProjectivePoint::Infinity)
                {
                    ok = false;
                    notes.push(format!("{chain0:?} ramified wrongly"));
                }
            }
            SplitOutcome::Inert(_) => {
                ok = false;
                notes.push(format!("{chain0:?} inert"));
            }
        }
    }
    report(
        6,
        ok,
        &format!(
            "over F4: 0, 1, inf split completely to the expected residues; both h-roots ramify with d = 2 {}",
            if notes.is_empty() { String::new() } else { format!("({notes:?})") }
        ),
    );
}

#[test]
fn criterion_07_identity_suite() {
    let t0 = std::time::Instant::now();
    let results = run_catalog();
    let elapsed = t0.elapsed();
    let all_hold = results.iter().all(|(_, ok, _)| *ok);
    let all_mutations_fail = results.iter().all(|(_, _, mutated)| !*mutated);
    let ok = all_hold && all_mutations_fail && results.len() == IDENTITIES.len() && elapsed.as_secs() < 1;
    report(
        7,
        ok,
        &format!(
            "{}/{} identities verify exactly, every single-bit mutation fails, in {elapsed:?}",
            results.iter().filter(|(_, ok, m)| *ok && !m).count(),
            results.len()
        ),
    );
}

#[test]
fn criterion_08_oracle_equivalence() {
    let mut ok = true;
    let mut counts = Vec::new();
    for s in [1u32, 2, 3] {
        let k = FieldCtx::new(s).unwrap();
        let c = rational_census(&k, 6, W).unwrap();
        let o = oracle_chain_count(&k, 6);
        if c.finite_nonroot != o {
            ok = false;
        }
        counts.push((s, o));
    }
    report(
        8,
        ok,
        &format!("engine finite-non-root counts equal the chain oracle, depth 6: {counts:?}"),
    );
}

#[test]
fn criterion_09_weak_ramification() {
    // every ramification event in the runs above has m = 1, d = 2(e-1)
    let mut ok = true;
    for s in [1u32, 2, 3, 4] {
        let k = FieldCtx::new(s).unwrap();
        let c = rational_census(&k, 6, W).unwrap();
        if !c.weakly_ramified || !c.locus_confined {
            ok = false;
        }
    }
    for s in [1u32, 2] {
        let k = FieldCtx::new(s).unwrap();
        let t = genus_table(&k, 8, W).unwrap();
        if !t.weakly_ramified {
            ok = false;
        }
    }
    report(
        9,
        ok,
        "every RamEvent across census (s=1..4) and genus (s=1,2) runs has m = 1, d = 2(e-1)",
    );
}

#[test]
fn criterion_10_automaton_crosscheck() {
    let k = FieldCtx::new(2).unwrap();
    let disagreements = automaton_crosscheck(&k, 10, W).unwrap();
    report(
        10,
        disagreements.is_empty(),
        &format!(
            "(R1)/(R2) predictor vs engine above the zero of x_0+1, depth 10: {} disagreements",
            disagreements.len()
        ),
    );
}

#[test]
fn criterion_11_modulus_independence() {
    // two irreducible moduli for GF(2^4): x^4+x+1 and x^4+x^3+x^2+x+1
    let ka = FieldCtx::with_modulus(4, 0x13).unwrap();
    let kb = FieldCtx::with_modulus(4, 0x1F).unwrap();
    let sa = compute_s_set(&ka).size();
    let sb = compute_s_set(&kb).size();
    let ca = rational_census(&ka, 6, W).unwrap();
    let cb = rational_census(&kb, 6, W).unwrap();
    let ga = genus_table(&ka, 6, W).unwrap();
    let gb = genus_table(&kb, 6, W).unwrap();
    let ok = sa == sb && ca.n == cb.n && ca.inert2 == cb.inert2 && ga.g == gb.g;
    report(
        11,
        ok,
        &format!(
            "|S| = {sa} vs {sb}, N = {:?} vs {:?}, g = {:?} vs {:?} under moduli 0x13 / 0x1f",
            ca.n, cb.n, ga.g, gb.g
        ),
    );
}

#[test]
#[ignore = "deep run; use cargo test --release -- --ignored"]
fn extended_lower_bound_to_depth_fourteen() {
    // the s = 2 lower bound continues through levels 13 and 14
    let k = FieldCtx::new(2).unwrap();
    let c = rational_census(&k, 14, W).unwrap();
    for (i, &n) in c.n.iter().enumerate().skip(2) {
        assert!(n >= 1 << (i - 1), "level {i}: N = {n}");
    }
    println!("[PASS] extended: N_i >= 2^(i-1) through depth 14 (N_14 = {})", c.n[14]);
}

#[test]
fn report_verdict_summary_is_all_green() {
    // The assembled per-parity reports carry only passing verdicts.
    for s in [1u32, 2] {
        let k = FieldCtx::new(s).unwrap();
        let report = limit_report(&k, 8, W).unwrap();
        assert!(report.all_pass(), "s = {s}: {:?}", report.verdicts);
    }
}
