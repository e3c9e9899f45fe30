//! The separation battery: one runnable experiment per separation claim,
//! with deterministic corpora and machine-checkable pass/fail outcomes.

use crate::engine::{
    adversary_search, identify_over_orders, run_cegis, AdversaryParams, RunConfig,
};
use crate::families::{family_cbnotpb, family_notcb, family_pb_members};
use crate::finite_lab::{FiniteConceptClass, SetCoverInstance};
use crate::lang::Language;
use crate::learners::LearnerSpec;
use crate::par::par_map;
use crate::transcript::TranscriptOrder;
use crate::verifiers::{
    bcheck, cb_filter_via_check, hcheck, mincheck, mincheck_via_check, pb_filter_via_check,
    Strategy, VerifierKind,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Outcome of one named experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub id: String,
    pub version: u32,
    pub title: String,
    pub pass: bool,
    pub metrics: BTreeMap<String, String>,
    pub failures: Vec<String>,
}

impl ExperimentResult {
    fn new(id: &str, title: &str) -> ExperimentResult {
        ExperimentResult {
            id: id.into(),
            version: 1,
            title: title.into(),
            pass: true,
            metrics: BTreeMap::new(),
            failures: Vec::new(),
        }
    }

    fn metric<V: ToString>(&mut self, key: &str, value: V) {
        self.metrics.insert(key.into(), value.to_string());
    }

    fn fail(&mut self, msg: String) {
        self.pass = false;
        if self.failures.len() < 20 {
            self.failures.push(msg);
        }
    }
}

/// Outcome of the whole battery.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BatteryOutcome {
    pub seed: u64,
    pub quick: bool,
    pub all_pass: bool,
    pub experiments: Vec<ExperimentResult>,
}

/// A deterministic cross-section of the representation catalog, used as the
/// (target, candidate) pair corpus for the adapter-equivalence experiments.
pub fn catalog_corpus() -> Vec<Language> {
    let mut v = vec![Language::Empty, Language::Universe];
    v.extend([0u64, 1, 2, 3, 4, 5, 9, 20].map(Language::UpTo));
    v.extend([0u64, 1, 5, 8, 20].map(Language::AllAbove));
    let finite_sets: [&[u64]; 12] = [
        &[0],
        &[1],
        &[3],
        &[9, 12],
        &[2, 6],
        &[2, 6, 16],
        &[0, 1, 2],
        &[5, 9],
        &[10, 11, 12],
        &[2, 4, 6],
        &[7],
        &[8, 16, 24],
    ];
    v.extend(
        finite_sets
            .iter()
            .map(|s| Language::finite(s.iter().copied())),
    );
    v.extend([0u32, 1, 2, 3, 5].map(Language::Pow2AtLeast));
    let pow32_sets: [&[(u8, u32)]; 6] = [
        &[(0, 1)],
        &[(1, 0)],
        &[(0, 1), (1, 1)],
        &[(0, 1), (1, 1), (0, 4)],
        &[(1, 2), (0, 3)],
        &[(0, 0), (1, 1), (1, 3)],
    ];
    v.extend(
        pow32_sets
            .iter()
            .map(|s| Language::pow32(s.iter().copied())),
    );
    v
}

fn corpus_pairs(quick: bool) -> Vec<(Language, Language)> {
    let mut langs = catalog_corpus();
    if quick {
        langs.truncate(24);
    }
    let mut pairs = Vec::with_capacity(langs.len() * langs.len());
    for t in &langs {
        for c in &langs {
            pairs.push((t.clone(), c.clone()));
        }
    }
    pairs
}

/// Ascending prefix of a language's members, used as the seen-positives
/// context for the positive-bounded checks.
fn seen_prefix(lang: &Language, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    let mut from = 0u64;
    while out.len() < len {
        match lang.next_member(from) {
            Some(x) => {
                out.push(x);
                match x.checked_add(1) {
                    Some(n) => from = n,
                    None => break,
                }
            }
            None => break,
        }
    }
    out
}

fn orders_for(seed: u64, count: usize) -> Vec<TranscriptOrder> {
    std::iter::once(TranscriptOrder::Ascending)
        .chain(
            (0..count.saturating_sub(1)).map(|i| TranscriptOrder::SeededShuffle(seed ^ i as u64)),
        )
        .collect()
}

// ---------------------------------------------------------------------------
// E1: minimal counterexamples add no power (adapter equivalence).

pub fn e1_mincheck_equivalence(quick: bool) -> ExperimentResult {
    let mut r = ExperimentResult::new("E1", "mincheck equals its check-only simulation");
    let pairs = corpus_pairs(quick);
    let mismatches: Vec<String> = par_map(&pairs, |(t, c)| {
        let want = mincheck(t, c);
        for s in Strategy::ALL_DEFAULT {
            let got = mincheck_via_check(t, c, s);
            if got != want {
                return Some(format!(
                    "target {t}, candidate {c}, strategy {s}: simulated {got:?} vs {want:?}"
                ));
            }
        }
        None
    })
    .into_iter()
    .flatten()
    .collect();
    r.metric("pairs", pairs.len());
    r.metric("strategies", Strategy::ALL_DEFAULT.len());
    r.metric("mismatches", mismatches.len());
    for m in mismatches {
        r.fail(m);
    }
    r
}

// ---------------------------------------------------------------------------
// E2: the bounded and positive-bounded filters over check match bcheck/hcheck.

pub fn e2_filter_equivalence(quick: bool) -> ExperimentResult {
    let mut r = ExperimentResult::new("E2", "bounded/positive-bounded filters equal bcheck/hcheck");
    let pairs = corpus_pairs(quick);
    const BOUND: u64 = 8;
    let mismatches: Vec<String> = par_map(&pairs, |(t, c)| {
        let seen = seen_prefix(t, 4);
        for s in Strategy::ALL_DEFAULT {
            let want_cb = bcheck(BOUND, t, c);
            match cb_filter_via_check(BOUND, t, c, s) {
                Ok(got) if got == want_cb => {}
                other => {
                    return Some(format!(
                        "cb target {t}, candidate {c}, strategy {s}: {other:?} vs {want_cb:?}"
                    ))
                }
            }
            let want_pb = hcheck(t, c, &seen);
            match pb_filter_via_check(t, c, &seen, s) {
                Ok(got) if got == want_pb => {}
                other => {
                    return Some(format!(
                        "pb target {t}, candidate {c}, strategy {s}: {other:?} vs {want_pb:?}"
                    ))
                }
            }
        }
        None
    })
    .into_iter()
    .flatten()
    .collect();
    r.metric("pairs", pairs.len());
    r.metric("bound", BOUND);
    r.metric("mismatches", mismatches.len());
    for m in mismatches {
        r.fail(m);
    }
    r
}

// ---------------------------------------------------------------------------
// E3: the bounded verifier is blind on the family living above its bound.

pub fn e3_bounded_blindness(seed: u64, quick: bool) -> ExperimentResult {
    let mut r = ExperimentResult::new("E3", "bcheck is blind above its bound");
    const BOUND: u64 = 8;
    let member_count = if quick { 11 } else { 16 };
    let members = family_notcb(BOUND, 1..=3, member_count, seed);
    let mut pair_count = 0usize;
    let mut non_subset = 0usize;
    for t in &members {
        for c in &members {
            pair_count += 1;
            if !c.subset_of(t) {
                non_subset += 1;
            }
            if let Some(w) = bcheck(BOUND, t, c) {
                r.fail(format!(
                    "bcheck({BOUND}) returned {w} on target {t}, candidate {c}"
                ));
            }
        }
    }
    r.metric("pairs", pair_count);
    r.metric("non_subset_pairs", non_subset);
    if pair_count < 100 {
        r.fail(format!(
            "only {pair_count} pairs generated, need at least 100"
        ));
    }
    if non_subset < 20 {
        r.fail(format!(
            "only {non_subset} certified non-subset pairs, need at least 20"
        ));
    }

    let runs = par_map(&members, |target| {
        let mut blind = RunConfig::new(
            target.clone(),
            VerifierKind::ConstantBounded(BOUND),
            LearnerSpec::GoldFinite,
        );
        blind.family_id = Some("notcb".into());
        blind.step_budget = 120;
        blind.stability_window = 10;
        let mut arb = blind.clone();
        arb.verifier = VerifierKind::Arbitrary(Strategy::Ascending);
        (run_cegis(&blind), run_cegis(&arb))
    });
    for (target, (blind, arb)) in members.iter().zip(runs) {
        match blind {
            Ok(res) => {
                if res.counterexamples != 0 {
                    r.fail(format!(
                        "bounded run on {target} received {} counterexamples",
                        res.counterexamples
                    ));
                }
                if !res.identified {
                    r.fail(format!(
                        "bounded run on {target} failed to identify via positives"
                    ));
                }
            }
            Err(e) => r.fail(format!("bounded run on {target}: {e}")),
        }
        match arb {
            Ok(res) => {
                if !res.identified {
                    r.fail(format!("arbitrary run on {target} failed to identify"));
                }
            }
            Err(e) => r.fail(format!("arbitrary run on {target}: {e}")),
        }
    }
    r
}

// ---------------------------------------------------------------------------
// E4: the chain family defeats the positive-bounded verifier but not check.

pub fn e4_chain_family(quick: bool) -> ExperimentResult {
    let mut r = ExperimentResult::new(
        "E4",
        "chain learner: i+2 queries under check, blindness under hcheck",
    );
    let max_index = if quick { 10u64 } else { 20 };
    let indices: Vec<u64> = (0..=max_index).collect();
    let outcomes = par_map(&indices, |&i| {
        let mut out = Vec::new();
        for s in Strategy::ALL_DEFAULT {
            let mut c = RunConfig::new(
                Language::UpTo(i),
                VerifierKind::Arbitrary(s),
                LearnerSpec::Chain,
            );
            c.family_id = Some("notpb".into());
            c.step_budget = 400;
            c.stability_window = 10;
            out.push((i, s, run_cegis(&c)));
        }
        out
    });
    for (i, s, res) in outcomes.into_iter().flatten() {
        match res {
            Ok(res) => {
                if !res.identified {
                    r.fail(format!("chain failed on UpTo({i}) under {s}"));
                }
                let want = i as usize + 2;
                if res.correctness_queries != want {
                    r.fail(format!(
                        "chain on UpTo({i}) under {s}: {} correctness queries, expected {want}",
                        res.correctness_queries
                    ));
                }
            }
            Err(e) => r.fail(format!("chain run on UpTo({i}) under {s}: {e}")),
        }
    }

    // hcheck blindness, exhaustive over i < j <= max_index
    let mut blind_pairs = 0usize;
    for i in 0..=max_index {
        let positives: Vec<u64> = (0..=i).collect();
        for j in (i + 1)..=max_index {
            blind_pairs += 1;
            if let Some(w) = hcheck(&Language::UpTo(i), &Language::UpTo(j), &positives) {
                r.fail(format!(
                    "hcheck returned {w} on target UpTo({i}), candidate UpTo({j})"
                ));
            }
        }
    }
    r.metric("chain_targets", max_index + 1);
    r.metric("blind_pairs", blind_pairs);

    let mut c = RunConfig::new(
        Language::UpTo(3),
        VerifierKind::PositiveBounded,
        LearnerSpec::Chain,
    );
    c.step_budget = 200;
    c.stability_window = 10;
    match run_cegis(&c) {
        Ok(res) => {
            if res.identified {
                r.fail("chain identified UpTo(3) under hcheck; it must not".into());
            }
        }
        Err(e) => r.fail(format!("hcheck chain run: {e}")),
    }
    r
}

// ---------------------------------------------------------------------------
// E5: the two-phase learner identifies the positive-bounded family.

pub fn e5_pbcegis_positive_side(seed: u64, quick: bool) -> ExperimentResult {
    let mut r = ExperimentResult::new(
        "E5",
        "pbcegis-family3 identifies the family, constant memory",
    );
    let finite_count = if quick { 12 } else { 50 };
    let order_count = if quick { 4 } else { 10 };
    let members = family_pb_members(12, finite_count, seed);
    let (finite, tails): (Vec<Language>, Vec<Language>) =
        members.into_iter().partition(|m| m.is_finite());
    let tails: Vec<Language> = tails
        .into_iter()
        .filter(|t| matches!(t, Language::Pow2AtLeast(k) if *k <= 10))
        .collect();
    let orders = orders_for(seed, order_count);

    let run_all = |targets: &[Language]| {
        par_map(targets, |target| {
            let mut c = RunConfig::new(
                target.clone(),
                VerifierKind::PositiveBounded,
                LearnerSpec::PbcegisFamily3,
            );
            c.family_id = Some("pb".into());
            c.step_budget = 200;
            c.stability_window = 20;
            identify_over_orders(&c, &orders)
        })
    };

    let mut finite_max_bytes = BTreeSet::new();
    for (target, outcome) in finite.iter().zip(run_all(&finite)) {
        match outcome {
            Ok(o) => {
                if !o.identified_all {
                    let misses: Vec<&str> = o
                        .per_order
                        .iter()
                        .filter(|p| !p.identified)
                        .map(|p| p.config.order.as_str())
                        .collect();
                    r.fail(format!("{target} not identified under orders {misses:?}"));
                }
                for res in &o.per_order {
                    finite_max_bytes.insert(res.max_state_bytes);
                }
            }
            Err(e) => r.fail(format!("runs on {target}: {e}")),
        }
    }
    let mut tail_max_bytes = BTreeSet::new();
    for (target, outcome) in tails.iter().zip(run_all(&tails)) {
        match outcome {
            Ok(o) => {
                if !o.identified_all {
                    r.fail(format!("{target} not identified under every order"));
                }
                for res in &o.per_order {
                    tail_max_bytes.insert(res.max_state_bytes);
                }
            }
            Err(e) => r.fail(format!("runs on {target}: {e}")),
        }
    }
    if finite_max_bytes.len() > 1 {
        r.fail(format!(
            "finite-target max state bytes vary with target size: {finite_max_bytes:?}"
        ));
    }
    if tail_max_bytes.len() > 1 {
        r.fail(format!(
            "tail-target max state bytes vary: {tail_max_bytes:?}"
        ));
    }
    r.metric("finite_targets", finite.len());
    r.metric("tail_targets", tails.len());
    r.metric("orders", orders.len());
    r.metric(
        "finite_max_state_bytes",
        finite_max_bytes.first().copied().unwrap_or(0),
    );
    r.metric(
        "tail_max_state_bytes",
        tail_max_bytes.first().copied().unwrap_or(0),
    );
    r
}

// ---------------------------------------------------------------------------
// E6: the adversary defeats the lossy baseline but not the two-phase learner.

pub fn e6_adversary(quick: bool) -> ExperimentResult {
    let mut r = ExperimentResult::new("E6", "confusion witness against lossy baseline only");
    let params = AdversaryParams {
        max_exponent: if quick { 8 } else { 10 },
        trigger_exponent: 2,
        step_budget: 10_000,
    };
    match adversary_search(&LearnerSpec::LossyGold(3), params) {
        Ok(Some(w)) => {
            r.metric("lossy_prefix", format!("{:?}", w.prefix));
            r.metric("lossy_skipped_power", w.skipped_power);
            r.metric("lossy_trigger", w.trigger);
            if w.final_a != w.final_b {
                r.fail("witness finals differ; not a confusion".into());
            }
            if w.target_a == w.target_b {
                r.fail("witness targets coincide; not a separation".into());
            }
        }
        Ok(None) => r.fail("no confusion witness found against the lossy baseline".into()),
        Err(e) => r.fail(format!("adversary search on lossy baseline: {e}")),
    }
    match adversary_search(&LearnerSpec::PbcegisFamily3, params) {
        Ok(None) => {}
        Ok(Some(w)) => r.fail(format!(
            "unexpected confusion witness against pbcegis-family3: prefix {:?}, skipped {}",
            w.prefix, w.skipped_power
        )),
        Err(e) => r.fail(format!("adversary search on pbcegis-family3: {e}")),
    }
    r.metric("budget", params.step_budget);
    r
}

// ---------------------------------------------------------------------------
// E7: below the bound, bcheck acts like check while hcheck stays blind.

pub fn e7_cbnotpb(quick: bool) -> ExperimentResult {
    let mut r = ExperimentResult::new("E7", "bounded verifier identifies the truncated chain");
    let bound = 6u64;
    let members = family_cbnotpb(bound);
    let targets: Vec<(usize, Language)> = members.iter().cloned().enumerate().collect();
    let runs = par_map(&targets, |(_, target)| {
        let mut c = RunConfig::new(
            target.clone(),
            VerifierKind::ConstantBounded(bound),
            LearnerSpec::ConsistentEnum(members.clone()),
        );
        c.family_id = Some("cbnotpb".into());
        c.step_budget = if quick { 100 } else { 200 };
        c.stability_window = 10;
        run_cegis(&c)
    });
    for ((_, target), res) in targets.iter().zip(runs) {
        match res {
            Ok(res) => {
                if !res.identified {
                    r.fail(format!(
                        "consistent-enum with bcheck({bound}) missed {target}"
                    ));
                }
            }
            Err(e) => r.fail(format!("run on {target}: {e}")),
        }
    }
    let mut blind_pairs = 0usize;
    for (i, t) in members.iter().enumerate() {
        let positives: Vec<u64> = (0..=i as u64).collect();
        for c in members.iter().skip(i + 1) {
            blind_pairs += 1;
            if let Some(w) = hcheck(t, c, &positives) {
                r.fail(format!("hcheck returned {w} on target {t}, candidate {c}"));
            }
        }
    }
    r.metric("members", members.len());
    r.metric("blind_pairs", blind_pairs);
    r
}

/// Runs E1-E7 with a shared seed.
pub fn run_battery(seed: u64, quick: bool) -> BatteryOutcome {
    let experiments = vec![
        e1_mincheck_equivalence(quick),
        e2_filter_equivalence(quick),
        e3_bounded_blindness(seed, quick),
        e4_chain_family(quick),
        e5_pbcegis_positive_side(seed, quick),
        e6_adversary(quick),
        e7_cbnotpb(quick),
    ];
    let all_pass = experiments.iter().all(|e| e.pass);
    BatteryOutcome {
        seed,
        quick,
        all_pass,
        experiments,
    }
}

// ---------------------------------------------------------------------------
// Seeded generators for the finite-class checks.

/// Seeded random concept classes: domains of up to 6 examples, 2 to 32
/// distinct concepts.
pub fn random_classes(count: usize, seed: u64) -> Vec<FiniteConceptClass> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let d = rng.gen_range(1..=6usize);
        let max_concepts = 32usize.min(1 << d);
        let want = rng.gen_range(2..=max_concepts.max(2));
        let mut masks = BTreeSet::new();
        while masks.len() < want {
            masks.insert(rng.gen_range(0..(1u32 << d)));
        }
        let domain: Vec<u64> = (0..d as u64).collect();
        let concepts: Vec<BTreeSet<u64>> = masks
            .iter()
            .map(|&m| {
                (0..d as u64)
                    .filter(|&e| m & (1 << e) != 0)
                    .collect::<BTreeSet<u64>>()
            })
            .collect();
        out.push(FiniteConceptClass::new(domain, concepts).expect("generated class is valid"));
    }
    out
}

/// Seeded coverable set-cover instances with up to 8 sets over up to 6
/// universe elements.
pub fn random_cover_instances(count: usize, seed: u64) -> Vec<SetCoverInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let m = rng.gen_range(1..=6usize);
        let k = rng.gen_range(1..=8usize);
        let universe: Vec<u64> = (1..=m as u64).collect();
        let mut sets: Vec<BTreeSet<u64>> = (0..k)
            .map(|_| {
                universe
                    .iter()
                    .copied()
                    .filter(|_| rng.gen_bool(0.4))
                    .collect()
            })
            .collect();
        for &x in &universe {
            if !sets.iter().any(|s| s.contains(&x)) {
                let idx = rng.gen_range(0..k);
                sets[idx].insert(x);
            }
        }
        out.push(SetCoverInstance::new(universe, sets).expect("generated instance is valid"));
    }
    out
}
