//! The dialogue driver: wires a learner to a verifier-backed oracle, tracks
//! convergence and query counts, audits learner memory, and hosts the
//! adversary search used by the finite-memory separation.

use crate::lang::{Example, Language};
use crate::learners::{learn_step, CorrectnessOracle, Learner, LearnerError, LearnerSpec};
use crate::query::{DialogueEntry, OracleInterface, Query, Response};
use crate::transcript::{CexEntry, CexSequence, Transcript, TranscriptError, TranscriptOrder};
use crate::verifiers::VerifierKind;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("learner state reached {bytes} bytes at step {step}, over the {bound}-byte bound")]
    MemoryBoundExceeded {
        step: usize,
        bytes: usize,
        bound: usize,
    },
    #[error(
        "oracle inconsistency: {example} appeared as both a positive example and a counterexample"
    )]
    InconsistentOracle { example: u64 },
    #[error("invalid run config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Learner(#[from] LearnerError),
    #[error(transparent)]
    Transcript(#[from] TranscriptError),
}

/// Everything a single dialogue needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub family_id: Option<String>,
    pub target: Language,
    pub verifier: VerifierKind,
    pub learner: LearnerSpec,
    pub order: TranscriptOrder,
    pub step_budget: usize,
    pub stability_window: usize,
    pub memory_bound: usize,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(target: Language, verifier: VerifierKind, learner: LearnerSpec) -> RunConfig {
        RunConfig {
            family_id: None,
            target,
            verifier,
            learner,
            order: TranscriptOrder::Ascending,
            step_budget: 1000,
            stability_window: 25,
            memory_bound: 4096,
            seed: 0,
        }
    }

    fn validate(&self) -> Result<(), EngineError> {
        if self.stability_window == 0 {
            return Err(EngineError::InvalidConfig(
                "stability window must be at least 1".into(),
            ));
        }
        if self.step_budget > 0 && self.step_budget < self.stability_window {
            return Err(EngineError::InvalidConfig(format!(
                "step budget {} is below the stability window {}",
                self.step_budget, self.stability_window
            )));
        }
        Ok(())
    }
}

/// Deterministic echo of the configuration, embedded in reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub family: Option<String>,
    pub target: String,
    pub verifier: String,
    pub learner: String,
    pub order: String,
    pub step_budget: usize,
    pub stability_window: usize,
    pub memory_bound: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceEntry {
    pub step: usize,
    pub hypothesis: String,
}

/// Outcome and metrics of one dialogue.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunResult {
    pub config: ConfigEcho,
    pub converged: bool,
    pub identified: bool,
    pub final_hypothesis: String,
    pub steps_used: usize,
    pub positive_queries: usize,
    pub correctness_queries: usize,
    pub probe_queries: usize,
    /// Non-bottom verdicts received over the run, probes included.
    pub counterexamples: usize,
    pub hypothesis_trace: Vec<TraceEntry>,
    pub max_state_bytes: usize,
    #[serde(skip)]
    pub final_language: Option<Language>,
}

/// Maximum serialized learner-state size over a run.
pub fn audit_memory<I: IntoIterator<Item = usize>>(sizes: I) -> usize {
    sizes.into_iter().max().unwrap_or(0)
}

/// Dialogue-side bookkeeping shared by the engine's own queries and the
/// learner's probes.
struct RunLog {
    interface: OracleInterface,
    dialogue: Vec<DialogueEntry>,
    cex: CexSequence,
    /// verdict cache keyed by candidate rendering plus the positive-bound
    /// threshold it was computed under (0 for threshold-free verifiers)
    verdicts: HashMap<(String, u64), Option<u64>>,
    correctness_queries: usize,
    probe_queries: usize,
    counterexamples: usize,
    seen_set: BTreeSet<u64>,
}

impl RunLog {
    fn record(&mut self, step: usize, query: Query, response: Response, probe: bool) {
        debug_assert!(
            self.interface.conforms(&query, &response),
            "dialogue pair does not conform to the oracle interface"
        );
        self.dialogue.push(DialogueEntry {
            step,
            query,
            response,
            probe,
        });
    }

    fn correctness(
        &mut self,
        step: usize,
        verifier: VerifierKind,
        target: &Language,
        candidate: &Language,
        seen: &[u64],
        probe: bool,
    ) -> Result<Option<u64>, EngineError> {
        let threshold = match verifier {
            VerifierKind::PositiveBounded => seen.iter().copied().max().map_or(0, |m| m + 1),
            _ => 0,
        };
        let key = (candidate.render(), threshold);
        if let Some(&v) = self.verdicts.get(&key) {
            return Ok(v);
        }
        let verdict = verifier.answer(target, candidate, seen);
        self.correctness_queries += 1;
        if verdict.is_some() {
            self.counterexamples += 1;
        }
        if probe {
            self.probe_queries += 1;
        }
        self.record(
            step,
            Query::Correctness(candidate.clone()),
            Response::Verdict(verdict.map(Example)),
            probe,
        );
        self.cex.push(CexEntry {
            step,
            value: verdict.map(Example),
            verifier: verifier.to_string(),
            candidate: candidate.render(),
            probe,
        });
        if let Some(c) = verdict {
            debug_assert!(
                candidate.contains(c) && !target.contains(c),
                "verifier returned an unsound counterexample"
            );
            if self.seen_set.contains(&c) {
                return Err(EngineError::InconsistentOracle { example: c });
            }
        }
        self.verdicts.insert(key, verdict);
        Ok(verdict)
    }
}

/// Probe handle passed into `Learner::step`; routes learner-issued
/// correctness queries through the same dialogue, flagged as probes.
struct EngineOracle<'a> {
    log: &'a mut RunLog,
    step: usize,
    verifier: VerifierKind,
    target: &'a Language,
    seen: &'a [u64],
    error: Option<EngineError>,
}

impl CorrectnessOracle for EngineOracle<'_> {
    fn correctness(&mut self, candidate: &Language) -> Option<u64> {
        match self.log.correctness(
            self.step,
            self.verifier,
            self.target,
            candidate,
            self.seen,
            true,
        ) {
            Ok(v) => v,
            Err(e) => {
                // surface the first inconsistency after the step completes
                if self.error.is_none() {
                    self.error = Some(e);
                }
                None
            }
        }
    }
}

/// Run one CEGIS dialogue to convergence or budget exhaustion.
///
/// Per step the oracle answers a positive-witness query from the transcript
/// (non-redundant, bottom once a finite target is exhausted) and a
/// correctness query on the learner's current hypothesis. Verdicts are
/// deterministic per candidate (and, for the positive-bounded verifier, per
/// threshold), so repeat queries are served from a cache and only fresh
/// oracle calls count toward the query metrics.
///
/// The run stops once the hypothesis has been stable for the configured
/// window — and, when the verifier is complete (check/mincheck), the last
/// verdict on that hypothesis was bottom. Identification is then judged
/// against the known target by the harness, not by the learner.
pub fn run_cegis(config: &RunConfig) -> Result<RunResult, EngineError> {
    config.validate()?;
    let learner = config.learner.build();
    run_with_learner(config, learner.as_ref())
}

fn run_with_learner(config: &RunConfig, learner: &dyn Learner) -> Result<RunResult, EngineError> {
    let mut transcript = Transcript::new(config.target.clone(), config.order.clone())?;
    let mut state = learner.initial_state();
    let mut log = RunLog {
        interface: OracleInterface::cegis(),
        dialogue: Vec::new(),
        cex: CexSequence::default(),
        verdicts: HashMap::new(),
        correctness_queries: 0,
        probe_queries: 0,
        counterexamples: 0,
        seen_set: BTreeSet::new(),
    };
    let mut trace = vec![TraceEntry {
        step: 0,
        hypothesis: state.hypothesis.render(),
    }];
    let mut max_state_bytes = state.serialized_size();
    let mut positive_queries = 0usize;
    let mut steps_used = 0usize;
    let mut unchanged = 0usize;
    let mut last_verdict: Option<u64> = None;

    for step in 1..=config.step_budget {
        steps_used = step;

        let pos = transcript.next_example();
        positive_queries += 1;
        log.record(
            step,
            Query::PositiveWitness,
            Response::Witness(pos.map(Example)),
            false,
        );
        if let Some(p) = pos {
            if log.cex.contains_value(p) {
                return Err(EngineError::InconsistentOracle { example: p });
            }
            log.seen_set.insert(p);
        }

        let seen: Vec<u64> = transcript.seen_positives().to_vec();
        let verdict = log.correctness(
            step,
            config.verifier,
            &config.target,
            &state.hypothesis,
            &seen,
            false,
        )?;
        last_verdict = verdict;

        let mut oracle = EngineOracle {
            log: &mut log,
            step,
            verifier: config.verifier,
            target: &config.target,
            seen: &seen,
            error: None,
        };
        let next = learn_step(learner, &state, pos, verdict, &mut oracle)?;
        if let Some(e) = oracle.error {
            return Err(e);
        }

        let bytes = next.serialized_size();
        max_state_bytes = max_state_bytes.max(bytes);
        if bytes > config.memory_bound {
            return Err(EngineError::MemoryBoundExceeded {
                step,
                bytes,
                bound: config.memory_bound,
            });
        }

        if next.hypothesis == state.hypothesis {
            unchanged += 1;
        } else {
            unchanged = 0;
            trace.push(TraceEntry {
                step,
                hypothesis: next.hypothesis.render(),
            });
        }
        state = next;

        if unchanged >= config.stability_window
            && (!config.verifier.is_complete() || last_verdict.is_none())
        {
            break;
        }
    }

    let converged = unchanged >= config.stability_window
        && (!config.verifier.is_complete() || last_verdict.is_none());
    let identified = converged && state.hypothesis.languages_equal(&config.target);

    Ok(RunResult {
        config: ConfigEcho {
            family: config.family_id.clone(),
            target: config.target.render(),
            verifier: config.verifier.to_string(),
            learner: config.learner.name().to_string(),
            order: config.order.id(),
            step_budget: config.step_budget,
            stability_window: config.stability_window,
            memory_bound: config.memory_bound,
            seed: config.seed,
        },
        converged,
        identified,
        final_hypothesis: state.hypothesis.render(),
        steps_used,
        positive_queries,
        correctness_queries: log.correctness_queries,
        probe_queries: log.probe_queries,
        counterexamples: log.counterexamples,
        hypothesis_trace: trace,
        max_state_bytes,
        final_language: Some(state.hypothesis),
    })
}

/// Per-order results plus the all-orders identification verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrdersResult {
    pub per_order: Vec<RunResult>,
    pub identified_all: bool,
}

/// Approximates the for-all-transcripts quantifier in the identification
/// definition: runs the same config over each order and conjoins the
/// identification flags.
pub fn identify_over_orders(
    config: &RunConfig,
    orders: &[TranscriptOrder],
) -> Result<OrdersResult, EngineError> {
    let mut per_order = Vec::with_capacity(orders.len());
    for order in orders {
        let mut c = config.clone();
        c.order = order.clone();
        per_order.push(run_cegis(&c)?);
    }
    let identified_all = !per_order.is_empty() && per_order.iter().all(|r| r.identified);
    Ok(OrdersResult {
        per_order,
        identified_all,
    })
}

/// Parameters of the family-3 adversary search.
#[derive(Debug, Clone, Copy)]
pub struct AdversaryParams {
    /// Largest power-of-two exponent considered for prefixes/extensions.
    pub max_exponent: u32,
    /// The `p` of the shared trigger `3 * 2^p`.
    pub trigger_exponent: u32,
    /// Total learner steps (prefix simulation plus certificate dialogues)
    /// the search may spend.
    pub step_budget: usize,
}

impl Default for AdversaryParams {
    fn default() -> Self {
        AdversaryParams {
            max_exponent: 10,
            trigger_exponent: 2,
            step_budget: 10_000,
        }
    }
}

/// Certificate that a learner converges identically on transcripts of two
/// distinct family-3 languages: the prefix, the power it fails to retain,
/// and the shared trigger, together with both dialogues' final hypotheses.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfusionWitness {
    pub prefix: Vec<u64>,
    pub skipped_power: u64,
    pub trigger: u64,
    pub target_a: String,
    pub target_b: String,
    pub final_a: String,
    pub final_b: String,
}

/// Searches for a pair of transcripts the learner cannot tell apart.
///
/// Enumerates power-of-two transcript prefixes (all ascending exponent
/// subsets up to `max_exponent`), looks for an extension power `2^m` that
/// leaves the serialized learner state unchanged, and on every such
/// collision runs both extended dialogues — prefix plus trigger versus
/// prefix plus `2^m` plus trigger — against their own targets under the
/// positive-bounded verifier. Equal final hypotheses on the two distinct
/// targets certify the confusion. `None` means no witness surfaced within
/// the budget, a valid outcome.
pub fn adversary_search(
    spec: &LearnerSpec,
    params: AdversaryParams,
) -> Result<Option<ConfusionWitness>, EngineError> {
    let learner = spec.build();
    let trigger = 3u64 << params.trigger_exponent;
    let mut spent = 0usize;
    let exponents = params.max_exponent + 1;

    for mask in 1u64..(1u64 << exponents) {
        let prefix: Vec<u64> = (0..exponents)
            .filter(|e| mask & (1 << e) != 0)
            .map(|e| 1u64 << e)
            .collect();

        let mut state = learner.initial_state();
        let mut feeding_failed = false;
        for &x in &prefix {
            spent += 1;
            match learn_step(learner.as_ref(), &state, Some(x), None, &mut SilentProbes) {
                Ok(s) => state = s,
                Err(_) => {
                    feeding_failed = true;
                    break;
                }
            }
        }
        if feeding_failed {
            continue;
        }
        if spent > params.step_budget {
            return Ok(None);
        }

        for m in 0..exponents {
            if mask & (1 << m) != 0 {
                continue;
            }
            let ext = 1u64 << m;
            spent += 1;
            let Ok(extended) =
                learn_step(learner.as_ref(), &state, Some(ext), None, &mut SilentProbes)
            else {
                continue;
            };
            if extended != state {
                if spent > params.step_budget {
                    return Ok(None);
                }
                continue;
            }

            // State collision: certify or refute by running both dialogues.
            let target_a = family3_target(&prefix, None, trigger);
            let target_b = family3_target(&prefix, Some(ext), trigger);
            let mut script_a = prefix.clone();
            script_a.push(trigger);
            let mut script_b = prefix.clone();
            script_b.push(ext);
            script_b.push(trigger);

            let run_a = certificate_run(spec, &target_a, script_a)?;
            let run_b = certificate_run(spec, &target_b, script_b)?;
            spent += run_a.steps_used + run_b.steps_used;

            let lang_a = run_a
                .final_language
                .as_ref()
                .expect("final language present");
            let lang_b = run_b
                .final_language
                .as_ref()
                .expect("final language present");
            if lang_a.languages_equal(lang_b) {
                return Ok(Some(ConfusionWitness {
                    prefix,
                    skipped_power: ext,
                    trigger,
                    target_a: target_a.render(),
                    target_b: target_b.render(),
                    final_a: run_a.final_hypothesis,
                    final_b: run_b.final_hypothesis,
                }));
            }
            if spent > params.step_budget {
                return Ok(None);
            }
        }
    }
    Ok(None)
}

/// Prefix simulation feeds positives only; probes (which a learner would
/// route to a real verifier) are answered with bottom.
struct SilentProbes;

impl CorrectnessOracle for SilentProbes {
    fn correctness(&mut self, _candidate: &Language) -> Option<u64> {
        None
    }
}

fn family3_target(prefix: &[u64], extra: Option<u64>, trigger: u64) -> Language {
    let mut pairs: Vec<(u8, u32)> = prefix
        .iter()
        .chain(extra.iter())
        .chain(std::iter::once(&trigger))
        .filter_map(|&x| crate::lang::pow32_decompose(x))
        .collect();
    pairs.sort_unstable();
    Language::pow32(pairs)
}

fn certificate_run(
    spec: &LearnerSpec,
    target: &Language,
    script: Vec<u64>,
) -> Result<RunResult, EngineError> {
    let mut config = RunConfig::new(target.clone(), VerifierKind::PositiveBounded, spec.clone());
    config.order = TranscriptOrder::Scripted(script.clone());
    config.stability_window = 8;
    config.step_budget = script.len() + 40;
    run_cegis(&config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifiers::Strategy;

    fn chain_config(i: u64, verifier: VerifierKind) -> RunConfig {
        let mut c = RunConfig::new(Language::UpTo(i), verifier, LearnerSpec::Chain);
        c.family_id = Some("notpb".into());
        c.step_budget = 200;
        c.stability_window = 10;
        c
    }

    #[test]
    fn chain_identifies_with_arbitrary_counterexamples() {
        let r = run_cegis(&chain_config(
            3,
            VerifierKind::Arbitrary(Strategy::Ascending),
        ))
        .unwrap();
        assert!(r.converged);
        assert!(r.identified);
        assert_eq!(r.final_hypothesis, "UpTo(3)");
        assert_eq!(r.correctness_queries, 5, "queries on UpTo(0)..UpTo(4)");
    }

    #[test]
    fn chain_fails_under_positive_bounded_verifier() {
        let r = run_cegis(&chain_config(3, VerifierKind::PositiveBounded)).unwrap();
        assert!(!r.identified);
        // the hypothesis grows past the target and never stabilizes
        assert!(!r.converged);
        assert_eq!(r.steps_used, 200);
    }

    #[test]
    fn gold_identifies_family1_without_bounded_counterexamples() {
        let target = Language::finite([9, 12]);
        let mut c = RunConfig::new(
            target,
            VerifierKind::ConstantBounded(8),
            LearnerSpec::GoldFinite,
        );
        c.step_budget = 100;
        c.stability_window = 10;
        let r = run_cegis(&c).unwrap();
        assert!(r.identified);
        // blind verifier: every verdict over the whole run was bottom
        assert_eq!(r.correctness_queries, 3); // Empty, Finite{9}, Finite{9,12}

        let mut arb = c.clone();
        arb.verifier = VerifierKind::Arbitrary(Strategy::Ascending);
        assert!(run_cegis(&arb).unwrap().identified);
    }

    #[test]
    fn determinism_byte_for_byte() {
        let mut c = chain_config(5, VerifierKind::Arbitrary(Strategy::SeededRandom(3)));
        c.order = TranscriptOrder::SeededShuffle(9);
        let a = serde_json::to_string(&run_cegis(&c).unwrap()).unwrap();
        let b = serde_json::to_string(&run_cegis(&c).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_budget_never_identifies() {
        let mut c = chain_config(2, VerifierKind::Arbitrary(Strategy::Ascending));
        c.step_budget = 0;
        let out = identify_over_orders(&c, &[TranscriptOrder::Ascending]).unwrap();
        assert!(!out.identified_all);
    }

    #[test]
    fn orders_aggregate_conjunction() {
        let c = chain_config(2, VerifierKind::Arbitrary(Strategy::Ascending));
        let orders: Vec<TranscriptOrder> = std::iter::once(TranscriptOrder::Ascending)
            .chain((0..5).map(TranscriptOrder::SeededShuffle))
            .collect();
        let out = identify_over_orders(&c, &orders).unwrap();
        assert!(out.identified_all);
        assert_eq!(out.per_order.len(), 6);
    }

    #[test]
    fn memory_bound_is_enforced() {
        let mut c = RunConfig::new(
            Language::finite((0..64).map(|i| i * 2).collect::<Vec<_>>()),
            VerifierKind::Arbitrary(Strategy::Ascending),
            LearnerSpec::GoldFinite,
        );
        c.memory_bound = 64;
        c.step_budget = 100;
        c.stability_window = 5;
        match run_cegis(&c) {
            Err(EngineError::MemoryBoundExceeded { .. }) => {}
            other => panic!("expected memory bound exceeded, got {other:?}"),
        }
    }

    #[test]
    fn pbcegis_identifies_its_family_targets() {
        // the finite member, given in Finite form to exercise cross-form
        // identification; the tail; and a one-element member
        let targets = [
            Language::finite([2, 6, 16]),
            Language::Pow2AtLeast(2),
            Language::finite([6]),
        ];
        let orders: Vec<TranscriptOrder> = std::iter::once(TranscriptOrder::Ascending)
            .chain((0..9).map(TranscriptOrder::SeededShuffle))
            .collect();
        for target in targets {
            let mut c = RunConfig::new(
                target.clone(),
                VerifierKind::PositiveBounded,
                LearnerSpec::PbcegisFamily3,
            );
            c.step_budget = 200;
            c.stability_window = 15;
            let out = identify_over_orders(&c, &orders).unwrap();
            assert!(out.identified_all, "pbcegis-family3 must identify {target}");
        }
    }

    #[test]
    fn pbcegis_probes_are_counted_and_flagged() {
        let mut c = RunConfig::new(
            Language::finite([2, 6, 16]),
            VerifierKind::PositiveBounded,
            LearnerSpec::PbcegisFamily3,
        );
        c.step_budget = 100;
        c.stability_window = 10;
        let r = run_cegis(&c).unwrap();
        assert!(r.identified);
        assert!(r.probe_queries > 0, "phase 2 issues probe queries");
        assert!(r.correctness_queries >= r.probe_queries);
    }

    #[test]
    fn chain_memory_is_constant_across_target_sizes() {
        let run_max = |i: u64| {
            let mut c = chain_config(i, VerifierKind::Arbitrary(Strategy::Ascending));
            c.step_budget = 400;
            run_cegis(&c).unwrap().max_state_bytes
        };
        assert_eq!(run_max(5), run_max(50));
    }

    #[test]
    fn gold_memory_grows_with_target_size() {
        let run_max = |n: u64| {
            let target = Language::finite((0..n).map(|i| i * 3).collect::<Vec<_>>());
            let mut c = RunConfig::new(
                target,
                VerifierKind::Arbitrary(Strategy::Ascending),
                LearnerSpec::GoldFinite,
            );
            c.step_budget = 200;
            c.stability_window = 10;
            run_cegis(&c).unwrap().max_state_bytes
        };
        assert!(run_max(12) > run_max(3));
    }

    #[test]
    fn audit_memory_of_empty_trace_is_zero_and_initial_otherwise() {
        assert_eq!(audit_memory([]), 0);
        let init = LearnerSpec::Chain.build().initial_state().serialized_size();
        assert_eq!(audit_memory([init]), init);
    }

    #[test]
    fn consistent_enum_identifies_within_two_examples_on_tiny_powerset() {
        let class = vec![
            Language::Empty,
            Language::finite([0]),
            Language::finite([1]),
            Language::finite([0, 1]),
        ];
        let mut c = RunConfig::new(
            Language::finite([0]),
            VerifierKind::Arbitrary(Strategy::Ascending),
            LearnerSpec::ConsistentEnum(class),
        );
        c.step_budget = 50;
        c.stability_window = 5;
        let r = run_cegis(&c).unwrap();
        assert!(r.identified);
        let examples_consumed = r.positive_queries.min(2) + r.counterexamples;
        assert!(examples_consumed <= 2);
    }

    #[test]
    fn adversary_defeats_lossy_baseline() {
        let w = adversary_search(&LearnerSpec::LossyGold(3), AdversaryParams::default())
            .unwrap()
            .expect("lossy baseline must be confusable");
        assert_eq!(w.prefix.len(), 3);
        assert_eq!(w.final_a, w.final_b);
        assert_ne!(w.target_a, w.target_b);
    }

    #[test]
    fn adversary_finds_nothing_against_pbcegis() {
        let w = adversary_search(&LearnerSpec::PbcegisFamily3, AdversaryParams::default()).unwrap();
        assert!(w.is_none());
    }

    #[test]
    fn zero_adversary_budget_finds_nothing() {
        let params = AdversaryParams {
            step_budget: 0,
            ..AdversaryParams::default()
        };
        assert!(adversary_search(&LearnerSpec::LossyGold(3), params)
            .unwrap()
            .is_none());
    }
}
