//! Learner contracts and the concrete learning algorithms the separation
//! experiments exercise.
//!
//! Every learner here is finite-memory: its whole state is a catalog
//! hypothesis plus a fixed number of auxiliary scalars. State size is
//! accounted with a fixed-width encoding (see [`language_encoded_bytes`]);
//! the engine audits the per-step maximum against the configured bound.

use crate::lang::{pow32_value, Language};
use crate::verifiers::hcheck;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LearnerError {
    #[error("inconsistent input: {0} arrived as both a positive example and a counterexample")]
    InconsistentInput(u64),
    #[error("bound discovery requires a positive example of the form 3*2^k first")]
    PhaseError,
    #[error("no concept in the class is consistent with the received examples")]
    NoConsistentConcept,
    #[error("unknown learner id `{0}`")]
    UnknownLearner(String),
    #[error("learner `{0}` needs a concept class")]
    ClassRequired(String),
}

/// Fixed-width byte size of a language form.
///
/// Scalars are 8 bytes, form tags 1 byte, exponents 4 bytes. `Finite` pays
/// 8 bytes per element; `Pow32Finite` is encoded as two 64-bit exponent
/// bitmasks (one per `j`), which its invariants (`j <= 1`, `i <= 62`) make
/// exact — so it is a fixed-size form regardless of cardinality.
pub fn language_encoded_bytes(lang: &Language) -> usize {
    match lang {
        Language::Empty | Language::Universe => 1,
        Language::UpTo(_) | Language::AllAbove(_) => 1 + 8,
        Language::Pow2AtLeast(_) => 1 + 4,
        Language::Finite(v) => 1 + 8 + 8 * v.len(),
        Language::Pow32Finite(_) => 1 + 8 + 8,
    }
}

/// Sentinel for "absent" in the fixed-width scalar block.
const NONE_SENTINEL: u64 = u64::MAX;

/// A learner's whole inter-step memory: the current hypothesis plus a
/// fixed-length block of scalars and a flag byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerState {
    pub hypothesis: Language,
    pub flags: u8,
    pub scalars: Vec<u64>,
}

impl LearnerState {
    pub fn new(hypothesis: Language, flags: u8, scalars: Vec<u64>) -> Self {
        LearnerState {
            hypothesis,
            flags,
            scalars,
        }
    }

    /// Fixed-width serialized size in bytes: hypothesis + flag byte +
    /// 8 bytes per scalar slot.
    pub fn serialized_size(&self) -> usize {
        language_encoded_bytes(&self.hypothesis) + 1 + 8 * self.scalars.len()
    }
}

/// The correctness-query channel a learner may probe during a step. The
/// engine routes these through the run's dialogue (flagged as probes) and
/// answers them with the configured verifier.
pub trait CorrectnessOracle {
    fn correctness(&mut self, candidate: &Language) -> Option<u64>;
}

/// Standalone probe oracle answering via `hcheck` against a fixed target and
/// positive-example prefix. Used by the bound-discovery and recovery
/// operations when exercised outside a full run.
pub struct HcheckOracle<'a> {
    pub target: &'a Language,
    pub seen: &'a [u64],
}

impl CorrectnessOracle for HcheckOracle<'_> {
    fn correctness(&mut self, candidate: &Language) -> Option<u64> {
        hcheck(self.target, candidate, self.seen)
    }
}

/// Probe oracle for learners that never probe; reaching it is a bug.
pub struct NoProbes;

impl CorrectnessOracle for NoProbes {
    fn correctness(&mut self, candidate: &Language) -> Option<u64> {
        panic!("unexpected probe on {candidate}: this learner should not issue probes")
    }
}

/// An iterative finite-memory learner. `step` consumes one dialogue round:
/// the latest positive example (or bottom) and the latest counterexample
/// (or bottom), and may issue probe queries through the oracle handle.
pub trait Learner: Send + Sync {
    fn name(&self) -> &str;
    fn initial_state(&self) -> LearnerState;
    fn step(
        &self,
        state: &LearnerState,
        pos: Option<u64>,
        cex: Option<u64>,
        oracle: &mut dyn CorrectnessOracle,
    ) -> Result<LearnerState, LearnerError>;
}

/// One learning step with the shared input-consistency check.
pub fn learn_step(
    learner: &dyn Learner,
    state: &LearnerState,
    pos: Option<u64>,
    cex: Option<u64>,
    oracle: &mut dyn CorrectnessOracle,
) -> Result<LearnerState, LearnerError> {
    if let (Some(p), Some(c)) = (pos, cex) {
        if p == c {
            return Err(LearnerError::InconsistentInput(p));
        }
    }
    learner.step(state, pos, cex, oracle)
}

fn finite_elements(lang: &Language) -> Vec<u64> {
    match lang {
        Language::Empty => Vec::new(),
        Language::Finite(v) => v.clone(),
        Language::Pow32Finite(v) => v.iter().map(|&(j, i)| pow32_value(j, i)).collect(),
        other => panic!("expected an explicit finite hypothesis, got {other}"),
    }
}

// ---------------------------------------------------------------------------
// gold-finite: guess exactly the sample seen so far.

/// Gold-style learner for finite languages: the hypothesis is exactly the
/// set of positives received. Starts at `Empty` (the empty sample), so it
/// never proposes anything outside the target and never draws a
/// counterexample from any verifier.
pub struct GoldFinite;

impl Learner for GoldFinite {
    fn name(&self) -> &str {
        "gold-finite"
    }

    fn initial_state(&self) -> LearnerState {
        LearnerState::new(Language::Empty, 0, vec![])
    }

    fn step(
        &self,
        state: &LearnerState,
        pos: Option<u64>,
        cex: Option<u64>,
        _oracle: &mut dyn CorrectnessOracle,
    ) -> Result<LearnerState, LearnerError> {
        let mut elems = finite_elements(&state.hypothesis);
        if let Some(x) = pos {
            elems.push(x);
        }
        if let Some(c) = cex {
            elems.retain(|&e| e != c);
        }
        Ok(LearnerState::new(Language::finite(elems), 0, vec![]))
    }
}

// ---------------------------------------------------------------------------
// lossy-gold-3: bounded-capacity Gold baseline.

/// Gold-style learner whose memory holds at most `capacity` positives: once
/// full, later positives are dropped on the floor. The deliberately lossy
/// baseline the adversary search defeats.
pub struct LossyGold {
    pub capacity: usize,
}

impl Learner for LossyGold {
    fn name(&self) -> &str {
        "lossy-gold-3"
    }

    fn initial_state(&self) -> LearnerState {
        LearnerState::new(Language::Empty, 0, vec![])
    }

    fn step(
        &self,
        state: &LearnerState,
        pos: Option<u64>,
        cex: Option<u64>,
        _oracle: &mut dyn CorrectnessOracle,
    ) -> Result<LearnerState, LearnerError> {
        let mut elems = finite_elements(&state.hypothesis);
        if let Some(c) = cex {
            elems.retain(|&e| e != c);
        }
        if let Some(x) = pos {
            if elems.len() < self.capacity && !elems.contains(&x) {
                elems.push(x);
            }
        }
        Ok(LearnerState::new(Language::finite(elems), 0, vec![]))
    }
}

// ---------------------------------------------------------------------------
// chain: walk up the UpTo chain until the first counterexample.

const CHAIN_CONVERGED: u8 = 1;

/// Chain learner for `UpTo` families: starts at `UpTo(0)` and proposes the
/// next link while no counterexample arrives; on the first counterexample it
/// reports the previous link and stops moving.
pub struct Chain;

impl Learner for Chain {
    fn name(&self) -> &str {
        "chain"
    }

    fn initial_state(&self) -> LearnerState {
        LearnerState::new(Language::UpTo(0), 0, vec![])
    }

    fn step(
        &self,
        state: &LearnerState,
        _pos: Option<u64>,
        cex: Option<u64>,
        _oracle: &mut dyn CorrectnessOracle,
    ) -> Result<LearnerState, LearnerError> {
        if state.flags & CHAIN_CONVERGED != 0 {
            return Ok(state.clone());
        }
        let i = match state.hypothesis {
            Language::UpTo(i) => i,
            _ => return Ok(state.clone()),
        };
        Ok(if cex.is_some() {
            let hyp = if i == 0 {
                Language::Empty
            } else {
                Language::UpTo(i - 1)
            };
            LearnerState::new(hyp, CHAIN_CONVERGED, vec![])
        } else {
            LearnerState::new(Language::UpTo(i + 1), 0, vec![])
        })
    }
}

// ---------------------------------------------------------------------------
// pbcegis-family3: the two-phase positive-bounded learner.

const PB_PHASE2: u8 = 1;
const PB_MIN_EXP: usize = 0;
const PB_MAX_EXP: usize = 1;
const PB_BOUND: usize = 2;

/// Discovers the coarse upper bound on the positives seen so far: the least
/// `k >= 2` such that proposing the singleton `{3^k}` draws no
/// counterexample. `3^k` is never in a family-3 target, so a silent probe
/// means `3^k` is at least as large as every seen positive.
///
/// `trigger` is the `3*2^k` positive that moved the learner into its second
/// phase; bound discovery before that point is a phase error.
pub fn pb_discover_bound(
    oracle: &mut dyn CorrectnessOracle,
    trigger: Option<u64>,
) -> Result<u32, LearnerError> {
    match trigger.and_then(crate::lang::pow32_decompose) {
        Some((1, _)) => {}
        _ => return Err(LearnerError::PhaseError),
    }
    for k in 2..=40u32 {
        let v = 3u64.pow(k);
        if oracle.correctness(&Language::singleton(v)).is_none() {
            return Ok(k);
        }
    }
    Ok(40)
}

/// Recovers previously seen positives by singleton probes: every power
/// `2^l` below both `3^bound` and `max_seen` whose correctness probe stays
/// silent, plus `max_seen` itself when it is a power (it was delivered as a
/// positive, so it is in the target).
///
/// Below `max_seen` a probe is conclusive: a counterexample reply proves
/// the power is outside the target, silence proves it is inside. At or
/// above `max_seen` the positive-bounded verifier goes blind (silence stops
/// meaning membership), so probing there would misclassify — the cap keeps
/// every answer exact, and powers of the target that have not been seen yet
/// still arrive later through the transcript.
pub fn pb_recover_positives(
    oracle: &mut dyn CorrectnessOracle,
    bound: u32,
    max_seen: u64,
) -> BTreeSet<u64> {
    let limit = 3u64.pow(bound.min(40)).min(max_seen);
    let mut out = BTreeSet::new();
    let mut l = 0u32;
    while l <= 62 {
        let v = 1u64 << l;
        if v >= limit {
            break;
        }
        if oracle.correctness(&Language::singleton(v)).is_none() {
            out.insert(v);
        }
        l += 1;
    }
    if max_seen.is_power_of_two() && max_seen < 3u64.pow(bound.min(40)) {
        out.insert(max_seen);
    }
    out
}

/// The learner from the positive-bounded separation: identifies every
/// member of the family of finite `{3^j * 2^i}` subsets (each containing
/// some `3*2^k`) together with the power-of-two tails.
///
/// Phase 1: while only powers of two have arrived, propose the tail from
/// the least exponent seen. Phase 2 (entered on the first `3*2^k`
/// positive): the target must be the finite kind, so discover the bound on
/// seen positives, recover the forgotten powers by singleton probes, and
/// from then on grow the finite hypothesis Gold-style.
///
/// Auxiliary scalars: least and greatest power exponents seen, and the
/// discovered probe bound — a constant-size record.
pub struct PbcegisFamily3;

impl Learner for PbcegisFamily3 {
    fn name(&self) -> &str {
        "pbcegis-family3"
    }

    fn initial_state(&self) -> LearnerState {
        LearnerState::new(
            Language::Universe,
            0,
            vec![NONE_SENTINEL, NONE_SENTINEL, NONE_SENTINEL],
        )
    }

    fn step(
        &self,
        state: &LearnerState,
        pos: Option<u64>,
        cex: Option<u64>,
        oracle: &mut dyn CorrectnessOracle,
    ) -> Result<LearnerState, LearnerError> {
        let mut next = state.clone();
        if state.flags & PB_PHASE2 != 0 {
            // Gold-style accumulation inside the finite family.
            let mut pairs = match &state.hypothesis {
                Language::Pow32Finite(v) => v.clone(),
                _ => Vec::new(),
            };
            if let Some(c) = cex {
                pairs.retain(|&(j, i)| pow32_value(j, i) != c);
            }
            if let Some(p) = pos {
                if let Some(pair) = crate::lang::pow32_decompose(p) {
                    pairs.push(pair);
                }
            }
            next.hypothesis = Language::pow32(pairs);
            return Ok(next);
        }

        let Some(p) = pos else {
            return Ok(next); // phase 1 ignores counterexamples
        };
        match crate::lang::pow32_decompose(p) {
            Some((1, _)) => {
                // Trigger: the target is a finite family member. The exact
                // maximum seen so far is known from the tracked exponents.
                let max_power = match state.scalars[PB_MAX_EXP] {
                    NONE_SENTINEL => None,
                    e => Some(1u64 << e),
                };
                let max_seen = max_power.map_or(p, |m| m.max(p));
                let bound = pb_discover_bound(oracle, Some(p))?;
                let mut members = pb_recover_positives(oracle, bound, max_seen);
                members.insert(p);
                let pairs: Vec<(u8, u32)> = members
                    .into_iter()
                    .filter_map(crate::lang::pow32_decompose)
                    .collect();
                next.hypothesis = Language::pow32(pairs);
                next.flags |= PB_PHASE2;
                next.scalars[PB_BOUND] = bound as u64;
            }
            Some((0, e)) => {
                let e = e as u64;
                let min = match state.scalars[PB_MIN_EXP] {
                    NONE_SENTINEL => e,
                    m => m.min(e),
                };
                let max = match state.scalars[PB_MAX_EXP] {
                    NONE_SENTINEL => e,
                    m => m.max(e),
                };
                next.scalars[PB_MIN_EXP] = min;
                next.scalars[PB_MAX_EXP] = max;
                next.hypothesis = Language::Pow2AtLeast(min as u32);
            }
            _ => {} // off-family positive: outside this learner's bias
        }
        Ok(next)
    }
}

// ---------------------------------------------------------------------------
// consistent-enum: identification by enumeration over an explicit class.

/// Baseline learner for finite concept classes: remembers only an index
/// into the class (plus the example pair just received) and advances to the
/// least index at or after the current one consistent with that pair. The
/// index never decreases.
pub struct ConsistentEnum {
    concepts: Vec<Language>,
}

impl ConsistentEnum {
    pub fn new(concepts: Vec<Language>) -> Result<ConsistentEnum, LearnerError> {
        if concepts.is_empty() {
            return Err(LearnerError::NoConsistentConcept);
        }
        Ok(ConsistentEnum { concepts })
    }

    pub fn concepts(&self) -> &[Language] {
        &self.concepts
    }
}

impl Learner for ConsistentEnum {
    fn name(&self) -> &str {
        "consistent-enum"
    }

    fn initial_state(&self) -> LearnerState {
        LearnerState::new(self.concepts[0].clone(), 0, vec![0])
    }

    fn step(
        &self,
        state: &LearnerState,
        pos: Option<u64>,
        cex: Option<u64>,
        _oracle: &mut dyn CorrectnessOracle,
    ) -> Result<LearnerState, LearnerError> {
        let idx = state.scalars[0] as usize;
        let consistent =
            |c: &Language| pos.is_none_or(|p| c.contains(p)) && cex.is_none_or(|x| !c.contains(x));
        for j in idx..self.concepts.len() {
            if consistent(&self.concepts[j]) {
                return Ok(LearnerState::new(
                    self.concepts[j].clone(),
                    0,
                    vec![j as u64],
                ));
            }
        }
        Err(LearnerError::NoConsistentConcept)
    }
}

// ---------------------------------------------------------------------------
// Infinite-memory batch learning.

/// Full example history as stored by an unbounded-memory learner.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct History {
    pub positives: BTreeSet<u64>,
    pub negatives: BTreeSet<u64>,
}

impl History {
    pub fn is_consistent(&self) -> bool {
        self.positives.is_disjoint(&self.negatives)
    }
}

/// Which family of forms a batch learner searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BatchBias {
    /// Exactly the positive sample, as a `Finite` set.
    FiniteSet,
    /// Exactly the positive sample, as a `Pow32Finite` member.
    Family3,
    /// The least `UpTo` chain containing every positive.
    Chain,
}

/// One-shot inference from a full history: a catalog hypothesis containing
/// every positive and excluding every negative, `Universe` for the empty
/// history, and `Empty` when no biased form is consistent.
pub fn learn_batch(bias: BatchBias, history: &History) -> Language {
    if !history.is_consistent() {
        return Language::Empty;
    }
    if history.positives.is_empty() && history.negatives.is_empty() {
        return Language::Universe;
    }
    match bias {
        BatchBias::FiniteSet => Language::finite(history.positives.iter().copied()),
        BatchBias::Family3 => {
            let pairs: Vec<(u8, u32)> = history
                .positives
                .iter()
                .copied()
                .filter_map(crate::lang::pow32_decompose)
                .collect();
            if pairs.len() != history.positives.len() {
                return Language::Empty; // some positive has no family-3 form
            }
            Language::pow32(pairs)
        }
        BatchBias::Chain => match history.positives.iter().max() {
            Some(&max) => {
                if history.negatives.iter().any(|&n| n <= max) {
                    Language::Empty
                } else {
                    Language::UpTo(max)
                }
            }
            None => {
                if history.negatives.contains(&0) {
                    Language::Empty
                } else {
                    Language::UpTo(0)
                }
            }
        },
    }
}

// ---------------------------------------------------------------------------
// Registry.

/// Buildable learner description, addressable by name from the CLI and
/// configuration.
#[derive(Debug, Clone)]
pub enum LearnerSpec {
    GoldFinite,
    Chain,
    PbcegisFamily3,
    LossyGold(usize),
    ConsistentEnum(Vec<Language>),
}

impl LearnerSpec {
    /// Registered names: `gold-finite`, `chain`, `pbcegis-family3`,
    /// `lossy-gold-3`, `consistent-enum` (the last needs a concept class,
    /// typically the selected family's members).
    pub fn parse(name: &str, class: Option<&[Language]>) -> Result<LearnerSpec, LearnerError> {
        match name {
            "gold-finite" => Ok(LearnerSpec::GoldFinite),
            "chain" => Ok(LearnerSpec::Chain),
            "pbcegis-family3" => Ok(LearnerSpec::PbcegisFamily3),
            "lossy-gold-3" => Ok(LearnerSpec::LossyGold(3)),
            "consistent-enum" => match class {
                Some(c) if !c.is_empty() => Ok(LearnerSpec::ConsistentEnum(c.to_vec())),
                _ => Err(LearnerError::ClassRequired(name.into())),
            },
            other => Err(LearnerError::UnknownLearner(other.into())),
        }
    }

    pub fn build(&self) -> Box<dyn Learner> {
        match self {
            LearnerSpec::GoldFinite => Box::new(GoldFinite),
            LearnerSpec::Chain => Box::new(Chain),
            LearnerSpec::PbcegisFamily3 => Box::new(PbcegisFamily3),
            LearnerSpec::LossyGold(cap) => Box::new(LossyGold { capacity: *cap }),
            LearnerSpec::ConsistentEnum(c) => {
                Box::new(ConsistentEnum::new(c.clone()).expect("class validated at parse time"))
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LearnerSpec::GoldFinite => "gold-finite",
            LearnerSpec::Chain => "chain",
            LearnerSpec::PbcegisFamily3 => "pbcegis-family3",
            LearnerSpec::LossyGold(_) => "lossy-gold-3",
            LearnerSpec::ConsistentEnum(_) => "consistent-enum",
        }
    }
}

/// Constructor for the family-3 learner, mirroring the registry entry.
pub fn pbcegis_family3_learner() -> PbcegisFamily3 {
    PbcegisFamily3
}

/// Constructor for the enumeration learner over an explicit class.
pub fn consistent_enum_learner(concepts: Vec<Language>) -> Result<ConsistentEnum, LearnerError> {
    ConsistentEnum::new(concepts)
}
