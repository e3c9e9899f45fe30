//! Finite concept classes: teaching dimension, VC dimension, minimum
//! counterexample sets, the set-cover reduction, and the sample-complexity
//! measurement against teaching dimension.
//!
//! Everything here is exact. Dimensions and minimum sets come from
//! increasing-size subset enumeration; set cover uses branch and bound with
//! a greedy bound only to prune, never to answer.

use crate::lang::Language;
use crate::query::{OracleInterface, QueryKind, ResponseKind};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FiniteLabError {
    #[error("domain has {len} examples, over the limit of {max} for this operation")]
    DomainTooLarge { len: usize, max: usize },
    #[error("class has {len} concepts, over the limit of {max} for this operation")]
    TooManyConcepts { len: usize, max: usize },
    #[error("concepts must be distinct as sets (concepts {0} and {1} coincide)")]
    DuplicateConcept(usize, usize),
    #[error("concept {concept} contains {element}, which is outside the domain")]
    OutsideDomain { concept: usize, element: u64 },
    #[error("target index {0} is out of range")]
    TargetOutOfRange(usize),
    #[error("the sets do not cover the universe")]
    Uncoverable,
    #[error("the class has no concepts")]
    EmptyClass,
    #[error("the oracle interface preset lacks {0:?} queries")]
    UnsupportedInterface(QueryKind),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// An explicit concept class over a finite example domain. Concepts are
/// kept as bitmasks over domain positions; the public surface speaks in
/// example values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteConceptClass {
    domain: Vec<u64>,
    concepts: Vec<u32>,
    target: Option<usize>,
}

const MAX_DOMAIN_DIM: usize = 16;
const MAX_DOMAIN_COVER: usize = 20;
const MAX_CONCEPTS: usize = 4096;

impl FiniteConceptClass {
    pub fn new(
        domain: Vec<u64>,
        concepts: Vec<BTreeSet<u64>>,
    ) -> Result<FiniteConceptClass, FiniteLabError> {
        let mut dom = domain;
        dom.sort_unstable();
        dom.dedup();
        if dom.len() > 32 {
            return Err(FiniteLabError::DomainTooLarge {
                len: dom.len(),
                max: 32,
            });
        }
        if concepts.is_empty() {
            return Err(FiniteLabError::EmptyClass);
        }
        let mut masks = Vec::with_capacity(concepts.len());
        for (ci, c) in concepts.iter().enumerate() {
            let mut mask = 0u32;
            for &e in c {
                match dom.binary_search(&e) {
                    Ok(pos) => mask |= 1 << pos,
                    Err(_) => {
                        return Err(FiniteLabError::OutsideDomain {
                            concept: ci,
                            element: e,
                        })
                    }
                }
            }
            if let Some(prev) = masks.iter().position(|&m| m == mask) {
                return Err(FiniteLabError::DuplicateConcept(prev, ci));
            }
            masks.push(mask);
        }
        Ok(FiniteConceptClass {
            domain: dom,
            concepts: masks,
            target: None,
        })
    }

    pub fn with_target(mut self, target: usize) -> Result<FiniteConceptClass, FiniteLabError> {
        if target >= self.concepts.len() {
            return Err(FiniteLabError::TargetOutOfRange(target));
        }
        self.target = Some(target);
        Ok(self)
    }

    pub fn domain(&self) -> &[u64] {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn target(&self) -> Option<usize> {
        self.target
    }

    pub fn concept_elements(&self, idx: usize) -> BTreeSet<u64> {
        let mask = self.concepts[idx];
        self.domain
            .iter()
            .enumerate()
            .filter(|(pos, _)| mask & (1 << pos) != 0)
            .map(|(_, &e)| e)
            .collect()
    }

    /// The concept as a catalog language (a `Finite` set, or `Empty`).
    pub fn concept_language(&self, idx: usize) -> Language {
        Language::finite(self.concept_elements(idx))
    }

    /// All concepts as languages, e.g. for the enumeration learner.
    pub fn concept_languages(&self) -> Vec<Language> {
        (0..self.concepts.len())
            .map(|i| self.concept_language(i))
            .collect()
    }

    fn check_dims(&self, max_domain: usize) -> Result<(), FiniteLabError> {
        if self.domain.len() > max_domain {
            return Err(FiniteLabError::DomainTooLarge {
                len: self.domain.len(),
                max: max_domain,
            });
        }
        if self.concepts.len() > MAX_CONCEPTS {
            return Err(FiniteLabError::TooManyConcepts {
                len: self.concepts.len(),
                max: MAX_CONCEPTS,
            });
        }
        Ok(())
    }

    fn shatters(&self, subset: u32) -> bool {
        let want = 1usize << subset.count_ones();
        let mut seen = BTreeSet::new();
        for &c in &self.concepts {
            seen.insert(c & subset);
            if seen.len() == want {
                return true;
            }
        }
        false
    }

    /// Largest size of a shattered domain subset; 0 when only the empty set
    /// shatters. Exhaustive over domain subsets.
    pub fn vc_dimension(&self) -> Result<u32, FiniteLabError> {
        self.check_dims(MAX_DOMAIN_DIM)?;
        let d = self.domain.len() as u32;
        for size in (1..=d).rev() {
            let mut found = false;
            for_each_combination(d as usize, size as usize, &mut |subset| {
                if !found && self.shatters(subset) {
                    found = true;
                }
            });
            if found {
                return Ok(size);
            }
        }
        Ok(0)
    }

    /// Minimum teaching sequence for one concept: the smallest labeled
    /// example set consistent with that concept alone. Exact by
    /// increasing-size enumeration.
    fn min_teaching_mask(&self, idx: usize) -> u32 {
        let c = self.concepts[idx];
        let d = self.domain.len();
        for size in 0..=d {
            let mut best: Option<u32> = None;
            for_each_combination(d, size, &mut |subset| {
                if best.is_some() {
                    return;
                }
                let consistent = self
                    .concepts
                    .iter()
                    .filter(|&&c2| c2 & subset == c & subset)
                    .count();
                if consistent == 1 {
                    best = Some(subset);
                }
            });
            if let Some(mask) = best {
                return mask;
            }
        }
        unreachable!("the full domain labeling always isolates a concept in a duplicate-free class")
    }

    /// Teaching dimension with one minimal teaching sequence per concept.
    pub fn teaching_dimension(&self) -> Result<TeachingReport, FiniteLabError> {
        self.check_dims(MAX_DOMAIN_DIM)?;
        let mut per_concept = Vec::with_capacity(self.concepts.len());
        for idx in 0..self.concepts.len() {
            let mask = self.min_teaching_mask(idx);
            let examples = self
                .domain
                .iter()
                .enumerate()
                .filter(|(pos, _)| mask & (1 << pos) != 0)
                .map(|(pos, &e)| (e, self.concepts[idx] & (1 << pos) != 0))
                .collect::<Vec<_>>();
            per_concept.push(TeachingSequence {
                concept: idx,
                examples,
            });
        }
        let td = per_concept
            .iter()
            .map(|t| t.examples.len())
            .max()
            .unwrap_or(0);
        Ok(TeachingReport { td, per_concept })
    }

    /// Checks `VC/log2|C| <= TD <= |C| - 1`; the lower bound is skipped for
    /// single-concept classes where the logarithm vanishes.
    pub fn td_bounds_check(&self) -> Result<BoundsReport, FiniteLabError> {
        let vc = self.vc_dimension()?;
        let td = self.teaching_dimension()?.td;
        let class_size = self.concepts.len();
        let upper = class_size - 1;
        let (lower, lower_checked) = if class_size >= 2 {
            (vc as f64 / (class_size as f64).log2(), true)
        } else {
            (0.0, false)
        };
        let pass = (!lower_checked || lower <= td as f64) && td <= upper;
        Ok(BoundsReport {
            vc,
            td,
            class_size,
            lower,
            lower_checked,
            upper,
            pass,
        })
    }

    /// Minimum-cardinality example set distinguishing the target from every
    /// other concept: each chosen example lies in the symmetric difference
    /// of some non-target concept and the target, and every non-target
    /// concept is separated by at least one chosen example. Exhaustive
    /// increasing-size subset search.
    pub fn min_counterexample_set(&self, target: usize) -> Result<Vec<u64>, FiniteLabError> {
        if target >= self.concepts.len() {
            return Err(FiniteLabError::TargetOutOfRange(target));
        }
        self.check_dims(MAX_DOMAIN_COVER)?;
        let t = self.concepts[target];
        let diffs: Vec<u32> = self
            .concepts
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != target)
            .map(|(_, &c)| c ^ t)
            .collect();
        // pool of candidate examples: anything in some symmetric difference
        let pool_mask: u32 = diffs.iter().fold(0, |a, &d| a | d);
        let pool: Vec<usize> = (0..self.domain.len())
            .filter(|pos| pool_mask & (1 << pos) != 0)
            .collect();
        for size in 0..=pool.len() {
            let mut best: Option<u32> = None;
            for_each_combination(pool.len(), size, &mut |subset_idx| {
                if best.is_some() {
                    return;
                }
                let mut mask = 0u32;
                for (slot, &pos) in pool.iter().enumerate() {
                    if subset_idx & (1 << slot) != 0 {
                        mask |= 1 << pos;
                    }
                }
                if diffs.iter().all(|&d| d & mask != 0) {
                    best = Some(mask);
                }
            });
            if let Some(mask) = best {
                return Ok(self
                    .domain
                    .iter()
                    .enumerate()
                    .filter(|(pos, _)| mask & (1 << pos) != 0)
                    .map(|(_, &e)| e)
                    .collect());
            }
        }
        // every non-target concept differs somewhere, so the full pool works
        unreachable!("the full candidate pool always separates distinct concepts")
    }

    /// Positive/negative label of `x` under the target concept.
    pub fn membership_label(&self, target: usize, x: u64) -> Result<bool, FiniteLabError> {
        if target >= self.concepts.len() {
            return Err(FiniteLabError::TargetOutOfRange(target));
        }
        match self.domain.binary_search(&x) {
            Ok(pos) => Ok(self.concepts[target] & (1 << pos) != 0),
            Err(_) => Ok(false),
        }
    }

    /// Distinguishing-input query: the least-indexed concept other than
    /// `concept` containing all of `examples`, together with the least
    /// example in their symmetric difference; `None` when `concept` is the
    /// only consistent one.
    pub fn distinguishing_input(
        &self,
        examples: &BTreeSet<u64>,
        concept: usize,
    ) -> Result<Option<(usize, u64)>, FiniteLabError> {
        if concept >= self.concepts.len() {
            return Err(FiniteLabError::TargetOutOfRange(concept));
        }
        let mut wanted = 0u32;
        for &e in examples {
            match self.domain.binary_search(&e) {
                Ok(pos) => wanted |= 1 << pos,
                Err(_) => return Ok(None), // an example outside the domain fits no concept
            }
        }
        for (j, &c) in self.concepts.iter().enumerate() {
            if j == concept || c & wanted != wanted {
                continue;
            }
            let diff = c ^ self.concepts[concept];
            if diff == 0 {
                continue;
            }
            let pos = diff.trailing_zeros() as usize;
            return Ok(Some((j, self.domain[pos])));
        }
        Ok(None)
    }

    /// Measures worst-case sample complexity over the class with the
    /// distinguishing-input procedure: for each target, examples are drawn
    /// (distinguisher plus membership label) until exactly one concept is
    /// consistent, then a single correctness query confirms it. The example
    /// set at convergence is a teaching set for the target, so the measured
    /// worst case dominates the teaching dimension.
    pub fn ogis_sample_complexity(
        &self,
        interface: &OracleInterface,
    ) -> Result<SampleComplexityReport, FiniteLabError> {
        for (q, r) in [
            (QueryKind::Correctness, ResponseKind::Verdict),
            (QueryKind::Membership, ResponseKind::Label),
            (QueryKind::DistinguishingInput, ResponseKind::Distinguisher),
        ] {
            if !interface.allows(q, r) {
                return Err(FiniteLabError::UnsupportedInterface(q));
            }
        }
        self.check_dims(MAX_DOMAIN_DIM)?;
        let mut per_target = Vec::with_capacity(self.concepts.len());
        for target in 0..self.concepts.len() {
            per_target.push(self.sample_complexity_for(target));
        }
        let measured_worst = per_target.iter().copied().max().unwrap_or(0);
        let td = self.teaching_dimension()?.td;
        Ok(SampleComplexityReport {
            measured_worst,
            td,
            pass: measured_worst >= td,
            per_target,
        })
    }

    fn sample_complexity_for(&self, target: usize) -> usize {
        let t = self.concepts[target];
        let mut pos_seen = 0u32; // labeled positives
        let mut neg_seen = 0u32; // labeled negatives
        let consistent = |c: u32, pos: u32, neg: u32| c & pos == pos && c & neg == 0;
        loop {
            let hyp = self
                .concepts
                .iter()
                .position(|&c| consistent(c, pos_seen, neg_seen))
                .expect("the target is always consistent with its own labels");
            let other = self
                .concepts
                .iter()
                .enumerate()
                .find(|&(j, &c)| j != hyp && consistent(c, pos_seen, neg_seen));
            match other {
                None => return (pos_seen | neg_seen).count_ones() as usize,
                Some((_, &c)) => {
                    let diff = c ^ self.concepts[hyp];
                    debug_assert_ne!(diff, 0);
                    let bit = 1u32 << diff.trailing_zeros();
                    if t & bit != 0 {
                        pos_seen |= bit;
                    } else {
                        neg_seen |= bit;
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TeachingSequence {
    pub concept: usize,
    /// (example, label) pairs; `true` marks a positive example.
    pub examples: Vec<(u64, bool)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TeachingReport {
    pub td: usize,
    pub per_concept: Vec<TeachingSequence>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundsReport {
    pub vc: u32,
    pub td: usize,
    pub class_size: usize,
    pub lower: f64,
    pub lower_checked: bool,
    pub upper: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleComplexityReport {
    pub measured_worst: usize,
    pub td: usize,
    pub pass: bool,
    pub per_target: Vec<usize>,
}

/// Visits every `k`-subset of `0..n` as a bitmask, ascending.
fn for_each_combination(n: usize, k: usize, f: &mut dyn FnMut(u32)) {
    fn rec(start: usize, n: usize, left: usize, acc: u32, f: &mut dyn FnMut(u32)) {
        if left == 0 {
            f(acc);
            return;
        }
        for i in start..=(n - left) {
            rec(i + 1, n, left - 1, acc | (1 << i), f);
        }
    }
    if k > n {
        return;
    }
    rec(0, n, k, 0, f);
}

// ---------------------------------------------------------------------------
// Set cover.

/// A minimum set cover instance: a universe of elements and candidate sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInstance {
    pub universe: Vec<u64>,
    pub sets: Vec<BTreeSet<u64>>,
}

impl SetCoverInstance {
    pub fn new(
        universe: Vec<u64>,
        sets: Vec<BTreeSet<u64>>,
    ) -> Result<SetCoverInstance, FiniteLabError> {
        let mut uni = universe;
        uni.sort_unstable();
        uni.dedup();
        for (i, s) in sets.iter().enumerate() {
            for &e in s {
                if uni.binary_search(&e).is_err() {
                    return Err(FiniteLabError::OutsideDomain {
                        concept: i,
                        element: e,
                    });
                }
            }
        }
        Ok(SetCoverInstance {
            universe: uni,
            sets,
        })
    }
}

/// Exact minimum set cover by branch and bound: branch on an uncovered
/// element over the sets containing it, prune with a coverage lower bound
/// against the greedy incumbent.
pub fn min_set_cover(instance: &SetCoverInstance) -> Result<Vec<usize>, FiniteLabError> {
    let m = instance.universe.len();
    let k = instance.sets.len();
    if k > MAX_DOMAIN_COVER {
        return Err(FiniteLabError::TooManyConcepts {
            len: k,
            max: MAX_DOMAIN_COVER,
        });
    }
    let set_masks: Vec<u32> = instance
        .sets
        .iter()
        .map(|s| {
            s.iter()
                .map(|e| 1u32 << instance.universe.binary_search(e).unwrap())
                .fold(0, |a, b| a | b)
        })
        .collect();
    let full: u32 = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
    if set_masks.iter().fold(0, |a, &b| a | b) != full {
        return Err(FiniteLabError::Uncoverable);
    }

    // greedy incumbent
    let mut incumbent: Vec<usize> = Vec::new();
    let mut covered = 0u32;
    while covered != full {
        let (best, _) = set_masks
            .iter()
            .enumerate()
            .max_by_key(|&(i, &s)| ((s & !covered).count_ones(), std::cmp::Reverse(i)))
            .unwrap();
        if set_masks[best] & !covered == 0 {
            break;
        }
        covered |= set_masks[best];
        incumbent.push(best);
    }
    let max_set_size = set_masks.iter().map(|s| s.count_ones()).max().unwrap_or(1);

    fn branch(
        remaining: u32,
        chosen: &mut Vec<usize>,
        best: &mut Vec<usize>,
        set_masks: &[u32],
        max_set_size: u32,
    ) {
        if remaining == 0 {
            if chosen.len() < best.len() {
                *best = chosen.clone();
            }
            return;
        }
        let lower = remaining.count_ones().div_ceil(max_set_size.max(1));
        if chosen.len() + lower as usize >= best.len() {
            return;
        }
        let pivot = remaining.trailing_zeros();
        for (i, &s) in set_masks.iter().enumerate() {
            if s & (1 << pivot) != 0 {
                chosen.push(i);
                branch(remaining & !s, chosen, best, set_masks, max_set_size);
                chosen.pop();
            }
        }
    }

    let mut best = incumbent;
    let mut chosen = Vec::new();
    branch(full, &mut chosen, &mut best, &set_masks, max_set_size);
    best.sort_unstable();
    Ok(best)
}

/// The reduction from minimum set cover to finite inductive synthesis:
/// `m + 1` concepts over `k` examples, where example `e_i` separates the
/// concept of universe element `x_j` from the (empty) target exactly when
/// set `S_i` contains `x_j`.
pub fn setcover_to_fis(instance: &SetCoverInstance) -> Result<FiniteConceptClass, FiniteLabError> {
    let m = instance.universe.len();
    let k = instance.sets.len();
    let domain: Vec<u64> = (0..k as u64).collect();
    let mut concepts: Vec<BTreeSet<u64>> = Vec::with_capacity(m + 1);
    for j in 0..m {
        let x = instance.universe[j];
        let concept: BTreeSet<u64> = instance
            .sets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.contains(&x))
            .map(|(i, _)| i as u64)
            .collect();
        concepts.push(concept);
    }
    concepts.push(BTreeSet::new()); // the target: the empty base concept
                                    // Universe elements contained in exactly the same sets denote the same
                                    // concept; a cover hitting one hits the other, so merging them keeps
                                    // the minimum questions aligned while satisfying the distinct-concepts
                                    // invariant.
    let mut dedup: Vec<BTreeSet<u64>> = Vec::new();
    for c in concepts {
        if !dedup.contains(&c) {
            dedup.push(c);
        }
    }
    let target = dedup
        .iter()
        .position(|c| c.is_empty())
        .expect("the empty target concept is always present");
    FiniteConceptClass::new(domain, dedup)?.with_target(target)
}

// ---------------------------------------------------------------------------
// Text formats.

/// Parses the `.cls` concept-class format: a `domain:` header line, then one
/// concept per line as space-separated elements (a blank line is the empty
/// concept). `#` starts a comment line.
pub fn parse_class(text: &str) -> Result<FiniteConceptClass, FiniteLabError> {
    let mut domain: Option<Vec<u64>> = None;
    let mut concepts: Vec<BTreeSet<u64>> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if domain.is_none() {
            let rest = line
                .strip_prefix("domain:")
                .ok_or_else(|| FiniteLabError::Parse {
                    line: ln + 1,
                    msg: "expected a `domain:` header".into(),
                })?;
            domain = Some(parse_numbers(rest, ln + 1)?);
        } else {
            concepts.push(parse_numbers(line, ln + 1)?.into_iter().collect());
        }
    }
    let domain = domain.ok_or(FiniteLabError::Parse {
        line: 1,
        msg: "missing `domain:` header".into(),
    })?;
    FiniteConceptClass::new(domain, concepts)
}

/// Parses the `.scv` set-cover format: a `universe:` header line, then one
/// set per line.
pub fn parse_cover(text: &str) -> Result<SetCoverInstance, FiniteLabError> {
    let mut universe: Option<Vec<u64>> = None;
    let mut sets: Vec<BTreeSet<u64>> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if universe.is_none() {
            let rest = line
                .strip_prefix("universe:")
                .ok_or_else(|| FiniteLabError::Parse {
                    line: ln + 1,
                    msg: "expected a `universe:` header".into(),
                })?;
            universe = Some(parse_numbers(rest, ln + 1)?);
        } else {
            sets.push(parse_numbers(line, ln + 1)?.into_iter().collect());
        }
    }
    let universe = universe.ok_or(FiniteLabError::Parse {
        line: 1,
        msg: "missing `universe:` header".into(),
    })?;
    SetCoverInstance::new(universe, sets)
}

fn parse_numbers(s: &str, line: usize) -> Result<Vec<u64>, FiniteLabError> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>().map_err(|_| FiniteLabError::Parse {
                line,
                msg: format!("`{tok}` is not a natural number"),
            })
        })
        .collect()
}

/// Renders a class in the `.cls` format.
pub fn render_class(class: &FiniteConceptClass) -> String {
    let mut out = String::from("domain:");
    for e in class.domain() {
        out.push_str(&format!(" {e}"));
    }
    out.push('\n');
    for i in 0..class.len() {
        let elems = class.concept_elements(i);
        let line: Vec<String> = elems.iter().map(|e| e.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn powerset(domain: &[u64]) -> FiniteConceptClass {
        let n = domain.len();
        let mut concepts = Vec::new();
        for mask in 0..(1usize << n) {
            concepts.push(
                domain
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &e)| e)
                    .collect::<BTreeSet<u64>>(),
            );
        }
        FiniteConceptClass::new(domain.to_vec(), concepts).unwrap()
    }

    fn singletons(domain: &[u64]) -> FiniteConceptClass {
        let concepts = domain
            .iter()
            .map(|&e| BTreeSet::from([e]))
            .collect::<Vec<_>>();
        FiniteConceptClass::new(domain.to_vec(), concepts).unwrap()
    }

    #[test]
    fn vc_examples() {
        assert_eq!(powerset(&[0, 1, 2]).vc_dimension(), Ok(3));
        assert_eq!(singletons(&[0, 1, 2, 3]).vc_dimension(), Ok(1));
        let single = FiniteConceptClass::new(vec![0, 1], vec![BTreeSet::from([0])]).unwrap();
        assert_eq!(single.vc_dimension(), Ok(0));
    }

    #[test]
    fn td_examples() {
        assert_eq!(powerset(&[0, 1, 2]).teaching_dimension().unwrap().td, 3);
        assert_eq!(
            singletons(&[0, 1, 2, 3]).teaching_dimension().unwrap().td,
            1
        );
        let single = FiniteConceptClass::new(vec![0, 1], vec![BTreeSet::from([0])]).unwrap();
        assert_eq!(single.teaching_dimension().unwrap().td, 0);
    }

    #[test]
    fn teaching_sequences_uniquely_identify() {
        let class = powerset(&[0, 1, 2]);
        let report = class.teaching_dimension().unwrap();
        for seq in &report.per_concept {
            let consistent = (0..class.len())
                .filter(|&j| {
                    seq.examples
                        .iter()
                        .all(|&(e, label)| class.concept_elements(j).contains(&e) == label)
                })
                .count();
            assert_eq!(consistent, 1);
        }
    }

    #[test]
    fn bounds_examples() {
        let r = powerset(&[0, 1, 2]).td_bounds_check().unwrap();
        assert!(r.pass);
        assert_eq!(r.vc, 3);
        assert_eq!(r.td, 3);
        assert_eq!(r.upper, 7);
        assert!((r.lower - 1.0).abs() < 1e-12);

        let r = singletons(&[0, 1, 2, 3]).td_bounds_check().unwrap();
        assert!(r.pass);
        assert!((r.lower - 0.5).abs() < 1e-12);
        assert_eq!(r.td, 1);
        assert_eq!(r.upper, 3);
    }

    #[test]
    fn min_counterexample_examples() {
        // reduction of {S1={x1}, S2={x2}, S3={x1,x2}}
        let inst = SetCoverInstance::new(
            vec![1, 2],
            vec![
                BTreeSet::from([1]),
                BTreeSet::from([2]),
                BTreeSet::from([1, 2]),
            ],
        )
        .unwrap();
        let class = setcover_to_fis(&inst).unwrap();
        let mcs = class
            .min_counterexample_set(class.target().unwrap())
            .unwrap();
        assert_eq!(mcs.len(), 1);

        let single = FiniteConceptClass::new(vec![0], vec![BTreeSet::from([0])]).unwrap();
        assert!(single.min_counterexample_set(0).unwrap().is_empty());

        let class = powerset(&[0, 1]);
        for t in 0..class.len() {
            assert_eq!(class.min_counterexample_set(t).unwrap().len(), 2);
        }
    }

    #[test]
    fn reduction_shape() {
        let inst =
            SetCoverInstance::new(vec![1, 2], vec![BTreeSet::from([1]), BTreeSet::from([2])])
                .unwrap();
        let class = setcover_to_fis(&inst).unwrap();
        assert_eq!(class.len(), 3);
        assert_eq!(class.concept_elements(0), BTreeSet::from([0]));
        assert_eq!(class.concept_elements(1), BTreeSet::from([1]));
        assert!(class.concept_elements(2).is_empty());
        assert_eq!(class.target(), Some(2));
    }

    #[test]
    fn set_cover_examples() {
        let inst = SetCoverInstance::new(
            vec![1, 2, 3],
            vec![
                BTreeSet::from([1, 2]),
                BTreeSet::from([2, 3]),
                BTreeSet::from([3]),
            ],
        )
        .unwrap();
        assert_eq!(min_set_cover(&inst).unwrap(), vec![0, 1]);

        let inst = SetCoverInstance::new(vec![1, 2], vec![BTreeSet::from([1, 2])]).unwrap();
        assert_eq!(min_set_cover(&inst).unwrap().len(), 1);

        let inst =
            SetCoverInstance::new(vec![7], vec![BTreeSet::from([7]), BTreeSet::from([7])]).unwrap();
        assert_eq!(min_set_cover(&inst).unwrap().len(), 1);

        let inst = SetCoverInstance::new(vec![1, 2], vec![BTreeSet::from([1])]).unwrap();
        assert_eq!(min_set_cover(&inst), Err(FiniteLabError::Uncoverable));
    }

    #[test]
    fn distinguishing_examples() {
        let class = powerset(&[0, 1]);
        // concepts in mask order: {}, {0}, {1}, {0,1}
        let r = class.distinguishing_input(&BTreeSet::new(), 0).unwrap();
        assert_eq!(r, Some((1, 0)));
        let r = class.distinguishing_input(&BTreeSet::from([1]), 3).unwrap();
        assert_eq!(r, Some((2, 0)));

        let singles = singletons(&[0, 1, 2]);
        assert_eq!(
            singles
                .distinguishing_input(&BTreeSet::from([1]), 1)
                .unwrap(),
            None
        );
    }

    #[test]
    fn sample_complexity_examples() {
        let iface = OracleInterface::finite_class();
        let single = FiniteConceptClass::new(vec![0], vec![BTreeSet::from([0])]).unwrap();
        let r = single.ogis_sample_complexity(&iface).unwrap();
        assert_eq!(r.measured_worst, 0);
        assert!(r.pass);

        let r = powerset(&[0, 1]).ogis_sample_complexity(&iface).unwrap();
        assert!(r.measured_worst >= 2);
        assert!(r.pass);

        assert_eq!(
            powerset(&[0, 1])
                .ogis_sample_complexity(&OracleInterface::cegis())
                .unwrap_err(),
            FiniteLabError::UnsupportedInterface(QueryKind::Membership)
        );
    }

    #[test]
    fn membership_examples() {
        let class =
            FiniteConceptClass::new(vec![0, 1, 2], vec![BTreeSet::from([0, 2]), BTreeSet::new()])
                .unwrap();
        assert_eq!(class.membership_label(0, 2), Ok(true));
        assert_eq!(class.membership_label(0, 1), Ok(false));
        assert_eq!(class.membership_label(1, 0), Ok(false));
    }

    #[test]
    fn class_format_round_trip() {
        let text = "domain: 0 1 2\n0 2\n\n1\n";
        let class = parse_class(text).unwrap();
        assert_eq!(class.len(), 3);
        assert_eq!(class.concept_elements(0), BTreeSet::from([0, 2]));
        assert!(class.concept_elements(1).is_empty());
        assert_eq!(render_class(&class), text);

        let err = parse_class("domain: 0 1\nx\n").unwrap_err();
        assert!(matches!(err, FiniteLabError::Parse { line: 2, .. }));
    }
}
