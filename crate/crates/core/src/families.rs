//! The concrete language families behind the separation experiments.

use crate::lang::Language;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("unknown family id `{0}` (expected notcb, notpb, pb, or cbnotpb)")]
    UnknownFamily(String),
    #[error("target index {index} is out of range for family `{family}`")]
    TargetOutOfRange { family: String, index: u64 },
}

/// Family identifier plus its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilySpec {
    /// Finite sets living entirely above the verifier bound; the bounded
    /// verifier never sees a counterexample here.
    NotCb { bound: u64 },
    /// The chain `UpTo(0), UpTo(1), ...`: every counterexample lies above
    /// every positive, blinding the positive-bounded verifier.
    NotPb { max_index: u64 },
    /// Finite `{3^j * 2^i}` subsets (each containing some `3*2^k`) plus
    /// power-of-two tails — identifiable with positive-bounded
    /// counterexamples but not with arbitrary ones under finite memory.
    Pb { max_exponent: u32 },
    /// The chain truncated below the bound: counterexamples stay below `B`,
    /// so the bounded verifier behaves like the arbitrary one while the
    /// positive-bounded verifier stays blind.
    CbNotPb { bound: u64 },
}

impl FamilySpec {
    /// Parse a family id with its default parameters.
    pub fn parse(name: &str) -> Result<FamilySpec, FamilyError> {
        match name {
            "notcb" => Ok(FamilySpec::NotCb { bound: 8 }),
            "notpb" => Ok(FamilySpec::NotPb { max_index: 20 }),
            "pb" => Ok(FamilySpec::Pb { max_exponent: 12 }),
            "cbnotpb" => Ok(FamilySpec::CbNotPb { bound: 6 }),
            other => Err(FamilyError::UnknownFamily(other.into())),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            FamilySpec::NotCb { .. } => "notcb",
            FamilySpec::NotPb { .. } => "notpb",
            FamilySpec::Pb { .. } => "pb",
            FamilySpec::CbNotPb { .. } => "cbnotpb",
        }
    }

    /// Deterministic member list for this family.
    pub fn members(&self, seed: u64) -> Vec<Language> {
        match self {
            FamilySpec::NotCb { bound } => family_notcb(*bound, 1..=3, 24, seed),
            FamilySpec::NotPb { max_index } => family_notpb(*max_index),
            FamilySpec::Pb { max_exponent } => family_pb_members(*max_exponent, 16, seed),
            FamilySpec::CbNotPb { bound } => family_cbnotpb(*bound),
        }
    }

    /// Target selection for the CLI: the `index`-th member.
    ///
    /// For the chain families the index is the chain position itself, so
    /// `--target 3` means `UpTo(3)`.
    pub fn target(&self, index: u64, seed: u64) -> Result<Language, FamilyError> {
        let members = self.members(seed);
        members
            .get(index as usize)
            .cloned()
            .ok_or(FamilyError::TargetOutOfRange {
                family: self.id().into(),
                index,
            })
    }
}

/// Family 1: finite subsets of `{n | n > B}`. Every counterexample between
/// members exceeds the bound, so `bcheck(B, ..)` is blind on all pairs.
pub fn family_notcb(
    bound: u64,
    sizes: std::ops::RangeInclusive<usize>,
    count: usize,
    seed: u64,
) -> Vec<Language> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut distinct = BTreeSet::new();
    while out.len() < count {
        let size = rng.gen_range(sizes.clone());
        let mut elems = BTreeSet::new();
        while elems.len() < size {
            elems.insert(bound + 1 + rng.gen_range(0..60));
        }
        let lang = Language::finite(elems.iter().copied());
        debug_assert!(lang.min_element().is_some_and(|m| m > bound));
        if distinct.insert(lang.render()) {
            out.push(lang);
        }
    }
    out
}

/// Family 2: the monotone chain `UpTo(0) .. UpTo(max_index)`.
pub fn family_notpb(max_index: u64) -> Vec<Language> {
    (0..=max_index).map(Language::UpTo).collect()
}

/// Family 3: finite `{3^j * 2^i}` subsets, each containing at least one
/// `3*2^k` element, plus the canonical power-of-two tails
/// `Pow2AtLeast(0) .. Pow2AtLeast(max_exponent)`.
pub fn family_pb_members(max_exponent: u32, count_finite: usize, seed: u64) -> Vec<Language> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut distinct = BTreeSet::new();
    while out.len() < count_finite {
        let size = rng.gen_range(1..=8usize);
        let mut pairs = BTreeSet::new();
        pairs.insert((1u8, rng.gen_range(0..=max_exponent)));
        while pairs.len() < size {
            pairs.insert((rng.gen_range(0..=1u8), rng.gen_range(0..=max_exponent)));
        }
        let lang = Language::pow32(pairs.iter().copied());
        debug_assert!(is_pb_finite_member(&lang));
        if distinct.insert(lang.render()) {
            out.push(lang);
        }
    }
    out.extend((0..=max_exponent).map(Language::Pow2AtLeast));
    out
}

/// True for the finite kind of family-3 member: a `Pow32Finite` set with at
/// least one `j = 1` element.
pub fn is_pb_finite_member(lang: &Language) -> bool {
    match lang {
        Language::Pow32Finite(pairs) => pairs.iter().any(|&(j, _)| j == 1),
        _ => false,
    }
}

/// Family for the bounded-vs-positive-bounded split: `UpTo(0) .. UpTo(B-1)`.
pub fn family_cbnotpb(bound: u64) -> Vec<Language> {
    assert!(bound >= 1, "cbnotpb needs a bound of at least 1");
    (0..bound).map(Language::UpTo).collect()
}
