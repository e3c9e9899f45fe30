//! Transcripts: non-redundant enumerations of a language's positive examples,
//! and the counterexample sequences produced against them.

use crate::lang::{Example, Language};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// How positive examples are enumerated.
///
/// `SeededShuffle` enumerates the language ascending in fixed-size blocks and
/// shuffles each block deterministically, so every member still appears
/// exactly once (infinite languages stay fully covered in the limit) while
/// the local order varies with the seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TranscriptOrder {
    Ascending,
    SeededShuffle(u64),
    Scripted(Vec<u64>),
}

impl TranscriptOrder {
    pub fn id(&self) -> String {
        match self {
            TranscriptOrder::Ascending => "ascending".into(),
            TranscriptOrder::SeededShuffle(s) => format!("seeded-shuffle({s})"),
            TranscriptOrder::Scripted(items) => format!("scripted({} items)", items.len()),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TranscriptError {
    #[error("scripted example {0} is not a member of the source language")]
    NotInSource(u64),
    #[error("scripted example {0} repeats")]
    Duplicate(u64),
}

const SHUFFLE_BLOCK: usize = 16;

#[derive(Debug, Clone)]
enum Cursor {
    Ascending {
        next_from: u64,
        exhausted: bool,
    },
    Shuffle {
        rng: Box<ChaCha8Rng>,
        block: Vec<u64>,
        pos: usize,
        next_from: u64,
        exhausted: bool,
    },
    Scripted {
        items: Vec<u64>,
        idx: usize,
    },
}

/// A transcript for a source language: emits each member exactly once
/// (in the configured order) and bottom forever once a finite source is
/// exhausted.
#[derive(Debug, Clone)]
pub struct Transcript {
    source: Language,
    order: TranscriptOrder,
    emitted: Vec<Option<Example>>,
    seen: Vec<u64>,
    cursor: Cursor,
}

impl Transcript {
    pub fn new(source: Language, order: TranscriptOrder) -> Result<Transcript, TranscriptError> {
        let cursor = match &order {
            TranscriptOrder::Ascending => Cursor::Ascending {
                next_from: 0,
                exhausted: false,
            },
            TranscriptOrder::SeededShuffle(seed) => Cursor::Shuffle {
                rng: Box::new(ChaCha8Rng::seed_from_u64(*seed)),
                block: Vec::new(),
                pos: 0,
                next_from: 0,
                exhausted: false,
            },
            TranscriptOrder::Scripted(items) => {
                let mut dedup = BTreeSet::new();
                for &x in items {
                    if !source.contains(x) {
                        return Err(TranscriptError::NotInSource(x));
                    }
                    if !dedup.insert(x) {
                        return Err(TranscriptError::Duplicate(x));
                    }
                }
                Cursor::Scripted {
                    items: items.clone(),
                    idx: 0,
                }
            }
        };
        Ok(Transcript {
            source,
            order,
            emitted: Vec::new(),
            seen: Vec::new(),
            cursor,
        })
    }

    pub fn source(&self) -> &Language {
        &self.source
    }

    pub fn order(&self) -> &TranscriptOrder {
        &self.order
    }

    /// Emit the next positive example, or bottom when none remain.
    pub fn next_example(&mut self) -> Option<u64> {
        let next = match &mut self.cursor {
            Cursor::Ascending {
                next_from,
                exhausted,
            } => {
                if *exhausted {
                    None
                } else {
                    match self.source.next_member(*next_from) {
                        Some(x) => {
                            match x.checked_add(1) {
                                Some(n) => *next_from = n,
                                None => *exhausted = true,
                            }
                            Some(x)
                        }
                        None => {
                            *exhausted = true;
                            None
                        }
                    }
                }
            }
            Cursor::Shuffle {
                rng,
                block,
                pos,
                next_from,
                exhausted,
            } => {
                if *pos >= block.len() && !*exhausted {
                    block.clear();
                    *pos = 0;
                    let mut from = *next_from;
                    while block.len() < SHUFFLE_BLOCK {
                        match self.source.next_member(from) {
                            Some(x) => {
                                block.push(x);
                                match x.checked_add(1) {
                                    Some(n) => from = n,
                                    None => break,
                                }
                            }
                            None => break,
                        }
                    }
                    *next_from = from;
                    if block.len() < SHUFFLE_BLOCK {
                        *exhausted = true;
                    }
                    block.shuffle(rng.as_mut());
                }
                if *pos < block.len() {
                    let x = block[*pos];
                    *pos += 1;
                    Some(x)
                } else {
                    None
                }
            }
            Cursor::Scripted { items, idx } => {
                if *idx < items.len() {
                    let x = items[*idx];
                    *idx += 1;
                    Some(x)
                } else {
                    None
                }
            }
        };
        self.emitted.push(next.map(Example));
        if let Some(x) = next {
            self.seen.push(x);
        }
        next
    }

    /// Full emission history including bottom markers.
    pub fn emitted(&self) -> &[Option<Example>] {
        &self.emitted
    }

    /// SAMPLE of the emitted prefix: the positives, in emission order.
    pub fn seen_positives(&self) -> &[u64] {
        &self.seen
    }

    pub fn max_seen(&self) -> Option<u64> {
        self.seen.iter().copied().max()
    }
}

/// One counterexample-sequence entry with its provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CexEntry {
    pub step: usize,
    pub value: Option<Example>,
    pub verifier: String,
    pub candidate: String,
    pub probe: bool,
}

/// The counterexample sequence of a run: per-step verifier replies plus the
/// set of distinct counterexample values seen (for consistency checks).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CexSequence {
    pub entries: Vec<CexEntry>,
    values: BTreeSet<u64>,
}

impl CexSequence {
    pub fn push(&mut self, entry: CexEntry) {
        if let Some(v) = entry.value {
            self.values.insert(v.0);
        }
        self.entries.push(entry);
    }

    pub fn contains_value(&self, x: u64) -> bool {
        self.values.contains(&x)
    }

    pub fn values(&self) -> impl Iterator<Item = u64> + '_ {
        self.values.iter().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascending_exhausts_finite_sources() {
        let mut t =
            Transcript::new(Language::finite([5, 2, 9]), TranscriptOrder::Ascending).unwrap();
        assert_eq!(t.next_example(), Some(2));
        assert_eq!(t.next_example(), Some(5));
        assert_eq!(t.next_example(), Some(9));
        assert_eq!(t.next_example(), None);
        assert_eq!(t.next_example(), None);
        assert_eq!(t.emitted().len(), 5);
        assert_eq!(t.seen_positives(), &[2, 5, 9]);
    }

    #[test]
    fn shuffle_emits_each_member_once() {
        let lang = Language::UpTo(40);
        let mut t = Transcript::new(lang.clone(), TranscriptOrder::SeededShuffle(7)).unwrap();
        let mut got = Vec::new();
        while let Some(x) = t.next_example() {
            got.push(x);
        }
        let mut sorted = got.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), got.len(), "no repeats");
        assert_eq!(sorted, (0..=40).collect::<Vec<_>>());
        assert_ne!(got, sorted, "seeded shuffle actually permutes");
    }

    #[test]
    fn shuffle_is_deterministic_per_seed() {
        let run = |seed| {
            let mut t =
                Transcript::new(Language::UpTo(30), TranscriptOrder::SeededShuffle(seed)).unwrap();
            (0..31)
                .map(|_| t.next_example().unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(run(3), run(3));
        assert_ne!(run(3), run(4));
    }

    #[test]
    fn shuffle_covers_infinite_sources_progressively() {
        let mut t =
            Transcript::new(Language::Pow2AtLeast(0), TranscriptOrder::SeededShuffle(1)).unwrap();
        let first: Vec<u64> = (0..SHUFFLE_BLOCK)
            .map(|_| t.next_example().unwrap())
            .collect();
        let mut sorted = first.clone();
        sorted.sort_unstable();
        assert_eq!(
            sorted,
            (0..SHUFFLE_BLOCK as u32)
                .map(|j| 1u64 << j)
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn scripted_validation() {
        assert_eq!(
            Transcript::new(Language::UpTo(3), TranscriptOrder::Scripted(vec![1, 7])).unwrap_err(),
            TranscriptError::NotInSource(7)
        );
        assert_eq!(
            Transcript::new(Language::UpTo(3), TranscriptOrder::Scripted(vec![1, 1])).unwrap_err(),
            TranscriptError::Duplicate(1)
        );
        let mut t =
            Transcript::new(Language::UpTo(3), TranscriptOrder::Scripted(vec![2, 0])).unwrap();
        assert_eq!(t.next_example(), Some(2));
        assert_eq!(t.next_example(), Some(0));
        assert_eq!(t.next_example(), None);
    }
}
