//! Languages as decidable sets of naturals.
//!
//! Every language the lab manipulates is drawn from a closed catalog of
//! representations ([`Language`]). The catalog is chosen so that membership,
//! subset, emptiness, minimum element and smallest-difference witnesses are
//! all decidable structurally for every pair of forms — no operation ever
//! enumerates an unbounded range.
//!
//! Behaviors are naturals (`u64`); the total order on examples is the
//! numeric order.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A single behavior: a natural number indexing into the ordered behavior set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Example(pub u64);

impl Example {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl From<u64> for Example {
    fn from(v: u64) -> Self {
        Example(v)
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A decidable set of naturals, in one of the catalog forms.
///
/// Denotations:
/// - `Empty` — the empty set; `Universe` — all naturals.
/// - `UpTo(i)` — `{n | n <= i}`.
/// - `AllAbove(b)` — `{n | n > b}` (strict).
/// - `Finite(v)` — exactly the listed elements (`v` strictly increasing,
///   never empty; the empty collection normalizes to `Empty`).
/// - `Pow2AtLeast(k)` — `{2^j | j >= k}`.
/// - `Pow32Finite(pairs)` — `{3^j * 2^i | (j, i) in pairs}` with `j` in
///   `{0, 1}`; pairs are stored sorted by denoted value.
///
/// Values are bounded by `u64`; constructors reject forms whose stored
/// elements would overflow. The infinite forms (`Universe`, `AllAbove`,
/// `Pow2AtLeast`) denote mathematically infinite sets; structural
/// operations treat them as such.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Language {
    Empty,
    Universe,
    UpTo(u64),
    AllAbove(u64),
    Finite(Vec<u64>),
    Pow2AtLeast(u32),
    Pow32Finite(Vec<(u8, u32)>),
}

/// Writes `x` as `3^j * 2^i` with `j` in `{0, 1}`, if possible.
pub fn pow32_decompose(x: u64) -> Option<(u8, u32)> {
    if x == 0 {
        return None;
    }
    let i = x.trailing_zeros();
    match x >> i {
        1 => Some((0, i)),
        3 => Some((1, i)),
        _ => None,
    }
}

/// Value denoted by a `Pow32Finite` pair. Panics if the value overflows `u64`.
pub fn pow32_value(j: u8, i: u32) -> u64 {
    assert!(j <= 1, "Pow32Finite pair has j = {j}, expected 0 or 1");
    let base: u64 = if j == 0 { 1 } else { 3 };
    base.checked_shl(i)
        .filter(|_| i < 64 && (j == 0 || i <= 62))
        .unwrap_or_else(|| panic!("Pow32Finite pair (j={j}, i={i}) overflows u64"))
}

impl Language {
    /// Finite set from arbitrary elements; sorts, dedups, and normalizes the
    /// empty collection to `Empty`.
    pub fn finite<I: IntoIterator<Item = u64>>(elems: I) -> Language {
        let mut v: Vec<u64> = elems.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            Language::Empty
        } else {
            Language::Finite(v)
        }
    }

    /// Singleton `{x}`.
    pub fn singleton(x: u64) -> Language {
        Language::Finite(vec![x])
    }

    /// `Pow32Finite` from `(j, i)` pairs; validates, sorts by denoted value,
    /// dedups, and normalizes the empty collection to `Empty`.
    pub fn pow32<I: IntoIterator<Item = (u8, u32)>>(pairs: I) -> Language {
        let mut v: Vec<(u8, u32)> = pairs.into_iter().collect();
        for &(j, i) in &v {
            pow32_value(j, i); // validates range
        }
        v.sort_unstable_by_key(|&(j, i)| pow32_value(j, i));
        v.dedup();
        if v.is_empty() {
            Language::Empty
        } else {
            Language::Pow32Finite(v)
        }
    }

    pub fn pow2_at_least(k: u32) -> Language {
        assert!(k <= 63, "Pow2AtLeast exponent {k} overflows u64");
        Language::Pow2AtLeast(k)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Language::Empty)
    }

    /// True iff the denoted set is finite.
    pub fn is_finite(&self) -> bool {
        !matches!(
            self,
            Language::Universe | Language::AllAbove(_) | Language::Pow2AtLeast(_)
        )
    }

    /// Number of elements for finite forms, `None` for infinite ones.
    pub fn cardinality(&self) -> Option<u64> {
        match self {
            Language::Empty => Some(0),
            Language::UpTo(i) => i.checked_add(1),
            Language::Finite(v) => Some(v.len() as u64),
            Language::Pow32Finite(v) => Some(v.len() as u64),
            Language::Universe | Language::AllAbove(_) | Language::Pow2AtLeast(_) => None,
        }
    }

    /// Membership test.
    pub fn contains(&self, x: u64) -> bool {
        match self {
            Language::Empty => false,
            Language::Universe => true,
            Language::UpTo(i) => x <= *i,
            Language::AllAbove(b) => x > *b,
            Language::Finite(v) => v.binary_search(&x).is_ok(),
            Language::Pow2AtLeast(k) => x.is_power_of_two() && x >= 1u64 << k,
            Language::Pow32Finite(v) => v.iter().any(|&(j, i)| pow32_value(j, i) == x),
        }
    }

    /// Smallest member `>= from`, or `None` if there is none within `u64`.
    pub fn next_member(&self, from: u64) -> Option<u64> {
        match self {
            Language::Empty => None,
            Language::Universe => Some(from),
            Language::UpTo(i) => (from <= *i).then_some(from),
            Language::AllAbove(b) => {
                if from > *b {
                    Some(from)
                } else {
                    b.checked_add(1)
                }
            }
            Language::Finite(v) => {
                let idx = v.partition_point(|&e| e < from);
                v.get(idx).copied()
            }
            Language::Pow2AtLeast(k) => {
                let lo = 1u64 << k;
                if from <= lo {
                    Some(lo)
                } else {
                    from.checked_next_power_of_two()
                }
            }
            Language::Pow32Finite(v) => v
                .iter()
                .map(|&(j, i)| pow32_value(j, i))
                .find(|&e| e >= from),
        }
    }

    /// Smallest non-member `>= from`, or `None` if every natural `>= from`
    /// is a member. Bounded: member runs in every catalog form are short
    /// (explicit sets are finite; at most three consecutive powers-of-two-ish
    /// values exist below 5).
    pub fn next_nonmember(&self, from: u64) -> Option<u64> {
        match self {
            Language::Empty => Some(from),
            Language::Universe => None,
            Language::UpTo(i) => {
                if from > *i {
                    Some(from)
                } else {
                    i.checked_add(1)
                }
            }
            Language::AllAbove(b) => (from <= *b).then_some(from),
            Language::Finite(_) | Language::Pow2AtLeast(_) | Language::Pow32Finite(_) => {
                let mut x = from;
                while self.contains(x) {
                    x = x.checked_add(1)?;
                }
                Some(x)
            }
        }
    }

    /// Least member, or `None` for the empty set.
    pub fn min_element(&self) -> Option<u64> {
        self.next_member(0)
    }

    /// Structural subset test on denotations: true iff every member of
    /// `self` is a member of `other`.
    pub fn subset_of(&self, other: &Language) -> bool {
        use Language::*;
        match (self, other) {
            (Empty, _) => true,
            (_, Universe) => true,
            (_, Empty) => self.min_element().is_none(),
            (Universe, _) => false, // other is a proper subset of the naturals
            // Explicit finite forms: check every element.
            (Finite(v), _) => v.iter().all(|&x| other.contains(x)),
            (Pow32Finite(v), _) => v.iter().all(|&(j, i)| other.contains(pow32_value(j, i))),
            (UpTo(i), UpTo(i2)) => i <= i2,
            // [0, i] always contains 0 while these forms never do.
            (UpTo(_), AllAbove(_)) | (UpTo(_), Pow2AtLeast(_)) => false,
            (UpTo(i), Finite(v)) => {
                // sorted distinct naturals satisfy v[k] >= k, so v[i] == i
                // forces the first i+1 entries to be exactly 0..=i
                (*i as usize) < v.len() && v[*i as usize] == *i
            }
            (UpTo(_), Pow32Finite(_)) => false, // 0 is never 3^j * 2^i
            (AllAbove(b), AllAbove(b2)) => b >= b2,
            // An infinite tail is never inside a finite set, and always
            // contains non-powers of two.
            (AllAbove(_), UpTo(_) | Finite(_) | Pow32Finite(_) | Pow2AtLeast(_)) => false,
            (Pow2AtLeast(k), Pow2AtLeast(k2)) => k >= k2,
            (Pow2AtLeast(k), AllAbove(b)) => 1u64 << k > *b,
            // Infinitely many powers never fit in a finite set.
            (Pow2AtLeast(_), UpTo(_) | Finite(_) | Pow32Finite(_)) => false,
        }
    }

    /// The `limit` smallest elements of `self \ other` (fewer if the
    /// difference is smaller). Empty iff `self ⊆ other`.
    ///
    /// Implemented as a leapfrog walk alternating `self.next_member` and
    /// `other.next_nonmember`; total iterations are bounded by
    /// `limit + |explicit elements| + 64`.
    pub fn difference_witnesses(&self, other: &Language, limit: usize) -> Vec<u64> {
        let mut out = Vec::new();
        if limit == 0 {
            return out;
        }
        let mut x = 0u64;
        loop {
            x = match self.next_member(x) {
                Some(v) => v,
                None => break,
            };
            if other.contains(x) {
                match other.next_nonmember(x) {
                    Some(y) => x = y, // strictly > x since other contains x
                    None => break,    // every value >= x is in `other`
                }
            } else {
                out.push(x);
                if out.len() == limit {
                    break;
                }
                x = match x.checked_add(1) {
                    Some(v) => v,
                    None => break,
                };
            }
        }
        out
    }

    /// Denotational equality: mutual subset.
    pub fn languages_equal(&self, other: &Language) -> bool {
        self.subset_of(other) && other.subset_of(self)
    }

    /// `self ∩ {x}` — the only intersection the proofs need. Returns
    /// `Finite{x}` or `Empty`.
    pub fn restrict_to_singleton(&self, x: u64) -> Language {
        if self.contains(x) {
            Language::singleton(x)
        } else {
            Language::Empty
        }
    }

    /// Canonical textual rendering, used verbatim in reports.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Language::Empty => write!(f, "Empty"),
            Language::Universe => write!(f, "Universe"),
            Language::UpTo(i) => write!(f, "UpTo({i})"),
            Language::AllAbove(b) => write!(f, "AllAbove({b})"),
            Language::Pow2AtLeast(k) => write!(f, "Pow2AtLeast({k})"),
            Language::Finite(v) => {
                write!(f, "Finite{{")?;
                for (n, e) in v.iter().enumerate() {
                    if n > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, "}}")
            }
            Language::Pow32Finite(v) => {
                write!(f, "Pow32Finite{{")?;
                for (n, (j, i)) in v.iter().enumerate() {
                    if n > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "({j},{i})")?;
                }
                write!(f, "}}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contains_boundaries() {
        assert!(Language::UpTo(3).contains(3));
        assert!(!Language::AllAbove(8).contains(8));
        assert!(Language::pow32([(1, 1)]).contains(6)); // 3 * 2 = 6
    }

    #[test]
    fn subset_structural() {
        assert!(Language::UpTo(2).subset_of(&Language::UpTo(5)));
        assert!(Language::Pow2AtLeast(3).subset_of(&Language::Pow2AtLeast(1)));
        assert!(Language::finite([9, 12]).subset_of(&Language::AllAbove(8)));
        assert!(!Language::Pow2AtLeast(3).subset_of(&Language::finite([8, 16])));
        assert!(!Language::Universe.subset_of(&Language::AllAbove(0)));
        assert!(Language::Pow2AtLeast(3).subset_of(&Language::AllAbove(7)));
        assert!(!Language::Pow2AtLeast(3).subset_of(&Language::AllAbove(8)));
    }

    #[test]
    fn difference_witnesses_examples() {
        assert_eq!(
            Language::UpTo(4).difference_witnesses(&Language::UpTo(2), 2),
            vec![3, 4]
        );
        assert_eq!(
            Language::finite([2, 4, 6]).difference_witnesses(&Language::finite([2, 6]), 3),
            vec![4]
        );
        assert_eq!(
            Language::Pow2AtLeast(0).difference_witnesses(&Language::Pow2AtLeast(2), 2),
            vec![1, 2]
        );
    }

    #[test]
    fn difference_walk_terminates_on_infinite_subset_tails() {
        // 32, 64, ... are all in the target; the walk must stop on its own.
        let w = Language::Pow2AtLeast(0).difference_witnesses(&Language::Pow2AtLeast(5), 100);
        assert_eq!(w, vec![1, 2, 4, 8, 16]);
        // Prefix form with a huge bound against a tail: only [0, 5] differs.
        let w = Language::UpTo(u64::MAX - 1).difference_witnesses(&Language::AllAbove(5), 100);
        assert_eq!(w, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn min_element_examples() {
        assert_eq!(Language::Pow2AtLeast(3).min_element(), Some(8));
        assert_eq!(Language::Empty.min_element(), None);
        assert_eq!(Language::finite([5, 9]).min_element(), Some(5));
    }

    #[test]
    fn equality_examples() {
        assert!(Language::UpTo(2).languages_equal(&Language::finite([0, 1, 2])));
        assert!(!Language::Universe.languages_equal(&Language::AllAbove(0)));
        assert!(Language::pow32([(0, 1)]).languages_equal(&Language::finite([2])));
    }

    #[test]
    fn singleton_restriction() {
        assert_eq!(
            Language::UpTo(5).restrict_to_singleton(3),
            Language::finite([3])
        );
        assert_eq!(Language::UpTo(5).restrict_to_singleton(9), Language::Empty);
    }

    #[test]
    fn rendering_is_canonical() {
        assert_eq!(Language::UpTo(5).render(), "UpTo(5)");
        assert_eq!(Language::finite([16, 2, 6]).render(), "Finite{2,6,16}");
        assert_eq!(
            Language::pow32([(1, 1), (0, 1)]).render(),
            "Pow32Finite{(0,1),(1,1)}"
        );
        assert_eq!(Language::finite([]).render(), "Empty");
    }

    #[test]
    fn pow32_sorted_by_value() {
        let l = Language::pow32([(0, 4), (1, 1), (0, 1)]); // {16, 6, 2}
        assert_eq!(l.next_member(0), Some(2));
        assert_eq!(l.next_member(3), Some(6));
        assert_eq!(l.next_member(7), Some(16));
        assert_eq!(l.next_member(17), None);
    }
}
