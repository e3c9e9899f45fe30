//! The query/response model: what learners may ask and what oracles may
//! answer, plus the interface specs that say which pairings are well-formed.

use crate::lang::{Example, Language};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Positive/negative label for a membership reply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Label {
    Positive,
    Negative,
}

/// A query instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Query {
    /// Is this example positive or negative?
    Membership(Example),
    /// Give me a positive example.
    PositiveWitness,
    /// Give me a negative example.
    NegativeWitness,
    /// Is this candidate correct?
    Correctness(Language),
    /// Does this crafted candidate satisfy this crafted specification?
    /// Interface-only: no built-in oracle answers it.
    CraftedCorrectness(Language, Language),
    /// Given examples consistent with this concept, is there another
    /// consistent concept, and where do they differ?
    DistinguishingInput(Vec<Example>, Language),
}

/// A response instance. `Verdict(None)` means "correct"; `Verdict(Some(x))`
/// carries a counterexample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Response {
    Label(Label),
    Witness(Option<Example>),
    Verdict(Option<Example>),
    Distinguisher(Option<(Language, Example)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QueryKind {
    Membership,
    PositiveWitness,
    NegativeWitness,
    Correctness,
    CraftedCorrectness,
    DistinguishingInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ResponseKind {
    Label,
    Witness,
    Verdict,
    Distinguisher,
}

impl Query {
    pub fn kind(&self) -> QueryKind {
        match self {
            Query::Membership(_) => QueryKind::Membership,
            Query::PositiveWitness => QueryKind::PositiveWitness,
            Query::NegativeWitness => QueryKind::NegativeWitness,
            Query::Correctness(_) => QueryKind::Correctness,
            Query::CraftedCorrectness(_, _) => QueryKind::CraftedCorrectness,
            Query::DistinguishingInput(_, _) => QueryKind::DistinguishingInput,
        }
    }
}

impl Response {
    pub fn kind(&self) -> ResponseKind {
        match self {
            Response::Label(_) => ResponseKind::Label,
            Response::Witness(_) => ResponseKind::Witness,
            Response::Verdict(_) => ResponseKind::Verdict,
            Response::Distinguisher(_) => ResponseKind::Distinguisher,
        }
    }
}

/// The set of (query type, response type) pairs an oracle supports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleInterface {
    allowed: BTreeSet<(QueryKind, ResponseKind)>,
}

impl OracleInterface {
    pub fn new<I: IntoIterator<Item = (QueryKind, ResponseKind)>>(pairs: I) -> Self {
        OracleInterface {
            allowed: pairs.into_iter().collect(),
        }
    }

    /// The CEGIS preset: positive witnesses plus correctness verdicts,
    /// nothing else.
    pub fn cegis() -> Self {
        OracleInterface::new([
            (QueryKind::PositiveWitness, ResponseKind::Witness),
            (QueryKind::Correctness, ResponseKind::Verdict),
        ])
    }

    /// The finite-class preset: CEGIS plus membership labels and
    /// distinguishing inputs.
    pub fn finite_class() -> Self {
        OracleInterface::new([
            (QueryKind::PositiveWitness, ResponseKind::Witness),
            (QueryKind::Correctness, ResponseKind::Verdict),
            (QueryKind::Membership, ResponseKind::Label),
            (QueryKind::DistinguishingInput, ResponseKind::Distinguisher),
        ])
    }

    pub fn allows(&self, q: QueryKind, r: ResponseKind) -> bool {
        self.allowed.contains(&(q, r))
    }

    /// A dialogue pair conforms when its (query type, response type) is
    /// allowed by this interface.
    pub fn conforms(&self, query: &Query, response: &Response) -> bool {
        self.allows(query.kind(), response.kind())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (QueryKind, ResponseKind)> + '_ {
        self.allowed.iter().copied()
    }
}

/// One logged dialogue step: a query, its response, and whether it was a
/// learner-issued probe rather than the engine's own per-step query.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DialogueEntry {
    pub step: usize,
    pub query: Query,
    pub response: Response,
    pub probe: bool,
}
