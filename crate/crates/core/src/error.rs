use thiserror::Error;

use crate::scalar::FieldSpec;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("field mismatch: {0:?} vs {1:?}")]
    FieldMismatch(FieldSpec, FieldSpec),

    #[error("division by zero")]
    DivisionByZero,

    #[error("prime {0} divides a denominator or is unsuitable")]
    BadPrime(u64),

    #[error("{0} is not a quadratic residue mod {1}")]
    NoSquareRoot(i64, u64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("linear forms of the projection are linearly dependent")]
    DegenerateProjection,

    #[error("resultant of a zero input")]
    ZeroInput,

    #[error("point {0} lies on the projection center")]
    CenterHitsPoint(usize),

    #[error("projection identifies points {0} and {1}")]
    NotInjectiveOnSet(usize, usize),

    #[error("curves share a common component (resultant vanishes identically)")]
    PositiveDimensionalIntersection,

    #[error("intersection scheme is not reduced")]
    SchemeNotReduced,

    #[error("enumeration of {size} points exceeds budget {budget}")]
    TooLarge { size: u128, budget: u128 },

    #[error("two node clusters closer than the ambiguity radius")]
    ClusterAmbiguous,

    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("point {0} is not on the variety")]
    PointNotOnVariety(usize),

    #[error("point {0} is not on the divisor")]
    PointNotOnDivisor(usize),

    #[error("curve search at degree {0} is not exact within budget")]
    UnverifiableDegree(u32),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("internal contradiction: {0}")]
    InternalContradiction(String),

    #[error("nodes are neither supplied nor computable")]
    NodesMissing,

    #[error("node {0} failed ordinary double point verification")]
    UnverifiedNodes(usize),

    #[error("base locus is positive-dimensional ({0} rational points found)")]
    PositiveDimensionalBaseLocus(usize),

    #[error("gate failed ({lemma}): {detail}")]
    GateFailed { lemma: String, detail: String },

    #[error("separation failed: {0}")]
    SeparationFailed(String),

    #[error("degenerate random draw: {0}")]
    DegenerateDraw(String),
}

impl Error {
    /// Stable machine-readable kind, used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::FieldMismatch(..) => "FieldMismatch",
            Error::DivisionByZero => "DivisionByZero",
            Error::BadPrime(_) => "BadPrime",
            Error::NoSquareRoot(..) => "NoSquareRoot",
            Error::Parse(_) => "Parse",
            Error::InvalidInput(_) => "InvalidInput",
            Error::DegenerateProjection => "DegenerateProjection",
            Error::ZeroInput => "ZeroInput",
            Error::CenterHitsPoint(_) => "CenterHitsPoint",
            Error::NotInjectiveOnSet(..) => "NotInjectiveOnSet",
            Error::PositiveDimensionalIntersection => "PositiveDimensionalIntersection",
            Error::SchemeNotReduced => "SchemeNotReduced",
            Error::TooLarge { .. } => "TooLarge",
            Error::ClusterAmbiguous => "ClusterAmbiguous",
            Error::BudgetExhausted(_) => "BudgetExhausted",
            Error::PointNotOnVariety(_) => "PointNotOnVariety",
            Error::PointNotOnDivisor(_) => "PointNotOnDivisor",
            Error::UnverifiableDegree(_) => "UnverifiableDegree",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::InternalContradiction(_) => "InternalContradiction",
            Error::NodesMissing => "NodesMissing",
            Error::UnverifiedNodes(_) => "UnverifiedNodes",
            Error::PositiveDimensionalBaseLocus(_) => "PositiveDimensionalBaseLocus",
            Error::GateFailed { .. } => "GateFailed",
            Error::SeparationFailed(_) => "SeparationFailed",
            Error::DegenerateDraw(_) => "DegenerateDraw",
        }
    }
}
