use thiserror::Error;

/// Errors raised by the arithmetic, field and tower layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("zero has no logarithm, inverse or Teichmüller representative")]
    ZeroInput,
    #[error("expected an l-adic unit, got valuation {0}")]
    NotAUnit(i64),
    #[error("precision exhausted: value is indistinguishable from zero")]
    PrecisionExhausted,
    #[error("modulus {ell}^{prec} does not fit in 63 bits")]
    ModulusTooLarge { ell: u64, prec: u32 },
    #[error("conductor {0} is congruent to 2 mod 4")]
    ConductorTwoModFour(u64),
    #[error("{value} is not coprime to {modulus}")]
    NotCoprime { value: i64, modulus: u64 },
    #[error("conductor {given} is not exact; the field has conductor {actual}")]
    InexactConductor { given: u64, actual: u64 },
    #[error("field (f={sub_f}) is not a subfield of field (f={f})")]
    NotSubfield { f: u64, sub_f: u64 },
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("field is real")]
    RealField,
    #[error("field is Q; the operation needs a nontrivial field")]
    TrivialField,
    #[error("twist {0} must be odd and coprime to the conductor")]
    InvalidTwist(i64),
    #[error("non-integral coefficient {0} in a twisted Stickelberger element")]
    NotIntegral(String),
    #[error("{ell} divides the group order {order}; the group ring is not semisimple")]
    NotSemisimple { ell: u64, order: u64 },
    #[error("field does not contain the {0}-th roots of unity")]
    MissingRootsOfUnity(u64),
    #[error("{0} does not divide the conductor")]
    PrimeNotInConductor(u64),
    #[error("truncation too coarse to reduce faithfully to level {0}")]
    TruncationTooCoarse(u32),
    #[error("the trivial character has no B_1 value in this convention")]
    TrivialCharacter,
    #[error("norm coherence failed between levels {0} and {1}")]
    CoherenceFailure(u32, u32),
    #[error("denominator divisible by {0}")]
    DenominatorNotUnit(u64),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("malformed serialized value: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
