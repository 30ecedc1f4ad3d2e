use alloc::string::String;

use crate::order::Alt;
use crate::society::Voter;

/// Errors raised by constructions in this crate.
///
/// Verification failures that carry witnesses are returned as reports, not
/// errors; an `Error` means the requested object could not be built.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("alternative set too large ({0} > 5)")]
    TooManyAlternatives(usize),
    #[error("alternative set is empty")]
    NoAlternatives,
    #[error("alternative {0} appears twice")]
    DuplicateAlternative(Alt),
    #[error("alternative id {0} is too large for 128-bit order codes")]
    AltIdTooLarge(Alt),
    #[error("alternative {0} is not in the alternative set")]
    UnknownAlternative(Alt),
    #[error("relation is not a weak order")]
    NotWeakOrder,
    #[error("pattern does not cover the alternative set exactly once")]
    PatternCoverage,
    #[error("pattern syntax: {0}")]
    PatternSyntax(String),
    #[error("restriction target is empty or not a subset of the alternatives")]
    BadRestriction,
    #[error("invalid formation sequence")]
    InvalidFormation,
    #[error("universe too large ({0} voters)")]
    UniverseTooLarge(u64),
    #[error("voter {0} is not in V")]
    VoterOutsideUniverse(Voter),
    #[error("a society needs at least 3 alternatives")]
    TooFewAlternatives,
    #[error("algebra is not atomic")]
    NotAtomic,
    #[error("finite society size guard: |V| <= 4 and |X| = 3")]
    FiniteSocietyGuard,
    #[error("not a quasi-partition profile: {0}")]
    InvalidQuasiPartition(&'static str),
    #[error("oracle requires finite society")]
    InfiniteSociety,
    #[error("ultrafilter undecided at stage bound {0}")]
    Undecided(u64),
    #[error("profile lies outside the table's domain")]
    OutsideDomain,
    #[error("ultrafilter membership does not yield a weak order")]
    NotUltrafilter,
    #[error("refused: social welfare function axioms fail ({0})")]
    AxiomCheckFailed(String),
    #[error("axiom checks were incomplete ({0} dictator candidates)")]
    AxiomChecksIncomplete(usize),
    #[error("extracted ultrafilter disagrees with the brute-force decisiveness oracle at coalition mask {0}")]
    OracleMismatch(u64),
    #[error("extracted ultrafilter is principal at voter {0}")]
    Principal(Voter),
    #[error("the Fréchet ultrafilter needs an infinite universe")]
    FiniteUniverse,
    #[error("algebra has no exact normal forms and no stage bound was given")]
    InexactAlgebra,
    #[error("arrowcheck supports only 2 voters and 3 alternatives")]
    ArrowcheckGuard,
    #[error("pair aggregators are incoherent on some profile")]
    IncoherentAggregators,
    #[error("an enumeration table needs at least one entry")]
    EmptyEnumerator,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
