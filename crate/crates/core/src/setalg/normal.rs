use alloc::collections::BTreeSet;

use super::Universe;

/// Finite/cofinite description of a set, or `Unknown(stage)` when a
/// stage-bounded search could not settle which.
///
/// Over a finite universe every set is reported as `Finite`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NormalForm {
    Finite(BTreeSet<u64>),
    /// The complement is the given finite set.
    Cofinite(BTreeSet<u64>),
    Unknown(u64),
}

impl NormalForm {
    pub fn empty() -> Self {
        NormalForm::Finite(BTreeSet::new())
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, NormalForm::Unknown(_))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, NormalForm::Finite(_))
    }

    pub fn is_cofinite(&self) -> bool {
        matches!(self, NormalForm::Cofinite(_))
    }

    pub fn contains(&self, v: u64) -> Option<bool> {
        match self {
            NormalForm::Finite(f) => Some(f.contains(&v)),
            NormalForm::Cofinite(f) => Some(!f.contains(&v)),
            NormalForm::Unknown(_) => None,
        }
    }

    /// Canonical form relative to `u`: supports restricted to `V`, and no
    /// `Cofinite` over a finite universe.
    pub fn normalized(self, u: Universe) -> Self {
        match (self, u) {
            (NormalForm::Finite(f), Universe::Finite(n)) => {
                NormalForm::Finite(f.into_iter().filter(|&v| v < n as u64).collect())
            }
            (NormalForm::Cofinite(f), Universe::Finite(n)) => {
                NormalForm::Finite((0..n as u64).filter(|v| !f.contains(v)).collect())
            }
            (nf, _) => nf,
        }
    }

    pub fn complement(&self, u: Universe) -> Self {
        match (self, u) {
            (NormalForm::Finite(f), Universe::Finite(n)) => {
                NormalForm::Finite((0..n as u64).filter(|v| !f.contains(v)).collect())
            }
            (NormalForm::Finite(f), Universe::Naturals) => NormalForm::Cofinite(f.clone()),
            (NormalForm::Cofinite(f), _) => NormalForm::Finite(f.clone()).normalized(u),
            (NormalForm::Unknown(t), _) => NormalForm::Unknown(*t),
        }
    }

    pub fn intersect(&self, other: &Self, u: Universe) -> Self {
        use NormalForm::*;
        match (self, other) {
            (Unknown(t), _) | (_, Unknown(t)) => Unknown(*t),
            (Finite(a), Finite(b)) => Finite(a.intersection(b).copied().collect()),
            (Finite(a), Cofinite(b)) | (Cofinite(b), Finite(a)) => {
                Finite(a.difference(b).copied().collect())
            }
            (Cofinite(a), Cofinite(b)) => Cofinite(a.union(b).copied().collect()).normalized(u),
        }
    }

    pub fn union(&self, other: &Self, u: Universe) -> Self {
        self.complement(u)
            .intersect(&other.complement(u), u)
            .complement(u)
    }

    /// `self ⊆ other`, when both forms are known. Over `ℕ` a cofinite set is
    /// never inside a finite one.
    pub fn subset(&self, other: &Self) -> Option<bool> {
        use NormalForm::*;
        match (self, other) {
            (Unknown(_), _) | (_, Unknown(_)) => None,
            (Finite(a), Finite(b)) => Some(a.is_subset(b)),
            (Finite(a), Cofinite(b)) => Some(a.is_disjoint(b)),
            (Cofinite(_), Finite(_)) => Some(false),
            (Cofinite(a), Cofinite(b)) => Some(b.is_subset(a)),
        }
    }
}
