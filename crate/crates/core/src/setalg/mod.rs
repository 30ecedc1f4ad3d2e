//! Countable atomic algebras of subsets of `V ⊆ ℕ`.
//!
//! An algebra index is the code of a [`FormationSeq`] over a generator
//! family; invalid codes denote `∅`. Complement, intersection and union
//! act on indexes by splicing sequences, never by materialising sets.

mod formation;
mod normal;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

pub use formation::{FormationBuilder, FormationSeq, Slot, Step};
pub use normal::NormalForm;

use crate::error::{Error, Result};
use crate::pairing::{pair_u64, unpair_u128, Index};

/// Default bound for pointwise comparisons and stage-bounded normal forms.
pub const DEFAULT_TEST_BOUND: u64 = 1_000;

/// Largest finite universe accepted by [`Algebra::powerset`].
pub const MAX_POWERSET_VOTERS: u32 = 20;

/// The voter set `V`: either `{0, …, n-1}` or all of `ℕ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Universe {
    Finite(u32),
    Naturals,
}

impl Universe {
    pub fn contains(&self, v: u64) -> bool {
        match *self {
            Universe::Finite(n) => v < n as u64,
            Universe::Naturals => true,
        }
    }

    pub fn size(&self) -> Option<u64> {
        match *self {
            Universe::Finite(n) => Some(n as u64),
            Universe::Naturals => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Universe::Finite(_))
    }
}

/// How a generator family describes itself in dumps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorDescriptor {
    /// `S_i = {i}`.
    Singletons,
    /// `S_i` is the subset of `{0..voters}` with bitmask `i mod 2^voters`.
    Subsets { voters: u32 },
    /// An explicit finite list; indexes past the end denote `∅`.
    Explicit(Vec<NormalForm>),
    /// Membership decided by a procedure (e.g. scanning an enumeration).
    Oracle { name: String },
}

/// The base sequence `S` an algebra is generated from.
pub trait GeneratorFamily: Send + Sync {
    /// `v ∈ S_i`, for `v` in the universe.
    fn contains(&self, i: u64, v: u64) -> bool;

    /// Finite/cofinite form of `S_i`, or `Unknown(stage)` when a stage-bounded
    /// search does not settle it.
    fn normal_form(&self, i: u64, stage: u64) -> NormalForm;

    /// Whether [`GeneratorFamily::normal_form`] never answers `Unknown`.
    fn exact(&self) -> bool {
        true
    }

    /// A generator index `k` with `S_k = {v}`, when one exists.
    fn atom(&self, v: u64) -> Option<u64>;

    fn descriptor(&self) -> GeneratorDescriptor;
}

/// `S_i = {i}`; generates the finite–cofinite algebra over `ℕ`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Singletons;

impl GeneratorFamily for Singletons {
    fn contains(&self, i: u64, v: u64) -> bool {
        i == v
    }

    fn normal_form(&self, i: u64, _stage: u64) -> NormalForm {
        NormalForm::Finite(BTreeSet::from([i]))
    }

    fn atom(&self, v: u64) -> Option<u64> {
        Some(v)
    }

    fn descriptor(&self) -> GeneratorDescriptor {
        GeneratorDescriptor::Singletons
    }
}

/// Every subset of `{0..n}`, generator `i` being the bitmask `i mod 2^n`.
#[derive(Clone, Copy, Debug)]
pub struct Subsets {
    voters: u32,
}

impl Subsets {
    fn mask(&self, i: u64) -> u64 {
        i & ((1u64 << self.voters) - 1)
    }
}

impl GeneratorFamily for Subsets {
    fn contains(&self, i: u64, v: u64) -> bool {
        v < self.voters as u64 && self.mask(i) & (1 << v) != 0
    }

    fn normal_form(&self, i: u64, _stage: u64) -> NormalForm {
        let m = self.mask(i);
        NormalForm::Finite((0..self.voters as u64).filter(|v| m & (1 << v) != 0).collect())
    }

    fn atom(&self, v: u64) -> Option<u64> {
        (v < self.voters as u64).then(|| 1 << v)
    }

    fn descriptor(&self) -> GeneratorDescriptor {
        GeneratorDescriptor::Subsets {
            voters: self.voters,
        }
    }
}

/// A finite list of finite or cofinite sets.
#[derive(Clone, Debug)]
pub struct Explicit {
    universe: Universe,
    sets: Vec<NormalForm>,
}

impl Explicit {
    pub fn new(universe: Universe, sets: Vec<NormalForm>) -> Result<Self> {
        if sets.iter().any(|s| matches!(s, NormalForm::Unknown(_))) {
            return Err(Error::InvalidFormation);
        }
        let sets = sets.into_iter().map(|s| s.normalized(universe)).collect();
        Ok(Explicit { universe, sets })
    }
}

impl GeneratorFamily for Explicit {
    fn contains(&self, i: u64, v: u64) -> bool {
        self.sets.get(i as usize).is_some_and(|s| s.contains(v) == Some(true))
    }

    fn normal_form(&self, i: u64, _stage: u64) -> NormalForm {
        self.sets
            .get(i as usize)
            .cloned()
            .unwrap_or_else(NormalForm::empty)
    }

    fn atom(&self, v: u64) -> Option<u64> {
        let want = NormalForm::Finite(BTreeSet::from([v])).normalized(self.universe);
        self.sets.iter().position(|s| *s == want).map(|p| p as u64)
    }

    fn descriptor(&self) -> GeneratorDescriptor {
        GeneratorDescriptor::Explicit(self.sets.clone())
    }
}

/// Result of a set comparison: exact when decided by normal forms or by a
/// finite universe, otherwise checked pointwise below a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Exact(bool),
    UpToBound { holds: bool, bound: u64 },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        match *self {
            Verdict::Exact(b) => b,
            Verdict::UpToBound { holds, .. } => holds,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Verdict::Exact(_))
    }
}

/// A countable algebra over a universe, indexed by formation-sequence codes.
#[derive(Clone)]
pub struct Algebra {
    universe: Universe,
    generators: Arc<dyn GeneratorFamily>,
    test_bound: u64,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("universe", &self.universe)
            .field("generators", &self.generators.descriptor())
            .field("test_bound", &self.test_bound)
            .finish()
    }
}

impl Algebra {
    pub fn new(universe: Universe, generators: Arc<dyn GeneratorFamily>) -> Self {
        Algebra {
            universe,
            generators,
            test_bound: DEFAULT_TEST_BOUND,
        }
    }

    /// The algebra of finite and cofinite subsets of `ℕ`, generated by
    /// singletons.
    pub fn finite_cofinite() -> Self {
        Self::new(Universe::Naturals, Arc::new(Singletons))
    }

    /// The power set of `{0..voters}`, one generator per subset.
    pub fn powerset(voters: u32) -> Result<Self> {
        if voters == 0 || voters > MAX_POWERSET_VOTERS {
            return Err(Error::UniverseTooLarge(voters as u64));
        }
        Ok(Self::new(Universe::Finite(voters), Arc::new(Subsets { voters })))
    }

    pub fn with_test_bound(mut self, bound: u64) -> Self {
        self.test_bound = bound;
        self
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn test_bound(&self) -> u64 {
        self.test_bound
    }

    pub fn generators(&self) -> &dyn GeneratorFamily {
        &*self.generators
    }

    pub fn has_exact_normal_forms(&self) -> bool {
        self.generators.exact()
    }

    /// Atomicity as far as it can be checked: every voter below the test
    /// bound (all voters, for a finite universe) has an atom.
    pub fn is_atomic(&self) -> bool {
        let top = self.universe.size().unwrap_or(self.test_bound);
        (0..top).all(|v| self.generators.atom(v).is_some())
    }

    pub fn eval_formation(&self, seq: &FormationSeq) -> DescribedSet<'_> {
        DescribedSet {
            algebra: self,
            seq: seq.clone(),
        }
    }

    /// `A_i`; invalid codes denote `∅`.
    pub fn set_at(&self, index: &Index) -> DescribedSet<'_> {
        DescribedSet {
            algebra: self,
            seq: FormationSeq::decode_or_empty(index),
        }
    }

    pub fn index_of(&self, seq: &FormationSeq) -> Index {
        seq.code()
    }

    pub fn generator_index(&self, g: u64) -> Index {
        FormationSeq::generator(g).code()
    }

    pub fn empty_index(&self) -> Index {
        FormationSeq::empty().code()
    }

    pub fn universe_index(&self) -> Index {
        FormationSeq::universe().code()
    }

    /// An index with `A_k = {v}`.
    pub fn atom_index(&self, v: u64) -> Result<Index> {
        if !self.universe.contains(v) {
            return Err(Error::VoterOutsideUniverse(v));
        }
        self.generators
            .atom(v)
            .map(|g| self.generator_index(g))
            .ok_or(Error::NotAtomic)
    }

    /// Index of the finite set `points`, built as a union of atoms.
    pub fn finite_set_index(&self, points: &[u64]) -> Result<Index> {
        let mut b = FormationBuilder::new();
        let mut slots = Vec::with_capacity(points.len());
        for &v in points {
            if !self.universe.contains(v) {
                return Err(Error::VoterOutsideUniverse(v));
            }
            let g = self.generators.atom(v).ok_or(Error::NotAtomic)?;
            slots.push(b.generator(g));
        }
        let root = b.union_all(&slots);
        Ok(b.finish(root).code())
    }

    pub fn complement_index(&self, i: &Index) -> Index {
        let mut b = FormationBuilder::new();
        let a = b.splice(&FormationSeq::decode_or_empty(i));
        let c = b.complement(a);
        b.finish(c).code()
    }

    pub fn intersect_index(&self, i: &Index, j: &Index) -> Index {
        let mut b = FormationBuilder::new();
        let a = b.splice(&FormationSeq::decode_or_empty(i));
        let c = b.splice(&FormationSeq::decode_or_empty(j));
        let k = b.intersect(a, c);
        b.finish(k).code()
    }

    pub fn union_index(&self, i: &Index, j: &Index) -> Index {
        let mut b = FormationBuilder::new();
        let a = b.splice(&FormationSeq::decode_or_empty(i));
        let c = b.splice(&FormationSeq::decode_or_empty(j));
        let k = b.union(a, c);
        b.finish(k).code()
    }

    /// Normal form at the algebra's test bound.
    pub fn normal_form(&self, i: &Index) -> NormalForm {
        self.set_at(i).normal_form(self.test_bound)
    }

    pub fn normal_form_at(&self, i: &Index, stage: u64) -> NormalForm {
        self.set_at(i).normal_form(stage)
    }

    pub fn is_empty(&self, i: &Index) -> Verdict {
        self.set_at(i).is_empty()
    }

    pub fn is_universe(&self, i: &Index) -> Verdict {
        self.set_at(i).is_universe()
    }

    pub fn subset(&self, i: &Index, j: &Index) -> Verdict {
        self.set_at(i).subset_of(&self.set_at(j))
    }

    pub fn equal(&self, i: &Index, j: &Index) -> Verdict {
        self.set_at(i).equals(&self.set_at(j))
    }

    /// Generator index of the subset with bitmask `mask`, for power-set
    /// algebras.
    pub fn subset_index(&self, mask: u64) -> Option<Index> {
        match self.generators.descriptor() {
            GeneratorDescriptor::Subsets { voters } if mask < (1u64 << voters) => {
                Some(self.generator_index(mask))
            }
            _ => None,
        }
    }

    /// Every subset of a power-set algebra's universe as `(mask, index)`,
    /// ascending by mask.
    pub fn all_subsets(&self) -> Option<Vec<(u64, Index)>> {
        match self.generators.descriptor() {
            GeneratorDescriptor::Subsets { voters } => Some(
                (0..1u64 << voters)
                    .map(|m| (m, self.generator_index(m)))
                    .collect(),
            ),
            _ => None,
        }
    }

    /// The members of `A_i` as a bitmask, for finite universes of at most 64
    /// voters.
    pub fn mask_of(&self, i: &Index) -> Option<u64> {
        let n = self.universe.size()?;
        if n > 64 {
            return None;
        }
        let set = self.set_at(i);
        Some((0..n).filter(|&v| set.contains(v)).fold(0, |m, v| m | (1 << v)))
    }
}

/// A set of the algebra, given by a formation sequence. Membership is
/// always decidable.
#[derive(Clone)]
pub struct DescribedSet<'a> {
    algebra: &'a Algebra,
    seq: FormationSeq,
}

impl fmt::Debug for DescribedSet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("DescribedSet").field(&self.seq.triples()).finish()
    }
}

impl<'a> DescribedSet<'a> {
    pub fn formation(&self) -> &FormationSeq {
        &self.seq
    }

    pub fn algebra(&self) -> &'a Algebra {
        self.algebra
    }

    fn memberships(&self, v: u64) -> Vec<bool> {
        let fam = self.algebra.generators();
        let mut m: Vec<bool> = Vec::with_capacity(self.seq.len());
        for step in self.seq.steps() {
            let b = match *step {
                Step::Gen(g) => fam.contains(g, v),
                Step::Compl(n) => !m[n],
                Step::Inter(n, k) => m[n] && m[k],
            };
            m.push(b);
        }
        m
    }

    pub fn contains(&self, v: u64) -> bool {
        self.algebra.universe.contains(v) && *self.memberships(v).last().expect("nonempty")
    }

    /// Finite/cofinite form, with generator forms settled at `stage`.
    pub fn normal_form(&self, stage: u64) -> NormalForm {
        let u = self.algebra.universe;
        let fam = self.algebra.generators();
        let steps = self.seq.steps();
        let mut forms: Vec<NormalForm> = Vec::with_capacity(steps.len());
        // Each slot as a literal: the slot it complements (through any
        // number of complements) and whether the count is even.
        let mut lits: Vec<(usize, bool)> = Vec::with_capacity(steps.len());
        for (i, step) in steps.iter().enumerate() {
            let (nf, lit) = match *step {
                Step::Gen(g) => (fam.normal_form(g, stage).normalized(u), (i, true)),
                Step::Compl(n) => (forms[n].complement(u), (lits[n].0, !lits[n].1)),
                Step::Inter(n, k) => {
                    let nf = match (&forms[n], &forms[k]) {
                        _ if lits[n].0 == lits[k].0 && lits[n].1 != lits[k].1 => {
                            NormalForm::empty()
                        }
                        (a, _) if lits[n] == lits[k] => a.clone(),
                        (NormalForm::Finite(f), NormalForm::Unknown(_)) => self.filter_at(f, k),
                        (NormalForm::Unknown(_), NormalForm::Finite(f)) => self.filter_at(f, n),
                        (a, b) => a.intersect(b, u),
                    };
                    (nf, (i, true))
                }
            };
            forms.push(nf);
            lits.push(lit);
        }
        forms.pop().expect("nonempty")
    }

    // Finite set ∩ (set at `pos`), decided pointwise.
    fn filter_at(&self, points: &BTreeSet<u64>, pos: usize) -> NormalForm {
        NormalForm::Finite(
            points
                .iter()
                .copied()
                .filter(|&v| self.memberships(v)[pos])
                .collect(),
        )
    }

    /// Members below `bound` (all members, for a finite universe).
    pub fn members_below(&self, bound: u64) -> Vec<u64> {
        let top = self.algebra.universe.size().map_or(bound, |n| n.min(bound));
        (0..top).filter(|&v| self.contains(v)).collect()
    }

    fn pointwise_bound(&self) -> u64 {
        self.algebra.universe.size().unwrap_or(self.algebra.test_bound)
    }

    fn exact_forms(&self, other: &DescribedSet<'_>) -> Option<(NormalForm, NormalForm)> {
        let stage = self.algebra.test_bound;
        let a = self.normal_form(stage);
        let b = other.normal_form(stage);
        (!a.is_unknown() && !b.is_unknown()).then_some((a, b))
    }

    pub fn subset_of(&self, other: &DescribedSet<'_>) -> Verdict {
        if let Some((a, b)) = self.exact_forms(other) {
            if let Some(r) = a.subset(&b) {
                return Verdict::Exact(r);
            }
        }
        let bound = self.pointwise_bound();
        for v in 0..bound {
            if self.contains(v) && !other.contains(v) {
                return Verdict::Exact(false);
            }
        }
        self.finish_pointwise(true, bound)
    }

    pub fn equals(&self, other: &DescribedSet<'_>) -> Verdict {
        if let Some((a, b)) = self.exact_forms(other) {
            return Verdict::Exact(a == b);
        }
        let bound = self.pointwise_bound();
        for v in 0..bound {
            if self.contains(v) != other.contains(v) {
                return Verdict::Exact(false);
            }
        }
        self.finish_pointwise(true, bound)
    }

    pub fn is_empty(&self) -> Verdict {
        match self.normal_form(self.algebra.test_bound) {
            NormalForm::Finite(f) => Verdict::Exact(f.is_empty()),
            NormalForm::Cofinite(_) => Verdict::Exact(false),
            NormalForm::Unknown(_) => {
                let bound = self.pointwise_bound();
                if (0..bound).any(|v| self.contains(v)) {
                    Verdict::Exact(false)
                } else {
                    self.finish_pointwise(true, bound)
                }
            }
        }
    }

    pub fn is_universe(&self) -> Verdict {
        let u = self.algebra.universe;
        match self.normal_form(self.algebra.test_bound) {
            NormalForm::Unknown(_) => {
                let bound = self.pointwise_bound();
                if (0..bound).any(|v| !self.contains(v)) {
                    Verdict::Exact(false)
                } else {
                    self.finish_pointwise(true, bound)
                }
            }
            nf => Verdict::Exact(nf.complement(u) == NormalForm::empty()),
        }
    }

    fn finish_pointwise(&self, holds: bool, bound: u64) -> Verdict {
        if self.algebra.universe.is_finite() {
            Verdict::Exact(holds)
        } else {
            Verdict::UpToBound { holds, bound }
        }
    }
}

/// Codes a finite sequence of finite sets as the set `{(i, v) : v ∈ Y_i}`
/// of pair codes, ascending.
pub fn code_set_sequence(sets: &[BTreeSet<u64>]) -> Option<Vec<u128>> {
    let mut out = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        for &v in s {
            out.push(pair_u64(i as u64, v)?);
        }
    }
    out.sort_unstable();
    Some(out)
}

/// Inverse of [`code_set_sequence`] for the first `len` sets; non-pair codes
/// are rejected.
pub fn decode_set_sequence(codes: &[u128], len: usize) -> Option<Vec<BTreeSet<u64>>> {
    let mut out = alloc::vec![BTreeSet::new(); len];
    for &c in codes {
        let (i, v) = unpair_u128(c)?;
        if let Some(s) = out.get_mut(i as usize) {
            s.insert(v);
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests;
