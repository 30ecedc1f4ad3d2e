//! Boolean formation sequences: straight-line programs over a generator
//! family with complement and intersection steps.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::pairing::{decode_seq, encode_seq, pair, unpair, Index};

/// One entry of a formation sequence.
///
/// `Gen(g)` is the triple `(0, g, g)`, `Compl(n)` is `(1, n, n)` and
/// `Inter(n, m)` is `(2, n, m)`. Positions refer to earlier entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Gen(u64),
    Compl(usize),
    Inter(usize, usize),
}

impl Step {
    pub fn triple(&self) -> (u64, u64, u64) {
        match *self {
            Step::Gen(g) => (0, g, g),
            Step::Compl(n) => (1, n as u64, n as u64),
            Step::Inter(n, m) => (2, n as u64, m as u64),
        }
    }

    /// Reads a triple sitting at `position`, enforcing the back-reference
    /// constraints.
    pub fn from_triple(tag: u64, n: u64, m: u64, position: usize) -> Option<Step> {
        let pos = position as u64;
        match tag {
            0 if n == m => Some(Step::Gen(n)),
            1 if n == m && n < pos => Some(Step::Compl(n as usize)),
            2 if n < pos && m < pos => Some(Step::Inter(n as usize, m as usize)),
            _ => None,
        }
    }

    fn code(&self) -> BigUint {
        let (t, n, m) = self.triple();
        pair(&BigUint::from(t), &pair(&BigUint::from(n), &BigUint::from(m)))
    }

    fn shifted(self, offset: usize) -> Step {
        match self {
            Step::Gen(g) => Step::Gen(g),
            Step::Compl(n) => Step::Compl(n + offset),
            Step::Inter(n, m) => Step::Inter(n + offset, m + offset),
        }
    }
}

/// A well-formed boolean formation sequence; it denotes the set built by
/// its last entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormationSeq {
    steps: Vec<Step>,
}

impl FormationSeq {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidFormation);
        }
        for (j, s) in steps.iter().enumerate() {
            let (t, n, m) = s.triple();
            if Step::from_triple(t, n, m, j).is_none() {
                return Err(Error::InvalidFormation);
            }
        }
        Ok(FormationSeq { steps })
    }

    pub fn from_triples(triples: &[(u64, u64, u64)]) -> Result<Self> {
        let steps = triples
            .iter()
            .enumerate()
            .map(|(j, &(t, n, m))| Step::from_triple(t, n, m, j).ok_or(Error::InvalidFormation))
            .collect::<Result<Vec<_>>>()?;
        FormationSeq::new(steps)
    }

    /// `⟨(0, g, g)⟩`
    pub fn generator(g: u64) -> Self {
        FormationSeq {
            steps: alloc::vec![Step::Gen(g)],
        }
    }

    /// `S₀ ∩ S₀ᶜ`
    pub fn empty() -> Self {
        FormationSeq {
            steps: alloc::vec![Step::Gen(0), Step::Compl(0), Step::Inter(0, 1)],
        }
    }

    /// `(S₀ ∩ S₀ᶜ)ᶜ`
    pub fn universe() -> Self {
        let mut s = Self::empty();
        s.steps.push(Step::Compl(2));
        s
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn triples(&self) -> Vec<(u64, u64, u64)> {
        self.steps.iter().map(Step::triple).collect()
    }

    /// The sequence code: entries are pair-coded triples `(t, (n, m))`.
    pub fn code(&self) -> Index {
        let entries: Vec<BigUint> = self.steps.iter().map(Step::code).collect();
        Index::new(encode_seq(&entries))
    }

    /// `None` for codes that are not well-formed formation sequences.
    pub fn decode(index: &Index) -> Option<Self> {
        let entries = decode_seq(index.as_biguint())?;
        if entries.is_empty() {
            return None;
        }
        let mut steps = Vec::with_capacity(entries.len());
        for (j, e) in entries.iter().enumerate() {
            let (t, nm) = unpair(e)?;
            let (n, m) = unpair(&nm)?;
            let step = Step::from_triple(t.to_u64()?, n.to_u64()?, m.to_u64()?, j)?;
            steps.push(step);
        }
        Some(FormationSeq { steps })
    }

    /// Decodes, falling back to the empty-set sequence for invalid codes.
    pub fn decode_or_empty(index: &Index) -> Self {
        Self::decode(index).unwrap_or_else(Self::empty)
    }
}

/// Position of an entry inside a [`FormationBuilder`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot(usize);

/// Assembles formation sequences from generators and existing sequences,
/// shifting back-references when sequences are spliced in.
#[derive(Clone, Debug, Default)]
pub struct FormationBuilder {
    steps: Vec<Step>,
    empty: Option<Slot>,
}

impl FormationBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, s: Step) -> Slot {
        self.steps.push(s);
        Slot(self.steps.len() - 1)
    }

    pub fn generator(&mut self, g: u64) -> Slot {
        self.push(Step::Gen(g))
    }

    /// Appends `seq` and returns the slot holding its set.
    pub fn splice(&mut self, seq: &FormationSeq) -> Slot {
        let offset = self.steps.len();
        self.steps.extend(seq.steps.iter().map(|s| s.shifted(offset)));
        Slot(self.steps.len() - 1)
    }

    pub fn complement(&mut self, a: Slot) -> Slot {
        self.push(Step::Compl(a.0))
    }

    pub fn intersect(&mut self, a: Slot, b: Slot) -> Slot {
        self.push(Step::Inter(a.0, b.0))
    }

    /// `(aᶜ ∩ bᶜ)ᶜ`
    pub fn union(&mut self, a: Slot, b: Slot) -> Slot {
        let ca = self.complement(a);
        let cb = self.complement(b);
        let both = self.intersect(ca, cb);
        self.complement(both)
    }

    pub fn empty(&mut self) -> Slot {
        if let Some(e) = self.empty {
            return e;
        }
        let e = self.splice(&FormationSeq::empty());
        self.empty = Some(e);
        e
    }

    pub fn universe(&mut self) -> Slot {
        let e = self.empty();
        self.complement(e)
    }

    /// Union of all slots; the empty set for no slots.
    pub fn union_all(&mut self, slots: &[Slot]) -> Slot {
        match slots.split_first() {
            None => self.empty(),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &s| self.union(acc, s)),
        }
    }

    /// Intersection of all slots; `V` for no slots.
    pub fn intersect_all(&mut self, slots: &[Slot]) -> Slot {
        match slots.split_first() {
            None => self.universe(),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &s| self.intersect(acc, s)),
        }
    }

    /// Closes the program so that it denotes the set at `root`.
    pub fn finish(mut self, root: Slot) -> FormationSeq {
        if root.0 + 1 != self.steps.len() {
            self.push(Step::Inter(root.0, root.0));
        }
        FormationSeq { steps: self.steps }
    }
}
