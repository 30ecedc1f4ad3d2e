//! The range gadget: a society over `ℕ` whose Fréchet SWF, read on one
//! profile per `n`, says whether `n` is in the range of an enumeration `h`.
//!
//! Generators: `B_{2n} = {v : ∃m<v. h(m) = n}` and `B_{2n+1} = {n}`.
//! Whether `B_{2n}` is cofinite or empty is only known once a witness turns
//! up, so everything here runs against an explicit stage bound.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::order::{first_alts, Alt, OrderPattern, PatternLevel};
use crate::pairing::Index;
use crate::setalg::{Algebra, GeneratorDescriptor, GeneratorFamily, NormalForm, Universe};
use crate::society::{Society, Voter};
use crate::swf::Swf;
use crate::ultra::Ultrafilter;

/// The compared pair `(x, y)`.
pub const X: Alt = Alt(0);
pub const Y: Alt = Alt(1);

/// Number of bundled toy machines.
pub const TOY_COUNT: u64 = 10;

/// A step-counting machine: `h(m)` is the number of steps the map
/// `x ↦ x/2` (even), `x ↦ mul·x + add` (odd) takes from `m + offset + 1`
/// to reach 1, or `fuel` if it does not within `fuel` steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ToyMachine {
    pub mul: u64,
    pub add: u64,
    pub offset: u64,
    pub fuel: u64,
}

impl ToyMachine {
    /// The `k`-th bundled machine, `k < TOY_COUNT`.
    pub fn bundled(k: u64) -> Self {
        ToyMachine {
            mul: 3,
            add: 1 + 2 * (k % 5),
            offset: 7 * k,
            fuel: 64,
        }
    }

    pub fn run(&self, m: u64) -> u64 {
        let mut x = m.saturating_add(self.offset).saturating_add(1);
        let mut steps = 0;
        while x != 1 && steps < self.fuel {
            x = if x.is_multiple_of(2) {
                x / 2
            } else {
                x.saturating_mul(self.mul).saturating_add(self.add)
            };
            steps += 1;
        }
        steps
    }
}

/// A total map `h : ℕ → ℕ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enumerator {
    /// A finite table; arguments past the end read the last entry.
    Table(Vec<u64>),
    Toy(ToyMachine),
}

impl Enumerator {
    pub fn table(values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyEnumerator);
        }
        Ok(Enumerator::Table(values))
    }

    pub fn toy(k: u64) -> Self {
        Enumerator::Toy(ToyMachine::bundled(k))
    }

    pub fn h(&self, m: u64) -> u64 {
        match self {
            Enumerator::Table(t) => {
                let last = t.len() - 1;
                t[usize::try_from(m).map_or(last, |m| m.min(last))]
            }
            Enumerator::Toy(t) => t.run(m),
        }
    }

    /// Least `m < bound` with `h(m) = n`.
    pub fn first_hit(&self, n: u64, bound: u64) -> Option<u64> {
        (0..bound).find(|&m| self.h(m) == n)
    }
}

/// The generator family `B`.
#[derive(Clone, Debug)]
pub struct RangeFamily {
    h: Arc<Enumerator>,
}

impl GeneratorFamily for RangeFamily {
    fn contains(&self, i: u64, v: u64) -> bool {
        let n = i / 2;
        if i % 2 == 1 {
            v == n
        } else {
            self.h.first_hit(n, v).is_some()
        }
    }

    fn normal_form(&self, i: u64, stage: u64) -> NormalForm {
        let n = i / 2;
        if i % 2 == 1 {
            return NormalForm::Finite(BTreeSet::from([n]));
        }
        match self.h.first_hit(n, stage) {
            Some(m) => NormalForm::Cofinite((0..=m).collect()),
            None => NormalForm::Unknown(stage),
        }
    }

    fn exact(&self) -> bool {
        false
    }

    fn atom(&self, v: u64) -> Option<u64> {
        v.checked_mul(2).and_then(|i| i.checked_add(1))
    }

    fn descriptor(&self) -> GeneratorDescriptor {
        GeneratorDescriptor::Oracle {
            name: format!("range gadget over {:?}", self.h),
        }
    }
}

/// The canonical society over the algebra generated by `B`.
#[derive(Clone, Debug)]
pub struct GadgetSociety {
    h: Arc<Enumerator>,
    society: Arc<Society>,
}

/// Outcome of [`GadgetSociety::phi`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiOutcome {
    /// `x <_{σ(g(n))} y`; the stage is the least `v` with a witness `m < v`.
    InRange(u64),
    /// No witness among `m < T`; σ's answer was undecided at `T`.
    NoWitnessUpTo(u64),
}

pub fn build_gadget(h: Enumerator) -> Result<GadgetSociety> {
    let h = Arc::new(h);
    let family = Arc::new(RangeFamily { h: h.clone() });
    let algebra = Arc::new(Algebra::new(Universe::Naturals, family));
    let society = Arc::new(Society::canonical(algebra, &first_alts(3))?);
    Ok(GadgetSociety { h, society })
}

fn strict_pattern(a: Alt, b: Alt) -> OrderPattern {
    let level = |alt| PatternLevel {
        alts: alloc::vec![alt],
        wildcard: false,
    };
    let rest = PatternLevel {
        alts: Vec::new(),
        wildcard: true,
    };
    OrderPattern::new(alloc::vec![level(a), level(b), rest]).expect("well-formed pattern")
}

impl GadgetSociety {
    pub fn enumerator(&self) -> &Enumerator {
        &self.h
    }

    pub fn society(&self) -> Arc<Society> {
        self.society.clone()
    }

    /// `v ∈ B_i`.
    pub fn b_contains(&self, i: u64, v: Voter) -> bool {
        self.society.algebra().generators().contains(i, v)
    }

    /// Index of the profile where `B_{2n}` ranks `x < y < *` and everyone
    /// else `y < x < *`.
    pub fn g(&self, n: u64) -> Result<Index> {
        let a = self.society.algebra();
        self.society.embed_patterns(
            &[strict_pattern(X, Y), strict_pattern(Y, X)],
            &[a.generator_index(2 * n)],
        )
    }

    /// The Fréchet SWF with generator forms settled at `stage`.
    pub fn frechet_sigma(&self, stage: u64) -> Result<Swf> {
        let u = Ultrafilter::frechet_staged(self.society.algebra_arc(), stage)?;
        Ok(Swf::from_ultrafilter(self.society.clone(), u))
    }

    /// Evaluates `x <_{σ(g(n))} y` with the Fréchet SWF at stage `stage`.
    /// Without a stage bound this would decide the range of `h`.
    pub fn phi(&self, n: u64, stage: u64) -> Result<PhiOutcome> {
        let sigma = self.frechet_sigma(stage)?;
        let profile = self.g(n)?;
        match sigma.sigma_order(&profile) {
            Ok(r) if r.lt(X, Y) => {
                let gen = self.society.algebra().generators();
                match gen.normal_form(2 * n, stage) {
                    NormalForm::Cofinite(c) => Ok(PhiOutcome::InRange(c.len() as u64)),
                    _ => Err(Error::NotUltrafilter),
                }
            }
            Ok(_) | Err(Error::Undecided(_)) => Ok(PhiOutcome::NoWitnessUpTo(stage)),
            Err(e) => Err(e),
        }
    }
}
