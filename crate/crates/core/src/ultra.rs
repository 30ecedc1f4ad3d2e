//! Ultrafilters on countable algebras, given by membership procedures over
//! algebra indexes, and probe-based checks of the ultrafilter axioms.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::pairing::Index;
use crate::setalg::{Algebra, FormationBuilder, FormationSeq, NormalForm};
use crate::society::Voter;
use crate::swf::Swf;

/// Answer of a membership query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    In,
    Out,
    /// Not settled by the stage bound.
    Unknown(u64),
}

impl Decision {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Decision::In
        } else {
            Decision::Out
        }
    }

    pub fn is_in(self) -> bool {
        self == Decision::In
    }

    pub fn is_known(self) -> bool {
        !matches!(self, Decision::Unknown(_))
    }
}

pub type MembershipFn = dyn Fn(&Algebra, &Index) -> Decision + Send + Sync;

#[derive(Clone)]
pub enum UltrafilterKind {
    /// `{i : d ∈ A_i}`.
    Principal(Voter),
    /// The cofinite sets; `stage` bounds normal-form searches on
    /// oracle-backed algebras.
    Frechet { stage: Option<u64> },
    /// The almost decisive coalitions of a social welfare function.
    Decisive(Arc<Swf>),
    /// An arbitrary procedure, e.g. a deliberately broken one in tests.
    Custom(Arc<MembershipFn>),
}

impl fmt::Debug for UltrafilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UltrafilterKind::Principal(d) => write!(f, "Principal({d})"),
            UltrafilterKind::Frechet { stage } => write!(f, "Frechet({stage:?})"),
            UltrafilterKind::Decisive(_) => f.write_str("Decisive"),
            UltrafilterKind::Custom(_) => f.write_str("Custom"),
        }
    }
}

/// A membership procedure on the indexes of an algebra.
#[derive(Clone, Debug)]
pub struct Ultrafilter {
    algebra: Arc<Algebra>,
    kind: UltrafilterKind,
}

impl Ultrafilter {
    pub fn principal(algebra: Arc<Algebra>, d: Voter) -> Result<Self> {
        if !algebra.universe().contains(d) {
            return Err(Error::VoterOutsideUniverse(d));
        }
        Ok(Ultrafilter {
            algebra,
            kind: UltrafilterKind::Principal(d),
        })
    }

    /// The Fréchet ultrafilter of a finite–cofinite algebra. Refused for
    /// algebras whose normal forms may be unknown; use
    /// [`Ultrafilter::frechet_staged`] for those.
    pub fn frechet(algebra: Arc<Algebra>) -> Result<Self> {
        if !algebra.has_exact_normal_forms() {
            return Err(Error::InexactAlgebra);
        }
        Self::frechet_with(algebra, None)
    }

    /// Fréchet membership with generator forms settled at `stage`.
    pub fn frechet_staged(algebra: Arc<Algebra>, stage: u64) -> Result<Self> {
        Self::frechet_with(algebra, Some(stage))
    }

    fn frechet_with(algebra: Arc<Algebra>, stage: Option<u64>) -> Result<Self> {
        if algebra.universe().is_finite() {
            return Err(Error::FiniteUniverse);
        }
        Ok(Ultrafilter {
            algebra,
            kind: UltrafilterKind::Frechet { stage },
        })
    }

    /// `𝒰_σ`, decided by the single-profile test of
    /// [`Swf::almost_decisive`].
    pub fn decisive(swf: Arc<Swf>) -> Self {
        Ultrafilter {
            algebra: swf.society().algebra_arc(),
            kind: UltrafilterKind::Decisive(swf),
        }
    }

    pub fn custom(algebra: Arc<Algebra>, member: Arc<MembershipFn>) -> Self {
        Ultrafilter {
            algebra,
            kind: UltrafilterKind::Custom(member),
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> Arc<Algebra> {
        self.algebra.clone()
    }

    pub fn kind(&self) -> &UltrafilterKind {
        &self.kind
    }

    pub fn member(&self, i: &Index) -> Result<Decision> {
        match &self.kind {
            UltrafilterKind::Principal(d) => {
                Ok(Decision::from_bool(self.algebra.set_at(i).contains(*d)))
            }
            UltrafilterKind::Frechet { stage } => {
                let stage = stage.unwrap_or(self.algebra.test_bound());
                Ok(match self.algebra.normal_form_at(i, stage) {
                    NormalForm::Cofinite(_) => Decision::In,
                    NormalForm::Finite(_) => Decision::Out,
                    NormalForm::Unknown(t) => Decision::Unknown(t),
                })
            }
            UltrafilterKind::Decisive(swf) => match swf.almost_decisive(i) {
                Ok(b) => Ok(Decision::from_bool(b)),
                Err(Error::Undecided(t)) => Ok(Decision::Unknown(t)),
                Err(e) => Err(e),
            },
            UltrafilterKind::Custom(f) => Ok(f(&self.algebra, i)),
        }
    }

    /// The point `d` with `{d} ∈ 𝒰`, searched among all voters of a finite
    /// universe or below the test bound otherwise.
    pub fn principal_point(&self) -> Result<Option<Voter>> {
        let top = self
            .algebra
            .universe()
            .size()
            .unwrap_or(self.algebra.test_bound());
        for v in 0..top {
            let atom = self.algebra.atom_index(v)?;
            if self.member(&atom)?.is_in() {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }
}

/// The conditions checked by [`check_ultrafilter_axioms`] and
/// [`uf_basic_properties`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Clause {
    NonEmptiness,
    Properness,
    UpwardsClosure,
    Intersections,
    Maximality,
    ComplementExclusion,
    UnionSplitting,
    FiniteUnionSplitting,
    PrincipalEquivalence,
}

impl Clause {
    pub fn name(self) -> &'static str {
        match self {
            Clause::NonEmptiness => "non_emptiness",
            Clause::Properness => "properness",
            Clause::UpwardsClosure => "upwards_closure",
            Clause::Intersections => "intersections",
            Clause::Maximality => "maximality",
            Clause::ComplementExclusion => "complement_exclusion",
            Clause::UnionSplitting => "union_splitting",
            Clause::FiniteUnionSplitting => "finite_union_splitting",
            Clause::PrincipalEquivalence => "principal_equivalence",
        }
    }
}

/// Outcome of one clause over a probe set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseResult {
    pub clause: Clause,
    /// Instances whose premises held and whose memberships were decided.
    pub instances: usize,
    /// Instances skipped because a membership was unknown.
    pub undecided: usize,
    /// The first failing index tuple.
    pub witness: Option<Vec<Index>>,
}

impl ClauseResult {
    fn new(clause: Clause) -> Self {
        ClauseResult {
            clause,
            instances: 0,
            undecided: 0,
            witness: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    fn fail(&mut self, tuple: &[&Index]) {
        if self.witness.is_none() {
            self.witness = Some(tuple.iter().map(|i| (*i).clone()).collect());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub clauses: Vec<ClauseResult>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(ClauseResult::passed)
    }

    pub fn clause(&self, c: Clause) -> Option<&ClauseResult> {
        self.clauses.iter().find(|r| r.clause == c)
    }

    pub fn first_failure(&self) -> Option<&ClauseResult> {
        self.clauses.iter().find(|r| !r.passed())
    }
}

/// Memoised membership over a probe run.
struct Oracle<'a> {
    u: &'a Ultrafilter,
    cache: alloc::collections::BTreeMap<Index, Decision>,
}

impl<'a> Oracle<'a> {
    fn new(u: &'a Ultrafilter) -> Self {
        Oracle {
            u,
            cache: Default::default(),
        }
    }

    fn get(&mut self, i: &Index) -> Result<Decision> {
        if let Some(d) = self.cache.get(i) {
            return Ok(*d);
        }
        let d = self.u.member(i)?;
        self.cache.insert(i.clone(), d);
        Ok(d)
    }

    /// All decisions, or `None` if one is unknown.
    fn all(&mut self, is: &[&Index]) -> Result<Option<Vec<bool>>> {
        let mut out = Vec::with_capacity(is.len());
        for i in is {
            match self.get(i)? {
                Decision::Unknown(_) => return Ok(None),
                d => out.push(d.is_in()),
            }
        }
        Ok(Some(out))
    }
}

/// Checks the five ultrafilter clauses instance-wise on each probe triple
/// `(i, j, k)`. Besides the triple itself, every triple also contributes the
/// derived instances `A_i ∩ A_j` and `A_i^c` built by index operations.
pub fn check_ultrafilter_axioms(
    u: &Ultrafilter,
    probes: &[(Index, Index, Index)],
) -> Result<AxiomReport> {
    let a = u.algebra();
    let mut orc = Oracle::new(u);
    let mut ne = ClauseResult::new(Clause::NonEmptiness);
    let mut pr = ClauseResult::new(Clause::Properness);
    let mut up = ClauseResult::new(Clause::UpwardsClosure);
    let mut it = ClauseResult::new(Clause::Intersections);
    let mut mx = ClauseResult::new(Clause::Maximality);

    for (i, j, k) in probes {
        let meet = a.intersect_index(i, j);
        let comp = a.complement_index(i);
        for x in [i, j, k, &meet, &comp] {
            if a.is_universe(x).holds() {
                match orc.all(&[x])? {
                    None => ne.undecided += 1,
                    Some(m) => {
                        ne.instances += 1;
                        if !m[0] {
                            ne.fail(&[x]);
                        }
                    }
                }
            }
            if a.is_empty(x).holds() {
                match orc.all(&[x])? {
                    None => pr.undecided += 1,
                    Some(m) => {
                        pr.instances += 1;
                        if m[0] {
                            pr.fail(&[x]);
                        }
                    }
                }
            }
        }
        for (x, y) in [(i, j), (j, i), (&meet, i), (i, k)] {
            if a.subset(x, y).holds() {
                match orc.all(&[x, y])? {
                    None => up.undecided += 1,
                    Some(m) => {
                        up.instances += 1;
                        if m[0] && !m[1] {
                            up.fail(&[x, y]);
                        }
                    }
                }
            }
        }
        for target in [k, &meet] {
            if target == &meet || a.equal(target, &meet).holds() {
                match orc.all(&[i, j, target])? {
                    None => it.undecided += 1,
                    Some(m) => {
                        it.instances += 1;
                        if m[0] && m[1] && !m[2] {
                            it.fail(&[i, j, target]);
                        }
                    }
                }
            }
        }
        for target in [j, &comp] {
            if target == &comp || a.equal(target, &comp).holds() {
                match orc.all(&[i, target])? {
                    None => mx.undecided += 1,
                    Some(m) => {
                        mx.instances += 1;
                        if !m[0] && !m[1] {
                            mx.fail(&[i, target]);
                        }
                    }
                }
            }
        }
    }
    Ok(AxiomReport {
        clauses: alloc::vec![ne, pr, up, it, mx],
    })
}

/// Index of `A_{i₀} ∪ … ∪ A_{iₖ}`.
fn union_of(indexes: &[&Index]) -> Index {
    let mut b = FormationBuilder::new();
    let slots: Vec<_> = indexes
        .iter()
        .map(|i| b.splice(&FormationSeq::decode_or_empty(i)))
        .collect();
    let root = b.union_all(&slots);
    b.finish(root).code()
}

/// Checks the derived properties of ultrafilters on the probe triples:
/// complement exclusion, union splitting, splitting of the three-term union
/// `A_i ∪ A_j ∪ A_k`, and the equivalence of principality, having a finite
/// member, and being generated by a point.
///
/// The principality conditions are probed over the atoms of every voter (of
/// a finite universe, or below the test bound) and over the probe indexes.
pub fn uf_basic_properties(
    u: &Ultrafilter,
    probes: &[(Index, Index, Index)],
) -> Result<AxiomReport> {
    let a = u.algebra();
    let mut orc = Oracle::new(u);
    let mut ce = ClauseResult::new(Clause::ComplementExclusion);
    let mut us = ClauseResult::new(Clause::UnionSplitting);
    let mut fu = ClauseResult::new(Clause::FiniteUnionSplitting);
    let mut pe = ClauseResult::new(Clause::PrincipalEquivalence);

    for (i, j, k) in probes {
        let comp = a.complement_index(i);
        for target in [j, &comp] {
            if target == &comp || a.equal(target, &comp).holds() {
                match orc.all(&[i, target])? {
                    None => ce.undecided += 1,
                    Some(m) => {
                        ce.instances += 1;
                        if m[0] && m[1] {
                            ce.fail(&[i, target]);
                        }
                    }
                }
            }
        }
        let join = a.union_index(i, j);
        for target in [k, &join] {
            if target == &join || a.equal(target, &join).holds() {
                match orc.all(&[i, j, target])? {
                    None => us.undecided += 1,
                    Some(m) => {
                        us.instances += 1;
                        if m[2] && !m[0] && !m[1] {
                            us.fail(&[i, j, target]);
                        }
                    }
                }
            }
        }
        let all3 = union_of(&[i, j, k]);
        match orc.all(&[i, j, k, &all3])? {
            None => fu.undecided += 1,
            Some(m) => {
                fu.instances += 1;
                if m[3] && !(m[0] || m[1] || m[2]) {
                    fu.fail(&[i, j, k, &all3]);
                }
            }
        }
    }

    // (a) some atom is a member, (b) some finite set is a member, (c) some
    // point generates the membership of every probe.
    let top = a.universe().size().unwrap_or(a.test_bound());
    let mut atom_member = None;
    let mut candidates = Vec::new();
    let mut undecided = false;
    for v in 0..top {
        let atom = a.atom_index(v)?;
        match orc.get(&atom)? {
            Decision::In => {
                atom_member.get_or_insert(atom);
                candidates.push(v);
            }
            Decision::Out => {}
            Decision::Unknown(_) => undecided = true,
        }
    }
    let mut probe_indexes: Vec<&Index> = Vec::new();
    for (i, j, k) in probes {
        probe_indexes.extend([i, j, k]);
    }
    let mut finite_member = atom_member.clone();
    for &i in &probe_indexes {
        if finite_member.is_some() {
            break;
        }
        if a.normal_form(i).is_finite() && orc.get(i)?.is_in() {
            finite_member = Some(i.clone());
        }
    }
    let mut generated_by = None;
    'cand: for &d in &candidates {
        for &i in &probe_indexes {
            match orc.get(i)? {
                Decision::Unknown(_) => {
                    undecided = true;
                    continue 'cand;
                }
                m => {
                    if m.is_in() != a.set_at(i).contains(d) {
                        continue 'cand;
                    }
                }
            }
        }
        generated_by = Some(d);
        break;
    }
    if undecided {
        pe.undecided += 1;
    } else {
        pe.instances += 1;
        let (pa, pb, pc) = (
            atom_member.is_some(),
            finite_member.is_some(),
            generated_by.is_some(),
        );
        if !(pa == pb && pb == pc) {
            let w = finite_member.or(atom_member).unwrap_or_else(Index::zero);
            pe.fail(&[&w]);
        }
    }
    Ok(AxiomReport {
        clauses: alloc::vec![ce, us, fu, pe],
    })
}

/// Every ordered triple over `indexes`.
pub fn all_triples(indexes: &[Index]) -> Vec<(Index, Index, Index)> {
    let mut out = Vec::with_capacity(indexes.len().pow(3));
    for i in indexes {
        for j in indexes {
            for k in indexes {
                out.push((i.clone(), j.clone(), k.clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn powerset3() -> Arc<Algebra> {
        Arc::new(Algebra::powerset(3).unwrap())
    }

    fn subset_indexes(a: &Algebra) -> Vec<Index> {
        a.all_subsets().unwrap().into_iter().map(|(_, i)| i).collect()
    }

    #[test]
    fn principal_membership() {
        let a = powerset3();
        let u = Ultrafilter::principal(a.clone(), 1).unwrap();
        assert_eq!(u.member(&a.atom_index(1).unwrap()), Ok(Decision::In));
        assert_eq!(u.member(&a.empty_index()), Ok(Decision::Out));
        let members = subset_indexes(&a)
            .iter()
            .filter(|i| u.member(i).unwrap().is_in())
            .count();
        // subsets of {0,1,2} containing 1
        let expect = (0u64..8).filter(|m| m & 0b010 != 0).count();
        assert_eq!(members, expect);
        assert_eq!(
            Ultrafilter::principal(a, 3).unwrap_err(),
            Error::VoterOutsideUniverse(3)
        );
    }

    #[test]
    fn principal_passes_exhaustively() {
        let a = powerset3();
        let triples = all_triples(&subset_indexes(&a));
        for d in 0..3 {
            let u = Ultrafilter::principal(a.clone(), d).unwrap();
            let r = check_ultrafilter_axioms(&u, &triples).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(r.clauses.iter().all(|c| c.instances > 0));
            let b = uf_basic_properties(&u, &triples).unwrap();
            assert!(b.passed(), "{b:?}");
            assert_eq!(u.principal_point(), Ok(Some(d)));
        }
    }

    #[test]
    fn union_splitting_witness_contains_point() {
        let a = powerset3();
        let d = 2;
        let u = Ultrafilter::principal(a.clone(), d).unwrap();
        for (mi, i) in a.all_subsets().unwrap() {
            for (mj, j) in a.all_subsets().unwrap() {
                let k = a.union_index(&i, &j);
                if u.member(&k).unwrap().is_in() {
                    let wit = if u.member(&i).unwrap().is_in() { mi } else { mj };
                    assert!(wit & (1 << d) != 0);
                }
            }
        }
    }

    #[test]
    fn corrupted_membership_is_caught() {
        let a = powerset3();
        // principal at 0, except that {0,1} is flipped out
        let flipped = a.subset_index(0b011).unwrap();
        let f = move |alg: &Algebra, i: &Index| {
            let base = alg.set_at(i).contains(0);
            let is_flipped = alg.equal(i, &flipped).holds();
            Decision::from_bool(base && !is_flipped)
        };
        let u = Ultrafilter::custom(a.clone(), Arc::new(f));
        let r = check_ultrafilter_axioms(&u, &all_triples(&subset_indexes(&a))).unwrap();
        assert!(!r.passed());
        let bad = r.first_failure().unwrap();
        assert!(matches!(
            bad.clause,
            Clause::UpwardsClosure | Clause::Maximality | Clause::Intersections
        ));
        assert!(!bad.witness.as_ref().unwrap().is_empty());
    }

    #[test]
    fn frechet_membership() {
        let a = Arc::new(Algebra::finite_cofinite());
        let u = Ultrafilter::frechet(a.clone()).unwrap();
        let not3 = a.complement_index(&a.atom_index(3).unwrap());
        assert_eq!(u.member(&not3), Ok(Decision::In));
        let first10: Vec<u64> = (0..10).collect();
        assert_eq!(
            u.member(&a.finite_set_index(&first10).unwrap()),
            Ok(Decision::Out)
        );
        assert_eq!(
            Ultrafilter::frechet(powerset3()).unwrap_err(),
            Error::FiniteUniverse
        );
    }

    #[test]
    fn frechet_differs_from_every_principal() {
        let a = Arc::new(Algebra::finite_cofinite());
        let u = Ultrafilter::frechet(a.clone()).unwrap();
        for d in 0..50 {
            let p = Ultrafilter::principal(a.clone(), d).unwrap();
            let atom = a.atom_index(d).unwrap();
            assert_ne!(u.member(&atom), p.member(&atom));
        }
        assert_eq!(u.principal_point(), Ok(None));
    }

    #[test]
    fn frechet_has_no_finite_member() {
        let a = Arc::new(Algebra::finite_cofinite().with_test_bound(40));
        let u = Ultrafilter::frechet(a.clone()).unwrap();
        let mut probes = Vec::new();
        for n in 0..20u64 {
            let f = a.finite_set_index(&[n, n + 3, 2 * n]).unwrap();
            let c = a.complement_index(&a.atom_index(n).unwrap());
            probes.push((f, c, a.universe_index()));
        }
        assert!(check_ultrafilter_axioms(&u, &probes).unwrap().passed());
        let b = uf_basic_properties(&u, &probes).unwrap();
        assert!(b.passed(), "{b:?}");
    }
}
