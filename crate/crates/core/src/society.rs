//! Countable societies `(V, X, 𝒜, ℱ)` where `ℱ` is the canonical family of
//! quasi-partition profiles.
//!
//! A profile index codes a pair `(p, s)`: `p` lists every weak order of `W`
//! once (by code) and `s` lists between 1 and `|W| - 1` algebra indexes,
//! the cells. A voter lying in exactly one cell `s(j)` holds `p(j)`; every
//! other voter holds `p(|s|)`. Indexes that do not decode this way denote the
//! constant profile at the first order of `W`.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::order::{alt_set, enumerate_weak_orders, Alt, OrderPattern, WeakOrder};
use crate::pairing::{decode_seq, encode_seq, pair, unpair, Index};
use crate::setalg::{Algebra, FormationBuilder, FormationSeq, Slot, Universe, Verdict};

pub type Voter = u64;

/// Largest voter set accepted by [`Society::finite`].
pub const MAX_FINITE_VOTERS: u32 = 4;

/// Which individual orders a table profile may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    /// All weak orders.
    Weak,
    /// Strict (linear) orders only.
    Linear,
}

/// A decoded quasi-partition profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QpProfile {
    /// Positions into `W`; a permutation of `0..|W|`.
    pub pattern: Vec<usize>,
    pub cells: Vec<Index>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Profile {
    Qp(QpProfile),
    /// One order position per voter, finite societies only.
    Table(Vec<usize>),
    /// Every voter holds the first order of `W`.
    Default,
}

/// Whether two profiles agree on a set of alternatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Agreement {
    pub verdict: Verdict,
    /// A voter and pair on which the profiles differ.
    pub witness: Option<(Voter, Alt, Alt)>,
}

#[derive(Clone, Debug)]
pub struct Society {
    algebra: Arc<Algebra>,
    alts: Vec<Alt>,
    orders: Vec<WeakOrder>,
}

impl Society {
    /// The society over `algebra` whose profiles are all quasi-partition
    /// profiles.
    pub fn canonical(algebra: Arc<Algebra>, alts: &[Alt]) -> Result<Self> {
        let alts = alt_set(alts)?;
        if alts.len() < 3 {
            return Err(Error::TooFewAlternatives);
        }
        let orders = enumerate_weak_orders(&alts)?;
        if !algebra.is_atomic() {
            return Err(Error::NotAtomic);
        }
        Ok(Society {
            algebra,
            alts,
            orders,
        })
    }

    /// The canonical society over the power set of `{0..voters}`, exposing
    /// the full table `W^V`.
    pub fn finite(voters: u32, alts: &[Alt]) -> Result<Self> {
        if voters == 0 || voters > MAX_FINITE_VOTERS || alts.len() != 3 {
            return Err(Error::FiniteSocietyGuard);
        }
        Self::canonical(Arc::new(Algebra::powerset(voters)?), alts)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> Arc<Algebra> {
        self.algebra.clone()
    }

    pub fn alts(&self) -> &[Alt] {
        &self.alts
    }

    /// `W`, ascending by code.
    pub fn orders(&self) -> &[WeakOrder] {
        &self.orders
    }

    pub fn order(&self, pos: usize) -> &WeakOrder {
        &self.orders[pos]
    }

    pub fn position_of_code(&self, code: u128) -> Option<usize> {
        self.orders.binary_search_by_key(&code, WeakOrder::code).ok()
    }

    pub fn position(&self, r: &WeakOrder) -> Option<usize> {
        self.position_of_code(r.code())
    }

    pub fn position_of_pattern(&self, p: &OrderPattern) -> Result<usize> {
        let r = p.make_order(&self.alts)?;
        Ok(self.position(&r).expect("W holds every weak order"))
    }

    pub fn universe(&self) -> Universe {
        self.algebra.universe()
    }

    /// `|V|` for finite societies.
    pub fn voters(&self) -> Option<u64> {
        self.universe().size()
    }

    fn check_alt(&self, x: Alt) -> Result<()> {
        self.alts
            .binary_search(&x)
            .map(|_| ())
            .map_err(|_| Error::UnknownAlternative(x))
    }

    fn check_voter(&self, v: Voter) -> Result<()> {
        if self.universe().contains(v) {
            Ok(())
        } else {
            Err(Error::VoterOutsideUniverse(v))
        }
    }

    /// `e(p, s)` for a pattern given as positions into `W`.
    pub fn embed(&self, pattern: &[usize], cells: &[Index]) -> Result<Index> {
        self.validate_qp(pattern, cells.len())?;
        let codes: Vec<BigUint> = pattern
            .iter()
            .map(|&p| BigUint::from(self.orders[p].code()))
            .collect();
        let cells: Vec<&BigUint> = cells.iter().map(Index::as_biguint).collect();
        Ok(Index::new(pair(&encode_seq(&codes), &encode_seq(cells))))
    }

    /// `e(p, s)` where `p` starts with `leading` and continues with the rest
    /// of `W` in ascending order.
    pub fn embed_leading(&self, leading: &[usize], cells: &[Index]) -> Result<Index> {
        let seen: BTreeSet<usize> = leading.iter().copied().collect();
        if seen.len() != leading.len() || leading.iter().any(|&p| p >= self.orders.len()) {
            return Err(Error::InvalidQuasiPartition("pattern is not a permutation of W"));
        }
        let pattern: Vec<usize> = leading
            .iter()
            .copied()
            .chain((0..self.orders.len()).filter(|p| !seen.contains(p)))
            .collect();
        self.embed(&pattern, cells)
    }

    /// [`Society::embed_leading`] with the leading orders written as
    /// patterns.
    pub fn embed_patterns(&self, leading: &[OrderPattern], cells: &[Index]) -> Result<Index> {
        let pos = leading
            .iter()
            .map(|p| self.position_of_pattern(p))
            .collect::<Result<Vec<_>>>()?;
        self.embed_leading(&pos, cells)
    }

    fn validate_qp(&self, pattern: &[usize], cells: usize) -> Result<()> {
        let w = self.orders.len();
        let distinct: BTreeSet<usize> = pattern.iter().copied().collect();
        if pattern.len() != w || distinct.len() != w || pattern.iter().any(|&p| p >= w) {
            return Err(Error::InvalidQuasiPartition("pattern is not a permutation of W"));
        }
        if cells == 0 || cells > w - 1 {
            return Err(Error::InvalidQuasiPartition("need 1 <= |s| <= |W| - 1 cells"));
        }
        Ok(())
    }

    /// Decodes a profile index; invalid codes give [`Profile::Default`].
    pub fn profile(&self, n: &Index) -> Profile {
        self.decode_qp(n).map_or(Profile::Default, Profile::Qp)
    }

    fn decode_qp(&self, n: &Index) -> Option<QpProfile> {
        let (p, s) = unpair(n.as_biguint())?;
        let codes = decode_seq(&p)?;
        let cells: Vec<Index> = decode_seq(&s)?.into_iter().map(Index::new).collect();
        let pattern = codes
            .iter()
            .map(|c| self.position_of_code(c.to_u128()?))
            .collect::<Option<Vec<usize>>>()?;
        self.validate_qp(&pattern, cells.len()).ok()?;
        Some(QpProfile { pattern, cells })
    }

    /// The order position `f(v)`.
    pub fn eval_profile(&self, f: &Profile, v: Voter) -> usize {
        match f {
            Profile::Default => 0,
            Profile::Table(t) => t[v as usize],
            Profile::Qp(q) => {
                let mut hit = None;
                for (j, c) in q.cells.iter().enumerate() {
                    if self.algebra.set_at(c).contains(v) {
                        if hit.is_some() {
                            return q.pattern[q.cells.len()];
                        }
                        hit = Some(j);
                    }
                }
                q.pattern[hit.unwrap_or(q.cells.len())]
            }
        }
    }

    /// `f_n(v)` as a position into `W`.
    pub fn eval(&self, n: &Index, v: Voter) -> Result<usize> {
        self.check_voter(v)?;
        Ok(self.eval_profile(&self.profile(n), v))
    }

    pub fn eval_order(&self, n: &Index, v: Voter) -> Result<&WeakOrder> {
        Ok(&self.orders[self.eval(n, v)?])
    }

    /// An index of `{v : x ≲_{f_n(v)} y}`: the union of the exclusive cell
    /// regions whose order ranks `x ≲ y`, plus the region outside every
    /// exclusive cell when the default order does.
    pub fn mu(&self, n: &Index, x: Alt, y: Alt) -> Result<Index> {
        self.check_alt(x)?;
        self.check_alt(y)?;
        let q = match self.profile(n) {
            Profile::Qp(q) => q,
            _ => {
                return Ok(if self.orders[0].le(x, y) {
                    self.algebra.universe_index()
                } else {
                    self.algebra.empty_index()
                })
            }
        };
        let mut b = FormationBuilder::new();
        let cells: Vec<Slot> = q
            .cells
            .iter()
            .map(|c| b.splice(&FormationSeq::decode_or_empty(c)))
            .collect();
        let comps: Vec<Slot> = cells.iter().map(|&c| b.complement(c)).collect();
        let regions: Vec<Slot> = (0..cells.len())
            .map(|j| {
                let mut parts = alloc::vec![cells[j]];
                parts.extend(comps.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &c)| c));
                b.intersect_all(&parts)
            })
            .collect();
        let mut chosen: Vec<Slot> = regions
            .iter()
            .zip(&q.pattern)
            .filter(|&(_, &p)| self.orders[p].le(x, y))
            .map(|(&r, _)| r)
            .collect();
        if self.orders[q.pattern[cells.len()]].le(x, y) {
            let covered = b.union_all(&regions);
            chosen.push(b.complement(covered));
        }
        let root = b.union_all(&chosen);
        Ok(b.finish(root).code())
    }

    /// An index of `{v : x <_{f_n(v)} y}`.
    pub fn mu_strict(&self, n: &Index, x: Alt, y: Alt) -> Result<Index> {
        Ok(self.algebra.complement_index(&self.mu(n, y, x)?))
    }

    /// An index of `{v : x ∼_{f_n(v)} y}`.
    pub fn mu_indiff(&self, n: &Index, x: Alt, y: Alt) -> Result<Index> {
        Ok(self
            .algebra
            .intersect_index(&self.mu(n, x, y)?, &self.mu(n, y, x)?))
    }

    /// Whether `f_n` and `f_m` agree on every pair drawn from `ys`; exact
    /// when the measurability sets have exact normal forms.
    pub fn profiles_agree_on(&self, n: &Index, m: &Index, ys: &[Alt]) -> Result<Agreement> {
        let mut exact = true;
        for &x in ys {
            for &y in ys {
                if x == y {
                    continue;
                }
                let verdict = self.algebra.equal(&self.mu(n, x, y)?, &self.mu(m, x, y)?);
                if !verdict.holds() {
                    return Ok(Agreement {
                        verdict,
                        witness: self.disagreement(n, m, x, y),
                    });
                }
                exact &= verdict.is_exact();
            }
        }
        let verdict = if exact {
            Verdict::Exact(true)
        } else {
            Verdict::UpToBound {
                holds: true,
                bound: self.algebra.test_bound(),
            }
        };
        Ok(Agreement {
            verdict,
            witness: None,
        })
    }

    fn disagreement(&self, n: &Index, m: &Index, x: Alt, y: Alt) -> Option<(Voter, Alt, Alt)> {
        let (fnp, fmp) = (self.profile(n), self.profile(m));
        let top = self.voters().unwrap_or(self.algebra.test_bound());
        (0..top)
            .find(|&v| {
                let a = &self.orders[self.eval_profile(&fnp, v)];
                let b = &self.orders[self.eval_profile(&fmp, v)];
                a.le(x, y) != b.le(x, y)
            })
            .map(|v| (v, x, y))
    }

    fn finite_voters(&self) -> Result<usize> {
        self.voters().map(|n| n as usize).ok_or(Error::InfiniteSociety)
    }

    /// `|W|^|V|`.
    pub fn profile_count(&self) -> Result<usize> {
        Ok(self.orders.len().pow(self.finite_voters()? as u32))
    }

    /// Mixed-radix number of a table profile, voter 0 least significant.
    pub fn profile_number(&self, table: &[usize]) -> usize {
        let w = self.orders.len();
        table.iter().rev().fold(0, |acc, &p| acc * w + p)
    }

    pub fn table_from_number(&self, mut number: usize) -> Result<Vec<usize>> {
        let w = self.orders.len();
        let n = self.finite_voters()?;
        Ok((0..n)
            .map(|_| {
                let p = number % w;
                number /= w;
                p
            })
            .collect())
    }

    pub fn in_domain(&self, table: &[usize], domain: Domain) -> bool {
        domain == Domain::Weak || table.iter().all(|&p| self.orders[p].is_linear())
    }

    /// Every table profile in `domain`, ascending by profile number.
    pub fn table_profiles(&self, domain: Domain) -> Result<Vec<Vec<usize>>> {
        let count = self.profile_count()?;
        (0..count)
            .map(|k| self.table_from_number(k))
            .filter(|t| t.as_ref().map_or(true, |t| self.in_domain(t, domain)))
            .collect()
    }

    /// A quasi-partition profile index realising `table`: one cell per
    /// order in use (the voters holding it), those orders first in `p`.
    pub fn realize(&self, table: &[usize]) -> Result<Index> {
        let n = self.finite_voters()?;
        if table.len() != n || table.iter().any(|&p| p >= self.orders.len()) {
            return Err(Error::InvalidQuasiPartition("table does not match V and W"));
        }
        let used: BTreeSet<usize> = table.iter().copied().collect();
        let leading: Vec<usize> = used.iter().copied().collect();
        let cells = leading
            .iter()
            .map(|&o| {
                let mask = table
                    .iter()
                    .enumerate()
                    .filter(|&(_, &p)| p == o)
                    .fold(0u64, |m, (v, _)| m | 1 << v);
                self.algebra.subset_index(mask).ok_or(Error::NotAtomic)
            })
            .collect::<Result<Vec<_>>>()?;
        self.embed_leading(&leading, &cells)
    }

    /// The table of `f_n`, for finite societies.
    pub fn table_of(&self, n: &Index) -> Result<Vec<usize>> {
        let voters = self.finite_voters()?;
        let f = self.profile(n);
        Ok((0..voters as u64).map(|v| self.eval_profile(&f, v)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::first_alts;

    fn pat(s: &str) -> OrderPattern {
        s.parse().unwrap()
    }

    fn fc_society() -> Society {
        Society::canonical(Arc::new(Algebra::finite_cofinite()), &first_alts(3)).unwrap()
    }

    const X: Alt = Alt(0);
    const Y: Alt = Alt(1);
    const Z: Alt = Alt(2);

    #[test]
    fn guards() {
        let p = Arc::new(Algebra::powerset(3).unwrap());
        assert_eq!(
            Society::canonical(p, &first_alts(2)).unwrap_err(),
            Error::TooFewAlternatives
        );
        assert_eq!(Society::finite(5, &first_alts(3)).unwrap_err(), Error::FiniteSocietyGuard);
        assert_eq!(Society::finite(2, &first_alts(4)).unwrap_err(), Error::FiniteSocietyGuard);
        let fc = fc_society();
        assert_eq!(fc.profile_count().unwrap_err(), Error::InfiniteSociety);
    }

    #[test]
    fn dictator_test_profile() {
        let s = fc_society();
        let d = 4;
        let n = s
            .embed_patterns(&[pat("0 < 1 ~ *"), pat("1 < 0 ~ *")], &[s.algebra().atom_index(d).unwrap()])
            .unwrap();
        let p0 = s.position_of_pattern(&pat("0 < 1 ~ *")).unwrap();
        let p1 = s.position_of_pattern(&pat("1 < 0 ~ *")).unwrap();
        for v in 0..30 {
            assert_eq!(s.eval(&n, v).unwrap(), if v == d { p0 } else { p1 });
        }
        let strict = s.mu_strict(&n, X, Y).unwrap();
        assert_eq!(s.algebra().set_at(&strict).members_below(50), vec![d]);
    }

    #[test]
    fn default_profile_and_all_indifferent() {
        let s = fc_society();
        for junk in [0u64, 1, 77] {
            assert_eq!(s.profile(&Index::from(junk)), Profile::Default);
            assert_eq!(s.eval(&Index::from(junk), 9).unwrap(), 0);
        }
        assert_eq!(s.order(0).to_string(), "0 < 1 < 2");
        let flat = s.position_of_pattern(&pat("0 ~ 1 ~ 2")).unwrap();
        let n = s.embed_leading(&[flat], &[s.algebra().universe_index()]).unwrap();
        for x in first_alts(3) {
            for y in first_alts(3) {
                let m = s.mu(&n, x, y).unwrap();
                assert_eq!(s.algebra().is_universe(&m), Verdict::Exact(true));
            }
        }
    }

    #[test]
    fn unanimous_strict_profile() {
        let s = fc_society();
        let chain = s.position_of_pattern(&pat("0 < 1 < 2")).unwrap();
        let n = s.embed_leading(&[chain], &[s.algebra().universe_index()]).unwrap();
        assert_eq!(s.algebra().is_universe(&s.mu_strict(&n, X, Y).unwrap()), Verdict::Exact(true));
        assert_eq!(s.algebra().is_empty(&s.mu_indiff(&n, X, Y).unwrap()), Verdict::Exact(true));
    }

    #[test]
    fn three_cell_partition_upwards_pattern() {
        // V0 = {0..5}, V1 = {5..10}, V2 = the rest
        let s = fc_society();
        let a = s.algebra();
        let v0 = a.finite_set_index(&[0, 1, 2, 3, 4]).unwrap();
        let v1 = a.finite_set_index(&[5, 6, 7, 8, 9]).unwrap();
        let v2 = a.complement_index(&a.union_index(&v0, &v1));
        let n = s
            .embed_patterns(
                &[pat("0 < 1 < 2 ~ *"), pat("1 < 0 < 2 ~ *"), pat("1 < 2 < 0 ~ *")],
                &[v0, v1, v2],
            )
            .unwrap();
        let orders: Vec<&WeakOrder> = (0..=20).map(|v| s.eval_order(&n, v).unwrap()).collect();
        for (x, y) in [(X, Y), (Y, X), (X, Z), (Z, X), (Y, Z), (Z, Y)] {
            let expect: Vec<u64> = (0..=20).filter(|&v| orders[v as usize].le(x, y)).collect();
            let got = a.set_at(&s.mu(&n, x, y).unwrap()).members_below(21);
            assert_eq!(got, expect, "pair {x},{y}");
        }
        // x ≲ z exactly on V0 ∪ V1
        assert_eq!(a.set_at(&s.mu(&n, X, Z).unwrap()).members_below(21), (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn overlapping_cells_fall_to_default() {
        let s = fc_society();
        let a = s.algebra();
        let c0 = a.finite_set_index(&[1, 2]).unwrap();
        let c1 = a.finite_set_index(&[2, 3]).unwrap();
        let n = s.embed_leading(&[3, 5, 7], &[c0, c1]).unwrap();
        assert_eq!(s.eval(&n, 1).unwrap(), 3);
        assert_eq!(s.eval(&n, 3).unwrap(), 5);
        assert_eq!(s.eval(&n, 2).unwrap(), 7);
        assert_eq!(s.eval(&n, 0).unwrap(), 7);
    }

    #[test]
    fn embed_validation() {
        let s = fc_society();
        let v = s.algebra().universe_index();
        assert!(s.embed(&[0, 1], std::slice::from_ref(&v)).is_err());
        assert!(s.embed_leading(&[0, 0], std::slice::from_ref(&v)).is_err());
        let too_many = alloc::vec![v.clone(); 13];
        assert!(s.embed_leading(&[], &too_many).is_err());
        assert!(s.embed_leading(&[], &[]).is_err());
        let n = s.embed_leading(&[4], &[v]).unwrap();
        match s.profile(&n) {
            Profile::Qp(q) => assert_eq!(q.pattern[0], 4),
            p => panic!("{p:?}"),
        }
    }

    #[test]
    fn finite_tables_and_bridge() {
        let s = Society::finite(2, &first_alts(3)).unwrap();
        let all = s.table_profiles(Domain::Weak).unwrap();
        assert_eq!(all.len(), 13 * 13);
        let distinct: BTreeSet<Vec<usize>> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), all.len());
        assert_eq!(s.table_profiles(Domain::Linear).unwrap().len(), 36);
        for t in &all {
            let n = s.realize(t).unwrap();
            assert_eq!(&s.table_of(&n).unwrap(), t);
            assert_eq!(s.table_from_number(s.profile_number(t)).unwrap(), *t);
        }
        let xyz = s.position_of_pattern(&pat("0 < 1 < 2")).unwrap();
        let yxz = s.position_of_pattern(&pat("1 < 0 < 2")).unwrap();
        let n = s.realize(&[xyz, yxz]).unwrap();
        match s.profile(&n) {
            Profile::Qp(q) => {
                let atoms: Vec<Index> = (0..2).map(|v| s.algebra().atom_index(v).unwrap()).collect();
                let mut cells = q.cells.clone();
                cells.sort();
                let mut want = atoms;
                want.sort();
                assert_eq!(cells, want);
            }
            p => panic!("{p:?}"),
        }
        assert_eq!(s.eval(&n, 0).unwrap(), xyz);
        assert_eq!(s.eval(&n, 1).unwrap(), yxz);
    }

    #[test]
    fn agreement() {
        let s = Society::finite(3, &first_alts(3)).unwrap();
        let xyz = s.position_of_pattern(&pat("0 < 1 < 2")).unwrap();
        let xzy = s.position_of_pattern(&pat("0 < 2 < 1")).unwrap();
        let yxz = s.position_of_pattern(&pat("1 < 0 < 2")).unwrap();
        let n = s.realize(&[xyz, xyz, yxz]).unwrap();
        let m = s.realize(&[xzy, xzy, yxz]).unwrap();
        assert_eq!(
            s.profiles_agree_on(&n, &n, &first_alts(3)).unwrap().verdict,
            Verdict::Exact(true)
        );
        assert!(s.profiles_agree_on(&n, &m, &[X, Y]).unwrap().verdict.holds());
        let k = s.realize(&[xyz, yxz, yxz]).unwrap();
        let r = s.profiles_agree_on(&n, &k, &[X, Y]).unwrap();
        assert_eq!(r.verdict, Verdict::Exact(false));
        let (v, a, b) = r.witness.unwrap();
        assert_eq!(v, 1);
        assert_ne!(s.order(xyz).le(a, b), s.order(yxz).le(a, b));
    }

    #[test]
    fn measurability_exhaustive_on_two_voters() {
        let s = Society::finite(2, &first_alts(3)).unwrap();
        let a = s.algebra();
        for t in s.table_profiles(Domain::Weak).unwrap() {
            let n = s.realize(&t).unwrap();
            for x in first_alts(3) {
                for y in first_alts(3) {
                    let m = a.mask_of(&s.mu(&n, x, y).unwrap()).unwrap();
                    let lt = a.mask_of(&s.mu_strict(&n, x, y).unwrap()).unwrap();
                    let eq = a.mask_of(&s.mu_indiff(&n, x, y).unwrap()).unwrap();
                    for (v, &ti) in t.iter().enumerate() {
                        let r = s.order(ti);
                        assert_eq!(m >> v & 1 == 1, r.le(x, y));
                        assert_eq!(lt >> v & 1 == 1, r.lt(x, y));
                        assert_eq!(eq >> v & 1 == 1, r.indifferent(x, y));
                    }
                }
            }
        }
    }
}
