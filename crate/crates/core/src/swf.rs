//! Social welfare functions on a [`Society`]: axiom checks, decisive
//! coalitions, extraction of the decisive ultrafilter `𝒰_σ`, and the
//! converse construction `σ_𝒰`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::order::{Alt, OrderPattern, Relation, WeakOrder};
use crate::pairing::Index;
use crate::society::{Domain, Society, Voter};
use crate::ultra::{Decision, Ultrafilter};

/// Raw profile indexes `0..STANDARD_RAW_PROBES` in [`ProbeSet::standard`].
pub const STANDARD_RAW_PROBES: u64 = 2_000;

#[derive(Clone, Debug)]
pub enum SwfKind {
    /// `σ(n) = f_n(d)`.
    Dictator(Voter),
    /// `(x, y) ∈ σ(n)` iff `μ(n, x, y) ∈ 𝒰`.
    FromUltrafilter(Ultrafilter),
    /// Explicit outputs indexed by profile number; `None` outside the
    /// domain.
    Table {
        domain: Domain,
        outputs: Vec<Option<usize>>,
    },
}

/// A map from profile indexes to weak orders (given as positions into `W`).
#[derive(Clone, Debug)]
pub struct Swf {
    society: Arc<Society>,
    kind: SwfKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    Unanimity,
    Independence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwfWitness {
    pub profiles: Vec<Index>,
    pub pair: (Alt, Alt),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub axiom: Axiom,
    /// Instances whose premise held.
    pub instances: usize,
    /// Probes skipped because `σ` was undecided there.
    pub undecided: usize,
    pub witness: Option<SwfWitness>,
}

impl CheckReport {
    fn new(axiom: Axiom) -> Self {
        CheckReport {
            axiom,
            instances: 0,
            undecided: 0,
            witness: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Which clause of decisiveness a query asks about.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisivenessMode {
    Decisive,
    AlmostDecisive,
    /// At the given profile index.
    AlmostDecisiveAt(Index),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisivenessQuery {
    pub coalition: Index,
    /// `None` asks about every pair (for `AlmostDecisiveAt`: some pair).
    pub pair: Option<(Alt, Alt)>,
    pub mode: DecisivenessMode,
}

/// Profile indexes and index pairs used to probe infinite societies.
#[derive(Clone, Debug, Default)]
pub struct ProbeSet {
    pub profiles: Vec<Index>,
    pub pairs: Vec<(Index, Index)>,
}

impl ProbeSet {
    /// Every index below [`STANDARD_RAW_PROBES`], plus two-order
    /// quasi-partition profiles over atoms and co-atoms of small voters,
    /// each paired with a profile agreeing with it on one pair of
    /// alternatives.
    pub fn standard(soc: &Society) -> Result<Self> {
        let a = soc.algebra();
        let w = soc.orders().len();
        let alts = soc.alts();
        let top = soc.voters().unwrap_or(8).min(8);
        let mut cells = alloc::vec![a.universe_index()];
        for v in 0..top {
            let atom = a.atom_index(v)?;
            cells.push(a.complement_index(&atom));
            cells.push(atom);
        }
        let mut profiles: Vec<Index> = (0..STANDARD_RAW_PROBES).map(Index::from).collect();
        let mut pairs = Vec::new();
        let same = |i: usize, k: usize, x: Alt, y: Alt| {
            let (r, s) = (soc.order(i), soc.order(k));
            r.le(x, y) == s.le(x, y) && r.le(y, x) == s.le(y, x)
        };
        for (ci, c) in cells.iter().enumerate() {
            let (x, y) = match ci % 3 {
                0 => (alts[0], alts[1]),
                1 => (alts[0], alts[2]),
                _ => (alts[1], alts[2]),
            };
            for i in 0..w {
                let j = (i + 1 + ci % (w - 1)) % w;
                let n = soc.embed_leading(&[i, j], core::slice::from_ref(c))?;
                profiles.push(n.clone());
                let i2 = (0..w).find(|&k| k != i && same(i, k, x, y));
                let j2 = (0..w).find(|&k| k != j && same(j, k, x, y) && Some(k) != i2);
                if let (Some(i2), Some(j2)) = (i2, j2) {
                    let m = soc.embed_leading(&[i2, j2], core::slice::from_ref(c))?;
                    pairs.push((n, m));
                }
            }
        }
        Ok(ProbeSet { profiles, pairs })
    }
}

/// `σ` evaluated on every table profile of a finite society's domain.
#[derive(Clone, Debug)]
pub struct Tabulation<'a> {
    society: &'a Society,
    domain: Domain,
    profiles: Vec<Vec<usize>>,
    outputs: Vec<usize>,
}

impl<'a> Tabulation<'a> {
    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn profiles(&self) -> &[Vec<usize>] {
        &self.profiles
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    fn social(&self, k: usize) -> &WeakOrder {
        self.society.order(self.outputs[k])
    }

    fn indiv(&self, k: usize, v: usize) -> &WeakOrder {
        self.society.order(self.profiles[k][v])
    }

    fn witness(&self, ks: &[usize], pair: (Alt, Alt)) -> SwfWitness {
        SwfWitness {
            profiles: ks
                .iter()
                .map(|&k| self.society.realize(&self.profiles[k]).expect("table of this society"))
                .collect(),
            pair,
        }
    }

    fn ordered_pairs(&self) -> Vec<(Alt, Alt)> {
        let alts = self.society.alts();
        let mut out = Vec::new();
        for &x in alts {
            for &y in alts {
                if x != y {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn unanimity(&self) -> CheckReport {
        let mut r = CheckReport::new(Axiom::Unanimity);
        for k in 0..self.profiles.len() {
            for (x, y) in self.ordered_pairs() {
                let n = self.profiles[k].len();
                if (0..n).all(|v| self.indiv(k, v).lt(x, y)) {
                    r.instances += 1;
                    if !self.social(k).lt(x, y) && r.witness.is_none() {
                        r.witness = Some(self.witness(&[k], (x, y)));
                    }
                }
            }
        }
        r
    }

    /// Exhaustive independence: profiles are grouped by their restriction to
    /// each pair and every group must share one social restriction.
    pub fn independence(&self) -> CheckReport {
        let mut r = CheckReport::new(Axiom::Independence);
        let alts = self.society.alts();
        for (i, &x) in alts.iter().enumerate() {
            for &y in &alts[i + 1..] {
                let mut seen: BTreeMap<Vec<Relation>, (Relation, usize)> = BTreeMap::new();
                for k in 0..self.profiles.len() {
                    let key: Vec<Relation> = (0..self.profiles[k].len())
                        .map(|v| self.indiv(k, v).relation(x, y))
                        .collect();
                    let out = self.social(k).relation(x, y);
                    r.instances += 1;
                    match seen.get(&key) {
                        Some(&(prev, pk)) if prev != out => {
                            if r.witness.is_none() {
                                r.witness = Some(self.witness(&[pk, k], (x, y)));
                            }
                        }
                        Some(_) => {}
                        None => {
                            seen.insert(key, (out, k));
                        }
                    }
                }
            }
        }
        r
    }

    fn coalition_mask(&self, coalition: &Index) -> Result<u64> {
        self.society
            .algebra()
            .mask_of(coalition)
            .ok_or(Error::InfiniteSociety)
    }

    /// For every profile with `x < y` on the coalition (and, when `almost`,
    /// `y < x` off it), `x <_σ y`.
    pub fn decisive_for(&self, mask: u64, x: Alt, y: Alt, almost: bool) -> bool {
        (0..self.profiles.len()).all(|k| {
            let premise = (0..self.profiles[k].len()).all(|v| {
                if mask >> v & 1 == 1 {
                    self.indiv(k, v).lt(x, y)
                } else {
                    !almost || self.indiv(k, v).lt(y, x)
                }
            });
            !premise || self.social(k).lt(x, y)
        })
    }

    fn almost_at(&self, mask: u64, table: &[usize], out: usize, x: Alt, y: Alt) -> bool {
        table.iter().enumerate().all(|(v, &p)| {
            let r = self.society.order(p);
            if mask >> v & 1 == 1 {
                r.lt(x, y)
            } else {
                r.lt(y, x)
            }
        }) && self.society.order(out).lt(x, y)
    }

    /// Decides a query by brute force over the tabulated profiles.
    pub fn query(&self, q: &DecisivenessQuery, swf: &Swf) -> Result<bool> {
        let mask = self.coalition_mask(&q.coalition)?;
        let pairs = match q.pair {
            Some(p) => alloc::vec![p],
            None => self.ordered_pairs(),
        };
        Ok(match &q.mode {
            DecisivenessMode::Decisive => {
                pairs.iter().all(|&(x, y)| self.decisive_for(mask, x, y, false))
            }
            DecisivenessMode::AlmostDecisive => {
                pairs.iter().all(|&(x, y)| self.decisive_for(mask, x, y, true))
            }
            DecisivenessMode::AlmostDecisiveAt(i) => {
                let table = self.society.table_of(i)?;
                let out = swf.sigma_table(&table)?;
                pairs
                    .iter()
                    .any(|&(x, y)| self.almost_at(mask, &table, out, x, y))
            }
        })
    }

    /// Decisive for every pair.
    pub fn decisive(&self, mask: u64) -> bool {
        self.ordered_pairs()
            .iter()
            .all(|&(x, y)| self.decisive_for(mask, x, y, false))
    }

    /// Almost decisive for every pair.
    pub fn almost_decisive(&self, mask: u64) -> bool {
        self.ordered_pairs()
            .iter()
            .all(|&(x, y)| self.decisive_for(mask, x, y, true))
    }

    /// Voters whose strict preferences `σ` always follows.
    pub fn dictators(&self) -> Vec<Voter> {
        let n = self.society.voters().unwrap_or(0);
        (0..n)
            .filter(|&d| {
                (0..self.profiles.len()).all(|k| {
                    self.ordered_pairs().iter().all(|&(x, y)| {
                        !self.indiv(k, d as usize).lt(x, y) || self.social(k).lt(x, y)
                    })
                })
            })
            .collect()
    }
}

/// A voter overruled by `σ` (or a tuple of voters overruled together).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NdWitness {
    pub voters: Vec<Voter>,
    pub profile: Index,
    pub pair: (Alt, Alt),
    pub overruled: bool,
}

/// A profile whose cofinite majority prefers `x < y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CofiniteCheck {
    pub dissenters: Vec<Voter>,
    pub profile: Index,
    pub pair: (Alt, Alt),
    pub follows_majority: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NdReport {
    pub single: Vec<NdWitness>,
    pub tuples: Vec<NdWitness>,
    pub cofinite: Vec<CofiniteCheck>,
}

impl NdReport {
    pub fn failures(&self) -> usize {
        self.single.iter().filter(|w| !w.overruled).count()
            + self.tuples.iter().filter(|w| !w.overruled).count()
            + self.cofinite.iter().filter(|c| !c.follows_majority).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }
}

impl Swf {
    pub fn dictator(society: Arc<Society>, d: Voter) -> Result<Self> {
        if !society.universe().contains(d) {
            return Err(Error::VoterOutsideUniverse(d));
        }
        Ok(Swf {
            society,
            kind: SwfKind::Dictator(d),
        })
    }

    /// `σ_𝒰`.
    pub fn from_ultrafilter(society: Arc<Society>, u: Ultrafilter) -> Self {
        Swf {
            society,
            kind: SwfKind::FromUltrafilter(u),
        }
    }

    /// A table SWF; `outputs[k]` is the order for profile number `k`, and
    /// must be `Some` exactly on the domain.
    pub fn table(society: Arc<Society>, domain: Domain, outputs: Vec<Option<usize>>) -> Result<Self> {
        if outputs.len() != society.profile_count()? {
            return Err(Error::OutsideDomain);
        }
        for (k, o) in outputs.iter().enumerate() {
            let t = society.table_from_number(k)?;
            let ok = match o {
                Some(p) => *p < society.orders().len() && society.in_domain(&t, domain),
                None => !society.in_domain(&t, domain),
            };
            if !ok {
                return Err(Error::OutsideDomain);
            }
        }
        Ok(Swf {
            society,
            kind: SwfKind::Table { domain, outputs },
        })
    }

    /// A table SWF computed from `f` on every profile in `domain`.
    pub fn table_from_fn(
        society: Arc<Society>,
        domain: Domain,
        mut f: impl FnMut(&[usize]) -> usize,
    ) -> Result<Self> {
        let count = society.profile_count()?;
        let mut outputs = Vec::with_capacity(count);
        for k in 0..count {
            let t = society.table_from_number(k)?;
            outputs.push(society.in_domain(&t, domain).then(|| f(&t)));
        }
        Self::table(society, domain, outputs)
    }

    pub fn society(&self) -> &Society {
        &self.society
    }

    pub fn society_arc(&self) -> Arc<Society> {
        self.society.clone()
    }

    pub fn kind(&self) -> &SwfKind {
        &self.kind
    }

    pub fn domain(&self) -> Domain {
        match &self.kind {
            SwfKind::Table { domain, .. } => *domain,
            _ => Domain::Weak,
        }
    }

    /// `σ(n)` as a position into `W`.
    pub fn sigma(&self, n: &Index) -> Result<usize> {
        match &self.kind {
            SwfKind::Dictator(d) => self.society.eval(n, *d),
            SwfKind::FromUltrafilter(u) => self.sigma_from(u, n),
            SwfKind::Table { .. } => {
                let t = self.society.table_of(n)?;
                self.sigma_table(&t)
            }
        }
    }

    pub fn sigma_order(&self, n: &Index) -> Result<&WeakOrder> {
        Ok(self.society.order(self.sigma(n)?))
    }

    fn sigma_from(&self, u: &Ultrafilter, n: &Index) -> Result<usize> {
        let alts = self.society.alts();
        let mut pairs = Vec::new();
        for &x in alts {
            for &y in alts {
                if x == y {
                    pairs.push((x, y));
                    continue;
                }
                match u.member(&self.society.mu(n, x, y)?)? {
                    Decision::In => pairs.push((x, y)),
                    Decision::Out => {}
                    Decision::Unknown(t) => return Err(Error::Undecided(t)),
                }
            }
        }
        let r = WeakOrder::from_pairs(alts, &pairs).map_err(|_| Error::NotUltrafilter)?;
        Ok(self.society.position(&r).expect("W holds every weak order"))
    }

    /// `σ` on a table profile of a finite society.
    pub fn sigma_table(&self, table: &[usize]) -> Result<usize> {
        match &self.kind {
            SwfKind::Dictator(d) => Ok(table[*d as usize]),
            SwfKind::Table { outputs, .. } => outputs
                .get(self.society.profile_number(table))
                .copied()
                .flatten()
                .ok_or(Error::OutsideDomain),
            SwfKind::FromUltrafilter(u) => self.sigma_from(u, &self.society.realize(table)?),
        }
    }

    /// `σ` on every table profile of the domain.
    pub fn tabulate(&self) -> Result<Tabulation<'_>> {
        let domain = self.domain();
        let profiles = self.society.table_profiles(domain)?;
        let outputs = profiles
            .iter()
            .map(|t| self.sigma_table(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Tabulation {
            society: &self.society,
            domain,
            profiles,
            outputs,
        })
    }

    /// Unanimity on each probe: whenever every voter strictly prefers `x`
    /// to `y`, so does `σ`.
    pub fn check_unanimity(&self, probes: &[Index]) -> Result<CheckReport> {
        let alg = self.society.algebra();
        let mut r = CheckReport::new(Axiom::Unanimity);
        for n in probes {
            let out = match self.sigma(n) {
                Err(Error::Undecided(_)) => {
                    r.undecided += 1;
                    continue;
                }
                o => self.society.order(o?),
            };
            for &x in self.society.alts() {
                for &y in self.society.alts() {
                    if x == y || !alg.is_universe(&self.society.mu_strict(n, x, y)?).holds() {
                        continue;
                    }
                    r.instances += 1;
                    if !out.lt(x, y) && r.witness.is_none() {
                        r.witness = Some(SwfWitness {
                            profiles: alloc::vec![n.clone()],
                            pair: (x, y),
                        });
                    }
                }
            }
        }
        Ok(r)
    }

    /// Independence on each probe pair: profiles agreeing on `{x, y}` get
    /// the same social restriction to `{x, y}`.
    pub fn check_independence(&self, probe_pairs: &[(Index, Index)]) -> Result<CheckReport> {
        let mut r = CheckReport::new(Axiom::Independence);
        let alts = self.society.alts();
        for (n, m) in probe_pairs {
            let (a, b) = match (self.sigma(n), self.sigma(m)) {
                (Err(Error::Undecided(_)), _) | (_, Err(Error::Undecided(_))) => {
                    r.undecided += 1;
                    continue;
                }
                (a, b) => (self.society.order(a?), self.society.order(b?)),
            };
            for (i, &x) in alts.iter().enumerate() {
                for &y in &alts[i + 1..] {
                    if !self.society.profiles_agree_on(n, m, &[x, y])?.verdict.holds() {
                        continue;
                    }
                    r.instances += 1;
                    if a.relation(x, y) != b.relation(x, y) && r.witness.is_none() {
                        r.witness = Some(SwfWitness {
                            profiles: alloc::vec![n.clone(), m.clone()],
                            pair: (x, y),
                        });
                    }
                }
            }
        }
        Ok(r)
    }

    /// The pair `(a, b)` of the single-profile test: the two smallest
    /// alternatives.
    pub fn test_pair(&self) -> (Alt, Alt) {
        let alts = self.society.alts();
        (alts[0], alts[1])
    }

    /// `g(n) = e(p, ⟨n⟩)` with `p(0) = a < b < ∗` and `p(1) = b < a < ∗`:
    /// coalition `A_n` ranks `a < b`, its complement `b < a`.
    pub fn almost_decisive_profile(&self, n: &Index) -> Result<Index> {
        let (a, b) = self.test_pair();
        self.society.embed_patterns(
            &[
                OrderPattern::chain_then_rest(&[a, b]),
                OrderPattern::chain_then_rest(&[b, a]),
            ],
            core::slice::from_ref(n),
        )
    }

    /// `a <_{σ(g(n))} b`, which holds exactly when `A_n` is almost
    /// decisive (for an SWF satisfying unanimity and independence).
    pub fn almost_decisive(&self, n: &Index) -> Result<bool> {
        let (a, b) = self.test_pair();
        Ok(self.sigma_order(&self.almost_decisive_profile(n)?)?.lt(a, b))
    }

    /// Brute-force decision of `q` over every table profile.
    pub fn decisiveness_oracle(&self, q: &DecisivenessQuery) -> Result<bool> {
        self.tabulate()?.query(q, self)
    }

    fn gate(report: &CheckReport) -> Result<()> {
        match &report.witness {
            None => Ok(()),
            Some(w) => Err(Error::AxiomCheckFailed(format!(
                "{:?} at pair ({}, {})",
                report.axiom, w.pair.0, w.pair.1
            ))),
        }
    }

    /// `𝒰_σ`, after checking the axioms: exhaustively on finite societies
    /// (where the result is also compared against the brute-force oracle on
    /// every coalition), on [`ProbeSet::standard`] otherwise.
    pub fn ks_extract(&self) -> Result<Ultrafilter> {
        if self.society.voters().is_some() {
            let tab = self.tabulate()?;
            Self::gate(&tab.unanimity())?;
            Self::gate(&tab.independence())?;
            let u = Ultrafilter::decisive(Arc::new(self.clone()));
            let alg = self.society.algebra();
            for (mask, idx) in alg.all_subsets().ok_or(Error::InfiniteSociety)? {
                if u.member(&idx)?.is_in() != tab.decisive(mask) {
                    return Err(Error::OracleMismatch(mask));
                }
            }
            Ok(u)
        } else {
            self.ks_extract_with(&ProbeSet::standard(&self.society)?)
        }
    }

    /// `𝒰_σ`, gated on the axioms holding on `probes`.
    pub fn ks_extract_with(&self, probes: &ProbeSet) -> Result<Ultrafilter> {
        Self::gate(&self.check_unanimity(&probes.profiles)?)?;
        Self::gate(&self.check_independence(&probes.pairs)?)?;
        Ok(Ultrafilter::decisive(Arc::new(self.clone())))
    }

    /// The dictator of an SWF on a finite society: the unique voter whose
    /// atom lies in `𝒰_σ`, cross-checked against every profile.
    pub fn find_dictator(&self) -> Result<Voter> {
        let n = self.society.voters().ok_or(Error::InfiniteSociety)?;
        let u = self.ks_extract()?;
        let alg = self.society.algebra();
        let mut found = Vec::new();
        for v in 0..n {
            if u.member(&alg.atom_index(v)?)?.is_in() {
                found.push(v);
            }
        }
        if found.len() != 1 {
            return Err(Error::AxiomChecksIncomplete(found.len()));
        }
        let d = found[0];
        if !self.tabulate()?.dictators().contains(&d) {
            return Err(Error::AxiomChecksIncomplete(0));
        }
        Ok(d)
    }

    fn overrule(&self, voters: &[Voter]) -> Result<NdWitness> {
        let alg = self.society.algebra();
        let (x, y) = self.test_pair();
        let cell = alg.finite_set_index(voters)?;
        let n = self.society.embed_patterns(
            &[
                OrderPattern::chain_then_rest(&[x, y]),
                OrderPattern::chain_then_rest(&[y, x]),
            ],
            &[cell],
        )?;
        let out = self.sigma_order(&n)?;
        Ok(NdWitness {
            voters: voters.to_vec(),
            overruled: out.le(y, x),
            profile: n,
            pair: (x, y),
        })
    }

    /// Non-dictatoriality evidence: (a) each voter below `bound` is
    /// overruled on some profile; (b) each tuple of at most `k` voters is
    /// overruled simultaneously; (c) on profiles where all voters outside a
    /// finite dissenter set prefer `x < y`, so does `σ`. Refused when `𝒰_σ`
    /// has a point below `bound`.
    pub fn nondictatoriality_suite(
        &self,
        k: usize,
        bound: u64,
        tuples: &[Vec<Voter>],
        dissenter_sets: &[Vec<Voter>],
    ) -> Result<NdReport> {
        let u = Ultrafilter::decisive(Arc::new(self.clone()));
        let alg = self.society.algebra();
        for v in 0..bound {
            if u.member(&alg.atom_index(v)?)?.is_in() {
                return Err(Error::Principal(v));
            }
        }
        let single = (0..bound)
            .map(|v| self.overrule(&[v]))
            .collect::<Result<Vec<_>>>()?;
        let tuples = tuples
            .iter()
            .filter(|t| t.len() <= k)
            .map(|t| self.overrule(t))
            .collect::<Result<Vec<_>>>()?;
        let (x, y) = self.test_pair();
        let cofinite = dissenter_sets
            .iter()
            .map(|d| {
                let cell = alg.finite_set_index(d)?;
                let n = self.society.embed_patterns(
                    &[
                        OrderPattern::chain_then_rest(&[y, x]),
                        OrderPattern::chain_then_rest(&[x, y]),
                    ],
                    &[cell],
                )?;
                let follows = self.sigma_order(&n)?.lt(x, y);
                Ok(CofiniteCheck {
                    dissenters: d.clone(),
                    profile: n,
                    pair: (x, y),
                    follows_majority: follows,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NdReport {
            single,
            tuples,
            cofinite,
        })
    }
}

#[cfg(test)]
mod tests;
