//! Exhaustive search for Arrovian table SWFs on two voters and three
//! alternatives.
//!
//! Independence lets a table SWF factor into one aggregator per pair of
//! alternatives, mapping the voters' pair restrictions (a cell) to a social
//! pair restriction. The search assigns free cells by backtracking and
//! prunes as soon as some profile's three social pair states stop being the
//! restriction pattern of a weak order.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::order::{first_alts, Alt, Relation};
use crate::society::{Domain, Society, Voter};
use crate::swf::Swf;

pub const VOTERS: u32 = 2;
pub const ALTS: u32 = 3;

/// The pairs of alternatives, in aggregator order.
pub const PAIRS: [(Alt, Alt); 3] = [(Alt(0), Alt(1)), (Alt(0), Alt(2)), (Alt(1), Alt(2))];

/// Cells per pair: one per combination of the two voters' pair states.
pub const CELLS: usize = 9;

/// Default number of prune witnesses kept in the log.
pub const DEFAULT_LOG_CAP: usize = 64;

/// Depth at which the search tree is split into independent subtrees.
pub const SPLIT_DEPTH: usize = 2;

const STATES: [Relation; 3] = [Relation::StrictLess, Relation::Equivalent, Relation::StrictGreater];

fn state_index(r: Relation) -> usize {
    match r {
        Relation::StrictLess => 0,
        Relation::Equivalent => 1,
        Relation::StrictGreater => 2,
    }
}

/// Cell of a pair for voter states `(s0, s1)`.
pub fn cell(s0: Relation, s1: Relation) -> usize {
    state_index(s0) * 3 + state_index(s1)
}

/// Cells reachable by profiles in `domain`.
fn domain_cells(domain: Domain) -> Vec<usize> {
    match domain {
        Domain::Weak => (0..CELLS).collect(),
        Domain::Linear => alloc::vec![0, 2, 6, 8],
    }
}

/// Social pair state of one pair as a function of the cell; `None` for
/// cells outside the domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PairAggregator {
    pub pair: (Alt, Alt),
    pub table: [Option<Relation>; CELLS],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DictatorshipVerdict {
    Dictatorial(Voter),
    NonDictatorial,
}

/// A complete assignment satisfying unanimity, independence and coherence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Survivor {
    pub aggregators: [PairAggregator; 3],
    pub verdict: DictatorshipVerdict,
}

impl Survivor {
    /// Base-3 code over the 27 cells, cells outside the domain read as 0.
    pub fn code(&self) -> u64 {
        assignment_code(&self.tables())
    }

    fn tables(&self) -> [[Option<Relation>; CELLS]; 3] {
        [
            self.aggregators[0].table,
            self.aggregators[1].table,
            self.aggregators[2].table,
        ]
    }

    pub fn dictator(&self) -> Option<Voter> {
        match self.verdict {
            DictatorshipVerdict::Dictatorial(d) => Some(d),
            DictatorshipVerdict::NonDictatorial => None,
        }
    }
}

fn assignment_code(t: &[[Option<Relation>; CELLS]; 3]) -> u64 {
    t.iter()
        .flatten()
        .rev()
        .fold(0u64, |acc, s| acc * 3 + s.map_or(0, |r| state_index(r) as u64))
}

/// A profile on which a partial assignment is incoherent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PruneWitness {
    /// Number of free cells assigned when the prune happened.
    pub depth: usize,
    /// Order positions of the two voters.
    pub profile: [usize; 2],
    /// Social states on the three pairs.
    pub triple: [Relation; 3],
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchReport {
    pub survivors: Vec<[[Option<Relation>; CELLS]; 3]>,
    pub nodes: u64,
    pub prunes: u64,
    pub prune_log: Vec<PruneWitness>,
}

impl SearchReport {
    /// Concatenates reports in the given order, keeping at most `cap` log
    /// entries.
    pub fn merge(parts: Vec<SearchReport>, cap: usize) -> SearchReport {
        let mut out = SearchReport::default();
        for p in parts {
            out.survivors.extend(p.survivors);
            out.nodes += p.nodes;
            out.prunes += p.prunes;
            for w in p.prune_log {
                if out.prune_log.len() < cap {
                    out.prune_log.push(w);
                }
            }
        }
        out
    }
}

/// The search problem for one domain: free cells in assignment order and,
/// for each depth, the profiles that become fully assigned there.
#[derive(Clone, Debug)]
pub struct Search {
    society: Arc<Society>,
    domain: Domain,
    log_cap: usize,
    vars: Vec<(usize, usize)>,
    profiles: Vec<[usize; 2]>,
    profile_cells: Vec<[usize; 3]>,
    /// `checks[k]`: profiles completed by assigning `vars[k - 1]`; `checks[0]`
    /// needs no free cell.
    checks: Vec<Vec<usize>>,
    coherent: [bool; 27],
    base: [[Option<Relation>; CELLS]; 3],
}

impl Search {
    pub fn new(domain: Domain, log_cap: usize) -> Result<Self> {
        let society = Arc::new(Society::finite(VOTERS, &first_alts(ALTS))?);
        let mut coherent = [false; 27];
        for r in society.orders() {
            let t = PAIRS.map(|(x, y)| state_index(r.relation(x, y)));
            coherent[t[0] * 9 + t[1] * 3 + t[2]] = true;
        }
        let mut base = [[None; CELLS]; 3];
        for row in base.iter_mut() {
            for c in domain_cells(domain) {
                row[c] = Some(Relation::Equivalent);
            }
            row[cell(Relation::StrictLess, Relation::StrictLess)] = Some(Relation::StrictLess);
            row[cell(Relation::StrictGreater, Relation::StrictGreater)] =
                Some(Relation::StrictGreater);
        }
        let fixed = |c: usize| c == 0 || c == 8;

        let mut profiles = Vec::new();
        let mut profile_cells = Vec::new();
        for t in society.table_profiles(domain)? {
            let (a, b) = (society.order(t[0]), society.order(t[1]));
            profiles.push([t[0], t[1]]);
            profile_cells.push(PAIRS.map(|(x, y)| cell(a.relation(x, y), b.relation(x, y))));
        }

        let free: Vec<(usize, usize)> = (0..3)
            .flat_map(|p| domain_cells(domain).into_iter().map(move |c| (p, c)))
            .filter(|&(_, c)| !fixed(c))
            .collect();
        let occurs = |v: (usize, usize)| profile_cells.iter().filter(|pc| pc[v.0] == v.1).count();
        // Greedy order: complete as many profiles as possible, then prefer
        // cells occurring in many profiles.
        let mut vars: Vec<(usize, usize)> = Vec::new();
        let mut assigned = [[false; CELLS]; 3];
        for row in assigned.iter_mut() {
            row[0] = true;
            row[8] = true;
        }
        let mut remaining = free.clone();
        while !remaining.is_empty() {
            let completes = |v: (usize, usize), assigned: &[[bool; CELLS]; 3]| {
                profile_cells
                    .iter()
                    .filter(|pc| pc[v.0] == v.1 && (0..3).all(|p| p == v.0 || assigned[p][pc[p]]))
                    .count()
            };
            let best = (0..remaining.len())
                .max_by_key(|&i| {
                    let v = remaining[i];
                    (completes(v, &assigned), occurs(v), core::cmp::Reverse(i))
                })
                .expect("nonempty");
            let v = remaining.remove(best);
            assigned[v.0][v.1] = true;
            vars.push(v);
        }

        let mut position = [[0usize; CELLS]; 3];
        for (k, &(p, c)) in vars.iter().enumerate() {
            position[p][c] = k + 1;
        }
        let mut checks = alloc::vec![Vec::new(); vars.len() + 1];
        for (i, pc) in profile_cells.iter().enumerate() {
            let at = (0..3).map(|p| position[p][pc[p]]).max().unwrap_or(0);
            checks[at].push(i);
        }
        Ok(Search {
            society,
            domain,
            log_cap,
            vars,
            profiles,
            profile_cells,
            checks,
            coherent,
            base,
        })
    }

    pub fn society(&self) -> Arc<Society> {
        self.society.clone()
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn log_cap(&self) -> usize {
        self.log_cap
    }

    /// Free cells as `(pair, cell)`, in assignment order.
    pub fn vars(&self) -> &[(usize, usize)] {
        &self.vars
    }

    pub fn profile_count(&self) -> usize {
        self.profiles.len()
    }

    fn triple(&self, t: &[[Option<Relation>; CELLS]; 3], i: usize) -> Option<[Relation; 3]> {
        let pc = self.profile_cells[i];
        Some([t[0][pc[0]]?, t[1][pc[1]]?, t[2][pc[2]]?])
    }

    fn is_coherent(&self, tr: [Relation; 3]) -> bool {
        let k = tr.map(state_index);
        self.coherent[k[0] * 9 + k[1] * 3 + k[2]]
    }

    /// The first profile on which a complete assignment is incoherent.
    pub fn violation(&self, t: &[[Option<Relation>; CELLS]; 3]) -> Option<PruneWitness> {
        (0..self.profiles.len()).find_map(|i| {
            let tr = self.triple(t, i)?;
            (!self.is_coherent(tr)).then(|| PruneWitness {
                depth: self.vars.len(),
                profile: self.profiles[i],
                triple: tr,
            })
        })
    }

    fn check(&self, t: &[[Option<Relation>; CELLS]; 3], depth: usize, rep: &mut SearchReport) -> bool {
        for &i in &self.checks[depth] {
            let tr = self.triple(t, i).expect("complete at this depth");
            if !self.is_coherent(tr) {
                rep.prunes += 1;
                if rep.prune_log.len() < self.log_cap {
                    rep.prune_log.push(PruneWitness {
                        depth,
                        profile: self.profiles[i],
                        triple: tr,
                    });
                }
                return false;
            }
        }
        true
    }

    fn descend(
        &self,
        t: &mut [[Option<Relation>; CELLS]; 3],
        depth: usize,
        stop: usize,
        rep: &mut SearchReport,
        prefixes: &mut Vec<Vec<u8>>,
        path: &mut Vec<u8>,
    ) {
        rep.nodes += 1;
        if depth == stop {
            if stop == self.vars.len() {
                rep.survivors.push(*t);
            } else {
                prefixes.push(path.clone());
            }
            return;
        }
        let (p, c) = self.vars[depth];
        for (s, &r) in STATES.iter().enumerate() {
            t[p][c] = Some(r);
            if self.check(t, depth + 1, rep) {
                path.push(s as u8);
                self.descend(t, depth + 1, stop, rep, prefixes, path);
                path.pop();
            }
        }
        t[p][c] = self.base[p][c];
    }

    fn start(&self, rep: &mut SearchReport) -> Option<[[Option<Relation>; CELLS]; 3]> {
        let t = self.base;
        self.check(&t, 0, rep).then_some(t)
    }

    /// Runs the tree down to `depth` and returns the coherent prefixes
    /// (value indexes for the first `depth` free cells), with the work done
    /// above them.
    pub fn split(&self, depth: usize) -> (SearchReport, Vec<Vec<u8>>) {
        let mut rep = SearchReport::default();
        let mut prefixes = Vec::new();
        if let Some(mut t) = self.start(&mut rep) {
            let depth = depth.min(self.vars.len());
            self.descend(&mut t, 0, depth, &mut rep, &mut prefixes, &mut Vec::new());
            // nodes at the split depth are counted again by the subtrees
            rep.nodes -= prefixes.len() as u64;
        }
        (rep, prefixes)
    }

    /// Searches the subtree below a prefix returned by [`Search::split`].
    pub fn run_from(&self, prefix: &[u8]) -> SearchReport {
        let mut rep = SearchReport::default();
        let mut t = self.base;
        for (k, &s) in prefix.iter().enumerate() {
            let (p, c) = self.vars[k];
            t[p][c] = Some(STATES[s as usize]);
        }
        let mut path = prefix.to_vec();
        self.descend(&mut t, prefix.len(), self.vars.len(), &mut rep, &mut Vec::new(), &mut path);
        rep
    }

    /// Sequential run, split at [`SPLIT_DEPTH`] like the parallel one so
    /// that logs agree.
    pub fn run(&self) -> SearchReport {
        let (root, prefixes) = self.split(SPLIT_DEPTH);
        let mut parts = alloc::vec![root];
        parts.extend(prefixes.iter().map(|p| self.run_from(p)));
        SearchReport::merge(parts, self.log_cap)
    }

    /// The table SWF of an assignment.
    pub fn to_swf(&self, t: &[[Option<Relation>; CELLS]; 3]) -> Result<Swf> {
        let soc = self.society.clone();
        let mut by_triple = [None; 27];
        for (pos, r) in soc.orders().iter().enumerate() {
            let k = PAIRS.map(|(x, y)| state_index(r.relation(x, y)));
            by_triple[k[0] * 9 + k[1] * 3 + k[2]] = Some(pos);
        }
        let mut bad = false;
        let swf = Swf::table_from_fn(soc.clone(), self.domain, |tab| {
            let (a, b) = (soc.order(tab[0]), soc.order(tab[1]));
            let k = PAIRS.map(|(x, y)| {
                let c = cell(a.relation(x, y), b.relation(x, y));
                t[PAIRS.iter().position(|&q| q == (x, y)).expect("pair")][c].map_or(1, state_index)
            });
            by_triple[k[0] * 9 + k[1] * 3 + k[2]].unwrap_or_else(|| {
                bad = true;
                0
            })
        })?;
        if bad {
            return Err(Error::IncoherentAggregators);
        }
        Ok(swf)
    }

    /// Dictatorship by brute force: a voter whose singleton is decisive.
    pub fn verdict(&self, t: &[[Option<Relation>; CELLS]; 3]) -> Result<DictatorshipVerdict> {
        let swf = self.to_swf(t)?;
        let tab = swf.tabulate()?;
        Ok((0..VOTERS as u64)
            .find(|&d| tab.decisive(1 << d))
            .map_or(DictatorshipVerdict::NonDictatorial, DictatorshipVerdict::Dictatorial))
    }

    pub fn survivor(&self, t: &[[Option<Relation>; CELLS]; 3]) -> Result<Survivor> {
        let aggregators = [0, 1, 2].map(|p| PairAggregator {
            pair: PAIRS[p],
            table: t[p],
        });
        Ok(Survivor {
            aggregators,
            verdict: self.verdict(t)?,
        })
    }
}

/// Result of [`enumerate_arrovian_swfs`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowReport {
    pub domain: Domain,
    pub profiles: usize,
    pub free_cells: usize,
    pub survivors: Vec<Survivor>,
    pub nodes: u64,
    pub prunes: u64,
    pub prune_log: Vec<PruneWitness>,
}

impl ArrowReport {
    pub fn non_dictatorial(&self) -> usize {
        self.survivors.iter().filter(|s| s.dictator().is_none()).count()
    }
}

/// Finishes a search: verdicts for every survivor, sorted by code.
pub fn finish_report(search: &Search, raw: SearchReport) -> Result<ArrowReport> {
    let mut survivors = raw
        .survivors
        .iter()
        .map(|t| search.survivor(t))
        .collect::<Result<Vec<_>>>()?;
    survivors.sort_by_key(Survivor::code);
    Ok(ArrowReport {
        domain: search.domain(),
        profiles: search.profile_count(),
        free_cells: search.vars().len(),
        survivors,
        nodes: raw.nodes,
        prunes: raw.prunes,
        prune_log: raw.prune_log,
    })
}

/// Every table SWF on `voters` voters and `alts` alternatives that
/// satisfies unanimity and independence, with a dictatorship verdict each.
pub fn enumerate_arrovian_swfs(
    voters: u32,
    alts: u32,
    domain: Domain,
    log_cap: usize,
) -> Result<ArrowReport> {
    if voters != VOTERS || alts != ALTS {
        return Err(Error::ArrowcheckGuard);
    }
    let search = Search::new(domain, log_cap)?;
    let raw = search.run();
    finish_report(&search, raw)
}

/// Cross-check of one survivor against the extraction machinery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KsCheck {
    pub brute_force: Option<Voter>,
    pub extracted: Option<Voter>,
}

impl KsCheck {
    pub fn matches(&self) -> bool {
        self.brute_force.is_some() && self.brute_force == self.extracted
    }
}

/// Extracts `𝒰_σ` from the survivor's table SWF and compares its point
/// with the brute-force dictator.
pub fn verify_against_ks(search: &Search, survivor: &Survivor) -> Result<KsCheck> {
    let swf = search.to_swf(&survivor.tables())?;
    let u = swf.ks_extract()?;
    Ok(KsCheck {
        brute_force: survivor.dictator(),
        extracted: u.principal_point()?,
    })
}
