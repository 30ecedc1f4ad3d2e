//! Weak orders (total preorders) on a finite set of alternatives.
//!
//! A relation `R` on `X` is stored as its canonical code: the sum of
//! `2^(x, y)` over the member pairs, where `(x, y)` is the pairing map. The
//! code is monotone under inclusion and round-trips through
//! [`WeakOrder::from_code`]. `(x, y) ∈ R` is read as `x ≲ y`.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::pairing::pair_u32;

/// An alternative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alt(pub u32);

impl fmt::Display for Alt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Upper bound on `|X|` for enumeration.
pub const MAX_ALTS: usize = 5;

/// Largest id whose pair codes all stay below 128.
const MAX_ALT_ID: u32 = 5;

/// Validates and sorts an alternative set.
pub fn alt_set(alts: &[Alt]) -> Result<Vec<Alt>> {
    if alts.is_empty() {
        return Err(Error::NoAlternatives);
    }
    let mut sorted = alts.to_vec();
    sorted.sort();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateAlternative(w[0]));
        }
    }
    if let Some(&a) = sorted.iter().find(|a| a.0 > MAX_ALT_ID) {
        return Err(Error::AltIdTooLarge(a));
    }
    Ok(sorted)
}

/// `{0, 1, ..., k - 1}`.
pub fn first_alts(k: u32) -> Vec<Alt> {
    (0..k).map(Alt).collect()
}

#[inline]
fn bit(x: Alt, y: Alt) -> u128 {
    1u128 << pair_u32(x.0, y.0)
}

/// Outcome of comparing two alternatives under a weak order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    StrictLess,
    Equivalent,
    StrictGreater,
}

/// A transitive, strongly connected relation on a finite alternative set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeakOrder {
    alts: Vec<Alt>,
    code: u128,
}

impl WeakOrder {
    /// Builds the order from its member pairs, checking both invariants.
    pub fn from_pairs(alts: &[Alt], pairs: &[(Alt, Alt)]) -> Result<Self> {
        let alts = alt_set(alts)?;
        let mut code = 0u128;
        for &(x, y) in pairs {
            for a in [x, y] {
                if alts.binary_search(&a).is_err() {
                    return Err(Error::UnknownAlternative(a));
                }
            }
            code |= bit(x, y);
        }
        Self::checked(alts, code)
    }

    /// Decodes a canonical code relative to `alts`.
    pub fn from_code(alts: &[Alt], code: u128) -> Result<Self> {
        let alts = alt_set(alts)?;
        let mut allowed = 0u128;
        for &x in &alts {
            for &y in &alts {
                allowed |= bit(x, y);
            }
        }
        if code & !allowed != 0 {
            return Err(Error::NotWeakOrder);
        }
        Self::checked(alts, code)
    }

    fn checked(alts: Vec<Alt>, code: u128) -> Result<Self> {
        let r = WeakOrder { alts, code };
        if r.is_strongly_connected() && r.is_transitive() {
            Ok(r)
        } else {
            Err(Error::NotWeakOrder)
        }
    }

    fn is_strongly_connected(&self) -> bool {
        self.alts
            .iter()
            .all(|&x| self.alts.iter().all(|&y| self.le(x, y) || self.le(y, x)))
    }

    fn is_transitive(&self) -> bool {
        for &x in &self.alts {
            for &y in &self.alts {
                if !self.le(x, y) {
                    continue;
                }
                for &z in &self.alts {
                    if self.le(y, z) && !self.le(x, z) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn alts(&self) -> &[Alt] {
        &self.alts
    }

    pub fn code(&self) -> u128 {
        self.code
    }

    /// `x ≲ y`.
    #[inline]
    pub fn le(&self, x: Alt, y: Alt) -> bool {
        self.code & bit(x, y) != 0
    }

    /// `x < y`: `x ≲ y` and not `y ≲ x`.
    #[inline]
    pub fn lt(&self, x: Alt, y: Alt) -> bool {
        self.le(x, y) && !self.le(y, x)
    }

    /// `x ∼ y`.
    #[inline]
    pub fn indifferent(&self, x: Alt, y: Alt) -> bool {
        self.le(x, y) && self.le(y, x)
    }

    pub fn relation(&self, x: Alt, y: Alt) -> Relation {
        match (self.le(x, y), self.le(y, x)) {
            (true, true) => Relation::Equivalent,
            (true, false) => Relation::StrictLess,
            _ => Relation::StrictGreater,
        }
    }

    /// Member pairs in lexicographic order.
    pub fn pairs(&self) -> Vec<(Alt, Alt)> {
        let mut out = Vec::new();
        for &x in &self.alts {
            for &y in &self.alts {
                if self.le(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Pairs `(x, y)` with `x < y`.
    pub fn strict_pairs(&self) -> Vec<(Alt, Alt)> {
        self.pairs()
            .into_iter()
            .filter(|&(x, y)| !self.le(y, x))
            .collect()
    }

    /// `R ∩ Y²`.
    pub fn restrict(&self, subset: &[Alt]) -> Result<WeakOrder> {
        if subset.is_empty() || subset.iter().any(|a| self.alts.binary_search(a).is_err()) {
            return Err(Error::BadRestriction);
        }
        let sub = alt_set(subset)?;
        let mut code = 0u128;
        for &x in &sub {
            for &y in &sub {
                if self.le(x, y) {
                    code |= bit(x, y);
                }
            }
        }
        Ok(WeakOrder { alts: sub, code })
    }

    /// Indifference classes, `<`-least first.
    pub fn levels(&self) -> Vec<Vec<Alt>> {
        let mut ranked: Vec<(usize, Alt)> = self
            .alts
            .iter()
            .map(|&x| (self.alts.iter().filter(|&&y| self.lt(y, x)).count(), x))
            .collect();
        ranked.sort();
        let mut out: Vec<Vec<Alt>> = Vec::new();
        let mut last = usize::MAX;
        for (rank, x) in ranked {
            if rank != last {
                out.push(Vec::new());
                last = rank;
            }
            out.last_mut().expect("pushed").push(x);
        }
        out
    }

    /// No two distinct alternatives are indifferent.
    pub fn is_linear(&self) -> bool {
        self.levels().len() == self.alts.len()
    }
}

impl fmt::Debug for WeakOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeakOrder({} #{})", self, self.code)
    }
}

impl fmt::Display for WeakOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, level) in self.levels().iter().enumerate() {
            if i > 0 {
                f.write_str(" < ")?;
            }
            for (j, x) in level.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ~ ")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

/// All weak orders on `alts`, ascending by code.
pub fn enumerate_weak_orders(alts: &[Alt]) -> Result<Vec<WeakOrder>> {
    if alts.len() > MAX_ALTS {
        return Err(Error::TooManyAlternatives(alts.len()));
    }
    let alts = alt_set(alts)?;
    let mut out = if alts.len() <= 4 {
        filter_relations(&alts)
    } else {
        from_level_assignments(&alts)
    };
    out.sort_by_key(|r| r.code);
    Ok(out)
}

// Every subset of X×X, kept when it is a weak order.
fn filter_relations(alts: &[Alt]) -> Vec<WeakOrder> {
    let k = alts.len();
    let cells: Vec<(Alt, Alt)> = alts
        .iter()
        .flat_map(|&x| alts.iter().map(move |&y| (x, y)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << (k * k)) {
        let code = cells
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .fold(0u128, |acc, (_, &(x, y))| acc | bit(x, y));
        if let Ok(r) = WeakOrder::checked(alts.to_vec(), code) {
            out.push(r);
        }
    }
    out
}

// Surjections from X onto an initial segment of levels.
fn from_level_assignments(alts: &[Alt]) -> Vec<WeakOrder> {
    let k = alts.len();
    let mut out = Vec::new();
    let mut level = alloc::vec![0usize; k];
    loop {
        let used: BTreeSet<usize> = level.iter().copied().collect();
        if used.iter().copied().eq(0..used.len()) {
            let mut code = 0u128;
            for (i, &x) in alts.iter().enumerate() {
                for (j, &y) in alts.iter().enumerate() {
                    if level[i] <= level[j] {
                        code |= bit(x, y);
                    }
                }
            }
            out.push(WeakOrder {
                alts: alts.to_vec(),
                code,
            });
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == k {
                return out;
            }
            level[pos] += 1;
            if level[pos] < k {
                break;
            }
            level[pos] = 0;
            pos += 1;
        }
    }
}

/// One level of an [`OrderPattern`]: explicit alternatives, optionally
/// joined by every alternative the pattern does not mention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternLevel {
    pub alts: Vec<Alt>,
    pub wildcard: bool,
}

impl PatternLevel {
    pub fn of(alts: &[Alt]) -> Self {
        PatternLevel {
            alts: alts.to_vec(),
            wildcard: false,
        }
    }

    /// `alts ∼ ∗`
    pub fn with_rest(alts: &[Alt]) -> Self {
        PatternLevel {
            alts: alts.to_vec(),
            wildcard: true,
        }
    }
}

/// The `x < y < z ∼ ∗` notation: levels strictly increasing left to
/// right, indifference within a level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderPattern {
    levels: Vec<PatternLevel>,
}

impl OrderPattern {
    pub fn new(levels: Vec<PatternLevel>) -> Result<Self> {
        if levels.iter().filter(|l| l.wildcard).count() > 1 {
            return Err(Error::PatternSyntax("more than one wildcard".to_string()));
        }
        if levels.iter().any(|l| l.alts.is_empty() && !l.wildcard) {
            return Err(Error::PatternSyntax("empty level".to_string()));
        }
        Ok(OrderPattern { levels })
    }

    /// `x₀ < x₁ < … < xₖ`, each alternative on its own level.
    pub fn chain(alts: &[Alt]) -> Self {
        OrderPattern {
            levels: alts.iter().map(|&a| PatternLevel::of(&[a])).collect(),
        }
    }

    /// `x₀ < x₁ < … < xₖ < ∗`
    pub fn chain_then_rest(alts: &[Alt]) -> Self {
        let mut p = Self::chain(alts);
        p.levels.push(PatternLevel::with_rest(&[]));
        p
    }

    pub fn levels(&self) -> &[PatternLevel] {
        &self.levels
    }

    /// The unique weak order on `alts` the pattern denotes.
    pub fn make_order(&self, alts: &[Alt]) -> Result<WeakOrder> {
        let alts = alt_set(alts)?;
        let mut seen = BTreeSet::new();
        for level in &self.levels {
            for &a in &level.alts {
                if alts.binary_search(&a).is_err() {
                    return Err(Error::UnknownAlternative(a));
                }
                if !seen.insert(a) {
                    return Err(Error::PatternCoverage);
                }
            }
        }
        let rest: Vec<Alt> = alts.iter().copied().filter(|a| !seen.contains(a)).collect();
        let has_wildcard = self.levels.iter().any(|l| l.wildcard);
        if !rest.is_empty() && !has_wildcard {
            return Err(Error::PatternCoverage);
        }
        let mut rank = alloc::vec![0usize; alts.len()];
        let mut r = 0;
        for level in &self.levels {
            let members = level
                .alts
                .iter()
                .copied()
                .chain(if level.wildcard { rest.clone() } else { Vec::new() });
            let mut any = false;
            for a in members {
                rank[alts.binary_search(&a).expect("checked")] = r;
                any = true;
            }
            if any {
                r += 1;
            }
        }
        let mut code = 0u128;
        for (i, &x) in alts.iter().enumerate() {
            for (j, &y) in alts.iter().enumerate() {
                if rank[i] <= rank[j] {
                    code |= bit(x, y);
                }
            }
        }
        Ok(WeakOrder { alts, code })
    }
}

impl FromStr for OrderPattern {
    type Err = Error;

    /// Parses `0 < 1 < 2 ~ *`; `~` binds tighter than `<`.
    fn from_str(s: &str) -> Result<Self> {
        let mut levels = Vec::new();
        for level in s.split('<') {
            let mut pl = PatternLevel::of(&[]);
            for item in level.split(['~', '∼']) {
                let item = item.trim();
                match item {
                    "*" | "∗" => {
                        if pl.wildcard {
                            return Err(Error::PatternSyntax(String::from("repeated wildcard")));
                        }
                        pl.wildcard = true;
                    }
                    _ => {
                        let id: u32 = item
                            .parse()
                            .map_err(|_| Error::PatternSyntax(alloc::format!("bad item {item:?}")))?;
                        pl.alts.push(Alt(id));
                    }
                }
            }
            levels.push(pl);
        }
        OrderPattern::new(levels)
    }
}

impl fmt::Display for OrderPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, level) in self.levels.iter().enumerate() {
            if i > 0 {
                f.write_str(" < ")?;
            }
            let mut items: Vec<String> = level.alts.iter().map(|a| a.to_string()).collect();
            if level.wildcard {
                items.push("*".to_string());
            }
            f.write_str(&items.join(" ~ "))?;
        }
        Ok(())
    }
}
