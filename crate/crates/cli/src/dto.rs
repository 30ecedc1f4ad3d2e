//! JSON shapes written to stdout.

use arrovian_core::order::{Alt, Relation, WeakOrder};
use arrovian_core::setalg::{FormationSeq, NormalForm};
use arrovian_core::society::Domain;
use arrovian_core::Index;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderJson {
    pub alts: Vec<u32>,
    pub pairs: Vec<[u32; 2]>,
    pub code: u128,
}

impl From<&WeakOrder> for OrderJson {
    fn from(r: &WeakOrder) -> Self {
        OrderJson {
            alts: r.alts().iter().map(|a| a.0).collect(),
            pairs: r.pairs().into_iter().map(|(x, y)| [x.0, y.0]).collect(),
            code: r.code(),
        }
    }
}

/// An order with its position in the society's enumeration.
#[derive(Clone, Debug, Serialize)]
pub struct RankedOrder {
    pub position: usize,
    pub display: String,
    pub order: OrderJson,
}

impl RankedOrder {
    pub fn new(position: usize, r: &WeakOrder) -> Self {
        RankedOrder {
            position,
            display: r.to_string(),
            order: r.into(),
        }
    }
}

pub fn index(i: &Index) -> String {
    i.to_string()
}

pub fn formation(seq: &FormationSeq) -> Vec<[u64; 3]> {
    seq.triples().into_iter().map(|(t, n, m)| [t, n, m]).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum NormalFormJson {
    Finite { members: Vec<u64> },
    Cofinite { excluded: Vec<u64> },
    Unknown { stage: u64 },
}

impl From<&NormalForm> for NormalFormJson {
    fn from(nf: &NormalForm) -> Self {
        match nf {
            NormalForm::Finite(s) => NormalFormJson::Finite {
                members: s.iter().copied().collect(),
            },
            NormalForm::Cofinite(s) => NormalFormJson::Cofinite {
                excluded: s.iter().copied().collect(),
            },
            NormalForm::Unknown(t) => NormalFormJson::Unknown { stage: *t },
        }
    }
}

pub fn pair(p: (Alt, Alt)) -> [u32; 2] {
    [p.0 .0, p.1 .0]
}

pub fn relation(r: Relation) -> &'static str {
    match r {
        Relation::StrictLess => "<",
        Relation::Equivalent => "~",
        Relation::StrictGreater => ">",
    }
}

pub fn domain(d: Domain) -> &'static str {
    match d {
        Domain::Weak => "weak",
        Domain::Linear => "linear",
    }
}

/// A table SWF file: the social order position for each profile number,
/// `null` outside the domain.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableFile {
    pub domain: String,
    pub outputs: Vec<Option<usize>>,
}
