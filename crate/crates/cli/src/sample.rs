//! Seeded probe profiles for the finite–cofinite society.

use anyhow::Result;
use arrovian_core::order::Alt;
use arrovian_core::society::{Society, Voter};
use arrovian_core::swf::ProbeSet;
use arrovian_core::Index;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Voters drawn for cells lie below this.
const CELL_RANGE: u64 = 40;

fn random_cell(soc: &Society, rng: &mut ChaCha8Rng) -> Result<Index> {
    let a = soc.algebra();
    let size = rng.gen_range(0..6);
    let pts: Vec<Voter> = (0..size).map(|_| rng.gen_range(0..CELL_RANGE)).collect();
    let f = a.finite_set_index(&pts)?;
    Ok(if rng.gen_bool(0.5) { a.complement_index(&f) } else { f })
}

fn same_on(soc: &Society, i: usize, k: usize, x: Alt, y: Alt) -> bool {
    soc.order(i).relation(x, y) == soc.order(k).relation(x, y)
}

/// Distinct leading orders for `cells + 1` buckets; with `unanimous`, every
/// one of them ranks `x < y`.
fn leading(soc: &Society, rng: &mut ChaCha8Rng, len: usize, unanimous: Option<(Alt, Alt)>) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..soc.orders().len())
        .filter(|&i| unanimous.is_none_or(|(x, y)| soc.order(i).lt(x, y)))
        .collect();
    pool.shuffle(rng);
    pool.truncate(len);
    pool
}

/// `count` unanimity probes (every other one unanimous on a random pair)
/// and `count` independence pairs agreeing on a random pair.
pub fn fishburn_probes(soc: &Society, rng: &mut ChaCha8Rng, count: usize) -> Result<ProbeSet> {
    let alts = soc.alts();
    let mut set = ProbeSet::default();
    for k in 0..count {
        let cells: Vec<Index> = (0..rng.gen_range(1..=3))
            .map(|_| random_cell(soc, rng))
            .collect::<Result<_>>()?;
        let (x, y) = {
            let mut two: Vec<Alt> = alts.to_vec();
            two.shuffle(rng);
            (two[0], two[1])
        };
        let unanimous = (k % 2 == 0).then_some((x, y));
        let lead = leading(soc, rng, cells.len() + 1, unanimous);
        if lead.len() < cells.len() + 1 {
            continue;
        }
        let n = soc.embed_leading(&lead, &cells)?;
        set.profiles.push(n.clone());

        // Partner: each bucket's order swapped for one agreeing on {x, y}.
        let mut partner = Vec::with_capacity(lead.len());
        for &i in &lead {
            let mut options: Vec<usize> = (0..soc.orders().len())
                .filter(|&o| same_on(soc, i, o, x, y) && !partner.contains(&o))
                .collect();
            options.shuffle(rng);
            partner.push(options.first().copied().unwrap_or(i));
        }
        let distinct = partner.iter().enumerate().all(|(j, p)| !partner[..j].contains(p));
        let m = if distinct {
            soc.embed_leading(&partner, &cells)?
        } else {
            n.clone()
        };
        set.pairs.push((n, m));
    }
    Ok(set)
}

/// `count` distinct voter tuples of sizes `1..=k`, voters below `range`.
pub fn tuples(rng: &mut ChaCha8Rng, count: usize, k: usize, range: u64) -> Vec<Vec<Voter>> {
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=k.max(1));
            let mut t: Vec<Voter> = Vec::with_capacity(len);
            while t.len() < len {
                let v = rng.gen_range(0..range);
                if !t.contains(&v) {
                    t.push(v);
                }
            }
            t.sort_unstable();
            t
        })
        .collect()
}

/// `count` finite dissenter sets below `range`.
pub fn dissenters(rng: &mut ChaCha8Rng, count: usize, range: u64) -> Vec<Vec<Voter>> {
    (0..count)
        .map(|_| {
            let mut d: Vec<Voter> = (0..rng.gen_range(0..8)).map(|_| rng.gen_range(0..range)).collect();
            d.sort_unstable();
            d.dedup();
            d
        })
        .collect()
}
