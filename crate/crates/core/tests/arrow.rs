use std::collections::BTreeSet;
use std::sync::Arc;

use arrovian_core::arrowcheck::{enumerate_arrovian_swfs, finish_report, verify_against_ks, Search, DEFAULT_LOG_CAP};
use arrovian_core::order::{first_alts, Alt, Relation};
use arrovian_core::society::{Domain, Society};
use arrovian_core::swf::Swf;

const PAIRS: [(Alt, Alt); 3] = [(Alt(0), Alt(1)), (Alt(0), Alt(2)), (Alt(1), Alt(2))];

fn st(r: Relation) -> usize {
    match r {
        Relation::StrictLess => 0,
        Relation::Equivalent => 1,
        Relation::StrictGreater => 2,
    }
}

fn society() -> Arc<Society> {
    Arc::new(Society::finite(2, &first_alts(3)).unwrap())
}

/// Per profile, the cell of each pair.
fn cells(s: &Society, t: &[usize]) -> [usize; 3] {
    PAIRS.map(|(x, y)| st(s.order(t[0]).relation(x, y)) * 3 + st(s.order(t[1]).relation(x, y)))
}

/// Order position by its three pair states.
fn order_by_states(s: &Society, states: [usize; 3]) -> Option<usize> {
    s.orders().iter().position(|r| PAIRS.map(|(x, y)| st(r.relation(x, y))) == states)
}

fn code(t: &[[Option<usize>; 9]; 3]) -> u64 {
    t.iter().flatten().rev().fold(0, |acc, s| acc * 3 + s.unwrap_or(0) as u64)
}

/// Every assignment of the six free linear cells, each turned into a full
/// table SWF and judged by the generic checkers.
fn naive_linear() -> (usize, usize) {
    let s = society();
    let profiles = s.table_profiles(Domain::Linear).unwrap();
    let (mut survivors, mut dictatorial) = (0, 0);
    for a in 0..3usize.pow(6) {
        let digit = |i: usize| a / 3usize.pow(i as u32) % 3;
        let mut t = [[None; 9]; 3];
        for (p, row) in t.iter_mut().enumerate() {
            row[0] = Some(0);
            row[8] = Some(2);
            row[2] = Some(digit(2 * p));
            row[6] = Some(digit(2 * p + 1));
        }
        let mut outputs = vec![None; s.profile_count().unwrap()];
        let mut ok = true;
        for prof in &profiles {
            let c = cells(&s, prof);
            let states = [0, 1, 2].map(|p| t[p][c[p]].unwrap());
            match order_by_states(&s, states) {
                Some(o) => outputs[s.profile_number(prof)] = Some(o),
                None => ok = false,
            }
        }
        if !ok {
            continue;
        }
        let swf = Swf::table(s.clone(), Domain::Linear, outputs).unwrap();
        let tab = swf.tabulate().unwrap();
        if tab.unanimity().passed() && tab.independence().passed() {
            survivors += 1;
            if !tab.dictators().is_empty() {
                dictatorial += 1;
            }
        }
    }
    (survivors, dictatorial)
}

/// Plain backtracking over the 21 weak-domain cells in natural order,
/// rescanning every profile after each assignment.
fn natural_order_weak() -> BTreeSet<u64> {
    let s = society();
    let profiles: Vec<[usize; 3]> = s
        .table_profiles(Domain::Weak)
        .unwrap()
        .iter()
        .map(|t| cells(&s, t))
        .collect();
    let vars: Vec<(usize, usize)> = (0..3)
        .flat_map(|p| (0..9).filter(|&c| c != 0 && c != 8).map(move |c| (p, c)))
        .collect();
    let mut t = [[None; 9]; 3];
    for row in t.iter_mut() {
        row[0] = Some(0);
        row[8] = Some(2);
    }
    let mut out = BTreeSet::new();
    fn go(
        s: &Society,
        k: usize,
        vars: &[(usize, usize)],
        profiles: &[[usize; 3]],
        t: &mut [[Option<usize>; 9]; 3],
        out: &mut BTreeSet<u64>,
    ) {
        let coherent = profiles.iter().all(|c| match [0, 1, 2].map(|p| t[p][c[p]]) {
            [Some(a), Some(b), Some(d)] => order_by_states(s, [a, b, d]).is_some(),
            _ => true,
        });
        if !coherent {
            return;
        }
        if k == vars.len() {
            out.insert(code(t));
            return;
        }
        let (p, c) = vars[k];
        for v in 0..3 {
            t[p][c] = Some(v);
            go(s, k + 1, vars, profiles, t, out);
        }
        t[p][c] = None;
    }
    go(&s, 0, &vars, &profiles, &mut t, &mut out);
    out
}

#[test]
fn linear_count_matches_naive_recount() {
    let r = enumerate_arrovian_swfs(2, 3, Domain::Linear, DEFAULT_LOG_CAP).unwrap();
    let (naive, naive_dictatorial) = naive_linear();
    assert_eq!(r.survivors.len(), naive);
    assert_eq!(naive_dictatorial, naive);
    assert_eq!(r.non_dictatorial(), 0);
}

#[test]
fn weak_survivors_match_independent_backtracker() {
    let search = Search::new(Domain::Weak, DEFAULT_LOG_CAP).unwrap();
    let r = finish_report(&search, search.run()).unwrap();
    let oracle = natural_order_weak();
    let ours: BTreeSet<u64> = r.survivors.iter().map(|s| s.code()).collect();
    assert_eq!(ours, oracle);
    assert_eq!(r.non_dictatorial(), 0);
    for sv in &r.survivors {
        assert!(verify_against_ks(&search, sv).unwrap().matches());
    }
}

#[test]
fn prune_witnesses_replay() {
    let search = Search::new(Domain::Weak, 500).unwrap();
    let r = search.run();
    let s = search.society();
    for w in &r.prune_log {
        let states = w.triple.map(st);
        assert!(order_by_states(&s, states).is_none());
        assert!(w.profile.iter().all(|&o| o < 13));
    }
}
