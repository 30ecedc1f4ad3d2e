//! One function per verb; each returns the JSON report and whether the
//! run verified.

use std::sync::Arc;
use std::thread;

use anyhow::{bail, Result};
use arrovian_core::arrowcheck::{
    cell as cell_of, finish_report, verify_against_ks, ArrowReport, Search, SearchReport, Survivor, SPLIT_DEPTH,
};
use arrovian_core::order::{enumerate_weak_orders, first_alts, OrderPattern, Relation};
use arrovian_core::reversal::{build_gadget, GadgetSociety, PhiOutcome};
use arrovian_core::setalg::Algebra;
use arrovian_core::society::{Domain, Society};
use arrovian_core::swf::{CheckReport, NdWitness, Swf};
use arrovian_core::ultra::Ultrafilter;
use arrovian_core::{Error, Index};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::{DomainArg, FishburnArgs, ReversalArgs, SocietyArgs};
use crate::dto::{self, NormalFormJson, RankedOrder};
use crate::input;
use crate::sample;
use crate::Outcome;

pub fn orders_enum(alts: u32) -> Result<Outcome> {
    let set = first_alts(alts);
    let orders = enumerate_weak_orders(&set)?;
    let codes: Vec<u128> = orders.iter().map(|r| r.code()).collect();
    let listed: Vec<RankedOrder> = orders.iter().enumerate().map(|(i, r)| RankedOrder::new(i, r)).collect();
    Ok(Outcome::ok(json!({
        "alts": set.iter().map(|a| a.0).collect::<Vec<_>>(),
        "count": orders.len(),
        "codes": codes,
        "orders": listed,
    })))
}

fn describe(soc: &Society) -> Value {
    let a = soc.algebra();
    json!({
        "universe": match soc.voters() { Some(n) => json!(n), None => json!("naturals") },
        "alts": soc.alts().iter().map(|x| x.0).collect::<Vec<_>>(),
        "orders": soc.orders().len(),
        "default_order": RankedOrder::new(0, soc.order(0)),
        "generators": format!("{:?}", a.generators().descriptor()),
        "exact_normal_forms": a.has_exact_normal_forms(),
        "table_profiles": soc.profile_count().ok(),
    })
}

pub fn society_build(args: &SocietyArgs) -> Result<Outcome> {
    let built = input::society(args)?;
    Ok(Outcome::ok(describe(&built.society)))
}

fn sample_voters(soc: &Society) -> u64 {
    soc.voters().unwrap_or(10)
}

pub fn society_embed(args: &SocietyArgs, patterns: &[String], cells: &[String]) -> Result<Outcome> {
    let soc = input::society(args)?.society;
    let a = soc.algebra();
    let patterns = patterns
        .iter()
        .map(|p| p.parse::<OrderPattern>())
        .collect::<Result<Vec<_>, _>>()?;
    let cells = cells.iter().map(|c| input::cell(a, c)).collect::<Result<Vec<_>>>()?;
    if patterns.len() != cells.len() + 1 {
        bail!("give one pattern per cell plus one for the remaining voters");
    }
    let n = soc.embed_patterns(&patterns, &cells)?;
    let voters: Vec<Value> = (0..sample_voters(&soc))
        .map(|v| Ok(json!({"voter": v, "order": soc.eval_order(&n, v)?.to_string()})))
        .collect::<Result<_>>()?;
    Ok(Outcome::ok(json!({
        "profile_index": dto::index(&n),
        "cells": cells.iter().map(|c| json!({
            "index": dto::index(c),
            "formation": dto::formation(&a.set_at(c).formation().clone()),
        })).collect::<Vec<_>>(),
        "voters": voters,
    })))
}

fn coalition(a: &Algebra, i: &Index, stage: u64, below: u64) -> Value {
    let set = a.set_at(i);
    json!({
        "index": dto::index(i),
        "formation": dto::formation(set.formation()),
        "normal_form": NormalFormJson::from(&set.normal_form(stage)),
        "members_below": set.members_below(below),
    })
}

pub fn society_mu(args: &SocietyArgs, profile: &str, x: u32, y: u32, stage: u64, below: u64) -> Result<Outcome> {
    let soc = input::society(args)?.society;
    let n = input::index(profile)?;
    let (x, y) = (arrovian_core::order::Alt(x), arrovian_core::order::Alt(y));
    let a = soc.algebra();
    Ok(Outcome::ok(json!({
        "profile_index": dto::index(&n),
        "pair": dto::pair((x, y)),
        "mu": coalition(a, &soc.mu(&n, x, y)?, stage, below),
        "mu_strict": coalition(a, &soc.mu_strict(&n, x, y)?, stage, below),
        "mu_indiff": coalition(a, &soc.mu_indiff(&n, x, y)?, stage, below),
    })))
}

pub fn society_eval(args: &SocietyArgs, profile: &str, voter: u64) -> Result<Outcome> {
    let soc = input::society(args)?.society;
    let n = input::index(profile)?;
    let pos = soc.eval(&n, voter)?;
    Ok(Outcome::ok(json!({
        "profile_index": dto::index(&n),
        "voter": voter,
        "order": RankedOrder::new(pos, soc.order(pos)),
    })))
}

pub fn swf_eval(args: &SocietyArgs, provenance: &str, profile: &str) -> Result<Outcome> {
    let soc = input::society(args)?.society;
    let swf = input::provenance(&soc, provenance)?;
    let n = input::index(profile)?;
    Ok(match swf.sigma(&n) {
        Ok(pos) => Outcome::ok(json!({
            "provenance": provenance,
            "profile_index": dto::index(&n),
            "order": RankedOrder::new(pos, soc.order(pos)),
        })),
        Err(Error::Undecided(t)) => Outcome::failed(json!({
            "provenance": provenance,
            "profile_index": dto::index(&n),
            "undecided_at_stage": t,
        })),
        Err(e) => return Err(e.into()),
    })
}

fn check_json(r: &CheckReport, soc: &Society) -> Value {
    json!({
        "instances": r.instances,
        "undecided": r.undecided,
        "passed": r.passed(),
        "witness": r.witness.as_ref().map(|w| json!({
            "pair": dto::pair(w.pair),
            "profiles": w.profiles.iter().map(|p| json!({
                "index": dto::index(p),
                "table": soc.table_of(p).ok(),
            })).collect::<Vec<_>>(),
        })),
    })
}

pub fn ks_extract(args: &SocietyArgs, provenance: &str, report_below: u64) -> Result<Outcome> {
    let soc = input::society(args)?.society;
    let swf = input::provenance(&soc, provenance)?;
    let a = soc.algebra();
    if soc.voters().is_some() {
        let tab = swf.tabulate()?;
        let (u, i) = (tab.unanimity(), tab.independence());
        if !(u.passed() && i.passed()) {
            return Ok(Outcome::failed(json!({
                "provenance": provenance,
                "refused": "axioms fail",
                "unanimity": check_json(&u, &soc),
                "independence": check_json(&i, &soc),
            })));
        }
    }
    let uf = match swf.ks_extract() {
        Ok(uf) => uf,
        Err(e @ (Error::AxiomCheckFailed(_) | Error::OracleMismatch(_) | Error::AxiomChecksIncomplete(_))) => {
            return Ok(Outcome::failed(json!({"provenance": provenance, "refused": e.to_string()})));
        }
        Err(e) => return Err(e.into()),
    };
    let decision = |i: &Index| -> Result<Value> {
        Ok(match uf.member(i)? {
            arrovian_core::ultra::Decision::In => json!(true),
            arrovian_core::ultra::Decision::Out => json!(false),
            arrovian_core::ultra::Decision::Unknown(t) => json!({"unknown_at_stage": t}),
        })
    };
    let members: Vec<Value> = match a.all_subsets() {
        Some(all) => all
            .iter()
            .map(|(mask, i)| {
                Ok(json!({"coalition": a.set_at(i).members_below(64), "mask": mask, "member": decision(i)?}))
            })
            .collect::<Result<_>>()?,
        None => (0..report_below)
            .flat_map(|v| {
                let atom = a.atom_index(v);
                [atom.clone().map(|i| (format!("{{{v}}}"), i)), atom.map(|i| (format!("V \\ {{{v}}}"), a.complement_index(&i)))]
            })
            .map(|r| {
                let (name, i) = r?;
                Ok(json!({"coalition": name, "member": decision(&i)?}))
            })
            .collect::<Result<_>>()?,
    };
    let point = uf.principal_point()?;
    Ok(Outcome::ok(json!({
        "provenance": provenance,
        "principal_point": point,
        "points_checked_below": soc.voters().unwrap_or(a.test_bound()),
        "memberships": members,
    })))
}

fn relation_name(r: Option<Relation>) -> Value {
    r.map_or(Value::Null, |r| json!(dto::relation(r)))
}

fn survivor_json(s: &Survivor) -> Value {
    const NAMES: [Relation; 3] = [Relation::StrictLess, Relation::Equivalent, Relation::StrictGreater];
    json!({
        "code": s.code(),
        "dictator": s.dictator(),
        "aggregators": s.aggregators.iter().map(|agg| {
            let cells: serde_json::Map<String, Value> = NAMES
                .iter()
                .flat_map(|&a| NAMES.iter().map(move |&b| (a, b)))
                .map(|(a, b)| (format!("{}{}", dto::relation(a), dto::relation(b)), relation_name(agg.table[cell_of(a, b)])))
                .collect();
            json!({"pair": dto::pair(agg.pair), "cells": cells})
        }).collect::<Vec<_>>(),
    })
}

/// Runs the search split into subtrees over `jobs` threads; the merge
/// order does not depend on `jobs`.
pub fn run_search(search: &Search, jobs: usize) -> SearchReport {
    let (root, prefixes) = search.split(SPLIT_DEPTH);
    let mut results: Vec<Option<SearchReport>> = vec![None; prefixes.len()];
    let jobs = jobs.max(1);
    thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                let prefixes = &prefixes;
                scope.spawn(move || {
                    (w..prefixes.len())
                        .step_by(jobs)
                        .map(|k| (k, search.run_from(&prefixes[k])))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (k, r) in h.join().expect("search worker panicked") {
                results[k] = Some(r);
            }
        }
    });
    let mut parts = vec![root];
    parts.extend(results.into_iter().map(|r| r.expect("every subtree searched")));
    SearchReport::merge(parts, search.log_cap())
}

pub fn arrow_report(domain: Domain, log_cap: usize, jobs: usize) -> Result<(Search, ArrowReport)> {
    let search = Search::new(domain, log_cap)?;
    let raw = run_search(&search, jobs);
    let report = finish_report(&search, raw)?;
    Ok((search, report))
}

pub fn arrow_search(voters: u32, alts: u32, domain: DomainArg, log_cap: usize, verify: bool, jobs: usize) -> Result<Outcome> {
    if voters != arrovian_core::arrowcheck::VOTERS || alts != arrovian_core::arrowcheck::ALTS {
        bail!(Error::ArrowcheckGuard);
    }
    let domain = match domain {
        DomainArg::Linear => Domain::Linear,
        DomainArg::Weak => Domain::Weak,
    };
    let (search, r) = arrow_report(domain, log_cap, jobs)?;
    let mut mismatches = Vec::new();
    if verify {
        for s in &r.survivors {
            let k = verify_against_ks(&search, s)?;
            if !k.matches() {
                mismatches.push(json!({"code": s.code(), "brute_force": k.brute_force, "extracted": k.extracted}));
            }
        }
    }
    let by_dictator = |d| r.survivors.iter().filter(|s| s.dictator() == Some(d)).count();
    let non_dictatorial: Vec<Value> = r.survivors.iter().filter(|s| s.dictator().is_none()).map(survivor_json).collect();
    let ok = !r.survivors.is_empty() && non_dictatorial.is_empty() && mismatches.is_empty();
    let s = search.society();
    let value = json!({
        "voters": voters,
        "alts": alts,
        "domain": dto::domain(r.domain),
        "profiles": r.profiles,
        "free_cells": r.free_cells,
        "nodes": r.nodes,
        "prunes": r.prunes,
        "survivor_count": r.survivors.len(),
        "dictatorial": {"0": by_dictator(0), "1": by_dictator(1)},
        "non_dictatorial": non_dictatorial,
        "ks_verified": verify,
        "ks_mismatches": mismatches,
        "survivors": r.survivors.iter().map(survivor_json).collect::<Vec<_>>(),
        "prune_log": r.prune_log.iter().map(|w| json!({
            "depth": w.depth,
            "profile": w.profile.iter().map(|&o| s.order(o).to_string()).collect::<Vec<_>>(),
            "social_states": w.triple.map(dto::relation),
        })).collect::<Vec<_>>(),
    });
    Ok(Outcome { value, ok })
}

fn nd_json(w: &NdWitness) -> Value {
    json!({
        "voters": w.voters,
        "profile_index": dto::index(&w.profile),
        "pair": dto::pair(w.pair),
        "overruled": w.overruled,
    })
}

pub fn fishburn_demo(args: &FishburnArgs) -> Result<Outcome> {
    let soc = Arc::new(Society::canonical(Arc::new(Algebra::finite_cofinite()), &first_alts(3))?);
    let swf = Swf::from_ultrafilter(soc.clone(), Ultrafilter::frechet(soc.algebra_arc())?);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let probes = sample::fishburn_probes(&soc, &mut rng, args.samples)?;
    let u = swf.check_unanimity(&probes.profiles)?;
    let i = swf.check_independence(&probes.pairs)?;
    let tuples = sample::tuples(&mut rng, args.tuples, args.k, args.bound.max(1));
    let dissent = sample::dissenters(&mut rng, args.cofinite, args.bound.max(1));
    let nd = match swf.nondictatoriality_suite(args.k, args.bound, &tuples, &dissent) {
        Ok(nd) => nd,
        Err(Error::Principal(v)) => {
            return Ok(Outcome::failed(json!({"principal_at": v})));
        }
        Err(e) => return Err(e.into()),
    };
    let ok = u.passed() && i.passed() && u.instances > 0 && i.instances > 0 && nd.passed();
    let value = json!({
        "seed": args.seed,
        "unanimity": check_json(&u, &soc),
        "independence": check_json(&i, &soc),
        "probe_pairs": probes.pairs.len(),
        "nondictatorial": {
            "bound": args.bound,
            "k": args.k,
            "failures": nd.failures(),
            "single": nd.single.iter().map(nd_json).collect::<Vec<_>>(),
            "tuples": nd.tuples.iter().map(nd_json).collect::<Vec<_>>(),
            "cofinite": nd.cofinite.iter().map(|c| json!({
                "dissenters": c.dissenters,
                "profile_index": dto::index(&c.profile),
                "pair": dto::pair(c.pair),
                "follows_majority": c.follows_majority,
            })).collect::<Vec<_>>(),
        },
    });
    Ok(Outcome { value, ok })
}

pub const UNBOUNDED_NOTE: &str = "phi scans stages below the bound only; run without a bound, the same evaluation of the social order would decide membership in the range of h";

/// `n`, `phi(n)` and the least witness found by scanning `h` directly.
pub type PhiRow = (u64, PhiOutcome, Option<u64>);

/// `phi` and the direct range scan for each query, in parallel by `n`.
pub fn reversal_queries(gs: &GadgetSociety, ns: &[u64], stage: u64, jobs: usize) -> Result<Vec<PhiRow>> {
    let jobs = jobs.max(1);
    let mut out: Vec<Option<Result<PhiRow>>> = (0..ns.len()).map(|_| None).collect();
    thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                scope.spawn(move || {
                    (w..ns.len())
                        .step_by(jobs)
                        .map(|k| {
                            let n = ns[k];
                            let r = gs
                                .phi(n, stage)
                                .map(|p| (n, p, gs.enumerator().first_hit(n, stage)))
                                .map_err(anyhow::Error::from);
                            (k, r)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (k, r) in h.join().expect("reversal worker panicked") {
                out[k] = Some(r);
            }
        }
    });
    out.into_iter().map(|r| r.expect("every query ran")).collect()
}

pub fn agrees(outcome: PhiOutcome, scan: Option<u64>, stage: u64) -> bool {
    match (outcome, scan) {
        (PhiOutcome::InRange(t), Some(m)) => t == m + 1,
        (PhiOutcome::NoWitnessUpTo(b), None) => b == stage,
        _ => false,
    }
}

pub fn reversal(args: &ReversalArgs, jobs: usize) -> Result<Outcome> {
    let h = input::enumerator(args.h.as_deref(), args.toy)?;
    let gs = build_gadget(h)?;
    let mut ns = args.n.clone();
    ns.extend(0..args.below.unwrap_or(0));
    ns.sort_unstable();
    ns.dedup();
    if ns.is_empty() {
        bail!("give --n or --below");
    }
    let stage = args.stage_bound;
    let rows = reversal_queries(&gs, &ns, stage, jobs)?;
    let ok = rows.iter().all(|&(_, p, s)| agrees(p, s, stage));
    let value = json!({
        "enumerator": format!("{:?}", gs.enumerator()),
        "pair": dto::pair((arrovian_core::reversal::X, arrovian_core::reversal::Y)),
        "stage_bound": stage,
        "note": UNBOUNDED_NOTE,
        "queries": rows.iter().map(|&(n, p, scan)| {
            let (outcome, at) = match p {
                PhiOutcome::InRange(t) => ("in_range", t),
                PhiOutcome::NoWitnessUpTo(t) => ("no_witness_up_to", t),
            };
            json!({
                "n": n,
                "outcome": outcome,
                "stage": at,
                "generator": 2 * n,
                "direct_scan_witness": scan,
                "agrees": agrees(p, scan, stage),
            })
        }).collect::<Vec<_>>(),
    });
    if let Some(path) = &args.emit {
        std::fs::write(path, serde_json::to_string_pretty(&value)? + "\n")?;
    }
    Ok(Outcome { value, ok })
}
