//! A deterministic run of the property suite. Reports carry counts and
//! verdicts only, never timings.

use std::collections::BTreeSet;
use std::sync::Arc;

use anyhow::Result;
use arrovian_core::arrowcheck::{verify_against_ks, DEFAULT_LOG_CAP};
use arrovian_core::order::{enumerate_weak_orders, first_alts};
use arrovian_core::reversal::{build_gadget, Enumerator, PhiOutcome, TOY_COUNT};
use arrovian_core::society::{Domain, Society};
use arrovian_core::swf::Swf;
use arrovian_core::ultra::{all_triples, check_ultrafilter_axioms, uf_basic_properties, Ultrafilter};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::FishburnArgs;
use crate::commands;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: Value,
}

/// Total transitive relations on `{0..k}`, counted by filtering all
/// subsets of `k²` pairs.
pub fn filter_count(k: u32) -> usize {
    let n = k * k;
    (0u64..1 << n)
        .filter(|&mask| {
            let has = |x: u32, y: u32| mask >> (x * k + y) & 1 == 1;
            (0..k).all(|x| (0..k).all(|y| has(x, y) || has(y, x)))
                && (0..k).all(|x| (0..k).all(|y| (0..k).all(|z| !(has(x, y) && has(y, z)) || has(x, z))))
        })
        .count()
}

pub fn weak_orders() -> Result<Check> {
    let mut counts = Vec::new();
    let mut passed = true;
    for k in 1..=4 {
        let got = enumerate_weak_orders(&first_alts(k))?.len();
        let oracle = filter_count(k);
        passed &= got == oracle;
        counts.push(json!({"alts": k, "enumerated": got, "filter_oracle": oracle}));
    }
    passed &= counts.iter().map(|c| c["enumerated"].as_u64()).eq([1, 3, 13, 75].map(Some));
    Ok(Check {
        name: "weak_order_counts",
        passed,
        detail: json!(counts),
    })
}

pub fn ultrafilter_axioms() -> Result<Check> {
    let s = Society::finite(3, &first_alts(3))?;
    let a = s.algebra_arc();
    let idx: Vec<_> = a.all_subsets().unwrap_or_default().into_iter().map(|(_, i)| i).collect();
    let triples = all_triples(&idx);
    let mut passed = true;
    let mut rows = Vec::new();
    for d in 0..3 {
        let u = Ultrafilter::principal(a.clone(), d)?;
        let ax = check_ultrafilter_axioms(&u, &triples)?;
        let basic = uf_basic_properties(&u, &triples)?;
        passed &= ax.passed() && basic.passed();
        let failed: Vec<&str> = ax
            .clauses
            .iter()
            .chain(&basic.clauses)
            .filter(|c| c.witness.is_some())
            .map(|c| c.clause.name())
            .collect();
        rows.push(json!({"point": d, "triples": triples.len(), "failed_clauses": failed}));
    }
    Ok(Check {
        name: "ultrafilter_axioms",
        passed,
        detail: json!(rows),
    })
}

/// Single-profile test vs brute-force decisiveness, for dictators and
/// principal ultrafilter SWFs on two and three voters.
pub fn ks_soundness() -> Result<Check> {
    let mut comparisons = 0;
    let mut discrepancies = Vec::new();
    for n in [2u32, 3] {
        let s = Arc::new(Society::finite(n, &first_alts(3))?);
        let a = s.algebra_arc();
        for d in 0..n as u64 {
            let u = Ultrafilter::principal(a.clone(), d)?;
            for (kind, swf) in [("dictator", Swf::dictator(s.clone(), d)?), ("principal", Swf::from_ultrafilter(s.clone(), u))] {
                let tab = swf.tabulate()?;
                for (mask, idx) in a.all_subsets().unwrap_or_default() {
                    let fast = swf.almost_decisive(&idx)?;
                    comparisons += 1;
                    if fast != tab.almost_decisive(mask) || fast != tab.decisive(mask) {
                        discrepancies.push(json!({"voters": n, "kind": kind, "point": d, "mask": mask}));
                    }
                }
            }
        }
    }
    Ok(Check {
        name: "ks_soundness",
        passed: discrepancies.is_empty(),
        detail: json!({"comparisons": comparisons, "discrepancies": discrepancies}),
    })
}

pub fn roundtrips() -> Result<Check> {
    let mut failures = Vec::new();
    let mut sigma_checks = 0;
    for n in 1..=3u32 {
        let s = Arc::new(Society::finite(n, &first_alts(3))?);
        for d in 0..n as u64 {
            let u = Ultrafilter::principal(s.algebra_arc(), d)?;
            let via = Swf::from_ultrafilter(s.clone(), u);
            if via.find_dictator().ok() != Some(d) {
                failures.push(json!({"voters": n, "point": d, "step": "find_dictator"}));
            }
            let back = Swf::dictator(s.clone(), d)?.ks_extract()?;
            if back.principal_point()? != Some(d) {
                failures.push(json!({"voters": n, "point": d, "step": "ks_extract"}));
            }
            for k in 0..s.profile_count()? {
                let t = s.table_from_number(k)?;
                sigma_checks += 1;
                if via.sigma(&s.realize(&t)?)? != t[d as usize] {
                    failures.push(json!({"voters": n, "point": d, "table": t}));
                }
            }
        }
    }
    Ok(Check {
        name: "roundtrips",
        passed: failures.is_empty(),
        detail: json!({"sigma_checks": sigma_checks, "failures": failures}),
    })
}

pub fn arrow(domain: Domain, jobs: usize) -> Result<Check> {
    let (search, r) = commands::arrow_report(domain, DEFAULT_LOG_CAP, jobs)?;
    let mut mismatches = 0;
    for s in &r.survivors {
        if !verify_against_ks(&search, s)?.matches() {
            mismatches += 1;
        }
    }
    let dictators: BTreeSet<u64> = r.survivors.iter().filter_map(|s| s.dictator()).collect();
    let passed = !r.survivors.is_empty() && r.non_dictatorial() == 0 && mismatches == 0 && dictators.len() == 2;
    Ok(Check {
        name: match domain {
            Domain::Linear => "arrow_linear",
            Domain::Weak => "arrow_weak",
        },
        passed,
        detail: json!({
            "survivors": r.survivors.len(),
            "non_dictatorial": r.non_dictatorial(),
            "ks_mismatches": mismatches,
            "nodes": r.nodes,
            "prunes": r.prunes,
        }),
    })
}

pub fn fishburn() -> Result<Check> {
    let args = FishburnArgs {
        k: 5,
        bound: 50,
        samples: 500,
        cofinite: 100,
        tuples: 20,
        seed: 0,
    };
    let out = commands::fishburn_demo(&args)?;
    let v = &out.value;
    Ok(Check {
        name: "fishburn",
        passed: out.ok,
        detail: json!({
            "unanimity_instances": v["unanimity"]["instances"],
            "independence_instances": v["independence"]["instances"],
            "nd_failures": v["nondictatorial"]["failures"],
            "single_witnesses": v["nondictatorial"]["single"].as_array().map(Vec::len),
            "tuple_witnesses": v["nondictatorial"]["tuples"].as_array().map(Vec::len),
            "cofinite_checks": v["nondictatorial"]["cofinite"].as_array().map(Vec::len),
        }),
    })
}

pub fn reversal(jobs: usize) -> Result<Check> {
    let stage = 100;
    let ns: Vec<u64> = (0..50).collect();
    let mut disagreements = Vec::new();
    let mut in_range = 0;
    for k in 0..TOY_COUNT {
        let gs = build_gadget(Enumerator::toy(k))?;
        let rows = commands::reversal_queries(&gs, &ns, stage, jobs)?;
        let early = commands::reversal_queries(&gs, &ns, stage / 2, jobs)?;
        for (&(n, p, scan), &(_, e, _)) in rows.iter().zip(&early) {
            let monotone = !matches!(e, PhiOutcome::InRange(_)) || e == p;
            if matches!(p, PhiOutcome::InRange(_)) {
                in_range += 1;
            }
            if !commands::agrees(p, scan, stage) || !monotone {
                disagreements.push(json!({"toy": k, "n": n}));
            }
        }
    }
    Ok(Check {
        name: "reversal",
        passed: disagreements.is_empty(),
        detail: json!({"tables": TOY_COUNT, "queries": TOY_COUNT * 50, "in_range": in_range, "disagreements": disagreements}),
    })
}

pub fn run(jobs: usize) -> Result<(Vec<Check>, bool)> {
    let checks = vec![
        weak_orders()?,
        ultrafilter_axioms()?,
        ks_soundness()?,
        roundtrips()?,
        arrow(Domain::Linear, jobs)?,
        arrow(Domain::Weak, jobs)?,
        fishburn()?,
        reversal(jobs)?,
    ];
    let passed = checks.iter().all(|c| c.passed);
    Ok((checks, passed))
}
