//! JSON Schemas of each verb's stdout document.

use serde_json::{json, Value};

fn order() -> Value {
    json!({
        "type": "object",
        "required": ["alts", "pairs", "code"],
        "properties": {
            "alts": {"type": "array", "items": {"type": "integer"}},
            "pairs": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}},
            "code": {"type": "integer", "description": "sum of 2^pair(x,y) over related pairs"}
        }
    })
}

fn ranked() -> Value {
    json!({
        "type": "object",
        "required": ["position", "display", "order"],
        "properties": {
            "position": {"type": "integer"},
            "display": {"type": "string"},
            "order": order()
        }
    })
}

fn index() -> Value {
    json!({"type": "string", "pattern": "^[0-9]+$", "description": "decimal natural number"})
}

fn formation() -> Value {
    json!({
        "type": "array",
        "description": "steps [t, n, m]: t=0 generator n, t=1 complement of slot n, t=2 intersection of slots n and m",
        "items": {"type": "array", "items": {"type": "integer"}, "minItems": 3, "maxItems": 3}
    })
}

fn check() -> Value {
    json!({
        "type": "object",
        "required": ["instances", "undecided", "passed", "witness"],
        "properties": {
            "instances": {"type": "integer"},
            "undecided": {"type": "integer"},
            "passed": {"type": "boolean"},
            "witness": {"type": ["object", "null"]}
        }
    })
}

fn doc(title: &str, properties: Value, required: &[&str]) -> Value {
    json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": title,
        "type": "object",
        "required": required,
        "properties": properties
    })
}

pub fn for_verb(verb: &str) -> Option<Value> {
    Some(match verb {
        "orders" => doc(
            "orders enum",
            json!({
                "alts": {"type": "array", "items": {"type": "integer"}},
                "count": {"type": "integer"},
                "codes": {"type": "array", "items": {"type": "integer"}},
                "orders": {"type": "array", "items": ranked()}
            }),
            &["alts", "count", "codes", "orders"],
        ),
        "society" => json!({
            "oneOf": [
                doc("society build", json!({
                    "universe": {"type": ["integer", "string"]},
                    "alts": {"type": "array"},
                    "orders": {"type": "integer"},
                    "default_order": ranked(),
                    "generators": {"type": "string"},
                    "exact_normal_forms": {"type": "boolean"},
                    "table_profiles": {"type": ["integer", "null"]}
                }), &["universe", "alts", "orders", "default_order"]),
                doc("society embed", json!({
                    "profile_index": index(),
                    "cells": {"type": "array", "items": {"type": "object", "properties": {"index": index(), "formation": formation()}}},
                    "voters": {"type": "array"}
                }), &["profile_index", "cells"]),
                doc("society mu", json!({
                    "profile_index": index(),
                    "pair": {"type": "array"},
                    "mu": {"type": "object", "properties": {"index": index(), "formation": formation(), "normal_form": {"type": "object"}, "members_below": {"type": "array"}}},
                    "mu_strict": {"type": "object"},
                    "mu_indiff": {"type": "object"}
                }), &["profile_index", "pair", "mu", "mu_strict", "mu_indiff"]),
                doc("society eval", json!({
                    "profile_index": index(),
                    "voter": {"type": "integer"},
                    "order": ranked()
                }), &["profile_index", "voter", "order"])
            ]
        }),
        "swf" => doc(
            "swf eval",
            json!({
                "provenance": {"type": "string"},
                "profile_index": index(),
                "order": ranked(),
                "undecided_at_stage": {"type": "integer"}
            }),
            &["provenance", "profile_index"],
        ),
        "ks" => doc(
            "ks extract",
            json!({
                "provenance": {"type": "string"},
                "principal_point": {"type": ["integer", "null"]},
                "points_checked_below": {"type": "integer"},
                "memberships": {"type": "array"},
                "refused": {"type": "string"}
            }),
            &["provenance"],
        ),
        "arrow" => doc(
            "arrow search",
            json!({
                "voters": {"type": "integer"},
                "alts": {"type": "integer"},
                "domain": {"enum": ["linear", "weak"]},
                "profiles": {"type": "integer"},
                "free_cells": {"type": "integer"},
                "nodes": {"type": "integer"},
                "prunes": {"type": "integer"},
                "survivor_count": {"type": "integer"},
                "dictatorial": {"type": "object"},
                "non_dictatorial": {"type": "array", "description": "witness survivors; empty when verified"},
                "ks_verified": {"type": "boolean"},
                "ks_mismatches": {"type": "array"},
                "survivors": {"type": "array", "items": {"type": "object", "required": ["code", "dictator", "aggregators"]}},
                "prune_log": {"type": "array", "items": {"type": "object", "required": ["depth", "profile", "social_states"]}}
            }),
            &["domain", "survivor_count", "non_dictatorial", "survivors", "prune_log"],
        ),
        "fishburn" => doc(
            "fishburn demo",
            json!({
                "seed": {"type": "integer"},
                "unanimity": check(),
                "independence": check(),
                "probe_pairs": {"type": "integer"},
                "nondictatorial": {
                    "type": "object",
                    "properties": {
                        "failures": {"type": "integer"},
                        "single": {"type": "array"},
                        "tuples": {"type": "array"},
                        "cofinite": {"type": "array"}
                    }
                }
            }),
            &["unanimity", "independence", "nondictatorial"],
        ),
        "reversal" => doc(
            "reversal",
            json!({
                "enumerator": {"type": "string"},
                "pair": {"type": "array"},
                "stage_bound": {"type": "integer"},
                "note": {"type": "string"},
                "queries": {"type": "array", "items": {
                    "type": "object",
                    "required": ["n", "outcome", "stage", "direct_scan_witness", "agrees"],
                    "properties": {
                        "outcome": {"enum": ["in_range", "no_witness_up_to"]},
                        "stage": {"type": "integer"},
                        "direct_scan_witness": {"type": ["integer", "null"]}
                    }
                }}
            }),
            &["stage_bound", "note", "queries"],
        ),
        "selftest" => doc(
            "selftest",
            json!({
                "passed": {"type": "boolean"},
                "checks": {"type": "array", "items": {
                    "type": "object",
                    "required": ["name", "passed", "detail"]
                }}
            }),
            &["passed", "checks"],
        ),
        _ => return None,
    })
}

pub const VERBS: [&str; 8] = ["orders", "society", "swf", "ks", "arrow", "fishburn", "reversal", "selftest"];

pub fn all() -> Value {
    let map: serde_json::Map<String, Value> = VERBS
        .iter()
        .map(|v| (v.to_string(), for_verb(v).expect("every verb has a schema")))
        .collect();
    Value::Object(map)
}
