//! Command-line front end for `arrovian-core`: JSON reports on stdout,
//! logs on stderr.

pub mod args;
pub mod commands;
pub mod dto;
pub mod input;
pub mod sample;
pub mod schema;
pub mod selftest;

use anyhow::Result;
use serde_json::{json, Value};

use crate::args::{ArrowCmd, Cli, Command, FishburnCmd, KsCmd, OrdersCmd, SocietyCmd, SwfCmd};

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// A verb's report and whether it verified.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub value: Value,
    pub ok: bool,
}

impl Outcome {
    pub fn ok(value: Value) -> Self {
        Outcome { value, ok: true }
    }

    pub fn failed(value: Value) -> Self {
        Outcome { value, ok: false }
    }

    pub fn exit_code(&self) -> i32 {
        if self.ok {
            EXIT_OK
        } else {
            EXIT_FAILED
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let jobs = usize::from(cli.jobs);
    let Some(cmd) = &cli.command else {
        anyhow::ensure!(cli.schema, "no verb given");
        return Ok(Outcome::ok(schema::all()));
    };
    if cli.schema {
        return Ok(Outcome::ok(schema::for_verb(cmd.verb()).expect("every verb has a schema")));
    }
    match cmd {
        Command::Orders(OrdersCmd::Enum { alts }) => commands::orders_enum(*alts),
        Command::Society(SocietyCmd::Build(s)) => commands::society_build(s),
        Command::Society(SocietyCmd::Embed { society, patterns, cells }) => {
            commands::society_embed(society, patterns, cells)
        }
        Command::Society(SocietyCmd::Mu {
            society,
            profile_index,
            x,
            y,
            stage,
            list_below,
        }) => commands::society_mu(society, profile_index, *x, *y, *stage, *list_below),
        Command::Society(SocietyCmd::Eval {
            society,
            profile_index,
            voter,
        }) => commands::society_eval(society, profile_index, *voter),
        Command::Swf(SwfCmd::Eval {
            society,
            provenance,
            profile_index,
        }) => commands::swf_eval(society, provenance, profile_index),
        Command::Ks(KsCmd::Extract {
            society,
            provenance,
            report_below,
        }) => commands::ks_extract(society, provenance, *report_below),
        Command::Arrow(ArrowCmd::Search {
            voters,
            alts,
            domain,
            log_cap,
            verify,
        }) => commands::arrow_search(*voters, *alts, *domain, *log_cap, *verify, jobs),
        Command::Fishburn(FishburnCmd::Demo(a)) => commands::fishburn_demo(a),
        Command::Reversal(a) => commands::reversal(a, jobs),
        Command::Selftest => {
            let (checks, passed) = selftest::run(jobs)?;
            Ok(Outcome {
                value: json!({"passed": passed, "checks": checks}),
                ok: passed,
            })
        }
    }
}

/// Deterministic rendering of a report.
pub fn render(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values always serialize") + "\n"
}
