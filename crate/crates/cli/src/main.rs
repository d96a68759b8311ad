//! `vmlab` — batch front end for the vector-measure laboratory: reads JSON
//! instances, dispatches to the library, writes JSON/CSV reports, and runs
//! the acceptance suite.
//!
//! Exit codes: 0 success, 2 validation/guard violation, 64 unknown
//! subcommand, 65 malformed JSON input.

mod args;
mod commands;
mod report;

use report::{CliError, Report};
use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match run(&argv) {
        Ok(code) => code,
        Err(err) => {
            let body = serde_json::json!({
                "error": { "kind": err.kind, "message": err.message, "exit": err.exit }
            });
            println!("{}", serde_json::to_string_pretty(&body).expect("error body"));
            ExitCode::from(err.exit)
        }
    }
}

fn run(argv: &[String]) -> Result<ExitCode, CliError> {
    let Some(subcommand) = argv.first() else {
        return Err(CliError::unknown_subcommand("<none>"));
    };
    if subcommand == "--help" || subcommand == "-h" || subcommand == "help" {
        print!("{}", USAGE);
        return Ok(ExitCode::SUCCESS);
    }
    let parsed = args::Args::parse(&argv[1..])?;
    let threads = read_thread_cap()?;
    let started = std::time::Instant::now();

    if subcommand == "verify" {
        return commands::verify(&parsed);
    }

    let (inputs, results) = match subcommand.as_str() {
        "dunford-norm" => commands::dunford_norm(&parsed)?,
        "bochner-norm" => commands::bochner_norm(&parsed)?,
        "svprofile" => commands::sv_profile(&parsed)?,
        "defect" => commands::defect(&parsed)?,
        "ui-modulus" => commands::ui_modulus(&parsed)?,
        "variation" => commands::variation(&parsed)?,
        "semivariation" => commands::semivariation(&parsed)?,
        "summing-lower" => commands::summing_lower(&parsed)?,
        "pietsch-lp" => commands::pietsch_lp(&parsed)?,
        "compose" => commands::compose(&parsed)?,
        "counterexample" => commands::counterexample(&parsed)?,
        "thickness" => commands::thickness(&parsed)?,
        other => return Err(CliError::unknown_subcommand(other)),
    };

    let report = Report {
        subcommand: subcommand.clone(),
        inputs,
        results,
        provenance: report::Provenance {
            seed: parsed.seed()?,
            threads,
            tolerances: report::Tolerances::default(),
        },
        wall_time_ms: started.elapsed().as_millis(),
    };
    let body = serde_json::to_string_pretty(&report).expect("report serialization");
    if let Some(path) = parsed.get("out") {
        std::fs::write(path, format!("{body}\n")).map_err(CliError::io)?;
    }
    println!("{body}");
    Ok(ExitCode::SUCCESS)
}

/// VMLAB_THREADS caps internal parallelism; execution is sequential, so any
/// positive cap is honored as-is.
fn read_thread_cap() -> Result<usize, CliError> {
    match std::env::var("VMLAB_THREADS") {
        Ok(raw) => raw
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| CliError::validation("vmlab-threads", "VMLAB_THREADS must be a positive integer")),
        Err(_) => Ok(1),
    }
}

const USAGE: &str = "\
vmlab — vector-measure laboratory

USAGE: vmlab <subcommand> [flags]

SUBCOMMANDS
  dunford-norm   --function f.json --p P [--seed N] [--out r.json]
  bochner-norm   --function f.json --p P [--out r.json]
  svprofile      --function f.json [--p 2] [--csv profile.csv] [--out r.json]
  defect         --function f.json --partition part.json --p P [--seed N]
  ui-modulus     --function f.json --p P --delta D [--delta D2 ...] [--seed N]
  variation      --measure m.json --p P --method finest|brute|holder_dual
  semivariation  --measure m.json --p P [--seed N]
  summing-lower  --operator u.json --p P [--seed N]
  pietsch-lp     --operator u.json --p P [--grid N] [--family M] [--seed N]
  compose        --operator u.json (--function f.json | --measure m.json)
  counterexample pettis --levels N [--p P] | kothe --p P --masses a,b,...
  thickness      --instance i.json [--grid EPS] [--function f.json --p P]
  verify         [--suite all | --suite K]

FLAGS
  --p         exponent in [1, ∞)
  --delta     mass bound for modulus curves (repeatable)
  --levels    truncation depth for the pettis counterexample
  --seed      RNG seed for heuristic searches (default 0)
  --grid      sphere point count (pietsch-lp) or resolution (thickness)
  --family    test-family size for pietsch-lp (default 64)
  --method    variation route: finest | brute | holder_dual
  --csv       write a two-column index,value CSV (svprofile)
  --out       write the JSON report to this path as well as stdout
  --suite     acceptance suite selector for verify (default all)

Reports embed a certification flag per numeric result: exact,
heuristic-lower-bound, or lp-estimate. VMLAB_THREADS caps internal
parallelism (execution is sequential).
";
