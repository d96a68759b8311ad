//! Subcommand handlers: parse instances, call the library, shape results.
//! Every numeric result carries its certification flag.

use crate::args::Args;
use crate::report::{read_json, CliError};
use serde_json::{json, Value};
use std::process::ExitCode;
use vmlab_core::dunford::SimpleFunction;
use vmlab_core::measure::{VariationMethod, VectorMeasure};
use vmlab_core::normed::{dual_sphere_grid, primal_sphere_grid, MomentSearchConfig, Vector};
use vmlab_core::space::Partition;
use vmlab_core::summing::{
    compose_function, compose_measure, pi_p_lower, pietsch_lp_upper, LinearOperator,
    SearchBudget,
};
use vmlab_core::thickness::{
    kothe_dual_witnesses, kothe_example, pettis_example, thickness_chain_profile,
    thickness_norm_bound, thickness_radius, KotheExampleConfig, PettisExampleConfig,
    ThicknessInstance,
};
use vmlab_core::{acceptance, Real};

type Handled = Result<(Value, Value), CliError>;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable result")
}

fn search_config(args: &Args) -> Result<MomentSearchConfig, CliError> {
    Ok(MomentSearchConfig { seed: args.seed()?, ..MomentSearchConfig::default() })
}

pub fn dunford_norm(args: &Args) -> Handled {
    let path = args.require("function")?;
    let f: SimpleFunction<f64> = read_json(path)?;
    let p = args.f64_flag("p")?;
    let r = f.dunford_norm_with(p, &search_config(args)?)?;
    Ok((
        json!({ "function": path, "p": p }),
        json!({ "value": r.value, "witness": r.witness, "certification": r.certified }),
    ))
}

pub fn bochner_norm(args: &Args) -> Handled {
    let path = args.require("function")?;
    let f: SimpleFunction<f64> = read_json(path)?;
    let p = args.f64_flag("p")?;
    let value = f.bochner_norm(p)?;
    Ok((
        json!({ "function": path, "p": p }),
        json!({ "value": value, "certification": "exact" }),
    ))
}

pub fn sv_profile(args: &Args) -> Handled {
    let path = args.require("function")?;
    let f: SimpleFunction<f64> = read_json(path)?;
    let p = args.f64_flag_or("p", 2.0)?;
    let profile = f.sv_profile(p)?;
    if let Some(csv_path) = args.get("csv") {
        emit_csv(&profile, csv_path)?;
    }
    Ok((
        json!({ "function": path, "p": p }),
        json!({ "singular_values": profile, "certification": "exact" }),
    ))
}

pub fn defect(args: &Args) -> Handled {
    let fpath = args.require("function")?;
    let ppath = args.require("partition")?;
    let f: SimpleFunction<f64> = read_json(fpath)?;
    let partition: Partition = read_json(ppath)?;
    let p = args.f64_flag("p")?;
    let residual = f.minus(&f.averaging(&partition)?)?;
    let r = residual.dunford_norm_with(p, &search_config(args)?)?;
    Ok((
        json!({ "function": fpath, "partition": ppath, "p": p }),
        json!({ "defect": r.value, "witness": r.witness, "certification": r.certified }),
    ))
}

pub fn ui_modulus(args: &Args) -> Handled {
    let path = args.require("function")?;
    let f: SimpleFunction<f64> = read_json(path)?;
    let p = args.f64_flag("p")?;
    let raw = args.get_all("delta");
    if raw.is_empty() {
        return Err(CliError::validation("missing-flag", "at least one --delta is required"));
    }
    let mut deltas = Vec::with_capacity(raw.len());
    for d in raw {
        deltas.push(d.parse::<f64>().map_err(|_| {
            CliError::validation("bad-number", format!("flag --delta: `{d}` is not a number"))
        })?);
    }
    let report = f.zfp_ui_modulus_with(p, &deltas, &search_config(args)?)?;
    Ok((
        json!({ "function": path, "p": p, "deltas": deltas }),
        to_value(&report),
    ))
}

pub fn variation(args: &Args) -> Handled {
    let path = args.require("measure")?;
    let nu: VectorMeasure<f64> = read_json(path)?;
    let p = args.f64_flag("p")?;
    let method = match args.require("method")? {
        "finest" => VariationMethod::Finest,
        "brute" => VariationMethod::Brute,
        "holder_dual" => VariationMethod::HolderDual,
        other => {
            return Err(CliError::validation(
                "bad-method",
                format!("unknown variation method `{other}`"),
            ))
        }
    };
    let value = nu.p_variation(p, method)?;
    Ok((
        json!({ "measure": path, "p": p, "method": to_value(&method) }),
        json!({ "value": value, "certification": "exact" }),
    ))
}

pub fn semivariation(args: &Args) -> Handled {
    let path = args.require("measure")?;
    let nu: VectorMeasure<f64> = read_json(path)?;
    let p = args.f64_flag("p")?;
    let r = nu.p_semivariation_with(p, &search_config(args)?)?;
    Ok((
        json!({ "measure": path, "p": p }),
        json!({ "value": r.value, "witness": r.witness, "certification": r.certified }),
    ))
}

pub fn summing_lower(args: &Args) -> Handled {
    let path = args.require("operator")?;
    let u: LinearOperator<f64> = read_json(path)?;
    let p = args.f64_flag("p")?;
    let budget = SearchBudget { seed: args.seed()?, ..SearchBudget::default() };
    let (lower, family) = pi_p_lower(&u, p, &budget)?;
    Ok((
        json!({ "operator": path, "p": p }),
        json!({
            "lower": lower,
            "witness_family": family,
            "certification": "heuristic-lower-bound",
        }),
    ))
}

pub fn pietsch_lp(args: &Args) -> Handled {
    let path = args.require("operator")?;
    let u: LinearOperator<f64> = read_json(path)?;
    let p = args.f64_flag("p")?;
    let grid = args.usize_flag_or("grid", 256)?;
    let family_size = args.usize_flag_or("family", 64)?;
    let seed = args.seed()?;
    let sphere = dual_sphere_grid(u.domain(), grid, seed);
    let mut family: Vec<Vector<f64>> =
        (0..u.domain().dim()).map(|j| Vector::basis(u.domain().dim(), j)).collect();
    family.extend(primal_sphere_grid(u.domain(), family_size, seed.wrapping_add(1)));
    let cert = pietsch_lp_upper(&u, p, &sphere, &family)?;
    Ok((
        json!({ "operator": path, "p": p, "grid": grid, "family": family.len() }),
        json!({
            "constant": cert.constant,
            "support": cert.support,
            "weights": cert.weights,
            "test_family_hash": family_hash(&cert.test_family),
            "certification": "lp-estimate",
        }),
    ))
}

/// FNV-1a over the canonical JSON of the family.
fn family_hash(family: &[Vector<f64>]) -> String {
    let bytes = serde_json::to_vec(family).expect("serializable family");
    let mut hash: u64 = 0xcbf29ce484222325;
    for b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}

pub fn compose(args: &Args) -> Handled {
    let upath = args.require("operator")?;
    let u: LinearOperator<f64> = read_json(upath)?;
    match (args.get("function"), args.get("measure")) {
        (Some(fpath), None) => {
            let f: SimpleFunction<f64> = read_json(fpath)?;
            let composed = compose_function(&u, &f)?;
            Ok((
                json!({ "operator": upath, "function": fpath }),
                json!({ "composed_function": to_value(&composed), "certification": "exact" }),
            ))
        }
        (None, Some(mpath)) => {
            let nu: VectorMeasure<f64> = read_json(mpath)?;
            let composed = compose_measure(&u, &nu)?;
            Ok((
                json!({ "operator": upath, "measure": mpath }),
                json!({ "composed_measure": to_value(&composed), "certification": "exact" }),
            ))
        }
        _ => Err(CliError::validation(
            "missing-flag",
            "compose needs exactly one of --function or --measure",
        )),
    }
}

pub fn counterexample(args: &Args) -> Handled {
    match args.positional(0) {
        Some("pettis") => {
            let levels = args.usize_flag_or("levels", 3)?;
            let p = args.f64_flag_or("p", 2.0)?;
            let cfg = PettisExampleConfig { levels, p };
            let f = pettis_example(&cfg)?;
            let dn = f.dunford_norm(p)?;
            let results = json!({
                "function": to_value(&f),
                "dunford_norm": { "value": dn.value, "witness": dn.witness,
                                   "certification": dn.certified },
                "bochner_norm": { "value": f.bochner_norm(p)?, "certification": "exact" },
                "sv_profile": { "values": f.sv_profile(2.0)?, "certification": "exact" },
            });
            Ok((json!({ "kind": "pettis", "levels": levels, "p": p }), results))
        }
        Some("kothe") => {
            let p = args.f64_flag("p")?;
            let raw = args.require("masses")?;
            let mut masses = Vec::new();
            for piece in raw.split(',') {
                masses.push(piece.trim().parse::<f64>().map_err(|_| {
                    CliError::validation(
                        "bad-number",
                        format!("flag --masses: `{piece}` is not a number"),
                    )
                })?);
            }
            let cfg = KotheExampleConfig { p, atom_masses: masses.clone() };
            let phi = kothe_example(&cfg)?;
            let witnesses = kothe_dual_witnesses(&cfg)?;
            let mut image_norms = Vec::with_capacity(witnesses.len());
            for g in &witnesses {
                let image = phi.pair(g)?;
                image_norms.push(vmlab_core::space::lp_norm(&image, p)?);
            }
            let dn = phi.dunford_norm(p)?;
            let results = json!({
                "function": to_value(&phi),
                "dual_witnesses": witnesses,
                "image_lp_norms": image_norms,
                "dunford_norm": { "value": dn.value, "witness": dn.witness,
                                   "certification": dn.certified },
            });
            Ok((json!({ "kind": "kothe", "p": p, "masses": masses }), results))
        }
        Some(other) => Err(CliError::validation(
            "bad-example",
            format!("unknown counterexample `{other}` (expected pettis or kothe)"),
        )),
        None => Err(CliError::validation(
            "missing-argument",
            "counterexample needs a kind: pettis or kothe",
        )),
    }
}

pub fn thickness(args: &Args) -> Handled {
    let ipath = args.require("instance")?;
    let inst: ThicknessInstance<f64> = read_json(ipath)?;
    let grid_eps = args.f64_flag_or("grid", 0.02)?;
    let radius = thickness_radius(&inst, grid_eps)?;
    let exact = inst.descriptor().dim() <= 2;
    let mut results = json!({
        "radius": {
            "lower": radius.lower,
            "upper": radius.upper,
            "witness": radius.witness,
            "certification": if exact { "exact" } else { "heuristic-lower-bound" },
        },
    });
    if inst.decomposition().is_some() {
        let profile = thickness_chain_profile(&inst, grid_eps)?;
        results["chain_profile"] = Value::Array(
            profile
                .iter()
                .map(|r| json!({ "lower": r.lower, "upper": r.upper }))
                .collect(),
        );
    }
    let mut inputs = json!({ "instance": ipath, "grid": grid_eps });
    if let Some(fpath) = args.get("function") {
        let f: SimpleFunction<f64> = read_json(fpath)?;
        let p = args.f64_flag("p")?;
        let report = thickness_norm_bound(&f, &inst, p, grid_eps)?;
        results["norm_bound"] = to_value(&report);
        inputs["function"] = json!(fpath);
        inputs["p"] = json!(p);
    }
    Ok((inputs, results))
}

/// Two-column CSV "index,value", index from 1, 17 significant digits.
pub fn emit_csv<F: Real>(profile: &[F], path: &str) -> Result<(), CliError> {
    if profile.is_empty() {
        return Err(CliError::validation("empty-profile", "cannot write an empty CSV profile"));
    }
    let mut out = String::new();
    for (i, v) in profile.iter().enumerate() {
        out.push_str(&format!("{},{:.16e}\n", i + 1, v.as_f64()));
    }
    std::fs::write(path, out).map_err(CliError::io)
}

/// Run the acceptance suite; one line per criterion, nonzero exit on any
/// failure.
pub fn verify(args: &Args) -> Result<ExitCode, CliError> {
    let suite = args.get("suite").unwrap_or("all");
    let outcomes = if suite == "all" {
        acceptance::run_all()
    } else {
        let id: usize = suite.parse().map_err(|_| {
            CliError::validation("bad-suite", format!("--suite must be `all` or 1..={}", acceptance::COUNT))
        })?;
        match acceptance::run(id) {
            Some(outcome) => vec![outcome],
            None => {
                return Err(CliError::validation(
                    "bad-suite",
                    format!("criterion {id} out of range 1..={}", acceptance::COUNT),
                ))
            }
        }
    };
    let mut all_passed = true;
    for outcome in &outcomes {
        all_passed &= outcome.passed;
        println!(
            "criterion {:2} {:32} {} ({} ms) {}",
            outcome.id,
            outcome.name,
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.elapsed_ms,
            outcome.detail,
        );
    }
    if let Some(path) = args.get("out") {
        let body = serde_json::to_string_pretty(&outcomes).expect("outcomes");
        std::fs::write(path, format!("{body}\n")).map_err(CliError::io)?;
    }
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
