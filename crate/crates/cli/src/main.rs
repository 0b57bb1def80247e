//! `torix`: exact positivity and cohomology computations on toric
//! varieties given by fan files.
//!
//! Exit codes: 0 success, 1 input error, 2 theorem violation or internal
//! inconsistency (a bug canary, never expected on valid inputs).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use torix::corpus::run_corpus;
use torix::io::{emit_fan, read_fan, read_fan_data, write_fan};
use torix::surjectivity::{parse_targets, run_surjectivity};
use torix_core::cohomology::{
    cohomology_table_with_engine, frobenius_split_dims, omega_cohomology, vanishing_audit,
    CechEngine,
};
use torix_core::divisor::{
    cartier_data, class_group, q_cartier_index, QDivisor, WeilDivisor,
};
use torix_core::fan::Cone;
use torix_core::intersect::all_wall_degrees;
use torix_core::positivity::{
    fujita_global_generation, fujita_very_ample, has_ample_class_probe, nef_big_factorization,
    positivity_profile, FujitaOutcome, TriState,
};
use torix_core::{Error, Int};

#[derive(Parser)]
#[command(name = "torix", version, about = "Exact toric positivity and cohomology")]
struct Cli {
    /// Emit machine-readable JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a fan file and report its basic classification.
    Classify { fan: PathBuf },
    /// Print the divisor class group, and the class of a divisor if given.
    Clgroup {
        fan: PathBuf,
        #[arg(allow_hyphen_values = true)]
        divisor: Option<String>,
    },
    /// Cartier data of a divisor, or the witness cone and the least
    /// multiple that becomes Cartier.
    Cartier {
        fan: PathBuf,
        #[arg(allow_hyphen_values = true)]
        divisor: String,
    },
    /// Degree of the divisor on every invariant curve, one wall per line.
    Intersect {
        fan: PathBuf,
        #[arg(allow_hyphen_values = true)]
        divisor: String,
    },
    /// Full positivity profile: nef, globally generated, ample, very
    /// ample, big, minimal curve degree.
    Positivity {
        fan: PathBuf,
        #[arg(allow_hyphen_values = true)]
        divisor: String,
    },
    /// Factor a nef and big divisor through a coarser fan with an ample
    /// divisor.
    Factorize {
        fan: PathBuf,
        #[arg(allow_hyphen_values = true)]
        divisor: String,
        /// Write the coarse fan to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cohomology of O(D), optionally per torus degree or twisted into a
    /// cotangent power.
    Cohomology {
        fan: PathBuf,
        #[arg(allow_hyphen_values = true)]
        divisor: String,
        #[arg(long)]
        per_degree: bool,
        /// Compute h^p(Omega^j (x) O(D)) instead.
        #[arg(long)]
        omega: Option<usize>,
    },
    /// Frobenius splitting certificate dimensions for a prime p.
    Frobenius {
        fan: PathBuf,
        #[arg(short)]
        p: u64,
    },
    /// Audit the vanishing hypotheses for (D, E, m) and check the
    /// conclusion.
    Audit {
        fan: PathBuf,
        #[arg(allow_hyphen_values = true)]
        divisor: String,
        #[arg(allow_hyphen_values = true)]
        boundary: String,
        m: String,
    },
    /// Global generation / very ampleness after subtracting prime
    /// divisors, with the projective-space exception.
    Fujita {
        fan: PathBuf,
        #[arg(allow_hyphen_values = true)]
        divisor: String,
        /// Comma-separated 0-based ray indices.
        #[arg(long)]
        primes: String,
        #[arg(long)]
        very_ample: bool,
    },
    /// Star subdivision at a cone; prints the new fan and the exceptional
    /// ray index.
    Blowup {
        fan: PathBuf,
        /// Comma-separated 0-based ray indices of the cone.
        #[arg(long)]
        cone: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Blow up disjoint invariant subvarieties and verify restriction
    /// surjectivity through first-cohomology vanishing.
    Surjectivity {
        fan: PathBuf,
        #[arg(allow_hyphen_values = true)]
        divisor: String,
        /// Semicolon-separated cones, e.g. "0,1;2,3".
        #[arg(long)]
        targets: String,
    },
    /// Write a deterministic corpus of smooth complete fans.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("TORIX_THREADS") {
        if let Ok(k) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::TheoremViolation(_) | Error::Internal(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn parse_cone_arg(text: &str) -> Result<Cone, Error> {
    let rays = text
        .split(',')
        .map(|x| x.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Error::Input(format!("bad cone '{text}': {e}")))?;
    Ok(Cone::new(rays))
}

fn parse_primes(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(|x| {
            x.trim().parse::<usize>().map_err(|e| Error::Input(format!("bad prime index: {e}")))
        })
        .collect()
}

fn tri(t: TriState) -> &'static str {
    match t {
        TriState::Yes => "true",
        TriState::No => "false",
        TriState::NotApplicable => "not-applicable",
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let json_mode = cli.json;
    let emit = |value: Value, text: String| {
        if json_mode {
            println!("{value}");
        } else {
            print!("{text}");
        }
    };
    match cli.command {
        Command::Classify { fan } => {
            let data = read_fan_data(&fan)?;
            let diags = data.validate();
            if !diags.is_empty() {
                let mut text = String::from("valid: false\n");
                for d in &diags {
                    text.push_str(&format!("diagnostic: {d}\n"));
                }
                emit(json!({"valid": false, "diagnostics": diags}), text);
                return Ok(ExitCode::SUCCESS);
            }
            let fan = data.build()?;
            let text = format!(
                "valid: true\nrank: {}\nrays: {}\nsimplicial: {}\nsmooth: {}\ncomplete: {}\nprojective_space: {}\n",
                fan.rank(),
                fan.num_rays(),
                fan.is_simplicial(),
                fan.is_smooth(),
                fan.is_complete(),
                fan.is_projective_space()
            );
            emit(
                json!({
                    "valid": true,
                    "rank": fan.rank(),
                    "rays": fan.num_rays(),
                    "simplicial": fan.is_simplicial(),
                    "smooth": fan.is_smooth(),
                    "complete": fan.is_complete(),
                    "projective_space": fan.is_projective_space(),
                }),
                text,
            );
        }
        Command::Clgroup { fan, divisor } => {
            let fan = read_fan(&fan)?;
            let cl = class_group(&fan);
            let mut text = format!("{}\n", cl.shape());
            let mut value = json!({"shape": cl.shape(), "free_rank": cl.free_rank,
                "torsion": cl.torsion_moduli.iter().map(|m| m.to_string()).collect::<Vec<_>>()});
            if let Some(divisor) = divisor {
                let d = WeilDivisor::parse(&divisor)?;
                torix_core::divisor::check_len(&fan, d.len())?;
                let class = cl.project(&d);
                text.push_str(&format!("class: {class}\n"));
                value["class"] = json!(class.to_string());
            }
            emit(value, text);
        }
        Command::Cartier { fan, divisor } => {
            let fan = read_fan(&fan)?;
            let d = WeilDivisor::parse(&divisor)?;
            match cartier_data(&fan, &d) {
                Ok(cd) => {
                    let mut text = String::from("cartier: true\n");
                    let mut cones = Vec::new();
                    for (cone, u) in fan.max_cones().iter().zip(&cd.u) {
                        let coords =
                            u.iter().map(Int::to_string).collect::<Vec<_>>().join(",");
                        text.push_str(&format!("cone {:?}: u = ({coords})\n", cone.rays()));
                        cones.push(json!({"cone": cone.rays(), "u": coords}));
                    }
                    emit(json!({"cartier": true, "data": cones}), text);
                }
                Err(Error::NotCartier(witness)) => {
                    let index = q_cartier_index(&fan, &d)?;
                    let index_text =
                        index.as_ref().map_or("none".to_string(), Int::to_string);
                    let text = format!(
                        "cartier: false\nwitness cone: {witness:?}\nq_cartier_index: {index_text}\n"
                    );
                    emit(
                        json!({"cartier": false, "witness": witness, "q_cartier_index": index_text}),
                        text,
                    );
                }
                Err(e) => return Err(e),
            }
        }
        Command::Intersect { fan, divisor } => {
            let fan = read_fan(&fan)?;
            let d = WeilDivisor::parse(&divisor)?;
            let degrees = all_wall_degrees(&fan, &d)?;
            let mut text = String::new();
            let mut walls = Vec::new();
            for wd in &degrees {
                text.push_str(&format!("wall {:?}: degree {}\n", wd.wall.tau.rays(), wd.value));
                walls.push(json!({"wall": wd.wall.tau.rays(), "degree": wd.value.to_string()}));
            }
            emit(json!({"walls": walls}), text);
        }
        Command::Positivity { fan, divisor } => {
            let fan = read_fan(&fan)?;
            let d = WeilDivisor::parse(&divisor)?;
            let p = positivity_profile(&fan, &d)?;
            let witness = p.witness.as_ref().map(|w| w.tau.rays().to_vec());
            let text = format!(
                "nef: {}\nglobally_generated: {}\nample: {}\nvery_ample: {}\nbig: {}\nmin_degree: {}\nwitness_wall: {}\n",
                p.nef,
                p.globally_generated,
                p.ample,
                tri(p.very_ample),
                p.big.map_or("not-applicable".to_string(), |b| b.to_string()),
                p.min_degree,
                witness.as_ref().map_or("none".to_string(), |w| format!("{w:?}")),
            );
            emit(
                json!({
                    "nef": p.nef,
                    "globally_generated": p.globally_generated,
                    "ample": p.ample,
                    "very_ample": tri(p.very_ample),
                    "big": p.big,
                    "min_degree": p.min_degree.to_string(),
                    "witness_wall": witness,
                }),
                text,
            );
        }
        Command::Factorize { fan, divisor, out } => {
            let fan = read_fan(&fan)?;
            let d = WeilDivisor::parse(&divisor)?;
            let f = nef_big_factorization(&fan, &d)?;
            let coarse_json = emit_fan(&f.coarse.data());
            if let Some(path) = &out {
                write_fan(path, &f.coarse)?;
            }
            let text = format!(
                "coarse fan: {}ample divisor: {}\ncone map: {:?}\n",
                coarse_json, f.ample_divisor, f.cone_map
            );
            emit(
                json!({
                    "coarse_fan": f.coarse.data(),
                    "ample_divisor": f.ample_divisor.to_string(),
                    "cone_map": f.cone_map,
                }),
                text,
            );
        }
        Command::Cohomology { fan, divisor, per_degree, omega } => {
            let fan = read_fan(&fan)?;
            let d = WeilDivisor::parse(&divisor)?;
            if let Some(j) = omega {
                let mut text = String::new();
                let mut dims = Vec::new();
                for p in 0..=fan.rank() {
                    let h = omega_cohomology(&fan, j, &d, p)?;
                    text.push_str(&format!("h^{p}(Omega^{j}(D)) = {h}\n"));
                    dims.push(h);
                }
                emit(json!({"omega": j, "dims": dims}), text);
            } else {
                let engine = CechEngine::new(&fan)?;
                let table = cohomology_table_with_engine(&engine, &d, per_degree)?;
                let mut text = String::new();
                for (i, h) in table.dims.iter().enumerate() {
                    text.push_str(&format!("h^{i} = {h}\n"));
                }
                let mut value = json!({"dims": table.dims});
                if let Some(map) = &table.per_degree {
                    let mut lines = Vec::new();
                    for (u, dims) in map {
                        let coords =
                            u.iter().map(Int::to_string).collect::<Vec<_>>().join(",");
                        text.push_str(&format!("degree ({coords}): {dims:?}\n"));
                        lines.push(json!({"degree": coords, "dims": dims}));
                    }
                    value["per_degree"] = json!(lines);
                }
                emit(value, text);
            }
        }
        Command::Frobenius { fan, p } => {
            let fan = read_fan(&fan)?;
            let (at_one, at_p) = frobenius_split_dims(&fan, p)?;
            let text = format!("dim at (-1,...,-1): {at_one}\ndim at (-{p},...,-{p}): {at_p}\n");
            emit(json!({"at_minus_one": at_one, "at_minus_p": at_p, "p": p}), text);
            if at_one != 1 || at_p != 1 {
                return Err(Error::TheoremViolation(format!(
                    "splitting dimensions ({at_one}, {at_p}) differ from (1, 1)"
                )));
            }
        }
        Command::Audit { fan, divisor, boundary, m } => {
            let fan = read_fan(&fan)?;
            let d = WeilDivisor::parse(&divisor)?;
            let e = QDivisor::parse(&boundary)?;
            let m: Int = m.parse().map_err(|e| Error::Input(format!("bad multiplier: {e}")))?;
            let audit = vanishing_audit(&fan, &d, &e, &m)?;
            let mut text = format!(
                "boundary in [0,1]: {}\nm(D+E) integral: {}\nm(D+E) cartier: {}\nD+E ample: {}\nhypotheses hold: {}\n",
                audit.boundary_in_unit_range,
                audit.multiple_integral,
                audit.multiple_cartier,
                audit.q_ample,
                audit.hypotheses_hold
            );
            if let Some(table) = &audit.table {
                for (i, h) in table.dims.iter().enumerate() {
                    text.push_str(&format!("h^{i}(O(D)) = {h}\n"));
                }
            }
            let verdict = match audit.higher_vanishing {
                Some(true) => "higher cohomology vanishes",
                Some(false) => "THEOREM VIOLATION: nonzero higher cohomology",
                None => "hypotheses not satisfied; nothing to check",
            };
            text.push_str(&format!("verdict: {verdict}\n"));
            emit(
                json!({
                    "boundary_in_unit_range": audit.boundary_in_unit_range,
                    "multiple_integral": audit.multiple_integral,
                    "multiple_cartier": audit.multiple_cartier,
                    "q_ample": audit.q_ample,
                    "hypotheses_hold": audit.hypotheses_hold,
                    "dims": audit.table.as_ref().map(|t| t.dims.clone()),
                    "verdict": verdict,
                }),
                text,
            );
            if audit.higher_vanishing == Some(false) {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Fujita { fan, divisor, primes, very_ample } => {
            let fan = read_fan(&fan)?;
            let d = WeilDivisor::parse(&divisor)?;
            let primes = parse_primes(&primes)?;
            if !has_ample_class_probe(&fan, 100) {
                eprintln!(
                    "warning: no ample class found among 100 probes; the fan may not be projective"
                );
            }
            let verdict = if very_ample {
                fujita_very_ample(&fan, &d, &primes)?
            } else {
                fujita_global_generation(&fan, &d, &primes)?
            };
            let outcome = match verdict.outcome {
                FujitaOutcome::Holds => "holds",
                FujitaOutcome::ProjectiveSpaceException => "projective-space exception",
                FujitaOutcome::HypothesisNotMet => "hypothesis not met",
            };
            let witness = verdict.witness.as_ref().map(|w| w.tau.rays().to_vec());
            let mut text = format!("outcome: {outcome}\ndetail: {}\n", verdict.detail);
            if let Some(w) = &witness {
                text.push_str(&format!("witness wall: {w:?}\n"));
            }
            emit(
                json!({"outcome": outcome, "detail": verdict.detail, "witness": witness}),
                text,
            );
        }
        Command::Blowup { fan, cone, out } => {
            let fan = read_fan(&fan)?;
            let sigma = parse_cone_arg(&cone)?;
            let (blown, exceptional) = fan.star_subdivision(&sigma)?;
            if let Some(path) = &out {
                write_fan(path, &blown)?;
            }
            let text =
                format!("{}exceptional ray index: {exceptional}\n", emit_fan(&blown.data()));
            emit(json!({"fan": blown.data(), "exceptional_ray": exceptional}), text);
        }
        Command::Surjectivity { fan, divisor, targets } => {
            let fan = read_fan(&fan)?;
            let d = WeilDivisor::parse(&divisor)?;
            let targets = parse_targets(&targets)?;
            let report = run_surjectivity(&fan, &d, &targets)?;
            let text = format!(
                "exceptional rays: {:?}\nh^1(pullback - exceptional): {}\nh^0 original: {}\nh^0 twisted: {}\ntarget sections: {:?}\ndimension identity: {}\nsurjective: {}\n",
                report.exceptional_rays,
                report.twisted_table.dims[1],
                report.h0_original,
                report.twisted_table.dims[0],
                report.target_sections,
                report.dimension_identity,
                report.surjective
            );
            emit(
                json!({
                    "exceptional_rays": report.exceptional_rays,
                    "h1_twisted": report.twisted_table.dims[1],
                    "h0_original": report.h0_original,
                    "h0_twisted": report.twisted_table.dims[0],
                    "target_sections": report.target_sections,
                    "dimension_identity": report.dimension_identity,
                    "surjective": report.surjective,
                }),
                text,
            );
            if !report.surjective {
                return Err(Error::TheoremViolation(
                    "first cohomology of the twisted pullback did not vanish".into(),
                ));
            }
        }
        Command::Corpus { seed, count, dim, steps, out } => {
            let manifest = run_corpus(seed, count, dim, steps, &out)?;
            let mut text = String::new();
            for entry in &manifest.entries {
                text.push_str(&format!("{}: {}\n", entry.file, entry.provenance));
            }
            text.push_str(&format!("manifest: {}\n", out.join("manifest.json").display()));
            emit(serde_json::to_value(&manifest).expect("manifest serializes"), text);
        }
    }
    Ok(ExitCode::SUCCESS)
}
