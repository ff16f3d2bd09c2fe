//! Batch CLI over the rbeta pipeline. One subcommand per capability; all
//! outputs are JSON (or CSV for tables) with an embedded run manifest.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use rbeta::field::{parse_rational, FieldContext};
use rbeta::measures::{build_lebesgue_chain, build_measure, novelty_check};
use rbeta::partition::{build_partition, certify_class_b, orbit_closure, ClassBVerdict};
use rbeta::sft::build_sft;
use rbeta::simulate::{
    empirical_stats, merge_reports, orbit_check, sample_chain, MarkovSampler, SimConfig,
};
use rbeta::thermo::{depth_for_tail, power_lambda, PotentialSpec, TransferOperator};

const EXIT_VALIDATION: u8 = 2;
const EXIT_UNKNOWN_CLASS_B: u8 = 3;

#[derive(Parser)]
#[command(name = "rbeta", version, about = "Random beta-transformation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Defining polynomial coefficients, ascending degree, comma-separated
    /// (golden ratio: -1,-1,1).
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    minpoly: Vec<i64>,
    /// Isolating interval for beta as two rationals, e.g. --interval 1 2 or
    /// --interval 7/2 18/5.
    #[arg(long, num_args = 2)]
    interval: Vec<String>,
    /// Orbit budget for class-B certification.
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Directory for artifacts; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Certify class-B membership and report the size of the orbit set F.
    Classb {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Emit the refined Markov partition.
    Partition {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Emit the subshift coding (adjacency, digit labels, switch states).
    Sft {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build the g-measure for a digit-weight table theta.
    Measure {
        #[command(flatten)]
        field: FieldArgs,
        /// Comma-separated theta table, one entry per digit.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        theta: Vec<f64>,
        /// Also emit cylinder measures up to this depth as CSV.
        #[arg(long, default_value_t = 0)]
        cylinder_depth: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build the Lebesgue comparison chain for a switch probability p.
    Lebesgue {
        #[command(flatten)]
        field: FieldArgs,
        /// Rational switch probability, e.g. 1/2.
        #[arg(long)]
        p: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Transfer-operator eigendata: closed form, power iteration, residual.
    Eigen {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        theta: Vec<f64>,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        /// Cylinder depth; chosen from the tail bound when omitted.
        #[arg(long)]
        depth: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Ruelle convergence diagnostics: spread of L^k f / lambda^k over H.
    Ruelle {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        theta: Vec<f64>,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 30)]
        k_max: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compare a g-measure with the Lebesgue chains for one or more p.
    Novelty {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        theta: Vec<f64>,
        /// Comma-separated rational values of p.
        #[arg(long, value_delimiter = ',', default_value = "1/4,1/2,3/4")]
        p: Vec<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sample the chain and report empirical statistics.
    Simulate {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        theta: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        streams: u64,
        #[arg(long, default_value_t = 50)]
        k_max: usize,
        /// Enclosure depth for the conjugacy check; 0 skips it.
        #[arg(long, default_value_t = 0)]
        check_depth: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

enum CliError {
    Validation(String),
    UnknownClassB,
}

impl From<String> for CliError {
    fn from(msg: String) -> Self {
        CliError::Validation(msg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(CliError::UnknownClassB) => {
            eprintln!("error: class-B status unknown within the orbit budget");
            ExitCode::from(EXIT_UNKNOWN_CLASS_B)
        }
    }
}

fn manifest(command: &str, field: &FieldArgs, params: Value) -> Value {
    json!({
        "command": command,
        "field": {
            "minpoly": field.minpoly,
            "interval": field.interval,
        },
        "parameters": params,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "timestamp": chrono::Utc::now().to_rfc3339(),
    })
}

fn build_field(args: &FieldArgs) -> Result<Arc<FieldContext>, CliError> {
    if args.interval.len() != 2 {
        return Err(CliError::Validation("--interval needs two rationals".into()));
    }
    let lo = parse_rational(&args.interval[0]).map_err(CliError::Validation)?;
    let hi = parse_rational(&args.interval[1]).map_err(CliError::Validation)?;
    FieldContext::new(&args.minpoly, lo, hi)
        .map_err(|e| CliError::Validation(format!("field construction failed: {e}")))
}

struct Pipeline {
    ctx: Arc<FieldContext>,
    partition: rbeta::PartitionC,
    sft: rbeta::SftCoding,
}

fn build_pipeline(args: &FieldArgs) -> Result<Pipeline, CliError> {
    let ctx = build_field(args)?;
    match certify_class_b(&ctx, args.budget) {
        ClassBVerdict::Yes { .. } => {}
        ClassBVerdict::No { witness, switch_index } => {
            return Err(CliError::Validation(format!(
                "beta is not class B: orbit point {:?} (approx {}) lies inside S_{}",
                witness,
                witness.to_f64(),
                switch_index
            )));
        }
        ClassBVerdict::Unknown => return Err(CliError::UnknownClassB),
    }
    let orbit = orbit_closure(&ctx, args.budget);
    let partition = build_partition(&ctx, &orbit)
        .map_err(|e| CliError::Validation(format!("partition failed: {e}")))?;
    let sft = build_sft(&partition)
        .map_err(|e| CliError::Validation(format!("coding failed: {e}")))?;
    Ok(Pipeline {
        ctx,
        partition,
        sft,
    })
}

fn emit(out: &OutArgs, name: &str, payload: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(payload).expect("serializable");
    match &out.out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Validation(format!("cannot create {dir:?}: {e}")))?;
            let path = dir.join(name);
            std::fs::write(&path, text)
                .map_err(|e| CliError::Validation(format!("cannot write {path:?}: {e}")))
        }
    }
}

fn emit_csv(out: &OutArgs, name: &str, header: &str, rows: &[String]) -> Result<(), CliError> {
    let mut text = String::from(header);
    text.push('\n');
    for r in rows {
        text.push_str(r);
        text.push('\n');
    }
    match &out.out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Validation(format!("cannot create {dir:?}: {e}")))?;
            let path = dir.join(name);
            std::fs::write(&path, text)
                .map_err(|e| CliError::Validation(format!("cannot write {path:?}: {e}")))
        }
    }
}

fn parse_p(s: &str) -> Result<BigRational, CliError> {
    parse_rational(s).map_err(CliError::Validation)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Classb { field, out } => {
            let ctx = build_field(&field)?;
            let verdict = certify_class_b(&ctx, field.budget);
            let payload = match &verdict {
                ClassBVerdict::Yes { orbit_size } => json!({
                    "manifest": manifest("classb", &field, json!({ "budget": field.budget })),
                    "field": ctx.to_json(),
                    "class_b": true,
                    "F_size": orbit_size,
                    "truncated": false,
                }),
                ClassBVerdict::No { witness, switch_index } => json!({
                    "manifest": manifest("classb", &field, json!({ "budget": field.budget })),
                    "field": ctx.to_json(),
                    "class_b": false,
                    "witness": {
                        "coeffs": witness.coeff_strings(),
                        "approx": witness.to_f64(),
                        "switch": switch_index,
                    },
                }),
                ClassBVerdict::Unknown => json!({
                    "manifest": manifest("classb", &field, json!({ "budget": field.budget })),
                    "field": ctx.to_json(),
                    "class_b": "unknown",
                    "truncated": true,
                }),
            };
            emit(&out, "classb.json", &payload)?;
            if matches!(verdict, ClassBVerdict::Unknown) {
                return Err(CliError::UnknownClassB);
            }
            Ok(())
        }
        Command::Partition { field, out } => {
            let pipe = build_pipeline(&field)?;
            let payload = json!({
                "manifest": manifest("partition", &field, json!({ "budget": field.budget })),
                "field": pipe.ctx.to_json(),
                "partition": pipe.partition.to_json(),
            });
            emit(&out, "partition.json", &payload)
        }
        Command::Sft { field, out } => {
            let pipe = build_pipeline(&field)?;
            let m = pipe
                .sft
                .check_primitive()
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let payload = json!({
                "manifest": manifest("sft", &field, json!({ "budget": field.budget })),
                "sft": pipe.sft.to_json(),
                "primitive_power": m,
            });
            emit(&out, "sft.json", &payload)
        }
        Command::Measure {
            field,
            theta,
            cylinder_depth,
            out,
        } => {
            let pipe = build_pipeline(&field)?;
            let rep = build_measure(&pipe.sft, &theta)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let report = rep.entropy_pressure(&theta);
            let payload = json!({
                "manifest": manifest("measure", &field, json!({ "theta": theta })),
                "measure": rep.to_json(),
                "entropy": report.entropy,
                "pressure_check": report.pressure_check,
            });
            emit(&out, "measure.json", &payload)?;
            if cylinder_depth > 0 {
                let mut rows = Vec::new();
                let mut words: Vec<Vec<usize>> =
                    (0..pipe.sft.n_states).map(|s| vec![s]).collect();
                for depth in 1..=cylinder_depth {
                    for w in &words {
                        let mu = rep.cylinder_measure(w).expect("admissible");
                        let word = w
                            .iter()
                            .map(|s| s.to_string())
                            .collect::<Vec<_>>()
                            .join("-");
                        rows.push(format!("{word},{mu}"));
                    }
                    if depth < cylinder_depth {
                        let mut next = Vec::new();
                        for w in &words {
                            for j in 0..pipe.sft.n_states {
                                if pipe.sft.is_edge(*w.last().unwrap(), j) {
                                    let mut e = w.clone();
                                    e.push(j);
                                    next.push(e);
                                }
                            }
                        }
                        words = next;
                    }
                }
                emit_csv(&out, "cylinders.csv", "word,measure", &rows)?;
            }
            Ok(())
        }
        Command::Lebesgue { field, p, out } => {
            let pipe = build_pipeline(&field)?;
            let p = parse_p(&p)?;
            let chain = build_lebesgue_chain(&pipe.partition, &pipe.sft, p)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let payload = json!({
                "manifest": manifest("lebesgue", &field, json!({ "p": chain.p.to_string() })),
                "chain": chain.to_json(),
            });
            emit(&out, "lebesgue.json", &payload)
        }
        Command::Eigen {
            field,
            theta,
            alpha,
            depth,
            out,
        } => {
            let pipe = build_pipeline(&field)?;
            let spec = PotentialSpec::new(theta.clone(), alpha)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let depth = depth.unwrap_or_else(|| depth_for_tail(&spec, 1e-8));
            let tail_bound = spec.variation_tail((depth - 1) as u32);
            let power = power_lambda(&pipe.sft, &spec, depth, 500 + 10 * depth, 1e-9)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            // residual needs the dense table; cap its depth by table size
            let mut residual_depth = depth.min(12);
            let (residual, residual_bound) = loop {
                match TransferOperator::new(&pipe.sft, &spec, residual_depth) {
                    Ok(op) => break (op.eigen_residual(), op.eigen_residual_bound()),
                    Err(_) if residual_depth > 2 => residual_depth -= 1,
                    Err(e) => return Err(CliError::Validation(e.to_string())),
                }
            };
            let payload = json!({
                "manifest": manifest("eigen", &field, json!({
                    "theta": theta, "alpha": alpha, "depth": depth,
                })),
                "lambda_closed_form": spec.lambda_closed_form(),
                "lambda_power_iter": power.lambda,
                "residual": residual,
                "residual_bound": residual_bound,
                "residual_depth": residual_depth,
                "depth": depth,
                "tail_bound": tail_bound,
            });
            emit(&out, "eigen.json", &payload)
        }
        Command::Ruelle {
            field,
            theta,
            alpha,
            depth,
            k_max,
            out,
        } => {
            let pipe = build_pipeline(&field)?;
            let spec = PotentialSpec::new(theta.clone(), alpha)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let op = TransferOperator::new(&pipe.sft, &spec, depth)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let report = op
                .ruelle_check(&op.constant(1.0), k_max)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let payload = json!({
                "manifest": manifest("ruelle", &field, json!({
                    "theta": theta, "alpha": alpha, "depth": depth, "k_max": k_max,
                })),
                "spreads": report.spreads,
                "final_ratio": report.final_ratio,
            });
            emit(&out, "ruelle.json", &payload)
        }
        Command::Novelty {
            field,
            theta,
            p,
            out,
        } => {
            let pipe = build_pipeline(&field)?;
            let rep = build_measure(&pipe.sft, &theta)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let mut verdicts = Vec::new();
            for ps in &p {
                let pr = parse_p(ps)?;
                let chain = build_lebesgue_chain(&pipe.partition, &pipe.sft, pr)
                    .map_err(|e| CliError::Validation(e.to_string()))?;
                let report = novelty_check(&rep, &chain, &pipe.partition);
                verdicts.push(json!({
                    "p": ps,
                    "distinct": report.distinct,
                    "witness_edge": report.witness.map(|(i, j, a, b)| json!({
                        "from": i, "to": j, "g_measure": a, "g_chain": b,
                    })),
                    "scalar_condition_holds": report.scalar_condition_holds,
                    "w_top_digit": report.w_top_digit,
                    "one_over_beta": report.one_over_beta,
                }));
            }
            let payload = json!({
                "manifest": manifest("novelty", &field, json!({ "theta": theta, "p": p })),
                "verdicts": verdicts,
            });
            emit(&out, "novelty.json", &payload)
        }
        Command::Simulate {
            field,
            theta,
            steps,
            seed,
            streams,
            k_max,
            check_depth,
            out,
        } => {
            if streams == 0 {
                return Err(CliError::Validation("--streams must be at least 1".into()));
            }
            if check_depth != 0 && check_depth < 3 {
                return Err(CliError::Validation(
                    "--check-depth must be 0 (off) or at least 3".into(),
                ));
            }
            let pipe = build_pipeline(&field)?;
            let rep = build_measure(&pipe.sft, &theta)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let sampler = MarkovSampler::from_measure(&rep);
            let mut reports = Vec::new();
            for stream in 0..streams {
                let config = SimConfig::new(seed, steps).with_stream(stream);
                let path = sample_chain(&sampler, &config);
                let mut report = empirical_stats(&path, &pipe.sft, Some(&rep), k_max, &config)
                    .map_err(|e| CliError::Validation(e.to_string()))?;
                if check_depth >= 3 {
                    let check = orbit_check(&pipe.ctx, &pipe.partition, &pipe.sft, &path, check_depth)
                        .map_err(|e| CliError::Validation(e.to_string()))?;
                    report.conjugacy_violations = Some(check.violations);
                }
                reports.push(report);
            }
            let merged = merge_reports(&reports);
            let payload = json!({
                "manifest": manifest("simulate", &field, json!({
                    "theta": theta, "steps": steps, "seed": seed,
                    "streams": streams, "k_max": k_max, "check_depth": check_depth,
                })),
                "report": serde_json::to_value(&merged).expect("serializable"),
            });
            emit(&out, "simulate.json", &payload)?;
            let corr_rows: Vec<String> = merged
                .correlation
                .iter()
                .enumerate()
                .map(|(lag, rho)| format!("{lag},{rho}"))
                .collect();
            emit_csv(&out, "correlation.csv", "lag,rho", &corr_rows)?;
            let cyl_rows: Vec<String> = merged
                .cylinder_freqs
                .iter()
                .map(|c| {
                    format!(
                        "{},{},{}",
                        c.word,
                        c.frequency,
                        c.measure.map(|m| m.to_string()).unwrap_or_default()
                    )
                })
                .collect();
            emit_csv(&out, "cylinders.csv", "word,frequency,measure", &cyl_rows)
        }
    }
}
