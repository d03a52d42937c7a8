//! `domset`: run the constant-round dominating set approximation on a file
//! or generated instance, check every applicable size bound, and emit
//! machine-readable reports.
//!
//! Exit codes: 0 when all applicable bound checks pass, 1 when any check
//! fails, 2 on usage or I/O errors.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser};
use num::rational::Ratio;

use domset::experiment::{
    run_experiment, ExperimentConfig, InstanceSpec, OracleChoice,
};
use domset::oracle::EXACT_GUARD;
use domset::params::{parse_ratio, ParamOverrides, Params, TMode};
use domset::phases::{debug_dump, Mode};
use domset::report::ReportWriter;

#[derive(Parser)]
#[command(name = "domset", version, about = "Dominating set approximation harness")]
enum Cli {
    /// Run the algorithm and emit one report row per instance.
    Run(RunArgs),
    /// Emit a generated instance in the edge-list format.
    Gen(GenArgs),
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// Key-value config file; command-line flags win over file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Edge-list input file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Generator name: grid | tri-grid | counterexample | twin-stars | random.
    #[arg(long)]
    generator: Option<String>,
    /// Generator arguments, e.g. "w=5,h=5" or "n=100,d=3".
    #[arg(long)]
    gen_args: Option<String>,
    /// Assumed upper bound on the 1-shallow-minor density, e.g. "3" or "5/2".
    #[arg(long)]
    nabla1: Option<String>,
    /// Biclique bound source: exact | bound | <integer>.
    #[arg(long)]
    t: Option<String>,
    /// reference | distributed | both.
    #[arg(long)]
    mode: Option<String>,
    /// exact | greedy | auto.
    #[arg(long)]
    oracle: Option<String>,
    /// Vertex-count guard for the exact oracle.
    #[arg(long)]
    oracle_guard: Option<usize>,
    /// Seed for random generation.
    #[arg(long)]
    seed: Option<u64>,
    /// Half-open seed range "A..B" for a batch of random instances.
    #[arg(long)]
    seeds: Option<String>,
    /// Override the minimum pseudo-cover gain (marks the run nonconforming).
    #[arg(long)]
    override_ell: Option<u64>,
    /// Override the residual cap (marks the run nonconforming).
    #[arg(long)]
    override_q: Option<u64>,
    /// Override witness thresholds, comma separated (nonconforming).
    #[arg(long)]
    override_thresholds: Option<String>,
    /// Report path; stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
    /// csv | jsonl.
    #[arg(long)]
    format: Option<String>,
    /// Dump enumeration traces for each instance to stderr.
    #[arg(long)]
    verbose: bool,
}

#[derive(Args, Debug)]
struct GenArgs {
    /// Generator name: grid | tri-grid | counterexample | twin-stars | random.
    #[arg(long)]
    generator: String,
    /// Generator arguments, e.g. "gamma=2,m=3".
    #[arg(long)]
    gen_args: Option<String>,
    /// Seed for random generation.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match Cli::parse() {
        Cli::Run(args) => match run_command(args) {
            Ok(all_passed) => {
                if all_passed {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(message) => {
                eprintln!("error: {message}");
                ExitCode::from(2)
            }
        },
        Cli::Gen(args) => match gen_command(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(message) => {
                eprintln!("error: {message}");
                ExitCode::from(2)
            }
        },
    }
}

/// Values from a key-value config file. Keys use the long flag spelling
/// with dashes; `key = value` and `key value` both parse, `#` comments.
fn parse_config_file(path: &PathBuf) -> Result<BTreeMap<String, String>, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => line
                .split_once(char::is_whitespace)
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| {
                    format!("{}:{}: expected `key = value`", path.display(), idx + 1)
                })?,
        };
        if value.is_empty() {
            return Err(format!("{}:{}: empty value for {key}", path.display(), idx + 1));
        }
        map.insert(key.replace('_', "-"), value.to_string());
    }
    Ok(map)
}

struct Resolved {
    config: ExperimentConfig,
    report: Option<PathBuf>,
    format: String,
    verbose: bool,
}

fn resolve(args: RunArgs) -> Result<Resolved, String> {
    let file = match &args.config {
        Some(path) => parse_config_file(path)?,
        None => BTreeMap::new(),
    };
    let from_file = |key: &str| file.get(key).cloned();
    let pick_string = |cli: Option<String>, key: &str| cli.or_else(|| from_file(key));
    let pick_parsed = |cli: Option<u64>, key: &str| -> Result<Option<u64>, String> {
        match cli {
            Some(v) => Ok(Some(v)),
            None => from_file(key)
                .map(|v| v.parse::<u64>().map_err(|_| format!("invalid {key}: {v:?}")))
                .transpose(),
        }
    };

    let input = args
        .input
        .or_else(|| from_file("input").map(PathBuf::from));
    let generator = pick_string(args.generator, "generator");
    let gen_args = pick_string(args.gen_args, "gen-args");
    let instance = match (input, generator) {
        (Some(_), Some(_)) => {
            return Err("give either --input or --generator, not both".into())
        }
        (None, None) => return Err("an --input file or a --generator is required".into()),
        (Some(path), None) => InstanceSpec::File(path),
        (None, Some(name)) => instance_from_generator(&name, gen_args.as_deref())?,
    };

    let nabla1 = pick_string(args.nabla1, "nabla1")
        .ok_or_else(|| "--nabla1 is required".to_string())?;
    let density_bound = parse_ratio(&nabla1).map_err(|e| format!("invalid --nabla1: {e}"))?;

    let t_mode = match pick_string(args.t, "t").as_deref() {
        None | Some("exact") => TMode::Exact,
        Some("bound") => TMode::Bound,
        Some(text) => TMode::Fixed(
            text.parse::<u32>()
                .map_err(|_| format!("invalid --t: {text:?}"))?,
        ),
    };

    let mode = match pick_string(args.mode, "mode").as_deref() {
        None | Some("both") => Mode::Both,
        Some("reference") => Mode::Reference,
        Some("distributed") => Mode::Distributed,
        Some(other) => return Err(format!("invalid --mode: {other:?}")),
    };

    let oracle = match pick_string(args.oracle, "oracle").as_deref() {
        None | Some("auto") => OracleChoice::Auto,
        Some("exact") => OracleChoice::Exact,
        Some("greedy") => OracleChoice::Greedy,
        Some(other) => return Err(format!("invalid --oracle: {other:?}")),
    };

    let oracle_guard = match args.oracle_guard {
        Some(v) => v,
        None => from_file("oracle-guard")
            .map(|v| v.parse::<usize>().map_err(|_| format!("invalid oracle-guard: {v:?}")))
            .transpose()?
            .unwrap_or(EXACT_GUARD),
    };

    let overrides = ParamOverrides {
        min_gain: pick_parsed(args.override_ell, "override-ell")?,
        residual_cap: pick_parsed(args.override_q, "override-q")?,
        thresholds: match pick_string(args.override_thresholds, "override-thresholds") {
            Some(text) => Some(
                text.split(',')
                    .map(|part| {
                        part.trim()
                            .parse::<u64>()
                            .map_err(|_| format!("invalid threshold {part:?}"))
                    })
                    .collect::<Result<Vec<u64>, String>>()?,
            ),
            None => None,
        },
    };

    let seed = pick_parsed(args.seed, "seed")?;
    let seeds = match pick_string(args.seeds, "seeds") {
        Some(text) => parse_seed_range(&text)?,
        None => vec![seed.unwrap_or(0)],
    };

    let report = args.report.or_else(|| from_file("report").map(PathBuf::from));
    let format = pick_string(args.format, "format").unwrap_or_else(|| "csv".into());
    if format != "csv" && format != "jsonl" {
        return Err(format!("invalid --format: {format:?}"));
    }

    let mut config = ExperimentConfig::new(instance, density_bound);
    config.t_mode = t_mode;
    config.mode = mode;
    config.oracle = oracle;
    config.oracle_guard = oracle_guard;
    config.overrides = overrides;
    config.seeds = seeds;
    Ok(Resolved {
        config,
        report,
        format,
        verbose: args.verbose,
    })
}

fn parse_seed_range(text: &str) -> Result<Vec<u64>, String> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| format!("invalid --seeds range {text:?}, expected A..B"))?;
    let a: u64 = a.trim().parse().map_err(|_| format!("invalid seed {a:?}"))?;
    let b: u64 = b.trim().parse().map_err(|_| format!("invalid seed {b:?}"))?;
    if a >= b {
        return Err(format!("empty seed range {text:?}"));
    }
    Ok((a..b).collect())
}

fn gen_arg_map(text: Option<&str>) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    let Some(text) = text else {
        return Ok(map);
    };
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| format!("invalid generator argument {part:?}, expected key=value"))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn instance_from_generator(name: &str, gen_args: Option<&str>) -> Result<InstanceSpec, String> {
    let map = gen_arg_map(gen_args)?;
    let get_u32 = |key: &str| -> Result<u32, String> {
        map.get(key)
            .ok_or_else(|| format!("generator {name:?} needs {key}=<int>"))?
            .parse::<u32>()
            .map_err(|_| format!("invalid {key} value"))
    };
    match name {
        "grid" => Ok(InstanceSpec::Grid {
            w: get_u32("w")?,
            h: get_u32("h")?,
        }),
        "tri-grid" | "tri_grid" => Ok(InstanceSpec::TriangulatedGrid {
            w: get_u32("w")?,
            h: get_u32("h")?,
        }),
        "counterexample" => Ok(InstanceSpec::Counterexample {
            gamma: get_u32("gamma")?,
            m: get_u32("m")?,
        }),
        "twin-stars" | "twin_stars" => Ok(InstanceSpec::TwinStars {
            d: get_u32("d")?,
            copies: get_u32("copies")?,
        }),
        "random" => {
            let d = map
                .get("d")
                .ok_or_else(|| "generator \"random\" needs d=<rational>".to_string())?;
            let d = parse_u64_ratio(d)?;
            Ok(InstanceSpec::RandomSparse {
                n: get_u32("n")?,
                d,
            })
        }
        other => Err(format!(
            "unknown generator {other:?}; expected grid, tri-grid, counterexample, twin-stars or random"
        )),
    }
}

fn parse_u64_ratio(text: &str) -> Result<Ratio<u64>, String> {
    let signed = parse_ratio(text)?;
    if *signed.numer() < 0 {
        return Err(format!("expected a nonnegative rational, got {text}"));
    }
    Ok(Ratio::new(*signed.numer() as u64, *signed.denom() as u64))
}

fn run_command(args: RunArgs) -> Result<bool, String> {
    let resolved = resolve(args)?;
    let out: Box<dyn Write> = match &resolved.report {
        Some(path) => Box::new(
            File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?,
        ),
        None => Box::new(io::stdout()),
    };
    let mut writer = match resolved.format.as_str() {
        "jsonl" => ReportWriter::json_lines(out),
        _ => ReportWriter::csv(out),
    };

    if resolved.verbose {
        dump_traces(&resolved.config)?;
    }

    let summary = run_experiment(&resolved.config, &mut |report| writer.write(report))
        .map_err(|e| e.to_string())?;
    Ok(summary.all_passed())
}

fn dump_traces(config: &ExperimentConfig) -> Result<(), String> {
    let seeds: Vec<u64> = if config.instance.uses_seed() {
        config.seeds.clone()
    } else {
        vec![0]
    };
    for seed in seeds {
        let g = config.instance.build(seed).map_err(|e| e.to_string())?;
        let params = Params::for_graph(
            &g,
            config.density_bound,
            config.t_mode,
            config.overrides.clone(),
        )
        .map_err(|e| e.to_string())?;
        eprint!("{}", debug_dump(&g, &params));
    }
    Ok(())
}

fn gen_command(args: GenArgs) -> Result<(), String> {
    let instance = instance_from_generator(&args.generator, args.gen_args.as_deref())?;
    let g = instance.build(args.seed).map_err(|e| e.to_string())?;
    let text = g.to_edge_list();
    match args.out {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
