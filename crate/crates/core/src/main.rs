use clap::{Parser, Subcommand};
use spinor_verify::chars::CharTable;
use spinor_verify::cli::{self, Cache, CheckSpec, CliError, Config};
use spinor_verify::exactalg::{from_text, VarContext, VarKind};
use spinor_verify::report::Status;
use spinor_verify::weyl;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "spinor-verify",
    about = "Exact verification of the algebraic identities behind an \
             unramified Rankin-Selberg computation on GSO(12)",
    version
)]
struct Args {
    /// Flat key=value configuration file; flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Cache directory (default: $SPINOR_VERIFY_CACHE_DIR or .cache).
    #[arg(long, global = true)]
    cache_dir: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every registered check.
    ListChecks,
    /// Run one check (or `all`) and write its JSON report.
    Verify {
        /// Check id from `list-checks`, or `all`.
        id: String,
        #[arg(long)]
        degree: Option<u32>,
        /// Secondary x,y-truncation for the master identity.
        #[arg(long)]
        xy_degree: Option<u32>,
        #[arg(long)]
        prime: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        /// Residue cardinality for the numeric checks.
        #[arg(long)]
        q: Option<f64>,
        /// Exact rational, e.g. 1/8.
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        mode: Option<String>,
        /// Perturb one transcribed coefficient (detection-power test).
        #[arg(long)]
        mutate: Option<usize>,
    },
    /// Aggregate report files into a table or JSON document.
    Report {
        #[arg(long, default_value = "text")]
        format: String,
        /// Report files; defaults to every report under the cache directory.
        paths: Vec<PathBuf>,
    },
    /// Decompose a serialized character polynomial (over a, b, c, d) into
    /// irreducibles, as JSON.
    Decompose {
        /// File with one term per line: "num/den; ea,eb,ec,ed".
        input: PathBuf,
    },
    /// Print the 25 minimal double-coset representatives with signatures.
    CosetEnum {
        #[arg(long)]
        json: bool,
    },
    /// Orbit census of the parabolic subgroups on the rank-six quadric.
    OrbitTable {
        /// Field size (3, 5 or 7).
        #[arg(long = "q")]
        q: u32,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let args = Args::parse();
    match dispatch(args) {
        Ok(code) => code,
        Err(e @ (CliError::UnknownId(_) | CliError::BadParameter(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(args: Args) -> Result<ExitCode, CliError> {
    let config = Config::load(args.config.as_deref())?;
    let cache_dir = args
        .cache_dir
        .clone()
        .or_else(|| config.0.get("cache_dir").cloned());
    let cache = Cache::open(cache_dir.as_deref())?;
    match args.command {
        Command::ListChecks => {
            for def in cli::CHECKS {
                println!("{:<24} {}", def.id, def.summary);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            id,
            degree,
            xy_degree,
            prime,
            seed,
            samples,
            tol,
            q,
            x,
            y,
            mode,
            mutate,
        } => {
            let spec = CheckSpec {
                id: id.clone(),
                degree: degree.or(config.get("degree")?),
                xy_degree: xy_degree.or(config.get("xy_degree")?),
                prime: prime.or(config.get("prime")?),
                seed: seed.or(config.get("seed")?),
                samples: samples.or(config.get("samples")?),
                tol: tol.or(config.get("tol")?),
                q: q.or(config.get("q")?),
                x: x.map(|s| cli::parse_rational(&s)).transpose()?,
                y: y.map(|s| cli::parse_rational(&s)).transpose()?,
                n: None,
                mode,
                mutate,
            };
            let reports = if id == "all" {
                cli::run_all(&cache)?
            } else {
                vec![cli::run(&spec, &cache)?]
            };
            for r in &reports {
                println!(
                    "{:<24} {:<8} {}",
                    r.check,
                    format!("{:?}", r.status).to_lowercase(),
                    r.residual
                );
            }
            Ok(if reports.iter().all(|r| r.status != Status::Fail) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Report { format, paths } => {
            let paths = if paths.is_empty() {
                cli::reports_in_dir(&cache.dir.join("reports"))?
            } else {
                paths
            };
            let reports = cli::load_reports(&paths)?;
            match format.as_str() {
                "json" => print!("{}", cli::render_json(&reports)),
                "text" => print!("{}", cli::render_text(&reports)),
                other => {
                    return Err(CliError::BadParameter(format!(
                        "unknown report format {other}"
                    )))
                }
            }
            Ok(ExitCode::from(cli::aggregate_status(&reports) as u8))
        }
        Command::Decompose { input } => {
            let table = CharTable::new();
            let ctx = VarContext::new(
                ["a", "b", "c", "d"]
                    .iter()
                    .map(|v| (v.to_string(), VarKind::Laurent))
                    .collect(),
                None,
            );
            let text = std::fs::read_to_string(&input)?;
            let p = from_text(&ctx, &text)
                .map_err(|e| CliError::Other(format!("bad character polynomial: {e}")))?;
            let dec = table
                .decompose(&p)
                .map_err(|e| CliError::Other(format!("not a genuine character: {e}")))?;
            let items: Vec<serde_json::Value> = dec
                .iter()
                .map(|(w, m)| {
                    serde_json::json!({
                        "weight": [w.n1, w.n2, w.m3, w.m4],
                        "multiplicity": m,
                        "dimension": w.dimension() as u64,
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::Value::Array(items)).unwrap()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::CosetEnum { json } => {
            let (reps, report) = weyl::min_double_coset_census();
            if json {
                let items: Vec<serde_json::Value> = reps
                    .iter()
                    .map(|(w, sig)| {
                        serde_json::json!({
                            "permutation": (1..=12).map(|i| w.image(i)).collect::<Vec<_>>(),
                            "cycles": w.cycle_string(),
                            "length": weyl::DRootDatum::new(6).length(w),
                            "signature": sig,
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "count": reps.len(),
                        "representatives": items,
                    }))
                    .unwrap()
                );
            } else {
                let datum = weyl::DRootDatum::new(6);
                println!(
                    "{:<4} {:<28} {:<7} {:<12} {}",
                    "#", "images of 1..12", "length", "signature", "cycles"
                );
                for (k, (w, sig)) in reps.iter().enumerate() {
                    let imgs: Vec<String> =
                        (1..=12).map(|i| w.image(i).to_string()).collect();
                    println!(
                        "{:<4} {:<28} {:<7} {:<12} {}",
                        k + 1,
                        imgs.join(","),
                        datum.length(w),
                        format!("{:?}", sig),
                        w.cycle_string()
                    );
                }
            }
            Ok(if report.status == Status::Pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::OrbitTable { q, json } => {
            if ![3, 5, 7].contains(&q) {
                return Err(CliError::BadParameter(format!("q = {q} not in {{3,5,7}}")));
            }
            let (rows, report) = weyl::orbit_table_check(q);
            if json {
                let items: Vec<serde_json::Value> = rows
                    .iter()
                    .map(|r| {
                        serde_json::json!({
                            "subset": r.subset,
                            "orbits": r.orbit_count,
                            "quadric_points": r.quadric_size,
                            "rep_orbits": r.rep_orbits,
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&items).unwrap());
            } else {
                println!(
                    "{:<12} {:<7} {:<16} {}",
                    "S", "orbits", "rep orbit ids", "quadric points"
                );
                for r in &rows {
                    println!(
                        "{:<12} {:<7} {:<16} {}",
                        format!("{:?}", r.subset),
                        r.orbit_count,
                        format!("{:?}", r.rep_orbits),
                        r.quadric_size
                    );
                }
            }
            Ok(if report.status != Status::Fail {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
