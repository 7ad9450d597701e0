//! `raag`: command-line front end for raag-core.
//!
//! Exit codes: 0 success, 1 other failure, 2 unparseable input, 3 cap exceeded,
//! 4 a verification ran and did not pass.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use raag_core::compat::{default_cache_dir, CompatibilityGraph};
use raag_core::families::FamilySpec;
use raag_core::hugging::{
    verify_hug_transfer, verify_lemma_conclusions, verify_oversize_hugged, verify_replacement, ReplacementScope,
};
use raag_core::report::{MaxSetRecord, RetractionSummary, SCHEMA_VERSION};
use raag_core::retraction::{BatchOrder, DEFAULT_CUBE_CAP};
use raag_core::{
    analyze, build_star, check_conditions, classify_vertices, crosscheck_survivors, enumerate_partitions,
    max_compatible, retract, whitehead_images, Error, HugIndex, HugMode, Partition, RetractOptions, SimplicialGraph,
    Verdict,
};

#[derive(Parser)]
#[command(
    name = "raag",
    version,
    about = "Whitehead partitions and spine computations for RAAGs"
)]
struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Build the compatibility graph from scratch instead of using the cache.
    #[arg(long, global = true)]
    no_cache: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct GraphInput {
    /// Graph file, or `-` for stdin.
    #[arg(value_name = "GRAPH", conflicts_with = "graph")]
    path: Option<PathBuf>,

    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: classification, M(L), M(V), conditions and the vcd verdict.
    Analyze {
        #[command(flatten)]
        input: GraphInput,
        /// Also run the star retraction (collapsing only where faces are free).
        #[arg(long)]
        retract: bool,
        #[arg(long, default_value_t = DEFAULT_CUBE_CAP)]
        cap: usize,
    },
    /// List the partitions based at a vertex.
    Partitions {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        base: String,
    },
    /// Largest compatible set of partitions basable in a vertex set.
    MaxSet {
        #[command(flatten)]
        input: GraphInput,
        /// Comma-separated vertex names.
        #[arg(long, group = "scope")]
        vertices: Option<String>,
        #[arg(long, group = "scope")]
        principal: bool,
        #[arg(long, group = "scope")]
        all: bool,
    },
    /// Condition 1, Condition 2, spikiness, barbedness and P(k).
    Conditions {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Retract the star of a single Salvetti blowup.
    Retract {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = DEFAULT_CUBE_CAP)]
        cap: usize,
        /// Write the full trace as JSON.
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
        /// Skip cubes without a free face and run on non-spiky graphs.
        #[arg(long)]
        permissive: bool,
        /// Process each batch in reverse order.
        #[arg(long)]
        reverse: bool,
        /// Require hugging dominators to be principal.
        #[arg(long)]
        strict_hugs: bool,
    },
    /// Exhaustively check one of the hugging lemmas.
    Verify {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_enum)]
        lemma: Lemma,
        #[arg(long, default_value_t = 10_000_000)]
        budget: usize,
        /// Replacement check: bases allowed for the first hugged partition.
        #[arg(long)]
        first: Option<String>,
        /// Replacement check: bases allowed for the second hugged partition.
        #[arg(long)]
        second: Option<String>,
        /// Replacement check: bases allowed for the principal partition.
        #[arg(long)]
        principal_bases: Option<String>,
        #[arg(long)]
        strict_hugs: bool,
    },
    /// Images of the generators under a Whitehead automorphism.
    ApplyAut {
        #[command(flatten)]
        input: GraphInput,
        /// Comma-separated letters of the side containing the base, e.g. "a1,u".
        #[arg(long)]
        side: String,
        /// Base letter, e.g. `a1` or `a1^-1`.
        #[arg(long)]
        base: String,
    },
    /// Print a generated graph in the text format.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Inner family for `rake-like`.
        #[arg(long)]
        inner: Option<String>,
        #[arg(long)]
        inner_n: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Lemma {
    /// Every compatible set larger than M(L) has a hugged member.
    Oversize,
    /// Partitions compatible with the huggers of Q are compatible with Q.
    #[value(alias = "cond1")]
    HugTransfer,
    /// Principal partitions compatible with two hugger sets meet one hugged partition.
    #[value(alias = "cond2-conclusion")]
    Replacement,
    /// Both conclusions together with the two conditions.
    Conclusions,
}

/// A failed check that already printed its report.
#[derive(Debug)]
struct CheckFailed;

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("check did not pass")
    }
}

impl std::error::Error for CheckFailed {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if e.downcast_ref::<CheckFailed>().is_some() {
                return ExitCode::from(4);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.chain().find_map(|c| c.downcast_ref::<Error>()) {
        Some(
            Error::Parse { .. } | Error::UnknownVertex(_) | Error::InvalidPartition(_) | Error::TooManyVertices(_),
        ) => 2,
        Some(Error::CapExceeded { .. }) => 3,
        _ => 1,
    }
}

fn read_graph(input: &GraphInput) -> anyhow::Result<SimplicialGraph> {
    let path = input
        .path
        .as_ref()
        .or(input.graph.as_ref())
        .map(PathBuf::as_path)
        .unwrap_or(Path::new("-"));
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    let g: SimplicialGraph = text.parse()?;
    for w in g.warnings() {
        log::warn!("{w}");
    }
    Ok(g)
}

fn compat(cli: &Cli, g: &SimplicialGraph) -> anyhow::Result<CompatibilityGraph> {
    if cli.no_cache {
        return Ok(CompatibilityGraph::build(g)?);
    }
    Ok(CompatibilityGraph::load_or_build(g, &default_cache_dir())?.0)
}

fn vertex_list(g: &SimplicialGraph, list: &str) -> anyhow::Result<raag_core::VertexSet> {
    let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    Ok(g.vertex_set(&names)?)
}

fn emit(cli: &Cli, value: Value, text: impl FnOnce() -> String) -> anyhow::Result<()> {
    let out = match cli.format {
        Format::Json => serde_json::to_string_pretty(&value)? + "\n",
        Format::Text => text(),
    };
    write_stdout(&out)
}

/// A closed pipe on the reading end is not an error.
fn write_stdout(s: &str) -> anyhow::Result<()> {
    match std::io::stdout().lock().write_all(s.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn hug_mode(strict: bool) -> HugMode {
    if strict {
        HugMode::Strict
    } else {
        HugMode::Relaxed
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Analyze {
            input,
            retract: with_retraction,
            cap,
        } => {
            let g = read_graph(input)?;
            let cg = compat(cli, &g)?;
            let mut report = analyze(&g, &cg)?;
            if *with_retraction {
                let star = build_star(&cg, *cap)?;
                let trace = retract(&g, &cg, &star, &RetractOptions::permissive())?;
                let survivors_match = if trace.skipped.is_empty() {
                    let index = HugIndex::new(&g, &cg, HugMode::Relaxed)?;
                    Some(crosscheck_survivors(&cg, &index, &star, &trace)?.passed())
                } else {
                    None
                };
                report.retraction = Some(RetractionSummary {
                    events: trace.events.len(),
                    before: trace.before,
                    after: trace.after,
                    survivors_match,
                });
            }
            emit(cli, serde_json::to_value(&report)?, || report.to_string())
        }
        Command::Partitions { input, base } => {
            let g = read_graph(input)?;
            let v = g.vertex(base)?;
            let r = enumerate_partitions(&g, v)?;
            let value = json!({
                "schema_version": SCHEMA_VERSION,
                "base": base,
                "count": r.partitions.len(),
                "partitions": r.partitions.iter().map(|p| p.to_json(&g)).collect::<Vec<_>>(),
                "note": r.note,
            });
            emit(cli, value, || {
                let mut s = format!("{} partition(s) based at {base}\n", r.partitions.len());
                for p in &r.partitions {
                    s += &format!("  {}\n", p.display(&g));
                }
                if let Some(n) = &r.note {
                    s += &format!("note: {n}\n");
                }
                s
            })
        }
        Command::MaxSet {
            input,
            vertices,
            principal,
            all,
        } => {
            let g = read_graph(input)?;
            let w = match (vertices, principal, all) {
                (Some(list), _, _) => vertex_list(&g, list)?,
                (None, true, _) => classify_vertices(&g).principal,
                (None, false, true) => g.all(),
                _ => bail!("one of --vertices, --principal or --all is required"),
            };
            let cg = compat(cli, &g)?;
            let r = MaxSetRecord::new(&g, &cg, &max_compatible(&cg, w));
            let mut value = serde_json::to_value(&r)?;
            value["schema_version"] = json!(SCHEMA_VERSION);
            emit(cli, value, || {
                let mut s = format!("M({}) = {}\n", r.restricted_to.join(","), r.size);
                for p in &r.witness {
                    s += &format!("  {{{}}} | {{{}}}\n", p.side_a.join(","), p.side_b.join(","));
                }
                s
            })
        }
        Command::Conditions { input } => {
            let g = read_graph(input)?;
            let r = check_conditions(&g)?;
            let mut value = serde_json::to_value(&r)?;
            value["schema_version"] = json!(SCHEMA_VERSION);
            emit(cli, value, || {
                let mut s = String::new();
                s += &format!("condition 1: {}\n", r.condition1.holds);
                for v in &r.condition1.violations {
                    s += &format!("  u = {}, u' = {}, m = {}\n", v.u, v.u_prime, v.m);
                }
                s += &format!("condition 2: {}\n", r.condition2.holds);
                for v in &r.condition2.violations {
                    s += &format!("  u = {}, m = {}, n = {}\n", v.u, v.m, v.n);
                }
                s += &format!("spiky: {}\n", r.spiky);
                s += &format!("barbed: {}\n", r.barbed.holds);
                for v in &r.barbed.violations {
                    s += &format!("  u = {}, v = {}\n", v.u, v.v);
                }
                s += &format!(
                    "P(k): k = {} (principal maximal dominators: {})\n",
                    r.p_k, r.p_k_principal_maximal
                );
                s
            })
        }
        Command::Retract {
            input,
            cap,
            trace: trace_path,
            permissive,
            reverse,
            strict_hugs,
        } => {
            let g = read_graph(input)?;
            let cg = compat(cli, &g)?;
            let star = build_star(&cg, *cap)?;
            let base = if *permissive {
                RetractOptions::permissive()
            } else {
                RetractOptions::default()
            };
            let opts = RetractOptions {
                batch_order: if *reverse {
                    BatchOrder::Reverse
                } else {
                    BatchOrder::Forward
                },
                hug_mode: hug_mode(*strict_hugs),
                ..base
            };
            let trace = retract(&g, &cg, &star, &opts)?;
            let survivors = if trace.skipped.is_empty() {
                let index = HugIndex::new(&g, &cg, opts.hug_mode)?;
                Some(crosscheck_survivors(&cg, &index, &star, &trace)?)
            } else {
                None
            };
            if let Some(path) = trace_path {
                let mut value = serde_json::to_value(&trace)?;
                value["schema_version"] = json!(SCHEMA_VERSION);
                std::fs::write(path, serde_json::to_string(&value)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let value = json!({
                "schema_version": SCHEMA_VERSION,
                "events": trace.events.len(),
                "skipped": trace.skipped.len(),
                "before": trace.before,
                "after": trace.after,
                "survivors_match": survivors.as_ref().map(|s| s.passed()),
            });
            emit(cli, value, || {
                let stats = |s: &raag_core::retraction::ComplexStats| {
                    format!(
                        "dimension {:?}, f-vector {:?}, euler {}",
                        s.dimension, s.f_vector, s.euler_characteristic
                    )
                };
                let mut s = format!("before: {}\n", stats(&trace.before));
                s += &format!("after:  {}\n", stats(&trace.after));
                s += &format!("collapses: {}, skipped: {}\n", trace.events.len(), trace.skipped.len());
                if let Some(c) = &survivors {
                    s += &format!("survivor crosscheck: {}\n", if c.passed() { "pass" } else { "fail" });
                }
                s
            })
        }
        Command::Verify {
            input,
            lemma,
            budget,
            first,
            second,
            principal_bases,
            strict_hugs,
        } => {
            let g = read_graph(input)?;
            let cg = compat(cli, &g)?;
            let index = HugIndex::new(&g, &cg, hug_mode(*strict_hugs))?;
            let scope = if first.is_none() && second.is_none() && principal_bases.is_none() {
                ReplacementScope::All
            } else {
                let set = |x: &Option<String>| x.as_deref().map_or(Ok(g.all()), |l| vertex_list(&g, l));
                ReplacementScope::Restricted {
                    first: set(first)?,
                    second: set(second)?,
                    principal: set(principal_bases)?,
                }
            };
            let (value, verdicts) = match lemma {
                Lemma::Oversize => {
                    let v = verify_oversize_hugged(&g, &cg, &index, *budget)?;
                    (serde_json::to_value(&v)?, vec![("oversize", v)])
                }
                Lemma::HugTransfer => {
                    let v = verify_hug_transfer(&g, &cg, &index, *budget);
                    (serde_json::to_value(&v)?, vec![("hug transfer", v)])
                }
                Lemma::Replacement => {
                    let v = verify_replacement(&g, &cg, &index, *budget, &scope);
                    (serde_json::to_value(&v)?, vec![("replacement", v)])
                }
                Lemma::Conclusions => {
                    let r = verify_lemma_conclusions(&g, &cg, &index, *budget, &scope)?;
                    let value = serde_json::to_value(&r)?;
                    (
                        value,
                        vec![("hug transfer", r.hug_transfer), ("replacement", r.replacement)],
                    )
                }
            };
            let mut value = value;
            value["schema_version"] = json!(SCHEMA_VERSION);
            let passed = verdicts.iter().all(|(_, v)| v.passed());
            emit(cli, value, || {
                let mut s = String::new();
                for (name, v) in &verdicts {
                    s += &match v {
                        Verdict::Pass { checked } => format!("{name}: pass ({checked} checked)\n"),
                        Verdict::Fail {
                            checked,
                            counterexample,
                        } => {
                            format!("{name}: FAIL after {checked} checked\n  {counterexample}\n")
                        }
                        Verdict::Inconclusive { checked, reason } => {
                            format!("{name}: inconclusive after {checked} checked ({reason})\n")
                        }
                    };
                }
                s
            })?;
            if passed {
                Ok(())
            } else {
                Err(CheckFailed.into())
            }
        }
        Command::ApplyAut { input, side, base } => {
            let g = read_graph(input)?;
            let tokens: Vec<&str> = side.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let side_set = g.signed_set(&tokens)?;
            let m = g.signed(base)?;
            let p = Partition::from_side(&g, m.vertex(), side_set)?;
            let images = whitehead_images(&g, &p, m)?;
            let table: Vec<(String, String)> = images
                .iter()
                .map(|(v, w)| (g.name(*v).to_string(), w.render(&g)))
                .collect();
            let value = json!({
                "schema_version": SCHEMA_VERSION,
                "partition": p.to_json(&g),
                "base": base,
                "images": table.iter().map(|(v, w)| json!({"generator": v, "image": w})).collect::<Vec<_>>(),
            });
            emit(cli, value, || {
                let mut s = format!("partition: {}\n", p.display(&g));
                for (v, w) in &table {
                    s += &format!("  {v} -> {w}\n");
                }
                s
            })
        }
        Command::Gen {
            family,
            d,
            n,
            inner,
            inner_n,
        } => {
            let inner = inner
                .as_deref()
                .map(|name| FamilySpec::from_name(name, None, *inner_n, None))
                .transpose()?;
            let g = FamilySpec::from_name(family, *d, *n, inner)?.generate()?;
            write_stdout(&g.canonical_text())
        }
    }
}
