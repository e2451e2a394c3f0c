use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use innerlim::gallery::{generate, FamilySpec, Generated};
use innerlim::gh::{gh_lower_bound, gh_upper_bound, greedy_packing, sequence_diagnostics, SequenceConfig};
use innerlim::glued::{build_glued, glued_to_json, tower_from_json, TowerJson};
use innerlim::metric::{load_space_json, restrict, FiniteMetricSpace, MetricView};
use innerlim::sampler::{inner_region, SamplePlan};
use innerlim::scenario::{builtin, builtin_names, export_report, export_space, glued_plotdata, packing_csv, run, ExportFormat, Scenario};

#[derive(Parser)]
#[command(name = "innerlim", version, about = "Inner regions, Gromov-Hausdorff diagnostics and glued limits of sampled spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// Family name, e.g. gold_foils, many_splines, annulus, book.
    #[arg(long)]
    family: String,
    /// Family index; `sequence` takes a comma-separated list.
    #[arg(long, value_delimiter = ',')]
    j: Vec<u32>,
    /// Grid spacing of sampled families.
    #[arg(long)]
    h: Option<f64>,
    /// Any other family parameter as key=value; values are read as JSON
    /// when they parse, e.g. --param heights=[1,0.5] --param r1=1.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct Output {
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: ExportFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a family and write its metric space.
    Generate {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Restrict a sampled family to its inner region.
    Inner {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        delta: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Greedy packing counts over a grid of separations.
    Pack {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        epsilon_grid: Vec<f64>,
    },
    /// Gromov-Hausdorff upper and lower bounds between two space files.
    Gh {
        x: PathBuf,
        y: PathBuf,
        #[arg(long, default_value_t = 400)]
        effort: usize,
    },
    /// Packing curves and verdict for a sequence of one family over --j.
    Sequence {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        epsilon_grid: Vec<f64>,
        /// Writes the packing curves as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the glued space of a tower manifest.
    Glue {
        tower: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Run a builtin scenario or a scenario file.
    Run {
        /// Builtin name or path; omit with --list.
        #[arg(required_unless_present = "list")]
        scenario: Option<String>,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Convert a space file to another format.
    Export {
        space: PathBuf,
        /// Point coordinates for plotdata, as a JSON array of arrays.
        #[arg(long)]
        coords: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

fn family_spec(args: &FamilyArgs, j: Option<u32>) -> Result<FamilySpec> {
    let mut doc = Map::new();
    doc.insert("family".into(), Value::String(args.family.clone()));
    if let Some(j) = j {
        doc.insert("j".into(), json!(j));
    }
    for p in &args.params {
        let (k, v) = p.split_once('=').with_context(|| format!("--param {p:?} is not key=value"))?;
        let v = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
        doc.insert(k.to_string(), v);
    }
    let mut spec: FamilySpec = serde_json::from_value(Value::Object(doc)).context("bad family parameters")?;
    let plan = spec.plan_or_default();
    spec.plan = Some(SamplePlan { seed: args.seed, ..args.h.map_or(plan, SamplePlan::new) });
    Ok(spec)
}

fn single_j(args: &FamilyArgs) -> Result<Option<u32>> {
    match args.j.as_slice() {
        [] => Ok(None),
        [j] => Ok(Some(*j)),
        _ => bail!("--j takes one value here"),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}

/// Indices of the family's points kept at `delta`, or all of them.
fn kept(g: &Generated, delta: Option<f64>) -> Result<Vec<usize>> {
    Ok(match (g, delta) {
        (Generated::Sampled(s), Some(d)) => inner_region(s, d, false).points().to_vec(),
        (_, Some(_)) => bail!("--delta needs a sampled family"),
        (Generated::Restricted(r), None) => r.points.clone(),
        (g, None) => (0..g.len()).collect(),
    })
}

fn parent(g: &Generated) -> &dyn MetricView<f64> {
    match g {
        Generated::Sampled(s) => s,
        Generated::Restricted(r) => &r.base,
        Generated::Exact(e) => &e.space,
    }
}

/// Exit code 1 when a scenario's expectations fail.
fn execute(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Generate { family, output } => {
            let g = generate(&family_spec(&family, single_j(&family)?)?)?;
            let coords = g.coords();
            emit(&export_space(&g.dense(), Some(&coords), output.format)?, output.out.as_deref())?;
        }
        Command::Inner { family, delta, output } => {
            let g = generate(&family_spec(&family, single_j(&family)?)?)?;
            let Generated::Sampled(s) = &g else { bail!("inner regions need a sampled family") };
            let inner = inner_region(s, delta, false);
            let space = inner.subspace().materialize();
            let coords: Vec<Vec<f64>> = inner.points().iter().map(|&i| s.coords()[i].to_vec()).collect();
            eprintln!("{} of {} samples kept", inner.len(), s.len());
            emit(&export_space(&space, Some(&coords), output.format)?, output.out.as_deref())?;
        }
        Command::Pack { family, delta, epsilon_grid } => {
            let g = generate(&family_spec(&family, single_j(&family)?)?)?;
            let points = kept(&g, delta)?;
            let view = restrict(parent(&g), &points)?;
            let counts: Vec<Value> =
                epsilon_grid.iter().map(|&e| json!({"epsilon": e, "count": greedy_packing(&view, e, 0).count})).collect();
            emit(&serde_json::to_string_pretty(&json!({"points": view.len(), "packing": counts}))?, None)?;
        }
        Command::Gh { x, y, effort } => {
            let a: FiniteMetricSpace<f64> = load_space_json(&x)?;
            let b: FiniteMetricSpace<f64> = load_space_json(&y)?;
            let up = gh_upper_bound(&a, &b, effort)?;
            let lo = gh_lower_bound(&a, &b)?;
            let doc = json!({"upper": up.value, "lower": lo.value, "lower_method": lo.method});
            emit(&serde_json::to_string_pretty(&doc)?, None)?;
        }
        Command::Sequence { family, delta, epsilon_grid, out } => {
            if family.j.is_empty() {
                bail!("--j needs a list of indices");
            }
            let gens = family.j.iter().map(|&j| Ok(generate(&family_spec(&family, Some(j))?)?)).collect::<Result<Vec<_>>>()?;
            let kept = gens.iter().map(|g| kept(g, delta)).collect::<Result<Vec<_>>>()?;
            let views = gens.iter().zip(&kept).map(|(g, k)| restrict(parent(g), k)).collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<_> = views.iter().collect();
            let diag = sequence_diagnostics(&refs, &epsilon_grid, &SequenceConfig::default())?;
            if let Some(p) = out {
                emit(&packing_csv(&diag)?, Some(&p))?;
            }
            emit(&serde_json::to_string_pretty(&diag)?, None)?;
        }
        Command::Glue { tower, output } => {
            let text = std::fs::read_to_string(&tower).with_context(|| format!("reading {}", tower.display()))?;
            let doc: TowerJson = serde_json::from_str(&text).context("bad tower manifest")?;
            let t = tower_from_json::<f64>(doc, tower.parent())?;
            let g = build_glued(&t)?;
            let text = match output.format {
                ExportFormat::Json => serde_json::to_string(&glued_to_json(&g))?,
                ExportFormat::Plotdata => glued_plotdata(&g)?,
                ExportFormat::Csv => export_space(&g.metric, None, ExportFormat::Csv)?,
            };
            emit(&text, output.out.as_deref())?;
        }
        Command::Run { list: true, .. } => {
            builtin_names().for_each(|n| println!("{n}"));
        }
        Command::Run { scenario, seed, output, .. } => {
            let name = scenario.expect("required unless --list");
            let mut s = match builtin(&name) {
                Some(s) => s,
                None if Path::new(&name).exists() => Scenario::load(&name)?,
                None => bail!("no builtin scenario or file named {name:?}"),
            };
            if let Some(seed) = seed {
                s.seed = seed;
            }
            let report = run(&s)?;
            for (step, secs) in report.steps.iter().zip(&report.timing) {
                let mark = if step.passed { "PASS" } else { "FAIL" };
                eprintln!("{mark} step {} {} ({secs:.1}s)", step.index, step.op);
                for c in step.checks.iter().filter(|c| !c.passed) {
                    eprintln!("    {}: {}", c.name, c.detail);
                }
            }
            emit(&export_report(&report, output.format)?, output.out.as_deref())?;
            return Ok(if report.passed { 0 } else { 1 });
        }
        Command::Export { space, coords, output } => {
            let x: FiniteMetricSpace<f64> = load_space_json(&space)?;
            let coords: Option<Vec<Vec<f64>>> = match coords {
                Some(p) => Some(serde_json::from_str(&std::fs::read_to_string(&p)?).context("bad coordinates file")?),
                None => None,
            };
            emit(&export_space(&x, coords.as_deref(), output.format)?, output.out.as_deref())?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
