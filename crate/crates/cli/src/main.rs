//! `spectra`: command-line front end for spectra-core.
//!
//! Exit codes: 0 success, 1 computation failure or failed verdict, 2 usage.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use spectra_core::campaigns::{
    enumerate_sc_digraphs, replay, run_campaign, CampaignError, CampaignParams, ExtremeFamily, Status,
    VerificationReport,
};
use spectra_core::chareq::{largest_root, CharEquation};
use spectra_core::digraph::parse_dgr1;
use spectra_core::spectral::{spectral_radius, DEFAULT_TOL};
use spectra_core::{Digraph, FamilySpec};

const DEFAULT_GRID: &str = "0,0.25,0.5";
const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser)]
#[command(name = "spectra", version, about = "A-alpha spectral radius of strongly connected digraphs")]
struct Cli {
    /// Machine-readable JSON on stdout, including errors.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Spectral radius, enclosure and Perron vector of one digraph.
    Radius(RadiusArgs),
    /// Generate a family digraph as DGR1.
    Family {
        #[arg(long, value_parser = parse_family)]
        spec: FamilySpec,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest real root of a family's characteristic equation.
    CharRoot {
        #[arg(long, value_parser = parse_family)]
        spec: FamilySpec,
        #[arg(long, value_parser = parse_alpha)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_TOL, value_parser = parse_tol)]
        tol: f64,
    },
    /// One DGR1 per isomorphism class of strongly connected digraphs on n vertices.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=5))]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification campaign, or replay a saved report.
    Verify(VerifyArgs),
    /// Radii of listed specs over an evenly spaced α range, as CSV.
    Sweep {
        /// One spec per line; blank lines and `#` comments are skipped.
        #[arg(long)]
        spec_list: PathBuf,
        #[arg(long, value_parser = parse_alpha)]
        alpha_from: f64,
        #[arg(long, value_parser = parse_alpha)]
        alpha_to: f64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
        #[arg(long, default_value_t = DEFAULT_TOL, value_parser = parse_tol)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "input")]
struct GraphInput {
    /// DGR1 file.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, value_parser = parse_family)]
    spec: Option<FamilySpec>,
}

#[derive(Args)]
struct RadiusArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long, value_parser = parse_alpha)]
    alpha: f64,
    #[arg(long, default_value_t = DEFAULT_TOL, value_parser = parse_tol)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum CampaignName {
    FamilyExtremes,
    GlobalMin,
    BipartiteMin,
    TransformLemmas,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    InftyTilde,
    ThetaTilde,
    Combined,
    Bicyclic,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, required_unless_present = "replay")]
    campaign: Option<CampaignName>,
    /// Comma-separated α values in [0, 1).
    #[arg(long, default_value = DEFAULT_GRID, value_parser = parse_grid)]
    alpha_grid: AlphaGrid,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Re-run a saved report and check that every verdict is reproduced.
    #[arg(long, conflicts_with = "campaign")]
    replay: Option<PathBuf>,
    /// Report JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report items as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone)]
struct AlphaGrid(Vec<f64>);

fn parse_family(s: &str) -> Result<FamilySpec, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if (0.0..1.0).contains(&a) {
        Ok(a)
    } else {
        Err(format!("α = {a} outside [0, 1)"))
    }
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("tolerance must be positive and finite, got {s:?}")),
    }
}

fn parse_grid(s: &str) -> Result<AlphaGrid, String> {
    let grid = s.split(',').map(parse_alpha).collect::<Result<Vec<_>, _>>()?;
    Ok(AlphaGrid(grid))
}

/// A failure after argument parsing.
struct Failure {
    kind: &'static str,
    message: String,
    usage: bool,
}

impl Failure {
    fn new(kind: &'static str, e: impl std::fmt::Display) -> Self {
        Self { kind, message: e.to_string(), usage: false }
    }

    fn usage(e: impl std::fmt::Display) -> Self {
        Self { kind: "usage", message: e.to_string(), usage: true }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::new("io", e)
    }
}

impl From<CampaignError> for Failure {
    fn from(e: CampaignError) -> Self {
        match e {
            CampaignError::TooLarge { .. } | CampaignError::InvalidParams(_) => Self::usage(e),
            _ => Self::new("campaign", e),
        }
    }
}

type Outcome = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        Cli::command().error(ErrorKind::InvalidValue, msg).exit();
    }
    let json = cli.json;
    match dispatch(cli) {
        Ok(code) => code,
        Err(f) if f.usage => Cli::command().error(ErrorKind::ValueValidation, f.message).exit(),
        Err(f) => {
            eprintln!("error: {}", f.message);
            if json {
                println!("{}", json!({ "error": { "kind": f.kind, "message": f.message } }));
            }
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("SPECTRA_THREADS") else {
        return Ok(());
    };
    let threads: usize = match v.trim().parse() {
        Ok(t) if t > 0 => t,
        _ => return Err(format!("SPECTRA_THREADS must be a positive integer, got {v:?}")),
    };
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
}

fn dispatch(cli: Cli) -> Outcome {
    let json = cli.json;
    match cli.cmd {
        Cmd::Radius(args) => radius(args, json),
        Cmd::Family { spec, out } => family(&spec, out.as_deref()),
        Cmd::CharRoot { spec, alpha, tol } => char_root(&spec, alpha, tol, json),
        Cmd::Enumerate { n, out } => enumerate(n as usize, out.as_deref(), json),
        Cmd::Verify(args) => verify(args, json),
        Cmd::Sweep { spec_list, alpha_from, alpha_to, steps, tol, out } => {
            sweep(&spec_list, alpha_from, alpha_to, steps as usize, tol, out.as_deref())
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn radius(args: RadiusArgs, json: bool) -> Outcome {
    let (d, source) = match (&args.input.graph, &args.input.spec) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)?;
            (parse_dgr1(&text).map_err(|e| Failure::new("dgr1", e))?, path.display().to_string())
        }
        (None, Some(spec)) => (spec.generate().map_err(|e| Failure::new("family", e))?, spec.to_string()),
        (None, None) => unreachable!("clap enforces one input"),
    };
    let r = spectral_radius(&d, args.alpha, args.tol).map_err(|e| Failure::new("spectral", e))?;
    if json {
        let mut v = serde_json::to_value(&r).expect("plain data");
        v["source"] = json!(source);
        v["n"] = json!(d.n());
        v["alpha"] = json!(args.alpha);
        println!("{v}");
    } else {
        println!("radius {:.12}", r.radius);
        println!("enclosure [{:.15}, {:.15}]", r.enclosure.lo, r.enclosure.hi);
        println!("iterations {}", r.iterations);
        let perron: Vec<String> = r.perron.iter().map(|x| format!("{x:.12}")).collect();
        println!("perron {}", perron.join(" "));
    }
    Ok(ExitCode::SUCCESS)
}

fn family(spec: &FamilySpec, out: Option<&Path>) -> Outcome {
    let d = spec.generate().map_err(|e| Failure::new("family", e))?;
    write_output(out, &d.to_dgr1())?;
    Ok(ExitCode::SUCCESS)
}

fn char_root(spec: &FamilySpec, alpha: f64, tol: f64, json: bool) -> Outcome {
    let eq = CharEquation::for_family(spec, alpha).map_err(|e| Failure::new("char", e))?;
    let root = largest_root(&eq, tol).map_err(|e| Failure::new("char", e))?;
    let residual = eq.eval(root).abs();
    if json {
        println!("{}", json!({ "spec": spec.to_string(), "alpha": alpha, "root": root, "residual": residual }));
    } else {
        println!("root {root:.12}");
        println!("residual {residual:.3e}");
    }
    Ok(ExitCode::SUCCESS)
}

fn enumerate(n: usize, out: Option<&Path>, json: bool) -> Outcome {
    let classes = enumerate_sc_digraphs(n)?;
    let width = classes.len().to_string().len();
    let entries: Vec<Value> = classes
        .iter()
        .enumerate()
        .map(|(i, d)| {
            json!({
                "file": format!("n{n}_{:0width$}.dgr1", i + 1),
                "key": d.canonical_key().expect("n <= 5").to_string(),
                "arcs": d.arc_count(),
            })
        })
        .collect();
    let manifest = json!({ "n": n, "count": classes.len(), "classes": entries });
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        for (d, e) in classes.iter().zip(&entries) {
            fs::write(dir.join(e["file"].as_str().unwrap()), d.to_dgr1())?;
        }
        fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest).unwrap() + "\n")?;
    }
    if json {
        println!("{manifest}");
    } else {
        println!("{} strongly connected classes on {n} vertices", classes.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn campaign_params(args: &VerifyArgs, name: CampaignName) -> Result<CampaignParams, Failure> {
    let need =
        |v: Option<usize>, flag: &str| v.ok_or_else(|| Failure::usage(format!("this campaign requires --{flag}")));
    Ok(match name {
        CampaignName::FamilyExtremes => {
            let family = match args.family.ok_or_else(|| Failure::usage("this campaign requires --family"))? {
                FamilyArg::InftyTilde => ExtremeFamily::InftyTilde,
                FamilyArg::ThetaTilde => ExtremeFamily::ThetaTilde,
                FamilyArg::Combined => ExtremeFamily::Combined,
                FamilyArg::Bicyclic => ExtremeFamily::Bicyclic,
            };
            let s = if matches!(family, ExtremeFamily::Bicyclic) { args.s.unwrap_or(0) } else { need(args.s, "s")? };
            CampaignParams::FamilyExtremes { family, n: need(args.n, "n")?, s }
        }
        CampaignName::GlobalMin => CampaignParams::GlobalMin { n: need(args.n, "n")? },
        CampaignName::BipartiteMin => {
            CampaignParams::BipartiteMin { n: need(args.n, "n")?, p: need(args.p, "p")?, q: need(args.q, "q")? }
        }
        CampaignName::TransformLemmas => CampaignParams::TransformLemmas { trials: args.trials, seed: args.seed },
    })
}

fn verify(args: VerifyArgs, json: bool) -> Outcome {
    let (report, reproduced) = match (&args.replay, args.campaign) {
        (Some(path), _) => {
            let saved = VerificationReport::from_json(&fs::read_to_string(path)?)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            let fresh = replay(&saved)?;
            let same = fresh.same_outcome(&saved);
            (fresh, Some(same))
        }
        (None, Some(name)) => {
            let params = campaign_params(&args, name)?;
            (run_campaign(&params, &args.alpha_grid.0)?, None)
        }
        (None, None) => unreachable!("clap requires --campaign or --replay"),
    };
    if let Some(path) = &args.out {
        fs::write(path, report.to_json() + "\n")?;
    }
    if let Some(path) = &args.csv {
        report.write_csv(fs::File::create(path)?).map_err(|e| Failure::new("io", e))?;
    }
    let ok = report.all_pass() && reproduced != Some(false);
    if json {
        println!("{}", report.to_json());
    } else {
        for v in &report.verdicts {
            let status = match v.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Indistinguishable => "TIE ",
            };
            let alpha = v.alpha.map(|a| format!(" α={a}")).unwrap_or_default();
            let tag = if v.exploratory { " (exploratory)" } else { "" };
            println!("{status} {}{alpha}{tag}: {}", v.claim, v.detail);
        }
        if let Some(same) = reproduced {
            println!("replay {}", if same { "reproduced every verdict" } else { "DIFFERS from the saved report" });
        }
        let failing = report.failures().count();
        println!(
            "{}: {} verdicts, {failing} non-exploratory not passing, {:.2}s",
            report.campaign,
            report.verdicts.len(),
            report.runtime_s
        );
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn read_spec_list(path: &Path) -> Result<Vec<FamilySpec>, Failure> {
    let text = fs::read_to_string(path)?;
    text.lines()
        .enumerate()
        .map(|(i, l)| (i, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| l.parse().map_err(|e| Failure::usage(format!("{}:{}: {e}", path.display(), i + 1))))
        .collect()
}

fn sweep(list: &Path, from: f64, to: f64, steps: usize, tol: f64, out: Option<&Path>) -> Outcome {
    let specs = read_spec_list(list)?;
    let alphas: Vec<f64> = (0..=steps).map(|i| from + (to - from) * i as f64 / steps as f64).collect();
    let graphs: Vec<Digraph> =
        specs.iter().map(|s| s.generate()).collect::<Result<_, _>>().map_err(|e| Failure::new("family", e))?;
    let jobs: Vec<(usize, f64)> = (0..specs.len()).flat_map(|i| alphas.iter().map(move |&a| (i, a))).collect();
    let radii = jobs
        .par_iter()
        .map(|&(i, a)| spectral_radius(&graphs[i], a, tol).map(|r| r.radius))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::new("spectral", e))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["spec", "alpha", "radius"]).map_err(|e| Failure::new("io", e))?;
    for (&(i, a), r) in jobs.iter().zip(&radii) {
        w.write_record([specs[i].to_string(), a.to_string(), r.to_string()]).map_err(|e| Failure::new("io", e))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::new("io", e))?;
    write_output(out, &String::from_utf8(bytes).expect("utf-8"))?;
    Ok(ExitCode::SUCCESS)
}
