//! Command-line front end: `validate`, `convert`, `series`, `enumerate`,
//! `sample` and `profile`.
//!
//! Exit codes: 0 on success, 1 on domain errors, 2 on usage errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bijection::{map_to_mobile, mobile_to_map};
use crate::census::enumerate_maps;
use crate::map::{MapJson, PlanarMap};
use crate::mobile::{Flavor, Mobile, MobileJson};
use crate::sampler::{expected_edges_quadrangulation, expected_vertices_quadrangulation, monte_carlo_profile, Method, SampleSpec, Sampler};
use crate::series::{format_q, Series, Q};
use crate::solve::{
    derived_series, solve_arbitrary, solve_bipartite, solve_eulerian, solve_limit_r, solve_p_constellation, DerivedKind,
    SeriesSolution, WeightSpec,
};

#[derive(Debug, Parser)]
#[command(name = "mobiles", version, about = "Pointed planar maps, labeled mobiles and their generating functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// R_n for each requested label
    #[value(name = "Rn")]
    Rn,
    /// large-label limit R (bipartite)
    #[value(name = "R")]
    R,
    /// marked-edge series: R_n - R_(n-1), or the m -> n / (n, n) forms with --m
    Edge,
    /// Log(R_n / R_(n-1))
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleMethod {
    Boltzmann,
    ExactSize,
}

fn parse_flavor(s: &str) -> Result<Flavor, String> {
    s.parse().map_err(|_| format!("expected bipartite, eulerian, arbitrary or pN with N >= 2, got {s:?}"))
}

fn parse_window(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected MIN..MAX, got {s:?}"))?;
    let a: usize = a.parse().map_err(|_| format!("bad lower bound in {s:?}"))?;
    let b: usize = b.parse().map_err(|_| format!("bad upper bound in {s:?}"))?;
    if a > b || a == 0 {
        return Err(format!("empty or zero window {s:?}"));
    }
    Ok((a, b))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the invariants of a map or mobile file
    Validate {
        #[arg(long, conflicts_with = "mobile", required_unless_present = "mobile")]
        map: Option<PathBuf>,
        #[arg(long)]
        mobile: Option<PathBuf>,
    },
    /// Apply the bijection to a JSON file (or stdin)
    Convert {
        #[arg(long, conflicts_with = "to_map", required_unless_present = "to_map")]
        to_mobile: bool,
        #[arg(long)]
        to_map: bool,
        #[arg(long, value_parser = parse_flavor, default_value = "bipartite")]
        flavor: Flavor,
        /// origin vertex, overriding the one stored in the map
        #[arg(long)]
        origin: Option<usize>,
        /// input file; stdin when absent
        input: Option<PathBuf>,
    },
    /// Print generating-function coefficients
    Series {
        #[arg(long, value_parser = parse_flavor, default_value = "bipartite")]
        flavor: Flavor,
        /// gK or hK, optionally =VALUE; comma separated or repeated
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<String>,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 4)]
        nmax: usize,
        #[arg(long, value_enum, default_value = "Rn")]
        kind: Kind,
        /// label n (all of 1..=nmax when absent)
        #[arg(long)]
        n: Option<i64>,
        /// start label m for edge kinds m -> n (Eulerian) or (n, n) (arbitrary, m = n)
        #[arg(long)]
        m: Option<i64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Count small maps by face profile and marking
    Enumerate {
        #[arg(long)]
        max_edges: usize,
        #[arg(long, value_parser = parse_flavor, default_value = "bipartite")]
        flavor: Flavor,
        #[arg(long)]
        marking: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Draw random pointed maps, one JSON object per line
    Sample {
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Mean distance profile of random pointed maps, tab separated
    Profile {
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 5)]
        ncap: i64,
    },
}

#[derive(Debug, clap::Args)]
pub struct SamplingArgs {
    #[arg(long, value_parser = parse_flavor, default_value = "bipartite")]
    flavor: Flavor,
    /// gK=VALUE numeric weights
    #[arg(long, value_delimiter = ',', required = true)]
    weights: Vec<String>,
    /// face-count window MIN..MAX
    #[arg(long, value_parser = parse_window, default_value = "1..100")]
    window: (usize, usize),
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 10_000_000)]
    max_attempts: u64,
    #[arg(long, value_enum, default_value = "boltzmann")]
    method: SampleMethod,
}

/// A failure inside a command, reported with exit code 1 (domain) or 2 (usage).
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
}

fn domain<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Domain(e.to_string())
}

fn read_input(path: Option<&PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn read_map(text: &str) -> Result<PlanarMap, Failure> {
    let j: MapJson = serde_json::from_str(text).map_err(|e| Failure::Domain(format!("BadJson: {e}")))?;
    PlanarMap::from_json(&j).map_err(domain)
}

fn read_mobile(text: &str) -> Result<Mobile, Failure> {
    let j: MobileJson = serde_json::from_str(text).map_err(|e| Failure::Domain(format!("BadJson: {e}")))?;
    Mobile::from_json(&j).map_err(domain)
}

fn to_line<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

fn validate(map: Option<PathBuf>, mobile: Option<PathBuf>, out: &mut dyn Write) -> Result<(), Failure> {
    if let Some(p) = map {
        let m = read_map(&read_input(Some(&p))?)?;
        let _ = writeln!(out, "ok: map with V = {}, E = {}, F = {}", m.num_vertices(), m.num_edges(), m.num_faces());
    } else if let Some(p) = mobile {
        let m = read_mobile(&read_input(Some(&p))?)?;
        if let Some(v) = m.validate().violation {
            return Err(Failure::Domain(format!("InvalidLabels: {v}")));
        }
        let well = if m.check_well_labeled() { "well-labeled" } else { "not well-labeled" };
        let _ = writeln!(out, "ok: {} mobile with {} labeled and {} unlabeled vertices, {well}", m.flavor(), m.num_labeled(), m.num_unlabeled());
    }
    Ok(())
}

fn convert(to_mobile: bool, flavor: Flavor, origin: Option<usize>, input: Option<PathBuf>, out: &mut dyn Write) -> Result<(), Failure> {
    let text = read_input(input.as_ref())?;
    if to_mobile {
        let map = read_map(&text)?;
        let mobile = map_to_mobile(&map, origin, flavor).map_err(domain)?;
        let _ = writeln!(out, "{}", to_line(&mobile.to_json()));
    } else {
        let mobile = read_mobile(&text)?;
        let map = mobile_to_map(&mobile).map_err(domain)?;
        let _ = writeln!(out, "{}", to_line(&map.to_json()));
    }
    Ok(())
}

fn solve(flavor: Flavor, w: &WeightSpec, nmax: usize) -> Result<SeriesSolution, Failure> {
    match flavor {
        Flavor::Bipartite => solve_bipartite(w, nmax),
        Flavor::Eulerian => solve_eulerian(w, nmax),
        Flavor::PConstellation(p) => solve_p_constellation(p, w, nmax),
        Flavor::Arbitrary => solve_arbitrary(w, nmax),
    }
    .map_err(domain)
}

fn series_json(name: &str, s: &Series) -> serde_json::Value {
    let vars = s.ring().vars();
    let terms: Vec<serde_json::Value> = (0..s.ring().len())
        .filter_map(|i| {
            let exps = s.ring().monomial(i);
            let c = s.coeff(exps);
            (c != Q::from_integer(0)).then(|| {
                let monomial: BTreeMap<&str, u32> = vars.iter().map(String::as_str).zip(exps.iter().copied()).filter(|p| p.1 > 0).collect();
                json!({ "coeff": format_q(&c), "monomial": monomial })
            })
        })
        .collect();
    json!({ "series": name, "terms": terms })
}

#[allow(clippy::too_many_arguments)]
fn series(
    flavor: Flavor,
    weights: &[String],
    degree: usize,
    nmax: usize,
    kind: Kind,
    n: Option<i64>,
    m: Option<i64>,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let w = WeightSpec::parse(weights, degree).map_err(|e| Failure::Usage(format!("--weights: {e}")))?;
    let mut named: Vec<(String, Series)> = Vec::new();
    if kind == Kind::R {
        if flavor != Flavor::Bipartite {
            return Err(Failure::Usage("--kind R is available for --flavor bipartite only".into()));
        }
        named.push(("R".into(), solve_limit_r(&w).map_err(domain)?));
    } else {
        let sol = solve(flavor, &w, nmax)?;
        let labels: Vec<i64> = match n {
            Some(n) => vec![n],
            None => (1..=nmax as i64).collect(),
        };
        for n in labels {
            let (name, kind) = match (kind, m) {
                (Kind::Rn, _) => (format!("R_{n}"), DerivedKind::Rn(n)),
                (Kind::Log, _) => (format!("Log(R_{n}/R_{})", n - 1), DerivedKind::LogRatio(n)),
                (Kind::Edge, None) => (format!("edge {} -> {n}", n - 1), DerivedKind::EdgeUp(n)),
                (Kind::Edge, Some(m)) if flavor == Flavor::Arbitrary => {
                    if m != n {
                        return Err(Failure::Usage("--m must equal --n for arbitrary (n, n) edges".into()));
                    }
                    (format!("edge ({n}, {n})"), DerivedKind::EdgeFlat(n))
                }
                (Kind::Edge, Some(m)) => (format!("edge {m} -> {n}"), DerivedKind::EdgeDown { from: m, to: n }),
                (Kind::R, _) => unreachable!(),
            };
            named.push((name, derived_series(&sol, kind).map_err(domain)?));
        }
    }
    match format {
        Format::Text => {
            for (name, s) in &named {
                if named.len() > 1 {
                    let _ = writeln!(out, "# {name}");
                }
                let _ = write!(out, "{}", s.to_text());
            }
        }
        Format::Json => {
            for (name, s) in &named {
                let _ = writeln!(out, "{}", series_json(name, s));
            }
        }
    }
    Ok(())
}

fn enumerate(max_edges: usize, flavor: Flavor, marking: Option<String>, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    if max_edges > 9 {
        return Err(Failure::Usage("--max-edges above 9 is out of reach for exhaustive enumeration".into()));
    }
    let mut table = enumerate_maps(max_edges, flavor);
    if let Some(m) = &marking {
        table = table.filter_marking(m);
    }
    match format {
        Format::Text => {
            let _ = write!(out, "{table}");
        }
        Format::Json => {
            for (k, v) in &table.counts {
                let row = json!({ "flavor": k.flavor, "whites": k.whites, "blacks": k.blacks, "marking": k.marking, "count": v });
                let _ = writeln!(out, "{row}");
            }
        }
    }
    Ok(())
}

fn sample_spec(args: &SamplingArgs) -> Result<SampleSpec, Failure> {
    let mut weights = BTreeMap::new();
    for item in &args.weights {
        let bad = || Failure::Usage(format!("--weights: expected gK=VALUE, got {item:?}"));
        let (name, value) = item.split_once('=').ok_or_else(bad)?;
        let k: usize = name.strip_prefix('g').and_then(|k| k.parse().ok()).ok_or_else(bad)?;
        let v: f64 = value.parse().map_err(|_| bad())?;
        weights.insert(k, v);
    }
    let mut spec = SampleSpec::new(weights, args.window, args.seed);
    spec.flavor = args.flavor;
    spec.workers = args.jobs.max(1);
    spec.max_attempts = args.max_attempts;
    spec.method = match args.method {
        SampleMethod::Boltzmann => Method::Boltzmann,
        SampleMethod::ExactSize => Method::ExactSize,
    };
    Ok(spec)
}

fn sample(args: &SamplingArgs, count: usize, out: &mut dyn Write) -> Result<(), Failure> {
    let sampler = Sampler::new(sample_spec(args)?).map_err(domain)?;
    let maps = sampler.run(count, |t| crate::bijection::mobile_to_map_bipartite(&t.to_mobile())).map_err(domain)?;
    for map in maps {
        let map = map.map_err(domain)?;
        let _ = writeln!(out, "{}", to_line(&map.to_json()));
    }
    Ok(())
}

fn profile(args: &SamplingArgs, samples: usize, ncap: i64, out: &mut dyn Write) -> Result<(), Failure> {
    let spec = sample_spec(args)?;
    let quadrangulations = spec.weights.keys().eq([4usize].iter());
    let rows = monte_carlo_profile(&spec, samples.max(1), ncap).map_err(domain)?;
    let _ = writeln!(out, "n\tmean_v\tse_v\tmean_e\tse_e\tformula_v\tformula_e");
    for r in rows {
        let (fv, fe) = if quadrangulations {
            let f = |q: Q| format!("{:.6}", *q.numer() as f64 / *q.denom() as f64);
            (f(expected_vertices_quadrangulation(r.n)), f(expected_edges_quadrangulation(r.n)))
        } else {
            ("-".to_string(), "-".to_string())
        };
        let _ = writeln!(out, "{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{fv}\t{fe}", r.n, r.mean_v, r.se_v, r.mean_e, r.se_e);
    }
    Ok(())
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { map, mobile } => validate(map, mobile, out),
        Command::Convert { to_mobile, flavor, origin, input, .. } => convert(to_mobile, flavor, origin, input, out),
        Command::Series { flavor, weights, degree, nmax, kind, n, m, format } => series(flavor, &weights, degree, nmax, kind, n, m, format, out),
        Command::Enumerate { max_edges, flavor, marking, format } => enumerate(max_edges, flavor, marking, format, out),
        Command::Sample { sampling, count } => sample(&sampling, count, out),
        Command::Profile { sampling, samples, ncap } => profile(&sampling, samples, ncap, out),
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "usage error: {msg}");
            2
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}
