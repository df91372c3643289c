use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use conic_floors::absolute::x6::{gw_x6, w_x6, X6Structure};
use conic_floors::absolute::x7::{gw_x7, w_x7, X7Structure};
use conic_floors::absolute::x8::{gw_x8, w_x8, X8Structure};
use conic_floors::absolute::{Engine, Evaluation, Provider};
use conic_floors::diagrams::{self, FloorDiagram};
use conic_floors::relative_complex::{complex_multiplicity, RelativeQuery};
use conic_floors::relative_real::RealQuery;
use conic_floors::{Error, Int};
use sha2::{Digest, Sha256};

use conic_floors_cli::cache::{self, Cache};
use conic_floors_cli::output::{self, Format, Outcome, Stats};
use conic_floors_cli::query::{Command, QuerySpec, RawQuery};

/// Floor diagrams relative to a conic: Gromov-Witten and Welschinger invariants of
/// the blown-up plane and of Del Pezzo surfaces of degree 1, 2 and 3.
#[derive(Parser)]
#[command(name = "conic-floors", version)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Relative invariant GW^{alpha,beta} of the plane blown up at n points of a conic.
    GwRel(QueryArgs),
    /// Real relative invariant FW of the plane blown up at n points of a conic, kappa of
    /// them pairwise conjugated.
    Fw(QueryArgs),
    /// Gromov-Witten invariant of the cubic surface X6.
    #[command(name = "gw-x6")]
    GwX6(QueryArgs),
    /// Welschinger invariant of X6.
    #[command(name = "w-x6")]
    WX6(QueryArgs),
    /// Gromov-Witten invariant of the degree 2 Del Pezzo surface X7.
    #[command(name = "gw-x7")]
    GwX7(QueryArgs),
    /// Welschinger invariant of X7.
    #[command(name = "w-x7")]
    WX7(QueryArgs),
    /// Gromov-Witten invariant of the degree 1 Del Pezzo surface X8 (needs a provider table).
    #[command(name = "gw-x8")]
    GwX8(QueryArgs),
    /// Welschinger invariant of X8 for real configurations (needs a provider table).
    #[command(name = "w-x8")]
    WX8(QueryArgs),
    /// Floor diagrams (and marking classes) of a relative invariant.
    Diagrams(QueryArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Plain,
    Sided,
    Sidedsided,
}

#[derive(Args)]
struct QueryArgs {
    /// Number of points blown up on the conic (relative commands).
    #[arg(long)]
    n: Option<usize>,
    /// Number of pairs of conjugated blown-up points.
    #[arg(long)]
    kappa: Option<usize>,
    /// Side of the real conic (sided variants, or structures taking a value).
    #[arg(long)]
    epsilon: Option<u8>,
    /// Real structure. X6: kappa=K, kappa+1=K, sided-real=E, sided-sided=E. X7: kappa=K,
    /// kappa+1=K, minus-total=E, plus-total=E, minus-rp2, minus-rp2-alt, plus-l0, plus-l2.
    /// X8: kappa=K, kappa+1=K, minus-l=E, plus-l=E.
    #[arg(long)]
    structure: Option<String>,
    /// Class as d:mu1,...,mun, meaning d[D] - sum mu_i [E_i].
    #[arg(long)]
    class: String,
    /// Genus.
    #[arg(long)]
    genus: Option<i64>,
    /// Number of pairs of conjugated points in the configuration.
    #[arg(long)]
    s: Option<usize>,
    /// Fixed tangency points with the conic, as weight^count,...
    #[arg(long)]
    alpha: Option<String>,
    /// Moving tangency points with the conic, as weight^count,...
    #[arg(long)]
    beta: Option<String>,
    /// Real fixed tangency points.
    #[arg(long = "alpha-re")]
    alpha_re: Option<String>,
    /// Real moving tangency points.
    #[arg(long = "beta-re")]
    beta_re: Option<String>,
    /// Pairs of conjugated fixed tangency points.
    #[arg(long = "alpha-im")]
    alpha_im: Option<String>,
    /// Pairs of conjugated moving tangency points.
    #[arg(long = "beta-im")]
    beta_im: Option<String>,
    /// Which floor diagram sum (fw).
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    /// Table of invariants of the plane blown up at 8 points of a conic and one more point.
    #[arg(long)]
    provider: Option<PathBuf>,
    /// Persistent memo file.
    #[arg(long, env = "CONIC_FLOORS_CACHE")]
    cache: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Print the decomposition of the value (per diagram or per graph).
    #[arg(long)]
    terms: bool,
    /// Print work counters.
    #[arg(long)]
    stats: bool,
    /// Recompute values found in the cache and report disagreements.
    #[arg(long)]
    verify: bool,
}

/// Failure of a run, with its exit code.
enum Failure {
    Core(Error),
    Io(String),
    CacheMismatch(Vec<String>),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::Parse(_)) => 2,
            Failure::Core(Error::MissingProviderKeys(_)) => 4,
            _ => 3,
        }
    }

    /// One line: `error[kind]: message`.
    fn line(&self) -> String {
        let (kind, message) = match self {
            Failure::Core(e) => {
                let kind = match e {
                    Error::Parse(_) => "parse",
                    Error::Domain(_) => "domain",
                    Error::Unsupported(_) => "unsupported",
                    Error::NonEnumerative(_) => "non-enumerative",
                    Error::Overflow(_) => "overflow",
                    Error::MissingProviderKeys(_) => "missing-provider-keys",
                };
                let message = match e {
                    Error::Parse(m) | Error::Domain(m) | Error::Unsupported(m) | Error::NonEnumerative(m) => m.clone(),
                    Error::MissingProviderKeys(keys) => serde_json::to_string(keys).unwrap_or_default(),
                    Error::Overflow(what) => what.to_string(),
                };
                (kind, message)
            }
            Failure::Io(m) => ("io", m.clone()),
            Failure::CacheMismatch(keys) => ("cache-mismatch", serde_json::to_string(keys).unwrap_or_default()),
        };
        format!("error[{kind}]: {message}")
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or_default();
            let line = Failure::Core(Error::Parse(first.trim_start_matches("error: ").to_string())).line();
            eprintln!("{line}");
            return ExitCode::from(2);
        }
    };
    let (command, args) = match cli.command {
        CliCommand::GwRel(a) => (Command::GwRel, a),
        CliCommand::Fw(a) => (Command::Fw, a),
        CliCommand::GwX6(a) => (Command::GwX6, a),
        CliCommand::WX6(a) => (Command::WX6, a),
        CliCommand::GwX7(a) => (Command::GwX7, a),
        CliCommand::WX7(a) => (Command::WX7, a),
        CliCommand::GwX8(a) => (Command::GwX8, a),
        CliCommand::WX8(a) => (Command::WX8, a),
        CliCommand::Diagrams(a) => (Command::Diagrams, a),
    };
    match run(command, &args) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err((failure, text)) => {
            if let Some(text) = text {
                print!("{text}");
            }
            eprintln!("{}", failure.line());
            ExitCode::from(failure.exit_code())
        }
    }
}

fn load_provider(path: &Path) -> Result<(Provider, String), Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Failure::Core(Error::Parse(format!("{} is not UTF-8", path.display()))))?;
    let provider = Provider::parse(&text)?;
    let digest: String = Sha256::digest(&bytes).iter().take(8).map(|b| format!("{b:02x}")).collect();
    Ok((provider, digest))
}

type RunResult = Result<String, (Failure, Option<String>)>;

fn run(command: Command, args: &QueryArgs) -> RunResult {
    let plain = |f: Failure| (f, None);
    if args.format == Format::Dot && command != Command::Diagrams {
        return Err(plain(Failure::Core(Error::Parse("dot output is only available for diagrams".into()))));
    }
    let (provider, digest) = match &args.provider {
        Some(path) if matches!(command, Command::GwX8 | Command::WX8) => {
            let (p, d) = load_provider(path).map_err(plain)?;
            (Some(p), Some(d))
        }
        Some(_) => {
            return Err(plain(Failure::Core(Error::Parse(format!("--provider is not used by {}", command.name())))))
        }
        None => (None, None),
    };
    let raw = RawQuery {
        n: args.n,
        kappa: args.kappa,
        epsilon: args.epsilon,
        structure: args.structure.clone(),
        class: Some(args.class.clone()),
        genus: args.genus,
        s: args.s,
        alpha: args.alpha.clone(),
        beta: args.beta.clone(),
        alpha_re: args.alpha_re.clone(),
        beta_re: args.beta_re.clone(),
        alpha_im: args.alpha_im.clone(),
        beta_im: args.beta_im.clone(),
        variant: args.variant.map(|v| {
            match v {
                VariantArg::Plain => "plain",
                VariantArg::Sided => "sided",
                VariantArg::Sidedsided => "sidedsided",
            }
            .to_string()
        }),
        provider: digest,
    };
    let spec = raw.normalize(command).map_err(|e| plain(e.into()))?;
    let key = format!("{}{spec}", cache::QUERY);

    let mut cache = match &args.cache {
        Some(path) => Some(Cache::open(path).map_err(|e| plain(Failure::Io(format!("cache {}: {e}", path.display()))))?),
        None => None,
    };
    let needs_enumeration = args.terms || command == Command::Diagrams;
    if let Some(&value) = cache.as_ref().and_then(|c| c.entries.get(&key)) {
        if !needs_enumeration && !args.verify {
            let outcome = Outcome { query: spec.to_string(), value, terms: None, dots: Vec::new() };
            let stats = Stats { diagrams: 0, markings: 0, cache_hits: 1 };
            return Ok(output::render(&outcome, args.format, args.stats.then_some(&stats)));
        }
    }

    let mut engine = match provider {
        Some(p) => Engine::with_provider(p),
        None => Engine::new(),
    };
    if let (Some(c), false) = (&cache, args.verify) {
        engine.complex.extend_memo(c.with_prefix(cache::COMPLEX));
        engine.real.extend_memo(c.with_prefix(cache::REAL));
    }
    let mut outcome = compute(&mut engine, &spec, args.terms).map_err(|e| plain(e.into()))?;
    if !args.terms && command != Command::Diagrams {
        outcome.terms = None;
    }
    let s = engine.stats();
    let stats = Stats { diagrams: s.diagrams, markings: s.markings, cache_hits: s.memo_hits };
    let text = output::render(&outcome, args.format, args.stats.then_some(&stats));

    let mut mismatches = Vec::new();
    if let Some(c) = cache.as_mut() {
        let fresh: BTreeMap<String, Int> = engine
            .complex
            .memo()
            .iter()
            .map(|(k, &v)| (format!("{}{k}", cache::COMPLEX), v))
            .chain(engine.real.memo().iter().map(|(k, &v)| (format!("{}{k}", cache::REAL), v)))
            .chain(std::iter::once((key.clone(), outcome.value)))
            .collect();
        if args.verify {
            for (k, v) in &fresh {
                if let Some(old) = c.entries.get(k) {
                    if old != v {
                        mismatches.push(format!("{k}: cached {old}, computed {v}"));
                    }
                }
            }
        }
        c.insert_all("", fresh);
        c.save().map_err(|e| (Failure::Io(format!("cannot write the cache: {e}")), Some(text.clone())))?;
    }
    if !mismatches.is_empty() {
        return Err((Failure::CacheMismatch(mismatches), Some(text)));
    }
    Ok(text)
}

/// Evaluate a normalized query; terms are always produced.
fn compute(engine: &mut Engine, spec: &QuerySpec, marking_detail: bool) -> conic_floors::Result<Outcome> {
    let (dd, mu) = (spec.dd, spec.mu.as_slice());
    let query = spec.to_string();
    let from_evaluation = |e: Evaluation| Outcome {
        query: query.clone(),
        value: e.value,
        terms: Some(e.terms.into_iter().map(|t| (t.label, t.value)).collect()),
        dots: Vec::new(),
    };
    let genus = spec.genus.unwrap_or(0);
    let s = spec.s.unwrap_or(0);
    let structure = spec.structure.as_deref().unwrap_or_default();
    Ok(match spec.command {
        Command::GwRel | Command::Diagrams => {
            let t = spec.tangency.clone().expect("normalized");
            let q = RelativeQuery::new(dd, mu.to_vec(), genus, t.alpha, t.beta);
            let value = engine.complex.gw(&q)?;
            let mut terms = Vec::new();
            let mut dots = Vec::new();
            for term in engine.complex.terms(&q)? {
                let label = format!(
                    "{} multiplicity={} markings={}",
                    describe(&term.diagram),
                    term.multiplicity,
                    term.markings
                );
                terms.push((label, term.multiplicity * term.markings));
                if spec.command == Command::Diagrams && !marking_detail {
                    dots.push(format!("// {}\n{}", describe(&term.diagram), term.diagram.to_dot(None)));
                }
            }
            if spec.command == Command::Diagrams && marking_detail {
                for (diagram, marking) in diagrams::enumerate_marked(dd, genus, &q.marking_type())? {
                    let m = complex_multiplicity(&diagram, &q.beta)?;
                    dots.push(format!("// {} multiplicity={m}\n{}", describe(&diagram), diagram.to_dot(Some(&marking))));
                }
            }
            if terms.is_empty() && value != 0 {
                terms.push(("initial value".into(), value));
            }
            Outcome { query, value, terms: Some(terms), dots }
        }
        Command::Fw => {
            let t = spec.real_tangency.clone().expect("normalized");
            let variant = spec.variant.expect("normalized");
            let mut q = RealQuery::new(dd, mu.to_vec(), spec.kappa.unwrap_or(0), s, t.beta_re, t.beta_im);
            q.alpha_re = t.alpha_re;
            q.alpha_im = t.alpha_im;
            let value = engine.real.fw(&q, variant)?;
            let mut per_diagram: BTreeMap<String, Int> = BTreeMap::new();
            for term in engine.real.terms(&q)? {
                *per_diagram.entry(describe(&term.diagram)).or_default() += term.contribution.value(variant);
            }
            let mut terms: Vec<(String, Int)> = per_diagram.into_iter().filter(|(_, v)| *v != 0).collect();
            if terms.is_empty() && value != 0 {
                terms.push(("initial value".into(), value));
            }
            Outcome { query, value, terms: Some(terms), dots: Vec::new() }
        }
        Command::GwX6 => from_evaluation(gw_x6(engine, dd, mu, genus)?),
        Command::WX6 => from_evaluation(w_x6(engine, X6Structure::parse(structure)?, dd, mu, s)?),
        Command::GwX7 => from_evaluation(gw_x7(engine, dd, mu, genus)?),
        Command::WX7 => from_evaluation(w_x7(engine, X7Structure::parse(structure)?, dd, mu, s)?),
        Command::GwX8 => from_evaluation(gw_x8(engine, dd, mu, genus)?),
        Command::WX8 => from_evaluation(w_x8(engine, X8Structure::parse(structure)?, dd, mu, s)?),
    })
}

/// Compact description of a floor diagram: floor degrees, internal edges
/// `tail>head:weight` and sources `floor:weight^count`.
fn describe(d: &FloorDiagram) -> String {
    let floors: Vec<String> = d.floors.iter().map(|f| f.to_string()).collect();
    let edges: Vec<String> = d.edges.iter().map(|e| format!("{}>{}:{}", e.tail, e.head, e.weight)).collect();
    let mut sources: BTreeMap<(usize, u32), usize> = BTreeMap::new();
    for s in &d.sources {
        *sources.entry((s.floor, s.weight)).or_default() += 1;
    }
    let sources: Vec<String> = sources.iter().map(|((f, w), c)| format!("{f}:{w}^{c}")).collect();
    format!("floors={} edges={} sources={}", floors.join(","), edges.join(","), sources.join(","))
}
