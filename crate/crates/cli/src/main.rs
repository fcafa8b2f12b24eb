use std::fmt::Write as _;
use std::io::{ErrorKind, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use groupoid::analysis::{analyze, AnalysisOptions, AnalysisReport, Mode, PropertyReport, Structure};
use groupoid::census::census;
use groupoid::constructors::{GeneratorSpec, TableClass};
use groupoid::quasigroup::{derive_loop, LoopDerivation};
use groupoid::semigroup::semigroup_structure;
use groupoid::{parse_table_with, CayleyTable, Limits, Permutation};

/// Exit status when a theorem route and an oracle disagree.
const EXIT_INCONSISTENT: u8 = 2;
const EXIT_INPUT: u8 = 1;

#[derive(Parser)]
#[command(name = "groupoid", version, about = "Abelian and Hamiltonian finite groupoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a table and decide Abelian / Hamiltonian.
    Check(CheckArgs),
    /// Print the derived loop or the semigroup structure as JSON.
    Decompose(DecomposeArgs),
    /// Print a generated table, e.g. `rectband(zn(2),2,2)` or `fixture(q4a)`.
    Generate(GenerateArgs),
    /// Cross-check all routes over a family of tables.
    Census(CensusArgs),
}

#[derive(Args)]
struct Common {
    /// Table file; `-` or nothing reads stdin.
    path: Option<PathBuf>,
    /// Largest order for subuniverse enumeration.
    #[arg(long, value_name = "N")]
    cap_subuniverses: Option<usize>,
    /// Largest accepted table order.
    #[arg(long, value_name = "N")]
    max_order: Option<usize>,
}

impl Common {
    fn limits(&self) -> Limits {
        let mut l = Limits::default();
        if let Some(n) = self.cap_subuniverses {
            l.max_subuniverse_order = n;
        }
        if let Some(n) = self.max_order {
            l.max_order = n;
            l.max_square_base = l.max_square_base.max(n);
        }
        l
    }

    fn read(&self) -> Result<CayleyTable> {
        let text = match &self.path {
            Some(p) if p.as_os_str() != "-" => {
                std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?
            }
            _ => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
                s
            }
        };
        Ok(parse_table_with(&text, &self.limits())?)
    }
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, conflicts_with = "oracle_only")]
    fast_only: bool,
    #[arg(long)]
    oracle_only: bool,
    /// Base point of the derived loop.
    #[arg(long, value_name = "A")]
    base: Option<usize>,
    #[arg(long)]
    json: bool,
    /// Seed for the witness search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Omit the structure payload.
    #[arg(long)]
    no_structure: bool,
    /// Report elapsed time.
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum As {
    Quasigroup,
    Semigroup,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    common: Common,
    /// Decomposition to compute; inferred when omitted.
    #[arg(long = "as", value_enum)]
    kind: Option<As>,
    #[arg(long, value_name = "A", default_value_t = 0)]
    base: usize,
}

#[derive(Args)]
struct GenerateArgs {
    spec: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    order: usize,
    #[arg(long, default_value = "semigroup")]
    class: String,
    /// Number of random tables instead of the exhaustive scan.
    #[arg(long, value_name = "N")]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, conflicts_with = "json")]
    csv: bool,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(s: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(s.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check(a) => check(a),
        Command::Decompose(a) => decompose(a),
        Command::Generate(a) => generate(a),
        Command::Census(a) => run_census(a),
    }
}

fn check(a: CheckArgs) -> Result<u8> {
    let t = a.common.read()?;
    let opts = AnalysisOptions {
        mode: if a.fast_only {
            Mode::FastOnly
        } else if a.oracle_only {
            Mode::OracleOnly
        } else {
            Mode::Both
        },
        base: a.base,
        limits: a.common.limits(),
        seed: a.seed,
        structure: !a.no_structure,
        timing: a.timing,
        ..AnalysisOptions::default()
    };
    let report = analyze(&t, &opts)?;
    if a.json {
        emit(&format!("{}\n", serde_json::to_string_pretty(&report)?))?;
    } else {
        emit(&render(&t, &report))?;
    }
    if report.inconsistent {
        eprintln!("error: theorem and oracle routes disagree");
        return Ok(EXIT_INCONSISTENT);
    }
    Ok(0)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn render_property(out: &mut String, name: &str, p: &PropertyReport) {
    let route = p.route.map_or("none".to_string(), |r| r.to_string());
    let _ = writeln!(out, "{name}: {} ({route})", p.verdict);
    for r in &p.routes {
        match &r.reason {
            Some(why) => {
                let _ = writeln!(out, "  {}: {} - {why}", r.route, r.verdict);
            }
            None => {
                let _ = writeln!(out, "  {}: {}", r.route, r.verdict);
            }
        }
    }
    if let Some(w) = &p.witness {
        let _ = writeln!(
            out,
            "  witness: t = {}, u = {}, v = {}, c = {:?}, d = {:?}: t(u,c) = t(u,d) = {}, t(v,c) = {} != t(v,d) = {}",
            w.term, w.u, w.v, w.c, w.d, w.values[0], w.values[2], w.values[3]
        );
    }
    if let Some(b) = &p.offending {
        let _ = writeln!(out, "  offending subuniverse: {b}");
    }
}

fn render(t: &CayleyTable, r: &AnalysisReport) -> String {
    let c = &r.classification;
    let mut out = String::new();
    let _ = writeln!(out, "digest: {}", r.digest);
    let _ = writeln!(
        out,
        "order {}: associative={} commutative={} identity={} quasigroup={} loop={} group={}",
        c.order,
        yes_no(c.associative),
        yes_no(c.commutative),
        c.identity.map_or("none".into(), |e| t.label(e)),
        yes_no(c.quasigroup),
        yes_no(c.is_loop),
        yes_no(c.group),
    );
    let idem: Vec<String> = c.idempotents.iter().map(|&e| t.label(e)).collect();
    let _ = writeln!(out, "idempotents: {{{}}}", idem.join(", "));
    render_property(&mut out, "abelian", &r.abelian);
    render_property(&mut out, "hamiltonian", &r.hamiltonian);
    if r.inconsistent {
        let _ = writeln!(out, "INCONSISTENT: routes disagree");
    }
    if let Some(ms) = r.elapsed_ms {
        let _ = writeln!(out, "elapsed: {ms:.3} ms");
    }
    out
}

#[derive(Serialize)]
struct PermOut {
    images: Permutation,
    cycles: String,
}

impl From<&Permutation> for PermOut {
    fn from(p: &Permutation) -> Self {
        Self {
            images: p.clone(),
            cycles: p.cycle_notation(),
        }
    }
}

#[derive(Serialize)]
struct LoopOut {
    kind: &'static str,
    base: usize,
    zero: usize,
    plus: CayleyTable,
    right: PermOut,
    left: PermOut,
    r: PermOut,
    l: PermOut,
}

impl From<&LoopDerivation> for LoopOut {
    fn from(d: &LoopDerivation) -> Self {
        Self {
            kind: "loop",
            base: d.base,
            zero: d.zero,
            plus: d.plus.clone(),
            right: (&d.right).into(),
            left: (&d.left).into(),
            r: (&d.r).into(),
            l: (&d.l).into(),
        }
    }
}

fn decompose(a: DecomposeArgs) -> Result<u8> {
    let t = a.common.read()?;
    let kind = match a.kind {
        Some(k) => k,
        None if t.is_quasigroup() => As::Quasigroup,
        None if t.is_associative() => As::Semigroup,
        None => bail!("table is neither a quasigroup nor a semigroup"),
    };
    let json = match kind {
        As::Quasigroup => {
            let d = derive_loop(&t, a.base)?;
            serde_json::to_string_pretty(&LoopOut::from(&d))?
        }
        As::Semigroup => {
            let s = semigroup_structure(&t, &a.common.limits())?;
            serde_json::to_string_pretty(&Structure::Semigroup(Box::new(s)))?
        }
    };
    emit(&format!("{json}\n"))?;
    Ok(0)
}

fn generate(a: GenerateArgs) -> Result<u8> {
    let spec: GeneratorSpec = a.spec.parse()?;
    let t = spec.build(&Limits::default())?;
    if a.json {
        emit(&format!("{}\n", t.to_json()))?;
    } else {
        emit(&format!("# {spec}\n{}", t.to_text()))?;
    }
    Ok(0)
}

fn run_census(a: CensusArgs) -> Result<u8> {
    let class: TableClass = a.class.parse()?;
    let report = census(a.order, class, a.sample.map(|n| (n, a.seed)), &Limits::default())?;
    if a.json {
        emit(&format!("{}\n", serde_json::to_string_pretty(&report)?))?;
    } else if a.csv {
        emit(&report.to_csv())?;
    } else {
        let c = &report.counts;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "order {} {} ({}): {} tables",
            report.order,
            report.class,
            if a.sample.is_some() { "sampled" } else { "exhaustive" },
            report.scanned
        );
        for (name, t) in [
            ("abelian/oracle", c.abelian_oracle),
            ("abelian/fast", c.abelian_fast),
            ("hamiltonian/oracle", c.hamiltonian_oracle),
            ("hamiltonian/fast", c.hamiltonian_fast),
        ] {
            let _ = writeln!(out, "  {name:<20} yes {:>6}  no {:>6}  undetermined {:>6}", t.yes, t.no, t.undetermined);
        }
        let _ = writeln!(out, "  disagreements {}", report.disagreements);
        if let Some(t) = &report.first_disagreement {
            let _ = write!(out, "first disagreement:\n{t}");
        }
        emit(&out)?;
    }
    Ok(if report.disagreements > 0 { EXIT_INCONSISTENT } else { 0 })
}
