//! The `fglat` command line.
//!
//! Exit codes: `0` yes or success, `1` no (a witness is printed), `2` usage
//! or data error, `3` a cap was exceeded. With `--json` every command prints
//! one object `{"verdict", "witness", "certificate"}`; certificates are
//! self-contained and re-checked by `fglat verify-certificate`.

use std::collections::BTreeSet;
use std::io::{Read as _, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::counterexample as cx;
use crate::error::{Error, Result};
use crate::free::FreeLattice;
use crate::hom::{self, FiniteHom, FreeHom, NonFgWitness, PairSet};
use crate::order::{fixtures, DCertificate, FiniteLattice, LatticeFile};
use crate::partial::{semilattice_to_lattice, PartialLattice};
use crate::term::Term;

#[derive(Parser, Debug)]
#[command(name = "fglat", version, about = "Word problems, bounded homomorphisms and fiber products for finitely generated lattices")]
pub struct Cli {
    #[command(flatten)]
    pub config: CliConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Caps and output mode shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct CliConfig {
    /// Bound on closure sizes and enumerations.
    #[arg(long, global = true, env = "FGLAT_CAP", default_value_t = 100_000, value_parser = positive)]
    pub cap: usize,
    /// Bound on stage indices: alpha/beta iterations, closure stages,
    /// witness search depth.
    #[arg(long, global = true, env = "FGLAT_STAGE_CAP", default_value_t = 12, value_parser = positive)]
    pub stage_cap: usize,
    /// Bound on lattice size for the antichain searches behind (W) and (D).
    #[arg(long, global = true, env = "FGLAT_SUBSET_CAP", default_value_t = crate::order::DEFAULT_SUBSET_CAP, value_parser = positive)]
    pub subset_cap: usize,
    /// Machine-readable output.
    #[arg(long, global = true, conflicts_with = "dot")]
    pub json: bool,
    /// Hasse diagram in DOT, for commands that produce a lattice.
    #[arg(long, global = true)]
    pub dot: bool,
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Finite lattices read from JSON files.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// The free lattice on a finite set of generators.
    #[command(subcommand)]
    Free(FreeCmd),
    /// Lattices freely generated by finite partial lattices.
    #[command(subcommand)]
    Fp(FpCmd),
    /// Homomorphisms onto finite lattices: alpha/beta maps and boundedness.
    #[command(subcommand)]
    Hom(HomCmd),
    /// Finite generating sets of fiber products of finite lattices.
    #[command(subcommand)]
    Fiber(FiberCmd),
    /// A pair of the fiber product of two free-lattice homomorphisms lying
    /// outside the sublattice generated by a finite set.
    Witness(WitnessArgs),
    /// Built-in lattices and the truncated checks on the infinite example.
    Fixture(FixtureArgs),
    /// Re-checks a certificate printed with `--json`.
    VerifyCertificate {
        /// File holding the JSON output, or `-` for standard input.
        file: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    /// Validates a lattice file and summarizes it.
    Check { file: PathBuf },
    /// Boundedness via the D-relation.
    Bounded {
        file: PathBuf,
        #[command(flatten)]
        side: Side,
    },
    /// Whitman's condition.
    Whitman { file: PathBuf },
    /// Dean's condition for a generating set.
    Dean {
        file: PathBuf,
        /// Comma-separated generating set; defaults to the file's generators.
        #[arg(long)]
        generators: Option<String>,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Side {
    #[arg(long, conflicts_with = "upper_only")]
    pub lower_only: bool,
    #[arg(long)]
    pub upper_only: bool,
}

impl Side {
    fn lower(self) -> bool {
        !self.upper_only
    }

    fn upper(self) -> bool {
        !self.lower_only
    }
}

#[derive(Subcommand, Debug)]
pub enum FreeCmd {
    /// Decides `s <= t`.
    Leq {
        #[arg(long)]
        gens: String,
        s: String,
        t: String,
    },
    /// Decides `s = t`.
    Eq {
        #[arg(long)]
        gens: String,
        s: String,
        t: String,
    },
    /// Canonical form and least stage `G_k`/`H_k` of a term.
    Rank {
        #[arg(long)]
        gens: String,
        t: String,
    },
}

#[derive(Args, Debug)]
pub struct FpSource {
    /// Partial lattice file (lattice fields plus `joins`/`meets`).
    file: PathBuf,
    /// Read the file as a lattice and declare all of its joins and meets.
    #[arg(long)]
    total: bool,
}

#[derive(Subcommand, Debug)]
pub enum FpCmd {
    /// Decides `s <= t` in `F(P)`.
    Leq {
        #[command(flatten)]
        source: FpSource,
        s: String,
        t: String,
    },
    /// Boundedness of `F(P)`, or of the sublattice generated by terms.
    Bounded {
        #[command(flatten)]
        source: FpSource,
        /// Semicolon-separated generating terms of a sublattice. The
        /// sublattice is assumed to satisfy (D); a warning is printed when
        /// the partial lattice gives no Whitman certificate for it.
        #[arg(long)]
        generators: Option<String>,
        /// First closure stage to search.
        #[arg(long)]
        stage: Option<usize>,
        #[command(flatten)]
        side: Side,
    },
}

#[derive(Args, Debug)]
pub struct HomArgs {
    /// `[A.json] D.json`: the source lattice file (omitted with `--free`)
    /// and the target lattice file.
    #[arg(num_args = 1..=2, required = true)]
    files: Vec<PathBuf>,
    /// Use the free lattice on these comma-separated generators as source.
    #[arg(long)]
    free: Option<String>,
    /// Generator images, `x=a,y=b`.
    #[arg(long)]
    images: String,
}

#[derive(Subcommand, Debug)]
pub enum HomCmd {
    /// `beta_k(d)`, or the least preimage of `d` when `--k` is omitted.
    Beta {
        #[command(flatten)]
        hom: HomArgs,
        #[arg(long)]
        element: String,
        #[arg(long)]
        k: Option<usize>,
    },
    /// `alpha_k(d)`, or the greatest preimage of `d` when `--k` is omitted.
    Alpha {
        #[command(flatten)]
        hom: HomArgs,
        #[arg(long)]
        element: String,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Lower boundedness, over the whole target and over a generating set.
    LowerBounded {
        #[command(flatten)]
        hom: HomArgs,
        /// Comma-separated generating set of the target satisfying (D).
        #[arg(long)]
        p: Option<String>,
    },
}

#[derive(Args, Debug)]
pub struct FiberArgs {
    a: PathBuf,
    b: PathBuf,
    d: PathBuf,
    /// Images of the generators of A, `x=a,y=b`.
    #[arg(long)]
    g: String,
    /// Images of the generators of B.
    #[arg(long)]
    h: String,
    /// Comma-separated generating set of D; defaults to all of D.
    #[arg(long)]
    p: Option<String>,
    /// Adjoin the projections of the set to the generators and rebuild it.
    #[arg(long)]
    enlarged: bool,
}

#[derive(Subcommand, Debug)]
pub enum FiberCmd {
    /// Prints the generating set.
    Gen(FiberArgs),
    /// Checks that the generating set generates the fiber product.
    Verify(FiberArgs),
    /// Checks that the set plus `(0_A, 1_B)` generates `{(a, b) : g(a) <= h(b)}`.
    Remark17(FiberArgs),
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    /// Target lattice file; must not be lower bounded.
    #[arg(long)]
    target: PathBuf,
    /// Generator images of the first free source, `x=a,y=b`.
    #[arg(long)]
    g: String,
    /// Generator images of the second free source; defaults to `--g`.
    #[arg(long)]
    h: Option<String>,
    /// Pairs file `{"pairs": [["<term>", "<term>"], ...]}`; empty if omitted.
    #[arg(long)]
    zfile: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FixtureArgs {
    /// `L`, `M`, `m3`, `n5`, `2x2`, `chainN` or `booleanK`.
    name: String,
    /// Truncation depth for `M`.
    #[arg(long, default_value_t = 6)]
    depth: u32,
    /// Check to run on `M`.
    #[arg(long, value_enum)]
    verify: Option<MCheck>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum MCheck {
    Mfg,
    Kernel,
    Unbounded,
    Order,
    Identities,
    Homomorphism,
}

/// A self-contained claim that `verify-certificate` re-derives.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// A D-relation rank function (lower bounded) or D-cycle (not lower
    /// bounded) of `lattice`, or of its dual when `dual` is set.
    DRelation {
        lattice: LatticeFile,
        dual: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rank: Option<Vec<(String, usize)>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cycle: Option<Vec<String>>,
    },
    /// Antichains violating (W), or (D) when `generators` is present.
    ConditionFailure {
        lattice: LatticeFile,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<String>>,
        meetands: Vec<String>,
        joinands: Vec<String>,
    },
    /// `pairs` generate the fiber product (`relation = "equal"`) or the
    /// order relation `g(a) <= h(b)` (`relation = "below"`, with
    /// `(0_A, 1_B)` adjoined). Maps list the image of every element.
    PairGeneration {
        a: LatticeFile,
        b: LatticeFile,
        d: LatticeFile,
        g: Vec<(String, String)>,
        h: Vec<(String, String)>,
        relation: String,
        pairs: Vec<(String, String)>,
    },
    /// A pair of the fiber product outside the sublattice generated by
    /// `pairs`.
    NonFinitelyGenerated {
        target: LatticeFile,
        g: Vec<(String, String)>,
        h: Vec<(String, String)>,
        pairs: Vec<(String, String)>,
        element: String,
        k: usize,
        n: usize,
        m: usize,
        a: String,
        b: String,
    },
}

#[derive(Serialize, Deserialize)]
struct PairsFile {
    pairs: Vec<(String, String)>,
}

/// What a command reports before rendering.
struct Report {
    yes: bool,
    lines: Vec<String>,
    witness: Value,
    certificate: Value,
    dot: Option<String>,
}

impl Report {
    fn new(yes: bool) -> Self {
        Report {
            yes,
            lines: Vec::new(),
            witness: Value::Null,
            certificate: Value::Null,
            dot: None,
        }
    }

    fn line(mut self, s: impl Into<String>) -> Self {
        self.lines.push(s.into());
        self
    }
}

/// Parses `args` (program name first) and runs the command, writing to
/// standard output and error. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return if code == 0 { 0 } else { 2 };
        }
    };
    match execute(&cli, err) {
        Ok(r) => render(&cli.config, r, out, err),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for an error: `3` for cap breaches, `1` for errors that are
/// themselves a negative answer, `2` otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => 3,
        Error::NotLowerBounded(_) | Error::NotUpperBounded(_) | Error::TargetLowerBounded => 1,
        _ => 2,
    }
}

fn render(cfg: &CliConfig, r: Report, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let code = if r.yes { 0 } else { 1 };
    let res = if cfg.dot {
        match &r.dot {
            Some(d) => write!(out, "{d}"),
            None => {
                let _ = writeln!(err, "error: this command has no DOT output");
                return 2;
            }
        }
    } else if cfg.json {
        let v = json!({
            "verdict": if r.yes { "yes" } else { "no" },
            "witness": r.witness,
            "certificate": r.certificate,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json values serialize"))
    } else {
        r.lines.iter().try_for_each(|l| writeln!(out, "{l}"))
    };
    if res.is_err() {
        return 2;
    }
    code
}

fn execute(cli: &Cli, err: &mut dyn Write) -> Result<Report> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Lattice(c) => lattice_cmd(cfg, c),
        Command::Free(c) => free_cmd(c),
        Command::Fp(c) => fp_cmd(cfg, c, err),
        Command::Hom(c) => hom_cmd(cfg, c),
        Command::Fiber(c) => fiber_cmd(cfg, c),
        Command::Witness(a) => witness_cmd(cfg, a),
        Command::Fixture(a) => fixture_cmd(cfg, a),
        Command::VerifyCertificate { file } => verify_cmd(cfg, file),
    }
}

fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Invalid(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn read_lattice(path: &Path) -> Result<FiniteLattice> {
    FiniteLattice::from_json(&read_text(path)?)
}

fn names(l: &FiniteLattice, ids: impl IntoIterator<Item = usize>) -> Vec<String> {
    ids.into_iter().map(|i| l.name(i).to_string()).collect()
}

fn split_list(s: &str, sep: char) -> Vec<String> {
    s.split(sep).map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

fn element_ids(l: &FiniteLattice, list: &str) -> Result<Vec<usize>> {
    split_list(list, ',').iter().map(|n| l.index_of(n)).collect()
}

fn d_certificate(l: &FiniteLattice, dual: bool, cert: &DCertificate) -> Certificate {
    let view = if dual { l.dual() } else { l.clone() };
    let (rank, cycle) = match cert {
        DCertificate::Rank(r) => (Some(r.iter().map(|&(p, k)| (view.name(p).to_string(), k)).collect()), None),
        DCertificate::Cycle(c) => (None, Some(names(&view, c.iter().copied()))),
    };
    Certificate::DRelation {
        lattice: l.to_file(),
        dual,
        rank,
        cycle,
    }
}

/// `p -D-> q -D-> ... -D-> p`
fn cycle_text(cycle: &[String]) -> String {
    let mut v = cycle.to_vec();
    v.extend(cycle.first().cloned());
    v.join(" -D-> ")
}

fn to_value(c: &Certificate) -> Value {
    serde_json::to_value(c).expect("certificates serialize")
}

/// Lower and/or upper boundedness of `l` with one report line per side.
fn bounded_report(l: &FiniteLattice, side: Side, what: &str) -> Report {
    let mut r = Report::new(true);
    let mut certs = Vec::new();
    let mut witness = Vec::new();
    for (dual, label, wanted) in [(false, "lower", side.lower()), (true, "upper", side.upper())] {
        if !wanted {
            continue;
        }
        let view = if dual { l.dual() } else { l.clone() };
        let cert = view.lower_boundedness();
        let text = match &cert {
            DCertificate::Rank(_) => format!("{what} is {label} bounded"),
            DCertificate::Cycle(c) => {
                r.yes = false;
                witness.push(json!({ "side": label, "cycle": names(&view, c.iter().copied()) }));
                let cyc = cycle_text(&names(&view, c.iter().copied()));
                format!("{what} is not {label} bounded; D-cycle{}: {cyc}", if dual { " of the dual" } else { "" })
            }
        };
        r.lines.push(text);
        certs.push(to_value(&d_certificate(l, dual, &cert)));
    }
    r.witness = if witness.is_empty() { Value::Null } else { Value::Array(witness) };
    r.certificate = Value::Array(certs);
    r
}

fn lattice_cmd(cfg: &CliConfig, c: &LatticeCmd) -> Result<Report> {
    match c {
        LatticeCmd::Check { file } => {
            let l = read_lattice(file)?;
            let mut r = Report::new(true)
                .line(format!("lattice with {} elements, bottom {}, top {}", l.len(), l.name(l.bottom()), l.name(l.top())))
                .line(format!("join-irreducibles: {}", names(&l, l.join_irreducibles()).join(", ")))
                .line(format!("meet-irreducibles: {}", names(&l, l.meet_irreducibles()).join(", ")))
                .line(format!("generators: {}", names(&l, l.generators().iter().copied()).join(", ")));
            r.witness = serde_json::to_value(l.to_file()).expect("lattice files serialize");
            r.dot = Some(l.to_dot());
            Ok(r)
        }
        LatticeCmd::Bounded { file, side } => {
            let l = read_lattice(file)?;
            let mut r = bounded_report(&l, *side, "lattice");
            r.dot = Some(l.to_dot());
            Ok(r)
        }
        LatticeCmd::Whitman { file } => {
            let l = read_lattice(file)?;
            condition_report(&l, l.check_whitman_capped(cfg.subset_cap)?, None, "Whitman's condition")
        }
        LatticeCmd::Dean { file, generators } => {
            let l = read_lattice(file)?;
            let gens = match generators {
                Some(g) => element_ids(&l, g)?,
                None => l.generators().to_vec(),
            };
            let fail = l.check_dean_capped(&gens, cfg.subset_cap)?;
            condition_report(&l, fail, Some(names(&l, gens)), "Dean's condition")
        }
    }
}

fn condition_report(
    l: &FiniteLattice,
    fail: Option<crate::order::ConditionFailure>,
    generators: Option<Vec<String>>,
    what: &str,
) -> Result<Report> {
    let Some(f) = fail else {
        return Ok(Report::new(true).line(format!("{what} holds")));
    };
    let (s, t) = (names(l, f.meetands.iter().copied()), names(l, f.joinands.iter().copied()));
    let m = l.name(l.meet_set(f.meetands.iter().copied()));
    let j = l.name(l.join_set(f.joinands.iter().copied()));
    let mut r = Report::new(false).line(format!(
        "{what} fails: meet of {{{}}} = {m} <= {j} = join of {{{}}}",
        s.join(", "),
        t.join(", ")
    ));
    r.witness = json!({ "meetands": s, "joinands": t });
    r.certificate = to_value(&Certificate::ConditionFailure {
        lattice: l.to_file(),
        generators,
        meetands: s,
        joinands: t,
    });
    Ok(r)
}

fn parse_term(s: &str) -> Result<Term> {
    Term::parse(s)
}

fn free_cmd(c: &FreeCmd) -> Result<Report> {
    match c {
        FreeCmd::Leq { gens, s, t } | FreeCmd::Eq { gens, s, t } => {
            let f = FreeLattice::parse_gens(gens)?;
            let (s, t) = (parse_term(s)?, parse_term(t)?);
            let (holds, op) = match c {
                FreeCmd::Leq { .. } => (f.leq(&s, &t)?, "<="),
                _ => (f.eq(&s, &t)?, "="),
            };
            let neg = if holds { "" } else { "not " };
            Ok(Report::new(holds).line(format!("{s} {neg}{op} {t}")))
        }
        FreeCmd::Rank { gens, t } => {
            let f = FreeLattice::parse_gens(gens)?;
            let t = parse_term(t)?;
            let canon = f.canonical_form(&t)?;
            let rank = f.alternation_rank(&t)?;
            let mut r = Report::new(true)
                .line(format!("canonical form: {canon}"))
                .line(format!("least stage: {rank}"));
            r.witness = json!({ "canonical": canon.to_string(), "stage": rank.to_string() });
            Ok(r)
        }
    }
}

fn read_partial(src: &FpSource) -> Result<PartialLattice> {
    let text = read_text(&src.file)?;
    if src.total {
        Ok(PartialLattice::from_finite_lattice(&FiniteLattice::from_json(&text)?))
    } else {
        PartialLattice::from_json(&text)
    }
}

fn fp_cmd(cfg: &CliConfig, c: &FpCmd, err: &mut dyn Write) -> Result<Report> {
    match c {
        FpCmd::Leq { source, s, t } => {
            let p = read_partial(source)?;
            let (s, t) = (parse_term(s)?, parse_term(t)?);
            let holds = p.leq_fp(&s, &t)?;
            let neg = if holds { "" } else { "not " };
            Ok(Report::new(holds).line(format!("{s} {neg}<= {t} in F(P)")))
        }
        FpCmd::Bounded {
            source,
            generators,
            stage,
            side,
        } => {
            let p = read_partial(source)?;
            let terms = match generators {
                Some(g) => Some(split_list(g, ';').iter().map(|t| parse_term(t)).collect::<Result<Vec<_>>>()?),
                None => None,
            };
            let mut r = Report::new(true);
            let mut certs = Vec::new();
            let mut witness = Vec::new();
            let mut dot = None;
            for (dual, label, wanted) in [(false, "lower", side.lower()), (true, "upper", side.upper())] {
                if !wanted {
                    continue;
                }
                let q = if dual { p.dual() } else { p.clone() };
                let (l, cert, detail) = match &terms {
                    None => {
                        let st = q.closure_stage(stage.unwrap_or(0), cfg.cap)?;
                        let l = semilattice_to_lattice(&st);
                        let cert = l.lower_boundedness();
                        let detail = format!("closure stage {} with {} elements", st.n, l.len());
                        (l, cert, detail)
                    }
                    Some(ts) => {
                        let ts: Vec<Term> = if dual { ts.iter().map(Term::dual).collect() } else { ts.clone() };
                        let v = q.lower_bounded_sublattice(&ts, stage.unwrap_or(0), cfg.stage_cap, cfg.cap)?;
                        if !v.dean_certified {
                            let _ = writeln!(
                                err,
                                "warning: F(P) fails the Whitman check; the {label} verdict assumes the sublattice satisfies Dean's condition"
                            );
                        }
                        let detail = format!("generated sublattice with {} elements inside closure stage {}", v.size, v.stage);
                        (v.sublattice, v.certificate, detail)
                    }
                };
                let view = if dual { " (on the dual)" } else { "" };
                match &cert {
                    DCertificate::Rank(_) => r.lines.push(format!("{label} bounded: yes; {detail}{view}")),
                    DCertificate::Cycle(cy) => {
                        r.yes = false;
                        let cy = names(&l, cy.iter().copied());
                        r.lines.push(format!("{label} bounded: no; {detail}{view}; D-cycle: {}", cycle_text(&cy)));
                        witness.push(json!({ "side": label, "cycle": cy }));
                    }
                }
                dot.get_or_insert_with(|| l.to_dot());
                certs.push(to_value(&d_certificate(&l, false, &cert)));
            }
            r.witness = if witness.is_empty() { Value::Null } else { Value::Array(witness) };
            r.certificate = Value::Array(certs);
            r.dot = dot;
            Ok(r)
        }
    }
}

enum AnyHom {
    Finite(FiniteHom),
    Free(Box<FreeHom>),
}

fn build_hom(h: &HomArgs) -> Result<AnyHom> {
    let images = FreeHom::parse_images(&h.images)?;
    match (&h.free, h.files.as_slice()) {
        (Some(gens), [d]) => {
            let target = read_lattice(d)?;
            Ok(AnyHom::Free(Box::new(FreeHom::new(FreeLattice::parse_gens(gens)?, target, &images)?)))
        }
        (None, [a, d]) => {
            let (src, target) = (read_lattice(a)?, read_lattice(d)?);
            Ok(AnyHom::Finite(finite_hom(src, target, &images)?))
        }
        (Some(_), _) => Err(Error::Invalid("with --free give only the target file".into())),
        (None, _) => Err(Error::Invalid("expected a source file and a target file".into())),
    }
}

fn finite_hom(src: FiniteLattice, target: FiniteLattice, images: &[(String, String)]) -> Result<FiniteHom> {
    let ids = images
        .iter()
        .map(|(x, d)| Ok((src.index_of(x)?, target.index_of(d)?)))
        .collect::<Result<Vec<_>>>()?;
    FiniteHom::from_generator_images(src, target, &ids)
}

fn hom_cmd(cfg: &CliConfig, c: &HomCmd) -> Result<Report> {
    match c {
        HomCmd::Beta { hom, element, k } | HomCmd::Alpha { hom, element, k } => {
            let beta = matches!(c, HomCmd::Beta { .. });
            let name = if beta { "beta" } else { "alpha" };
            let label = match k {
                Some(k) => format!("{name}_{k}({element})"),
                None => format!("{name}({element})"),
            };
            let (value, stable_at) = match build_hom(hom)? {
                AnyHom::Finite(g) => {
                    let d = g.target().index_of(element)?;
                    let v = match (k, beta) {
                        (Some(k), true) => g.beta_k(d, *k),
                        (Some(k), false) => g.alpha_k(d, *k),
                        (None, true) => g.beta_stable(d).ok_or(Error::NotSurjective)?,
                        (None, false) => g.alpha_stable(d).ok_or(Error::NotSurjective)?,
                    };
                    (g.source().name(v).to_string(), None)
                }
                AnyHom::Free(mut g) => {
                    let d = g.target().index_of(element)?;
                    match (k, beta) {
                        (Some(k), true) => (g.beta_k(d, *k)?.to_string(), None),
                        (Some(k), false) => (g.alpha_k(d, *k)?.to_string(), None),
                        (None, true) => {
                            let (s, t) = g.beta_stable(cfg.stage_cap)?;
                            (t[d].to_string(), Some(s))
                        }
                        (None, false) => {
                            let (s, t) = g.alpha_stable(cfg.stage_cap)?;
                            (t[d].to_string(), Some(s))
                        }
                    }
                }
            };
            let mut r = Report::new(true).line(format!("{label} = {value}"));
            if let Some(s) = stable_at {
                r.lines.push(format!("stable from k = {s}"));
            }
            r.witness = json!({ "value": value, "stable_from": stable_at });
            Ok(r)
        }
        HomCmd::LowerBounded { hom, p } => match build_hom(hom)? {
            AnyHom::Finite(g) => {
                if !g.is_surjective() {
                    return Err(Error::NotSurjective);
                }
                Ok(Report::new(true).line("lower bounded: yes (finite source, every preimage has a least element)"))
            }
            AnyHom::Free(g) => {
                let ps = match p {
                    Some(p) => Some(element_ids(g.target(), p)?),
                    None => None,
                };
                let rep = g.lower_bounded_report(ps.as_deref())?;
                let t = g.target();
                let mut r = Report::new(rep.all_elements)
                    .line(format!("lower bounded: {}", if rep.all_elements { "yes" } else { "no" }));
                if let Some(po) = rep.p_only {
                    r.lines.push(format!("preimages of P lower bounded: {}", if po { "yes" } else { "no" }));
                }
                if let DCertificate::Cycle(cy) = &rep.certificate {
                    let cy = names(t, cy.iter().copied());
                    r.lines.push(format!("D-cycle in the target: {}", cycle_text(&cy)));
                    r.witness = json!({ "cycle": cy, "p_only": rep.p_only });
                }
                r.certificate = to_value(&d_certificate(t, false, &rep.certificate));
                Ok(r)
            }
        },
    }
}

struct FiberInput {
    g: FiniteHom,
    h: FiniteHom,
    p: Vec<usize>,
}

fn fiber_input(f: &FiberArgs) -> Result<FiberInput> {
    let (a, b, d) = (read_lattice(&f.a)?, read_lattice(&f.b)?, read_lattice(&f.d)?);
    let g = finite_hom(a, d.clone(), &FreeHom::parse_images(&f.g)?)?;
    let h = finite_hom(b, d.clone(), &FreeHom::parse_images(&f.h)?)?;
    let p = match &f.p {
        Some(p) => element_ids(&d, p)?,
        None => (0..d.len()).collect(),
    };
    Ok(FiberInput { g, h, p })
}

fn map_pairs(g: &FiniteHom) -> Vec<(String, String)> {
    (0..g.source().len())
        .map(|a| (g.source().name(a).to_string(), g.target().name(g.apply(a)).to_string()))
        .collect()
}

fn pair_names(g: &FiniteHom, h: &FiniteHom, z: &PairSet) -> Vec<(String, String)> {
    z.iter()
        .map(|&(a, b)| (g.source().name(a).to_string(), h.source().name(b).to_string()))
        .collect()
}

fn fiber_cmd(cfg: &CliConfig, c: &FiberCmd) -> Result<Report> {
    let (FiberCmd::Gen(args) | FiberCmd::Verify(args) | FiberCmd::Remark17(args)) = c;
    let FiberInput { g, h, p } = fiber_input(args)?;
    let z = if args.enlarged {
        hom::theorem1_generators_enlarged(&g, &h, &p)?
    } else {
        hom::theorem1_generators(&g, &h, &p)?
    };
    let pairs = pair_names(&g, &h, &z);
    let relation = if matches!(c, FiberCmd::Remark17(_)) { "below" } else { "equal" };
    let cert = Certificate::PairGeneration {
        a: g.source().to_file(),
        b: h.source().to_file(),
        d: g.target().to_file(),
        g: map_pairs(&g),
        h: map_pairs(&h),
        relation: relation.into(),
        pairs: pairs.clone(),
    };
    let shown: Vec<String> = pairs.iter().map(|(a, b)| format!("({a}, {b})")).collect();
    match c {
        FiberCmd::Gen(_) => {
            let mut r = Report::new(true).line(format!("{} generators:", z.len()));
            r.lines.extend(shown);
            r.witness = json!({ "pairs": pairs });
            r.certificate = to_value(&cert);
            Ok(r)
        }
        FiberCmd::Verify(_) | FiberCmd::Remark17(_) => {
            let missing = pair_generation_gap(&cert, cfg.cap)?;
            let what = if relation == "equal" {
                "the fiber product"
            } else {
                "{(a, b) : g(a) <= h(b)}"
            };
            let mut r = Report::new(missing.is_empty());
            if missing.is_empty() {
                r.lines.push(format!("{} pairs generate {what}", z.len()));
            } else {
                r.lines.push(format!("{} pairs do not generate {what}; {} pairs missing, first ({}, {})", z.len(), missing.len(), missing[0].0, missing[0].1));
                r.witness = json!({ "missing": missing });
            }
            r.certificate = to_value(&cert);
            Ok(r)
        }
    }
}

/// For a pair-generation certificate, the target pairs not reached by the
/// closure, as names.
fn pair_generation_gap(c: &Certificate, cap: usize) -> Result<Vec<(String, String)>> {
    let Certificate::PairGeneration {
        a,
        b,
        d,
        g,
        h,
        relation,
        pairs,
    } = c
    else {
        unreachable!("called on pair-generation certificates only")
    };
    let (a, b, d) = (a.clone().into_lattice()?, b.clone().into_lattice()?, d.clone().into_lattice()?);
    let full_map = |src: &FiniteLattice, m: &[(String, String)]| -> Result<FiniteHom> {
        let mut map = vec![None; src.len()];
        for (x, y) in m {
            map[src.index_of(x)?] = Some(d.index_of(y)?);
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Invalid(format!("no image for `{}`", src.name(i)))))
            .collect::<Result<Vec<_>>>()?;
        FiniteHom::new(src.clone(), d.clone(), map)
    };
    let (gh, hh) = (full_map(&a, g)?, full_map(&b, h)?);
    let mut z: PairSet = pairs
        .iter()
        .map(|(x, y)| Ok((a.index_of(x)?, b.index_of(y)?)))
        .collect::<Result<_>>()?;
    let below = match relation.as_str() {
        "equal" => false,
        "below" => true,
        other => return Err(Error::Invalid(format!("unknown relation `{other}`"))),
    };
    if below {
        z.insert((a.bottom(), b.top()));
    }
    let got = hom::sublattice_closure(&a, &b, &z, cap)?;
    let mut missing = Vec::new();
    for x in 0..a.len() {
        for y in 0..b.len() {
            let (u, v) = (gh.apply(x), hh.apply(y));
            let wanted = if below { d.leq(u, v) } else { u == v };
            if wanted != got.contains(&(x, y)) {
                missing.push((a.name(x).to_string(), b.name(y).to_string()));
            }
        }
    }
    Ok(missing)
}

fn free_hom_from_images(target: &FiniteLattice, images: &str) -> Result<FreeHom> {
    let images = FreeHom::parse_images(images)?;
    let gens: Vec<&str> = images.iter().map(|(x, _)| x.as_str()).collect::<BTreeSet<_>>().into_iter().collect();
    FreeHom::new(FreeLattice::new(&gens)?, target.clone(), &images)
}

fn image_pairs(g: &FreeHom) -> Vec<(String, String)> {
    g.free()
        .gens()
        .iter()
        .map(|x| (x.clone(), g.target().name(g.generator_image(x).expect("known generator")).to_string()))
        .collect()
}

fn parse_pairs(pairs: &[(String, String)]) -> Result<Vec<(Term, Term)>> {
    pairs.iter().map(|(a, b)| Ok((parse_term(a)?, parse_term(b)?))).collect()
}

fn witness_cmd(cfg: &CliConfig, w: &WitnessArgs) -> Result<Report> {
    let target = read_lattice(&w.target)?;
    let mut g = free_hom_from_images(&target, &w.g)?;
    let mut h = free_hom_from_images(&target, w.h.as_deref().unwrap_or(&w.g))?;
    let pairs = match &w.zfile {
        Some(f) => {
            let file: PairsFile =
                serde_json::from_str(&read_text(f)?).map_err(|e| Error::Invalid(format!("{}: {e}", f.display())))?;
            file.pairs
        }
        None => Vec::new(),
    };
    let z = parse_pairs(&pairs)?;
    let found = hom::nonfg_witness(&mut g, &mut h, &z, cfg.stage_cap)?;
    let mut r = Report::new(true)
        .line(format!("pair outside the generated sublattice: ({}, {})", found.a, found.b))
        .line(format!(
            "both map to {}; a lies in H{}; b lies strictly below beta_{}({}) with n = {}",
            found.d,
            found.k,
            found.k + found.n,
            found.d,
            found.n
        ));
    r.witness = json!({
        "a": found.a.to_string(),
        "b": found.b.to_string(),
        "element": found.d,
        "k": found.k,
        "n": found.n,
        "m": found.m,
    });
    r.certificate = to_value(&Certificate::NonFinitelyGenerated {
        target: target.to_file(),
        g: image_pairs(&g),
        h: image_pairs(&h),
        pairs,
        element: found.d.clone(),
        k: found.k,
        n: found.n,
        m: found.m,
        a: found.a.to_string(),
        b: found.b.to_string(),
    });
    Ok(r)
}

fn fixture_cmd(cfg: &CliConfig, f: &FixtureArgs) -> Result<Report> {
    if f.name == "M" {
        let check = f
            .verify
            .ok_or_else(|| Error::Invalid("fixture M needs --verify".into()))?;
        let j = f.depth;
        let (ok, what, witness) = match check {
            MCheck::Mfg => (cx::verify_mfg(j, cfg.cap)?, "generated by a_{i,0}, a_{i,1}", Value::Null),
            MCheck::Kernel => {
                let missing = cx::kernel_missing(j, cfg.cap)?;
                let shown: Vec<(String, String)> =
                    missing.iter().take(10).map(|(u, v)| (u.to_string(), v.to_string())).collect();
                let w = if missing.is_empty() {
                    Value::Null
                } else {
                    json!({ "missing": missing.len(), "first": shown })
                };
                (missing.is_empty(), "kernel generated by the images of the generators", w)
            }
            MCheck::Unbounded => (cx::verify_h_unbounded(j), "no kernel class has a largest element", Value::Null),
            MCheck::Order => (cx::verify_partial_order(j), "partial order axioms", Value::Null),
            MCheck::Identities => (cx::verify_identities(j), "join and meet identities", Value::Null),
            MCheck::Homomorphism => (cx::verify_h_homomorphism(j), "h preserves joins and meets", Value::Null),
        };
        let mut r = Report::new(ok).line(format!(
            "M truncated at index {j}: {what}: {}",
            if ok { "holds" } else { "fails" }
        ));
        if let Some(n) = witness.get("missing") {
            r.lines.push(format!("{n} kernel pairs not reached, first {}", witness["first"][0]));
        }
        r.witness = witness;
        return Ok(r);
    }
    let l = fixtures::by_name(&f.name).ok_or_else(|| Error::Invalid(format!("unknown fixture `{}`", f.name)))?;
    let mut r = Report::new(true).line(l.to_json());
    r.witness = serde_json::to_value(l.to_file()).expect("lattice files serialize");
    r.dot = Some(l.to_dot());
    Ok(r)
}

/// Re-derives a certificate. Returns whether it holds.
pub fn verify_certificate(c: &Certificate, cap: usize) -> Result<bool> {
    match c {
        Certificate::DRelation {
            lattice,
            dual,
            rank,
            cycle,
        } => {
            let l = lattice.clone().into_lattice()?;
            let view = if *dual { l.dual() } else { l };
            let cert = match (rank, cycle) {
                (Some(r), None) => DCertificate::Rank(
                    r.iter()
                        .map(|(p, k)| Ok((view.index_of(p)?, *k)))
                        .collect::<Result<_>>()?,
                ),
                (None, Some(c)) => {
                    DCertificate::Cycle(c.iter().map(|p| view.index_of(p)).collect::<Result<_>>()?)
                }
                _ => return Err(Error::Invalid("give exactly one of `rank` and `cycle`".into())),
            };
            Ok(view.verify_d_certificate(&cert))
        }
        Certificate::ConditionFailure {
            lattice,
            generators,
            meetands,
            joinands,
        } => {
            let l = lattice.clone().into_lattice()?;
            let ids = |v: &[String]| v.iter().map(|x| l.index_of(x)).collect::<Result<Vec<_>>>();
            let (s, t) = (ids(meetands)?, ids(joinands)?);
            let gens = generators.as_deref().map(ids).transpose()?;
            if let Some(g) = &gens {
                if !l.generated_by(g).is_full() {
                    return Ok(false);
                }
            }
            Ok(s.len() >= 2 && t.len() >= 2 && l.violates(&s, &t, gens.as_deref()))
        }
        Certificate::PairGeneration { .. } => Ok(pair_generation_gap(c, cap)?.is_empty()),
        Certificate::NonFinitelyGenerated {
            target,
            g,
            h,
            pairs,
            element,
            k,
            n,
            m,
            a,
            b,
        } => {
            let t = target.clone().into_lattice()?;
            let join = |v: &[(String, String)]| v.iter().map(|(x, d)| format!("{x}={d}")).collect::<Vec<_>>().join(",");
            let mut gh = free_hom_from_images(&t, &join(g))?;
            let mut hh = free_hom_from_images(&t, &join(h))?;
            let w = NonFgWitness {
                d: element.clone(),
                k: *k,
                n: *n,
                m: *m,
                a: parse_term(a)?,
                b: parse_term(b)?,
            };
            hom::verify_witness(&mut gh, &mut hh, &parse_pairs(pairs)?, &w)
        }
    }
}

fn verify_cmd(cfg: &CliConfig, file: &Path) -> Result<Report> {
    let v: Value = serde_json::from_str(&read_text(file)?).map_err(|e| Error::Invalid(e.to_string()))?;
    let body = match v.get("certificate") {
        Some(c) => c.clone(),
        None => v,
    };
    let list = match body {
        Value::Array(xs) => xs,
        Value::Null => return Err(Error::Invalid("no certificate to verify".into())),
        other => vec![other],
    };
    if list.is_empty() {
        return Err(Error::Invalid("no certificate to verify".into()));
    }
    let mut r = Report::new(true);
    for (i, c) in list.into_iter().enumerate() {
        let c: Certificate = serde_json::from_value(c).map_err(|e| Error::Invalid(format!("certificate {i}: {e}")))?;
        let ok = verify_certificate(&c, cfg.cap)?;
        r.yes &= ok;
        let kind = serde_json::to_value(&c).expect("certificates serialize")["kind"].clone();
        r.lines.push(format!("certificate {i} ({}): {}", kind.as_str().unwrap_or("?"), if ok { "verified" } else { "REJECTED" }));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["fglat"];
        argv.extend_from_slice(args);
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn free_leq_exit_codes() {
        assert_eq!(call(&["free", "leq", "--gens", "x,y", "x", "(x|y)"]).0, 0);
        assert_eq!(call(&["free", "leq", "--gens", "x,y", "(x|y)", "x"]).0, 1);
        assert_eq!(call(&["free", "leq", "--gens", "x,y", "x", "(x|w)"]).0, 2);
        assert_eq!(call(&["free", "leq", "--gens", "x,y", "x", "(x|"]).0, 2);
        assert_eq!(call(&["free", "frobnicate"]).0, 2);
    }

    #[test]
    fn rank_output() {
        let (code, out, _) = call(&["free", "rank", "--gens", "x,y,z", "((x & y) | z)"]);
        assert_eq!(code, 0);
        assert!(out.contains("least stage: G1"), "{out}");
    }

    #[test]
    fn fixture_l_fails_whitman_with_named_witness() {
        let (code, out, _) = call(&["fixture", "L"]);
        assert_eq!(code, 0);
        let l = FiniteLattice::from_json(&out).unwrap();
        assert_eq!(l.len(), 16);
        let dot = call(&["fixture", "L", "--dot"]).1;
        assert!(dot.starts_with("digraph"));
    }

    #[test]
    fn certificates_round_trip() {
        let m3 = fixtures::m3();
        let cert = d_certificate(&m3, false, &m3.lower_boundedness());
        assert!(verify_certificate(&cert, 1000).unwrap());
        let text = serde_json::to_string(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
        let Certificate::DRelation { lattice, cycle, .. } = cert else { unreachable!() };
        let mut forged = cycle.unwrap();
        forged.reverse();
        forged.push("0".into());
        let forged = Certificate::DRelation {
            lattice,
            dual: false,
            rank: None,
            cycle: Some(forged),
        };
        assert!(!verify_certificate(&forged, 1000).unwrap());
    }

    #[test]
    fn cap_breach_exits_three() {
        let (code, _, err) = call(&["--cap", "5", "fixture", "M", "--verify", "mfg", "--depth", "2"]);
        assert_eq!(code, 3, "{err}");
        assert_eq!(call(&["--cap", "0", "fixture", "m3"]).0, 2);
    }
}
