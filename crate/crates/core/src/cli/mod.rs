//! The `f1kit` command surface. Every command is a thin wrapper over a library
//! call that builds a [`Doc`], which [`emit`] serializes.

mod cache;
mod emit;

use clap::{Parser, ValueEnum};

use crate::blueprint::{
    boundary_crossed_relations, centralizer_subgroup, f_element, index_set, localize_relation,
    plucker_relations,
};
use crate::error::Error;
use crate::genseries::{m0n_class, open_stratum_class, solve_tdn_ode, M0nReading};
use crate::motive::{proj_class, Basis, MotClass};
use crate::torif::{constructible_open_stratum, torify_proj_power, torify_proj_space};
use crate::treeop::stratum_table;

pub use cache::{Cache, CACHE_ENV};
pub use emit::{emit, Cell, Doc, Format};

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Malformed command line or missing parameter.
pub const EXIT_USAGE: i32 = 2;
/// A parameter is outside the domain of the computation.
pub const EXIT_RANGE: i32 = 3;
/// An internal consistency check failed.
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Classes,
    Points,
    Series,
    Strata,
    Torify,
    Blueprint,
    Crossed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Space {
    /// `M̄_{0,n}`
    Mbar0,
    /// `T_{d,n}`
    Tdn,
    /// the open stratum `TH_{d,n}`
    Open,
    /// `P^d`
    Proj,
    /// the open part `M_{0,n}`
    M0n,
    /// `(P^d)^n`
    Power,
}

/// A fully parsed invocation.
#[derive(Debug, Clone, Parser)]
#[command(name = "f1kit", version, about = "Grothendieck classes, torifications and blueprints of genus-zero moduli spaces")]
pub struct CommandConfig {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long, value_enum)]
    pub space: Option<Space>,
    #[arg(long, allow_negative_numbers = true)]
    pub d: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub n: Option<i64>,
    /// Degree of the extension of `F_1` (points only).
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<i64>,
    #[arg(long, default_value = "T")]
    pub basis: Basis,
    #[arg(long, default_value_t = 10, allow_negative_numbers = true)]
    pub order: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also emit each relation divided by `f^k` (blueprint only).
    #[arg(long, default_value_t = 0)]
    pub localize: u32,
    /// Use the sheared torification on the deepest diagonal (torify power only).
    #[arg(long)]
    pub sheared: bool,
}

impl CommandConfig {
    pub fn new(command: Command) -> Self {
        CommandConfig {
            command,
            space: None,
            d: None,
            n: None,
            m: None,
            g: None,
            basis: Basis::T,
            order: 10,
            format: Format::Text,
            localize: 0,
            sheared: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Lib(Error),
}

impl CliError {
    pub fn status(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Lib(Error::Invariant(_)) => EXIT_INTERNAL,
            CliError::Lib(_) => EXIT_RANGE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn need<T: Copy>(v: Option<T>, flag: &str, cmd: Command) -> CliResult<T> {
    v.ok_or_else(|| {
        CliError::Usage(format!(
            "`{}` needs --{flag}",
            cmd.to_possible_value().expect("no skipped variants").get_name()
        ))
    })
}

fn cap(name: &'static str, v: i64, max: i64, expected: &'static str) -> CliResult<i64> {
    if v > max {
        Err(Error::Range {
            name,
            value: v,
            expected,
        }
        .into())
    } else {
        Ok(v)
    }
}

fn space_class(cfg: &CommandConfig, cache: &Cache) -> CliResult<MotClass> {
    let cmd = cfg.command;
    let space = need(cfg.space, "space", cmd)?;
    let class = match space {
        Space::Mbar0 => {
            let n = cap("n", need(cfg.n, "n", cmd)?, 200, "n <= 200")?;
            cache.mbar0_class(n)?
        }
        Space::Tdn => {
            let d = need(cfg.d, "d", cmd)?;
            let n = cap("n", need(cfg.n, "n", cmd)?, 200, "n <= 200")?;
            cache.tdn_class(d, n)?
        }
        Space::Open => open_stratum_class(need(cfg.d, "d", cmd)?, need(cfg.n, "n", cmd)?)?,
        Space::Proj => proj_class(cap("d", need(cfg.d, "d", cmd)?, 10_000, "d <= 10000")?)?,
        Space::M0n => m0n_class(need(cfg.n, "n", cmd)?, M0nReading::FactorCount)?,
        Space::Power => {
            let d = cap("d", need(cfg.d, "d", cmd)?, 1000, "d <= 1000")?;
            let n = need(cfg.n, "n", cmd)?;
            if !(0..=1000).contains(&n) {
                return Err(Error::Range {
                    name: "n",
                    value: n,
                    expected: "0 <= n <= 1000",
                }
                .into());
            }
            proj_class(d)?.pow(n as u32)
        }
    };
    Ok(class)
}

/// Builds the document for `cfg`.
pub fn execute(cfg: &CommandConfig, cache: &Cache) -> CliResult<Doc> {
    let cmd = cfg.command;
    let basis = cfg.basis;
    match cmd {
        Command::Classes => Ok(Doc::scalar("class", Cell::class(&space_class(cfg, cache)?, basis))),
        Command::Points => {
            let m = need(cfg.m, "m", cmd)?;
            let c = space_class(cfg, cache)?;
            Ok(Doc::scalar("points", Cell::int(&c.count_points(m))))
        }
        Command::Series => {
            let d = need(cfg.d, "d", cmd)?;
            let order = cap("order", cfg.order, 200, "order <= 200")?;
            let s = solve_tdn_ode(d, order)?;
            let rows = s
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| vec![Cell::count(i + 1), Cell::class(c, basis)])
                .collect();
            Ok(Doc::table(&["n", "class"], rows, vec![]))
        }
        Command::Strata => {
            let d = need(cfg.d, "d", cmd)?;
            let n = cap("n", need(cfg.n, "n", cmd)?, 7, "n <= 7")?;
            let table = stratum_table(d, n)?;
            let sum: MotClass = table.iter().map(|r| r.class.clone()).sum();
            let expected = cache.tdn_class(d, n)?;
            if sum != expected {
                return Err(Error::Invariant(format!(
                    "strata of T_{{{d},{n}}} sum to {sum}, expected {expected}"
                ))
                .into());
            }
            let count = table.len();
            let rows = table
                .iter()
                .map(|r| {
                    vec![
                        Cell::rich(&r.tree, serde_json::to_value(&r.tree).expect("trees serialize")),
                        Cell::count(r.codimension),
                        Cell::class(&r.class, basis),
                    ]
                })
                .collect();
            Ok(Doc::table(
                &["tree", "codimension", "class"],
                rows,
                vec![
                    ("strata", Cell::count(count)),
                    ("sum", Cell::class(&sum, basis)),
                    ("verified", Cell::bool(true)),
                ],
            ))
        }
        Command::Torify => {
            let space = need(cfg.space, "space", cmd)?;
            let ct = match space {
                Space::Proj => torify_proj_space(need(cfg.d, "d", cmd)?)?,
                Space::Open => {
                    let n = cap("n", need(cfg.n, "n", cmd)?, 12, "n <= 12")?;
                    constructible_open_stratum(need(cfg.d, "d", cmd)?, n)?
                }
                Space::Power => {
                    torify_proj_power(need(cfg.d, "d", cmd)?, need(cfg.n, "n", cmd)?, cfg.sheared)?
                }
                other => {
                    return Err(CliError::Usage(format!(
                        "no torification for space {}",
                        other.to_possible_value().expect("no skipped variants").get_name()
                    )))
                }
            };
            let rows = ct
                .pieces()
                .iter()
                .map(|p| {
                    let atoms: Vec<String> = p.expr.atoms().iter().map(u32::to_string).collect();
                    let class = p.expr.eval_class().expect("pieces are validated");
                    let expr = serde_json::to_value(&p.expr).expect("expressions serialize");
                    vec![
                        Cell::text(&p.label),
                        Cell::rich(atoms.join(" "), serde_json::to_value(p.expr.atoms()).expect("atoms serialize")),
                        Cell::class(&class, basis),
                        Cell::rich(expr.to_string(), expr),
                    ]
                })
                .collect();
            Ok(Doc::table(
                &["piece", "atoms", "class", "expr"],
                rows,
                vec![
                    ("pieces", Cell::count(ct.pieces().len())),
                    ("total", Cell::class(ct.total_class(), basis)),
                    ("f1_constructible", Cell::bool(ct.is_f1_constructible())),
                ],
            ))
        }
        Command::Blueprint => {
            let n = cap("n", need(cfg.n, "n", cmd)?, 12, "n <= 12")?;
            let rels = plucker_relations(n)?;
            let generators = index_set(n)?.len();
            let f = f_element(n)?;
            let mut columns = vec!["relation"];
            if cfg.localize > 0 {
                columns.push("localized");
            }
            let rows = rels
                .iter()
                .map(|r| {
                    let mut row = vec![Cell::rich(r, serde_json::to_value(r).expect("relations serialize"))];
                    if cfg.localize > 0 {
                        let l = localize_relation(r, cfg.localize);
                        row.push(Cell::rich(&l, serde_json::to_value(&l).expect("relations serialize")));
                    }
                    row
                })
                .collect();
            Ok(Doc::table(
                &columns,
                rows,
                vec![
                    ("generators", Cell::count(generators)),
                    ("relations", Cell::count(rels.len())),
                    ("f", Cell::rich(&f, serde_json::to_value(&f).expect("monomials serialize"))),
                ],
            ))
        }
        Command::Crossed => {
            let g = need(cfg.g, "g", cmd)?;
            let n = cap("n", need(cfg.n, "n", cmd)?, 10, "n <= 10")?;
            let group = centralizer_subgroup(g)?;
            let rels = boundary_crossed_relations(g, n)?;
            let rows = rels
                .iter()
                .map(|r| {
                    vec![
                        Cell::rich(&r.left.perm, serde_json::to_value(&r.left.perm).expect("perms serialize")),
                        Cell::rich(r, serde_json::to_value(r).expect("relations serialize")),
                    ]
                })
                .collect();
            Ok(Doc::table(
                &["perm", "relation"],
                rows,
                vec![
                    ("group_order", Cell::count(group.len())),
                    ("relations", Cell::count(rels.len())),
                ],
            ))
        }
    }
}

/// Exit status and emitted bytes of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub status: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

/// Runs a parsed configuration.
pub fn run(cfg: &CommandConfig, cache: &Cache) -> RunOutput {
    match execute(cfg, cache) {
        Ok(doc) => RunOutput {
            status: EXIT_OK,
            stdout: emit(&doc, cfg.format),
            stderr: String::new(),
        },
        Err(e) => RunOutput {
            status: e.status(),
            stdout: Vec::new(),
            stderr: format!("f1kit: {e}\n"),
        },
    }
}

/// Parses `args` (program name first) and runs them.
pub fn run_args<I, S>(args: I, cache: &Cache) -> RunOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match CommandConfig::try_parse_from(args) {
        Ok(cfg) => run(&cfg, cache),
        Err(e) => {
            let status = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if status == EXIT_OK {
                RunOutput {
                    status,
                    stdout: text.into_bytes(),
                    stderr: String::new(),
                }
            } else {
                RunOutput {
                    status,
                    stdout: Vec::new(),
                    stderr: text,
                }
            }
        }
    }
}
