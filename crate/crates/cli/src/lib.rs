//! `pgs`: command-line access to the partial-search simulator and optimizer.
//!
//! Every command renders to `text` (6 significant digits), `json` (full
//! double precision, sorted keys) or `csv` (RFC 4180, LF line endings).
//! Output depends only on the flags, never on timing or thread count.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 infeasible search,
//! 4 resource cap, 1 i/o failure.

pub mod format;

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use partial_search::analysis::{self, BoundVariant};
use partial_search::model::run_schedule;
use partial_search::optimizer::{self, asymptotic_optimum};
use partial_search::statevector::{run_schedule_full, DEFAULT_CAP};
use partial_search::{BlockCount, Error, Geometry, ReducedState, Schedule};
use serde_json::{json, Map, Value};
use thiserror::Error as ThisError;

use crate::format::{kv_block, num, table, Format};

pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_CAP: i32 = 4;
pub const EXIT_IO: i32 = 1;

pub const COMPARE_HEADER: [&str; 6] = ["K", "s_coeff", "r_coeff", "p_interrupted", "c", "note"];

#[derive(Debug, ThisError)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible { .. } => EXIT_INFEASIBLE,
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::Io(_) => EXIT_IO,
            _ => EXIT_INVALID,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "pgs",
    version,
    about = "Quantum partial search: simulate, optimize and compare schedules"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal asymptotic coefficients (alpha, eta, c) per block count.
    Optimize(OptimizeArgs),
    /// Iteration schedule for a concrete database.
    Schedule(ScheduleArgs),
    /// Run a schedule and report the final amplitudes.
    Simulate(SimulateArgs),
    /// Partial search against random pick and interrupted search.
    Compare(CompareArgs),
    /// Lower bounds on the number of oracle queries.
    Bound(BoundArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Block counts: comma-separated values or inclusive ranges, `inf` allowed (e.g. `2..5,inf`).
    #[arg(long, default_value = "2..5,inf")]
    pub k: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub k: u64,
    /// Also run the exhaustive integer search.
    #[arg(long)]
    pub exact: bool,
    /// Minimum block success probability for the exhaustive search.
    #[arg(long, default_value_t = 0.99, requires = "exact")]
    pub threshold: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Reduced,
    Full,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub k: u64,
    #[arg(long, default_value_t = 0)]
    pub j1: u64,
    #[arg(long, default_value_t = 0)]
    pub j2: u64,
    /// Omit the final global iteration (interrupted-style run).
    #[arg(long)]
    pub no_trailing: bool,
    #[arg(long, value_enum, default_value = "reduced")]
    pub engine: Engine,
    /// Index of the marked item (full engine).
    #[arg(long, default_value_t = 0)]
    pub target: u64,
    /// Write the final state vector in PGSV binary form (full engine).
    #[arg(long)]
    pub emit_state: Option<PathBuf>,
    /// Raise or lower the full-engine amplitude cap.
    #[arg(long)]
    pub state_cap: Option<u64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Block counts, e.g. `2..30`.
    #[arg(long, default_value = "2..30")]
    pub k: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub k: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

impl Command {
    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Optimize(a) => &a.out,
            Command::Schedule(a) => &a.out,
            Command::Simulate(a) => &a.out,
            Command::Compare(a) => &a.out,
            Command::Bound(a) => &a.out,
        }
    }
}

/// Parse `2..5,8,inf` into block counts in the given order.
pub fn parse_k_list(spec: &str) -> Result<Vec<BlockCount>, CliError> {
    let bad = |what: &str| CliError::invalid(format!("invalid block count list `{spec}`: {what}"));
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim) {
        if part.is_empty() {
            return Err(bad("empty entry"));
        }
        if let Some((lo, hi)) = part.split_once("..") {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let lo: u64 = lo.trim().parse().map_err(|_| bad(part))?;
            let hi: u64 = hi.trim().parse().map_err(|_| bad(part))?;
            if hi < lo {
                return Err(bad("empty range"));
            }
            if hi - lo > 1_000_000 {
                return Err(bad("range longer than 10^6"));
            }
            out.extend((lo..=hi).map(BlockCount::Finite));
        } else {
            out.push(part.parse().map_err(|_| bad(part))?);
        }
    }
    for k in &out {
        if let BlockCount::Finite(k) = k {
            if *k < 2 {
                return Err(CliError::invalid(format!("block count {k} is below 2")));
            }
        }
    }
    Ok(out)
}

fn k_json(k: BlockCount) -> Value {
    match k {
        BlockCount::Finite(k) => json!(k),
        BlockCount::Infinite => json!("inf"),
    }
}

/// Execute one command and return the rendered report.
pub fn execute(cmd: &Command) -> Result<String, CliError> {
    let fmt = cmd.output().format;
    match cmd {
        Command::Optimize(a) => optimize(a, fmt),
        Command::Schedule(a) => schedule(a, fmt),
        Command::Simulate(a) => simulate(a, fmt),
        Command::Compare(a) => compare(a, fmt),
        Command::Bound(a) => bound(a, fmt),
    }
}

fn optimize(a: &OptimizeArgs, fmt: Format) -> Result<String, CliError> {
    let ks = parse_k_list(&a.k)?;
    let rows = ks
        .iter()
        .map(|&k| asymptotic_optimum::<f64>(k))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(match fmt {
        Format::Text | Format::Csv => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|p| {
                    let render = if fmt == Format::Csv {
                        |x: f64| x.to_string()
                    } else {
                        num
                    };
                    vec![
                        p.n_blocks.to_string(),
                        render(p.alpha),
                        render(p.eta),
                        render(p.c),
                    ]
                })
                .collect();
            let header = ["K", "alpha", "eta", "c"];
            if fmt == Format::Csv {
                format::csv(&header, &cells)
            } else {
                table(&header, &cells)
            }
        }
        Format::Json => {
            let objs: Vec<Value> = rows
                .iter()
                .map(|p| json!({"K": k_json(p.n_blocks), "alpha": p.alpha, "eta": p.eta, "c": p.c}))
                .collect();
            if objs.len() == 1 {
                format::json(&objs[0])
            } else {
                format::json(&Value::Array(objs))
            }
        }
    })
}

struct ScheduleReport {
    schedule: Schedule,
    block_success: f64,
}

fn schedule(a: &ScheduleArgs, fmt: Format) -> Result<String, CliError> {
    let g = Geometry::new(a.n, a.k)?;
    let asym = optimizer::asymptotic_schedule(&g)?;
    let asym = ScheduleReport {
        schedule: asym,
        block_success: run_schedule(&g, &asym).block_success_probability(&g),
    };
    let exact = if a.exact {
        let r = optimizer::optimal_exact_schedule(&g, a.threshold)?;
        Some(ScheduleReport {
            schedule: r.schedule,
            block_success: r.block_success,
        })
    } else {
        None
    };

    let section = |label: &str, r: &ScheduleReport| -> Vec<(String, String, Value)> {
        let s = &r.schedule;
        vec![
            (format!("{label}.j1"), s.j1.to_string(), json!(s.j1)),
            (format!("{label}.j2"), s.j2.to_string(), json!(s.j2)),
            (
                format!("{label}.trailing_global"),
                s.trailing_global.to_string(),
                json!(s.trailing_global),
            ),
            (
                format!("{label}.queries"),
                s.queries().to_string(),
                json!(s.queries()),
            ),
            (
                format!("{label}.block_success"),
                num(r.block_success),
                json!(r.block_success),
            ),
        ]
    };
    let mut fields: Vec<(String, String, Value)> = vec![
        ("n".into(), a.n.to_string(), json!(a.n)),
        ("k".into(), a.k.to_string(), json!(a.k)),
        (
            "b".into(),
            g.block_size().to_string(),
            json!(g.block_size()),
        ),
    ];
    fields.extend(section("asymptotic", &asym));
    if let Some(e) = &exact {
        fields.push((
            "exact.threshold".into(),
            num(a.threshold),
            json!(a.threshold),
        ));
        fields.extend(section("exact", e));
    }
    Ok(render_fields(&fields, fmt, |obj| {
        // nest `section.key` entries for JSON
        let mut root = Map::new();
        for (k, v) in obj {
            match k.split_once('.') {
                Some((sec, key)) => {
                    root.entry(sec.to_string())
                        .or_insert_with(|| Value::Object(Map::new()))
                        .as_object_mut()
                        .expect("section object")
                        .insert(key.to_string(), v.clone());
                }
                None => {
                    root.insert(k.clone(), v.clone());
                }
            }
        }
        if exact.is_none() {
            root.insert("exact".into(), Value::Null);
        }
        Value::Object(root)
    }))
}

/// Render `(name, text, json)` triples in the requested format.
fn render_fields<F>(fields: &[(String, String, Value)], fmt: Format, to_json: F) -> String
where
    F: FnOnce(&[(String, Value)]) -> Value,
{
    match fmt {
        Format::Text => {
            let pairs: Vec<(&str, String)> = fields
                .iter()
                .map(|(k, t, _)| (k.as_str(), t.clone()))
                .collect();
            kv_block(&pairs)
        }
        Format::Json => {
            let obj: Vec<(String, Value)> = fields
                .iter()
                .map(|(k, _, v)| (k.clone(), v.clone()))
                .collect();
            format::json(&to_json(&obj))
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = fields
                .iter()
                .map(|(k, _, v)| {
                    let cell = match v {
                        Value::String(s) => s.clone(),
                        Value::Null => String::new(),
                        other => other.to_string(),
                    };
                    vec![k.clone(), cell]
                })
                .collect();
            format::csv(&["field", "value"], &rows)
        }
    }
}

fn flat_json(obj: &[(String, Value)]) -> Value {
    Value::Object(obj.iter().cloned().collect())
}

fn simulate(a: &SimulateArgs, fmt: Format) -> Result<String, CliError> {
    if a.engine == Engine::Reduced && (a.emit_state.is_some() || a.state_cap.is_some()) {
        return Err(CliError::invalid(
            "--emit-state and --state-cap require --engine full",
        ));
    }
    let g = Geometry::new(a.n, a.k)?;
    let sch = Schedule::new(a.j1, a.j2, !a.no_trailing);

    let (state, block_success, residual) = match a.engine {
        Engine::Reduced => {
            if a.target >= a.n {
                return Err(Error::BadIndex {
                    index: a.target,
                    n_items: a.n,
                }
                .into());
            }
            let s = run_schedule(&g, &sch);
            (s, s.block_success_probability(&g), None)
        }
        Engine::Full => {
            let cap = a.state_cap.unwrap_or(DEFAULT_CAP);
            let full = run_schedule_full(&g, a.target, &sch, cap)?;
            if let Some(path) = &a.emit_state {
                let f = File::create(path).map_err(|e| CliError {
                    code: EXIT_IO,
                    message: format!("{}: {e}", path.display()),
                })?;
                full.write_pgsv(BufWriter::new(f))?;
            }
            let (s, res) = full.reduce();
            let p = full.block_distribution()[full.target_block() as usize];
            (s, p, Some(res))
        }
    };
    // classes with no members carry no amplitude
    let state = ReducedState::new(
        state.amp_target,
        if g.ntt_count() == 0 {
            0.0
        } else {
            state.amp_ntt
        },
        if g.nb_count() == 0 { 0.0 } else { state.amp_nb },
    );

    let engine = match a.engine {
        Engine::Reduced => "reduced",
        Engine::Full => "full",
    };
    let fields: Vec<(String, String, Value)> = vec![
        ("n".into(), a.n.to_string(), json!(a.n)),
        ("k".into(), a.k.to_string(), json!(a.k)),
        (
            "b".into(),
            g.block_size().to_string(),
            json!(g.block_size()),
        ),
        ("j1".into(), sch.j1.to_string(), json!(sch.j1)),
        ("j2".into(), sch.j2.to_string(), json!(sch.j2)),
        (
            "trailing_global".into(),
            sch.trailing_global.to_string(),
            json!(sch.trailing_global),
        ),
        (
            "queries".into(),
            sch.queries().to_string(),
            json!(sch.queries()),
        ),
        (
            "amp_target".into(),
            num(state.amp_target),
            json!(state.amp_target),
        ),
        ("amp_ntt".into(), num(state.amp_ntt), json!(state.amp_ntt)),
        ("amp_nb".into(), num(state.amp_nb), json!(state.amp_nb)),
        (
            "block_success".into(),
            num(block_success),
            json!(block_success),
        ),
        (
            "item_success".into(),
            num(state.item_success_probability()),
            json!(state.item_success_probability()),
        ),
    ];
    if fmt == Format::Text {
        return Ok(render_fields(&fields, fmt, flat_json));
    }
    let mut fields = fields;
    fields.push(("engine".into(), engine.into(), json!(engine)));
    fields.push((
        "coherence_residual".into(),
        residual.map(num).unwrap_or_default(),
        residual.map_or(Value::Null, |r| json!(r)),
    ));
    Ok(render_fields(&fields, fmt, flat_json))
}

pub fn compare_rows(ks: &[BlockCount]) -> Result<Vec<analysis::ComparisonRow<f64>>, CliError> {
    ks.iter()
        .map(|k| match k {
            BlockCount::Finite(k) => analysis::comparison_row::<f64>(*k).map_err(CliError::from),
            BlockCount::Infinite => Err(CliError::invalid("compare needs finite block counts")),
        })
        .collect()
}

fn compare(a: &CompareArgs, fmt: Format) -> Result<String, CliError> {
    let rows = compare_rows(&parse_k_list(&a.k)?)?;
    Ok(match fmt {
        Format::Csv | Format::Text => {
            let render = if fmt == Format::Csv {
                |x: f64| x.to_string()
            } else {
                num
            };
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.n_blocks.to_string(),
                        render(r.s_coeff),
                        render(r.r_coeff),
                        render(r.p_interrupted),
                        render(r.c),
                        r.note.clone(),
                    ]
                })
                .collect();
            if fmt == Format::Csv {
                format::csv(&COMPARE_HEADER, &cells)
            } else {
                table(&COMPARE_HEADER, &cells)
            }
        }
        Format::Json => format::json(&Value::Array(
            rows.iter()
                .map(|r| {
                    json!({
                        "K": r.n_blocks,
                        "s_coeff": r.s_coeff,
                        "r_coeff": r.r_coeff,
                        "p_interrupted": r.p_interrupted,
                        "c": r.c,
                        "note": r.note,
                    })
                })
                .collect(),
        )),
    })
}

fn bound(a: &BoundArgs, fmt: Format) -> Result<String, CliError> {
    let g = Geometry::new(a.n, a.k)?;
    let mut fields: Vec<(String, String, Value)> = vec![
        ("n".into(), a.n.to_string(), json!(a.n)),
        ("k".into(), a.k.to_string(), json!(a.k)),
        (
            "b".into(),
            g.block_size().to_string(),
            json!(g.block_size()),
        ),
    ];
    for v in BoundVariant::ALL {
        let x = analysis::lower_bound_queries(&g, v)?;
        fields.push((v.name().into(), num(x), json!(x)));
    }
    let asymptotic = analysis::achieved_queries(&g)?;
    let achieved = optimizer::asymptotic_schedule(&g)?.queries();
    fields.push((
        "asymptotic_queries".into(),
        num(asymptotic),
        json!(asymptotic),
    ));
    fields.push((
        "achieved_queries".into(),
        achieved.to_string(),
        json!(achieved),
    ));
    Ok(render_fields(&fields, fmt, flat_json))
}

/// Configure the global rayon pool from `PGS_THREADS`, if set.
pub fn init_threads() -> Result<(), CliError> {
    match std::env::var("PGS_THREADS") {
        Ok(v) => {
            let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
                CliError::invalid(format!("PGS_THREADS must be a positive integer, got `{v}`"))
            })?;
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::invalid(e.to_string()))
        }
        Err(_) => Ok(()),
    }
}
