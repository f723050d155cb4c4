use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pcells::cells::{compute_cells, ColouredWGraph};
use pcells::coxeter::DEFAULT_CAP;
use pcells::golden::{GoldenEdge, GoldenWGraph};
use pcells::pcanonical::Provenance;
use pcells::stars::{tau_partition, tau_tilde_partition};
use pcells::typea::{rs_correspondence, Permutation};
use pcells::verify::{self, SuiteOutcome};
use pcells::{CellSide, CoxeterSystem, Error, GroupSpec, KLTable, PCanTable, Side};
use serde_json::json;

#[derive(Parser)]
#[command(name = "pcells", version, about = "Kazhdan-Lusztig and p-canonical cells of finite Weyl groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Left, right or two-sided cells and their Hasse diagram.
    Cells {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        table: TableArgs,
        #[arg(long, value_enum, default_value = "right")]
        side: SideArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Coloured W-graph of a set of vertices (by default the cell of `--cell`).
    Wgraph {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        table: TableArgs,
        #[arg(long, value_enum, default_value = "right")]
        side: SideArg,
        /// An element whose cell gives the vertices.
        #[arg(long, conflicts_with = "vertices")]
        cell: Option<String>,
        /// Comma separated vertices.
        #[arg(long, value_delimiter = ',')]
        vertices: Vec<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run verification suites: b2, g2, c3, typea, invariants (or parabolic),
    /// stars, tau, negative, all; `table` checks `--table`, `wgraph` checks `--graph`.
    Verify {
        suite: String,
        /// Largest n for the type A suite.
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        table: TableArgs,
        /// W-graph file (vertices and labelled edges) for the `wgraph` suite.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Robinson-Schensted symbols of a permutation in one-line notation.
    Rs {
        permutation: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Generalized tau invariant classes.
    Tau {
        #[command(flatten)]
        group: GroupArgs,
        /// Use star images for every pair with finite m >= 3.
        #[arg(long)]
        tilde: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Export Kazhdan-Lusztig polynomials h_{y,x}.
    Kl {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct GroupArgs {
    /// Cartan type such as B2, C3, A4.
    #[arg(long = "type", conflicts_with = "cartan")]
    type_label: Option<String>,
    /// JSON file with a Cartan matrix, or a group object with `cartan` or `coxeter`.
    #[arg(long)]
    cartan: Option<PathBuf>,
    /// Refuse groups with more elements than this.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, default_value_t = 0)]
    p: u32,
    /// Shipped table: c3p2.
    #[arg(long, conflicts_with = "table")]
    fixture: Option<String>,
    /// p-canonical table file.
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
    TwoSided,
}

impl From<SideArg> for CellSide {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Left => CellSide::Left,
            SideArg::Right => CellSide::Right,
            SideArg::TwoSided => CellSide::TwoSided,
        }
    }
}

/// Failures mapped to exit codes: violations give 1, everything else 2.
enum Failure {
    Violation(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantViolation(_) => Failure::Violation(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Violation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &OutputArgs, text: String) -> CliResult<()> {
    match &out.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n"
}

fn build_group(args: &GroupArgs) -> CliResult<Option<CoxeterSystem>> {
    match (&args.type_label, &args.cartan) {
        (Some(t), _) => Ok(Some(CoxeterSystem::of_type_with_cap(t, args.cap)?)),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)?;
            let value: serde_json::Value = serde_json::from_str(&text).map_err(Error::from)?;
            let spec: GroupSpec = if value.is_array() {
                GroupSpec { cartan: Some(serde_json::from_value(value).map_err(Error::from)?), ..Default::default() }
            } else {
                serde_json::from_value(value).map_err(Error::from)?
            };
            Ok(Some(spec.build(args.cap)?))
        }
        (None, None) => Ok(None),
    }
}

/// Group, KL table and p-canonical table described by the arguments.
fn load(group: &GroupArgs, table: &TableArgs) -> CliResult<(CoxeterSystem, KLTable, PCanTable)> {
    let given = build_group(group)?;
    if let Some(path) = &table.table {
        let (w, kl, t) = PCanTable::load(path, group.cap, true)?;
        check_prime(table.p, t.prime())?;
        if let Some(g) = given {
            if g.cartan() != w.cartan() {
                return Err(Failure::Usage("the table file describes a different group".into()));
            }
        }
        return Ok((w, kl, t));
    }
    if let Some(name) = &table.fixture {
        let json = verify::table_fixture(name)?;
        let spec: GroupSpec = serde_json::from_str(json).map_err(Error::from)?;
        let w = spec.build(group.cap)?;
        if let Some(g) = &given {
            if g.cartan() != w.cartan() {
                return Err(Failure::Usage(format!("fixture {name} is for a different group")));
            }
        }
        let kl = KLTable::compute(&w);
        let t = PCanTable::from_json_str(json, &w, &kl, Provenance::Fixture(name.clone()), true)?;
        check_prime(table.p, t.prime())?;
        return Ok((w, kl, t));
    }
    if table.p != 0 {
        return Err(Failure::Usage(format!("p = {} needs --table or --fixture", table.p)));
    }
    let w = given.ok_or_else(|| Failure::Usage("give --type or --cartan".into()))?;
    let kl = KLTable::compute(&w);
    Ok((w, kl, PCanTable::identity_table()))
}

fn check_prime(requested: u32, found: u32) -> CliResult<()> {
    if requested != found {
        return Err(Failure::Usage(format!("--p {requested} but the table is for p = {found}")));
    }
    Ok(())
}

fn run(command: Command) -> CliResult<bool> {
    match command {
        Command::Cells { group, table, side, out } => {
            let (w, kl, t) = load(&group, &table)?;
            let part = compute_cells(&w, &t, &kl, side.into());
            let text = match out.format {
                Format::Text => part.to_text(&w),
                Format::Json => pretty(&part.to_json(&w)),
                Format::Dot => part.to_dot(&w),
            };
            emit(&out, text)?;
            Ok(true)
        }
        Command::Wgraph { group, table, side, cell, vertices, out } => {
            let (w, kl, t) = load(&group, &table)?;
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
                SideArg::TwoSided => return Err(Failure::Usage("W-graphs are one-sided".into())),
            };
            let verts = match cell {
                Some(x) => {
                    let x = w.parse_digits(&x)?;
                    compute_cells(&w, &t, &kl, side.into()).cell(x).to_vec()
                }
                None if !vertices.is_empty() => {
                    vertices.iter().map(|x| w.parse_digits(x)).collect::<Result<Vec<_>, _>>()?
                }
                None => return Err(Failure::Usage("give --cell or --vertices".into())),
            };
            let graph = ColouredWGraph::from_vertices(&w, &t, &kl, &verts, side);
            let text = match out.format {
                Format::Dot => graph.to_dot(&w),
                Format::Json => pretty(&serde_json::to_value(wgraph_file(&w, &graph, t.prime())).map_err(Error::from)?),
                Format::Text => {
                    let mut s = format!("{} vertices\n", graph.vertices.len());
                    for (x, y, g, l) in graph.edge_list(&w) {
                        s.push_str(&format!("  {x} -> {y}  s={g}  {l}\n"));
                    }
                    s
                }
            };
            emit(&out, text)?;
            Ok(true)
        }
        Command::Verify { suite, n, group, table, graph, out } => match suite.as_str() {
            "table" => {
                if table.table.is_none() && table.fixture.is_none() {
                    return Err(Failure::Usage("verify table needs --table or --fixture".into()));
                }
                let (w, kl, t) = load_lenient(&group, &table)?;
                let report = verify::verify_table(&w, &kl, &t)?;
                emit_report(&out, "table", report)
            }
            "wgraph" => {
                let path = graph.ok_or_else(|| Failure::Usage("verify wgraph needs --graph".into()))?;
                let w = build_group(&group)?.ok_or_else(|| Failure::Usage("give --type or --cartan".into()))?;
                let text = fs::read_to_string(path)?;
                let file: GoldenWGraph = serde_json::from_str(&text).map_err(Error::from)?;
                let report = file.to_graph(&w)?.verify_relations(&w);
                emit_report(&out, "wgraph", report)
            }
            name => {
                let suites = verify::suites_named(name, n)?;
                let outcomes = verify::run_all(&suites);
                let pass = outcomes.iter().all(SuiteOutcome::is_pass);
                let text = match out.format {
                    Format::Json => pretty(&serde_json::to_value(&outcomes).map_err(Error::from)?),
                    _ => outcomes.iter().map(|o| o.to_string()).collect(),
                };
                emit(&out, text)?;
                Ok(pass)
            }
        },
        Command::Rs { permutation, out } => {
            let p: Permutation = permutation.parse()?;
            let (a, b) = rs_correspondence(&p);
            let text = match out.format {
                Format::Json => pretty(&json!({"P": a.rows, "Q": b.rows})),
                _ => format!("P={}\nQ={}\n", rows(&a.rows), rows(&b.rows)),
            };
            emit(&out, text)?;
            Ok(true)
        }
        Command::Tau { group, tilde, out } => {
            let w = build_group(&group)?.ok_or_else(|| Failure::Usage("give --type or --cartan".into()))?;
            let part = if tilde { tau_tilde_partition(&w) } else { tau_partition(&w) };
            let text = match out.format {
                Format::Json => pretty(&part.to_json(&w)),
                _ => part.to_text(&w),
            };
            emit(&out, text)?;
            Ok(true)
        }
        Command::Kl { group, out } => {
            let w = build_group(&group)?.ok_or_else(|| Failure::Usage("give --type or --cartan".into()))?;
            let kl = KLTable::compute(&w);
            let text = match out.format {
                Format::Json => pretty(&kl.to_json(&w)),
                _ => {
                    let mut s = String::new();
                    for x in w.elements() {
                        for (y, h) in kl.column(x) {
                            s.push_str(&format!("h({}, {}) = {h}\n", w.digits(*y), w.digits(x)));
                        }
                    }
                    s
                }
            };
            emit(&out, text)?;
            Ok(true)
        }
    }
}

/// Like [`load`] but keeps tables that fail validation so they can be reported.
fn load_lenient(group: &GroupArgs, table: &TableArgs) -> CliResult<(CoxeterSystem, KLTable, PCanTable)> {
    if let Some(path) = &table.table {
        let (w, kl, t) = PCanTable::load(path, group.cap, false)?;
        check_prime(table.p, t.prime())?;
        return Ok((w, kl, t));
    }
    load(group, table)
}

fn emit_report(out: &OutputArgs, name: &str, report: pcells::Report) -> CliResult<bool> {
    let pass = report.is_pass();
    let text = match out.format {
        Format::Json => pretty(&json!({"suite": name, "report": report})),
        _ => format!("{} {name}: {report}\n", if pass { "PASS" } else { "FAIL" }),
    };
    emit(out, text)?;
    Ok(pass)
}

fn rows(r: &[Vec<usize>]) -> String {
    let inner: Vec<String> =
        r.iter().map(|row| format!("[{}]", row.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))).collect();
    format!("[{}]", inner.join(","))
}

fn wgraph_file(w: &CoxeterSystem, g: &ColouredWGraph, p: u32) -> GoldenWGraph {
    GoldenWGraph {
        side: g.side,
        p,
        vertices: g.vertices.iter().map(|&x| w.digits(x)).collect(),
        edges: g
            .edge_list(w)
            .into_iter()
            .map(|(from, to, s, label)| GoldenEdge { from, to, s, label })
            .collect(),
    }
}
