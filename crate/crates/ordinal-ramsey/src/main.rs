//! Command-line front end.
//!
//! Exit codes: 0 when the queried property holds (or the command is
//! purely informational), 1 when it is falsified, 2 on usage or input
//! errors.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ordinal_ramsey::antichain::{distinguish, AntichainError, FinSetFamily};
use ordinal_ramsey::canonize::{
    canonize_truncated, seeded_random_colouring, CanonizeError, TruncatedTree,
};
use ordinal_ramsey::colouring::{extract_tables, scarcity_check, AnyColouring};
use ordinal_ramsey::fsets::{staircase, Staircase, StaircaseShape, SubsetSpec};
use ordinal_ramsey::graph::{standard_graph, ClauseGraph, EdgeJustification};
use ordinal_ramsey::report::Report;
use ordinal_ramsey::schema::claim2_suite;
use ordinal_ramsey::{Ordinal, Window};

#[derive(Parser)]
#[command(
    name = "ordinal-ramsey",
    version,
    about = "Ordinal arithmetic, layered clause graphs, and partition-canonicity checks below w^w"
)]
struct Cli {
    /// Emit one JSON object instead of a key=value summary line.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ordinal arithmetic and anti-tree order queries.
    #[command(subcommand)]
    Ord(OrdCmd),
    /// The layered clause graph: edges, triangles, canonical tables.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// End-to-end verifications.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum OrdCmd {
    /// Parse and print in canonical form.
    Normalize { expr: String },
    /// Compare two ordinals (prints lt, eq, or gt).
    Cmp { a: String, b: String },
    /// Rank (least exponent) and final coefficient.
    Cb { expr: String },
    /// Anti-tree order test: is `a` at or below `b`?  Exit 1 if not.
    TreeLeq { a: String, b: String },
    /// Immediate successor in the anti-tree.
    Cover { expr: String },
    /// Layers of a bounded universe and their window members.
    Layers {
        delta: String,
        #[command(flatten)]
        window: WindowArgs,
    },
}

#[derive(Args)]
struct WindowArgs {
    /// Coefficient bound of the enumeration window.
    #[arg(long, default_value_t = 4)]
    coeff_bound: u64,
}

#[derive(Args)]
struct GraphSource {
    /// Clause-graph description file (defaults to the distinguished
    /// triangle-free graph on w^3*2).
    #[arg(long)]
    graph: Option<String>,
}

impl GraphSource {
    fn load(&self) -> Result<ClauseGraph, String> {
        match &self.graph {
            None => Ok(standard_graph()),
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
                ClauseGraph::parse_text(&text).map_err(|e| format!("{path}: {e}"))
            }
        }
    }
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Is the pair an edge?  Exit 1 if not.
    Edge {
        a: String,
        b: String,
        #[command(flatten)]
        source: GraphSource,
    },
    /// List all triangles among window points.  Exit 1 if any exist.
    ScanTriangles {
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        source: GraphSource,
    },
    /// Extract the rank/domination tables and check canonicity.
    /// Exit 1 if the colouring is not canonical on the window.
    Tables {
        #[command(flatten)]
        window: WindowArgs,
        /// Largest filter index tried per cell.
        #[arg(long, default_value_t = 3)]
        r_max: u64,
        #[command(flatten)]
        source: GraphSource,
    },
    /// Check the scarcity rules on the extracted tables.  Exit 1 on
    /// any violation.
    Scarcity {
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, default_value_t = 3)]
        r_max: u64,
        #[command(flatten)]
        source: GraphSource,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Rule out every copy template on the universe w^3 + w^2*n.
    /// Exit 1 if any template stays unresolved.
    Claim2 {
        /// Universe, e.g. "w^3+w^2*2".
        #[arg(long)]
        theta: String,
        /// Enumeration bound for template parameters.
        #[arg(long, default_value_t = 6)]
        bound: u64,
        #[command(flatten)]
        source: GraphSource,
    },
    /// Canonize a seeded random tree colouring to a uniform skeleton.
    /// Exit 1 when no rank table admits the requested width.
    Canonize {
        #[arg(long, default_value_t = 2)]
        rank: u32,
        #[arg(long, default_value_t = 64)]
        fan_width: u64,
        #[arg(long, default_value_t = 3)]
        keep_width: u64,
        /// Fan positions that must be kept at every node.
        #[arg(long, default_value_t = 0)]
        prefix: u64,
        #[arg(long, default_value_t = 2)]
        colours: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Pick pairwise-distinguished sets from an antichain family file
    /// (one set per line, space-separated naturals).  Exit 1 when the
    /// family is not an antichain or yields fewer than `count` sets.
    Antichain {
        #[arg(long)]
        file: String,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Build a staircase through level subsets, or validate one from a
    /// file.  Exit 1 when a subset is not large or validation fails.
    Staircase {
        /// Strictly increasing ranks, comma-separated, e.g. "0,1,2".
        #[arg(long, value_delimiter = ',')]
        levels: Vec<u32>,
        #[arg(long, default_value_t = 2)]
        width: u64,
        /// Per-level subset as a constraint list (repeat per level,
        /// topmost level first; missing levels take the full layer).
        #[arg(long = "set")]
        sets: Vec<String>,
        /// Validate this staircase file instead of building.
        #[arg(long)]
        validate: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command, cli.json) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd, json: bool) -> Result<u8, String> {
    let mut report = Report::new(json);
    match cmd {
        Cmd::Ord(cmd) => run_ord(cmd, &mut report),
        Cmd::Graph(cmd) => run_graph(cmd, &mut report),
        Cmd::Verify(cmd) => run_verify(cmd, &mut report),
    }
    .map(|code| {
        report.finish();
        code
    })
}

fn parse_ord(s: &str) -> Result<Ordinal, String> {
    Ordinal::parse(s).map_err(|e| format!("`{s}`: {e}"))
}

fn run_ord(cmd: OrdCmd, report: &mut Report) -> Result<u8, String> {
    match cmd {
        OrdCmd::Normalize { expr } => {
            let a = parse_ord(&expr)?;
            report.set("ordinal", a.to_string());
            Ok(0)
        }
        OrdCmd::Cmp { a, b } => {
            let (a, b) = (parse_ord(&a)?, parse_ord(&b)?);
            let cmp = match a.cmp(&b) {
                std::cmp::Ordering::Less => "lt",
                std::cmp::Ordering::Equal => "eq",
                std::cmp::Ordering::Greater => "gt",
            };
            report.set("cmp", cmp);
            Ok(0)
        }
        OrdCmd::Cb { expr } => {
            let a = parse_ord(&expr)?;
            report.set("rank", a.cb_rank().map_err(|e| e.to_string())?);
            report.set("n", a.n_of().map_err(|e| e.to_string())?);
            Ok(0)
        }
        OrdCmd::TreeLeq { a, b } => {
            let (a, b) = (parse_ord(&a)?, parse_ord(&b)?);
            let holds = a.tree_leq(&b).map_err(|e| e.to_string())?;
            report.set("tree_leq", holds);
            Ok(if holds { 0 } else { 1 })
        }
        OrdCmd::Cover { expr } => {
            let a = parse_ord(&expr)?;
            report.set("cover", a.cover().map_err(|e| e.to_string())?.to_string());
            Ok(0)
        }
        OrdCmd::Layers { delta, window } => {
            let delta = parse_ord(&delta)?;
            let w = Window::new(delta.clone(), window.coeff_bound);
            report.set("delta", delta.to_string());
            report.set("coeff_bound", window.coeff_bound);
            let k = delta.k_delta().map_err(|e| e.to_string())? as usize;
            let mut layers = 0u64;
            for i in 1..=k {
                let sup = delta.component_sup(i).map_err(|e| e.to_string())?;
                let top = sup.cb_rank().map_err(|e| e.to_string())?;
                for rank in 0..=top {
                    let members = w
                        .layer_members(ordinal_ramsey::ordinal::LayerId::new(i, rank))
                        .map_err(|e| e.to_string())?;
                    if members.is_empty() {
                        continue;
                    }
                    layers += 1;
                    report.push_line(format!(
                        "L({i},{rank}) members={} min={} max={}",
                        members.len(),
                        members.first().unwrap(),
                        members.last().unwrap()
                    ));
                }
            }
            report.set("layers", layers);
            Ok(0)
        }
    }
}

fn run_graph(cmd: GraphCmd, report: &mut Report) -> Result<u8, String> {
    match cmd {
        GraphCmd::Edge { a, b, source } => {
            let g = source.load()?;
            let (a, b) = (parse_ord(&a)?, parse_ord(&b)?);
            let justs = g.justify(&a, &b).map_err(|e| e.to_string())?;
            report.set("edge", !justs.is_empty());
            for j in &justs {
                match j {
                    EdgeJustification::Cover => report.push_line("justified-by: cover"),
                    EdgeJustification::Clause(i) => {
                        report.push_line(format!("justified-by: {}", g.clauses[*i]))
                    }
                }
            }
            Ok(if justs.is_empty() { 1 } else { 0 })
        }
        GraphCmd::ScanTriangles { window, source } => {
            let g = source.load()?;
            let w = Window::new(g.delta.clone(), window.coeff_bound);
            let triangles = g.scan_triangles(&w).map_err(|e| e.to_string())?;
            report.set("delta", g.delta.to_string());
            report.set("coeff_bound", window.coeff_bound);
            report.set("points", w.enumerate().len());
            report.set("triangles", triangles.len());
            for t in &triangles {
                report.push_line(format!("triangle: {} {} {}", t[0], t[1], t[2]));
            }
            Ok(if triangles.is_empty() { 0 } else { 1 })
        }
        GraphCmd::Tables {
            window,
            r_max,
            source,
        } => {
            let g = source.load()?;
            let w = Window::new(g.delta.clone(), window.coeff_bound);
            let colouring = AnyColouring::Clause(g);
            let rep = extract_tables(&colouring, &w, r_max).map_err(|e| e.to_string())?;
            report.set("ok", rep.ok);
            report.set("normal", rep.normal.ok);
            report.set("unresolved", rep.unresolved.len());
            report.set("unwitnessed", rep.unwitnessed.len());
            report.set("conflicts", rep.conflicts.len());
            if let Some(desc) = &rep.normal.table {
                for line in desc.to_text().lines() {
                    report.push_line(line);
                }
            }
            for line in rep.dom.to_text().lines() {
                report.push_line(line);
            }
            Ok(if rep.ok { 0 } else { 1 })
        }
        GraphCmd::Scarcity {
            window,
            r_max,
            source,
        } => {
            let g = source.load()?;
            let w = Window::new(g.delta.clone(), window.coeff_bound);
            let colouring = AnyColouring::Clause(g);
            let rep = extract_tables(&colouring, &w, r_max).map_err(|e| e.to_string())?;
            let desc = rep.normal.table.clone().unwrap_or_default();
            let violations = scarcity_check(&desc, &rep.dom);
            report.set("violations", violations.len());
            for v in &violations {
                report.push_line(format!("violation: {v}"));
            }
            Ok(if violations.is_empty() { 0 } else { 1 })
        }
    }
}

fn run_verify(cmd: VerifyCmd, report: &mut Report) -> Result<u8, String> {
    match cmd {
        VerifyCmd::Claim2 {
            theta,
            bound,
            source,
        } => {
            let g = source.load()?;
            let theta = parse_ord(&theta)?;
            let rep = claim2_suite(&g, &theta, bound).map_err(|e| e.to_string())?;
            report.set("theta", theta.to_string());
            report.set("templates", rep.templates.len());
            report.set("all_resolved", rep.all_resolved());
            for line in rep.lines() {
                report.push_line(line);
            }
            Ok(if rep.all_resolved() { 0 } else { 1 })
        }
        VerifyCmd::Canonize {
            rank,
            fan_width,
            keep_width,
            prefix,
            colours,
            seed,
        } => {
            let tree = TruncatedTree::new(rank, fan_width).map_err(|e| e.to_string())?;
            let colouring =
                seeded_random_colouring(&tree, colours, seed).map_err(|e| e.to_string())?;
            report.set("rank", rank);
            report.set("fan_width", fan_width);
            report.set("keep_width", keep_width);
            report.set("colours", colours);
            report.set("seed", seed);
            match canonize_truncated(&tree, &colouring, colours, keep_width, prefix) {
                Ok(skeleton) => {
                    let checked = skeleton.check(&colouring).map_err(|e| e.to_string())?;
                    report.set("success", true);
                    report.set("checked", checked);
                    report.set("kept", skeleton.kept.len());
                    for line in skeleton.table.to_text().lines() {
                        report.push_line(line);
                    }
                    Ok(0)
                }
                Err(CanonizeError::WidthExhausted {
                    keep_width,
                    tables_tried,
                }) => {
                    report.set("success", false);
                    report.set("reason", "width-exhausted");
                    report.set("keep_width", keep_width);
                    report.set("tables_tried", tables_tried);
                    Ok(1)
                }
                Err(e) => Err(e.to_string()),
            }
        }
        VerifyCmd::Antichain { file, count } => {
            let text = fs::read_to_string(&file).map_err(|e| format!("{file}: {e}"))?;
            let family = FinSetFamily::parse_text(&text).map_err(|e| e.to_string())?;
            report.set("sets", family.len());
            report.set("count", count);
            match distinguish(&family, count) {
                Ok(d) => {
                    report.set("achieved", d.indices.len());
                    report.set("exhausted", d.exhausted);
                    for (i, w) in d.indices.iter().zip(&d.witnesses) {
                        report.push_line(format!("set={i} witness={w}"));
                    }
                    Ok(if d.indices.len() == count { 0 } else { 1 })
                }
                Err(e @ AntichainError::NotAntichain { .. }) => {
                    report.set("achieved", 0);
                    report.push_line(format!("falsified: {e}"));
                    Ok(1)
                }
                Err(e) => Err(e.to_string()),
            }
        }
        VerifyCmd::Staircase {
            levels,
            width,
            sets,
            validate,
        } => {
            let shape = StaircaseShape::new(levels, width).map_err(|e| e.to_string())?;
            let mut specs = Vec::new();
            for i in 0..shape.levels.len() {
                let spec = match sets.get(i) {
                    Some(text) => {
                        let refs: Vec<&str> = text
                            .split(',')
                            .map(str::trim)
                            .filter(|s| !s.is_empty())
                            .collect();
                        SubsetSpec::predicate(&refs).map_err(|e| e.to_string())?
                    }
                    None => SubsetSpec::predicate(&[]).map_err(|e| e.to_string())?,
                };
                specs.push(spec);
            }
            match validate {
                Some(path) => {
                    let text = fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
                    let sc = Staircase::parse_text(&text).map_err(|e| e.to_string())?;
                    if sc.shape != shape {
                        return Err(format!(
                            "file shape (levels {:?}, width {}) differs from the requested shape",
                            sc.shape.levels, sc.shape.width
                        ));
                    }
                    let valid = sc.validate(&specs).map_err(|e| e.to_string())?;
                    report.set("valid", valid);
                    report.set("points", sc.points.len());
                    Ok(if valid { 0 } else { 1 })
                }
                None => match staircase(&shape, &specs) {
                    Ok(sc) => {
                        report.set("points", sc.points.len());
                        for line in sc.to_text().lines() {
                            report.push_line(line);
                        }
                        Ok(0)
                    }
                    Err(
                        e @ (ordinal_ramsey::fsets::FsetError::NotLarge { .. }
                        | ordinal_ramsey::fsets::FsetError::WindowExhausted { .. }),
                    ) => {
                        report.push_line(format!("falsified: {e}"));
                        Ok(1)
                    }
                    Err(e) => Err(e.to_string()),
                },
            }
        }
    }
}
