//! Command-line front end: reads a generator document, runs one order or the
//! full iteration, and prints a text or JSON report.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use toric_nash::minors::SearchStats;
use toric_nash::{
    build_coeff_matrix, exponent_set, nash_step, pipeline::validate_input, resolve, ExponentForm,
    GeneratorMatrix, NashError, PipelineConfig, Point, ResolutionReport, SearchMode, StepReport,
    Verdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BUDGET: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// The input file: `{"d": 2, "generators": [[1, 0], [1, 1]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub d: usize,
    pub generators: Vec<Point>,
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<GeneratorMatrix, String> {
        let doc: InputDocument =
            serde_json::from_str(text).map_err(|e| format!("malformed input: {e}"))?;
        doc.validate()
    }

    pub fn validate(self) -> Result<GeneratorMatrix, String> {
        if self.d == 0 {
            return Err("d: must be at least 1".into());
        }
        if self.generators.is_empty() {
            return Err("generators: at least one generator is required".into());
        }
        for (i, g) in self.generators.iter().enumerate() {
            if g.len() != self.d {
                return Err(format!(
                    "generators[{i}]: expected {} coordinates, found {}",
                    self.d,
                    g.len()
                ));
            }
        }
        GeneratorMatrix::new(self.d, self.generators).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Canonical,
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Naive,
    Pruned,
}

#[derive(Debug, Parser)]
#[command(
    name = "toric-nash",
    version,
    about = "Higher Nash blowups of affine toric varieties"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON generator document (`-` for standard input)
    #[arg(long, global = true, value_name = "PATH")]
    pub input: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value = "text")]
    pub emit: Emit,

    /// `canonical` subtracts the sum of all column multi-indices
    #[arg(long, global = true, value_enum, default_value = "canonical")]
    pub exponent_form: FormArg,

    #[arg(long, global = true, value_enum, default_value = "pruned")]
    pub mode: ModeArg,

    #[arg(long, global = true, value_name = "K")]
    pub threads: Option<usize>,

    /// Maximum number of search nodes per order
    #[arg(long, global = true, value_name = "N")]
    pub budget_nodes: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exponent set and charts for a single order
    Step {
        #[arg(long, default_value_t = 1)]
        order: u32,
    },
    /// Raise the order until every essential chart is smooth
    Resolve {
        #[arg(long, default_value_t = 3)]
        max_order: u32,
    },
    /// Dump the coefficient matrix
    Matrix {
        #[arg(long, default_value_t = 1)]
        order: u32,
    },
    /// Dump the exponent set of the non-zero maximal minors
    Minors {
        #[arg(long, default_value_t = 1)]
        order: u32,
    },
}

/// One entry of a dumped coefficient matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixEntry {
    /// Exact rational, e.g. `"2"` or `"5/2"`.
    pub c: String,
    /// `Aβ - α`.
    pub exponent: Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRow {
    pub beta: Vec<u32>,
    pub entries: Vec<MatrixEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub order: u32,
    pub cols: Vec<Vec<u32>>,
    pub rows: Vec<MatrixRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorsDump {
    pub order: u32,
    pub exponent_form: ExponentForm,
    pub shift: Point,
    pub exponents: Vec<Point>,
    /// Row positions (in graded order) of one realizing subset per exponent.
    pub witnesses: Vec<Vec<usize>>,
    pub stats: SearchStats,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let msg = e.to_string();
            let line = msg.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(err, "{line}");
            return EXIT_INPUT;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(Failure { message, code }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

struct Failure {
    message: String,
    code: i32,
}

impl From<NashError> for Failure {
    fn from(e: NashError) -> Self {
        let code = match e {
            NashError::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        Failure {
            message: e.to_string(),
            code,
        }
    }
}

fn input_failure(message: String) -> Failure {
    Failure {
        message,
        code: EXIT_INPUT,
    }
}

fn read_input(cli: &Cli) -> Result<GeneratorMatrix, Failure> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| input_failure("--input: a generator document is required".into()))?;
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| input_failure(format!("--input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| input_failure(format!("--input: {}: {e}", path.display())))?
    };
    InputDocument::parse(&text).map_err(input_failure)
}

fn config(cli: &Cli) -> PipelineConfig {
    let mut cfg = PipelineConfig {
        mode: match cli.mode {
            ModeArg::Naive => SearchMode::Naive,
            ModeArg::Pruned => SearchMode::Pruned,
        },
        threads: cli.threads,
        ..Default::default()
    };
    if cli.budget_nodes.is_some() {
        cfg.node_budget = cli.budget_nodes;
    }
    cfg
}

fn form(cli: &Cli) -> ExponentForm {
    match cli.exponent_form {
        FormArg::Canonical => ExponentForm::Canonical,
        FormArg::Raw => ExponentForm::Raw,
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> Result<(String, i32), Failure> {
    if cli.threads == Some(0) {
        return Err(input_failure("--threads: must be at least 1".into()));
    }
    let a = read_input(cli)?;
    let cfg = config(cli);
    match cli.command {
        Command::Step { order } => {
            check_order("--order", order)?;
            let step = nash_step(&a, order, &cfg)?.with_form(form(cli));
            let text = match cli.emit {
                Emit::Json => to_json(&step),
                Emit::Text => step_text(&step),
            };
            Ok((text, EXIT_OK))
        }
        Command::Resolve { max_order } => {
            check_order("--max-order", max_order)?;
            let report = resolve(&a, max_order, &cfg)?.with_form(form(cli));
            let code = match report.verdict {
                Verdict::SmoothAtOrder { .. } => EXIT_OK,
                Verdict::BudgetExhausted { .. } => EXIT_BUDGET,
            };
            let text = match cli.emit {
                Emit::Json => to_json(&report),
                Emit::Text => resolution_text(&report),
            };
            Ok((text, code))
        }
        Command::Matrix { order } => {
            check_order("--order", order)?;
            let dump = matrix_dump(&a, order)?;
            let text = match cli.emit {
                Emit::Json => to_json(&dump),
                Emit::Text => matrix_text(&dump),
            };
            Ok((text, EXIT_OK))
        }
        Command::Minors { order } => {
            check_order("--order", order)?;
            validate_input(&a)?;
            let (s, stats) = exponent_set(&a, order, &cfg)?;
            let exponents = match form(cli) {
                ExponentForm::Canonical => s.elements.clone(),
                ExponentForm::Raw => s.raw_elements(),
            };
            let dump = MinorsDump {
                order,
                exponent_form: form(cli),
                shift: s.shift,
                exponents,
                witnesses: s.witnesses,
                stats,
            };
            let text = match cli.emit {
                Emit::Json => to_json(&dump),
                Emit::Text => minors_text(&dump),
            };
            Ok((text, EXIT_OK))
        }
    }
}

fn check_order(flag: &str, n: u32) -> Result<(), Failure> {
    if n == 0 {
        return Err(input_failure(format!("{flag}: must be at least 1")));
    }
    Ok(())
}

pub fn matrix_dump(a: &GeneratorMatrix, order: u32) -> Result<MatrixDump, NashError> {
    let m = build_coeff_matrix(a, order)?;
    let rows = m
        .rows
        .iter()
        .enumerate()
        .map(|(i, beta)| MatrixRow {
            beta: beta.entries().to_vec(),
            entries: (0..m.num_cols())
                .map(|j| MatrixEntry {
                    c: m.entries[i][j].to_string(),
                    exponent: m.exponent(i, j),
                })
                .collect(),
        })
        .collect();
    Ok(MatrixDump {
        order,
        cols: m.cols.iter().map(|c| c.entries().to_vec()).collect(),
        rows,
    })
}

fn point(p: &[i64]) -> String {
    let parts: Vec<String> = p.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

fn point_set(ps: &[Point]) -> String {
    let parts: Vec<String> = ps.iter().map(|p| point(p)).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Points grouped into lines by first coordinate.
fn grouped(ps: &[Point], indent: &str) -> String {
    let mut s = String::new();
    let mut current: Option<i64> = None;
    for p in ps {
        let head = p.first().copied();
        if head != current {
            if current.is_some() {
                s.push('\n');
            }
            s.push_str(indent);
            current = head;
        } else {
            s.push(' ');
        }
        s.push_str(&point(p));
    }
    if !ps.is_empty() {
        s.push('\n');
    }
    s
}

fn form_name(f: ExponentForm) -> &'static str {
    match f {
        ExponentForm::Canonical => "canonical",
        ExponentForm::Raw => "raw",
    }
}

pub fn step_text(step: &StepReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "order {}: M = {}, D = {}, |S| = {} ({} form, shift {})",
        step.order,
        step.rows,
        step.cols,
        step.exponents.len(),
        form_name(step.exponent_form),
        point(&step.shift)
    );
    let _ = writeln!(s, "S:");
    s.push_str(&grouped(&step.exponents, "  "));
    let _ = writeln!(
        s,
        "charts: {} essential of {}",
        step.essential_count,
        step.charts.len()
    );
    for c in step.essential_charts() {
        let gens = c.minimal_generators.as_deref().unwrap_or(&[]);
        let _ = writeln!(
            s,
            "  center {}: minimal generators {} -> {}",
            point(&c.center),
            point_set(gens),
            if c.smooth == Some(true) {
                "smooth"
            } else {
                "singular"
            }
        );
        if c.full_span == Some(false) {
            let _ = writeln!(
                s,
                "    warning: chart generators do not span the full lattice"
            );
        }
    }
    let _ = writeln!(
        s,
        "Nash_{} is {}",
        step.order,
        if step.all_smooth {
            "non-singular"
        } else {
            "singular"
        }
    );
    s
}

pub fn resolution_text(report: &ResolutionReport) -> String {
    let mut s = String::new();
    for step in &report.steps {
        s.push_str(&step_text(step));
        s.push('\n');
    }
    match &report.verdict {
        Verdict::SmoothAtOrder { order } => {
            let _ = writeln!(s, "smooth at order {order}");
        }
        Verdict::BudgetExhausted { max_order, error } => {
            let _ = write!(s, "budget exhausted: no smooth order up to {max_order}");
            if let Some(e) = error {
                let _ = write!(s, " ({e})");
            }
            s.push('\n');
        }
    }
    s
}

pub fn matrix_text(dump: &MatrixDump) -> String {
    let cells: Vec<Vec<String>> = dump
        .rows
        .iter()
        .map(|r| {
            let mut row = vec![idx(&r.beta)];
            row.extend(r.entries.iter().map(|e| {
                if e.c == "0" {
                    "0".to_string()
                } else {
                    format!("{} x^{}", e.c, point(&e.exponent))
                }
            }));
            row
        })
        .collect();
    let mut header = vec!["beta \\ alpha".to_string()];
    header.extend(dump.cols.iter().map(|c| idx(c)));
    let widths: Vec<usize> = (0..header.len())
        .map(|j| {
            cells
                .iter()
                .map(|r| r[j].len())
                .chain([header[j].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "order {} coefficient matrix: {} x {}",
        dump.order,
        dump.rows.len(),
        dump.cols.len()
    );
    for row in std::iter::once(&header).chain(&cells) {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(s, "{}", line.join("  ").trim_end());
    }
    s
}

fn idx(v: &[u32]) -> String {
    let parts: Vec<String> = v.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

pub fn minors_text(dump: &MinorsDump) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "order {}: |S| = {} ({} form, shift {}); {} non-zero minors, {} nodes, {} pruned",
        dump.order,
        dump.exponents.len(),
        form_name(dump.exponent_form),
        point(&dump.shift),
        dump.stats.nonzero_minors,
        dump.stats.nodes,
        dump.stats.pruned
    );
    s.push_str(&grouped(&dump.exponents, "  "));
    s
}
