//! Command-line front end for the library: graded characters of Specht
//! modules, Garnir data at a node, straightening of strict tableaux, and
//! the verification suites, with text, JSON, or CSV output.
//!
//! Exit codes: 0 all checks pass, 1 a verification identity failed,
//! 2 usage or parse error, 3 a resource cap was hit.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use klr_specht::bricks::{self, BrickError};
use klr_specht::ground::{GroundData, GroundError};
use klr_specht::klr::{self, CheckReport, KlrError, DEFAULT_BUDGET};
use klr_specht::modules::ModuleError;
use klr_specht::specht::{self, SpechtError, DEFAULT_SIZE_CAP};
use klr_specht::tableaux::garnir::Orientation;
use klr_specht::tableaux::{
    parse_node, parse_shape, parse_tableau, Multipartition, Node, TableauxError,
};
use klr_specht::{REDUCED_WORD_POLICY, VERSION};

// Sample counts for the randomized sweeps; the standalone relations suite
// digs deeper than the copy bundled into `--suite all`.
const RELATION_RANK: usize = 5;
const RELATION_SAMPLES: usize = 150;
const CONFLUENCE_SAMPLES: usize = 80;
const ALL_RELATION_RANK: usize = 4;
const ALL_RELATION_SAMPLES: usize = 60;
const ALL_CONFLUENCE_SAMPLES: usize = 40;

/// Exact computations with graded Specht modules of cyclotomic quiver Hecke
/// algebras.
#[derive(Parser)]
#[command(name = "klr-specht", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Standard rank, graded dimension, and graded character of a Specht
    /// module.
    Character(CharacterArgs),
    /// Garnir belt, bricks, tableaux, and the Garnir element at a node.
    Garnir(GarnirArgs),
    /// Expand a strict tableau in the standard basis.
    Straighten(StraightenArgs),
    /// Run verification suites and report each identity checked.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GroundArgs {
    /// Quiver parameter: 0 for the linear quiver, or the cycle length >= 2.
    #[arg(long, env = "KLRSPECHT_E", allow_negative_numbers = true)]
    e: i64,
    /// Multicharge: comma-separated integers, one per component.
    #[arg(
        long,
        default_value = "0",
        env = "KLRSPECHT_CHARGE",
        allow_hyphen_values = true
    )]
    charge: String,
}

impl GroundArgs {
    fn ground(&self) -> Result<GroundData, CliError> {
        let charge = charge_arg(&self.charge)?;
        Ok(GroundData::new(self.e, &charge)?)
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", env = "KLRSPECHT_FORMAT")]
    format: Format,
    /// Write the output to this file instead of stdout.
    #[arg(long, env = "KLRSPECHT_OUT")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrientationArg {
    Row,
    Column,
}

impl OrientationArg {
    fn orientation(self) -> Orientation {
        match self {
            OrientationArg::Row => Orientation::Row,
            OrientationArg::Column => Orientation::Column,
        }
    }

    fn name(self) -> &'static str {
        match self {
            OrientationArg::Row => "row",
            OrientationArg::Column => "column",
        }
    }
}

#[derive(Args)]
struct CharacterArgs {
    #[command(flatten)]
    ground: GroundArgs,
    /// Shape: rows comma-separated, "|" between components, "-" for an
    /// empty component.
    #[arg(long, env = "KLRSPECHT_SHAPE")]
    shape: String,
    /// Row (standard) or column (signed) Specht module.
    #[arg(long, value_enum, default_value = "row", env = "KLRSPECHT_ORIENTATION")]
    orientation: OrientationArg,
    /// Refuse base permutation modules with more than this many vectors.
    #[arg(long, default_value_t = DEFAULT_SIZE_CAP, env = "KLRSPECHT_CAP")]
    cap: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GarnirArgs {
    #[command(flatten)]
    ground: GroundArgs,
    /// Shape: rows comma-separated, "|" between components, "-" for an
    /// empty component.
    #[arg(long, env = "KLRSPECHT_SHAPE")]
    shape: String,
    /// Garnir node "(row,col,comp)", all coordinates starting at 1.
    #[arg(long, env = "KLRSPECHT_NODE")]
    node: String,
    /// Row (standard) or column (signed) Specht module.
    #[arg(long, value_enum, default_value = "row", env = "KLRSPECHT_ORIENTATION")]
    orientation: OrientationArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct StraightenArgs {
    /// Tableau: entries comma-separated within a row, "|" between rows,
    /// ";" between components.
    #[arg(value_name = "TABLEAU")]
    tableau: String,
    #[command(flatten)]
    ground: GroundArgs,
    /// Shape: rows comma-separated, "|" between components, "-" for an
    /// empty component.
    #[arg(long, env = "KLRSPECHT_SHAPE")]
    shape: String,
    /// Row (standard) or column (signed) Specht module.
    #[arg(long, value_enum, default_value = "row", env = "KLRSPECHT_ORIENTATION")]
    orientation: OrientationArg,
    /// Refuse base permutation modules with more than this many vectors.
    #[arg(long, default_value_t = DEFAULT_SIZE_CAP, env = "KLRSPECHT_CAP")]
    cap: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Relations,
    Braid,
    SignTwist,
    Duality,
    Induction,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Relations => "relations",
            Suite::Braid => "braid",
            Suite::SignTwist => "sign-twist",
            Suite::Duality => "duality",
            Suite::Induction => "induction",
            Suite::All => "all",
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    ground: GroundArgs,
    /// Which identities to check.
    #[arg(long, value_enum, default_value = "all", env = "KLRSPECHT_SUITE")]
    suite: Suite,
    /// Shape for the module suites (sign-twist, duality, induction, all).
    #[arg(long, env = "KLRSPECHT_SHAPE")]
    shape: Option<String>,
    /// Row (standard) or column (signed) Specht module.
    #[arg(long, value_enum, default_value = "row", env = "KLRSPECHT_ORIENTATION")]
    orientation: OrientationArg,
    /// Brick count for the braid suite; defaults to the sum of --lambda.
    #[arg(long, env = "KLRSPECHT_K")]
    k: Option<usize>,
    /// Brick composition for the braid suite: comma-separated positive
    /// parts.
    #[arg(long, env = "KLRSPECHT_LAMBDA")]
    lambda: Option<String>,
    /// Refuse base permutation modules with more than this many vectors.
    #[arg(long, default_value_t = DEFAULT_SIZE_CAP, env = "KLRSPECHT_CAP")]
    cap: u64,
    /// Rewrite budget: rule applications allowed per normalization.
    #[arg(long, default_value_t = DEFAULT_BUDGET, env = "KLRSPECHT_BUDGET")]
    budget: u64,
    /// Seed for the randomized relation sweep.
    #[arg(long, default_value_t = 0, env = "KLRSPECHT_SEED")]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

/// A command failure carrying its process exit code.
enum CliError {
    /// Bad flags or unparseable input: exit 2.
    Usage(String),
    /// A verified identity failed: exit 1.
    Check(String),
    /// A size cap or rewrite budget was exhausted: exit 3.
    Cap(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Cap(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Check(m) | CliError::Cap(m) => m,
        }
    }
}

impl From<GroundError> for CliError {
    fn from(e: GroundError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<TableauxError> for CliError {
    fn from(e: TableauxError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<KlrError> for CliError {
    fn from(e: KlrError) -> Self {
        match e {
            KlrError::BudgetExhausted { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ModuleError> for CliError {
    fn from(e: ModuleError) -> Self {
        match e {
            ModuleError::Klr(k) => k.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<BrickError> for CliError {
    fn from(e: BrickError) -> Self {
        match e {
            BrickError::Module(m) => m.into(),
            BrickError::NotClosed => CliError::Check(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SpechtError> for CliError {
    fn from(e: SpechtError) -> Self {
        match e {
            SpechtError::SizeCap(..) => CliError::Cap(e.to_string()),
            SpechtError::Inconsistent(_) => CliError::Check(e.to_string()),
            SpechtError::Ground(g) => g.into(),
            SpechtError::Module(m) => m.into(),
            SpechtError::Klr(k) => k.into(),
            SpechtError::Tableaux(t) => t.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Character(args) => cmd_character(args),
        Command::Garnir(args) => cmd_garnir(args),
        Command::Straighten(args) => cmd_straighten(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

// Locates the first offending token of an integer-list argument so the
// parse error carries a byte position; falls back to the library message
// when every token looks fine (a structural error, not a lexical one).
fn list_diagnostic(
    what: &str,
    input: &str,
    seps: &[char],
    token_ok: impl Fn(&str) -> bool,
    fallback: String,
) -> CliError {
    let mut start = 0;
    let check = |tok: &str, at: usize| -> Option<CliError> {
        let trimmed = tok.trim();
        if token_ok(trimmed) {
            return None;
        }
        Some(CliError::Usage(format!(
            "cannot parse {what} {input:?}: bad token {trimmed:?} at byte {at}"
        )))
    };
    for (idx, ch) in input.char_indices() {
        if seps.contains(&ch) {
            if let Some(err) = check(&input[start..idx], start) {
                return err;
            }
            start = idx + ch.len_utf8();
        }
    }
    if let Some(err) = check(&input[start..], start) {
        return err;
    }
    CliError::Usage(format!("cannot parse {what} {input:?}: {fallback}"))
}

fn shape_token_ok(tok: &str) -> bool {
    tok == "-" || tok.parse::<usize>().is_ok()
}

fn shape_arg(input: &str) -> Result<Multipartition, CliError> {
    parse_shape(input)
        .map_err(|e| list_diagnostic("shape", input, &['|', ','], shape_token_ok, e.to_string()))
}

fn tableau_arg(input: &str) -> Result<klr_specht::tableaux::Tableau, CliError> {
    parse_tableau(input).map_err(|e| {
        list_diagnostic("tableau", input, &[';', '|', ','], shape_token_ok, e.to_string())
    })
}

fn charge_arg(input: &str) -> Result<Vec<i64>, CliError> {
    let mut charge = Vec::new();
    for tok in input.split(',') {
        charge.push(tok.trim().parse::<i64>().map_err(|_| {
            list_diagnostic(
                "multicharge",
                input,
                &[','],
                |t| t.parse::<i64>().is_ok(),
                "expected comma-separated integers".to_string(),
            )
        })?);
    }
    Ok(charge)
}

fn lambda_arg(input: &str) -> Result<Vec<usize>, CliError> {
    let mut parts = Vec::new();
    for tok in input.split(',') {
        let part = tok.trim().parse::<usize>().map_err(|_| {
            list_diagnostic(
                "lambda",
                input,
                &[','],
                |t| t.parse::<usize>().is_ok(),
                "expected comma-separated positive parts".to_string(),
            )
        })?;
        parts.push(part);
    }
    Ok(parts)
}

fn node_arg(input: &str) -> Result<Node, CliError> {
    parse_node(input).map_err(|_| {
        CliError::Usage(format!(
            "cannot parse node {input:?}: expected \"(row,col,comp)\" with coordinates starting at 1"
        ))
    })
}

// Ground data plus shape, with the level consistency the module commands
// need.
fn module_ground(
    ground: &GroundArgs,
    shape: &str,
) -> Result<(GroundData, Multipartition), CliError> {
    let g = ground.ground()?;
    let mu = shape_arg(shape)?;
    if g.level() != mu.level() {
        return Err(CliError::Usage(format!(
            "multicharge has {} entries but the shape has {} components",
            g.level(),
            mu.level()
        )));
    }
    Ok((g, mu))
}

fn charge_string(g: &GroundData) -> String {
    let parts: Vec<String> = g.charge().iter().map(|r| r.value().to_string()).collect();
    parts.join(",")
}

fn envelope(command: &str, g: &GroundData) -> Map<String, Value> {
    let mut map = Map::new();
    map.insert("version".into(), json!(VERSION));
    map.insert("policy".into(), json!(REDUCED_WORD_POLICY));
    map.insert("command".into(), json!(command));
    let charge: Vec<i64> = g.charge().iter().map(|r| r.value()).collect();
    map.insert("ground".into(), json!({ "e": g.e(), "charge": charge }));
    map
}

fn emit(body: String, output: &OutputArgs) -> Result<(), CliError> {
    match &output.out {
        Some(path) => std::fs::write(path, body + "\n")
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write as _;
            // A closed pipe downstream is not an error worth reporting.
            match writeln!(std::io::stdout().lock(), "{body}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Usage(
                    format!("cannot write to stdout: {e}"),
                )),
                _ => Ok(()),
            }
        }
    }
}

// CSV is defined for characters only (degree, residue sequence,
// multiplicity); the other commands have no row shape to flatten to.
fn reject_csv(format: Format, command: &str) -> Result<(), CliError> {
    if format == Format::Csv {
        return Err(CliError::Usage(format!(
            "csv output is only available for character, not {command}"
        )));
    }
    Ok(())
}

fn ground_header(g: &GroundData, orientation: OrientationArg) -> String {
    format!(
        "e {}  charge {}  orientation {}",
        g.e(),
        charge_string(g),
        orientation.name()
    )
}

fn cmd_character(args: CharacterArgs) -> Result<bool, CliError> {
    let (g, mu) = module_ground(&args.ground, &args.shape)?;
    let module = specht::build_specht_with_cap(&mu, args.orientation.orientation(), &g, args.cap)?;
    let character = module.graded_character();
    let gdim = module.graded_dimension();
    let body = match args.output.format {
        Format::Csv => character.to_csv().trim_end().to_string(),
        Format::Json => {
            let mut map = envelope("character", &g);
            map.insert("shape".into(), json!(mu.to_string()));
            map.insert("orientation".into(), json!(args.orientation.name()));
            map.insert("rank".into(), json!(module.rank()));
            map.insert("graded_dimension".into(), gdim.to_json());
            map.insert("character".into(), character.to_json());
            pretty(Value::Object(map))
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "shape {mu}  {}", ground_header(&g, args.orientation));
            let _ = writeln!(out, "rank {}", module.rank());
            let _ = writeln!(out, "graded dimension {gdim}");
            let _ = writeln!(out, "degree  mult  residues");
            for ((degree, residues), mult) in &character.terms {
                let seq: Vec<String> = residues.iter().map(|r| r.to_string()).collect();
                let seq = if seq.is_empty() { "-".to_string() } else { seq.join(",") };
                let _ = writeln!(out, "{degree:>6}  {mult:>4}  {seq}");
            }
            out.trim_end().to_string()
        }
    };
    emit(body, &args.output)?;
    Ok(true)
}

// Reports which adjacency requirement fails before handing the node to the
// library, so a non-Garnir node names the missing neighbor.
fn garnir_precheck(mu: &Multipartition, node: &Node, orientation: Orientation) -> Result<(), CliError> {
    if !mu.contains(node) {
        return Err(CliError::Usage(format!(
            "node {node} lies outside the shape, so it is not a Garnir node"
        )));
    }
    let (neighbor, direction) = match orientation {
        Orientation::Row => (Node::new(node.row + 1, node.col, node.comp), "below"),
        Orientation::Column => (Node::new(node.row, node.col + 1, node.comp), "right of"),
    };
    if !mu.contains(&neighbor) {
        return Err(CliError::Usage(format!(
            "the shape has no node directly {direction} {node}, so it is not a {} Garnir node",
            match orientation {
                Orientation::Row => "row",
                Orientation::Column => "column",
            }
        )));
    }
    Ok(())
}

fn nodes_json(nodes: &[Node]) -> Value {
    Value::Array(nodes.iter().map(|n| json!(n.to_string())).collect())
}

fn cmd_garnir(args: GarnirArgs) -> Result<bool, CliError> {
    reject_csv(args.output.format, "garnir")?;
    let (g, mu) = module_ground(&args.ground, &args.shape)?;
    let node = node_arg(&args.node)?;
    let orientation = args.orientation.orientation();
    garnir_precheck(&mu, &node, orientation)?;
    let ge = specht::garnir_element(&mu, node, orientation, &g)?;
    let data = &ge.data;
    let body = match args.output.format {
        Format::Json => {
            let mut map = envelope("garnir", &g);
            map.insert("shape".into(), json!(mu.to_string()));
            map.insert("orientation".into(), json!(args.orientation.name()));
            map.insert("node".into(), json!(data.node.to_string()));
            map.insert("k".into(), json!(data.k));
            map.insert("f".into(), json!(data.f));
            map.insert("n".into(), json!(data.n));
            map.insert("belt".into(), nodes_json(&data.belt));
            map.insert(
                "bricks".into(),
                Value::Array(data.bricks.iter().map(|b| nodes_json(b)).collect()),
            );
            map.insert("garnir_tableau".into(), json!(data.garnir_tableau.to_string()));
            map.insert("top_tableau".into(), json!(data.top_tableau.to_string()));
            map.insert(
                "gar_tableaux".into(),
                Value::Array(
                    data.gar_tableaux.iter().map(|t| json!(t.to_string())).collect(),
                ),
            );
            let residues: Vec<i64> = data.residue_seq.iter().map(|r| r.value()).collect();
            map.insert("residues".into(), json!(residues));
            map.insert("coset_count".into(), json!(data.coset_words.len()));
            map.insert("coset_words".into(), json!(data.coset_words));
            map.insert(
                "element".into(),
                json!({
                    "terms": ge.element.term_count(),
                    "degree": ge.degree,
                    "display": ge.element.to_string(),
                }),
            );
            pretty(Value::Object(map))
        }
        _ => {
            let mut out = String::new();
            let _ = writeln!(out, "shape {mu}  {}", ground_header(&g, args.orientation));
            let _ = writeln!(out, "node {}", data.node);
            match data.n {
                Some(n) => {
                    let _ = writeln!(out, "k {}  f {}  n {n}", data.k, data.f);
                }
                None => {
                    let _ = writeln!(out, "k {}  f {}", data.k, data.f);
                }
            }
            let belt: Vec<String> = data.belt.iter().map(|n| n.to_string()).collect();
            let _ = writeln!(out, "belt {}", belt.join(" "));
            for (idx, brick) in data.bricks.iter().enumerate() {
                let nodes: Vec<String> = brick.iter().map(|n| n.to_string()).collect();
                let _ = writeln!(out, "brick {}  {}", idx + 1, nodes.join(" "));
            }
            let _ = writeln!(out, "garnir tableau  {}", data.garnir_tableau);
            let _ = writeln!(out, "top tableau     {}", data.top_tableau);
            for t in &data.gar_tableaux {
                let _ = writeln!(out, "gar tableau     {t}");
            }
            let _ = writeln!(out, "cosets {}", data.coset_words.len());
            let _ = writeln!(
                out,
                "element: {} terms, degree {}",
                ge.element.term_count(),
                ge.degree
            );
            if ge.element.term_count() <= 24 {
                let _ = writeln!(out, "  {}", ge.element);
            }
            out.trim_end().to_string()
        }
    };
    emit(body, &args.output)?;
    Ok(true)
}

fn cmd_straighten(args: StraightenArgs) -> Result<bool, CliError> {
    reject_csv(args.output.format, "straighten")?;
    let (g, mu) = module_ground(&args.ground, &args.shape)?;
    let tableau = tableau_arg(&args.tableau)?;
    let module = specht::build_specht_with_cap(&mu, args.orientation.orientation(), &g, args.cap)?;
    let expansion = module.straighten(&tableau)?;
    let body = match args.output.format {
        Format::Json => {
            let mut map = envelope("straighten", &g);
            map.insert("shape".into(), json!(mu.to_string()));
            map.insert("orientation".into(), json!(args.orientation.name()));
            map.insert("input".into(), json!(tableau.to_string()));
            let terms: Vec<Value> = expansion
                .iter()
                .map(|(s, c)| {
                    json!({
                        "coefficient": c.to_string(),
                        "tableau": module.standard_tableau(s).to_string(),
                        "degree": module.basis_degree(s),
                    })
                })
                .collect();
            map.insert("expansion".into(), Value::Array(terms));
            pretty(Value::Object(map))
        }
        _ => {
            let mut out = String::new();
            let _ = writeln!(out, "shape {mu}  {}", ground_header(&g, args.orientation));
            let _ = writeln!(out, "input {tableau}");
            if expansion.is_zero() {
                let _ = writeln!(out, "0");
            } else {
                for (s, c) in expansion.iter() {
                    let _ = writeln!(
                        out,
                        "{c:>4}  [{}]  degree {}",
                        module.standard_tableau(s),
                        module.basis_degree(s)
                    );
                }
            }
            out.trim_end().to_string()
        }
    };
    emit(body, &args.output)?;
    Ok(true)
}

/// One named suite of checks, with an optional note for skipped work.
struct SuiteReports {
    suite: String,
    checks: Vec<CheckReport>,
    note: Option<String>,
}

fn suite_reports(suite: &str, checks: Vec<CheckReport>) -> SuiteReports {
    SuiteReports {
        suite: suite.to_string(),
        checks,
        note: None,
    }
}

fn relations_suite(
    g: &GroundData,
    rank: usize,
    samples: usize,
    confluence_samples: usize,
    seed: u64,
    budget: u64,
) -> Result<Vec<CheckReport>, CliError> {
    let mut checks = klr::verify_relations(g, rank, samples, seed, budget)?;
    checks.extend(klr::verify_confluence(confluence_samples, seed, budget)?);
    Ok(checks)
}

fn prefixed(prefix: &str, checks: Vec<CheckReport>) -> Vec<CheckReport> {
    checks
        .into_iter()
        .map(|mut c| {
            c.name = format!("{prefix}-{}", c.name);
            c
        })
        .collect()
}

fn braid_suite(
    g: &GroundData,
    k: Option<usize>,
    lambda: &Option<String>,
) -> Result<Vec<CheckReport>, CliError> {
    if g.e() < 2 {
        return Err(CliError::Usage(format!(
            "the braid suite needs e >= 2, got e = {}",
            g.e()
        )));
    }
    let lambda = match lambda {
        Some(input) => lambda_arg(input)?,
        None => vec![1; k.unwrap_or(2)],
    };
    if let Some(k) = k {
        let total: usize = lambda.iter().sum();
        if k != total {
            return Err(CliError::Usage(format!(
                "k is {k} but lambda {lambda:?} sums to {total}"
            )));
        }
    }
    let start = g.residue(0);
    let mut checks = Vec::new();
    for (orientation, name) in [(Orientation::Row, "row"), (Orientation::Column, "column")] {
        let space = bricks::brick_space(start, &lambda, orientation, g)?;
        checks.extend(prefixed(name, bricks::verify_brick_theorems(&space)?));
    }
    checks.push(bricks::verify_sign_translation(start, &lambda, g)?);
    Ok(checks)
}

fn require_shape<'a>(args: &'a VerifyArgs, suite: Suite) -> Result<&'a str, CliError> {
    args.shape.as_deref().ok_or_else(|| {
        CliError::Usage(format!("--suite {} needs --shape", suite.name()))
    })
}

fn specht_suite(mu: &Multipartition, g: &GroundData) -> Result<Vec<CheckReport>, CliError> {
    let mut checks = prefixed("row", specht::verify_specht(mu, Orientation::Row, g)?);
    checks.extend(prefixed(
        "column",
        specht::verify_specht(mu, Orientation::Column, g)?,
    ));
    Ok(checks)
}

fn cmd_verify(args: VerifyArgs) -> Result<bool, CliError> {
    reject_csv(args.output.format, "verify")?;
    let g = args.ground.ground()?;
    let mut suites: Vec<SuiteReports> = Vec::new();
    match args.suite {
        Suite::Relations => {
            suites.push(suite_reports(
                "relations",
                relations_suite(
                    &g,
                    RELATION_RANK,
                    RELATION_SAMPLES,
                    CONFLUENCE_SAMPLES,
                    args.seed,
                    args.budget,
                )?,
            ));
        }
        Suite::Braid => {
            suites.push(suite_reports("braid", braid_suite(&g, args.k, &args.lambda)?));
        }
        Suite::SignTwist => {
            let (g, mu) = module_ground(&args.ground, require_shape(&args, args.suite)?)?;
            suites.push(suite_reports("sign-twist", specht::verify_sign_twist(&mu, &g)?));
        }
        Suite::Duality => {
            let (g, mu) = module_ground(&args.ground, require_shape(&args, args.suite)?)?;
            suites.push(suite_reports("duality", specht::verify_duality(&mu, &g)?));
        }
        Suite::Induction => {
            let (g, mu) = module_ground(&args.ground, require_shape(&args, args.suite)?)?;
            suites.push(suite_reports("induction", specht::verify_induction(&mu, &g)?));
        }
        Suite::All => {
            let (g, mu) = module_ground(&args.ground, require_shape(&args, args.suite)?)?;
            suites.push(suite_reports(
                "relations",
                relations_suite(
                    &g,
                    ALL_RELATION_RANK,
                    ALL_RELATION_SAMPLES,
                    ALL_CONFLUENCE_SAMPLES,
                    args.seed,
                    args.budget,
                )?,
            ));
            if g.e() >= 2 {
                suites.push(suite_reports("braid", braid_suite(&g, args.k, &args.lambda)?));
            } else {
                suites.push(SuiteReports {
                    suite: "braid".to_string(),
                    checks: Vec::new(),
                    note: Some("skipped: bricks need e >= 2".to_string()),
                });
            }
            suites.push(suite_reports("specht", specht_suite(&mu, &g)?));
            suites.push(suite_reports("sign-twist", specht::verify_sign_twist(&mu, &g)?));
            suites.push(suite_reports("duality", specht::verify_duality(&mu, &g)?));
            suites.push(suite_reports("induction", specht::verify_induction(&mu, &g)?));
        }
    }
    let pass = suites.iter().all(|s| s.checks.iter().all(|c| c.passed()));
    let body = match args.output.format {
        Format::Json => {
            let mut map = envelope("verify", &g);
            map.insert("suite".into(), json!(args.suite.name()));
            map.insert("seed".into(), json!(args.seed));
            map.insert("budget".into(), json!(args.budget));
            let rendered: Vec<Value> = suites
                .iter()
                .map(|s| {
                    let mut entry = Map::new();
                    entry.insert("suite".into(), json!(s.suite));
                    if let Some(note) = &s.note {
                        entry.insert("note".into(), json!(note));
                    }
                    entry.insert(
                        "checks".into(),
                        serde_json::to_value(&s.checks).expect("reports serialize"),
                    );
                    Value::Object(entry)
                })
                .collect();
            map.insert("suites".into(), Value::Array(rendered));
            map.insert("pass".into(), json!(pass));
            pretty(Value::Object(map))
        }
        _ => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "e {}  charge {}  policy {}  seed {}",
                g.e(),
                charge_string(&g),
                REDUCED_WORD_POLICY,
                args.seed
            );
            for s in &suites {
                match &s.note {
                    Some(note) => {
                        let _ = writeln!(out, "{}: {note}", s.suite);
                    }
                    None => {
                        let _ = writeln!(out, "{}", s.suite);
                    }
                }
                for c in &s.checks {
                    if c.passed() {
                        let _ = writeln!(out, "  ok {}: {} cases", c.name, c.cases);
                    } else {
                        let _ = writeln!(
                            out,
                            "  FAIL {}: {} ({} failures, {} cases)",
                            c.name,
                            c.failures[0],
                            c.failures.len(),
                            c.cases
                        );
                    }
                }
            }
            let _ = writeln!(out, "result: {}", if pass { "pass" } else { "fail" });
            out.trim_end().to_string()
        }
    };
    emit(body, &args.output)?;
    if !pass {
        let first = suites
            .iter()
            .flat_map(|s| s.checks.iter())
            .find(|c| !c.passed())
            .expect("some check failed");
        eprintln!("FAIL {}: {}", first.name, first.failures[0]);
    }
    Ok(pass)
}

fn pretty(value: Value) -> String {
    serde_json::to_string_pretty(&value).expect("json serializes")
}
