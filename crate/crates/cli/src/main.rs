mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use ptolemy_core::groebner::Budget;
use ptolemy_core::ideal::Saturation;
use ptolemy_core::{Error, ErrorKind};
use serde::Serialize;

const SCHEMA: &str = r#"TRIANGULATION FILE (JSON)
  name            string
  n               rank, an integer >= 2
  tetrahedra      number of tetrahedra
  cusps           [{"index": i, "basis": [[a, b], [c, d]]}] with m' = m^a l^b,
                  l' = m^c l^d and ad - bc = ±1
  vertex_cusp     per tetrahedron, the cusp of each of its four vertices
  gluings         [{"label", "tet", "face", "to_tet", "perm", "dressing"}]: face `face`
                  (opposite that vertex) of `tet` is glued to `to_tet`, vertex v going
                  to perm[v]; dressing[v] = [e, f] means M_v = D(m')^e D(l')^f
  representatives optional [{"name", "tet", "point"}] naming class representatives
  tree            optional gluing labels forming a spanning tree of the dual graph

CERTIFICATES FILE (JSON)
  [{"tet": 0, "s": [0,0,0,0], "z": "x*y^-1", "one_minus_z": "-m'^2*l'*y*x^-1"}, ...]
  or the output of `ptolemy --json shapes --symbolic`

POINT FILE (JSON)
  {"x": [re, im], "m": [re, im], ...} over every non-witness variable

EXIT CODES
  0 ok, 2 invalid input or failed validation, 3 Groebner budget exceeded,
  4 numeric failure"#;

#[derive(Parser, Debug, Serialize)]
#[command(name = "ptolemy", version, about = "Ptolemy varieties, A-polynomials, Dehn invariants and holonomy", after_long_help = SCHEMA)]
struct Cli {
    /// Print a JSON document instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Log progress to stderr (repeat for more detail)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Write the Ptolemy ideal as text, Magma, Singular or JSON
    Generate(GenerateArgs),
    /// Check a triangulation: point classes, edge cycles and presentation
    Validate(InputArgs),
    /// Groebner basis of the (reduced) ideal
    Gb(GbArgs),
    /// Eliminate Ptolemy coordinates to get the A-polynomial or A-variety
    Apoly(ApolyArgs),
    /// Shapes and gluing-equation residuals of numeric points
    Shapes(ShapesArgs),
    /// Both sides of the Dehn invariant formula
    Dehn(DehnArgs),
    /// Holonomy representation of numeric points (n = 2)
    Holonomy(HolonomyArgs),
}

#[derive(Args, Debug, Serialize)]
struct InputArgs {
    /// Triangulation file (`gb` also accepts an ideal written by `generate --format json`)
    #[arg(long)]
    input: PathBuf,
    /// Rank to use instead of the file's `n`
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Args, Debug, Serialize)]
struct ReductionArgs {
    /// Fix a coordinate to one, as NAME or NAME=1 (repeatable)
    #[arg(long = "fix")]
    fixes: Vec<String>,
    #[arg(long, value_enum, default_value_t = SaturationArg::Global)]
    saturation: SaturationArg,
}

#[derive(Args, Debug, Serialize)]
struct BudgetArgs {
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: u64,
    #[arg(long, default_value_t = 100_000)]
    max_basis: usize,
    #[arg(long, default_value_t = 20_000)]
    max_terms: usize,
}

#[derive(Args, Debug, Serialize)]
struct PinArgs {
    /// Pin a variable, as NAME=RE or NAME=RE,IM (repeatable)
    #[arg(long = "pin", value_parser = parse_pin)]
    #[serde(serialize_with = "ser_pins")]
    pins: Vec<(String, Complex64)>,
}

#[derive(Args, Debug, Serialize)]
struct GenerateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    reduction: ReductionArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Enhanced)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Plain)]
    format: FormatArg,
    /// Add saturation witnesses even when nothing is fixed
    #[arg(long)]
    saturate: bool,
    /// Write to this file instead of stdout
    #[arg(long, alias = "output")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct GbArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    reduction: ReductionArgs,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Enhanced)]
    mode: ModeArg,
    /// lex, grevlex, elim (Ptolemy coordinates and witnesses first) or elim:VAR,...
    #[arg(long, default_value = "elim")]
    order: String,
}

#[derive(Args, Debug, Serialize)]
struct ApolyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    reduction: ReductionArgs,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Eliminate without fixing any coordinate
    #[arg(long)]
    allow_unreduced: bool,
    /// Also write Magma and Singular scripts here; when the budget runs out
    /// they are written regardless, to this directory or the current one
    #[arg(long)]
    emit_scripts: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ShapesArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    reduction: ReductionArgs,
    #[command(flatten)]
    pins: PinArgs,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Enhanced)]
    mode: ModeArg,
    /// Point file; otherwise points are solved from the pins
    #[arg(long)]
    point: Option<PathBuf>,
    /// Print symbolic shapes and their certificates instead
    #[arg(long)]
    symbolic: bool,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Args, Debug, Serialize)]
struct DehnArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Enhanced)]
    mode: ModeArg,
    /// Certificate file; otherwise certificates are read off the coordinates
    #[arg(long)]
    certificates: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct HolonomyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    reduction: ReductionArgs,
    #[command(flatten)]
    pins: PinArgs,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Point file; otherwise points are solved from the pins
    #[arg(long)]
    point: Option<PathBuf>,
    /// Also evaluate this word in the face-pairing generators (repeatable)
    #[arg(long = "word")]
    words: Vec<String>,
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModeArg {
    Standard,
    Enhanced,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SaturationArg {
    Global,
    PerVariable,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FormatArg {
    Plain,
    Magma,
    Singular,
    Json,
}

impl From<SaturationArg> for Saturation {
    fn from(s: SaturationArg) -> Saturation {
        match s {
            SaturationArg::Global => Saturation::Global,
            SaturationArg::PerVariable => Saturation::PerVariable,
        }
    }
}

impl From<&BudgetArgs> for Budget {
    fn from(b: &BudgetArgs) -> Budget {
        Budget {
            max_steps: b.max_steps,
            max_basis: b.max_basis,
            max_terms: b.max_terms,
        }
    }
}

fn parse_pin(text: &str) -> Result<(String, Complex64), String> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=RE[,IM], got `{text}`"))?;
    let mut parts = value.split(',').map(|p| p.trim().parse::<f64>());
    let re = parts
        .next()
        .ok_or("missing value")?
        .map_err(|e| format!("bad real part: {e}"))?;
    let im = parts
        .next()
        .transpose()
        .map_err(|e| format!("bad imaginary part: {e}"))?
        .unwrap_or(0.0);
    if parts.next().is_some() {
        return Err(format!("too many components in `{text}`"));
    }
    Ok((name.trim().to_string(), Complex64::new(re, im)))
}

fn ser_pins<S: serde::Serializer>(pins: &[(String, Complex64)], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<(&str, [f64; 2])> = pins
        .iter()
        .map(|(n, z)| (n.as_str(), [z.re, z.im]))
        .collect();
    v.serialize(s)
}

/// An error tagged with the pipeline stage it came from.
pub struct Failure {
    pub stage: &'static str,
    pub error: Error,
}

pub trait Stage<T> {
    fn stage(self, stage: &'static str) -> Result<T, Failure>;
}

impl<T, E: Into<Error>> Stage<T> for Result<T, E> {
    fn stage(self, stage: &'static str) -> Result<T, Failure> {
        self.map_err(|e| Failure {
            stage,
            error: e.into(),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let config = serde_json::to_value(&cli).expect("arguments serialize");
    match commands::run(&cli, &config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { stage, error }) => {
            eprintln!("error [{stage}]: {error}");
            ExitCode::from(match error.kind() {
                ErrorKind::Validation => 2,
                ErrorKind::Budget => 3,
                ErrorKind::Numeric => 4,
            })
        }
    }
}
