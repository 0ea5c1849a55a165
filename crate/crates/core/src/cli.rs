//! Command-line interface. [`run`] returns the exit code and the text that
//! would go to standard output and standard error, so it is testable
//! without spawning processes.
//!
//! Exit codes: 0 success, 1 validation or computation failure (the message
//! starts with the violated axiom), 2 unreadable or malformed input.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::error::Error;
use crate::feasibility::{feasibility_report, FeasInput, GroupFamily, GroupType};
use crate::json::{
    document_to_file, elem_to_json, matrix_to_json, paired_to_file, parse_document, to_canonical, Document,
    ParseError,
};
use crate::lifting::lift_tower;
use crate::pairing::{normalize_standard, PairedFLModule, Symmetry};
use crate::random::random_paired;
use crate::ring::{make_ring, Family};
use crate::simple::{all_embeddings, field_of_order, joint_change_of_basis, tensor_decompose, SimpleSpec};
use crate::tangent::tangent_report;

#[derive(Parser, Debug)]
#[command(name = "flab", version, about = "Fontaine-Laffaille modules with pairings over finite local rings")]
pub struct Cli {
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Suppress diagnostics on standard error.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FamilyArg {
    Witt,
    #[value(alias = "dual_numbers")]
    Dual,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Witt => Family::Witt,
            FamilyArg::Dual => Family::DualNumbers,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GroupArg {
    Gsp,
    Go,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check every axiom of a module file.
    Validate { path: PathBuf },
    /// Lift a paired module over a residue field through a tower of levels.
    Lift {
        path: PathBuf,
        #[arg(long, default_value_t = 2)]
        tower_depth: u32,
        #[arg(long, value_enum, default_value = "witt")]
        family: FamilyArg,
    },
    /// Dimensions of the tangent space and the dimension-formula check.
    Tangent { path: PathBuf },
    /// Bring a paired module to a multiple of the standard pairing.
    Normalize { path: PathBuf },
    /// Decompose a tensor product of two cyclic simple modules.
    TensorSimples {
        #[arg(long)]
        h: Option<usize>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        i: Vec<i64>,
        #[arg(long)]
        h2: Option<usize>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        i2: Vec<i64>,
        /// Field size for the explicit embeddings.
        #[arg(long, default_value_t = 5)]
        q: u64,
        /// Also emit and verify the summand embeddings.
        #[arg(long)]
        embeddings: bool,
    },
    /// Numeric hypothesis checks for the global method.
    Feasibility {
        #[arg(long, value_enum)]
        group: GroupArg,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        h0: Vec<usize>,
        /// Per-block weight lists as JSON, e.g. `[[0,1,2,3]]`.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Emit a random valid paired module.
    Sample {
        #[arg(long, default_value_t = 7)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        f: usize,
        #[arg(long, default_value_t = 1)]
        level: u32,
        #[arg(long, value_enum, default_value = "witt")]
        family: FamilyArg,
        #[arg(long, default_value_t = 1)]
        witt_degree: usize,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        epsilon: i64,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Invalid(String),
    Parse(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        match e {
            ParseError::Json(j) => Failure::Parse(format!("ParseError: {j}")),
            ParseError::Model(m) => Failure::Invalid(m.to_string()),
        }
    }
}

type CmdResult = std::result::Result<String, Failure>;

fn read_document(path: &PathBuf) -> std::result::Result<Document, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("ReadError: {}: {e}", path.display())))?;
    Ok(parse_document(&text)?)
}

fn read_paired(path: &PathBuf) -> std::result::Result<PairedFLModule, Failure> {
    match read_document(path)? {
        Document::Paired(p) => {
            p.validate()?;
            Ok(p)
        }
        Document::Module(m) => {
            m.validate()?;
            Err(Failure::Invalid("MissingPairing: this command needs a pairing block".into()))
        }
    }
}

fn cmd_validate(path: &PathBuf) -> CmdResult {
    let doc = read_document(path)?;
    doc.validate()?;
    Ok(to_canonical(&json!({"valid": true})))
}

fn cmd_lift(path: &PathBuf, depth: u32, family: Family) -> CmdResult {
    let p = read_paired(path)?;
    if depth == 0 {
        return Err(Failure::Invalid("InvalidInput: tower depth must be at least 1".into()));
    }
    let stages = lift_tower(&p, depth, family)?;
    for s in &stages {
        s.validate()?;
    }
    let files: Vec<_> = stages.iter().map(paired_to_file).collect();
    Ok(to_canonical(&files))
}

fn cmd_normalize(path: &PathBuf) -> CmdResult {
    let p = read_paired(path)?;
    let n = normalize_standard(&p)?;
    Ok(to_canonical(&json!({
        "change": n.change.iter().map(matrix_to_json).collect::<Vec<_>>(),
        "module": paired_to_file(&n.normalized),
        "omega": n.omega.iter().map(elem_to_json).collect::<Vec<_>>(),
    })))
}

#[derive(Serialize)]
struct EmbeddingJson {
    s: usize,
    copy: usize,
    lambda: Vec<i64>,
    map: Vec<Vec<Vec<i64>>>,
    verified: bool,
}

fn cmd_tensor(h: Option<usize>, i: Vec<i64>, h2: Option<usize>, i2: Vec<i64>, q: u64, emb: bool) -> CmdResult {
    let a = SimpleSpec::with_period(h.unwrap_or(i.len()), i)?;
    let b = SimpleSpec::with_period(h2.unwrap_or(i2.len()), i2)?;
    let dec = tensor_decompose(&a, &b);
    let mut out = serde_json::to_value(&dec).expect("serializable");
    if emb {
        let field = field_of_order(q)?;
        let (tensor, embs) = all_embeddings(&a, &b, &field)?;
        let items: Vec<EmbeddingJson> = embs
            .iter()
            .map(|e| EmbeddingJson {
                s: e.s,
                copy: e.copy,
                lambda: elem_to_json(&e.lambda),
                map: matrix_to_json(&e.map),
                verified: e.verify(&tensor),
            })
            .collect();
        let invertible = joint_change_of_basis(&embs).is_some_and(|m| m.is_invertible());
        out["embeddings"] = serde_json::to_value(items).expect("serializable");
        out["joint_invertible"] = json!(invertible);
        out["q"] = json!(q);
    }
    Ok(to_canonical(&out))
}

fn cmd_feasibility(
    group: GroupArg,
    m: usize,
    p: u64,
    degree: Option<usize>,
    h0: Vec<usize>,
    weights: Option<String>,
) -> CmdResult {
    let family = match group {
        GroupArg::Gsp => GroupFamily::GSp,
        GroupArg::Go => GroupFamily::GO,
    };
    let weights: Vec<Vec<i64>> = match weights {
        Some(w) => serde_json::from_str(&w).map_err(|e| Failure::Parse(format!("ParseError: --weights: {e}")))?,
        None => Vec::new(),
    };
    let input = FeasInput { group: GroupType::new(family, m)?, p, degree, h0, weights };
    Ok(to_canonical(&feasibility_report(&input)?))
}

#[allow(clippy::too_many_arguments)]
fn cmd_sample(seed: u64, p: u64, f: usize, level: u32, family: Family, fp: usize, r: usize, eps: i64) -> CmdResult {
    let ring = make_ring(family, p, f, level)?;
    let sym = Symmetry::from_sign(eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spread = ((p as i64 - 2) / 2).max(r as i64 - 1);
    let pm = random_paired(&mut rng, &ring, fp, r, sym, spread)?;
    Ok(to_canonical(&document_to_file(&Document::Paired(pm))))
}

fn dispatch(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Lift { path, tower_depth, family } => cmd_lift(&path, tower_depth, family.into()),
        Command::Tangent { path } => {
            let p = read_paired(&path)?;
            Ok(to_canonical(&tangent_report(&p)?))
        }
        Command::Normalize { path } => cmd_normalize(&path),
        Command::TensorSimples { h, i, h2, i2, q, embeddings } => cmd_tensor(h, i, h2, i2, q, embeddings),
        Command::Feasibility { group, m, p, degree, h0, weights } => cmd_feasibility(group, m, p, degree, h0, weights),
        Command::Sample { p, f, level, family, witt_degree, rank, epsilon } => {
            cmd_sample(cli.seed, p, f, level, family.into(), witt_degree, rank, epsilon)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let quiet = cli.quiet;
    let output = cli.output.clone();
    let (code, stdout, stderr) = match dispatch(cli) {
        Ok(mut text) => {
            text.push('\n');
            (0, text, String::new())
        }
        Err(Failure::Invalid(msg)) => (1, String::new(), msg + "\n"),
        Err(Failure::Parse(msg)) => (2, String::new(), msg + "\n"),
    };
    let mut out = Outcome { code, stdout, stderr };
    if let (Some(path), 0) = (output, code) {
        if let Err(e) = std::fs::write(&path, &out.stdout) {
            out = Outcome { code: 2, stdout: String::new(), stderr: format!("WriteError: {}: {e}\n", path.display()) };
        } else {
            out.stdout.clear();
        }
    }
    if quiet {
        out.stderr.clear();
    }
    out
}
