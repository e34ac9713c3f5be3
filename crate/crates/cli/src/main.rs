use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use u21_core::classify::{
    finite_ps_structure, padic_ps_structure, padic_reducibility, Chi1Class, ClassifyError, Level,
    PadicCharDescriptor,
};
use u21_core::grp::{flag_table, special_order_formula_rank2, unitary_group, GrpError};
use u21_core::hecke::{characters_regular, presentation, HeckeError};
use u21_core::meataxe::{chop, endomorphism_algebra, quadratic_parameter, socle_series, MeatAxeError};
use u21_core::modrep::{induced_module, module_read, module_write, torus_character, ModrepError};
use u21_core::verify::{run_desk, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "u21", version, about = "Modular principal series of U(1,1) and U(2,1) over finite fields")]
struct Cli {
    /// Print the JSON object instead of the text rendering
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Group order from the formula and, optionally, by enumeration
    Group {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        enumerate: bool,
    },
    /// Write the principal series module i_B^G(chi) as FMOD
    Induce {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        ell: u32,
        #[arg(long, default_value_t = 0)]
        e1: u64,
        #[arg(long, default_value_t = 0)]
        e2: u64,
        #[arg(long)]
        rank: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Composition factors of an FMOD module
    Chop {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Socle series of an FMOD module
    Socle {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Endomorphism algebra of an FMOD module
    End {
        file: PathBuf,
        /// Also compute the quadratic parameter of a two-dimensional algebra
        #[arg(long)]
        quadratic: bool,
        /// q0 for the quadratic parameter (read from the module label if absent)
        #[arg(long)]
        q0: Option<u32>,
    },
    /// Character table of the two-generator Hecke algebra
    Hecke {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        a: u32,
        /// 0 for characteristic zero
        #[arg(long, default_value_t = 0)]
        ell: u64,
        /// Regular character: Laurent algebra, evaluate the character X -> x
        #[arg(long, allow_hyphen_values = true)]
        regular_at: Option<i64>,
    },
    /// Predicted structure of a principal series
    Classify {
        #[command(subcommand)]
        which: ClassifyCmd,
    },
    /// Run a verification suite
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Desk)]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum ClassifyCmd {
    /// Finite group principal series
    Finite {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 0)]
        e1: u64,
        #[arg(long, default_value_t = 0)]
        e2: u64,
        #[arg(long)]
        rank: usize,
    },
    /// p-adic principal series from a character descriptor
    Padic {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long, value_enum, default_value_t = LevelArg::Zero)]
        level: LevelArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Desk,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Zero,
    Positive,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum ClassArg {
    Trivial,
    DeltaHalf,
    DeltaMinusHalf,
    EtaDeltaQuarter,
    EtaDeltaMinusQuarter,
    UnitaryPullbackNontrivial,
    RegularOther,
}

impl ClassArg {
    fn class(self) -> Chi1Class {
        match self {
            ClassArg::Trivial => Chi1Class::Trivial,
            ClassArg::DeltaHalf => Chi1Class::DeltaHalf,
            ClassArg::DeltaMinusHalf => Chi1Class::DeltaMinusHalf,
            ClassArg::EtaDeltaQuarter => Chi1Class::EtaDeltaQuarter,
            ClassArg::EtaDeltaMinusQuarter => Chi1Class::EtaDeltaMinusQuarter,
            ClassArg::UnitaryPullbackNontrivial => Chi1Class::UnitaryPullbackNontrivial,
            ClassArg::RegularOther => Chi1Class::RegularOther,
        }
    }
}

/// A failure with its exit code and a short machine-readable kind.
struct Failure {
    code: u8,
    kind: &'static str,
    msg: String,
}

impl Failure {
    fn new(code: u8, kind: &'static str, msg: impl ToString) -> Self {
        Failure {
            code,
            kind,
            msg: msg.to_string(),
        }
    }
}

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;

impl From<GrpError> for Failure {
    fn from(e: GrpError) -> Self {
        match e {
            GrpError::EnumerationTooLarge { .. } => Failure::new(10, "enumeration-too-large", e),
            GrpError::ConstructionFailed(_) => Failure::new(12, "internal", e),
            _ => Failure::new(3, "invalid-parameters", e),
        }
    }
}

impl From<ModrepError> for Failure {
    fn from(e: ModrepError) -> Self {
        match e {
            ModrepError::Io(_) => Failure::new(4, "io", e),
            ModrepError::Format { .. } | ModrepError::Invalid(_) => Failure::new(5, "format", e),
            _ => Failure::new(3, "invalid-parameters", e),
        }
    }
}

impl From<MeatAxeError> for Failure {
    fn from(e: MeatAxeError) -> Self {
        match e {
            MeatAxeError::Module(m) => m.into(),
            MeatAxeError::RetryBudgetExceeded { .. } => Failure::new(6, "retry-budget", e),
            _ => Failure::new(11, "meataxe", e),
        }
    }
}

impl From<HeckeError> for Failure {
    fn from(e: HeckeError) -> Self {
        match e {
            HeckeError::NotInvertible(_) => Failure::new(8, "not-invertible", e),
            HeckeError::SubgroupMismatch(_) => Failure::new(9, "mismatched-parameters", e),
            HeckeError::BadParams(_) => Failure::new(3, "invalid-parameters", e),
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::UnsupportedCase(_) => Failure::new(7, "unsupported-case", e),
            ClassifyError::MismatchedParameters(_) => Failure::new(9, "mismatched-parameters", e),
            ClassifyError::BadParams(_) => Failure::new(3, "invalid-parameters", e),
        }
    }
}

/// Text rendering of a JSON object: one `key: value` line per field.
fn render(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, x)| match x {
                Value::String(s) => format!("{k}: {s}"),
                _ => format!("{k}: {x}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        _ => v.to_string(),
    }
}

fn q0_from_label(label: &str) -> Option<u32> {
    label
        .split(',')
        .map(str::trim)
        .find_map(|p| p.strip_prefix("q0="))
        .and_then(|s| s.parse().ok())
}

fn run(cmd: Cmd) -> Result<(Value, u8), Failure> {
    let out = match cmd {
        Cmd::Group { q, rank, enumerate } => {
            let g = unitary_group(q, rank)?;
            let mut v = json!({
                "q0": q,
                "rank": rank,
                "order_formula": g.order_formula(),
                "flags": flag_table(&g).len(),
                "generators": g.generator_names(),
            });
            if rank == 2 {
                v["order_formula_special"] = json!(special_order_formula_rank2(q as u64));
            }
            if enumerate {
                let n = g.enumerate_order()?;
                v["order_bfs"] = json!(n);
                v["agree"] = json!(n == g.order_formula());
            }
            v
        }
        Cmd::Induce { q, ell, e1, e2, rank, output } => {
            let g = unitary_group(q, rank)?;
            let t = flag_table(&g);
            let chi = torus_character(q, e1, e2, ell)?;
            let m = induced_module(&g, &t, &chi)?;
            module_write(&m, &output)?;
            json!({
                "file": output.display().to_string(),
                "dim": m.dim(),
                "field": [m.field().characteristic(), m.field().degree()],
                "generators": m.gens().len(),
                "label": m.label(),
            })
        }
        Cmd::Chop { file, seed } => chop(&module_read(file)?, seed)?.to_json(),
        Cmd::Socle { file, seed } => socle_series(&module_read(file)?, seed)?.to_json(),
        Cmd::End { file, quadratic, q0 } => {
            let m = module_read(file)?;
            let e = endomorphism_algebra(&m)?;
            let mut v = e.to_json();
            if quadratic {
                let q0 = q0.or_else(|| q0_from_label(m.label())).ok_or_else(|| {
                    Failure::new(EXIT_USAGE, "usage", "--q0 is required when the label has no q0")
                })?;
                v["quadratic"] = quadratic_parameter(&e, &m, q0)?.to_json();
            }
            v
        }
        Cmd::Hecke { q, a, ell, regular_at } => match regular_at {
            Some(x) => {
                let l = characters_regular(q, ell)?;
                let mut v = l.to_json();
                v["x"] = json!(x);
                v["value"] = json!(l.character_at(x)?);
                v
            }
            None => presentation(q, a, ell)?.to_json(),
        },
        Cmd::Classify { which } => match which {
            ClassifyCmd::Finite { q, ell, e1, e2, rank } => {
                let mut v = finite_ps_structure(q, ell, e1, e2, rank)?.to_json();
                v["input"] = json!({"q": q, "ell": ell, "e1": e1, "e2": e2, "rank": rank});
                v
            }
            ClassifyCmd::Padic { q, ell, class, level } => {
                let d = PadicCharDescriptor {
                    level: match level {
                        LevelArg::Zero => Level::Zero,
                        LevelArg::Positive => Level::Positive,
                    },
                    chi1_class: class.class(),
                    chi2_absorbed: true,
                    q,
                    ell,
                };
                let verdict = padic_reducibility(&d)?;
                let mut v = padic_ps_structure(&d)?.to_json();
                v["descriptor"] = d.to_json();
                v["verdict"] = verdict.to_json();
                v
            }
        },
        Cmd::Verify { suite: Suite::Desk, seed } => {
            let r = run_desk(seed);
            let code = if r.all_pass() { 0 } else { EXIT_MISMATCH };
            return Ok((r.to_json(), code));
        }
    };
    Ok((out, 0))
}

fn verify_text(v: &Value) -> String {
    let mut lines = vec![format!("suite: desk, seed: {}", v["seed"])];
    for c in v["criteria"].as_array().into_iter().flatten() {
        let pass = c["pass"].as_bool().unwrap_or(false);
        lines.push(format!(
            "{} {}: {}",
            if pass { "PASS" } else { "FAIL" },
            c["id"].as_str().unwrap_or(""),
            c["title"].as_str().unwrap_or("")
        ));
        for m in c["mismatches"].as_array().into_iter().flatten() {
            lines.push(format!("  - {}", m.as_str().unwrap_or("")));
        }
    }
    lines.join("\n")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error: usage: {first}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let is_verify = matches!(cli.cmd, Cmd::Verify { .. });
    match run(cli.cmd) {
        Ok((v, code)) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&v).expect("JSON values serialize")
            } else if is_verify {
                verify_text(&v)
            } else {
                render(&v)
            };
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}: {}", f.kind, f.msg.replace('\n', " "));
            ExitCode::from(f.code)
        }
    }
}
