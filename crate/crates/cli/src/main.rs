use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use parikh_core::binary_decomposition::{decompose_binary, DecomposeMode};
use parikh_core::matrix::{psi, UnitriangularMatrix};
use parikh_core::matrix_normal::Decomposer;
use parikh_core::mequivalence::{
    class_of_matrix, conjecture_scan, equivalence_class, scan_to_csv, scan_to_json_lines,
};
use parikh_core::powers::{
    binary_power_is_parikh, matrix_power_closed_form, matrix_root, min_power_to_parikh,
};
use parikh_core::verify::{run_suites, Suite};
use parikh_core::word_normal::{maximal_words, pn_r};
use parikh_core::words::{
    count_subword, is_square_free, OrderedAlphabet, Word, DEFAULT_ENUM_BOUND,
};
use parikh_core::Error;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "parikh",
    version,
    about = "Parikh matrices, M-equivalence and rl-Parikh normal forms"
)]
struct Cli {
    /// Ordered alphabet as a comma-separated list, e.g. `a,b,c`. Inferred when omitted.
    #[arg(long, global = true)]
    alphabet: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,

    /// Longest word that exhaustive enumeration may produce.
    #[arg(long, global = true, env = "PARIKH_ENUM_BOUND", default_value_t = DEFAULT_ENUM_BOUND as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    enum_bound: u64,

    /// Write the result to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Faithful,
    Complete,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    #[value(alias = "thm2_2")]
    SubwordEntries,
    #[value(alias = "thm3_1")]
    ClosedFormPowers,
    #[value(alias = "thm3_7")]
    Roots,
    #[value(alias = "prop3_4")]
    BinaryPowerMembership,
    #[value(alias = "prop3_8")]
    ClassPowerInequality,
    #[value(alias = "thm4_7")]
    UnambiguousUniqueForm,
    #[value(alias = "thm4_9")]
    PrimitiveSquareFree,
    #[value(alias = "thm5_6")]
    MaximalLift,
    #[value(alias = "thm5_8")]
    FormReconstruction,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Number of occurrences of `v` as a scattered subword of `w`.
    Count {
        #[arg(short)]
        w: String,
        #[arg(short)]
        v: String,
    },
    /// Parikh matrix of a word.
    Matrix {
        #[arg(short)]
        w: String,
    },
    /// `M^m` by the closed form.
    Power {
        #[arg(short = 'M')]
        matrix: String,
        #[arg(short, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
    },
    /// The unitriangular `m`-th root of a matrix, or `none`.
    Root {
        #[arg(short = 'M')]
        matrix: String,
        #[arg(short, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
    },
    /// Whether a 3x3 matrix power is Parikh, or the least such power.
    PowerParikh {
        #[arg(short = 'M')]
        matrix: String,
        #[arg(short, value_parser = clap::value_parser!(u64).range(1..), required_unless_present = "min", conflicts_with = "min")]
        m: Option<u64>,
        #[arg(long)]
        min: bool,
    },
    /// Members of the M-equivalence class of a word.
    Class {
        #[arg(short)]
        w: String,
    },
    /// rl-Parikh normal form of a word.
    NormalizeWord {
        #[arg(short)]
        w: String,
    },
    /// All rl-Parikh normal forms of a Parikh matrix.
    NormalizeMatrix {
        #[arg(short = 'M')]
        matrix: String,
    },
    /// Binary right power decompositions `M = A·B^n` at the largest `n`.
    #[command(alias = "algorithm1")]
    Decompose {
        #[arg(short = 'M')]
        matrix: String,
        #[arg(long, value_enum, default_value_t = Mode::Complete)]
        mode: Mode,
    },
    /// Whether a Parikh matrix is primitive, with the square-freeness of its words.
    Primitive {
        #[arg(short = 'M')]
        matrix: String,
    },
    /// The `≺`-maximal members of the class of a word.
    Maximal {
        #[arg(short)]
        w: String,
    },
    /// Compares `|C_{w^m}|` with `|C_w|^m` over all classes up to a length.
    ScanConjecture {
        #[arg(short, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        #[arg(long)]
        max_len: usize,
    },
    /// Runs exhaustive self-check suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidAlphabet(_) | Error::UnknownLetter(_) | Error::InvalidMatrix(_) => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Compute(e),
        }
    }
}

/// Rendered output plus whether it reports a failed check.
struct Rendered {
    body: String,
    failed: bool,
}

impl From<String> for Rendered {
    fn from(body: String) -> Self {
        Rendered {
            body,
            failed: false,
        }
    }
}

fn big_json(x: &num_bigint::BigUint) -> Value {
    use num_traits::ToPrimitive;
    match x.to_u64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn matrix_json(m: &UnitriangularMatrix) -> Value {
    serde_json::to_value(m).expect("matrices serialize")
}

fn parse_matrix(text: &str) -> Result<UnitriangularMatrix, Failure> {
    let text = text.trim();
    if text.starts_with('{') {
        serde_json::from_str(text).map_err(|e| Failure::Usage(format!("invalid matrix JSON: {e}")))
    } else {
        Ok(text.parse()?)
    }
}

struct Ctx {
    alphabet: Option<OrderedAlphabet>,
    json: bool,
    bound: usize,
}

impl Ctx {
    /// The given alphabet, or the sorted letters of the words.
    fn word_alphabet(&self, words: &[&str]) -> Result<OrderedAlphabet, Failure> {
        if let Some(a) = &self.alphabet {
            return Ok(a.clone());
        }
        let letters: BTreeSet<char> = words
            .iter()
            .filter(|w| w.trim() != parikh_core::words::EMPTY_WORD)
            .flat_map(|w| w.trim().chars())
            .collect();
        if letters.is_empty() {
            return Err(Failure::Usage(
                "cannot infer an alphabet from the empty word; pass --alphabet".into(),
            ));
        }
        Ok(OrderedAlphabet::new(letters.into_iter().collect())?)
    }

    /// The given alphabet, checked against the matrix size, or `a, b, ...`.
    fn matrix_alphabet(&self, m: &UnitriangularMatrix) -> Result<OrderedAlphabet, Failure> {
        match &self.alphabet {
            Some(a) if a.size() + 1 != m.dim() => Err(Error::DimensionMismatch {
                expected: a.size() + 1,
                found: m.dim(),
            }
            .into()),
            Some(a) => Ok(a.clone()),
            None => Ok(OrderedAlphabet::latin(m.dim() - 1)?),
        }
    }

    fn word(&self, alphabet: &OrderedAlphabet, text: &str) -> Result<Word, Failure> {
        Ok(alphabet.parse_word(text)?)
    }

    fn emit(&self, text: String, value: Value) -> String {
        if self.json {
            value.to_string() + "\n"
        } else {
            text + "\n"
        }
    }
}

fn run(cmd: Command, ctx: &Ctx) -> Result<Rendered, Failure> {
    let out = match cmd {
        Command::Count { w, v } => {
            let s = ctx.word_alphabet(&[&w, &v])?;
            let n = count_subword(&ctx.word(&s, &w)?, &ctx.word(&s, &v)?);
            ctx.emit(n.to_string(), json!({ "count": big_json(&n) }))
        }
        Command::Matrix { w } => {
            let s = ctx.word_alphabet(&[&w])?;
            let m = psi(&s, &ctx.word(&s, &w)?);
            ctx.emit(m.to_string(), matrix_json(&m))
        }
        Command::Power { matrix, m } => {
            let p = matrix_power_closed_form(&parse_matrix(&matrix)?, m)?;
            ctx.emit(p.to_string(), matrix_json(&p))
        }
        Command::Root { matrix, m } => match matrix_root(&parse_matrix(&matrix)?, m)? {
            Some(r) => ctx.emit(r.to_string(), matrix_json(&r)),
            None => ctx.emit("none".into(), Value::Null),
        },
        Command::PowerParikh { matrix, m, min } => {
            let x = parse_matrix(&matrix)?;
            if min {
                match min_power_to_parikh(&x)? {
                    Some(p) => ctx.emit(
                        p.m.to_string(),
                        json!({ "min_power": big_json(&p.m), "identity": p.identity }),
                    ),
                    None => ctx.emit(
                        "none".into(),
                        json!({ "min_power": null, "identity": false }),
                    ),
                }
            } else {
                let m = m.expect("clap requires -m without --min");
                let parikh = binary_power_is_parikh(&x, m)?;
                ctx.emit(parikh.to_string(), json!({ "m": m, "parikh": parikh }))
            }
        }
        Command::Class { w } => {
            let s = ctx.word_alphabet(&[&w])?;
            let class = equivalence_class(&s, &ctx.word(&s, &w)?, ctx.bound)?;
            let members: Vec<String> = class.members.iter().map(|x| s.render(x)).collect();
            ctx.emit(
                members.join("\n"),
                json!({ "matrix": matrix_json(&class.matrix), "size": members.len(), "members": members }),
            )
        }
        Command::NormalizeWord { w } => {
            let s = ctx.word_alphabet(&[&w])?;
            let nf = pn_r(&ctx.word(&s, &w)?)?;
            ctx.emit(nf.render(&s), nf.to_json(&s))
        }
        Command::NormalizeMatrix { matrix } => {
            let m = parse_matrix(&matrix)?;
            let s = ctx.matrix_alphabet(&m)?;
            let mut d = Decomposer::new(&s, ctx.bound);
            let forms = d.normal_forms(&m)?;
            let rendered: Vec<String> = forms.iter().map(|f| d.render_form(f)).collect();
            ctx.emit(
                rendered.join("\n"),
                json!({ "forms": serde_json::to_value(forms.as_ref()).expect("forms serialize"), "rendered": rendered }),
            )
        }
        Command::Decompose { matrix, mode } => {
            let mode = match mode {
                Mode::Faithful => DecomposeMode::Faithful,
                Mode::Complete => DecomposeMode::Complete,
            };
            let sols = decompose_binary(&parse_matrix(&matrix)?, mode)?;
            let text: Vec<String> = sols
                .iter()
                .map(|z| {
                    format!(
                        "n={} p={} q={} r={} x={} y={} z={}",
                        z.n, z.p, z.q, z.r, z.x, z.y, z.z
                    )
                })
                .collect();
            ctx.emit(text.join("\n"), json!({ "solutions": sols }))
        }
        Command::Primitive { matrix } => {
            let m = parse_matrix(&matrix)?;
            let s = ctx.matrix_alphabet(&m)?;
            let primitive = Decomposer::new(&s, ctx.bound).is_primitive(&m)?;
            let members = class_of_matrix(&s, &m, ctx.bound)?.members;
            let mut text = vec![primitive.to_string()];
            let mut evidence = Vec::new();
            for w in &members {
                let sf = is_square_free(w);
                text.push(format!(
                    "{} {}",
                    s.render(w),
                    if sf { "square-free" } else { "has-square" }
                ));
                evidence.push(json!({ "word": s.render(w), "square_free": sf }));
            }
            ctx.emit(
                text.join("\n"),
                json!({ "primitive": primitive, "words": evidence }),
            )
        }
        Command::Maximal { w } => {
            let s = ctx.word_alphabet(&[&w])?;
            let word = ctx.word(&s, &w)?;
            let class = equivalence_class(&s, &word, ctx.bound)?;
            let mut text = Vec::new();
            let mut items = Vec::new();
            for x in maximal_words(&class) {
                let form = if x.is_empty() {
                    parikh_core::words::EMPTY_WORD.to_string()
                } else {
                    pn_r(&x)?.render(&s)
                };
                text.push(format!("{} {}", s.render(&x), form));
                items.push(json!({ "word": s.render(&x), "normal_form": form }));
            }
            ctx.emit(text.join("\n"), json!({ "maximal": items }))
        }
        Command::ScanConjecture { m, max_len } => {
            let s = match &ctx.alphabet {
                Some(a) => a.clone(),
                None => OrderedAlphabet::latin(3)?,
            };
            let rows = conjecture_scan(&s, m as usize, max_len, ctx.bound)?;
            if ctx.json {
                scan_to_json_lines(&rows)
            } else {
                scan_to_csv(&rows)
            }
        }
        Command::Verify { suite, max_len } => {
            let suites: Vec<Suite> = match suite {
                SuiteArg::All => Suite::ALL.to_vec(),
                one => vec![Suite::ALL[one as usize]],
            };
            let reports = run_suites(&suites, max_len, ctx.bound)?;
            let failed = reports.iter().any(|r| !r.pass());
            let text: Vec<String> = reports
                .iter()
                .map(|r| {
                    let mut line = format!(
                        "{} {} cases={} violations={}",
                        r.suite.name(),
                        if r.pass() { "PASS" } else { "FAIL" },
                        r.cases,
                        r.violations
                    );
                    for f in &r.failures {
                        line.push_str(&format!("\n  {f}"));
                    }
                    line
                })
                .collect();
            let value = json!({
                "max_len": max_len,
                "suites": reports.iter().map(|r| json!({
                    "suite": r.suite.name(),
                    "pass": r.pass(),
                    "cases": r.cases,
                    "violations": r.violations,
                    "failures": r.failures,
                })).collect::<Vec<_>>(),
            });
            return Ok(Rendered {
                body: ctx.emit(text.join("\n"), value),
                failed,
            });
        }
    };
    Ok(out.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let alphabet = match cli
        .alphabet
        .as_deref()
        .map(OrderedAlphabet::parse)
        .transpose()
    {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let ctx = Ctx {
        alphabet,
        json: cli.output == Output::Json,
        bound: cli.enum_bound as usize,
    };
    match run(cli.command, &ctx) {
        Ok(r) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &r.body),
                None => {
                    print!("{}", r.body);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(1);
            }
            if r.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
