//! The `qcl2hol` command line: argument parsing, runs and reports.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::corpus::{corpus, Alphabet};
use crate::embedding::{embed, embed_kernel, EmbedError, EmbeddingEnv};
use crate::semantics::format::{parse_prop_domains, write_assignment, write_countermodel, write_model, FormatError};
use crate::semantics::{valid_up_to, Bounds, BoundsError, QMode, SemanticsError, Verdict};
use crate::sweep::{correspondence_sweep, hol_validity_count, rule_sweep, validity_sweep, SweepError};
use crate::syntax::{parse_with_signature, pretty_qcl, desugar, Formula, ParseError, ParseOptions, Signature, SignatureError};
use crate::thf::{emit_axioms, emit_problem, render, Mode, ThfError, AXIOM_FILE};

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Countermodel = 1,
    Disagreement = 2,
    ResourceLimit = 3,
    Usage = 64,
    Data = 65,
    Io = 74,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("formula: {0}")]
    Parse(#[from] ParseError),
    #[error("signature: {0}")]
    Signature(#[from] SignatureError),
    #[error("Q file: {0}")]
    Format(#[from] FormatError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Thf(#[from] ThfError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

fn is_resource_limit(e: &BoundsError) -> bool {
    matches!(e, BoundsError::ResourceLimit { .. } | BoundsError::TooManyWorlds { .. })
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Usage(_) => Status::Usage,
            CliError::Io { .. } => Status::Io,
            CliError::Semantics(SemanticsError::Bounds(b)) | CliError::Sweep(SweepError::Bounds(b)) => {
                match is_resource_limit(b) {
                    true => Status::ResourceLimit,
                    false => Status::Usage,
                }
            }
            _ => Status::Data,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum QModeArg {
    #[default]
    Powerset,
    File,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    #[default]
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "qcl2hol", version, about = "Quantified conditional logic in classical higher-order logic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Signature file with `pred <name> <arity>` lines; without it predicates
    /// are declared by their first use.
    #[arg(long, global = true)]
    pub sig: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 2)]
    pub worlds: usize,
    #[arg(long, global = true, default_value_t = 2)]
    pub individuals: usize,
    /// Exhaustive corpus depth; samples are one level deeper.
    #[arg(long, global = true, default_value_t = 2)]
    pub depth: usize,
    #[arg(long, global = true, value_enum, default_value_t)]
    pub q_mode: QModeArg,
    /// Lines `<worlds>: <mask> ...` giving Q per world count, for `--q-mode file`.
    #[arg(long, global = true)]
    pub q_file: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t)]
    pub format: ReportFormat,
}

#[derive(Debug, Clone, Args)]
pub struct Input {
    /// Formula text.
    pub formula: Option<String>,
    /// Read the formula from a file instead.
    #[arg(long, conflicts_with = "formula")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Print the combinator and kernel forms of a formula.
    Translate(Input),
    /// Write the axiom file and a problem file for a formula.
    Emit {
        #[command(flatten)]
        input: Input,
        /// Problem name; the file is `<name>.p`.
        #[arg(long, default_value = "problem")]
        name: String,
    },
    /// Search the bounded models for a countermodel.
    Validate(Input),
    /// Compare the two semantics over the bounded models and a formula corpus.
    Correspond {
        /// Check this formula alone instead of the corpus.
        formula: Option<String>,
        /// Seeded formulas one level deeper than `--depth`.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Check the rule schemata on the standard instance battery.
    Rules,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Translate(_) => "translate",
            Command::Emit { .. } => "emit",
            Command::Validate(_) => "validate",
            Command::Correspond { .. } => "correspond",
            Command::Rules => "rules",
        }
    }
}

/// The outcome of one command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub status: Status,
    pub verdict: String,
    pub config: Vec<(String, String)>,
    pub fields: Vec<(String, String)>,
    pub body: Option<String>,
}

impl Report {
    pub fn render(&self, format: ReportFormat) -> String {
        let mut out = String::new();
        match format {
            ReportFormat::Structured => {
                for (k, v) in self.config.iter().chain(&self.fields) {
                    let _ = writeln!(out, "{k}: {v}");
                }
                let _ = writeln!(out, "verdict: {}", self.verdict);
                let _ = writeln!(out, "exit: {}", self.status.code());
                if let Some(body) = &self.body {
                    out.push_str("detail:\n");
                    for line in body.lines() {
                        let _ = writeln!(out, "  {line}");
                    }
                }
            }
            ReportFormat::Text => {
                let _ = writeln!(out, "{}", self.verdict);
                let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.fields {
                    let _ = writeln!(out, "  {k:<width$}  {v}");
                }
                let config: Vec<String> = self.config.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = writeln!(out, "  ({})", config.join(" "));
                if let Some(body) = &self.body {
                    out.push('\n');
                    out.push_str(body);
                }
            }
        }
        out
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn one_line(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

struct Run<'o> {
    options: &'o Options,
    command: &'static str,
}

impl Run<'_> {
    fn bounds(&self) -> Result<Bounds, CliError> {
        if self.options.worlds == 0 || self.options.individuals == 0 {
            return Err(CliError::Usage("--worlds and --individuals must be positive".into()));
        }
        let q_mode = match (self.options.q_mode, &self.options.q_file) {
            (QModeArg::Powerset, None) => QMode::Powerset,
            (QModeArg::Powerset, Some(_)) => return Err(CliError::Usage("--q-file needs --q-mode file".into())),
            (QModeArg::File, None) => return Err(CliError::Usage("--q-mode file needs --q-file".into())),
            (QModeArg::File, Some(path)) => QMode::Explicit(parse_prop_domains(&read(path)?)?),
        };
        Ok(Bounds::new(self.options.worlds, self.options.individuals).with_q_mode(q_mode))
    }

    /// The surface formula and the signature it is read against.
    fn formula(&self, input: &Input) -> Result<(Formula, Signature), CliError> {
        let text = match (&input.formula, &input.input) {
            (Some(text), _) => text.clone(),
            (None, Some(path)) => read(path)?,
            (None, None) => return Err(CliError::Usage("give a formula or --input <file>".into())),
        };
        let (sig, infer) = match &self.options.sig {
            Some(path) => (Signature::parse(&read(path)?)?, false),
            None => (Signature::new(), true),
        };
        let options = ParseOptions {
            infer_predicates: infer,
            ..Default::default()
        };
        Ok(parse_with_signature(text.trim(), &sig, options)?)
    }

    fn config(&self, extra: &[(&str, String)]) -> Vec<(String, String)> {
        let o = self.options;
        let mut config = vec![
            ("command".to_owned(), self.command.to_owned()),
            ("seed".to_owned(), o.seed.to_string()),
            ("worlds".to_owned(), o.worlds.to_string()),
            ("individuals".to_owned(), o.individuals.to_string()),
            ("depth".to_owned(), o.depth.to_string()),
            (
                "q_mode".to_owned(),
                match &o.q_file {
                    Some(path) if o.q_mode == QModeArg::File => format!("file:{}", path.display()),
                    _ => "powerset".to_owned(),
                },
            ),
        ];
        if let Some(sig) = &o.sig {
            config.push(("sig".to_owned(), sig.display().to_string()));
        }
        config.extend(extra.iter().map(|(k, v)| ((*k).to_owned(), v.clone())));
        config
    }

    fn translate(&self, input: &Input) -> Result<Report, CliError> {
        let (formula, sig) = self.formula(input)?;
        let env = EmbeddingEnv::new(&sig);
        let combinator = embed(&formula, &env)?;
        let kernel = embed_kernel(&desugar(&formula), &env)?;
        let ty = combinator.type_of().map_err(ThfError::from)?;
        Ok(Report {
            status: Status::Ok,
            verdict: "translated".into(),
            config: self.config(&[("formula", pretty_qcl(&formula))]),
            fields: vec![
                ("type".into(), crate::thf::render_type(&ty)),
                ("combinator".into(), one_line(&render(&combinator, Mode::Combinator)?)),
                ("kernel".into(), one_line(&render(&kernel, Mode::Kernel)?)),
            ],
            body: None,
        })
    }

    fn emit(&self, input: &Input, name: &str) -> Result<Report, CliError> {
        let (formula, sig) = self.formula(input)?;
        let problem = emit_problem(&formula, name, &sig)?;
        let axioms = emit_axioms();
        let checked = problem.check()?;
        let dir = &self.options.out;
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.clone(),
            source,
        })?;
        let axiom_path = dir.join(AXIOM_FILE);
        let problem_path = dir.join(format!("{name}.p"));
        write(&axiom_path, axioms.text())?;
        write(&problem_path, problem.text())?;
        Ok(Report {
            status: Status::Ok,
            verdict: "written".into(),
            config: self.config(&[("formula", pretty_qcl(&formula)), ("out", dir.display().to_string())]),
            fields: vec![
                ("axioms".into(), axiom_path.display().to_string()),
                ("problem".into(), problem_path.display().to_string()),
                ("declarations".into(), problem.declarations().len().to_string()),
                ("checked_types".into(), checked.types.to_string()),
                ("checked_definitions".into(), checked.definitions.to_string()),
            ],
            body: None,
        })
    }

    fn validate(&self, input: &Input) -> Result<Report, CliError> {
        let (surface, _) = self.formula(input)?;
        let formula = desugar(&surface);
        let bounds = self.bounds()?;
        let config = self.config(&[("formula", pretty_qcl(&surface))]);
        match valid_up_to(&formula, &bounds)? {
            Verdict::Countermodel(cm) => Ok(Report {
                status: Status::Countermodel,
                verdict: "countermodel".into(),
                config,
                fields: vec![("world".into(), cm.world.0.to_string())],
                body: Some(write_countermodel(&cm)),
            }),
            Verdict::Valid { models } => {
                let hol = hol_validity_count(&formula, &bounds)?;
                let agree = hol.models == models && hol.valid == models;
                Ok(Report {
                    status: if agree { Status::Ok } else { Status::Disagreement },
                    verdict: if agree { "valid-within-bounds" } else { "disagreement" }.into(),
                    config,
                    fields: vec![
                        ("models".into(), models.to_string()),
                        ("hol_models".into(), hol.models.to_string()),
                        ("hol_valid".into(), hol.valid.to_string()),
                    ],
                    body: None,
                })
            }
        }
    }

    fn correspond(&self, formula: Option<&str>, samples: usize) -> Result<Report, CliError> {
        let bounds = self.bounds()?;
        let (formulas, extra) = match formula {
            Some(text) => {
                let input = Input {
                    formula: Some(text.to_owned()),
                    input: None,
                };
                let (f, _) = self.formula(&input)?;
                (vec![desugar(&f)], vec![("formula", pretty_qcl(&f))])
            }
            None => (
                corpus(self.options.depth, samples, self.options.seed, &Alphabet::default()),
                vec![("samples", samples.to_string())],
            ),
        };
        let points = correspondence_sweep(&formulas, &bounds)?;
        let validity = validity_sweep(&formulas, &bounds)?;
        let disagreements = points.disagreements + validity.disagreements;
        let mut body = String::new();
        for d in &points.examples {
            let _ = writeln!(
                body,
                "point: {} at world {} (qcl {}, hol {})",
                pretty_qcl(&d.formula),
                d.world.0,
                d.sides.qcl,
                d.sides.hol
            );
            body.push_str(&write_model(&d.model));
            body.push_str(&write_assignment(&d.assignment));
        }
        for d in &validity.examples {
            let _ = writeln!(
                body,
                "validity: {} (qcl {}, hol {})",
                pretty_qcl(&d.formula),
                d.qcl_valid,
                d.hol_valid
            );
            body.push_str(&write_model(&d.model));
        }
        let extra: Vec<(&str, String)> = extra.into_iter().collect();
        Ok(Report {
            status: if disagreements == 0 { Status::Ok } else { Status::Disagreement },
            verdict: if disagreements == 0 { "agreement" } else { "disagreement" }.into(),
            config: self.config(&extra),
            fields: vec![
                ("formulas".into(), points.formulas.to_string()),
                ("structures".into(), points.structures.to_string()),
                ("points".into(), points.points.to_string()),
                ("point_disagreements".into(), points.disagreements.to_string()),
                ("validity_pairs".into(), validity.pairs.to_string()),
                ("validity_disagreements".into(), validity.disagreements.to_string()),
            ],
            body: (!body.is_empty()).then_some(body),
        })
    }

    fn rules(&self) -> Result<Report, CliError> {
        let bounds = self.bounds()?;
        let summaries = rule_sweep(&crate::semantics::standard_battery(), &bounds)?;
        let violations: u128 = summaries.iter().map(|s| s.violations).sum();
        let fields = summaries
            .iter()
            .map(|s| {
                (
                    format!("{}.{}", s.instance.rule, s.instance.label),
                    format!(
                        "models={} premise_valid={} violations={}",
                        s.models, s.premise_valid, s.violations
                    ),
                )
            })
            .collect();
        Ok(Report {
            status: if violations == 0 { Status::Ok } else { Status::Disagreement },
            verdict: if violations == 0 { "preserved" } else { "violated" }.into(),
            config: self.config(&[("instances", summaries.len().to_string())]),
            fields,
            body: None,
        })
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let run = Run {
        options: &cli.options,
        command: cli.command.name(),
    };
    match &cli.command {
        Command::Translate(input) => run.translate(input),
        Command::Emit { input, name } => run.emit(input, name),
        Command::Validate(input) => run.validate(input),
        Command::Correspond { formula, samples } => run.correspond(formula.as_deref(), *samples),
        Command::Rules => run.rules(),
    }
}

/// Parses `args`, runs, and writes the report or error. Returns the exit code.
pub fn main_with<I, T>(args: I, stdout: &mut impl io::Write, stderr: &mut impl io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Status::Usage.code() } else { 0 };
            let sink: &mut dyn io::Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match run(&cli) {
        Ok(report) => {
            let _ = write!(stdout, "{}", report.render(cli.options.format));
            report.status.code()
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.status().code()
        }
    }
}
