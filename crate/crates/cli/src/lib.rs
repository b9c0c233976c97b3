//! Command-line front end: argument parsing, configuration, and report rendering.

pub mod commands;
pub mod suite;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use qnil_core::cartan::{parse_word, CartanData, Word};
use qnil_core::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "qnil", version, about = "Exact computations in quantum unipotent groups and their quantum tori")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Degree cap for common multiples in fraction arithmetic.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..), global = true)]
    pub ore_cap: Option<u32>,
    /// Directory of the persistent component cache.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CartanArg {
    /// JSON file {"A": [[int]], "d": [int]}.
    #[arg(long)]
    pub cartan: PathBuf,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Bialgebra pairing of two words.
    Pair {
        #[command(flatten)]
        cartan: CartanArg,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Graded component of the quotient by the pairing radical.
    Component {
        #[command(flatten)]
        cartan: CartanArg,
        /// Degree as comma-separated multiplicities of the simple roots.
        #[arg(long)]
        gamma: String,
    },
    /// Image of a dual element in the quantum torus of a word.
    Feigin {
        #[command(flatten)]
        cartan: CartanArg,
        #[arg(long)]
        word: String,
        /// A generator `x<i>` or a word `i,j,...` standing for its dual functional.
        #[arg(long)]
        x: String,
    },
    /// Certifies the group-like property of the ordered exponential.
    Grouplike {
        #[command(flatten)]
        cartan: CartanArg,
        #[arg(long)]
        word: String,
        #[arg(long)]
        degree: u32,
        /// One scalar per letter, in order; all ones when omitted.
        #[arg(long)]
        scalar: Vec<String>,
    },
    /// Kernel of the evaluation map in one degree.
    Kernel {
        #[command(flatten)]
        cartan: CartanArg,
        #[arg(long)]
        word: String,
        #[arg(long)]
        gamma: String,
    },
    /// Checks that the canonical element is the pushed group-like element.
    Universal {
        #[command(flatten)]
        cartan: CartanArg,
        #[arg(long)]
        word: String,
        #[arg(long)]
        degree: u32,
    },
    /// Images of the target generators as fractions over the source torus.
    Transition {
        #[command(flatten)]
        cartan: CartanArg,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Compares both sides of the exponential identity through a height.
    VerifyIdentity {
        #[command(flatten)]
        cartan: CartanArg,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        degree: u32,
        /// One rescaling per simple root; all ones when omitted.
        #[arg(long)]
        scalar: Vec<String>,
    },
    /// Congruence normal form of the skew form of a word.
    Skewform {
        #[command(flatten)]
        cartan: CartanArg,
        #[arg(long)]
        word: String,
        /// A second word whose form is tested for congruence.
        #[arg(long)]
        other: Option<String>,
    },
    /// Extremal vector of a weight along a reduced word.
    Extremal {
        #[command(flatten)]
        cartan: CartanArg,
        #[arg(long)]
        word: String,
        #[arg(long)]
        lambda: String,
        /// Also verify the action relations through this height.
        #[arg(long)]
        relations: Option<u32>,
    },
    /// Matrix coefficients of the natural representation in type A.
    Typea {
        #[command(flatten)]
        cartan: CartanArg,
        /// Word whose elementary product is compared with the evaluated matrix.
        #[arg(long)]
        word: Option<String>,
        /// Height for comparing the matrix with the pushed universal element.
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Expresses each torus generator through images of dual elements.
    Inverse {
        #[command(flatten)]
        cartan: CartanArg,
        #[arg(long)]
        word: String,
        /// Dominant weight for the extremal vectors; all ones when omitted.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Runs the acceptance criteria.
    Suite {
        /// Comma-separated criterion numbers; all when omitted.
        #[arg(long)]
        only: Option<String>,
    },
}

/// Settings shared by every subcommand, validated against the Cartan data.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub cartan: Option<PathBuf>,
    pub words: Vec<Word>,
    pub lambda: Option<Vec<i64>>,
    pub degree: Option<u32>,
    pub ore_cap: usize,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
}

/// Exit status and rendered output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A rendered result; `passed` is false when a mathematical check failed.
pub struct Report {
    pub passed: bool,
    pub text: String,
    pub json: Value,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::Parse(_)
                | Error::IndexOutOfRange { .. }
                | Error::InvalidCartan(_)
                | Error::NotReduced(_)
                | Error::NotSameElement(..)
                | Error::SizeMismatch(..)
                | Error::NotTypeA
                | Error::DegenerateWeight(_)
                | Error::UnsupportedOrder(_) => 2,
                _ => 1,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

pub fn parse_list<T: std::str::FromStr>(flag: &str, s: &str) -> Result<Vec<T>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| CliError::Usage(format!("--{}: cannot parse '{}'", flag, x.trim()))))
        .collect()
}

fn parse_flag_word(flag: &str, s: &str) -> Result<Word, CliError> {
    parse_word(s).map_err(|e| CliError::Usage(format!("--{}: {}", flag, e)))
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let mut words = Vec::new();
        let mut lambda = None;
        let mut degree = None;
        let cartan = match &cli.command {
            Command::Pair { cartan, u, v } => {
                words.push(parse_flag_word("u", u)?);
                words.push(parse_flag_word("v", v)?);
                Some(cartan)
            }
            Command::Component { cartan, .. } => Some(cartan),
            Command::Feigin { cartan, word, .. } | Command::Kernel { cartan, word, .. } => {
                words.push(parse_flag_word("word", word)?);
                Some(cartan)
            }
            Command::Grouplike { cartan, word, degree: d, .. } | Command::Universal { cartan, word, degree: d } => {
                words.push(parse_flag_word("word", word)?);
                degree = Some(*d);
                Some(cartan)
            }
            Command::Transition { cartan, from, to } => {
                words.push(parse_flag_word("from", from)?);
                words.push(parse_flag_word("to", to)?);
                Some(cartan)
            }
            Command::VerifyIdentity { cartan, from, to, degree: d, .. } => {
                words.push(parse_flag_word("from", from)?);
                words.push(parse_flag_word("to", to)?);
                degree = Some(*d);
                Some(cartan)
            }
            Command::Skewform { cartan, word, other } => {
                words.push(parse_flag_word("word", word)?);
                if let Some(o) = other {
                    words.push(parse_flag_word("other", o)?);
                }
                Some(cartan)
            }
            Command::Extremal { cartan, word, lambda: l, relations } => {
                words.push(parse_flag_word("word", word)?);
                lambda = Some(parse_list("lambda", l)?);
                degree = *relations;
                Some(cartan)
            }
            Command::Typea { cartan, word, degree: d } => {
                if let Some(w) = word {
                    words.push(parse_flag_word("word", w)?);
                }
                degree = *d;
                Some(cartan)
            }
            Command::Inverse { cartan, word, lambda: l } => {
                words.push(parse_flag_word("word", word)?);
                lambda = l.as_deref().map(|l| parse_list("lambda", l)).transpose()?;
                Some(cartan)
            }
            Command::Suite { .. } => None,
        };
        Ok(RunConfig {
            cartan: cartan.map(|c| c.cartan.clone()),
            words,
            lambda,
            degree,
            ore_cap: cli.ore_cap.map(|c| c as usize).unwrap_or(qnil_core::torus::DEFAULT_ORE_CAP),
            format: cli.format,
            cache_dir: cli.cache_dir.clone(),
        })
    }

    /// Reads the Cartan file and checks every word and weight against its rank.
    pub fn load_cartan(&self) -> Result<CartanData, CliError> {
        let path = self.cartan.as_ref().ok_or_else(|| CliError::Usage("--cartan is required".into()))?;
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("--cartan: cannot read {}: {}", path.display(), e)))?;
        let data = CartanData::from_json(&text)?;
        for w in &self.words {
            data.check_word(w)?;
        }
        if let Some(l) = &self.lambda {
            if l.len() != data.rank() {
                return Err(CliError::Usage(format!("--lambda: expected {} entries, got {}", data.rank(), l.len())));
            }
        }
        Ok(data)
    }
}

/// Parses `args` (program name first), executes, and renders the result.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            };
        }
    };
    let result = RunConfig::from_cli(&cli).and_then(|config| {
        qnil_core::torus::set_ore_cap(config.ore_cap);
        if let Some(dir) = &config.cache_dir {
            std::env::set_var(qnil_core::bialgebra::CACHE_ENV, dir);
        }
        commands::execute(&config, &cli.command).map(|r| (config.format, r))
    });
    match result {
        Ok((format, report)) => {
            let mut stdout = match format {
                Format::Text => report.text,
                Format::Json => serde_json::to_string_pretty(&report.json).expect("serializable"),
            };
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            Outcome { code: if report.passed { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: e.code(), stdout: String::new(), stderr: format!("error: {}\n", e.message()) },
    }
}
