use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isoquat::field::{BaseField, FpFrac, RatFn, Rational};
use isoquat::parse::{parse_kt, parse_kt_list, parse_raw, InstanceFile, RawInstance};
use isoquat::report::{cmd_descend, cmd_info, cmd_morita, cmd_search, certificate, render, CommandError, Settings};
use isoquat::selftest::run_selftest;
use isoquat::ParseError;

#[derive(Parser)]
#[command(name = "isoquat", version, about = "Generalized quadratic forms over quaternion algebras and isotropy descent")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Random seed; defaults to [options] seed, then ISOQUAT_SEED, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Alphabet size per coordinate for the search oracles.
    #[arg(long, global = true)]
    height: Option<u32>,
    /// Largest filtration level searched over F.
    #[arg(long, global = true)]
    filtration: Option<usize>,
    /// Largest number of nonzero coordinates in a search candidate.
    #[arg(long, global = true)]
    support: Option<usize>,
    /// Treat Q as a division algebra when no certificate is found.
    #[arg(long, global = true)]
    assume_division: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Samples per selftest check.
    #[arg(long, global = true)]
    samples: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Certificate, nonsingularity and quadratic pair checks.
    Info { instance: PathBuf },
    /// The transferred quadratic form over F: basis values and polar Gram.
    Morita { instance: PathBuf },
    /// Descend an isotropic vector over F to one over Q.
    Descend {
        instance: PathBuf,
        /// File with n K(t) literals; overrides the [vector] section.
        #[arg(long)]
        vector: Option<PathBuf>,
    },
    /// Bounded search for isotropic vectors over Q and over F.
    Search { instance: PathBuf },
    /// Randomized invariant checks on the instance's algebra.
    Selftest { instance: PathBuf },
}

impl Command {
    fn instance(&self) -> &Path {
        match self {
            Command::Info { instance }
            | Command::Morita { instance }
            | Command::Descend { instance, .. }
            | Command::Search { instance }
            | Command::Selftest { instance } => instance,
        }
    }
}

enum Failure {
    Command(CommandError),
    Located(PathBuf, ParseError),
    Io(PathBuf, std::io::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Command(e) => e.exit_code() as u8,
            Failure::Located(..) | Failure::Io(..) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Command(e) => format!("error: {e}"),
            Failure::Located(path, e) => format!("error: {}:{}:{}: {}", path.display(), e.line, e.col, e.msg),
            Failure::Io(path, e) => format!("error: {}: {e}", path.display()),
        }
    }
}

impl From<CommandError> for Failure {
    fn from(e: CommandError) -> Self {
        Failure::Command(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn settings(flags: &Flags, raw: &RawInstance) -> Result<Settings, ParseError> {
    let opts = raw.options()?;
    let env_seed = std::env::var("ISOQUAT_SEED").ok().and_then(|s| s.trim().parse().ok());
    let d = Settings::default();
    Ok(Settings {
        seed: flags.seed.or(opts.seed).or(env_seed).unwrap_or(d.seed),
        height: flags.height.or(opts.height).unwrap_or(d.height),
        filtration: flags.filtration.or(opts.filtration).unwrap_or(d.filtration),
        support: flags.support.or(opts.support),
        samples: flags.samples.or(opts.samples).unwrap_or(d.samples),
        assume_division: flags.assume_division || opts.assume_division,
    })
}

/// A vector file holds either a bracketed list or one literal per line.
fn parse_vector<B: BaseField>(inst: &InstanceFile<B>, text: &str) -> Result<Vec<RatFn<B>>, ParseError> {
    let body = text.lines().map(|l| l.split('#').next().unwrap_or("")).collect::<Vec<_>>();
    let joined = body.join("\n");
    let trimmed = joined.trim_start();
    if trimmed.starts_with('[') {
        let offset = joined.len() - trimmed.len();
        let line0 = joined[..offset].matches('\n').count();
        return parse_kt_list(&inst.alg, &trimmed.replace('\n', " ")).map_err(|e| ParseError::new(e.line + line0, e.col, e.msg));
    }
    let mut out = Vec::new();
    for (i, line) in body.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_kt(&inst.alg, line).map_err(|e| ParseError::new(i + 1, e.col, e.msg))?);
    }
    if out.len() != inst.form.n() {
        return Err(ParseError::new(1, 1, format!("expected {} entries, found {}", inst.form.n(), out.len())));
    }
    Ok(out)
}

fn run_with<B: BaseField>(cli: &Cli, path: &Path, raw: &RawInstance) -> Result<String, Failure> {
    let located = |e: ParseError| Failure::Located(path.to_path_buf(), e);
    let inst = InstanceFile::<B>::from_raw(raw).map_err(located)?;
    let settings = settings(&cli.flags, raw).map_err(located)?;
    let json = cli.flags.format == Format::Json;
    Ok(match &cli.command {
        Command::Info { .. } => render(&cmd_info(&inst, &settings)?, |r| r.to_text(), json),
        Command::Morita { .. } => render(&cmd_morita(&inst), |r| r.to_text(), json),
        Command::Descend { vector, .. } => {
            let w = match vector {
                Some(p) => Some(parse_vector(&inst, &read(p)?).map_err(|e| Failure::Located(p.clone(), e))?),
                None => None,
            };
            render(&cmd_descend(&inst, w.as_deref(), &settings)?, |r| r.to_text(), json)
        }
        Command::Search { .. } => render(&cmd_search(&inst, &settings), |r| r.to_text(), json),
        Command::Selftest { .. } => {
            let cert = certificate(&inst, &settings);
            render(&run_selftest(&inst.alg, &cert, settings.samples, settings.seed), |r| r.to_text(), json)
        }
    })
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let path = cli.command.instance();
    let text = read(path)?;
    let located = |e: ParseError| Failure::Located(path.to_path_buf(), e);
    let raw = parse_raw(&text).map_err(located)?;
    match raw.characteristic().map_err(located)? {
        0 => run_with::<Rational>(cli, path, &raw),
        2 => run_with::<FpFrac<2>>(cli, path, &raw),
        3 => run_with::<FpFrac<3>>(cli, path, &raw),
        5 => run_with::<FpFrac<5>>(cli, path, &raw),
        7 => run_with::<FpFrac<7>>(cli, path, &raw),
        p => {
            let line = raw.get("field", "char").map_or(1, |e| e.line);
            Err(located(ParseError::new(line, 1, format!("unsupported characteristic {p} (supported: 0, 2, 3, 5, 7)"))))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.code())
        }
    }
}
