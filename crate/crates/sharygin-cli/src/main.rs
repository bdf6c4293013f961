use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sharygin_cli::commands::{self, Outcome, Suite, TransformKind, TransformParams};

/// Sharygin points of two circles, plus tools for transforms, scenario
/// files and batch verification.
#[derive(Parser)]
#[command(name = "sharygin", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Two circles, each quoted as `x y r`.
    #[arg(allow_hyphen_values = true, num_args = 0..=2)]
    circles: Vec<String>,
    /// Take the circles from a scenario file instead.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Ids of the two circles in the scenario file.
    #[arg(long, num_args = 2)]
    ids: Vec<String>,
    /// Also draw the circles, both points and the common polar.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a transform to cycles, axes or plain objects.
    Transform {
        kind: Kind,
        /// Operands: `x y r`, `axis dx dy offset`, `line a b c`, `point x y`.
        #[arg(allow_hyphen_values = true, required = true)]
        objects: Vec<String>,
        /// Inflation distance; accepts `ln(3)` style values.
        #[arg(long, allow_hyphen_values = true)]
        rho: Option<String>,
        /// Boost speed, |v| < 1.
        #[arg(long, allow_hyphen_values = true)]
        v: Option<f64>,
        /// The absolute circle `x y r` for hyperbolic inflation.
        #[arg(long, allow_hyphen_values = true)]
        absolute: Option<String>,
        /// Inversion centre `x y`.
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        /// Inversion power (default 1).
        #[arg(long)]
        k2: Option<f64>,
        /// Report pairwise tangency before and after.
        #[arg(long)]
        check_tangency: bool,
    },
    /// Check a theorem over seeded configurations or one scenario file.
    Verify {
        suite: SuiteArg,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(long, default_value_t = 1)]
        start: u64,
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Write the per-seed reports as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Draw a scenario file as SVG.
    Render { file: PathBuf, out: PathBuf },
    /// Write the seeded scenario a suite would check.
    Generate {
        suite: SuiteArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Inflate,
    Lorentz,
    HypInflate,
    Invert,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    WeakMt,
    SimplifiedMt,
    Main,
    Olympiad1,
    Olympiad2,
    Properties,
    Lemma,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::WeakMt => Suite::WeakMt,
            SuiteArg::SimplifiedMt => Suite::SimplifiedMt,
            SuiteArg::Main => Suite::Main,
            SuiteArg::Olympiad1 => Suite::Olympiad1,
            SuiteArg::Olympiad2 => Suite::Olympiad2,
            SuiteArg::Properties => Suite::Properties,
            SuiteArg::Lemma => Suite::Lemma,
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        None => commands::cmd_sharygin_args(&cli.circles, cli.scenario.as_deref(), &cli.ids, cli.svg.as_deref()),
        Some(Command::Transform { kind, objects, rho, v, absolute, center, k2, check_tangency }) => {
            let kind = match kind {
                Kind::Inflate => TransformKind::Inflate,
                Kind::Lorentz => TransformKind::Lorentz,
                Kind::HypInflate => TransformKind::HypInflate,
                Kind::Invert => TransformKind::Invert,
            };
            let p = TransformParams { rho, v, absolute, center, k2 };
            commands::cmd_transform(kind, &p, &objects, check_tangency)
        }
        Some(Command::Verify { suite, seeds, start, scenario, json }) => {
            commands::cmd_verify(suite.into(), seeds, start, scenario.as_deref(), json.as_deref())
        }
        Some(Command::Render { file, out }) => commands::cmd_render(&file, &out),
        Some(Command::Generate { suite, seed, out }) => commands::cmd_generate(suite.into(), seed, out.as_deref()),
    }
}

/// Operands such as `"-1 0 2"` start with a hyphen, so operand lists accept
/// hyphenated values and would swallow any option after them. Options of the
/// top-level command and of `transform` are moved ahead of the operands.
fn hoist_options(args: Vec<String>) -> Vec<String> {
    let (at, valued): (usize, &[(&str, usize)]) = match args.get(1).map(String::as_str) {
        Some("transform") => (2, &[("--rho", 1), ("--v", 1), ("--absolute", 1), ("--center", 1), ("--k2", 1)]),
        Some("verify" | "render" | "generate" | "help") => return args,
        _ => (1, &[("--scenario", 1), ("--ids", 2), ("--svg", 1)]),
    };
    let mut head = args[..at.min(args.len())].to_vec();
    let (mut opts, mut rest) = (vec![], vec![]);
    let mut it = args.iter().skip(at);
    while let Some(a) = it.next() {
        if let Some(&(_, n)) = valued.iter().find(|(name, _)| name == a) {
            opts.push(a.clone());
            opts.extend(it.by_ref().take(n).cloned());
        } else if a.starts_with("--") && !a.starts_with("---") || a == "-h" || a == "-V" {
            opts.push(a.clone());
        } else {
            rest.push(a.clone());
        }
    }
    head.extend(opts);
    head.extend(rest);
    head
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(hoist_options(std::env::args().collect())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let out = run(cli);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
