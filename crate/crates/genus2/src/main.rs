use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use genus2::decompose::{self, DecompositionReport};
use genus2::dsl::{self, DslError};
use genus2::fibration::{self, FiberSignature};
use genus2::homology;
use genus2::moves::Engine;
use genus2::pi1::{Pi1Model, Verdict};
use genus2::registry::Registry;
use genus2::word::{PositiveRelator, Word};

#[derive(Parser)]
#[command(name = "genus2", version, about = "Check and replay genus-2 Dehn twist relators")]
struct Cli {
    /// Curve registry file; the built-in standard registry by default.
    #[arg(long, global = true)]
    registry: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also check the action on the surface group.
    #[arg(long, global = true)]
    pi1: bool,
    /// Longest conjugator tried by the surface group check.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
    bound: u32,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the relators in a file are positive relators.
    Verify {
        file: PathBuf,
        /// Take the total spaces to be simply connected.
        #[arg(long)]
        simply_connected: bool,
    },
    /// Replay a derivation script.
    Replay { file: PathBuf },
    /// List the fiber-sum splittings of a signature.
    Decompose {
        #[arg(required_unless_present = "corpus")]
        n: Option<u32>,
        #[arg(required_unless_present = "corpus")]
        s: Option<u32>,
        /// Report on every labelled fixture relator instead.
        #[arg(long, conflicts_with_all = ["n", "s"])]
        corpus: bool,
    },
    /// Invariants of the total space for a fiber signature.
    Invariants {
        n: u32,
        s: u32,
        #[arg(long)]
        simply_connected: bool,
    },
    /// Validate the registry.
    RegistryCheck,
}

enum Failure {
    Verification,
    Usage(String),
}

type Outcome = Result<String, (Failure, String)>;

fn usage(msg: impl ToString) -> (Failure, String) {
    (Failure::Usage(msg.to_string()), String::new())
}

fn load_registry(path: &Option<PathBuf>) -> Result<Registry, (Failure, String)> {
    match path {
        None => Ok(Registry::standard()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            Registry::parse(&text).map_err(|e| usage(format!("{}: {e}", p.display())))
        }
    }
}

fn read(path: &PathBuf) -> Result<String, (Failure, String)> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// A lone word, or `label = word` lines.
fn parse_relators(text: &str, reg: &Registry) -> Result<Vec<PositiveRelator>, DslError> {
    let body: Vec<&str> = text.lines().map(|l| l.split('#').next().unwrap_or("")).filter(|l| !l.trim().is_empty()).collect();
    if body.iter().any(|l| l.contains('=')) {
        dsl::parse_relator_doc(text, reg)
    } else {
        dsl::parse_relator(&body.join(" "), reg).map(|r| vec![r])
    }
}

fn pi1_verdict(reg: &Registry, w: &Word, bound: usize) -> String {
    match Pi1Model::new(reg).equal_up_to_inner(w, &Word::empty(), bound) {
        Ok(Verdict::Equal(y)) => format!("inner (conjugator {y})"),
        Ok(Verdict::Distinguished) => "distinguished".to_string(),
        Ok(Verdict::Inconclusive) => "inconclusive".to_string(),
        Err(e) => format!("skipped, {e}"),
    }
}

fn verify(cli: &Cli, reg: &Registry, file: &PathBuf, simply_connected: bool) -> Outcome {
    let rs = parse_relators(&read(file)?, reg).map_err(usage)?;
    let mut out = String::new();
    let mut ok = true;
    for (i, r) in rs.iter().enumerate() {
        let label = r.label.clone().unwrap_or_else(|| format!("#{}", i + 1));
        let image = homology::image(reg, &r.word).map_err(usage)?;
        let ab = homology::ab_class(reg, &r.word).map_err(usage)?;
        let sig = fibration::fiber_signature(reg, r).map_err(usage)?;
        let identity = image.is_identity();
        ok &= identity && ab.value() == 0;
        let inv = fibration::invariants(sig, simply_connected).map(|mut inv| {
            if simply_connected {
                inv.label = fibration::homeo_label(&inv, true, fibration::non_spin(sig)).ok();
            }
            inv
        });
        let pi1 = cli.pi1.then(|| pi1_verdict(reg, &r.word, cli.bound as usize));
        if pi1.as_deref() == Some("distinguished") {
            ok = false;
        }
        match cli.format {
            Format::Text => {
                out += &format!("{label}\n  image identity: {identity}\n");
                if !identity {
                    out += &format!("{}\n", indent(&image.to_string()));
                }
                out += &format!("  ab class: {ab}\n  fibers: {sig}\n");
                match &inv {
                    Ok(inv) => out += &format!("  invariants: {inv}\n"),
                    Err(e) => out += &format!("  invariants: {e}\n"),
                }
                if let Some(p) = &pi1 {
                    out += &format!("  pi1: {p}\n");
                }
            }
            Format::Records => {
                out += &format!("relator label={label} identity={identity} ab={ab} n={} s={}", sig.n, sig.s);
                if let Ok(inv) = &inv {
                    out += &format!(" {}", inv.records());
                }
                if let Some(p) = &pi1 {
                    out += &format!(" pi1={}", p.split_whitespace().next().unwrap_or("").trim_end_matches(','));
                }
                out += "\n";
            }
        }
    }
    if ok {
        Ok(out)
    } else {
        Err((Failure::Verification, out))
    }
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("    {l}")).collect::<Vec<_>>().join("\n")
}

fn replay(cli: &Cli, reg: &Registry, file: &PathBuf) -> Outcome {
    let script = dsl::parse_script(&read(file)?, Some(reg)).map_err(usage)?;
    let report = Engine::new(reg).replay(&script);
    let out = match cli.format {
        Format::Text => report.to_string(),
        Format::Records => {
            let mut out = String::new();
            for s in &report.steps {
                out += &format!("step index={} ok={} move=\"{}\"", s.index, s.ok, s.mv);
                if let Some(sig) = s.signature {
                    out += &format!(" n={} s={}", sig.n, sig.s);
                }
                if !s.ok {
                    out += &format!(" reason=\"{}\"", s.message);
                }
                out += "\n";
            }
            for c in &report.checkpoints {
                out += &format!("checkpoint after={} matched={} label={}\n", c.after, c.matched, c.label.as_deref().unwrap_or("-"));
            }
            out += &format!("result passed={}", report.passed());
            if let Some(sig) = report.final_signature {
                out += &format!(" n={} s={}", sig.n, sig.s);
            }
            out + "\n"
        }
    };
    if report.passed() {
        Ok(out)
    } else {
        Err((Failure::Verification, out))
    }
}

fn render(cli: &Cli, r: &DecompositionReport) -> String {
    match cli.format {
        Format::Text => r.to_string(),
        Format::Records => r.records(),
    }
}

fn run(cli: &Cli) -> Outcome {
    let reg = load_registry(&cli.registry)?;
    match &cli.command {
        Command::Verify { file, simply_connected } => verify(cli, &reg, file, *simply_connected),
        Command::Replay { file } => replay(cli, &reg, file),
        Command::Decompose { corpus: true, .. } => {
            let mut out = String::new();
            for (label, r) in decompose::report_corpus(&reg) {
                if cli.format == Format::Text {
                    out += &format!("{label}\n");
                }
                out += &render(cli, &r);
            }
            Ok(out)
        }
        Command::Decompose { n, s, .. } => {
            let (Some(n), Some(s)) = (n, s) else {
                return Err(usage("decompose needs n and s"));
            };
            Ok(render(cli, &decompose::admissible_splits(FiberSignature::new(*n, *s))))
        }
        Command::Invariants { n, s, simply_connected } => {
            let sig = FiberSignature::new(*n, *s);
            let mut inv = fibration::invariants(sig, *simply_connected).map_err(usage)?;
            if *simply_connected {
                inv.label = fibration::homeo_label(&inv, true, fibration::non_spin(sig)).ok();
            }
            Ok(match cli.format {
                Format::Text => format!("{sig}: {inv}\n"),
                Format::Records => format!("invariants n={n} s={s} {}\n", inv.records()),
            })
        }
        Command::RegistryCheck => {
            let report = reg.validate();
            let out = match cli.format {
                Format::Text => report.to_string(),
                Format::Records => report
                    .checks
                    .iter()
                    .map(|c| format!("check name=\"{}\" passed={}\n", c.name, c.passed))
                    .collect(),
            };
            if report.passed() {
                Ok(out)
            } else {
                Err((Failure::Verification, out))
            }
        }
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(p) => fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, code) = match run(&cli) {
        Ok(text) => (text, 0),
        Err((Failure::Verification, text)) => (text, 1),
        Err((Failure::Usage(msg), _)) => {
            eprintln!("genus2: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli, &text) {
        eprintln!("genus2: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
