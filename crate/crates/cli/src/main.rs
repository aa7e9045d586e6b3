//! `heffter`: construct, verify, search and render Heffter spaces.
//!
//! Exit codes: 0 success, 1 an invariant failed, 2 bad parameters or
//! unreadable input, 3 internal construction fault, 4 search exhausted
//! without a solution, 5 search budget exceeded.

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heffter_core::compose::star_compose_traced;
use heffter_core::netbuild::heffter_net_construction;
use heffter_core::{
    margossian_square, net_space_from_array, pipeline_space, plain_space_3, search_heffter_space,
    trivial_space, DocumentKind, DocumentObject, Error, Report, SearchProblem, SearchStatus,
    SpaceDocument,
};

const OK: u8 = 0;
const INVARIANT_FAILED: u8 = 1;
const BAD_INPUT: u8 = 2;
const INTERNAL: u8 = 3;
const EXHAUSTED: u8 = 4;
const BUDGET: u8 = 5;

#[derive(Parser)]
#[command(
    name = "heffter",
    version,
    about = "Construct, verify and search shiftable Heffter spaces"
)]
struct Cli {
    /// Write the main output here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Doc)]
    format: Format,

    /// Shorthand for `--format pretty`.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Doc,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Build an object and emit it as a document.
    #[command(subcommand)]
    Construct(Construct),
    /// Check every invariant of a document.
    Verify(VerifyArgs),
    /// Exact search for a shiftable (v, k; r) Heffter space.
    Search(SearchArgs),
    /// Print a document as aligned text.
    Render { file: PathBuf },
}

#[derive(Subcommand)]
enum Construct {
    /// Margossian pandiagonal magic square of order n ≡ 0 (mod 4).
    Margossian {
        #[arg(long)]
        n: usize,
    },
    /// Shiftable (n², n; 3) Heffter space, n ≡ 0 (mod 4).
    Net {
        #[arg(long)]
        n: usize,
        /// Emit an intermediate of the construction instead of the space.
        #[arg(long, value_enum, default_value_t = NetStage::Space)]
        emit: NetStage,
    },
    /// (mn, n; 3) space for 1 ≤ n ≤ m.
    Plain {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// (v, 1; r) space.
    Trivial {
        #[arg(long)]
        v: usize,
        #[arg(long)]
        r: usize,
    },
    /// ⋆ product of a shiftable Heffter space and a plain space.
    Star {
        #[arg(long)]
        heffter: PathBuf,
        #[arg(long)]
        plain: PathBuf,
    },
    /// Shiftable (16ℓ²mn, 4ℓn; 3) Heffter space, 1 ≤ n ≤ m.
    Pipeline {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NetStage {
    Space,
    Square,
    Flipped,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyKind {
    /// Heffter space.
    Heffter,
    /// Plain resolvable space.
    Plain,
    /// Margossian magic square.
    Margossian,
    /// Sign-flipped square, read as a (n², n; 3) space.
    NetArray,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    /// Also require the shiftable conditions.
    #[arg(long)]
    shiftable: bool,
    /// What the document must be; inferred from it when omitted.
    #[arg(long, value_enum)]
    kind: Option<VerifyKind>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    v: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    r: usize,
    /// Wall-clock budget, e.g. `60s` or `5m`.
    #[arg(long, value_parser = humantime::parse_duration, default_value = "60s")]
    budget: Duration,
    #[arg(long)]
    node_limit: Option<u64>,
}

/// A failure with its exit code and a one-line reason.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

/// Exit code for a library error raised while building something.
fn construct_failure(e: Error) -> Failure {
    let code = match e {
        Error::Internal(_) => INTERNAL,
        _ => BAD_INPUT,
    };
    Failure::new(code, first_line(&e.to_string()))
}

fn first_line(s: &str) -> String {
    s.lines().next().unwrap_or_default().to_string()
}

struct Sink {
    output: Option<PathBuf>,
    format: Format,
}

impl Sink {
    fn write(&self, text: &str) -> Result<(), Failure> {
        match &self.output {
            Some(path) => fs::write(path, text).map_err(|e| {
                Failure::new(BAD_INPUT, format!("cannot write {}: {e}", path.display()))
            }),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn document(&self, doc: &SpaceDocument) -> Result<(), Failure> {
        let text = match self.format {
            Format::Doc => doc.to_canonical_string(),
            Format::Pretty => render::document(doc),
        };
        self.write(&text)
    }
}

fn read_document(path: &Path) -> Result<SpaceDocument, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(BAD_INPUT, format!("cannot read {}: {e}", path.display())))?;
    SpaceDocument::parse(&text).map_err(|e| {
        Failure::new(
            BAD_INPUT,
            format!("{}: {}", path.display(), first_line(&e.to_string())),
        )
    })
}

fn construct(cmd: Construct, sink: &Sink) -> Result<u8, Failure> {
    let doc = match cmd {
        Construct::Margossian { n } => {
            let m = margossian_square(n).map_err(construct_failure)?;
            SpaceDocument::square(m.into_square(), format!("margossian:{n}"))
        }
        Construct::Net { n, emit } => {
            let c = heffter_net_construction(n).map_err(construct_failure)?;
            match emit {
                NetStage::Space => SpaceDocument::heffter(c.space, format!("net:{n}")),
                NetStage::Square => {
                    SpaceDocument::square(c.square.into_square(), format!("margossian:{n}"))
                }
                NetStage::Flipped => SpaceDocument::square(c.flipped, format!("net-flipped:{n}")),
            }
        }
        Construct::Plain { m, n } => SpaceDocument::plain(
            plain_space_3(m, n).map_err(construct_failure)?,
            format!("plain:{m},{n}"),
        ),
        Construct::Trivial { v, r } => SpaceDocument::plain(
            trivial_space(v, r).map_err(construct_failure)?,
            format!("trivial:{v},{r}"),
        ),
        Construct::Star { heffter, plain } => {
            let h = read_document(&heffter)?;
            let s = read_document(&plain)?;
            let provenance = format!("star:({})x({})", h.provenance, s.provenance);
            let h = h.into_heffter().map_err(construct_failure)?;
            let s = s.into_plain().map_err(construct_failure)?;
            let c = star_compose_traced(&h, &s).map_err(construct_failure)?;
            SpaceDocument::heffter(c.space, provenance)
        }
        Construct::Pipeline { l, m, n } => SpaceDocument::heffter(
            pipeline_space(l, m, n).map_err(construct_failure)?,
            format!("pipeline:{l},{m},{n}"),
        ),
    };
    // Constructions verify themselves; this re-checks what is about to be emitted.
    let report = match &doc.object {
        DocumentObject::Square(s) if doc.provenance.starts_with("net-flipped") => {
            net_space_from_array(s)
                .map_err(construct_failure)?
                .validate(true)
        }
        DocumentObject::Heffter(h) => h.validate(true),
        _ => doc.validate(false),
    };
    if !report.passed() {
        return Err(Failure::new(
            INTERNAL,
            format!("constructed object failed validation:\n{report}"),
        ));
    }
    sink.document(&doc)?;
    Ok(OK)
}

fn verify(args: VerifyArgs, sink: &Sink) -> Result<u8, Failure> {
    let doc = read_document(&args.file)?;
    let kind = args.kind.unwrap_or(match doc.kind() {
        DocumentKind::HeffterSpace => VerifyKind::Heffter,
        DocumentKind::PlainSpace => VerifyKind::Plain,
        DocumentKind::Square => VerifyKind::Margossian,
    });
    let expected = match kind {
        VerifyKind::Heffter => DocumentKind::HeffterSpace,
        VerifyKind::Plain => DocumentKind::PlainSpace,
        VerifyKind::Margossian | VerifyKind::NetArray => DocumentKind::Square,
    };
    if doc.kind() != expected {
        return Err(Failure::new(
            BAD_INPUT,
            format!(
                "document is a {}, expected a {}",
                doc.kind().as_str(),
                expected.as_str()
            ),
        ));
    }
    let report: Report = match (&doc.object, kind) {
        (DocumentObject::Heffter(h), _) => h.validate(args.shiftable),
        (DocumentObject::Square(s), VerifyKind::NetArray) => match net_space_from_array(s) {
            Ok(space) => space.validate(args.shiftable),
            Err(e) => {
                sink.write(&format!(
                    "FAIL net array\n  {}\n",
                    first_line(&e.to_string())
                ))?;
                return Ok(INVARIANT_FAILED);
            }
        },
        _ => doc.validate(args.shiftable),
    };
    sink.write(&report.to_string())?;
    Ok(if report.passed() {
        OK
    } else {
        INVARIANT_FAILED
    })
}

fn search(args: SearchArgs, sink: &Sink) -> Result<u8, Failure> {
    let problem = SearchProblem::new(args.v, args.k, args.r)
        .and_then(|p| {
            p.check()?;
            Ok(p)
        })
        .map_err(|e| Failure::new(BAD_INPUT, first_line(&e.to_string())))?
        .with_budget(args.budget)
        .with_node_limit(args.node_limit);
    let outcome = search_heffter_space(&problem).map_err(construct_failure)?;
    let status = match outcome.status {
        SearchStatus::Found => "found",
        SearchStatus::ExhaustedNoSolution => "exhausted",
        SearchStatus::BudgetExceeded => "budget exceeded",
    };
    eprintln!(
        "status: {status}\nnodes: {}\nmax depth: {}\nelapsed: {}",
        outcome.nodes_explored,
        outcome.max_depth,
        humantime::format_duration(Duration::from_millis(outcome.elapsed.as_millis() as u64)),
    );
    match outcome.solution {
        Some(space) => {
            let doc =
                SpaceDocument::heffter(space, format!("search:{},{},{}", args.v, args.k, args.r));
            sink.document(&doc)?;
            Ok(OK)
        }
        None if outcome.status == SearchStatus::BudgetExceeded => Ok(BUDGET),
        None => Ok(EXHAUSTED),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let sink = Sink {
        output: cli.output,
        format: if cli.pretty {
            Format::Pretty
        } else {
            cli.format
        },
    };
    match cli.command {
        Command::Construct(c) => construct(c, &sink),
        Command::Verify(args) => verify(args, &sink),
        Command::Search(args) => search(args, &sink),
        Command::Render { file } => {
            let doc = read_document(&file)?;
            sink.write(&render::document(&doc))?;
            Ok(OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { BAD_INPUT } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
