//! spectra: constructors, exact spectra, and claim verification for the odd
//! graph family.
//!
//! Exit codes: 0 success, 1 refuted/failed check, 2 usage, 3 capacity.

use clap::{Parser, Subcommand, ValueEnum};
use spectra_core::claims::{markdown_summary, reports_to_json, ClaimId, Harness, HarnessConfig};
use spectra_core::graph::{bipartite_double, folded_double_odd, odd_graph, Graph, GraphError};
use spectra_core::linalg::{integral_spectrum, Spectrum};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const EXIT_OK: u8 = 0;
const EXIT_REFUTED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAPACITY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "spectra",
    version,
    about = "odd graphs, their bipartite and folded doubles: constructions, \
             exact integer spectra, and claim verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    /// the odd graph O_k
    Odd,
    /// the bipartite double 2O_k
    DoubleOdd,
    /// the folded double F(2O_k): 2O_k plus the antipodal matching
    Folded,
}

impl Family {
    fn label(self) -> &'static str {
        match self {
            Family::Odd => "odd",
            Family::DoubleOdd => "double-odd",
            Family::Folded => "folded",
        }
    }

    fn title(self, k: usize) -> String {
        match self {
            Family::Odd => format!("O_{k}"),
            Family::DoubleOdd => format!("2O_{k}"),
            Family::Folded => format!("F(2O_{k})"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
    EdgeList,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family member and emit it with canonical vertex order
    Construct {
        #[arg(value_enum)]
        family: Family,
        /// subset-size parameter, k >= 2
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact integer spectrum of a family member
    Spectrum {
        #[arg(value_enum)]
        family: Family,
        /// subset-size parameter, k >= 2
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// capacity cap on k
        #[arg(long, default_value_t = 5)]
        max_k: usize,
        /// worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run numbered claims C1..C9 and report verdicts with evidence
    Verify {
        /// claim ids ("C5", "C1,C7") or "all"
        claims: String,
        /// single k or inclusive range "a..b"
        #[arg(long, visible_alias = "k-range")]
        k: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// report base path; writes BASE.json and BASE.md
        #[arg(long)]
        out: Option<PathBuf>,
        /// let known discrepancies fail the exit status too
        #[arg(long)]
        no_allowlist: bool,
        /// vertex cap for the brute-force automorphism search
        #[arg(long, default_value_t = 70)]
        max_aut_n: usize,
        /// cap on k for every claim except C5
        #[arg(long, default_value_t = 5)]
        max_k: usize,
        /// worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn main() -> ExitCode {
    ExitCode::from(run())
}

fn run() -> u8 {
    if std::env::var_os("SPECTRA_SEED").is_some() {
        eprintln!("note: SPECTRA_SEED is reserved and ignored; all computation is deterministic");
    }
    match Cli::parse().command {
        Command::Construct {
            family,
            k,
            format,
            out,
        } => cmd_construct(family, k, format, out.as_deref()),
        Command::Spectrum {
            family,
            k,
            format,
            out,
            max_k,
            jobs,
        } => cmd_spectrum(family, k, format, out.as_deref(), max_k, jobs),
        Command::Verify {
            claims,
            k,
            format,
            out,
            no_allowlist,
            max_aut_n,
            max_k,
            jobs,
        } => cmd_verify(
            &claims,
            &k,
            format,
            out.as_deref(),
            no_allowlist,
            max_aut_n,
            max_k,
            jobs,
        ),
    }
}

fn init_jobs(jobs: Option<usize>) {
    if let Some(j) = jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global();
    }
}

fn build_graph(family: Family, k: usize) -> Result<Graph, u8> {
    let built = match family {
        Family::Odd => odd_graph(k),
        Family::DoubleOdd => odd_graph(k).map(|g| bipartite_double(&g)),
        Family::Folded => folded_double_odd(k),
    };
    built.map_err(|e| {
        eprintln!("error: {e}");
        match e {
            GraphError::KTooLarge(_) | GraphError::TooManyVertices(_) => EXIT_CAPACITY,
            _ => EXIT_USAGE,
        }
    })
}

/// Print to stdout, or write the file when a path is given. Content is
/// newline-terminated either way.
fn emit(out: Option<&Path>, content: &str) -> u8 {
    let mut text = content.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => match fs::write(path, &text) {
            Ok(()) => {
                eprintln!("wrote {}", path.display());
                EXIT_OK
            }
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                EXIT_USAGE
            }
        },
        None => {
            print!("{text}");
            EXIT_OK
        }
    }
}

fn cmd_construct(family: Family, k: usize, format: Format, out: Option<&Path>) -> u8 {
    let g = match build_graph(family, k) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let rendered = match format {
        Format::Json => g.to_json_string(),
        Format::EdgeList => g.to_edge_list_text(),
        Format::Md => graph_markdown(family, k, &g),
    };
    emit(out, &rendered)
}

fn graph_markdown(family: Family, k: usize, g: &Graph) -> String {
    let mut out = format!("# {} (family {}, k = {k})\n\n", family.title(k), family.label());
    out.push_str(&format!("- vertices: {}\n", g.n()));
    out.push_str(&format!("- edges: {}\n", g.edge_count()));
    if let Some(d) = g.regular_degree() {
        out.push_str(&format!("- regular of degree: {d}\n"));
    }
    out.push_str("\n```\n");
    out.push_str(&g.to_edge_list_text());
    out.push_str("```\n");
    out
}

fn cmd_spectrum(
    family: Family,
    k: usize,
    format: Format,
    out: Option<&Path>,
    max_k: usize,
    jobs: Option<usize>,
) -> u8 {
    init_jobs(jobs);
    if format == Format::EdgeList {
        eprintln!("error: --format edge-list only applies to construct");
        return EXIT_USAGE;
    }
    if k > max_k {
        eprintln!("error: k = {k} exceeds the capacity cap {max_k} (raise with --max-k)");
        return EXIT_CAPACITY;
    }
    let g = match build_graph(family, k) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let start = Instant::now();
    let spectrum = integral_spectrum(&g);
    eprintln!(
        "{} on {} vertices: residual {} in {} ms",
        family.title(k),
        g.n(),
        spectrum.residual,
        start.elapsed().as_millis()
    );
    let rendered = match format {
        Format::Json => spectrum.to_json_string(),
        Format::Md => spectrum_markdown(family, k, &g, &spectrum),
        Format::EdgeList => unreachable!(),
    };
    let code = emit(out, &rendered);
    if code != EXIT_OK {
        return code;
    }
    if spectrum.residual == 0 {
        EXIT_OK
    } else {
        EXIT_REFUTED
    }
}

fn spectrum_markdown(family: Family, k: usize, g: &Graph, s: &Spectrum) -> String {
    let mut out = format!("# spectrum of {} (k = {k})\n\n", family.title(k));
    out.push_str(&format!("- vertices: {}\n", g.n()));
    out.push_str(&format!("- residual degree: {}\n\n", s.residual));
    out.push_str("| eigenvalue | multiplicity |\n|---|---|\n");
    for &(lambda, mult) in &s.pairs {
        out.push_str(&format!("| {lambda} | {mult} |\n"));
    }
    out
}

fn parse_claims(arg: &str) -> Result<Vec<ClaimId>, String> {
    if arg.trim().eq_ignore_ascii_case("all") {
        return Ok(ClaimId::ALL.to_vec());
    }
    let mut ids = Vec::new();
    for part in arg.split(',') {
        let id: ClaimId = part.parse()?;
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    Ok(ids)
}

/// "a" or inclusive "a..b", every k at least 2.
fn parse_k_range(arg: &str) -> Result<Vec<usize>, String> {
    let parse_one = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad k value: {s:?}"))
    };
    let ks: Vec<usize> = match arg.split_once("..") {
        Some((a, b)) => {
            let (lo, hi) = (parse_one(a)?, parse_one(b)?);
            if lo > hi {
                return Err(format!("empty k range: {arg:?}"));
            }
            (lo..=hi).collect()
        }
        None => vec![parse_one(arg)?],
    };
    match ks.iter().find(|&&k| k < 2) {
        Some(k) => Err(format!("k must be at least 2, got {k}")),
        None => Ok(ks),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    claims_arg: &str,
    k_arg: &str,
    format: Format,
    out: Option<&Path>,
    no_allowlist: bool,
    max_aut_n: usize,
    max_k: usize,
    jobs: Option<usize>,
) -> u8 {
    init_jobs(jobs);
    if format == Format::EdgeList {
        eprintln!("error: --format edge-list only applies to construct");
        return EXIT_USAGE;
    }
    let ids = match parse_claims(claims_arg) {
        Ok(ids) => ids,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let ks = match parse_k_range(k_arg) {
        Ok(ks) => ks,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let harness = Harness::new(HarnessConfig {
        max_k,
        c5_max_k: max_k.max(12),
        max_aut_n,
        allow_known_discrepancies: !no_allowlist,
    });
    let reports = harness.run_claims(&ids, &ks);
    for r in &reports {
        eprintln!("{} k={}: {} ({} ms)", r.claim_id, r.k, r.verdict, r.runtime_ms);
    }
    if let Some(base) = out {
        let base = base.display().to_string();
        for (ext, content) in [
            ("json", reports_to_json(&reports)),
            ("md", markdown_summary(&reports)),
        ] {
            let code = emit(Some(Path::new(&format!("{base}.{ext}"))), &content);
            if code != EXIT_OK {
                return code;
            }
        }
    }
    let rendered = match format {
        Format::Json => reports_to_json(&reports),
        Format::Md => markdown_summary(&reports),
        Format::EdgeList => unreachable!(),
    };
    print!("{rendered}");
    if harness.aggregate_ok(&reports) {
        EXIT_OK
    } else {
        EXIT_REFUTED
    }
}
