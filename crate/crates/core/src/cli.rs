//! The `cycone` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::bundle::{parse_chern, parse_triple, BundleSpec, CatalogId, MinusKHint, CATALOG};
use crate::cone::Verdict;
use crate::error::{Error, Result};
use crate::report::{analyze, survey, AnalysisReport, SurveyRow};
use crate::selftest;
use crate::tri::Tri;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cycone", version, about = "Exact invariants and Kähler-cone verdicts for Calabi-Yau hypersurfaces in P²-bundles over P²")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze one rank-3 bundle.
    #[command(after_help = ANALYZE_HELP)]
    Analyze(AnalyzeArgs),
    /// Analyze every split bundle with exponents in a range.
    #[command(after_help = SURVEY_HELP)]
    Survey(SurveyArgs),
    /// List the named bundles.
    Catalog {
        #[arg(long)]
        json: bool,
    },
    /// Run the built-in regression checks.
    Selftest {
        #[arg(long)]
        json: bool,
    },
}

const ANALYZE_HELP: &str = "TSV columns: label c1 c2 gamma c3 h12 rho nef ample big h0_minus_k h0_gt_1 verdict k_oz3 c2_min kollar_case
Unknown values are written as `unknown`.";

const SURVEY_HELP: &str = "TSV columns: e1 e2 e3 c1 c2 gamma nef ample big rho verdict tab_admissible
Filters: c1=N, rho=N, gamma>=N, nef, not-nef, ample, not-ample, big, tab, verdict=rational|unknown.
Parallelism: --workers N, else CYCONE_WORKERS, else all cores. Output order does not depend on it.";

#[derive(Debug, Args)]
#[group(id = "bundle", required = true, multiple = false, args = ["split", "named", "chern"])]
struct AnalyzeArgs {
    /// Split bundle O(e1)+O(e2)+O(e3), as e1,e2,e3.
    #[arg(long, allow_hyphen_values = true)]
    split: Option<String>,
    /// A catalog bundle (see `cycone catalog`).
    #[arg(long)]
    named: Option<String>,
    /// Only Chern numbers, as c1,c2.
    #[arg(long, allow_hyphen_values = true)]
    chern: Option<String>,
    /// Replace E by E ⊗ O(t).
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    twist: i64,
    /// Positivity of -K_Z when only Chern numbers are given:
    /// ample, nef-not-ample or not-nef.
    #[arg(long = "minus-k")]
    minus_k: Option<String>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct SurveyArgs {
    #[arg(long, allow_hyphen_values = true)]
    emin: i64,
    #[arg(long, allow_hyphen_values = true)]
    emax: i64,
    /// Keep only rows matching every filter.
    #[arg(long = "filter")]
    filters: Vec<String>,
    #[arg(long)]
    workers: Option<usize>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, conflicts_with = "tsv")]
    json: bool,
    #[arg(long)]
    tsv: bool,
    /// Also print provenance (tool version, arguments) on stderr.
    #[arg(long)]
    meta: bool,
    /// Write the data to FILE instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: CatalogId,
    pub c1: i64,
    pub c2: i64,
    pub gamma: i64,
    pub splitting_type: [i64; 3],
    pub strategy: String,
}

pub fn catalog_entries() -> Vec<CatalogEntry> {
    CATALOG
        .iter()
        .map(|id| {
            let c = id.chern();
            CatalogEntry {
                id: *id,
                c1: c.c1,
                c2: c.c2,
                gamma: c.gamma(),
                splitting_type: id.splitting_type(),
                strategy: id.strategy().tag().to_string(),
            }
        })
        .collect()
}

fn bundle_spec(a: &AnalyzeArgs) -> Result<BundleSpec> {
    let mut spec = if let Some(s) = &a.split {
        BundleSpec::split(parse_triple(s)?)
    } else if let Some(s) = &a.named {
        BundleSpec::named(s.parse()?)
    } else if let Some(s) = &a.chern {
        BundleSpec::chern_only(parse_chern(s)?)
    } else {
        return Err(Error::Usage("one of --split, --named, --chern is required".into()));
    };
    if let Some(h) = &a.minus_k {
        spec = spec.with_hint(h.parse::<MinusKHint>()?);
    }
    Ok(spec.twisted(a.twist))
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Filter {
    C1(i64),
    Rho(i64),
    GammaAtLeast(i64),
    Nef(bool),
    Ample(bool),
    Big,
    Tab,
    Verdict(Verdict),
}

fn parse_filter(s: &str) -> Result<Filter> {
    let int = |v: &str| {
        v.trim()
            .parse::<i64>()
            .map_err(|_| Error::Usage(format!("bad filter value in `{s}`")))
    };
    let f = match s.trim() {
        "nef" => Filter::Nef(true),
        "not-nef" => Filter::Nef(false),
        "ample" => Filter::Ample(true),
        "not-ample" => Filter::Ample(false),
        "big" => Filter::Big,
        "tab" => Filter::Tab,
        "verdict=rational" => Filter::Verdict(Verdict::Rational),
        "verdict=unknown" => Filter::Verdict(Verdict::Unknown),
        t => {
            if let Some(v) = t.strip_prefix("c1=") {
                Filter::C1(int(v)?)
            } else if let Some(v) = t.strip_prefix("rho=") {
                Filter::Rho(int(v)?)
            } else if let Some(v) = t.strip_prefix("gamma>=") {
                Filter::GammaAtLeast(int(v)?)
            } else {
                return Err(Error::Usage(format!("unknown filter `{s}`")));
            }
        }
    };
    Ok(f)
}

impl Filter {
    fn keeps(&self, r: &SurveyRow) -> bool {
        match *self {
            Filter::C1(v) => r.c1 == v,
            Filter::Rho(v) => r.rho == Some(v),
            Filter::GammaAtLeast(v) => r.gamma >= v,
            Filter::Nef(b) => r.nef == Tri::from(b),
            Filter::Ample(b) => r.ample == Tri::from(b),
            Filter::Big => r.big.is_true(),
            Filter::Tab => r.tab_admissible,
            Filter::Verdict(v) => r.verdict == v,
        }
    }
}

fn workers(explicit: Option<usize>) -> Result<usize> {
    if let Some(n) = explicit {
        return Ok(n.max(1));
    }
    match std::env::var("CYCONE_WORKERS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(|n| n.max(1))
            .map_err(|_| Error::Usage(format!("CYCONE_WORKERS is not a number: `{v}`"))),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn to_json<T: Serialize>(v: &T, pretty: bool) -> Result<String> {
    let r = if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    };
    r.map_err(|e| Error::Invariant(format!("serialization failed: {e}")))
}

fn render_analysis(r: &AnalysisReport, o: &OutputArgs) -> Result<String> {
    Ok(if o.json {
        to_json(r, true)? + "\n"
    } else if o.tsv {
        format!("{}\n{}\n", AnalysisReport::TSV_COLUMNS.join("\t"), r.tsv_row())
    } else {
        r.to_text()
    })
}

fn render_survey(rows: &[SurveyRow], o: &OutputArgs) -> Result<String> {
    let mut s = String::new();
    if o.json {
        for r in rows {
            s += &to_json(r, false)?;
            s.push('\n');
        }
    } else {
        s += &SurveyRow::TSV_COLUMNS.join("\t");
        s.push('\n');
        for r in rows {
            s += &r.tsv_row();
            s.push('\n');
        }
    }
    Ok(s)
}

fn render_catalog(json: bool) -> Result<String> {
    let entries = catalog_entries();
    if json {
        return Ok(to_json(&entries, true)? + "\n");
    }
    let mut s = String::from("id\tc1\tc2\tgamma\ttype\tstrategy\n");
    for e in entries {
        let t = e.splitting_type;
        s += &format!(
            "{}\t{}\t{}\t{}\t({},{},{})\t{}\n",
            e.id, e.c1, e.c2, e.gamma, t[0], t[1], t[2], e.strategy
        );
    }
    Ok(s)
}

fn emit(data: &str, o: &OutputArgs, stdout: &mut dyn Write) -> Result<()> {
    match &o.out {
        Some(path) => std::fs::write(path, data)
            .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(data.as_bytes())
            .map_err(|e| Error::Invariant(format!("write failed: {e}"))),
    }
}

fn meta(args: &[OsString], stderr: &mut dyn Write) {
    let args: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let m = serde_json::json!({
        "tool": "cycone",
        "version": env!("CARGO_PKG_VERSION"),
        "args": args,
    });
    let _ = writeln!(stderr, "{m}");
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

/// Runs the command line and returns the process exit code.
pub fn run(args: Vec<OsString>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli, &args, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "cycone: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: Cli, args: &[OsString], stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match cli.cmd {
        Command::Analyze(a) => {
            let spec = bundle_spec(&a)?;
            let report = analyze(&spec)?;
            if a.out.meta {
                meta(args, stderr);
            }
            emit(&render_analysis(&report, &a.out)?, &a.out, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Survey(s) => {
            let filters = s
                .filters
                .iter()
                .map(|f| parse_filter(f))
                .collect::<Result<Vec<_>>>()?;
            let mut rows = survey(s.emin, s.emax, workers(s.workers)?)?;
            rows.retain(|r| filters.iter().all(|f| f.keeps(r)));
            if s.out.meta {
                meta(args, stderr);
            }
            emit(&render_survey(&rows, &s.out)?, &s.out, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Catalog { json } => {
            stdout
                .write_all(render_catalog(json)?.as_bytes())
                .map_err(|e| Error::Invariant(format!("write failed: {e}")))?;
            Ok(EXIT_OK)
        }
        Command::Selftest { json } => {
            let summary = selftest::run();
            let mut text = String::new();
            if json {
                text = to_json(&summary, true)? + "\n";
            } else {
                for c in &summary.checks {
                    if c.passed {
                        text += &format!("PASS {}\n", c.name);
                    } else {
                        text += &format!("FAIL {}: {}\n", c.name, c.detail);
                    }
                }
                if summary.all_passed() {
                    text += "all checks passed\n";
                } else {
                    text += &format!("{} check(s) failed\n", summary.failed().len());
                }
            }
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::Invariant(format!("write failed: {e}")))?;
            Ok(if summary.all_passed() { EXIT_OK } else { EXIT_FAILURE })
        }
    }
}
