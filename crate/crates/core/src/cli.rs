//! The `frcode` command line.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 verification failure,
//! 3 cap exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::Error;
use crate::family::{self, construct_good, cutset_bound, family_closure, family_step, is_good, m_rs, random_choice};
use crate::fsc::{emit_fsc, read_fsc, FscDocument};
use crate::groupsearch::{ltgc_search, SearchOptions, DEFAULT_GROUP_CAP, DEFAULT_NODE_CAP, DEFAULT_ORBIT_CAP};
use crate::partition_code::{build_partition, code_states, max_collection_check, uniqueness_check};
use crate::simulator::{dss_init, parse_data, run_random};
use crate::storage::{check_repair_property, StateSet, VerifiedCode, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "frcode",
    version,
    about = "Functional-repair storage codes over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the repair property of every collection in a state set.
    Verify {
        file: PathBuf,
        /// Enumerate every valid newcomer per collection.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        json: bool,
    },
    /// Build an (r,s)-good collection, walk random steps and verify the
    /// reachable closure.
    Family {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 0)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum closure size.
        #[arg(long, default_value_t = 200_000)]
        cap: usize,
        /// Skip building and verifying the closure.
        #[arg(long)]
        no_closure: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check whether collections are (r,s)-good.
    GoodCheck {
        file: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        /// Only this collection.
        #[arg(long)]
        collection: Option<String>,
    },
    /// Search for a transitive group generating a code from a seed state.
    Search {
        seed: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
        group_cap: usize,
        #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
        orbit_cap: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        node_cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the per-candidate log here instead of standard output.
        #[arg(long)]
        log: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Build and verify the 56-state code over GF(2)^5.
    Partition {
        /// Confirm that 8 is the largest pairwise-trivial 3-spanning set of planes.
        #[arg(long)]
        max_check: bool,
        /// Also count maximum collections and compare with the group orbit.
        #[arg(long)]
        uniqueness: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run random fail/repair cycles on a code.
    Simulate {
        code: PathBuf,
        /// Data vector, one digit per coordinate or comma-separated symbols.
        #[arg(long)]
        data: String,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        seed: u64,
        /// Check every spanning k-set after each repair.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Print the cutset bound on the message dimension.
    Cutset {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        beta: usize,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::Parse { .. } | Error::Io(_) | Error::Params(_) => EXIT_USAGE,
            _ => EXIT_FAIL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

type CmdResult = Result<i32, Failure>;

fn load(path: &Path) -> Result<FscDocument, Failure> {
    read_fsc(path).map_err(|e| Failure {
        code: EXIT_USAGE,
        message: format!("{}: {e}", path.display()),
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure {
        code: EXIT_USAGE,
        message: format!("{}: {e}", path.display()),
    })
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Verify { file, full, json } => verify(&file, full, json, out),
        Command::Family {
            r,
            s,
            q,
            steps,
            seed,
            cap,
            no_closure,
            out: path,
        } => family_cmd(r, s, q, steps, seed, cap, no_closure, path.as_deref(), out),
        Command::GoodCheck { file, r, s, collection } => good_check(&file, r, s, collection.as_deref(), out),
        Command::Search {
            seed,
            group_cap,
            orbit_cap,
            node_cap,
            out: path,
            log,
            json,
        } => {
            let opts = SearchOptions {
                node_cap,
                group_cap,
                orbit_cap,
                ..SearchOptions::default()
            };
            search(&seed, &opts, path.as_deref(), log.as_deref(), json, out)
        }
        Command::Partition {
            max_check,
            uniqueness,
            out: path,
        } => partition(max_check, uniqueness, path.as_deref(), out),
        Command::Simulate {
            code,
            data,
            steps,
            seed,
            exhaustive,
            transcript,
            json,
        } => simulate(&code, &data, steps, seed, exhaustive, transcript.as_deref(), json, out),
        Command::Cutset { k, r, alpha, beta } => cutset(k, r, alpha, beta, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn verify(file: &Path, full: bool, json: bool, out: &mut dyn Write) -> CmdResult {
    let states = load(file)?.to_state_set()?;
    let opts = if full {
        VerifyOptions::full()
    } else {
        VerifyOptions::default()
    };
    let report = check_repair_property(&states, &opts)?;
    let passed = report.passed();
    if json {
        let v = json!({
            "verdict": if passed { "pass" } else { "fail" },
            "states": states.len(),
            "params": states.params(),
            "failing": report.failures().count(),
            "unique_newcomers": report.unique_newcomers(),
            "falsification": report.falsification(),
        });
        writeln!(out, "{v}")?;
    } else {
        writeln!(out, "{}", report.summary())?;
        match report.falsification() {
            Some(f) => writeln!(out, "FAIL {f}")?,
            None => writeln!(out, "PASS")?,
        }
    }
    Ok(if passed { EXIT_OK } else { EXIT_FAIL })
}

#[allow(clippy::too_many_arguments)]
fn family_cmd(
    r: usize,
    s: usize,
    q: u32,
    steps: usize,
    seed: u64,
    cap: usize,
    no_closure: bool,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let params = family::family_params(r, s, q)?;
    writeln!(out, "parameters {params}")?;
    let good = construct_good(r, s, q)?;
    writeln!(out, "seed collection {:?}", good.spaces())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = good.clone();
    for _ in 0..steps {
        let step = family_step(&current, &random_choice(&current, &mut rng)?)?;
        let i = rand::Rng::gen_range(&mut rng, 0..r);
        current = step.successors[i].clone();
        if !is_good(current.spaces(), r, s)? {
            writeln!(out, "FAIL goodness lost")?;
            return Ok(EXIT_FAIL);
        }
    }
    if steps > 0 {
        writeln!(out, "{steps} random steps, all collections good")?;
    }
    if no_closure {
        return Ok(EXIT_OK);
    }
    let closure = family_closure(r, s, q, cap)?;
    let code = VerifiedCode::new(closure).map_err(|e| Failure {
        code: EXIT_FAIL,
        message: format!("closure fails verification: {e}"),
    })?;
    writeln!(out, "closure of {} collections verified", code.states().len())?;
    if let Some(p) = path {
        write_file(p, &emit_fsc(&FscDocument::from_state_set(code.states(), &[])))?;
    }
    Ok(EXIT_OK)
}

fn good_check(file: &Path, r: usize, s: usize, only: Option<&str>, out: &mut dyn Write) -> CmdResult {
    let doc = load(file)?;
    let names: Vec<&String> = match only {
        Some(n) => {
            let name = doc.collections.keys().find(|k| *k == n).ok_or_else(|| Failure {
                code: EXIT_USAGE,
                message: format!("no collection named {n:?}"),
            })?;
            vec![name]
        }
        None => doc.collections.keys().collect(),
    };
    if names.is_empty() {
        return Err(Failure {
            code: EXIT_USAGE,
            message: "document has no collections".into(),
        });
    }
    let mut all = true;
    for name in names {
        let c = doc.collection(name);
        let good = is_good(c.spaces(), r, s)?;
        all &= good;
        writeln!(out, "{name} {}", if good { "good" } else { "not good" })?;
    }
    Ok(if all { EXIT_OK } else { EXIT_FAIL })
}

fn search(
    seed: &Path,
    opts: &SearchOptions,
    path: Option<&Path>,
    log_path: Option<&Path>,
    json: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let doc = load(seed)?;
    let params = doc.code_params()?;
    let (c, u) = doc.states.iter().next().ok_or_else(|| Failure {
        code: EXIT_USAGE,
        message: "seed document declares no state".into(),
    })?;
    let outcome = ltgc_search(&doc.collection(c), &doc.subspaces[u], &params, opts)?;
    let log = outcome.log.join("\n") + "\n";
    match log_path {
        Some(p) => write_file(p, &log)?,
        None if !json => write!(out, "{log}")?,
        None => {}
    }
    let best = outcome.results.first();
    if let (Some(best), Some(p)) = (best, path) {
        let doc = FscDocument::from_state_set(best.code.states(), &best.group.generators);
        write_file(p, &emit_fsc(&doc))?;
    }
    let capped = outcome.log.iter().any(|l| l.ends_with("skipped"));
    if json {
        let v = json!({
            "verdict": if best.is_some() { "found" } else { "none" },
            "states": best.map(|b| b.orbit_size()),
            "group_order": best.map(|b| b.group.order()),
            "orbit_size": best.map(|b| b.orbit_size()),
            "candidate_maps": outcome.candidate_maps,
            "distinct_successors": outcome.distinct_successors,
            "stabilizer_order": outcome.stabilizer_order,
            "results": outcome.results.len(),
        });
        writeln!(out, "{v}")?;
    } else if let Some(b) = best {
        writeln!(
            out,
            "best: group order {}, orbit {} collections, verified",
            b.group.order(),
            b.orbit_size()
        )?;
    } else {
        writeln!(out, "no generating group found")?;
    }
    Ok(match best {
        Some(_) => EXIT_OK,
        None if capped => EXIT_CAP,
        None => EXIT_FAIL,
    })
}

fn partition(max_check: bool, uniqueness: bool, path: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let model = build_partition()?;
    let states = code_states(&model)?;
    let code = VerifiedCode::with_options(states, &VerifyOptions::full())?;
    let unique = code.report().unique_newcomers() == Some(true);
    writeln!(
        out,
        "{} states verified, {}",
        code.states().len(),
        if unique {
            "unique newcomer per collection"
        } else {
            "several newcomers for some collection"
        }
    )?;
    writeln!(out, "beta gamma delta -> epsilon")?;
    let mut rows: Vec<(Vec<u32>, u32)> = code
        .states()
        .collections()
        .into_iter()
        .map(|c| {
            let mut betas: Vec<u32> = c
                .spaces()
                .iter()
                .map(|s| model.index_of(s).expect("partition plane"))
                .collect();
            betas.sort_unstable();
            let eps = model
                .index_of(&code.states().transitions(c)[0].newcomer)
                .expect("partition plane");
            (betas, eps)
        })
        .collect();
    rows.sort();
    for (betas, eps) in rows {
        writeln!(out, "{} {} {} -> {eps}", betas[0], betas[1], betas[2])?;
    }
    if let Some(p) = path {
        write_file(p, &emit_fsc(&FscDocument::from_state_set(code.states(), &[])))?;
    }
    let mut ok = unique;
    if max_check || uniqueness {
        let report = max_collection_check(&model, false)?;
        writeln!(
            out,
            "maximum collection size {} ({} search nodes), partition planes {}",
            report.maximum,
            report.nodes,
            if report.partition_is_valid { "valid" } else { "invalid" }
        )?;
        ok &= report.maximum == 8 && report.partition_is_valid;
    }
    if uniqueness {
        let u = uniqueness_check(&model)?;
        writeln!(
            out,
            "{} maximum collections, stabilizer order {}, |GL(5,2)| = {}, {}",
            u.maximum_count,
            u.stabilizer_order,
            u.gl_order,
            if u.all_equivalent() {
                "all equivalent"
            } else {
                "not all equivalent"
            }
        )?;
        ok &= u.all_equivalent();
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAIL })
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    file: &Path,
    data: &str,
    steps: usize,
    seed: u64,
    exhaustive: bool,
    transcript: Option<&Path>,
    json: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let states: StateSet = load(file)?.to_state_set()?;
    let params = *states.params();
    let x = parse_data(states.field(), params.m, data)?;
    let code = Arc::new(VerifiedCode::new(states)?);
    let mut dss = dss_init(code, x)?.seeded(seed);
    let report = match run_random(&mut dss, steps, seed, exhaustive) {
        Ok(r) => r,
        Err(e @ (Error::Integrity(_) | Error::CorruptState(_))) => {
            writeln!(out, "FAIL {e}")?;
            return Ok(EXIT_FAIL);
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(p) = transcript {
        write_file(p, &report.transcript)?;
    }
    if json {
        let v = json!({
            "verdict": if report.integrity_ok { "pass" } else { "fail" },
            "steps": report.steps,
            "states": report.states_visited,
            "downloads": report.total_downloaded,
            "per_repair": report.per_repair,
            "collects": report.collects,
        });
        writeln!(out, "{v}")?;
    } else {
        writeln!(out, "{}", report.summary())?;
    }
    Ok(EXIT_OK)
}

fn cutset(k: usize, r: usize, alpha: usize, beta: usize, out: &mut dyn Write) -> CmdResult {
    let bound = cutset_bound(k, r, alpha, beta);
    writeln!(out, "{bound}")?;
    if beta == 1 && k == r && alpha >= 1 && alpha <= r {
        let s = alpha - 1;
        let m = m_rs(r, s)?;
        writeln!(
            out,
            "family (r,s) = ({r},{s}): m = {m}, {}",
            if m == bound {
                "meets the bound"
            } else {
                "below the bound"
            }
        )?;
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("frcode").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn cutset_example() {
        let (code, out, _) = run_capture(&["cutset", "--k", "3", "--r", "3", "--alpha", "2", "--beta", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next(), Some("5"));
        assert!(out.contains("meets the bound"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&["cutset", "--k", "3"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["nonsense"]).0, EXIT_USAGE);
        let (code, _, err) = run_capture(&["verify", "/nonexistent.fsc"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("nonexistent"));
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn family_without_closure() {
        let (code, out, _) = run_capture(&["family", "--r", "3", "--s", "1", "--steps", "20", "--no-closure"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("20 random steps"));
    }

    #[test]
    fn family_closure_cap() {
        let (code, _, err) = run_capture(&["family", "--r", "3", "--s", "1", "--cap", "10"]);
        assert_eq!(code, EXIT_CAP, "{err}");
    }
}
