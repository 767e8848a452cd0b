//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 guard or resource error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::chains::{find_translate_chain, ChainCertificate, TranslateSearch, VectorQ};
use crate::codes::{
    code_rate, is_list_decodable_exact, max_list_size_monte_carlo, min_rank_distance, RankCode,
};
use crate::counting::{ball_volume, gaussian_binomial, kq_bounds, rank_count, BallSpec};
use crate::experiments::{
    run_experiment, sidecar_path, summary_json, write_csv, write_results, ExperimentConfig,
    ExperimentId,
};
use crate::fraction::Fraction;
use crate::matgf::{field_for_order, Matrix};
use crate::sampling::{
    sample_d2_matrix, sample_random_code, sample_random_linear_code, sample_uniform_rank_matrix,
    sample_uniform_subspace, BallSampler, SeedSpec,
};
use crate::{Error, Result};

pub const THREADS_ENV: &str = "RANKDEC_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "rankdec",
    version,
    about = "Counting, sampling and list-decodability checks for rank-metric codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact counts: ball volume, rank count, Gaussian binomial, or the K_q enclosure.
    Count(CountArgs),
    /// Seeded draws from the samplers.
    Sample(SampleArgs),
    /// Translate search for a c-increasing chain in a set of vectors.
    Chain(ChainArgs),
    /// List-decodability check for a code file.
    CheckLd(CheckArgs),
    /// Monte Carlo experiment with CSV and JSON output.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Ball volume for normalized radius a/b.
    #[arg(long)]
    rho: Option<Fraction>,
    /// Number of matrices of exactly this rank.
    #[arg(long)]
    rank: Option<usize>,
    /// Gaussian binomial [N choose K]_q.
    #[arg(long, num_args = 2, value_names = ["N", "K"])]
    grassmann: Option<Vec<usize>>,
    /// Rigorous enclosure of K_q.
    #[arg(long)]
    kq: bool,
    #[arg(long, default_value_t = 64)]
    terms: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SampleKind {
    /// Uniform element of the ball of radius --rho.
    Ball,
    /// Uniform matrix of rank --rank.
    Rank,
    /// Uniform --s dimensional subspace of F_q^m, printed as a basis matrix.
    Subspace,
    /// Columns iid from a uniform --s dimensional subspace.
    D2,
    /// Random linear code of dimension --k.
    LinearCode,
    /// Bernoulli random code of rate --rate.
    RandomCode,
}

#[derive(Args, Debug, Serialize)]
struct SampleArgs {
    #[arg(long, value_enum)]
    kind: SampleKind,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    rho: Option<Fraction>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    rate: Option<Fraction>,
    /// Number of draws; draw i uses trial index i.
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ChainMode {
    Exhaustive,
    Randomized,
}

#[derive(Args, Debug, Serialize)]
struct ChainArgs {
    /// File with one vector per line (digit string or space-separated entries).
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    q: u32,
    #[arg(long, default_value_t = 2)]
    c: usize,
    #[arg(long, value_enum, default_value_t = ChainMode::Exhaustive)]
    mode: ChainMode,
    /// Random translates tried in randomized mode.
    #[arg(long, default_value_t = 4096)]
    budget: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
struct CheckArgs {
    /// Code file: header `q m n k linear|general`, then k matrices.
    #[arg(long)]
    code: PathBuf,
    #[arg(long)]
    rho: Fraction,
    /// List size L.
    #[arg(long)]
    list_bound: usize,
    /// Sample this many centers instead of scanning all of them.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    centers: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

/// Flags mirror [`ExperimentConfig`] keys; explicit flags override `--config`.
#[derive(Args, Debug, Serialize)]
struct ExperimentArgs {
    /// JSON config file with the same keys as the flags.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// lemma41, claim42, lemma43, theorem31, randcode_a1 or randcode_a2.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    id: Option<ExperimentId>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    /// Defaults to m.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    /// Normalized radius as a fraction, e.g. 1/4.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    rho: Option<Fraction>,
    /// Rate gap below capacity.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<Fraction>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<Fraction>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<Fraction>,
    /// Condition on the first subspace dimension.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    s1: Option<usize>,
    /// Condition on the second subspace dimension.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    s2: Option<usize>,
    /// Dimension of the first subspace (claim42).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    d1: Option<usize>,
    /// Dimension of the second subspace (claim42).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    d2: Option<usize>,
    /// Number of ball samples spanned (lemma43).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    ell: Option<usize>,
    /// Span constant C; the event is count >= C·ell.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    c_span: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    list_bound: Option<u64>,
    /// Code dimension; defaults to floor(R·mn).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    /// Sampled centers when the space is too large to scan.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    centers: Option<u64>,
    #[arg(long, value_parser = ["zero", "random"])]
    #[serde(skip_serializing_if = "Option::is_none")]
    center: Option<String>,
    /// Defaults to 1000.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<u64>,
    /// Master seed; drawn and echoed when absent.
    #[arg(long)]
    #[serde(rename = "master_seed", skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    /// CSV path; the JSON summary goes next to it. Without it, CSV goes to stdout.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
    /// Worker threads; falls back to RANKDEC_THREADS.
    #[arg(long)]
    #[serde(skip)]
    threads: Option<usize>,
}

impl clap::builder::ValueParserFactory for ExperimentId {
    type Parser = clap::builder::ValueParser;

    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<ExperimentId>())
    }
}

impl clap::builder::ValueParserFactory for Fraction {
    type Parser = clap::builder::ValueParser;

    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<Fraction>())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_resource() {
                2
            } else {
                1
            }
        }
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

fn echo(err: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    writeln!(err, "config: {}", serde_json::to_string(value)?)?;
    Ok(())
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match command {
        Command::Count(a) => count(a, out, err),
        Command::Sample(a) => sample(a, out, err),
        Command::Chain(a) => chain(a, out, err),
        Command::CheckLd(a) => check_ld(a, out, err),
        Command::Experiment(a) => experiment(a, out, err),
    }
}

fn count(a: CountArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    field_for_order(a.q)?;
    let shape = || -> Result<(usize, usize)> {
        let m =
            a.m.ok_or_else(|| Error::InvalidParameter("--m is required".into()))?;
        Ok((m, a.n.unwrap_or(m)))
    };
    let modes = [
        a.rho.is_some(),
        a.rank.is_some(),
        a.grassmann.is_some(),
        a.kq,
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if modes != 1 {
        return Err(Error::InvalidParameter(
            "give exactly one of --rho, --rank, --grassmann, --kq".into(),
        ));
    }
    if let Some(rho) = &a.rho {
        let (m, n) = shape()?;
        let spec = BallSpec::new(a.q, m, n, rho.value())?;
        echo(
            err,
            &json!({"q": a.q, "m": m, "n": n, "rho": rho, "r_max": spec.r_max}),
        )?;
        writeln!(out, "{}", ball_volume(&spec))?;
    } else if let Some(r) = a.rank {
        let (m, n) = shape()?;
        echo(err, &json!({"q": a.q, "m": m, "n": n, "rank": r}))?;
        writeln!(out, "{}", rank_count(a.q, m, n, r)?)?;
    } else if let Some(g) = &a.grassmann {
        echo(err, &json!({"q": a.q, "grassmann": g}))?;
        writeln!(out, "{}", gaussian_binomial(a.q, g[0], g[1])?)?;
    } else {
        echo(err, &json!({"q": a.q, "terms": a.terms}))?;
        let (lo, hi) = kq_bounds(a.q, a.terms)?;
        writeln!(out, "{} {}", Fraction(lo).to_f64(), Fraction(hi).to_f64())?;
    }
    Ok(())
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParameter(format!("{flag} is required for this kind")))
}

fn sample(mut a: SampleArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let field = field_for_order(a.q)?;
    let m = a.m;
    let n = a.n.unwrap_or(m);
    a.seed = Some(resolve_seed(a.seed));
    echo(err, &a)?;
    let seeds = SeedSpec::new(a.seed.expect("resolved"));
    let mut text = String::new();
    let ball = match a.kind {
        SampleKind::Ball => {
            let rho = a
                .rho
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("--rho is required".into()))?;
            Some(BallSampler::new(
                &field,
                &BallSpec::new(a.q, m, n, rho.value())?,
            )?)
        }
        _ => None,
    };
    for i in 0..a.count {
        let rng = &mut seeds.rng(i);
        match a.kind {
            SampleKind::Ball => {
                text.push_str(&ball.as_ref().expect("built").sample(rng).to_string())
            }
            SampleKind::Rank => text.push_str(
                &sample_uniform_rank_matrix(&field, m, n, need(a.rank, "--rank")?, rng)?
                    .to_string(),
            ),
            SampleKind::Subspace => {
                let u = sample_uniform_subspace(&field, m, need(a.s, "--s")?, rng)?;
                match u.basis_matrix() {
                    Some(b) => text.push_str(&b.to_string()),
                    None => text.push_str(&Matrix::zeros(field.clone(), 1, m).to_string()),
                }
            }
            SampleKind::D2 => {
                text.push_str(&sample_d2_matrix(&field, m, n, need(a.s, "--s")?, rng)?.to_string())
            }
            SampleKind::LinearCode => {
                let space = sample_random_linear_code(&field, m, n, need(a.k, "--k")?, rng)?;
                let mut buf = Vec::new();
                RankCode::linear(field.clone(), m, n, space)?.write(&mut buf)?;
                text.push_str(&String::from_utf8_lossy(&buf));
            }
            SampleKind::RandomCode => {
                let rate = a
                    .rate
                    .as_ref()
                    .ok_or_else(|| Error::InvalidParameter("--rate is required".into()))?;
                let words = sample_random_code(&field, m, n, rate.value(), rng)?;
                let mut buf = Vec::new();
                RankCode::general(field.clone(), m, n, words)?.write(&mut buf)?;
                text.push_str(&String::from_utf8_lossy(&buf));
            }
        }
    }
    match &a.out {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn chain(mut a: ChainArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let text = std::fs::read_to_string(&a.input)?;
    let set = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| VectorQ::parse(a.q, l))
        .collect::<Result<Vec<_>>>()?;
    let mode = match a.mode {
        ChainMode::Exhaustive => TranslateSearch::Exhaustive,
        ChainMode::Randomized => {
            a.seed = Some(resolve_seed(a.seed));
            TranslateSearch::Randomized {
                budget: a.budget,
                seed: a.seed.expect("resolved"),
            }
        }
    };
    echo(err, &a)?;
    let cert: ChainCertificate = find_translate_chain(&set, a.c, mode)?;
    writeln!(out, "translate {}", cert.translate)?;
    writeln!(out, "length {}", cert.chain.len())?;
    for v in &cert.chain {
        writeln!(out, "{v}")?;
    }
    Ok(())
}

fn check_ld(mut a: CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let code = RankCode::read(BufReader::new(File::open(&a.code)?))?;
    let q = code.field().q() as u64;
    let spec = BallSpec::new(q, code.m(), code.n(), a.rho.value())?;
    if a.centers.is_some() {
        a.seed = Some(resolve_seed(a.seed));
    }
    echo(err, &a)?;
    let rate = code_rate(&code)?;
    writeln!(out, "size {}", rate.code_size)?;
    writeln!(out, "rate {}", Fraction(rate.exact.unwrap_or(rate.approx)))?;
    if let Ok(d) = min_rank_distance(&code) {
        writeln!(out, "min_rank_distance {d}")?;
    }
    match a.centers {
        None => {
            let (ok, witness) = is_list_decodable_exact(&code, &spec, a.list_bound)?;
            writeln!(out, "list_decodable {ok}")?;
            if let Some(y) = witness {
                write!(out, "witness\n{y}")?;
            }
        }
        Some(c) => {
            let mut rng = SeedSpec::new(a.seed.expect("resolved")).rng(0);
            let best = max_list_size_monte_carlo(&code, &spec, c, &mut rng)?;
            writeln!(out, "max_list_sampled {best}")?;
            writeln!(out, "list_decodable_on_sample {}", best <= a.list_bound)?;
        }
    }
    Ok(())
}

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v.trim().parse::<usize>().map(Some).map_err(|_| {
            Error::InvalidParameter(format!("{THREADS_ENV}={v:?} is not a thread count"))
        }),
        _ => Ok(None),
    }
}

/// Merges the JSON config file with the explicit flags, flags winning.
fn resolve_experiment(a: &ExperimentArgs) -> Result<ExperimentConfig> {
    let mut merged: Map<String, Value> = match &a.config {
        Some(path) => match serde_json::from_str(&std::fs::read_to_string(path)?)? {
            Value::Object(map) => map,
            _ => return Err(Error::Parse("config file must hold a JSON object".into())),
        },
        None => Map::new(),
    };
    if let Value::Object(flags) = serde_json::to_value(a)? {
        merged.extend(flags);
    }
    merged.entry("trials").or_insert(json!(1000));
    merged
        .entry("master_seed")
        .or_insert_with(|| json!(resolve_seed(None)));
    serde_json::from_value(Value::Object(merged))
        .map_err(|e| Error::InvalidParameter(format!("config: {e}")))
}

fn experiment(a: ExperimentArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let threads = match a.threads {
        Some(t) => Some(t),
        None => threads_from_env()?,
    };
    if threads == Some(0) {
        return Err(Error::InvalidParameter(
            "thread count must be positive".into(),
        ));
    }
    let config = resolve_experiment(&a)?;
    echo(err, &config)?;
    if let Some(path) = &config.out {
        sidecar_path(path)?;
    }
    let output = run_experiment(&config, threads)?;
    match &config.out {
        Some(path) => {
            write_results(&output, path)?;
            writeln!(
                err,
                "wrote {} and {}",
                path.display(),
                sidecar_path(path)?.display()
            )?;
        }
        None => {
            write_csv(&output.records, &mut *out)?;
            write!(err, "{}", summary_json(&output)?)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("rankdec").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn count_examples() {
        assert_eq!(
            call(&["count", "--q", "2", "--m", "2", "--n", "2", "--rho", "1/2"]).1,
            "10\n"
        );
        assert_eq!(
            call(&["count", "--q", "2", "--grassmann", "4", "2"]).1,
            "35\n"
        );
        assert_eq!(
            call(&["count", "--q", "2", "--m", "2", "--rank", "1"]).1,
            "9\n"
        );
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            call(&["count", "--q", "2", "--m", "2", "--rho", "0.5"]).0,
            1
        );
        assert_eq!(call(&["count", "--q", "6", "--grassmann", "4", "2"]).0, 1);
        assert_eq!(call(&["frobnicate"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
        assert_eq!(
            call(&["count", "--q", "2", "--m", "2", "--n", "3", "--rho", "1/2"]).0,
            1
        );
        let (code, _, err) = call(&[
            "experiment",
            "--id",
            "lemma43",
            "--q",
            "2",
            "--m",
            "8",
            "--rho",
            "1/2",
            "--ell",
            "30",
            "--c-span",
            "2",
            "--trials",
            "1",
            "--seed",
            "1",
        ]);
        assert_eq!(code, 2, "{err}");
    }

    #[test]
    fn seed_is_echoed_when_drawn() {
        let (code, _, err) = call(&[
            "sample", "--kind", "ball", "--q", "2", "--m", "2", "--rho", "1/2",
        ]);
        assert_eq!(code, 0);
        assert!(err.contains("\"seed\":"), "{err}");
    }
}
