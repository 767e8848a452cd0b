//! Seeded Monte Carlo experiments with exact enumeration oracles at small sizes.
//!
//! Trial `i` draws everything from `SeedSpec::new(master_seed).rng(i)`, so the
//! records depend only on the configuration, never on the thread schedule.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::codes::{enumerate_ball, DecodingParams, ListDecoder, RankCode};
use crate::counting::{ball_volume, gaussian_binomial, BallSpec};
use crate::fraction::{ratio_to_f64, Fraction};
use crate::gf::Field;
use crate::matgf::{field_for_order, vector_to_matrix, Matrix, Subspace};
use crate::sampling::{
    inclusion_probability, sample_random_code, sample_random_linear_code, sample_uniform_matrix,
    sample_uniform_rank_matrix, sample_uniform_subspace, universe_size, BallSampler, SeedSpec,
    TrialRng,
};
use crate::{Error, Rational, Result};

/// Two-sided 99% normal quantile used by the Wilson interval.
pub const WILSON_Z99: f64 = 2.5758293035489004;
/// Largest enumeration performed by an exact oracle.
pub const ORACLE_LIMIT: u64 = 1 << 22;
/// Largest span enumerated per trial.
pub const SPAN_LIMIT: u64 = 1 << 20;
/// Largest code enumerated per trial.
pub const CODE_LIMIT: u64 = 1 << 22;
/// Center count when sampling is needed and none is configured.
pub const DEFAULT_CENTERS: u64 = 1000;
/// Exhaustive centers are used by default up to this many.
pub const EXHAUSTIVE_CENTER_LIMIT: u64 = 1 << 20;
/// Trial index reserved for drawing a fixed random center.
pub const CENTER_STREAM: u64 = u64::MAX;

pub const CSV_HEADER: [&str; 8] = [
    "experiment",
    "trial",
    "q",
    "m",
    "n",
    "param_json",
    "outcome",
    "count",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentId {
    Lemma41,
    Claim42,
    Lemma43,
    Theorem31,
    RandcodeA1,
    RandcodeA2,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 6] = [
        ExperimentId::Lemma41,
        ExperimentId::Claim42,
        ExperimentId::Lemma43,
        ExperimentId::Theorem31,
        ExperimentId::RandcodeA1,
        ExperimentId::RandcodeA2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::Lemma41 => "lemma41",
            ExperimentId::Claim42 => "claim42",
            ExperimentId::Lemma43 => "lemma43",
            ExperimentId::Theorem31 => "theorem31",
            ExperimentId::RandcodeA1 => "randcode_a1",
            ExperimentId::RandcodeA2 => "randcode_a2",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown experiment id {s:?}")))
    }
}

/// Center used by the two-matrix experiment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterMode {
    #[default]
    Zero,
    /// One uniform matrix drawn from the reserved stream [`CENTER_STREAM`].
    Random,
}

/// Declarative description of one experiment. Field names double as the JSON config keys.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: ExperimentId,
    pub q: u64,
    pub m: usize,
    /// Defaults to `m`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Fraction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Fraction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Fraction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Fraction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s2: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d2: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    /// Span constant C: the lemma43 event is `count ≥ C·ℓ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_span: Option<u64>,
    /// List size L.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub list_bound: Option<u64>,
    /// Code dimension override for theorem31.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Sampled centers per code; exhaustive when unset and feasible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centers: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<CenterMode>,
    pub trials: u64,
    pub master_seed: u64,
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Minimal configuration; every optional parameter unset.
    pub fn new(
        id: ExperimentId,
        q: u64,
        m: usize,
        n: usize,
        trials: u64,
        master_seed: u64,
    ) -> Self {
        ExperimentConfig {
            id,
            q,
            m,
            n: Some(n),
            rho: None,
            epsilon: None,
            alpha: None,
            delta: None,
            s1: None,
            s2: None,
            d1: None,
            d2: None,
            ell: None,
            c_span: None,
            list_bound: None,
            k: None,
            centers: None,
            center: None,
            trials,
            master_seed,
            out: None,
        }
    }

    pub fn n(&self) -> usize {
        self.n.unwrap_or(self.m)
    }

    fn require<'a, T>(&self, value: &'a Option<T>, name: &str) -> Result<&'a T> {
        value
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter(format!("{} needs `{name}`", self.id)))
    }

    fn rho(&self) -> Result<Rational> {
        Ok(self.require(&self.rho, "rho")?.value().clone())
    }

    fn epsilon(&self) -> Result<Rational> {
        let e = self.require(&self.epsilon, "epsilon")?.value().clone();
        if e <= Rational::zero() {
            return Err(Error::OutOfRange("epsilon must be positive".into()));
        }
        Ok(e)
    }

    fn matrix_shape(&self) -> Result<(Field, usize, usize)> {
        let (m, n) = (self.m, self.n());
        if n == 0 || m < n {
            return Err(Error::InvalidParameter(format!(
                "need m >= n >= 1 (transpose otherwise), got m = {m}, n = {n}"
            )));
        }
        Ok((field_for_order(self.q)?, m, n))
    }
}

/// Ball with `ρ ∈ [0, 1]`; the endpoints give the zero ball and the whole space.
pub fn ball_spec(q: u64, m: usize, n: usize, rho: &Rational) -> Result<BallSpec> {
    if *rho < Rational::zero() || *rho > Rational::one() {
        return Err(Error::OutOfRange(format!(
            "rho = {} must lie in [0, 1]",
            Fraction(rho.clone())
        )));
    }
    if rho.is_zero() || rho.is_one() {
        BallSpec::with_radius(q, m, n, Fraction(rho.clone()).floor_times(n) as usize)
    } else {
        BallSpec::new(q, m, n, rho)
    }
}

/// 99% Wilson score interval. Zero trials give `[0, 1]`.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let t = trials as f64;
    let p = successes as f64 / t;
    let z2 = WILSON_Z99 * WILSON_Z99;
    let denom = 1.0 + z2 / t;
    let center = (p + z2 / (2.0 * t)) / denom;
    let half = WILSON_Z99 * (p * (1.0 - p) / t + z2 / (4.0 * t * t)).sqrt() / denom;
    (
        (center - half).max(0.0).min(p),
        (center + half).min(1.0).max(p),
    )
}

/// `|p̂ − p| ≤ 3·sqrt(p(1 − p)/t)`; a degenerate `p` demands an exact match.
pub fn within_3sigma(successes: u64, trials: u64, p: f64) -> bool {
    if trials == 0 {
        return true;
    }
    let t = trials as f64;
    let est = successes as f64 / t;
    let sigma = (p * (1.0 - p) / t).sqrt();
    (est - p).abs() <= 3.0 * sigma + 1e-12
}

/// Mean and standard error of the mean.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    WithinBound,
    /// The lower Wilson limit lies above the bound.
    ExceedsBound,
    NoBound,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub experiment: ExperimentId,
    pub trial: u64,
    pub q: u64,
    pub m: usize,
    pub n: usize,
    pub params: Value,
    pub outcome: bool,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryStats {
    pub trials: u64,
    pub successes: u64,
    /// `None` when there are no trials.
    pub estimate: Option<f64>,
    pub wilson_lower: f64,
    pub wilson_upper: f64,
    pub bound: Option<f64>,
    pub verdict: Verdict,
    /// Experiment-specific diagnostics: oracle values, means, histograms.
    pub diagnostics: Value,
}

impl SummaryStats {
    pub fn from_counts(trials: u64, successes: u64, bound: Option<f64>) -> Self {
        let (wilson_lower, wilson_upper) = wilson_interval(successes, trials);
        let verdict = match bound {
            None => Verdict::NoBound,
            Some(b) if wilson_lower > b => Verdict::ExceedsBound,
            Some(_) => Verdict::WithinBound,
        };
        SummaryStats {
            trials,
            successes,
            estimate: (trials > 0).then(|| successes as f64 / trials as f64),
            wilson_lower,
            wilson_upper,
            bound,
            verdict,
            diagnostics: json!({}),
        }
    }

    fn of_records(records: &[TrialRecord], bound: Option<f64>) -> Self {
        let successes = records.iter().filter(|r| r.outcome).count() as u64;
        SummaryStats::from_counts(records.len() as u64, successes, bound)
    }

    fn diag(&mut self, key: &str, value: Value) {
        self.diagnostics
            .as_object_mut()
            .expect("diagnostics is an object")
            .insert(key.to_string(), value);
    }

    pub fn diagnostic(&self, key: &str) -> Option<&Value> {
        self.diagnostics.get(key)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
    pub summary: SummaryStats,
}

/// Runs `config` on a pool of `threads` workers (all cores when `None`).
pub fn run_experiment(
    config: &ExperimentConfig,
    threads: Option<usize>,
) -> Result<ExperimentOutput> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(|| match config.id {
        ExperimentId::Lemma41 => run_lemma41(config),
        ExperimentId::Claim42 => run_claim42(config),
        ExperimentId::Lemma43 => run_lemma43(config),
        ExperimentId::Theorem31 => run_theorem31(config),
        ExperimentId::RandcodeA1 => run_randcode(config, RandcodeVariant::A1),
        ExperimentId::RandcodeA2 => run_randcode(config, RandcodeVariant::A2),
    })
}

fn run_trials<T, F>(config: &ExperimentConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut TrialRng) -> Result<T> + Sync + Send,
{
    let seeds = SeedSpec::new(config.master_seed);
    (0..config.trials)
        .into_par_iter()
        .map(|i| f(i, &mut seeds.rng(i)))
        .collect()
}

fn record(
    config: &ExperimentConfig,
    trial: u64,
    params: Value,
    outcome: bool,
    count: u64,
) -> TrialRecord {
    TrialRecord {
        experiment: config.id,
        trial,
        q: config.q,
        m: config.m,
        n: config.n(),
        params,
        outcome,
        count,
    }
}

fn frac(r: &Rational) -> Value {
    Value::String(Fraction(r.clone()).to_string())
}

fn guard(what: &'static str, needed: &BigUint, limit: u64) -> Result<()> {
    if *needed > BigUint::from(limit) {
        return Err(Error::GuardExceeded {
            what,
            needed: needed.to_string(),
            limit,
        });
    }
    Ok(())
}

fn rat(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn big_rat(n: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

// ---------------------------------------------------------------------------
// Sum of two ball elements

/// Exact `Pr[rank(X1 + X2 − Y) ≤ r_max]` for X1, X2 iid uniform in the ball, by pair enumeration.
pub fn lemma41_exact(field: &Field, spec: &BallSpec, y: &Matrix) -> Result<Rational> {
    let volume = ball_volume(spec);
    guard("pair enumeration |B|^2", &(&volume * &volume), ORACLE_LIMIT)?;
    let ball = enumerate_ball(field, spec.m, spec.n, spec.r_max)?;
    let hits: usize = ball
        .par_iter()
        .map(|x1| {
            let shifted = x1.sub(y).expect("same shape");
            ball.iter()
                .filter(|x2| shifted.add(x2).expect("same shape").rank() <= spec.r_max)
                .count()
        })
        .sum();
    Ok(Rational::new(
        BigInt::from(hits),
        BigInt::from(ball.len() * ball.len()),
    ))
}

pub fn run_lemma41(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let (field, m, n) = config.matrix_shape()?;
    let rho = config.rho()?;
    let spec = ball_spec(config.q, m, n, &rho)?;
    let sampler = BallSampler::new(&field, &spec)?;
    let conditioned = match (config.s1, config.s2) {
        (Some(a), Some(b)) if a <= spec.r_max && b <= spec.r_max => Some((a, b)),
        (None, None) => None,
        (Some(_), Some(_)) => {
            return Err(Error::OutOfRange(format!(
                "s1, s2 must not exceed r_max = {}",
                spec.r_max
            )))
        }
        _ => {
            return Err(Error::InvalidParameter(
                "s1 and s2 must be given together".into(),
            ))
        }
    };
    let mode = config.center.unwrap_or_default();
    let y = match mode {
        CenterMode::Zero => Matrix::zeros(field.clone(), m, n),
        CenterMode::Random => sample_uniform_matrix(
            &field,
            m,
            n,
            &mut SeedSpec::new(config.master_seed).rng(CENTER_STREAM),
        ),
    };
    let records = run_trials(config, |i, rng| {
        let (x1, x2) = match conditioned {
            Some((a, b)) => (
                sample_uniform_rank_matrix(&field, m, n, a, rng)?,
                sample_uniform_rank_matrix(&field, m, n, b, rng)?,
            ),
            None => (sampler.sample(rng), sampler.sample(rng)),
        };
        let d = x1.add(&x2)?.sub(&y)?.rank();
        let params = json!({"rank_x1": x1.rank(), "rank_x2": x2.rank()});
        Ok(record(config, i, params, d <= spec.r_max, d as u64))
    })?;
    let mut summary = SummaryStats::of_records(&records, None);
    let volume = ball_volume(&spec);
    summary.diag("r_max", json!(spec.r_max));
    summary.diag("ball_volume", json!(volume.to_string()));
    summary.diag("degenerate", json!(spec.is_degenerate()));
    summary.diag("center", json!(mode));
    if let Some((a, b)) = conditioned {
        summary.diag("conditioned_ranks", json!([a, b]));
    }
    // δ defaults to ε = 1 − ρ; the proof restricts attention to (1 − δ)r ≤ s_j ≤ r.
    let eps = Rational::one() - &rho;
    let delta = config
        .delta
        .as_ref()
        .map(|d| d.value().clone())
        .unwrap_or_else(|| eps.clone());
    let low = ((Rational::one() - &delta) * rat(spec.r_max))
        .ceil()
        .to_integer();
    summary.diag("delta", frac(&delta));
    summary.diag(
        "rank_window",
        json!([low.to_u64().unwrap_or(0), spec.r_max]),
    );
    if let Some(p) = summary.estimate.filter(|&p| p > 0.0) {
        summary.diag(
            "log_q_estimate_per_nm",
            json!(p.log(config.q as f64) / (m * n) as f64),
        );
    }
    if conditioned.is_none() && &volume * &volume <= BigUint::from(ORACLE_LIMIT) {
        let exact = ratio_to_f64(&lemma41_exact(&field, &spec, &y)?);
        summary.diag("exact", json!(exact));
        summary.diag(
            "exact_within_3sigma",
            json!(within_3sigma(summary.successes, summary.trials, exact)),
        );
    }
    Ok(ExperimentOutput {
        config: config.clone(),
        records,
        summary,
    })
}

// ---------------------------------------------------------------------------
// Intersections of random subspaces

/// `64 · q^{α(1−α)d2² − α d2 (m − d1)}`.
pub fn claim42_bound(q: u64, m: usize, d1: usize, d2: usize, alpha: &Rational) -> f64 {
    let a = ratio_to_f64(alpha);
    let (d1, d2, m) = (d1 as f64, d2 as f64, m as f64);
    64.0 * (q as f64).powf(a * (1.0 - a) * d2 * d2 - a * d2 * (m - d1))
}

fn exceeds(dim: usize, alpha: &Rational, d2: usize) -> bool {
    rat(dim) > alpha * rat(d2)
}

/// Exact `Pr[dim(U ∩ V) > α d2]` over all pairs of subspaces of dimensions `d1`, `d2`.
pub fn claim42_exact(
    field: &Field,
    m: usize,
    d1: usize,
    d2: usize,
    alpha: &Rational,
) -> Result<Rational> {
    let q = field.q() as u64;
    let pairs = gaussian_binomial(q, m, d1)? * gaussian_binomial(q, m, d2)?;
    guard("subspace pair enumeration", &pairs, ORACLE_LIMIT)?;
    let us = Subspace::enumerate_all(field.clone(), m, d1);
    let vs = Subspace::enumerate_all(field.clone(), m, d2);
    let hits: usize = us
        .par_iter()
        .map(|u| {
            vs.iter()
                .filter(|v| exceeds(u.intersect_dim(v).expect("same ambient"), alpha, d2))
                .count()
        })
        .sum();
    Ok(Rational::new(
        BigInt::from(hits),
        BigInt::from(us.len() * vs.len()),
    ))
}

/// α from the proof's choices: `ε = 1 − ρ`, `δ = ε` unless given, `α = ε²/(ε + δ − δε)`.
pub fn default_alpha(rho: &Rational, delta: Option<&Rational>) -> Rational {
    let eps = Rational::one() - rho;
    let delta = delta.cloned().unwrap_or_else(|| eps.clone());
    &eps * &eps / (&eps + &delta - &delta * &eps)
}

pub fn run_claim42(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let field = field_for_order(config.q)?;
    let m = config.m;
    let d1 = *config.require(&config.d1, "d1")?;
    let d2 = *config.require(&config.d2, "d2")?;
    if d1 < d2 {
        return Err(Error::InvalidParameter(format!("d1 = {d1} < d2 = {d2}")));
    }
    if d1 > m {
        return Err(Error::OutOfRange(format!("d1 = {d1} exceeds m = {m}")));
    }
    let alpha = match (&config.alpha, &config.rho) {
        (Some(a), _) => a.value().clone(),
        (None, Some(rho)) => default_alpha(rho.value(), config.delta.as_ref().map(|d| d.value())),
        (None, None) => {
            return Err(Error::InvalidParameter(
                "claim42 needs `alpha` or `rho`".into(),
            ))
        }
    };
    if alpha <= Rational::zero() || alpha >= Rational::one() {
        return Err(Error::OutOfRange("alpha must lie in (0, 1)".into()));
    }
    let records = run_trials(config, |i, rng| {
        let u = sample_uniform_subspace(&field, m, d1, rng)?;
        let v = sample_uniform_subspace(&field, m, d2, rng)?;
        let dim = u.intersect_dim(&v)?;
        Ok(record(
            config,
            i,
            json!({}),
            exceeds(dim, &alpha, d2),
            dim as u64,
        ))
    })?;
    let bound = claim42_bound(config.q, m, d1, d2, &alpha);
    let mut summary = SummaryStats::of_records(&records, Some(bound));
    summary.diag("alpha", frac(&alpha));
    summary.diag("d1", json!(d1));
    summary.diag("d2", json!(d2));
    summary.diag(
        "estimate_at_most_bound",
        json!(summary.estimate.map_or(true, |p| p <= bound)),
    );
    let pairs = gaussian_binomial(config.q, m, d1)? * gaussian_binomial(config.q, m, d2)?;
    if pairs <= BigUint::from(ORACLE_LIMIT) {
        let exact = ratio_to_f64(&claim42_exact(&field, m, d1, d2, &alpha)?);
        summary.diag("exact", json!(exact));
        summary.diag(
            "exact_within_3sigma",
            json!(within_3sigma(summary.successes, summary.trials, exact)),
        );
    }
    Ok(ExperimentOutput {
        config: config.clone(),
        records,
        summary,
    })
}

// ---------------------------------------------------------------------------
// Span of several ball elements

/// `|span{X_1..X_ℓ} ∩ B_R(0, ρ)|`, counting distinct matrices.
pub fn span_ball_count(field: &Field, m: usize, n: usize, r_max: usize, xs: &[Matrix]) -> usize {
    let span = Subspace::from_vectors(
        field.clone(),
        m * n,
        xs.iter().map(|x| x.data().to_vec()).collect(),
    );
    let size = (field.q() as u64).pow(span.dim() as u32);
    (0..size)
        .filter(|&i| vector_to_matrix(field, m, n, &span.combination(i)).rank() <= r_max)
        .count()
}

/// Exact distribution of the span count over all `|B|^ℓ` tuples.
pub fn lemma43_exact_distribution(
    field: &Field,
    spec: &BallSpec,
    ell: usize,
) -> Result<BTreeMap<usize, Rational>> {
    let volume = ball_volume(spec);
    guard(
        "tuple enumeration |B|^ell",
        &num_traits::pow(volume, ell),
        ORACLE_LIMIT,
    )?;
    let ball = enumerate_ball(field, spec.m, spec.n, spec.r_max)?;
    let total = (ball.len() as u64).pow(ell as u32);
    let counts: Vec<usize> = (0..total)
        .into_par_iter()
        .map(|mut t| {
            let xs: Vec<Matrix> = (0..ell)
                .map(|_| {
                    let x = ball[(t % ball.len() as u64) as usize].clone();
                    t /= ball.len() as u64;
                    x
                })
                .collect();
            span_ball_count(field, spec.m, spec.n, spec.r_max, &xs)
        })
        .collect();
    let mut hist = BTreeMap::new();
    for c in counts {
        *hist.entry(c).or_insert(0u64) += 1;
    }
    Ok(hist
        .into_iter()
        .map(|(c, k)| (c, Rational::new(BigInt::from(k), BigInt::from(total))))
        .collect())
}

pub fn run_lemma43(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let (field, m, n) = config.matrix_shape()?;
    let rho = config.rho()?;
    let spec = ball_spec(config.q, m, n, &rho)?;
    let ell = *config.require(&config.ell, "ell")?;
    let c_span = *config.require(&config.c_span, "c_span")?;
    if ell == 0 {
        return Err(Error::OutOfRange("ell must be at least 1".into()));
    }
    let span_size = universe_size(config.q, ell)
        .map(BigUint::from)
        .unwrap_or_else(|| num_traits::pow(BigUint::from(config.q), ell));
    guard("span enumeration q^ell", &span_size, SPAN_LIMIT)?;
    let threshold = c_span * ell as u64;
    let sampler = BallSampler::new(&field, &spec)?;
    let records = run_trials(config, |i, rng| {
        let xs: Vec<Matrix> = (0..ell).map(|_| sampler.sample(rng)).collect();
        let count = span_ball_count(&field, m, n, spec.r_max, &xs) as u64;
        let dim = Subspace::from_vectors(
            field.clone(),
            m * n,
            xs.iter().map(|x| x.data().to_vec()).collect(),
        )
        .dim();
        Ok(record(
            config,
            i,
            json!({"span_dim": dim}),
            count >= threshold,
            count,
        ))
    })?;
    let mut summary = SummaryStats::of_records(&records, None);
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    for r in &records {
        *hist.entry(r.count).or_insert(0) += 1;
    }
    let max_count = hist.keys().next_back().copied().unwrap_or(0);
    summary.diag("r_max", json!(spec.r_max));
    summary.diag("degenerate", json!(spec.is_degenerate()));
    summary.diag("threshold", json!(threshold));
    summary.diag(
        "histogram",
        json!(hist
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect::<BTreeMap<_, _>>()),
    );
    summary.diag("max_count", json!(max_count));
    // every C above max_count / ℓ has an empty empirical tail
    summary.diag(
        "empirical_threshold",
        frac(&Rational::new(BigInt::from(max_count), BigInt::from(ell))),
    );
    if num_traits::pow(ball_volume(&spec), ell) <= BigUint::from(ORACLE_LIMIT) {
        let exact = lemma43_exact_distribution(&field, &spec, ell)?;
        let tail: Rational = exact
            .iter()
            .filter(|(&c, _)| c as u64 >= threshold)
            .map(|(_, p)| p.clone())
            .sum();
        let tail = ratio_to_f64(&tail);
        let support_ok = hist.keys().all(|&c| exact.contains_key(&(c as usize)));
        let each_ok = exact.iter().all(|(&c, p)| {
            within_3sigma(
                hist.get(&(c as u64)).copied().unwrap_or(0),
                summary.trials,
                ratio_to_f64(p),
            )
        });
        summary.diag(
            "exact_distribution",
            json!(exact
                .iter()
                .map(|(c, p)| (c.to_string(), ratio_to_f64(p)))
                .collect::<BTreeMap<_, _>>()),
        );
        summary.diag("exact", json!(tail));
        summary.diag(
            "exact_within_3sigma",
            json!(within_3sigma(summary.successes, summary.trials, tail)),
        );
        summary.diag(
            "exact_distribution_within_3sigma",
            json!(support_ok && each_ok),
        );
    }
    Ok(ExperimentOutput {
        config: config.clone(),
        records,
        summary,
    })
}

// ---------------------------------------------------------------------------
// Random linear codes

/// `E|B(Y, ρ) ∩ C|` for a uniform k-dimensional code and an independent uniform center:
/// every matrix lies in `|B|` of the `q^{mn}` balls, so the mean is `q^k |B| / q^{mn}`.
pub fn expected_list_size_linear(
    q: u64,
    m: usize,
    n: usize,
    k: usize,
    volume: &BigUint,
) -> Rational {
    let qb = BigUint::from(q);
    Rational::new(
        BigInt::from(num_traits::pow(qb.clone(), k) * volume),
        BigInt::from(num_traits::pow(qb, m * n)),
    )
}

/// `(|B| − 1)(q^k − 1)/(q^{mn} − 1) + |B|/q^{mn}`: nonzero matrices weighted by
/// `Pr[X ∈ C]` plus the zero matrix weighted by `Pr[0 ∈ B(Y, ρ)]`.
///
/// This equals [`expected_list_size_linear`] only when `|B| = q^{mn}`; otherwise it
/// is smaller by `(q^k − 1)(q^{mn} − |B|)/(q^{mn}(q^{mn} − 1))`, because it treats the
/// nonzero matrices as if each were in the ball with certainty.
pub fn expected_list_size_split(
    q: u64,
    m: usize,
    n: usize,
    k: usize,
    volume: &BigUint,
) -> Rational {
    let qb = BigUint::from(q);
    let big_n = big_rat(&num_traits::pow(qb.clone(), m * n));
    let qk = big_rat(&num_traits::pow(qb, k));
    let v = big_rat(volume);
    let one = Rational::one();
    (&v - &one) * (&qk - &one) / (&big_n - &one) + &v / &big_n
}

enum Centers {
    Exhaustive(u64),
    Sampled(u64),
}

impl Centers {
    fn resolve(config: &ExperimentConfig, m: usize, n: usize) -> Result<Centers> {
        match config.centers {
            Some(0) => Err(Error::OutOfRange("centers must be positive".into())),
            Some(c) => Ok(Centers::Sampled(c)),
            None => Ok(
                match universe_size(config.q, m * n).filter(|&t| t <= EXHAUSTIVE_CENTER_LIMIT) {
                    Some(t) => Centers::Exhaustive(t),
                    None => Centers::Sampled(DEFAULT_CENTERS),
                },
            ),
        }
    }

    fn len(&self) -> u64 {
        match self {
            Centers::Exhaustive(t) | Centers::Sampled(t) => *t,
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Centers::Exhaustive(_) => "exhaustive",
            Centers::Sampled(_) => "sampled",
        }
    }

    /// `(max, sum)` of list sizes over the centers.
    fn scan(
        &self,
        decoder: &ListDecoder<'_>,
        field: &Field,
        m: usize,
        n: usize,
        rng: &mut TrialRng,
    ) -> Result<(u64, u64)> {
        let mut best = 0u64;
        let mut sum = 0u64;
        for i in 0..self.len() {
            let y = match self {
                Centers::Exhaustive(_) => Matrix::from_index(field.clone(), m, n, i),
                Centers::Sampled(_) => sample_uniform_matrix(field, m, n, rng),
            };
            let c = decoder.count(&y)? as u64;
            best = best.max(c);
            sum += c;
        }
        Ok((best, sum))
    }
}

fn ceil_div(r: &Rational) -> u64 {
    r.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
}

fn mean_diagnostics(
    summary: &mut SummaryStats,
    records: &[TrialRecord],
    centers: u64,
    expected: f64,
) {
    let means: Vec<f64> = records
        .iter()
        .map(|r| r.params["count_sum"].as_u64().unwrap_or(0) as f64 / centers as f64)
        .collect();
    let (mean, stderr) = mean_and_stderr(&means);
    summary.diag("mean_count", json!(mean));
    summary.diag("mean_count_stderr", json!(stderr));
    summary.diag("expected_mean", json!(expected));
    summary.diag(
        "mean_within_3sigma",
        json!((mean - expected).abs() <= 3.0 * stderr + 1e-12),
    );
}

pub fn run_theorem31(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let (field, m, n) = config.matrix_shape()?;
    let rho = config.rho()?;
    let eps = config.epsilon()?;
    let default_l = ceil_div(&(Rational::one() / &eps));
    let params = DecodingParams::new(m, n, &rho, &eps, config.list_bound.unwrap_or(default_l))?;
    let k = config.k.unwrap_or_else(|| params.dimension(m, n));
    if k > m * n {
        return Err(Error::OutOfRange(format!("k = {k} exceeds mn = {}", m * n)));
    }
    guard(
        "codewords q^k",
        &num_traits::pow(BigUint::from(config.q), k),
        CODE_LIMIT,
    )?;
    let spec = BallSpec::new(config.q, m, n, &rho)?;
    let centers = Centers::resolve(config, m, n)?;
    let records = run_trials(config, |i, rng| {
        let space = sample_random_linear_code(&field, m, n, k, rng)?;
        let code = RankCode::linear(field.clone(), m, n, space)?;
        let decoder = ListDecoder::new(&code, &spec)?;
        let (best, sum) = centers.scan(&decoder, &field, m, n, rng)?;
        Ok(record(
            config,
            i,
            json!({"k": k, "count_sum": sum}),
            best <= params.list_bound,
            best,
        ))
    })?;
    let mut summary = SummaryStats::of_records(&records, None);
    let volume = ball_volume(&spec);
    let exact = expected_list_size_linear(config.q, m, n, k, &volume);
    let split = expected_list_size_split(config.q, m, n, k, &volume);
    summary.diag("k", json!(k));
    summary.diag("rate_target", frac(&params.rate));
    summary.diag(
        "rate_actual",
        frac(&Rational::new(BigInt::from(k), BigInt::from(m * n))),
    );
    summary.diag("capacity", frac(&params.capacity));
    summary.diag("list_bound", json!(params.list_bound));
    summary.diag("r_max", json!(spec.r_max));
    summary.diag("ball_volume", json!(volume.to_string()));
    summary.diag("centers", json!(centers.len()));
    summary.diag("center_mode", json!(centers.label()));
    summary.diag(
        "max_list",
        json!(records.iter().map(|r| r.count).max().unwrap_or(0)),
    );
    mean_diagnostics(&mut summary, &records, centers.len(), ratio_to_f64(&exact));
    let split = ratio_to_f64(&split);
    let (mean, stderr) = (
        summary
            .diagnostic("mean_count")
            .and_then(Value::as_f64)
            .unwrap_or(0.0),
        summary
            .diagnostic("mean_count_stderr")
            .and_then(Value::as_f64)
            .unwrap_or(0.0),
    );
    summary.diag("expected_mean_split", json!(split));
    summary.diag(
        "mean_within_3sigma_split",
        json!((mean - split).abs() <= 3.0 * stderr + 1e-12),
    );
    Ok(ExperimentOutput {
        config: config.clone(),
        records,
        summary,
    })
}

// ---------------------------------------------------------------------------
// Uniformly random (non-linear) codes

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandcodeVariant {
    /// Rate `(1 − ρ)(1 − bρ) − ε`.
    A1,
    /// Radius `1 − ε`, rate `(ε − εb + ε²b)/2`, list bound `⌈4/(ε − εb + ε²b)⌉ − 1`.
    A2,
}

/// `(ρ, R, L)` for a randcode variant.
pub fn randcode_parameters(
    config: &ExperimentConfig,
    variant: RandcodeVariant,
) -> Result<(Rational, Rational, u64)> {
    let (m, n) = (config.m, config.n());
    let eps = config.epsilon()?;
    let one = Rational::one();
    match variant {
        RandcodeVariant::A1 => {
            let rho = config.rho()?;
            let default_l = ceil_div(&(&one / &eps));
            let p = DecodingParams::new(m, n, &rho, &eps, config.list_bound.unwrap_or(default_l))?;
            Ok((rho, p.rate, p.list_bound))
        }
        RandcodeVariant::A2 => {
            if eps > one {
                return Err(Error::OutOfRange("epsilon must not exceed 1".into()));
            }
            let rho = &one - &eps;
            if let Some(given) = &config.rho {
                if *given.value() != rho {
                    return Err(Error::InvalidParameter(
                        "randcode_a2 fixes rho = 1 - epsilon".into(),
                    ));
                }
            }
            let b = Rational::new(BigInt::from(n), BigInt::from(m));
            let g = &eps - &eps * &b + &eps * &eps * &b;
            let rate = &g / Rational::from_integer(2.into());
            let default_l = ceil_div(&(Rational::from_integer(4.into()) / &g))
                .saturating_sub(1)
                .max(1);
            Ok((rho, rate, config.list_bound.unwrap_or(default_l)))
        }
    }
}

pub fn run_randcode(
    config: &ExperimentConfig,
    variant: RandcodeVariant,
) -> Result<ExperimentOutput> {
    let (field, m, n) = config.matrix_shape()?;
    let (rho, rate, list_bound) = randcode_parameters(config, variant)?;
    if rate < Rational::zero() || rate > Rational::one() {
        return Err(Error::OutOfRange(format!(
            "rate {} outside [0, 1]",
            Fraction(rate)
        )));
    }
    let spec = ball_spec(config.q, m, n, &rho)?;
    let centers = Centers::resolve(config, m, n)?;
    let records = run_trials(config, |i, rng| {
        let words = sample_random_code(&field, m, n, &rate, rng)?;
        let size = words.len();
        let code = RankCode::general(field.clone(), m, n, words)?;
        let decoder = ListDecoder::new(&code, &spec)?;
        let (best, sum) = centers.scan(&decoder, &field, m, n, rng)?;
        Ok(record(
            config,
            i,
            json!({"code_size": size, "count_sum": sum}),
            best <= list_bound,
            best,
        ))
    })?;
    let mut summary = SummaryStats::of_records(&records, None);
    let volume = ball_volume(&spec);
    let p = inclusion_probability(config.q, m, n, &rate);
    let expected = volume.to_f64().unwrap_or(f64::INFINITY) * p;
    summary.diag("rho", frac(&rho));
    summary.diag("rate", frac(&rate));
    summary.diag("list_bound", json!(list_bound));
    summary.diag("r_max", json!(spec.r_max));
    summary.diag("ball_volume", json!(volume.to_string()));
    summary.diag("inclusion_probability", json!(p));
    summary.diag("centers", json!(centers.len()));
    summary.diag("center_mode", json!(centers.label()));
    summary.diag(
        "max_list",
        json!(records.iter().map(|r| r.count).max().unwrap_or(0)),
    );
    mean_diagnostics(&mut summary, &records, centers.len(), expected);
    Ok(ExperimentOutput {
        config: config.clone(),
        records,
        summary,
    })
}

// ---------------------------------------------------------------------------
// Output

/// JSON sidecar next to a CSV path: same stem, `.json` extension.
pub fn sidecar_path(path: &Path) -> Result<PathBuf> {
    let side = path.with_extension("json");
    if side == path {
        return Err(Error::InvalidParameter(format!(
            "output path {} would collide with its JSON summary",
            path.display()
        )));
    }
    Ok(side)
}

/// Writes the CSV header and one row per record.
pub fn write_csv<W: std::io::Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.experiment.as_str().to_string(),
            r.trial.to_string(),
            r.q.to_string(),
            r.m.to_string(),
            r.n.to_string(),
            serde_json::to_string(&r.params)?,
            u8::from(r.outcome).to_string(),
            r.count.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `{config, summary}` as pretty JSON with a trailing newline.
pub fn summary_json(output: &ExperimentOutput) -> Result<String> {
    let mut text = serde_json::to_string_pretty(output)?;
    text.push('\n');
    Ok(text)
}

/// Writes the records as CSV to `path` and `{config, summary}` as JSON to the sidecar.
pub fn write_results(output: &ExperimentOutput, path: &Path) -> Result<()> {
    let side = sidecar_path(path)?;
    write_csv(
        &output.records,
        std::io::BufWriter::new(std::fs::File::create(path)?),
    )?;
    std::fs::write(side, summary_json(output)?)?;
    Ok(())
}
