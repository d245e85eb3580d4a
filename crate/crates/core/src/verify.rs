//! Verification oracles: exact and Monte Carlo coverage, tightness witnesses,
//! golden tables, structural sweeps and sequential sampling.
//!
//! Every random quantity comes from [`ChaCha8Rng`] seeded with
//! `seed_from_u64(seed)` and switched to a stream per partition or per run,
//! so results do not depend on the number of worker threads.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::intervals::{bound_table, qhat_f, CiQuery, Method, Side};
use crate::inverse::{r_linear, s_max, u_linear};
use crate::poibin::{
    alpha_dagger, best_extremal_cdf, bound_branch, exact_pmf, f_bound, q_max, BernoulliModel,
    BoundBranch, HoeffdingIndex,
};
use crate::special::{binom_pmf, binom_tail, inv_reg_inc_beta, reg_inc_beta};

/// Identifier of the generator recorded in every report.
pub const RNG_ALGORITHM: &str = "chacha8/seed_from_u64/stream=partition";

/// Number of independent streams a Monte Carlo estimate is split into.
pub const MC_PARTITIONS: u64 = 32;

/// Confidence parameters used by the coverage sweep.
pub const SWEEP_ALPHAS: [f64; 6] = [0.01, 0.05, 0.1, 0.25, 0.5, 0.9];

#[derive(Debug, Clone, Serialize)]
pub struct CoverageReport {
    pub model: BernoulliModel,
    pub method: Method,
    pub side: Side,
    pub alpha: f64,
    pub exact_coverage: f64,
    pub mc_coverage: Option<f64>,
    pub mc_trials: u64,
    pub seed: u64,
    pub rng: &'static str,
}

impl CoverageReport {
    /// Binomial standard error of the Monte Carlo estimate around the exact value.
    pub fn mc_sigma(&self) -> f64 {
        if self.mc_trials == 0 {
            return 0.0;
        }
        let p = self.exact_coverage;
        (p * (1.0 - p) / self.mc_trials as f64).sqrt()
    }
}

fn covers(side: Side, estimate: f64, qbar: f64) -> bool {
    match side {
        Side::Lower => estimate <= qbar,
        Side::Upper => estimate >= qbar,
    }
}

/// Probability that the bound holds, summed from the exact success-count PMF.
pub fn exact_coverage(
    model: &BernoulliModel,
    method: Method,
    side: Side,
    alpha: f64,
) -> Result<CoverageReport> {
    let table = bound_table(method, side, model.len(), alpha)?;
    Ok(CoverageReport {
        model: model.clone(),
        method,
        side,
        alpha,
        exact_coverage: coverage_from_table(model, side, &table),
        mc_coverage: None,
        mc_trials: 0,
        seed: 0,
        rng: RNG_ALGORITHM,
    })
}

fn coverage_from_table(model: &BernoulliModel, side: Side, table: &[f64]) -> f64 {
    let qbar = model.mean();
    let total: f64 = exact_pmf(model)
        .pmf()
        .iter()
        .zip(table)
        .filter(|(_, &est)| covers(side, est, qbar))
        .map(|(p, _)| p)
        .sum();
    total.clamp(0.0, 1.0)
}

/// Exact coverage of every model in a batch, building one estimator table per
/// model size.
pub fn coverage_from_tables(
    models: &[BernoulliModel],
    method: Method,
    side: Side,
    alpha: f64,
) -> Result<Vec<f64>> {
    let n_max = models.iter().map(BernoulliModel::len).max().unwrap_or(0);
    let tables = (0..=n_max)
        .map(|n| {
            if n == 0 {
                Ok(Vec::new())
            } else {
                bound_table(method, side, n, alpha)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(models
        .iter()
        .map(|m| coverage_from_table(m, side, &tables[m.len()]))
        .collect())
}

fn simulate_successes(model: &BernoulliModel, rng: &mut ChaCha8Rng) -> usize {
    model
        .probs()
        .iter()
        .filter(|&&q| rng.random::<f64>() < q)
        .count()
}

/// Exact coverage plus a simulated estimate from `trials` draws.
pub fn mc_coverage(
    model: &BernoulliModel,
    method: Method,
    side: Side,
    alpha: f64,
    trials: u64,
    seed: u64,
) -> Result<CoverageReport> {
    if trials == 0 {
        return domain("trials must be at least 1");
    }
    let table = bound_table(method, side, model.len(), alpha)?;
    let qbar = model.mean();
    let per = trials / MC_PARTITIONS;
    let extra = trials % MC_PARTITIONS;
    let hits: Vec<u64> = (0..MC_PARTITIONS)
        .into_par_iter()
        .map(|p| {
            let count = per + u64::from(p < extra);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(p);
            (0..count)
                .filter(|_| covers(side, table[simulate_successes(model, &mut rng)], qbar))
                .count() as u64
        })
        .collect();
    let covered: u64 = hits.iter().sum();
    Ok(CoverageReport {
        model: model.clone(),
        method,
        side,
        alpha,
        exact_coverage: coverage_from_table(model, side, &table),
        mc_coverage: Some(covered as f64 / trials as f64),
        mc_trials: trials,
        seed,
        rng: RNG_ALGORITHM,
    })
}

/// Seeded random model mixing free parameters, hard zeros and ones, and
/// repeated values.
pub fn random_model(rng: &mut ChaCha8Rng, n: usize) -> BernoulliModel {
    let mut q: Vec<f64> = Vec::with_capacity(n);
    for _ in 0..n {
        let v = match rng.random_range(0..20) {
            0..=2 => 0.0,
            3..=5 => 1.0,
            6..=9 if !q.is_empty() => q[q.len() - 1],
            _ => rng.random::<f64>(),
        };
        q.push(v);
    }
    BernoulliModel::new(q).expect("probabilities in [0,1]")
}

/// Seeded batch of `count` random models with sizes drawn from `1..=n_max`.
pub fn random_models(count: usize, n_max: usize, seed: u64) -> Vec<BernoulliModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(1..=n_max);
            random_model(&mut rng, n)
        })
        .collect()
}

/// A model showing the lower bound at `k` cannot be raised by `epsilon`.
#[derive(Debug, Clone, Serialize)]
pub struct TightnessWitness {
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub epsilon: f64,
    pub qhat: f64,
    /// Mean of `model`, equal to `qhat + epsilon`.
    pub mean: f64,
    pub model: BernoulliModel,
    /// `f_bound(mean, k-1, n)`.
    pub f_value: f64,
    /// Coverage of any estimator raised above `mean` at `k`: the model's
    /// exact `P(successes ≤ k-1)`.
    pub raised_coverage: f64,
}

impl TightnessWitness {
    pub fn breaks_coverage(&self) -> bool {
        self.raised_coverage < 1.0 - self.alpha
    }
}

pub fn tightness_witness(n: usize, k: usize, alpha: f64, epsilon: f64) -> Result<TightnessWitness> {
    if k == 0 || k > n {
        return domain(format!("k={k} must lie in [1, n={n}]"));
    }
    if !(alpha > 0.0 && alpha < 1.0) || !(epsilon > 0.0) {
        return domain(format!(
            "need 0 < alpha < 1 and epsilon > 0, got {alpha}, {epsilon}"
        ));
    }
    let qhat = qhat_f(CiQuery::new(n, k, alpha)?)?.value;
    let mean = qhat + epsilon;
    if mean > k as f64 / n as f64 {
        return domain(format!("qhat + epsilon = {mean} exceeds k/n"));
    }
    let idx = HoeffdingIndex::from_d(n, k as i64 - 1)?;
    let model = match bound_branch(mean, idx) {
        BoundBranch::Binomial => BernoulliModel::iid(n, mean)?,
        _ => best_extremal_cdf(mean, idx)?.1,
    };
    let raised_coverage = exact_pmf(&model).cdf(idx.d);
    Ok(TightnessWitness {
        n,
        k,
        alpha,
        epsilon,
        qhat,
        mean: model.mean(),
        f_value: f_bound(mean, idx)?,
        model,
        raised_coverage,
    })
}

/// `C(N,y) (y/N)^y ((N-y)/N)^(N-y)`, the peak binomial probability.
pub fn lemma6_check(big_n: u64, y: u64) -> Result<f64> {
    if y == 0 || y >= big_n {
        return domain(format!("need 0 < y < N, got y={y}, N={big_n}"));
    }
    binom_pmf(big_n, y, y as f64 / big_n as f64)
}

/// Printed `α†(d, n)` values for `2 ≤ n ≤ 16`, indexed by `d = 1..n-1`.
pub const TABLE_I: [(usize, &[f64]); 15] = [
    (
        16,
        &[
            0.264, 0.323, 0.352, 0.370, 0.382, 0.391, 0.397, 0.402, 0.405, 0.407, 0.407, 0.405,
            0.400, 0.388, 0.356,
        ],
    ),
    (
        15,
        &[
            0.264, 0.323, 0.352, 0.370, 0.382, 0.390, 0.396, 0.401, 0.403, 0.404, 0.403, 0.398,
            0.387, 0.355,
        ],
    ),
    (
        14,
        &[
            0.264, 0.323, 0.352, 0.369, 0.381, 0.389, 0.395, 0.399, 0.401, 0.400, 0.396, 0.385,
            0.354,
        ],
    ),
    (
        13,
        &[
            0.264, 0.323, 0.351, 0.369, 0.381, 0.389, 0.394, 0.397, 0.397, 0.394, 0.383, 0.353,
        ],
    ),
    (
        12,
        &[
            0.264, 0.323, 0.351, 0.368, 0.380, 0.387, 0.392, 0.393, 0.391, 0.381, 0.352,
        ],
    ),
    (
        11,
        &[
            0.264, 0.322, 0.351, 0.368, 0.379, 0.385, 0.388, 0.387, 0.379, 0.350,
        ],
    ),
    (
        10,
        &[
            0.264, 0.322, 0.350, 0.367, 0.377, 0.382, 0.383, 0.376, 0.349,
        ],
    ),
    (9, &[0.264, 0.322, 0.350, 0.366, 0.374, 0.377, 0.372, 0.346]),
    (8, &[0.264, 0.321, 0.349, 0.363, 0.370, 0.367, 0.344]),
    (7, &[0.264, 0.321, 0.347, 0.359, 0.360, 0.340]),
    (6, &[0.263, 0.320, 0.344, 0.351, 0.335]),
    (5, &[0.263, 0.317, 0.337, 0.328]),
    (4, &[0.262, 0.313, 0.316]),
    (3, &[0.259, 0.296]),
    (2, &[0.250]),
];

/// Printed rationals for `n = 16`, `d = 3..8`: `(d, numerator, denominator, printed)`.
pub const TABLE_II: [(u64, u64, u64, &str); 6] = [
    (3, 286216975729679085, 1152921504606846976, "0.248254"),
    (4, 241805655, 1073741824, "0.225199"),
    (5, 243406518990009375, 1152921504606846976, "0.211122"),
    (6, 7126259765625, 35184372088832, "0.20254"),
    (7, 228126063717356805, 1152921504606846976, "0.197868"),
    (8, 6435, 32768, "0.196381"),
];

fn round_to(x: f64, places: i32) -> f64 {
    let scale = 10f64.powi(places);
    (x * scale).round() / scale
}

#[derive(Debug, Clone, Serialize)]
pub struct TableCell {
    pub table: &'static str,
    pub n: usize,
    pub d: usize,
    pub value: f64,
    pub golden: f64,
    pub pass: bool,
}

/// Optional offset added to one computed cell, used to prove the comparison
/// can fail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    pub n: usize,
    pub d: usize,
    pub delta: f64,
}

/// Every `α†` cell of the golden table, compared after rounding to 3 places.
pub fn table1_check(perturb: Option<Perturbation>) -> Result<Vec<TableCell>> {
    let mut cells = Vec::with_capacity(120);
    for &(n, row) in TABLE_I.iter().rev() {
        for (i, &golden) in row.iter().enumerate() {
            let d = i + 1;
            let mut value = alpha_dagger(HoeffdingIndex::from_d(n, d as i64)?)?;
            if let Some(p) = perturb.filter(|p| p.n == n && p.d == d) {
                value += p.delta;
            }
            let pass = round_to(value, 3) == golden && value >= 0.25 - 1e-12;
            cells.push(TableCell {
                table: "I",
                n,
                d,
                value,
                golden,
                pass,
            });
        }
    }
    Ok(cells)
}

/// Peak binomial probabilities for `n = 16`, `d = 3..8`, compared with the
/// exact rationals after rounding to 6 places; each must also stay below 1/4
/// and agree with its mirror `16 - d`.
pub fn table2_check() -> Result<Vec<TableCell>> {
    TABLE_II
        .iter()
        .map(|&(d, num, den, _)| {
            let value = lemma6_check(16, d)?;
            let mirror = lemma6_check(16, 16 - d)?;
            let golden = num as f64 / den as f64;
            let pass = round_to(value, 6) == round_to(golden, 6)
                && value < 0.25
                && (value - mirror).abs() <= 1e-15;
            Ok(TableCell {
                table: "II",
                n: 16,
                d: d as usize,
                value,
                golden,
                pass,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FloorReport {
    pub n_max: usize,
    pub cells: usize,
    pub min_value: f64,
    pub min_at: (usize, usize),
    pub pass: bool,
}

/// Sweeps `α†(d, n)` over `2 ≤ n ≤ n_max`, `1 ≤ d ≤ n-1` against the floor 1/4.
pub fn alpha_dagger_floor_check(n_max: usize) -> Result<FloorReport> {
    if n_max < 2 {
        return domain("n_max must be at least 2");
    }
    let mut report = FloorReport {
        n_max,
        cells: 0,
        min_value: f64::INFINITY,
        min_at: (0, 0),
        pass: true,
    };
    for n in 2..=n_max {
        for d in 1..n {
            let v = alpha_dagger(HoeffdingIndex::from_d(n, d as i64)?)?;
            report.cells += 1;
            if v < report.min_value {
                report.min_value = v;
                report.min_at = (n, d);
            }
        }
    }
    report.pass = report.min_value >= 0.25 - 1e-12;
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct LinearBoundReport {
    pub n_max: usize,
    pub points: usize,
    /// Largest `Q - R` (or `S - U`); must not be positive.
    pub worst_excess_q: f64,
    pub worst_excess_s: f64,
    /// Largest `|Q - R|` and `|S - U|` at `c = n - 1`.
    pub worst_gap_at_top: f64,
    pub pass: bool,
}

/// `Q ≤ R` on `[c/n, (c+1)/n]` and `S ≤ U` on `[α†, 1]`, with equality for
/// `c = n - 1`.
pub fn linear_bound_check(n_max: usize, grid: usize) -> Result<LinearBoundReport> {
    let rows: Vec<Result<(f64, f64, f64, usize)>> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let (mut eq, mut es, mut gap, mut pts) =
                (f64::NEG_INFINITY, f64::NEG_INFINITY, 0f64, 0);
            for c in 0..n as i64 {
                let idx = HoeffdingIndex::from_c(n, c)?;
                let a_dag = alpha_dagger(idx)?;
                let top = c == n as i64 - 1;
                for i in 0..=grid {
                    let t = i as f64 / grid as f64;
                    let p = ((c as f64 + t) / n as f64).min(1.0);
                    let diff = q_max(idx, p)? - r_linear(idx, p)?;
                    let alpha = a_dag + (1.0 - a_dag) * t;
                    let diff_s = s_max(idx, alpha)? - u_linear(idx, alpha)?;
                    eq = eq.max(diff);
                    es = es.max(diff_s);
                    if top {
                        gap = gap.max(diff.abs()).max(diff_s.abs());
                    }
                    pts += 2;
                }
            }
            Ok((eq, es, gap, pts))
        })
        .collect();
    let mut report = LinearBoundReport {
        n_max,
        points: 0,
        worst_excess_q: f64::NEG_INFINITY,
        worst_excess_s: f64::NEG_INFINITY,
        worst_gap_at_top: 0.0,
        pass: false,
    };
    for row in rows {
        let (eq, es, gap, pts) = row?;
        report.worst_excess_q = report.worst_excess_q.max(eq);
        report.worst_excess_s = report.worst_excess_s.max(es);
        report.worst_gap_at_top = report.worst_gap_at_top.max(gap);
        report.points += pts;
    }
    report.pass = report.worst_excess_q <= 1e-12
        && report.worst_excess_s <= 1e-12
        && report.worst_gap_at_top <= 1e-10;
    Ok(report)
}

/// Success probability of the next round as a function of the outcomes so far.
pub trait SequentialPolicy: Sync {
    fn name(&self) -> String;
    fn next_prob(&self, history: &[bool]) -> f64;
}

/// The same probability every round, i.e. i.i.d. trials.
#[derive(Debug, Clone, Copy)]
pub struct Constant(pub f64);

impl SequentialPolicy for Constant {
    fn name(&self) -> String {
        format!("constant:{}", self.0)
    }

    fn next_prob(&self, _: &[bool]) -> f64 {
        self.0
    }
}

/// Certain success while fewer than half the rounds so far (counting the
/// current one) have succeeded, certain failure otherwise.
#[derive(Debug, Clone, Copy)]
pub struct AdversarialThreshold;

impl SequentialPolicy for AdversarialThreshold {
    fn name(&self) -> String {
        "adversarial-threshold".into()
    }

    fn next_prob(&self, history: &[bool]) -> f64 {
        let successes = history.iter().filter(|&&t| t).count() as f64;
        let round = (history.len() + 1) as f64;
        if successes < round / 2.0 {
            1.0
        } else {
            0.0
        }
    }
}

/// 0.8 after a success, 0.2 after a failure, 0.5 in the first round.
#[derive(Debug, Clone, Copy)]
pub struct Momentum;

impl SequentialPolicy for Momentum {
    fn name(&self) -> String {
        "momentum".into()
    }

    fn next_prob(&self, history: &[bool]) -> f64 {
        match history.last() {
            None => 0.5,
            Some(true) => 0.8,
            Some(false) => 0.2,
        }
    }
}

pub const BUILTIN_POLICIES: [&str; 3] = ["constant:<p>", "adversarial-threshold", "momentum"];

pub fn builtin_policy(name: &str) -> Result<Box<dyn SequentialPolicy>> {
    if let Some(p) = name.strip_prefix("constant:") {
        let p: f64 = p
            .parse()
            .map_err(|_| crate::BoundsError::Domain(format!("bad probability in '{name}'")))?;
        if !(0.0..=1.0).contains(&p) {
            return domain(format!("probability {p} outside [0,1]"));
        }
        return Ok(Box::new(Constant(p)));
    }
    match name {
        "adversarial-threshold" => Ok(Box::new(AdversarialThreshold)),
        "momentum" => Ok(Box::new(Momentum)),
        _ => domain(format!(
            "unknown policy '{name}'; expected one of {}",
            BUILTIN_POLICIES.join(", ")
        )),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SequentialRun {
    pub run: u64,
    pub successes: usize,
    /// Average of the success probabilities along the realized history.
    pub realized_qbar: f64,
    pub qhat_f: f64,
    pub covered: bool,
    #[serde(skip)]
    pub outcomes: Vec<bool>,
}

fn sample_run(
    policy: &dyn SequentialPolicy,
    n: usize,
    qhat: &[f64],
    rng: &mut ChaCha8Rng,
    run: u64,
) -> SequentialRun {
    let mut outcomes = Vec::with_capacity(n);
    let mut qsum = 0.0;
    for _ in 0..n {
        let q = policy.next_prob(&outcomes);
        qsum += q;
        outcomes.push(rng.random::<f64>() < q);
    }
    let successes = outcomes.iter().filter(|&&t| t).count();
    let realized_qbar = qsum / n as f64;
    SequentialRun {
        run,
        successes,
        realized_qbar,
        qhat_f: qhat[successes],
        covered: realized_qbar >= qhat[successes],
        outcomes,
    }
}

/// One sequential experiment of `n` rounds.
pub fn run_sequential(
    policy: &dyn SequentialPolicy,
    n: usize,
    alpha: f64,
    seed: u64,
) -> Result<SequentialRun> {
    let table = bound_table(Method::F, Side::Lower, n, alpha)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sample_run(policy, n, &table, &mut rng, 0))
}

#[derive(Debug, Clone, Serialize)]
pub struct SequentialSummary {
    pub policy: String,
    pub n: usize,
    pub alpha: f64,
    pub runs: u64,
    pub seed: u64,
    pub covered: u64,
    pub covered_fraction: f64,
    /// Binomial standard error at the nominal level `1 - α`.
    pub sigma: f64,
    pub pass: bool,
    pub rng: &'static str,
}

/// `runs` independent experiments; run `r` uses stream `r` of the seeded
/// generator.
pub fn run_sequential_many(
    policy: &dyn SequentialPolicy,
    n: usize,
    alpha: f64,
    runs: u64,
    seed: u64,
) -> Result<(Vec<SequentialRun>, SequentialSummary)> {
    if n == 0 || runs == 0 {
        return domain("n and runs must be at least 1");
    }
    let table = bound_table(Method::F, Side::Lower, n, alpha)?;
    let results: Vec<SequentialRun> = (0..runs)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r);
            sample_run(policy, n, &table, &mut rng, r)
        })
        .collect();
    let covered = results.iter().filter(|r| r.covered).count() as u64;
    let covered_fraction = covered as f64 / runs as f64;
    let sigma = (alpha * (1.0 - alpha) / runs as f64).sqrt();
    let summary = SequentialSummary {
        policy: policy.name(),
        n,
        alpha,
        runs,
        seed,
        covered,
        covered_fraction,
        sigma,
        pass: covered_fraction >= 1.0 - alpha - 3.0 * sigma,
        rng: RNG_ALGORITHM,
    };
    Ok((results, summary))
}

/// One line of a verification suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteCheck {
    pub suite: &'static str,
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

impl SuiteCheck {
    fn new(
        suite: &'static str,
        check: impl Into<String>,
        pass: bool,
        detail: impl Into<String>,
    ) -> Self {
        Self {
            suite,
            check: check.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Coverage,
    Tightness,
    Lemmas,
    All,
}

impl std::str::FromStr for Suite {
    type Err = crate::BoundsError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coverage" => Ok(Suite::Coverage),
            "tightness" => Ok(Suite::Tightness),
            "lemmas" => Ok(Suite::Lemmas),
            "all" => Ok(Suite::All),
            _ => domain(format!("unknown suite '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub n_max: usize,
    pub trials: u64,
    pub seed: u64,
}

pub fn run_suite(suite: Suite, cfg: SuiteConfig) -> Result<Vec<SuiteCheck>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Coverage | Suite::All) {
        out.extend(coverage_suite(cfg.n_max.min(12), cfg.trials, cfg.seed)?);
    }
    if matches!(suite, Suite::Tightness | Suite::All) {
        out.extend(tightness_suite(cfg.n_max.min(12))?);
    }
    if matches!(suite, Suite::Lemmas | Suite::All) {
        out.extend(lemmas_suite(cfg.n_max)?);
    }
    Ok(out)
}

/// Exact coverage of `F` and `G` on both sides over 500 seeded random models,
/// plus Monte Carlo agreement on 20 of them when `trials > 0`.
pub fn coverage_suite(n_max: usize, trials: u64, seed: u64) -> Result<Vec<SuiteCheck>> {
    let n_max = n_max.max(1);
    let models = random_models(500, n_max, seed);
    let combos = [
        (Method::F, Side::Lower),
        (Method::F, Side::Upper),
        (Method::G, Side::Lower),
        (Method::G, Side::Upper),
    ];
    let mut out = Vec::new();
    for (method, side) in combos {
        let mut worst = (f64::INFINITY, 0usize, 0.0);
        for &alpha in &SWEEP_ALPHAS {
            for (m, cov) in coverage_from_tables(&models, method, side, alpha)?
                .into_iter()
                .enumerate()
            {
                let margin = cov - (1.0 - alpha);
                if margin < worst.0 {
                    worst = (margin, m, alpha);
                }
            }
        }
        out.push(SuiteCheck::new(
            "coverage",
            format!("exact {method}/{side}"),
            worst.0 >= -1e-10,
            format!(
                "{} models x {} alphas; min coverage - (1-alpha) = {:.3e} (model {}, alpha {})",
                models.len(),
                SWEEP_ALPHAS.len(),
                worst.0,
                worst.1,
                worst.2
            ),
        ));
    }
    if trials > 0 {
        let mut worst_z: f64 = 0.0;
        for (i, model) in models.iter().take(20).enumerate() {
            let alpha = SWEEP_ALPHAS[i % SWEEP_ALPHAS.len()];
            let rep = mc_coverage(
                model,
                Method::F,
                Side::Lower,
                alpha,
                trials,
                seed.wrapping_add(i as u64),
            )?;
            let diff = (rep.mc_coverage.unwrap_or(f64::NAN) - rep.exact_coverage).abs();
            let sigma = rep.mc_sigma();
            let z = if sigma > 0.0 {
                diff / sigma
            } else if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            worst_z = worst_z.max(z);
        }
        out.push(SuiteCheck::new(
            "coverage",
            "monte-carlo agreement",
            worst_z <= 4.0,
            format!("20 models, {trials} trials each; worst |mc - exact| = {worst_z:.2} sigma ({RNG_ALGORITHM})"),
        ));
    }
    Ok(out)
}

/// Largest `|min extremal CDF(d) - (1 - f)|` over `n ≤ n_max`, `q̄` on a 0.05
/// grid and every `d ∈ [0, n-1]`.
pub fn extremal_attainment_check(n_max: usize) -> Result<f64> {
    Ok((1..=n_max)
        .into_par_iter()
        .map(|n| -> Result<f64> {
            let mut worst: f64 = 0.0;
            for i in 0..=20 {
                let qbar = i as f64 * 0.05;
                for d in 0..n as i64 {
                    let idx = HoeffdingIndex::from_d(n, d)?;
                    let (cdf, _) = best_extremal_cdf(qbar, idx)?;
                    worst = worst.max((cdf - (1.0 - f_bound(qbar, idx)?)).abs());
                }
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessSweep {
    pub witnesses: usize,
    /// Largest `|f_bound(q̂^f, k-1, n) - α|`.
    pub worst_identity: f64,
    /// Largest raised coverage minus `1 - α`; negative when every witness
    /// breaks coverage.
    pub worst_margin: f64,
    pub failures: Vec<String>,
}

/// Tightness witnesses for every `n ≤ n_max`, `1 ≤ k ≤ n` and each α.
pub fn buehler_witness_sweep(n_max: usize, alphas: &[f64], epsilon: f64) -> Result<WitnessSweep> {
    let mut sweep = WitnessSweep {
        witnesses: 0,
        worst_identity: 0.0,
        worst_margin: f64::NEG_INFINITY,
        failures: Vec::new(),
    };
    for n in 1..=n_max {
        for k in 1..=n {
            for &alpha in alphas {
                let w = tightness_witness(n, k, alpha, epsilon)?;
                let identity =
                    (f_bound(w.qhat, HoeffdingIndex::from_d(n, k as i64 - 1)?)? - alpha).abs();
                sweep.witnesses += 1;
                sweep.worst_identity = sweep.worst_identity.max(identity);
                sweep.worst_margin = sweep.worst_margin.max(w.raised_coverage - (1.0 - alpha));
                if !w.breaks_coverage() || identity > 1e-9 {
                    sweep.failures.push(format!("n={n} k={k} alpha={alpha}"));
                }
            }
        }
    }
    Ok(sweep)
}

/// Maximum of [`lemma6_check`] over `0 < y < N ≤ n_max`, with its location.
pub fn peak_binomial_sweep(n_max: u64) -> Result<(f64, u64, u64)> {
    let mut peak = (0.0, 0, 0);
    for big_n in 2..=n_max {
        for y in 1..big_n {
            let v = lemma6_check(big_n, y)?;
            if v > peak.0 {
                peak = (v, big_n, y);
            }
        }
    }
    Ok(peak)
}

#[derive(Debug, Clone, Serialize)]
pub struct SimpleBoundReport {
    pub n_max: usize,
    pub points: usize,
    /// Largest `|q̂^f - q̂^g|` with α ≤ 1/4.
    pub worst_equality_gap: f64,
    /// Largest amount by which `q̂^f ≥ q̂^g ≥ max(q̂^1, q̂^H)` fails for α ≤ 1/2.
    pub worst_dominance_violation: f64,
    pub pass: bool,
}

/// Grid of α values in `(0, 1/2]` used by [`simple_bound_check`].
pub fn simple_bound_alphas() -> Vec<f64> {
    let mut a = vec![1e-6, 1e-4, 1e-3, 5e-3];
    a.extend((1..=50).map(|i| i as f64 / 100.0));
    a
}

/// `q̂^f = q̂^g` for α ≤ 1/4 and the dominance chain for α ≤ 1/2.
pub fn simple_bound_check(n_max: usize) -> Result<SimpleBoundReport> {
    let alphas = simple_bound_alphas();
    let rows = (1..=n_max)
        .into_par_iter()
        .map(|n| -> Result<(f64, f64, usize)> {
            let (mut gap, mut viol, mut pts) = (0f64, 0f64, 0);
            for k in 0..=n {
                for &alpha in &alphas {
                    let q = CiQuery::new(n, k, alpha)?;
                    let f = qhat_f(q)?.value;
                    let g = Method::G.lower(q)?.value;
                    let other = Method::BinomLike
                        .lower(q)?
                        .value
                        .max(Method::Hoeffding.lower(q)?.value);
                    if alpha <= 0.25 {
                        gap = gap.max((f - g).abs());
                    }
                    viol = viol.max(g - f).max(other - g);
                    pts += 1;
                }
            }
            Ok((gap, viol, pts))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut r = SimpleBoundReport {
        n_max,
        points: 0,
        worst_equality_gap: 0.0,
        worst_dominance_violation: 0.0,
        pass: false,
    };
    for (gap, viol, pts) in rows {
        r.worst_equality_gap = r.worst_equality_gap.max(gap);
        r.worst_dominance_violation = r.worst_dominance_violation.max(viol);
        r.points += pts;
    }
    r.pass = r.worst_equality_gap <= 1e-11 && r.worst_dominance_violation <= 1e-12;
    Ok(r)
}

/// Cases `(n, α)` with `2 ≤ n ≤ n_max`, `α ∈ {0.01, …, 0.99}` where Clopper-Pearson
/// at one success fails to exceed `q̂^f = α/n`.
pub fn clopper_pearson_check(n_max: usize) -> Result<Vec<(usize, f64)>> {
    let mut bad = Vec::new();
    for n in 2..=n_max {
        for i in 1..=99 {
            let alpha = i as f64 / 100.0;
            let q = CiQuery::new(n, 1, alpha)?;
            let f = qhat_f(q)?.value;
            let cp = Method::ClopperPearson.lower(q)?.value;
            if !(cp > f) || (f - alpha / n as f64).abs() > 1e-14 {
                bad.push((n, alpha));
            }
        }
    }
    Ok(bad)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecialReport {
    /// Largest `|I_x(a,b) - (1 - I_{1-x}(b,a))|`, `1 ≤ a,b ≤ 50`.
    pub symmetry: f64,
    /// Largest deviation in either beta/binomial identity, `1 ≤ d ≤ n ≤ 60`.
    pub beta_binomial: f64,
    /// Largest `|I(I⁻¹(α)) - α|` for `1 ≤ a,b ≤ 50`.
    pub round_trip: f64,
    pub pass: bool,
}

/// Symmetry, beta/binomial and inverse round-trip identities of the
/// incomplete beta function.
pub fn special_identities_check() -> Result<SpecialReport> {
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
    let per_a = (1..=50)
        .into_par_iter()
        .map(|a| -> Result<(f64, f64)> {
            let (mut sym, mut rt) = (0f64, 0f64);
            let af = a as f64;
            for b in 1..=50 {
                let bf = b as f64;
                for &x in &grid {
                    let lhs = reg_inc_beta(x, af, bf)?;
                    sym = sym.max((lhs - (1.0 - reg_inc_beta(1.0 - x, bf, af)?)).abs());
                }
                for i in 0..=50 {
                    let alpha = i as f64 / 50.0;
                    let x = inv_reg_inc_beta(alpha, af, bf)?;
                    rt = rt.max((reg_inc_beta(x, af, bf)? - alpha).abs());
                }
            }
            Ok((sym, rt))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut bb: f64 = 0.0;
    for n in 1..=60u64 {
        for d in 1..=n {
            for &x in &grid {
                bb = bb.max(
                    (binom_tail(n, d, x)? - reg_inc_beta(x, d as f64, (n - d + 1) as f64)?).abs(),
                );
                if d < n {
                    let lower: f64 = (0..=d).map(|k| binom_pmf(n, k, x)).sum::<Result<f64>>()?;
                    bb = bb.max(
                        (lower - reg_inc_beta(1.0 - x, (n - d) as f64, (d + 1) as f64)?).abs(),
                    );
                }
            }
        }
    }
    let symmetry = per_a.iter().map(|r| r.0).fold(0.0, f64::max);
    let round_trip = per_a.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(SpecialReport {
        symmetry,
        beta_binomial: bb,
        round_trip,
        pass: symmetry <= 1e-12 && bb <= 1e-12 && round_trip <= 1e-10,
    })
}

/// Extremal attainment of the CDF bound and the Buehler tightness witnesses.
pub fn tightness_suite(n_max: usize) -> Result<Vec<SuiteCheck>> {
    let n_attain = n_max.min(10);
    let worst_attain = extremal_attainment_check(n_attain)?;
    let sweep = buehler_witness_sweep(n_max, &[0.05, 0.25], 1e-6)?;
    Ok(vec![
        SuiteCheck::new(
            "tightness",
            "extremal attainment",
            worst_attain <= 1e-10,
            format!("n <= {n_attain}, qbar step 0.05, all d; worst |cdf - (1 - f)| = {worst_attain:.3e}"),
        ),
        SuiteCheck::new(
            "tightness",
            "buehler witnesses",
            sweep.failures.is_empty(),
            match sweep.failures.first() {
                None => format!(
                    "{} witnesses at epsilon=1e-6 break coverage; worst |f(qhat) - alpha| = {:.3e}",
                    sweep.witnesses, sweep.worst_identity
                ),
                Some(first) => format!("first failure: {first}"),
            },
        ),
    ])
}

/// Linear over-bounds, peak binomial probability, the `α†` floor, both
/// golden tables, the simple-bound grid, Clopper-Pearson invalidity and the
/// special-function identities.
pub fn lemmas_suite(n_max: usize) -> Result<Vec<SuiteCheck>> {
    let n_max = n_max.max(2);
    let lin = linear_bound_check(n_max.min(40), 50)?;
    let peak = peak_binomial_sweep(200)?;
    let floor = alpha_dagger_floor_check(n_max)?;
    let t1 = table1_check(None)?;
    let t2 = table2_check()?;
    let cor = simple_bound_check(n_max.min(40))?;
    let cp = clopper_pearson_check(n_max.min(100))?;
    let sp = special_identities_check()?;
    let first_bad = |cells: &[TableCell]| {
        cells
            .iter()
            .find(|c| !c.pass)
            .map(|c| {
                format!(
                    "; first mismatch n={} d={}: {:.6} vs {}",
                    c.n, c.d, c.value, c.golden
                )
            })
            .unwrap_or_default()
    };
    Ok(vec![
        SuiteCheck::new(
            "lemmas",
            "linear over-bounds",
            lin.pass,
            format!(
                "n <= {}, {} points; max Q-R = {:.3e}, max S-U = {:.3e}, gap at c=n-1 = {:.3e}",
                lin.n_max, lin.points, lin.worst_excess_q, lin.worst_excess_s, lin.worst_gap_at_top
            ),
        ),
        SuiteCheck::new(
            "lemmas",
            "peak binomial probability",
            peak.0 <= 0.5 + 1e-12,
            format!("0 < y < N <= 200; max = {} at N={}, y={}", peak.0, peak.1, peak.2),
        ),
        SuiteCheck::new(
            "lemmas",
            "alpha-dagger floor",
            floor.pass,
            format!(
                "{} cells up to n={}; min = {:.6} at (n={}, d={})",
                floor.cells, floor.n_max, floor.min_value, floor.min_at.0, floor.min_at.1
            ),
        ),
        SuiteCheck::new(
            "lemmas",
            "table I",
            t1.iter().all(|c| c.pass),
            format!("{}/{} cells match to 3 places{}", t1.iter().filter(|c| c.pass).count(), t1.len(), first_bad(&t1)),
        ),
        SuiteCheck::new(
            "lemmas",
            "table II",
            t2.iter().all(|c| c.pass),
            format!("{}/{} cells match to 6 places{}", t2.iter().filter(|c| c.pass).count(), t2.len(), first_bad(&t2)),
        ),
        SuiteCheck::new(
            "lemmas",
            "simple bound equality and dominance",
            cor.pass,
            format!(
                "n <= {}, {} points; max |f-g| (alpha <= 1/4) = {:.3e}, worst dominance violation = {:.3e}",
                cor.n_max, cor.points, cor.worst_equality_gap, cor.worst_dominance_violation
            ),
        ),
        SuiteCheck::new(
            "lemmas",
            "clopper-pearson invalidity",
            cp.is_empty(),
            match cp.first() {
                None => format!("cp(1, n, alpha) > alpha/n for 2 <= n <= {}, 99 alphas", n_max.min(100)),
                Some((n, a)) => format!("first failure n={n} alpha={a}"),
            },
        ),
        SuiteCheck::new(
            "lemmas",
            "special-function identities",
            sp.pass,
            format!(
                "symmetry {:.3e}, beta/binomial {:.3e}, inverse round trip {:.3e}",
                sp.symmetry, sp.beta_binomial, sp.round_trip
            ),
        ),
    ])
}
