//! Exact Poisson-binomial distribution and Hoeffding's (1956) lower bound on
//! its CDF at fixed mean success probability.
//!
//! For `n` independent trials with mean parameter `q̄` and any integer `d`,
//! `P(successes ≤ d) ≥ 1 - f_bound(q̄, d, n)`, and the bound is attained by one
//! of the extremal models built here.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::special::ibeta;

/// Tolerance used when comparing `n q̄` against integers.
pub const BRANCH_TOL: f64 = 1e-12;

/// Per-trial success probabilities of `n` independent Bernoulli trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernoulliModel {
    q: Vec<f64>,
}

impl BernoulliModel {
    pub fn new(q: Vec<f64>) -> Result<Self> {
        if q.is_empty() {
            return domain("a model needs at least one trial");
        }
        if let Some(bad) = q.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return domain(format!("success probability {bad} outside [0,1]"));
        }
        Ok(Self { q })
    }

    /// `n` trials sharing the same success probability.
    pub fn iid(n: usize, p: f64) -> Result<Self> {
        Self::new(vec![p; n])
    }

    pub fn probs(&self) -> &[f64] {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// Average success probability `q̄`.
    pub fn mean(&self) -> f64 {
        self.q.iter().sum::<f64>() / self.q.len() as f64
    }

    /// The model with every `q_i` replaced by `1 - q_i`.
    pub fn complement(&self) -> Self {
        Self {
            q: self.q.iter().map(|p| 1.0 - p).collect(),
        }
    }
}

/// Distribution of the number of successes, indexed `0..=n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoissonBinomial {
    pmf: Vec<f64>,
}

impl PoissonBinomial {
    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn n(&self) -> usize {
        self.pmf.len() - 1
    }

    /// `P(successes ≤ d)`; 0 for negative `d`.
    pub fn cdf(&self, d: i64) -> f64 {
        if d < 0 {
            return 0.0;
        }
        let upto = (d as usize).min(self.n());
        self.pmf[..=upto].iter().sum::<f64>().min(1.0)
    }
}

/// Exact PMF by sequential convolution over trials, `O(n²)`.
pub fn exact_pmf(model: &BernoulliModel) -> PoissonBinomial {
    let n = model.len();
    let mut pmf = vec![0.0; n + 1];
    pmf[0] = 1.0;
    for (i, &p) in model.probs().iter().enumerate() {
        let q = 1.0 - p;
        for j in (1..=i + 1).rev() {
            pmf[j] = pmf[j] * q + pmf[j - 1] * p;
        }
        pmf[0] *= q;
    }
    PoissonBinomial { pmf }
}

/// Same recursion as [`exact_pmf`], but each entry carries a running error
/// term: products are split exactly with FMA and sums use two-sum.
pub fn exact_pmf_compensated(model: &BernoulliModel) -> PoissonBinomial {
    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }
    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        (p, a.mul_add(b, -p))
    }

    let n = model.len();
    let mut hi = vec![0.0; n + 1];
    let mut lo = vec![0.0; n + 1];
    hi[0] = 1.0;
    for (i, &p) in model.probs().iter().enumerate() {
        let q = 1.0 - p;
        for j in (0..=i + 1).rev() {
            let (a, ea) = two_prod(hi[j], q);
            let (b, eb) = if j > 0 {
                two_prod(hi[j - 1], p)
            } else {
                (0.0, 0.0)
            };
            let carry = ea + eb + lo[j] * q + if j > 0 { lo[j - 1] * p } else { 0.0 };
            let (s, es) = two_sum(a, b);
            hi[j] = s;
            lo[j] = es + carry;
        }
    }
    PoissonBinomial {
        pmf: hi.iter().zip(&lo).map(|(h, l)| h + l).collect(),
    }
}

/// PMF by enumerating all `2^n` outcomes. Oracle only; `n ≤ 20`.
pub fn brute_force_pmf(model: &BernoulliModel) -> Result<PoissonBinomial> {
    let n = model.len();
    if n > 20 {
        return domain(format!(
            "brute-force enumeration limited to n ≤ 20, got {n}"
        ));
    }
    let mut pmf = vec![0.0; n + 1];
    for outcome in 0u32..(1 << n) {
        let mut prob = 1.0;
        for (i, &p) in model.probs().iter().enumerate() {
            prob *= if outcome >> i & 1 == 1 { p } else { 1.0 - p };
        }
        pmf[outcome.count_ones() as usize] += prob;
    }
    Ok(PoissonBinomial { pmf })
}

/// Threshold index `d ∈ [-1, n]` together with its mirror `c = n - d - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HoeffdingIndex {
    pub n: usize,
    pub d: i64,
    pub c: i64,
}

impl HoeffdingIndex {
    pub fn from_d(n: usize, d: i64) -> Result<Self> {
        if n == 0 {
            return domain("n must be at least 1");
        }
        if d < -1 || d > n as i64 {
            return domain(format!("d={d} outside [-1, {n}]"));
        }
        Ok(Self {
            n,
            d,
            c: n as i64 - d - 1,
        })
    }

    pub fn from_c(n: usize, c: i64) -> Result<Self> {
        if n == 0 {
            return domain("n must be at least 1");
        }
        Self::from_d(n, n as i64 - c - 1)
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    pub(crate) fn require_c_in_range(&self) -> Result<()> {
        if self.c < 0 || self.c > self.n as i64 - 1 {
            return domain(format!("c={} outside [0, {}]", self.c, self.n - 1));
        }
        Ok(())
    }
}

/// Tail value when the first `s` trials are forced to zero:
/// `1 - I_x(c-s+1, n-c)` with `x = (np - s)/(n - s)`.
pub fn q_script(idx: HoeffdingIndex, p: f64, s: i64) -> Result<f64> {
    idx.require_c_in_range()?;
    if s < 0 || s > idx.c {
        return domain(format!("s={s} outside [0, c={}]", idx.c));
    }
    if !(p <= 1.0) || p < s as f64 / idx.nf() - BRANCH_TOL {
        return domain(format!("p={p} outside [s/n, 1] for s={s}, n={}", idx.n));
    }
    Ok(q_script_unchecked(idx, 1.0 - p, s))
}

/// Evaluated as `I_{n(1-p)/(n-s)}(n-c, c-s+1)` from `comp = 1 - p`, so small
/// tails keep their relative precision.
fn q_script_unchecked(idx: HoeffdingIndex, comp: f64, s: i64) -> f64 {
    let n = idx.nf();
    let s = s as f64;
    let y = (n * comp / (n - s)).clamp(0.0, 1.0);
    ibeta(y, n - idx.c as f64, idx.c as f64 - s + 1.0)
}

/// Largest admissible `s` for a given `p`: `min(c, floor(np))`.
pub(crate) fn max_admissible_zeros(idx: HoeffdingIndex, p: f64) -> i64 {
    let np = (idx.nf() * p + BRANCH_TOL).floor() as i64;
    np.min(idx.c)
}

/// Maximum of [`q_script`] over every admissible integer `s`.
pub fn q_max(idx: HoeffdingIndex, p: f64) -> Result<f64> {
    idx.require_c_in_range()?;
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("p={p} outside [0,1]"));
    }
    Ok(q_max_with_arg(idx, p).0)
}

/// `(Q, argmax s)`; ties keep the smallest `s`.
pub(crate) fn q_max_with_arg(idx: HoeffdingIndex, p: f64) -> (f64, i64) {
    q_max_from_complement(idx, 1.0 - p, p)
}

fn q_max_from_complement(idx: HoeffdingIndex, comp: f64, p: f64) -> (f64, i64) {
    (0..=max_admissible_zeros(idx, p))
        .map(|s| (q_script_unchecked(idx, comp, s), s))
        .fold((f64::NEG_INFINITY, 0), |best, cur| {
            if cur.0 > best.0 {
                cur
            } else {
                best
            }
        })
}

/// Which piece of the three-branch CDF bound is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundBranch {
    /// `d ≤ n q̄ - 1`: the bound is trivial (`f = 1`).
    Saturated,
    /// `n q̄ - 1 < d < n q̄`: maximum over zero-forced models.
    Mixed,
    /// `d ≥ n q̄`: the i.i.d. binomial is extremal.
    Binomial,
    /// `|d - n q̄|` within tolerance; both `Mixed` and `Binomial` apply.
    Boundary,
}

pub fn bound_branch(qbar: f64, idx: HoeffdingIndex) -> BoundBranch {
    let nq = idx.nf() * qbar;
    let d = idx.d as f64;
    if d <= nq - 1.0 + BRANCH_TOL {
        BoundBranch::Saturated
    } else if d < nq - BRANCH_TOL {
        BoundBranch::Mixed
    } else if d <= nq + BRANCH_TOL {
        BoundBranch::Boundary
    } else {
        BoundBranch::Binomial
    }
}

/// Hoeffding's bound `f` with `P(successes ≤ d) ≥ 1 - f_bound(q̄, d, n)`.
pub fn f_bound(qbar: f64, idx: HoeffdingIndex) -> Result<f64> {
    if !(0.0..=1.0).contains(&qbar) {
        return domain(format!("qbar={qbar} outside [0,1]"));
    }
    Ok(f_bound_unchecked(qbar, idx))
}

pub(crate) fn f_bound_unchecked(qbar: f64, idx: HoeffdingIndex) -> f64 {
    if idx.d < 0 {
        return 1.0;
    }
    if idx.d >= idx.n as i64 {
        return 0.0;
    }
    let mixed = || q_max_from_complement(idx, qbar, 1.0 - qbar).0;
    let binomial = || ibeta(qbar, idx.d as f64 + 1.0, (idx.n as i64 - idx.d) as f64);
    match bound_branch(qbar, idx) {
        BoundBranch::Saturated => 1.0,
        BoundBranch::Mixed => mixed(),
        BoundBranch::Boundary => mixed().max(binomial()),
        BoundBranch::Binomial => binomial(),
    }
}

/// Branch point `I_{d/n}(d+1, n-d)` between the beta-inverse and the
/// zero-forced branches.
pub fn alpha_dagger(idx: HoeffdingIndex) -> Result<f64> {
    if idx.d < 0 || idx.d > idx.n as i64 - 1 {
        return domain(format!("d={} outside [0, {}]", idx.d, idx.n - 1));
    }
    Ok(alpha_dagger_unchecked(idx))
}

pub(crate) fn alpha_dagger_unchecked(idx: HoeffdingIndex) -> f64 {
    let d = idx.d as f64;
    let n = idx.nf();
    ibeta(d / n, d + 1.0, n - d)
}

/// The same branch point written in terms of `c`: `1 - I_{(c+1)/n}(c+1, n-c)`.
pub fn alpha_dagger_c(idx: HoeffdingIndex) -> Result<f64> {
    idx.require_c_in_range()?;
    let c = idx.c as f64;
    let n = idx.nf();
    Ok(1.0 - ibeta((c + 1.0) / n, c + 1.0, n - c))
}

/// `q_i = 1` for the first `d+1` trials and `(n q̄ - d - 1)/(n - d - 1)` for
/// the rest; drives `P(successes ≤ d)` to zero.
pub fn extremal_model_upper(d: usize, n: usize, qbar: f64) -> Result<BernoulliModel> {
    if n == 0 || d >= n {
        return domain(format!("d={d} must lie in [0, n-1] with n={n}"));
    }
    if !(0.0..=1.0).contains(&qbar) {
        return domain(format!("qbar={qbar} outside [0,1]"));
    }
    let nq = n as f64 * qbar;
    if d as f64 > nq - 1.0 + BRANCH_TOL {
        return domain(format!("d={d} exceeds n*qbar - 1 = {}", nq - 1.0));
    }
    let rest = n - d - 1;
    let mut q = vec![1.0; d + 1];
    if rest > 0 {
        let r = ((nq - d as f64 - 1.0) / rest as f64).clamp(0.0, 1.0);
        q.extend(std::iter::repeat_n(r, rest));
    }
    BernoulliModel::new(q)
}

/// `q_i = 0` for the first `s` trials and `n q̄ / (n - s)` for the rest.
pub fn extremal_model_s(s: usize, n: usize, qbar: f64) -> Result<BernoulliModel> {
    if n == 0 || s >= n {
        return domain(format!("s={s} must lie in [0, n-1] with n={n}"));
    }
    if !(0.0..=1.0).contains(&qbar) {
        return domain(format!("qbar={qbar} outside [0,1]"));
    }
    let nq = n as f64 * qbar;
    if nq > (n - s) as f64 + BRANCH_TOL {
        return domain(format!("n*qbar={nq} exceeds n - s = {}", n - s));
    }
    let r = if s == 0 {
        qbar
    } else {
        (nq / (n - s) as f64).min(1.0)
    };
    let mut q = vec![0.0; s];
    q.extend(std::iter::repeat_n(r, n - s));
    BernoulliModel::new(q)
}

/// Smallest `P(successes ≤ d)` over the extremal families at mean `q̄`,
/// together with the model attaining it.
pub fn best_extremal_cdf(qbar: f64, idx: HoeffdingIndex) -> Result<(f64, BernoulliModel)> {
    if idx.d < 0 || idx.d >= idx.n as i64 {
        return domain(format!("d={} outside [0, {}]", idx.d, idx.n - 1));
    }
    let n = idx.n;
    let d = idx.d as usize;
    let mut best: Option<(f64, BernoulliModel)> = None;
    let mut consider = |model: BernoulliModel| {
        let cdf = exact_pmf(&model).cdf(idx.d);
        if best.as_ref().is_none_or(|(b, _)| cdf < *b) {
            best = Some((cdf, model));
        }
    };
    if let Ok(model) = extremal_model_upper(d, n, qbar) {
        consider(model);
    }
    for s in 0..n {
        if let Ok(model) = extremal_model_s(s, n, qbar) {
            consider(model);
        }
    }
    best.ok_or_else(|| crate::BoundsError::Domain(format!("no extremal model for qbar={qbar}")))
}
