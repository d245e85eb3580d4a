//! One-sided confidence bounds on the average success probability `q̄`.
//!
//! | method            | validity                              |
//! |-------------------|---------------------------------------|
//! | `F`               | every α, tightest monotone bound       |
//! | `G`               | every α, equals `F` for α ≤ 1/4        |
//! | `Hoeffding`       | every α > 0 (1963 inequality)          |
//! | `BinomLike`       | α ≤ 1/2 only                           |
//! | `ClopperPearson`  | i.i.d. trials only; reference value    |
//!
//! Upper bounds are obtained by mirroring: `1 - lower(n, n - k, α)`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{domain, BoundsError, Result};
use crate::inverse::{f_tilde, g_tilde_inv, InverseQuery};
use crate::poibin::{alpha_dagger_unchecked, HoeffdingIndex};
use crate::special::inv_ibeta;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    F,
    G,
    Hoeffding,
    BinomLike,
    ClopperPearson,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::F,
        Method::G,
        Method::Hoeffding,
        Method::BinomLike,
        Method::ClopperPearson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::F => "f",
            Method::G => "g",
            Method::Hoeffding => "hoeffding",
            Method::BinomLike => "binomlike",
            Method::ClopperPearson => "clopper-pearson",
        }
    }

    pub fn lower(self, q: CiQuery) -> Result<IntervalResult> {
        match self {
            Method::F => qhat_f(q),
            Method::G => qhat_g(q),
            Method::Hoeffding => qhat_hoeffding(q),
            Method::BinomLike => qhat_binomlike(q),
            Method::ClopperPearson => qhat_clopper_pearson(q),
        }
    }

    pub fn upper(self, q: CiQuery) -> Result<IntervalResult> {
        mirror(q, |m| self.lower(m))
    }

    pub fn bound(self, q: CiQuery, side: Side) -> Result<IntervalResult> {
        match side {
            Side::Lower => self.lower(q),
            Side::Upper => self.upper(q),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "f" => Ok(Method::F),
            "g" => Ok(Method::G),
            "hoeffding" | "h" => Ok(Method::Hoeffding),
            "binomlike" | "1" => Ok(Method::BinomLike),
            "clopper-pearson" | "cp" | "0" => Ok(Method::ClopperPearson),
            other => domain(format!("unknown method '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Lower,
    Upper,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        })
    }
}

/// Flags attached to bounds that are reported outside their validity range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Advisory {
    /// The binomial-like bound is only known to hold for α ≤ 1/2.
    AlphaAboveHalf,
    /// Clopper-Pearson is not a valid bound once trials may differ.
    InvalidForNonIid,
}

impl Advisory {
    pub fn name(self) -> &'static str {
        match self {
            Advisory::AlphaAboveHalf => "alpha-above-half",
            Advisory::InvalidForNonIid => "invalid-for-non-iid",
        }
    }
}

/// Observed statistic: `k` successes in `n` rounds, at confidence `1 - α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CiQuery {
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
}

impl CiQuery {
    pub fn new(n: usize, k: usize, alpha: f64) -> Result<Self> {
        if n == 0 {
            return domain("n must be at least 1");
        }
        if k > n {
            return domain(format!("k={k} exceeds n={n}"));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return domain(format!("alpha={alpha} outside [0,1]"));
        }
        Ok(Self { n, k, alpha })
    }

    pub fn mean(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalResult {
    pub method: Method,
    pub side: Side,
    pub value: f64,
    pub query: CiQuery,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub advisory: Option<Advisory>,
}

impl IntervalResult {
    fn lower(method: Method, query: CiQuery, value: f64) -> Self {
        Self {
            method,
            side: Side::Lower,
            value: value.clamp(0.0, 1.0),
            query,
            advisory: None,
        }
    }
}

fn mirror(q: CiQuery, lower: impl Fn(CiQuery) -> Result<IntervalResult>) -> Result<IntervalResult> {
    let flipped = CiQuery { k: q.n - q.k, ..q };
    let r = lower(flipped)?;
    Ok(IntervalResult {
        side: Side::Upper,
        value: 1.0 - r.value,
        query: q,
        ..r
    })
}

/// Buehler-optimal lower bound: `f̃_α(k-1, n)`.
pub fn qhat_f(q: CiQuery) -> Result<IntervalResult> {
    let v = f_tilde(InverseQuery::new(q.n, q.k as i64 - 1, q.alpha)?)?;
    Ok(IntervalResult::lower(Method::F, q, v.min(q.mean())))
}

/// `1 - q̂^f(n - k, n, α)`.
pub fn qhat_f_upper(q: CiQuery) -> Result<IntervalResult> {
    mirror(q, qhat_f)
}

/// Branch point `α*(k, n) = I_{(k-1)/n}(k, n-k+1)` of the simple bound.
pub fn alpha_star(n: usize, k: usize) -> Result<f64> {
    if n == 0 || k == 0 || k > n {
        return domain(format!("alpha_star needs 1 ≤ k ≤ n, got k={k}, n={n}"));
    }
    Ok(alpha_dagger_unchecked(HoeffdingIndex::from_d(
        n,
        k as i64 - 1,
    )?))
}

/// Simple lower bound: linear in α above `α*`, beta quantile below it.
pub fn qhat_g(q: CiQuery) -> Result<IntervalResult> {
    let v = g_tilde_inv(InverseQuery::new(q.n, q.k as i64 - 1, q.alpha)?)?;
    Ok(IntervalResult::lower(Method::G, q, v.min(q.mean())))
}

pub fn qhat_g_upper(q: CiQuery) -> Result<IntervalResult> {
    mirror(q, qhat_g)
}

/// `k/n - sqrt(-ln α / 2n)`, clamped at 0.
pub fn qhat_hoeffding(q: CiQuery) -> Result<IntervalResult> {
    if q.alpha <= 0.0 {
        return domain("the Hoeffding bound is -infinity at alpha = 0");
    }
    let v = q.mean() - (-q.alpha.ln() / (2.0 * q.n as f64)).sqrt();
    Ok(IntervalResult::lower(Method::Hoeffding, q, v))
}

/// Binomial-like bound `I⁻¹_α(k-1, n-k+2)` (0 for `k ≤ 1`); flagged when
/// α > 1/2.
pub fn qhat_binomlike(q: CiQuery) -> Result<IntervalResult> {
    let v = if q.k <= 1 {
        0.0
    } else {
        inv_ibeta(q.alpha, (q.k - 1) as f64, (q.n - q.k + 2) as f64)?
    };
    let mut r = IntervalResult::lower(Method::BinomLike, q, v);
    if q.alpha > 0.5 {
        r.advisory = Some(Advisory::AlphaAboveHalf);
    }
    Ok(r)
}

/// Clopper-Pearson `I⁻¹_α(k, n-k+1)`; always flagged as invalid for
/// non-identical trials.
pub fn qhat_clopper_pearson(q: CiQuery) -> Result<IntervalResult> {
    let v = if q.k == 0 {
        0.0
    } else {
        inv_ibeta(q.alpha, q.k as f64, (q.n - q.k + 1) as f64)?
    };
    let mut r = IntervalResult::lower(Method::ClopperPearson, q, v);
    r.advisory = Some(Advisory::InvalidForNonIid);
    Ok(r)
}

/// Estimator values for every success count `k = 0..=n`.
pub fn bound_table(method: Method, side: Side, n: usize, alpha: f64) -> Result<Vec<f64>> {
    (0..=n)
        .map(|k| Ok(method.bound(CiQuery::new(n, k, alpha)?, side)?.value))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poibin::f_bound;
    use crate::special::ibeta;

    fn q(n: usize, k: usize, alpha: f64) -> CiQuery {
        CiQuery::new(n, k, alpha).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn bisect_inverse(alpha: f64, a: f64, b: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if ibeta(mid, a, b) < alpha {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    const ALPHAS: [f64; 9] = [0.001, 0.01, 0.05, 0.1, 0.2, 0.25, 0.3, 0.4, 0.5];

    #[test]
    fn qhat_f_examples() {
        assert!(close(
            qhat_f(q(20, 1, 0.05)).unwrap().value,
            1.0 / 400.0,
            1e-12
        ));
        for n in 1..10 {
            for alpha in [0.0, 0.2, 0.99] {
                assert_eq!(qhat_f(q(n, 0, alpha)).unwrap().value, 0.0);
            }
        }
        assert!(close(qhat_f(q(2, 2, 0.25)).unwrap().value, 0.5, 1e-14));
    }

    #[test]
    fn upper_examples() {
        for n in 1..10 {
            assert_eq!(qhat_f_upper(q(n, n, 0.3)).unwrap().value, 1.0);
            assert_eq!(qhat_g_upper(q(n, n, 0.3)).unwrap().value, 1.0);
        }
        let r = qhat_f_upper(q(20, 19, 0.05)).unwrap();
        assert!(close(r.value, 0.9975, 1e-12));
        assert_eq!(r.side, Side::Upper);
        assert!(close(
            qhat_g_upper(q(20, 19, 0.05)).unwrap().value,
            0.9975,
            1e-12
        ));
        assert!(close(
            qhat_f_upper(q(2, 0, 0.25)).unwrap().value,
            0.5,
            1e-14
        ));
        assert!(close(
            qhat_g_upper(q(2, 0, 0.5)).unwrap().value,
            1.0 / 3.0,
            1e-14
        ));
    }

    #[test]
    fn alpha_star_examples() {
        for n in 1..10 {
            assert_eq!(alpha_star(n, 1).unwrap(), 0.0);
        }
        assert!(close(alpha_star(2, 2).unwrap(), 0.25, 1e-15));
        assert_eq!(format!("{:.3}", alpha_star(16, 2).unwrap()), "0.264");
        assert!(alpha_star(5, 0).is_err());
        for n in 2..=60 {
            for k in 2..=n {
                assert!(alpha_star(n, k).unwrap() >= 0.25 - 1e-12);
            }
        }
    }

    #[test]
    fn qhat_g_examples() {
        assert!(close(qhat_g(q(20, 1, 0.05)).unwrap().value, 0.0025, 1e-12));
        assert_eq!(qhat_g(q(7, 0, 0.4)).unwrap().value, 0.0);
        let g = qhat_g(q(2, 2, 0.5)).unwrap().value;
        assert!(close(g, 1.0 - 0.5 / (2.0 * 0.75), 1e-14));
        assert!(qhat_f(q(2, 2, 0.5)).unwrap().value >= g);
    }

    #[test]
    fn hoeffding_examples() {
        assert_eq!(qhat_hoeffding(q(100, 10, 0.05)).unwrap().value, 0.0);
        assert!(close(
            qhat_hoeffding(q(13, 4, 1.0)).unwrap().value,
            4.0 / 13.0,
            1e-15
        ));
        let expect = 0.5 - (20f64.ln() / 40.0).sqrt();
        assert!(close(
            qhat_hoeffding(q(20, 10, 0.05)).unwrap().value,
            expect,
            1e-15
        ));
        assert!(close(expect, 0.22633, 1e-5));
        assert!(qhat_hoeffding(q(5, 2, 0.0)).is_err());
        // "no conclusion" region of the n = 100, k = 10 curve ends near α ≈ 0.135
        assert_eq!(qhat_hoeffding(q(100, 10, 0.135)).unwrap().value, 0.0);
        assert!(qhat_hoeffding(q(100, 10, 0.14)).unwrap().value > 0.0);
    }

    #[test]
    fn binomlike_examples() {
        assert_eq!(qhat_binomlike(q(9, 1, 0.3)).unwrap().value, 0.0);
        for n in 2..30 {
            let v = qhat_binomlike(q(n, 2, 0.1)).unwrap().value;
            assert!(close(v, 1.0 - 0.9f64.powf(1.0 / n as f64), 1e-14));
        }
        let v = qhat_binomlike(q(20, 10, 0.05)).unwrap().value;
        assert!(close(v, bisect_inverse(0.05, 9.0, 12.0), 1e-12));
        assert_eq!(
            qhat_binomlike(q(20, 10, 0.6)).unwrap().advisory,
            Some(Advisory::AlphaAboveHalf)
        );
        assert_eq!(qhat_binomlike(q(20, 10, 0.5)).unwrap().advisory, None);
        for n in 2..20 {
            for k in 2..=n {
                assert_eq!(qhat_binomlike(q(n, k, 1.0)).unwrap().value, 1.0);
                let near = qhat_binomlike(q(n, k, 1.0 - 1e-9)).unwrap().value;
                assert!(near > qhat_binomlike(q(n, k, 0.9)).unwrap().value && near < 1.0);
            }
        }
    }

    #[test]
    fn clopper_pearson_examples() {
        for n in 1..30 {
            for alpha in [0.01, 0.3] {
                let v = qhat_clopper_pearson(q(n, 1, alpha)).unwrap();
                assert!(close(
                    v.value,
                    1.0 - (1.0 - alpha).powf(1.0 / n as f64),
                    1e-14
                ));
                assert_eq!(v.advisory, Some(Advisory::InvalidForNonIid));
            }
            assert_eq!(qhat_clopper_pearson(q(n, 0, 0.1)).unwrap().value, 0.0);
        }
        let cp = qhat_clopper_pearson(q(20, 1, 0.05)).unwrap().value;
        assert!(close(cp, 0.002561, 1e-6) && cp > 0.0025);
    }

    #[test]
    fn clopper_pearson_exceeds_optimal_at_one_success() {
        for n in 2..=100 {
            for i in 1..=99 {
                let alpha = i as f64 / 100.0;
                let cp = qhat_clopper_pearson(q(n, 1, alpha)).unwrap().value;
                let f = qhat_f(q(n, 1, alpha)).unwrap().value;
                assert!(close(f, alpha / n as f64, 1e-14));
                assert!(cp > f, "n={n} alpha={alpha}");
            }
        }
    }

    #[test]
    fn monotone_in_k() {
        for n in 1..=40 {
            for &alpha in &ALPHAS {
                for m in Method::ALL {
                    let vals = bound_table(m, Side::Lower, n, alpha).unwrap();
                    for w in vals.windows(2) {
                        assert!(w[1] >= w[0] - 1e-14, "{m} n={n} alpha={alpha}");
                    }
                }
            }
        }
    }

    #[test]
    fn dominance_and_equality() {
        for n in 1..=40 {
            for k in 0..=n {
                for &alpha in &ALPHAS {
                    let query = q(n, k, alpha);
                    let f = qhat_f(query).unwrap().value;
                    let g = qhat_g(query).unwrap().value;
                    let h = qhat_hoeffding(query).unwrap().value;
                    let one = qhat_binomlike(query).unwrap().value;
                    assert!(f >= g - 1e-12 && g >= 0.0);
                    assert!(g >= h - 1e-12, "g<h n={n} k={k} alpha={alpha}");
                    assert!(g >= one - 1e-12, "g<1 n={n} k={k} alpha={alpha}");
                    assert!(f <= query.mean() + 1e-15 && g <= query.mean() + 1e-15);
                    if alpha <= 0.25 || k <= 1 {
                        assert!(close(f, g, 1e-11), "n={n} k={k} alpha={alpha}");
                    }
                }
            }
        }
    }

    #[test]
    fn tightness_identity() {
        for n in 1..=25 {
            for k in 1..=n {
                for i in 1..50 {
                    let alpha = i as f64 / 50.0;
                    let v = qhat_f(q(n, k, alpha)).unwrap().value;
                    let idx = HoeffdingIndex::from_d(n, k as i64 - 1).unwrap();
                    assert!(
                        close(f_bound(v, idx).unwrap(), alpha, 1e-9),
                        "n={n} k={k} alpha={alpha}"
                    );
                }
            }
        }
    }

    #[test]
    fn degenerate_alphas() {
        for n in 1..12 {
            for k in 0..=n {
                for m in [
                    Method::F,
                    Method::G,
                    Method::BinomLike,
                    Method::ClopperPearson,
                ] {
                    assert_eq!(m.lower(q(n, k, 0.0)).unwrap().value, 0.0);
                }
                let at_one = qhat_f(q(n, k, 1.0)).unwrap().value;
                assert!(close(at_one, k as f64 / n as f64, 1e-14));
                assert!(close(qhat_g(q(n, k, 1.0)).unwrap().value, at_one, 1e-14));
            }
        }
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("nope".parse::<Method>().is_err());
        assert!(CiQuery::new(3, 4, 0.1).is_err());
        assert!(CiQuery::new(0, 0, 0.1).is_err());
        assert!(CiQuery::new(3, 1, -0.1).is_err());
    }
}
