//! Inverses of the CDF bound in `q̄`, and their linear over-bounds.
//!
//! `f_tilde` inverts `q̄ ↦ f_bound(q̄, d, n)` on `[0, (d+1)/n]`; `g_tilde_inv`
//! is the cheaper piecewise-linear variant that never exceeds it.

use crate::error::{domain, Result};
use crate::poibin::{alpha_dagger_unchecked, HoeffdingIndex};
use crate::special::inv_ibeta;

/// Half-width of the band around `α†` in which both branches are evaluated.
pub const DAGGER_TOL: f64 = 1e-12;

/// `(d, n, α)` fed to the inverse functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseQuery {
    pub n: usize,
    pub d: i64,
    pub alpha: f64,
}

impl InverseQuery {
    pub fn new(n: usize, d: i64, alpha: f64) -> Result<Self> {
        HoeffdingIndex::from_d(n, d)?;
        if !(0.0..=1.0).contains(&alpha) {
            return domain(format!("alpha={alpha} outside [0,1]"));
        }
        Ok(Self { n, d, alpha })
    }

    fn index(&self) -> HoeffdingIndex {
        HoeffdingIndex {
            n: self.n,
            d: self.d,
            c: self.n as i64 - self.d - 1,
        }
    }
}

/// Inverse in `p` of the zero-forced tail `q_script(c, p, s)`:
/// `(s + (n-s) I⁻¹_{1-α}(c-s+1, n-c)) / n`.
pub fn s_script(idx: HoeffdingIndex, alpha: f64, s: i64) -> Result<f64> {
    idx.require_c_in_range()?;
    if s < 0 || s > idx.c {
        return domain(format!("s={s} outside [0, c={}]", idx.c));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return domain(format!("alpha={alpha} outside [0,1]"));
    }
    s_script_unchecked(idx, alpha, s)
}

fn s_script_unchecked(idx: HoeffdingIndex, alpha: f64, s: i64) -> Result<f64> {
    Ok(1.0 - s_script_complement(idx, alpha, s)?)
}

/// `1 - s_script = (n-s)/n · I⁻¹_α(n-c, c-s+1)`, free of cancellation.
fn s_script_complement(idx: HoeffdingIndex, alpha: f64, s: i64) -> Result<f64> {
    let n = idx.n as f64;
    let c = idx.c as f64;
    let sf = s as f64;
    let y = inv_ibeta(alpha, n - c, c - sf + 1.0)?;
    Ok(((n - sf) * y / n).clamp(0.0, 1.0))
}

/// Inverse of `q_max(c, ·)` from `α ∈ [α†, 1]` onto `p ∈ [c/n, (c+1)/n]`.
pub fn s_max(idx: HoeffdingIndex, alpha: f64) -> Result<f64> {
    Ok(s_max_with_arg(idx, alpha)?.0)
}

/// `(S, argmax s)`; ties keep the smallest `s`.
pub fn s_max_with_arg(idx: HoeffdingIndex, alpha: f64) -> Result<(f64, i64)> {
    let (comp, s) = s_max_complement(idx, alpha)?;
    Ok((1.0 - comp, s))
}

/// `1 - s_max` and its argmax, minimising the complemented form directly.
fn s_max_complement(idx: HoeffdingIndex, alpha: f64) -> Result<(f64, i64)> {
    idx.require_c_in_range()?;
    if !(alpha <= 1.0) {
        return domain(format!("alpha={alpha} outside [0,1]"));
    }
    let dagger = alpha_dagger_unchecked(idx);
    if alpha < dagger - DAGGER_TOL {
        return domain(format!("alpha={alpha} below the branch point {dagger}"));
    }
    let mut best = (f64::INFINITY, 0);
    for s in 0..=idx.c {
        let v = s_script_complement(idx, alpha, s)?;
        if v < best.0 {
            best = (v, s);
        }
    }
    Ok(best)
}

/// Inverse of `q̄ ↦ f_bound(q̄, d, n)` on `[0, (d+1)/n]`, extended with
/// `0` at `d = -1`.
///
/// At `d = n` the bound is identically zero and has no inverse; the value is
/// then `0` for `α = 0` and `1` otherwise.
pub fn f_tilde(q: InverseQuery) -> Result<f64> {
    inverse_with(q, |idx, alpha| Ok(s_max_complement(idx, alpha)?.0))
}

/// Piecewise-linear lower replacement for [`f_tilde`]: above `α†` the
/// zero-forced maximum is traded for its linear over-bound.
pub fn g_tilde_inv(q: InverseQuery) -> Result<f64> {
    inverse_with(q, |idx, alpha| Ok(1.0 - u_linear_unchecked(idx, alpha)))
}

fn inverse_with(
    q: InverseQuery,
    upper_branch: impl Fn(HoeffdingIndex, f64) -> Result<f64>,
) -> Result<f64> {
    let InverseQuery { n, d, alpha } = q;
    if d < 0 {
        return Ok(0.0);
    }
    if d >= n as i64 {
        return Ok(if alpha > 0.0 { 1.0 } else { 0.0 });
    }
    let idx = q.index();
    let dagger = alpha_dagger_unchecked(idx);
    let lower_branch = || inv_ibeta(alpha, d as f64 + 1.0, (n as i64 - d) as f64);
    let value = if (alpha - dagger).abs() <= DAGGER_TOL {
        upper_branch(idx, alpha)?.min(lower_branch()?)
    } else if alpha > dagger {
        upper_branch(idx, alpha)?
    } else {
        lower_branch()?
    };
    Ok(value.clamp(0.0, 1.0))
}

/// Linear over-bound `1 - (1-α†)(np - c)` of `q_max(c, p)` on `[c/n, (c+1)/n]`.
pub fn r_linear(idx: HoeffdingIndex, p: f64) -> Result<f64> {
    idx.require_c_in_range()?;
    let n = idx.n as f64;
    let c = idx.c as f64;
    if p < c / n - DAGGER_TOL || p > (c + 1.0) / n + DAGGER_TOL {
        return domain(format!("p={p} outside [c/n, (c+1)/n] for c={c}, n={n}"));
    }
    let dagger = alpha_dagger_unchecked(idx);
    Ok(1.0 - (1.0 - dagger) * (n * p - c))
}

/// Linear over-bound `(c + (1-α)/(1-α†)) / n` of `s_max(c, α)` on `[α†, 1]`.
pub fn u_linear(idx: HoeffdingIndex, alpha: f64) -> Result<f64> {
    idx.require_c_in_range()?;
    let dagger = alpha_dagger_unchecked(idx);
    if alpha < dagger - DAGGER_TOL || alpha > 1.0 {
        return domain(format!("alpha={alpha} outside [{dagger}, 1]"));
    }
    Ok(u_linear_unchecked(idx, alpha))
}

fn u_linear_unchecked(idx: HoeffdingIndex, alpha: f64) -> f64 {
    let dagger = alpha_dagger_unchecked(idx);
    (idx.c as f64 + (1.0 - alpha) / (1.0 - dagger)) / idx.n as f64
}
