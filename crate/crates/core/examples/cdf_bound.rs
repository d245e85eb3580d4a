//! The tight lower bound on `P(successes ≤ d)` at fixed mean, checked against
//! random models and attained by extremal ones.

use bernoulli_bounds::poibin::{
    best_extremal_cdf, bound_branch, exact_pmf, f_bound, BernoulliModel, HoeffdingIndex,
};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> bernoulli_bounds::Result<()> {
    let (n, qbar) = (10, 0.37);
    println!("n = {n}, mean = {qbar}");
    println!("d  branch     1 - f        extremal CDF  extremal q");
    for d in 0..n as i64 {
        let idx = HoeffdingIndex::from_d(n, d)?;
        let (cdf, model) = best_extremal_cdf(qbar, idx)?;
        println!(
            "{d}  {:<9}  {:.10}  {:.10}  {:?}",
            format!("{:?}", bound_branch(qbar, idx)),
            1.0 - f_bound(qbar, idx)?,
            cdf,
            model
                .probs()
                .iter()
                .map(|q| (q * 1e4).round() / 1e4)
                .collect::<Vec<_>>()
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut slack = f64::INFINITY;
    for _ in 0..10_000 {
        let q: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let model = BernoulliModel::new(q)?;
        let pb = exact_pmf(&model);
        for d in 0..n as i64 {
            let bound = 1.0 - f_bound(model.mean(), HoeffdingIndex::from_d(n, d)?)?;
            slack = slack.min(pb.cdf(d) - bound);
        }
    }
    println!("smallest CDF - bound over 10000 random models: {slack:.3e}");
    Ok(())
}
