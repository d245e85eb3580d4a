//! Exact and simulated coverage for a heterogeneous model, and a model on
//! which Clopper-Pearson undercovers once the trials stop being identical.

use bernoulli_bounds::intervals::{CiQuery, Method, Side};
use bernoulli_bounds::poibin::BernoulliModel;
use bernoulli_bounds::verify::{exact_coverage, mc_coverage};

fn main() -> bernoulli_bounds::Result<()> {
    let model = BernoulliModel::new(vec![0.02, 0.9, 0.4, 0.4, 0.0, 1.0, 0.65, 0.1, 0.3, 0.55])?;
    println!("model mean {:.4}", model.mean());
    for m in Method::ALL {
        let r = mc_coverage(&model, m, Side::Lower, 0.1, 200_000, 7)?;
        println!(
            "{:<16} exact {:.6}  simulated {:.6} ({} draws, {})",
            m.name(),
            r.exact_coverage,
            r.mc_coverage.unwrap_or(f64::NAN),
            r.mc_trials,
            r.rng
        );
    }

    // One trial carries all the mass; the mean sits between alpha/n and the
    // Clopper-Pearson bound at one success.
    let (n, alpha) = (20, 0.05);
    let cp = Method::ClopperPearson
        .lower(CiQuery::new(n, 1, alpha)?)?
        .value;
    let qbar = 0.5 * (alpha / n as f64 + cp);
    let mut q = vec![0.0; n];
    q[0] = n as f64 * qbar;
    let skewed = BernoulliModel::new(q)?;
    for m in [Method::F, Method::ClopperPearson] {
        let cov = exact_coverage(&skewed, m, Side::Lower, alpha)?.exact_coverage;
        println!(
            "skewed model, {:<16} coverage {cov:.6} (target {})",
            m.name(),
            1.0 - alpha
        );
    }
    Ok(())
}
