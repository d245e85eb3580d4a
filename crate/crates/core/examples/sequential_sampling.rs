//! Adaptive experiments: each round's success probability depends on the
//! outcomes so far, yet the optimal bound still covers the realized average.

use bernoulli_bounds::verify::{builtin_policy, run_sequential_many, SequentialPolicy};

/// Plays safe after two straight failures.
struct Cautious;

impl SequentialPolicy for Cautious {
    fn name(&self) -> String {
        "cautious".into()
    }

    fn next_prob(&self, history: &[bool]) -> f64 {
        match history {
            [.., false, false] => 0.95,
            [.., true] => 0.15,
            _ => 0.4,
        }
    }
}

fn main() -> bernoulli_bounds::Result<()> {
    let (n, alpha, runs) = (20, 0.05, 10_000);
    let mut policies: Vec<Box<dyn SequentialPolicy>> =
        ["constant:0.5", "adversarial-threshold", "momentum"]
            .iter()
            .map(|p| builtin_policy(p))
            .collect::<Result<_, _>>()?;
    policies.push(Box::new(Cautious));

    for policy in &policies {
        let (history, s) = run_sequential_many(policy.as_ref(), n, alpha, runs, 42)?;
        let mean_qbar = history.iter().map(|r| r.realized_qbar).sum::<f64>() / runs as f64;
        println!(
            "{:<22} covered {:.4} (>= {:.4}?) {}  mean realized qbar {:.3}",
            s.policy,
            s.covered_fraction,
            1.0 - alpha - 3.0 * s.sigma,
            if s.pass { "yes" } else { "NO" },
            mean_qbar
        );
    }
    Ok(())
}
