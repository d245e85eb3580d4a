//! Shows the optimal lower bound cannot be raised: for each success count a
//! model with mean just above the bound makes any larger estimate undercover.

use bernoulli_bounds::verify::tightness_witness;

fn main() -> bernoulli_bounds::Result<()> {
    let (n, alpha) = (8, 0.25);
    println!(
        "k  qhat_f        witness mean  P(S <= k-1)   breaks 1-alpha={}",
        1.0 - alpha
    );
    for k in 1..=n {
        let w = tightness_witness(n, k, alpha, 1e-6)?;
        println!(
            "{k}  {:.10}  {:.10}  {:.10}  {}",
            w.qhat,
            w.mean,
            w.raised_coverage,
            w.breaks_coverage()
        );
    }
    let w = tightness_witness(20, 1, 0.05, 1e-4)?;
    let mass: Vec<_> = w.model.probs().iter().filter(|&&q| q > 0.0).collect();
    println!("n = 20, k = 1: witness puts {mass:?} on one trial, zeros elsewhere");
    Ok(())
}
