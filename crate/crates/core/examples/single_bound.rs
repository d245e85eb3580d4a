//! Every estimator, both sides, for one observation.
//!
//! ```text
//! cargo run --example single_bound -- 20 1 0.05
//! ```

use bernoulli_bounds::intervals::{alpha_star, CiQuery, Method, Side};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(Ok(20), |s| s.parse())?;
    let k: usize = args.get(1).map_or(Ok(1), |s| s.parse())?;
    let alpha: f64 = args.get(2).map_or(Ok(0.05), |s| s.parse())?;
    let query = CiQuery::new(n, k, alpha)?;

    println!(
        "{k} successes in {n} rounds, confidence {:.1}%",
        100.0 * (1.0 - alpha)
    );
    if k >= 2 {
        println!(
            "simple and optimal bounds coincide for alpha <= {:.6}",
            alpha_star(n, k)?
        );
    }
    println!("{:<16} {:>14} {:>14}", "method", "lower", "upper");
    for m in Method::ALL {
        if m == Method::Hoeffding && alpha == 0.0 {
            continue;
        }
        let lo = m.bound(query, Side::Lower)?;
        let hi = m.bound(query, Side::Upper)?;
        let note = lo
            .advisory
            .map_or(String::new(), |a| format!("  [{}]", a.name()));
        println!(
            "{:<16} {:>14.10} {:>14.10}{note}",
            m.name(),
            lo.value,
            hi.value
        );
    }
    Ok(())
}
