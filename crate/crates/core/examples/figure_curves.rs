//! Data behind the two comparison panels: bounds against the success count,
//! and against the confidence parameter, as CSV on stdout.

use bernoulli_bounds::cli::alpha_grid;
use bernoulli_bounds::intervals::{alpha_star, CiQuery, Method};

fn row(q: CiQuery) -> bernoulli_bounds::Result<[f64; 4]> {
    Ok([
        Method::F.lower(q)?.value,
        Method::G.lower(q)?.value,
        Method::BinomLike.lower(q)?.value,
        Method::Hoeffding.lower(q)?.value,
    ])
}

fn main() -> bernoulli_bounds::Result<()> {
    println!("# panel a: n = 20, alpha = 0.05");
    println!("k,qhat_f,qhat_g,qhat_1,qhat_h");
    for k in 0..=20 {
        let [f, g, b, h] = row(CiQuery::new(20, k, 0.05)?)?;
        println!("{k},{f},{g},{b},{h}");
    }

    // The Hoeffding column stays at zero for small alpha; g leaves f at alpha*.
    println!(
        "# panel b: n = 100, k = 10, alpha* = {}",
        alpha_star(100, 10)?
    );
    println!("alpha,qhat_f,qhat_g,qhat_1,qhat_h");
    for alpha in alpha_grid(100, 10, 40) {
        let [f, g, b, h] = row(CiQuery::new(100, 10, alpha)?)?;
        println!("{alpha},{f},{g},{b},{h}");
    }
    Ok(())
}
