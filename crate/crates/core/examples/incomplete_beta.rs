//! The special functions underneath: regularized incomplete beta, its
//! inverse, and the binomial tail identity.

use bernoulli_bounds::special::{binom_tail, inv_reg_inc_beta, reg_inc_beta};

fn main() -> bernoulli_bounds::Result<()> {
    for (x, a, b) in [
        (0.4, 3.0, 5.0),
        (0.05, 1.0, 20.0),
        (0.999, 40.0, 2.0),
        (0.3, 500.0, 800.0),
    ] {
        let v = reg_inc_beta(x, a, b)?;
        let back = inv_reg_inc_beta(v, a, b)?;
        println!("I_{x}({a}, {b}) = {v:.16e}   inverse -> {back}");
    }

    // P(Bin(n, x) >= d) = I_x(d, n - d + 1)
    let (n, d, x) = (60, 17, 0.25);
    println!("binomial tail {:.16}", binom_tail(n, d, x)?);
    println!(
        "beta form     {:.16}",
        reg_inc_beta(x, d as f64, (n - d + 1) as f64)?
    );

    // Far tails keep their relative precision.
    println!(
        "inverse at alpha = 1e-300: {:e}",
        inv_reg_inc_beta(1e-300, 9.0, 2.0)?
    );
    Ok(())
}
