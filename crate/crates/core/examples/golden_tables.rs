//! Recomputes the branch-point table and the peak binomial probabilities and
//! compares them with the embedded golden values.

use bernoulli_bounds::verify::{alpha_dagger_floor_check, table1_check, table2_check, TABLE_II};

fn main() -> bernoulli_bounds::Result<()> {
    let t1 = table1_check(None)?;
    for n in (2..=16).rev() {
        let row: Vec<String> = t1
            .iter()
            .filter(|c| c.n == n)
            .map(|c| format!("{:.3}", c.value))
            .collect();
        println!("{n:>2} | {}", row.join(" "));
    }
    println!(
        "table I: {}/{} cells match",
        t1.iter().filter(|c| c.pass).count(),
        t1.len()
    );

    for (cell, (_, num, den, printed)) in table2_check()?.iter().zip(TABLE_II) {
        println!(
            "d = {:>2}, {:>2}: {:.9}  ({num}/{den} ~ {printed})  {}",
            cell.d,
            16 - cell.d,
            cell.value,
            if cell.pass { "ok" } else { "MISMATCH" }
        );
    }

    let floor = alpha_dagger_floor_check(300)?;
    println!(
        "smallest branch point over {} cells up to n = 300: {} at (n, d) = {:?}",
        floor.cells, floor.min_value, floor.min_at
    );
    Ok(())
}
