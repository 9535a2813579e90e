//! Analytic class probabilities and expectations under a two-color mixing
//! matrix, with a Monte Carlo check.

use colorcensus::nullmodel::simulate_null;
use colorcensus::{
    class_table, expected_count, exact_binomial_test, triad_probability, ColoredGraph, CugOptions,
    MixingMatrix,
};

fn main() -> colorcensus::Result<()> {
    // ties are likelier within a color than across
    let mm = MixingMatrix::from_probabilities(2, false, vec![0.4, 0.1, 0.1, 0.3])?;
    let colors: Vec<&str> = (0..24).map(|i| if i < 10 { "a" } else { "b" }).collect();
    let g = ColoredGraph::from_labels(false, &colors, &[])?;

    let table = class_table(2, false);
    let sims = simulate_null(&g, &mm, &CugOptions::new(2000, 3))?;
    println!("{:<12} {:>8} {:>6} {:>9} {:>9} {:>9}", "class", "P", "N", "E", "V", "sim mean");
    let mut total = 0.0;
    for (idx, ct) in table.classes().iter().enumerate() {
        let p = triad_probability(&mm, ct);
        let e = expected_count(&g, &mm, ct);
        let mean = sims.iter().map(|s| s[idx] as f64).sum::<f64>() / sims.len() as f64;
        total += e.expected;
        println!(
            "{:<12} {:>8.5} {:>6} {:>9.3} {:>9.3} {:>9.3}",
            ct.canonical_name(g.labels()),
            p.total,
            e.n_triplets,
            e.expected,
            e.variance,
            mean
        );
    }
    println!("sum of expectations {total:.6} over {} triples", 24 * 23 * 22 / 6);
    println!("two-sided binomial p for 0 of 10 at 0.5: {:?}", exact_binomial_test(0, 10, 0.5));
    Ok(())
}
