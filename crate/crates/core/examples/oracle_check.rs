//! Compares the trace-based census with exhaustive triple enumeration on
//! random graphs.

use colorcensus::bench::random_colored_graph;
use colorcensus::{brute_force_census, census, Backend};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> colorcensus::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, k, degree, directed) in [(30, 3, 4.0, true), (120, 4, 6.0, true), (200, 5, 8.0, false)] {
        let g = random_colored_graph(n, k, degree, directed, &mut rng)?;
        let fast = census(&g, Backend::default())?;
        let slow = brute_force_census(&g)?;
        let differing = fast
            .counts()
            .iter()
            .zip(slow.counts())
            .filter(|(a, b)| a != b)
            .count();
        println!(
            "n={n:<4} k={k} directed={directed:<5} classes={:<5} differing={differing}",
            fast.len()
        );
        assert_eq!(fast, slow);
    }
    Ok(())
}
