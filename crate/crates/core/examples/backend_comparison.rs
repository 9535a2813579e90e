//! Dense-bitset against sparse storage on the same graphs.

use std::time::Instant;

use colorcensus::bench::random_colored_graph;
use colorcensus::{census, Backend};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> colorcensus::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    println!("{:>6} {:>6} {:>10} {:>10}", "n", "degree", "dense s", "sparse s");
    for (n, degree) in [(100, 6.0), (100, 40.0), (500, 6.0), (500, 200.0), (2000, 6.0)] {
        let g = random_colored_graph(n, 4, degree, true, &mut rng)?;
        let t = Instant::now();
        let dense = census(&g, Backend::dense())?;
        let dense_s = t.elapsed().as_secs_f64();
        let t = Instant::now();
        let sparse = census(&g, Backend::sparse())?;
        let sparse_s = t.elapsed().as_secs_f64();
        assert_eq!(dense, sparse);
        println!("{n:>6} {degree:>6} {dense_s:>10.4} {sparse_s:>10.4}");
    }
    Ok(())
}
