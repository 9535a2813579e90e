//! Colored triad census of the karate club network with faction colors,
//! printing the most common classes.

use std::path::Path;

use colorcensus::{census, load_graph_files, Backend};

fn main() -> colorcensus::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let g = load_graph_files(
        data.join("karate_edges.txt"),
        data.join("karate_factions.txt"),
        false,
    )?;
    println!(
        "{} members, {} ties, factions {:?}",
        g.node_count(),
        g.edge_count(),
        g.labels()
    );

    let result = census(&g, Backend::default())?;
    println!("{} classes, {} triples", result.len(), result.total());

    let mut rows: Vec<_> = result.iter().filter(|(ct, _)| ct.class.name() != "003").collect();
    rows.sort_by_key(|(_, n)| std::cmp::Reverse(*n));
    for (ct, n) in rows.into_iter().take(15) {
        println!("{:<16} {n}", ct.canonical_name(result.labels()));
    }
    for (class, n) in result.by_class() {
        println!("{class:>4} {n}");
    }
    Ok(())
}
