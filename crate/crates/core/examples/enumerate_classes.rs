//! Lists the colored triad classes for a given number of colors.
//!
//! ```text
//! cargo run --example enumerate_classes -- 3 undirected
//! ```

use colorcensus::isoclass::index_labels;
use colorcensus::{class_count_formula, enumerate_classes, total_count, TriadClass};

fn main() {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().map_or(2, |s| s.parse().expect("color count"));
    let directed = args.next().as_deref() != Some("undirected");

    let labels = index_labels(k);
    for &class in TriadClass::all(directed) {
        let names: Vec<String> = enumerate_classes(k, directed)
            .into_iter()
            .filter(|ct| ct.class == class)
            .map(|ct| ct.triplet_name(&labels))
            .collect();
        println!(
            "{class:<5} {:>4} classes, automorphisms {}  {}",
            class_count_formula(class, k),
            colorcensus::structural_automorphisms(class).len(),
            names.join(" ")
        );
    }
    println!("total {}", total_count(k, directed));
}
