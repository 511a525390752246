//! Load an edge list, summarise it and write it back.
//!
//! ```bash
//! cargo run --example ingest_edge_list -- path/to/edges.txt
//! ```
//!
//! Without an argument a small labelled file is generated first.

use std::path::PathBuf;

use deanon::io::{load_edge_list, save_edge_list};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("deanon-ingest-example");
    std::fs::create_dir_all(&dir)?;
    let input = match std::env::args().nth(1) {
        Some(p) => PathBuf::from(p),
        None => {
            let p = dir.join("friends.txt");
            std::fs::write(
                &p,
                "# user user\nalice bob\nbob carol\ncarol alice\nbob alice\ndave erin\nerin erin\nfrank carol\n",
            )?;
            p
        }
    };

    let file = load_edge_list(&input)?;
    let stats = file.stats()?;
    println!("{}: {} lines", input.display(), file.line_count);
    println!(
        "n = {}, m = {}, density = {:.3e}, components = {} (largest {}), max degree {}",
        stats.n, stats.m, stats.density, stats.components, stats.largest_component, stats.max_degree
    );
    println!("dropped {} duplicate edges and {} self-loops", stats.duplicate_edges, stats.self_loops);

    let out = dir.join("normalised.txt");
    save_edge_list(&file.graph, &file.labels, &out)?;
    let back = load_edge_list(&out)?;
    assert_eq!(back.graph, file.graph);
    assert_eq!(back.labels, file.labels);
    println!("round trip through {} preserved ids and labels", out.display());
    Ok(())
}
