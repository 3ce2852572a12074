//! Builds the flip graph for d (default 3), 2-colors it with the standard
//! anchors and reports class sizes and connectivity.
//!
//!     cargo run --example signature_certificate -- 3

use lambda_s2::pipeline::{flip_graph, standard_anchors};

fn main() -> lambda_s2::Result<()> {
    let d: usize = std::env::args().nth(1).map_or(3, |s| s.parse().expect("d"));
    let graph = flip_graph(d)?;
    graph.check_involution()?;
    println!(
        "d = {d}: {} nodes, degree {}, {} flip edges",
        graph.node_count(),
        graph.degree(),
        graph.edges().count()
    );

    let sig = graph.check_bipartite(&standard_anchors(d)?)?.signature()?;
    let (plus, minus) = sig.class_sizes();
    println!("bipartite: {plus} positive, {minus} negative");
    println!(
        "edges joining equal signs: {}",
        graph.same_sign_edges(&sig).len()
    );

    let conn = graph.check_connected();
    println!("connected components: {}", conn.count());
    Ok(())
}
