use moto::synthetic::{planted_clique_ring, PlantedConfig};

fn main() {
    let dir = std::env::args()
        .nth(1)
        .expect("usage: snapshot_demo OUT_DIR");
    let fixture = planted_clique_ring(&PlantedConfig::default()).unwrap();
    fixture
        .graph
        .write_snapshot(std::path::Path::new(&dir))
        .unwrap();
    println!("wrote {} nodes to {dir}", fixture.graph.node_count());
}
