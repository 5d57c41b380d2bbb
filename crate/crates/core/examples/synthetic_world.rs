//! Generate a seeded synthetic world and write it, plus its episodes in dataset layout.

use landnav::harness::{generate_world, write_dataset, WorldParams};

fn main() -> landnav::Result<()> {
    let params = WorldParams::new(30, 2.6, 16, 5, 11).scene_id("demo");
    let world = generate_world(&params)?;
    println!(
        "{}: {} nodes, {} edges, {} unique labels",
        world.scene_id(),
        world.graph.node_count(),
        world.graph.edge_count(),
        world.unique_labels().len()
    );
    for ep in &world.episodes {
        println!(
            "{}: {}\n  gt {:?}",
            ep.episode_id,
            ep.instruction,
            ep.gt_path()
        );
    }

    let dir = std::env::temp_dir().join("landnav-synthetic-world");
    std::fs::create_dir_all(&dir).map_err(|e| landnav::Error::io(&dir, e))?;
    world.save(&dir.join("world.json"))?;
    write_dataset(
        &world.episodes,
        &dir.join("episodes.json"),
        &dir.join("viewpoints.json"),
    )?;
    println!("written to {}", dir.display());
    Ok(())
}
