//! Build a topological map from a few hand-written trajectories and query it.

use landnav::harness::Episode;
use landnav::topomap::{build_graph, generate_hypotheses, shortest_path, GraphNode};

fn node(id: &str, x: f64, y: f64) -> GraphNode {
    GraphNode::new(id, [x, y, 0.0], format!("panos/{id}.jpg"))
}

fn episode(id: &str, path: Vec<GraphNode>) -> Episode {
    Episode {
        episode_id: id.into(),
        scene_id: "apartment".into(),
        instruction: String::new(),
        path,
    }
}

fn main() -> landnav::Result<()> {
    let (door, hall, kitchen, living, bedroom, bath) = (
        node("door", 0.0, 0.0),
        node("hall", 2.0, 0.0),
        node("kitchen", 4.0, 0.0),
        node("living", 2.0, 3.0),
        node("bedroom", 2.0, 6.0),
        node("bath", 4.0, 6.0),
    );
    let episodes = vec![
        episode("a", vec![door.clone(), hall.clone(), kitchen.clone()]),
        episode("b", vec![hall.clone(), living.clone(), bedroom.clone()]),
        episode("c", vec![bedroom.clone(), bath.clone()]),
    ];
    let graph = build_graph(&episodes, "apartment")?;
    println!("{} nodes, {} edges", graph.node_count(), graph.edge_count());
    for (a, b) in graph.edges() {
        println!("  {a} -- {b}");
    }

    let path = shortest_path(&graph, "door", "bath")?;
    println!("door -> bath: {}", path.node_ids.join(" -> "));

    let goals = ["bath", "kitchen", "nowhere"].map(String::from);
    let set = generate_hypotheses(&graph, "door", &goals)?;
    for h in &set.hypotheses {
        println!(
            "hypothesis (goal rank {}): {:?}",
            h.goal_rank, h.path.node_ids
        );
    }
    for s in &set.skipped {
        println!("skipped {} (rank {}): {}", s.goal, s.rank, s.reason);
    }
    Ok(())
}
