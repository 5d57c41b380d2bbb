//! Retrieve goal candidates for a landmark phrase and measure precision@k.

use landnav::harness::{eval_retrieval, generate_world, WorldParams};
use landnav::providers::{rank_goal_candidates, Oracle};

fn main() -> landnav::Result<()> {
    let world = generate_world(&WorldParams::new(40, 2.6, 24, 1, 3))?;
    let oracle = Oracle::new(world.labels.clone());

    let landmark = world
        .unique_labels()
        .into_iter()
        .next()
        .expect("some unique label");
    println!("top-3 for `{landmark}`:");
    for (rank, hit) in rank_goal_candidates(&world.graph, &landmark, 3, &oracle)?
        .iter()
        .enumerate()
    {
        let labels: Vec<&String> = world.labels[&hit.node_id].iter().collect();
        println!(
            "  {}. {} score {:.3} {:?}",
            rank + 1,
            hit.node_id,
            hit.score,
            labels
        );
    }

    for k in [1, 3, 10] {
        let eval = eval_retrieval(&world.graph, &world.labels, k, &oracle)?;
        println!("mean precision@{k}: {:.3}", eval.mean_precision);
    }
    Ok(())
}
