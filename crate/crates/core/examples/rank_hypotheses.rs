//! Rank the hypotheses of one episode by alignment and by holistic rating.

use landnav::alignment::{filter_hypotheses, rank_approach1, rank_approach2};
use landnav::harness::{generate_world, WorldParams};
use landnav::providers::{rank_goal_candidates, LandmarkExtractor, Oracle, RuleBasedExtractor};
use landnav::topomap::generate_hypotheses;

fn main() -> landnav::Result<()> {
    let world = generate_world(&WorldParams::new(40, 3.0, 20, 4, 21))?;
    let oracle = Oracle::new(world.labels.clone()).with_noise(0.1, 5)?;
    let ep = world
        .episodes
        .iter()
        .max_by_key(|e| e.path.len())
        .expect("episodes");
    println!("{}\n  gt {:?}", ep.instruction, ep.gt_path());

    let landmarks = RuleBasedExtractor.extract_landmarks(&ep.instruction)?;
    let last = landmarks.last().expect("non-empty");
    let goals: Vec<String> = rank_goal_candidates(&world.graph, last, 5, &oracle)?
        .into_iter()
        .map(|r| r.node_id)
        .collect();
    let set = generate_hypotheses(&world.graph, ep.start_node(), &goals)?;
    let hyps = filter_hypotheses(set.hypotheses, &landmarks);

    let by_alignment = rank_approach1(&world.graph, &hyps, &landmarks, &oracle, 42)?;
    for (h, m) in by_alignment.scored.iter().zip(&by_alignment.matrices) {
        println!(
            "  alignment {:.3} ({} landmarks x {} panoramas) {:?}",
            h.alignment.unwrap_or_default(),
            m.rows(),
            m.cols(),
            h.path.node_ids
        );
    }
    println!(
        "  chosen {:?}, tie of {}",
        by_alignment.chosen.path.node_ids, by_alignment.tie_count
    );

    let by_rating = rank_approach2(
        &world.graph,
        &hyps,
        &ep.instruction,
        &landmarks,
        &oracle,
        42,
    )?;
    for h in &by_rating.scored {
        println!(
            "  rating {} {:?}",
            h.rating.unwrap_or_default(),
            h.path.node_ids
        );
    }
    println!(
        "  chosen {:?}, tie of {}",
        by_rating.chosen.path.node_ids, by_rating.tie_count
    );
    Ok(())
}
