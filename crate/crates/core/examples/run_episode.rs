//! Run the full pipeline on one synthetic episode and print its trace.

use landnav::harness::{
    generate_world, run_episode, ProviderFactory, RunConfig, Scene, WorldParams,
};

fn main() -> landnav::Result<()> {
    let scene: Scene = generate_world(&WorldParams::new(40, 2.6, 24, 3, 8))?.into();
    let mut cfg = RunConfig::default();
    cfg.providers.noise = 0.15;
    let providers = ProviderFactory::from_settings(&cfg.providers)?.for_scene(&scene)?;

    for ep in &scene.episodes {
        let (result, trace) = run_episode(ep, &scene.graph, &cfg, &providers)?;
        println!("{}: {}", ep.episode_id, ep.instruction);
        println!("  landmarks  {:?}", trace.landmarks);
        let goals: Vec<String> = trace
            .retrieval
            .iter()
            .map(|r| format!("{}:{:.2}", r.node_id, r.score))
            .collect();
        println!("  goals      {}", goals.join(" "));
        println!("  hypotheses {}", trace.hypotheses.len());
        println!(
            "  chosen     {:?} (tie of {})",
            trace.chosen, trace.tie_count
        );
        println!("  gt         {:?}", ep.gt_path());
        println!("  nDTW {:.3}, success {}", result.ndtw, result.success);
        for d in &result.diagnostics {
            println!("  note: {d}");
        }
    }
    Ok(())
}
