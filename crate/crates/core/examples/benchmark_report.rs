//! Benchmark both ranking approaches on synthetic scenes with noisy grounding.

use landnav::harness::{
    load_scenes, run_benchmark, Approach, ProviderFactory, RunConfig, SyntheticSuite,
};

fn main() -> landnav::Result<()> {
    for approach in [Approach::Alignment, Approach::Rating] {
        let mut cfg = RunConfig {
            approach,
            seed: 1,
            synthetic: Some(SyntheticSuite::new(4, 15, 100)),
            ..RunConfig::default()
        };
        cfg.providers.noise = 0.25;
        let scenes = load_scenes(&cfg)?;
        let factory = ProviderFactory::from_settings(&cfg.providers)?;
        let out = run_benchmark(&cfg, &scenes, &factory)?;
        println!("{approach:?}\n{}", out.report.render_text());
    }
    Ok(())
}
