//! Drive the HTTP provider path against an in-process simulated endpoint, with a
//! response cache. Swap `SimulatedService` for `HttpTransport::new()?` and real
//! `ProviderConfig` endpoints to talk to actual model servers.

use std::sync::Arc;

use landnav::harness::{
    generate_world, run_benchmark, ProviderFactory, ProviderMode, ProviderSettings, RunConfig,
    Scene, WorldParams,
};
use landnav::providers::{NodeIdPanoramas, Oracle, SimulatedService};

fn main() -> landnav::Result<()> {
    let scene: Scene = generate_world(&WorldParams::new(30, 2.6, 16, 6, 2))?.into();
    let labels = scene.labels.clone().expect("synthetic scene");
    let cache = std::env::temp_dir().join("landnav-remote-cache");
    let _ = std::fs::remove_dir_all(&cache);

    let settings = ProviderSettings {
        mode: ProviderMode::Remote,
        ..ProviderSettings::default()
    }
    .with_cache_dir(&cache);
    let cfg = RunConfig {
        providers: settings.clone(),
        ..RunConfig::default()
    };

    for pass in ["cold", "warm"] {
        let service = Arc::new(SimulatedService::new(Oracle::new(labels.clone())));
        let factory =
            ProviderFactory::remote(&settings, service.clone(), Arc::new(NodeIdPanoramas))?;
        let out = run_benchmark(&cfg, std::slice::from_ref(&scene), &factory)?;
        let mean = out.results.iter().map(|r| r.ndtw).sum::<f64>() / out.results.len() as f64;
        println!(
            "{pass}: {} requests sent, mean nDTW {mean:.3}",
            service.calls()
        );
    }
    println!("cache at {}", cache.display());
    Ok(())
}
