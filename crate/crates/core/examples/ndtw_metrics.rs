//! Path fidelity with DTW and nDTW, and the mean±std used in reports.

use landnav::metrics::{aggregate, dtw, episode_success, ndtw, MetricConfig};
use landnav::topomap::Position;

fn line(xs: &[f64]) -> Vec<Position> {
    xs.iter().map(|&x| [x, 0.0, 0.0]).collect()
}

fn main() -> landnav::Result<()> {
    let cfg = MetricConfig::default();
    let reference = line(&[0.0, 1.0, 2.0, 3.0, 4.0]);
    let candidates = [
        ("exact", line(&[0.0, 1.0, 2.0, 3.0, 4.0])),
        ("stops early", line(&[0.0, 1.0, 2.0])),
        ("overshoots", line(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0])),
        ("wrong way", line(&[0.0, -1.0, -2.0])),
    ];
    for (name, path) in &candidates {
        let v = ndtw(path, &reference, &cfg)?;
        println!(
            "{name:<12} dtw {:>6.2}  ndtw {v:.3}  success {}",
            dtw(path, &reference)?,
            episode_success(v, &cfg)
        );
    }

    let per_scene = [66.7, 61.9, 66.7, 57.1, 76.2];
    println!(
        "aggregate {:?} = {}",
        per_scene,
        aggregate(&per_scene)?.render()
    );
    Ok(())
}
