//! Acceptance suite. Each check prints one PASS/FAIL line; the process fails if any check does.
//!
//! Run with `cargo test -p landnav --test acceptance`.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use landnav::alignment::{
    filter_hypotheses, normalized_alignment, pano2land_score, select_with_ties, GroundingMatrix,
    PathHypothesis, TIE_REPEATS,
};
use landnav::harness::{
    generate_world, load_scenes, run_benchmark, run_episode, Approach, ProviderFactory,
    ProviderMode, ProviderSettings, RunConfig, Scene, SyntheticSuite, WorldParams,
};
use landnav::metrics::{
    aggregate, dtw, episode_success, ndtw, scene_report, EpisodeResult, MetricConfig,
    REPORT_COLUMNS,
};
use landnav::providers::{
    Grounder, GroundingJudgment, LandmarkExtractor, LandmarkSequence, NodeIdPanoramas, Oracle,
    RuleBasedExtractor, SimulatedService,
};
use landnav::topomap::{GraphNode, NodePath, Position};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Largest k such that k ones sit at strictly increasing rows and strictly increasing columns.
fn brute_force_alignment(m: &[Vec<u8>]) -> usize {
    let (rows, cols) = (m.len(), m[0].len());
    let subsets = |n: usize| -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
            .collect()
    };
    let (rs, cs) = (subsets(rows), subsets(cols));
    let mut best = 0;
    for r in &rs {
        if r.len() <= best {
            continue;
        }
        for c in cs.iter().filter(|c| c.len() == r.len()) {
            if r.iter().zip(c).all(|(&i, &j)| m[i][j] == 1) {
                best = r.len();
            }
        }
    }
    best
}

fn ac1() -> Check {
    let t = Instant::now();
    let mut cases = 0usize;
    for rows in 1..=4usize {
        for cols in 1..=4usize {
            for bits in 0u32..1 << (rows * cols) {
                let entries: Vec<Vec<u8>> = (0..rows)
                    .map(|r| {
                        (0..cols)
                            .map(|c| ((bits >> (r * cols + c)) & 1) as u8)
                            .collect()
                    })
                    .collect();
                let expected = brute_force_alignment(&entries);
                let refs: Vec<&[u8]> = entries.iter().map(|r| r.as_slice()).collect();
                let m = GroundingMatrix::from_rows(&refs).map_err(|e| e.to_string())?;
                let got = pano2land_score(&m);
                ensure(
                    got == expected,
                    format!("{rows}x{cols} bits {bits:#x}: dp {got}, brute force {expected}"),
                )?;
                cases += 1;
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 10.0, format!("took {secs:.1}s"))?;
    Ok(format!(
        "{cases} matrices, all shapes up to 4x4, {secs:.2}s"
    ))
}

fn matrix(rows: usize, cols: usize, ones: &[(usize, usize)]) -> GroundingMatrix {
    let mut entries = vec![vec![0u8; cols]; rows];
    for &(r, c) in ones {
        entries[r][c] = 1;
    }
    let refs: Vec<&[u8]> = entries.iter().map(|r| r.as_slice()).collect();
    GroundingMatrix::from_rows(&refs).unwrap()
}

fn ac2() -> Check {
    // Six landmarks each. Left: 8 panoramas, 5 landmarks grounded in order plus an
    // out-of-order distractor. Middle: 7 panoramas, grounded in panoramas 2, 3, 4, 5 and 7.
    // Right: 6 panoramas on the diagonal.
    let left = matrix(6, 8, &[(0, 0), (1, 1), (2, 3), (3, 4), (5, 6), (4, 2)]);
    let middle = matrix(6, 7, &[(0, 1), (1, 2), (2, 3), (3, 4), (5, 6), (4, 0)]);
    let right = matrix(6, 6, &(0..6).map(|i| (i, i)).collect::<Vec<_>>());
    let cases = [(&left, 5, 8), (&middle, 5, 7), (&right, 6, 6)];
    let mut parts = Vec::new();
    for (m, s, c) in cases {
        ensure(
            pano2land_score(m) == s && brute_force_alignment(m.entries()) == s,
            format!("expected raw score {s}"),
        )?;
        let v = normalized_alignment(m);
        ensure(v == s as f64 / c as f64, format!("{v} != {s}/{c}"))?;
        parts.push(format!("{s}/{c}={v:.4}"));
    }
    ensure(normalized_alignment(&left) == 0.625, "5/8 is not 0.625")?;
    ensure(normalized_alignment(&right) == 1.0, "6/6 is not 1")?;
    Ok(parts.join(", "))
}

fn euclid(a: &Position, b: &Position) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Minimum over every warping path, enumerated recursively.
fn brute_dtw(a: &[Position], b: &[Position], i: usize, j: usize) -> f64 {
    let here = euclid(&a[i], &b[j]);
    if i + 1 == a.len() && j + 1 == b.len() {
        return here;
    }
    let mut best = f64::INFINITY;
    if i + 1 < a.len() {
        best = best.min(brute_dtw(a, b, i + 1, j));
    }
    if j + 1 < b.len() {
        best = best.min(brute_dtw(a, b, i, j + 1));
    }
    if i + 1 < a.len() && j + 1 < b.len() {
        best = best.min(brute_dtw(a, b, i + 1, j + 1));
    }
    here + best
}

fn random_path(rng: &mut ChaCha8Rng) -> Vec<Position> {
    let len = rng.random_range(1..=6);
    (0..len)
        .map(|_| {
            [
                rng.random_range(-10.0..10.0),
                rng.random_range(-10.0..10.0),
                rng.random_range(-1.0..1.0),
            ]
        })
        .collect()
}

fn ac3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cfg = MetricConfig::default();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (a, b) = (random_path(&mut rng), random_path(&mut rng));
        let got = dtw(&a, &b).map_err(|e| e.to_string())?;
        let want = brute_dtw(&a, &b, 0, 0);
        worst = worst.max((got - want).abs());
    }
    ensure(worst <= 1e-9, format!("max |dtw - brute| = {worst:e}"))?;
    for _ in 0..100 {
        let p = random_path(&mut rng);
        let v = ndtw(&p, &p, &cfg).map_err(|e| e.to_string())?;
        ensure(v == 1.0, format!("ndtw(P, P) = {v}"))?;
    }
    Ok(format!(
        "1000 pairs, max error {worst:e}; ndtw(P,P)=1 for 100 paths"
    ))
}

fn ac4() -> Check {
    let agg = aggregate(&[66.7, 61.9, 66.7, 57.1, 76.2]).map_err(|e| e.to_string())?;
    let text = agg.render();
    ensure(text == "65.72±6.33", format!("rendered {text}"))?;
    Ok(text)
}

fn hypothesis(len: usize) -> PathHypothesis {
    PathHypothesis::new(
        NodePath {
            node_ids: (0..len).map(|i| format!("n{i}")).collect(),
            positions: vec![[0.0; 3]; len],
        },
        1,
    )
}

fn ac5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut kept_total = 0;
    let mut dropped_total = 0;
    for _ in 0..2000 {
        let n_landmarks = rng.random_range(1..=8);
        let landmarks =
            LandmarkSequence::new((0..n_landmarks).map(|i| format!("l{i}")).collect(), "x")
                .unwrap();
        let lens: Vec<usize> = (0..rng.random_range(0..=12))
            .map(|_| rng.random_range(1..=12))
            .collect();
        let hyps: Vec<PathHypothesis> = lens.iter().map(|&l| hypothesis(l)).collect();
        let kept = filter_hypotheses(hyps.clone(), &landmarks);
        let expected: Vec<usize> = lens.iter().copied().filter(|&l| l >= n_landmarks).collect();
        let got: Vec<usize> = kept.iter().map(|h| h.path.len()).collect();
        ensure(
            got == expected,
            format!("lens {lens:?}, L={n_landmarks}: kept {got:?}"),
        )?;
        ensure(
            lens.iter().filter(|&&l| l < n_landmarks).count() == hyps.len() - kept.len(),
            "a discarded path satisfied the length bound",
        )?;
        kept_total += kept.len();
        dropped_total += hyps.len() - kept.len();
    }
    Ok(format!(
        "2000 random sets: {kept_total} kept, {dropped_total} discarded"
    ))
}

fn oracle_config(seed: u64) -> RunConfig {
    RunConfig {
        seed,
        approach: Approach::Alignment,
        ..RunConfig::default()
    }
}

fn ac6() -> Check {
    let t = Instant::now();
    let cfg = RunConfig {
        synthetic: Some(SyntheticSuite::new(5, 20, 600)),
        ..oracle_config(6)
    };
    let scenes = load_scenes(&cfg).map_err(|e| e.to_string())?;
    for s in &scenes {
        let labels = s.labels.as_ref().unwrap();
        for ep in &s.episodes {
            let landmarks = RuleBasedExtractor
                .extract_landmarks(&ep.instruction)
                .map_err(|e| e.to_string())?;
            ensure(
                landmarks.len() == ep.path.len(),
                format!("{}: one landmark per node expected", ep.episode_id),
            )?;
            for (node, l) in ep.path.iter().zip(landmarks.phrases()) {
                ensure(
                    labels[&node.id].contains(l),
                    format!("{}: `{l}` not at {}", ep.episode_id, node.id),
                )?;
            }
            let last = landmarks.last().unwrap();
            let holders: Vec<&String> = labels
                .iter()
                .filter(|(_, ls)| ls.contains(last))
                .map(|(id, _)| id)
                .collect();
            ensure(
                holders == [&ep.path.last().unwrap().id],
                format!("{}: goal landmark `{last}` is not unique", ep.episode_id),
            )?;
        }
    }
    let factory = ProviderFactory::from_settings(&cfg.providers).map_err(|e| e.to_string())?;
    let out = run_benchmark(&cfg, &scenes, &factory).map_err(|e| e.to_string())?;
    ensure(
        out.results.len() == 100,
        format!("{} episodes", out.results.len()),
    )?;
    for (r, s) in out.results.iter().zip(
        scenes
            .iter()
            .flat_map(|s| s.episodes.iter())
            .collect::<Vec<_>>(),
    ) {
        ensure(
            r.episode_id == s.episode_id && r.chosen_path.node_ids == s.gt_path(),
            format!("{} chose {:?}", r.episode_id, r.chosen_path.node_ids),
        )?;
        ensure(r.ndtw == 1.0, format!("{} nDTW {}", r.episode_id, r.ndtw))?;
    }
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 60.0, format!("took {secs:.1}s"))?;
    Ok(format!("100/100 ground-truth paths, nDTW 1.0, {secs:.2}s"))
}

fn mean_ndtw(cfg: &RunConfig, scene: &Scene) -> Result<f64, String> {
    let factory = ProviderFactory::from_settings(&cfg.providers).map_err(|e| e.to_string())?;
    let out =
        run_benchmark(cfg, std::slice::from_ref(scene), &factory).map_err(|e| e.to_string())?;
    Ok(out.results.iter().map(|r| r.ndtw).sum::<f64>() / out.results.len() as f64)
}

fn ac7() -> Check {
    let (mut clean_sum, mut noisy_sum, mut strictly_worse) = (0.0, 0.0, 0);
    for seed in 0..50u64 {
        let scene: Scene = generate_world(&WorldParams::new(40, 2.6, 24, 10, 7000 + seed))
            .map_err(|e| e.to_string())?
            .into();
        let clean_cfg = oracle_config(seed);
        let mut noisy_cfg = oracle_config(seed);
        noisy_cfg.providers.noise = 0.2;
        noisy_cfg.providers.noise_seed = seed;
        let clean = mean_ndtw(&clean_cfg, &scene)?;
        let noisy = mean_ndtw(&noisy_cfg, &scene)?;
        ensure(
            clean >= noisy,
            format!("seed {seed}: clean {clean:.4} < noisy {noisy:.4}"),
        )?;
        strictly_worse += (noisy < clean) as usize;
        clean_sum += clean;
        noisy_sum += noisy;
    }
    let (clean, noisy) = (clean_sum / 50.0, noisy_sum / 50.0);
    ensure(
        clean >= noisy,
        format!("mean clean {clean} < mean noisy {noisy}"),
    )?;
    Ok(format!(
        "mean nDTW clean {clean:.4} >= noisy {noisy:.4}; noise hurt {strictly_worse}/50 seeds"
    ))
}

fn landnav() -> Command {
    Command::new(env!("CARGO_BIN_EXE_landnav"))
}

fn bench(out: &Path, extra: &[&str]) -> Result<(), String> {
    let status = landnav()
        .args(["bench", "--out"])
        .arg(out)
        .args(extra)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(
        status.status.success(),
        format!("bench failed: {}", String::from_utf8_lossy(&status.stderr)),
    )
}

fn remote_settings(cache: &Path) -> ProviderSettings {
    let mut s = ProviderSettings {
        mode: ProviderMode::Remote,
        ..ProviderSettings::default()
    }
    .with_cache_dir(cache);
    for c in [
        &mut s.extraction,
        &mut s.embedding,
        &mut s.grounding,
        &mut s.rating,
    ] {
        c.api_key_env = "LANDNAV_ACCEPTANCE_UNSET_KEY".into();
    }
    s
}

fn ac8() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let args = [
        "--scenes",
        "2",
        "--episodes",
        "8",
        "--seed",
        "17",
        "--noise",
        "0.2",
    ];
    bench(&dir.path().join("a"), &args)?;
    bench(&dir.path().join("b"), &args)?;
    for file in ["results.jsonl", "report.txt", "report.csv", "report.json"] {
        let a = std::fs::read(dir.path().join("a").join(file)).map_err(|e| e.to_string())?;
        let b = std::fs::read(dir.path().join("b").join(file)).map_err(|e| e.to_string())?;
        ensure(a == b, format!("{file} differs between reruns"))?;
    }

    let cfg = RunConfig {
        synthetic: Some(SyntheticSuite::new(1, 6, 31)),
        workers: 4,
        ..oracle_config(3)
    };
    let scenes = load_scenes(&cfg).map_err(|e| e.to_string())?;
    let labels = scenes[0].labels.clone().unwrap();
    let cache = dir.path().join("cache");
    let run = || -> Result<(usize, Vec<EpisodeResult>), String> {
        let service = Arc::new(SimulatedService::new(Oracle::new(labels.clone())));
        let mut cfg = cfg.clone();
        cfg.providers = remote_settings(&cache);
        let factory =
            ProviderFactory::remote(&cfg.providers, service.clone(), Arc::new(NodeIdPanoramas))
                .map_err(|e| e.to_string())?;
        let out = run_benchmark(&cfg, &scenes, &factory).map_err(|e| e.to_string())?;
        Ok((service.calls(), out.results))
    };
    let (cold_calls, cold) = run()?;
    let (warm_calls, warm) = run()?;
    ensure(cold_calls > 0, "cold run made no provider calls")?;
    ensure(warm_calls == 0, format!("warm run made {warm_calls} calls"))?;
    ensure(cold == warm, "warm-cache results differ")?;
    Ok(format!(
        "reruns byte-identical; cold run {cold_calls} calls, warm run 0"
    ))
}

/// Says every landmark is absent, so every hypothesis scores zero.
struct Blind;

impl Grounder for Blind {
    fn ground_landmark(
        &self,
        node: &GraphNode,
        landmark: &str,
    ) -> landnav::Result<GroundingJudgment> {
        Ok(GroundingJudgment {
            node_id: node.id.clone(),
            landmark: landmark.to_string(),
            present: false,
            provider_id: "blind".into(),
        })
    }
}

fn ac9() -> Check {
    // Selection: two hypotheses tie at 4/5, a third scores lower.
    let keys = [(4usize, 5usize), (3, 5), (8, 10)];
    let cmp = |a: &(usize, usize), b: &(usize, usize)| (a.0 * b.1).cmp(&(b.0 * a.1));
    let (picks, tie) = select_with_ties(&keys, cmp, 42).map_err(|e| e.to_string())?;
    ensure(
        tie == 2 && picks.len() == TIE_REPEATS,
        format!("{picks:?}, tie {tie}"),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let expected: Vec<usize> = (0..TIE_REPEATS)
        .map(|_| [0usize, 2][rng.random_range(0..2)])
        .collect();
    ensure(
        picks == expected,
        format!("picks {picks:?}, protocol gives {expected:?}"),
    )?;
    let again = select_with_ties(&keys, cmp, 42)
        .map_err(|e| e.to_string())?
        .0;
    ensure(again == picks, "picks not reproducible")?;
    let (unique, tie) =
        select_with_ties(&[(1usize, 2usize), (2, 3)], cmp, 42).map_err(|e| e.to_string())?;
    ensure(
        unique == [1] && tie == 1,
        "a unique maximum must give one pick",
    )?;

    // Pipeline: a blind grounder ties every hypothesis.
    let world =
        generate_world(&WorldParams::new(40, 3.0, 24, 12, 99)).map_err(|e| e.to_string())?;
    let scene: Scene = world.into();
    let cfg = oracle_config(42);
    let mut providers = ProviderFactory::from_settings(&cfg.providers)
        .and_then(|f| f.for_scene(&scene))
        .map_err(|e| e.to_string())?;
    providers.grounder = Arc::new(Blind);
    let mut results = Vec::new();
    let mut tied_episodes = 0;
    for ep in &scene.episodes {
        let (r, trace) =
            run_episode(ep, &scene.graph, &cfg, &providers).map_err(|e| e.to_string())?;
        let (r2, trace2) =
            run_episode(ep, &scene.graph, &cfg, &providers).map_err(|e| e.to_string())?;
        ensure(
            trace.repeats == trace2.repeats && r == r2,
            "episode rerun differs",
        )?;
        if trace.tie_count > 1 {
            tied_episodes += 1;
            ensure(
                trace.repeats.len() == TIE_REPEATS && r.repeats_ndtw.len() == TIE_REPEATS,
                format!("{}: {} repeats", ep.episode_id, trace.repeats.len()),
            )?;
        } else {
            ensure(trace.repeats.len() == 1, "untied episode repeated")?;
        }
        results.push(r);
    }
    ensure(tied_episodes > 0, "no tied episode constructed")?;

    // Aggregation across repeats, recomputed by hand from the per-repeat values.
    let n = results.len() as f64;
    let per_repeat: Vec<f64> = (0..TIE_REPEATS)
        .map(|i| 100.0 * results.iter().map(|r| r.repeat_ndtw(i)).sum::<f64>() / n)
        .collect();
    let mean = per_repeat.iter().sum::<f64>() / 3.0;
    let std = (per_repeat.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 3.0).sqrt();
    let report =
        scene_report(scene.scene_id(), &results, TIE_REPEATS).map_err(|e| e.to_string())?;
    ensure(
        (report.ndtw_mean_pct - mean).abs() < 1e-9 && (report.ndtw_std_pct - std).abs() < 1e-9,
        format!(
            "report {:.4}±{:.4}, expected {mean:.4}±{std:.4}",
            report.ndtw_mean_pct, report.ndtw_std_pct
        ),
    )?;

    // A single tied episode whose repeats land at nDTW 1.0, 0.8 and 1.0.
    let metric = MetricConfig::default();
    let fixed = EpisodeResult {
        scene_id: "s".into(),
        episode_id: "e".into(),
        ndtw: 1.0,
        success: true,
        hypo_contains_gt: true,
        chosen_path: NodePath {
            node_ids: vec!["a".into()],
            positions: vec![[0.0; 3]],
        },
        repeats_ndtw: vec![1.0, 0.8, 1.0],
        repeats_success: [1.0, 0.8, 1.0]
            .iter()
            .map(|&v| episode_success(v, &metric))
            .collect(),
        diagnostics: vec![],
    };
    let one = scene_report("s", &[fixed], TIE_REPEATS).map_err(|e| e.to_string())?;
    let nd = format!("{:.2}±{:.2}", one.ndtw_mean_pct, one.ndtw_std_pct);
    let acc = format!("{:.2}±{:.2}", one.accuracy_mean_pct, one.accuracy_std_pct);
    // nDTW: mean(100, 80, 100) = 93.33, population std = sqrt(800 / 9) = 9.43.
    // Accuracy: 0.8 is not above 0.87, so (100, 0, 100): 66.67 and sqrt(20000 / 9) = 47.14.
    ensure(nd == "93.33±9.43", format!("nDTW {nd}"))?;
    ensure(acc == "66.67±47.14", format!("accuracy {acc}"))?;
    Ok(format!(
        "seed-42 picks {picks:?}; {tied_episodes}/{} blind episodes tied with 3 repeats; {nd}",
        results.len()
    ))
}

fn ac10() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("bench");
    bench(&out, &["--scenes", "5", "--episodes", "21", "--seed", "10"])?;
    let text = std::fs::read_to_string(out.join("report.txt")).map_err(|e| e.to_string())?;
    let lines: Vec<&str> = text.lines().collect();
    ensure(lines.len() == 9, format!("{} report lines", lines.len()))?;
    let cells = |l: &str| {
        l.split(" | ")
            .map(str::trim)
            .map(String::from)
            .collect::<Vec<_>>()
    };
    ensure(
        cells(lines[0]) == REPORT_COLUMNS,
        format!("header {:?}", cells(lines[0])),
    )?;
    let scenes: BTreeSet<String> = lines[2..7].iter().map(|l| cells(l)[0].clone()).collect();
    ensure(scenes.len() == 5, "expected 5 distinct scene rows")?;
    for l in &lines[2..7] {
        let c = cells(l);
        ensure(c[1] == "21", format!("scene row {l}"))?;
        ensure(
            c[3].contains('±') && c[4].contains('±'),
            format!("scene row {l}"),
        )?;
    }
    let avg = cells(lines[8]);
    ensure(
        avg[0] == "Average" && avg[1] == "105",
        format!("average row {avg:?}"),
    )?;
    ensure(
        avg[2..].iter().all(|c| c.contains('±')),
        "average row lacks ±",
    )?;
    let jsonl = std::fs::read_to_string(out.join("results.jsonl")).map_err(|e| e.to_string())?;
    ensure(
        jsonl.lines().count() == 105,
        "results.jsonl is not 105 lines",
    )?;
    let csv = std::fs::read_to_string(out.join("report.csv")).map_err(|e| e.to_string())?;
    ensure(csv.lines().count() == 7, "report.csv is not 7 lines")?;
    Ok(format!(
        "5 scenes x 21 episodes; average row `{}`",
        lines[8]
    ))
}

fn main() {
    let checks: [Criterion; 10] = [
        ("AC1", "alignment DP equals brute force", ac1),
        ("AC2", "alignment fixed points", ac2),
        ("AC3", "DTW equals brute force", ac3),
        ("AC4", "aggregation fixed point", ac4),
        ("AC5", "hypothesis length filter", ac5),
        ("AC6", "end-to-end oracle recovery", ac6),
        ("AC7", "grounding noise monotonicity", ac7),
        ("AC8", "determinism and caching", ac8),
        ("AC9", "tie protocol", ac9),
        ("AC10", "report shape", ac10),
    ];
    let mut failed = 0;
    for (id, name, check) in checks {
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("{id:<5} PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("{id:<5} FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
