//! Path-fidelity and retrieval metrics, and the per-scene report table.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::alignment::PathHypothesis;
use crate::error::{Error, Result};
use crate::topomap::{NodePath, Position};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricConfig {
    /// Distance scale of nDTW, meters.
    #[serde(default = "default_threshold")]
    pub dtw_threshold_m: f64,
    /// An episode succeeds when nDTW is strictly above this.
    #[serde(default = "default_success")]
    pub success_ndtw: f64,
    /// A hypothesis counts as "the ground truth or highly similar" at or above this nDTW.
    #[serde(default = "default_success")]
    pub similar_ndtw: f64,
}

fn default_threshold() -> f64 {
    3.0
}
fn default_success() -> f64 {
    0.87
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            dtw_threshold_m: default_threshold(),
            success_ndtw: default_success(),
            similar_ndtw: default_success(),
        }
    }
}

impl MetricConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dtw_threshold_m > 0.0 && self.dtw_threshold_m.is_finite()) {
            return Err(Error::Config("dtw_threshold_m must be positive".into()));
        }
        for (name, v) in [
            ("success_ndtw", self.success_ndtw),
            ("similar_ndtw", self.similar_ndtw),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::Config(format!("{name} must be in (0, 1]")));
            }
        }
        Ok(())
    }
}

fn euclidean(a: &Position, b: &Position) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Dynamic time warping cost with Euclidean point distance and unit steps.
pub fn dtw(pred: &[Position], reference: &[Position]) -> Result<f64> {
    if pred.is_empty() || reference.is_empty() {
        return Err(Error::InvalidInput("dtw needs two non-empty paths".into()));
    }
    let m = reference.len();
    let mut prev = vec![f64::INFINITY; m + 1];
    let mut cur = vec![f64::INFINITY; m + 1];
    prev[0] = 0.0;
    for p in pred {
        cur[0] = f64::INFINITY;
        for j in 1..=m {
            let best = prev[j - 1].min(prev[j]).min(cur[j - 1]);
            cur[j] = euclidean(p, &reference[j - 1]) + best;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[m])
}

/// `exp(-dtw / (|reference| * d_th))`.
pub fn ndtw(pred: &[Position], reference: &[Position], cfg: &MetricConfig) -> Result<f64> {
    let cost = dtw(pred, reference)?;
    Ok((-cost / (reference.len() as f64 * cfg.dtw_threshold_m)).exp())
}

pub fn episode_success(ndtw_value: f64, cfg: &MetricConfig) -> bool {
    ndtw_value > cfg.success_ndtw
}

/// Fraction of the first `k` retrieved ids that are relevant; missing ranks count as misses.
pub fn precision_at_k(retrieved: &[String], relevant: &BTreeSet<String>, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let hits = retrieved
        .iter()
        .take(k)
        .filter(|id| relevant.contains(*id))
        .count();
    hits as f64 / k as f64
}

/// Whether the hypothesis set contains the ground truth or a path close enough to it.
pub fn hypo_gen_hit(
    hypotheses: &[PathHypothesis],
    gt_path: &NodePath,
    cfg: &MetricConfig,
) -> Result<bool> {
    for h in hypotheses {
        if h.path.node_ids == gt_path.node_ids {
            return Ok(true);
        }
        if ndtw(&h.path.positions, &gt_path.positions, cfg)? >= cfg.similar_ndtw {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    pub fn render(&self) -> String {
        format!("{:.2}±{:.2}", self.mean, self.std)
    }
}

/// Mean and population standard deviation.
pub fn aggregate(values: &[f64]) -> Result<MeanStd> {
    if values.is_empty() {
        return Err(Error::InvalidInput("cannot aggregate zero values".into()));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Ok(MeanStd {
        mean,
        std: var.sqrt(),
    })
}

/// Outcome of one episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeResult {
    pub scene_id: String,
    pub episode_id: String,
    pub ndtw: f64,
    pub success: bool,
    pub hypo_contains_gt: bool,
    pub chosen_path: NodePath,
    /// nDTW of every repeat pick; the first equals `ndtw`.
    pub repeats_ndtw: Vec<f64>,
    /// Success of every repeat pick; the first equals `success`.
    pub repeats_success: Vec<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

impl EpisodeResult {
    /// nDTW of repeat `i`; deterministic episodes reuse their single pick.
    pub fn repeat_ndtw(&self, i: usize) -> f64 {
        match self.repeats_ndtw.len() {
            0 => self.ndtw,
            n => self.repeats_ndtw[i.min(n - 1)],
        }
    }

    pub fn repeat_success(&self, i: usize) -> bool {
        match self.repeats_success.len() {
            0 => self.success,
            n => self.repeats_success[i.min(n - 1)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneReport {
    pub scene_id: String,
    pub num_episodes: usize,
    pub hypo_gen_accuracy_pct: f64,
    pub ndtw_mean_pct: f64,
    pub ndtw_std_pct: f64,
    pub accuracy_mean_pct: f64,
    pub accuracy_std_pct: f64,
}

/// The "Average" row: every column is mean ± std across scenes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverallReport {
    pub num_episodes: usize,
    pub hypo_gen_accuracy_pct: MeanStd,
    pub ndtw_pct: MeanStd,
    pub accuracy_pct: MeanStd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub scenes: Vec<SceneReport>,
    pub overall: OverallReport,
}

/// Aggregates one scene. nDTW and accuracy are computed per repeat index (episodes without
/// ties contribute their single pick to every repeat) and reported as mean ± std across
/// repeats.
pub fn scene_report(
    scene_id: &str,
    results: &[EpisodeResult],
    repeats: usize,
) -> Result<SceneReport> {
    if results.is_empty() {
        return Err(Error::InvalidInput(format!(
            "scene `{scene_id}` has no episodes"
        )));
    }
    let n = results.len() as f64;
    let hits = results.iter().filter(|r| r.hypo_contains_gt).count() as f64;
    let repeats = repeats.max(1);
    let ndtw_per_repeat: Vec<f64> = (0..repeats)
        .map(|i| 100.0 * results.iter().map(|r| r.repeat_ndtw(i)).sum::<f64>() / n)
        .collect();
    let acc_per_repeat: Vec<f64> = (0..repeats)
        .map(|i| 100.0 * results.iter().filter(|r| r.repeat_success(i)).count() as f64 / n)
        .collect();
    let ndtw = aggregate(&ndtw_per_repeat)?;
    let acc = aggregate(&acc_per_repeat)?;
    Ok(SceneReport {
        scene_id: scene_id.to_string(),
        num_episodes: results.len(),
        hypo_gen_accuracy_pct: 100.0 * hits / n,
        ndtw_mean_pct: ndtw.mean,
        ndtw_std_pct: ndtw.std,
        accuracy_mean_pct: acc.mean,
        accuracy_std_pct: acc.std,
    })
}

pub fn overall_report(scenes: &[SceneReport]) -> Result<OverallReport> {
    let col = |f: fn(&SceneReport) -> f64| aggregate(&scenes.iter().map(f).collect::<Vec<_>>());
    Ok(OverallReport {
        num_episodes: scenes.iter().map(|s| s.num_episodes).sum(),
        hypo_gen_accuracy_pct: col(|s| s.hypo_gen_accuracy_pct)?,
        ndtw_pct: col(|s| s.ndtw_mean_pct)?,
        accuracy_pct: col(|s| s.accuracy_mean_pct)?,
    })
}

pub const REPORT_COLUMNS: [&str; 5] = [
    "Scene",
    "Num Episodes",
    "Hypo Path Gen Accuracy (%)",
    "nDTW (%)",
    "Accuracy (%)",
];

impl BenchmarkReport {
    pub fn from_scenes(scenes: Vec<SceneReport>) -> Result<Self> {
        let overall = overall_report(&scenes)?;
        Ok(BenchmarkReport { scenes, overall })
    }

    fn cells(&self) -> Vec<[String; 5]> {
        let mut rows: Vec<[String; 5]> = self
            .scenes
            .iter()
            .map(|s| {
                [
                    s.scene_id.clone(),
                    s.num_episodes.to_string(),
                    format!("{:.2}", s.hypo_gen_accuracy_pct),
                    MeanStd {
                        mean: s.ndtw_mean_pct,
                        std: s.ndtw_std_pct,
                    }
                    .render(),
                    MeanStd {
                        mean: s.accuracy_mean_pct,
                        std: s.accuracy_std_pct,
                    }
                    .render(),
                ]
            })
            .collect();
        rows.push([
            "Average".to_string(),
            self.overall.num_episodes.to_string(),
            self.overall.hypo_gen_accuracy_pct.render(),
            self.overall.ndtw_pct.render(),
            self.overall.accuracy_pct.render(),
        ]);
        rows
    }

    /// Aligned text table; the Average row is set off by a rule.
    pub fn render_text(&self) -> String {
        let rows = self.cells();
        let mut widths = REPORT_COLUMNS.map(|c| c.chars().count());
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let mut out = String::new();
            for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
                let pad = w - cell.chars().count();
                if i > 0 {
                    out.push_str(" | ");
                }
                if i == 0 {
                    out.push_str(cell);
                    out.push_str(&" ".repeat(pad));
                } else {
                    out.push_str(&" ".repeat(pad));
                    out.push_str(cell);
                }
            }
            out.trim_end().to_string()
        };
        let rule = widths
            .iter()
            .map(|w| "-".repeat(*w))
            .collect::<Vec<_>>()
            .join("-+-");
        let mut text = String::new();
        let header: Vec<String> = REPORT_COLUMNS.iter().map(|c| c.to_string()).collect();
        writeln!(text, "{}", line(&header)).unwrap();
        writeln!(text, "{rule}").unwrap();
        for row in &rows[..rows.len() - 1] {
            writeln!(text, "{}", line(row)).unwrap();
        }
        writeln!(text, "{rule}").unwrap();
        writeln!(text, "{}", line(&rows[rows.len() - 1])).unwrap();
        text
    }

    pub fn render_csv(&self) -> String {
        let mut text = String::new();
        let quote = |s: &str| {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.to_string()
            }
        };
        let header: Vec<String> = REPORT_COLUMNS.iter().map(|c| quote(c)).collect();
        writeln!(text, "{}", header.join(",")).unwrap();
        for row in self.cells() {
            let row: Vec<String> = row.iter().map(|c| quote(c)).collect();
            writeln!(text, "{}", row.join(",")).unwrap();
        }
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn line(xs: &[f64]) -> Vec<Position> {
        xs.iter().map(|&x| [x, 0.0, 0.0]).collect()
    }

    /// Minimum cost over every monotone, boundary-anchored warping path.
    fn brute_dtw(a: &[Position], b: &[Position]) -> f64 {
        fn go(a: &[Position], b: &[Position], i: usize, j: usize) -> f64 {
            let here = euclidean(&a[i], &b[j]);
            if i == a.len() - 1 && j == b.len() - 1 {
                return here;
            }
            let mut best = f64::INFINITY;
            if i + 1 < a.len() {
                best = best.min(go(a, b, i + 1, j));
            }
            if j + 1 < b.len() {
                best = best.min(go(a, b, i, j + 1));
            }
            if i + 1 < a.len() && j + 1 < b.len() {
                best = best.min(go(a, b, i + 1, j + 1));
            }
            here + best
        }
        go(a, b, 0, 0)
    }

    #[test]
    fn dtw_examples() {
        let p = line(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(dtw(&p, &p).unwrap(), 0.0);
        let reference = line(&[0.0, 1.0]);
        let pred = line(&[0.0, 1.0, 2.0]);
        assert_eq!(brute_dtw(&pred, &reference), 1.0);
        assert_eq!(dtw(&pred, &reference).unwrap(), 1.0);
        assert_eq!(dtw(&line(&[3.0]), &line(&[0.0])).unwrap(), 3.0);
        assert!(dtw(&[], &reference).is_err());
    }

    #[test]
    fn ndtw_examples() {
        let cfg = MetricConfig::default();
        let p = line(&[0.0, 1.0]);
        assert_eq!(ndtw(&p, &p, &cfg).unwrap(), 1.0);
        let v = ndtw(&line(&[0.0, 1.0, 2.0]), &p, &cfg).unwrap();
        assert!((v - (-1.0f64 / 6.0).exp()).abs() < 1e-12);
        assert!((v - 0.8465).abs() < 1e-4);
        let v = ndtw(&line(&[3.0]), &line(&[0.0]), &cfg).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn success_is_strict() {
        let cfg = MetricConfig::default();
        assert!(episode_success(0.88, &cfg));
        assert!(!episode_success(0.87, &cfg));
        assert!(!episode_success(0.50, &cfg));
    }

    #[test]
    fn precision_examples() {
        let ids: Vec<String> = (0..12).map(|i| format!("n{i}")).collect();
        let all: BTreeSet<String> = ids.iter().cloned().collect();
        assert_eq!(precision_at_k(&ids, &all, 10), 1.0);
        assert_eq!(precision_at_k(&ids, &BTreeSet::new(), 10), 0.0);
        let three: BTreeSet<String> = ["n0", "n4", "n9", "n11"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(precision_at_k(&ids, &three, 10), 0.3);
        // Short lists count missing ranks as misses.
        assert_eq!(precision_at_k(&ids[..1], &all, 10), 0.1);
    }

    fn path(ids: &[&str], xs: &[f64]) -> NodePath {
        NodePath {
            node_ids: ids.iter().map(|s| s.to_string()).collect(),
            positions: line(xs),
        }
    }

    #[test]
    fn hypothesis_hits() {
        let cfg = MetricConfig::default();
        let gt = path(&["a", "b", "c"], &[0.0, 1.0, 2.0]);
        let exact = PathHypothesis::new(gt.clone(), 1);
        assert!(hypo_gen_hit(&[exact], &gt, &cfg).unwrap());
        // One waypoint displaced by 0.5 m: dtw 0.5, ndtw = exp(-0.5/9) = 0.946.
        let near = PathHypothesis::new(path(&["a", "x", "c"], &[0.0, 1.5, 2.0]), 1);
        let v = ndtw(&near.path.positions, &gt.positions, &cfg).unwrap();
        assert!((v - (-0.5f64 / 9.0).exp()).abs() < 1e-12 && v > 0.90);
        assert!(hypo_gen_hit(&[near], &gt, &cfg).unwrap());
        let far = PathHypothesis::new(path(&["a", "y"], &[0.0, -20.0]), 1);
        assert!(!hypo_gen_hit(&[far], &gt, &cfg).unwrap());
        assert!(!hypo_gen_hit(&[], &gt, &cfg).unwrap());
    }

    #[test]
    fn aggregate_examples() {
        let one = aggregate(&[50.0]).unwrap();
        assert_eq!((one.mean, one.std), (50.0, 0.0));
        let table = aggregate(&[66.7, 61.9, 66.7, 57.1, 76.2]).unwrap();
        assert_eq!(table.render(), "65.72±6.33");
        let wide = aggregate(&[0.0, 100.0]).unwrap();
        assert_eq!((wide.mean, wide.std), (50.0, 50.0));
        assert!(aggregate(&[]).is_err());
    }

    fn result(ndtw: f64, repeats: Vec<f64>, hit: bool) -> EpisodeResult {
        let cfg = MetricConfig::default();
        EpisodeResult {
            scene_id: "s".into(),
            episode_id: "e".into(),
            ndtw,
            success: episode_success(ndtw, &cfg),
            hypo_contains_gt: hit,
            chosen_path: path(&["a"], &[0.0]),
            repeats_success: repeats.iter().map(|&v| episode_success(v, &cfg)).collect(),
            repeats_ndtw: repeats,
            diagnostics: vec![],
        }
    }

    #[test]
    fn scene_report_over_repeats() {
        let results = vec![
            result(1.0, vec![1.0], true),
            result(0.5, vec![0.5, 1.0, 0.5], false),
        ];
        let s = scene_report("s", &results, 3).unwrap();
        assert_eq!(s.hypo_gen_accuracy_pct, 50.0);
        // Repeat means: 75, 100, 75.
        let expected = aggregate(&[75.0, 100.0, 75.0]).unwrap();
        assert!((s.ndtw_mean_pct - expected.mean).abs() < 1e-9);
        assert!((s.ndtw_std_pct - expected.std).abs() < 1e-9);
        // Accuracy per repeat: 50, 100, 50.
        assert!((s.accuracy_mean_pct - 200.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn text_and_csv_layout() {
        let scenes: Vec<SceneReport> = [66.7, 61.9, 66.7, 57.1, 76.2]
            .iter()
            .enumerate()
            .map(|(i, &h)| SceneReport {
                scene_id: format!("scene{i}"),
                num_episodes: 21,
                hypo_gen_accuracy_pct: h,
                ndtw_mean_pct: 88.0,
                ndtw_std_pct: 0.0,
                accuracy_mean_pct: 50.0,
                accuracy_std_pct: 0.0,
            })
            .collect();
        let report = BenchmarkReport::from_scenes(scenes).unwrap();
        let text = report.render_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 9);
        assert!(lines[0].starts_with("Scene"));
        assert!(lines[8].starts_with("Average"));
        assert!(lines[8].contains("105"));
        assert!(lines[8].contains("65.72±6.33"));
        assert!(lines[2].ends_with("50.00±0.00"));
        let csv = report.render_csv();
        assert_eq!(
            csv.lines().next().unwrap(),
            "Scene,Num Episodes,Hypo Path Gen Accuracy (%),nDTW (%),Accuracy (%)"
        );
        assert_eq!(
            csv.lines().last().unwrap(),
            "Average,105,65.72±6.33,88.00±0.00,50.00±0.00"
        );
    }

    fn pts(max_len: usize) -> impl Strategy<Value = Vec<Position>> {
        proptest::collection::vec(
            (-5.0f64..5.0, -5.0f64..5.0, -1.0f64..1.0).prop_map(|(x, y, z)| [x, y, z]),
            1..=max_len,
        )
    }

    proptest! {
        #[test]
        fn dtw_matches_enumeration(a in pts(6), b in pts(6)) {
            let fast = dtw(&a, &b).unwrap();
            prop_assert!((fast - brute_dtw(&a, &b)).abs() < 1e-9);
        }

        #[test]
        fn ndtw_properties(a in pts(6), b in pts(6), shift in (-10.0f64..10.0, -10.0f64..10.0, -10.0f64..10.0), s in 1.0f64..4.0) {
            let cfg = MetricConfig::default();
            let v = ndtw(&a, &b, &cfg).unwrap();
            prop_assert!(v > 0.0 && v <= 1.0);
            prop_assert_eq!(ndtw(&a, &a, &cfg).unwrap(), 1.0);
            let mv = |p: &Vec<Position>| p.iter().map(|q| [q[0] + shift.0, q[1] + shift.1, q[2] + shift.2]).collect::<Vec<_>>();
            prop_assert!((ndtw(&mv(&a), &mv(&b), &cfg).unwrap() - v).abs() < 1e-9);
            let sc = |p: &Vec<Position>| p.iter().map(|q| [q[0] * s, q[1] * s, q[2] * s]).collect::<Vec<_>>();
            prop_assert!(ndtw(&sc(&a), &sc(&b), &cfg).unwrap() <= v + 1e-12);
        }

        #[test]
        fn precision_ignores_order_within_top_k(mut ids in proptest::collection::vec("[a-f]{1,2}", 1..15), k in 1usize..10) {
            let relevant: BTreeSet<String> = ids.iter().step_by(2).cloned().collect();
            let p = precision_at_k(&ids, &relevant, k);
            let cut = k.min(ids.len());
            ids[..cut].reverse();
            prop_assert_eq!(p, precision_at_k(&ids, &relevant, k));
            ids.push("zz".into());
            if ids.len() > k { prop_assert_eq!(p, precision_at_k(&ids, &relevant, k)); }
        }

        #[test]
        fn aggregate_permutation_invariant(mut xs in proptest::collection::vec(0.0f64..100.0, 1..10)) {
            let a = aggregate(&xs).unwrap();
            xs.reverse();
            let b = aggregate(&xs).unwrap();
            prop_assert!((a.mean - b.mean).abs() < 1e-9 && (a.std - b.std).abs() < 1e-9);
            prop_assert!(a.std >= 0.0);
        }
    }
}
