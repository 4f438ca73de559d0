//! Experiment orchestration: RMSprop mini-batch training with equal-length
//! batches, F1/BCR evaluation, per-step weight-norm traces, and budget-matched
//! grids across cells and grammars.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::automata::{build_sl, build_sp, build_tomita, sl4_benchmark, sp8_benchmark, Dfa};
use crate::datagen::{read_dataset, slsp_protocol, tomita_protocol, LabeledDataset};
use crate::error::{Error, Result};
use crate::linalg::l2_norm;
use crate::neural::{
    backward, forward, init_params, match_budget, norm_group, param_count, rmsprop_step,
    Activation, CellKind, CellParams, CellSpec, Gradients, RmsProp, RmsPropState,
};

/// Hyper-parameters of one training run.
#[derive(Debug, Clone, Serialize)]
pub struct TrainSettings {
    pub cell: CellKind,
    pub n_h: usize,
    pub lr: f64,
    pub batch: usize,
    pub epochs: usize,
    pub seed: u64,
    pub patience: usize,
    pub eval_every: usize,
    pub init_low: f64,
    pub init_high: f64,
}

impl TrainSettings {
    pub fn new(cell: CellKind, n_h: usize, seed: u64) -> TrainSettings {
        TrainSettings {
            cell,
            n_h,
            lr: 0.01,
            batch: 100,
            epochs: 100,
            seed,
            patience: 5,
            eval_every: 1,
            init_low: -0.02,
            init_high: 0.02,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.batch == 0 {
            return Err(Error::Config("batch size must be at least 1".into()));
        }
        if self.epochs == 0 {
            return Err(Error::Config("epoch cap must be at least 1".into()));
        }
        if self.n_h == 0 {
            return Err(Error::Config("hidden size must be at least 1".into()));
        }
        Ok(())
    }

    fn spec(&self, n_x: usize) -> Result<CellSpec> {
        let n_f = (self.cell == CellKind::MRnn).then_some(self.n_h);
        CellSpec::new(self.cell, n_x, self.n_h, n_f, Activation::Tanh)
    }
}

/// Classification metrics on one split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    pub f1: f64,
    pub bcr: f64,
    pub accuracy: f64,
}

/// F1 on the positive class (0 when precision + recall vanish), balanced
/// classification rate with absent classes contributing rate 1, and plain
/// accuracy. Invariant to dataset row order.
pub fn evaluate(params: &CellParams, ds: &LabeledDataset) -> Metrics {
    evaluate_items(params, &ds.items)
}

fn evaluate_items(params: &CellParams, items: &[(Vec<u8>, bool)]) -> Metrics {
    let h0 = vec![0.0; params.spec.n_h];
    let (mut tp, mut fp, mut tn, mut fnn) = (0u64, 0u64, 0u64, 0u64);
    for (word, label) in items {
        let pred = forward(params, word, &h0)
            .expect("dataset symbols fit the model input width")
            .predicts_positive();
        match (pred, *label) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fnn += 1,
        }
    }
    metrics_from_confusion(tp, fp, tn, fnn)
}

fn metrics_from_confusion(tp: u64, fp: u64, tn: u64, fnn: u64) -> Metrics {
    let f1_den = 2 * tp + fp + fnn;
    let f1 = if f1_den == 0 {
        0.0
    } else {
        2.0 * tp as f64 / f1_den as f64
    };
    let tpr = if tp + fnn == 0 {
        1.0
    } else {
        tp as f64 / (tp + fnn) as f64
    };
    let tnr = if tn + fp == 0 {
        1.0
    } else {
        tn as f64 / (tn + fp) as f64
    };
    let total = tp + fp + tn + fnn;
    let accuracy = if total == 0 {
        1.0
    } else {
        (tp + tn) as f64 / total as f64
    };
    Metrics {
        f1,
        bcr: (tpr + tnr) / 2.0,
        accuracy,
    }
}

/// L2 norms of the weight groups, one column per group, one row per
/// optimizer step (plus the pre-training norms kept separately).
#[derive(Debug, Clone, Serialize)]
pub struct NormTrace {
    pub groups: Vec<String>,
    pub init: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
}

impl NormTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step");
        for g in &self.groups {
            out.push(',');
            out.push_str(g);
        }
        out.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(&(i + 1).to_string());
            for v in row {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }
}

fn group_norms(params: &CellParams, groups: &[String]) -> Vec<f64> {
    let mut sums: BTreeMap<&str, f64> = groups.iter().map(|g| (g.as_str(), 0.0)).collect();
    for (name, arr) in params.weights.arrays() {
        let g = norm_group(&name);
        if let Some(slot) = sums.get_mut(g) {
            *slot += arr.iter().map(|v| v * v).sum::<f64>();
        }
    }
    groups
        .iter()
        .map(|g| sums[g.as_str()].sqrt())
        .collect()
}

fn trace_groups(params: &CellParams) -> Vec<String> {
    let mut seen: Vec<String> = Vec::new();
    for (name, _) in params.weights.arrays() {
        let g = norm_group(&name).to_string();
        if !seen.contains(&g) {
            seen.push(g);
        }
    }
    seen
}

/// Metrics for one named split.
#[derive(Debug, Clone, Serialize)]
pub struct SplitMetrics {
    pub split: String,
    pub metrics: Metrics,
}

/// Everything a run produces.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub grammar: String,
    pub settings: TrainSettings,
    pub epochs_run: usize,
    pub steps: usize,
    pub best_epoch: usize,
    pub train_f1: f64,
    pub metrics: Vec<SplitMetrics>,
    pub trace: NormTrace,
    pub wall_secs: f64,
    #[serde(skip)]
    pub params: Option<CellParams>,
}

/// A diverged run: the error plus whatever was recorded before the blow-up.
#[derive(Debug)]
pub struct TrainFailure {
    pub error: Error,
    pub partial: Box<RunReport>,
}

impl std::fmt::Display for TrainFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.error)
    }
}

/// Mini-batch BCE training with RMSprop. Batches group equal-length strings
/// (no padding semantics); the weight-norm trace records every step. Early
/// stop after `patience` consecutive epochs at train F1 = 1.0; the reported
/// model is the best checkpoint by (train-perfect, validation F1), earliest
/// epoch on ties, with 10% of the training data carved out for validation.
pub fn train(
    settings: &TrainSettings,
    grammar: &str,
    train_ds: &LabeledDataset,
    tests: &[(&str, &LabeledDataset)],
) -> std::result::Result<RunReport, TrainFailure> {
    let started = Instant::now();
    let fail = |error: Error, partial: RunReport| TrainFailure {
        error,
        partial: Box::new(partial),
    };
    let mk_report = |params: Option<CellParams>,
                     epochs_run: usize,
                     steps: usize,
                     best_epoch: usize,
                     train_f1: f64,
                     trace: NormTrace,
                     metrics: Vec<SplitMetrics>| RunReport {
        grammar: grammar.to_string(),
        settings: settings.clone(),
        epochs_run,
        steps,
        best_epoch,
        train_f1,
        metrics,
        trace,
        wall_secs: started.elapsed().as_secs_f64(),
        params,
    };

    if let Err(e) = settings.validate() {
        return Err(fail(
            e,
            mk_report(
                None,
                0,
                0,
                0,
                0.0,
                NormTrace {
                    groups: vec![],
                    init: vec![],
                    rows: vec![],
                },
                vec![],
            ),
        ));
    }
    let n_x = train_ds.alphabet.size();
    let spec = match settings.spec(n_x) {
        Ok(s) => s,
        Err(e) => {
            return Err(fail(
                e,
                mk_report(
                    None,
                    0,
                    0,
                    0,
                    0.0,
                    NormTrace {
                        groups: vec![],
                        init: vec![],
                        rows: vec![],
                    },
                    vec![],
                ),
            ))
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut params = init_params(&spec, settings.seed, settings.init_low, settings.init_high)
        .expect("validated settings");
    let groups = trace_groups(&params);
    let mut trace = NormTrace {
        init: group_norms(&params, &groups),
        groups,
        rows: Vec::new(),
    };

    // 10% validation carve-out, seeded
    let mut indices: Vec<usize> = (0..train_ds.items.len()).collect();
    shuffle(&mut indices, &mut rng);
    let val_len = indices.len() / 10;
    let (val_idx, fit_idx) = indices.split_at(val_len);
    let fit_items: Vec<(Vec<u8>, bool)> =
        fit_idx.iter().map(|&i| train_ds.items[i].clone()).collect();
    let val_items: Vec<(Vec<u8>, bool)> =
        val_idx.iter().map(|&i| train_ds.items[i].clone()).collect();

    // equal-length batch groups
    let mut by_length: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, (w, _)) in fit_items.iter().enumerate() {
        by_length.entry(w.len()).or_default().push(i);
    }

    let h0 = vec![0.0; spec.n_h];
    let optimizer = RmsProp {
        lr: settings.lr,
        ..RmsProp::default()
    };
    let mut opt_state = RmsPropState::new(&spec);

    let mut steps = 0usize;
    let mut epochs_run = 0usize;
    let mut perfect_streak = 0usize;
    let mut best: Option<(bool, f64, usize, CellParams, f64)> = None; // (perfect, val_f1, epoch, params, train_f1)

    for epoch in 1..=settings.epochs {
        epochs_run = epoch;
        // schedule: shuffle within length groups, then shuffle the batch list
        let mut batches: Vec<Vec<usize>> = Vec::new();
        for idxs in by_length.values() {
            let mut idxs = idxs.clone();
            shuffle(&mut idxs, &mut rng);
            for chunk in idxs.chunks(settings.batch) {
                batches.push(chunk.to_vec());
            }
        }
        shuffle(&mut batches, &mut rng);

        for batch in &batches {
            let mut acc = Gradients::zeros(&spec);
            let mut batch_loss = 0.0;
            for &i in batch {
                let (word, label) = &fit_items[i];
                let tr = forward(&params, word, &h0).expect("shapes fixed");
                let (g, loss) = backward(&params, &tr, *label);
                acc.accumulate(&g);
                batch_loss += loss;
            }
            let inv = 1.0 / batch.len() as f64;
            acc.scale(inv);
            batch_loss *= inv;
            if !batch_loss.is_finite() {
                let report = mk_report(
                    Some(params.clone()),
                    epochs_run,
                    steps,
                    best.as_ref().map_or(0, |b| b.2),
                    best.as_ref().map_or(0.0, |b| b.4),
                    trace.clone(),
                    vec![],
                );
                return Err(fail(
                    Error::Numerical(format!("loss diverged at epoch {epoch}")),
                    report,
                ));
            }
            rmsprop_step(&mut params, &acc, &mut opt_state, &optimizer);
            trace.rows.push(group_norms(&params, &trace.groups));
            steps += 1;
        }

        if epoch % settings.eval_every == 0 || epoch == settings.epochs {
            let train_m = evaluate_items(&params, &fit_items);
            let val_m = evaluate_items(&params, &val_items);
            let perfect = train_m.f1 == 1.0;
            let score = (perfect, val_m.f1);
            let better = match &best {
                None => true,
                Some((bp, bv, _, _, _)) => score > (*bp, *bv),
            };
            if better {
                best = Some((perfect, val_m.f1, epoch, params.clone(), train_m.f1));
            }
            if perfect {
                perfect_streak += 1;
                if perfect_streak >= settings.patience {
                    break;
                }
            } else {
                perfect_streak = 0;
            }
        }
    }

    let (best_epoch, final_params, train_f1) = match best {
        Some((_, _, epoch, p, tf1)) => (epoch, p, tf1),
        None => (0, params, 0.0),
    };
    let metrics = tests
        .iter()
        .map(|(name, ds)| SplitMetrics {
            split: name.to_string(),
            metrics: evaluate(&final_params, ds),
        })
        .collect();
    Ok(mk_report(
        Some(final_params),
        epochs_run,
        steps,
        best_epoch,
        train_f1,
        trace,
        metrics,
    ))
}

fn shuffle<T>(v: &mut [T], rng: &mut ChaCha8Rng) {
    for idx in (1..v.len()).rev() {
        let j = rng.gen_range(0..=idx);
        v.swap(idx, j);
    }
}

/// Total-variation summary of a norm trace: per-group sum of |step deltas|,
/// the dominant group, and its share of the total variation. Degenerate
/// (None) when nothing moved.
#[derive(Debug, Clone, Serialize)]
pub struct DominanceSummary {
    pub variations: Vec<(String, f64)>,
    pub dominant: Option<String>,
    pub ratio: Option<f64>,
}

pub fn norm_trace_report(trace: &NormTrace) -> DominanceSummary {
    let k = trace.groups.len();
    let mut variations = vec![0.0f64; k];
    let mut prev: &[f64] = &trace.init;
    for row in &trace.rows {
        for (j, var) in variations.iter_mut().enumerate() {
            *var += (row[j] - prev[j]).abs();
        }
        prev = row;
    }
    let total: f64 = variations.iter().sum();
    let named: Vec<(String, f64)> = trace
        .groups
        .iter()
        .cloned()
        .zip(variations.iter().copied())
        .collect();
    if total == 0.0 {
        return DominanceSummary {
            variations: named,
            dominant: None,
            ratio: None,
        };
    }
    let (max_idx, max_var) = variations
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, v)| (i, *v))
        .unwrap();
    DominanceSummary {
        variations: named,
        dominant: Some(trace.groups[max_idx].clone()),
        ratio: Some(max_var / total),
    }
}

/// How grid hidden sizes are chosen: fixed sizes for every kind, or matched
/// to the recurrent-parameter budget of an anchor cell.
#[derive(Debug, Clone)]
pub enum GridSizes {
    Fixed(Vec<usize>),
    Budget { anchor: CellKind, anchor_h: usize },
}

/// One grid of runs: grammars x kinds x sizes x seeds.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub grammars: Vec<String>,
    pub kinds: Vec<CellKind>,
    pub sizes: GridSizes,
    pub seeds: Vec<u64>,
    pub data_seed: u64,
    pub epochs: usize,
    pub batch: usize,
    pub lr: f64,
    pub patience: usize,
}

/// A grammar label like `tomita-3`, `sl4`, or `sp8` to its automaton.
pub fn grammar_by_label(label: &str) -> Result<Dfa> {
    if let Some(id) = label.strip_prefix("tomita-") {
        let k: u8 = id
            .parse()
            .map_err(|_| Error::Config(format!("bad tomita id {id:?}")))?;
        return Ok(build_tomita(k)?.minimize());
    }
    match label {
        "sl4" => {
            let (pats, al) = sl4_benchmark();
            Ok(build_sl(&pats, &al)?.minimize())
        }
        "sp8" => {
            let (ws, al) = sp8_benchmark();
            Ok(build_sp(&ws, &al)?.minimize())
        }
        other => Err(Error::Config(format!("unknown grammar label {other:?}"))),
    }
}

fn datasets_for(label: &str, dfa: &Dfa, data_seed: u64) -> Result<Vec<(String, LabeledDataset)>> {
    if label.starts_with("tomita-") {
        let (train, test) = tomita_protocol(dfa, data_seed)?;
        Ok(vec![("train".into(), train), ("test".into(), test)])
    } else {
        let (train, t1, t2) = slsp_protocol(dfa, data_seed, true)?;
        Ok(vec![
            ("train".into(), train),
            ("t1".into(), t1),
            ("t2".into(), t2),
        ])
    }
}

/// Expands and runs the grid. Cells run in parallel (each owns its model,
/// optimizer state, and RNG stream); results come back sorted by
/// (grammar, kind, hidden size, seed) independent of execution order.
pub fn grid(spec: &GridSpec) -> Result<Vec<RunReport>> {
    // resolve hidden sizes per kind
    let sized_kinds: Vec<(CellKind, usize)> = match &spec.sizes {
        GridSizes::Fixed(sizes) => spec
            .kinds
            .iter()
            .flat_map(|&k| sizes.iter().map(move |&s| (k, s)))
            .collect(),
        GridSizes::Budget { anchor, anchor_h } => {
            let n_f = (*anchor == CellKind::MRnn).then_some(*anchor_h);
            let anchor_spec = CellSpec::new(*anchor, 2, *anchor_h, n_f, Activation::Tanh)?;
            let budget = param_count(&anchor_spec);
            spec.kinds
                .iter()
                .map(|&k| -> Result<(CellKind, usize)> {
                    if k == *anchor {
                        Ok((k, *anchor_h))
                    } else {
                        Ok((k, match_budget(k, budget, 2, Activation::Tanh)?.n_h))
                    }
                })
                .collect::<Result<Vec<_>>>()?
        }
    };

    // datasets generated once per grammar
    let mut data: Vec<(String, Vec<(String, LabeledDataset)>)> = Vec::new();
    for label in &spec.grammars {
        let dfa = grammar_by_label(label)?;
        data.push((label.clone(), datasets_for(label, &dfa, spec.data_seed)?));
    }

    let mut jobs: Vec<(usize, CellKind, usize, u64)> = Vec::new();
    for (gi, _) in data.iter().enumerate() {
        for &(kind, n_h) in &sized_kinds {
            for &seed in &spec.seeds {
                jobs.push((gi, kind, n_h, seed));
            }
        }
    }

    let mut reports: Vec<RunReport> = jobs
        .par_iter()
        .map(|&(gi, kind, n_h, seed)| {
            let (label, splits) = &data[gi];
            let mut settings = TrainSettings::new(kind, n_h, seed);
            settings.epochs = spec.epochs;
            settings.batch = spec.batch;
            settings.lr = spec.lr;
            settings.patience = spec.patience;
            let train_ds = &splits[0].1;
            let tests: Vec<(&str, &LabeledDataset)> = splits[1..]
                .iter()
                .map(|(n, d)| (n.as_str(), d))
                .collect();
            train(&settings, label, train_ds, &tests)
                .map_err(|f| Error::Numerical(format!("{label}/{kind}/{seed}: {f}")))
        })
        .collect::<Result<Vec<_>>>()?;

    reports.sort_by(|a, b| {
        (
            &a.grammar,
            a.settings.cell.name(),
            a.settings.n_h,
            a.settings.seed,
        )
            .cmp(&(
                &b.grammar,
                b.settings.cell.name(),
                b.settings.n_h,
                b.settings.seed,
            ))
    });
    Ok(reports)
}

/// One CSV row per run, canonical order.
pub fn grid_csv(reports: &[RunReport]) -> String {
    let split_names: Vec<String> = reports
        .first()
        .map(|r| r.metrics.iter().map(|m| m.split.clone()).collect())
        .unwrap_or_default();
    let mut out = String::from("grammar,cell,n_h,seed,epochs_run,steps,train_f1");
    for s in &split_names {
        out.push_str(&format!(",{s}_f1,{s}_bcr,{s}_accuracy"));
    }
    out.push_str(",wall_secs\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{:.6}",
            r.grammar,
            r.settings.cell,
            r.settings.n_h,
            r.settings.seed,
            r.epochs_run,
            r.steps,
            r.train_f1
        ));
        for s in &split_names {
            match r.metrics.iter().find(|m| &m.split == s) {
                Some(m) => out.push_str(&format!(
                    ",{:.6},{:.6},{:.6}",
                    m.metrics.f1, m.metrics.bcr, m.metrics.accuracy
                )),
                None => out.push_str(",,,"),
            }
        }
        out.push_str(&format!(",{:.3}\n", r.wall_secs));
    }
    out
}

/// Flat `key = value` file with `#` comments.
pub fn parse_kv_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// Training run description loaded from a config file.
#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub settings: TrainSettings,
    pub train_path: PathBuf,
    pub test_paths: Vec<PathBuf>,
    pub grammar: String,
}

pub fn parse_train_config(text: &str, base_dir: &Path) -> Result<TrainConfig> {
    let map = parse_kv_file(text)?;
    let known = [
        "cell", "hidden", "lr", "batch", "epochs", "seed", "patience", "eval_every", "init_low",
        "init_high", "train", "test", "grammar",
    ];
    for k in map.keys() {
        if !known.contains(&k.as_str()) {
            return Err(Error::Config(format!("unknown config key {k:?}")));
        }
    }
    let get = |k: &str| -> Result<&String> {
        map.get(k)
            .ok_or_else(|| Error::Config(format!("missing config key {k:?}")))
    };
    let cell = CellKind::parse(get("cell")?).map_err(|e| Error::Config(e.to_string()))?;
    let n_h: usize = get("hidden")?
        .parse()
        .map_err(|_| Error::Config("bad hidden".into()))?;
    let seed: u64 = map.get("seed").map_or(Ok(0), |v| {
        v.parse().map_err(|_| Error::Config("bad seed".into()))
    })?;
    let mut settings = TrainSettings::new(cell, n_h, seed);
    let parse_f64 = |k: &str, slot: &mut f64| -> Result<()> {
        if let Some(v) = map.get(k) {
            *slot = v
                .parse()
                .map_err(|_| Error::Config(format!("bad {k}")))?;
        }
        Ok(())
    };
    let parse_usize = |k: &str, slot: &mut usize| -> Result<()> {
        if let Some(v) = map.get(k) {
            *slot = v
                .parse()
                .map_err(|_| Error::Config(format!("bad {k}")))?;
        }
        Ok(())
    };
    parse_f64("lr", &mut settings.lr)?;
    parse_f64("init_low", &mut settings.init_low)?;
    parse_f64("init_high", &mut settings.init_high)?;
    parse_usize("batch", &mut settings.batch)?;
    parse_usize("epochs", &mut settings.epochs)?;
    parse_usize("patience", &mut settings.patience)?;
    parse_usize("eval_every", &mut settings.eval_every)?;
    settings.validate()?;

    let train_path = base_dir.join(get("train")?);
    let test_paths = get("test")?
        .split_whitespace()
        .map(|p| base_dir.join(p))
        .collect();
    Ok(TrainConfig {
        settings,
        train_path,
        test_paths,
        grammar: map.get("grammar").cloned().unwrap_or_default(),
    })
}

pub fn parse_grid_config(text: &str) -> Result<GridSpec> {
    let map = parse_kv_file(text)?;
    let known = [
        "grammars", "kinds", "sizes", "budget_anchor", "seeds", "epochs", "batch", "lr",
        "patience", "data_seed",
    ];
    for k in map.keys() {
        if !known.contains(&k.as_str()) {
            return Err(Error::Config(format!("unknown grid key {k:?}")));
        }
    }
    let get = |k: &str| -> Result<&String> {
        map.get(k)
            .ok_or_else(|| Error::Config(format!("missing grid key {k:?}")))
    };
    let grammars: Vec<String> = get("grammars")?
        .split_whitespace()
        .map(str::to_string)
        .collect();
    let kinds = get("kinds")?
        .split_whitespace()
        .map(|s| CellKind::parse(s).map_err(|e| Error::Config(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let sizes = match (map.get("sizes"), map.get("budget_anchor")) {
        (Some(s), None) => GridSizes::Fixed(
            s.split_whitespace()
                .map(|v| v.parse().map_err(|_| Error::Config("bad sizes".into())))
                .collect::<Result<Vec<usize>>>()?,
        ),
        (None, Some(b)) => {
            let (kind, h) = b
                .split_once(' ')
                .ok_or_else(|| Error::Config("budget_anchor wants `<kind> <n_h>`".into()))?;
            GridSizes::Budget {
                anchor: CellKind::parse(kind.trim()).map_err(|e| Error::Config(e.to_string()))?,
                anchor_h: h
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config("bad anchor size".into()))?,
            }
        }
        _ => {
            return Err(Error::Config(
                "exactly one of `sizes` or `budget_anchor` is required".into(),
            ))
        }
    };
    let seeds = get("seeds")?
        .split_whitespace()
        .map(|v| v.parse().map_err(|_| Error::Config("bad seeds".into())))
        .collect::<Result<Vec<u64>>>()?;
    let parse_or = |k: &str, default: usize| -> Result<usize> {
        map.get(k).map_or(Ok(default), |v| {
            v.parse().map_err(|_| Error::Config(format!("bad {k}")))
        })
    };
    Ok(GridSpec {
        grammars,
        kinds,
        sizes,
        seeds,
        data_seed: map.get("data_seed").map_or(Ok(7), |v| {
            v.parse().map_err(|_| Error::Config("bad data_seed".into()))
        })?,
        epochs: parse_or("epochs", 100)?,
        batch: parse_or("batch", 100)?,
        lr: map.get("lr").map_or(Ok(0.01), |v| {
            v.parse().map_err(|_| Error::Config("bad lr".into()))
        })?,
        patience: parse_or("patience", 5)?,
    })
}

/// Checks persisted labels against the automaton they reference.
pub fn verify_labels(ds: &LabeledDataset, dfa: &Dfa) -> Result<()> {
    for (idx, (w, label)) in ds.items.iter().enumerate() {
        if dfa.accepts_word(w) != *label {
            return Err(Error::InvalidArgument(format!(
                "dataset row {idx} disagrees with the referenced automaton"
            )));
        }
    }
    Ok(())
}

/// Loads the datasets named by a train config, verifying labels when the
/// dataset header references a DFA file, then trains.
pub fn run_train_config(cfg: &TrainConfig) -> std::result::Result<RunReport, TrainFailure> {
    let load = |path: &Path| -> Result<LabeledDataset> {
        let ds = read_dataset(path)?;
        if let Some(rel) = &ds.meta.dfa_ref {
            let dfa_path = path.parent().unwrap_or(Path::new(".")).join(rel);
            if dfa_path.exists() {
                let dfa = Dfa::from_text(&std::fs::read_to_string(&dfa_path)?)?;
                verify_labels(&ds, &dfa)?;
            }
        }
        Ok(ds)
    };
    let empty_trace = || NormTrace {
        groups: vec![],
        init: vec![],
        rows: vec![],
    };
    let train_ds = load(&cfg.train_path).map_err(|error| TrainFailure {
        error,
        partial: Box::new(RunReport {
            grammar: cfg.grammar.clone(),
            settings: cfg.settings.clone(),
            epochs_run: 0,
            steps: 0,
            best_epoch: 0,
            train_f1: 0.0,
            metrics: vec![],
            trace: empty_trace(),
            wall_secs: 0.0,
            params: None,
        }),
    })?;
    let mut tests = Vec::new();
    for p in &cfg.test_paths {
        let ds = load(p).map_err(|error| TrainFailure {
            error,
            partial: Box::new(RunReport {
                grammar: cfg.grammar.clone(),
                settings: cfg.settings.clone(),
                epochs_run: 0,
                steps: 0,
                best_epoch: 0,
                train_f1: 0.0,
                metrics: vec![],
                trace: empty_trace(),
                wall_secs: 0.0,
                params: None,
            }),
        })?;
        let name = p
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "test".into());
        tests.push((name, ds));
    }
    let borrowed: Vec<(&str, &LabeledDataset)> =
        tests.iter().map(|(n, d)| (n.as_str(), d)).collect();
    train(&cfg.settings, &cfg.grammar, &train_ds, &borrowed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::sample_split;
    use crate::neural::construct_2rnn;

    #[test]
    fn metrics_from_hand_confusion() {
        // TP=3, FP=1, FN=2, TN=4: F1 = 2/3
        let m = metrics_from_confusion(3, 1, 4, 2);
        assert!((m.f1 - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.accuracy - 0.7).abs() < 1e-12);
        // BCR = (3/5 + 4/5)/2
        assert!((m.bcr - 0.7).abs() < 1e-12);

        let perfect = metrics_from_confusion(5, 0, 5, 0);
        assert_eq!(perfect.f1, 1.0);
        assert_eq!(perfect.bcr, 1.0);

        // all-negative predictions on a balanced set
        let all_neg = metrics_from_confusion(0, 0, 5, 5);
        assert_eq!(all_neg.f1, 0.0);
        assert_eq!(all_neg.bcr, 0.5);
    }

    #[test]
    fn evaluate_is_row_order_invariant() {
        let dfa = build_tomita(4).unwrap().minimize();
        let net = construct_2rnn(&dfa);
        let mut params = net.params.clone();
        params.spec.activation = Activation::Linear;
        let ds = sample_split(&dfa, &[3, 5, 8], 100, false, 3).unwrap();
        // constructed net needs its one-hot start; emulate by absorbing h0
        // into the evaluation via a model whose zero-h0 forward is wrong --
        // so instead check invariance with a trained-shape random model
        let spec = CellSpec::new(CellKind::Srn, 2, 4, None, Activation::Tanh).unwrap();
        let model = init_params(&spec, 9, -0.5, 0.5).unwrap();
        let a = evaluate(&model, &ds);
        let mut reversed = ds.clone();
        reversed.items.reverse();
        let b = evaluate(&model, &reversed);
        assert_eq!(a, b);
    }

    #[test]
    fn constructed_model_with_one_hot_start_scores_perfectly() {
        // evaluate() pins h0 = 0; emulate the one-hot start by extending the
        // construction: shift the start into the bias of a first virtual step
        // -- here we simply check via direct forward calls
        let dfa = build_tomita(2).unwrap().minimize();
        let net = construct_2rnn(&dfa);
        let ds = sample_split(&dfa, &[0, 1, 4, 7], 200, false, 5).unwrap();
        let (mut tp, mut fp, mut tn, mut fnn) = (0, 0, 0, 0);
        for (w, label) in &ds.items {
            let pred = forward(&net.params, w, &net.h0).unwrap().predicts_positive();
            match (pred, *label) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, false) => tn += 1,
                (false, true) => fnn += 1,
            }
        }
        let m = metrics_from_confusion(tp, fp, tn, fnn);
        assert_eq!(m.f1, 1.0);
        assert_eq!(m.bcr, 1.0);
    }

    #[test]
    fn training_learns_a_constant_label_problem() {
        // all-positive degenerate dataset converges to predict-positive
        let dfa = build_tomita(1).unwrap().minimize();
        let items: Vec<(Vec<u8>, bool)> = (0..40u8).map(|i| (vec![1; (i % 5) as usize], true)).collect();
        let mut ds = sample_split(&dfa, &[1], 2, false, 0).unwrap();
        ds.items = items;
        ds.items.dedup_by(|a, b| a.0 == b.0);
        let mut settings = TrainSettings::new(CellKind::Srn, 4, 1);
        settings.epochs = 60;
        settings.batch = 8;
        let report = train(&settings, "const", &ds, &[("train", &ds)]).unwrap();
        assert_eq!(report.metrics[0].metrics.f1, 1.0);
    }

    #[test]
    fn deterministic_reruns_and_trace_integrity() {
        let dfa = build_tomita(2).unwrap().minimize();
        let train_ds = sample_split(&dfa, &[1, 2, 3, 4, 5, 6], 40, true, 11).unwrap();
        let test_ds = sample_split(&dfa, &[7, 8], 40, false, 12).unwrap();
        let mut settings = TrainSettings::new(CellKind::Rnn2, 4, 5);
        settings.epochs = 8;
        settings.batch = 16;
        settings.patience = 3;
        let a = train(&settings, "t2", &train_ds, &[("test", &test_ds)]).unwrap();
        let b = train(&settings, "t2", &train_ds, &[("test", &test_ds)]).unwrap();
        assert_eq!(a.steps, b.steps);
        assert_eq!(a.trace.rows, b.trace.rows);
        assert_eq!(a.metrics[0].metrics, b.metrics[0].metrics);
        assert_eq!(a.trace.rows.len(), a.steps);
        // equal-length grouping: steps per epoch = sum of per-length chunks
        let fit_len = train_ds.len() - train_ds.len() / 10;
        assert!(a.steps >= a.epochs_run * fit_len.div_ceil(16));
    }

    #[test]
    fn dominance_summary_cases() {
        let trace = NormTrace {
            groups: vec!["W".into(), "b".into()],
            init: vec![1.0, 1.0],
            rows: vec![vec![2.0, 1.0], vec![3.0, 1.0]],
        };
        let s = norm_trace_report(&trace);
        assert_eq!(s.dominant.as_deref(), Some("W"));
        assert_eq!(s.ratio, Some(1.0));

        let flat = NormTrace {
            groups: vec!["W".into()],
            init: vec![1.0],
            rows: vec![vec![1.0], vec![1.0]],
        };
        let s = norm_trace_report(&flat);
        assert_eq!(s.ratio, None);
        assert_eq!(s.dominant, None);
    }

    #[test]
    fn config_parsing_round_trip() {
        let text = "cell = rnn2\nhidden = 8\nseed = 3\nepochs = 50\ntrain = tr.ds\ntest = a.ds b.ds\n";
        let cfg = parse_train_config(text, Path::new("/tmp")).unwrap();
        assert_eq!(cfg.settings.cell, CellKind::Rnn2);
        assert_eq!(cfg.settings.n_h, 8);
        assert_eq!(cfg.settings.epochs, 50);
        assert_eq!(cfg.settings.lr, 0.01);
        assert_eq!(cfg.test_paths.len(), 2);

        assert!(parse_train_config("cell = rnn2\nhidden = 8\nbogus = 1\ntrain = t\ntest = t\n", Path::new(".")).is_err());
        assert!(parse_train_config("cell = rnn2\ntrain = t\ntest = t\n", Path::new(".")).is_err());

        let grid_text = "grammars = tomita-1 tomita-6\nkinds = srn rnn2\nbudget_anchor = srn 10\nseeds = 1 2\nepochs = 5\n";
        let g = parse_grid_config(grid_text).unwrap();
        assert_eq!(g.grammars.len(), 2);
        match g.sizes {
            GridSizes::Budget { anchor, anchor_h } => {
                assert_eq!(anchor, CellKind::Srn);
                assert_eq!(anchor_h, 10);
            }
            _ => panic!("expected budget sizing"),
        }
        assert!(parse_grid_config("grammars = x\nkinds = srn\nseeds = 1\n").is_err());
    }

    #[test]
    fn label_verification_catches_flips() {
        let dfa = build_tomita(3).unwrap().minimize();
        let mut ds = sample_split(&dfa, &[4, 5], 30, false, 2).unwrap();
        assert!(verify_labels(&ds, &dfa).is_ok());
        let flip = ds.items.len() / 2;
        ds.items[flip].1 = !ds.items[flip].1;
        assert!(verify_labels(&ds, &dfa).is_err());
    }

    #[test]
    fn small_grid_runs_sorted_and_deterministic() {
        let spec = GridSpec {
            grammars: vec!["tomita-1".into(), "tomita-2".into()],
            kinds: vec![CellKind::Srn, CellKind::Rnn2],
            sizes: GridSizes::Fixed(vec![3]),
            seeds: vec![2, 1],
            data_seed: 5,
            epochs: 2,
            batch: 100,
            lr: 0.01,
            patience: 2,
        };
        let reports = grid(&spec).unwrap();
        assert_eq!(reports.len(), 2 * 2 * 2);
        let keys: Vec<_> = reports
            .iter()
            .map(|r| {
                (
                    r.grammar.clone(),
                    r.settings.cell.name(),
                    r.settings.n_h,
                    r.settings.seed,
                )
            })
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        let csv = grid_csv(&reports);
        assert_eq!(csv.lines().count(), reports.len() + 1);
        assert!(csv.starts_with("grammar,cell,n_h,seed"));

        // concurrent execution matches a repeat run
        let again = grid(&spec).unwrap();
        for (a, b) in reports.iter().zip(&again) {
            assert_eq!(a.train_f1, b.train_f1);
            assert_eq!(a.steps, b.steps);
        }
    }
}
