//! Multiclass linear classification of resources from their tag vectors and
//! the repeated-subsampling accuracy protocol.
//!
//! The default learner is a Crammer–Singer multiclass SVM,
//!
//! ```text
//! F(W) = λ/2 Σ_c ||w_c||² + 1/n Σ_i max(0, 1 + max_{c≠y_i} w_c·x_i − w_{y_i}·x_i)
//! ```
//!
//! minimized by projected stochastic subgradient descent with step size
//! `1/(λt)` (Pegasos schedule). The full objective is evaluated after every
//! epoch and the best iterate seen so far is kept, so the reported objective
//! trace never increases. One-vs-rest binary hinge training is available as an
//! alternative strategy.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, BufRead};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::store::{Folksonomy, ResourceId};
use crate::weighting::{Scheme, Vectorizer, WeightedVector};

/// Expert taxonomies with their top-level category counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Taxonomy {
    Odp,
    Ddc,
    /// After merging E and F.
    Lcc,
}

impl Taxonomy {
    pub fn categories(self) -> usize {
        match self {
            Taxonomy::Odp => 17,
            Taxonomy::Ddc => 10,
            Taxonomy::Lcc => 20,
        }
    }
}

/// Category that LCC classes E and F are folded into.
pub const LCC_MERGED_EF: &str = "E-F";

/// Ground-truth categories of resources. Category indices follow the sorted
/// order of category ids.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LabeledSet {
    labels: BTreeMap<ResourceId, usize>,
    categories: Vec<String>,
    display_names: Vec<String>,
}

/// Outcome of reading a labels file.
#[derive(Debug, Default)]
pub struct LabelLoad {
    pub set: LabeledSet,
    /// Labels naming resources absent from the folksonomy.
    pub unknown_resources: u64,
    /// 1-based line numbers of malformed lines.
    pub malformed: Vec<u64>,
}

impl LabeledSet {
    /// Builds from `(resource, category, display name)` triples over resources
    /// present in `f`. Returns the set and the number of skipped unknown resources.
    pub fn from_entries<I>(f: &Folksonomy, entries: I) -> (LabeledSet, u64)
    where
        I: IntoIterator<Item = (String, String, Option<String>)>,
    {
        let mut raw: Vec<(ResourceId, String)> = Vec::new();
        let mut names: BTreeMap<String, String> = BTreeMap::new();
        let mut unknown = 0;
        for (resource, category, display) in entries {
            let Some(id) = f.resource_id(&resource) else {
                unknown += 1;
                continue;
            };
            let entry = names.entry(category.clone()).or_insert_with(|| category.clone());
            if let Some(d) = display {
                *entry = d;
            }
            raw.push((id, category));
        }
        let categories: Vec<String> = names.keys().cloned().collect();
        let display_names = names.into_values().collect();
        let labels = raw
            .into_iter()
            .map(|(r, c)| (r, categories.binary_search(&c).expect("category collected")))
            .collect();
        (LabeledSet { labels, categories, display_names }, unknown)
    }

    pub fn from_pairs<I, S>(f: &Folksonomy, pairs: I) -> (LabeledSet, u64)
    where
        I: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        Self::from_entries(f, pairs.into_iter().map(|(r, c)| (r.into(), c.into(), None)))
    }

    /// Reads `resource_id<TAB>category_id[<TAB>display name]` lines.
    pub fn read_tsv<R: BufRead>(reader: R, f: &Folksonomy, merge_lcc_ef: bool) -> Result<LabelLoad> {
        let mut entries = Vec::new();
        let mut malformed = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if !(2..=3).contains(&fields.len()) || fields[0].is_empty() || fields[1].is_empty() {
                malformed.push(i as u64 + 1);
                continue;
            }
            let mut category = fields[1].to_owned();
            if merge_lcc_ef && (category == "E" || category == "F") {
                category = LCC_MERGED_EF.to_owned();
            }
            let display = fields.get(2).filter(|d| !d.is_empty()).map(|d| d.to_string());
            entries.push((fields[0].to_owned(), category, display));
        }
        let (set, unknown_resources) = Self::from_entries(f, entries);
        Ok(LabelLoad { set, unknown_resources, malformed })
    }

    pub fn label(&self, r: ResourceId) -> Option<usize> {
        self.labels.get(&r).copied()
    }

    /// Labeled resources in id order.
    pub fn resources(&self) -> Vec<ResourceId> {
        self.labels.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_categories(&self) -> usize {
        self.categories.len()
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn display_name(&self, category: usize) -> &str {
        &self.display_names[category]
    }

    pub fn validate_taxonomy(&self, taxonomy: Taxonomy) -> Result<()> {
        if self.n_categories() != taxonomy.categories() {
            return Err(Error::InvalidConfig(format!(
                "{taxonomy:?} has {} top-level categories, labels use {}",
                taxonomy.categories(),
                self.n_categories()
            )));
        }
        Ok(())
    }

    /// Keeps only labels of the given resources.
    pub fn restrict(&self, keep: &BTreeSet<ResourceId>) -> LabeledSet {
        LabeledSet {
            labels: self.labels.iter().filter(|(r, _)| keep.contains(r)).map(|(&r, &c)| (r, c)).collect(),
            ..self.clone()
        }
    }

    /// Same resources with labels permuted at random (chance-level control).
    pub fn shuffled(&self, seed: u64) -> LabeledSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values: Vec<usize> = self.labels.values().copied().collect();
        values.shuffle(&mut rng);
        LabeledSet {
            labels: self.labels.keys().copied().zip(values).collect(),
            ..self.clone()
        }
    }

    pub fn write_tsv<W: io::Write>(&self, f: &Folksonomy, mut out: W) -> Result<()> {
        for (&r, &c) in &self.labels {
            writeln!(out, "{}\t{}", f.resource_name(r), self.categories[c])?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    CrammerSinger,
    OneVsRest,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hyperparameters {
    /// Trade-off constant; `None` means `0.01 · n` for a training set of size n.
    pub c: Option<f64>,
    pub epochs: usize,
    pub seed: u64,
    pub strategy: Strategy,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters { c: None, epochs: 50, seed: 42, strategy: Strategy::CrammerSinger }
    }
}

impl Hyperparameters {
    /// Regularization strength `λ = 1/(C·n)`.
    pub fn lambda(&self, n: usize) -> f64 {
        let n = n as f64;
        let c = self.c.unwrap_or(0.01 * n);
        1.0 / (c * n)
    }
}

/// A training example over dense feature indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Example {
    pub features: Vec<(usize, f64)>,
    pub label: usize,
}

impl Example {
    pub fn from_vector(v: &WeightedVector, label: usize) -> Example {
        Example { features: v.entries.iter().map(|&(t, w)| (t.index(), w)).collect(), label }
    }
}

fn dot(w: &[f64], x: &[(usize, f64)]) -> f64 {
    x.iter().map(|&(j, v)| w.get(j).copied().unwrap_or(0.0) * v).sum()
}

/// Index of the highest score, ties to the lowest index, optionally skipping one class.
fn argmax(scores: &[f64], skip: Option<usize>) -> usize {
    let mut best = usize::MAX;
    for (c, &s) in scores.iter().enumerate() {
        if Some(c) == skip {
            continue;
        }
        if best == usize::MAX || s > scores[best] {
            best = c;
        }
    }
    best
}

/// Regularized Crammer–Singer objective at `weights` (one row per class).
pub fn cs_objective(weights: &[Vec<f64>], examples: &[Example], lambda: f64) -> f64 {
    let reg: f64 = weights.iter().flatten().map(|w| w * w).sum::<f64>() * lambda / 2.0;
    let loss: f64 = examples
        .iter()
        .map(|ex| {
            let scores: Vec<f64> = weights.iter().map(|w| dot(w, &ex.features)).collect();
            let rival = argmax(&scores, Some(ex.label));
            (1.0 + scores[rival] - scores[ex.label]).max(0.0)
        })
        .sum();
    reg + loss / examples.len() as f64
}

/// A subgradient of [`cs_objective`]; the gradient wherever the objective is differentiable.
pub fn cs_subgradient(weights: &[Vec<f64>], examples: &[Example], lambda: f64) -> Vec<Vec<f64>> {
    let mut grad: Vec<Vec<f64>> = weights.iter().map(|w| w.iter().map(|x| lambda * x).collect()).collect();
    let n = examples.len() as f64;
    for ex in examples {
        let scores: Vec<f64> = weights.iter().map(|w| dot(w, &ex.features)).collect();
        let rival = argmax(&scores, Some(ex.label));
        if 1.0 + scores[rival] - scores[ex.label] > 0.0 {
            for &(j, v) in &ex.features {
                grad[rival][j] += v / n;
                grad[ex.label][j] -= v / n;
            }
        }
    }
    grad
}

/// Weight matrix stored as `scale · rows` so that the shrink step is O(1).
struct ScaledWeights {
    rows: Vec<Vec<f64>>,
    scale: f64,
    sq_norm: f64,
}

impl ScaledWeights {
    fn zeros(classes: usize, dim: usize) -> Self {
        ScaledWeights { rows: vec![vec![0.0; dim]; classes], scale: 1.0, sq_norm: 0.0 }
    }

    fn score(&self, class: usize, x: &[(usize, f64)]) -> f64 {
        self.scale * dot(&self.rows[class], x)
    }

    fn shrink(&mut self, factor: f64) {
        if factor <= 0.0 {
            self.rows.iter_mut().for_each(|r| r.fill(0.0));
            self.scale = 1.0;
            self.sq_norm = 0.0;
            return;
        }
        self.scale *= factor;
        self.sq_norm *= factor * factor;
        if self.scale < 1e-9 {
            self.materialize();
        }
    }

    /// w_class += step · x
    fn add(&mut self, class: usize, step: f64, x: &[(usize, f64)]) {
        let a = step / self.scale;
        let row = &mut self.rows[class];
        let mut vx = 0.0;
        let mut xx = 0.0;
        for &(j, v) in x {
            vx += row[j] * v;
            xx += v * v;
            row[j] += a * v;
        }
        let s2 = self.scale * self.scale;
        self.sq_norm += s2 * (2.0 * a * vx + a * a * xx);
        self.sq_norm = self.sq_norm.max(0.0);
    }

    fn project(&mut self, radius: f64) {
        let norm = self.sq_norm.sqrt();
        if norm > radius {
            self.shrink(radius / norm);
        }
    }

    fn materialize(&mut self) {
        let s = self.scale;
        self.rows.iter_mut().flatten().for_each(|w| *w *= s);
        self.scale = 1.0;
        self.sq_norm = self.rows.iter().flatten().map(|w| w * w).sum();
    }

    fn dense(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.iter().map(|w| w * self.scale).collect()).collect()
    }
}

fn pegasos_multiclass(examples: &[Example], classes: usize, dim: usize, hyper: &Hyperparameters) -> (Vec<Vec<f64>>, Vec<f64>, Vec<f64>) {
    let lambda = hyper.lambda(examples.len());
    let radius = 1.0 / lambda.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(hyper.seed);
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let mut w = ScaledWeights::zeros(classes, dim);
    let mut best = w.dense();
    let mut best_obj = cs_objective(&best, examples, lambda);
    let mut raw = Vec::with_capacity(hyper.epochs);
    let mut trace = Vec::with_capacity(hyper.epochs);
    let mut scores = vec![0.0; classes];
    let mut t = 0u64;
    for _ in 0..hyper.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let ex = &examples[i];
            let eta = 1.0 / (lambda * t as f64);
            for (c, s) in scores.iter_mut().enumerate() {
                *s = w.score(c, &ex.features);
            }
            let rival = argmax(&scores, Some(ex.label));
            let violated = 1.0 + scores[rival] - scores[ex.label] > 0.0;
            w.shrink(1.0 - 1.0 / t as f64);
            if violated {
                w.add(ex.label, eta, &ex.features);
                w.add(rival, -eta, &ex.features);
            }
            w.project(radius);
        }
        let current = w.dense();
        let obj = cs_objective(&current, examples, lambda);
        raw.push(obj);
        if obj < best_obj {
            best_obj = obj;
            best = current;
        }
        trace.push(best_obj);
    }
    (best, trace, raw)
}

fn binary_objective(w: &[f64], examples: &[Example], positive: usize, lambda: f64) -> f64 {
    let reg = lambda / 2.0 * w.iter().map(|x| x * x).sum::<f64>();
    let loss: f64 = examples
        .iter()
        .map(|ex| {
            let y = if ex.label == positive { 1.0 } else { -1.0 };
            (1.0 - y * dot(w, &ex.features)).max(0.0)
        })
        .sum();
    reg + loss / examples.len() as f64
}

fn pegasos_one_vs_rest(examples: &[Example], classes: usize, dim: usize, hyper: &Hyperparameters) -> (Vec<Vec<f64>>, Vec<f64>, Vec<f64>) {
    let lambda = hyper.lambda(examples.len());
    let radius = 1.0 / lambda.sqrt();
    let mut rows = Vec::with_capacity(classes);
    let mut trace = vec![0.0; hyper.epochs];
    let mut raw = vec![0.0; hyper.epochs];
    for class in 0..classes {
        let mut rng = ChaCha8Rng::seed_from_u64(hyper.seed.wrapping_add(class as u64));
        let mut order: Vec<usize> = (0..examples.len()).collect();
        let mut w = ScaledWeights::zeros(1, dim);
        let mut best = vec![0.0; dim];
        let mut best_obj = binary_objective(&best, examples, class, lambda);
        let mut t = 0u64;
        for epoch in 0..hyper.epochs {
            order.shuffle(&mut rng);
            for &i in &order {
                t += 1;
                let ex = &examples[i];
                let y = if ex.label == class { 1.0 } else { -1.0 };
                let violated = y * w.score(0, &ex.features) < 1.0;
                w.shrink(1.0 - 1.0 / t as f64);
                if violated {
                    w.add(0, y / (lambda * t as f64), &ex.features);
                }
                w.project(radius);
            }
            let current = w.dense().remove(0);
            let obj = binary_objective(&current, examples, class, lambda);
            raw[epoch] += obj;
            if obj < best_obj {
                best_obj = obj;
                best = current;
            }
            trace[epoch] += best_obj;
        }
        rows.push(best);
    }
    (rows, trace, raw)
}

/// Per-category weight vectors over the training vocabulary.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearModel {
    pub weights: Vec<Vec<f64>>,
    pub categories: Vec<String>,
    pub scheme: Scheme,
    pub hyper: Hyperparameters,
    pub lambda: f64,
    /// Objective of the retained iterate after each epoch (non-increasing).
    pub objective_trace: Vec<f64>,
    /// Objective of the last iterate after each epoch.
    pub raw_objective: Vec<f64>,
}

impl LinearModel {
    pub fn dim(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    pub fn scores(&self, v: &WeightedVector) -> Vec<f64> {
        let x: Vec<(usize, f64)> = v.entries.iter().map(|&(t, w)| (t.index(), w)).collect();
        self.weights.iter().map(|w| dot(w, &x)).collect()
    }

    /// Highest-scoring category index; ties go to the lowest index.
    /// Tags outside the training vocabulary contribute nothing.
    pub fn predict(&self, v: &WeightedVector) -> usize {
        argmax(&self.scores(v), None)
    }

    pub fn predict_category(&self, v: &WeightedVector) -> &str {
        &self.categories[self.predict(v)]
    }

    pub fn accuracy(&self, vectors: &[WeightedVector], labels: &LabeledSet) -> f64 {
        let scored: Vec<bool> = vectors
            .iter()
            .filter_map(|v| labels.label(v.resource).map(|y| self.predict(v) == y))
            .collect();
        if scored.is_empty() {
            return 0.0;
        }
        scored.iter().filter(|&&ok| ok).count() as f64 / scored.len() as f64
    }
}

/// Trains on the labeled members of `vectors`. All vectors must share a scheme.
pub fn train(vectors: &[WeightedVector], labels: &LabeledSet, hyper: &Hyperparameters) -> Result<LinearModel> {
    let examples: Vec<Example> = vectors
        .iter()
        .filter_map(|v| labels.label(v.resource).map(|y| Example::from_vector(v, y)))
        .collect();
    let Some(first) = vectors.first() else {
        return Err(Error::EmptyTrainingSet);
    };
    if vectors.iter().any(|v| v.scheme != first.scheme) {
        return Err(Error::MixedSchemes);
    }
    let mut model = fit(&examples, labels.n_categories(), hyper)?;
    model.scheme = first.scheme;
    model.categories = labels.categories().to_vec();
    Ok(model)
}

/// Trains on raw examples with class indices `0..classes`.
pub fn fit(examples: &[Example], classes: usize, hyper: &Hyperparameters) -> Result<LinearModel> {
    if examples.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let present: BTreeSet<usize> = examples.iter().map(|e| e.label).collect();
    if present.len() < 2 {
        return Err(Error::SingleCategory(present.iter().next().unwrap().to_string()));
    }
    if hyper.epochs == 0 {
        return Err(Error::InvalidConfig("epochs must be at least 1".into()));
    }
    if hyper.c.is_some_and(|c| !(c > 0.0)) {
        return Err(Error::InvalidConfig("C must be positive".into()));
    }
    let classes = classes.max(present.last().unwrap() + 1);
    let dim = examples.iter().flat_map(|e| e.features.iter().map(|&(j, _)| j + 1)).max().unwrap_or(0);
    let (weights, objective_trace, raw_objective) = match hyper.strategy {
        Strategy::CrammerSinger => pegasos_multiclass(examples, classes, dim, hyper),
        Strategy::OneVsRest => pegasos_one_vs_rest(examples, classes, dim, hyper),
    };
    Ok(LinearModel {
        weights,
        categories: (0..classes).map(|c| c.to_string()).collect(),
        scheme: Scheme::Tf,
        hyper: *hyper,
        lambda: hyper.lambda(examples.len()),
        objective_trace,
        raw_objective,
    })
}

/// Mean accuracy of repeated runs, one row per scheme and one column per
/// training-set size.
#[derive(Clone, Debug, PartialEq)]
pub struct AccuracyGrid {
    pub schemes: Vec<Scheme>,
    pub sizes: Vec<usize>,
    /// `cells[scheme][size]` holds the per-run accuracies.
    pub cells: Vec<Vec<Vec<f64>>>,
}

impl AccuracyGrid {
    pub fn runs(&self, scheme: usize, size: usize) -> &[f64] {
        &self.cells[scheme][size]
    }

    pub fn mean(&self, scheme: usize, size: usize) -> f64 {
        let runs = self.runs(scheme, size);
        runs.iter().sum::<f64>() / runs.len() as f64
    }

    /// Mean over all sizes and runs for one scheme.
    pub fn scheme_mean(&self, scheme: Scheme) -> Option<f64> {
        let row = self.schemes.iter().position(|&s| s == scheme)?;
        let all: Vec<f64> = self.cells[row].iter().flatten().copied().collect();
        Some(all.iter().sum::<f64>() / all.len() as f64)
    }

    /// `scheme,<size>,<size>,...` header and one row of mean accuracies per scheme.
    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["scheme".to_string()];
        header.extend(self.sizes.iter().map(|s| s.to_string()));
        w.write_record(&header)?;
        for (i, scheme) in self.schemes.iter().enumerate() {
            let mut row = vec![scheme.name().to_string()];
            row.extend((0..self.sizes.len()).map(|j| format!("{:.6}", self.mean(i, j))));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Long format: `scheme,size,run,accuracy`.
    pub fn write_runs_csv<W: io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["scheme", "size", "run", "accuracy"])?;
        for (i, scheme) in self.schemes.iter().enumerate() {
            for (j, size) in self.sizes.iter().enumerate() {
                for (r, acc) in self.cells[i][j].iter().enumerate() {
                    w.write_record([scheme.name(), &size.to_string(), &r.to_string(), &format!("{acc:.6}")])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalConfig {
    pub schemes: Vec<Scheme>,
    pub sizes: Vec<usize>,
    pub runs: usize,
    pub seed: u64,
    pub normalize: bool,
    pub hyper: Hyperparameters,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            schemes: Scheme::ALL.to_vec(),
            sizes: vec![],
            runs: 6,
            seed: 42,
            normalize: true,
            hyper: Hyperparameters::default(),
        }
    }
}

/// SplitMix64 finalizer over a sequence of words.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    let mix = |mut z: u64| {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    parts.iter().fold(mix(seed), |acc, &p| mix(acc ^ p))
}

/// Repeated random subsampling: for every size and run, a training sample is
/// drawn without replacement, each scheme is trained on it, and accuracy is
/// measured on all remaining labeled resources. Schemes share splits.
///
/// Inverse frequencies are computed over the whole folksonomy. Cells run on
/// the current rayon pool.
pub fn evaluate(f: &Folksonomy, labels: &LabeledSet, cfg: &EvalConfig) -> Result<AccuracyGrid> {
    let labeled = labels.resources();
    if cfg.runs == 0 {
        return Err(Error::InvalidConfig("runs must be at least 1".into()));
    }
    if cfg.schemes.is_empty() || cfg.sizes.is_empty() {
        return Err(Error::InvalidConfig("need at least one scheme and one size".into()));
    }
    if let Some(&size) = cfg.sizes.iter().find(|&&s| s >= labeled.len() || s == 0) {
        return Err(Error::TrainingSizeTooLarge { size, labeled: labeled.len() });
    }
    let vectors: Vec<Vec<WeightedVector>> = cfg
        .schemes
        .par_iter()
        .map(|&s| Vectorizer::new(s).normalize(cfg.normalize).vectorize_all(f, &labeled))
        .collect::<Result<_>>()?;

    let jobs: Vec<(usize, usize)> = (0..cfg.sizes.len())
        .flat_map(|j| (0..cfg.runs).map(move |r| (j, r)))
        .collect();
    let results: Vec<Vec<f64>> = jobs
        .par_iter()
        .map(|&(j, run)| {
            let size = cfg.sizes[j];
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, &[size as u64, run as u64]));
            let mut train_idx = rand::seq::index::sample(&mut rng, labeled.len(), size).into_vec();
            train_idx.sort_unstable();
            let mut in_train = vec![false; labeled.len()];
            train_idx.iter().for_each(|&i| in_train[i] = true);
            cfg.schemes
                .iter()
                .enumerate()
                .map(|(s, _)| {
                    let train_set: Vec<WeightedVector> = train_idx.iter().map(|&i| vectors[s][i].clone()).collect();
                    let model = train(&train_set, labels, &cfg.hyper)?;
                    let test: Vec<WeightedVector> = (0..labeled.len())
                        .filter(|&i| !in_train[i])
                        .map(|i| vectors[s][i].clone())
                        .collect();
                    Ok(model.accuracy(&test, labels))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    let mut cells = vec![vec![Vec::with_capacity(cfg.runs); cfg.sizes.len()]; cfg.schemes.len()];
    for (&(j, _), accs) in jobs.iter().zip(results) {
        for (s, acc) in accs.into_iter().enumerate() {
            cells[s][j].push(acc);
        }
    }
    Ok(AccuracyGrid { schemes: cfg.schemes.clone(), sizes: cfg.sizes.clone(), cells })
}
