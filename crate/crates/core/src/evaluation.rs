//! The cross-validation protocol: fold planning, accuracy, McNemar's test,
//! and the end-to-end experiment loop.
//!
//! [`run_experiment`] is the heart of the crate. For each of `k` rounds it
//! trains the full 81-classifier grid on `k-1` folds, scores every
//! classifier on the round's devtest half, selects the nine ensemble
//! members, and evaluates both the ensemble and the per-spec classifiers on
//! the round's test half. Devtest accuracies drive all selection; test
//! halves are touched only for final measurement.
//!
//! All randomness is drawn up front in [`make_fold_plan`], so the
//! experiment itself is free to parallelize without affecting results.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::ensemble::{better_candidate, ClassifierGrid, Ensemble};
use crate::error::{Error, Result};
use crate::features::{grid_specs, WINDOW_SIZES};
use crate::naive_bayes::ScoringMode;
use crate::vote::vote_strategy;

/// How the McNemar verdict is computed: the continuity-corrected chi-square
/// approximation, or the exact two-sided binomial test (preferable when the
/// discordant-pair count is small, say under 25).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McNemarMethod {
    Chi2,
    Exact,
}

impl McNemarMethod {
    pub fn parse(name: &str) -> Result<McNemarMethod> {
        match name {
            "chi2" => Ok(McNemarMethod::Chi2),
            "exact" => Ok(McNemarMethod::Exact),
            other => Err(Error::Parse {
                line: 0,
                message: format!("unknown mcnemar method `{other}` (expected chi2 or exact)"),
            }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            McNemarMethod::Chi2 => "chi2",
            McNemarMethod::Exact => "exact",
        }
    }
}

/// Settings for one experiment run. `seed` has no default on purpose:
/// every result should be tied to an explicit seed.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub k: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub vote_rule: String,
    pub scoring: ScoringMode,
    /// Stratify the devtest/test halving by sense instead of splitting the
    /// shuffled fold down the middle.
    pub stratify_halves: bool,
    pub mcnemar_method: McNemarMethod,
}

impl RunConfig {
    /// The conventional settings: k=5, epsilon=1e-6, majority voting,
    /// Bernoulli scoring, unstratified halves, chi-square McNemar.
    pub fn new(seed: u64) -> RunConfig {
        RunConfig {
            k: 5,
            seed,
            epsilon: 1e-6,
            vote_rule: "majority".to_string(),
            scoring: ScoringMode::Bernoulli,
            stratify_halves: false,
            mcnemar_method: McNemarMethod::Chi2,
        }
    }
}

/// A complete, reusable description of one cross-validation split: which
/// fold each instance belongs to, and each fold's division into a devtest
/// half (member selection) and a test half (final measurement).
///
/// Id lists keep the shuffled order they were drawn in; every corpus
/// subset built from the plan inherits that order, which pins down the
/// whole experiment once the seed is fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    k: usize,
    seed: u64,
    assignments: BTreeMap<String, usize>,
    fold_ids: Vec<Vec<String>>,
    devtest_ids: Vec<Vec<String>>,
    test_ids: Vec<Vec<String>>,
}

impl FoldPlan {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Fold index for an instance id, if the id is part of the plan.
    pub fn fold_of(&self, id: &str) -> Option<usize> {
        self.assignments.get(id).copied()
    }

    /// All ids of fold `f`, devtest half first.
    pub fn fold_ids(&self, f: usize) -> &[String] {
        &self.fold_ids[f]
    }

    pub fn devtest_ids(&self, f: usize) -> &[String] {
        &self.devtest_ids[f]
    }

    pub fn test_ids(&self, f: usize) -> &[String] {
        &self.test_ids[f]
    }

    /// Training ids for round `f`: every fold except `f`, in fold order.
    pub fn train_ids(&self, f: usize) -> Vec<String> {
        let mut ids = Vec::new();
        for (g, fold) in self.fold_ids.iter().enumerate() {
            if g != f {
                ids.extend(fold.iter().cloned());
            }
        }
        ids
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        self.fold_ids.iter().map(|f| f.len()).collect()
    }
}

/// Splits the corpus into `k` folds of near-equal size (the first `n % k`
/// folds get the extra instance) and halves each fold into devtest and test
/// by cutting the shuffled fold in the middle; odd folds give the extra
/// instance to devtest.
pub fn make_fold_plan(corpus: &Corpus, k: usize, seed: u64) -> Result<FoldPlan> {
    make_fold_plan_with(corpus, k, seed, false)
}

/// [`make_fold_plan`] with optional sense-stratified halving: each fold's
/// instances of one sense are split as evenly as possible between the two
/// halves, odd remainders alternating starting with devtest.
pub fn make_fold_plan_with(
    corpus: &Corpus,
    k: usize,
    seed: u64,
    stratify_halves: bool,
) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::InvalidFoldCount(k));
    }
    let n = corpus.len();
    if n < 2 * k {
        return Err(Error::TooFewInstances { instances: n, k });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let base = n / k;
    let extra = n % k;
    let mut fold_ids = Vec::with_capacity(k);
    let mut cursor = 0usize;
    for f in 0..k {
        let size = base + usize::from(f < extra);
        let ids: Vec<String> = order[cursor..cursor + size]
            .iter()
            .map(|&i| corpus.instances()[i].id().to_string())
            .collect();
        cursor += size;
        fold_ids.push(ids);
    }

    let mut devtest_ids = Vec::with_capacity(k);
    let mut test_ids = Vec::with_capacity(k);
    for ids in &fold_ids {
        let (devtest, test) = if stratify_halves {
            halve_stratified(corpus, ids)
        } else {
            let cut = ids.len().div_ceil(2);
            (ids[..cut].to_vec(), ids[cut..].to_vec())
        };
        devtest_ids.push(devtest);
        test_ids.push(test);
    }

    let mut assignments = BTreeMap::new();
    for (f, ids) in fold_ids.iter().enumerate() {
        for id in ids {
            assignments.insert(id.clone(), f);
        }
    }

    Ok(FoldPlan {
        k,
        seed,
        assignments,
        fold_ids,
        devtest_ids,
        test_ids,
    })
}

/// Sense-stratified halving of one fold's ids (already in shuffled order):
/// each sense's run is cut in half, odd remainders alternating between the
/// halves starting with devtest, which keeps both the per-sense and the
/// overall size difference at most 1.
fn halve_stratified(corpus: &Corpus, ids: &[String]) -> (Vec<String>, Vec<String>) {
    let mut by_sense: BTreeMap<usize, Vec<&String>> = BTreeMap::new();
    let lookup: BTreeMap<&str, usize> = corpus
        .instances()
        .iter()
        .map(|inst| {
            (
                inst.id(),
                corpus
                    .sense_index(inst.sense())
                    .expect("instance senses are inventory members"),
            )
        })
        .collect();
    for id in ids {
        by_sense.entry(lookup[id.as_str()]).or_default().push(id);
    }

    let mut devtest = Vec::new();
    let mut test = Vec::new();
    let mut extra_to_devtest = true;
    for group in by_sense.values() {
        let mut cut = group.len() / 2;
        if group.len() % 2 == 1 {
            if extra_to_devtest {
                cut += 1;
            }
            extra_to_devtest = !extra_to_devtest;
        }
        devtest.extend(group[..cut].iter().map(|id| (*id).clone()));
        test.extend(group[cut..].iter().map(|id| (*id).clone()));
    }
    (devtest, test)
}

/// Fraction of positions where the two sequences agree.
pub fn accuracy<T: PartialEq>(predicted: &[T], gold: &[T]) -> Result<f64> {
    if predicted.len() != gold.len() {
        return Err(Error::LengthMismatch {
            predicted: predicted.len(),
            gold: gold.len(),
        });
    }
    if gold.is_empty() {
        return Err(Error::EmptySequence);
    }
    let matches = predicted.iter().zip(gold).filter(|(p, g)| p == g).count();
    Ok(matches as f64 / gold.len() as f64)
}

/// The two discordant-pair counts behind McNemar's test: `b` = positions
/// where `a` is correct and `b` wrong, `c` = the reverse.
fn discordant_counts<T: PartialEq>(
    preds_a: &[T],
    preds_b: &[T],
    gold: &[T],
) -> Result<(usize, usize)> {
    if preds_a.len() != gold.len() {
        return Err(Error::LengthMismatch {
            predicted: preds_a.len(),
            gold: gold.len(),
        });
    }
    if preds_b.len() != gold.len() {
        return Err(Error::LengthMismatch {
            predicted: preds_b.len(),
            gold: gold.len(),
        });
    }
    let mut b = 0usize;
    let mut c = 0usize;
    for ((pa, pb), g) in preds_a.iter().zip(preds_b).zip(gold) {
        match (pa == g, pb == g) {
            (true, false) => b += 1,
            (false, true) => c += 1,
            _ => {}
        }
    }
    Ok((b, c))
}

/// Continuity-corrected McNemar statistic for the given discordant counts:
/// `(|b - c| - 1)^2 / (b + c)`, significant at p = .01 iff it exceeds
/// 6.635 (the chi-square 99th percentile at one degree of freedom). No
/// discordant pairs at all means no evidence: statistic 0, not significant.
pub fn mcnemar_counts(b: usize, c: usize) -> (f64, bool) {
    if b + c == 0 {
        return (0.0, false);
    }
    let diff = (b as f64 - c as f64).abs();
    let statistic = (diff - 1.0).powi(2) / (b + c) as f64;
    (statistic, statistic > 6.635)
}

/// McNemar's test (chi-square approximation with continuity correction)
/// comparing two prediction sequences against gold labels.
pub fn mcnemar<T: PartialEq>(preds_a: &[T], preds_b: &[T], gold: &[T]) -> Result<(f64, bool)> {
    let (b, c) = discordant_counts(preds_a, preds_b, gold)?;
    Ok(mcnemar_counts(b, c))
}

/// Exact two-sided binomial p-value for the given discordant counts:
/// under the null the `b + c` discordant pairs split Binomial(n, 1/2), so
/// `p = min(1, 2 * P(X <= min(b, c)))`. No discordant pairs → p = 1.
pub fn mcnemar_exact_counts(b: usize, c: usize) -> (f64, bool) {
    let n = b + c;
    if n == 0 {
        return (1.0, false);
    }
    // Work in log space: log C(n, i) - n log 2, accumulated by log-sum-exp,
    // so large n cannot underflow the tail sum.
    let lo = b.min(c);
    let mut log_term = -(n as f64) * std::f64::consts::LN_2; // i = 0
    let mut log_sum = log_term;
    for i in 0..lo {
        log_term += ((n - i) as f64 / (i + 1) as f64).ln();
        let (hi, l) = if log_sum >= log_term {
            (log_sum, log_term)
        } else {
            (log_term, log_sum)
        };
        log_sum = hi + (l - hi).exp().ln_1p();
    }
    let p = (2.0 * log_sum.exp()).min(1.0);
    (p, p < 0.01)
}

/// McNemar's test in its exact-binomial form; returns the two-sided
/// p-value and the verdict at p = .01.
pub fn mcnemar_exact<T: PartialEq>(
    preds_a: &[T],
    preds_b: &[T],
    gold: &[T],
) -> Result<(f64, bool)> {
    let (b, c) = discordant_counts(preds_a, preds_b, gold)?;
    Ok(mcnemar_exact_counts(b, c))
}

/// The significance comparison in an [`ExperimentReport`]: pooled ensemble
/// predictions versus pooled best-single predictions. The chi-square
/// statistic is always recorded; `p_value` is present when the exact
/// binomial method produced the verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McNemarReport {
    pub b: usize,
    pub c: usize,
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub significant_at_p01: bool,
    pub method: String,
}

/// Everything measured by one experiment run.
///
/// Grids are 9x9 row-major matrices indexed `[left][right]` over
/// `window_sizes` (so `mean_grid[2][5]` is the mean devtest accuracy of the
/// left-2/right-10 classifier). Headline accuracies are means over the `k`
/// fold rounds. Window specs appear as `[left, right]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub target_word: String,
    pub n_instances: usize,
    pub sense_inventory: Vec<String>,
    pub window_sizes: Vec<usize>,
    pub k: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub vote_rule: String,
    pub scoring: String,
    pub stratify_halves: bool,
    pub per_fold_grids: Vec<Vec<Vec<f64>>>,
    pub mean_grid: Vec<Vec<f64>>,
    pub std_grid: Vec<Vec<f64>>,
    /// Selected member specs per fold, in category order.
    pub fold_members: Vec<Vec<[usize; 2]>>,
    pub fold_ensemble_test_accuracy: Vec<f64>,
    pub fold_best_single_test_accuracy: Vec<f64>,
    pub ensemble_test_accuracy: f64,
    pub best_single_test_accuracy: f64,
    /// The spec with the highest mean devtest accuracy across folds.
    pub best_single_spec: [usize; 2],
    pub mcnemar: McNemarReport,
}

/// An [`ExperimentReport`] together with the per-fold ensembles that
/// produced it, ready to be saved or applied to new instances.
pub struct ExperimentRun {
    pub report: ExperimentReport,
    pub fold_ensembles: Vec<Ensemble>,
}

/// Runs the full protocol: k-fold cross-validation, 81 classifiers per
/// round, devtest-driven member selection, test-half measurement, and a
/// pooled McNemar comparison of the ensemble against the best single
/// classifier (the spec with the highest mean devtest accuracy).
pub fn run_experiment(corpus: &Corpus, config: &RunConfig) -> Result<ExperimentRun> {
    // Fail on any bad setting before the expensive part starts.
    vote_strategy(&config.vote_rule)?;
    let plan = make_fold_plan_with(corpus, config.k, config.seed, config.stratify_halves)?;
    let specs = grid_specs();
    let k = config.k;

    let mut per_fold_grids = Vec::with_capacity(k);
    let mut fold_members = Vec::with_capacity(k);
    let mut fold_ensembles = Vec::with_capacity(k);
    let mut fold_ensemble_test_accuracy = Vec::with_capacity(k);
    // One pooled test-prediction vector per window spec: the best single
    // classifier is only known once all folds are scored.
    let mut pooled_spec_preds: Vec<Vec<usize>> = vec![Vec::new(); specs.len()];
    let mut per_fold_spec_accuracy: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut pooled_ensemble_preds = Vec::new();
    let mut pooled_gold = Vec::new();
    let mut fold_gold_sizes = Vec::with_capacity(k);

    for f in 0..k {
        let train = corpus.subset(&plan.train_ids(f))?;
        let devtest = corpus.subset(plan.devtest_ids(f))?;
        let test = corpus.subset(plan.test_ids(f))?;

        let grid = ClassifierGrid::train(&train, &devtest, config.epsilon, config.scoring)?;

        per_fold_grids.push(grid_matrix(&grid));

        let ensemble = Ensemble::from_grid(&grid, vote_strategy(&config.vote_rule)?)?;
        fold_members.push(
            ensemble
                .members()
                .iter()
                .map(|m| [m.spec().left(), m.spec().right()])
                .collect::<Vec<_>>(),
        );

        let gold: Vec<usize> = test
            .instances()
            .iter()
            .map(|inst| {
                test.sense_index(inst.sense())
                    .expect("instance senses are inventory members")
            })
            .collect();

        let ensemble_preds = ensemble.classify_batch(test.instances());
        fold_ensemble_test_accuracy.push(accuracy(&ensemble_preds, &gold)?);

        // Test predictions for every spec, for the best-single baseline.
        let spec_preds: Vec<Vec<usize>> = grid
            .entries()
            .par_iter()
            .map(|entry| {
                test.instances()
                    .iter()
                    .map(|inst| entry.model.classify(inst))
                    .collect()
            })
            .collect();
        let mut fold_acc = Vec::with_capacity(specs.len());
        for (pooled, preds) in pooled_spec_preds.iter_mut().zip(&spec_preds) {
            fold_acc.push(accuracy(preds, &gold)?);
            pooled.extend_from_slice(preds);
        }
        per_fold_spec_accuracy.push(fold_acc);

        pooled_ensemble_preds.extend_from_slice(&ensemble_preds);
        fold_gold_sizes.push(gold.len());
        pooled_gold.extend_from_slice(&gold);
        fold_ensembles.push(ensemble);
    }

    let (mean_grid, std_grid) = summarize_grids(&per_fold_grids);

    // Best single classifier: highest mean devtest accuracy across folds,
    // same tie-breaks as member selection.
    let mean_devtest: Vec<f64> = (0..specs.len())
        .map(|i| {
            per_fold_grids
                .iter()
                .map(|g| g[i / 9][i % 9])
                .sum::<f64>()
                / k as f64
        })
        .collect();
    let mut best = 0usize;
    for i in 1..specs.len() {
        if better_candidate(mean_devtest[i], specs[i], mean_devtest[best], specs[best]) {
            best = i;
        }
    }
    let best_single_spec = specs[best];

    let fold_best_single_test_accuracy: Vec<f64> = per_fold_spec_accuracy
        .iter()
        .map(|fold_acc| fold_acc[best])
        .collect();

    let (b, c) = discordant_counts(&pooled_ensemble_preds, &pooled_spec_preds[best], &pooled_gold)?;
    let (statistic, chi2_significant) = mcnemar_counts(b, c);
    let mcnemar = match config.mcnemar_method {
        McNemarMethod::Chi2 => McNemarReport {
            b,
            c,
            statistic,
            p_value: None,
            significant_at_p01: chi2_significant,
            method: "chi2".to_string(),
        },
        McNemarMethod::Exact => {
            let (p, significant) = mcnemar_exact_counts(b, c);
            McNemarReport {
                b,
                c,
                statistic,
                p_value: Some(p),
                significant_at_p01: significant,
                method: "exact".to_string(),
            }
        }
    };

    let report = ExperimentReport {
        target_word: corpus.target_word().to_string(),
        n_instances: corpus.len(),
        sense_inventory: corpus.sense_inventory().to_vec(),
        window_sizes: WINDOW_SIZES.to_vec(),
        k,
        seed: config.seed,
        epsilon: config.epsilon,
        vote_rule: config.vote_rule.clone(),
        scoring: config.scoring.name().to_string(),
        stratify_halves: config.stratify_halves,
        per_fold_grids,
        mean_grid,
        std_grid,
        fold_members,
        ensemble_test_accuracy: mean(&fold_ensemble_test_accuracy),
        best_single_test_accuracy: mean(&fold_best_single_test_accuracy),
        fold_ensemble_test_accuracy,
        fold_best_single_test_accuracy,
        best_single_spec: [best_single_spec.left(), best_single_spec.right()],
        mcnemar,
    };

    Ok(ExperimentRun {
        report,
        fold_ensembles,
    })
}

/// Devtest accuracies of a trained grid as a 9x9 `[left][right]` matrix.
fn grid_matrix(grid: &ClassifierGrid) -> Vec<Vec<f64>> {
    let entries = grid.entries();
    (0..9)
        .map(|i| (0..9).map(|j| entries[i * 9 + j].devtest_accuracy).collect())
        .collect()
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Per-cell mean and sample standard deviation (divisor k-1) across folds.
fn summarize_grids(per_fold: &[Vec<Vec<f64>>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let k = per_fold.len();
    let mut mean_grid = vec![vec![0.0f64; 9]; 9];
    let mut std_grid = vec![vec![0.0f64; 9]; 9];
    for i in 0..9 {
        for j in 0..9 {
            let cells: Vec<f64> = per_fold.iter().map(|g| g[i][j]).collect();
            let m = mean(&cells);
            mean_grid[i][j] = m;
            std_grid[i][j] = if k > 1 {
                (cells.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (k - 1) as f64).sqrt()
            } else {
                0.0
            };
        }
    }
    (mean_grid, std_grid)
}

/// Position of a window size in [`WINDOW_SIZES`]; handy for indexing report
/// grids.
pub fn size_position(size: usize) -> Option<usize> {
    WINDOW_SIZES.iter().position(|&s| s == size)
}
