//! The 81-classifier grid and vote-combined ensembles.
//!
//! One classifier is trained per window spec. Each of the nine range
//! category pairs contributes its most accurate classifier (measured on the
//! devtest split) to the default ensemble; the vote rule — a
//! [`VoteStrategy`] looked up by name — decides how member ballots combine.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::corpus::{Corpus, Instance};
use crate::error::{Error, Result};
use crate::features::{grid_specs, RangeCategory, WindowSpec};
use crate::naive_bayes::{hex_sha256, NBModel, ScoringMode};
use crate::vote::{vote_strategy, MemberBallot, VoteStrategy};

const MANIFEST_MAGIC: &str = "wsd-ensemble v1";

/// One trained grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GridEntry {
    pub devtest_accuracy: f64,
    pub model: NBModel,
}

impl GridEntry {
    pub fn spec(&self) -> WindowSpec {
        self.model.spec()
    }
}

/// All 81 classifiers for one training split, in canonical grid order, each
/// carrying its devtest accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierGrid {
    entries: Vec<GridEntry>,
}

impl ClassifierGrid {
    /// Trains one model per window spec on `train` and measures each on
    /// `devtest`. The two splits must be disjoint by instance id and share a
    /// sense inventory. Training runs in parallel across specs; the result
    /// is identical to sequential execution.
    pub fn train(
        train: &Corpus,
        devtest: &Corpus,
        epsilon: f64,
        scoring: ScoringMode,
    ) -> Result<ClassifierGrid> {
        if train.is_empty() || devtest.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        if train.sense_inventory() != devtest.sense_inventory() {
            return Err(Error::SplitContamination(
                "train and devtest corpora do not share a sense inventory".into(),
            ));
        }
        let train_ids: HashSet<&str> = train.instances().iter().map(|i| i.id()).collect();
        if let Some(shared) = devtest
            .instances()
            .iter()
            .find(|i| train_ids.contains(i.id()))
        {
            return Err(Error::SplitContamination(format!(
                "instance `{}` appears in both train and devtest",
                shared.id()
            )));
        }

        let gold: Vec<usize> = devtest
            .instances()
            .iter()
            .map(|inst| {
                devtest
                    .sense_index(inst.sense())
                    .expect("instance senses are inventory members")
            })
            .collect();

        let entries: Vec<GridEntry> = grid_specs()
            .into_par_iter()
            .map(|spec| -> Result<GridEntry> {
                let model = NBModel::train(train, spec, epsilon, scoring)?;
                let correct = devtest
                    .instances()
                    .iter()
                    .zip(&gold)
                    .filter(|(inst, &g)| model.classify(inst) == g)
                    .count();
                Ok(GridEntry {
                    devtest_accuracy: correct as f64 / devtest.len() as f64,
                    model,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassifierGrid { entries })
    }

    /// Builds a grid from pre-trained entries. They must cover all 81 specs
    /// in canonical grid order.
    pub fn from_entries(entries: Vec<GridEntry>) -> Result<ClassifierGrid> {
        let expected = grid_specs();
        if entries.len() != expected.len() {
            return Err(Error::IncompleteGrid(format!(
                "expected 81 grid entries, got {}",
                entries.len()
            )));
        }
        for (entry, want) in entries.iter().zip(expected) {
            if entry.spec() != want {
                return Err(Error::IncompleteGrid(format!(
                    "grid entry out of order: expected {want}, found {}",
                    entry.spec()
                )));
            }
        }
        Ok(ClassifierGrid { entries })
    }

    pub fn entries(&self) -> &[GridEntry] {
        &self.entries
    }

    pub fn entry(&self, spec: WindowSpec) -> Option<&GridEntry> {
        self.entries.iter().find(|e| e.spec() == spec)
    }
}

/// For each of the nine category pairs, the index of that pair's best grid
/// entry: maximal devtest accuracy, ties broken by the smallest total
/// window, then the smaller left size. Returned in canonical pair order
/// (left category major, narrow → wide).
pub fn best_per_category(grid: &ClassifierGrid) -> Vec<usize> {
    let mut selected = Vec::with_capacity(9);
    for lcat in RangeCategory::ALL {
        for rcat in RangeCategory::ALL {
            let mut best: Option<usize> = None;
            for (i, entry) in grid.entries().iter().enumerate() {
                if entry.spec().category_pair() != (lcat, rcat) {
                    continue;
                }
                best = Some(match best {
                    None => i,
                    Some(b) if strictly_better(entry, &grid.entries()[b]) => i,
                    Some(b) => b,
                });
            }
            selected.push(best.expect("the grid covers every category pair"));
        }
    }
    selected
}

fn strictly_better(a: &GridEntry, b: &GridEntry) -> bool {
    better_candidate(a.devtest_accuracy, a.spec(), b.devtest_accuracy, b.spec())
}

/// The selection preference order on (accuracy, spec): higher accuracy wins,
/// ties go to the smaller total window, then the smaller left size. Used for
/// per-category member selection and for the best-single baseline.
pub fn better_candidate(acc_a: f64, spec_a: WindowSpec, acc_b: f64, spec_b: WindowSpec) -> bool {
    if acc_a != acc_b {
        return acc_a > acc_b;
    }
    if spec_a.total() != spec_b.total() {
        return spec_a.total() < spec_b.total();
    }
    spec_a.left() < spec_b.left()
}

/// An ensemble member: a grid model plus the devtest accuracy that earned
/// its seat.
#[derive(Debug, Clone)]
pub struct Member {
    pub devtest_accuracy: f64,
    pub model: NBModel,
}

impl Member {
    pub fn spec(&self) -> WindowSpec {
        self.model.spec()
    }

    pub fn category(&self) -> (RangeCategory, RangeCategory) {
        self.spec().category_pair()
    }
}

/// A fixed set of member classifiers combined by a vote rule.
pub struct Ensemble {
    strategy: Box<dyn VoteStrategy>,
    members: Vec<Member>,
    senses: Vec<String>,
}

impl Ensemble {
    /// Assembles an ensemble, canonicalizing member order and checking the
    /// strategy's structural invariant. Members must agree on sense
    /// inventory, epsilon, and scoring mode.
    pub fn new(mut members: Vec<Member>, strategy: Box<dyn VoteStrategy>) -> Result<Ensemble> {
        let first = members
            .first()
            .ok_or_else(|| Error::IncompleteGrid("ensemble has no members".into()))?;
        let senses = first.model.senses().to_vec();
        let epsilon = first.model.epsilon();
        let scoring = first.model.scoring();
        for member in &members {
            if member.model.senses() != senses.as_slice()
                || member.model.epsilon() != epsilon
                || member.model.scoring() != scoring
            {
                return Err(Error::IncompleteGrid(format!(
                    "member {} was not trained like the others",
                    member.spec()
                )));
            }
        }
        // Canonical member order, so summed-score tie-breaks are independent
        // of the order members were supplied in.
        members.sort_by_key(|m| (m.category(), m.spec().left(), m.spec().right()));
        strategy.validate_members(&members)?;
        Ok(Ensemble {
            strategy,
            members,
            senses,
        })
    }

    /// Selects members from a trained grid according to the vote rule.
    pub fn from_grid(grid: &ClassifierGrid, strategy: Box<dyn VoteStrategy>) -> Result<Ensemble> {
        let members = strategy
            .select(grid)
            .into_iter()
            .map(|i| {
                let entry = &grid.entries()[i];
                Member {
                    devtest_accuracy: entry.devtest_accuracy,
                    model: entry.model.clone(),
                }
            })
            .collect();
        Ensemble::new(members, strategy)
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn senses(&self) -> &[String] {
        &self.senses
    }

    pub fn vote_rule(&self) -> String {
        self.strategy.name()
    }

    pub fn epsilon(&self) -> f64 {
        self.members[0].model.epsilon()
    }

    pub fn scoring(&self) -> ScoringMode {
        self.members[0].model.scoring()
    }

    /// Every member's ballot for `inst`, in canonical member order.
    pub fn ballots(&self, inst: &Instance) -> Vec<MemberBallot> {
        self.members
            .iter()
            .map(|member| {
                let features = member.model.features_for(inst);
                let log_joints = member.model.log_joints(&features);
                let vote = member.model.decide(&log_joints);
                MemberBallot { vote, log_joints }
            })
            .collect()
    }

    /// The ensemble's sense decision for `inst`, as an index into
    /// [`senses`](Self::senses).
    pub fn vote(&self, inst: &Instance) -> usize {
        let ballots = self.ballots(inst);
        self.strategy.decide(&ballots, self.senses.len())
    }

    pub fn vote_label(&self, inst: &Instance) -> &str {
        &self.senses[self.vote(inst)]
    }

    /// Elementwise [`vote`](Self::vote); order-preserving.
    pub fn classify_batch(&self, instances: &[Instance]) -> Vec<usize> {
        instances.iter().map(|inst| self.vote(inst)).collect()
    }
}

fn member_file_name(spec: WindowSpec) -> String {
    format!("member_{}_{}.model", spec.left(), spec.right())
}

/// Writes `ensemble` into `dir`: one model file per member plus an
/// `ensemble.manifest` naming the vote rule and, per member, its category,
/// spec, devtest accuracy, and model file. Returns the manifest path.
pub fn save_ensemble(ensemble: &Ensemble, dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let mut manifest = String::new();
    manifest.push_str(MANIFEST_MAGIC);
    manifest.push('\n');
    let _ = writeln!(manifest, "vote\t{}", ensemble.vote_rule());
    let _ = writeln!(manifest, "members\t{}", ensemble.members().len());
    for member in ensemble.members() {
        let file = member_file_name(member.spec());
        member.model.save(dir.join(&file))?;
        let (lcat, rcat) = member.category();
        let _ = writeln!(
            manifest,
            "member\t{lcat}\t{rcat}\t{}\t{}\t{:.16e}\t{file}",
            member.spec().left(),
            member.spec().right(),
            member.devtest_accuracy,
        );
    }
    let checksum = hex_sha256(manifest.as_bytes());
    let _ = writeln!(manifest, "checksum\tsha256:{checksum}");
    let path = dir.join("ensemble.manifest");
    std::fs::write(&path, manifest)?;
    Ok(path)
}

/// Loads an ensemble saved by [`save_ensemble`]. Member model files are
/// resolved relative to the manifest's directory and each is checked
/// against its manifest row.
pub fn load_ensemble(manifest_path: &Path) -> Result<Ensemble> {
    let text = std::fs::read_to_string(manifest_path)?;
    let dir = manifest_path.parent().unwrap_or_else(|| Path::new("."));

    let mut lines = text.lines();
    let magic = lines
        .next()
        .ok_or_else(|| Error::Manifest("empty manifest".into()))?;
    if magic != MANIFEST_MAGIC {
        return Err(Error::Manifest(format!(
            "unsupported manifest version `{magic}`"
        )));
    }
    let marker = "\nchecksum\t";
    let marker_pos = text
        .rfind(marker)
        .ok_or_else(|| Error::Manifest("manifest missing its checksum line".into()))?;
    let stored = text[marker_pos + 1..]
        .trim_end()
        .strip_prefix("checksum\tsha256:")
        .ok_or_else(|| Error::Manifest("malformed manifest checksum line".into()))?;
    let computed = hex_sha256(text[..marker_pos + 1].as_bytes());
    if stored != computed {
        return Err(Error::Manifest(format!(
            "manifest checksum mismatch: stored {stored}, computed {computed}"
        )));
    }

    let vote_line = lines
        .next()
        .ok_or_else(|| Error::Manifest("manifest missing vote line".into()))?;
    let vote_name = vote_line
        .strip_prefix("vote\t")
        .ok_or_else(|| Error::Manifest(format!("expected vote line, found `{vote_line}`")))?;
    let strategy = vote_strategy(vote_name)?;

    let count_line = lines
        .next()
        .ok_or_else(|| Error::Manifest("manifest missing member count".into()))?;
    let member_count: usize = count_line
        .strip_prefix("members\t")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Manifest(format!("bad member count line `{count_line}`")))?;

    let mut members = Vec::with_capacity(member_count);
    for _ in 0..member_count {
        let row = lines
            .next()
            .ok_or_else(|| Error::Manifest("manifest member table truncated".into()))?;
        let fields: Vec<&str> = row.split('\t').collect();
        if fields.len() != 7 || fields[0] != "member" {
            return Err(Error::Manifest(format!("malformed member row `{row}`")));
        }
        let lcat = RangeCategory::from_name(fields[1])?;
        let rcat = RangeCategory::from_name(fields[2])?;
        let left: usize = fields[3]
            .parse()
            .map_err(|_| Error::Manifest(format!("bad window size `{}`", fields[3])))?;
        let right: usize = fields[4]
            .parse()
            .map_err(|_| Error::Manifest(format!("bad window size `{}`", fields[4])))?;
        let spec = WindowSpec::new(left, right)?;
        let devtest_accuracy: f64 = fields[5]
            .parse()
            .map_err(|_| Error::Manifest(format!("bad accuracy `{}`", fields[5])))?;
        let model = NBModel::load(dir.join(fields[6]))?;
        if model.spec() != spec {
            return Err(Error::Manifest(format!(
                "model file `{}` holds spec {}, manifest row says {spec}",
                fields[6],
                model.spec()
            )));
        }
        if spec.category_pair() != (lcat, rcat) {
            return Err(Error::Manifest(format!(
                "member {spec} does not belong to category ({lcat},{rcat})"
            )));
        }
        members.push(Member {
            devtest_accuracy,
            model,
        });
    }
    match lines.next() {
        Some(line) if line.starts_with("checksum\t") => {}
        Some(line) => {
            return Err(Error::Manifest(format!(
                "unexpected manifest line `{line}`"
            )))
        }
        None => return Err(Error::Manifest("manifest missing its checksum line".into())),
    }
    if lines.next().is_some() {
        return Err(Error::Manifest("content after manifest checksum line".into()));
    }

    Ensemble::new(members, strategy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::normalize;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const EPS: f64 = 1e-6;

    fn inst(id: &str, sense: &str, words: &str, target: usize) -> Instance {
        Instance::new(id, sense, normalize(words), target).unwrap()
    }

    /// A grid whose models are all trained on one tiny corpus but whose
    /// devtest accuracies are injected, for exercising selection logic.
    fn grid_with_accuracies(acc_of: impl Fn(WindowSpec) -> f64) -> ClassifierGrid {
        let corpus = Corpus::new(
            "t",
            vec![inst("i1", "A", "x t y", 1), inst("i2", "B", "u t v", 1)],
        )
        .unwrap();
        let entries = grid_specs()
            .into_iter()
            .map(|s| GridEntry {
                devtest_accuracy: acc_of(s),
                model: NBModel::train(&corpus, s, EPS, ScoringMode::Bernoulli).unwrap(),
            })
            .collect();
        ClassifierGrid::from_entries(entries).unwrap()
    }

    fn selected_specs(grid: &ClassifierGrid) -> Vec<(usize, usize)> {
        best_per_category(grid)
            .into_iter()
            .map(|i| {
                let s = grid.entries()[i].spec();
                (s.left(), s.right())
            })
            .collect()
    }

    #[test]
    fn grid_trains_all_81_specs_in_canonical_order() {
        let corpus = crate::synthetic::separable_fixture(30, 5);
        let (train, devtest) = split_fixture(&corpus);
        let grid = ClassifierGrid::train(&train, &devtest, EPS, ScoringMode::Bernoulli).unwrap();
        assert_eq!(grid.entries().len(), 81);
        for (entry, want) in grid.entries().iter().zip(grid_specs()) {
            assert_eq!(entry.spec(), want);
            assert!((0.0..=1.0).contains(&entry.devtest_accuracy));
            assert_eq!(entry.model.epsilon(), EPS);
        }
    }

    /// First 2/3 train, last 1/3 devtest, disjoint by construction.
    fn split_fixture(corpus: &Corpus) -> (Corpus, Corpus) {
        let cut = corpus.len() * 2 / 3;
        let train: Vec<usize> = (0..cut).collect();
        let devtest: Vec<usize> = (cut..corpus.len()).collect();
        (
            corpus.subset_indices(&train).unwrap(),
            corpus.subset_indices(&devtest).unwrap(),
        )
    }

    #[test]
    fn overlapping_splits_are_contamination() {
        let corpus = crate::synthetic::separable_fixture(10, 5);
        let err = ClassifierGrid::train(&corpus, &corpus, EPS, ScoringMode::Bernoulli).unwrap_err();
        assert!(matches!(err, Error::SplitContamination(_)));
    }

    #[test]
    fn split_inventories_must_match() {
        let a = Corpus::new("t", vec![inst("i1", "A", "x t", 1)]).unwrap();
        let b = Corpus::new("t", vec![inst("i2", "B", "y t", 1)]).unwrap();
        let err = ClassifierGrid::train(&a, &b, EPS, ScoringMode::Bernoulli).unwrap_err();
        assert!(matches!(err, Error::SplitContamination(_)));
    }

    #[test]
    fn partial_grid_is_rejected() {
        let corpus = Corpus::new("t", vec![inst("i1", "A", "x t", 1)]).unwrap();
        let entries: Vec<GridEntry> = grid_specs()
            .into_iter()
            .take(80)
            .map(|s| GridEntry {
                devtest_accuracy: 0.5,
                model: NBModel::train(&corpus, s, EPS, ScoringMode::Bernoulli).unwrap(),
            })
            .collect();
        assert!(matches!(
            ClassifierGrid::from_entries(entries),
            Err(Error::IncompleteGrid(_))
        ));
    }

    #[test]
    fn selection_reproduces_a_published_style_accuracy_surface() {
        // A realistic six-sense devtest surface. Rows are right window sizes
        // descending (50 → 0), columns left sizes ascending (0 → 50). The
        // expected members are the per-category argmaxes under the
        // smallest-total-window tie-break.
        const SURFACE: [[f64; 9]; 9] = [
            [0.63, 0.73, 0.80, 0.82, 0.83, 0.83, 0.83, 0.83, 0.83],
            [0.63, 0.74, 0.80, 0.82, 0.84, 0.83, 0.83, 0.83, 0.83],
            [0.62, 0.75, 0.81, 0.82, 0.83, 0.83, 0.83, 0.83, 0.84],
            [0.61, 0.75, 0.80, 0.81, 0.82, 0.82, 0.82, 0.82, 0.83],
            [0.60, 0.73, 0.80, 0.82, 0.82, 0.82, 0.82, 0.82, 0.82],
            [0.58, 0.73, 0.79, 0.82, 0.83, 0.83, 0.82, 0.81, 0.82],
            [0.53, 0.71, 0.79, 0.81, 0.82, 0.82, 0.81, 0.81, 0.81],
            [0.42, 0.68, 0.78, 0.79, 0.80, 0.79, 0.80, 0.81, 0.81],
            [0.14, 0.58, 0.73, 0.77, 0.79, 0.79, 0.79, 0.79, 0.80],
        ];
        let sizes = crate::features::WINDOW_SIZES;
        let grid = grid_with_accuracies(|s| {
            let row = 8 - sizes.iter().position(|&v| v == s.right()).unwrap();
            let col = sizes.iter().position(|&v| v == s.left()).unwrap();
            SURFACE[row][col]
        });
        assert_eq!(
            selected_specs(&grid),
            [
                (2, 2),
                (2, 4),
                (2, 10),
                (4, 2),
                (4, 3),
                (4, 25),
                (10, 2),
                (50, 5),
                (50, 10),
            ]
        );
    }

    #[test]
    fn flat_grid_selects_the_smallest_windows() {
        let grid = grid_with_accuracies(|_| 0.5);
        assert_eq!(
            selected_specs(&grid),
            [
                (0, 0),
                (0, 3),
                (0, 10),
                (3, 0),
                (3, 3),
                (3, 10),
                (10, 0),
                (10, 3),
                (10, 10),
            ]
        );
    }

    #[test]
    fn unique_maximum_wins_whatever_its_size() {
        let grid = grid_with_accuracies(|s| {
            if (s.left(), s.right()) == (50, 50) {
                0.9
            } else {
                0.5
            }
        });
        assert_eq!(selected_specs(&grid)[8], (50, 50));
    }

    #[test]
    fn no_same_category_entry_beats_its_selected_member() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..25 {
            let accs: Vec<f64> = (0..81).map(|_| rng.gen_range(0.0..1.0)).collect();
            let sizes = crate::features::WINDOW_SIZES;
            let grid = grid_with_accuracies(|s| {
                let li = sizes.iter().position(|&v| v == s.left()).unwrap();
                let ri = sizes.iter().position(|&v| v == s.right()).unwrap();
                accs[li * 9 + ri]
            });
            for &chosen in &best_per_category(&grid) {
                let member = &grid.entries()[chosen];
                for entry in grid.entries() {
                    if entry.spec().category_pair() == member.spec().category_pair() {
                        assert!(entry.devtest_accuracy <= member.devtest_accuracy);
                    }
                }
            }
        }
    }

    #[test]
    fn majority_ensemble_covers_every_category_once() {
        let corpus = crate::synthetic::separable_fixture(30, 5);
        let (train, devtest) = split_fixture(&corpus);
        let grid = ClassifierGrid::train(&train, &devtest, EPS, ScoringMode::Bernoulli).unwrap();
        let ensemble = Ensemble::from_grid(&grid, vote_strategy("majority").unwrap()).unwrap();
        assert_eq!(ensemble.members().len(), 9);
        let mut pairs: Vec<_> = ensemble.members().iter().map(Member::category).collect();
        pairs.dedup();
        assert_eq!(pairs.len(), 9, "every category pair appears exactly once");
    }

    #[test]
    fn ablation_modes_pick_their_member_sets() {
        let corpus = crate::synthetic::separable_fixture(30, 5);
        let (train, devtest) = split_fixture(&corpus);
        let grid = ClassifierGrid::train(&train, &devtest, EPS, ScoringMode::Bernoulli).unwrap();

        let all = Ensemble::from_grid(&grid, vote_strategy("all81").unwrap()).unwrap();
        assert_eq!(all.members().len(), 81);

        let cell =
            Ensemble::from_grid(&grid, vote_strategy("category=medium,wide").unwrap()).unwrap();
        assert_eq!(cell.members().len(), 9);
        for member in cell.members() {
            assert_eq!(
                member.category(),
                (RangeCategory::Medium, RangeCategory::Wide)
            );
            assert!(member.spec().left() >= 3 && member.spec().left() <= 5);
            assert!(member.spec().right() >= 10);
        }
    }

    #[test]
    fn identical_members_degenerate_to_the_single_model() {
        // Every instance is a bare target token, so every window is empty
        // and all 81 models collapse to the same priors-only behavior.
        let make = |ids: std::ops::Range<usize>, sense: &str| -> Vec<Instance> {
            ids.map(|i| inst(&format!("{sense}{i}"), sense, "t", 0)).collect()
        };
        let mut instances = make(0..6, "big");
        instances.extend(make(0..2, "small"));
        let corpus = Corpus::new("t", instances).unwrap();
        let (train, devtest) = split_fixture(&corpus);
        let grid = ClassifierGrid::train(&train, &devtest, EPS, ScoringMode::Bernoulli).unwrap();
        let single = grid.entries()[0].model.clone();
        let ensemble = Ensemble::from_grid(&grid, vote_strategy("majority").unwrap()).unwrap();
        for probe in corpus.instances() {
            assert_eq!(ensemble.vote(probe), single.classify(probe));
        }
    }

    #[test]
    fn member_order_does_not_change_votes() {
        let corpus = crate::synthetic::mixed_signal_fixture(60, 9);
        let (train, devtest) = split_fixture(&corpus);
        let grid = ClassifierGrid::train(&train, &devtest, EPS, ScoringMode::Bernoulli).unwrap();
        let forward = Ensemble::from_grid(&grid, vote_strategy("majority").unwrap()).unwrap();

        let mut reversed_members: Vec<Member> = forward.members().to_vec();
        reversed_members.reverse();
        let reversed = Ensemble::new(reversed_members, vote_strategy("majority").unwrap()).unwrap();

        for probe in devtest.instances() {
            assert_eq!(forward.vote(probe), reversed.vote(probe));
        }
    }

    #[test]
    fn winner_always_meets_the_plurality_bound() {
        let corpus = crate::synthetic::mixed_signal_fixture(60, 10);
        let (train, devtest) = split_fixture(&corpus);
        let grid = ClassifierGrid::train(&train, &devtest, EPS, ScoringMode::Bernoulli).unwrap();
        let ensemble = Ensemble::from_grid(&grid, vote_strategy("majority").unwrap()).unwrap();
        let n_members = ensemble.members().len();
        let n_senses = ensemble.senses().len();
        for probe in devtest.instances() {
            let winner = ensemble.vote(probe);
            let votes = ensemble
                .ballots(probe)
                .iter()
                .filter(|b| b.vote == winner)
                .count();
            assert!(votes * n_senses >= n_members, "{votes} votes is below the bound");
        }
    }

    #[test]
    fn batch_classification_is_elementwise() {
        let corpus = crate::synthetic::separable_fixture(20, 6);
        let (train, devtest) = split_fixture(&corpus);
        let grid = ClassifierGrid::train(&train, &devtest, EPS, ScoringMode::Bernoulli).unwrap();
        let ensemble = Ensemble::from_grid(&grid, vote_strategy("majority").unwrap()).unwrap();

        assert!(ensemble.classify_batch(&[]).is_empty());
        let instances: Vec<Instance> = devtest.instances().to_vec();
        let batch = ensemble.classify_batch(&instances);
        assert_eq!(batch.len(), instances.len());
        for (inst, &got) in instances.iter().zip(&batch) {
            assert_eq!(got, ensemble.vote(inst));
        }
        let mut reversed = instances.clone();
        reversed.reverse();
        let mut rebatched = ensemble.classify_batch(&reversed);
        rebatched.reverse();
        assert_eq!(rebatched, batch);
    }

    #[test]
    fn manifest_round_trip_preserves_behavior() {
        let corpus = crate::synthetic::mixed_signal_fixture(60, 12);
        let (train, devtest) = split_fixture(&corpus);
        let grid = ClassifierGrid::train(&train, &devtest, EPS, ScoringMode::Bernoulli).unwrap();
        let ensemble = Ensemble::from_grid(&grid, vote_strategy("majority").unwrap()).unwrap();

        let dir = tempfile::tempdir().unwrap();
        let manifest = save_ensemble(&ensemble, dir.path()).unwrap();
        let loaded = load_ensemble(&manifest).unwrap();

        assert_eq!(loaded.vote_rule(), "majority");
        assert_eq!(loaded.members().len(), 9);
        for (a, b) in ensemble.members().iter().zip(loaded.members()) {
            assert_eq!(a.spec(), b.spec());
            assert_eq!(a.devtest_accuracy, b.devtest_accuracy);
            assert_eq!(a.model, b.model);
        }
        for probe in devtest.instances() {
            assert_eq!(ensemble.vote(probe), loaded.vote(probe));
        }
    }

    #[test]
    fn manifest_tampering_is_rejected() {
        let corpus = crate::synthetic::separable_fixture(20, 13);
        let (train, devtest) = split_fixture(&corpus);
        let grid = ClassifierGrid::train(&train, &devtest, EPS, ScoringMode::Bernoulli).unwrap();
        let ensemble = Ensemble::from_grid(&grid, vote_strategy("majority").unwrap()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let manifest = save_ensemble(&ensemble, dir.path()).unwrap();

        let original = std::fs::read_to_string(&manifest).unwrap();

        // Flipped vote rule without updating the checksum.
        std::fs::write(&manifest, original.replace("majority", "weighted")).unwrap();
        assert!(matches!(load_ensemble(&manifest), Err(Error::Manifest(_))));

        // Deleted member model file.
        std::fs::write(&manifest, &original).unwrap();
        let first_member = member_file_name(ensemble.members()[0].spec());
        std::fs::remove_file(dir.path().join(first_member)).unwrap();
        assert!(matches!(load_ensemble(&manifest), Err(Error::Io(_))));
    }

    #[test]
    fn manifest_rejects_a_wrong_version() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ensemble.manifest");
        std::fs::write(&path, "wsd-ensemble v0\nvote\tmajority\n").unwrap();
        assert!(matches!(load_ensemble(&path), Err(Error::Manifest(_))));
    }
}
