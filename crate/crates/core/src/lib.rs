//! Word sense disambiguation with ensembles of naive Bayes classifiers.
//!
//! The pipeline: parse a sense-tagged corpus ([`corpus`]), represent each
//! occurrence of the ambiguous word by the set of words in a window of
//! surrounding context ([`features`]), train one Bernoulli naive Bayes
//! classifier per window configuration ([`naive_bayes`]), pick the
//! strongest classifier in each region of the window grid on held-out data,
//! and let the selected members vote ([`ensemble`], [`vote`]). The
//! [`evaluation`] module runs the whole protocol under cross-validation and
//! [`report`] renders the results.
//!
//! Everything downstream of a seed is deterministic: reruns with the same
//! corpus, configuration, and seed produce byte-identical models and
//! reports.

pub mod corpus;
pub mod ensemble;
mod error;
pub mod evaluation;
pub mod features;
pub mod naive_bayes;
pub mod report;
pub mod synthetic;
pub mod vote;

pub use corpus::{
    normalize, normalize_word, parse_corpus, sense_distribution, uniform_subsample, Corpus,
    CorpusFormat, Instance, Token,
};
pub use ensemble::{
    best_per_category, load_ensemble, save_ensemble, ClassifierGrid, Ensemble, GridEntry, Member,
};
pub use error::{Error, Result};
pub use evaluation::{
    accuracy, make_fold_plan, make_fold_plan_with, mcnemar, mcnemar_exact, run_experiment,
    ExperimentReport, ExperimentRun, FoldPlan, McNemarMethod, McNemarReport, RunConfig,
};
pub use features::{extract, grid_specs, FeatureSet, RangeCategory, WindowSpec, WINDOW_SIZES};
pub use naive_bayes::{check_epsilon, NBModel, ScoringMode};
pub use report::{render_json, render_text, summary_line};
pub use vote::{vote_strategy, MemberBallot, VoteStrategy};
