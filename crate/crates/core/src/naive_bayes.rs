//! Smoothed Bernoulli Naive Bayes over binary word-presence features.
//!
//! One model per [`WindowSpec`]. Training estimates `p(S)` and `p(F_w=1|S)`
//! from frequency counts; every zero parameter is floored to a small
//! `epsilon` and every one is clipped to `1 − epsilon` so that scoring stays
//! finite. All scoring runs in log space: with 50-word windows the joint has
//! thousands of factors and raw products underflow.
//!
//! Scoring is canonical and reproducible: the joint sums factors in sorted
//! vocabulary order, so equal inputs give bit-identical scores on every
//! platform.

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::corpus::{Corpus, Instance, Token};
use crate::error::{Error, Result};
use crate::features::{extract, FeatureSet, WindowSpec};

const MODEL_MAGIC: &str = "wsd-model v1";

/// How the joint treats vocabulary words missing from a feature set.
///
/// `Bernoulli` (the default) multiplies in a `p(F_w=0|S)` factor for every
/// absent vocabulary word, so the joint ranges over all feature variables.
/// `Presence` scores only the words actually present; it exists as an
/// ablation switch, not as the default behavior.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoringMode {
    Bernoulli,
    Presence,
}

impl ScoringMode {
    pub fn parse(name: &str) -> Result<ScoringMode> {
        match name {
            "bernoulli" => Ok(ScoringMode::Bernoulli),
            "presence" => Ok(ScoringMode::Presence),
            other => Err(Error::ModelFormat(format!(
                "unknown scoring mode `{other}` (expected bernoulli or presence)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScoringMode::Bernoulli => "bernoulli",
            ScoringMode::Presence => "presence",
        }
    }
}

impl fmt::Display for ScoringMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Validates a smoothing constant: finite and strictly inside (0, 1).
pub fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon.is_finite() && 0.0 < epsilon && epsilon < 1.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    Ok(())
}

/// p(w present | s) for a word seen in `c` of `n_s` training windows,
/// clipped into [epsilon, 1 - epsilon]. A sense with no training instances
/// (c == n_s == 0) gets epsilon.
fn presence_prob(c: u32, n_s: u32, epsilon: f64) -> f64 {
    if c == 0 {
        epsilon
    } else if c == n_s {
        1.0 - epsilon
    } else {
        f64::from(c) / f64::from(n_s)
    }
}

/// p(w absent | s), computed from the complementary count rather than as
/// `1.0 - presence` so that clipped values come out as exactly epsilon and
/// 1 - epsilon instead of picking up cancellation error.
fn absence_prob(c: u32, n_s: u32, epsilon: f64) -> f64 {
    if c == 0 {
        1.0 - epsilon
    } else if c == n_s {
        epsilon
    } else {
        f64::from(n_s - c) / f64::from(n_s)
    }
}

/// A trained classifier for one window spec.
///
/// Immutable after training; safe to share across threads for concurrent
/// classification.
#[derive(Debug, Clone, PartialEq)]
pub struct NBModel {
    spec: WindowSpec,
    epsilon: f64,
    scoring: ScoringMode,
    /// Sense labels in training-corpus inventory order.
    senses: Vec<String>,
    /// n(s): training instances per sense.
    sense_counts: Vec<usize>,
    /// N: total training instances.
    total: usize,
    /// Smoothed p(S), renormalized to sum to 1.
    priors: Vec<f64>,
    log_priors: Vec<f64>,
    /// Every word observed in at least one training window, sorted.
    vocab: Vec<Token>,
    vocab_index: HashMap<Token, usize>,
    /// n(w,s): sense-s training instances whose window contains w.
    cond_counts: Vec<Vec<u32>>,
    /// Smoothed p(F_w=1|S), indexed [sense][word].
    cond: Vec<Vec<f64>>,
    log_present: Vec<Vec<f64>>,
    log_absent: Vec<Vec<f64>>,
}

impl NBModel {
    /// Estimates parameters from frequency counts over `corpus`.
    ///
    /// Priors are `n(s)/N`; any zero is floored to `epsilon` and only then is
    /// the vector renormalized (otherwise the exact count ratios are kept).
    /// Conditionals are `n(w,s)/n(s)` with zeros floored to
    /// `epsilon` and ones clipped to `1 − epsilon`. Senses in the corpus
    /// inventory but absent from the instances keep an `epsilon` prior, so a
    /// model trained on one data split stays comparable across splits.
    pub fn train(
        corpus: &Corpus,
        spec: WindowSpec,
        epsilon: f64,
        scoring: ScoringMode,
    ) -> Result<NBModel> {
        check_epsilon(epsilon)?;
        if corpus.is_empty() {
            return Err(Error::EmptyCorpus);
        }

        let senses: Vec<String> = corpus.sense_inventory().to_vec();
        let n_senses = senses.len();
        let sense_index: HashMap<&str, usize> = senses
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();

        let mut sense_counts = vec![0usize; n_senses];
        let mut windows: Vec<(usize, FeatureSet)> = Vec::with_capacity(corpus.len());
        let mut vocab_set: std::collections::BTreeSet<Token> = std::collections::BTreeSet::new();
        for inst in corpus.instances() {
            let s = sense_index[inst.sense()];
            sense_counts[s] += 1;
            let features = extract(inst, spec);
            vocab_set.extend(features.iter().cloned());
            windows.push((s, features));
        }
        let total = corpus.len();

        let vocab: Vec<Token> = vocab_set.into_iter().collect();
        let vocab_index: HashMap<Token, usize> = vocab
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();

        let mut cond_counts = vec![vec![0u32; vocab.len()]; n_senses];
        for (s, features) in &windows {
            for word in features {
                cond_counts[*s][vocab_index[word]] += 1;
            }
        }

        // Priors stay bit-exact n(s)/N unless a zero count forced flooring;
        // only then does the vector need renormalizing.
        let mut priors: Vec<f64> = sense_counts
            .iter()
            .map(|&n| {
                if n == 0 {
                    epsilon
                } else {
                    n as f64 / total as f64
                }
            })
            .collect();
        if sense_counts.contains(&0) {
            let prior_sum: f64 = priors.iter().sum();
            for p in &mut priors {
                *p /= prior_sum;
            }
        }
        let log_priors: Vec<f64> = priors.iter().map(|p| p.ln()).collect();

        let mut cond = vec![vec![0.0f64; vocab.len()]; n_senses];
        let mut log_present = vec![vec![0.0f64; vocab.len()]; n_senses];
        let mut log_absent = vec![vec![0.0f64; vocab.len()]; n_senses];
        for s in 0..n_senses {
            let n_s = sense_counts[s] as u32;
            for w in 0..vocab.len() {
                let c = cond_counts[s][w];
                cond[s][w] = presence_prob(c, n_s, epsilon);
                log_present[s][w] = cond[s][w].ln();
                log_absent[s][w] = absence_prob(c, n_s, epsilon).ln();
            }
        }

        Ok(NBModel {
            spec,
            epsilon,
            scoring,
            senses,
            sense_counts,
            total,
            priors,
            log_priors,
            vocab,
            vocab_index,
            cond_counts,
            cond,
            log_present,
            log_absent,
        })
    }

    pub fn spec(&self) -> WindowSpec {
        self.spec
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn scoring(&self) -> ScoringMode {
        self.scoring
    }

    pub fn senses(&self) -> &[String] {
        &self.senses
    }

    pub fn sense_counts(&self) -> &[usize] {
        &self.sense_counts
    }

    pub fn total_instances(&self) -> usize {
        self.total
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn vocab(&self) -> &[Token] {
        &self.vocab
    }

    /// Smoothed p(F_w=1|S=sense), or None for out-of-vocabulary words.
    pub fn conditional(&self, sense: usize, word: &str) -> Option<f64> {
        let w = *self.vocab_index.get(word)?;
        Some(self.cond[sense][w])
    }

    /// Raw n(w,s) sufficient statistic, or None for out-of-vocabulary words.
    pub fn conditional_count(&self, sense: usize, word: &str) -> Option<u32> {
        let w = *self.vocab_index.get(word)?;
        Some(self.cond_counts[sense][w])
    }

    /// The feature set this model's window sees in `inst`.
    pub fn features_for(&self, inst: &Instance) -> FeatureSet {
        extract(inst, self.spec)
    }

    /// Log joint `ln p(F_1..F_n, S=s)` for every sense, in inventory order.
    ///
    /// Factors accumulate in sorted vocabulary order. Words in `features`
    /// that the model never saw contribute nothing.
    pub fn log_joints(&self, features: &FeatureSet) -> Vec<f64> {
        let mut present = vec![false; self.vocab.len()];
        for word in features {
            if let Some(&w) = self.vocab_index.get(word) {
                present[w] = true;
            }
        }
        let mut scores = Vec::with_capacity(self.senses.len());
        for s in 0..self.senses.len() {
            let mut acc = self.log_priors[s];
            match self.scoring {
                ScoringMode::Bernoulli => {
                    for (w, &is_present) in present.iter().enumerate() {
                        acc += if is_present {
                            self.log_present[s][w]
                        } else {
                            self.log_absent[s][w]
                        };
                    }
                }
                ScoringMode::Presence => {
                    for (w, &is_present) in present.iter().enumerate() {
                        if is_present {
                            acc += self.log_present[s][w];
                        }
                    }
                }
            }
            scores.push(acc);
        }
        scores
    }

    /// Log joint for one named sense.
    pub fn log_joint(&self, features: &FeatureSet, sense: &str) -> Result<f64> {
        let s = self
            .senses
            .iter()
            .position(|name| name == sense)
            .ok_or_else(|| Error::UnknownSense(sense.to_string()))?;
        Ok(self.log_joints(features)[s])
    }

    /// Index of the winning sense for a score vector: highest log joint,
    /// ties broken by larger training count n(s), then by earlier inventory
    /// position.
    pub fn decide(&self, scores: &[f64]) -> usize {
        let mut best = 0;
        for i in 1..scores.len() {
            if scores[i] > scores[best]
                || (scores[i] == scores[best] && self.sense_counts[i] > self.sense_counts[best])
            {
                best = i;
            }
        }
        best
    }

    /// Most probable sense for `inst`, as an index into [`senses`](Self::senses).
    pub fn classify(&self, inst: &Instance) -> usize {
        let features = self.features_for(inst);
        let scores = self.log_joints(&features);
        self.decide(&scores)
    }

    /// Most probable sense for `inst`, as a label.
    pub fn classify_label(&self, inst: &Instance) -> &str {
        &self.senses[self.classify(inst)]
    }

    /// Serializes the model in the versioned text format (see the format
    /// notes on [`NBModel::from_model_str`]).
    pub fn to_model_string(&self) -> String {
        let mut out = String::new();
        out.push_str(MODEL_MAGIC);
        out.push('\n');
        let _ = writeln!(out, "window\t{}\t{}", self.spec.left(), self.spec.right());
        let _ = writeln!(out, "epsilon\t{}", fmt_f64(self.epsilon));
        let _ = writeln!(out, "scoring\t{}", self.scoring.name());
        let _ = writeln!(out, "senses\t{}", self.senses.len());
        for (s, name) in self.senses.iter().enumerate() {
            let _ = writeln!(
                out,
                "sense\t{}\t{}\t{}",
                name,
                self.sense_counts[s],
                fmt_f64(self.priors[s])
            );
        }
        let _ = writeln!(out, "vocab\t{}", self.vocab.len());
        for (w, token) in self.vocab.iter().enumerate() {
            let _ = write!(out, "word\t{token}");
            for s in 0..self.senses.len() {
                let _ = write!(out, "\t{}", self.cond_counts[s][w]);
            }
            for s in 0..self.senses.len() {
                let _ = write!(out, "\t{}", fmt_f64(self.cond[s][w]));
            }
            out.push('\n');
        }
        let checksum = hex_sha256(out.as_bytes());
        let _ = writeln!(out, "checksum\tsha256:{checksum}");
        out
    }

    pub fn save<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        std::fs::write(path, self.to_model_string())?;
        Ok(())
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<NBModel> {
        let text = std::fs::read_to_string(path)?;
        NBModel::from_model_str(&text)
    }

    /// Parses the versioned text format written by
    /// [`to_model_string`](Self::to_model_string):
    ///
    /// ```text
    /// wsd-model v1
    /// window  <left> <right>
    /// epsilon <float>
    /// scoring <bernoulli|presence>
    /// senses  <k>
    /// sense   <name> <n(s)> <prior>          (k rows)
    /// vocab   <m>
    /// word    <token> <n(w,s)...> <p(w|s)...> (m rows, sorted by token)
    /// checksum sha256:<hex of everything above>
    /// ```
    ///
    /// Fields are tab-separated; floats carry 17 significant digits so a
    /// round trip is bit-exact. Version, truncation, and checksum problems
    /// are reported as distinct errors.
    pub fn from_model_str(text: &str) -> Result<NBModel> {
        if text.is_empty() {
            return Err(Error::ModelTruncated("empty model file".into()));
        }
        let first_line = text.lines().next().unwrap_or("");
        if first_line != MODEL_MAGIC {
            return Err(Error::ModelVersion(first_line.to_string()));
        }

        let marker = "\nchecksum\t";
        let marker_pos = text
            .rfind(marker)
            .ok_or_else(|| Error::ModelTruncated("missing checksum line".into()))?;
        let hashed_prefix = &text[..marker_pos + 1];
        let tail = &text[marker_pos + 1..];
        let (checksum_line, rest) = match tail.find('\n') {
            Some(i) => (&tail[..i], &tail[i + 1..]),
            None => (tail, ""),
        };
        if !rest.is_empty() {
            return Err(Error::ModelFormat("content after checksum line".into()));
        }
        let stored = checksum_line
            .strip_prefix("checksum\tsha256:")
            .ok_or_else(|| Error::ModelFormat("malformed checksum line".into()))?
            .to_string();
        let computed = hex_sha256(hashed_prefix.as_bytes());
        if stored != computed {
            return Err(Error::ModelChecksum { stored, computed });
        }

        let mut lines = hashed_prefix.lines();
        lines.next(); // the magic line, already validated

        let window = fields_of(take_line(&mut lines, "window line")?, "window", 2)?;
        let spec = WindowSpec::new(
            parse_usize(window[0], "window left")?,
            parse_usize(window[1], "window right")?,
        )?;
        let epsilon = parse_f64(fields_of(take_line(&mut lines, "epsilon line")?, "epsilon", 1)?[0], "epsilon")?;
        check_epsilon(epsilon)?;
        let scoring = ScoringMode::parse(fields_of(take_line(&mut lines, "scoring line")?, "scoring", 1)?[0])?;

        let n_senses = parse_usize(
            fields_of(take_line(&mut lines, "sense count line")?, "senses", 1)?[0],
            "sense count",
        )?;
        if n_senses == 0 {
            return Err(Error::ModelFormat("model has no senses".into()));
        }
        let mut senses = Vec::with_capacity(n_senses);
        let mut sense_counts = Vec::with_capacity(n_senses);
        let mut priors = Vec::with_capacity(n_senses);
        for _ in 0..n_senses {
            let row = fields_of(take_line(&mut lines, "sense row")?, "sense", 3)?;
            let name = row[0].to_string();
            if name.is_empty() || senses.contains(&name) {
                return Err(Error::ModelFormat(format!("bad sense name `{name}`")));
            }
            let prior = parse_f64(row[2], "prior")?;
            if !(prior.is_finite() && 0.0 < prior && prior <= 1.0) {
                return Err(Error::ModelFormat(format!("prior {prior} out of range")));
            }
            senses.push(name);
            sense_counts.push(parse_usize(row[1], "sense count")?);
            priors.push(prior);
        }

        let n_vocab = parse_usize(
            fields_of(take_line(&mut lines, "vocab count line")?, "vocab", 1)?[0],
            "vocab count",
        )?;
        let mut vocab = Vec::with_capacity(n_vocab);
        let mut cond_counts = vec![Vec::with_capacity(n_vocab); n_senses];
        let mut cond = vec![Vec::with_capacity(n_vocab); n_senses];
        for _ in 0..n_vocab {
            let row = fields_of(take_line(&mut lines, "word row")?, "word", 1 + 2 * n_senses)?;
            let token = Token::new(row[0])
                .map_err(|e| Error::ModelFormat(format!("bad vocabulary word: {e}")))?;
            if let Some(prev) = vocab.last() {
                if *prev >= token {
                    return Err(Error::ModelFormat(format!(
                        "vocabulary not sorted at `{token}`"
                    )));
                }
            }
            for s in 0..n_senses {
                let count: u32 = row[1 + s].parse().map_err(|_| {
                    Error::ModelFormat(format!("bad count `{}` for `{token}`", row[1 + s]))
                })?;
                if count as usize > sense_counts[s] {
                    return Err(Error::ModelFormat(format!(
                        "count {count} for `{token}` exceeds its sense total"
                    )));
                }
                cond_counts[s].push(count);
            }
            let row_idx = vocab.len();
            for s in 0..n_senses {
                let p = parse_f64(row[1 + n_senses + s], "conditional")?;
                if !(p.is_finite() && 0.0 < p && p < 1.0) {
                    return Err(Error::ModelFormat(format!(
                        "conditional {p} for `{token}` out of (0,1)"
                    )));
                }
                if p != presence_prob(cond_counts[s][row_idx], sense_counts[s] as u32, epsilon) {
                    return Err(Error::ModelFormat(format!(
                        "conditional {p} for `{token}` does not match its counts"
                    )));
                }
                cond[s].push(p);
            }
            vocab.push(token);
        }
        if lines.next().is_some() {
            return Err(Error::ModelFormat("unexpected data after word table".into()));
        }

        let total = sense_counts.iter().sum();
        let log_priors = priors.iter().map(|p| p.ln()).collect();
        let mut log_present = vec![Vec::with_capacity(n_vocab); n_senses];
        let mut log_absent = vec![Vec::with_capacity(n_vocab); n_senses];
        for s in 0..n_senses {
            let n_s = sense_counts[s] as u32;
            for w in 0..n_vocab {
                log_present[s].push(cond[s][w].ln());
                log_absent[s].push(absence_prob(cond_counts[s][w], n_s, epsilon).ln());
            }
        }
        let vocab_index = vocab
            .iter()
            .enumerate()
            .map(|(i, t): (usize, &Token)| (t.clone(), i))
            .collect();

        Ok(NBModel {
            spec,
            epsilon,
            scoring,
            senses,
            sense_counts,
            total,
            priors,
            log_priors,
            vocab,
            vocab_index,
            cond_counts,
            cond,
            log_present,
            log_absent,
        })
    }
}

/// 17 significant digits: enough to round-trip any f64 exactly.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub(crate) fn hex_sha256(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for byte in digest {
        let _ = write!(out, "{byte:02x}");
    }
    out
}

fn take_line<'a>(lines: &mut std::str::Lines<'a>, what: &str) -> Result<&'a str> {
    lines
        .next()
        .ok_or_else(|| Error::ModelTruncated(format!("missing {what}")))
}

fn fields_of<'a>(line: &'a str, key: &str, arity: usize) -> Result<Vec<&'a str>> {
    let mut parts = line.split('\t');
    let head = parts.next().unwrap_or("");
    if head != key {
        return Err(Error::ModelFormat(format!(
            "expected `{key}` line, found `{head}`"
        )));
    }
    let fields: Vec<&str> = parts.collect();
    if fields.len() != arity {
        return Err(Error::ModelFormat(format!(
            "`{key}` line has {} fields, expected {arity}",
            fields.len()
        )));
    }
    Ok(fields)
}

fn parse_usize(field: &str, what: &str) -> Result<usize> {
    field
        .parse()
        .map_err(|_| Error::ModelFormat(format!("bad {what} `{field}`")))
}

fn parse_f64(field: &str, what: &str) -> Result<f64> {
    field
        .parse()
        .map_err(|_| Error::ModelFormat(format!("bad {what} `{field}`")))
}
