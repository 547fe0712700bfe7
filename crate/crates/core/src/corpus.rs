//! Sense-tagged corpora: parsing, normalization, inspection, subsampling.
//!
//! A corpus is a set of instances of one ambiguous target word, each tagged
//! with a gold sense and carrying its surrounding context as a normalized
//! token sequence. Two line-oriented input formats are accepted:
//!
//! * `marked` (canonical): `<id> TAB <sense> TAB <raw context>` where exactly
//!   one whitespace-delimited word is wrapped as `@@word@@` to mark the
//!   target. Normalization is applied while parsing.
//! * `pretokenized`: `<id> TAB <sense> TAB <space-separated tokens> TAB
//!   <target index>` with tokens already normalized.
//!
//! Lines starting with `#` and blank lines are skipped. Line numbers in
//! errors count every physical line, comments included.

use std::borrow::Borrow;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A normalized word: non-empty, lowercase ASCII letters and digits only.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token(String);

impl Token {
    /// Validates that `s` is a legal normalized token.
    pub fn new(s: &str) -> Result<Token> {
        if s.is_empty() {
            return Err(Error::InvalidInstance("empty token".into()));
        }
        if !s
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
        {
            return Err(Error::InvalidInstance(format!(
                "token `{s}` contains characters outside [a-z0-9]"
            )));
        }
        Ok(Token(s.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for Token {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Lowercases one whitespace-delimited word and strips every character
/// outside `[a-z0-9]`. Returns `None` when nothing survives.
pub fn normalize_word(raw: &str) -> Option<Token> {
    let mut out = String::new();
    for ch in raw.chars() {
        for lc in ch.to_lowercase() {
            if lc.is_ascii_lowercase() || lc.is_ascii_digit() {
                out.push(lc);
            }
        }
    }
    if out.is_empty() {
        None
    } else {
        Some(Token(out))
    }
}

/// Splits on whitespace and normalizes each word; words that normalize to
/// nothing are dropped. No stemming, no stop-list.
pub fn normalize(raw: &str) -> Vec<Token> {
    raw.split_whitespace().filter_map(normalize_word).collect()
}

/// One sense-tagged occurrence of the target word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    id: String,
    sense: String,
    tokens: Vec<Token>,
    target_index: usize,
}

impl Instance {
    pub fn new(
        id: impl Into<String>,
        sense: impl Into<String>,
        tokens: Vec<Token>,
        target_index: usize,
    ) -> Result<Instance> {
        let id = id.into();
        let sense = sense.into();
        if id.is_empty() {
            return Err(Error::InvalidInstance("empty instance id".into()));
        }
        if sense.is_empty() {
            return Err(Error::InvalidInstance("empty sense label".into()));
        }
        if tokens.is_empty() {
            return Err(Error::InvalidInstance(format!(
                "instance `{id}` has no tokens"
            )));
        }
        if target_index >= tokens.len() {
            return Err(Error::InvalidInstance(format!(
                "instance `{id}`: target index {target_index} out of range for {} tokens",
                tokens.len()
            )));
        }
        Ok(Instance {
            id,
            sense,
            tokens,
            target_index,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn sense(&self) -> &str {
        &self.sense
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn target_index(&self) -> usize {
        self.target_index
    }

    #[cfg(test)]
    pub(crate) fn with_sense(&self, sense: String) -> Instance {
        Instance {
            sense,
            ..self.clone()
        }
    }
}

/// An immutable collection of instances of one target word.
///
/// The sense inventory is fixed when the corpus is built and its order is
/// stable thereafter; deterministic tie-breaking relies on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    target_word: String,
    sense_inventory: Vec<String>,
    instances: Vec<Instance>,
}

impl Corpus {
    /// Builds a corpus, deriving the sense inventory from the instances in
    /// first-appearance order.
    pub fn new(target_word: impl Into<String>, instances: Vec<Instance>) -> Result<Corpus> {
        let mut inventory = Vec::new();
        let mut seen = HashSet::new();
        for inst in &instances {
            if seen.insert(inst.sense.clone()) {
                inventory.push(inst.sense.clone());
            }
        }
        Corpus::with_inventory(target_word, inventory, instances)
    }

    /// Builds a corpus with an explicit sense inventory. Every instance sense
    /// must be a member; instance ids must be unique.
    pub fn with_inventory(
        target_word: impl Into<String>,
        sense_inventory: Vec<String>,
        instances: Vec<Instance>,
    ) -> Result<Corpus> {
        let inventory_set: HashSet<&str> = sense_inventory.iter().map(|s| s.as_str()).collect();
        if inventory_set.len() != sense_inventory.len() {
            return Err(Error::InvalidInstance(
                "sense inventory contains duplicates".into(),
            ));
        }
        let mut ids = HashSet::new();
        for inst in &instances {
            if !inventory_set.contains(inst.sense.as_str()) {
                return Err(Error::UnknownSense(inst.sense.clone()));
            }
            if !ids.insert(inst.id.as_str()) {
                return Err(Error::InvalidInstance(format!(
                    "duplicate instance id `{}`",
                    inst.id
                )));
            }
        }
        Ok(Corpus {
            target_word: target_word.into(),
            sense_inventory,
            instances,
        })
    }

    pub fn target_word(&self) -> &str {
        &self.target_word
    }

    pub fn sense_inventory(&self) -> &[String] {
        &self.sense_inventory
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn sense_index(&self, sense: &str) -> Option<usize> {
        self.sense_inventory.iter().position(|s| s == sense)
    }

    /// Sub-corpus holding the instances at the given positions, in the given
    /// order. The inventory is inherited unchanged, so sense indices stay
    /// comparable across splits of one corpus.
    pub fn subset_indices(&self, indices: &[usize]) -> Result<Corpus> {
        let mut picked = Vec::with_capacity(indices.len());
        for &i in indices {
            let inst = self.instances.get(i).ok_or_else(|| {
                Error::InvalidInstance(format!("instance index {i} out of range"))
            })?;
            picked.push(inst.clone());
        }
        Corpus::with_inventory(
            self.target_word.clone(),
            self.sense_inventory.clone(),
            picked,
        )
    }

    /// Sub-corpus holding the listed ids in the given order. The inventory is
    /// inherited unchanged.
    pub fn subset(&self, ids: &[String]) -> Result<Corpus> {
        let by_id: HashMap<&str, &Instance> = self
            .instances
            .iter()
            .map(|inst| (inst.id.as_str(), inst))
            .collect();
        let mut picked = Vec::with_capacity(ids.len());
        for id in ids {
            let inst = by_id
                .get(id.as_str())
                .ok_or_else(|| Error::InvalidInstance(format!("unknown instance id `{id}`")))?;
            picked.push((*inst).clone());
        }
        Corpus::with_inventory(
            self.target_word.clone(),
            self.sense_inventory.clone(),
            picked,
        )
    }
}

/// Input format identifier. See the module docs for the two layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Marked,
    Pretokenized,
}

impl CorpusFormat {
    pub fn parse(name: &str) -> Result<CorpusFormat> {
        match name {
            "marked" => Ok(CorpusFormat::Marked),
            "pretokenized" => Ok(CorpusFormat::Pretokenized),
            other => Err(Error::Parse {
                line: 0,
                message: format!("unknown corpus format `{other}` (expected marked or pretokenized)"),
            }),
        }
    }
}

impl fmt::Display for CorpusFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorpusFormat::Marked => "marked",
            CorpusFormat::Pretokenized => "pretokenized",
        })
    }
}

fn is_marker(word: &str) -> bool {
    word.len() >= 5 && word.starts_with("@@") && word.ends_with("@@")
}

fn parse_marked_context(context: &str, line: usize) -> Result<(Vec<Token>, usize)> {
    let words: Vec<&str> = context.split_whitespace().collect();
    let marker_positions: Vec<usize> = words
        .iter()
        .enumerate()
        .filter(|(_, w)| is_marker(w))
        .map(|(i, _)| i)
        .collect();
    match marker_positions.len() {
        0 => {
            return Err(Error::Parse {
                line,
                message: "no @@target@@ marker in context".into(),
            })
        }
        1 => {}
        n => {
            return Err(Error::Parse {
                line,
                message: format!("{n} @@target@@ markers in context, expected exactly 1"),
            })
        }
    }
    let marker_at = marker_positions[0];

    let mut tokens = Vec::with_capacity(words.len());
    let mut target_index = None;
    for (i, word) in words.iter().enumerate() {
        let raw = if i == marker_at {
            &word[2..word.len() - 2]
        } else {
            word
        };
        if let Some(token) = normalize_word(raw) {
            if i == marker_at {
                target_index = Some(tokens.len());
            }
            tokens.push(token);
        } else if i == marker_at {
            return Err(Error::Parse {
                line,
                message: "target token is empty after normalization".into(),
            });
        }
    }
    Ok((tokens, target_index.expect("marker token survives")))
}

/// Parses a line-oriented stream into a corpus.
///
/// The target word is taken from the first record's target token. An input
/// with no records at all is an error.
pub fn parse_corpus<R: BufRead>(reader: R, format: CorpusFormat) -> Result<Corpus> {
    let mut instances: Vec<Instance> = Vec::new();
    let mut seen_ids: HashSet<String> = HashSet::new();

    for (idx, line_result) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line_result?;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() || trimmed.starts_with('#') {
            continue;
        }

        let fields: Vec<&str> = trimmed.split('\t').collect();
        let instance = match format {
            CorpusFormat::Marked => {
                if fields.len() != 3 {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected 3 tab-separated fields, found {}", fields.len()),
                    });
                }
                let (id, sense, context) = (fields[0], fields[1], fields[2]);
                check_id_and_sense(id, sense, line_no)?;
                let (tokens, target_index) = parse_marked_context(context, line_no)?;
                Instance::new(id, sense, tokens, target_index).map_err(|e| Error::Parse {
                    line: line_no,
                    message: e.to_string(),
                })?
            }
            CorpusFormat::Pretokenized => {
                if fields.len() != 4 {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected 4 tab-separated fields, found {}", fields.len()),
                    });
                }
                let (id, sense, token_field, index_field) =
                    (fields[0], fields[1], fields[2], fields[3]);
                check_id_and_sense(id, sense, line_no)?;
                let tokens = token_field
                    .split_whitespace()
                    .map(Token::new)
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| Error::Parse {
                        line: line_no,
                        message: e.to_string(),
                    })?;
                let target_index: usize = index_field.trim().parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("target index `{index_field}` is not a number"),
                })?;
                Instance::new(id, sense, tokens, target_index).map_err(|e| Error::Parse {
                    line: line_no,
                    message: e.to_string(),
                })?
            }
        };

        if !seen_ids.insert(instance.id.clone()) {
            return Err(Error::DuplicateId {
                line: line_no,
                id: instance.id,
            });
        }
        instances.push(instance);
    }

    if instances.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let target_word = instances[0].tokens[instances[0].target_index].as_str().to_string();
    Corpus::new(target_word, instances)
}

fn check_id_and_sense(id: &str, sense: &str, line: usize) -> Result<()> {
    if id.is_empty() {
        return Err(Error::Parse {
            line,
            message: "empty id field".into(),
        });
    }
    if sense.is_empty() {
        return Err(Error::Parse {
            line,
            message: "empty sense field".into(),
        });
    }
    Ok(())
}

/// Writes the canonical `marked` format: one record per line, target token
/// wrapped as `@@token@@`. Re-parsing the output reproduces the corpus.
pub fn write_canonical<W: Write>(corpus: &Corpus, mut writer: W) -> Result<()> {
    for inst in corpus.instances() {
        let mut context = String::new();
        for (i, token) in inst.tokens().iter().enumerate() {
            if i > 0 {
                context.push(' ');
            }
            if i == inst.target_index() {
                context.push_str("@@");
                context.push_str(token.as_str());
                context.push_str("@@");
            } else {
                context.push_str(token.as_str());
            }
        }
        writeln!(writer, "{}\t{}\t{}", inst.id(), inst.sense(), context)?;
    }
    Ok(())
}

/// Canonical `marked` serialization as a string.
pub fn canonical_string(corpus: &Corpus) -> String {
    let mut buf = Vec::new();
    write_canonical(corpus, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("canonical output is UTF-8")
}

/// Draws exactly `per_sense` instances of every inventory sense, without
/// replacement, and shuffles the result. Deterministic for a fixed seed; all
/// randomness comes from a ChaCha8 generator seeded with `seed`.
pub fn uniform_subsample(corpus: &Corpus, per_sense: usize, seed: u64) -> Result<Corpus> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampled: Vec<Instance> = Vec::with_capacity(per_sense * corpus.sense_inventory.len());
    for sense in &corpus.sense_inventory {
        let mut members: Vec<&Instance> = corpus
            .instances
            .iter()
            .filter(|inst| &inst.sense == sense)
            .collect();
        if members.len() < per_sense {
            return Err(Error::InsufficientSense {
                sense: sense.clone(),
                available: members.len(),
                needed: per_sense,
            });
        }
        members.shuffle(&mut rng);
        sampled.extend(members.into_iter().take(per_sense).cloned());
    }
    sampled.shuffle(&mut rng);
    Corpus::with_inventory(
        corpus.target_word.clone(),
        corpus.sense_inventory.clone(),
        sampled,
    )
}

/// Per-sense instance counts in inventory order. Every inventory sense is
/// present, possibly with a zero count.
pub fn sense_distribution(corpus: &Corpus) -> Vec<(String, usize)> {
    let mut counts: Vec<(String, usize)> = corpus
        .sense_inventory
        .iter()
        .map(|s| (s.clone(), 0))
        .collect();
    let index: HashMap<&str, usize> = corpus
        .sense_inventory
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    for inst in &corpus.instances {
        counts[index[inst.sense.as_str()]].1 += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn parse_str(text: &str, format: CorpusFormat) -> Result<Corpus> {
        parse_corpus(Cursor::new(text), format)
    }

    #[test]
    fn normalize_strips_punctuation_and_case() {
        let tokens = normalize("Interest rates rose.");
        let expected = ["interest", "rates", "rose"];
        assert_eq!(
            tokens.iter().map(Token::as_str).collect::<Vec<_>>(),
            expected
        );
    }

    #[test]
    fn normalize_drops_all_punctuation_words() {
        assert!(normalize("--").is_empty());
    }

    #[test]
    fn normalize_matches_character_filter_oracle() {
        // Independent oracle: keep exactly the [a-z0-9] characters of the
        // lowercased word.
        let oracle = |raw: &str| -> Vec<String> {
            raw.split_whitespace()
                .filter_map(|w| {
                    let kept: String = w
                        .to_lowercase()
                        .chars()
                        .filter(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
                        .collect();
                    if kept.is_empty() {
                        None
                    } else {
                        Some(kept)
                    }
                })
                .collect()
        };
        for raw in [
            "U.S.-based firm's",
            "The LINE, please.",
            "a-b-c 42nd #tag 3.14",
            "  doubled  spaces\tand\ttabs ",
        ] {
            let got: Vec<String> = normalize(raw).iter().map(|t| t.to_string()).collect();
            assert_eq!(got, oracle(raw), "raw: {raw:?}");
        }
        assert_eq!(
            normalize("U.S.-based firm's")
                .iter()
                .map(Token::as_str)
                .collect::<Vec<_>>(),
            ["usbased", "firms"]
        );
    }

    #[test]
    fn normalize_is_idempotent() {
        for raw in ["Hello, World!", "a.b c,d", "@@x@@ y", "MIXED case 12three"] {
            let once = normalize(raw);
            let joined = once
                .iter()
                .map(Token::as_str)
                .collect::<Vec<_>>()
                .join(" ");
            assert_eq!(normalize(&joined), once);
        }
    }

    #[test]
    fn parses_marked_record() {
        let corpus =
            parse_str("i1\tproduct\tthe @@line@@ of products\n", CorpusFormat::Marked).unwrap();
        assert_eq!(corpus.len(), 1);
        assert_eq!(corpus.target_word(), "line");
        let inst = &corpus.instances()[0];
        assert_eq!(inst.id(), "i1");
        assert_eq!(inst.sense(), "product");
        assert_eq!(
            inst.tokens().iter().map(Token::as_str).collect::<Vec<_>>(),
            ["the", "line", "of", "products"]
        );
        assert_eq!(inst.target_index(), 1);
    }

    #[test]
    fn marked_context_is_normalized() {
        let corpus =
            parse_str("i1\tphone\tThe @@LINE,@@ please.\n", CorpusFormat::Marked).unwrap();
        let inst = &corpus.instances()[0];
        assert_eq!(
            inst.tokens().iter().map(Token::as_str).collect::<Vec<_>>(),
            ["the", "line", "please"]
        );
        assert_eq!(inst.target_index(), 1);
    }

    #[test]
    fn target_index_shifts_when_words_drop_out() {
        let corpus = parse_str("i1\ts\t-- ?! @@X@@ done\n", CorpusFormat::Marked).unwrap();
        let inst = &corpus.instances()[0];
        assert_eq!(
            inst.tokens().iter().map(Token::as_str).collect::<Vec<_>>(),
            ["x", "done"]
        );
        assert_eq!(inst.target_index(), 0);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# header comment\n\ni1\ts\t@@a@@ b\n# tail\n";
        let corpus = parse_str(text, CorpusFormat::Marked).unwrap();
        assert_eq!(corpus.len(), 1);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let text = "i1\ts\t@@a@@ b\ni2\ts\tno marker here\n";
        let err = parse_str(text, CorpusFormat::Marked).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_field_is_a_parse_error() {
        let err = parse_str("i1\tproduct\n", CorpusFormat::Marked).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn multiple_markers_rejected() {
        let err = parse_str("i1\ts\t@@a@@ @@b@@\n", CorpusFormat::Marked).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn all_punctuation_target_rejected() {
        let err = parse_str("i1\ts\tcontext @@--@@ here\n", CorpusFormat::Marked).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn duplicate_id_rejected() {
        let text = "i1\ts\t@@a@@\ni1\ts\t@@b@@\n";
        let err = parse_str(text, CorpusFormat::Marked).unwrap_err();
        match err {
            Error::DuplicateId { line, id } => {
                assert_eq!(line, 2);
                assert_eq!(id, "i1");
            }
            other => panic!("expected duplicate id error, got {other:?}"),
        }
    }

    #[test]
    fn empty_stream_is_an_error() {
        assert!(matches!(
            parse_str("", CorpusFormat::Marked),
            Err(Error::EmptyCorpus)
        ));
        assert!(matches!(
            parse_str("# only a comment\n", CorpusFormat::Marked),
            Err(Error::EmptyCorpus)
        ));
    }

    #[test]
    fn parses_pretokenized_record() {
        let corpus = parse_str("i1\tcord\tcut the line now\t2\n", CorpusFormat::Pretokenized).unwrap();
        let inst = &corpus.instances()[0];
        assert_eq!(inst.target_index(), 2);
        assert_eq!(inst.tokens()[2].as_str(), "line");
    }

    #[test]
    fn pretokenized_bad_index_rejected() {
        let err = parse_str("i1\ts\ta b\t5\n", CorpusFormat::Pretokenized).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_str("i1\ts\ta b\tx\n", CorpusFormat::Pretokenized).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn pretokenized_rejects_unnormalized_tokens() {
        let err = parse_str("i1\ts\ta B!\t0\n", CorpusFormat::Pretokenized).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn inventory_is_first_appearance_order() {
        let text = "i1\tqueue\t@@line@@ a\ni2\tcord\t@@line@@ b\ni3\tqueue\t@@line@@ c\n";
        let corpus = parse_str(text, CorpusFormat::Marked).unwrap();
        assert_eq!(corpus.sense_inventory(), ["queue", "cord"]);
    }

    #[test]
    fn canonical_round_trip() {
        let text = "i1\tqueue\twaited in the @@line@@ for hours\ni2\tcord\tcut the @@line@@\n";
        let corpus = parse_str(text, CorpusFormat::Marked).unwrap();
        let reparsed = parse_str(&canonical_string(&corpus), CorpusFormat::Marked).unwrap();
        assert_eq!(corpus, reparsed);
    }

    #[test]
    fn subsample_is_uniform_and_deterministic() {
        let corpus = crate::synthetic::line_fixture(7);
        let sub = uniform_subsample(&corpus, 349, 11).unwrap();
        assert_eq!(sub.len(), 2094);
        for (_, count) in sense_distribution(&sub) {
            assert_eq!(count, 349);
        }
        let again = uniform_subsample(&corpus, 349, 11).unwrap();
        assert_eq!(sub, again);
        let other = uniform_subsample(&corpus, 349, 12).unwrap();
        assert_ne!(sub, other);
    }

    #[test]
    fn subsample_of_uniform_corpus_is_a_permutation() {
        let corpus = crate::synthetic::separable_fixture(20, 3);
        let per_sense = corpus.len() / corpus.sense_inventory().len();
        let sub = uniform_subsample(&corpus, per_sense, 5).unwrap();
        assert_eq!(sub.len(), corpus.len());
        let mut original: Vec<&str> = corpus.instances().iter().map(|i| i.id()).collect();
        let mut sampled: Vec<&str> = sub.instances().iter().map(|i| i.id()).collect();
        original.sort_unstable();
        sampled.sort_unstable();
        assert_eq!(original, sampled);
    }

    #[test]
    fn subsample_insufficient_sense_names_the_sense() {
        let text = "i1\ta\t@@w@@ x\ni2\ta\t@@w@@ y\ni3\tb\t@@w@@ z\n";
        let corpus = parse_str(text, CorpusFormat::Marked).unwrap();
        match uniform_subsample(&corpus, 2, 0) {
            Err(Error::InsufficientSense { sense, available, needed }) => {
                assert_eq!(sense, "b");
                assert_eq!(available, 1);
                assert_eq!(needed, 2);
            }
            other => panic!("expected insufficient-sense error, got {other:?}"),
        }
    }

    #[test]
    fn distribution_counts_match_line_table() {
        let corpus = crate::synthetic::line_fixture(1);
        let dist = sense_distribution(&corpus);
        let expected = [
            ("product", 2218),
            ("text", 405),
            ("phone", 429),
            ("queue", 349),
            ("division", 376),
            ("cord", 371),
        ];
        assert_eq!(dist.len(), expected.len());
        for ((sense, count), (want_sense, want_count)) in dist.iter().zip(expected) {
            assert_eq!(sense, want_sense);
            assert_eq!(*count, want_count);
        }
        assert_eq!(corpus.len(), 4148);
    }

    #[test]
    fn distribution_counts_match_interest_table() {
        let corpus = crate::synthetic::interest_fixture(1);
        let dist = sense_distribution(&corpus);
        let expected = [
            ("money", 1252),
            ("share", 500),
            ("attention", 361),
            ("advantage", 178),
            ("activity", 66),
            ("cause", 11),
        ];
        for ((sense, count), (want_sense, want_count)) in dist.iter().zip(expected) {
            assert_eq!(sense, want_sense);
            assert_eq!(*count, want_count);
        }
        assert_eq!(corpus.len(), 2368);
    }

    #[test]
    fn distribution_includes_zero_senses() {
        let corpus = Corpus::with_inventory(
            "line",
            vec!["s1".into(), "s2".into()],
            vec![],
        )
        .unwrap();
        assert_eq!(
            sense_distribution(&corpus),
            [("s1".to_string(), 0), ("s2".to_string(), 0)]
        );
    }
}
