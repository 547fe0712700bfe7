//! Deterministic corpus generators for tests, benchmarks, and demos.
//!
//! Real sense-tagged corpora cannot be bundled, so these fixtures stand in:
//! they reproduce the interesting *shapes* — heavy sense skew, uniform
//! redistributions, perfectly separable cues, partially informative cues at
//! mixed distances, a repeated signal that independence assumptions
//! overcount — with all randomness drawn from a caller-supplied seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, Instance, Token};

fn token(s: &str) -> Token {
    Token::new(s).expect("generator tokens are [a-z0-9]+")
}

/// Noise vocabulary `prefix000 .. prefixN-1`.
fn pool(prefix: &str, n: usize) -> Vec<Token> {
    (0..n).map(|i| token(&format!("{prefix}{i:03}"))).collect()
}

/// A heavily skewed six-sense corpus in the shape of the classic *line*
/// data: 4148 instances, majority sense `product` at 53%.
pub fn line_fixture(seed: u64) -> Corpus {
    skewed_fixture(
        "line",
        &[
            ("product", 2218),
            ("text", 405),
            ("phone", 429),
            ("queue", 349),
            ("division", 376),
            ("cord", 371),
        ],
        seed,
    )
}

/// A six-sense corpus in the shape of the classic *interest* data: 2368
/// instances, majority sense `money` at 53%.
pub fn interest_fixture(seed: u64) -> Corpus {
    skewed_fixture(
        "interest",
        &[
            ("money", 1252),
            ("share", 500),
            ("attention", 361),
            ("advantage", 178),
            ("activity", 66),
            ("cause", 11),
        ],
        seed,
    )
}

/// Instances carry three sense-specific cue words at random positions with
/// decaying probabilities, a sprinkle of misleading cues from other senses,
/// and noise everywhere else — informative but far from separable.
fn skewed_fixture(target: &str, sense_counts: &[(&str, usize)], seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inventory: Vec<String> = sense_counts.iter().map(|(s, _)| s.to_string()).collect();
    let noise = pool("w", 200);
    let cue_probs = [0.55, 0.40, 0.25];
    let cues: Vec<Vec<Token>> = inventory
        .iter()
        .map(|sense| {
            (0..cue_probs.len())
                .map(|j| token(&format!("{sense}cue{j}")))
                .collect()
        })
        .collect();
    let target_token = token(target);

    let mut instances = Vec::new();
    for (sense_idx, (sense, count)) in sense_counts.iter().enumerate() {
        for i in 0..*count {
            let left_len = rng.gen_range(4..=12);
            let right_len = rng.gen_range(4..=12);
            let mut tokens: Vec<Token> = Vec::with_capacity(left_len + right_len + 1);
            for _ in 0..left_len {
                tokens.push(noise.choose(&mut rng).unwrap().clone());
            }
            tokens.push(target_token.clone());
            for _ in 0..right_len {
                tokens.push(noise.choose(&mut rng).unwrap().clone());
            }

            let mut plant = |word: &Token, rng: &mut ChaCha8Rng| {
                // Overwrite a random non-target position.
                let mut pos = rng.gen_range(0..tokens.len() - 1);
                if pos >= left_len {
                    pos += 1;
                }
                tokens[pos] = word.clone();
            };
            for (j, &p) in cue_probs.iter().enumerate() {
                if rng.gen_bool(p) {
                    plant(&cues[sense_idx][j].clone(), &mut rng);
                }
            }
            // Occasional misleading cue from another sense.
            if rng.gen_bool(0.15) {
                let other = (sense_idx + rng.gen_range(1..inventory.len())) % inventory.len();
                plant(&cues[other][0].clone(), &mut rng);
            }

            instances.push(
                Instance::new(format!("{target}_{sense}_{i:04}"), *sense, tokens, left_len)
                    .unwrap(),
            );
        }
    }
    instances.shuffle(&mut rng);
    Corpus::with_inventory(target, inventory, instances).unwrap()
}

/// The separable-fixture senses, in inventory order.
pub const SEPARABLE_SENSES: [&str; 3] = ["alpha", "beta", "gamma"];

/// A perfectly separable three-sense corpus: every instance carries its
/// sense's unique keyword immediately left of the target, amid filler drawn
/// from a small shared pool. Any window that sees one token to the left sees
/// the keyword, so those classifiers can reach accuracy 1.0.
pub fn separable_fixture(per_sense: usize, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fillers = pool("filler", 10);
    let target_token = token("line");
    let mut instances = Vec::with_capacity(3 * per_sense);
    for i in 0..per_sense {
        for sense in SEPARABLE_SENSES {
            let keyword = token(&format!("{sense}key"));
            let mut tokens = Vec::with_capacity(9);
            for _ in 0..3 {
                tokens.push(fillers.choose(&mut rng).unwrap().clone());
            }
            tokens.push(keyword);
            tokens.push(target_token.clone());
            for _ in 0..4 {
                tokens.push(fillers.choose(&mut rng).unwrap().clone());
            }
            instances
                .push(Instance::new(format!("sep_{sense}_{i:04}"), sense, tokens, 4).unwrap());
        }
    }
    Corpus::with_inventory("line", SEPARABLE_SENSES.map(String::from).to_vec(), instances)
        .unwrap()
}

/// Probability that a cue slot of [`mixed_signal_fixture`] shows its
/// instance's own sense key rather than one of the wrong ones.
pub const MIXED_SLOT_PROB: f64 = 0.7;

/// Probability that an echo band of [`mixed_signal_fixture`] echoes the
/// instance's own sense rather than one of the wrong ones.
pub const MIXED_ECHO_PROB: f64 = 0.45;

/// The four cue slots of [`mixed_signal_fixture`]: each slot's key prefix
/// and its signed token offset from the target position.
pub const MIXED_SLOT_OFFSETS: [(&str, isize); 4] =
    [("lnear", -3), ("lfar", -8), ("rnear", 3), ("rfar", 8)];

/// Distances from the target at which each side's echo band of
/// [`mixed_signal_fixture`] plants its words, one word family per distance.
pub const MIXED_ECHO_DISTANCES: [usize; 8] = [11, 13, 15, 17, 19, 21, 23, 25];

/// A noisy three-sense corpus mixing honest cues with overcounted ones.
///
/// Every instance is 61 tokens with the target at index 30 and two kinds of
/// signal:
///
/// - **Four independent cue slots** at distances 3 and 8 on each side
///   ([`MIXED_SLOT_OFFSETS`]), each showing the instance's own sense key
///   with probability [`MIXED_SLOT_PROB`] and one of the other senses' keys
///   otherwise. Each slot draws from its own key family (`lnear…`, `lfar…`,
///   `rnear…`, `rfar…`), so a window buys exactly the slots it reaches.
/// - **Two echo bands**, one per side. Each band makes a single draw per
///   instance — the instance's own sense with probability
///   [`MIXED_ECHO_PROB`], a wrong one otherwise — and writes it at all eight
///   [`MIXED_ECHO_DISTANCES`] through eight *distinct* word families
///   (`lecho0…` through `lecho7…`, `recho…` on the right). The eight words
///   carry one observation's worth of evidence, but a model that assumes
///   conditional independence counts them separately, so windows reaching
///   past distance 10 are dragged toward whatever the band echoes, right or
///   wrong. Windows of size 10 or less never see a band.
///
/// All remaining positions draw from a 40-word noise pool shared by the
/// senses. Each instance is fully described by six independent signal draws
/// (four slots and two echoes), so the Bayes-optimal accuracy is computable
/// by enumerating the 3^6 outcome patterns — measured accuracies can be
/// checked against a ceiling.
pub fn mixed_signal_fixture(per_sense: usize, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = pool("noise", 40);
    let target_token = token("line");
    const TARGET_AT: usize = 30;
    const LEN: usize = 61;

    // keys[slot][sense]
    let slot_keys: Vec<Vec<Token>> = MIXED_SLOT_OFFSETS
        .iter()
        .map(|(prefix, _)| {
            SEPARABLE_SENSES
                .iter()
                .map(|sense| token(&format!("{prefix}{sense}")))
                .collect()
        })
        .collect();
    // echo_keys[side][family][sense]
    let echo_keys: Vec<Vec<Vec<Token>>> = ["lecho", "recho"]
        .iter()
        .map(|side| {
            (0..MIXED_ECHO_DISTANCES.len())
                .map(|family| {
                    SEPARABLE_SENSES
                        .iter()
                        .map(|sense| token(&format!("{side}{family}{sense}")))
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut instances = Vec::with_capacity(3 * per_sense);
    for i in 0..per_sense {
        for (sense_idx, sense) in SEPARABLE_SENSES.iter().enumerate() {
            let mut tokens: Vec<Token> = (0..LEN)
                .map(|_| noise.choose(&mut rng).unwrap().clone())
                .collect();
            tokens[TARGET_AT] = target_token.clone();
            // Own sense with probability `own`, otherwise one of the two
            // other senses, uniformly.
            let draw = |own: f64, rng: &mut ChaCha8Rng| -> usize {
                if rng.gen_bool(own) {
                    sense_idx
                } else {
                    (sense_idx + rng.gen_range(1..3)) % 3
                }
            };
            for (slot, (_, offset)) in MIXED_SLOT_OFFSETS.iter().enumerate() {
                let shown = draw(MIXED_SLOT_PROB, &mut rng);
                tokens[(TARGET_AT as isize + offset) as usize] = slot_keys[slot][shown].clone();
            }
            for (side, sign) in [(0usize, -1isize), (1, 1)] {
                let echoed = draw(MIXED_ECHO_PROB, &mut rng);
                for (family, &d) in MIXED_ECHO_DISTANCES.iter().enumerate() {
                    let pos = (TARGET_AT as isize + sign * d as isize) as usize;
                    tokens[pos] = echo_keys[side][family][echoed].clone();
                }
            }
            instances.push(
                Instance::new(format!("mix_{sense}_{i:04}"), *sense, tokens, TARGET_AT).unwrap(),
            );
        }
    }
    Corpus::with_inventory("line", SEPARABLE_SENSES.map(String::from).to_vec(), instances)
        .unwrap()
}
