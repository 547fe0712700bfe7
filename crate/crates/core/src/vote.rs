//! Vote rules as pluggable strategies.
//!
//! Every way of turning a trained classifier grid into a final sense
//! decision — the default nine-member majority vote, the weighted variant,
//! and the ablation modes — implements [`VoteStrategy`]. Strategies are
//! looked up by name via [`vote_strategy`], so a config string like
//! `majority` or `category=medium,wide` fully determines ensemble behavior.
//!
//! A strategy answers three questions: which grid entries become members,
//! whether a proposed member list is legal, and how member ballots combine
//! into one sense.

use crate::ensemble::{best_per_category, ClassifierGrid, Member};
use crate::error::{Error, Result};
use crate::features::RangeCategory;

/// One member's contribution to a vote: its own decision plus its log joint
/// scores for every sense (inventory order).
#[derive(Debug, Clone)]
pub struct MemberBallot {
    pub vote: usize,
    pub log_joints: Vec<f64>,
}

/// A rule for selecting ensemble members from a grid and combining their
/// ballots. Implementations must be deterministic: equal inputs, equal
/// decisions.
pub trait VoteStrategy: Send + Sync {
    /// The registry name that recreates this strategy.
    fn name(&self) -> String;

    /// Indices of the grid entries that become ensemble members, in
    /// canonical member order.
    fn select(&self, grid: &ClassifierGrid) -> Vec<usize>;

    /// Checks the structural invariant for a proposed member list (member
    /// count and category coverage).
    fn validate_members(&self, members: &[Member]) -> Result<()>;

    /// Combines ballots into a winning sense index.
    fn decide(&self, ballots: &[MemberBallot], n_senses: usize) -> usize;
}

/// Looks a strategy up by name: `majority`, `weighted`, `all81`, or
/// `category=<left>,<right>` with range-category names.
pub fn vote_strategy(name: &str) -> Result<Box<dyn VoteStrategy>> {
    match name {
        "majority" => Ok(Box::new(MajorityVote)),
        "weighted" => Ok(Box::new(WeightedVote)),
        "all81" => Ok(Box::new(AllGridVote)),
        other => {
            let spec = other
                .strip_prefix("category=")
                .ok_or_else(|| Error::UnknownVoteRule(other.to_string()))?;
            let (left, right) = spec
                .split_once(',')
                .ok_or_else(|| Error::UnknownVoteRule(other.to_string()))?;
            Ok(Box::new(SingleCategoryVote {
                pair: (
                    RangeCategory::from_name(left.trim())?,
                    RangeCategory::from_name(right.trim())?,
                ),
            }))
        }
    }
}

/// Plurality over the ballots. Vote-count ties are broken by the larger log
/// joint summed across all members over the tied senses, then by earlier
/// inventory position.
fn plurality(ballots: &[MemberBallot], n_senses: usize) -> usize {
    let mut counts = vec![0usize; n_senses];
    for ballot in ballots {
        counts[ballot.vote] += 1;
    }
    let top = *counts.iter().max().expect("at least one sense");
    let tied: Vec<usize> = (0..n_senses).filter(|&s| counts[s] == top).collect();
    if tied.len() == 1 {
        return tied[0];
    }
    let mut winner = tied[0];
    let mut winner_sum = summed_log_joint(ballots, winner);
    for &s in &tied[1..] {
        let sum = summed_log_joint(ballots, s);
        if sum > winner_sum {
            winner = s;
            winner_sum = sum;
        }
    }
    winner
}

/// Total log joint for sense `s`, accumulated in member order.
fn summed_log_joint(ballots: &[MemberBallot], s: usize) -> f64 {
    let mut sum = 0.0;
    for ballot in ballots {
        sum += ballot.log_joints[s];
    }
    sum
}

fn require_pair_coverage(members: &[Member], who: &str) -> Result<()> {
    if members.len() != 9 {
        return Err(Error::IncompleteGrid(format!(
            "{who} vote needs exactly 9 members, got {}",
            members.len()
        )));
    }
    for lcat in RangeCategory::ALL {
        for rcat in RangeCategory::ALL {
            let hits = members
                .iter()
                .filter(|m| m.category() == (lcat, rcat))
                .count();
            if hits != 1 {
                return Err(Error::IncompleteGrid(format!(
                    "{who} vote needs exactly one ({lcat},{rcat}) member, got {hits}"
                )));
            }
        }
    }
    Ok(())
}

/// The default rule: the most accurate classifier from each of the nine
/// range categories votes, plurality wins.
pub struct MajorityVote;

impl VoteStrategy for MajorityVote {
    fn name(&self) -> String {
        "majority".into()
    }

    fn select(&self, grid: &ClassifierGrid) -> Vec<usize> {
        best_per_category(grid)
    }

    fn validate_members(&self, members: &[Member]) -> Result<()> {
        require_pair_coverage(members, "majority")
    }

    fn decide(&self, ballots: &[MemberBallot], n_senses: usize) -> usize {
        plurality(ballots, n_senses)
    }
}

/// Same nine members as [`MajorityVote`], but each vote is weighted by the
/// member's estimated joint probability: the winner is the sense with the
/// largest log joint summed over members (equivalently, the largest product
/// of joints). Sums are unnormalized.
pub struct WeightedVote;

impl VoteStrategy for WeightedVote {
    fn name(&self) -> String {
        "weighted".into()
    }

    fn select(&self, grid: &ClassifierGrid) -> Vec<usize> {
        best_per_category(grid)
    }

    fn validate_members(&self, members: &[Member]) -> Result<()> {
        require_pair_coverage(members, "weighted")
    }

    fn decide(&self, ballots: &[MemberBallot], n_senses: usize) -> usize {
        let mut winner = 0;
        let mut winner_sum = summed_log_joint(ballots, 0);
        for s in 1..n_senses {
            let sum = summed_log_joint(ballots, s);
            if sum > winner_sum {
                winner = s;
                winner_sum = sum;
            }
        }
        winner
    }
}

/// Ablation: every one of the 81 grid classifiers votes.
pub struct AllGridVote;

impl VoteStrategy for AllGridVote {
    fn name(&self) -> String {
        "all81".into()
    }

    fn select(&self, grid: &ClassifierGrid) -> Vec<usize> {
        (0..grid.entries().len()).collect()
    }

    fn validate_members(&self, members: &[Member]) -> Result<()> {
        if members.len() != 81 {
            return Err(Error::IncompleteGrid(format!(
                "all81 vote needs all 81 members, got {}",
                members.len()
            )));
        }
        Ok(())
    }

    fn decide(&self, ballots: &[MemberBallot], n_senses: usize) -> usize {
        plurality(ballots, n_senses)
    }
}

/// Ablation: only the nine classifiers of one (left, right) category pair
/// vote.
pub struct SingleCategoryVote {
    pub pair: (RangeCategory, RangeCategory),
}

impl VoteStrategy for SingleCategoryVote {
    fn name(&self) -> String {
        format!("category={},{}", self.pair.0, self.pair.1)
    }

    fn select(&self, grid: &ClassifierGrid) -> Vec<usize> {
        grid.entries()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.spec().category_pair() == self.pair)
            .map(|(i, _)| i)
            .collect()
    }

    fn validate_members(&self, members: &[Member]) -> Result<()> {
        if members.len() != 9 || members.iter().any(|m| m.category() != self.pair) {
            return Err(Error::IncompleteGrid(format!(
                "category vote needs the 9 ({},{}) members",
                self.pair.0, self.pair.1
            )));
        }
        Ok(())
    }

    fn decide(&self, ballots: &[MemberBallot], n_senses: usize) -> usize {
        plurality(ballots, n_senses)
    }
}
