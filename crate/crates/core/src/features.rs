//! Context windows and binary word-presence features.
//!
//! A classifier sees an instance through a [`WindowSpec`]: up to `left`
//! normalized tokens before the target and `right` after it, clamped at the
//! instance boundaries, never including the target itself. The feature
//! representation is simply the set of distinct tokens in that window.

use std::collections::BTreeSet;
use std::fmt;

use crate::corpus::{Instance, Token};
use crate::error::{Error, Result};

/// The nine legal window sizes, in ascending order.
pub const WINDOW_SIZES: [usize; 9] = [0, 1, 2, 3, 4, 5, 10, 25, 50];

/// Window sizes grouped by scale. Each legal size belongs to exactly one
/// category; the grid spans all nine category pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RangeCategory {
    Narrow,
    Medium,
    Wide,
}

impl RangeCategory {
    pub const ALL: [RangeCategory; 3] =
        [RangeCategory::Narrow, RangeCategory::Medium, RangeCategory::Wide];

    /// Category of a legal window size.
    pub fn of(size: usize) -> Result<RangeCategory> {
        match size {
            0..=2 => Ok(RangeCategory::Narrow),
            3..=5 => Ok(RangeCategory::Medium),
            10 | 25 | 50 => Ok(RangeCategory::Wide),
            other => Err(Error::InvalidWindowSize(other)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RangeCategory::Narrow => "narrow",
            RangeCategory::Medium => "medium",
            RangeCategory::Wide => "wide",
        }
    }

    pub fn from_name(name: &str) -> Result<RangeCategory> {
        match name {
            "narrow" => Ok(RangeCategory::Narrow),
            "medium" => Ok(RangeCategory::Medium),
            "wide" => Ok(RangeCategory::Wide),
            other => Err(Error::UnknownVoteRule(format!(
                "unknown range category `{other}` (expected narrow, medium, or wide)"
            ))),
        }
    }

    /// The window sizes belonging to this category, ascending.
    pub fn sizes(&self) -> [usize; 3] {
        match self {
            RangeCategory::Narrow => [0, 1, 2],
            RangeCategory::Medium => [3, 4, 5],
            RangeCategory::Wide => [10, 25, 50],
        }
    }
}

impl fmt::Display for RangeCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An asymmetric context window: `left` tokens before the target, `right`
/// after. Both sides must be legal sizes from [`WINDOW_SIZES`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WindowSpec {
    left: usize,
    right: usize,
}

impl WindowSpec {
    pub fn new(left: usize, right: usize) -> Result<WindowSpec> {
        for side in [left, right] {
            if !WINDOW_SIZES.contains(&side) {
                return Err(Error::InvalidWindowSize(side));
            }
        }
        Ok(WindowSpec { left, right })
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn total(&self) -> usize {
        self.left + self.right
    }

    /// The (left category, right category) pair this spec belongs to.
    pub fn category_pair(&self) -> (RangeCategory, RangeCategory) {
        (
            RangeCategory::of(self.left).expect("validated on construction"),
            RangeCategory::of(self.right).expect("validated on construction"),
        )
    }
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.left, self.right)
    }
}

/// All 81 window specs in canonical grid order: left size ascending in the
/// outer loop, right size ascending in the inner loop, so `(0,0)` is first
/// and `(50,50)` last. Tie-breaking across the grid relies on this order.
pub fn grid_specs() -> Vec<WindowSpec> {
    let mut specs = Vec::with_capacity(81);
    for left in WINDOW_SIZES {
        for right in WINDOW_SIZES {
            specs.push(WindowSpec { left, right });
        }
    }
    specs
}

/// Binary word-presence features: the set of distinct tokens in a window.
pub type FeatureSet = BTreeSet<Token>;

/// Collects the tokens visible through `spec` around the target of `inst`.
/// Windows are clamped at the instance boundaries and the target token
/// itself is never a feature (though the same word elsewhere in the window
/// is).
pub fn extract(inst: &Instance, spec: WindowSpec) -> FeatureSet {
    let target = inst.target_index();
    let tokens = inst.tokens();
    let start = target.saturating_sub(spec.left);
    let end = (target + spec.right).min(tokens.len() - 1);
    let mut features = FeatureSet::new();
    for (i, token) in tokens.iter().enumerate().take(end + 1).skip(start) {
        if i != target {
            features.insert(token.clone());
        }
    }
    features
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::normalize;
    use proptest::prelude::*;

    fn instance(words: &str, target: usize) -> Instance {
        Instance::new("t1", "s", normalize(words), target).unwrap()
    }

    fn names(set: &FeatureSet) -> Vec<&str> {
        set.iter().map(Token::as_str).collect()
    }

    #[test]
    fn window_spec_validates_sizes() {
        assert!(WindowSpec::new(0, 50).is_ok());
        assert!(matches!(
            WindowSpec::new(6, 0),
            Err(Error::InvalidWindowSize(6))
        ));
        assert!(matches!(
            WindowSpec::new(0, 26),
            Err(Error::InvalidWindowSize(26))
        ));
    }

    #[test]
    fn categories_partition_the_sizes() {
        for size in WINDOW_SIZES {
            let cat = RangeCategory::of(size).unwrap();
            assert!(cat.sizes().contains(&size));
        }
        assert_eq!(RangeCategory::of(2).unwrap(), RangeCategory::Narrow);
        assert_eq!(RangeCategory::of(3).unwrap(), RangeCategory::Medium);
        assert_eq!(RangeCategory::of(10).unwrap(), RangeCategory::Wide);
        assert!(RangeCategory::of(7).is_err());
    }

    #[test]
    fn grid_is_81_specs_in_row_major_order() {
        let grid = grid_specs();
        assert_eq!(grid.len(), 81);
        assert_eq!(grid[0], WindowSpec::new(0, 0).unwrap());
        assert_eq!(grid[1], WindowSpec::new(0, 1).unwrap());
        assert_eq!(grid[9], WindowSpec::new(1, 0).unwrap());
        assert_eq!(grid[80], WindowSpec::new(50, 50).unwrap());
        // Strictly increasing under (left, right) lexicographic order.
        for pair in grid.windows(2) {
            assert!((pair[0].left(), pair[0].right()) < (pair[1].left(), pair[1].right()));
        }
    }

    #[test]
    fn extracts_symmetric_window() {
        let inst = instance("a b c T d e f", 3);
        let set = extract(&inst, WindowSpec::new(1, 1).unwrap());
        assert_eq!(names(&set), ["c", "d"]);
    }

    #[test]
    fn window_clamps_at_boundaries() {
        let inst = instance("a T b", 1);
        let set = extract(&inst, WindowSpec::new(50, 50).unwrap());
        assert_eq!(names(&set), ["a", "b"]);
        let first = instance("T x y", 0);
        let set = extract(&first, WindowSpec::new(5, 1).unwrap());
        assert_eq!(names(&set), ["x"]);
    }

    #[test]
    fn zero_window_sees_nothing() {
        let inst = instance("a b T c d", 2);
        assert!(extract(&inst, WindowSpec::new(0, 0).unwrap()).is_empty());
    }

    #[test]
    fn target_word_repeated_in_context_is_a_feature() {
        let inst = instance("line T line", 1);
        let set = extract(&inst, WindowSpec::new(1, 1).unwrap());
        assert_eq!(names(&set), ["line"]);
    }

    #[test]
    fn one_sided_windows() {
        let inst = instance("a b T c d", 2);
        assert_eq!(names(&extract(&inst, WindowSpec::new(2, 0).unwrap())), ["a", "b"]);
        assert_eq!(names(&extract(&inst, WindowSpec::new(0, 2).unwrap())), ["c", "d"]);
    }

    #[test]
    fn duplicate_context_words_collapse() {
        let inst = instance("x x T x x", 2);
        let set = extract(&inst, WindowSpec::new(2, 2).unwrap());
        assert_eq!(names(&set), ["x"]);
    }

    proptest! {
        // Growing either side of the window never loses features.
        #[test]
        fn wider_windows_are_supersets(
            words in proptest::collection::vec("[a-z]{1,3}", 1..40),
            target_seed in 0usize..40,
            li in 0usize..9,
            ri in 0usize..9,
        ) {
            let target = target_seed % words.len();
            let tokens: Vec<_> = words.iter().map(|w| Token::new(w).unwrap()).collect();
            let inst = Instance::new("p1", "s", tokens, target).unwrap();
            let spec = WindowSpec::new(WINDOW_SIZES[li], WINDOW_SIZES[ri]).unwrap();
            let base = extract(&inst, spec);
            for (wl, wr) in [
                (WINDOW_SIZES[li.min(8)], WINDOW_SIZES[8]),
                (WINDOW_SIZES[8], WINDOW_SIZES[ri.min(8)]),
                (WINDOW_SIZES[8], WINDOW_SIZES[8]),
            ] {
                let wider = extract(&inst, WindowSpec::new(wl.max(spec.left()), wr.max(spec.right())).unwrap());
                prop_assert!(base.is_subset(&wider));
            }
        }

        // A window at least as long as the instance on both sides sees every
        // token except the target position.
        #[test]
        fn full_window_sees_everything_but_the_target(
            words in proptest::collection::vec("[a-z]{1,3}", 1..30),
            target_seed in 0usize..30,
        ) {
            let target = target_seed % words.len();
            let tokens: Vec<_> = words.iter().map(|w| Token::new(w).unwrap()).collect();
            let inst = Instance::new("p1", "s", tokens.clone(), target).unwrap();
            let set = extract(&inst, WindowSpec::new(50, 50).unwrap());
            let expected: FeatureSet = tokens
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != target)
                .map(|(_, t)| t.clone())
                .collect();
            prop_assert_eq!(set, expected);
        }
    }
}
