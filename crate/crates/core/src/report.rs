//! Report rendering: the human-readable accuracy grids and the structured
//! JSON document.
//!
//! The text layout follows the conventional presentation of window-grid
//! results: columns are left window sizes ascending, rows are right window
//! sizes descending, and horizontal/vertical rules separate the
//! narrow/medium/wide blocks. A `*` marks cells whose spec was voted into
//! the ensemble in at least one fold.
//!
//! The JSON document is `ExperimentReport` serialized field-for-field:
//!
//! | field | meaning |
//! |---|---|
//! | `target_word`, `n_instances`, `sense_inventory` | corpus summary |
//! | `window_sizes` | the nine sizes indexing every grid axis |
//! | `k`, `seed`, `epsilon`, `vote_rule`, `scoring`, `stratify_halves` | config echo |
//! | `per_fold_grids` | k 9x9 matrices, `[left][right]`, devtest accuracy |
//! | `mean_grid`, `std_grid` | per-cell mean / sample std over folds |
//! | `fold_members` | per fold, the selected `[left, right]` specs |
//! | `fold_ensemble_test_accuracy` | per-fold ensemble accuracy on test halves |
//! | `fold_best_single_test_accuracy` | per-fold accuracy of the best single spec |
//! | `ensemble_test_accuracy`, `best_single_test_accuracy` | means of the above |
//! | `best_single_spec` | `[left, right]` with the highest mean devtest accuracy |
//! | `mcnemar` | `b`, `c`, `statistic`, optional exact `p_value`, verdict, method |

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::evaluation::ExperimentReport;

/// The one-line result digest, e.g.
/// `ensemble=0.884 best_single=0.843 mcnemar=12.450 significant=true`.
pub fn summary_line(report: &ExperimentReport) -> String {
    format!(
        "ensemble={:.3} best_single={:.3} mcnemar={:.3} significant={}",
        report.ensemble_test_accuracy,
        report.best_single_test_accuracy,
        report.mcnemar.statistic,
        report.mcnemar.significant_at_p01
    )
}

/// The full human-readable report: config echo, mean and std grids, fold
/// member lists, and the summary line.
pub fn render_text(report: &ExperimentReport) -> String {
    let mut out = String::new();
    let w = &report.window_sizes;

    let _ = writeln!(
        out,
        "word sense disambiguation experiment: `{}`",
        report.target_word
    );
    let _ = writeln!(
        out,
        "{} instances, {} senses: {}",
        report.n_instances,
        report.sense_inventory.len(),
        report.sense_inventory.join(", ")
    );
    let _ = writeln!(
        out,
        "k={} seed={} epsilon={:e} vote={} scoring={} halves={} mcnemar={}",
        report.k,
        report.seed,
        report.epsilon,
        report.vote_rule,
        report.scoring,
        if report.stratify_halves {
            "stratified"
        } else {
            "random"
        },
        report.mcnemar.method,
    );
    out.push('\n');

    // Cells selected in at least one fold, as grid positions.
    let starred: BTreeSet<(usize, usize)> = report
        .fold_members
        .iter()
        .flatten()
        .map(|m| {
            (
                position(w, m[0]),
                position(w, m[1]),
            )
        })
        .collect();

    let _ = writeln!(
        out,
        "mean devtest accuracy (rows: right window; columns: left window)"
    );
    let _ = writeln!(out, "* = ensemble member in at least one fold");
    render_grid(&mut out, w, |i, j| {
        format!(
            "{:.3}{}",
            report.mean_grid[i][j],
            if starred.contains(&(i, j)) { "*" } else { " " }
        )
    });
    out.push('\n');

    let _ = writeln!(out, "std dev of devtest accuracy across folds");
    render_grid(&mut out, w, |i, j| format!("{:.3} ", report.std_grid[i][j]));
    out.push('\n');

    let _ = writeln!(out, "ensemble members per fold (left,right):");
    for (f, members) in report.fold_members.iter().enumerate() {
        let list: Vec<String> = members
            .iter()
            .map(|m| format!("({},{})", m[0], m[1]))
            .collect();
        let _ = writeln!(out, "  fold {f}: {}", list.join(" "));
    }
    out.push('\n');

    let _ = writeln!(
        out,
        "test accuracy per fold: ensemble [{}], best single [{}]",
        join_fixed(&report.fold_ensemble_test_accuracy),
        join_fixed(&report.fold_best_single_test_accuracy),
    );
    let mean_at_best = report.mean_grid[position(w, report.best_single_spec[0])]
        [position(w, report.best_single_spec[1])];
    let _ = writeln!(
        out,
        "best single spec: ({},{}) with mean devtest accuracy {:.3}",
        report.best_single_spec[0], report.best_single_spec[1], mean_at_best
    );
    let m = &report.mcnemar;
    let p = match m.p_value {
        Some(p) => format!(" p={p:.4}"),
        None => String::new(),
    };
    let _ = writeln!(
        out,
        "mcnemar ({}): b={} c={} statistic={:.3}{} significant at p=.01: {}",
        m.method, m.b, m.c, m.statistic, p, m.significant_at_p01
    );
    out.push('\n');
    let _ = writeln!(out, "{}", summary_line(report));
    out
}

/// The structured report: pretty-printed JSON, one trailing newline.
pub fn render_json(report: &ExperimentReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn position(sizes: &[usize], size: usize) -> usize {
    sizes
        .iter()
        .position(|&s| s == size)
        .expect("report specs use grid window sizes")
}

fn join_fixed(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.3}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Writes one 9x9 grid: rows are right sizes descending so wide contexts
/// sit at the top, columns are left sizes ascending, with rules between
/// the range-category blocks. `cell(i, j)` receives grid positions for
/// (left = sizes[i], right = sizes[j]) and returns a 6-char cell.
fn render_grid(
    out: &mut String,
    sizes: &[usize],
    cell: impl Fn(usize, usize) -> String,
) {
    let cols = sizes.len();
    let _ = write!(out, "  r\\l |");
    for (i, size) in sizes.iter().enumerate() {
        let _ = write!(out, " {size:>5} ");
        if block_boundary(i, cols) {
            let _ = write!(out, "|");
        }
    }
    out.push('\n');
    rule_line(out, cols);
    for j in (0..cols).rev() {
        let _ = write!(out, " {:>4} |", sizes[j]);
        for i in 0..cols {
            let _ = write!(out, " {:<6}", cell(i, j));
            if block_boundary(i, cols) {
                let _ = write!(out, "|");
            }
        }
        out.push('\n');
        // j runs top-down, so a boundary *below* row j falls before
        // positions 6 and 3 (the wide/medium and medium/narrow seams).
        if j == 6 || j == 3 {
            rule_line(out, cols);
        }
    }
}

fn block_boundary(i: usize, cols: usize) -> bool {
    (i == 2 || i == 5) && i + 1 != cols
}

fn rule_line(out: &mut String, cols: usize) {
    let width = 7 + cols * 7 + 2;
    let _ = writeln!(out, "{}", "-".repeat(width));
}
