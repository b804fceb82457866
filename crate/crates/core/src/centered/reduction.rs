use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::Graph;

use super::{is_p1p2_centered, is_p_centered, split_palette, Coloring, Verdict};

/// Budgets tied together by the palette-split argument for parameters `p`, `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionBudgets {
    /// `18p² + 9p + 2`
    pub total: usize,
    /// `3p + 2`
    pub p1: usize,
    /// `18tp + 6t`
    pub p2: usize,
}

impl ReductionBudgets {
    pub fn new(p: usize, t: usize) -> Self {
        Self {
            total: 18 * p * p + 9 * p + 2,
            p1: 3 * p + 2,
            p2: 18 * t * p + 6 * t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionOutcome {
    /// Centered at the total budget and centered after the split.
    Holds,
    /// Not centered at the total budget; the implication is vacuous.
    NotApplicable,
    /// Centered at the total budget but not after the split.
    Counterexample,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub p: usize,
    pub t: usize,
    pub budgets: ReductionBudgets,
    pub plain: Verdict,
    pub split: Option<Verdict>,
    pub outcome: ReductionOutcome,
}

/// Checks that a coloring centered at `18p² + 9p + 2` stays
/// `(3p + 2, 18tp + 6t)`-centered once moved onto split palettes.
pub fn reduction_check(g: &Graph, f: &Coloring, p: usize, t: usize) -> Result<ReductionReport> {
    let budgets = ReductionBudgets::new(p, t);
    let split_coloring = split_palette(g, f)?;
    let plain = is_p_centered(g, f, budgets.total)?;
    let (split, outcome) = if plain.is_centered() {
        let v = is_p1p2_centered(g, &split_coloring, budgets.p1, budgets.p2)?;
        let outcome = if v.is_centered() {
            ReductionOutcome::Holds
        } else {
            ReductionOutcome::Counterexample
        };
        (Some(v), outcome)
    } else {
        (None, ReductionOutcome::NotApplicable)
    };
    Ok(ReductionReport {
        p,
        t,
        budgets,
        plain,
        split,
        outcome,
    })
}
