//! p-centered colorings: the plain and split-palette conditions, violation
//! witnesses and threat enumeration.
//!
//! A coloring is p-centered when every connected subgraph either sees more
//! than `p` colors or has a color appearing exactly once. The split variant
//! gives root and fresh vertices disjoint palettes `A1`/`A2` with separate
//! budgets `(p1, p2)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexKind, VertexSet};

mod reduction;
pub(crate) mod search;
mod threats;
mod verify;

pub use reduction::{reduction_check, ReductionBudgets, ReductionOutcome, ReductionReport};
pub use threats::{find_threats, threat_load};
pub use verify::{
    is_p1p2_centered, is_p_centered, is_p_centered_bruteforce, is_p_centered_by_color_subsets,
    split_palette,
};

/// Vertex coloring with colors drawn from `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ColoringFile", into = "ColoringFile")]
pub struct Coloring {
    k: usize,
    colors: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct ColoringFile {
    k: usize,
    colors: Vec<usize>,
}

impl TryFrom<ColoringFile> for Coloring {
    type Error = Error;
    fn try_from(f: ColoringFile) -> Result<Self> {
        Coloring::new(f.k, f.colors)
    }
}

impl From<Coloring> for ColoringFile {
    fn from(c: Coloring) -> Self {
        ColoringFile {
            k: c.k,
            colors: c.colors,
        }
    }
}

impl Coloring {
    pub fn new(k: usize, colors: Vec<usize>) -> Result<Self> {
        if let Some((v, &c)) = colors.iter().enumerate().find(|(_, &c)| c >= k) {
            return Err(Error::InvalidColoring(format!(
                "vertex {v} has color {c}, palette size is {k}"
            )));
        }
        Ok(Self { k, colors })
    }

    /// Palette size `max + 1` inferred from the entries.
    pub fn from_colors(colors: Vec<usize>) -> Self {
        let k = colors.iter().max().map_or(0, |&c| c + 1);
        Self { k, colors }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Sorted list of colors that occur.
    pub fn used_colors(&self) -> Vec<usize> {
        let mut seen = vec![false; self.k];
        for &c in &self.colors {
            seen[c] = true;
        }
        (0..self.k).filter(|&c| seen[c]).collect()
    }

    pub fn used_count(&self) -> usize {
        self.used_colors().len()
    }

    /// The coloring restricted to `s`, renumbered like `Graph::induced_subgraph`.
    pub fn restrict(&self, s: &VertexSet) -> Coloring {
        Coloring {
            k: self.k,
            colors: s.iter().map(|&v| self.colors[v]).collect(),
        }
    }

    pub fn check_for(&self, g: &Graph) -> Result<()> {
        if self.colors.len() != g.n() {
            return Err(Error::InvalidColoring(format!(
                "{} colors for a graph on {} vertices",
                self.colors.len(),
                g.n()
            )));
        }
        Ok(())
    }

    pub(crate) fn histogram(&self, s: &[usize]) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for &v in s {
            *h.entry(self.colors[v]).or_insert(0) += 1;
        }
        h
    }
}

/// Which of the two disjoint palettes a color belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Palette {
    A1,
    A2,
}

/// A coloring whose colors are partitioned into palettes `A1` (used on
/// roots) and `A2` (used on fresh vertices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SplitFile", into = "SplitFile")]
pub struct SplitColoring {
    base: Coloring,
    palette: Vec<Palette>,
}

#[derive(Serialize, Deserialize)]
struct SplitFile {
    k: usize,
    colors: Vec<usize>,
    palette: Vec<Palette>,
}

impl TryFrom<SplitFile> for SplitColoring {
    type Error = Error;
    fn try_from(f: SplitFile) -> Result<Self> {
        SplitColoring::new(Coloring::new(f.k, f.colors)?, f.palette)
    }
}

impl From<SplitColoring> for SplitFile {
    fn from(s: SplitColoring) -> Self {
        SplitFile {
            k: s.base.k,
            colors: s.base.colors,
            palette: s.palette,
        }
    }
}

impl SplitColoring {
    pub fn new(base: Coloring, palette: Vec<Palette>) -> Result<Self> {
        if palette.len() != base.k() {
            return Err(Error::InvalidColoring(format!(
                "palette map has {} entries for {} colors",
                palette.len(),
                base.k()
            )));
        }
        Ok(Self { base, palette })
    }

    pub fn base(&self) -> &Coloring {
        &self.base
    }

    pub fn palette_of(&self, color: usize) -> Palette {
        self.palette[color]
    }

    pub fn palettes(&self) -> &[Palette] {
        &self.palette
    }

    /// Number of colors of each palette in the map (`n1`, `n2`).
    pub fn palette_sizes(&self) -> (usize, usize) {
        let a1 = self.palette.iter().filter(|&&p| p == Palette::A1).count();
        (a1, self.palette.len() - a1)
    }

    /// Checks length and that roots use `A1` colors and fresh vertices `A2`.
    pub fn check_for(&self, g: &Graph) -> Result<()> {
        self.base.check_for(g)?;
        let labels = g.labels().ok_or(Error::Unlabeled)?;
        for (v, (&kind, &c)) in labels.iter().zip(self.base.colors()).enumerate() {
            let want = match kind {
                VertexKind::Root => Palette::A1,
                VertexKind::Fresh => Palette::A2,
            };
            if self.palette[c] != want {
                return Err(Error::InvalidColoring(format!(
                    "{kind:?} vertex {v} has color {c} from palette {:?}",
                    self.palette[c]
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    /// Connected, at most the budgeted number of colors, no unique color.
    Violation,
    /// `color` is the only color appearing exactly once; `load` counts the
    /// distinct `A1` and `A2` colors present.
    Threat { color: usize, load: (usize, usize) },
}

/// A connected vertex set certifying a violation or a threat.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub vertices: VertexSet,
    /// Color → number of occurrences inside `vertices`.
    pub colors: BTreeMap<usize, usize>,
}

impl Witness {
    pub(crate) fn violation(f: &Coloring, vertices: VertexSet) -> Self {
        let colors = f.histogram(vertices.as_slice());
        Self {
            kind: WitnessKind::Violation,
            vertices,
            colors,
        }
    }
}

/// Outcome of a centeredness check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "VerdictFile", into = "VerdictFile")]
pub enum Verdict {
    Centered,
    Violated { witness: Witness },
}

// Internally tagged enums cannot read integer map keys back, so the
// `{"verdict": ..., "witness": ...}` shape goes through a plain struct.
#[derive(Serialize, Deserialize)]
struct VerdictFile {
    verdict: VerdictTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<Witness>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum VerdictTag {
    Centered,
    Violated,
}

impl TryFrom<VerdictFile> for Verdict {
    type Error = String;
    fn try_from(f: VerdictFile) -> std::result::Result<Self, String> {
        match (f.verdict, f.witness) {
            (VerdictTag::Centered, None) => Ok(Verdict::Centered),
            (VerdictTag::Violated, Some(witness)) => Ok(Verdict::Violated { witness }),
            (VerdictTag::Centered, Some(_)) => Err("a centered verdict carries no witness".into()),
            (VerdictTag::Violated, None) => Err("a violated verdict needs a witness".into()),
        }
    }
}

impl From<Verdict> for VerdictFile {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Centered => VerdictFile {
                verdict: VerdictTag::Centered,
                witness: None,
            },
            Verdict::Violated { witness } => VerdictFile {
                verdict: VerdictTag::Violated,
                witness: Some(witness),
            },
        }
    }
}

impl Verdict {
    pub fn is_centered(&self) -> bool {
        matches!(self, Verdict::Centered)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Centered => None,
            Verdict::Violated { witness } => Some(witness),
        }
    }
}
