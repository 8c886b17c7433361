//! Pairing a character against a window of sequence terms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CharError, Character, CircleValue};
use crate::tseq::{Sequence, SequenceRecipe};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub n: u64,
    /// Angle of `(d_n, χ)`; exact fractions or `~decimal`.
    pub angle: String,
    pub exact: bool,
    /// `|1 − e^{2πiθ}|`.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub recipe: String,
    pub character: String,
    pub window: (u64, u64),
    pub points: Vec<ScanPoint>,
    pub max_deviation: f64,
}

fn angles(seq: &Sequence, chi: &Character, lo: u64, hi: u64) -> Result<Vec<(u64, CircleValue)>, CharError> {
    if lo > hi {
        return Err(CharError::Window(format!("[{lo}, {hi}] is empty")));
    }
    if **seq.ambient() != **chi.spec() {
        return Err(CharError::SpecMismatch);
    }
    (lo..=hi).into_par_iter().map(|n| Ok((n, chi.pair(&seq.term(n)?)?))).collect()
}

/// Deviations `|1 − (d_n, χ)|` for `n` in `window`.
pub fn convergence_scan(recipe: &SequenceRecipe, chi: &Character, window: (u64, u64)) -> Result<ScanReport, CharError> {
    let seq = Sequence::new(recipe.clone())?;
    let points: Vec<ScanPoint> = angles(&seq, chi, window.0, window.1)?
        .into_iter()
        .map(|(n, a)| ScanPoint { n, angle: a.to_string(), exact: a.as_exact().is_some(), deviation: a.deviation() })
        .collect();
    let max_deviation = points.iter().map(|p| p.deviation).fold(0.0, f64::max);
    Ok(ScanReport { recipe: recipe.tag().into(), character: chi.to_string(), window, points, max_deviation })
}

/// Three-valued windowed shadow of `(d_n, χ) → 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Membership {
    /// Every pairing in the window is exactly trivial.
    MemberInWindow,
    /// First index whose exact nonzero pairing deviates beyond the tolerance.
    Rejected {
        index: u64,
        angle: String,
    },
    Inconclusive {
        max_deviation: f64,
    },
}

/// Checks `n ∈ [tail_start, tail_start + len]`.
pub fn sd_membership(
    recipe: &SequenceRecipe,
    chi: &Character,
    tail_start: u64,
    len: u64,
    tolerance: f64,
) -> Result<Membership, CharError> {
    let seq = Sequence::new(recipe.clone())?;
    let hi = tail_start.checked_add(len).ok_or_else(|| CharError::Window("window end overflows".into()))?;
    let angles = angles(&seq, chi, tail_start, hi)?;
    for (n, a) in &angles {
        if a.as_exact().is_some() && !a.is_exact_zero() && a.deviation() > tolerance {
            return Ok(Membership::Rejected { index: *n, angle: a.to_string() });
        }
    }
    if angles.iter().all(|(_, a)| a.is_exact_zero()) {
        return Ok(Membership::MemberInWindow);
    }
    let max_deviation = angles.iter().map(|(_, a)| a.deviation()).fold(0.0, f64::max);
    Ok(Membership::Inconclusive { max_deviation })
}
