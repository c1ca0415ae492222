//! Closed-form success probabilities, rotation angles, iteration planning
//! and circuit-volume metrics.
//!
//! `n_items` is the search-space size `N = 2^n`, `blocks` is `B = 2^b`.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use serde::Serialize;
use thiserror::Error;

/// Slack allowed when an `asin` argument overshoots 1 through rounding.
const ASIN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{mode:?} search cannot reach probability {target}; the first arc peaks at {max}")]
    Infeasible { mode: SearchMode, target: f64, max: f64 },
    #[error("EQCV is undefined for success probability {0}")]
    UndefinedEqcv(f64),
}

type Result<T> = std::result::Result<T, AnalyticsError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Canonical Grover search.
    Gsa,
    /// All `B` partial searches run side by side; success is the matching
    /// block's.
    Qmp,
    /// One partial search with a random guess.
    Partial,
}

fn unit_sqrt(num: f64, den: f64) -> Result<f64> {
    let x = (num / den).sqrt();
    if x.is_nan() || x > 1.0 + ASIN_SLACK {
        return Err(AnalyticsError::Domain(format!("asin argument sqrt({num}/{den}) exceeds 1")));
    }
    Ok(x.min(1.0))
}

fn amplified(angle: f64, j: u64) -> f64 {
    ((2 * j + 1) as f64 * angle).sin().powi(2)
}

fn log2_exact(n_items: u64) -> Result<u32> {
    if n_items < 2 || !n_items.is_power_of_two() {
        return Err(AnalyticsError::Domain(format!("N = {n_items} is not 2^n with n >= 1")));
    }
    Ok(n_items.trailing_zeros())
}

/// Grover success after `j` iterations with `marked` of `n_items` targets.
pub fn p_gsa(n_items: u64, marked: u64, j: u64) -> Result<f64> {
    if marked == 0 || marked >= n_items {
        return Err(AnalyticsError::Domain(format!(
            "need 1 <= M < N, got M = {marked}, N = {n_items}"
        )));
    }
    Ok(amplified(unit_sqrt(marked as f64, n_items as f64)?.asin(), j))
}

/// Success of one random-guess partial search with `b` guessed bits, where
/// the correct block holds `marked_in_block` targets.
pub fn p_partial(n_items: u64, b: u32, marked_in_block: u64, j: u64) -> Result<f64> {
    let n = log2_exact(n_items)?;
    if b == 0 || b >= n {
        return Err(AnalyticsError::Domain(format!("need 1 <= b < n = {n}, got b = {b}")));
    }
    let blocks = 1u64 << b;
    Ok(p_qmp(n_items, blocks, marked_in_block, j)? / blocks as f64)
}

/// Success of the matching block when all `blocks` partial searches run in
/// parallel.
pub fn p_qmp(n_items: u64, blocks: u64, marked_in_block: u64, j: u64) -> Result<f64> {
    if n_items == 0 || blocks == 0 {
        return Err(AnalyticsError::Domain("N and B must be positive".into()));
    }
    if blocks as u128 * marked_in_block as u128 > n_items as u128 {
        return Err(AnalyticsError::Domain(format!(
            "B * M_i = {} exceeds N = {n_items}",
            blocks as u128 * marked_in_block as u128
        )));
    }
    let x = unit_sqrt(blocks as f64 * marked_in_block as f64, n_items as f64)?;
    Ok(amplified(x.asin(), j))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleReport {
    /// Per-iteration half-rotation of canonical Grover search.
    pub theta: f64,
    /// The same for a block of a `B`-way parallel partial search.
    pub theta_mp: f64,
    pub blocks: u64,
    pub n_items: u64,
    pub marked: u64,
}

pub fn rotation_angles(n_items: u64, blocks: u64, marked: u64) -> Result<AngleReport> {
    if marked == 0 || blocks == 0 {
        return Err(AnalyticsError::Domain("B and M must be positive".into()));
    }
    if blocks as u128 * marked as u128 > n_items as u128 {
        return Err(AnalyticsError::Domain(format!(
            "B * M = {} exceeds N = {n_items}",
            blocks as u128 * marked as u128
        )));
    }
    let theta = unit_sqrt(marked as f64, n_items as f64)?.asin();
    let theta_mp = unit_sqrt(blocks as f64 * marked as f64, n_items as f64)?.asin();
    assert!(theta_mp >= theta, "asin is increasing");
    Ok(AngleReport {
        theta,
        theta_mp,
        blocks,
        n_items,
        marked,
    })
}

/// Smallest `j` whose success reaches `p_target`, searching the first
/// rising arc `(2j + 1)θ ≤ π/2` plus the integer step just past its crest.
///
/// `blocks` is ignored in [`SearchMode::Gsa`]; in the other modes it must
/// be a power of two. Probabilities within 1e-12 of the target count as
/// reaching it.
pub fn min_iterations(p_target: f64, n_items: u64, blocks: u64, marked: u64, mode: SearchMode) -> Result<u64> {
    if !(0.0..=1.0).contains(&p_target) {
        return Err(AnalyticsError::Domain(format!("target probability {p_target} outside [0, 1]")));
    }
    let (scale, sq) = match mode {
        SearchMode::Gsa => (1.0, unit_sqrt(marked as f64, n_items as f64)?),
        SearchMode::Qmp | SearchMode::Partial => {
            if !blocks.is_power_of_two() {
                return Err(AnalyticsError::Domain(format!("B = {blocks} is not a power of two")));
            }
            if mode == SearchMode::Partial && blocks < 2 {
                return Err(AnalyticsError::Domain("partial search needs b >= 1".into()));
            }
            let scale = if mode == SearchMode::Partial { blocks as f64 } else { 1.0 };
            (scale, unit_sqrt(blocks as f64 * marked as f64, n_items as f64)?)
        }
    };
    let theta = sq.asin();
    if theta == 0.0 {
        return Err(AnalyticsError::Domain("no marked items".into()));
    }
    let prob = |j: u64| amplified(theta, j) / scale;
    let reached = |j: u64| prob(j) >= p_target - 1e-12;
    if reached(0) {
        return Ok(0);
    }
    // last j on the rising arc
    let arc_end = ((FRAC_PI_2 / theta - 1.0) / 2.0).floor().max(0.0) as u64;
    let needed = p_target * scale;
    if needed <= 1.0 {
        let phi = needed.sqrt().asin();
        let mut j = (((phi / theta) - 1.0) / 2.0).ceil().max(0.0) as u64;
        j = j.min(arc_end);
        while j > 0 && reached(j - 1) {
            j -= 1;
        }
        while j <= arc_end && !reached(j) {
            j += 1;
        }
        if j <= arc_end {
            return Ok(j);
        }
    }
    let crest = arc_end + 1;
    if reached(crest) {
        return Ok(crest);
    }
    Err(AnalyticsError::Infeasible {
        mode,
        target: p_target,
        max: prob(arc_end).max(prob(crest)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub b: u32,
    pub j: u64,
    pub p_gsa: f64,
    pub p_no_qmp: f64,
    pub p_qmp: f64,
}

/// Single-target success curves of the three methods for every `b` in
/// `b_values` and `j` in `0..=j_max`.
pub fn sweep_curves(n_items: u64, b_values: &[u32], j_max: u64) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(b_values.len() * (j_max as usize + 1));
    for &b in b_values {
        for j in 0..=j_max {
            rows.push(SweepRow {
                b,
                j,
                p_gsa: p_gsa(n_items, 1, j)?,
                p_no_qmp: p_partial(n_items, b, 1, j)?,
                p_qmp: p_qmp(n_items, 1 << b, 1, j)?,
            });
        }
    }
    Ok(rows)
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "b,j,p_gsa,p_no_qmp,p_qmp")?;
    for r in rows {
        writeln!(w, "{},{},{},{},{}", r.b, r.j, r.p_gsa, r.p_no_qmp, r.p_qmp)?;
    }
    Ok(())
}

/// Resource report of one implementation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricReport {
    pub nq: u64,
    pub depth: u64,
    /// `nq * depth`
    pub qcv: u64,
    pub success: f64,
    /// `qcv / success`
    pub eqcv: f64,
    /// Circuits served by one execution.
    pub trf: u64,
    /// Fraction of trials with the correct outcome.
    pub pst: f64,
}

pub fn metrics(nq: u64, depth: u64, success: f64, trf: u64) -> Result<MetricReport> {
    if !(success > 0.0 && success <= 1.0) {
        return Err(AnalyticsError::UndefinedEqcv(success));
    }
    let qcv = nq * depth;
    Ok(MetricReport {
        nq,
        depth,
        qcv,
        success,
        eqcv: qcv as f64 / success,
        trf,
        pst: success,
    })
}

/// Probability of a successful trial from raw trial counts.
pub fn pst(successful: u64, total: u64) -> Result<f64> {
    if total == 0 || successful > total {
        return Err(AnalyticsError::Domain(format!("{successful} of {total} trials")));
    }
    Ok(successful as f64 / total as f64)
}
