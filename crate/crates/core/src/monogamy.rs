//! Monogamy residuals `G^d(ρ_{p|rest}) − G^d(ρ_{pq}) − G^d(ρ_{ps})` and seeded
//! Monte Carlo campaigns over Haar-random states.
//!
//! The left term is exact (`d^d det ρ_p`). The right terms are convex-roof
//! upper bounds, so a computed residual never exceeds the true one: a residual
//! at or above `-tol` confirms the inequality for that state, while a residual
//! below `-tol` only counts as a violation when both right terms are known
//! exactly. Otherwise it is inconclusive.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::error::Result;
use crate::measures::{g_concurrence_marginal, GValue};
use crate::roof::{roof_estimate, roof_upper_bound, RoofConfig, RoofMeasure};
use crate::sampling::{derive_seed, haar_random_tripartite};
use crate::state::{Party, PureTripartiteState};

/// Residuals below `-VIOLATION_TOL` are not attributed to roof noise.
pub const VIOLATION_TOL: f64 = 1e-7;

/// Samples evaluated per parallel chunk before rows are handed to the sink.
const CAMPAIGN_CHUNK: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Satisfied,
    Inconclusive,
    Violated,
}

/// Roof bound for one two-party marginal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairBound {
    pub value: GValue<f64>,
    pub converged: bool,
    /// The bound equals the true roof value: the marginal is pure, or the
    /// bound is already below the roof tolerance.
    pub exact: bool,
}

/// The three terms of the inequality for one pivot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonogamyReport {
    pub pivot: Party,
    /// The two partners, in the order of `rhs12` and `rhs13`.
    pub partners: [Party; 2],
    pub dim: usize,
    pub seed: u64,
    pub lhs_pow_d: f64,
    pub rhs12_pow_d: f64,
    pub rhs13_pow_d: f64,
    pub residual: f64,
    pub lhs_g: f64,
    pub rhs12_g: f64,
    pub rhs13_g: f64,
    pub roof_converged: [bool; 2],
    pub rhs_exact: [bool; 2],
    pub verdict: Verdict,
}

impl MonogamyReport {
    fn assemble(dim: usize, seed: u64, pivot: Party, lhs: GValue<f64>, rhs: [PairBound; 2]) -> Self {
        let (q, s) = pivot.others();
        let residual = lhs.g_pow_d - rhs[0].value.g_pow_d - rhs[1].value.g_pow_d;
        let rhs_exact = [rhs[0].exact, rhs[1].exact];
        let verdict = classify(residual, rhs_exact, VIOLATION_TOL);
        MonogamyReport {
            pivot,
            partners: [q, s],
            dim,
            seed,
            lhs_pow_d: lhs.g_pow_d,
            rhs12_pow_d: rhs[0].value.g_pow_d,
            rhs13_pow_d: rhs[1].value.g_pow_d,
            residual,
            lhs_g: lhs.g,
            rhs12_g: rhs[0].value.g,
            rhs13_g: rhs[1].value.g,
            roof_converged: [rhs[0].converged, rhs[1].converged],
            rhs_exact,
            verdict,
        }
    }

    /// Verdict at a custom tolerance.
    pub fn verdict_at(&self, tol: f64) -> Verdict {
        classify(self.residual, self.rhs_exact, tol)
    }
}

fn classify(residual: f64, rhs_exact: [bool; 2], tol: f64) -> Verdict {
    if residual >= -tol {
        Verdict::Satisfied
    } else if rhs_exact[0] && rhs_exact[1] {
        Verdict::Violated
    } else {
        Verdict::Inconclusive
    }
}

/// Seed for the roof of the unordered pair `{a, b}`, shared by every pivot
/// that needs it.
fn pair_seed(seed: u64, a: Party, b: Party) -> u64 {
    derive_seed(seed, &[(a.label() * b.label()) as u64])
}

/// Roof upper bound on `G(ρ_ab)`.
pub fn pair_bound(state: &PureTripartiteState<f64>, a: Party, b: Party, config: &RoofConfig) -> Result<PairBound> {
    let rho = state.partial_trace(&[a, b])?;
    let cfg = config.clone().with_seed(pair_seed(config.seed, a, b));
    let res = roof_upper_bound(&rho, state.dim(), &cfg)?;
    let exact = res.best_decomposition.members.len() == 1 || res.upper_bound.g <= cfg.tol;
    Ok(PairBound { value: res.upper_bound, converged: res.converged, exact })
}

/// `G^d` across the cut `pivot | rest`.
pub fn pivot_lhs(state: &PureTripartiteState<f64>, pivot: Party) -> Result<GValue<f64>> {
    g_concurrence_marginal(&state.partial_trace(&[pivot])?, state.dim())
}

/// The inequality's three terms and residual for one pivot.
pub fn monogamy_residual(
    state: &PureTripartiteState<f64>,
    pivot: Party,
    config: &RoofConfig,
) -> Result<MonogamyReport> {
    let (q, s) = pivot.others();
    let lhs = pivot_lhs(state, pivot)?;
    let rhs = [pair_bound(state, pivot, q, config)?, pair_bound(state, pivot, s, config)?];
    Ok(MonogamyReport::assemble(state.dim(), config.seed, pivot, lhs, rhs))
}

/// Reports for all three pivots, computing each two-party roof once.
/// Identical to three calls of [`monogamy_residual`].
pub fn all_pivots(state: &PureTripartiteState<f64>, config: &RoofConfig) -> Result<[MonogamyReport; 3]> {
    let b12 = pair_bound(state, Party::One, Party::Two, config)?;
    let b13 = pair_bound(state, Party::One, Party::Three, config)?;
    let b23 = pair_bound(state, Party::Two, Party::Three, config)?;
    let d = state.dim();
    let seed = config.seed;
    Ok([
        MonogamyReport::assemble(d, seed, Party::One, pivot_lhs(state, Party::One)?, [b12, b13]),
        MonogamyReport::assemble(d, seed, Party::Two, pivot_lhs(state, Party::Two)?, [b12, b23]),
        MonogamyReport::assemble(d, seed, Party::Three, pivot_lhs(state, Party::Three)?, [b13, b23]),
    ])
}

/// CKW residual with the squared qudit concurrence `C² = 2(1 − tr ρ²)` in
/// place of `G^d`, for three qutrits. Right terms are roof upper bounds.
pub fn ckw_concurrence_residual(state: &PureTripartiteState<f64>) -> Result<f64> {
    ckw_concurrence_residual_with(state, &RoofConfig::default())
}

pub fn ckw_concurrence_residual_with(state: &PureTripartiteState<f64>, config: &RoofConfig) -> Result<f64> {
    if state.dim() != 3 {
        return Err(Error::WrongDimension { expected: 3, actual: state.dim() });
    }
    let rho1 = state.partial_trace(&[Party::One])?;
    let lhs = 2.0 * (1.0 - rho1.purity());
    let mut rhs = 0.0;
    for other in [Party::Two, Party::Three] {
        let rho = state.partial_trace(&[Party::One, other])?;
        let cfg = config.clone().with_seed(pair_seed(config.seed, Party::One, other));
        let c = roof_estimate(&rho, 3, RoofMeasure::Concurrence, &cfg)?.value;
        rhs += c * c;
    }
    Ok(lhs - rhs)
}

/// One CSV row; field order is the column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignRow {
    pub sample_index: u64,
    pub dim: usize,
    pub pivot: usize,
    pub lhs_pow_d: f64,
    pub rhs12_pow_d: f64,
    pub rhs13_pow_d: f64,
    pub residual: f64,
    pub converged12: bool,
    pub converged13: bool,
}

impl CampaignRow {
    fn from_report(sample_index: u64, report: &MonogamyReport) -> Self {
        CampaignRow {
            sample_index,
            dim: report.dim,
            pivot: report.pivot.label(),
            lhs_pow_d: report.lhs_pow_d,
            rhs12_pow_d: report.rhs12_pow_d,
            rhs13_pow_d: report.rhs13_pow_d,
            residual: report.residual,
            converged12: report.roof_converged[0],
            converged13: report.roof_converged[1],
        }
    }
}

/// Parameters of a Monte Carlo campaign. The roof seed is derived per sample,
/// so `roof.seed` is ignored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Campaign {
    pub dim: usize,
    pub samples: u64,
    pub seed: u64,
    pub roof: RoofConfig,
    pub tol: f64,
}

impl Campaign {
    pub fn new(dim: usize, samples: u64, seed: u64, roof: RoofConfig) -> Self {
        Campaign { dim, samples, seed, roof, tol: VIOLATION_TOL }
    }

    /// The state and roof seed of sample `index`.
    pub fn sample(&self, index: u64) -> Result<(PureTripartiteState<f64>, RoofConfig)> {
        let state = haar_random_tripartite(self.dim, derive_seed(self.seed, &[index, 0]))?;
        let roof = self.roof.clone().with_seed(derive_seed(self.seed, &[index, 1]));
        Ok((state, roof))
    }

    fn evaluate(&self, index: u64) -> Result<Vec<(CampaignRow, Verdict)>> {
        let (state, roof) = self.sample(index)?;
        Ok(all_pivots(&state, &roof)?
            .iter()
            .map(|r| (CampaignRow::from_report(index, r), r.verdict_at(self.tol)))
            .collect())
    }
}

/// Aggregates over every row of a campaign.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignSummary {
    pub dim: usize,
    pub samples: u64,
    pub seed: u64,
    pub tol: f64,
    pub min_residual: f64,
    pub mean_residual: f64,
    /// Rows with residual below `-tol`.
    pub below_tol: usize,
    /// Rows below `-tol` whose right terms are exact.
    pub violations: usize,
    /// Samples where any roof search did not converge.
    pub nonconverged_samples: usize,
    pub rows: Vec<CampaignRow>,
}

/// Runs samples `start..campaign.samples`, handing each finished chunk of rows
/// to `sink` in sample order. Restarting with `start` set to the first
/// missing index reproduces the remaining rows exactly.
pub fn run_campaign<F>(campaign: &Campaign, start: u64, mut sink: F) -> Result<CampaignSummary>
where
    F: FnMut(&[CampaignRow]) -> Result<()>,
{
    if campaign.dim < 2 {
        return Err(Error::DimensionTooSmall(campaign.dim));
    }
    if campaign.samples == 0 {
        return Err(Error::Config("samples must be at least 1".into()));
    }
    let mut rows = Vec::new();
    let mut violations = 0;
    let mut nonconverged_samples = 0;
    let mut index = start;
    while index < campaign.samples {
        let end = (index + CAMPAIGN_CHUNK as u64).min(campaign.samples);
        let chunk: Vec<Vec<(CampaignRow, Verdict)>> =
            (index..end).into_par_iter().map(|i| campaign.evaluate(i)).collect::<Result<_>>()?;
        let start_len = rows.len();
        for sample in chunk {
            if sample.iter().any(|(r, _)| !(r.converged12 && r.converged13)) {
                nonconverged_samples += 1;
            }
            for (row, verdict) in sample {
                if verdict == Verdict::Violated {
                    violations += 1;
                }
                rows.push(row);
            }
        }
        sink(&rows[start_len..])?;
        index = end;
    }
    let min_residual = rows.iter().map(|r| r.residual).fold(f64::INFINITY, f64::min);
    let mean_residual =
        if rows.is_empty() { 0.0 } else { rows.iter().map(|r| r.residual).sum::<f64>() / rows.len() as f64 };
    let below_tol = rows.iter().filter(|r| r.residual < -campaign.tol).count();
    Ok(CampaignSummary {
        dim: campaign.dim,
        samples: campaign.samples,
        seed: campaign.seed,
        tol: campaign.tol,
        min_residual: if rows.is_empty() { 0.0 } else { min_residual },
        mean_residual,
        below_tol,
        violations,
        nonconverged_samples,
        rows,
    })
}

/// Runs a full campaign in memory at the default violation tolerance.
pub fn verify_campaign(dim: usize, samples: u64, seed: u64, roof: &RoofConfig) -> Result<CampaignSummary> {
    run_campaign(&Campaign::new(dim, samples, seed, roof.clone()), 0, |_| Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{antisymmetric_chi, ghz};

    #[test]
    fn classify_rules() {
        assert_eq!(classify(0.0, [false, false], 1e-7), Verdict::Satisfied);
        assert_eq!(classify(-5e-8, [false, false], 1e-7), Verdict::Satisfied);
        assert_eq!(classify(-1e-3, [false, true], 1e-7), Verdict::Inconclusive);
        assert_eq!(classify(-1e-3, [true, true], 1e-7), Verdict::Violated);
    }

    #[test]
    fn product_state_has_zero_residual() {
        let s = PureTripartiteState::<f64>::from_terms(2, &[((0, 0, 0), crate::scalar::cr(1.0))]).unwrap();
        let r = monogamy_residual(&s, Party::One, &RoofConfig::default()).unwrap();
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.rhs_exact, [true, true]);
    }

    #[test]
    fn all_pivots_matches_single_calls() {
        let s = haar_random_tripartite::<f64>(2, 5).unwrap();
        let cfg = RoofConfig { restarts: 4, max_iters: 400, ..RoofConfig::default() };
        let all = all_pivots(&s, &cfg).unwrap();
        for (p, report) in Party::ALL.iter().zip(&all) {
            assert_eq!(&monogamy_residual(&s, *p, &cfg).unwrap(), report);
        }
    }

    #[test]
    fn ckw_needs_qutrits() {
        assert!(matches!(
            ckw_concurrence_residual(&ghz(2).unwrap()),
            Err(Error::WrongDimension { expected: 3, actual: 2 })
        ));
        assert!(ckw_concurrence_residual(&antisymmetric_chi()).unwrap() < 0.0);
    }

    #[test]
    fn campaign_rejects_empty() {
        assert!(verify_campaign(3, 0, 1, &RoofConfig::default()).is_err());
        assert!(verify_campaign(1, 1, 1, &RoofConfig::default()).is_err());
    }
}
