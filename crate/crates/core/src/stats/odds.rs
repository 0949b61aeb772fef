use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma_ur;

use super::StatsError;

/// Two-sided 95% normal quantile as used by the log-method interval.
pub const Z_95: f64 = 1.96;

/// Case-control 2×2 table. Cases authored at least one highly-cited article,
/// controls authored none; the exposure is top-scientist status.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    /// Top-scientist cases.
    pub a: u64,
    /// Non-top-scientist cases.
    pub b: u64,
    /// Top-scientist controls.
    pub c: u64,
    /// Non-top-scientist controls.
    pub d: u64,
}

impl ContingencyTable {
    pub fn new(a: u64, b: u64, c: u64, d: u64) -> Self {
        Self { a, b, c, d }
    }

    pub fn total(&self) -> u64 {
        self.a + self.b + self.c + self.d
    }

    pub fn has_zero_cell(&self) -> bool {
        [self.a, self.b, self.c, self.d].contains(&0)
    }

    fn is_degenerate(&self) -> bool {
        self.a + self.b == 0 || self.c + self.d == 0
    }

    /// Cells as reals, with 0.5 added to each when any cell is zero.
    fn cells(&self) -> ([f64; 4], bool) {
        let raw = [self.a, self.b, self.c, self.d].map(|x| x as f64);
        if self.has_zero_cell() {
            (raw.map(|x| x + 0.5), true)
        } else {
            (raw, false)
        }
    }

    /// `ln OR` and its variance `1/a + 1/b + 1/c + 1/d`.
    fn log_odds_ratio(&self) -> (f64, f64, bool) {
        let ([a, b, c, d], corrected) = self.cells();
        ((a * d / (b * c)).ln(), 1.0 / a + 1.0 / b + 1.0 / c + 1.0 / d, corrected)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OddsRatioMethod {
    /// Log-method interval on the observed cells.
    Woolf,
    /// Log-method interval after adding 0.5 to every cell.
    WoolfHaldaneAnscombe,
}

impl OddsRatioMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            OddsRatioMethod::Woolf => "woolf",
            OddsRatioMethod::WoolfHaldaneAnscombe => "woolf_haldane_anscombe",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OddsRatioResult {
    pub or_value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub method: OddsRatioMethod,
}

/// `OR = (a/b) / (c/d)` with a 95% interval `exp(ln OR ± 1.96·√(1/a+1/b+1/c+1/d))`.
/// A zero anywhere triggers the Haldane–Anscombe correction.
pub fn odds_ratio(table: &ContingencyTable) -> Result<OddsRatioResult, StatsError> {
    if table.is_degenerate() {
        return Err(StatsError::DegenerateStratum { index: 0 });
    }
    let (ln_or, variance, corrected) = table.log_odds_ratio();
    let half_width = Z_95 * variance.sqrt();
    Ok(OddsRatioResult {
        or_value: ln_or.exp(),
        ci_low: (ln_or - half_width).exp(),
        ci_high: (ln_or + half_width).exp(),
        method: if corrected {
            OddsRatioMethod::WoolfHaldaneAnscombe
        } else {
            OddsRatioMethod::Woolf
        },
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HomogeneityMethod {
    /// Inverse-variance weighted dispersion of the stratum log odds ratios.
    #[default]
    Woolf,
    /// Observed versus expected top-scientist cases under the
    /// Mantel–Haenszel common odds ratio.
    BreslowDay,
}

impl HomogeneityMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            HomogeneityMethod::Woolf => "woolf",
            HomogeneityMethod::BreslowDay => "breslow_day",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomogeneityResult {
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    pub method: HomogeneityMethod,
}

/// Upper tail of the chi-square distribution, `Q(df/2, x/2)`.
pub fn chi_square_sf(x: f64, degrees_of_freedom: usize) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    gamma_ur(degrees_of_freedom as f64 / 2.0, x / 2.0)
}

/// Woolf test of equal odds ratios across strata, `df = strata − 1`.
pub fn homogeneity_test(strata: &[ContingencyTable]) -> Result<HomogeneityResult, StatsError> {
    homogeneity_test_with(strata, HomogeneityMethod::Woolf)
}

pub fn homogeneity_test_with(
    strata: &[ContingencyTable],
    method: HomogeneityMethod,
) -> Result<HomogeneityResult, StatsError> {
    if strata.len() < 2 {
        return Err(StatsError::TooFewStrata(strata.len()));
    }
    if let Some(index) = strata.iter().position(ContingencyTable::is_degenerate) {
        return Err(StatsError::DegenerateStratum { index });
    }
    let chi_square = match method {
        HomogeneityMethod::Woolf => woolf_statistic(strata),
        HomogeneityMethod::BreslowDay => breslow_day_statistic(strata)?,
    };
    let degrees_of_freedom = strata.len() - 1;
    Ok(HomogeneityResult {
        chi_square,
        degrees_of_freedom,
        p_value: chi_square_sf(chi_square, degrees_of_freedom),
        method,
    })
}

fn woolf_statistic(strata: &[ContingencyTable]) -> f64 {
    let logs: Vec<(f64, f64)> = strata
        .iter()
        .map(|t| {
            let (ln_or, variance, _) = t.log_odds_ratio();
            (ln_or, 1.0 / variance)
        })
        .collect();
    let total_weight: f64 = logs.iter().map(|(_, w)| w).sum();
    let pooled = logs.iter().map(|(l, w)| l * w).sum::<f64>() / total_weight;
    logs.iter()
        .map(|(l, w)| w * (l - pooled) * (l - pooled))
        .sum()
}

fn breslow_day_statistic(strata: &[ContingencyTable]) -> Result<f64, StatsError> {
    let (mut num, mut den) = (0.0, 0.0);
    for t in strata {
        let n = t.total() as f64;
        num += (t.a * t.d) as f64 / n;
        den += (t.b * t.c) as f64 / n;
    }
    if num == 0.0 || den == 0.0 {
        return Err(StatsError::UndefinedPooledOddsRatio);
    }
    let pooled = num / den;

    let mut statistic = 0.0;
    for t in strata {
        let cases = (t.a + t.b) as f64;
        let controls = (t.c + t.d) as f64;
        let exposed = (t.a + t.c) as f64;
        let expected = expected_exposed_cases(pooled, cases, controls, exposed);
        let cells = [
            expected,
            cases - expected,
            exposed - expected,
            controls - exposed + expected,
        ];
        if cells.iter().any(|&x| x <= 0.0) {
            // margins force the cell, so the stratum carries no information
            continue;
        }
        let variance = 1.0 / cells.iter().map(|x| 1.0 / x).sum::<f64>();
        let diff = t.a as f64 - expected;
        statistic += diff * diff / variance;
    }
    Ok(statistic)
}

/// Expected `a` with fixed margins such that `A·D / (B·C) = odds_ratio`:
/// the root of `(1 − ψ)A² + (n₀ − m₁ + ψ(n₁ + m₁))A − ψ n₁ m₁ = 0` lying in
/// `[max(0, m₁ − n₀), min(n₁, m₁)]`.
fn expected_exposed_cases(odds_ratio: f64, cases: f64, controls: f64, exposed: f64) -> f64 {
    let lo = (exposed - controls).max(0.0);
    let hi = cases.min(exposed);
    let qa = 1.0 - odds_ratio;
    let qb = controls - exposed + odds_ratio * (cases + exposed);
    let qc = -odds_ratio * cases * exposed;
    if qa.abs() < 1e-12 {
        return (-qc / qb).clamp(lo, hi);
    }
    let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
    let roots = [(-qb + disc) / (2.0 * qa), (-qb - disc) / (2.0 * qa)];
    let slack = 1e-9 * (1.0 + hi);
    roots
        .into_iter()
        .find(|r| *r >= lo - slack && *r <= hi + slack)
        .unwrap_or(roots[0])
        .clamp(lo, hi)
}
