use serde::{Deserialize, Serialize};

use super::IndicatorError;
use crate::corpus::AuthorSlot;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeId {
    /// Every co-author receives `1/n`.
    #[default]
    EqualFraction,
    /// Position-dependent shares that favour first and last authors.
    BylineWeighted,
}

/// Shares used by [`WeightScheme::BylineWeighted`].
///
/// When the first and last authors share an organization they each receive
/// `same_org_outer` and the middle authors split `same_org_middle_pool`.
/// Otherwise first and last receive `outer`, second and second-to-last
/// receive `inner`, and everyone else splits `rest_pool`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BylineShares {
    pub same_org_outer: f64,
    pub same_org_middle_pool: f64,
    pub outer: f64,
    pub inner: f64,
    pub rest_pool: f64,
}

impl Default for BylineShares {
    fn default() -> Self {
        Self {
            same_org_outer: 0.40,
            same_org_middle_pool: 0.20,
            outer: 0.30,
            inner: 0.15,
            rest_pool: 0.10,
        }
    }
}

impl BylineShares {
    pub fn check(&self) -> Result<(), IndicatorError> {
        let same = 2.0 * self.same_org_outer + self.same_org_middle_pool;
        let diff = 2.0 * self.outer + 2.0 * self.inner + self.rest_pool;
        let parts = [
            self.same_org_outer,
            self.same_org_middle_pool,
            self.outer,
            self.inner,
            self.rest_pool,
        ];
        if parts.iter().any(|s| !(0.0..=1.0).contains(s)) {
            return Err(IndicatorError::InvalidShares(
                "every share must lie in [0, 1]".into(),
            ));
        }
        if (same - 1.0).abs() > 1e-12 || (diff - 1.0).abs() > 1e-12 {
            return Err(IndicatorError::InvalidShares(format!(
                "same-organization total {same}, different-organization total {diff}"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum WeightScheme {
    EqualFraction,
    BylineWeighted(BylineShares),
}

impl WeightScheme {
    pub fn id(&self) -> SchemeId {
        match self {
            WeightScheme::EqualFraction => SchemeId::EqualFraction,
            WeightScheme::BylineWeighted(_) => SchemeId::BylineWeighted,
        }
    }
}

impl From<SchemeId> for WeightScheme {
    fn from(id: SchemeId) -> Self {
        match id {
            SchemeId::EqualFraction => WeightScheme::EqualFraction,
            SchemeId::BylineWeighted => WeightScheme::BylineWeighted(BylineShares::default()),
        }
    }
}

/// One weight per byline slot, in byline order, summing to 1.
///
/// Byline weighting needs at least four authors; shorter bylines fall back
/// to equal fractions. With exactly four authors whose first and last
/// organizations differ there is nobody left for the residual pool, so the
/// four named shares are rescaled to sum to 1. Any configuration other than
/// "first and last share an organization" takes the different-organization
/// branch.
pub fn fractional_weights(
    byline: &[AuthorSlot],
    scheme: &WeightScheme,
) -> Result<Vec<f64>, IndicatorError> {
    let n = byline.len();
    if n == 0 {
        return Err(IndicatorError::EmptyByline);
    }
    let shares = match scheme {
        WeightScheme::BylineWeighted(shares) if n >= 4 => shares,
        _ => return Ok(vec![1.0 / n as f64; n]),
    };

    let mut weights = vec![0.0; n];
    if byline[0].organization_id == byline[n - 1].organization_id {
        let middle = shares.same_org_middle_pool / (n - 2) as f64;
        weights[1..n - 1].fill(middle);
        weights[0] = shares.same_org_outer;
        weights[n - 1] = shares.same_org_outer;
    } else if n == 4 {
        let named = 2.0 * (shares.outer + shares.inner);
        weights[0] = shares.outer / named;
        weights[1] = shares.inner / named;
        weights[2] = shares.inner / named;
        weights[3] = shares.outer / named;
    } else {
        let rest = shares.rest_pool / (n - 4) as f64;
        weights[2..n - 2].fill(rest);
        weights[0] = shares.outer;
        weights[1] = shares.inner;
        weights[n - 2] = shares.inner;
        weights[n - 1] = shares.outer;
    }
    Ok(weights)
}
