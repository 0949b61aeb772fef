use rand::Rng;
use rand_distr::{Distribution, Gamma, LogNormal, Poisson};
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

/// Discrete heavy-tailed family for citation counts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CitationModel {
    /// `⌊X⌋` with `ln X ~ N(μ, σ²)`; `μ` is set so that `E[X]` is the
    /// field's mean.
    DiscretizedLognormal { sigma: f64 },
    /// Gamma–Poisson mixture with the field mean and shape `dispersion`.
    NegativeBinomial { dispersion: f64 },
}

impl Default for CitationModel {
    fn default() -> Self {
        CitationModel::DiscretizedLognormal { sigma: 1.0 }
    }
}

/// The citation law of one field, after any multiplier.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldCitations {
    pub model: CitationModel,
    /// Mean of the underlying continuous intensity.
    pub intensity_mean: f64,
}

impl FieldCitations {
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            intensity_mean: self.intensity_mean * factor,
            ..self
        }
    }

    /// `μ` of the lognormal.
    pub fn log_location(&self) -> Option<f64> {
        match self.model {
            CitationModel::DiscretizedLognormal { sigma } => {
                Some(self.intensity_mean.ln() - sigma * sigma / 2.0)
            }
            CitationModel::NegativeBinomial { .. } => None,
        }
    }

    /// Expected citation count of one draw.
    pub fn model_mean(&self) -> f64 {
        match self.model {
            CitationModel::DiscretizedLognormal { sigma } => {
                // E⌊X⌋ = Σ_{k≥1} P(X ≥ k)
                let mu = self.log_location().expect("lognormal");
                let mut total = 0.0;
                for k in 1..10_000_000u64 {
                    let tail = 0.5 * erfc(((k as f64).ln() - mu) / (sigma * std::f64::consts::SQRT_2));
                    total += tail;
                    if tail < 1e-13 {
                        break;
                    }
                }
                total
            }
            CitationModel::NegativeBinomial { .. } => self.intensity_mean,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self.model {
            CitationModel::DiscretizedLognormal { sigma } => {
                let mu = self.log_location().expect("lognormal");
                let x: f64 = LogNormal::new(mu, sigma).expect("checked sigma").sample(rng);
                x.floor() as u64
            }
            CitationModel::NegativeBinomial { dispersion } => {
                let gamma = Gamma::new(dispersion, self.intensity_mean / dispersion)
                    .expect("checked dispersion");
                let lambda: f64 = gamma.sample(rng);
                if lambda <= 0.0 {
                    return 0;
                }
                let draw: f64 = Poisson::new(lambda).expect("positive rate").sample(rng);
                draw as u64
            }
        }
    }
}
