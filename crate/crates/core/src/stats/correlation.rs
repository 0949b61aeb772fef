use super::StatsError;

/// A continuous variable paired with a binary one.
#[derive(Clone, Debug, PartialEq)]
pub struct PointBiserialInputs {
    values: Vec<f64>,
    dummies: Vec<bool>,
}

impl PointBiserialInputs {
    pub fn new(values: Vec<f64>, dummies: Vec<bool>) -> Result<Self, StatsError> {
        if values.len() != dummies.len() {
            return Err(StatsError::LengthMismatch {
                values: values.len(),
                dummies: dummies.len(),
            });
        }
        if values.len() < 2 {
            return Err(StatsError::TooFewObservations(values.len()));
        }
        Ok(Self { values, dummies })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dummies(&self) -> &[bool] {
        &self.dummies
    }
}

/// `r = (mean₁ − mean₀) / SD · √(p·q)` with `p`, `q` the proportions of the
/// two classes and `SD` the population standard deviation of all values.
/// Equal to the Pearson correlation of the values with the 0/1 dummies.
pub fn point_biserial(inputs: &PointBiserialInputs) -> Result<f64, StatsError> {
    let n = inputs.values.len() as f64;
    let (mut sum1, mut n1, mut sum0, mut n0) = (0.0, 0usize, 0.0, 0usize);
    for (&x, &d) in inputs.values.iter().zip(&inputs.dummies) {
        if d {
            sum1 += x;
            n1 += 1;
        } else {
            sum0 += x;
            n0 += 1;
        }
    }
    if n1 == 0 || n0 == 0 {
        return Err(StatsError::SingleClass);
    }
    let mean = (sum1 + sum0) / n;
    let variance = inputs
        .values
        .iter()
        .map(|x| (x - mean) * (x - mean))
        .sum::<f64>()
        / n;
    let sd = variance.sqrt();
    if sd == 0.0 || !sd.is_finite() {
        return Err(StatsError::ZeroVariance);
    }
    let p = n1 as f64 / n;
    let q = n0 as f64 / n;
    let mean1 = sum1 / n1 as f64;
    let mean0 = sum0 / n0 as f64;
    Ok(((mean1 - mean0) / sd * (p * q).sqrt()).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs(values: &[f64], dummies: &[u8]) -> PointBiserialInputs {
        PointBiserialInputs::new(values.to_vec(), dummies.iter().map(|&d| d == 1).collect())
            .unwrap()
    }

    #[test]
    fn top_half_coincides_with_dummy() {
        let r = point_biserial(&inputs(&[1.0, 2.0, 3.0, 4.0], &[0, 0, 1, 1])).unwrap();
        // (3.5 - 1.5) / sqrt(1.25) * 0.5
        assert!((r - 0.894_427_190_999_915_9).abs() < 1e-15);
    }

    #[test]
    fn equal_class_means_give_zero() {
        let r = point_biserial(&inputs(&[1.0, 5.0, 2.0, 4.0], &[0, 0, 1, 1])).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn undefined_inputs_are_errors() {
        assert_eq!(
            point_biserial(&inputs(&[1.0, 2.0, 3.0], &[1, 1, 1])),
            Err(StatsError::SingleClass)
        );
        assert_eq!(
            point_biserial(&inputs(&[2.0, 2.0, 2.0], &[0, 1, 1])),
            Err(StatsError::ZeroVariance)
        );
        assert_eq!(
            PointBiserialInputs::new(vec![1.0], vec![true]),
            Err(StatsError::TooFewObservations(1))
        );
        assert!(matches!(
            PointBiserialInputs::new(vec![1.0, 2.0], vec![true]),
            Err(StatsError::LengthMismatch { .. })
        ));
    }
}
