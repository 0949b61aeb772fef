use std::collections::BTreeMap;

use super::StatsError;

const EDGE_SLACK: f64 = 1e-9;

/// 1-based bin of a percentile among `k` equal-width bins, numbered bottom
/// up: bin `j` holds `((j−1)·100/k, j·100/k]`, with bin 1 also taking 0.
pub fn bin_of(percentile: f64, k: usize) -> usize {
    let scaled = percentile * k as f64 / 100.0;
    (scaled - EDGE_SLACK).ceil().clamp(1.0, k as f64) as usize
}

/// Assigns every researcher to one of `k` percentile bins.
pub fn bin_by_percentile(
    percentiles: &BTreeMap<String, f64>,
    k: usize,
) -> Result<BTreeMap<String, usize>, StatsError> {
    if k < 2 {
        return Err(StatsError::TooFewBins(k));
    }
    percentiles
        .iter()
        .map(|(id, &p)| {
            if !(0.0..=100.0).contains(&p) {
                return Err(StatsError::PercentileOutOfRange {
                    id: id.clone(),
                    percentile: p,
                });
            }
            Ok((id.clone(), bin_of(p, k)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn percentiles(values: impl IntoIterator<Item = f64>) -> BTreeMap<String, f64> {
        values
            .into_iter()
            .enumerate()
            .map(|(i, p)| (format!("r{i:03}"), p))
            .collect()
    }

    fn sizes(bins: &BTreeMap<String, usize>, k: usize) -> Vec<usize> {
        let mut sizes = vec![0; k];
        for &b in bins.values() {
            sizes[b - 1] += 1;
        }
        sizes
    }

    #[test]
    fn ten_distinct_researchers_fill_each_decile() {
        // percentiles 100·i/9
        let p = percentiles((0..10).map(|i| 100.0 * i as f64 / 9.0));
        assert_eq!(sizes(&bin_by_percentile(&p, 10).unwrap(), 10), [1; 10]);
    }

    #[test]
    fn extremes_land_in_first_and_last_bins() {
        assert_eq!(bin_of(0.0, 10), 1);
        assert_eq!(bin_of(100.0, 10), 10);
        assert_eq!(bin_of(10.0, 10), 1);
        assert_eq!(bin_of(10.000001, 10), 2);
        assert_eq!(bin_of(25.0, 4), 1);
    }

    #[test]
    fn quartiles_of_twenty_one_distinct_values() {
        let p = percentiles((0..21).map(|i| 5.0 * i as f64));
        assert_eq!(sizes(&bin_by_percentile(&p, 4).unwrap(), 4), [6, 5, 5, 5]);
    }

    #[test]
    fn rejects_bad_arguments() {
        let p = percentiles([50.0]);
        assert_eq!(bin_by_percentile(&p, 1), Err(StatsError::TooFewBins(1)));
        assert!(bin_by_percentile(&percentiles([101.0]), 4).is_err());
    }
}
