//! Covariance rank with MATLAB-compatible tolerance, memory capacity, and a
//! couple of aggregate statistics used by the experiment protocols.

use nalgebra::{DMatrix, DVector};

use crate::dynamics::{generate_uniform_noise, TimeSeries};
use crate::readout::{Ridge, StateMatrix};
use crate::{Error, Result};

/// Unit-in-the-last-place spacing at `x` (the gap to the next double).
pub fn ulp(x: f64) -> f64 {
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let x = x.abs();
    f64::from_bits(x.to_bits() + 1) - x
}

/// Which matrix the singular-value threshold rule is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankMode {
    /// Rank of the covariance matrix ΩᵀΩ.
    #[default]
    Covariance,
    /// Rank of Ω itself (sensitivity check; thresholds half the exponent range).
    Direct,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankResult {
    pub rank: usize,
    /// Singular values of the analyzed matrix, descending.
    pub singular_values: Vec<f64>,
    pub threshold: f64,
}

fn rank_of(matrix: &DMatrix<f64>) -> RankResult {
    let d_max = matrix.nrows().max(matrix.ncols());
    let svd = matrix.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let threshold = d_max as f64 * ulp(sigma_max);
    let rank = sv.iter().filter(|&&s| s > threshold).count();
    RankResult { rank, singular_values: sv, threshold }
}

/// Number of singular values of ΩᵀΩ above `max(dim) · ulp(σ_max)` — the
/// count of effectively independent basis signals.
pub fn covariance_rank(m: &StateMatrix) -> RankResult {
    rank_with_mode(m, RankMode::Covariance)
}

pub fn rank_with_mode(m: &StateMatrix, mode: RankMode) -> RankResult {
    match mode {
        RankMode::Covariance => rank_of(&m.data.tr_mul(&m.data)),
        RankMode::Direct => rank_of(&m.data),
    }
}

/// Memory-capacity protocol settings. Lengths are in drive samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryParams {
    pub n_samples: usize,
    pub washout: usize,
    pub k_max: usize,
    pub ridge: Ridge,
}

impl Default for MemoryParams {
    fn default() -> Self {
        Self { n_samples: 1700, washout: 200, k_max: 50, ridge: Ridge::Auto }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MemoryResult {
    /// MC_k for k = 1.. (possibly stopped early).
    pub per_delay: Vec<f64>,
    pub total: f64,
    pub k_max: usize,
}

fn population_cov(a: &[f64], b: &[f64]) -> f64 {
    let ma = crate::dynamics::mean(a);
    let mb = crate::dynamics::mean(b);
    a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / a.len() as f64
}

/// Memory capacity: drive the reservoir with fresh uniform noise, fit each
/// delayed copy of the drive by ridge regression on the training span, and
/// sum the squared correlations between fit and true delayed signal.
///
/// `build` maps the noise drive to a state matrix whose rows correspond to
/// drive positions `washout..n_samples` — the same construction (including
/// any squares augmentation or shift schedule) as the error pipeline it
/// accompanies. Delays run to `k_max` with an early stop after 5 consecutive
/// MC_k below 0.01.
pub fn memory_capacity<F>(build: F, params: &MemoryParams, seed: u64) -> Result<MemoryResult>
where
    F: FnOnce(&TimeSeries, usize) -> Result<StateMatrix>,
{
    let MemoryParams { n_samples, washout, k_max, ridge } = *params;
    assert!(n_samples > washout, "need rows after the washout");
    if washout == 0 {
        return Err(Error::Config("memory capacity needs washout >= 1 delay".into()));
    }
    let drive = generate_uniform_noise(n_samples, seed);
    let m = build(&drive, washout)?;
    let rows = n_samples - washout;
    if m.rows() != rows {
        return Err(Error::Shape(format!(
            "builder returned {} rows, expected {}",
            m.rows(),
            rows
        )));
    }

    let gram = m.data.tr_mul(&m.data);
    let max_diag = gram.diagonal().iter().fold(0.0_f64, |a, &b| a.max(b));
    let lambda = ridge.resolve(max_diag);
    let mut reg = gram;
    for i in 0..reg.nrows() {
        reg[(i, i)] += lambda;
    }
    let chol = nalgebra::linalg::Cholesky::new(reg);
    // rank-deficient zero-ridge fallback
    let svd = if chol.is_none() {
        Some(m.data.clone().svd(true, true))
    } else {
        None
    };

    let solve = |rhs_target: &DVector<f64>| -> DVector<f64> {
        if let Some(chol) = &chol {
            chol.solve(&m.data.tr_mul(rhs_target))
        } else {
            let svd = svd.as_ref().unwrap();
            let sigma_max = svd.singular_values.iter().fold(0.0_f64, |a, &b| a.max(b));
            let eps = m.rows().max(m.cols()) as f64 * ulp(sigma_max);
            svd.solve(rhs_target, eps)
                .map(|s| s.column(0).into_owned())
                .unwrap_or_else(|_| DVector::zeros(m.cols()))
        }
    };

    let mut per_delay = Vec::new();
    let mut consecutive_small = 0usize;
    for k in 1..=k_max.min(washout) {
        let target: Vec<f64> =
            (0..rows).map(|r| drive.values[washout + r - k]).collect();
        let coeffs = solve(&DVector::from_column_slice(&target));
        let h = &m.data * &coeffs;
        let h_slice: Vec<f64> = h.iter().copied().collect();
        let var_h = population_cov(&h_slice, &h_slice);
        let mc_k = if var_h <= 0.0 {
            0.0
        } else {
            let var_s = population_cov(&target, &target);
            let cov = population_cov(&target, &h_slice);
            cov * cov / (var_s * var_h)
        };
        per_delay.push(mc_k);
        consecutive_small = if mc_k < 0.01 { consecutive_small + 1 } else { 0 };
        if consecutive_small >= 5 {
            break;
        }
    }
    let total = per_delay.iter().sum();
    let k_max = per_delay.len();
    Ok(MemoryResult { per_delay, total, k_max })
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    assert!(a.len() >= 2);
    let ra = average_ranks(a);
    let rb = average_ranks(b);
    let cov = population_cov(&ra, &rb);
    let va = population_cov(&ra, &ra);
    let vb = population_cov(&rb, &rb);
    cov / (va * vb).sqrt()
}

fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&i, &j| v[i].partial_cmp(&v[j]).unwrap());
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
            j += 1;
        }
        let rank = 0.5 * (i + j) as f64 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::readout::{augment_squares, ColumnInfo};
    use rand::{Rng, SeedableRng};

    fn matrix_from(data: DMatrix<f64>) -> StateMatrix {
        let columns = (1..=data.ncols())
            .map(|node| ColumnInfo { node, shift: 0.0, squared: false })
            .collect();
        StateMatrix { data, columns, squares_augmented: false }
    }

    #[test]
    fn identical_columns_have_rank_one() {
        let col = [1.0, -2.0, 0.5, 3.0];
        let data = DMatrix::from_fn(4, 5, |r, _| col[r]);
        let res = covariance_rank(&matrix_from(data));
        assert_eq!(res.rank, 1);
    }

    #[test]
    fn gaussian_matrices_have_full_rank() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        for _ in 0..20 {
            let data = DMatrix::from_fn(60, 6, |_, _| {
                rng.sample::<f64, _>(rand_distr::StandardNormal)
            });
            assert_eq!(covariance_rank(&matrix_from(data)).rank, 6);
        }
    }

    #[test]
    fn duplicating_a_column_keeps_rank() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let data = DMatrix::from_fn(30, 4, |_, _| rng.random_range(-1.0..1.0));
        let base = covariance_rank(&matrix_from(data.clone())).rank;
        let mut wider = DMatrix::zeros(30, 5);
        wider.view_mut((0, 0), (30, 4)).copy_from(&data);
        wider.set_column(4, &data.column(2).into_owned());
        assert_eq!(covariance_rank(&matrix_from(wider)).rank, base);
    }

    #[test]
    fn rank_invariant_under_column_permutation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let data = DMatrix::from_fn(25, 6, |_, _| rng.random_range(-1.0..1.0));
        let permuted = DMatrix::from_fn(25, 6, |r, c| data[(r, (c + 3) % 6)]);
        assert_eq!(
            covariance_rank(&matrix_from(data)).rank,
            covariance_rank(&matrix_from(permuted)).rank
        );
    }

    #[test]
    fn tolerance_suppresses_tiny_directions() {
        // sigma = 1e-15 survives the direct threshold 2·ulp(1) ≈ 4.4e-16 but
        // its square 1e-30 falls far below it in covariance mode
        let data = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1e-15]);
        assert_eq!(covariance_rank(&matrix_from(data.clone())).rank, 1);
        assert_eq!(rank_with_mode(&matrix_from(data), RankMode::Direct).rank, 2);
    }

    /// Exact rank of an integer-valued matrix by fraction-free elimination.
    fn bareiss_rank(m: &DMatrix<f64>) -> usize {
        let (rows, cols) = m.shape();
        let mut a: Vec<Vec<i128>> = (0..rows)
            .map(|r| (0..cols).map(|c| m[(r, c)] as i128).collect())
            .collect();
        let mut rank = 0;
        let mut prev = 1i128;
        for col in 0..cols {
            let Some(pivot_row) = (rank..rows).find(|&r| a[r][col] != 0) else {
                continue;
            };
            a.swap(rank, pivot_row);
            for r in rank + 1..rows {
                for c in col + 1..cols {
                    a[r][c] = (a[rank][col] * a[r][c] - a[r][col] * a[rank][c]) / prev;
                }
                a[r][col] = 0;
            }
            prev = a[rank][col];
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    #[test]
    fn augmentation_never_decreases_rank() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let rows = rng.random_range(4..10);
            let cols = rng.random_range(1..5);
            let data =
                DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-3..=3i32) as f64);
            let m = matrix_from(data.clone());
            let a = augment_squares(&m).unwrap();
            let r_plain = covariance_rank(&m).rank;
            let r_aug = covariance_rank(&a).rank;
            assert!(r_aug >= r_plain);
            // numerical rank agrees with the exact oracle on integer input
            assert_eq!(r_plain, bareiss_rank(&data));
        }
    }

    fn delay_line_builder(
        d: usize,
    ) -> impl Fn(&TimeSeries, usize) -> crate::Result<StateMatrix> {
        move |drive: &TimeSeries, washout: usize| {
            let rows = drive.len() - washout;
            let data = DMatrix::from_fn(rows, d, |r, c| drive.values[washout + r - (c + 1)]);
            Ok(matrix_from(data))
        }
    }

    #[test]
    fn delay_line_memory_equals_depth() {
        let params = MemoryParams { n_samples: 4200, washout: 60, k_max: 40, ..Default::default() };
        let res = memory_capacity(delay_line_builder(3), &params, 11).unwrap();
        assert!((res.total - 3.0).abs() < 0.05, "total {}", res.total);
        for k in 0..3 {
            assert!(res.per_delay[k] > 0.999, "MC_{} = {}", k + 1, res.per_delay[k]);
        }
        for mc in &res.per_delay[3..] {
            assert!(*mc < 0.01);
        }
        // early stop keeps the tail short
        assert!(res.k_max < 15);
    }

    #[test]
    fn independent_fit_has_negligible_memory() {
        // matrix built from a different noise stream, unrelated to the drive
        let build = |drive: &TimeSeries, washout: usize| {
            let other = generate_uniform_noise(drive.len(), 999);
            let rows = drive.len() - washout;
            let data = DMatrix::from_fn(rows, 3, |r, c| {
                other.values[washout + r] * (c + 1) as f64
            });
            Ok(matrix_from(data))
        };
        let params = MemoryParams { n_samples: 1200, washout: 50, k_max: 20, ..Default::default() };
        let res = memory_capacity(build, &params, 4).unwrap();
        let bound = 3.0 / (1150.0_f64).sqrt();
        assert!(res.per_delay.iter().all(|mc| *mc < bound));
    }

    #[test]
    fn zero_variance_fit_counts_as_zero() {
        let build = |drive: &TimeSeries, washout: usize| {
            Ok(matrix_from(DMatrix::zeros(drive.len() - washout, 2)))
        };
        let params = MemoryParams { n_samples: 500, washout: 20, k_max: 10, ridge: Ridge::Value(0.0) };
        let res = memory_capacity(build, &params, 5).unwrap();
        assert_eq!(res.total, 0.0);
        assert!(res.per_delay.iter().all(|mc| *mc == 0.0));
    }

    #[test]
    fn memory_is_deterministic_per_seed() {
        let params = MemoryParams { n_samples: 800, washout: 30, k_max: 10, ..Default::default() };
        let a = memory_capacity(delay_line_builder(2), &params, 7).unwrap();
        let b = memory_capacity(delay_line_builder(2), &params, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn spearman_known_values() {
        assert!((spearman(&[1.0, 2.0, 3.0, 4.0], &[10.0, 20.0, 30.0, 40.0]) - 1.0).abs() < 1e-12);
        assert!((spearman(&[1.0, 2.0, 3.0, 4.0], &[4.0, 3.0, 2.0, 1.0]) + 1.0).abs() < 1e-12);
        // hand-computed with a tie: ranks a = [1, 2.5, 2.5, 4]
        let r = spearman(&[1.0, 2.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 4.0]);
        assert!((r - 0.9486832980505138).abs() < 1e-9, "{r}");
    }
}
