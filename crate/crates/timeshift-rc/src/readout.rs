//! State-matrix construction (plain and time-shifted), ridge-regression
//! readout training, and the normalized testing error.
//!
//! Row conventions: the matrix row for drive position `p` holds the reservoir
//! state after consuming sample `p` — for the delay reservoir, the ν samples
//! `ν(kθ + p·τ_D)`, k = 1..M1, taken inside the period driven by `s(p)`.
//! Both the plain and the shifted matrix drop the same `skip` leading drive
//! positions so they always cover identical target rows.

use nalgebra::{DMatrix, DVector};

use crate::dynamics::population_std;
use crate::reservoir::{NodeTrace, TraceKind};
use crate::{Error, Result};

/// Origin of one state-matrix column.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnInfo {
    /// 1-based physical (or virtual) node index.
    pub node: usize,
    /// Time shift in input samples (delay periods for the delay reservoir).
    pub shift: f64,
    /// True for a squares-augmentation column.
    pub squared: bool,
}

/// N×M regression basis with per-column provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct StateMatrix {
    pub data: DMatrix<f64>,
    pub columns: Vec<ColumnInfo>,
    pub squares_augmented: bool,
}

impl StateMatrix {
    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    /// Fewer rows than columns makes the fit underdetermined.
    pub fn shape_warning(&self) -> Option<String> {
        (self.rows() <= self.cols()).then(|| {
            format!(
                "state matrix has {} rows for {} columns; the fit is underdetermined",
                self.rows(),
                self.cols()
            )
        })
    }
}

/// Ordered shifts τ_j = j·tau_max/M2, j = 1..M2, in input-sample units.
///
/// Column j is assigned to node k(j) = M1 − ⌊(j−1)·M1/M2⌋: shift blocks walk
/// the nodes in descending order. A cyclic assignment k = ((j−1) mod M1)+1
/// degenerates whenever tau_max·M1 = M2 (in delay periods): the per-column
/// shift increment then cancels the node-position increment exactly and all
/// columns of a block sample the same signal.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSchedule {
    pub tau_max: f64,
    pub m2: usize,
}

impl ShiftSchedule {
    pub fn new(tau_max: f64, m2: usize) -> Self {
        assert!(tau_max >= 0.0, "tau_max must be nonnegative");
        assert!(m2 >= 1);
        Self { tau_max, m2 }
    }

    /// Shift of column j (1-based), in input samples.
    pub fn tau(&self, j: usize) -> f64 {
        debug_assert!(j >= 1 && j <= self.m2);
        j as f64 * self.tau_max / self.m2 as f64
    }

    /// Node carrying column j (1-based).
    pub fn node_for(&self, j: usize, m1: usize) -> usize {
        debug_assert!(j >= 1 && j <= self.m2);
        m1 - (j - 1) * m1 / self.m2
    }

    /// Leading drive samples that must be skipped so no shifted sample time
    /// precedes the trace start.
    pub fn required_warmup(&self) -> usize {
        self.tau_max.ceil() as usize
    }
}

fn check_trace(trace: &NodeTrace, skip: usize) -> Result<usize> {
    if trace.diverged {
        return Err(Error::Diverged("trace is flagged diverged".into()));
    }
    let n = trace.n_samples();
    if skip >= n {
        return Err(Error::Shape(format!(
            "skip {skip} leaves no rows out of {n} samples"
        )));
    }
    Ok(n)
}

/// Arrange a node trace into the plain state matrix.
///
/// Discrete reservoirs: entry (r, i) is node i+1 at drive position skip+r.
/// Delay reservoir: entry (r, k) is ν((k+1)θ + (skip+r)·τ_D).
pub fn build_state_matrix(trace: &NodeTrace, skip: usize) -> Result<StateMatrix> {
    let n = check_trace(trace, skip)?;
    let rows = n - skip;
    match &trace.kind {
        TraceKind::Discrete { nodes } => {
            let m = nodes.len();
            let data = DMatrix::from_fn(rows, m, |r, i| nodes[i][skip + r]);
            let columns = (1..=m)
                .map(|node| ColumnInfo { node, shift: 0.0, squared: false })
                .collect();
            Ok(StateMatrix { data, columns, squares_augmented: false })
        }
        TraceKind::Delay { nu, theta, m1 } => {
            let tau_d = theta * m1;
            let data = DMatrix::from_fn(rows, *m1, |r, k| {
                nu[(k + 1) * theta + (skip + r) * tau_d]
            });
            let columns = (1..=*m1)
                .map(|node| ColumnInfo { node, shift: 0.0, squared: false })
                .collect();
            Ok(StateMatrix { data, columns, squares_augmented: false })
        }
    }
}

/// Sample a θ-grid signal at a possibly fractional grid position, linearly
/// interpolating between the two nearest grid samples.
#[inline]
fn interp_grid(values: &[f64], grid: usize, pos: f64) -> f64 {
    let idx = pos / grid as f64;
    let i0 = idx.floor();
    let w = idx - i0;
    let i0 = i0 as usize;
    if w == 0.0 {
        values[i0 * grid]
    } else {
        (1.0 - w) * values[i0 * grid] + w * values[(i0 + 1) * grid]
    }
}

/// Build the time-shifted matrix: column j holds node k(j) shifted back by
/// τ_j input samples.
///
/// Delay reservoir: entry (r, j) is ν(k·θ + (skip+r)·τ_D − τ_j·τ_D),
/// interpolated between the two nearest θ-sampled values of ν when the shift
/// is not a whole number of θ steps. Discrete reservoirs use the same
/// schedule on the unit sample grid.
pub fn build_shifted_matrix(
    trace: &NodeTrace,
    schedule: &ShiftSchedule,
    skip: usize,
) -> Result<StateMatrix> {
    let n = check_trace(trace, skip)?;
    let rows = n - skip;
    let m1 = trace.n_nodes();
    let m2 = schedule.m2;

    let columns: Vec<ColumnInfo> = (1..=m2)
        .map(|j| ColumnInfo {
            node: schedule.node_for(j, m1),
            shift: schedule.tau(j),
            squared: false,
        })
        .collect();

    match &trace.kind {
        TraceKind::Discrete { nodes } => {
            // earliest sampled position: row 0, largest shift relative to node
            let mut needed = 0usize;
            for info in &columns {
                let deficit = info.shift - skip as f64;
                if deficit > 0.0 {
                    needed = needed.max(deficit.ceil() as usize + skip);
                }
            }
            if needed > skip {
                return Err(Error::Warmup { needed, have: skip });
            }
            let data = DMatrix::from_fn(rows, m2, |r, c| {
                let info = &columns[c];
                let pos = (skip + r) as f64 - info.shift;
                let i0 = pos.floor();
                let w = pos - i0;
                let series = &nodes[info.node - 1];
                if w == 0.0 {
                    series[i0 as usize]
                } else {
                    (1.0 - w) * series[i0 as usize] + w * series[i0 as usize + 1]
                }
            });
            Ok(StateMatrix { data, columns, squares_augmented: false })
        }
        TraceKind::Delay { nu, theta, m1 } => {
            let tau_d = (theta * m1) as f64;
            let mut needed = 0usize;
            for info in &columns {
                let t0 = info.node as f64 * *theta as f64 + skip as f64 * tau_d
                    - info.shift * tau_d;
                if t0 < 0.0 {
                    let deficit = (info.shift * tau_d - info.node as f64 * *theta as f64)
                        / tau_d;
                    needed = needed.max(deficit.ceil() as usize);
                }
            }
            if needed > skip {
                return Err(Error::Warmup { needed, have: skip });
            }
            let data = DMatrix::from_fn(rows, m2, |r, c| {
                let info = &columns[c];
                let t = info.node as f64 * *theta as f64 + (skip + r) as f64 * tau_d
                    - info.shift * tau_d;
                interp_grid(nu, *theta, t)
            });
            Ok(StateMatrix { data, columns, squares_augmented: false })
        }
    }
}

/// Append the elementwise squares of every column.
pub fn augment_squares(m: &StateMatrix) -> Result<StateMatrix> {
    if m.squares_augmented {
        return Err(Error::Shape("matrix is already squares-augmented".into()));
    }
    let (rows, cols) = (m.rows(), m.cols());
    let mut data = DMatrix::zeros(rows, 2 * cols);
    data.view_mut((0, 0), (rows, cols)).copy_from(&m.data);
    for c in 0..cols {
        for r in 0..rows {
            let v = m.data[(r, c)];
            data[(r, cols + c)] = v * v;
        }
    }
    let mut columns = m.columns.clone();
    columns.extend(m.columns.iter().map(|info| ColumnInfo { squared: true, ..info.clone() }));
    Ok(StateMatrix { data, columns, squares_augmented: true })
}

/// Ridge regularization: the default scale rule 1e-8 × max diag(ΩᵀΩ), a
/// custom scale factor on the same diagonal, or an explicit value.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Ridge {
    #[default]
    Auto,
    Value(f64),
    Scale(f64),
}

impl Ridge {
    pub(crate) fn resolve(self, gram_max_diag: f64) -> f64 {
        match self {
            Ridge::Auto => 1e-8 * gram_max_diag,
            Ridge::Scale(s) => {
                assert!(s >= 0.0, "ridge scale must be nonnegative");
                s * gram_max_diag
            }
            Ridge::Value(v) => {
                assert!(v >= 0.0, "ridge must be nonnegative");
                v
            }
        }
    }
}

/// Fitted readout: coefficient vector plus the ridge value actually used.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutModel {
    pub coeffs: DVector<f64>,
    pub ridge: f64,
}

/// Solve C = (ΩᵀΩ + ridge·I)⁻¹ Ωᵀ f.
///
/// Positive ridge goes through a Cholesky factorization of the regularized
/// Gram matrix; ridge 0 (or a failed factorization) falls back to an SVD of
/// Ω, which yields the minimum-norm solution for rank-deficient bases.
pub fn ridge_train(m: &StateMatrix, target: &[f64], ridge: Ridge) -> Result<ReadoutModel> {
    if m.rows() != target.len() {
        return Err(Error::Shape(format!(
            "matrix has {} rows but target has {} samples",
            m.rows(),
            target.len()
        )));
    }
    let f = DVector::from_column_slice(target);
    let gram = m.data.tr_mul(&m.data);
    let max_diag = gram.diagonal().iter().fold(0.0_f64, |a, &b| a.max(b));
    let lambda = ridge.resolve(max_diag);
    let rhs = m.data.tr_mul(&f);

    if lambda > 0.0 {
        let mut g = gram;
        for i in 0..g.nrows() {
            g[(i, i)] += lambda;
        }
        if let Some(chol) = nalgebra::linalg::Cholesky::new(g) {
            let coeffs = chol.solve(&rhs);
            return Ok(ReadoutModel { coeffs, ridge: lambda });
        }
    }

    // Minimum-norm least squares via SVD of the basis itself.
    let svd = m.data.clone().svd(true, true);
    let sigma_max = svd.singular_values.iter().fold(0.0_f64, |a, &b| a.max(b));
    let eps = m.rows().max(m.cols()) as f64 * crate::metrics::ulp(sigma_max);
    if lambda > 0.0 {
        // Ridge solution expressed through the SVD: V (Σ²+λ)⁻¹ Σ Uᵀ f.
        let u = svd.u.as_ref().expect("svd computed with u");
        let v_t = svd.v_t.as_ref().expect("svd computed with v_t");
        let ut_f = u.tr_mul(&f);
        let mut scaled = DVector::zeros(svd.singular_values.len());
        for i in 0..scaled.len() {
            let s = svd.singular_values[i];
            scaled[i] = s * ut_f[i] / (s * s + lambda);
        }
        let coeffs = v_t.tr_mul(&scaled);
        Ok(ReadoutModel { coeffs, ridge: lambda })
    } else {
        let coeffs = svd
            .solve(&f, eps)
            .map_err(|e| Error::Shape(format!("svd solve failed: {e}")))?;
        Ok(ReadoutModel { coeffs: coeffs.column(0).into_owned(), ridge: 0.0 })
    }
}

/// Normalized testing error: std(f − Ω·C) / std(f), population convention.
pub fn testing_error(m: &StateMatrix, model: &ReadoutModel, target: &[f64]) -> Result<f64> {
    if m.cols() != model.coeffs.len() {
        return Err(Error::Shape(format!(
            "matrix has {} columns but model has {} coefficients",
            m.cols(),
            model.coeffs.len()
        )));
    }
    if m.rows() != target.len() {
        return Err(Error::Shape(format!(
            "matrix has {} rows but target has {} samples",
            m.rows(),
            target.len()
        )));
    }
    let denom = population_std(target);
    if denom <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    let pred = &m.data * &model.coeffs;
    let residual: Vec<f64> = target.iter().zip(pred.iter()).map(|(f, h)| f - h).collect();
    Ok(population_std(&residual) / denom)
}

// ---- CSV import/export ------------------------------------------------

fn column_label(info: &ColumnInfo) -> String {
    let mut s = format!("n{}_s{}", info.node, info.shift);
    if info.squared {
        s.push_str("_sq");
    }
    s
}

fn parse_label(label: &str) -> Result<ColumnInfo> {
    let bad = || Error::Config(format!("bad column label {label:?}"));
    let rest = label.strip_prefix('n').ok_or_else(bad)?;
    let (node_s, rest) = rest.split_once("_s").ok_or_else(bad)?;
    let (shift_s, squared) = match rest.strip_suffix("_sq") {
        Some(r) => (r, true),
        None => (rest, false),
    };
    Ok(ColumnInfo {
        node: node_s.parse().map_err(|_| bad())?,
        shift: shift_s.parse().map_err(|_| bad())?,
        squared,
    })
}

/// Write the matrix row-major with a provenance header (`n<node>_s<shift>[_sq]`).
pub fn write_matrix_csv<W: std::io::Write>(m: &StateMatrix, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(m.columns.iter().map(column_label))?;
    for r in 0..m.rows() {
        w.write_record((0..m.cols()).map(|c| m.data[(r, c)].to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Read a matrix written by [`write_matrix_csv`] (or any numeric CSV with a
/// header row; unknown header labels get placeholder provenance).
pub fn read_matrix_csv<R: std::io::Read>(input: R) -> Result<StateMatrix> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let headers = rdr.headers()?.clone();
    if headers.is_empty() {
        return Err(Error::Config("matrix CSV has no columns".into()));
    }
    let columns: Vec<ColumnInfo> = headers
        .iter()
        .enumerate()
        .map(|(i, h)| {
            parse_label(h).unwrap_or(ColumnInfo { node: i + 1, shift: 0.0, squared: false })
        })
        .collect();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in rdr.records() {
        let record = record?;
        if record.len() != columns.len() {
            return Err(Error::Config(format!(
                "row {} has {} fields, expected {}",
                rows.len() + 2,
                record.len(),
                columns.len()
            )));
        }
        let row: std::result::Result<Vec<f64>, _> =
            record.iter().map(|v| v.trim().parse::<f64>()).collect();
        rows.push(row.map_err(|e| {
            Error::Config(format!("row {}: {e}", rows.len() + 2))
        })?);
    }
    if rows.is_empty() {
        return Err(Error::Config("matrix CSV has no data rows".into()));
    }
    let data = DMatrix::from_fn(rows.len(), columns.len(), |r, c| rows[r][c]);
    let squares_augmented = columns.iter().any(|c| c.squared);
    Ok(StateMatrix { data, columns, squares_augmented })
}
