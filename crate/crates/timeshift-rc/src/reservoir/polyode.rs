//! Polynomial ODE reservoir:
//! `dr_i/dt = α [p1·r_i + p2·r_i² + p3·r_i³ + Σ_j A_ij·r_j + W_i·s(t)]`,
//! integrated by RK4 with a unit step, one step per drive sample.

use nalgebra::DVector;

use super::{NodeTrace, PolyOdeParams, TraceKind, DIVERGENCE_GUARD};
use crate::TimeSeries;

/// Integrate from `R(0) = 0`. The drive is zero-order held over each unit
/// interval; the endpoint stage sees the next sample. Random draws can be
/// stiff or genuinely unstable, so node values beyond the guard mark the
/// trace diverged and stop the integration (no NaNs are recorded).
pub fn simulate_polyode(params: &PolyOdeParams, drive: &TimeSeries) -> NodeTrace {
    let m = params.adjacency.size();
    assert_eq!(params.mask.len(), m, "mask length must match reservoir size");
    let n = drive.len();
    let mut state = DVector::<f64>::zeros(m);
    let mut nodes = vec![Vec::with_capacity(n); m];
    let mut stage = DVector::<f64>::zeros(m);
    let mut k1 = DVector::<f64>::zeros(m);
    let mut k2 = DVector::<f64>::zeros(m);
    let mut k3 = DVector::<f64>::zeros(m);
    let mut k4 = DVector::<f64>::zeros(m);

    let deriv = |r: &DVector<f64>, s: f64, out: &mut DVector<f64>| {
        params.adjacency.entries.mul_to(r, out);
        for i in 0..m {
            let ri = r[i];
            out[i] = params.alpha
                * (params.p1 * ri
                    + params.p2 * ri * ri
                    + params.p3 * ri * ri * ri
                    + out[i]
                    + params.mask.weights[i] * s);
        }
    };

    for step in 0..n {
        let s0 = drive.values[step];
        let s1 = drive.values[(step + 1).min(n - 1)];

        deriv(&state, s0, &mut k1);
        stage.copy_from(&state);
        stage.axpy(0.5, &k1, 1.0);
        deriv(&stage, s0, &mut k2);
        stage.copy_from(&state);
        stage.axpy(0.5, &k2, 1.0);
        deriv(&stage, s0, &mut k3);
        stage.copy_from(&state);
        stage.axpy(1.0, &k3, 1.0);
        deriv(&stage, s1, &mut k4);

        for i in 0..m {
            state[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
        }
        if state.iter().any(|v| !v.is_finite() || v.abs() > DIVERGENCE_GUARD) {
            return NodeTrace { kind: TraceKind::Discrete { nodes }, diverged: true };
        }
        for i in 0..m {
            nodes[i].push(state[i]);
        }
    }
    NodeTrace { kind: TraceKind::Discrete { nodes }, diverged: false }
}
