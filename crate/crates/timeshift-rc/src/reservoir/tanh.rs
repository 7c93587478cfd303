//! Tanh map reservoir: `R(n+1) = g·tanh(A·R(n) + ε·W∘s(n))`.

use nalgebra::DVector;

use super::{InputMask, NodeTrace, TanhParams, TraceKind};
use crate::TimeSeries;

/// Iterate the map from `R(0) = 0` for one step per drive sample.
///
/// Node i after consuming sample n lands in `nodes[i][n]`. Values are
/// bounded by `g` in magnitude, so the map cannot diverge.
pub fn simulate_tanh(params: &TanhParams, drive: &TimeSeries, mask: &InputMask) -> NodeTrace {
    let m = params.adjacency.size();
    assert_eq!(mask.len(), m, "mask length must match reservoir size");
    let n = drive.len();
    let mut state = DVector::<f64>::zeros(m);
    let mut nodes = vec![Vec::with_capacity(n); m];

    for &s in &drive.values {
        let mut pre = &params.adjacency.entries * &state;
        for i in 0..m {
            pre[i] += params.eps * mask.weights[i] * s;
            state[i] = params.g * pre[i].tanh();
        }
        for i in 0..m {
            nodes[i].push(state[i]);
        }
    }
    NodeTrace { kind: TraceKind::Discrete { nodes }, diverged: false }
}
