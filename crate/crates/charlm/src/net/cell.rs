//! The LSTM cell.
//!
//! Standard formulation: with z = w x + u h_prev + b split into the four gate
//! blocks [zi, zf, zg, zo],
//!
//!   i = sigmoid(zi)    f = sigmoid(zf)    g = tanh(zg)    o = sigmoid(zo)
//!   c_new = f * c + i * g
//!   h_new = o * tanh(c_new)
//!
//! The forward pass caches every intermediate the backward pass needs.

use super::{LayerParams, LayerState, NetError};

#[inline]
fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Intermediates of one cell application, kept for backpropagation.
#[derive(Debug, Clone)]
pub struct CellCache {
    pub x: Vec<f64>,
    pub h_prev: Vec<f64>,
    pub c_prev: Vec<f64>,
    pub i: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub o: Vec<f64>,
    pub c_new: Vec<f64>,
    pub tanh_c: Vec<f64>,
    pub h_new: Vec<f64>,
}

/// One forward step of a single layer. Returns the new hidden and cell
/// vectors along with the cache of intermediates.
pub fn lstm_cell_forward(
    layer: &LayerParams,
    x: &[f64],
    state: &LayerState,
) -> Result<(Vec<f64>, Vec<f64>, CellCache), NetError> {
    let h = state.h.len();
    if layer.w.cols() != x.len() {
        return Err(NetError::Shape(format!(
            "cell input has {} entries, layer expects {}",
            x.len(),
            layer.w.cols()
        )));
    }
    if layer.u.cols() != h || layer.w.rows() != 4 * h || layer.b.len() != 4 * h {
        return Err(NetError::Shape(
            "layer tensors inconsistent with state size".into(),
        ));
    }

    // z = w x + u h_prev + b
    let mut z = vec![0.0; 4 * h];
    layer.w.matvec(x, &mut z);
    let mut uh = vec![0.0; 4 * h];
    layer.u.matvec(&state.h, &mut uh);
    for ((zv, &uv), &bv) in z.iter_mut().zip(&uh).zip(&layer.b) {
        *zv += uv + bv;
    }

    let i: Vec<f64> = z[..h].iter().map(|&v| sigmoid(v)).collect();
    let f: Vec<f64> = z[h..2 * h].iter().map(|&v| sigmoid(v)).collect();
    let g: Vec<f64> = z[2 * h..3 * h].iter().map(|&v| v.tanh()).collect();
    let o: Vec<f64> = z[3 * h..].iter().map(|&v| sigmoid(v)).collect();

    let c_new: Vec<f64> = (0..h).map(|k| f[k] * state.c[k] + i[k] * g[k]).collect();
    let tanh_c: Vec<f64> = c_new.iter().map(|&v| v.tanh()).collect();
    let h_new: Vec<f64> = (0..h).map(|k| o[k] * tanh_c[k]).collect();

    let cache = CellCache {
        x: x.to_vec(),
        h_prev: state.h.clone(),
        c_prev: state.c.clone(),
        i,
        f,
        g,
        o,
        c_new: c_new.clone(),
        tanh_c,
        h_new: h_new.clone(),
    };
    Ok((h_new, c_new, cache))
}

/// Backward step of a single layer at one time step. `dh` is the total
/// gradient flowing into h_new (from the layer above and from t+1), `dc_in`
/// the gradient flowing into c_new from t+1. Parameter gradients accumulate
/// into `grads`; the returned triple is (dx, dh_prev, dc_prev).
pub fn lstm_cell_backward(
    layer: &LayerParams,
    cache: &CellCache,
    dh: &[f64],
    dc_in: &[f64],
    grads: &mut LayerParams,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let h = dh.len();
    debug_assert_eq!(cache.h_prev.len(), h);

    // dc = dh * o * (1 - tanh(c)^2) + dc_in
    let dc: Vec<f64> = (0..h)
        .map(|k| dh[k] * cache.o[k] * (1.0 - cache.tanh_c[k] * cache.tanh_c[k]) + dc_in[k])
        .collect();

    let mut dz = vec![0.0; 4 * h];
    for k in 0..h {
        let di = dc[k] * cache.g[k];
        dz[k] = di * cache.i[k] * (1.0 - cache.i[k]);
        let df = dc[k] * cache.c_prev[k];
        dz[h + k] = df * cache.f[k] * (1.0 - cache.f[k]);
        let dg = dc[k] * cache.i[k];
        dz[2 * h + k] = dg * (1.0 - cache.g[k] * cache.g[k]);
        let d_o = dh[k] * cache.tanh_c[k];
        dz[3 * h + k] = d_o * cache.o[k] * (1.0 - cache.o[k]);
    }

    grads.w.add_outer(&dz, &cache.x);
    grads.u.add_outer(&dz, &cache.h_prev);
    for (gb, &d) in grads.b.iter_mut().zip(&dz) {
        *gb += d;
    }

    let mut dx = vec![0.0; cache.x.len()];
    layer.w.matvec_transpose(&dz, &mut dx);
    let mut dh_prev = vec![0.0; h];
    layer.u.matvec_transpose(&dz, &mut dh_prev);
    let dc_prev: Vec<f64> = (0..h).map(|k| dc[k] * cache.f[k]).collect();

    (dx, dh_prev, dc_prev)
}
