//! Two-layer graph convolution with hand-derived gradients.
//!
//! Forward pass: logits = A_hat . drop(relu(A_hat . drop(X) . W0)) . W1,
//! where A_hat is the self-looped symmetric-normalized adjacency. Dropout
//! is inverted (kept units scaled by 1/(1-p)) so eval mode applies no
//! rescale. Training is full-batch: the whole graph participates in every
//! forward pass and the loss is masked to the revealed labels.

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::sparse::SparseMatrix;
use ndarray::{Array2, Zip};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Train,
    Eval,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub w0: Array2<f64>,
    pub w1: Array2<f64>,
}

#[derive(Debug, Clone)]
pub struct Gradients {
    pub w0: Array2<f64>,
    pub w1: Array2<f64>,
}

/// Everything the backward pass needs from one forward pass: post-ReLU
/// hidden activations, logits, probabilities, and the dropout masks that
/// were applied (entries are 0 or 1/(1-p); `None` when no dropout ran).
#[derive(Debug, Clone)]
pub struct Activations {
    pub hidden: Array2<f64>,
    pub logits: Array2<f64>,
    pub probs: Array2<f64>,
    pub input_mask: Option<Array2<f64>>,
    pub hidden_mask: Option<Array2<f64>>,
}

/// Adam moment accumulators, one pair per weight matrix.
#[derive(Debug, Clone)]
pub struct AdamState {
    pub m0: Array2<f64>,
    pub v0: Array2<f64>,
    pub m1: Array2<f64>,
    pub v1: Array2<f64>,
    pub t: u64,
}

impl AdamState {
    pub fn new(params: &ModelParams) -> Self {
        Self {
            m0: Array2::zeros(params.w0.raw_dim()),
            v0: Array2::zeros(params.w0.raw_dim()),
            m1: Array2::zeros(params.w1.raw_dim()),
            v1: Array2::zeros(params.w1.raw_dim()),
            t: 0,
        }
    }
}

/// Glorot-uniform initialization: entries uniform in
/// +-sqrt(6 / (fan_in + fan_out)), drawn from a single seeded stream
/// (w0 row-major first, then w1).
pub fn init_params(
    num_features: usize,
    hidden_dim: usize,
    num_classes: usize,
    seed: u64,
) -> Result<ModelParams> {
    for (dim, context) in [
        (num_features, "num_features"),
        (hidden_dim, "hidden_dim"),
        (num_classes, "num_classes"),
    ] {
        if dim == 0 {
            return Err(Error::ZeroDimension { context });
        }
    }
    let mut rng = SplitMix64::new(seed);
    let mut glorot = |rows: usize, cols: usize| {
        let limit = (6.0 / (rows + cols) as f64).sqrt();
        let data: Vec<f64> = (0..rows * cols)
            .map(|_| (2.0 * rng.next_f64() - 1.0) * limit)
            .collect();
        Array2::from_shape_vec((rows, cols), data).expect("shape matches data")
    };
    Ok(ModelParams {
        w0: glorot(num_features, hidden_dim),
        w1: glorot(hidden_dim, num_classes),
    })
}

/// Row-wise softmax with per-row max subtraction.
pub fn row_softmax(logits: &Array2<f64>) -> Array2<f64> {
    let mut out = logits.clone();
    for mut row in out.rows_mut() {
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for x in row.iter_mut() {
            *x = (*x - max).exp();
            sum += *x;
        }
        for x in row.iter_mut() {
            *x /= sum;
        }
    }
    out
}

/// Row-wise log-softmax; keeps extreme logits finite where
/// log(softmax(x)) would underflow.
pub fn row_log_softmax(logits: &Array2<f64>) -> Array2<f64> {
    let mut out = logits.clone();
    for mut row in out.rows_mut() {
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let log_sum = row.iter().map(|x| (x - max).exp()).sum::<f64>().ln();
        for x in row.iter_mut() {
            *x = *x - max - log_sum;
        }
    }
    out
}

fn dropout_mask(rng: &mut SplitMix64, rows: usize, cols: usize, p: f64) -> Array2<f64> {
    let keep_scale = 1.0 / (1.0 - p);
    let data: Vec<f64> = (0..rows * cols)
        .map(|_| if rng.next_f64() < p { 0.0 } else { keep_scale })
        .collect();
    Array2::from_shape_vec((rows, cols), data).expect("shape matches data")
}

/// One full-graph forward pass. In train mode the seed fixes the dropout
/// masks; eval mode is deterministic and ignores it.
pub fn forward(
    a_hat: &SparseMatrix,
    x: &Array2<f64>,
    params: &ModelParams,
    dropout_p: f64,
    mode: Mode,
    seed: u64,
) -> Result<Activations> {
    if !(0.0..1.0).contains(&dropout_p) {
        return Err(Error::InvalidDropout(dropout_p));
    }
    let num_nodes = a_hat.num_rows();
    if x.nrows() != num_nodes {
        return Err(Error::DimensionMismatch {
            context: "features vs adjacency",
            expected: num_nodes,
            actual: x.nrows(),
        });
    }
    if x.ncols() != params.w0.nrows() {
        return Err(Error::DimensionMismatch {
            context: "features vs first layer",
            expected: params.w0.nrows(),
            actual: x.ncols(),
        });
    }
    if params.w0.ncols() != params.w1.nrows() {
        return Err(Error::DimensionMismatch {
            context: "hidden layer chain",
            expected: params.w0.ncols(),
            actual: params.w1.nrows(),
        });
    }

    let use_dropout = mode == Mode::Train && dropout_p > 0.0;
    let mut rng = SplitMix64::new(seed);
    let input_mask = use_dropout.then(|| dropout_mask(&mut rng, num_nodes, x.ncols(), dropout_p));
    let hidden_mask =
        use_dropout.then(|| dropout_mask(&mut rng, num_nodes, params.w0.ncols(), dropout_p));

    let dropped_x = match &input_mask {
        Some(mask) => x * mask,
        None => x.clone(),
    };
    let mut hidden = a_hat.mul_dense(&dropped_x.dot(&params.w0))?;
    hidden.mapv_inplace(|v| v.max(0.0));

    let dropped_hidden = match &hidden_mask {
        Some(mask) => &hidden * mask,
        None => hidden.clone(),
    };
    let logits = a_hat.mul_dense(&dropped_hidden.dot(&params.w1))?;
    let probs = row_softmax(&logits);

    Ok(Activations {
        hidden,
        logits,
        probs,
        input_mask,
        hidden_mask,
    })
}

/// Masked cross-entropy plus L2 decay on the first layer, and the exact
/// gradients of that loss through the recorded activations.
#[allow(clippy::too_many_arguments)]
pub fn loss_and_grads(
    act: &Activations,
    labels: &[usize],
    train_mask: &[bool],
    params: &ModelParams,
    weight_decay: f64,
    a_hat: &SparseMatrix,
    x: &Array2<f64>,
) -> Result<(f64, Gradients)> {
    let num_nodes = a_hat.num_rows();
    let num_classes = params.w1.ncols();
    if labels.len() != num_nodes || train_mask.len() != num_nodes {
        return Err(Error::DimensionMismatch {
            context: "labels/mask vs graph",
            expected: num_nodes,
            actual: labels.len().min(train_mask.len()),
        });
    }
    let masked = train_mask.iter().filter(|&&b| b).count();
    if masked == 0 {
        return Err(Error::EmptyMask);
    }

    let log_probs = row_log_softmax(&act.logits);
    let mut data_loss = 0.0;
    let mut dlogits = Array2::<f64>::zeros((num_nodes, num_classes));
    let scale = 1.0 / masked as f64;
    for node in 0..num_nodes {
        if !train_mask[node] {
            continue;
        }
        let label = labels[node];
        data_loss -= log_probs[[node, label]];
        for class in 0..num_classes {
            dlogits[[node, class]] = act.probs[[node, class]] * scale;
        }
        dlogits[[node, label]] -= scale;
    }
    data_loss *= scale;
    let decay_loss = 0.5 * weight_decay * params.w0.iter().map(|w| w * w).sum::<f64>();
    let loss = data_loss + decay_loss;

    // logits = A (Z1 W1) with Z1 the dropped hidden activations.
    let dropped_hidden = match &act.hidden_mask {
        Some(mask) => &act.hidden * mask,
        None => act.hidden.clone(),
    };
    let d_pre_w1 = a_hat.mul_dense(&dlogits)?; // A^T = A
    let grad_w1 = dropped_hidden.t().dot(&d_pre_w1);
    let mut d_hidden = d_pre_w1.dot(&params.w1.t());
    if let Some(mask) = &act.hidden_mask {
        d_hidden *= mask;
    }
    // ReLU gate from the stored post-activation values.
    Zip::from(&mut d_hidden).and(&act.hidden).for_each(|g, &h| {
        if h <= 0.0 {
            *g = 0.0;
        }
    });

    // hidden_pre = A (Z0 W0) with Z0 the dropped inputs.
    let d_pre_w0 = a_hat.mul_dense(&d_hidden)?;
    let dropped_x = match &act.input_mask {
        Some(mask) => x * mask,
        None => x.clone(),
    };
    let mut grad_w0 = dropped_x.t().dot(&d_pre_w0);
    grad_w0.scaled_add(weight_decay, &params.w0);

    Ok((
        loss,
        Gradients {
            w0: grad_w0,
            w1: grad_w1,
        },
    ))
}

fn check_finite(layer: &'static str, grad: &Array2<f64>) -> Result<()> {
    for ((row, col), &value) in grad.indexed_iter() {
        if !value.is_finite() {
            return Err(Error::NonFiniteGradient {
                layer,
                row,
                col,
                value,
            });
        }
    }
    Ok(())
}

/// Bias-corrected Adam update, applied in place.
pub fn adam_step(
    params: &mut ModelParams,
    grads: &Gradients,
    state: &mut AdamState,
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
) -> Result<()> {
    check_finite("w0", &grads.w0)?;
    check_finite("w1", &grads.w1)?;
    state.t += 1;
    let bias1 = 1.0 - beta1.powi(state.t as i32);
    let bias2 = 1.0 - beta2.powi(state.t as i32);
    let update =
        |w: &mut Array2<f64>, g: &Array2<f64>, m: &mut Array2<f64>, v: &mut Array2<f64>| {
            Zip::from(w).and(g).and(m).and(v).for_each(|w, &g, m, v| {
                *m = beta1 * *m + (1.0 - beta1) * g;
                *v = beta2 * *v + (1.0 - beta2) * g * g;
                let m_hat = *m / bias1;
                let v_hat = *v / bias2;
                *w -= lr * m_hat / (v_hat.sqrt() + eps);
            });
        };
    update(&mut params.w0, &grads.w0, &mut state.m0, &mut state.v0);
    update(&mut params.w1, &grads.w1, &mut state.m1, &mut state.v1);
    Ok(())
}
