use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Examples, TaskSet, TrainConfig};
use crate::error::{Error, Result};
use crate::math;
use crate::source::SourceId;

/// Probabilities are clamped to `[PROB_CLAMP, 1 - PROB_CLAMP]` inside the loss.
pub const PROB_CLAMP: f64 = 1e-7;

/// Fully connected layer; `weights` is row-major `[n_in][n_out]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense {
    pub n_in: usize,
    pub n_out: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Dense {
    pub fn zeros(n_in: usize, n_out: usize) -> Dense {
        Dense { n_in, n_out, weights: vec![0.0; n_in * n_out], bias: vec![0.0; n_out] }
    }

    /// Glorot-uniform weights; row `i` is drawn from its own stream `row_keys[i]`.
    fn glorot(n_in: usize, n_out: usize, seed: u64, row_keys: impl Iterator<Item = u64>) -> Dense {
        let bound = math::sqrt(6.0 / (n_in + n_out) as f64);
        let mut layer = Dense::zeros(n_in, n_out);
        for (row, key) in layer.weights.chunks_mut(n_out.max(1)).zip(row_keys) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(key);
            for w in row {
                *w = (rng.gen::<f64>() * 2.0 - 1.0) * bound;
            }
        }
        layer
    }

    fn forward_into(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend_from_slice(&self.bias);
        for (xi, row) in x.iter().zip(self.weights.chunks(self.n_out.max(1))) {
            if *xi != 0.0 {
                for (o, w) in out.iter_mut().zip(row) {
                    *o += xi * w;
                }
            }
        }
    }

    /// Accumulates `dW += x ⊗ delta`, `db += delta`.
    fn accumulate(&mut self, x: &[f64], delta: &[f64]) {
        for (b, d) in self.bias.iter_mut().zip(delta) {
            *b += d;
        }
        for (xi, row) in x.iter().zip(self.weights.chunks_mut(self.n_out.max(1))) {
            if *xi != 0.0 {
                for (g, d) in row.iter_mut().zip(delta) {
                    *g += xi * d;
                }
            }
        }
    }

    /// `W · delta`, the gradient flowing back into this layer's input.
    fn backprop(&self, delta: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend(self.weights.chunks(self.n_out.max(1)).map(|row| {
            row.iter().zip(delta).map(|(w, d)| w * d).sum::<f64>()
        }));
    }
}

/// Task-private hidden layer followed by a single sigmoid unit.
#[derive(Clone, Debug, PartialEq)]
pub struct TaskHead {
    pub hidden: Dense,
    pub output: Dense,
}

/// All trainable weights. Gradients and momentum buffers share this shape.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub shared: Dense,
    pub heads: Vec<TaskHead>,
}

impl Params {
    pub fn zeros(dims: NetworkDims, tasks: usize) -> Params {
        Params {
            shared: Dense::zeros(dims.input_dim, dims.shared_hidden),
            heads: (0..tasks)
                .map(|_| TaskHead {
                    hidden: Dense::zeros(dims.shared_hidden, dims.task_hidden),
                    output: Dense::zeros(dims.task_hidden, 1),
                })
                .collect(),
        }
    }

    pub fn zeros_like(&self) -> Params {
        let mut p = self.clone();
        for s in p.slices_mut() {
            s.fill(0.0);
        }
        p
    }

    /// Every parameter array in a fixed order.
    pub fn slices(&self) -> Vec<&[f64]> {
        let mut v: Vec<&[f64]> = vec![&self.shared.weights, &self.shared.bias];
        for h in &self.heads {
            v.extend([
                h.hidden.weights.as_slice(),
                &h.hidden.bias,
                &h.output.weights,
                &h.output.bias,
            ]);
        }
        v
    }

    pub fn slices_mut(&mut self) -> Vec<&mut [f64]> {
        let mut v: Vec<&mut [f64]> = vec![&mut self.shared.weights, &mut self.shared.bias];
        for h in &mut self.heads {
            v.push(&mut h.hidden.weights);
            v.push(&mut h.hidden.bias);
            v.push(&mut h.output.weights);
            v.push(&mut h.output.bias);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.slices().iter().map(|s| s.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Applies `f(self_i, other_i)` elementwise. Shapes must agree.
    pub fn zip_apply(&mut self, other: &Params, mut f: impl FnMut(&mut f64, f64)) {
        for (a, b) in self.slices_mut().into_iter().zip(other.slices()) {
            debug_assert_eq!(a.len(), b.len());
            for (x, y) in a.iter_mut().zip(b) {
                f(x, *y);
            }
        }
    }

    pub fn same_shape(&self, other: &Params) -> bool {
        let a = self.slices();
        let b = other.slices();
        a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x.len() == y.len())
    }

    pub fn is_finite(&self) -> bool {
        self.slices().iter().all(|s| s.iter().all(|x| x.is_finite()))
    }

    pub fn l2_norm(&self) -> f64 {
        math::sqrt(self.slices().iter().flat_map(|s| s.iter()).map(|x| x * x).sum())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NetworkDims {
    pub input_dim: usize,
    pub shared_hidden: usize,
    pub task_hidden: usize,
}

/// Cached intermediate values of one forward pass.
#[derive(Clone, Debug, PartialEq)]
pub struct Activations {
    /// Shared layer after ReLU.
    pub shared: Vec<f64>,
    /// Per task: private hidden layer after ReLU.
    pub hidden: Vec<Vec<f64>>,
    pub logits: Vec<f64>,
    /// Per task sigmoid outputs.
    pub probs: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MtlNetwork {
    task_set: TaskSet,
    dims: NetworkDims,
    pub params: Params,
}

fn relu_in_place(v: &mut [f64]) {
    for x in v {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
}

/// Random-initialized network with input columns keyed `0..input_dim`.
pub fn init_network(input_dim: usize, task_set: &TaskSet, config: &TrainConfig, seed: u64) -> Result<MtlNetwork> {
    let keys: Vec<u64> = (0..input_dim as u64).collect();
    MtlNetwork::init_keyed(&keys, task_set, config, seed)
}

impl MtlNetwork {
    /// Initializes weights from `seed`, drawing each shared-layer row from a
    /// stream keyed by its input column and each head from a stream keyed by
    /// its task. Dropping an input column or a task therefore leaves the
    /// initial values of every other row unchanged (up to the fan-in scale).
    pub fn init_keyed(
        input_keys: &[u64],
        task_set: &TaskSet,
        config: &TrainConfig,
        seed: u64,
    ) -> Result<MtlNetwork> {
        if input_keys.is_empty() {
            return Err(Error::InvalidConfig("network input dimension must be at least 1".into()));
        }
        if task_set.is_empty() {
            return Err(Error::InvalidConfig("network needs at least one task".into()));
        }
        let dims = NetworkDims {
            input_dim: input_keys.len(),
            shared_hidden: config.shared_hidden,
            task_hidden: config.task_hidden,
        };
        if dims.shared_hidden == 0 || dims.task_hidden == 0 {
            return Err(Error::InvalidConfig("hidden layer widths must be at least 1".into()));
        }
        let shared = Dense::glorot(
            dims.input_dim,
            dims.shared_hidden,
            seed,
            input_keys.iter().map(|k| math::combine(1, *k)),
        );
        let heads = task_set
            .tasks()
            .iter()
            .map(|t| {
                let task_key = math::combine(2, *t as u64);
                TaskHead {
                    hidden: Dense::glorot(
                        dims.shared_hidden,
                        dims.task_hidden,
                        seed,
                        (0..dims.shared_hidden as u64).map(|j| math::combine(task_key, j)),
                    ),
                    output: Dense::glorot(
                        dims.task_hidden,
                        1,
                        seed,
                        (0..dims.task_hidden as u64).map(|j| math::combine(task_key ^ 0xff, j)),
                    ),
                }
            })
            .collect();
        Ok(MtlNetwork { task_set: task_set.clone(), dims, params: Params { shared, heads } })
    }

    /// Network with every weight and bias set to zero.
    pub fn zeros(dims: NetworkDims, task_set: &TaskSet) -> MtlNetwork {
        MtlNetwork { task_set: task_set.clone(), dims, params: Params::zeros(dims, task_set.len()) }
    }

    /// Reassembles a network from stored parts, checking shapes.
    pub fn from_parts(task_set: TaskSet, dims: NetworkDims, params: Params) -> Result<MtlNetwork> {
        let expected = Params::zeros(dims, task_set.len());
        if !expected.same_shape(&params) {
            return Err(Error::InvalidConfig("parameter shapes do not match dimensions".into()));
        }
        Ok(MtlNetwork { task_set, dims, params })
    }

    pub fn task_set(&self) -> &TaskSet {
        &self.task_set
    }

    pub fn dims(&self) -> NetworkDims {
        self.dims
    }

    pub fn forward(&self, x: &[f64]) -> Result<Activations> {
        if x.len() != self.dims.input_dim {
            return Err(Error::DimensionMismatch {
                what: "network input",
                expected: self.dims.input_dim,
                found: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "network input" });
        }
        Ok(forward_with(&self.params, x))
    }
}

fn forward_with(params: &Params, x: &[f64]) -> Activations {
    let mut shared = Vec::new();
    params.shared.forward_into(x, &mut shared);
    relu_in_place(&mut shared);
    let mut hidden = Vec::with_capacity(params.heads.len());
    let mut logits = Vec::with_capacity(params.heads.len());
    let mut out = Vec::with_capacity(1);
    for head in &params.heads {
        let mut h = Vec::new();
        head.hidden.forward_into(&shared, &mut h);
        relu_in_place(&mut h);
        head.output.forward_into(&h, &mut out);
        logits.push(out[0]);
        hidden.push(h);
    }
    let probs = logits.iter().map(|z| math::sigmoid(*z)).collect();
    Activations { shared, hidden, logits, probs }
}

/// Binary cross-entropy of one prediction; `positive_weight` scales the `y = 1` term.
pub fn bce_loss(p: f64, y: f64, positive_weight: f64) -> f64 {
    let p = p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
    -(positive_weight * y * math::ln(p) + (1.0 - y) * math::ln(1.0 - p))
}

/// Unweighted sum of per-task binary cross-entropies.
pub fn loss(probs: &[f64], labels: &[f64]) -> f64 {
    debug_assert_eq!(probs.len(), labels.len());
    probs.iter().zip(labels).map(|(p, y)| bce_loss(*p, *y, 1.0)).sum()
}

/// Mean-over-batch gradient of the summed task loss, plus the mean loss.
pub fn gradients(
    params: &Params,
    examples: &Examples<'_>,
    batch: &[usize],
    positive_weight: f64,
) -> (Params, f64) {
    gradients_for_tasks(params, examples, batch, positive_weight, None)
}

/// As [`gradients`], but tasks with `task_mask[t] == false` contribute no loss.
pub fn gradients_for_tasks(
    params: &Params,
    examples: &Examples<'_>,
    batch: &[usize],
    positive_weight: f64,
    task_mask: Option<&[bool]>,
) -> (Params, f64) {
    let mut grads = params.zeros_like();
    if batch.is_empty() {
        return (grads, 0.0);
    }
    let scale = 1.0 / batch.len() as f64;
    let n_tasks = params.heads.len();
    let mut total_loss = 0.0;
    let mut d_shared = vec![0.0; params.shared.n_out];
    let mut d_hidden = Vec::new();
    let mut back = Vec::new();
    for &i in batch {
        let x = examples.row(i);
        let y = examples.labels(i);
        let act = forward_with(params, x);
        d_shared.fill(0.0);
        for t in 0..n_tasks {
            if task_mask.is_some_and(|m| !m[t]) {
                continue;
            }
            let (p, label) = (act.probs[t], y[t]);
            total_loss += bce_loss(p, label, positive_weight);
            // d/dz of the weighted BCE through the sigmoid
            let dz = scale * (positive_weight * label * (p - 1.0) + (1.0 - label) * p);
            let head = &params.heads[t];
            let ghead = &mut grads.heads[t];
            ghead.output.accumulate(&act.hidden[t], &[dz]);
            d_hidden.clear();
            d_hidden.extend(head.output.weights.iter().map(|w| w * dz));
            for (d, h) in d_hidden.iter_mut().zip(&act.hidden[t]) {
                if *h <= 0.0 {
                    *d = 0.0;
                }
            }
            ghead.hidden.accumulate(&act.shared, &d_hidden);
            head.hidden.backprop(&d_hidden, &mut back);
            for (s, b) in d_shared.iter_mut().zip(&back) {
                *s += b;
            }
        }
        for (d, h) in d_shared.iter_mut().zip(&act.shared) {
            if *h <= 0.0 {
                *d = 0.0;
            }
        }
        grads.shared.accumulate(x, &d_shared);
    }
    (grads, total_loss * scale)
}

impl MtlNetwork {
    /// Probabilities of the head that ranks `task`.
    pub fn predict_row(&self, x: &[f64], task: SourceId) -> Result<f64> {
        let head = self.task_set.head_for(task).ok_or(Error::UnknownTask(task))?;
        Ok(self.forward(x)?.probs[head])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TaskSet;

    fn tiny_config() -> TrainConfig {
        TrainConfig { shared_hidden: 1, task_hidden: 1, ..TrainConfig::default() }
    }

    #[test]
    fn zero_network_outputs_one_half() {
        let dims = NetworkDims { input_dim: 4, shared_hidden: 3, task_hidden: 2 };
        let net = MtlNetwork::zeros(dims, &TaskSet::multi_any());
        let act = net.forward(&[1.0, -2.0, 0.5, 3.0]).unwrap();
        assert_eq!(act.probs, vec![0.5; 10]);
    }

    #[test]
    fn hand_evaluated_one_dimensional_network() {
        let ts = TaskSet::singleton(SourceId::Ct).unwrap();
        let mut net = init_network(1, &ts, &tiny_config(), 0).unwrap();
        for s in net.params.slices_mut() {
            s.fill(0.0);
        }
        net.params.shared.weights[0] = 1.0;
        net.params.heads[0].hidden.weights[0] = 1.0;
        net.params.heads[0].output.weights[0] = 1.0;
        let p = net.forward(&[2.0]).unwrap().probs[0];
        assert!((p - 1.0 / (1.0 + libm::exp(-2.0))).abs() < 1e-15);
        assert!((p - 0.8808).abs() < 1e-4);

        // negative pre-activation is cut by the ReLU
        let act = net.forward(&[-2.0]).unwrap();
        assert_eq!(act.shared, vec![0.0]);
        assert_eq!(act.probs[0], 0.5);
    }

    #[test]
    fn forward_rejects_bad_input() {
        let net = init_network(3, &TaskSet::multi(), &TrainConfig::default(), 1).unwrap();
        assert!(matches!(net.forward(&[1.0, 2.0]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(net.forward(&[1.0, f64::NAN, 0.0]), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn init_shapes_and_determinism() {
        let cfg = TrainConfig::default();
        let a = init_network(7, &TaskSet::multi_any(), &cfg, 42).unwrap();
        let b = init_network(7, &TaskSet::multi_any(), &cfg, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.params.shared.weights.len(), 7 * 300);
        assert_eq!(a.params.shared.n_out, 300);
        assert_eq!(a.params.heads.len(), 10);
        assert!(a.params.heads.iter().all(|h| h.output.n_in == cfg.task_hidden));
        let bound = libm::sqrt(6.0 / 307.0);
        assert!(a.params.shared.weights.iter().all(|w| w.abs() <= bound));
        assert!(a.params.shared.bias.iter().all(|b| *b == 0.0));
        let c = init_network(7, &TaskSet::multi_any(), &cfg, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn keyed_init_is_stable_under_task_removal() {
        let cfg = TrainConfig { shared_hidden: 8, task_hidden: 4, ..TrainConfig::default() };
        let full = init_network(5, &TaskSet::multi(), &cfg, 9).unwrap();
        let less = init_network(5, &TaskSet::multi_without(SourceId::Cnn), &cfg, 9).unwrap();
        assert_eq!(full.params.shared, less.params.shared);
        assert_eq!(full.params.heads[0], less.params.heads[0]);
        assert_eq!(full.params.heads[3], less.params.heads[2]);
    }

    #[test]
    fn loss_values() {
        assert!((loss(&[0.5], &[1.0]) - core::f64::consts::LN_2).abs() < 1e-12);
        assert!((loss(&[0.5, 0.5], &[1.0, 0.0]) - 2.0 * core::f64::consts::LN_2).abs() < 1e-12);
        assert!((loss(&[0.5, 0.5], &[1.0, 0.0]) - 1.3863).abs() < 1e-4);
        assert!(loss(&[1.0, 0.0], &[1.0, 0.0]) <= 4e-7);
        assert!(loss(&[1.0], &[1.0]) <= 2e-7);
        assert!(loss(&[0.0, 1.0], &[1.0, 0.0]).is_finite());
    }
}
