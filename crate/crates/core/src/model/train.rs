use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{gradients, lookahead, sgd_nesterov_step, MtlNetwork};
use crate::error::{Error, Result};
use crate::math;
use crate::source::SourceId;

const SHUFFLE_STREAM: u64 = 0x5348_5546;

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub momentum: f64,
    pub batch_size: usize,
    /// Master seed; rerun `r` uses `seed + r`.
    pub seed: u64,
    pub reruns: usize,
    pub shared_hidden: usize,
    pub task_hidden: usize,
    /// Weight on the positive-label term of the loss; 1 disables re-weighting.
    pub positive_weight: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 100,
            learning_rate: 0.01,
            momentum: 0.9,
            batch_size: 32,
            seed: 42,
            reruns: 3,
            shared_hidden: 300,
            task_hidden: 50,
            positive_weight: 1.0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.epochs < 1 {
            return bad("epochs must be at least 1");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning_rate must be positive");
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return bad("momentum must lie in [0, 1)");
        }
        if self.batch_size < 1 {
            return bad("batch_size must be at least 1");
        }
        if self.reruns < 1 {
            return bad("reruns must be at least 1");
        }
        if self.shared_hidden < 1 || self.task_hidden < 1 {
            return bad("hidden widths must be at least 1");
        }
        if !(self.positive_weight > 0.0 && self.positive_weight.is_finite()) {
            return bad("positive_weight must be positive");
        }
        Ok(())
    }

    pub fn rerun_seeds(&self) -> Vec<u64> {
        (0..self.reruns as u64).map(|r| self.seed.wrapping_add(r)).collect()
    }
}

/// Training rows: a row-major input matrix and a row-major 0/1 label matrix
/// with one column per task.
#[derive(Clone, Copy, Debug)]
pub struct Examples<'a> {
    inputs: &'a [f64],
    dim: usize,
    labels: &'a [f64],
    tasks: usize,
    rows: &'a [usize],
}

impl<'a> Examples<'a> {
    /// `rows` selects which rows of `inputs` take part; label row `k`
    /// belongs to `rows[k]`.
    pub fn new(inputs: &'a [f64], dim: usize, rows: &'a [usize], labels: &'a [f64], tasks: usize) -> Result<Self> {
        if labels.len() != rows.len() * tasks {
            return Err(Error::DimensionMismatch {
                what: "label matrix",
                expected: rows.len() * tasks,
                found: labels.len(),
            });
        }
        if dim == 0 || rows.iter().any(|r| (r + 1) * dim > inputs.len()) {
            return Err(Error::InvalidConfig("example rows out of range".into()));
        }
        Ok(Examples { inputs, dim, labels, tasks, rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, k: usize) -> &'a [f64] {
        let r = self.rows[k];
        &self.inputs[r * self.dim..(r + 1) * self.dim]
    }

    pub fn labels(&self, k: usize) -> &'a [f64] {
        &self.labels[k * self.tasks..(k + 1) * self.tasks]
    }

    pub fn tasks(&self) -> usize {
        self.tasks
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainOutcome {
    pub network: MtlNetwork,
    /// Mean per-example loss of each epoch, measured on the minibatches as
    /// they were visited (at the look-ahead weights).
    pub history: Vec<f64>,
}

/// Minibatch SGD with Nesterov momentum. Batches are reshuffled every epoch
/// from a generator seeded with `seed`.
pub fn train(mut network: MtlNetwork, examples: &Examples<'_>, config: &TrainConfig, seed: u64) -> Result<TrainOutcome> {
    config.validate()?;
    if examples.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if examples.tasks() != network.task_set().len() {
        return Err(Error::DimensionMismatch {
            what: "label columns",
            expected: network.task_set().len(),
            found: examples.tasks(),
        });
    }
    if examples.dim != network.dims().input_dim {
        return Err(Error::DimensionMismatch {
            what: "network input",
            expected: network.dims().input_dim,
            found: examples.dim,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(math::combine(SHUFFLE_STREAM, seed));
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let mut velocity = network.params.zeros_like();
    let mut history = Vec::with_capacity(config.epochs);
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for batch in order.chunks(config.batch_size) {
            let ahead = lookahead(&network.params, &velocity, config.momentum);
            let (grads, batch_loss) = gradients(&ahead, examples, batch, config.positive_weight);
            if !batch_loss.is_finite() || !grads.is_finite() {
                return Err(Error::NonFinite { what: "training loss" });
            }
            epoch_loss += batch_loss * batch.len() as f64;
            sgd_nesterov_step(&mut network.params, &grads, &mut velocity, config.learning_rate, config.momentum);
        }
        history.push(epoch_loss / examples.len() as f64);
    }
    Ok(TrainOutcome { network, history })
}

/// One probability per row from the head that ranks `task`.
pub fn predict<'r, I>(network: &MtlNetwork, rows: I, task: SourceId) -> Result<Vec<f64>>
where
    I: IntoIterator<Item = &'r [f64]>,
{
    network.task_set().head_for(task).ok_or(Error::UnknownTask(task))?;
    rows.into_iter().map(|x| network.predict_row(x, task)).collect()
}
