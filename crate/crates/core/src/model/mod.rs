//! Hard-parameter-sharing multi-task network and its training loop.
//!
//! One ReLU layer is shared by all tasks; each task owns a ReLU hidden layer
//! and a single sigmoid output unit. Gradients are computed by hand and the
//! weights are trained with minibatch SGD using Nesterov momentum.

mod network;
mod optim;
mod tasks;
mod train;

pub use network::{
    bce_loss, gradients, gradients_for_tasks, init_network, loss, Activations, Dense, NetworkDims,
    MtlNetwork, Params, TaskHead, PROB_CLAMP,
};
pub use optim::{lookahead, nesterov_update, sgd_nesterov_step};
pub use tasks::{TaskSet, Variant};
pub use train::{predict, train, Examples, TrainConfig, TrainOutcome};
