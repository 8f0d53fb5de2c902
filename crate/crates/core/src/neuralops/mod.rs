//! Differentiable operators, optimizers, and the shared checkpoint format.
//!
//! Operators are plain structs owning their parameters and retaining forward
//! context for the matching backward call; networks compose them explicitly.
//! Backward passes are analytic and are held to a finite-difference contract
//! (see the gradient-check test suite). Everything runs in double precision
//! on a single thread, so results are deterministic.

pub mod checkpoint;
pub mod init;
pub mod ops;
pub mod optim;
pub mod prep;
mod tensor;

pub use ops::{
    BatchNorm2d, Bce, ConcatChannels, Conv2d, ConvTranspose2d, Dropout, FullyConnected,
    GlobalAvgPool, Mse, PRelu, Sequential, Sigmoid, SoftmaxCrossEntropy, Tanh,
};
pub use tensor::Tensor;

use crate::error::Result;

/// Forward-pass mode: affects batch norm statistics and dropout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Train,
    Eval,
}

/// The operator vocabulary networks are assembled from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    Conv2d,
    Conv2dTranspose,
    BatchNorm,
    PRelu,
    Sigmoid,
    Tanh,
    Dropout,
    FullyConnected,
    ConcatChannels,
    SoftmaxCrossEntropy,
    Mse,
    Bce,
    GlobalAvgPool,
}

/// A learnable tensor together with its gradient accumulator.
#[derive(Debug, Clone)]
pub struct Param {
    pub value: Tensor,
    pub grad: Tensor,
}

impl Param {
    pub fn new(value: Tensor) -> Self {
        let grad = Tensor::zeros(value.shape());
        Param { value, grad }
    }

    pub fn zero_grad(&mut self) {
        self.grad.data_mut().fill(0.0);
    }
}

/// A single-input differentiable layer.
///
/// `backward` consumes the context retained by the latest `forward` and
/// accumulates parameter gradients (they are not cleared implicitly).
pub trait Layer {
    fn forward(&mut self, x: &Tensor, mode: Mode) -> Result<Tensor>;
    fn backward(&mut self, grad_out: &Tensor) -> Result<Tensor>;

    /// Visit learnable parameters as `(path, param)` pairs.
    fn visit_params(&mut self, prefix: &str, f: &mut dyn FnMut(String, &mut Param));

    /// Visit persistent state: parameters plus non-learnable buffers
    /// (e.g. batch-norm running statistics). Drives checkpointing.
    fn visit_state(&mut self, prefix: &str, f: &mut dyn FnMut(String, &mut Tensor)) {
        self.visit_params(prefix, &mut |name, p| f(name, &mut p.value));
    }
}

/// Clear accumulated gradients of every parameter in a layer tree.
pub fn zero_grads(layer: &mut dyn Layer) {
    layer.visit_params("", &mut |_, p| p.zero_grad());
}

pub(crate) fn join_path(prefix: &str, name: &str) -> String {
    if prefix.is_empty() {
        name.to_string()
    } else {
        format!("{prefix}.{name}")
    }
}
