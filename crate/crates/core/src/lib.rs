//! Occlusion-recovery data augmentation and retrieval evaluation for person
//! re-identification.
//!
//! The pipeline stages, in execution order:
//!
//! 1. [`data`] — dataset ingestion (manifest or benchmark filenames),
//!    deterministic synthetic corpora, channel statistics.
//! 2. [`occlude`] — random rectangle occlusion with mean-pixel fill.
//! 3. [`neuralops`] — tensors, differentiable operators, optimizers, and the
//!    checkpoint format all networks share.
//! 4. [`gan`] — U-Net generator and convolutional discriminator trained on
//!    (occluded, original) pairs to restore occluded regions.
//! 5. [`augment`] — label-preserving merge of generated samples into the
//!    training set.
//! 6. [`baseline`] — identity classifier and penultimate-layer descriptors.
//! 7. [`evalkit`] — pairwise distances, CMC/mAP scoring, multi-query pooling,
//!    and k-reciprocal re-ranking.
//!
//! Every randomized stage draws from seeded substreams ([`rng`]), so whole
//! runs are reproducible bit-for-bit.

pub mod data;
pub mod error;
pub mod occlude;
pub mod rng;

pub use error::{Error, Result};
