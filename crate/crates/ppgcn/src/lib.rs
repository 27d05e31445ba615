//! Social event modeling on heterogeneous information networks.
//!
//! The crate builds a typed event graph from short-message corpora, measures
//! event-to-event similarity through meta-path instance counts, trains a
//! pairwise-popularity graph convolutional network that learns both event
//! representations and per-meta-path weights, and clusters events by the
//! learned similarity. Everything is deterministic under a fixed seed.
//!
//! Start with the runnable programs under `examples/`:
//!
//! - `build_graph` — schema, ingestion, snapshots
//! - `metapath_similarity` — meta-path catalogs, count matrices, similarity
//! - `synthetic_corpus` — planted-class corpus generation
//! - `train_detect` — end-to-end training and event detection
//! - `cluster_events` — similarity-distance clustering and scoring
//! - `weight_transfer` — reusing learned meta-path weights across corpora
//!
//! The `ppgcn` binary exposes the same pipeline as subcommands
//! (`synth`, `build`, `train`, `detect`, `cluster`, `inspect`).

pub mod cluster;
pub mod embed;
pub mod hin;
pub mod metapath;
pub mod model;
pub mod nn;
pub mod pipeline;
pub mod sparse;
pub mod synth;

pub use hin::{default_schema, ingest_corpus, EventDocument, Hin, MetaSchema};
pub use metapath::{enumerate_metapaths, KiesWeights, MetaPath, MetaPathCatalog};
pub use model::{Model, TrainConfig};
pub use sparse::SparseMatrix;
