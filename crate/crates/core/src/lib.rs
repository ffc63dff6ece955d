//! Unsupervised lemmatization as word-form clustering.
//!
//! Word forms are compared with a distance that multiplies string similarity
//! (averaged raw and simplified Jaro-Winkler) by shifted embedding cosine.
//! The vocabulary is split into stem-keyed hyperclusters, each hypercluster is
//! clustered with threshold-stopped average linkage, and unseen forms are
//! attached with a single clustering step.

pub mod cli;
pub mod cluster;
pub mod conllu;
pub mod distance;
pub mod embeddings;
pub mod error;
pub mod evaluate;
pub mod hypercluster;
pub mod strsim;
pub mod textnorm;

pub use cluster::{agglomerate, build_model, AssignSession, ClusterId, CondensedDistances, Lexicon};
pub use distance::{pair_distance, DistanceMode, Params};
pub use embeddings::{load_vectors, Vocabulary};
pub use error::{Error, Result};
pub use evaluate::{evaluate_run, v_measure, EvalReport};
