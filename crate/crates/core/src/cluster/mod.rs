//! Threshold-stopped average-linkage clustering per hypercluster, the
//! resulting [`Lexicon`], and single-step assignment of unseen forms.

mod lexicon;
mod linkage;

pub use lexicon::{build_model, AssignSession, ClusterId, ClusterMeta, Lexicon};
pub use linkage::{agglomerate, CondensedDistances};
