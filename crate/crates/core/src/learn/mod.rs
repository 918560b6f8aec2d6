//! Sparse per-group features and linear SVMs (binary and one-vs-rest)
//! trained by dual coordinate descent.

mod features;
mod introspect;
mod multiclass;
mod sparse;
mod svm;

pub use features::{featurize_group, FeatureSpace};
pub use introspect::{top_weighted_features, FeatureDescriptor, WeightSign};
pub use multiclass::{train_ovr_svm, MultiClassModel};
pub use sparse::SparseVector;
pub use svm::{train_binary_svm, train_binary_svm_with_report, DualReport, LinearModel, SvmParams};
