use serde::{Deserialize, Serialize};

use super::sparse::SparseVector;
use crate::error::{Error, Result};

/// Trainer settings. `tolerance` bounds the spread of projected gradients
/// (`max PG - min PG`) at which an epoch counts as converged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub c: f64,
    pub tolerance: f64,
    pub max_epochs: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            tolerance: 0.1,
            max_epochs: 1000,
        }
    }
}

impl SvmParams {
    fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::invalid("C must be positive"));
        }
        if !(self.tolerance > 0.0) || self.max_epochs == 0 {
            return Err(Error::invalid("tolerance and epoch limit must be positive"));
        }
        Ok(())
    }
}

/// Linear decision function `w . x + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub c: f64,
    pub feature_space_hash: String,
}

impl LinearModel {
    pub fn decision(&self, x: &SparseVector) -> f64 {
        x.dot_dense(&self.weights) + self.bias
    }

    /// `+1` when the decision value is nonnegative, else `-1`.
    pub fn predict(&self, x: &SparseVector) -> i8 {
        if self.decision(x) >= 0.0 {
            1
        } else {
            -1
        }
    }

    /// Primal objective `1/2 (|w|^2 + b^2) + C sum hinge`, the bias being
    /// penalized like any other weight.
    pub fn objective(&self, instances: &[SparseVector], labels: &[i8]) -> f64 {
        let reg = 0.5 * (self.weights.iter().map(|w| w * w).sum::<f64>() + self.bias * self.bias);
        let loss: f64 = instances
            .iter()
            .zip(labels)
            .map(|(x, &y)| (1.0 - f64::from(y) * self.decision(x)).max(0.0))
            .sum();
        reg + self.c * loss
    }
}

/// Dual solution details, kept for audits.
#[derive(Debug, Clone, PartialEq)]
pub struct DualReport {
    pub alphas: Vec<f64>,
    pub epochs: usize,
    pub converged: bool,
    /// `max PG - min PG` of the final epoch.
    pub final_gap: f64,
}

impl DualReport {
    /// Every dual variable lies in `[0, C]`.
    pub fn feasible(&self, c: f64) -> bool {
        self.alphas.iter().all(|&a| (0.0..=c).contains(&a))
    }
}

/// Trains a binary L2-regularized L1-loss SVM. `labels` are `+1`/`-1`.
pub fn train_binary_svm(
    instances: &[SparseVector],
    labels: &[i8],
    params: &SvmParams,
    feature_space_hash: &str,
) -> Result<LinearModel> {
    train_binary_svm_with_report(instances, labels, params, feature_space_hash).map(|(m, _)| m)
}

/// Dual coordinate descent with sequential sweeps over the instances; the
/// bias is an extra always-one feature.
pub fn train_binary_svm_with_report(
    instances: &[SparseVector],
    labels: &[i8],
    params: &SvmParams,
    feature_space_hash: &str,
) -> Result<(LinearModel, DualReport)> {
    params.validate()?;
    if instances.len() != labels.len() {
        return Err(Error::LengthMismatch(format!(
            "{} instances, {} labels",
            instances.len(),
            labels.len()
        )));
    }
    if labels.iter().any(|&y| y != 1 && y != -1) {
        return Err(Error::invalid("binary labels must be +1 or -1"));
    }
    if !(labels.contains(&1) && labels.contains(&-1)) {
        return Err(Error::DegenerateLabels("need at least one instance of each label".into()));
    }
    let dim = instances[0].dim();
    if instances.iter().any(|x| x.dim() != dim) {
        return Err(Error::invalid("instances have different dimensions"));
    }

    let n = instances.len();
    let c = params.c;
    let qii: Vec<f64> = instances.iter().map(|x| x.norm_sq() + 1.0).collect();
    let mut alpha = vec![0.0; n];
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut epochs = 0;
    let mut gap = f64::INFINITY;
    while epochs < params.max_epochs {
        epochs += 1;
        let (mut pg_max, mut pg_min) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..n {
            let y = f64::from(labels[i]);
            let g = y * (instances[i].dot_dense(&w) + b) - 1.0;
            let pg = if alpha[i] == 0.0 {
                g.min(0.0)
            } else if alpha[i] == c {
                g.max(0.0)
            } else {
                g
            };
            pg_max = pg_max.max(pg);
            pg_min = pg_min.min(pg);
            if pg != 0.0 {
                let old = alpha[i];
                alpha[i] = (old - g / qii[i]).clamp(0.0, c);
                let step = (alpha[i] - old) * y;
                for &(j, v) in instances[i].entries() {
                    w[j] += step * v;
                }
                b += step;
            }
        }
        gap = pg_max - pg_min;
        if gap < params.tolerance {
            break;
        }
    }
    let converged = gap < params.tolerance;
    if !converged {
        log::warn!("svm stopped after {epochs} epochs with gradient gap {gap:.3e}");
    }
    let model = LinearModel {
        weights: w,
        bias: b,
        c,
        feature_space_hash: feature_space_hash.to_string(),
    };
    let report = DualReport {
        alphas: alpha,
        epochs,
        converged,
        final_gap: gap,
    };
    Ok((model, report))
}
