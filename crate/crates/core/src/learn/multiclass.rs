use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sparse::SparseVector;
use super::svm::{train_binary_svm, LinearModel, SvmParams};
use crate::error::{Error, Result};

/// One-vs-rest ensemble of binary models, one per class.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiClassModel {
    classes: Vec<String>,
    models: Vec<LinearModel>,
}

#[derive(Serialize, Deserialize)]
struct ExportedClass {
    class: String,
    bias: f64,
    weights: Vec<(usize, f64)>,
}

#[derive(Serialize, Deserialize)]
struct Exported {
    classes: Vec<String>,
    c: f64,
    dim: usize,
    feature_space_hash: String,
    models: Vec<ExportedClass>,
}

impl MultiClassModel {
    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn models(&self) -> &[LinearModel] {
        &self.models
    }

    pub fn model_for(&self, class: &str) -> Option<&LinearModel> {
        self.classes.iter().position(|c| c == class).map(|i| &self.models[i])
    }

    pub fn decisions(&self, x: &SparseVector) -> Vec<f64> {
        self.models.iter().map(|m| m.decision(x)).collect()
    }

    /// Class with the highest decision value; the earlier class wins ties.
    pub fn predict(&self, x: &SparseVector) -> &str {
        let mut best = 0;
        let scores = self.decisions(x);
        for (i, &s) in scores.iter().enumerate() {
            if s > scores[best] {
                best = i;
            }
        }
        &self.classes[best]
    }

    /// JSON export with sparse per-class weights.
    pub fn to_json(&self) -> serde_json::Value {
        let first = &self.models[0];
        let exported = Exported {
            classes: self.classes.clone(),
            c: first.c,
            dim: first.weights.len(),
            feature_space_hash: first.feature_space_hash.clone(),
            models: self
                .classes
                .iter()
                .zip(&self.models)
                .map(|(class, m)| ExportedClass {
                    class: class.clone(),
                    bias: m.bias,
                    weights: m
                        .weights
                        .iter()
                        .enumerate()
                        .filter(|(_, w)| **w != 0.0)
                        .map(|(i, &w)| (i, w))
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_value(exported).expect("model serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let e: Exported = serde_json::from_value(value.clone())
            .map_err(|err| Error::ModelFormat(err.to_string()))?;
        if e.classes.len() < 2 || e.models.len() != e.classes.len() {
            return Err(Error::ModelFormat("class list and models disagree".into()));
        }
        let mut models = Vec::with_capacity(e.models.len());
        for (class, m) in e.classes.iter().zip(e.models) {
            if &m.class != class {
                return Err(Error::ModelFormat(format!("model order mismatch at {class:?}")));
            }
            let mut weights = vec![0.0; e.dim];
            for (i, w) in m.weights {
                *weights
                    .get_mut(i)
                    .ok_or_else(|| Error::ModelFormat(format!("weight id {i} outside dimension")))? = w;
            }
            models.push(LinearModel {
                weights,
                bias: m.bias,
                c: e.c,
                feature_space_hash: e.feature_space_hash.clone(),
            });
        }
        Ok(MultiClassModel {
            classes: e.classes,
            models,
        })
    }
}

/// Trains one class-vs-rest model per entry of `classes` (in parallel).
/// Every label must be listed and every class needs an instance.
pub fn train_ovr_svm(
    instances: &[SparseVector],
    labels: &[String],
    classes: &[String],
    params: &SvmParams,
    feature_space_hash: &str,
) -> Result<MultiClassModel> {
    if instances.len() != labels.len() {
        return Err(Error::LengthMismatch(format!(
            "{} instances, {} labels",
            instances.len(),
            labels.len()
        )));
    }
    if classes.len() < 2 {
        return Err(Error::DegenerateLabels("need at least two classes".into()));
    }
    if let Some(l) = labels.iter().find(|l| !classes.contains(l)) {
        return Err(Error::invalid(format!("label {l:?} is not a declared class")));
    }
    if let Some(c) = classes.iter().find(|c| !labels.contains(c)) {
        return Err(Error::DegenerateLabels(format!("class {c:?} has no instances")));
    }
    let models = classes
        .par_iter()
        .map(|class| {
            let y: Vec<i8> = labels.iter().map(|l| if l == class { 1 } else { -1 }).collect();
            train_binary_svm(instances, &y, params, feature_space_hash)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MultiClassModel {
        classes: classes.to_vec(),
        models,
    })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn v(values: &[f64]) -> SparseVector {
        SparseVector::from_dense(values).unwrap()
    }

    fn s(x: &str) -> String {
        x.to_string()
    }

    fn separable() -> (Vec<SparseVector>, Vec<String>, Vec<String>) {
        let centers = [[5.0, 0.0, 0.0], [0.0, 5.0, 0.0], [0.0, 0.0, 5.0]];
        let names = ["a", "b", "c"];
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (c, name) in centers.iter().zip(names) {
            for j in 0..5 {
                let jitter = j as f64 * 0.1;
                xs.push(v(&[c[0] + jitter, c[1] - jitter, c[2] + jitter / 2.0]));
                ys.push(s(name));
            }
        }
        (xs, ys, names.iter().map(|n| s(n)).collect())
    }

    #[test]
    fn separable_classes_fit_perfectly() {
        let (xs, ys, classes) = separable();
        let m = train_ovr_svm(&xs, &ys, &classes, &SvmParams::default(), "h").unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert_eq!(m.predict(x), y);
        }
        assert_eq!(m.predict(&xs[7]), "b");
    }

    #[test]
    fn ties_go_to_first_class() {
        let (xs, ys, classes) = separable();
        let m = train_ovr_svm(&xs, &ys, &classes, &SvmParams::default(), "h").unwrap();
        let zero_model = LinearModel { weights: vec![0.0; 3], bias: 0.0, c: 1.0, feature_space_hash: "h".into() };
        let tied = MultiClassModel { classes: m.classes.clone(), models: vec![zero_model; 3] };
        assert_eq!(tied.predict(&v(&[1.0, 2.0, 3.0])), "a");
    }

    #[test]
    fn export_roundtrip() {
        let (xs, ys, classes) = separable();
        let m = train_ovr_svm(&xs, &ys, &classes, &SvmParams::default(), "h").unwrap();
        let json = m.to_json();
        assert_eq!(json["classes"], serde_json::json!(["a", "b", "c"]));
        assert_eq!(json["feature_space_hash"], "h");
        assert_eq!(MultiClassModel::from_json(&json).unwrap(), m);
    }

    #[test]
    fn errors() {
        let (xs, ys, _) = separable();
        let p = SvmParams::default();
        assert!(train_ovr_svm(&xs, &ys, &[s("a")], &p, "").is_err());
        let with_empty = vec![s("a"), s("b"), s("c"), s("d")];
        assert!(matches!(train_ovr_svm(&xs, &ys, &with_empty, &p, ""), Err(Error::DegenerateLabels(_))));
        assert!(train_ovr_svm(&xs, &ys, &[s("a"), s("b")], &p, "").is_err());
    }

    proptest! {
        #[test]
        fn two_class_matches_binary(
            pts in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 4..20),
            probe in prop::collection::vec((-4.0f64..4.0, -4.0f64..4.0), 1..10),
        ) {
            let xs: Vec<SparseVector> = pts.iter().map(|&(a, b)| v(&[a, b])).collect();
            let ys: Vec<String> = (0..xs.len()).map(|i| s(if i % 2 == 0 { "pos" } else { "neg" })).collect();
            let bin: Vec<i8> = ys.iter().map(|y| if y == "pos" { 1 } else { -1 }).collect();
            let p = SvmParams::default();
            let ovr = train_ovr_svm(&xs, &ys, &[s("pos"), s("neg")], &p, "").unwrap();
            let binary = train_binary_svm(&xs, &bin, &p, "").unwrap();
            for &(a, b) in &probe {
                let x = v(&[a, b]);
                let expected = if binary.predict(&x) == 1 { "pos" } else { "neg" };
                prop_assert_eq!(ovr.predict(&x), expected);
            }
        }
    }
}
