use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::DataSet;
use crate::error::{Error, Result};
use crate::geonorm::Gazetteer;

/// One of the shipped state-level label files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelDataset {
    Overweight,
    Diabetes,
    Political,
}

impl LabelDataset {
    pub const ALL: [LabelDataset; 3] = [LabelDataset::Overweight, LabelDataset::Diabetes, LabelDataset::Political];

    pub fn as_str(self) -> &'static str {
        match self {
            LabelDataset::Overweight => "overweight",
            LabelDataset::Diabetes => "diabetes",
            LabelDataset::Political => "political",
        }
    }

    /// `(positive, negative)` label values.
    pub fn label_values(self) -> (&'static str, &'static str) {
        match self {
            LabelDataset::Political => ("D", "R"),
            _ => ("above", "below"),
        }
    }

    /// National median the labels are split on.
    pub fn threshold_doc(self) -> &'static str {
        match self {
            LabelDataset::Overweight => "overweight rate vs national median 64.2%",
            LabelDataset::Diabetes => "diabetes rate vs national median 9.7%",
            LabelDataset::Political => "Democratic vote share vs median 51.6% (D above, R below)",
        }
    }
}

impl fmt::Display for LabelDataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LabelDataset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LabelDataset::ALL
            .into_iter()
            .find(|d| d.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::invalid(format!("unknown dataset {s:?}")))
    }
}

/// Binary labels for all 51 states.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateLabelSet {
    pub dataset: LabelDataset,
    pub labels: BTreeMap<String, String>,
    pub threshold_doc: String,
}

impl StateLabelSet {
    pub fn load(dataset: LabelDataset, data: &DataSet, gaz: &Gazetteer) -> Result<Self> {
        Self::from_csv(dataset, data.labels_csv(dataset.as_str())?, gaz)
    }

    /// Parses `state,label` rows and checks coverage and class balance.
    pub fn from_csv(dataset: LabelDataset, text: &str, gaz: &Gazetteer) -> Result<Self> {
        let file = format!("labels_{dataset}.csv");
        let bad = |reason: String| Error::DataFile {
            name: file.clone(),
            reason,
        };
        let (pos, neg) = dataset.label_values();
        let mut labels = BTreeMap::new();
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        for rec in rdr.records() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            let state = rec.get(0).unwrap_or_default().to_ascii_uppercase();
            let label = rec.get(1).unwrap_or_default();
            let label = if label.eq_ignore_ascii_case(pos) {
                pos
            } else if label.eq_ignore_ascii_case(neg) {
                neg
            } else {
                return Err(bad(format!("{state}: label {label:?} not in {{{pos}, {neg}}}")));
            };
            if !gaz.is_state(&state) {
                return Err(bad(format!("unknown state {state:?}")));
            }
            if labels.insert(state.clone(), label.to_string()).is_some() {
                return Err(bad(format!("duplicate state {state}")));
            }
        }
        let missing: Vec<&str> = gaz.state_codes().filter(|c| !labels.contains_key(*c)).collect();
        if !missing.is_empty() {
            return Err(bad(format!("missing states {missing:?}")));
        }
        let n_pos = labels.values().filter(|l| *l == pos).count();
        if !(25..=26).contains(&n_pos) {
            return Err(bad(format!("class split {n_pos}/{} is not 25/26", labels.len() - n_pos)));
        }
        Ok(StateLabelSet {
            dataset,
            labels,
            threshold_doc: dataset.threshold_doc().to_string(),
        })
    }

    pub fn positive(&self) -> &'static str {
        self.dataset.label_values().0
    }

    pub fn negative(&self) -> &'static str {
        self.dataset.label_values().1
    }

    pub fn label(&self, state: &str) -> Option<&str> {
        self.labels.get(state).map(String::as_str)
    }

    /// `+1` for the positive class.
    pub fn sign(&self, state: &str) -> Option<i8> {
        self.label(state).map(|l| if l == self.positive() { 1 } else { -1 })
    }

    /// Most frequent label; the positive label on a tie.
    pub fn majority_label(&self) -> &'static str {
        let n_pos = self.labels.values().filter(|l| *l == self.positive()).count();
        if 2 * n_pos >= self.labels.len() {
            self.positive()
        } else {
            self.negative()
        }
    }

    /// Accuracy of always predicting the majority label.
    pub fn majority_baseline(&self) -> f64 {
        let m = self.majority_label();
        self.labels.values().filter(|l| *l == m).count() as f64 / self.labels.len() as f64
    }
}
