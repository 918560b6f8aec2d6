//! Shipped data tables: gazetteer CSVs, stopwords, food lexicon and state
//! label files. Compiled in by default; `T4F_DATA_DIR` (or
//! [`DataSet::from_dir`]) swaps in a directory with the same file names.

use std::borrow::Cow;
use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geonorm::Gazetteer;

pub const DATA_DIR_ENV: &str = "T4F_DATA_DIR";

const FILES: [&str; 9] = [
    "states.csv",
    "cities.csv",
    "regions.csv",
    "timezones.csv",
    "stopwords.txt",
    "food_lexicon.txt",
    "labels_overweight.csv",
    "labels_diabetes.csv",
    "labels_political.csv",
];

/// Raw contents of every data file.
#[derive(Debug, Clone)]
pub struct DataSet {
    files: [Cow<'static, str>; 9],
}

impl DataSet {
    pub fn embedded() -> Self {
        DataSet {
            files: [
                Cow::Borrowed(include_str!("../data/states.csv")),
                Cow::Borrowed(include_str!("../data/cities.csv")),
                Cow::Borrowed(include_str!("../data/regions.csv")),
                Cow::Borrowed(include_str!("../data/timezones.csv")),
                Cow::Borrowed(include_str!("../data/stopwords.txt")),
                Cow::Borrowed(include_str!("../data/food_lexicon.txt")),
                Cow::Borrowed(include_str!("../data/labels_overweight.csv")),
                Cow::Borrowed(include_str!("../data/labels_diabetes.csv")),
                Cow::Borrowed(include_str!("../data/labels_political.csv")),
            ],
        }
    }

    /// Loads files from `dir`; any file missing there falls back to the
    /// embedded copy.
    pub fn from_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        if !dir.is_dir() {
            return Err(Error::io(
                dir,
                std::io::Error::new(std::io::ErrorKind::NotFound, "data directory not found"),
            ));
        }
        let mut set = Self::embedded();
        for (slot, name) in set.files.iter_mut().zip(FILES) {
            let path = dir.join(name);
            if path.is_file() {
                let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                *slot = Cow::Owned(text);
            }
        }
        Ok(set)
    }

    /// `T4F_DATA_DIR` when set, otherwise the embedded tables.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Self::from_dir(dir),
            _ => Ok(Self::embedded()),
        }
    }

    fn file(&self, name: &str) -> &str {
        let idx = FILES.iter().position(|f| *f == name).expect("known data file");
        &self.files[idx]
    }

    pub fn gazetteer(&self) -> Result<Gazetteer> {
        Gazetteer::from_csv(
            self.file("states.csv"),
            self.file("cities.csv"),
            self.file("regions.csv"),
            self.file("timezones.csv"),
        )
    }

    pub fn stopwords(&self) -> HashSet<String> {
        word_list(self.file("stopwords.txt"))
    }

    pub fn food_lexicon(&self) -> HashSet<String> {
        word_list(self.file("food_lexicon.txt"))
    }

    /// Raw `labels_<name>.csv` contents.
    pub fn labels_csv(&self, name: &str) -> Result<&str> {
        let file = format!("labels_{name}.csv");
        if FILES.contains(&file.as_str()) {
            Ok(self.file(&file))
        } else {
            Err(Error::invalid(format!("unknown label dataset {name:?}")))
        }
    }
}

fn word_list(text: &str) -> HashSet<String> {
    text.lines()
        .map(|l| l.trim().to_lowercase())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicon_sizes() {
        let d = DataSet::embedded();
        let stop = d.stopwords();
        assert!((170..=190).contains(&stop.len()), "{}", stop.len());
        let food = d.food_lexicon();
        assert!((790..=830).contains(&food.len()), "{}", food.len());
        assert!(food.contains("grits") && food.contains("pizza"));
    }

    #[test]
    fn dir_override_falls_back_per_file() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("stopwords.txt"), "foo\nbar\n").unwrap();
        let d = DataSet::from_dir(dir.path()).unwrap();
        assert_eq!(d.stopwords().len(), 2);
        assert_eq!(d.food_lexicon(), DataSet::embedded().food_lexicon());
        assert!(DataSet::from_dir(dir.path().join("nope")).is_err());
    }

    #[test]
    fn unknown_label_dataset() {
        assert!(DataSet::embedded().labels_csv("height").is_err());
        assert!(DataSet::embedded().labels_csv("political").is_ok());
    }
}
