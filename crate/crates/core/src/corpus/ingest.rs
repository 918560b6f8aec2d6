use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use sha2::{Digest, Sha256};

use super::filter::{filter_by_hashtags, FieldMapping, HashtagFilter};
use super::snapshot::{CorpusSnapshot, Manifest, SourceDigest};
use crate::error::{Error, Result};

/// Reads a JSONL file and seals the matching posts into a snapshot.
///
/// An unreadable file is an error; bad lines only raise the reject count.
pub fn ingest_jsonl(path: &Path, filter: &HashtagFilter, mapping: &FieldMapping) -> Result<CorpusSnapshot> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    ingest_reader(BufReader::new(file), &name, filter, mapping).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

/// [`ingest_jsonl`] over any buffered reader; `name` labels the source in
/// the manifest.
pub fn ingest_reader<R: BufRead>(
    mut reader: R,
    name: &str,
    filter: &HashtagFilter,
    mapping: &FieldMapping,
) -> Result<CorpusSnapshot> {
    let mut hasher = Sha256::new();
    let mut bytes = 0u64;
    let mut line_count = 0usize;
    let mut bad_lines = 0usize;
    let mut records = Vec::new();
    let mut buf = Vec::new();
    loop {
        buf.clear();
        let n = reader.read_until(b'\n', &mut buf).map_err(|e| Error::io(name, e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf);
        bytes += n as u64;
        let Ok(line) = std::str::from_utf8(&buf) else {
            line_count += 1;
            bad_lines += 1;
            continue;
        };
        if line.trim().is_empty() {
            continue;
        }
        line_count += 1;
        match serde_json::from_str::<serde_json::Value>(line) {
            Ok(v) => records.push(v),
            Err(_) => bad_lines += 1,
        }
    }

    let filtered = filter_by_hashtags(records, filter, mapping);
    let manifest = Manifest {
        sources: vec![SourceDigest {
            name: name.to_string(),
            sha256: hex::encode(hasher.finalize()),
            bytes,
        }],
        filter: filter.clone(),
        line_count,
        accept_count: 0,
        reject_count: bad_lines + filtered.rejects,
        duplicate_count: 0,
        unmatched_count: filtered.unmatched,
        normalized_count: None,
    };
    log::info!(
        "ingested {name}: {line_count} lines, {} matched, {} rejected",
        filtered.tweets.len(),
        manifest.reject_count
    );
    Ok(CorpusSnapshot::seal(filtered.tweets, manifest))
}
