//! Snapshot file layout (all integers little-endian):
//!
//! ```text
//! "T4F1" | version u32 | section count u32
//! section table: (kind u32, offset u64, length u64) per section
//! section bodies
//! ```
//!
//! Section kinds: 1 tweet records, 2 resolved locations, 3 manifest JSON.
//! Strings are a u32 byte length followed by UTF-8.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use super::snapshot::{CorpusSnapshot, Manifest};
use super::{GeoPoint, Tweet};
use crate::error::{Error, Result};
use crate::geonorm::{NormalizedLocation, Region};

const MAGIC: &[u8; 4] = b"T4F1";
const VERSION: u32 = 1;
const SECTION_TWEETS: u32 = 1;
const SECTION_LOCATIONS: u32 = 2;
const SECTION_MANIFEST: u32 = 3;
const HEADER_LEN: usize = 12;
const ENTRY_LEN: usize = 20;

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_str(out: &mut Vec<u8>, s: &str) {
    put_u32(out, s.len() as u32);
    out.extend_from_slice(s.as_bytes());
}

fn put_opt_str(out: &mut Vec<u8>, s: Option<&str>) {
    match s {
        Some(s) => {
            out.push(1);
            put_str(out, s);
        }
        None => out.push(0),
    }
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

fn corrupt(what: &str) -> Error {
    Error::SnapshotFormat(format!("truncated or corrupt {what}"))
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len()).ok_or_else(|| corrupt("record"))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn string(&mut self) -> Result<String> {
        let n = self.u32()? as usize;
        String::from_utf8(self.take(n)?.to_vec()).map_err(|_| corrupt("string"))
    }

    fn opt_string(&mut self) -> Result<Option<String>> {
        match self.u8()? {
            0 => Ok(None),
            1 => self.string().map(Some),
            _ => Err(corrupt("optional flag")),
        }
    }
}

fn encode_tweets(tweets: &[Tweet]) -> Vec<u8> {
    let mut out = Vec::new();
    put_u32(&mut out, tweets.len() as u32);
    for t in tweets {
        put_str(&mut out, &t.id);
        put_str(&mut out, &t.text);
        out.extend_from_slice(&t.created_at.to_le_bytes());
        put_opt_str(&mut out, t.user_location_raw.as_deref());
        put_opt_str(&mut out, t.user_timezone.as_deref());
        match t.geo {
            Some(g) => {
                out.push(1);
                out.extend_from_slice(&g.lat.to_le_bytes());
                out.extend_from_slice(&g.lon.to_le_bytes());
            }
            None => out.push(0),
        }
        put_u32(&mut out, t.matched_hashtags.len() as u32);
        for h in &t.matched_hashtags {
            put_str(&mut out, h);
        }
    }
    out
}

fn decode_tweets(buf: &[u8]) -> Result<Vec<Tweet>> {
    let mut c = Cursor { buf, pos: 0 };
    let n = c.u32()? as usize;
    let mut tweets = Vec::with_capacity(n.min(buf.len() / 16));
    for _ in 0..n {
        let id = c.string()?;
        let text = c.string()?;
        let created_at = c.i64()?;
        let user_location_raw = c.opt_string()?;
        let user_timezone = c.opt_string()?;
        let geo = match c.u8()? {
            0 => None,
            1 => Some(GeoPoint {
                lat: c.f64()?,
                lon: c.f64()?,
            }),
            _ => return Err(corrupt("geo flag")),
        };
        let tags = c.u32()? as usize;
        let mut matched_hashtags = BTreeSet::new();
        for _ in 0..tags {
            matched_hashtags.insert(c.string()?);
        }
        tweets.push(Tweet {
            id,
            text,
            created_at,
            user_location_raw,
            user_timezone,
            geo,
            matched_hashtags,
        });
    }
    Ok(tweets)
}

fn region_code(r: Region) -> u8 {
    Region::ALL.iter().position(|x| *x == r).unwrap() as u8
}

fn encode_locations(snap: &CorpusSnapshot) -> Vec<u8> {
    let mut out = Vec::new();
    let entries: Vec<(usize, &NormalizedLocation)> = snap
        .tweets()
        .iter()
        .enumerate()
        .filter_map(|(i, t)| snap.location(&t.id).map(|l| (i, l)))
        .collect();
    put_u32(&mut out, entries.len() as u32);
    for (i, loc) in entries {
        put_u32(&mut out, i as u32);
        put_str(&mut out, &loc.state);
        put_opt_str(&mut out, loc.city.as_deref());
        out.push(region_code(loc.region));
    }
    out
}

fn decode_locations(buf: &[u8], tweets: &[Tweet]) -> Result<BTreeMap<String, NormalizedLocation>> {
    let mut c = Cursor { buf, pos: 0 };
    let n = c.u32()? as usize;
    let mut map = BTreeMap::new();
    for _ in 0..n {
        let idx = c.u32()? as usize;
        let state = c.string()?;
        let city = c.opt_string()?;
        let region = *Region::ALL.get(c.u8()? as usize).ok_or_else(|| corrupt("region"))?;
        let tweet = tweets.get(idx).ok_or_else(|| corrupt("location index"))?;
        map.insert(tweet.id.clone(), NormalizedLocation { state, city, region });
    }
    Ok(map)
}

impl CorpusSnapshot {
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let sections = [
            (SECTION_TWEETS, encode_tweets(self.tweets())),
            (SECTION_LOCATIONS, encode_locations(self)),
            (SECTION_MANIFEST, serde_json::to_vec(self.manifest())?),
        ];
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        put_u32(&mut out, VERSION);
        put_u32(&mut out, sections.len() as u32);
        let mut offset = (HEADER_LEN + ENTRY_LEN * sections.len()) as u64;
        for (kind, body) in &sections {
            put_u32(&mut out, *kind);
            out.extend_from_slice(&offset.to_le_bytes());
            out.extend_from_slice(&(body.len() as u64).to_le_bytes());
            offset += body.len() as u64;
        }
        for (_, body) in &sections {
            out.extend_from_slice(body);
        }
        Ok(out)
    }

    pub fn from_bytes(buf: &[u8]) -> Result<Self> {
        if buf.len() < HEADER_LEN || &buf[..4] != MAGIC {
            return Err(Error::SnapshotFormat("bad magic".into()));
        }
        let mut c = Cursor { buf, pos: 4 };
        let version = c.u32()?;
        if version != VERSION {
            return Err(Error::SnapshotFormat(format!("unsupported version {version}")));
        }
        let count = c.u32()? as usize;
        let mut sections: BTreeMap<u32, &[u8]> = BTreeMap::new();
        for _ in 0..count {
            let kind = c.u32()?;
            let offset = usize::try_from(c.u64()?).map_err(|_| corrupt("section table"))?;
            let len = usize::try_from(c.u64()?).map_err(|_| corrupt("section table"))?;
            let end = offset.checked_add(len).filter(|&e| e <= buf.len()).ok_or_else(|| corrupt("section table"))?;
            sections.insert(kind, &buf[offset..end]);
        }
        let section = |kind: u32, name: &str| {
            sections
                .get(&kind)
                .copied()
                .ok_or_else(|| Error::SnapshotFormat(format!("missing {name} section")))
        };
        let tweets = decode_tweets(section(SECTION_TWEETS, "tweets")?)?;
        let normalized = decode_locations(section(SECTION_LOCATIONS, "locations")?, &tweets)?;
        let manifest: Manifest = serde_json::from_slice(section(SECTION_MANIFEST, "manifest")?)
            .map_err(|e| Error::SnapshotFormat(format!("manifest: {e}")))?;
        Ok(CorpusSnapshot::from_parts(tweets, normalized, manifest))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let buf = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&buf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::HashtagFilter;
    use crate::data::DataSet;

    fn sample() -> CorpusSnapshot {
        let mk = |id: &str, loc: Option<&str>, geo: Option<GeoPoint>| Tweet {
            id: id.into(),
            text: format!("tweet {id} #dinner"),
            created_at: 1_400_000_000,
            user_location_raw: loc.map(str::to_string),
            user_timezone: Some("Pacific Time (US & Canada)".into()),
            geo,
            matched_hashtags: BTreeSet::from(["#dinner".to_string()]),
        };
        let snap = CorpusSnapshot::from_tweets(
            vec![
                mk("1", Some("LA"), Some(GeoPoint { lat: 34.05, lon: -118.25 })),
                mk("2", None, None),
                mk("3", Some("Portland"), None),
            ],
            HashtagFilter::default(),
        );
        snap.normalize(&DataSet::embedded().gazetteer().unwrap())
    }

    #[test]
    fn roundtrip() {
        let snap = sample();
        let bytes = snap.to_bytes().unwrap();
        assert_eq!(&bytes[..4], b"T4F1");
        let back = CorpusSnapshot::from_bytes(&bytes).unwrap();
        assert_eq!(back, snap);
        assert_eq!(back.location("1").unwrap().city.as_deref(), Some("Los Angeles"));
    }

    #[test]
    fn file_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.t4f");
        let snap = sample();
        snap.save(&p).unwrap();
        assert_eq!(CorpusSnapshot::load(&p).unwrap(), snap);
    }

    #[test]
    fn rejects_garbage() {
        assert!(CorpusSnapshot::from_bytes(b"nope").is_err());
        let mut bytes = sample().to_bytes().unwrap();
        bytes[4] = 9;
        assert!(matches!(CorpusSnapshot::from_bytes(&bytes), Err(Error::SnapshotFormat(_))));
        let bytes = sample().to_bytes().unwrap();
        for cut in [13, 40, bytes.len() - 1] {
            assert!(CorpusSnapshot::from_bytes(&bytes[..cut]).is_err());
        }
    }
}
