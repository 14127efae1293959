//! Single-file index format.
//!
//! ```text
//! magic    b"RTVX"
//! version  u32 LE
//! count    u32 LE                number of sections
//! section  [u8; 4] tag, u64 LE length, JSON payload   (repeated)
//! checksum SHA-256 of every preceding byte
//! ```
//!
//! Sections are `META`, `PROF`, `SYNS` and `VALS`. The token, phrase and
//! trigram maps are rebuilt from them on load.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{build_inverse_index, Posting, SynonymEntry, ValueEntry, VocabError, VocabIndex};
use crate::table::AttributeProfile;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"RTVX";
const CHECKSUM_LEN: usize = 32;

#[derive(Serialize, Deserialize)]
struct Meta {
    table_name: String,
    row_count: usize,
}

fn section(out: &mut Vec<u8>, tag: &[u8; 4], payload: &impl Serialize) {
    let bytes = serde_json::to_vec(payload).expect("index sections serialize");
    out.extend_from_slice(tag);
    out.extend_from_slice(&(bytes.len() as u64).to_le_bytes());
    out.extend_from_slice(&bytes);
}

pub fn persist_index(index: &VocabIndex, sink: &mut impl Write) -> Result<(), VocabError> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&4u32.to_le_bytes());
    section(
        &mut out,
        b"META",
        &Meta {
            table_name: index.table_name.clone(),
            row_count: index.row_count,
        },
    );
    section(&mut out, b"PROF", &index.profiles);
    section(&mut out, b"SYNS", &index.synonyms);
    section(&mut out, b"VALS", &index.values);
    let digest = Sha256::digest(&out);
    out.extend_from_slice(&digest);
    sink.write_all(&out)?;
    Ok(())
}

fn corrupt(msg: impl Into<String>) -> VocabError {
    VocabError::CorruptIndex(msg.into())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], VocabError> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| corrupt("section runs past end of file"))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, VocabError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, VocabError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn load_index(source: &mut impl Read) -> Result<VocabIndex, VocabError> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    if bytes.len() < 12 || &bytes[..4] != MAGIC {
        return Err(corrupt("missing index header"));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(VocabError::UnsupportedVersion(version));
    }
    if bytes.len() < 12 + CHECKSUM_LEN {
        return Err(corrupt("file truncated"));
    }
    let (body, checksum) = bytes.split_at(bytes.len() - CHECKSUM_LEN);
    if Sha256::digest(body).as_slice() != checksum {
        return Err(corrupt("checksum mismatch"));
    }

    let mut cur = Cursor { bytes: body, pos: 8 };
    let count = cur.u32()?;
    let mut meta: Option<Meta> = None;
    let mut profiles: Option<Vec<AttributeProfile>> = None;
    let mut synonyms: Option<Vec<SynonymEntry>> = None;
    let mut values: Option<Vec<ValueEntry>> = None;
    for _ in 0..count {
        let tag: [u8; 4] = cur.take(4)?.try_into().unwrap();
        let len = usize::try_from(cur.u64()?).map_err(|_| corrupt("section too large"))?;
        let payload = cur.take(len)?;
        let parse_err = |e: serde_json::Error| corrupt(format!("bad section payload: {e}"));
        match &tag {
            b"META" => meta = Some(serde_json::from_slice(payload).map_err(parse_err)?),
            b"PROF" => profiles = Some(serde_json::from_slice(payload).map_err(parse_err)?),
            b"SYNS" => synonyms = Some(serde_json::from_slice(payload).map_err(parse_err)?),
            b"VALS" => values = Some(serde_json::from_slice(payload).map_err(parse_err)?),
            // unknown sections from newer writers of the same version are skipped
            _ => {}
        }
    }
    if cur.pos != body.len() {
        return Err(corrupt("trailing bytes after last section"));
    }
    let meta = meta.ok_or_else(|| corrupt("missing META section"))?;
    let profiles = profiles.ok_or_else(|| corrupt("missing PROF section"))?;
    let synonyms = synonyms.ok_or_else(|| corrupt("missing SYNS section"))?;
    let values = values.ok_or_else(|| corrupt("missing VALS section"))?;

    let n_attrs = profiles.len();
    if profiles.iter().enumerate().any(|(i, p)| p.attribute_id != i)
        || synonyms.iter().any(|s| s.attribute_id >= n_attrs)
        || values.iter().any(|v| v.attribute_id >= n_attrs || v.frequency == 0)
    {
        return Err(corrupt("attribute ids out of range"));
    }
    Ok(build_inverse_index(
        &meta.table_name,
        meta.row_count,
        profiles,
        synonyms,
        values,
    ))
}

#[derive(Serialize)]
struct TextExport<'a> {
    version: u32,
    table_name: &'a str,
    row_count: usize,
    profiles: &'a [AttributeProfile],
    synonyms: &'a [SynonymEntry],
    values: &'a [ValueEntry],
    tokens: &'a std::collections::BTreeMap<String, Vec<Posting>>,
    phrases: &'a std::collections::BTreeMap<String, Vec<Posting>>,
}

/// Pretty-printed JSON view of the whole index, for debugging.
pub fn export_text(index: &VocabIndex) -> String {
    serde_json::to_string_pretty(&TextExport {
        version: FORMAT_VERSION,
        table_name: &index.table_name,
        row_count: index.row_count,
        profiles: &index.profiles,
        synonyms: &index.synonyms,
        values: &index.values,
        tokens: &index.token_map,
        phrases: &index.phrase_map,
    })
    .expect("index export serializes")
}
