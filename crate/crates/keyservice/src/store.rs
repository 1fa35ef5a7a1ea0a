//! Key record persistence.
//!
//! [`MemoryStore`] keeps everything in a map. [`FileStore`] does the same but
//! also appends every change as one JSON line to a journal file, which is
//! replayed on open.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use chrono::{DateTime, Utc};
use mailseal_core::MessageKey;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{Fetch, KeyRecord};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("message id already registered")]
    Duplicate,
    #[error("no such message")]
    Missing,
    #[error("journal i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt journal line {line}: {reason}")]
    Corrupt { line: usize, reason: String },
}

pub trait KeyStore: Send + Sync {
    /// Inserts a new record. Concurrent inserts of one id have exactly one winner.
    fn insert(&self, record: KeyRecord) -> Result<(), StoreError>;

    fn get(&self, message_id: &str) -> Option<KeyRecord>;

    /// Appends to the record's fetch log; timestamps never go backwards.
    fn append_fetch(&self, message_id: &str, recipient_id: &str, at: DateTime<Utc>) -> Result<Fetch, StoreError>;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Default)]
pub struct MemoryStore {
    records: Mutex<HashMap<String, KeyRecord>>,
}

impl MemoryStore {
    pub fn new() -> Self {
        Self::default()
    }
}

fn push_fetch(record: &mut KeyRecord, recipient_id: &str, at: DateTime<Utc>) -> Fetch {
    let at = record.fetches.last().map_or(at, |last| at.max(last.at));
    let fetch = Fetch { recipient_id: recipient_id.to_owned(), at };
    record.fetches.push(fetch.clone());
    fetch
}

impl KeyStore for MemoryStore {
    fn insert(&self, record: KeyRecord) -> Result<(), StoreError> {
        match self.records.lock().unwrap().entry(record.message_id.clone()) {
            Entry::Occupied(_) => Err(StoreError::Duplicate),
            Entry::Vacant(slot) => {
                slot.insert(record);
                Ok(())
            }
        }
    }

    fn get(&self, message_id: &str) -> Option<KeyRecord> {
        self.records.lock().unwrap().get(message_id).cloned()
    }

    fn append_fetch(&self, message_id: &str, recipient_id: &str, at: DateTime<Utc>) -> Result<Fetch, StoreError> {
        let mut records = self.records.lock().unwrap();
        let record = records.get_mut(message_id).ok_or(StoreError::Missing)?;
        Ok(push_fetch(record, recipient_id, at))
    }

    fn len(&self) -> usize {
        self.records.lock().unwrap().len()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
enum JournalEntry {
    Register {
        message_id: String,
        key_id: String,
        key_b64: String,
        sender_id: String,
        sender_token_sha256: String,
        recipients: BTreeMap<String, String>,
        created_at: DateTime<Utc>,
    },
    Fetch {
        message_id: String,
        recipient_id: String,
        at: DateTime<Utc>,
    },
}

fn hex32(bytes: &[u8; 32]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn unhex32(text: &str) -> Option<[u8; 32]> {
    if text.len() != 64 || !text.is_ascii() {
        return None;
    }
    let mut out = [0u8; 32];
    for (i, byte) in out.iter_mut().enumerate() {
        *byte = u8::from_str_radix(&text[2 * i..2 * i + 2], 16).ok()?;
    }
    Some(out)
}

impl JournalEntry {
    fn register(record: &KeyRecord) -> Self {
        JournalEntry::Register {
            message_id: record.message_id.clone(),
            key_id: record.key.key_id().to_owned(),
            key_b64: mailseal_core::b64_encode(record.key.material()),
            sender_id: record.sender_id.clone(),
            sender_token_sha256: hex32(&record.sender_token_digest),
            recipients: record.recipients.iter().map(|(id, d)| (id.clone(), hex32(d))).collect(),
            created_at: record.created_at,
        }
    }
}

/// Append-only journal on disk plus an in-memory index.
pub struct FileStore {
    path: PathBuf,
    inner: Mutex<(HashMap<String, KeyRecord>, File)>,
}

impl FileStore {
    pub fn open(path: impl AsRef<Path>) -> Result<Self, StoreError> {
        let path = path.as_ref().to_path_buf();
        let mut records = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for (n, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let corrupt = |reason: String| StoreError::Corrupt { line: n + 1, reason };
                let entry: JournalEntry = serde_json::from_str(&line).map_err(|e| corrupt(e.to_string()))?;
                replay(&mut records, entry).map_err(corrupt)?;
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(Self { path, inner: Mutex::new((records, file)) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

fn replay(records: &mut HashMap<String, KeyRecord>, entry: JournalEntry) -> Result<(), String> {
    match entry {
        JournalEntry::Register {
            message_id,
            key_id,
            key_b64,
            sender_id,
            sender_token_sha256,
            recipients,
            created_at,
        } => {
            let material = mailseal_core::b64_decode(&key_b64).map_err(|e| e.to_string())?;
            let key = MessageKey::from_parts(key_id, &material).map_err(|e| e.to_string())?;
            let sender_token_digest = unhex32(&sender_token_sha256).ok_or("bad sender digest")?;
            let recipients = recipients
                .into_iter()
                .map(|(id, d)| unhex32(&d).map(|d| (id, d)).ok_or("bad recipient digest"))
                .collect::<Result<_, _>>()?;
            let record = KeyRecord {
                message_id: message_id.clone(),
                key,
                sender_id,
                sender_token_digest,
                recipients,
                created_at,
                fetches: Vec::new(),
            };
            if records.insert(message_id, record).is_some() {
                return Err("duplicate registration".into());
            }
        }
        JournalEntry::Fetch { message_id, recipient_id, at } => {
            let record = records.get_mut(&message_id).ok_or("fetch for unknown message")?;
            record.fetches.push(Fetch { recipient_id, at });
        }
    }
    Ok(())
}

fn append_line(file: &mut File, entry: &JournalEntry) -> Result<(), StoreError> {
    let mut line = serde_json::to_vec(entry).expect("journal entries serialize");
    line.push(b'\n');
    file.write_all(&line)?;
    file.flush()?;
    Ok(())
}

impl KeyStore for FileStore {
    fn insert(&self, record: KeyRecord) -> Result<(), StoreError> {
        let mut guard = self.inner.lock().unwrap();
        let (records, file) = &mut *guard;
        if records.contains_key(&record.message_id) {
            return Err(StoreError::Duplicate);
        }
        append_line(file, &JournalEntry::register(&record))?;
        records.insert(record.message_id.clone(), record);
        Ok(())
    }

    fn get(&self, message_id: &str) -> Option<KeyRecord> {
        self.inner.lock().unwrap().0.get(message_id).cloned()
    }

    fn append_fetch(&self, message_id: &str, recipient_id: &str, at: DateTime<Utc>) -> Result<Fetch, StoreError> {
        let mut guard = self.inner.lock().unwrap();
        let (records, file) = &mut *guard;
        let record = records.get_mut(message_id).ok_or(StoreError::Missing)?;
        let fetch = push_fetch(record, recipient_id, at);
        append_line(
            file,
            &JournalEntry::Fetch {
                message_id: message_id.to_owned(),
                recipient_id: fetch.recipient_id.clone(),
                at: fetch.at,
            },
        )?;
        Ok(fetch)
    }

    fn len(&self) -> usize {
        self.inner.lock().unwrap().0.len()
    }
}
