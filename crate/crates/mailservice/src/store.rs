//! Message record persistence.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use thiserror::Error;

use crate::{MessageRecord, MessageStatus, Recipient};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("message id already stored")]
    Duplicate,
    #[error("no such message")]
    Missing,
    #[error("storage i/o: {0}")]
    Io(#[from] io::Error),
    #[error("corrupt record {0}")]
    Corrupt(PathBuf),
}

pub trait MessageStore: Send + Sync {
    fn insert(&self, record: MessageRecord) -> Result<(), StoreError>;

    fn get(&self, message_id: &str) -> Option<MessageRecord>;

    /// Atomically takes every recipient that is neither notified nor claimed
    /// by a concurrent caller.
    fn claim_pending(&self, message_id: &str) -> Result<Vec<Recipient>, StoreError>;

    /// Settles a claim: `delivered` addresses become notified, the rest of the
    /// claim goes back to pending.
    fn settle(&self, message_id: &str, claimed: &[Recipient], delivered: &[String]) -> Result<MessageRecord, StoreError>;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Default)]
struct Table {
    records: HashMap<String, MessageRecord>,
    in_flight: HashMap<String, BTreeSet<String>>,
}

impl Table {
    fn insert(&mut self, record: MessageRecord, persist: impl FnOnce(&MessageRecord) -> io::Result<()>) -> Result<(), StoreError> {
        match self.records.entry(record.message_id.clone()) {
            Entry::Occupied(_) => Err(StoreError::Duplicate),
            Entry::Vacant(slot) => {
                persist(&record)?;
                slot.insert(record);
                Ok(())
            }
        }
    }

    fn claim(&mut self, message_id: &str) -> Result<Vec<Recipient>, StoreError> {
        let record = self.records.get(message_id).ok_or(StoreError::Missing)?;
        let in_flight = self.in_flight.entry(message_id.to_owned()).or_default();
        let claimed: Vec<Recipient> = record
            .pending_recipients()
            .filter(|r| !in_flight.contains(&r.address))
            .cloned()
            .collect();
        in_flight.extend(claimed.iter().map(|r| r.address.clone()));
        Ok(claimed)
    }

    fn settle(
        &mut self,
        message_id: &str,
        claimed: &[Recipient],
        delivered: &[String],
        persist: impl FnOnce(&MessageRecord) -> io::Result<()>,
    ) -> Result<MessageRecord, StoreError> {
        let record = self.records.get_mut(message_id).ok_or(StoreError::Missing)?;
        if let Some(in_flight) = self.in_flight.get_mut(message_id) {
            for r in claimed {
                in_flight.remove(&r.address);
            }
        }
        record.notified.extend(delivered.iter().cloned());
        if record.pending_recipients().next().is_none() {
            record.status = MessageStatus::Notified;
        }
        persist(record)?;
        Ok(record.clone())
    }
}

#[derive(Default)]
pub struct MemoryMessageStore {
    table: Mutex<Table>,
}

impl MemoryMessageStore {
    pub fn new() -> Self {
        Self::default()
    }
}

impl MessageStore for MemoryMessageStore {
    fn insert(&self, record: MessageRecord) -> Result<(), StoreError> {
        self.table.lock().unwrap().insert(record, |_| Ok(()))
    }

    fn get(&self, message_id: &str) -> Option<MessageRecord> {
        self.table.lock().unwrap().records.get(message_id).cloned()
    }

    fn claim_pending(&self, message_id: &str) -> Result<Vec<Recipient>, StoreError> {
        self.table.lock().unwrap().claim(message_id)
    }

    fn settle(&self, message_id: &str, claimed: &[Recipient], delivered: &[String]) -> Result<MessageRecord, StoreError> {
        self.table.lock().unwrap().settle(message_id, claimed, delivered, |_| Ok(()))
    }

    fn len(&self) -> usize {
        self.table.lock().unwrap().records.len()
    }
}

/// One JSON document per message in a directory, replaced atomically on update.
pub struct DirMessageStore {
    dir: PathBuf,
    table: Mutex<Table>,
}

impl DirMessageStore {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, StoreError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        let mut table = Table::default();
        for entry in fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let record: MessageRecord =
                serde_json::from_slice(&fs::read(&path)?).map_err(|_| StoreError::Corrupt(path.clone()))?;
            table.records.insert(record.message_id.clone(), record);
        }
        Ok(Self { dir, table: Mutex::new(table) })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn write(&self, record: &MessageRecord) -> io::Result<()> {
        let path = self.dir.join(format!("{}.json", record.message_id));
        let tmp = self.dir.join(format!(".{}.tmp", record.message_id));
        fs::write(&tmp, serde_json::to_vec(record).map_err(io::Error::other)?)?;
        fs::rename(tmp, path)
    }
}

impl MessageStore for DirMessageStore {
    fn insert(&self, record: MessageRecord) -> Result<(), StoreError> {
        self.table.lock().unwrap().insert(record, |r| self.write(r))
    }

    fn get(&self, message_id: &str) -> Option<MessageRecord> {
        self.table.lock().unwrap().records.get(message_id).cloned()
    }

    fn claim_pending(&self, message_id: &str) -> Result<Vec<Recipient>, StoreError> {
        self.table.lock().unwrap().claim(message_id)
    }

    fn settle(&self, message_id: &str, claimed: &[Recipient], delivered: &[String]) -> Result<MessageRecord, StoreError> {
        self.table.lock().unwrap().settle(message_id, claimed, delivered, |r| self.write(r))
    }

    fn len(&self) -> usize {
        self.table.lock().unwrap().records.len()
    }
}
