use std::collections::HashSet;
use std::sync::{Arc, Mutex};

use mailseal_core::{encrypt_message, generate_key, Attachment, EncryptedMessage, SecureMessage};
use mailseal_mailservice::html::parse_attachment;
use mailseal_mailservice::{
    DirMessageStore, MailTransport, MemoryMessageStore, MessageService, MessageServiceError, MessageStatus,
    MessageStore, NotificationEmail, OutboxTransport, Recipient, ServiceConfig, TransportError,
};

fn encrypted(id: &str, attachments: usize) -> EncryptedMessage {
    let msg = SecureMessage {
        subject: "subject".into(),
        body: "body text".into(),
        attachments: (0..attachments).map(|i| Attachment { filename: format!("f{i}"), data: vec![7; 64] }).collect(),
    };
    encrypt_message(&msg, &generate_key().unwrap(), id, "alice").unwrap()
}

fn recipients(n: usize) -> Vec<Recipient> {
    (0..n).map(|i| Recipient { address: format!("r{i}@example.org"), credential: Some(format!("token-{i}")) }).collect()
}

#[derive(Default)]
struct Recording {
    sent: Mutex<Vec<String>>,
    fail: HashSet<String>,
}

impl MailTransport for Recording {
    fn deliver(&self, email: &NotificationEmail) -> Result<(), TransportError> {
        if self.fail.contains(&email.to) {
            return Err(TransportError { recipient: email.to.clone(), reason: "mailbox unavailable".into() });
        }
        self.sent.lock().unwrap().push(email.to.clone());
        Ok(())
    }
}

fn service_with(transport: Arc<dyn MailTransport>) -> MessageService {
    MessageService::new(Arc::new(MemoryMessageStore::new()), transport, ServiceConfig::default())
}

#[test]
fn one_record_for_many_recipients() {
    let svc = service_with(Arc::new(Recording::default()));
    svc.submit_message(encrypted("m1", 1), recipients(3), "alice").unwrap();
    assert_eq!(svc.store().len(), 1);
    assert_eq!(svc.store().get("m1").unwrap().status, MessageStatus::Stored);
}

#[test]
fn storage_does_not_grow_with_recipients() {
    let enc = encrypted("m1", 2);
    let size = |n: usize| {
        let svc = service_with(Arc::new(Recording::default()));
        svc.submit_message(enc.clone(), recipients(n), "alice").unwrap();
        let record = svc.store().get("m1").unwrap();
        serde_json::to_vec(&record.enc).unwrap().len()
    };
    assert_eq!(size(1), size(10));
}

#[test]
fn malformed_bundles_store_nothing() {
    let svc = service_with(Arc::new(Recording::default()));
    let mut enc = encrypted("m1", 2);
    enc.attachment_envelopes.swap(0, 1);
    assert!(matches!(svc.submit_message(enc, recipients(1), "alice"), Err(MessageServiceError::Malformed(_))));

    let mut enc = encrypted("m1", 1);
    enc.attachment_envelopes[0].ad.truncate(3);
    assert!(matches!(svc.submit_message(enc, recipients(1), "alice"), Err(MessageServiceError::Malformed(_))));
    assert!(svc.store().is_empty());

    assert!(matches!(
        svc.submit_message(encrypted("m1", 0), vec![], "alice"),
        Err(MessageServiceError::EmptyRecipients)
    ));
    assert!(matches!(
        svc.submit_message(encrypted("../etc", 0), recipients(1), "alice"),
        Err(MessageServiceError::InvalidMessageId)
    ));
}

#[test]
fn duplicate_submission_is_rejected() {
    let svc = service_with(Arc::new(Recording::default()));
    svc.submit_message(encrypted("m1", 0), recipients(1), "alice").unwrap();
    assert!(matches!(
        svc.submit_message(encrypted("m1", 0), recipients(1), "alice"),
        Err(MessageServiceError::DuplicateMessageId)
    ));
}

#[test]
fn notify_writes_one_file_per_recipient_once() {
    let outbox = tempfile::tempdir().unwrap();
    let svc = service_with(Arc::new(OutboxTransport::new(outbox.path()).unwrap()));
    svc.submit_message(encrypted("m1", 1), recipients(3), "alice").unwrap();

    let outcome = svc.notify_recipients("m1").unwrap();
    assert_eq!(outcome.dispatched, 3);
    assert!(outcome.failures.is_empty());
    let files: Vec<_> = std::fs::read_dir(outbox.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 3);
    assert!(files.iter().all(|p| p.extension().unwrap() == "eml"));
    assert_eq!(svc.store().get("m1").unwrap().status, MessageStatus::Notified);

    assert_eq!(svc.notify_recipients("m1").unwrap().dispatched, 0);
    assert_eq!(std::fs::read_dir(outbox.path()).unwrap().count(), 3);
    assert!(matches!(svc.notify_recipients("nope"), Err(MessageServiceError::NotFound)));
}

#[test]
fn partial_transport_failure_is_reported_and_retried() {
    let transport = Arc::new(Recording { fail: ["r1@example.org".to_string()].into(), ..Default::default() });
    let svc = service_with(transport.clone());
    svc.submit_message(encrypted("m1", 0), recipients(3), "alice").unwrap();

    let outcome = svc.notify_recipients("m1").unwrap();
    assert_eq!(outcome.dispatched, 2);
    assert_eq!(outcome.failures.len(), 1);
    assert_eq!(outcome.failures[0].recipient, "r1@example.org");
    assert_eq!(svc.store().get("m1").unwrap().status, MessageStatus::Stored);

    // The failed recipient stays pending; the others are not sent again.
    let again = svc.notify_recipients("m1").unwrap();
    assert_eq!(again.dispatched, 0);
    assert_eq!(again.failures.len(), 1);
    assert_eq!(transport.sent.lock().unwrap().len(), 2);
}

#[test]
fn concurrent_notify_sends_each_mail_at_most_once() {
    let transport = Arc::new(Recording::default());
    let svc = service_with(transport.clone());
    svc.submit_message(encrypted("m1", 0), recipients(5), "alice").unwrap();
    let total: usize = std::thread::scope(|s| {
        let handles: Vec<_> = (0..8).map(|_| s.spawn(|| svc.notify_recipients("m1").unwrap().dispatched)).collect();
        handles.into_iter().map(|h| h.join().unwrap()).sum()
    });
    assert_eq!(total, 5);
    let mut sent = transport.sent.lock().unwrap().clone();
    sent.sort();
    sent.dedup();
    assert_eq!(sent.len(), 5);
}

#[test]
fn reading_page_embeds_posted_fields() {
    let svc = service_with(Arc::new(Recording::default()));
    svc.submit_message(encrypted("m1", 2), recipients(1), "alice").unwrap();
    let (_, fields) = parse_attachment(&svc.render_attachment("m1").unwrap().html).unwrap();
    let page = svc.reading_page(&fields).unwrap();
    assert!(page.contains("reader.js"));
    for (name, value) in &fields {
        if name.starts_with("ciphertext_") || name.starts_with("mac_") {
            assert!(page.contains(value.as_str()), "{name} not embedded");
        }
    }

    let mut corrupted = fields.clone();
    corrupted.iter_mut().find(|(k, _)| k == "ciphertext_1").unwrap().1 = "not*base64".into();
    assert!(matches!(svc.reading_page(&corrupted), Err(MessageServiceError::Malformed(_))));
}

#[test]
fn dir_store_survives_restart() {
    let dir = tempfile::tempdir().unwrap();
    {
        let store = DirMessageStore::open(dir.path()).unwrap();
        let svc = MessageService::new(Arc::new(store), Arc::new(Recording::default()), ServiceConfig::default());
        svc.submit_message(encrypted("m1", 1), recipients(2), "alice").unwrap();
        svc.notify_recipients("m1").unwrap();
    }
    let store = DirMessageStore::open(dir.path()).unwrap();
    let record = store.get("m1").unwrap();
    assert_eq!(record.status, MessageStatus::Notified);
    assert_eq!(record.notified.len(), 2);
}

#[test]
fn service_crate_links_codec_only() {
    let manifest: toml::Table = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/Cargo.toml"))
        .unwrap()
        .parse()
        .unwrap();
    let dep = &manifest["dependencies"]["mailseal-core"];
    assert_eq!(dep.get("workspace").and_then(|v| v.as_bool()), Some(true));
    assert!(dep.get("features").is_none(), "the service must not enable key-bearing kernel features");

    let workspace: toml::Table = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../Cargo.toml"))
        .unwrap()
        .parse()
        .unwrap();
    let core = &workspace["workspace"]["dependencies"]["mailseal-core"];
    assert_eq!(core.get("default-features").and_then(|v| v.as_bool()), Some(false));
}
