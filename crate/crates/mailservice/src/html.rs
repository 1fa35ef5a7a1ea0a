//! The HTML attachment carried by notification emails.
//!
//! It is a standalone document with one form whose hidden fields hold every
//! envelope of the message, split into its components:
//!
//! | field          | content                                   |
//! |----------------|-------------------------------------------|
//! | `message_id`   | message id                                |
//! | `parts`        | number of envelopes                       |
//! | `version_i`    | base64url of the version byte             |
//! | `nonce_i`      | base64url of the 12-byte nonce            |
//! | `adata_i`      | base64url of the canonical associated data|
//! | `mac_i`        | base64url of the 16-byte tag              |
//! | `ciphertext_i` | base64url of the ciphertext               |
//!
//! Index 0 is the body, index `i + 1` is attachment `i`. Submitting the form
//! posts the fields to the reading endpoint.

use mailseal_core::{b64_decode, b64_encode, Envelope, KernelError};

use crate::MessageRecord;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HtmlAttachment {
    pub message_id: String,
    pub html: String,
}

impl HtmlAttachment {
    pub fn filename(&self) -> String {
        format!("secure-message-{}.html", self.message_id)
    }
}

/// Hidden-field name/value pairs for a list of envelopes.
pub fn envelope_fields(message_id: &str, envelopes: &[&Envelope]) -> Vec<(String, String)> {
    let mut fields = vec![
        ("message_id".to_owned(), message_id.to_owned()),
        ("parts".to_owned(), envelopes.len().to_string()),
    ];
    for (i, env) in envelopes.iter().enumerate() {
        fields.push((format!("version_{i}"), b64_encode(&[env.version])));
        fields.push((format!("nonce_{i}"), b64_encode(&env.nonce)));
        fields.push((format!("adata_{i}"), b64_encode(&env.ad)));
        fields.push((format!("mac_{i}"), b64_encode(&env.tag)));
        fields.push((format!("ciphertext_{i}"), b64_encode(&env.ciphertext)));
    }
    fields
}

/// Rebuilds `(message_id, envelopes)` from posted or parsed fields.
pub fn envelopes_from_fields(fields: &[(String, String)]) -> Result<(String, Vec<Envelope>), KernelError> {
    const BAD: KernelError = KernelError::MalformedEnvelope("missing or invalid form field");
    let lookup = |name: &str| fields.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str());
    let message_id = lookup("message_id").filter(|id| crate::is_valid_message_id(id)).ok_or(BAD)?;
    let parts: usize = lookup("parts").and_then(|p| p.parse().ok()).filter(|&p| p >= 1).ok_or(BAD)?;
    if parts > fields.len() {
        return Err(BAD);
    }
    let mut envelopes = Vec::with_capacity(parts);
    for i in 0..parts {
        let part = |name: &str| lookup(&format!("{name}_{i}")).ok_or(BAD).and_then(b64_decode);
        let version = match part("version")?.as_slice() {
            [v] => *v,
            _ => return Err(BAD),
        };
        envelopes.push(Envelope {
            version,
            nonce: part("nonce")?.try_into().map_err(|_| BAD)?,
            ad: part("adata")?,
            tag: part("mac")?.try_into().map_err(|_| BAD)?,
            ciphertext: part("ciphertext")?,
        });
    }
    Ok((message_id.to_owned(), envelopes))
}

pub fn render_attachment(record: &MessageRecord, reading_url: &str) -> HtmlAttachment {
    let envelopes: Vec<&Envelope> = record.enc.envelopes().collect();
    let mut inputs = String::new();
    for (name, value) in envelope_fields(&record.message_id, &envelopes) {
        inputs.push_str(&format!("    <input type=\"hidden\" name=\"{name}\" value=\"{value}\">\n"));
    }
    let html = format!(
        "<!DOCTYPE html>
<html lang=\"en\">
<head>
  <meta charset=\"utf-8\">
  <title>Secure message</title>
</head>
<body>
  <p>You received a secure message. Press the button to open it in your browser.</p>
  <form method=\"post\" action=\"{action}\" enctype=\"application/x-www-form-urlencoded\">
{inputs}    <button type=\"submit\">Open secure message</button>
  </form>
</body>
</html>
",
        action = escape_attr(reading_url),
    );
    HtmlAttachment { message_id: record.message_id.clone(), html }
}

pub(crate) fn escape_attr(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '"' => out.push_str("&quot;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

/// Extracts the form action and hidden inputs from an attachment document.
///
/// This understands the documents produced by [`render_attachment`] (double
/// quoted attributes, values without entities), not arbitrary HTML.
pub fn parse_attachment(html: &str) -> Result<(String, Vec<(String, String)>), KernelError> {
    const BAD: KernelError = KernelError::MalformedEnvelope("unrecognized attachment document");
    let form_start = html.find("<form").ok_or(BAD)?;
    let form_tag_end = form_start + html[form_start..].find('>').ok_or(BAD)?;
    let action = attribute(&html[form_start..form_tag_end], "action").ok_or(BAD)?;
    let action = action.replace("&quot;", "\"").replace("&lt;", "<").replace("&gt;", ">").replace("&#39;", "'").replace("&amp;", "&");

    let mut fields = Vec::new();
    let mut rest = &html[form_tag_end..];
    while let Some(start) = rest.find("<input") {
        let end = start + rest[start..].find('>').ok_or(BAD)?;
        let tag = &rest[start..end];
        if attribute(tag, "type").as_deref() == Some("hidden") {
            let name = attribute(tag, "name").ok_or(BAD)?;
            let value = attribute(tag, "value").unwrap_or_default();
            fields.push((name, value));
        }
        rest = &rest[end..];
    }
    Ok((action, fields))
}

fn attribute(tag: &str, name: &str) -> Option<String> {
    let needle = format!(" {name}=\"");
    let start = tag.find(&needle)? + needle.len();
    let len = tag[start..].find('"')?;
    Some(tag[start..start + len].to_owned())
}

#[cfg(test)]
mod tests {
    use chrono::Utc;
    use mailseal_core::{encrypt_message, generate_key, Attachment, SecureMessage};

    use super::*;
    use crate::{MessageStatus, Recipient};

    fn record(attachments: usize) -> MessageRecord {
        let msg = SecureMessage {
            subject: "s".into(),
            body: "b".into(),
            attachments: (0..attachments).map(|i| Attachment { filename: format!("{i}"), data: vec![i as u8; 40] }).collect(),
        };
        let enc = encrypt_message(&msg, &generate_key().unwrap(), "msg-1", "alice").unwrap();
        MessageRecord {
            message_id: "msg-1".into(),
            enc,
            sender_id: "alice".into(),
            recipients: vec![Recipient { address: "bob@example.org".into(), credential: None }],
            created_at: Utc::now(),
            status: MessageStatus::Stored,
            notified: Default::default(),
        }
    }

    #[test]
    fn indexed_fields_for_each_part() {
        let att = render_attachment(&record(2), "http://localhost/read");
        let (action, fields) = parse_attachment(&att.html).unwrap();
        assert_eq!(action, "http://localhost/read");
        let names: Vec<_> = fields.iter().map(|(n, _)| n.as_str()).collect();
        for i in 0..3 {
            for role in ["ciphertext", "mac", "adata"] {
                assert!(names.contains(&format!("{role}_{i}").as_str()), "{role}_{i} missing");
            }
        }
        assert!(!names.contains(&"ciphertext_3"));
        assert!(names.contains(&"message_id"));
    }

    #[test]
    fn fields_rebuild_the_stored_envelopes() {
        for n in [0, 1, 3] {
            let rec = record(n);
            let att = render_attachment(&rec, "/read");
            let (_, fields) = parse_attachment(&att.html).unwrap();
            let (id, envelopes) = envelopes_from_fields(&fields).unwrap();
            assert_eq!(id, "msg-1");
            let stored: Vec<Envelope> = rec.enc.envelopes().cloned().collect();
            assert_eq!(envelopes, stored);
        }
    }

    #[test]
    fn broken_fields_are_malformed() {
        let rec = record(1);
        let (_, fields) = parse_attachment(&render_attachment(&rec, "/read").html).unwrap();

        let mut bad_b64 = fields.clone();
        bad_b64.iter_mut().find(|(k, _)| k == "mac_1").unwrap().1 = "!!".into();
        assert!(envelopes_from_fields(&bad_b64).is_err());

        let mut short_mac = fields.clone();
        short_mac.iter_mut().find(|(k, _)| k == "mac_0").unwrap().1 = b64_encode(&[0; 15]);
        assert!(envelopes_from_fields(&short_mac).is_err());

        let missing: Vec<_> = fields.iter().filter(|(k, _)| k != "nonce_1").cloned().collect();
        assert!(envelopes_from_fields(&missing).is_err());

        let mut huge_parts = fields.clone();
        huge_parts.iter_mut().find(|(k, _)| k == "parts").unwrap().1 = "100000000".into();
        assert!(envelopes_from_fields(&huge_parts).is_err());
    }

    #[test]
    fn action_is_escaped() {
        let att = render_attachment(&record(0), "http://x/read?a=1&b=\"2\"");
        assert!(att.html.contains("action=\"http://x/read?a=1&amp;b=&quot;2&quot;\""));
        assert_eq!(parse_attachment(&att.html).unwrap().0, "http://x/read?a=1&b=\"2\"");
    }
}
