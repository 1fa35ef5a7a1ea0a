use base64::Engine;
use chrono::{DateTime, Utc};

use crate::HtmlAttachment;

/// A plain notification mail with the HTML attachment. The body only says
/// that a secure message is waiting and where to read it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotificationEmail {
    pub from: String,
    pub to: String,
    pub subject: String,
    pub body_text: String,
    pub attachment: HtmlAttachment,
    pub date: DateTime<Utc>,
}

impl NotificationEmail {
    pub fn new(
        from: &str,
        to: &str,
        sender_id: &str,
        reading_url: &str,
        credential: Option<&str>,
        attachment: HtmlAttachment,
    ) -> Self {
        let link = match credential {
            Some(token) => format!("{reading_url}#access={token}"),
            None => reading_url.to_owned(),
        };
        let body_text = format!(
            "{sender_id} sent you a secure message. It is waiting for you on the platform.\r\n\
             \r\n\
             1. Open this reading link once to unlock the message in your browser:\r\n\
             \x20  {link}\r\n\
             2. Open the attached file {file} and press \"Open secure message\".\r\n",
            file = attachment.filename(),
        );
        Self {
            from: from.to_owned(),
            to: to.to_owned(),
            subject: format!("Secure message from {sender_id}"),
            body_text,
            attachment,
            date: Utc::now(),
        }
    }

    /// RFC 822 / MIME rendering: multipart/mixed with a text part and the
    /// base64-encoded HTML attachment.
    pub fn to_rfc822(&self) -> String {
        let boundary = format!("=_mailseal_{}", self.attachment.message_id);
        let encoded = base64::engine::general_purpose::STANDARD.encode(self.attachment.html.as_bytes());
        let mut wrapped = String::with_capacity(encoded.len() + encoded.len() / 76 * 2 + 2);
        for line in encoded.as_bytes().chunks(76) {
            wrapped.push_str(std::str::from_utf8(line).unwrap());
            wrapped.push_str("\r\n");
        }
        format!(
            "From: {from}\r\n\
             To: {to}\r\n\
             Subject: {subject}\r\n\
             Date: {date}\r\n\
             Message-ID: <{id}.{to_id}@mailseal.invalid>\r\n\
             MIME-Version: 1.0\r\n\
             Content-Type: multipart/mixed; boundary=\"{boundary}\"\r\n\
             \r\n\
             --{boundary}\r\n\
             Content-Type: text/plain; charset=utf-8\r\n\
             Content-Transfer-Encoding: 8bit\r\n\
             \r\n\
             {body}\r\n\
             --{boundary}\r\n\
             Content-Type: text/html; charset=utf-8; name=\"{file}\"\r\n\
             Content-Disposition: attachment; filename=\"{file}\"\r\n\
             Content-Transfer-Encoding: base64\r\n\
             \r\n\
             {wrapped}\
             --{boundary}--\r\n",
            from = self.from,
            to = self.to,
            subject = self.subject,
            date = self.date.to_rfc2822(),
            id = self.attachment.message_id,
            to_id = self.to.replace(|c: char| !c.is_ascii_alphanumeric(), "_"),
            body = self.body_text,
            file = self.attachment.filename(),
        )
    }
}
