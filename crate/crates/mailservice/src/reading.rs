use serde::Serialize;

use crate::html::escape_attr;

/// Envelope material posted by the attachment form, echoed into the reading
/// page exactly as received once it has been checked to decode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReadingPayload {
    pub message_id: String,
    pub parts: Vec<PostedPart>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PostedPart {
    pub version: String,
    pub nonce: String,
    pub adata: String,
    pub mac: String,
    pub ciphertext: String,
}

impl ReadingPayload {
    /// Collects the posted strings. Call only after the fields decoded.
    pub(crate) fn from_fields(message_id: &str, parts: usize, fields: &[(String, String)]) -> Self {
        let get = |name: String| {
            fields.iter().find(|(k, _)| *k == name).map(|(_, v)| v.clone()).unwrap_or_default()
        };
        ReadingPayload {
            message_id: message_id.to_owned(),
            parts: (0..parts)
                .map(|i| PostedPart {
                    version: get(format!("version_{i}")),
                    nonce: get(format!("nonce_{i}")),
                    adata: get(format!("adata_{i}")),
                    mac: get(format!("mac_{i}")),
                    ciphertext: get(format!("ciphertext_{i}")),
                })
                .collect(),
        }
    }
}

fn script_safe_json(payload: &ReadingPayload) -> String {
    serde_json::to_string(payload)
        .expect("payload serializes")
        .replace('<', "\\u003c")
        .replace('>', "\\u003e")
        .replace('&', "\\u0026")
}

/// The page that loads the client. It carries the envelopes and the key
/// service location; decryption happens in the browser.
pub fn render_reading_page(payload: &ReadingPayload, static_prefix: &str, key_service_url: &str) -> String {
    format!(
        "<!DOCTYPE html>
<html lang=\"en\">
<head>
  <meta charset=\"utf-8\">
  <title>Secure message</title>
  <link rel=\"stylesheet\" href=\"{prefix}/style.css\">
  <script type=\"module\" src=\"{prefix}/reader.js\"></script>
</head>
<body data-key-service=\"{keys}\" data-kernel=\"{prefix}/pkg/mailseal_wasm.js\">
  <main id=\"reader\"><p>Decrypting in your browser&hellip;</p></main>
  <script type=\"application/json\" id=\"mailseal-payload\">{json}</script>
</body>
</html>
",
        prefix = escape_attr(static_prefix),
        keys = escape_attr(key_service_url),
        json = script_safe_json(payload),
    )
}

/// Generic failure page. Never includes any submitted bytes.
pub fn render_error_page() -> String {
    "<!DOCTYPE html>
<html lang=\"en\">
<head><meta charset=\"utf-8\"><title>Secure message</title></head>
<body>
  <main><p>The submitted secure message could not be read. It may have been damaged or altered.</p></main>
</body>
</html>
"
    .to_owned()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_cannot_close_the_script_element() {
        let payload = ReadingPayload { message_id: "</script><b>".into(), parts: vec![] };
        let page = render_reading_page(&payload, "/static", "http://keys");
        assert_eq!(page.matches("</script>").count(), 2);
        assert!(page.contains("\\u003c/script\\u003e"));
    }
}
