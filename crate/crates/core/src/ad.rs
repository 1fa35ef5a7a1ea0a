//! Associated data bound into every envelope's tag.
//!
//! The canonical serialization is a fixed sequence of length-prefixed fields
//! (4-byte big-endian length, then the bytes):
//!
//! ```text
//! message_id | part_label | part_index (u32 BE) | sender_id | content_type
//! ```
//!
//! Length prefixes make the encoding injective and the parser rejects any
//! trailing or missing bytes.

use crate::KernelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartLabel {
    Body,
    Attachment,
}

impl PartLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            PartLabel::Body => "body",
            PartLabel::Attachment => "attachment",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AssociatedData {
    pub message_id: String,
    pub part_label: PartLabel,
    pub part_index: u32,
    pub sender_id: String,
    pub content_type: String,
}

impl AssociatedData {
    pub const BODY_CONTENT_TYPE: &'static str = "text/plain; charset=utf-8";
    pub const ATTACHMENT_CONTENT_TYPE: &'static str = "application/octet-stream";

    pub fn body(message_id: &str, sender_id: &str) -> Self {
        Self {
            message_id: message_id.to_owned(),
            part_label: PartLabel::Body,
            part_index: 0,
            sender_id: sender_id.to_owned(),
            content_type: Self::BODY_CONTENT_TYPE.to_owned(),
        }
    }

    pub fn attachment(message_id: &str, sender_id: &str, index: u32) -> Self {
        Self {
            message_id: message_id.to_owned(),
            part_label: PartLabel::Attachment,
            part_index: index,
            sender_id: sender_id.to_owned(),
            content_type: Self::ATTACHMENT_CONTENT_TYPE.to_owned(),
        }
    }

    pub fn to_canonical_bytes(&self) -> Vec<u8> {
        let index = self.part_index.to_be_bytes();
        let fields: [&[u8]; 5] = [
            self.message_id.as_bytes(),
            self.part_label.as_str().as_bytes(),
            &index,
            self.sender_id.as_bytes(),
            self.content_type.as_bytes(),
        ];
        let mut out = Vec::with_capacity(fields.iter().map(|f| 4 + f.len()).sum());
        for field in fields {
            out.extend_from_slice(&(field.len() as u32).to_be_bytes());
            out.extend_from_slice(field);
        }
        out
    }

    pub fn from_canonical_bytes(bytes: &[u8]) -> Result<Self, KernelError> {
        let mut reader = FieldReader { rest: bytes };
        let message_id = reader.text()?;
        let part_label = match reader.field()? {
            b"body" => PartLabel::Body,
            b"attachment" => PartLabel::Attachment,
            _ => return Err(KernelError::MalformedEnvelope("unknown part label")),
        };
        let part_index: [u8; 4] = reader
            .field()?
            .try_into()
            .map_err(|_| KernelError::MalformedEnvelope("part index must be 4 bytes"))?;
        let part_index = u32::from_be_bytes(part_index);
        let sender_id = reader.text()?;
        let content_type = reader.text()?;
        if !reader.rest.is_empty() {
            return Err(KernelError::MalformedEnvelope("trailing bytes after associated data"));
        }
        if part_label == PartLabel::Body && part_index != 0 {
            return Err(KernelError::MalformedEnvelope("body part index must be 0"));
        }
        Ok(Self { message_id, part_label, part_index, sender_id, content_type })
    }
}

struct FieldReader<'a> {
    rest: &'a [u8],
}

impl<'a> FieldReader<'a> {
    fn field(&mut self) -> Result<&'a [u8], KernelError> {
        if self.rest.len() < 4 {
            return Err(KernelError::MalformedEnvelope("associated data truncated"));
        }
        let (len, rest) = self.rest.split_at(4);
        let len = u32::from_be_bytes(len.try_into().unwrap()) as usize;
        if rest.len() < len {
            return Err(KernelError::MalformedEnvelope("associated data truncated"));
        }
        let (field, rest) = rest.split_at(len);
        self.rest = rest;
        Ok(field)
    }

    fn text(&mut self) -> Result<String, KernelError> {
        let field = self.field()?;
        String::from_utf8(field.to_vec())
            .map_err(|_| KernelError::MalformedEnvelope("associated data field is not UTF-8"))
    }
}
