//! Unauthenticated AES-128-CBC, the malleable construction the EFail gadget
//! attacks exploit. Test code only; it must never be exported.

use aes::cipher::{BlockDecrypt, BlockEncrypt, KeyInit};
use aes::Aes128;
use mailseal_core::{Envelope, KernelError};
use mailseal_efail::Opener;

fn iv(nonce: &[u8; 12]) -> [u8; 16] {
    let mut iv = [0u8; 16];
    iv[..12].copy_from_slice(nonce);
    iv
}

/// Encrypts block-aligned plaintext; the tag field is left zeroed and unused.
pub fn cbc_seal(key: &[u8; 16], nonce: [u8; 12], plaintext: &[u8], ad: Vec<u8>) -> Envelope {
    assert_eq!(plaintext.len() % 16, 0, "CBC baseline takes whole blocks");
    let cipher = Aes128::new(key.into());
    let mut prev = iv(&nonce);
    let mut ciphertext = Vec::with_capacity(plaintext.len());
    for chunk in plaintext.chunks(16) {
        let mut block = [0u8; 16];
        for i in 0..16 {
            block[i] = chunk[i] ^ prev[i];
        }
        let mut b = block.into();
        cipher.encrypt_block(&mut b);
        prev = b.into();
        ciphertext.extend_from_slice(&prev);
    }
    Envelope { version: 1, nonce, ad, tag: [0; 16], ciphertext }
}

pub struct CbcOpener {
    pub key: [u8; 16],
}

impl Opener for CbcOpener {
    fn open(&self, envelope: &Envelope) -> Result<Vec<u8>, KernelError> {
        if !envelope.ciphertext.len().is_multiple_of(16) {
            return Err(KernelError::MalformedEnvelope("ciphertext is not block aligned"));
        }
        let cipher = Aes128::new((&self.key).into());
        let mut prev = iv(&envelope.nonce);
        let mut out = Vec::with_capacity(envelope.ciphertext.len());
        for chunk in envelope.ciphertext.chunks(16) {
            let mut b = *aes::Block::from_slice(chunk);
            cipher.decrypt_block(&mut b);
            for i in 0..16 {
                out.push(b[i] ^ prev[i]);
            }
            prev.copy_from_slice(chunk);
        }
        Ok(out)
    }
}
