//! Length-prefixed byte layout shared by keys, ciphertexts and verification keys.
//!
//! * bit string: `u32` big-endian bit length, then `ceil(len / 8)` bytes,
//!   most significant bit first, zero padded;
//! * group element / exponent: `u64` big-endian;
//! * nested blob: `u32` big-endian byte length, then the bytes.
//!
//! Every top-level object starts with a one-byte tag.

use super::PrimitiveError;
use crate::qstate::BitString;

pub fn put_bits(out: &mut Vec<u8>, bits: &BitString) {
    out.extend_from_slice(&(bits.len() as u32).to_be_bytes());
    out.extend_from_slice(&bits.to_bytes());
}

pub fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_be_bytes());
}

pub fn put_blob(out: &mut Vec<u8>, blob: &[u8]) {
    out.extend_from_slice(&(blob.len() as u32).to_be_bytes());
    out.extend_from_slice(blob);
}

pub struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], PrimitiveError> {
        if self.bytes.len() - self.pos < n {
            return Err(PrimitiveError::Encoding(format!(
                "truncated at byte {}",
                self.pos
            )));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    pub fn u8(&mut self) -> Result<u8, PrimitiveError> {
        Ok(self.take(1)?[0])
    }

    pub fn u32(&mut self) -> Result<u32, PrimitiveError> {
        Ok(u32::from_be_bytes(
            self.take(4)?.try_into().expect("4 bytes"),
        ))
    }

    pub fn u64(&mut self) -> Result<u64, PrimitiveError> {
        Ok(u64::from_be_bytes(
            self.take(8)?.try_into().expect("8 bytes"),
        ))
    }

    pub fn bits(&mut self) -> Result<BitString, PrimitiveError> {
        let len = self.u32()? as usize;
        let bytes = self.take(len.div_ceil(8))?;
        Ok(BitString::from_bytes(bytes, len)?)
    }

    pub fn blob(&mut self) -> Result<&'a [u8], PrimitiveError> {
        let len = self.u32()? as usize;
        self.take(len)
    }

    pub fn tag(&mut self, expected: &[u8]) -> Result<u8, PrimitiveError> {
        let t = self.u8()?;
        if !expected.contains(&t) {
            return Err(PrimitiveError::Encoding(format!(
                "unexpected tag 0x{t:02x}"
            )));
        }
        Ok(t)
    }

    pub fn finish(self) -> Result<(), PrimitiveError> {
        if self.pos != self.bytes.len() {
            return Err(PrimitiveError::Encoding(format!(
                "{} trailing bytes",
                self.bytes.len() - self.pos
            )));
        }
        Ok(())
    }
}
