//! Shipped algorithm instances.
//!
//! Each submodule implements one compression core; [`instance`] is the
//! front door that validates options and builds a [`BlockAlgorithm`]
//! descriptor. The multi-block transition of every instance is derived from
//! its single-block function, never hand-specialized.

use crate::block::{BlockAlgorithm, Error};

mod agile;
mod blake2;
mod md5;
mod poly1305;
mod sha1;
mod sha2;

pub use agile::{agile_instance, AgileAlgId};

/// SHA-family inputs are capped at 2^61 - 1 bytes so the padded bit length
/// fits its 64-bit field with room to spare.
pub(crate) const SHA_FAMILY_MAX: u64 = (1 << 61) - 1;

/// Identifiers for the shipped roster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgId {
    Md5,
    Sha1,
    Sha256,
    Sha512,
    Blake2s,
    Blake2b,
    Poly1305,
}

impl AlgId {
    pub const ALL: [AlgId; 7] = [
        AlgId::Md5,
        AlgId::Sha1,
        AlgId::Sha256,
        AlgId::Sha512,
        AlgId::Blake2s,
        AlgId::Blake2b,
        AlgId::Poly1305,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgId::Md5 => "md5",
            AlgId::Sha1 => "sha1",
            AlgId::Sha256 => "sha256",
            AlgId::Sha512 => "sha512",
            AlgId::Blake2s => "blake2s",
            AlgId::Blake2b => "blake2b",
            AlgId::Poly1305 => "poly1305",
        }
    }

    pub fn from_name(name: &str) -> Option<AlgId> {
        AlgId::ALL.iter().copied().find(|id| id.name() == name)
    }
}

/// Options for [`instance`]. The defaults describe the unkeyed,
/// standard-length form of each algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceOptions {
    /// Key length in bytes. 0 selects the unkeyed form where one exists.
    pub key_len: usize,
    /// Digest length in bytes; `None` selects the algorithm's full length.
    pub digest_len: Option<usize>,
    /// Streaming buffer size as a multiple of the block length, 1..=16.
    pub buf_multiple: usize,
}

impl Default for InstanceOptions {
    fn default() -> Self {
        InstanceOptions {
            key_len: 0,
            digest_len: None,
            buf_multiple: 1,
        }
    }
}

/// Builds a descriptor for `id` with the given options. Fixed-parameter
/// algorithms reject any attempt to vary what they cannot vary.
pub fn instance(id: AlgId, opts: InstanceOptions) -> Result<BlockAlgorithm, Error> {
    let fixed = |alg: BlockAlgorithm| -> Result<BlockAlgorithm, Error> {
        if opts.key_len != alg.key_len() {
            return Err(Error::OptionRejected(format!(
                "{} takes a fixed {}-byte key",
                alg.name(),
                alg.key_len()
            )));
        }
        match opts.digest_len {
            None => Ok(alg),
            Some(n) if n == alg.output_len() => Ok(alg),
            Some(n) => Err(Error::OptionRejected(format!(
                "{} always outputs {} bytes, requested {n}",
                alg.name(),
                alg.output_len()
            ))),
        }
    };
    let alg = match id {
        AlgId::Md5 => fixed(md5::descriptor())?,
        AlgId::Sha1 => fixed(sha1::descriptor())?,
        AlgId::Sha256 => fixed(sha2::sha256_descriptor())?,
        AlgId::Sha512 => fixed(sha2::sha512_descriptor())?,
        AlgId::Blake2s => blake2::blake2s_descriptor(opts.key_len, opts.digest_len)?,
        AlgId::Blake2b => blake2::blake2b_descriptor(opts.key_len, opts.digest_len)?,
        AlgId::Poly1305 => {
            if opts.key_len != 0 && opts.key_len != 32 {
                return Err(Error::OptionRejected(format!(
                    "poly1305 takes a fixed 32-byte key, requested {}",
                    opts.key_len
                )));
            }
            if !matches!(opts.digest_len, None | Some(16)) {
                return Err(Error::OptionRejected(
                    "poly1305 always outputs 16 bytes".into(),
                ));
            }
            poly1305::descriptor()
        }
    };
    alg.with_buf_multiple(opts.buf_multiple)
}

/// MD5 of RFC 1321: 64-byte blocks, 16-byte digest.
pub fn md5() -> BlockAlgorithm {
    md5::descriptor()
}

/// SHA-1 of FIPS 180-4: 64-byte blocks, 20-byte digest.
pub fn sha1() -> BlockAlgorithm {
    sha1::descriptor()
}

/// SHA-256 of FIPS 180-4: 64-byte blocks, 32-byte digest.
pub fn sha256() -> BlockAlgorithm {
    sha2::sha256_descriptor()
}

/// SHA-512 of FIPS 180-4: 128-byte blocks, 64-byte digest.
pub fn sha512() -> BlockAlgorithm {
    sha2::sha512_descriptor()
}

/// Unkeyed Blake2s of RFC 7693: 64-byte blocks, 32-byte digest.
pub fn blake2s() -> BlockAlgorithm {
    blake2::blake2s_descriptor(0, None).unwrap()
}

/// Unkeyed Blake2b of RFC 7693: 128-byte blocks, 64-byte digest.
pub fn blake2b() -> BlockAlgorithm {
    blake2::blake2b_descriptor(0, None).unwrap()
}

/// Keyed Blake2s with an optional truncated digest.
pub fn blake2s_keyed(key_len: usize, digest_len: usize) -> Result<BlockAlgorithm, Error> {
    blake2::blake2s_descriptor(key_len, Some(digest_len))
}

/// Keyed Blake2b with an optional truncated digest.
pub fn blake2b_keyed(key_len: usize, digest_len: usize) -> Result<BlockAlgorithm, Error> {
    blake2::blake2b_descriptor(key_len, Some(digest_len))
}

/// Poly1305 of RFC 8439: 16-byte blocks, 32-byte key, 16-byte tag. The key
/// stays with the streaming state because the tag needs its second half.
pub fn poly1305() -> BlockAlgorithm {
    poly1305::descriptor()
}

/// Merkle-Damgard tail: 0x80, zero fill, then the message bit length in a
/// `len_width`-byte field, sized so `total + pad` is block aligned.
pub(crate) fn md_pad(total: u64, block_len: usize, len_width: usize, little_endian: bool) -> Vec<u8> {
    let used = (total % block_len as u64) as usize;
    let zeros = (2 * block_len - used - 1 - len_width) % block_len;
    let mut pad = vec![0u8; 1 + zeros + len_width];
    pad[0] = 0x80;
    let bits = u128::from(total) * 8;
    let field = &mut pad[1 + zeros..];
    if little_endian {
        field.copy_from_slice(&bits.to_le_bytes()[..len_width]);
    } else {
        field.copy_from_slice(&bits.to_be_bytes()[16 - len_width..]);
    }
    pad
}
