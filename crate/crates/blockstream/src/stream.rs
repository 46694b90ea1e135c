//! The streaming wrapper: arbitrary-boundary `update` calls on top of any
//! [`BlockAlgorithm`], with a buffer the caller never sees.
//!
//! Flushing is lazy. The buffer is drained only when it is full AND at
//! least one more byte arrives, so after any sequence of updates the last
//! `1..=buf_capacity` bytes of a nonempty input are still buffered. That
//! leaves the final (possibly full) block available to `digest`, which must
//! run the algorithm's last-block step on it without disturbing the live
//! state.

use crate::block::{split_at_last, BlockAlgorithm, BlockState, Error, KeyManagement};

/// Incremental hashing/MAC state over a [`BlockAlgorithm`].
///
/// `digest` never invalidates the stream: it works on a copy of the block
/// state, so updates can continue afterwards and every intermediate digest
/// equals the one-shot result over the bytes fed so far.
#[derive(Debug)]
pub struct Stream {
    alg: BlockAlgorithm,
    block_state: BlockState,
    buf: Vec<u8>,
    buf_filled: usize,
    total_len: u64,
    /// `Some` exactly for `KeyManagement::Runtime` descriptors, whose
    /// finish step needs the key bytes again.
    key: Option<Vec<u8>>,
}

impl Stream {
    /// Creates a stream for `alg`. The key must be exactly `alg.key_len()`
    /// bytes (empty for unkeyed algorithms).
    pub fn create(alg: &BlockAlgorithm, key: &[u8]) -> Result<Stream, Error> {
        alg.check_key(key)?;
        Ok(Stream {
            alg: alg.clone(),
            block_state: alg.state_init(key),
            buf: vec![0; alg.buf_capacity()],
            buf_filled: 0,
            total_len: 0,
            key: match alg.km() {
                KeyManagement::Runtime => Some(key.to_vec()),
                KeyManagement::Erased | KeyManagement::None => None,
            },
        })
    }

    /// Resets to a fresh state under a new key, reusing the allocation.
    pub fn reinit(&mut self, key: &[u8]) -> Result<(), Error> {
        self.alg.check_key(key)?;
        self.block_state = self.alg.state_init(key);
        self.buf_filled = 0;
        self.total_len = 0;
        if self.key.is_some() {
            self.key = Some(key.to_vec());
        }
        Ok(())
    }

    pub fn algorithm(&self) -> &BlockAlgorithm {
        &self.alg
    }

    /// Bytes currently parked in the internal buffer.
    pub fn buffered_len(&self) -> usize {
        self.buf_filled
    }

    /// Total bytes accepted so far.
    pub fn total_len(&self) -> u64 {
        self.total_len
    }

    /// Absorbs `data`. On [`Error::MaximumLengthExceeded`] the stream is
    /// unchanged and remains usable; nothing is partially absorbed.
    pub fn update(&mut self, data: &[u8]) -> Result<(), Error> {
        let len = data.len() as u64;
        match self.total_len.checked_add(len) {
            Some(t) if t <= self.alg.max_input_length() => {}
            _ => return Err(Error::MaximumLengthExceeded),
        }
        if data.is_empty() {
            return Ok(());
        }
        let cap = self.buf.len();
        if self.buf_filled + data.len() <= cap {
            self.buf[self.buf_filled..self.buf_filled + data.len()].copy_from_slice(data);
            self.buf_filled += data.len();
            self.total_len += len;
            return Ok(());
        }

        // The data overflows the buffer, so the buffer can be flushed: at
        // least one byte is known to come after it.
        let mut prevlen = self.total_len - self.buf_filled as u64;
        let mut offset = 0;
        if self.buf_filled > 0 && self.buf_filled < cap {
            let take = cap - self.buf_filled;
            self.buf[self.buf_filled..].copy_from_slice(&data[..take]);
            self.buf_filled = cap;
            offset = take;
        }
        if self.buf_filled == cap {
            self.alg.update_multi(&mut self.block_state, prevlen, &self.buf);
            prevlen += cap as u64;
            self.buf_filled = 0;
        }
        // Feed whole buffer-sized chunks directly, keeping the final
        // (possibly full) chunk buffered for digest.
        let remaining = &data[offset..];
        let sr = split_at_last(cap, remaining);
        if !sr.blocks.is_empty() {
            self.alg.update_multi(&mut self.block_state, prevlen, sr.blocks);
        }
        self.buf[..sr.rest.len()].copy_from_slice(sr.rest);
        self.buf_filled = sr.rest.len();
        self.total_len += len;
        Ok(())
    }

    /// Digest over everything absorbed so far. Works on a copy of the block
    /// state; the stream stays live and can keep absorbing.
    pub fn digest(&self) -> Vec<u8> {
        let mut copy = self.alg.state_copy(&self.block_state);
        let streamed = self.total_len - self.buf_filled as u64;
        let sr = split_at_last(self.alg.block_len(), &self.buf[..self.buf_filled]);
        if !sr.blocks.is_empty() {
            self.alg.update_multi(&mut copy, streamed, sr.blocks);
        }
        self.alg
            .update_last(&mut copy, streamed + sr.blocks.len() as u64, sr.rest);
        self.alg
            .finish(self.key.as_deref().unwrap_or(&[]), &copy)
    }

    /// Consumes the stream. Dropping does the same; this form documents it.
    pub fn release(self) {}
}
