//! Blake2s and Blake2b (RFC 7693), generic over the word type, with
//! optional keying and digest truncation.
//!
//! Keyed instances do not compress the padded key block at initialization.
//! The final compression must see the true last block with the finalization
//! flag, and for a keyed empty message that last block IS the key block, so
//! the key block stays pending until the first compression or the last-block
//! step consumes it. The byte counter fed to the compression function always
//! includes the key block's contribution.

use std::fmt::Debug;
use std::marker::PhantomData;
use std::ops::{BitXor, Not};

use crate::block::{ops_from, BlockAlgorithm, CoreAlg, Error, KeyManagement};

pub(super) trait B2Word:
    Copy + PartialEq + Debug + Send + Sync + 'static + BitXor<Output = Self> + Not<Output = Self>
{
    const ZERO: Self;
    /// Block bytes.
    const BB: usize;
    const ROUNDS: usize;
    /// G rotation amounts.
    const R: (u32, u32, u32, u32);
    const IV: [Self; 8];
    /// Longest digest and key, both BB/2.
    const MAX_LEN: usize;
    const NAME: &'static str;

    fn from_le(chunk: &[u8]) -> Self;
    fn push_le(self, out: &mut Vec<u8>);
    fn wadd(self, other: Self) -> Self;
    fn rotr(self, n: u32) -> Self;
    fn from_u64(x: u64) -> Self;
    /// Low and high counter words of a byte offset.
    fn t_words(t: u128) -> (Self, Self);
}

impl B2Word for u32 {
    const ZERO: Self = 0;
    const BB: usize = 64;
    const ROUNDS: usize = 10;
    const R: (u32, u32, u32, u32) = (16, 12, 8, 7);
    const IV: [u32; 8] = [
        0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
        0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19,
    ];
    const MAX_LEN: usize = 32;
    const NAME: &'static str = "blake2s";

    fn from_le(chunk: &[u8]) -> Self {
        u32::from_le_bytes(chunk.try_into().unwrap())
    }
    fn push_le(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_le_bytes());
    }
    fn wadd(self, other: Self) -> Self {
        self.wrapping_add(other)
    }
    fn rotr(self, n: u32) -> Self {
        self.rotate_right(n)
    }
    fn from_u64(x: u64) -> Self {
        x as u32
    }
    fn t_words(t: u128) -> (Self, Self) {
        (t as u32, (t >> 32) as u32)
    }
}

impl B2Word for u64 {
    const ZERO: Self = 0;
    const BB: usize = 128;
    const ROUNDS: usize = 12;
    const R: (u32, u32, u32, u32) = (32, 24, 16, 63);
    const IV: [u64; 8] = [
        0x6a09e667f3bcc908, 0xbb67ae8584caa73b,
        0x3c6ef372fe94f82b, 0xa54ff53a5f1d36f1,
        0x510e527fade682d1, 0x9b05688c2b3e6c1f,
        0x1f83d9abfb41bd6b, 0x5be0cd19137e2179,
    ];
    const MAX_LEN: usize = 64;
    const NAME: &'static str = "blake2b";

    fn from_le(chunk: &[u8]) -> Self {
        u64::from_le_bytes(chunk.try_into().unwrap())
    }
    fn push_le(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_le_bytes());
    }
    fn wadd(self, other: Self) -> Self {
        self.wrapping_add(other)
    }
    fn rotr(self, n: u32) -> Self {
        self.rotate_right(n)
    }
    fn from_u64(x: u64) -> Self {
        x
    }
    fn t_words(t: u128) -> (Self, Self) {
        (t as u64, (t >> 64) as u64)
    }
}

/// Message word schedule, one row per round (mod 10).
const SIGMA: [[usize; 16]; 10] = [
    [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15],
    [14, 10, 4, 8, 9, 15, 13, 6, 1, 12, 0, 2, 11, 7, 5, 3],
    [11, 8, 12, 0, 5, 2, 15, 13, 10, 14, 3, 6, 7, 1, 9, 4],
    [7, 9, 3, 1, 13, 12, 11, 14, 2, 6, 5, 10, 4, 0, 15, 8],
    [9, 0, 5, 7, 2, 4, 10, 15, 14, 1, 11, 12, 6, 8, 3, 13],
    [2, 12, 6, 10, 0, 11, 8, 3, 4, 13, 7, 5, 15, 14, 1, 9],
    [12, 5, 1, 15, 14, 13, 4, 10, 0, 7, 6, 3, 9, 2, 8, 11],
    [13, 11, 7, 14, 12, 1, 3, 9, 5, 0, 15, 4, 8, 6, 2, 10],
    [6, 15, 14, 9, 11, 3, 0, 8, 12, 2, 13, 7, 1, 4, 10, 5],
    [10, 2, 8, 4, 7, 6, 1, 5, 15, 11, 9, 14, 3, 12, 13, 0],
];

#[allow(clippy::too_many_arguments)]
fn g<W: B2Word>(v: &mut [W; 16], a: usize, b: usize, c: usize, d: usize, x: W, y: W) {
    v[a] = v[a].wadd(v[b]).wadd(x);
    v[d] = (v[d] ^ v[a]).rotr(W::R.0);
    v[c] = v[c].wadd(v[d]);
    v[b] = (v[b] ^ v[c]).rotr(W::R.1);
    v[a] = v[a].wadd(v[b]).wadd(y);
    v[d] = (v[d] ^ v[a]).rotr(W::R.2);
    v[c] = v[c].wadd(v[d]);
    v[b] = (v[b] ^ v[c]).rotr(W::R.3);
}

/// The compression function F. `t` counts all bytes compressed so far,
/// key block included, with the current block counted per RFC 7693 rules.
fn f<W: B2Word>(h: &mut [W; 8], block: &[u8], t: u128, last: bool) {
    debug_assert_eq!(block.len(), W::BB);
    let word_bytes = W::BB / 16;
    let mut m = [W::ZERO; 16];
    for (i, w) in m.iter_mut().enumerate() {
        *w = W::from_le(&block[i * word_bytes..(i + 1) * word_bytes]);
    }
    let mut v = [W::ZERO; 16];
    v[..8].copy_from_slice(h);
    v[8..].copy_from_slice(&W::IV);
    let (t0, t1) = W::t_words(t);
    v[12] = v[12] ^ t0;
    v[13] = v[13] ^ t1;
    if last {
        v[14] = !v[14];
    }
    for r in 0..W::ROUNDS {
        let s = &SIGMA[r % 10];
        g(&mut v, 0, 4, 8, 12, m[s[0]], m[s[1]]);
        g(&mut v, 1, 5, 9, 13, m[s[2]], m[s[3]]);
        g(&mut v, 2, 6, 10, 14, m[s[4]], m[s[5]]);
        g(&mut v, 3, 7, 11, 15, m[s[6]], m[s[7]]);
        g(&mut v, 0, 5, 10, 15, m[s[8]], m[s[9]]);
        g(&mut v, 1, 6, 11, 12, m[s[10]], m[s[11]]);
        g(&mut v, 2, 7, 8, 13, m[s[12]], m[s[13]]);
        g(&mut v, 3, 4, 9, 14, m[s[14]], m[s[15]]);
    }
    for i in 0..8 {
        h[i] = h[i] ^ v[i] ^ v[i + 8];
    }
}

fn param_xor<W: B2Word>(h: &mut [W; 8], key_len: usize, digest_len: usize) {
    h[0] = h[0] ^ W::from_u64(0x0101_0000 ^ ((key_len as u64) << 8) ^ digest_len as u64);
}

#[derive(Clone, PartialEq, Debug)]
struct Blake2State<W> {
    h: [W; 8],
    /// Zero-padded key block waiting for its compression; consumed by the
    /// first subsequent block or by the final one.
    pending_key_block: Option<Vec<u8>>,
    /// Bytes the key block contributes to the counter: 0 or BB.
    key_offset: u64,
}

struct Blake2Core<W> {
    digest_len: usize,
    key_len: usize,
    _word: PhantomData<W>,
}

impl<W: B2Word> Blake2Core<W> {
    fn flush_pending(&self, st: &mut Blake2State<W>) {
        if let Some(kb) = st.pending_key_block.take() {
            f::<W>(&mut st.h, &kb, W::BB as u128, false);
        }
    }
}

impl<W: B2Word> CoreAlg for Blake2Core<W> {
    type State = Blake2State<W>;

    fn block_len(&self) -> usize {
        W::BB
    }

    fn init(&self, key: &[u8]) -> Self::State {
        let mut h = W::IV;
        param_xor(&mut h, self.key_len, self.digest_len);
        let (pending, key_offset) = if key.is_empty() {
            (None, 0)
        } else {
            let mut kb = key.to_vec();
            kb.resize(W::BB, 0);
            (Some(kb), W::BB as u64)
        };
        Blake2State {
            h,
            pending_key_block: pending,
            key_offset,
        }
    }

    fn compress(&self, st: &mut Self::State, prevlen: u64, block: &[u8]) {
        self.flush_pending(st);
        let t = u128::from(st.key_offset) + u128::from(prevlen) + W::BB as u128;
        f::<W>(&mut st.h, block, t, false);
    }

    fn last(&self, st: &mut Self::State, prevlen: u64, last: &[u8]) {
        assert!(!last.is_empty() || prevlen == 0, "empty last implies empty input");
        if last.is_empty() {
            if let Some(kb) = st.pending_key_block.take() {
                // Keyed empty message: the key block is the final block.
                f::<W>(&mut st.h, &kb, W::BB as u128, true);
            } else {
                f::<W>(&mut st.h, &vec![0u8; W::BB], 0, true);
            }
            return;
        }
        self.flush_pending(st);
        let t = u128::from(st.key_offset) + u128::from(prevlen) + last.len() as u128;
        let mut block = last.to_vec();
        block.resize(W::BB, 0);
        f::<W>(&mut st.h, &block, t, true);
    }

    fn digest(&self, _key: &[u8], st: &Self::State) -> Vec<u8> {
        debug_assert!(st.pending_key_block.is_none());
        let mut out = Vec::with_capacity(W::MAX_LEN);
        for w in &st.h {
            w.push_le(&mut out);
        }
        out.truncate(self.digest_len);
        out
    }

    fn spec(&self, key: &[u8], input: &[u8]) -> Vec<u8> {
        let mut h = W::IV;
        param_xor(&mut h, self.key_len, self.digest_len);
        let mut d = Vec::with_capacity(input.len() + W::BB);
        if !key.is_empty() {
            d.extend_from_slice(key);
            d.resize(W::BB, 0);
        }
        d.extend_from_slice(input);
        if d.is_empty() {
            f::<W>(&mut h, &vec![0u8; W::BB], 0, true);
        } else {
            let full = (d.len() - 1) / W::BB;
            for i in 0..full {
                f::<W>(&mut h, &d[i * W::BB..(i + 1) * W::BB], ((i + 1) * W::BB) as u128, false);
            }
            let mut lastb = d[full * W::BB..].to_vec();
            lastb.resize(W::BB, 0);
            let t = input.len() as u128 + if key.is_empty() { 0 } else { W::BB as u128 };
            f::<W>(&mut h, &lastb, t, true);
        }
        let mut out = Vec::with_capacity(W::MAX_LEN);
        for w in &h {
            w.push_le(&mut out);
        }
        out.truncate(self.digest_len);
        out
    }
}

fn descriptor<W: B2Word>(key_len: usize, digest_len: Option<usize>) -> Result<BlockAlgorithm, Error> {
    let digest_len = digest_len.unwrap_or(W::MAX_LEN);
    if digest_len == 0 || digest_len > W::MAX_LEN {
        return Err(Error::OptionRejected(format!(
            "{} digest length must be in 1..={}, got {digest_len}",
            W::NAME,
            W::MAX_LEN
        )));
    }
    if key_len > W::MAX_LEN {
        return Err(Error::OptionRejected(format!(
            "{} key length must be in 0..={}, got {key_len}",
            W::NAME,
            W::MAX_LEN
        )));
    }
    let km = if key_len == 0 {
        KeyManagement::None
    } else {
        KeyManagement::Erased
    };
    let core = Blake2Core::<W> {
        digest_len,
        key_len,
        _word: PhantomData,
    };
    Ok(BlockAlgorithm::from_parts(
        W::NAME,
        km,
        W::BB,
        digest_len,
        u64::MAX,
        key_len,
        ops_from(core),
    ))
}

pub(super) fn blake2s_descriptor(
    key_len: usize,
    digest_len: Option<usize>,
) -> Result<BlockAlgorithm, Error> {
    descriptor::<u32>(key_len, digest_len)
}

pub(super) fn blake2b_descriptor(
    key_len: usize,
    digest_len: Option<usize>,
) -> Result<BlockAlgorithm, Error> {
    descriptor::<u64>(key_len, digest_len)
}
