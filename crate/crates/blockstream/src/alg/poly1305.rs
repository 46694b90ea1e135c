//! Poly1305 (RFC 8439) over 26-bit limbs. Reference code, not constant
//! time. The key's `r` half is clamped into the state at initialization;
//! the `s` half is added at tag time, which is why the descriptor keeps the
//! key around (`KeyManagement::Runtime`).

use crate::block::{ops_from, BlockAlgorithm, CoreAlg, KeyManagement};

const BLOCK: usize = 16;
const MASK: u32 = 0x3ffffff;

#[derive(Clone, PartialEq, Debug)]
struct Poly1305State {
    r: [u32; 5],
    h: [u32; 5],
}

fn load_r(key: &[u8]) -> [u32; 5] {
    let t0 = u32::from_le_bytes(key[0..4].try_into().unwrap());
    let t1 = u32::from_le_bytes(key[4..8].try_into().unwrap());
    let t2 = u32::from_le_bytes(key[8..12].try_into().unwrap());
    let t3 = u32::from_le_bytes(key[12..16].try_into().unwrap());
    // The masks fold in the RFC clamp of r.
    [
        t0 & 0x3ffffff,
        ((t0 >> 26) | (t1 << 6)) & 0x3ffff03,
        ((t1 >> 20) | (t2 << 12)) & 0x3ffc0ff,
        ((t2 >> 14) | (t3 << 18)) & 0x3f03fff,
        (t3 >> 8) & 0x00fffff,
    ]
}

/// Adds one 17-byte group (block plus its high bit) to `h` and multiplies
/// by `r` mod 2^130 - 5. Partial blocks arrive already 0x01-terminated.
fn absorb(st: &mut Poly1305State, block: &[u8; 16], hibit: u32) {
    let t0 = u32::from_le_bytes(block[0..4].try_into().unwrap());
    let t1 = u32::from_le_bytes(block[4..8].try_into().unwrap());
    let t2 = u32::from_le_bytes(block[8..12].try_into().unwrap());
    let t3 = u32::from_le_bytes(block[12..16].try_into().unwrap());
    let h = &mut st.h;
    h[0] += t0 & MASK;
    h[1] += ((t0 >> 26) | (t1 << 6)) & MASK;
    h[2] += ((t1 >> 20) | (t2 << 12)) & MASK;
    h[3] += ((t2 >> 14) | (t3 << 18)) & MASK;
    h[4] += (t3 >> 8) | (hibit << 24);

    let r = &st.r;
    let s1 = (r[1] * 5) as u64;
    let s2 = (r[2] * 5) as u64;
    let s3 = (r[3] * 5) as u64;
    let s4 = (r[4] * 5) as u64;
    let (h0, h1, h2, h3, h4) = (
        h[0] as u64,
        h[1] as u64,
        h[2] as u64,
        h[3] as u64,
        h[4] as u64,
    );
    let (r0, r1, r2, r3, r4) = (
        r[0] as u64,
        r[1] as u64,
        r[2] as u64,
        r[3] as u64,
        r[4] as u64,
    );
    let d0 = h0 * r0 + h1 * s4 + h2 * s3 + h3 * s2 + h4 * s1;
    let mut d1 = h0 * r1 + h1 * r0 + h2 * s4 + h3 * s3 + h4 * s2;
    let mut d2 = h0 * r2 + h1 * r1 + h2 * r0 + h3 * s4 + h4 * s3;
    let mut d3 = h0 * r3 + h1 * r2 + h2 * r1 + h3 * r0 + h4 * s4;
    let mut d4 = h0 * r4 + h1 * r3 + h2 * r2 + h3 * r1 + h4 * r0;

    let mut c = d0 >> 26;
    h[0] = (d0 as u32) & MASK;
    d1 += c;
    c = d1 >> 26;
    h[1] = (d1 as u32) & MASK;
    d2 += c;
    c = d2 >> 26;
    h[2] = (d2 as u32) & MASK;
    d3 += c;
    c = d3 >> 26;
    h[3] = (d3 as u32) & MASK;
    d4 += c;
    c = d4 >> 26;
    h[4] = (d4 as u32) & MASK;
    let folded = h[0] as u64 + c * 5;
    h[0] = (folded as u32) & MASK;
    h[1] += (folded >> 26) as u32;
}

fn absorb_last(st: &mut Poly1305State, last: &[u8]) {
    debug_assert!(!last.is_empty() && last.len() <= BLOCK);
    if last.len() == BLOCK {
        absorb(st, last.try_into().unwrap(), 1);
    } else {
        let mut block = [0u8; BLOCK];
        block[..last.len()].copy_from_slice(last);
        block[last.len()] = 0x01;
        absorb(st, &block, 0);
    }
}

fn tag(key: &[u8], st: &Poly1305State) -> Vec<u8> {
    let mut h = st.h;
    // Finish propagating carries so each limb is strictly 26 bits.
    let mut c = h[1] >> 26;
    h[1] &= MASK;
    h[2] += c;
    c = h[2] >> 26;
    h[2] &= MASK;
    h[3] += c;
    c = h[3] >> 26;
    h[3] &= MASK;
    h[4] += c;
    c = h[4] >> 26;
    h[4] &= MASK;
    h[0] += c * 5;
    c = h[0] >> 26;
    h[0] &= MASK;
    h[1] += c;

    // h < 2p. Adding 5 carries out of bit 130 exactly when h >= p, and in
    // that case g = h + 5 - 2^130 = h mod p.
    let mut g = [0u32; 5];
    let mut carry = 5u32;
    for (gi, hi) in g.iter_mut().zip(h) {
        let t = hi + carry;
        *gi = t & MASK;
        carry = t >> 26;
    }
    if carry == 1 {
        h = g;
    }

    // Tag = (h + s) mod 2^128; the limbs above bit 128 shift out.
    let acc = u128::from(h[0])
        .wrapping_add(u128::from(h[1]) << 26)
        .wrapping_add(u128::from(h[2]) << 52)
        .wrapping_add(u128::from(h[3]) << 78)
        .wrapping_add(u128::from(h[4]) << 104);
    let s = u128::from_le_bytes(key[16..32].try_into().unwrap());
    acc.wrapping_add(s).to_le_bytes().to_vec()
}

struct Poly1305Core;

impl CoreAlg for Poly1305Core {
    type State = Poly1305State;

    fn block_len(&self) -> usize {
        BLOCK
    }

    fn init(&self, key: &[u8]) -> Self::State {
        Poly1305State {
            r: load_r(key),
            h: [0; 5],
        }
    }

    fn compress(&self, st: &mut Self::State, _prevlen: u64, block: &[u8]) {
        absorb(st, block.try_into().unwrap(), 1);
    }

    fn last(&self, st: &mut Self::State, _prevlen: u64, last: &[u8]) {
        if !last.is_empty() {
            absorb_last(st, last);
        }
    }

    fn digest(&self, key: &[u8], st: &Self::State) -> Vec<u8> {
        tag(key, st)
    }

    fn spec(&self, key: &[u8], input: &[u8]) -> Vec<u8> {
        let mut st = self.init(key);
        let mut chunks = input.chunks_exact(BLOCK);
        for block in &mut chunks {
            absorb(&mut st, block.try_into().unwrap(), 1);
        }
        if !chunks.remainder().is_empty() {
            absorb_last(&mut st, chunks.remainder());
        }
        tag(key, &st)
    }
}

pub(super) fn descriptor() -> BlockAlgorithm {
    BlockAlgorithm::from_parts(
        "poly1305",
        KeyManagement::Runtime,
        BLOCK,
        16,
        u64::MAX,
        32,
        ops_from(Poly1305Core),
    )
}
