//! SHA-1 (FIPS 180-4, RFC 3174). Reference implementation, not for new
//! designs.

use super::{md_pad, SHA_FAMILY_MAX};
use crate::block::{ops_from, BlockAlgorithm, CoreAlg, KeyManagement};

const BLOCK: usize = 64;
const INIT: [u32; 5] = [0x67452301, 0xefcdab89, 0x98badcfe, 0x10325476, 0xc3d2e1f0];

/// One constant per 20-round stretch.
const K: [u32; 4] = [0x5a827999, 0x6ed9eba1, 0x8f1bbcdc, 0xca62c1d6];

fn compress(st: &mut [u32; 5], block: &[u8]) {
    let mut w = [0u32; 80];
    for i in 0..16 {
        w[i] = u32::from_be_bytes(block[4 * i..4 * i + 4].try_into().unwrap());
    }
    for i in 16..80 {
        w[i] = (w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16]).rotate_left(1);
    }
    let [mut a, mut b, mut c, mut d, mut e] = *st;
    for (i, &wi) in w.iter().enumerate() {
        let f = match i / 20 {
            0 => (b & c) | (!b & d),
            2 => (b & c) | (b & d) | (c & d),
            _ => b ^ c ^ d,
        };
        let tmp = a
            .rotate_left(5)
            .wrapping_add(f)
            .wrapping_add(e)
            .wrapping_add(K[i / 20])
            .wrapping_add(wi);
        e = d;
        d = c;
        c = b.rotate_left(30);
        b = a;
        a = tmp;
    }
    st[0] = st[0].wrapping_add(a);
    st[1] = st[1].wrapping_add(b);
    st[2] = st[2].wrapping_add(c);
    st[3] = st[3].wrapping_add(d);
    st[4] = st[4].wrapping_add(e);
}

fn encode(st: &[u32; 5]) -> Vec<u8> {
    st.iter().flat_map(|w| w.to_be_bytes()).collect()
}

struct Sha1Core;

impl CoreAlg for Sha1Core {
    type State = [u32; 5];

    fn block_len(&self) -> usize {
        BLOCK
    }

    fn init(&self, _key: &[u8]) -> Self::State {
        INIT
    }

    fn compress(&self, st: &mut Self::State, _prevlen: u64, block: &[u8]) {
        compress(st, block);
    }

    fn last(&self, st: &mut Self::State, prevlen: u64, last: &[u8]) {
        let total = prevlen + last.len() as u64;
        let mut tail = last.to_vec();
        tail.extend_from_slice(&md_pad(total, BLOCK, 8, false));
        for block in tail.chunks_exact(BLOCK) {
            compress(st, block);
        }
    }

    fn digest(&self, _key: &[u8], st: &Self::State) -> Vec<u8> {
        encode(st)
    }

    fn spec(&self, _key: &[u8], input: &[u8]) -> Vec<u8> {
        let mut st = INIT;
        let aligned = input.len() - input.len() % BLOCK;
        for block in input[..aligned].chunks_exact(BLOCK) {
            compress(&mut st, block);
        }
        let mut tail = input[aligned..].to_vec();
        tail.extend_from_slice(&md_pad(input.len() as u64, BLOCK, 8, false));
        for block in tail.chunks_exact(BLOCK) {
            compress(&mut st, block);
        }
        encode(&st)
    }
}

pub(super) fn descriptor() -> BlockAlgorithm {
    BlockAlgorithm::from_parts(
        "sha1",
        KeyManagement::None,
        BLOCK,
        20,
        SHA_FAMILY_MAX,
        0,
        ops_from(Sha1Core),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hex(alg: &BlockAlgorithm, msg: &[u8]) -> String {
        alg.one_shot(&[], msg)
            .unwrap()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// FIPS 180-4 / RFC 3174 vectors.
    #[test]
    fn standard_vectors() {
        let alg = descriptor();
        assert_eq!(hex(&alg, b""), "da39a3ee5e6b4b0d3255bfef95601890afd80709");
        assert_eq!(hex(&alg, b"abc"), "a9993e364706816aba3e25717850c26c9cd0d89d");
        assert_eq!(
            hex(
                &alg,
                b"abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"
            ),
            "84983e441c3bd26ebaae4aa1f95129e5e54670f1"
        );
    }

    #[test]
    fn million_a() {
        let alg = descriptor();
        let msg = vec![b'a'; 1_000_000];
        assert_eq!(hex(&alg, &msg), "34aa973cd4c4daa4f61eeb2bdbad27316534016f");
    }
}
