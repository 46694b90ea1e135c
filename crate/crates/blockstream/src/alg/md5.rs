//! MD5 (RFC 1321). Reference implementation, not for new designs.

use super::{md_pad, SHA_FAMILY_MAX};
use crate::block::{ops_from, BlockAlgorithm, CoreAlg, KeyManagement};

const BLOCK: usize = 64;
const INIT: [u32; 4] = [0x67452301, 0xefcdab89, 0x98badcfe, 0x10325476];

/// Per-round left-rotation amounts, four per quarter.
const S: [u32; 16] = [7, 12, 17, 22, 5, 9, 14, 20, 4, 11, 16, 23, 6, 10, 15, 21];

/// floor(2^32 * abs(sin(i + 1))) for i in 0..64.
const T: [u32; 64] = [
    0xd76aa478, 0xe8c7b756, 0x242070db, 0xc1bdceee,
    0xf57c0faf, 0x4787c62a, 0xa8304613, 0xfd469501,
    0x698098d8, 0x8b44f7af, 0xffff5bb1, 0x895cd7be,
    0x6b901122, 0xfd987193, 0xa679438e, 0x49b40821,
    0xf61e2562, 0xc040b340, 0x265e5a51, 0xe9b6c7aa,
    0xd62f105d, 0x02441453, 0xd8a1e681, 0xe7d3fbc8,
    0x21e1cde6, 0xc33707d6, 0xf4d50d87, 0x455a14ed,
    0xa9e3e905, 0xfcefa3f8, 0x676f02d9, 0x8d2a4c8a,
    0xfffa3942, 0x8771f681, 0x6d9d6122, 0xfde5380c,
    0xa4beea44, 0x4bdecfa9, 0xf6bb4b60, 0xbebfbc70,
    0x289b7ec6, 0xeaa127fa, 0xd4ef3085, 0x04881d05,
    0xd9d4d039, 0xe6db99e5, 0x1fa27cf8, 0xc4ac5665,
    0xf4292244, 0x432aff97, 0xab9423a7, 0xfc93a039,
    0x655b59c3, 0x8f0ccc92, 0xffeff47d, 0x85845dd1,
    0x6fa87e4f, 0xfe2ce6e0, 0xa3014314, 0x4e0811a1,
    0xf7537e82, 0xbd3af235, 0x2ad7d2bb, 0xeb86d391,
];

fn compress(st: &mut [u32; 4], block: &[u8]) {
    let mut m = [0u32; 16];
    for (i, w) in m.iter_mut().enumerate() {
        *w = u32::from_le_bytes(block[4 * i..4 * i + 4].try_into().unwrap());
    }
    let [mut a, mut b, mut c, mut d] = *st;
    for i in 0..64 {
        let (f, g) = match i / 16 {
            0 => ((b & c) | (!b & d), i),
            1 => ((d & b) | (!d & c), (5 * i + 1) % 16),
            2 => (b ^ c ^ d, (3 * i + 5) % 16),
            _ => (c ^ (b | !d), (7 * i) % 16),
        };
        let new_b = b.wrapping_add(
            a.wrapping_add(f)
                .wrapping_add(T[i])
                .wrapping_add(m[g])
                .rotate_left(S[(i / 16) * 4 + i % 4]),
        );
        a = d;
        d = c;
        c = b;
        b = new_b;
    }
    st[0] = st[0].wrapping_add(a);
    st[1] = st[1].wrapping_add(b);
    st[2] = st[2].wrapping_add(c);
    st[3] = st[3].wrapping_add(d);
}

fn encode(st: &[u32; 4]) -> Vec<u8> {
    st.iter().flat_map(|w| w.to_le_bytes()).collect()
}

struct Md5Core;

impl CoreAlg for Md5Core {
    type State = [u32; 4];

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
        tail.extend_from_slice(&md_pad(total, BLOCK, 8, true));
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
        tail.extend_from_slice(&md_pad(input.len() as u64, BLOCK, 8, true));
        for block in tail.chunks_exact(BLOCK) {
            compress(&mut st, block);
        }
        encode(&st)
    }
}

pub(super) fn descriptor() -> BlockAlgorithm {
    BlockAlgorithm::from_parts(
        "md5",
        KeyManagement::None,
        BLOCK,
        16,
        SHA_FAMILY_MAX,
        0,
        ops_from(Md5Core),
    )
}
