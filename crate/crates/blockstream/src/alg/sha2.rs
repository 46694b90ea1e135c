//! SHA-256 and SHA-512 (FIPS 180-4), one round function generic over the
//! word type. The two differ only in word width, round count, rotation
//! amounts, constants, and the width of the length field in the padding.

use std::fmt::Debug;
use std::ops::{BitAnd, BitOr, BitXor, Not};

use super::{md_pad, SHA_FAMILY_MAX};
use crate::block::{ops_from, BlockAlgorithm, CoreAlg, KeyManagement};

pub(super) trait ShaWord:
    Copy
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + BitAnd<Output = Self>
    + BitOr<Output = Self>
    + BitXor<Output = Self>
    + Not<Output = Self>
{
    const ZERO: Self;
    const BLOCK: usize;
    const ROUNDS: usize;
    const LEN_WIDTH: usize;
    const IV: [Self; 8];
    const K: &'static [Self];
    /// Rotation triples for the big sigmas; shift triples (rot, rot, shift)
    /// for the small sigmas.
    const BSIG0: (u32, u32, u32);
    const BSIG1: (u32, u32, u32);
    const SSIG0: (u32, u32, u32);
    const SSIG1: (u32, u32, u32);

    fn from_be(chunk: &[u8]) -> Self;
    fn push_be(self, out: &mut Vec<u8>);
    fn wadd(self, other: Self) -> Self;
    fn rotr(self, n: u32) -> Self;
    fn shr(self, n: u32) -> Self;
}

impl ShaWord for u32 {
    const ZERO: Self = 0;
    const BLOCK: usize = 64;
    const ROUNDS: usize = 64;
    const LEN_WIDTH: usize = 8;
    const IV: [u32; 8] = [
        0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
        0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19,
    ];
    const K: &'static [u32] = &[
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5,
        0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
        0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
        0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
        0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc,
        0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
        0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
        0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
        0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
        0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
        0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3,
        0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
        0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5,
        0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
        0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
        0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2,
    ];
    const BSIG0: (u32, u32, u32) = (2, 13, 22);
    const BSIG1: (u32, u32, u32) = (6, 11, 25);
    const SSIG0: (u32, u32, u32) = (7, 18, 3);
    const SSIG1: (u32, u32, u32) = (17, 19, 10);

    fn from_be(chunk: &[u8]) -> Self {
        u32::from_be_bytes(chunk.try_into().unwrap())
    }
    fn push_be(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_be_bytes());
    }
    fn wadd(self, other: Self) -> Self {
        self.wrapping_add(other)
    }
    fn rotr(self, n: u32) -> Self {
        self.rotate_right(n)
    }
    fn shr(self, n: u32) -> Self {
        self >> n
    }
}

impl ShaWord for u64 {
    const ZERO: Self = 0;
    const BLOCK: usize = 128;
    const ROUNDS: usize = 80;
    const LEN_WIDTH: usize = 16;
    const IV: [u64; 8] = [
        0x6a09e667f3bcc908, 0xbb67ae8584caa73b,
        0x3c6ef372fe94f82b, 0xa54ff53a5f1d36f1,
        0x510e527fade682d1, 0x9b05688c2b3e6c1f,
        0x1f83d9abfb41bd6b, 0x5be0cd19137e2179,
    ];
    const K: &'static [u64] = &[
        0x428a2f98d728ae22, 0x7137449123ef65cd,
        0xb5c0fbcfec4d3b2f, 0xe9b5dba58189dbbc,
        0x3956c25bf348b538, 0x59f111f1b605d019,
        0x923f82a4af194f9b, 0xab1c5ed5da6d8118,
        0xd807aa98a3030242, 0x12835b0145706fbe,
        0x243185be4ee4b28c, 0x550c7dc3d5ffb4e2,
        0x72be5d74f27b896f, 0x80deb1fe3b1696b1,
        0x9bdc06a725c71235, 0xc19bf174cf692694,
        0xe49b69c19ef14ad2, 0xefbe4786384f25e3,
        0x0fc19dc68b8cd5b5, 0x240ca1cc77ac9c65,
        0x2de92c6f592b0275, 0x4a7484aa6ea6e483,
        0x5cb0a9dcbd41fbd4, 0x76f988da831153b5,
        0x983e5152ee66dfab, 0xa831c66d2db43210,
        0xb00327c898fb213f, 0xbf597fc7beef0ee4,
        0xc6e00bf33da88fc2, 0xd5a79147930aa725,
        0x06ca6351e003826f, 0x142929670a0e6e70,
        0x27b70a8546d22ffc, 0x2e1b21385c26c926,
        0x4d2c6dfc5ac42aed, 0x53380d139d95b3df,
        0x650a73548baf63de, 0x766a0abb3c77b2a8,
        0x81c2c92e47edaee6, 0x92722c851482353b,
        0xa2bfe8a14cf10364, 0xa81a664bbc423001,
        0xc24b8b70d0f89791, 0xc76c51a30654be30,
        0xd192e819d6ef5218, 0xd69906245565a910,
        0xf40e35855771202a, 0x106aa07032bbd1b8,
        0x19a4c116b8d2d0c8, 0x1e376c085141ab53,
        0x2748774cdf8eeb99, 0x34b0bcb5e19b48a8,
        0x391c0cb3c5c95a63, 0x4ed8aa4ae3418acb,
        0x5b9cca4f7763e373, 0x682e6ff3d6b2b8a3,
        0x748f82ee5defb2fc, 0x78a5636f43172f60,
        0x84c87814a1f0ab72, 0x8cc702081a6439ec,
        0x90befffa23631e28, 0xa4506cebde82bde9,
        0xbef9a3f7b2c67915, 0xc67178f2e372532b,
        0xca273eceea26619c, 0xd186b8c721c0c207,
        0xeada7dd6cde0eb1e, 0xf57d4f7fee6ed178,
        0x06f067aa72176fba, 0x0a637dc5a2c898a6,
        0x113f9804bef90dae, 0x1b710b35131c471b,
        0x28db77f523047d84, 0x32caab7b40c72493,
        0x3c9ebe0a15c9bebc, 0x431d67c49c100d4c,
        0x4cc5d4becb3e42b6, 0x597f299cfc657e2a,
        0x5fcb6fab3ad6faec, 0x6c44198c4a475817,
    ];
    const BSIG0: (u32, u32, u32) = (28, 34, 39);
    const BSIG1: (u32, u32, u32) = (14, 18, 41);
    const SSIG0: (u32, u32, u32) = (1, 8, 7);
    const SSIG1: (u32, u32, u32) = (19, 61, 6);

    fn from_be(chunk: &[u8]) -> Self {
        u64::from_be_bytes(chunk.try_into().unwrap())
    }
    fn push_be(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_be_bytes());
    }
    fn wadd(self, other: Self) -> Self {
        self.wrapping_add(other)
    }
    fn rotr(self, n: u32) -> Self {
        self.rotate_right(n)
    }
    fn shr(self, n: u32) -> Self {
        self >> n
    }
}

fn tri_sigma<W: ShaWord>(x: W, (a, b, c): (u32, u32, u32), shift_last: bool) -> W {
    let third = if shift_last { x.shr(c) } else { x.rotr(c) };
    x.rotr(a) ^ x.rotr(b) ^ third
}

fn compress<W: ShaWord>(h: &mut [W; 8], block: &[u8]) {
    let word_bytes = W::BLOCK / 16;
    let mut w = [W::ZERO; 80];
    for i in 0..16 {
        w[i] = W::from_be(&block[i * word_bytes..(i + 1) * word_bytes]);
    }
    for i in 16..W::ROUNDS {
        w[i] = w[i - 16]
            .wadd(tri_sigma(w[i - 15], W::SSIG0, true))
            .wadd(w[i - 7])
            .wadd(tri_sigma(w[i - 2], W::SSIG1, true));
    }
    let [mut a, mut b, mut c, mut d, mut e, mut f, mut g, mut hh] = *h;
    for (&wi, &ki) in w.iter().zip(W::K) {
        let ch = (e & f) ^ (!e & g);
        let maj = (a & b) ^ (a & c) ^ (b & c);
        let t1 = hh
            .wadd(tri_sigma(e, W::BSIG1, false))
            .wadd(ch)
            .wadd(ki)
            .wadd(wi);
        let t2 = tri_sigma(a, W::BSIG0, false).wadd(maj);
        hh = g;
        g = f;
        f = e;
        e = d.wadd(t1);
        d = c;
        c = b;
        b = a;
        a = t1.wadd(t2);
    }
    let add = [a, b, c, d, e, f, g, hh];
    for (hi, ai) in h.iter_mut().zip(add) {
        *hi = hi.wadd(ai);
    }
}

fn encode<W: ShaWord>(h: &[W; 8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(W::BLOCK / 2);
    for w in h {
        w.push_be(&mut out);
    }
    out
}

struct Sha2Core<W>(std::marker::PhantomData<W>);

impl<W: ShaWord> CoreAlg for Sha2Core<W> {
    type State = [W; 8];

    fn block_len(&self) -> usize {
        W::BLOCK
    }

    fn init(&self, _key: &[u8]) -> Self::State {
        W::IV
    }

    fn compress(&self, st: &mut Self::State, _prevlen: u64, block: &[u8]) {
        compress(st, block);
    }

    fn last(&self, st: &mut Self::State, prevlen: u64, last: &[u8]) {
        let total = prevlen + last.len() as u64;
        let mut tail = last.to_vec();
        tail.extend_from_slice(&md_pad(total, W::BLOCK, W::LEN_WIDTH, false));
        for block in tail.chunks_exact(W::BLOCK) {
            compress(st, block);
        }
    }

    fn digest(&self, _key: &[u8], st: &Self::State) -> Vec<u8> {
        encode(st)
    }

    fn spec(&self, _key: &[u8], input: &[u8]) -> Vec<u8> {
        let mut st = W::IV;
        let aligned = input.len() - input.len() % W::BLOCK;
        for block in input[..aligned].chunks_exact(W::BLOCK) {
            compress(&mut st, block);
        }
        let mut tail = input[aligned..].to_vec();
        tail.extend_from_slice(&md_pad(input.len() as u64, W::BLOCK, W::LEN_WIDTH, false));
        for block in tail.chunks_exact(W::BLOCK) {
            compress(&mut st, block);
        }
        encode(&st)
    }
}

pub(super) fn sha256_descriptor() -> BlockAlgorithm {
    BlockAlgorithm::from_parts(
        "sha256",
        KeyManagement::None,
        64,
        32,
        SHA_FAMILY_MAX,
        0,
        ops_from(Sha2Core::<u32>(std::marker::PhantomData)),
    )
}

pub(super) fn sha512_descriptor() -> BlockAlgorithm {
    BlockAlgorithm::from_parts(
        "sha512",
        KeyManagement::None,
        128,
        64,
        SHA_FAMILY_MAX,
        0,
        ops_from(Sha2Core::<u64>(std::marker::PhantomData)),
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

    /// FIPS 180-4 vectors.
    #[test]
    fn sha256_vectors() {
        let alg = sha256_descriptor();
        assert_eq!(
            hex(&alg, b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
        assert_eq!(
            hex(&alg, b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        assert_eq!(
            hex(
                &alg,
                b"abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"
            ),
            "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1"
        );
    }

    /// FIPS 180-4 vectors.
    #[test]
    fn sha512_vectors() {
        let alg = sha512_descriptor();
        assert_eq!(
            hex(&alg, b""),
            "cf83e1357eefb8bdf1542850d66d8007d620e4050b5715dc83f4a921d36ce9ce\
             47d0d13c5d85f2b0ff8318d2877eec2f63b931bd47417a81a538327af927da3e"
        );
        assert_eq!(
            hex(&alg, b"abc"),
            "ddaf35a193617abacc417349ae20413112e6fa4e89a97ea20a9eeee64b55d39a\
             2192992a274fc1a836ba3c23a3feebbd454d4423643ce80e2a9ac94fa54ca49f"
        );
        let two_block = b"abcdefghbcdefghicdefghijdefghijkefghijklfghijklmghijklmn\
hijklmnoijklmnopjklmnopqklmnopqrlmnopqrsmnopqrstnopqrstu";
        assert_eq!(
            hex(&alg, two_block),
            "8e959b75dae313da8cf4f72814fc143f8f7779c6eb9f7fa17299aeadb6889018\
             501d289e4900f7e4331b99dec4b5433ac7d329eeb6dd26545e96e55b874be909"
        );
    }

    #[test]
    fn million_a_sha256() {
        let alg = sha256_descriptor();
        let msg = vec![b'a'; 1_000_000];
        assert_eq!(
            hex(&alg, &msg),
            "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0"
        );
    }
}
