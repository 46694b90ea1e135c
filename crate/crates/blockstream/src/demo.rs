//! A deliberately tiny block algorithm with one-byte blocks.
//!
//! Useful for exhaustive testing of the incremental algebra: with
//! `block_len == 1` every split of an input is block aligned, so laws such as
//! fold composition can be checked over all two-segment splits of short
//! inputs. It mixes position into every step, which catches `prevlen`
//! bookkeeping mistakes that a plain XOR would let slide.

use crate::block::{ops_from, BlockAlgorithm, CoreAlg, KeyManagement};

const SEED: u64 = 0x9e37_79b9_7f4a_7c15;
const MIX: u64 = 0xff51_afd7_ed55_8ccd;
const FIN: u64 = 0xc4ce_b9fe_1a85_ec53;
const OUT: u64 = 0x2545_f491_4f6c_dd1d;

struct XorCore;

fn step(s: u64, prevlen: u64, byte: u8) -> u64 {
    (s ^ u64::from(byte) ^ prevlen.wrapping_mul(MIX)).rotate_left(7)
}

impl CoreAlg for XorCore {
    type State = u64;

    fn block_len(&self) -> usize {
        1
    }

    fn init(&self, _key: &[u8]) -> u64 {
        SEED
    }

    fn compress(&self, st: &mut u64, prevlen: u64, block: &[u8]) {
        *st = step(*st, prevlen, block[0]);
    }

    fn last(&self, st: &mut u64, prevlen: u64, last: &[u8]) {
        let mut s = *st;
        if let Some(&b) = last.first() {
            s = step(s, prevlen, b);
        }
        let total = prevlen + last.len() as u64;
        *st = s ^ total.wrapping_mul(FIN);
    }

    fn digest(&self, _key: &[u8], st: &u64) -> Vec<u8> {
        st.wrapping_mul(OUT).to_le_bytes().to_vec()
    }

    fn spec(&self, _key: &[u8], input: &[u8]) -> Vec<u8> {
        let mut s = SEED;
        for (i, &b) in input.iter().enumerate() {
            s = step(s, i as u64, b);
        }
        s ^= (input.len() as u64).wrapping_mul(FIN);
        s.wrapping_mul(OUT).to_le_bytes().to_vec()
    }
}

/// Eight-byte checksum over one-byte blocks. Not a cryptographic hash.
pub fn xor_accumulator() -> BlockAlgorithm {
    BlockAlgorithm::from_parts(
        "xor-accumulator",
        KeyManagement::None,
        1,
        8,
        u64::MAX,
        0,
        ops_from(XorCore),
    )
}
