//! Differential tests against the widely used `sha2` crate, as a second
//! independent implementation of SHA-256/SHA-512 beyond the fixture files.

use blockstream::alg;
use blockstream::Stream;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sha2::{Digest, Sha256, Sha512};

#[test]
fn sha256_differential() {
    let alg = alg::sha256();
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    for len in (0..600).chain([1000, 4096, 10_000]) {
        let mut msg = vec![0u8; len];
        rng.fill(&mut msg[..]);
        let want = Sha256::digest(&msg).to_vec();
        assert_eq!(alg.one_shot(&[], &msg).unwrap(), want, "length {len}");
    }
}

#[test]
fn sha512_differential() {
    let alg = alg::sha512();
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    for len in (0..600).chain([1000, 4096, 10_000]) {
        let mut msg = vec![0u8; len];
        rng.fill(&mut msg[..]);
        let want = Sha512::digest(&msg).to_vec();
        assert_eq!(alg.one_shot(&[], &msg).unwrap(), want, "length {len}");
    }
}

/// Streamed updates against the other crate's streamed updates, chunk
/// boundaries chosen independently on each side.
#[test]
fn sha256_streaming_differential() {
    let alg = alg::sha256();
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    for _ in 0..50 {
        let len = rng.random_range(0..5000);
        let mut msg = vec![0u8; len];
        rng.fill(&mut msg[..]);

        let mut st = Stream::create(&alg, &[]).unwrap();
        let mut offset = 0;
        while offset < msg.len() {
            let n = rng.random_range(1..=msg.len() - offset);
            st.update(&msg[offset..offset + n]).unwrap();
            offset += n;
        }

        let mut other = Sha256::new();
        let mut offset = 0;
        while offset < msg.len() {
            let n = rng.random_range(1..=msg.len() - offset);
            other.update(&msg[offset..offset + n]);
            offset += n;
        }
        assert_eq!(st.digest(), other.finalize().to_vec(), "length {len}");
    }
}
