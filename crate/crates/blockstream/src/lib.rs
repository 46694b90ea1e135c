//! Streaming wrapper and reference instances for block-based hashes and MACs.
//!
//! The crate is organized around one idea: any algorithm that consumes input
//! in fixed-size blocks with a distinguished final-block step can be described
//! once as a [`BlockAlgorithm`] and then wrapped by [`Stream`], which owns all
//! buffering and never invalidates its state on digest extraction.
//!
//! ```
//! let alg = blockstream::alg::sha256();
//! let mut st = blockstream::Stream::create(&alg, &[]).unwrap();
//! st.update(b"ab").unwrap();
//! st.update(b"c").unwrap();
//! assert_eq!(st.digest(), alg.one_shot(&[], b"abc").unwrap());
//! ```
//!
//! The instances here are scalar reference code: correct and well-tested, but
//! neither vectorized nor constant-time.

pub mod alg;
pub mod block;
pub mod demo;
pub mod stream;

pub use block::{
    derive_update_multi, split_at_last, BlockAlgorithm, BlockState, Error, KeyManagement,
    PureState, SplitResult,
};
pub use stream::Stream;
