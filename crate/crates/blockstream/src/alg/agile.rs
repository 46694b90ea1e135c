//! Run-time algorithm agility behind the ordinary block interface.
//!
//! The agile descriptor exposes the roster maxima (128-byte blocks, 64-byte
//! output ceiling) and picks the concrete hash at `state_init` time from a
//! one-byte key holding an [`AgileAlgId`] code. Every callback dispatches on
//! the tag stored in the state and re-splits incoming data by the inner
//! algorithm's true block length, so a 128-byte agile block becomes two
//! 64-byte MD5 blocks, one SHA-512 block, and so on.

use crate::block::{
    split_at_last, BlockAlgorithm, CoreAlg, KeyManagement, PureState,
};

use super::{blake2, md5, sha1, sha2, SHA_FAMILY_MAX};

/// Roster codes for the agile instance. The code doubles as the one-byte
/// key passed to `state_init`.
#[repr(u8)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AgileAlgId {
    Md5 = 0,
    Sha1 = 1,
    Sha256 = 2,
    Sha512 = 3,
    Blake2s = 4,
    Blake2b = 5,
}

impl AgileAlgId {
    pub const ALL: [AgileAlgId; 6] = [
        AgileAlgId::Md5,
        AgileAlgId::Sha1,
        AgileAlgId::Sha256,
        AgileAlgId::Sha512,
        AgileAlgId::Blake2s,
        AgileAlgId::Blake2b,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<AgileAlgId> {
        AgileAlgId::ALL.get(code as usize).copied()
    }

    pub fn name(self) -> &'static str {
        self.instance().name()
    }

    /// The specialized (non-agile) descriptor for this roster entry.
    pub fn instance(self) -> BlockAlgorithm {
        match self {
            AgileAlgId::Md5 => md5::descriptor(),
            AgileAlgId::Sha1 => sha1::descriptor(),
            AgileAlgId::Sha256 => sha2::sha256_descriptor(),
            AgileAlgId::Sha512 => sha2::sha512_descriptor(),
            AgileAlgId::Blake2s => blake2::blake2s_descriptor(0, None).unwrap(),
            AgileAlgId::Blake2b => blake2::blake2b_descriptor(0, None).unwrap(),
        }
    }
}

const AGILE_BLOCK: usize = 128;

#[derive(Clone, Debug, PartialEq)]
struct AgileState {
    id: AgileAlgId,
    inner: PureState,
}

struct AgileCore {
    roster: [BlockAlgorithm; 6],
}

impl AgileCore {
    fn new() -> AgileCore {
        AgileCore {
            roster: AgileAlgId::ALL.map(|id| id.instance()),
        }
    }

    fn alg(&self, id: AgileAlgId) -> &BlockAlgorithm {
        &self.roster[id.code() as usize]
    }

    /// Temporarily takes the inner pure state out of `st` so the by-value
    /// specification functions can thread it.
    fn rethread(&self, st: &mut AgileState, f: impl FnOnce(&BlockAlgorithm, PureState) -> PureState) {
        let inner = std::mem::replace(&mut st.inner, PureState::new(()));
        st.inner = f(self.alg(st.id), inner);
    }
}

impl CoreAlg for AgileCore {
    type State = AgileState;

    fn block_len(&self) -> usize {
        AGILE_BLOCK
    }

    fn init(&self, key: &[u8]) -> AgileState {
        let id = AgileAlgId::from_code(key[0])
            .unwrap_or_else(|| panic!("unknown agile roster code {}", key[0]));
        AgileState {
            id,
            inner: self.alg(id).init_s(&[]),
        }
    }

    fn compress(&self, st: &mut AgileState, prevlen: u64, block: &[u8]) {
        // Every roster block length divides the agile one, so a full agile
        // block is a whole number of inner blocks.
        self.rethread(st, |alg, inner| alg.update_multi_s(inner, prevlen, block));
    }

    fn last(&self, st: &mut AgileState, prevlen: u64, last: &[u8]) {
        let owned = last.to_vec();
        self.rethread(st, move |alg, inner| {
            let sr = split_at_last(alg.block_len(), &owned);
            let inner = alg.update_multi_s(inner, prevlen, sr.blocks);
            alg.update_last_s(inner, prevlen + sr.blocks.len() as u64, sr.rest)
        });
    }

    fn digest(&self, _key: &[u8], st: &AgileState) -> Vec<u8> {
        self.alg(st.id).finish_s(&[], &st.inner)
    }

    fn spec(&self, key: &[u8], input: &[u8]) -> Vec<u8> {
        let id = AgileAlgId::from_code(key[0])
            .unwrap_or_else(|| panic!("unknown agile roster code {}", key[0]));
        self.alg(id).spec_s(&[], input)
    }
}

/// One descriptor covering the whole unkeyed hash roster. `output_len` is
/// the 64-byte roster ceiling; `digest` returns the true length for the
/// selected algorithm. The length bound is the roster minimum.
pub fn agile_instance() -> BlockAlgorithm {
    BlockAlgorithm::from_parts(
        "agile",
        KeyManagement::Runtime,
        AGILE_BLOCK,
        64,
        SHA_FAMILY_MAX,
        1,
        crate::block::ops_from(AgileCore::new()),
    )
}
