//! The block-algorithm abstraction.
//!
//! A [`BlockAlgorithm`] bundles an algorithm's constants, its pure
//! specification algebra (`spec_s`, `init_s`, `update_multi_s`,
//! `update_last_s`, `finish_s`) and the imperative callbacks that mutate an
//! opaque [`BlockState`] in place. The pure side is the ground truth the
//! property suites check everything against; the imperative side is what the
//! streaming wrapper drives.

use std::any::Any;
use std::fmt;
use std::sync::Arc;

/// How a descriptor treats key material after initialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyManagement {
    /// Key bytes are retained by the streaming state and handed to `finish`;
    /// Poly1305 needs them at tag time.
    Runtime,
    /// Key bytes are consumed at initialization and never stored afterwards;
    /// keyed Blake2 absorbs the key block.
    Erased,
    /// Keyless: the key is the empty string and `key_len` is 0.
    None,
}

/// Recoverable errors. Contract violations (misaligned blocks, zero unit
/// lengths, foreign state types) are programming errors and panic instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Accepting the input would push the total fed length past
    /// `max_input_length`. The state is left unchanged and stays usable.
    MaximumLengthExceeded,
    /// Key length does not match the descriptor's `key_len`.
    KeyLengthMismatch { expected: usize, got: usize },
    /// Instance options outside the algorithm's allowed ranges.
    OptionRejected(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MaximumLengthExceeded => write!(f, "maximum input length exceeded"),
            Error::KeyLengthMismatch { expected, got } => {
                write!(f, "key length mismatch: expected {expected} bytes, got {got}")
            }
            Error::OptionRejected(why) => write!(f, "option rejected: {why}"),
        }
    }
}

impl std::error::Error for Error {}

/// Outcome of [`split_at_last`]: `blocks` is a unit-aligned prefix, `rest`
/// the remainder. `rest` is nonempty whenever the input is, so the final
/// (possibly full) unit is always still at hand for the last-block step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitResult<'a> {
    pub blocks: &'a [u8],
    pub rest: &'a [u8],
}

/// Splits `data` into the longest `unit_len`-aligned prefix that still leaves
/// a nonempty remainder, plus that remainder.
///
/// Guarantees: `blocks ++ rest == data`, `blocks.len() % unit_len == 0`,
/// `rest.len() <= unit_len`, and `rest` is empty only when `data` is. An
/// exact positive multiple of the unit keeps its final unit in `rest`.
///
/// Panics when `unit_len` is 0.
pub fn split_at_last(unit_len: usize, data: &[u8]) -> SplitResult<'_> {
    assert!(unit_len > 0, "unit_len must be positive");
    let mut n = data.len() / unit_len;
    let rem = data.len() % unit_len;
    if rem == 0 && n > 0 {
        n -= 1;
    }
    let (blocks, rest) = data.split_at(n * unit_len);
    SplitResult { blocks, rest }
}

/// Derives a multi-block transition from a single-block one: the left fold
/// over consecutive `block_len` chunks, advancing `prevlen` by `block_len`
/// per step. The result satisfies the fold law by construction.
///
/// Panics when fed input whose length is not a multiple of `block_len`.
pub fn derive_update_multi<S, F>(block_len: usize, step: F) -> impl Fn(S, u64, &[u8]) -> S
where
    F: Fn(S, u64, &[u8]) -> S,
{
    assert!(block_len > 0, "block_len must be positive");
    move |mut state, mut prevlen, blocks| {
        assert_eq!(
            blocks.len() % block_len,
            0,
            "update_multi input must be a multiple of block_len"
        );
        for block in blocks.chunks_exact(block_len) {
            state = step(state, prevlen, block);
            prevlen += block_len as u64;
        }
        state
    }
}

trait StateCell: Any + Send {
    fn clone_cell(&self) -> Box<dyn StateCell>;
    fn as_any(&self) -> &dyn Any;
    fn as_any_mut(&mut self) -> &mut dyn Any;
}

impl<T: Any + Clone + Send> StateCell for T {
    fn clone_cell(&self) -> Box<dyn StateCell> {
        Box::new(self.clone())
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
    fn as_any_mut(&mut self) -> &mut dyn Any {
        self
    }
}

/// Opaque imperative state. Only the descriptor that created it knows the
/// concrete type inside; feeding a state to a different descriptor panics.
pub struct BlockState(Box<dyn StateCell>);

impl BlockState {
    pub(crate) fn new<T: Any + Clone + Send>(v: T) -> Self {
        BlockState(Box::new(v))
    }

    pub(crate) fn get<T: Any>(&self) -> &T {
        self.0
            .as_any()
            .downcast_ref()
            .expect("block state fed to a foreign descriptor")
    }

    pub(crate) fn get_mut<T: Any>(&mut self) -> &mut T {
        self.0
            .as_any_mut()
            .downcast_mut()
            .expect("block state fed to a foreign descriptor")
    }
}

impl Clone for BlockState {
    fn clone(&self) -> Self {
        BlockState(self.0.clone_cell())
    }
}

impl fmt::Debug for BlockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("BlockState(..)")
    }
}

trait PureCell: Any + Send {
    fn clone_cell(&self) -> Box<dyn PureCell>;
    fn eq_cell(&self, other: &dyn PureCell) -> bool;
    fn fmt_cell(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result;
    fn as_any(&self) -> &dyn Any;
    fn into_any(self: Box<Self>) -> Box<dyn Any>;
}

impl<T: Any + Clone + PartialEq + fmt::Debug + Send> PureCell for T {
    fn clone_cell(&self) -> Box<dyn PureCell> {
        Box::new(self.clone())
    }
    fn eq_cell(&self, other: &dyn PureCell) -> bool {
        other.as_any().downcast_ref::<T>() == Some(self)
    }
    fn fmt_cell(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
    fn into_any(self: Box<Self>) -> Box<dyn Any> {
        self
    }
}

/// Opaque pure state value threaded through the specification functions.
/// Supports equality so refinement checks can compare reflected states.
pub struct PureState(Box<dyn PureCell>);

impl PureState {
    pub(crate) fn new<T: Any + Clone + PartialEq + fmt::Debug + Send>(v: T) -> Self {
        PureState(Box::new(v))
    }

    pub(crate) fn get<T: Any>(&self) -> &T {
        self.0
            .as_any()
            .downcast_ref()
            .expect("pure state fed to a foreign descriptor")
    }

    pub(crate) fn into_inner<T: Any>(self) -> T {
        *self
            .0
            .into_any()
            .downcast()
            .expect("pure state fed to a foreign descriptor")
    }
}

impl Clone for PureState {
    fn clone(&self) -> Self {
        PureState(self.0.clone_cell())
    }
}

impl PartialEq for PureState {
    fn eq(&self, other: &Self) -> bool {
        self.0.eq_cell(&*other.0)
    }
}

impl fmt::Debug for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_cell(f)
    }
}

type InitFn = Box<dyn Fn(&[u8]) -> BlockState + Send + Sync>;
type UpdateFn = Box<dyn Fn(&mut BlockState, u64, &[u8]) + Send + Sync>;
type FinishFn = Box<dyn Fn(&[u8], &BlockState) -> Vec<u8> + Send + Sync>;
type SpecFn = Box<dyn Fn(&[u8], &[u8]) -> Vec<u8> + Send + Sync>;
type PureInitFn = Box<dyn Fn(&[u8]) -> PureState + Send + Sync>;
type PureUpdateFn = Box<dyn Fn(PureState, u64, &[u8]) -> PureState + Send + Sync>;
type PureFinishFn = Box<dyn Fn(&[u8], &PureState) -> Vec<u8> + Send + Sync>;
type ReflectFn = Box<dyn Fn(&BlockState) -> PureState + Send + Sync>;

pub(crate) struct Ops {
    pub init: InitFn,
    pub update_multi: UpdateFn,
    pub update_last: UpdateFn,
    pub finish: FinishFn,
    pub spec: SpecFn,
    pub init_s: PureInitFn,
    pub update_multi_s: PureUpdateFn,
    pub update_last_s: PureUpdateFn,
    pub finish_s: PureFinishFn,
    pub reflect: ReflectFn,
}

/// Everything one block algorithm needs to provide: the pure single-shot
/// reference, the pure incremental algebra, and the imperative callbacks.
/// Implementations live in [`crate::alg`]; [`crate::block::ops_from`] wires a
/// core into a full callback table.
pub(crate) trait CoreAlg: Send + Sync + 'static {
    type State: Any + Clone + PartialEq + fmt::Debug + Send;

    fn block_len(&self) -> usize;

    fn init(&self, key: &[u8]) -> Self::State;

    /// Absorb one full block in place. `prevlen` counts message bytes
    /// already absorbed before this block.
    fn compress(&self, st: &mut Self::State, prevlen: u64, block: &[u8]);

    /// Absorb the final `0..=block_len` bytes in place. Receives an empty
    /// slice only when the whole message is empty.
    fn last(&self, st: &mut Self::State, prevlen: u64, last: &[u8]);

    fn digest(&self, key: &[u8], st: &Self::State) -> Vec<u8>;

    /// Independent one-shot evaluation, written straight from the defining
    /// standard rather than through the incremental path above.
    fn spec(&self, key: &[u8], input: &[u8]) -> Vec<u8>;
}

pub(crate) fn ops_from<C: CoreAlg>(core: C) -> Ops {
    let core = Arc::new(core);
    let block_len = core.block_len();
    let fold = {
        let c = core.clone();
        derive_update_multi(block_len, move |mut st: C::State, prevlen, block| {
            c.compress(&mut st, prevlen, block);
            st
        })
    };
    Ops {
        init: {
            let c = core.clone();
            Box::new(move |key| BlockState::new(c.init(key)))
        },
        update_multi: {
            let c = core.clone();
            Box::new(move |st, prevlen, blocks| {
                assert_eq!(
                    blocks.len() % block_len,
                    0,
                    "update_multi input must be a multiple of block_len"
                );
                let s = st.get_mut::<C::State>();
                let mut p = prevlen;
                for block in blocks.chunks_exact(block_len) {
                    c.compress(s, p, block);
                    p += block_len as u64;
                }
            })
        },
        update_last: {
            let c = core.clone();
            Box::new(move |st, prevlen, last| {
                assert!(
                    last.len() <= block_len,
                    "update_last input exceeds block_len"
                );
                c.last(st.get_mut::<C::State>(), prevlen, last);
            })
        },
        finish: {
            let c = core.clone();
            Box::new(move |key, st| c.digest(key, st.get::<C::State>()))
        },
        spec: {
            let c = core.clone();
            Box::new(move |key, input| c.spec(key, input))
        },
        init_s: {
            let c = core.clone();
            Box::new(move |key| PureState::new(c.init(key)))
        },
        update_multi_s: Box::new(move |st, prevlen, blocks| {
            PureState::new(fold(st.into_inner::<C::State>(), prevlen, blocks))
        }),
        update_last_s: {
            let c = core.clone();
            Box::new(move |st, prevlen, last| {
                assert!(
                    last.len() <= block_len,
                    "update_last input exceeds block_len"
                );
                let mut v = st.into_inner::<C::State>();
                c.last(&mut v, prevlen, last);
                PureState::new(v)
            })
        },
        finish_s: {
            let c = core.clone();
            Box::new(move |key, st| c.digest(key, st.get::<C::State>()))
        },
        reflect: Box::new(move |st| PureState::new(st.get::<C::State>().clone())),
    }
}

/// Descriptor for one block algorithm: constants plus callbacks. Immutable
/// and cheap to clone; freely shareable across threads.
#[derive(Clone)]
pub struct BlockAlgorithm {
    name: &'static str,
    km: KeyManagement,
    block_len: usize,
    output_len: usize,
    max_input_length: u64,
    buf_multiple: usize,
    key_len: usize,
    ops: Arc<Ops>,
}

impl fmt::Debug for BlockAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlockAlgorithm")
            .field("name", &self.name)
            .field("km", &self.km)
            .field("block_len", &self.block_len)
            .field("output_len", &self.output_len)
            .field("max_input_length", &self.max_input_length)
            .field("buf_multiple", &self.buf_multiple)
            .field("key_len", &self.key_len)
            .finish()
    }
}

impl BlockAlgorithm {
    pub(crate) fn from_parts(
        name: &'static str,
        km: KeyManagement,
        block_len: usize,
        output_len: usize,
        max_input_length: u64,
        key_len: usize,
        ops: Ops,
    ) -> Self {
        assert!(block_len > 0 && output_len > 0 && max_input_length > 0);
        BlockAlgorithm {
            name,
            km,
            block_len,
            output_len,
            max_input_length,
            buf_multiple: 1,
            key_len,
            ops: Arc::new(ops),
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn km(&self) -> KeyManagement {
        self.km
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// Digest length in bytes. For the agile instance this is an upper
    /// bound; see [`crate::alg::agile_instance`].
    pub fn output_len(&self) -> usize {
        self.output_len
    }

    pub fn max_input_length(&self) -> u64 {
        self.max_input_length
    }

    pub fn buf_multiple(&self) -> usize {
        self.buf_multiple
    }

    /// Streaming buffer capacity: `buf_multiple * block_len`.
    pub fn buf_capacity(&self) -> usize {
        self.buf_multiple * self.block_len
    }

    pub fn key_len(&self) -> usize {
        self.key_len
    }

    /// Returns a copy with the given internal buffer multiple (1..=16).
    pub fn with_buf_multiple(mut self, multiple: usize) -> Result<Self, Error> {
        if !(1..=16).contains(&multiple) {
            return Err(Error::OptionRejected(format!(
                "buffer multiple must be in 1..=16, got {multiple}"
            )));
        }
        self.buf_multiple = multiple;
        Ok(self)
    }

    /// Returns a copy with an artificially lowered length bound. Meant for
    /// harnesses exercising the limit policy without feeding huge inputs.
    pub fn with_max_input_length(mut self, limit: u64) -> Self {
        assert!(limit > 0, "the length bound must be positive");
        self.max_input_length = limit;
        self
    }

    pub(crate) fn check_key(&self, key: &[u8]) -> Result<(), Error> {
        if key.len() != self.key_len {
            return Err(Error::KeyLengthMismatch {
                expected: self.key_len,
                got: key.len(),
            });
        }
        Ok(())
    }

    /// Imperative `init`. Panics on a wrong-length key; the streaming layer
    /// checks first and reports `KeyLengthMismatch` as a value.
    pub fn state_init(&self, key: &[u8]) -> BlockState {
        assert_eq!(key.len(), self.key_len, "key length must equal key_len");
        (self.ops.init)(key)
    }

    /// Imperative state duplication, used by the non-destructive digest path.
    pub fn state_copy(&self, st: &BlockState) -> BlockState {
        st.clone()
    }

    /// Imperative multi-block absorption; `blocks` must be block aligned.
    pub fn update_multi(&self, st: &mut BlockState, prevlen: u64, blocks: &[u8]) {
        (self.ops.update_multi)(st, prevlen, blocks)
    }

    /// Imperative final absorption of `0..=block_len` bytes.
    pub fn update_last(&self, st: &mut BlockState, prevlen: u64, last: &[u8]) {
        (self.ops.update_last)(st, prevlen, last)
    }

    /// Imperative digest extraction. `key` is consulted only by `Runtime`
    /// instances; others accept the empty slice.
    pub fn finish(&self, key: &[u8], st: &BlockState) -> Vec<u8> {
        (self.ops.finish)(key, st)
    }

    /// Pure one-shot reference, unchecked. Most callers want [`Self::one_shot`].
    pub fn spec_s(&self, key: &[u8], input: &[u8]) -> Vec<u8> {
        (self.ops.spec)(key, input)
    }

    pub fn init_s(&self, key: &[u8]) -> PureState {
        assert_eq!(key.len(), self.key_len, "key length must equal key_len");
        (self.ops.init_s)(key)
    }

    pub fn update_multi_s(&self, st: PureState, prevlen: u64, blocks: &[u8]) -> PureState {
        (self.ops.update_multi_s)(st, prevlen, blocks)
    }

    pub fn update_last_s(&self, st: PureState, prevlen: u64, last: &[u8]) -> PureState {
        (self.ops.update_last_s)(st, prevlen, last)
    }

    pub fn finish_s(&self, key: &[u8], st: &PureState) -> Vec<u8> {
        (self.ops.finish_s)(key, st)
    }

    /// Projects an imperative state onto the pure state it represents, for
    /// refinement checks.
    pub fn reflect(&self, st: &BlockState) -> PureState {
        (self.ops.reflect)(st)
    }

    /// Checked pure one-shot: rejects wrong key lengths and oversize input.
    pub fn one_shot(&self, key: &[u8], input: &[u8]) -> Result<Vec<u8>, Error> {
        self.check_key(key)?;
        if input.len() as u64 > self.max_input_length {
            return Err(Error::MaximumLengthExceeded);
        }
        Ok(self.spec_s(key, input))
    }

    /// Block-by-block evaluation through the pure algebra: split, fold the
    /// aligned prefix, absorb the remainder, extract. Equal to
    /// [`Self::one_shot`] for every conforming instance.
    pub fn incremental_spec(&self, key: &[u8], input: &[u8]) -> Result<Vec<u8>, Error> {
        self.check_key(key)?;
        if input.len() as u64 > self.max_input_length {
            return Err(Error::MaximumLengthExceeded);
        }
        let sr = split_at_last(self.block_len, input);
        let st = self.init_s(key);
        let st = self.update_multi_s(st, 0, sr.blocks);
        let st = self.update_last_s(st, sr.blocks.len() as u64, sr.rest);
        Ok(self.finish_s(key, &st))
    }
}
