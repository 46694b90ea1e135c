//! Call-graph specialization for a small first-order IR.
//!
//! Programs are indexed over a finite set of compile-time symbols.
//! Indexed functions dispatch on the index with `match-idx`, thread it to
//! indexed callees, and leave abstract leaves as `extern` declarations.
//! [`functorize`] rewrites every indexed function into a functor `mk_f`
//! that takes its Specialize dependencies as parameters; [`instantiate`]
//! applies those functors for one index value and a set of extern
//! bindings, emitting flat, non-indexed code in which Eliminate helpers
//! have been inlined away. [`interpret`] gives both forms an executable
//! semantics so the rewrite can be checked end to end.
//!
//! ```
//! use specializer::{instantiate, interpret, parse_ir, SpecializationRequest};
//!
//! let p = parse_ir(
//!     "(index Fast Small)\n\
//!      (extern round [specialize] 1)\n\
//!      (fn round_fast (x) (* x 8))\n\
//!      (fn pad [eliminate] (idx n) (+ (call round idx n) (match-idx (Fast 0) (Small 1))))\n\
//!      (fn frame [specialize] (idx n) (call pad idx (+ n 2)))",
//! )
//! .unwrap();
//! let out = instantiate(
//!     &p,
//!     &SpecializationRequest {
//!         entry_points: vec!["frame".into()],
//!         index_value: "Fast".into(),
//!         bindings: vec![("round".into(), "round_fast".into())],
//!         suffix: "fast".into(),
//!     },
//! )
//! .unwrap();
//! assert_eq!(interpret(&out, "frame_fast", &[3], None), Ok(40));
//! ```

pub mod ast;
pub mod check;
pub mod emit;
mod error;
pub mod functorize;
pub mod gen;
pub mod graph;
pub mod instantiate;
pub mod interp;
pub mod parser;

pub use ast::{Attribute, BinOp, Callee, ExternDecl, IrExpr, IrFunction, IrProgram};
pub use emit::emit_ir;
pub use error::SpecError;
pub use functorize::functorize;
pub use graph::{build_call_graph, CallGraph};
pub use instantiate::{instantiate, SpecializationRequest};
pub use interp::interpret;
pub use parser::parse_ir;
