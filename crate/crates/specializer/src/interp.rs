//! Call-by-value evaluator.
//!
//! Values are i64 with wrapping arithmetic. The program must be acyclic;
//! index mismatches between entry kind and supplied index value are API
//! misuse and panic, while evaluation problems (unknown names, arity,
//! extern calls) are errors.

use crate::ast::{BinOp, Callee, IrExpr, IrFunction, IrProgram};
use crate::error::SpecError;

// Acyclic call graphs bound call depth by the function count; anything
// past this means the precondition was violated.
const MAX_CALL_DEPTH: usize = 1000;

pub fn interpret(
    p: &IrProgram,
    entry: &str,
    args: &[i64],
    index_value: Option<&str>,
) -> Result<i64, SpecError> {
    let f = match p.resolve(entry) {
        Some(Callee::Function(f)) => f,
        Some(Callee::Extern(e)) => return Err(SpecError::ExternWithoutBody(e.name.clone())),
        None => return Err(SpecError::UnboundName(entry.to_string())),
    };
    if f.indexed {
        let idx = index_value.expect("indexed entry needs an index value");
        assert!(
            p.index.iter().any(|s| s == idx),
            "index value {idx} is not declared"
        );
    } else {
        assert!(
            index_value.is_none(),
            "non-indexed entry takes no index value"
        );
    }
    if args.len() != f.params.len() {
        return Err(SpecError::ArityMismatch {
            name: f.name.clone(),
            expected: f.params.len(),
            got: args.len(),
        });
    }
    let cx = Ctx { p, idx: index_value };
    call_fn(&cx, f, args, 0)
}

struct Ctx<'a> {
    p: &'a IrProgram,
    idx: Option<&'a str>,
}

fn call_fn<'a>(cx: &Ctx<'a>, f: &'a IrFunction, args: &[i64], depth: usize) -> Result<i64, SpecError> {
    assert!(
        depth <= MAX_CALL_DEPTH,
        "call depth exceeded, the program must be acyclic"
    );
    let mut scope: Vec<(&'a str, i64)> = f
        .params
        .iter()
        .map(String::as_str)
        .zip(args.iter().copied())
        .collect();
    eval(cx, &f.body, &mut scope, depth)
}

fn eval<'a>(
    cx: &Ctx<'a>,
    e: &'a IrExpr,
    scope: &mut Vec<(&'a str, i64)>,
    depth: usize,
) -> Result<i64, SpecError> {
    match e {
        IrExpr::Int(v) => Ok(*v),
        IrExpr::Var(n) => scope
            .iter()
            .rev()
            .find(|(name, _)| *name == n)
            .map(|(_, v)| *v)
            .ok_or_else(|| SpecError::UnboundName(n.clone())),
        IrExpr::Let { name, value, body } => {
            let v = eval(cx, value, scope, depth)?;
            scope.push((name, v));
            let r = eval(cx, body, scope, depth)?;
            scope.pop();
            Ok(r)
        }
        IrExpr::Bin { op, lhs, rhs } => {
            let l = eval(cx, lhs, scope, depth)?;
            let r = eval(cx, rhs, scope, depth)?;
            Ok(match op {
                BinOp::Add => l.wrapping_add(r),
                BinOp::Sub => l.wrapping_sub(r),
                BinOp::Mul => l.wrapping_mul(r),
            })
        }
        IrExpr::Ifz { cond, zero, nonzero } => {
            let c = eval(cx, cond, scope, depth)?;
            if c == 0 {
                eval(cx, zero, scope, depth)
            } else {
                eval(cx, nonzero, scope, depth)
            }
        }
        IrExpr::Call { callee, indexed, args } => {
            let g = match cx.p.resolve(callee) {
                Some(Callee::Function(g)) => g,
                Some(Callee::Extern(e)) => {
                    return Err(SpecError::ExternWithoutBody(e.name.clone()))
                }
                None => return Err(SpecError::UnboundName(callee.clone())),
            };
            debug_assert_eq!(*indexed, g.indexed);
            if args.len() != g.params.len() {
                return Err(SpecError::ArityMismatch {
                    name: g.name.clone(),
                    expected: g.params.len(),
                    got: args.len(),
                });
            }
            let mut argv = Vec::with_capacity(args.len());
            for a in args {
                argv.push(eval(cx, a, scope, depth)?);
            }
            call_fn(cx, g, &argv, depth + 1)
        }
        IrExpr::MatchIdx { arms } => {
            let idx = cx.idx.expect("match-idx outside an indexed evaluation");
            let (_, arm) = arms
                .iter()
                .find(|(s, _)| s == idx)
                .expect("total index match");
            eval(cx, arm, scope, depth)
        }
    }
}
