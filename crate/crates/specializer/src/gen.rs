//! Seeded random programs for differential testing.
//!
//! Programs are well formed by construction: acyclic (functions only call
//! earlier definitions), index matches are total, idx is threaded only
//! from indexed functions into indexed callees, and every extern comes
//! with a matching concrete implementation so calls can be evaluated both
//! before and after specialization.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::ast::{Attribute, BinOp, ExternDecl, IrExpr, IrFunction, IrProgram};

const INDEX_SYMS: [&str; 3] = ["IdxA", "IdxB", "IdxC"];
const MAX_EXTRA_FUNCTIONS: usize = 8;
const MAX_BODY_DEPTH: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedProgram {
    pub program: IrProgram,
    /// One binding per extern, targeting a generated implementation.
    pub bindings: Vec<(String, String)>,
    /// Every indexed Specialize function, in declaration order.
    pub entries: Vec<String>,
}

/// A callable visible to later definitions.
#[derive(Clone)]
struct Target {
    name: String,
    arity: usize,
    indexed: bool,
}

pub fn random_program(seed: u64) -> GeneratedProgram {
    let mut rng = StdRng::seed_from_u64(seed);
    let index: Vec<String> = INDEX_SYMS[..rng.random_range(1..=INDEX_SYMS.len())]
        .iter()
        .map(|s| s.to_string())
        .collect();

    let mut program = IrProgram {
        index,
        ..IrProgram::default()
    };
    let mut bindings = Vec::new();
    let mut targets: Vec<Target> = Vec::new();

    let n_ext = rng.random_range(0..=2);
    for i in 0..n_ext {
        let name = format!("ext{i}");
        let arity = rng.random_range(0..=2);
        let impl_name = format!("impl{i}");
        let params: Vec<String> = (0..arity).map(|k| format!("p{k}")).collect();
        let body = gen_expr(&mut rng, &mut GenCtx {
            depth: 2,
            locals: params.clone(),
            index: &[],
            plain: &[],
            indexed: &[],
            idx_ok: false,
            let_counter: &mut 0,
        });
        program.functions.push(IrFunction {
            name: impl_name.clone(),
            attr: Attribute::Specialize,
            indexed: false,
            params,
            body,
        });
        program.externs.push(ExternDecl {
            name: name.clone(),
            arity,
        });
        bindings.push((name.clone(), impl_name));
        targets.push(Target {
            name,
            arity,
            indexed: true,
        });
    }

    let mut entries = Vec::new();
    let n_fns = rng.random_range(1..=MAX_EXTRA_FUNCTIONS);
    let mut let_counter = 0u32;
    for i in 0..n_fns {
        let name = format!("f{i}");
        let last = i == n_fns - 1;
        let indexed = last || rng.random_bool(0.75);
        let attr = if indexed && !last && rng.random_bool(0.35) {
            Attribute::Eliminate
        } else {
            Attribute::Specialize
        };
        let params: Vec<String> = (0..rng.random_range(0..=3))
            .map(|k| format!("p{k}"))
            .collect();
        let plain: Vec<Target> = targets.iter().filter(|t| !t.indexed).cloned().collect();
        let indexed_targets: Vec<Target> =
            targets.iter().filter(|t| t.indexed).cloned().collect();
        let index = program.index.clone();
        let depth = rng.random_range(1..=MAX_BODY_DEPTH);
        let body = gen_expr(&mut rng, &mut GenCtx {
            depth,
            locals: params.clone(),
            index: &index,
            plain: &plain,
            indexed: &indexed_targets,
            idx_ok: indexed,
            let_counter: &mut let_counter,
        });
        if indexed && attr == Attribute::Specialize {
            entries.push(name.clone());
        }
        targets.push(Target {
            name: name.clone(),
            arity: params.len(),
            indexed,
        });
        program.functions.push(IrFunction {
            name,
            attr,
            indexed,
            params,
            body,
        });
    }

    GeneratedProgram {
        program,
        bindings,
        entries,
    }
}

struct GenCtx<'a> {
    depth: usize,
    locals: Vec<String>,
    index: &'a [String],
    plain: &'a [Target],
    indexed: &'a [Target],
    idx_ok: bool,
    let_counter: &'a mut u32,
}

fn gen_expr(rng: &mut StdRng, cx: &mut GenCtx<'_>) -> IrExpr {
    if cx.depth == 0 {
        return gen_leaf(rng, cx);
    }
    let callables = cx.plain.len() + if cx.idx_ok { cx.indexed.len() } else { 0 };
    let pick = rng.random_range(0..100);
    if pick < 35 {
        let op = match rng.random_range(0..3) {
            0 => BinOp::Add,
            1 => BinOp::Sub,
            _ => BinOp::Mul,
        };
        IrExpr::bin(op, gen_down(rng, cx), gen_down(rng, cx))
    } else if pick < 45 {
        *cx.let_counter += 1;
        let name = format!("v{}", cx.let_counter);
        let value = Box::new(gen_down(rng, cx));
        cx.locals.push(name.clone());
        cx.depth -= 1;
        let body = Box::new(gen_expr(rng, cx));
        cx.depth += 1;
        cx.locals.pop();
        IrExpr::Let { name, value, body }
    } else if pick < 55 {
        IrExpr::Ifz {
            cond: Box::new(gen_down(rng, cx)),
            zero: Box::new(gen_down(rng, cx)),
            nonzero: Box::new(gen_down(rng, cx)),
        }
    } else if pick < 78 && callables > 0 {
        let at = rng.random_range(0..callables);
        let t = if at < cx.plain.len() {
            cx.plain[at].clone()
        } else {
            cx.indexed[at - cx.plain.len()].clone()
        };
        let args = (0..t.arity).map(|_| gen_down(rng, cx)).collect();
        IrExpr::Call {
            callee: t.name,
            indexed: t.indexed,
            args,
        }
    } else if pick < 88 && cx.idx_ok && !cx.index.is_empty() {
        let syms: Vec<String> = cx.index.to_vec();
        let arms = syms
            .into_iter()
            .map(|sym| (sym, gen_down(rng, cx)))
            .collect();
        IrExpr::MatchIdx { arms }
    } else {
        gen_leaf(rng, cx)
    }
}

fn gen_down(rng: &mut StdRng, cx: &mut GenCtx<'_>) -> IrExpr {
    cx.depth -= 1;
    let e = gen_expr(rng, cx);
    cx.depth += 1;
    e
}

fn gen_leaf(rng: &mut StdRng, cx: &mut GenCtx<'_>) -> IrExpr {
    if !cx.locals.is_empty() && rng.random_bool(0.6) {
        let at = rng.random_range(0..cx.locals.len());
        IrExpr::Var(cx.locals[at].clone())
    } else {
        IrExpr::Int(rng.random_range(-9..=9))
    }
}

/// Replace each bound extern by an indexed forwarding function calling
/// its implementation, making the program evaluable. Externs without a
/// binding are kept; calling one still fails at evaluation time.
pub fn forward_externs(p: &IrProgram, bindings: &[(String, String)]) -> IrProgram {
    let mut out = p.clone();
    out.externs.clear();
    for e in &p.externs {
        let Some(target) = bindings
            .iter()
            .find(|(name, _)| name == &e.name)
            .map(|(_, t)| t.clone())
        else {
            out.externs.push(e.clone());
            continue;
        };
        let params: Vec<String> = (0..e.arity).map(|i| format!("fw{i}")).collect();
        let args = params.iter().map(|p| IrExpr::Var(p.clone())).collect();
        out.functions.push(IrFunction {
            name: e.name.clone(),
            attr: Attribute::Specialize,
            indexed: true,
            params,
            body: IrExpr::Call {
                callee: target,
                indexed: false,
                args,
            },
        });
    }
    out
}
