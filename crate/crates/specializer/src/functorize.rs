//! Turn indexed functions into functors.
//!
//! Every indexed function f becomes mk_f, gaining one parameter per
//! Specialize dependency: the indexed Specialize functions and externs
//! reachable from f's body through a possibly-empty chain of Eliminate
//! bodies, in depth-first first-occurrence order. Dependency parameters
//! are named g_<dep>, freshened against existing names so the output is
//! a well-formed program in its own right; their order is what downstream
//! passes rely on. Calls adjust to match: a call to a Specialize
//! dependency becomes a call through the bound parameter (index argument
//! dropped), while a call to an Eliminate function becomes a call to its
//! mk_ form, forwarding the index and the callee's own dependencies.
//!
//! Non-indexed functions and externs are left untouched.

use std::collections::HashMap;

use crate::ast::{Attribute, Callee, IrExpr, IrFunction, IrProgram};
use crate::error::SpecError;
use crate::graph::build_call_graph;

type DepMemo = HashMap<String, Vec<String>>;

pub fn functorize(p: &IrProgram) -> Result<IrProgram, SpecError> {
    build_call_graph(p)?;
    for f in &p.functions {
        if f.indexed {
            let mk = format!("mk_{}", f.name);
            if p.resolve(&mk).is_some() {
                return Err(SpecError::NameCollision(mk));
            }
        }
    }
    let mut memo = DepMemo::new();
    let functions = p
        .functions
        .iter()
        .map(|f| {
            if !f.indexed {
                return f.clone();
            }
            let deps = g_deps(p, &f.name, &mut memo);
            let dep_params = dep_param_names(p, f, &deps);
            let map: HashMap<&str, &str> = deps
                .iter()
                .map(String::as_str)
                .zip(dep_params.iter().map(String::as_str))
                .collect();
            let mut params = dep_params.clone();
            params.extend(f.params.iter().cloned());
            IrFunction {
                name: format!("mk_{}", f.name),
                attr: f.attr,
                indexed: true,
                params,
                body: rewrite(p, &f.body, &map, &mut memo),
            }
        })
        .collect();
    Ok(IrProgram {
        index: p.index.clone(),
        externs: p.externs.clone(),
        functions,
    })
}

/// Specialize dependencies of an indexed function, in discovery order.
pub(crate) fn g_deps(p: &IrProgram, name: &str, memo: &mut DepMemo) -> Vec<String> {
    if let Some(v) = memo.get(name) {
        return v.clone();
    }
    let f = p.function(name).expect("indexed function");
    let mut out = Vec::new();
    scan(p, &f.body, &mut out, memo);
    memo.insert(name.to_string(), out.clone());
    out
}

fn dep_param_names(p: &IrProgram, f: &IrFunction, deps: &[String]) -> Vec<String> {
    let mut taken: Vec<String> = p
        .top_level_names()
        .map(String::from)
        .chain(
            p.functions
                .iter()
                .filter(|g| g.indexed)
                .map(|g| format!("mk_{}", g.name)),
        )
        .chain(f.params.iter().cloned())
        .collect();
    collect_let_names(&f.body, &mut taken);
    deps.iter()
        .map(|d| {
            let mut cand = format!("g_{d}");
            let mut n = 1;
            while taken.contains(&cand) {
                n += 1;
                cand = format!("g_{d}_{n}");
            }
            taken.push(cand.clone());
            cand
        })
        .collect()
}

fn collect_let_names(e: &IrExpr, out: &mut Vec<String>) {
    match e {
        IrExpr::Int(_) | IrExpr::Var(_) => {}
        IrExpr::Let { name, value, body } => {
            out.push(name.clone());
            collect_let_names(value, out);
            collect_let_names(body, out);
        }
        IrExpr::Bin { lhs, rhs, .. } => {
            collect_let_names(lhs, out);
            collect_let_names(rhs, out);
        }
        IrExpr::Ifz { cond, zero, nonzero } => {
            collect_let_names(cond, out);
            collect_let_names(zero, out);
            collect_let_names(nonzero, out);
        }
        IrExpr::Call { args, .. } => {
            for a in args {
                collect_let_names(a, out);
            }
        }
        IrExpr::MatchIdx { arms } => {
            for (_, e) in arms {
                collect_let_names(e, out);
            }
        }
    }
}

fn push_unique(out: &mut Vec<String>, name: &str) {
    if !out.iter().any(|have| have == name) {
        out.push(name.to_string());
    }
}

fn scan(p: &IrProgram, e: &IrExpr, out: &mut Vec<String>, memo: &mut DepMemo) {
    match e {
        IrExpr::Int(_) | IrExpr::Var(_) => {}
        IrExpr::Let { value, body, .. } => {
            scan(p, value, out, memo);
            scan(p, body, out, memo);
        }
        IrExpr::Bin { lhs, rhs, .. } => {
            scan(p, lhs, out, memo);
            scan(p, rhs, out, memo);
        }
        IrExpr::Ifz { cond, zero, nonzero } => {
            scan(p, cond, out, memo);
            scan(p, zero, out, memo);
            scan(p, nonzero, out, memo);
        }
        IrExpr::Call { callee, indexed, args } => {
            if *indexed {
                match p.resolve(callee).expect("bound callee") {
                    Callee::Extern(_) => push_unique(out, callee),
                    Callee::Function(g) if g.attr == Attribute::Specialize => {
                        push_unique(out, callee)
                    }
                    Callee::Function(g) => {
                        let name = g.name.clone();
                        for dep in g_deps(p, &name, memo) {
                            push_unique(out, &dep);
                        }
                    }
                }
            }
            for a in args {
                scan(p, a, out, memo);
            }
        }
        IrExpr::MatchIdx { arms } => {
            for (_, e) in arms {
                scan(p, e, out, memo);
            }
        }
    }
}

fn rewrite(
    p: &IrProgram,
    e: &IrExpr,
    map: &HashMap<&str, &str>,
    memo: &mut DepMemo,
) -> IrExpr {
    match e {
        IrExpr::Int(_) | IrExpr::Var(_) => e.clone(),
        IrExpr::Let { name, value, body } => IrExpr::Let {
            name: name.clone(),
            value: Box::new(rewrite(p, value, map, memo)),
            body: Box::new(rewrite(p, body, map, memo)),
        },
        IrExpr::Bin { op, lhs, rhs } => IrExpr::Bin {
            op: *op,
            lhs: Box::new(rewrite(p, lhs, map, memo)),
            rhs: Box::new(rewrite(p, rhs, map, memo)),
        },
        IrExpr::Ifz { cond, zero, nonzero } => IrExpr::Ifz {
            cond: Box::new(rewrite(p, cond, map, memo)),
            zero: Box::new(rewrite(p, zero, map, memo)),
            nonzero: Box::new(rewrite(p, nonzero, map, memo)),
        },
        IrExpr::Call {
            callee,
            indexed: false,
            args,
        } => IrExpr::Call {
            callee: callee.clone(),
            indexed: false,
            args: args.iter().map(|a| rewrite(p, a, map, memo)).collect(),
        },
        IrExpr::Call { callee, args, .. } => {
            let args2: Vec<IrExpr> = args.iter().map(|a| rewrite(p, a, map, memo)).collect();
            let eliminate = match p.resolve(callee).expect("bound callee") {
                Callee::Extern(_) => None,
                Callee::Function(g) if g.attr == Attribute::Specialize => None,
                Callee::Function(g) => Some(g.name.clone()),
            };
            match eliminate {
                None => IrExpr::Call {
                    callee: map[callee.as_str()].to_string(),
                    indexed: false,
                    args: args2,
                },
                Some(name) => {
                    let mut new_args: Vec<IrExpr> = g_deps(p, &name, memo)
                        .iter()
                        .map(|d| IrExpr::Var(map[d.as_str()].to_string()))
                        .collect();
                    new_args.extend(args2);
                    IrExpr::Call {
                        callee: format!("mk_{name}"),
                        indexed: true,
                        args: new_args,
                    }
                }
            }
        }
        IrExpr::MatchIdx { arms } => IrExpr::MatchIdx {
            arms: arms
                .iter()
                .map(|(s, e)| (s.clone(), rewrite(p, e, map, memo)))
                .collect(),
        },
    }
}
