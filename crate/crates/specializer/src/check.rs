//! Validators for the rewrite invariants.
//!
//! These inspect pipeline outputs after the fact: no residual genericity
//! in instantiated programs, functor dependency lists that nest as
//! subsets, and specialized call graphs that map back onto the original.
//! They return a description of the first violation found, so tests and
//! tools can assert on concrete evidence instead of re-deriving it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::ast::{Attribute, Callee, IrExpr, IrProgram};
use crate::functorize::g_deps;
use crate::graph::{build_call_graph, collect_callees};
use crate::instantiate::SpecializationRequest;

/// A fully specialized program has no index machinery left: no externs,
/// no indexed functions, no Eliminate attributes, no index matches, no
/// index-threading calls.
pub fn fully_specialized(p: &IrProgram) -> Result<(), String> {
    if let Some(e) = p.externs.first() {
        return Err(format!("extern {} survived specialization", e.name));
    }
    for f in &p.functions {
        if f.indexed {
            return Err(format!("{} still takes an index parameter", f.name));
        }
        if f.attr == Attribute::Eliminate {
            return Err(format!("{} is still marked eliminate", f.name));
        }
        no_index_machinery(&f.name, &f.body)?;
    }
    Ok(())
}

fn no_index_machinery(fname: &str, e: &IrExpr) -> Result<(), String> {
    match e {
        IrExpr::Int(_) | IrExpr::Var(_) => Ok(()),
        IrExpr::Let { value, body, .. } => {
            no_index_machinery(fname, value)?;
            no_index_machinery(fname, body)
        }
        IrExpr::Bin { lhs, rhs, .. } => {
            no_index_machinery(fname, lhs)?;
            no_index_machinery(fname, rhs)
        }
        IrExpr::Ifz { cond, zero, nonzero } => {
            no_index_machinery(fname, cond)?;
            no_index_machinery(fname, zero)?;
            no_index_machinery(fname, nonzero)
        }
        IrExpr::Call { callee, indexed, args } => {
            if *indexed {
                return Err(format!("{fname} still threads idx into {callee}"));
            }
            args.iter().try_for_each(|a| no_index_machinery(fname, a))
        }
        IrExpr::MatchIdx { .. } => Err(format!("{fname} still contains match-idx")),
    }
}

/// In a functorized program, the dependencies forwarded to an Eliminate
/// functor must be a subset of the enclosing functor's own dependency
/// parameters.
pub fn functor_dependencies_are_subsets(
    original: &IrProgram,
    functorized: &IrProgram,
) -> Result<(), String> {
    let mut memo = std::collections::HashMap::new();
    for f in original.functions.iter().filter(|f| f.indexed) {
        let mk_name = format!("mk_{}", f.name);
        let mk = functorized
            .function(&mk_name)
            .ok_or_else(|| format!("{mk_name} missing from functorized program"))?;
        let dep_count = g_deps(original, &f.name, &mut memo).len();
        if mk.params.len() != dep_count + f.params.len() {
            return Err(format!(
                "{mk_name} has {} parameters, expected {} dependencies + {} originals",
                mk.params.len(),
                dep_count,
                f.params.len()
            ));
        }
        let dep_params: BTreeSet<&str> =
            mk.params[..dep_count].iter().map(String::as_str).collect();
        check_forwarding(original, &mk_name, &mk.body, &dep_params, &mut memo)?;
    }
    Ok(())
}

fn check_forwarding(
    original: &IrProgram,
    in_fn: &str,
    e: &IrExpr,
    dep_params: &BTreeSet<&str>,
    memo: &mut std::collections::HashMap<String, Vec<String>>,
) -> Result<(), String> {
    match e {
        IrExpr::Int(_) | IrExpr::Var(_) => Ok(()),
        IrExpr::Let { value, body, .. } => {
            check_forwarding(original, in_fn, value, dep_params, memo)?;
            check_forwarding(original, in_fn, body, dep_params, memo)
        }
        IrExpr::Bin { lhs, rhs, .. } => {
            check_forwarding(original, in_fn, lhs, dep_params, memo)?;
            check_forwarding(original, in_fn, rhs, dep_params, memo)
        }
        IrExpr::Ifz { cond, zero, nonzero } => {
            check_forwarding(original, in_fn, cond, dep_params, memo)?;
            check_forwarding(original, in_fn, zero, dep_params, memo)?;
            check_forwarding(original, in_fn, nonzero, dep_params, memo)
        }
        IrExpr::Call { callee, indexed, args } => {
            if *indexed {
                let inner = callee
                    .strip_prefix("mk_")
                    .ok_or_else(|| format!("{in_fn}: indexed call to non-functor {callee}"))?;
                let forwarded = g_deps(original, inner, memo).len();
                for arg in args.iter().take(forwarded) {
                    let IrExpr::Var(name) = arg else {
                        return Err(format!(
                            "{in_fn}: dependency argument of {callee} is not a name"
                        ));
                    };
                    if !dep_params.contains(name.as_str()) {
                        return Err(format!(
                            "{in_fn}: forwards {name} to {callee}, which is not one of its own dependency parameters"
                        ));
                    }
                }
            }
            args.iter()
                .try_for_each(|a| check_forwarding(original, in_fn, a, dep_params, memo))
        }
        IrExpr::MatchIdx { arms } => arms
            .iter()
            .try_for_each(|(_, e)| check_forwarding(original, in_fn, e, dep_params, memo)),
    }
}

/// The specialized program must contain exactly the carried-over
/// non-indexed functions plus one mangled copy per reachable Specialize
/// node, non-indexed bodies must keep their call edges, and every call
/// a specialized copy makes must map back to a call the original could
/// make at that index value (through any chain of Eliminate bodies).
/// Argument expressions dropped by inlining mean a specialized body may
/// make fewer distinct calls than the original, never more. A
/// non-indexed entry point yields a verbatim copy under the mangled
/// name; its original is carried only while a caller or binding needs
/// it.
pub fn shape_preserved(
    p: &IrProgram,
    out: &IrProgram,
    req: &SpecializationRequest,
) -> Result<(), String> {
    let graph = build_call_graph(p).map_err(|e| e.to_string())?;
    let entries: Vec<&str> = req.entry_points.iter().map(String::as_str).collect();
    let reachable = graph.reachable_from(&entries);
    let spec_nodes: Vec<&str> = reachable
        .iter()
        .filter(|n| {
            matches!(p.resolve(n), Some(Callee::Function(f)) if f.indexed && f.attr == Attribute::Specialize)
        })
        .copied()
        .collect();
    let bindings: BTreeMap<&str, &str> = req
        .bindings
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    let mangle =
        |n: &str| -> String { format!("{n}_{}", req.suffix) };

    let plain_entries: BTreeSet<&str> = entries
        .iter()
        .filter(|n| {
            matches!(p.resolve(n), Some(Callee::Function(f)) if !f.indexed && f.attr == Attribute::Specialize)
        })
        .copied()
        .collect();
    let called: BTreeSet<&str> = graph.edge_pairs().into_iter().map(|(_, to)| to).collect();
    let bound: BTreeSet<&str> = reachable
        .iter()
        .filter(|n| matches!(p.resolve(n), Some(Callee::Extern(_))))
        .filter_map(|n| bindings.get(*n).copied())
        .collect();
    let carried = |name: &str| {
        !plain_entries.contains(name) || called.contains(name) || bound.contains(name)
    };

    let expected: BTreeSet<String> = p
        .functions
        .iter()
        .filter(|f| !f.indexed && carried(&f.name))
        .map(|f| f.name.clone())
        .chain(plain_entries.iter().map(|n| mangle(n)))
        .chain(spec_nodes.iter().map(|n| mangle(n)))
        .collect();
    let actual: BTreeSet<String> = out.functions.iter().map(|f| f.name.clone()).collect();
    if expected != actual {
        let mut msg = String::from("function sets differ;");
        for extra in actual.difference(&expected) {
            let _ = write!(msg, " unexpected {extra}");
        }
        for missing in expected.difference(&actual) {
            let _ = write!(msg, " missing {missing}");
        }
        return Err(msg);
    }

    for f in p.functions.iter().filter(|f| !f.indexed && carried(&f.name)) {
        let kept = out.function(&f.name).unwrap();
        if kept != f {
            return Err(format!("non-indexed {} was modified", f.name));
        }
    }
    for n in &plain_entries {
        let orig = p.function(n).unwrap();
        let copy = out.function(&mangle(n)).unwrap();
        if copy.params != orig.params || copy.body != orig.body {
            return Err(format!("{} does not match the body of {n}", mangle(n)));
        }
    }

    for n in &spec_nodes {
        let allowed: BTreeSet<String> = contracted_targets(p, n, &req.index_value)
            .into_iter()
            .map(|t| match p.resolve(&t).unwrap() {
                Callee::Extern(_) => bindings[t.as_str()].to_string(),
                Callee::Function(g) if g.indexed => mangle(&g.name),
                Callee::Function(g) => g.name.clone(),
            })
            .collect();
        let body = &out.function(&mangle(n)).unwrap().body;
        let mut calls = Vec::new();
        collect_callees(body, &mut calls);
        for c in &calls {
            if !allowed.contains(c) {
                return Err(format!(
                    "{} calls {c}, which does not map back to a call {n} could make",
                    mangle(n)
                ));
            }
        }
    }
    Ok(())
}

/// Non-Eliminate callees reachable from a function's body at one index
/// value, expanding Eliminate bodies in place. Argument expressions are
/// always scanned, so this over-approximates the surviving calls.
fn contracted_targets(p: &IrProgram, fname: &str, index_value: &str) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let f = p.function(fname).expect("known function");
    walk(p, &f.body, index_value, &mut out, 0);
    out
}

fn walk(p: &IrProgram, e: &IrExpr, index_value: &str, out: &mut BTreeSet<String>, depth: usize) {
    assert!(depth < 100, "eliminate chains must be acyclic");
    match e {
        IrExpr::Int(_) | IrExpr::Var(_) => {}
        IrExpr::Let { value, body, .. } => {
            walk(p, value, index_value, out, depth);
            walk(p, body, index_value, out, depth);
        }
        IrExpr::Bin { lhs, rhs, .. } => {
            walk(p, lhs, index_value, out, depth);
            walk(p, rhs, index_value, out, depth);
        }
        IrExpr::Ifz { cond, zero, nonzero } => {
            walk(p, cond, index_value, out, depth);
            walk(p, zero, index_value, out, depth);
            walk(p, nonzero, index_value, out, depth);
        }
        IrExpr::Call { callee, args, .. } => {
            match p.resolve(callee) {
                Some(Callee::Function(g)) if g.attr == Attribute::Eliminate => {
                    walk(p, &g.body, index_value, out, depth + 1);
                }
                _ => {
                    out.insert(callee.clone());
                }
            }
            for a in args {
                walk(p, a, index_value, out, depth);
            }
        }
        IrExpr::MatchIdx { arms } => {
            let (_, arm) = arms
                .iter()
                .find(|(s, _)| s == index_value)
                .expect("total index match");
            walk(p, arm, index_value, out, depth);
        }
    }
}
