//! Apply a specialization request.
//!
//! For one index value and a set of extern bindings, every indexed
//! Specialize function reachable from the entry points is emitted as a
//! non-indexed copy named <fn>_<suffix>, with index matches reduced to
//! the chosen arm, calls routed to sibling copies or bound
//! implementations, and Eliminate functions inlined away by
//! capture-avoiding substitution. Only redexes introduced by that
//! substitution are reduced; everything else keeps its shape.
//!
//! The output carries an empty index declaration and no externs: it is a
//! complete, non-indexed program. Non-indexed functions of the input are
//! carried over unchanged, so bound implementations stay available. A
//! non-indexed Specialize function used as an entry point is copied
//! verbatim under the mangled name; its original is carried over only if
//! some caller or binding still needs it by the old name.

use std::collections::HashMap;

use crate::ast::{Attribute, Callee, IrExpr, IrFunction, IrProgram};
use crate::error::SpecError;
use crate::functorize::{functorize, g_deps};
use crate::graph::build_call_graph;

#[derive(Debug, Clone)]
pub struct SpecializationRequest {
    /// Indexed Specialize functions to produce copies of. Duplicates are
    /// ignored.
    pub entry_points: Vec<String>,
    /// Symbol from the program's index declaration.
    pub index_value: String,
    /// Extern name to the non-indexed implementation function replacing
    /// it. Must cover every extern reachable from the entry points;
    /// bindings for unreachable externs are ignored.
    pub bindings: Vec<(String, String)>,
    /// Appended to each emitted copy: f becomes f_<suffix>. Must be
    /// non-empty and alphanumeric/underscore; anything else is API misuse
    /// and panics.
    pub suffix: String,
}

pub fn instantiate(p: &IrProgram, req: &SpecializationRequest) -> Result<IrProgram, SpecError> {
    assert!(
        !req.suffix.is_empty()
            && req
                .suffix
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_'),
        "suffix must be non-empty alphanumeric/underscore"
    );
    if !p.index.contains(&req.index_value) {
        return Err(SpecError::UnknownIndexSymbol(req.index_value.clone()));
    }
    let graph = build_call_graph(p)?;
    let fz = functorize(p)?;

    let mut entries: Vec<&str> = Vec::new();
    let mut plain_entries: Vec<&str> = Vec::new();
    for e in &req.entry_points {
        match p.resolve(e) {
            Some(Callee::Function(f)) if f.attr == Attribute::Specialize => {
                let bucket = if f.indexed {
                    &mut entries
                } else {
                    &mut plain_entries
                };
                if !bucket.contains(&f.name.as_str()) {
                    bucket.push(&f.name);
                }
            }
            Some(_) => {
                return Err(SpecError::UnboundName(format!(
                    "{e} is not a specialize function"
                )))
            }
            None => return Err(SpecError::UnboundName(e.clone())),
        }
    }

    let all_entries: Vec<&str> = entries.iter().chain(&plain_entries).copied().collect();
    let reachable = graph.reachable_from(&all_entries);
    let bindings: HashMap<&str, &str> = req
        .bindings
        .iter()
        .map(|(k, v)| (k.as_str(), v.as_str()))
        .collect();
    let mut bound_targets: Vec<&str> = Vec::new();
    for name in &reachable {
        let Some(Callee::Extern(ext)) = p.resolve(name) else {
            continue;
        };
        let Some(target) = bindings.get(name) else {
            return Err(SpecError::UnboundExtern(ext.name.clone()));
        };
        match p.function(target) {
            Some(f) if !f.indexed => {
                if f.params.len() != ext.arity {
                    return Err(SpecError::ArityMismatch {
                        name: f.name.clone(),
                        expected: ext.arity,
                        got: f.params.len(),
                    });
                }
                bound_targets.push(target);
            }
            _ => {
                return Err(SpecError::UnboundExtern(format!(
                    "{target} (binding for {name})"
                )))
            }
        }
    }

    // Mangle reachable Specialize nodes, dependencies first.
    let spec_nodes: Vec<&str> = graph
        .topo_order()
        .into_iter()
        .filter(|n| reachable.contains(n))
        .filter(|n| {
            matches!(p.resolve(n), Some(Callee::Function(f)) if f.indexed && f.attr == Attribute::Specialize)
        })
        .collect();
    let mut mangles: HashMap<String, String> = HashMap::new();
    for n in spec_nodes.iter().chain(&plain_entries) {
        let mangled = format!("{n}_{}", req.suffix);
        if p.resolve(&mangled).is_some() {
            return Err(SpecError::NameCollision(mangled));
        }
        mangles.insert(n.to_string(), mangled);
    }

    let mut avoid: Vec<String> = p.top_level_names().map(String::from).collect();
    avoid.extend(mangles.values().cloned());
    let mut spec = Spec {
        p,
        fz: &fz,
        index_value: &req.index_value,
        memo: HashMap::new(),
        mangles: &mangles,
        bindings: &bindings,
        avoid,
        fresh: 0,
    };

    let called: Vec<&str> = graph.edge_pairs().into_iter().map(|(_, to)| to).collect();
    let mut functions: Vec<IrFunction> = p
        .functions
        .iter()
        .filter(|f| !f.indexed)
        .filter(|f| {
            let name = f.name.as_str();
            !plain_entries.contains(&name)
                || called.contains(&name)
                || bound_targets.contains(&name)
        })
        .cloned()
        .collect();
    for n in &plain_entries {
        let orig = p.function(n).unwrap();
        functions.push(IrFunction {
            name: mangles[*n].clone(),
            attr: Attribute::Specialize,
            indexed: false,
            params: orig.params.clone(),
            body: orig.body.clone(),
        });
    }
    for n in &spec_nodes {
        let orig = p.function(n).unwrap();
        let mk = fz.function(&format!("mk_{n}")).unwrap();
        let deps = g_deps(p, n, &mut spec.memo);
        let cenv: HashMap<String, String> = deps
            .iter()
            .enumerate()
            .map(|(i, d)| (mk.params[i].clone(), spec.concrete(d)))
            .collect();
        let body = spec.expr(&mk.body, &cenv);
        functions.push(IrFunction {
            name: mangles[*n].clone(),
            attr: Attribute::Specialize,
            indexed: false,
            params: orig.params.clone(),
            body,
        });
    }
    Ok(IrProgram {
        index: Vec::new(),
        externs: Vec::new(),
        functions,
    })
}

struct Spec<'a> {
    p: &'a IrProgram,
    fz: &'a IrProgram,
    index_value: &'a str,
    memo: HashMap<String, Vec<String>>,
    mangles: &'a HashMap<String, String>,
    bindings: &'a HashMap<&'a str, &'a str>,
    avoid: Vec<String>,
    fresh: u32,
}

impl Spec<'_> {
    /// Concrete output name standing in for a Specialize dependency.
    fn concrete(&self, dep: &str) -> String {
        match self.p.resolve(dep).expect("known dependency") {
            Callee::Extern(e) => self.bindings[e.name.as_str()].to_string(),
            Callee::Function(f) => self.mangles[f.name.as_str()].clone(),
        }
    }

    /// Specialize a functorized body. `cenv` maps the enclosing functor's
    /// dependency parameters to concrete output names.
    fn expr(&mut self, e: &IrExpr, cenv: &HashMap<String, String>) -> IrExpr {
        match e {
            IrExpr::Int(_) | IrExpr::Var(_) => e.clone(),
            IrExpr::Let { name, value, body } => IrExpr::Let {
                name: name.clone(),
                value: Box::new(self.expr(value, cenv)),
                body: Box::new(self.expr(body, cenv)),
            },
            IrExpr::Bin { op, lhs, rhs } => IrExpr::Bin {
                op: *op,
                lhs: Box::new(self.expr(lhs, cenv)),
                rhs: Box::new(self.expr(rhs, cenv)),
            },
            IrExpr::Ifz { cond, zero, nonzero } => IrExpr::Ifz {
                cond: Box::new(self.expr(cond, cenv)),
                zero: Box::new(self.expr(zero, cenv)),
                nonzero: Box::new(self.expr(nonzero, cenv)),
            },
            IrExpr::MatchIdx { arms } => {
                let (_, arm) = arms
                    .iter()
                    .find(|(s, _)| s == self.index_value)
                    .expect("total index match");
                self.expr(arm, cenv)
            }
            IrExpr::Call {
                callee,
                indexed: false,
                args,
            } => {
                let args = args.iter().map(|a| self.expr(a, cenv)).collect();
                let callee = cenv.get(callee).unwrap_or(callee).clone();
                IrExpr::Call {
                    callee,
                    indexed: false,
                    args,
                }
            }
            // An indexed call in a functorized body always targets the
            // mk_ form of an Eliminate function: inline it.
            IrExpr::Call { callee, args, .. } => {
                let inner = callee.strip_prefix("mk_").expect("mk_ callee");
                let mk = self.fz.function(callee).expect("functorized callee");
                let dep_count = g_deps(self.p, inner, &mut self.memo).len();
                let inner_cenv: HashMap<String, String> = mk.params[..dep_count]
                    .iter()
                    .enumerate()
                    .map(|(i, param)| {
                        let IrExpr::Var(g) = &args[i] else {
                            panic!("dependency argument must be a name");
                        };
                        (param.clone(), cenv[g].clone())
                    })
                    .collect();
                let body = mk.body.clone();
                let inlined = self.expr(&body, &inner_cenv);
                let value_params = &mk.params[dep_count..];
                let mut env: HashMap<String, IrExpr> = HashMap::new();
                for (param, arg) in value_params.iter().zip(&args[dep_count..]) {
                    env.insert(param.clone(), self.expr(arg, cenv));
                }
                self.subst(&inlined, &env)
            }
        }
    }

    /// Capture-avoiding substitution of value parameters by argument
    /// expressions. Binders that would capture a free name of an
    /// argument are renamed first.
    fn subst(&mut self, e: &IrExpr, env: &HashMap<String, IrExpr>) -> IrExpr {
        if env.is_empty() {
            return e.clone();
        }
        match e {
            IrExpr::Int(_) => e.clone(),
            IrExpr::Var(n) => env.get(n).cloned().unwrap_or_else(|| e.clone()),
            IrExpr::Let { name, value, body } => {
                let value = Box::new(self.subst(value, env));
                let mut inner = env.clone();
                inner.remove(name);
                let captures = inner
                    .values()
                    .any(|arg| free_vars(arg).iter().any(|v| v == name));
                if captures {
                    let fresh = self.fresh_name(name, &inner);
                    let body = rename_free(body, name, &fresh);
                    IrExpr::Let {
                        name: fresh,
                        value,
                        body: Box::new(self.subst(&body, &inner)),
                    }
                } else {
                    IrExpr::Let {
                        name: name.clone(),
                        value,
                        body: Box::new(self.subst(body, &inner)),
                    }
                }
            }
            IrExpr::Bin { op, lhs, rhs } => IrExpr::Bin {
                op: *op,
                lhs: Box::new(self.subst(lhs, env)),
                rhs: Box::new(self.subst(rhs, env)),
            },
            IrExpr::Ifz { cond, zero, nonzero } => IrExpr::Ifz {
                cond: Box::new(self.subst(cond, env)),
                zero: Box::new(self.subst(zero, env)),
                nonzero: Box::new(self.subst(nonzero, env)),
            },
            IrExpr::Call { callee, indexed, args } => IrExpr::Call {
                callee: callee.clone(),
                indexed: *indexed,
                args: args.iter().map(|a| self.subst(a, env)).collect(),
            },
            IrExpr::MatchIdx { arms } => IrExpr::MatchIdx {
                arms: arms
                    .iter()
                    .map(|(s, e)| (s.clone(), self.subst(e, env)))
                    .collect(),
            },
        }
    }

    fn fresh_name(&mut self, base: &str, env: &HashMap<String, IrExpr>) -> String {
        loop {
            self.fresh += 1;
            let cand = format!("{base}_r{}", self.fresh);
            let clashes = self.avoid.contains(&cand)
                || env.contains_key(&cand)
                || env.values().any(|arg| free_vars(arg).contains(&cand));
            if !clashes {
                return cand;
            }
        }
    }
}

fn free_vars(e: &IrExpr) -> Vec<String> {
    fn walk(e: &IrExpr, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match e {
            IrExpr::Int(_) => {}
            IrExpr::Var(n) => {
                if !bound.contains(n) && !out.contains(n) {
                    out.push(n.clone());
                }
            }
            IrExpr::Let { name, value, body } => {
                walk(value, bound, out);
                bound.push(name.clone());
                walk(body, bound, out);
                bound.pop();
            }
            IrExpr::Bin { lhs, rhs, .. } => {
                walk(lhs, bound, out);
                walk(rhs, bound, out);
            }
            IrExpr::Ifz { cond, zero, nonzero } => {
                walk(cond, bound, out);
                walk(zero, bound, out);
                walk(nonzero, bound, out);
            }
            IrExpr::Call { args, .. } => {
                for a in args {
                    walk(a, bound, out);
                }
            }
            IrExpr::MatchIdx { arms } => {
                for (_, e) in arms {
                    walk(e, bound, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(e, &mut Vec::new(), &mut out);
    out
}

/// Rename free occurrences of a value variable.
fn rename_free(e: &IrExpr, from: &str, to: &str) -> IrExpr {
    match e {
        IrExpr::Int(_) => e.clone(),
        IrExpr::Var(n) => {
            if n == from {
                IrExpr::Var(to.to_string())
            } else {
                e.clone()
            }
        }
        IrExpr::Let { name, value, body } => {
            let value = Box::new(rename_free(value, from, to));
            let body = if name == from {
                body.clone()
            } else {
                Box::new(rename_free(body, from, to))
            };
            IrExpr::Let {
                name: name.clone(),
                value,
                body,
            }
        }
        IrExpr::Bin { op, lhs, rhs } => IrExpr::Bin {
            op: *op,
            lhs: Box::new(rename_free(lhs, from, to)),
            rhs: Box::new(rename_free(rhs, from, to)),
        },
        IrExpr::Ifz { cond, zero, nonzero } => IrExpr::Ifz {
            cond: Box::new(rename_free(cond, from, to)),
            zero: Box::new(rename_free(zero, from, to)),
            nonzero: Box::new(rename_free(nonzero, from, to)),
        },
        IrExpr::Call { callee, indexed, args } => IrExpr::Call {
            callee: callee.clone(),
            indexed: *indexed,
            args: args.iter().map(|a| rename_free(a, from, to)).collect(),
        },
        IrExpr::MatchIdx { arms } => IrExpr::MatchIdx {
            arms: arms
                .iter()
                .map(|(s, e)| (s.clone(), rename_free(e, from, to)))
                .collect(),
        },
    }
}
