//! Call graph over top-level definitions.
//!
//! Nodes are functions and externs; edges are the syntactic calls in each
//! body, deduplicated in first-occurrence order. The topological order is
//! dependencies-first and breaks ties by declaration order, so downstream
//! passes emit deterministic output.

use crate::ast::{IrExpr, IrProgram};
use crate::error::SpecError;

#[derive(Debug)]
pub struct CallGraph {
    names: Vec<String>,
    edges: Vec<Vec<usize>>,
    topo: Vec<usize>,
}

/// Record callees of `e` in first-occurrence order. A call contributes its
/// callee before its arguments are scanned.
pub(crate) fn collect_callees(e: &IrExpr, out: &mut Vec<String>) {
    match e {
        IrExpr::Int(_) | IrExpr::Var(_) => {}
        IrExpr::Let { value, body, .. } => {
            collect_callees(value, out);
            collect_callees(body, out);
        }
        IrExpr::Bin { lhs, rhs, .. } => {
            collect_callees(lhs, out);
            collect_callees(rhs, out);
        }
        IrExpr::Ifz { cond, zero, nonzero } => {
            collect_callees(cond, out);
            collect_callees(zero, out);
            collect_callees(nonzero, out);
        }
        IrExpr::Call { callee, args, .. } => {
            if !out.iter().any(|c| c == callee) {
                out.push(callee.clone());
            }
            for a in args {
                collect_callees(a, out);
            }
        }
        IrExpr::MatchIdx { arms } => {
            for (_, e) in arms {
                collect_callees(e, out);
            }
        }
    }
}

pub fn build_call_graph(p: &IrProgram) -> Result<CallGraph, SpecError> {
    let names: Vec<String> = p
        .functions
        .iter()
        .map(|f| f.name.clone())
        .chain(p.externs.iter().map(|e| e.name.clone()))
        .collect();
    let index_of = |n: &str| names.iter().position(|x| x == n);
    let mut edges = vec![Vec::new(); names.len()];
    for f in &p.functions {
        let mut callees = Vec::new();
        collect_callees(&f.body, &mut callees);
        let fi = index_of(&f.name).unwrap();
        for c in callees {
            let ci = index_of(&c).ok_or(SpecError::UnboundCallee(c))?;
            edges[fi].push(ci);
        }
    }

    let n = names.len();
    let mut remaining = vec![true; n];
    let mut topo = Vec::with_capacity(n);
    for _ in 0..n {
        let ready = (0..n).find(|&i| remaining[i] && edges[i].iter().all(|&c| !remaining[c]));
        match ready {
            Some(i) => {
                remaining[i] = false;
                topo.push(i);
            }
            None => return Err(cycle_error(&names, &edges, &remaining)),
        }
    }
    Ok(CallGraph { names, edges, topo })
}

fn cycle_error(names: &[String], edges: &[Vec<usize>], remaining: &[bool]) -> SpecError {
    // Every remaining node has a remaining callee, so walking first
    // remaining callees must revisit a node; the loop slice is the cycle.
    let start = (0..names.len()).find(|&i| remaining[i]).unwrap();
    let mut path: Vec<usize> = Vec::new();
    let mut cur = start;
    loop {
        if let Some(pos) = path.iter().position(|&x| x == cur) {
            let members = path[pos..].iter().map(|&i| names[i].clone()).collect();
            return SpecError::CycleDetected { members };
        }
        path.push(cur);
        cur = *edges[cur].iter().find(|&&c| remaining[c]).unwrap();
    }
}

impl CallGraph {
    fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|x| x == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    pub fn callees(&self, name: &str) -> Vec<&str> {
        match self.index_of(name) {
            Some(i) => self.edges[i].iter().map(|&c| self.names[c].as_str()).collect(),
            None => Vec::new(),
        }
    }

    /// Dependencies-first order over every node.
    pub fn topo_order(&self) -> Vec<&str> {
        self.topo.iter().map(|&i| self.names[i].as_str()).collect()
    }

    pub fn edge_pairs(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::new();
        for (i, cs) in self.edges.iter().enumerate() {
            for &c in cs {
                out.push((self.names[i].as_str(), self.names[c].as_str()));
            }
        }
        out
    }

    /// Nodes reachable from `starts` (inclusive), preorder depth-first,
    /// following edges in first-occurrence order.
    pub fn reachable_from(&self, starts: &[&str]) -> Vec<&str> {
        let mut seen = vec![false; self.names.len()];
        let mut order = Vec::new();
        for s in starts {
            if let Some(i) = self.index_of(s) {
                self.dfs(i, &mut seen, &mut order);
            }
        }
        order.into_iter().map(|i| self.names[i].as_str()).collect()
    }

    fn dfs(&self, i: usize, seen: &mut [bool], out: &mut Vec<usize>) {
        if seen[i] {
            return;
        }
        seen[i] = true;
        out.push(i);
        for &c in &self.edges[i] {
            self.dfs(c, seen, out);
        }
    }
}
