//! Canonical text form.
//!
//! One top-level form per line, single spaces between tokens, attributes
//! always explicit. The same program always emits the same bytes, and
//! parsing the output reproduces the program structurally.

use crate::ast::{Attribute, IrExpr, IrFunction, IrProgram};

pub fn emit_ir(p: &IrProgram) -> String {
    let mut out = String::new();
    out.push_str("(index");
    for sym in &p.index {
        out.push(' ');
        out.push_str(sym);
    }
    out.push_str(")\n");
    for e in &p.externs {
        out.push_str(&format!(
            "(extern {} [{}] {})\n",
            e.name,
            Attribute::Specialize.token(),
            e.arity
        ));
    }
    for f in &p.functions {
        emit_fn(&mut out, f);
    }
    out
}

fn emit_fn(out: &mut String, f: &IrFunction) {
    out.push_str("(fn ");
    out.push_str(&f.name);
    out.push_str(" [");
    out.push_str(f.attr.token());
    out.push_str("] (");
    let mut sep = "";
    if f.indexed {
        out.push_str("idx");
        sep = " ";
    }
    for p in &f.params {
        out.push_str(sep);
        out.push_str(p);
        sep = " ";
    }
    out.push_str(") ");
    emit_expr(out, &f.body);
    out.push_str(")\n");
}

fn emit_expr(out: &mut String, e: &IrExpr) {
    match e {
        IrExpr::Int(v) => out.push_str(&v.to_string()),
        IrExpr::Var(name) => out.push_str(name),
        IrExpr::Let { name, value, body } => {
            out.push_str("(let ");
            out.push_str(name);
            out.push(' ');
            emit_expr(out, value);
            out.push(' ');
            emit_expr(out, body);
            out.push(')');
        }
        IrExpr::Bin { op, lhs, rhs } => {
            out.push('(');
            out.push_str(op.token());
            out.push(' ');
            emit_expr(out, lhs);
            out.push(' ');
            emit_expr(out, rhs);
            out.push(')');
        }
        IrExpr::Ifz { cond, zero, nonzero } => {
            out.push_str("(ifz ");
            emit_expr(out, cond);
            out.push(' ');
            emit_expr(out, zero);
            out.push(' ');
            emit_expr(out, nonzero);
            out.push(')');
        }
        IrExpr::Call { callee, indexed, args } => {
            out.push_str("(call ");
            out.push_str(callee);
            if *indexed {
                out.push_str(" idx");
            }
            for a in args {
                out.push(' ');
                emit_expr(out, a);
            }
            out.push(')');
        }
        IrExpr::MatchIdx { arms } => {
            out.push_str("(match-idx");
            for (sym, e) in arms {
                out.push_str(" (");
                out.push_str(sym);
                out.push(' ');
                emit_expr(out, e);
                out.push(')');
            }
            out.push(')');
        }
    }
}
