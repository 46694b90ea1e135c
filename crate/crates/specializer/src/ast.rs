//! Syntax tree for the indexed IR.
//!
//! A program is an index declaration (the finite set of compile-time
//! dispatch symbols), a list of externs (abstract indexed leaves supplied
//! at instantiation time), and a list of functions. Names live in two
//! namespaces: call position resolves top-level definitions, value
//! position resolves parameters and lets.

use crate::error::SpecError;

/// How a definition participates in specialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attribute {
    /// Kept as a named unit; instantiation emits one copy per index value.
    Specialize,
    /// Dissolved during instantiation; never named in output programs.
    Eliminate,
}

impl Attribute {
    pub fn token(self) -> &'static str {
        match self {
            Attribute::Specialize => "specialize",
            Attribute::Eliminate => "eliminate",
        }
    }
}

/// Binary arithmetic operator. All arithmetic wraps in i64.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
}

impl BinOp {
    pub fn token(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IrExpr {
    Int(i64),
    /// Parameter or let-bound name.
    Var(String),
    Let {
        name: String,
        value: Box<IrExpr>,
        body: Box<IrExpr>,
    },
    Bin {
        op: BinOp,
        lhs: Box<IrExpr>,
        rhs: Box<IrExpr>,
    },
    /// `(ifz c z nz)`: z when c evaluates to 0, nz otherwise.
    Ifz {
        cond: Box<IrExpr>,
        zero: Box<IrExpr>,
        nonzero: Box<IrExpr>,
    },
    /// `indexed` records whether the call threads the ambient index as its
    /// first argument; `args` holds only the value arguments.
    Call {
        callee: String,
        indexed: bool,
        args: Vec<IrExpr>,
    },
    /// Total dispatch on the ambient index. Arms are kept in index
    /// declaration order.
    MatchIdx { arms: Vec<(String, IrExpr)> },
}

impl IrExpr {
    pub fn int(v: i64) -> IrExpr {
        IrExpr::Int(v)
    }

    pub fn var(name: &str) -> IrExpr {
        IrExpr::Var(name.to_string())
    }

    pub fn bin(op: BinOp, lhs: IrExpr, rhs: IrExpr) -> IrExpr {
        IrExpr::Bin {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrFunction {
    pub name: String,
    pub attr: Attribute,
    /// True when the source declares `idx` as the first parameter.
    pub indexed: bool,
    /// Value parameters, excluding the index parameter.
    pub params: Vec<String>,
    pub body: IrExpr,
}

/// Abstract leaf resolved by a binding at instantiation time. Externs are
/// always indexed and always Specialize.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternDecl {
    pub name: String,
    /// Value-argument count, excluding the index argument.
    pub arity: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IrProgram {
    pub index: Vec<String>,
    pub externs: Vec<ExternDecl>,
    pub functions: Vec<IrFunction>,
}

/// A resolved top-level callee.
#[derive(Debug, Clone, Copy)]
pub enum Callee<'a> {
    Function(&'a IrFunction),
    Extern(&'a ExternDecl),
}

impl<'a> Callee<'a> {
    pub fn name(&self) -> &'a str {
        match self {
            Callee::Function(f) => &f.name,
            Callee::Extern(e) => &e.name,
        }
    }

    pub fn indexed(&self) -> bool {
        match self {
            Callee::Function(f) => f.indexed,
            Callee::Extern(_) => true,
        }
    }

    /// Value-argument count expected at call sites.
    pub fn arity(&self) -> usize {
        match self {
            Callee::Function(f) => f.params.len(),
            Callee::Extern(e) => e.arity,
        }
    }

    pub fn attr(&self) -> Attribute {
        match self {
            Callee::Function(f) => f.attr,
            Callee::Extern(_) => Attribute::Specialize,
        }
    }
}

impl IrProgram {
    pub fn function(&self, name: &str) -> Option<&IrFunction> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn extern_decl(&self, name: &str) -> Option<&ExternDecl> {
        self.externs.iter().find(|e| e.name == name)
    }

    pub fn resolve(&self, name: &str) -> Option<Callee<'_>> {
        if let Some(f) = self.function(name) {
            return Some(Callee::Function(f));
        }
        self.extern_decl(name).map(Callee::Extern)
    }

    pub fn top_level_names(&self) -> impl Iterator<Item = &str> {
        self.externs
            .iter()
            .map(|e| e.name.as_str())
            .chain(self.functions.iter().map(|f| f.name.as_str()))
    }

    /// Structural union of two programs. Index symbol lists are unioned in
    /// order of first appearance. Same-named definitions must be
    /// structurally equal; any disagreement is a name conflict.
    pub fn merge(mut self, other: IrProgram) -> Result<IrProgram, SpecError> {
        for sym in other.index {
            if !self.index.contains(&sym) {
                self.index.push(sym);
            }
        }
        for e in other.externs {
            match self.resolve(&e.name) {
                None => self.externs.push(e),
                Some(Callee::Extern(have)) if *have == e => {}
                Some(_) => return Err(SpecError::DuplicateName(e.name)),
            }
        }
        for f in other.functions {
            match self.resolve(&f.name) {
                None => self.functions.push(f),
                Some(Callee::Function(have)) if *have == f => {}
                Some(_) => return Err(SpecError::DuplicateName(f.name)),
            }
        }
        Ok(self)
    }
}
