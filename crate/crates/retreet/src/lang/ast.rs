//! Syntax trees for the Retreet traversal language.

use std::fmt;

/// Byte range into the source text. Spans never participate in equality;
/// two parses of differently formatted but identical programs compare equal.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub lo: u32,
    pub hi: u32,
}

impl Span {
    pub fn new(lo: u32, hi: u32) -> Self {
        Span { lo, hi }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }
}

/// Pointer direction on the binary heap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    Left,
    Right,
}

impl Dir {
    pub fn field_name(self) -> &'static str {
        match self {
            Dir::Left => "l",
            Dir::Right => "r",
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.field_name())
    }
}

/// A location expression: a variable followed by a pointer path.
/// In a legal program the variable is the function's Loc parameter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LExpr {
    pub var: String,
    pub steps: Vec<Dir>,
}

impl LExpr {
    pub fn var(name: &str) -> Self {
        LExpr { var: name.to_string(), steps: Vec::new() }
    }

    pub fn child(name: &str, dir: Dir) -> Self {
        LExpr { var: name.to_string(), steps: vec![dir] }
    }
}

impl fmt::Display for LExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.var)?;
        for d in &self.steps {
            write!(f, ".{}", d)?;
        }
        Ok(())
    }
}

/// Integer expression. Literals other than 0/1 are accepted as sugar for
/// repeated addition; linearity is forced by the grammar either way.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AExpr {
    Const(i64),
    /// Field read `le.f` where `f` is an Int field.
    Field(LExpr, String),
    Var(String),
    Add(Box<AExpr>, Box<AExpr>),
    Sub(Box<AExpr>, Box<AExpr>),
}

impl AExpr {
    pub fn field(le: LExpr, name: &str) -> Self {
        AExpr::Field(le, name.to_string())
    }

    pub fn var(name: &str) -> Self {
        AExpr::Var(name.to_string())
    }
}

impl fmt::Display for AExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AExpr::Const(c) => write!(f, "{}", c),
            AExpr::Field(le, name) => write!(f, "{}.{}", le, name),
            AExpr::Var(v) => write!(f, "{}", v),
            AExpr::Add(a, b) => write!(f, "{} + {}", a, paren_sub(b)),
            AExpr::Sub(a, b) => write!(f, "{} - {}", a, paren_sub(b)),
        }
    }
}

fn paren_sub(e: &AExpr) -> String {
    match e {
        AExpr::Add(..) | AExpr::Sub(..) => format!("({})", e),
        _ => format!("{}", e),
    }
}

/// Boolean expression. Normalization reduces these to the two atomic forms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BExpr {
    /// `le == nil`
    NilTest(LExpr),
    True,
    /// `ae > 0`
    Positive(AExpr),
    Not(Box<BExpr>),
    And(Box<BExpr>, Box<BExpr>),
}

impl BExpr {
    pub fn is_atomic(&self) -> bool {
        matches!(self, BExpr::NilTest(_) | BExpr::Positive(_) | BExpr::True)
    }
}

impl fmt::Display for BExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BExpr::NilTest(le) => write!(f, "{} == nil", le),
            BExpr::True => write!(f, "true"),
            BExpr::Positive(ae) => write!(f, "{} > 0", ae),
            BExpr::Not(b) => write!(f, "!({})", b),
            BExpr::And(a, b) => write!(f, "({}) && ({})", a, b),
        }
    }
}

/// Assignment target.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Lhs {
    /// `le.f = …` — writes an Int field (writing `l`/`r` is tree mutation
    /// and is rejected by validation).
    Field(LExpr, String),
    Var(String),
    /// Return slot `k` of the enclosing function; surface syntax is
    /// `return e0, …, ek`.
    Ret(usize),
}

impl fmt::Display for Lhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lhs::Field(le, name) => write!(f, "{}.{}", le, name),
            Lhs::Var(v) => write!(f, "{}", v),
            Lhs::Ret(k) => write!(f, "ret{}", k),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Assgn {
    pub lhs: Lhs,
    pub rhs: AExpr,
    pub span: Span,
}

impl PartialEq for Assgn {
    fn eq(&self, other: &Self) -> bool {
        self.lhs == other.lhs && self.rhs == other.rhs
    }
}
impl Eq for Assgn {}

/// Atomic unit of execution: a call or a maximal straight-line run.
#[derive(Debug, Clone)]
pub enum Block {
    Call {
        results: Vec<String>,
        callee: String,
        loc_arg: LExpr,
        int_args: Vec<AExpr>,
        span: Span,
    },
    Straight(Vec<Assgn>),
}

impl PartialEq for Block {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Block::Straight(a), Block::Straight(b)) => a == b,
            (
                Block::Call { results: r1, callee: c1, loc_arg: l1, int_args: a1, .. },
                Block::Call { results: r2, callee: c2, loc_arg: l2, int_args: a2, .. },
            ) => r1 == r2 && c1 == c2 && l1 == l2 && a1 == a2,
            _ => false,
        }
    }
}
impl Eq for Block {}

impl Block {
    pub fn span(&self) -> Span {
        match self {
            Block::Call { span, .. } => *span,
            Block::Straight(assgns) => assgns
                .iter()
                .map(|a| a.span)
                .reduce(Span::join)
                .unwrap_or_default(),
        }
    }

    pub fn is_call(&self) -> bool {
        matches!(self, Block::Call { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Block(Block),
    If {
        cond: BExpr,
        cond_span: SpanEq,
        then: Box<Stmt>,
        els: Box<Stmt>,
    },
    Seq(Box<Stmt>, Box<Stmt>),
    Par(Box<Stmt>, Box<Stmt>),
    Empty,
}

/// Span wrapper that compares equal to everything, so derived equality on
/// statements ignores source positions.
#[derive(Debug, Clone, Copy, Default)]
pub struct SpanEq(pub Span);

impl PartialEq for SpanEq {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}
impl Eq for SpanEq {}

impl Stmt {
    /// Right-nested sequence of the given statements, dropping Empty.
    pub fn seq(stmts: Vec<Stmt>) -> Stmt {
        let mut out = Stmt::Empty;
        for s in stmts.into_iter().rev() {
            if matches!(s, Stmt::Empty) {
                continue;
            }
            out = match out {
                Stmt::Empty => s,
                rest => Stmt::Seq(Box::new(s), Box::new(rest)),
            };
        }
        out
    }

    pub fn for_each_block<'a>(&'a self, f: &mut impl FnMut(&'a Block)) {
        match self {
            Stmt::Block(b) => f(b),
            Stmt::If { then, els, .. } => {
                then.for_each_block(f);
                els.for_each_block(f);
            }
            Stmt::Seq(a, b) | Stmt::Par(a, b) => {
                a.for_each_block(f);
                b.for_each_block(f);
            }
            Stmt::Empty => {}
        }
    }
}

#[derive(Debug, Clone)]
pub struct Function {
    pub name: String,
    pub loc_param: String,
    pub int_params: Vec<String>,
    pub body: Stmt,
    pub return_arity: usize,
    pub span: Span,
}

impl PartialEq for Function {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.loc_param == other.loc_param
            && self.int_params == other.int_params
            && self.body == other.body
            && self.return_arity == other.return_arity
    }
}
impl Eq for Function {}

pub const MAIN: &str = "Main";

/// A parsed program: functions in source order, entry fixed at `Main`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub functions: Vec<Function>,
}

impl Program {
    pub fn function(&self, name: &str) -> Option<&Function> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn main(&self) -> Option<&Function> {
        self.function(MAIN)
    }

    pub fn block_count(&self) -> usize {
        let mut n = 0;
        for f in &self.functions {
            f.body.for_each_block(&mut |_| n += 1);
        }
        n
    }

    /// All Int field names mentioned anywhere in the program, sorted.
    pub fn field_names(&self) -> Vec<String> {
        let mut out = std::collections::BTreeSet::new();
        for f in &self.functions {
            collect_fields_stmt(&f.body, &mut out);
        }
        out.into_iter().collect()
    }
}

fn collect_fields_stmt(s: &Stmt, out: &mut std::collections::BTreeSet<String>) {
    match s {
        Stmt::Block(Block::Straight(assgns)) => {
            for a in assgns {
                if let Lhs::Field(_, name) = &a.lhs {
                    out.insert(name.clone());
                }
                collect_fields_aexpr(&a.rhs, out);
            }
        }
        Stmt::Block(Block::Call { int_args, .. }) => {
            for e in int_args {
                collect_fields_aexpr(e, out);
            }
        }
        Stmt::If { cond, then, els, .. } => {
            collect_fields_bexpr(cond, out);
            collect_fields_stmt(then, out);
            collect_fields_stmt(els, out);
        }
        Stmt::Seq(a, b) | Stmt::Par(a, b) => {
            collect_fields_stmt(a, out);
            collect_fields_stmt(b, out);
        }
        Stmt::Empty => {}
    }
}

fn collect_fields_aexpr(e: &AExpr, out: &mut std::collections::BTreeSet<String>) {
    match e {
        AExpr::Field(_, name) => {
            out.insert(name.clone());
        }
        AExpr::Add(a, b) | AExpr::Sub(a, b) => {
            collect_fields_aexpr(a, out);
            collect_fields_aexpr(b, out);
        }
        _ => {}
    }
}

fn collect_fields_bexpr(b: &BExpr, out: &mut std::collections::BTreeSet<String>) {
    match b {
        BExpr::Positive(e) => collect_fields_aexpr(e, out),
        BExpr::Not(x) => collect_fields_bexpr(x, out),
        BExpr::And(x, y) => {
            collect_fields_bexpr(x, out);
            collect_fields_bexpr(y, out);
        }
        _ => {}
    }
}
