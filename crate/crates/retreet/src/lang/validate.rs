//! Restriction checks for parsed programs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::ast::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    SelfCall,
    MultiLocParam,
    NonAtomicCond,
    UnguardedDeref,
    TreeMutation,
    UnresolvedCall,
    ArityMismatch,
    DeepLocPath,
    SameNodeCall,
    MissingMain,
    DuplicateFunction,
    EmptyParBranch,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::SelfCall => "SelfCall",
            ViolationKind::MultiLocParam => "MultiLocParam",
            ViolationKind::NonAtomicCond => "NonAtomicCond",
            ViolationKind::UnguardedDeref => "UnguardedDeref",
            ViolationKind::TreeMutation => "TreeMutation",
            ViolationKind::UnresolvedCall => "UnresolvedCall",
            ViolationKind::ArityMismatch => "ArityMismatch",
            ViolationKind::DeepLocPath => "DeepLocPath",
            ViolationKind::SameNodeCall => "SameNodeCall",
            ViolationKind::MissingMain => "MissingMain",
            ViolationKind::DuplicateFunction => "DuplicateFunction",
            ViolationKind::EmptyParBranch => "EmptyParBranch",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub kind: ViolationKind,
    pub span: Span,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ValidateOptions {
    /// Accept call locations deeper than one step (`n.l.r`).
    pub allow_deep_paths: bool,
    /// Accept same-node calls (`f(n)`) outside Main.
    pub allow_same_node_calls: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { allow_deep_paths: false, allow_same_node_calls: false }
    }
}

pub fn validate_restrictions(p: &Program) -> Vec<Violation> {
    validate_restrictions_with(p, ValidateOptions::default())
}

pub fn validate_restrictions_with(p: &Program, opts: ValidateOptions) -> Vec<Violation> {
    let mut out = Vec::new();

    if p.main().is_none() {
        out.push(Violation {
            kind: ViolationKind::MissingMain,
            span: Span::default(),
            message: "program has no Main function".to_string(),
        });
    }
    let mut seen = BTreeSet::new();
    for f in &p.functions {
        if !seen.insert(f.name.clone()) {
            out.push(Violation {
                kind: ViolationKind::DuplicateFunction,
                span: f.span,
                message: format!("function {} is defined more than once", f.name),
            });
        }
    }

    let arities: BTreeMap<&str, (usize, usize)> = p
        .functions
        .iter()
        .map(|f| (f.name.as_str(), (f.return_arity, f.int_params.len())))
        .collect();

    // empty-displacement call graph for the self-call check
    let mut empty_edges: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();

    for f in &p.functions {
        check_stmt(p, f, &f.body, &arities, opts, &mut out, &mut empty_edges);
        check_par_branches(&f.body, &mut out);
    }

    // A call on the unchanged node is a self-call when it lies on a cycle of
    // empty-displacement edges: repeated inlining then reproduces g(n, ...).
    let cyclic = cyclic_nodes(&empty_edges);
    for f in &p.functions {
        f.body.for_each_block(&mut |b| {
            if let Block::Call { callee, loc_arg, span, .. } = b {
                if loc_arg.steps.is_empty()
                    && cyclic.contains(f.name.as_str())
                    && cyclic.contains(callee.as_str())
                    && same_scc(&empty_edges, &f.name, callee)
                {
                    out.push(Violation {
                        kind: ViolationKind::SelfCall,
                        span: *span,
                        message: format!(
                            "call to {} makes no progress down the tree (recursive on the same node)",
                            callee
                        ),
                    });
                }
            }
        });
    }

    out.sort_by_key(|v| (v.span.lo, v.kind));
    out
}

fn check_par_branches(s: &Stmt, out: &mut Vec<Violation>) {
    match s {
        Stmt::Par(a, b) => {
            for side in [a.as_ref(), b.as_ref()] {
                let mut n = 0;
                side.for_each_block(&mut |_| n += 1);
                if n == 0 {
                    out.push(Violation {
                        kind: ViolationKind::EmptyParBranch,
                        span: Span::default(),
                        message: "parallel branch contains no block".to_string(),
                    });
                }
            }
            check_par_branches(a, out);
            check_par_branches(b, out);
        }
        Stmt::Seq(a, b) => {
            check_par_branches(a, out);
            check_par_branches(b, out);
        }
        Stmt::If { then, els, .. } => {
            check_par_branches(then, out);
            check_par_branches(els, out);
        }
        _ => {}
    }
}

#[allow(clippy::too_many_arguments)]
fn check_stmt<'a>(
    p: &Program,
    f: &'a Function,
    s: &'a Stmt,
    arities: &BTreeMap<&str, (usize, usize)>,
    opts: ValidateOptions,
    out: &mut Vec<Violation>,
    empty_edges: &mut BTreeMap<&'a str, BTreeSet<&'a str>>,
) {
    match s {
        Stmt::Block(Block::Call { results, callee, loc_arg, int_args, span }) => {
            if loc_arg.var != f.loc_param {
                out.push(Violation {
                    kind: ViolationKind::MultiLocParam,
                    span: *span,
                    message: format!(
                        "call location must be rooted at the Loc parameter {}, found {}",
                        f.loc_param, loc_arg.var
                    ),
                });
            }
            if loc_arg.steps.len() > 1 && !opts.allow_deep_paths {
                out.push(Violation {
                    kind: ViolationKind::DeepLocPath,
                    span: *span,
                    message: format!(
                        "call location {} descends more than one level; rewrite with an intermediate function or pass --allow-deep-paths",
                        loc_arg
                    ),
                });
            }
            if loc_arg.steps.is_empty() && f.name != MAIN && !opts.allow_same_node_calls {
                out.push(Violation {
                    kind: ViolationKind::SameNodeCall,
                    span: *span,
                    message: format!(
                        "{} calls {} on its own node; same-node calls are only accepted in Main",
                        f.name, callee
                    ),
                });
            }
            match arities.get(callee.as_str()) {
                None => out.push(Violation {
                    kind: ViolationKind::UnresolvedCall,
                    span: *span,
                    message: format!("call target {} is not defined", callee),
                }),
                Some((ret_arity, int_arity)) => {
                    if results.len() != *ret_arity {
                        out.push(Violation {
                            kind: ViolationKind::ArityMismatch,
                            span: *span,
                            message: format!(
                                "{} returns {} value(s) but the call binds {}",
                                callee,
                                ret_arity,
                                results.len()
                            ),
                        });
                    }
                    if int_args.len() != *int_arity {
                        out.push(Violation {
                            kind: ViolationKind::ArityMismatch,
                            span: *span,
                            message: format!(
                                "{} takes {} Int argument(s) but the call passes {}",
                                callee,
                                int_arity,
                                int_args.len()
                            ),
                        });
                    }
                }
            }
            if loc_arg.steps.is_empty() && p.function(callee).is_some() {
                empty_edges.entry(&f.name).or_default().insert(callee);
            }
            for e in int_args {
                check_aexpr(f, e, *span, out);
            }
        }
        Stmt::Block(Block::Straight(assgns)) => {
            for a in assgns {
                match &a.lhs {
                    Lhs::Field(le, name) => {
                        if name == "l" || name == "r" {
                            out.push(Violation {
                                kind: ViolationKind::TreeMutation,
                                span: a.span,
                                message: format!(
                                    "writing pointer field {}.{} mutates the tree topology; simulate it with Int flag fields instead",
                                    le, name
                                ),
                            });
                        }
                        check_lexpr_base(f, le, a.span, out);
                    }
                    Lhs::Var(_) | Lhs::Ret(_) => {}
                }
                check_aexpr(f, &a.rhs, a.span, out);
            }
        }
        Stmt::If { cond, cond_span, then, els } => {
            check_bexpr(f, cond, cond_span.0, out);
            check_stmt(p, f, then, arities, opts, out, empty_edges);
            check_stmt(p, f, els, arities, opts, out, empty_edges);
        }
        Stmt::Seq(a, b) | Stmt::Par(a, b) => {
            check_stmt(p, f, a, arities, opts, out, empty_edges);
            check_stmt(p, f, b, arities, opts, out, empty_edges);
        }
        Stmt::Empty => {}
    }
}

fn check_lexpr_base(f: &Function, le: &LExpr, span: Span, out: &mut Vec<Violation>) {
    if le.var != f.loc_param && !f.int_params.contains(&le.var) {
        out.push(Violation {
            kind: ViolationKind::MultiLocParam,
            span,
            message: format!(
                "location {} is not rooted at the Loc parameter {}",
                le, f.loc_param
            ),
        });
    } else if le.var != f.loc_param {
        out.push(Violation {
            kind: ViolationKind::MultiLocParam,
            span,
            message: format!("Int parameter {} used as a location", le.var),
        });
    }
}

fn check_aexpr(f: &Function, e: &AExpr, span: Span, out: &mut Vec<Violation>) {
    match e {
        AExpr::Field(le, name) => {
            if name == "l" || name == "r" {
                out.push(Violation {
                    kind: ViolationKind::TreeMutation,
                    span,
                    message: format!(
                        "pointer field {}.{} read as an integer; pointers only appear in locations",
                        le, name
                    ),
                });
            }
            check_lexpr_base(f, le, span, out);
        }
        AExpr::Add(a, b) | AExpr::Sub(a, b) => {
            check_aexpr(f, a, span, out);
            check_aexpr(f, b, span, out);
        }
        _ => {}
    }
}

fn check_bexpr(f: &Function, b: &BExpr, span: Span, out: &mut Vec<Violation>) {
    match b {
        BExpr::NilTest(le) => check_lexpr_base(f, le, span, out),
        BExpr::Positive(e) => check_aexpr(f, e, span, out),
        BExpr::Not(x) => check_bexpr(f, x, span, out),
        BExpr::And(x, y) => {
            check_bexpr(f, x, span, out);
            check_bexpr(f, y, span, out);
        }
        BExpr::True => {}
    }
}

fn cyclic_nodes<'a>(edges: &BTreeMap<&'a str, BTreeSet<&'a str>>) -> BTreeSet<&'a str> {
    // a node is "cyclic" when it can reach itself through empty edges
    let mut out = BTreeSet::new();
    for &start in edges.keys() {
        let mut stack = vec![start];
        let mut seen = BTreeSet::new();
        while let Some(n) = stack.pop() {
            if let Some(succs) = edges.get(n) {
                for &m in succs {
                    if m == start {
                        out.insert(start);
                    }
                    if seen.insert(m) {
                        stack.push(m);
                    }
                }
            }
        }
    }
    out
}

fn same_scc(edges: &BTreeMap<&str, BTreeSet<&str>>, a: &str, b: &str) -> bool {
    a == b || (reaches(edges, a, b) && reaches(edges, b, a))
}

fn reaches(edges: &BTreeMap<&str, BTreeSet<&str>>, from: &str, to: &str) -> bool {
    let mut stack = vec![from];
    let mut seen = BTreeSet::new();
    while let Some(n) = stack.pop() {
        if n == to {
            return true;
        }
        if let Some(succs) = edges.get(n) {
            for &m in succs {
                if seen.insert(m) {
                    stack.push(m);
                }
            }
        }
    }
    false
}

/// Post-normalization checks: atomic conditions and nil-guard dominance.
pub fn validate_normalized(p: &Program) -> Vec<Violation> {
    let mut out = Vec::new();
    for f in &p.functions {
        check_atomic(&f.body, &mut out);
        check_guards_stmt(&f.body, &mut Vec::new(), &mut out);
    }
    out.sort_by_key(|v| (v.span.lo, v.kind));
    out
}

fn check_atomic(s: &Stmt, out: &mut Vec<Violation>) {
    match s {
        Stmt::If { cond, cond_span, then, els } => {
            if !cond.is_atomic() {
                out.push(Violation {
                    kind: ViolationKind::NonAtomicCond,
                    span: cond_span.0,
                    message: format!("condition {} is not atomic", cond),
                });
            }
            check_atomic(then, out);
            check_atomic(els, out);
        }
        Stmt::Seq(a, b) | Stmt::Par(a, b) => {
            check_atomic(a, out);
            check_atomic(b, out);
        }
        _ => {}
    }
}

/// Paths known non-nil on the current control path, as (var, steps) pairs.
type Guards = Vec<LExpr>;

fn check_guards_stmt(s: &Stmt, guards: &mut Guards, out: &mut Vec<Violation>) {
    match s {
        Stmt::Block(Block::Call { loc_arg, int_args, span, .. }) => {
            require_proper_prefixes(loc_arg, guards, *span, out);
            for e in int_args {
                check_guards_aexpr(e, guards, *span, out);
            }
        }
        Stmt::Block(Block::Straight(assgns)) => {
            for a in assgns {
                if let Lhs::Field(le, _) = &a.lhs {
                    require_whole(le, guards, a.span, out);
                }
                check_guards_aexpr(&a.rhs, guards, a.span, out);
            }
        }
        Stmt::If { cond, cond_span, then, els } => {
            match cond {
                BExpr::NilTest(le) => {
                    require_proper_prefixes(le, guards, cond_span.0, out);
                    // then-branch: le is nil; else-branch: le is non-nil
                    let mut then_guards = guards.clone();
                    check_guards_stmt(then, &mut then_guards, out);
                    let mut else_guards = guards.clone();
                    else_guards.push(le.clone());
                    check_guards_stmt(els, &mut else_guards, out);
                }
                BExpr::Positive(e) => {
                    check_guards_aexpr(e, guards, cond_span.0, out);
                    let mut g1 = guards.clone();
                    check_guards_stmt(then, &mut g1, out);
                    let mut g2 = guards.clone();
                    check_guards_stmt(els, &mut g2, out);
                }
                _ => {
                    let mut g1 = guards.clone();
                    check_guards_stmt(then, &mut g1, out);
                    let mut g2 = guards.clone();
                    check_guards_stmt(els, &mut g2, out);
                }
            }
        }
        Stmt::Seq(a, b) => {
            check_guards_stmt(a, guards, out);
            check_guards_stmt(b, guards, out);
        }
        Stmt::Par(a, b) => {
            let mut g1 = guards.clone();
            check_guards_stmt(a, &mut g1, out);
            let mut g2 = guards.clone();
            check_guards_stmt(b, &mut g2, out);
        }
        Stmt::Empty => {}
    }
}

fn check_guards_aexpr(e: &AExpr, guards: &Guards, span: Span, out: &mut Vec<Violation>) {
    match e {
        AExpr::Field(le, _) => require_whole(le, guards, span, out),
        AExpr::Add(a, b) | AExpr::Sub(a, b) => {
            check_guards_aexpr(a, guards, span, out);
            check_guards_aexpr(b, guards, span, out);
        }
        _ => {}
    }
}

/// Every prefix of `le` including `le` itself must be guarded non-nil
/// (needed to read or write a field of the node `le` denotes).
fn require_whole(le: &LExpr, guards: &Guards, span: Span, out: &mut Vec<Violation>) {
    for k in 0..=le.steps.len() {
        require_one(&prefix(le, k), guards, span, out);
    }
}

/// Every proper prefix of `le` must be guarded non-nil (needed to evaluate
/// `le`, whose own value may legitimately be nil).
fn require_proper_prefixes(le: &LExpr, guards: &Guards, span: Span, out: &mut Vec<Violation>) {
    for k in 0..le.steps.len() {
        require_one(&prefix(le, k), guards, span, out);
    }
}

fn prefix(le: &LExpr, k: usize) -> LExpr {
    LExpr { var: le.var.clone(), steps: le.steps[..k].to_vec() }
}

fn require_one(le: &LExpr, guards: &Guards, span: Span, out: &mut Vec<Violation>) {
    if !guards.contains(le) {
        out.push(Violation {
            kind: ViolationKind::UnguardedDeref,
            span,
            message: format!("{} is dereferenced without a dominating non-nil guard", le),
        });
    }
}
