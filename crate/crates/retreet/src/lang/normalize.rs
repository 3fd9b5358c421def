//! Condition normalization: every `if` guard becomes one of the two atomic
//! forms. Conjunctions nest, negations swap branches, `true` selects the
//! then-branch.

use super::ast::*;
use super::validate::{validate_normalized, Violation};
use super::NormalizeError;

pub fn normalize(p: &Program) -> Result<Program, NormalizeError> {
    let functions = p
        .functions
        .iter()
        .map(|f| Function { body: norm_stmt(f.body.clone()), ..f.clone() })
        .collect();
    let out = Program { functions };
    let leftover: Vec<Violation> = validate_normalized(&out);
    if let Some(v) = leftover.first() {
        return Err(NormalizeError { violation: v.clone() });
    }
    Ok(out)
}

fn norm_stmt(s: Stmt) -> Stmt {
    match s {
        Stmt::If { cond, cond_span, then, els } => {
            norm_if(cond, cond_span, norm_stmt(*then), norm_stmt(*els))
        }
        Stmt::Seq(a, b) => join_seq(norm_stmt(*a), norm_stmt(*b)),
        Stmt::Par(a, b) => Stmt::Par(Box::new(norm_stmt(*a)), Box::new(norm_stmt(*b))),
        other => other,
    }
}

fn join_seq(a: Stmt, b: Stmt) -> Stmt {
    match (a, b) {
        (Stmt::Empty, b) => b,
        (a, Stmt::Empty) => a,
        // re-fuse straight runs that normalization may have exposed
        (Stmt::Block(Block::Straight(mut xs)), Stmt::Block(Block::Straight(ys))) => {
            xs.extend(ys);
            Stmt::Block(Block::Straight(xs))
        }
        (Stmt::Block(Block::Straight(mut xs)), Stmt::Seq(b1, b2)) => {
            if let Stmt::Block(Block::Straight(ys)) = *b1 {
                xs.extend(ys);
                Stmt::Seq(Box::new(Stmt::Block(Block::Straight(xs))), b2)
            } else {
                Stmt::Seq(Box::new(Stmt::Block(Block::Straight(xs))), Box::new(Stmt::Seq(b1, b2)))
            }
        }
        (a, b) => Stmt::Seq(Box::new(a), Box::new(b)),
    }
}

fn norm_if(cond: BExpr, cond_span: SpanEq, then: Stmt, els: Stmt) -> Stmt {
    match cond {
        BExpr::True => then,
        BExpr::Not(inner) => norm_if(*inner, cond_span, els, then),
        BExpr::And(a, b) => {
            let inner = norm_if(*b, cond_span, then, els.clone());
            norm_if(*a, cond_span, inner, els)
        }
        atomic => Stmt::If {
            cond: atomic,
            cond_span,
            then: Box::new(then),
            els: Box::new(els),
        },
    }
}
