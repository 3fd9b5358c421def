//! Dependence analysis and transformation checking for recursive tree
//! traversals.
//!
//! Programs are written in Retreet, a small imperative language in which
//! every function walks a binary tree downward (one `Loc` parameter, no
//! same-node recursion, no topology mutation). Executions decompose into
//! *iterations* — one straight-line block running on one node — and the
//! toolkit answers two questions about them:
//!
//! * **data-race freeness** of a program with parallel statements, and
//! * **equivalence** of two programs built from the same straight-line
//!   blocks (fusion and parallelization transformations).
//!
//! Both are decided by abstracting call stacks into *configurations*,
//! encoding them as monadic second-order logic over the infinite binary
//! tree, and handing the sentence to a WS2S solver (the bundled
//! `ws2s-solve` engine or an external binary). Every verdict can be
//! cross-checked by a bounded concrete interpreter that enumerates block
//! interleavings on small trees.

pub mod bisim;
pub mod blocks;
pub mod cli;
pub mod corpus;
pub mod formula;
pub mod lang;
pub mod logic;
pub mod mso;
pub mod oracle;
pub mod report;
pub mod semantics;
