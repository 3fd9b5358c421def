//! The Retreet traversal language: syntax, parsing, restriction checks,
//! normalization, and the canonical printer.

pub mod ast;
mod lex;
mod normalize;
mod parse;
mod pretty;
pub mod validate;

use std::fmt;

pub use ast::*;
pub use normalize::normalize;
pub use parse::parse_program;
pub use pretty::pretty_print;
pub use validate::{
    validate_normalized, validate_restrictions, validate_restrictions_with, ValidateOptions,
    Violation, ViolationKind,
};

#[derive(Debug, Clone)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone)]
pub struct NormalizeError {
    pub violation: Violation,
}

impl fmt::Display for NormalizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "normalization failed: {}", self.violation)
    }
}

impl std::error::Error for NormalizeError {}

/// Parse, validate, and normalize in one step; the form every analysis
/// module consumes.
pub fn load_program(src: &str) -> Result<Program, LoadError> {
    load_program_with(src, ValidateOptions::default())
}

pub fn load_program_with(src: &str, opts: ValidateOptions) -> Result<Program, LoadError> {
    let p = parse_program(src).map_err(LoadError::Parse)?;
    let violations = validate_restrictions_with(&p, opts);
    if !violations.is_empty() {
        return Err(LoadError::Invalid(violations));
    }
    normalize(&p).map_err(LoadError::Normalize)
}

#[derive(Debug)]
pub enum LoadError {
    Parse(ParseError),
    Invalid(Vec<Violation>),
    Normalize(NormalizeError),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Parse(e) => write!(f, "{}", e),
            LoadError::Invalid(vs) => {
                writeln!(f, "{} restriction violation(s):", vs.len())?;
                for v in vs {
                    writeln!(f, "  {}", v)?;
                }
                Ok(())
            }
            LoadError::Normalize(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for LoadError {}

/// The running example: mutually recursive odd/even layer counting with a
/// parallel Main. Used throughout the test suites.
#[cfg(any(test, feature = "testsrc"))]
pub const ODD_EVEN_SRC: &str = r#"
Odd(n) {
  if (n == nil) {
    return 0            // s0
  } else {
    ls = Even(n.l)      // s1
    rs = Even(n.r)      // s2
    return ls + rs + 1  // s3
  }
}

Even(n) {
  if (n == nil) {
    return 0            // s4
  } else {
    ls = Odd(n.l)       // s5
    rs = Odd(n.r)       // s6
    return ls + rs      // s7
  }
}

Main(n) {
  {
    o = Odd(n)          // s8
    ||
    e = Even(n)         // s9
  }
  return o, e           // s10
}
"#;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_even_parses_with_eleven_blocks() {
        let p = parse_program(ODD_EVEN_SRC).unwrap();
        assert_eq!(p.functions.len(), 3);
        assert_eq!(p.block_count(), 11);
        assert_eq!(p.function("Main").unwrap().return_arity, 2);
        assert_eq!(p.function("Odd").unwrap().return_arity, 1);
    }

    #[test]
    fn minimal_program_has_one_block() {
        let p = parse_program("Main(n) { return 0 }").unwrap();
        assert_eq!(p.functions.len(), 1);
        assert_eq!(p.block_count(), 1);
    }

    #[test]
    fn parse_error_carries_position() {
        let err = parse_program("Main(n) { return 0 +").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.col > 1);
    }

    #[test]
    fn odd_even_is_legal() {
        let p = parse_program(ODD_EVEN_SRC).unwrap();
        assert!(validate_restrictions(&p).is_empty());
    }

    #[test]
    fn direct_self_call_is_flagged() {
        let p = parse_program("A(n) { x = A(n) } Main(n) { y = A(n) }").unwrap();
        let vs = validate_restrictions(&p);
        assert!(vs.iter().any(|v| v.kind == ViolationKind::SelfCall), "{:?}", vs);
    }

    #[test]
    fn mutual_same_node_cycle_is_flagged_at_both_calls() {
        let src = "A(n) { x = B(n) } B(n) { y = A(n) } Main(n) { z = A(n) }";
        let p = parse_program(src).unwrap();
        let vs = validate_restrictions_with(
            &p,
            ValidateOptions { allow_same_node_calls: true, ..Default::default() },
        );
        let selfcalls: Vec<_> =
            vs.iter().filter(|v| v.kind == ViolationKind::SelfCall).collect();
        assert_eq!(selfcalls.len(), 2, "{:?}", vs);
    }

    #[test]
    fn descending_recursion_is_not_a_self_call() {
        let src = "Main(n) { if (n == nil) { return 0 } else { x = Main(n.l) return x + 1 } }";
        let p = parse_program(src).unwrap();
        let vs = validate_restrictions(&p);
        assert!(vs.is_empty(), "{:?}", vs);
    }

    #[test]
    fn tree_mutation_is_flagged() {
        let src = "Main(n) { if (n == nil) { return 0 } else { n.l = n.r return 0 } }";
        let p = parse_program(src).unwrap();
        let vs = validate_restrictions(&p);
        assert!(vs.iter().any(|v| v.kind == ViolationKind::TreeMutation), "{:?}", vs);
    }

    #[test]
    fn deep_loc_paths_are_linted_by_default() {
        let src = "A(n) { if (n == nil) { return 0 } else { x = A(n.l.r) return x } } Main(n) { y = A(n) }";
        let p = parse_program(src).unwrap();
        let vs = validate_restrictions(&p);
        assert!(vs.iter().any(|v| v.kind == ViolationKind::DeepLocPath));
        let vs2 = validate_restrictions_with(
            &p,
            ValidateOptions { allow_deep_paths: true, ..Default::default() },
        );
        assert!(!vs2.iter().any(|v| v.kind == ViolationKind::DeepLocPath));
    }

    #[test]
    fn same_node_call_outside_main_is_linted() {
        let src = "A(n) { if (n == nil) { return 0 } else { x = B(n) return x } }
                   B(n) { return 1 }
                   Main(n) { y = A(n) }";
        let p = parse_program(src).unwrap();
        let vs = validate_restrictions(&p);
        assert!(vs.iter().any(|v| v.kind == ViolationKind::SameNodeCall), "{:?}", vs);
    }

    #[test]
    fn unresolved_and_arity_violations() {
        let src = "Main(n) { x = Ghost(n) return x }";
        let p = parse_program(src).unwrap();
        assert!(validate_restrictions(&p)
            .iter()
            .any(|v| v.kind == ViolationKind::UnresolvedCall));

        let src2 = "A(n, k) { return k } Main(n) { x = A(n) return x }";
        let p2 = parse_program(src2).unwrap();
        assert!(validate_restrictions(&p2)
            .iter()
            .any(|v| v.kind == ViolationKind::ArityMismatch));
    }

    #[test]
    fn normalize_is_identity_on_atomic_programs() {
        let p = parse_program(ODD_EVEN_SRC).unwrap();
        let n = normalize(&p).unwrap();
        assert_eq!(p, n);
    }

    #[test]
    fn conjunction_splits_into_nested_ifs() {
        let src = "Main(n) { if (!(n == nil) && n.v > 0) { x = 1 } else { x = 2 } return x }";
        let p = parse_program(src).unwrap();
        let n = normalize(&p).unwrap();
        // outer if on the nil test with swapped branches, inner if on n.v > 0,
        // and the else-branch body duplicated
        let body = &n.main().unwrap().body;
        let Stmt::Seq(first, _) = body else { panic!("expected seq, got {:?}", body) };
        let Stmt::If { cond, then, els, .. } = first.as_ref() else {
            panic!("expected if, got {:?}", first)
        };
        assert!(matches!(cond, BExpr::NilTest(_)));
        // then-branch of the nil test is the original else
        let Stmt::Block(Block::Straight(assgns)) = then.as_ref() else {
            panic!("expected straight block")
        };
        assert_eq!(assgns[0].rhs, AExpr::Const(2));
        let Stmt::If { cond: inner, els: inner_els, .. } = els.as_ref() else {
            panic!("expected nested if")
        };
        assert!(matches!(inner, BExpr::Positive(_)));
        let Stmt::Block(Block::Straight(assgns2)) = inner_els.as_ref() else {
            panic!("expected straight block")
        };
        assert_eq!(assgns2[0].rhs, AExpr::Const(2));
    }

    #[test]
    fn missing_guard_is_a_normalize_error() {
        let src = "Main(n) { n.f = 1 return 0 }";
        let p = parse_program(src).unwrap();
        let err = normalize(&p).unwrap_err();
        assert_eq!(err.violation.kind, ViolationKind::UnguardedDeref);
    }

    #[test]
    fn guarded_deref_passes() {
        let src = "Main(n) { if (n == nil) { return 0 } else { n.f = 1 return n.f } }";
        let p = parse_program(src).unwrap();
        assert!(normalize(&p).is_ok());
    }

    #[test]
    fn round_trip_odd_even() {
        let p = parse_program(ODD_EVEN_SRC).unwrap();
        let printed = pretty_print(&p);
        let p2 = parse_program(&printed).unwrap();
        assert_eq!(p, p2, "printed:\n{}", printed);
    }

    #[test]
    fn round_trip_empty_main() {
        let p = parse_program("Main(n) { }").unwrap();
        let printed = pretty_print(&p);
        assert_eq!(printed.trim(), "Main(n) { }");
        assert_eq!(parse_program(&printed).unwrap(), p);
    }

    #[test]
    fn comparison_sugar_desugars_to_positive_form() {
        let src = "Main(n) { if (n == nil) { return 0 } else { if (n.f < n.g) { return 1 } else { return 2 } } }";
        let p = parse_program(src).unwrap();
        let printed = pretty_print(&p);
        assert!(printed.contains("n.g - n.f > 0"), "{}", printed);
        assert_eq!(parse_program(&printed).unwrap(), p);
    }

    #[test]
    fn multi_loc_param_usage_is_flagged() {
        let src = "A(n, m) { x = B(m) return x } B(n) { return 1 } Main(n) { z = A(n, 0) return z }";
        let p = parse_program(src).unwrap();
        let vs = validate_restrictions_with(
            &p,
            ValidateOptions { allow_same_node_calls: true, ..Default::default() },
        );
        assert!(vs.iter().any(|v| v.kind == ViolationKind::MultiLocParam), "{:?}", vs);
    }
}
