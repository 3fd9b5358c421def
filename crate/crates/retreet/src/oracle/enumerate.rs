//! Exhaustive enumeration of small trees with field stores.

use std::fmt;

use crate::lang::ast::Dir;
use crate::oracle::tree::ConcreteTree;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    BudgetExceeded { produced: usize },
}

impl fmt::Display for EnumerateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnumerateError::BudgetExceeded { produced } => {
                write!(f, "tree enumeration budget exceeded after {} trees", produced)
            }
        }
    }
}

/// Every tree of height at most `max_height` whose fields take values from
/// `value_domain`, in a fixed deterministic order: shapes by size then
/// structure, field assignments in odometer order.
pub fn enumerate_trees(
    max_height: usize,
    value_domain: &[i64],
    fields: &[String],
    budget: usize,
) -> Result<Vec<ConcreteTree>, EnumerateError> {
    let shapes = shapes_of_height(max_height);
    let mut out = Vec::new();
    for shape in &shapes {
        let nodes = shape.node_ids().len();
        let slots = nodes * fields.len();
        if slots == 0 || value_domain.len() <= 1 {
            let mut t = shape.clone();
            if let Some(&v) = value_domain.first() {
                if v != 0 {
                    for id in t.node_ids() {
                        for f in fields {
                            t.set_field(id, f, v);
                        }
                    }
                }
            }
            out.push(t);
            if out.len() > budget {
                return Err(EnumerateError::BudgetExceeded { produced: out.len() });
            }
            continue;
        }
        let mut odometer = vec![0usize; slots];
        loop {
            let mut t = shape.clone();
            let ids = t.node_ids();
            for (i, id) in ids.iter().enumerate() {
                for (j, f) in fields.iter().enumerate() {
                    let v = value_domain[odometer[i * fields.len() + j]];
                    if v != 0 {
                        t.set_field(*id, f, v);
                    }
                }
            }
            out.push(t);
            if out.len() > budget {
                return Err(EnumerateError::BudgetExceeded { produced: out.len() });
            }
            // advance
            let mut k = 0;
            loop {
                if k == slots {
                    break;
                }
                odometer[k] += 1;
                if odometer[k] < value_domain.len() {
                    break;
                }
                odometer[k] = 0;
                k += 1;
            }
            if k == slots {
                break;
            }
        }
    }
    Ok(out)
}

/// Tree shapes of height <= h (fields all zero), smallest first.
fn shapes_of_height(h: usize) -> Vec<ConcreteTree> {
    if h == 0 {
        return vec![ConcreteTree::empty()];
    }
    let sub = shapes_of_height(h - 1);
    let mut out = vec![ConcreteTree::empty()];
    for left in &sub {
        for right in &sub {
            out.push(graft(left, right));
        }
    }
    // stable order: by node count, then by structure string
    out.sort_by_key(|t| (t.node_count(), structure_key(t)));
    out.dedup_by_key(|t| structure_key(t));
    out
}

fn structure_key(t: &ConcreteTree) -> String {
    fn rec(t: &ConcreteTree, n: Option<crate::oracle::tree::NodeId>, out: &mut String) {
        match n {
            None => out.push('_'),
            Some(id) => {
                out.push('(');
                rec(t, t.child(id, Dir::Left), out);
                rec(t, t.child(id, Dir::Right), out);
                out.push(')');
            }
        }
    }
    let mut s = String::new();
    rec(t, t.root(), &mut s);
    s
}

fn graft(left: &ConcreteTree, right: &ConcreteTree) -> ConcreteTree {
    fn copy(
        src: &ConcreteTree,
        from: Option<crate::oracle::tree::NodeId>,
        dst: &mut ConcreteTree,
    ) -> Option<crate::oracle::tree::NodeId> {
        let from = from?;
        let id = dst.add_node();
        if let Some(l) = copy(src, src.child(from, Dir::Left), dst) {
            dst.set_child(id, Dir::Left, l);
        }
        if let Some(r) = copy(src, src.child(from, Dir::Right), dst) {
            dst.set_child(id, Dir::Right, r);
        }
        Some(id)
    }
    let mut t = ConcreteTree::empty();
    let root = t.add_node();
    t.set_root(root);
    if let Some(l) = copy(left, left.root(), &mut t) {
        t.set_child(root, Dir::Left, l);
    }
    if let Some(r) = copy(right, right.root(), &mut t) {
        t.set_child(root, Dir::Right, r);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn height_zero_is_just_nil() {
        let ts = enumerate_trees(0, &[0], &[], 100).unwrap();
        assert_eq!(ts.len(), 1);
        assert!(ts[0].root().is_none());
    }

    #[test]
    fn height_one_adds_single_node() {
        let ts = enumerate_trees(1, &[0], &[], 100).unwrap();
        assert_eq!(ts.len(), 2);
    }

    #[test]
    fn height_two_has_five_shapes() {
        let ts = enumerate_trees(2, &[0], &[], 100).unwrap();
        assert_eq!(ts.len(), 5);
    }

    #[test]
    fn field_valuations_multiply() {
        // shapes at h<=2: nil(0 nodes), leaf(1), left-only(2),
        // right-only(2), full(3); one field over {0,1}:
        // 1 + 2 + 4 + 4 + 8 = 19
        let ts = enumerate_trees(2, &[0, 1], &["f".to_string()], 1000).unwrap();
        assert_eq!(ts.len(), 19);
    }

    #[test]
    fn budget_is_enforced() {
        let err = enumerate_trees(3, &[0, 1], &["f".into(), "g".into()], 10).unwrap_err();
        assert!(matches!(err, EnumerateError::BudgetExceeded { .. }));
    }
}
