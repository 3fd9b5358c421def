//! Finite binary trees with per-node integer field stores.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lang::ast::Dir;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Node {
    left: Option<NodeId>,
    right: Option<NodeId>,
    fields: BTreeMap<String, i64>,
}

/// A finite binary tree; `root` is None for the empty (nil) tree. Fields
/// absent from a node's store read as 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcreteTree {
    nodes: Vec<Node>,
    root: Option<NodeId>,
}

impl ConcreteTree {
    pub fn empty() -> Self {
        ConcreteTree { nodes: Vec::new(), root: None }
    }

    pub fn leaf() -> Self {
        let mut t = ConcreteTree::empty();
        let id = t.add_node();
        t.root = Some(id);
        t
    }

    pub fn add_node(&mut self) -> NodeId {
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node { left: None, right: None, fields: BTreeMap::new() });
        id
    }

    pub fn set_root(&mut self, id: NodeId) {
        self.root = Some(id);
    }

    pub fn set_child(&mut self, parent: NodeId, dir: Dir, child: NodeId) {
        match dir {
            Dir::Left => self.nodes[parent.0].left = Some(child),
            Dir::Right => self.nodes[parent.0].right = Some(child),
        }
    }

    pub fn root(&self) -> Option<NodeId> {
        self.root
    }

    pub fn child(&self, id: NodeId, dir: Dir) -> Option<NodeId> {
        match dir {
            Dir::Left => self.nodes[id.0].left,
            Dir::Right => self.nodes[id.0].right,
        }
    }

    /// Follows a pointer path from a (possibly nil) starting point.
    pub fn walk(&self, from: Option<NodeId>, steps: &[Dir]) -> Option<NodeId> {
        let mut cur = from?;
        for d in steps {
            cur = self.child(cur, *d)?;
        }
        Some(cur)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes plus reachable nil positions: every block can run on at most
    /// this many distinct locations.
    pub fn position_count(&self) -> usize {
        2 * self.nodes.len() + 1
    }

    pub fn get_field(&self, id: NodeId, name: &str) -> i64 {
        self.nodes[id.0].fields.get(name).copied().unwrap_or(0)
    }

    pub fn set_field(&mut self, id: NodeId, name: &str, value: i64) {
        self.nodes[id.0].fields.insert(name.to_string(), value);
    }

    pub fn fields(&self, id: NodeId) -> &BTreeMap<String, i64> {
        &self.nodes[id.0].fields
    }

    pub fn height(&self) -> usize {
        fn h(t: &ConcreteTree, n: Option<NodeId>) -> usize {
            match n {
                None => 0,
                Some(id) => {
                    1 + h(t, t.child(id, Dir::Left)).max(h(t, t.child(id, Dir::Right)))
                }
            }
        }
        h(self, self.root)
    }

    /// The root-to-node path of a node, as pointer steps.
    pub fn path_of(&self, target: NodeId) -> Option<Vec<Dir>> {
        fn rec(t: &ConcreteTree, cur: NodeId, target: NodeId, acc: &mut Vec<Dir>) -> bool {
            if cur == target {
                return true;
            }
            for d in [Dir::Left, Dir::Right] {
                if let Some(c) = t.child(cur, d) {
                    acc.push(d);
                    if rec(t, c, target, acc) {
                        return true;
                    }
                    acc.pop();
                }
            }
            false
        }
        let mut acc = Vec::new();
        if rec(self, self.root?, target, &mut acc) {
            Some(acc)
        } else {
            None
        }
    }

    /// All node ids in preorder.
    pub fn node_ids(&self) -> Vec<NodeId> {
        fn rec(t: &ConcreteTree, n: Option<NodeId>, out: &mut Vec<NodeId>) {
            if let Some(id) = n {
                out.push(id);
                rec(t, t.child(id, Dir::Left), out);
                rec(t, t.child(id, Dir::Right), out);
            }
        }
        let mut out = Vec::new();
        rec(self, self.root, &mut out);
        out
    }

    /// A stable digest of the full store, for trace deduplication.
    pub fn store_key(&self) -> String {
        let mut out = String::new();
        for id in self.node_ids() {
            let path: String = self
                .path_of(id)
                .unwrap_or_default()
                .iter()
                .map(|d| d.field_name())
                .collect();
            out.push_str(&path);
            out.push('{');
            for (k, v) in self.fields(id) {
                out.push_str(&format!("{}={};", k, v));
            }
            out.push('}');
        }
        out
    }

    /// Builds a tree from parent/child path strings over 'l'/'r'
    /// (the root is the empty string).
    pub fn from_paths(paths: &[&str]) -> ConcreteTree {
        let mut t = ConcreteTree::empty();
        let mut sorted: Vec<&str> = paths.to_vec();
        sorted.sort_by_key(|p| p.len());
        let mut ids: BTreeMap<String, NodeId> = BTreeMap::new();
        for p in sorted {
            let id = t.add_node();
            ids.insert(p.to_string(), id);
            if p.is_empty() {
                t.set_root(id);
            } else {
                let (parent, last) = p.split_at(p.len() - 1);
                let dir = if last == "l" { Dir::Left } else { Dir::Right };
                let pid = ids[parent];
                t.set_child(pid, dir, id);
            }
        }
        t
    }
}

impl fmt::Display for ConcreteTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.root {
            None => write!(f, "nil"),
            Some(_) => {
                for id in self.node_ids() {
                    let path: String = self
                        .path_of(id)
                        .unwrap_or_default()
                        .iter()
                        .map(|d| d.field_name())
                        .collect();
                    let name = if path.is_empty() { ".".to_string() } else { format!(".{}", path) };
                    let fields: Vec<String> =
                        self.fields(id).iter().map(|(k, v)| format!("{}={}", k, v)).collect();
                    writeln!(f, "{} {{{}}}", name, fields.join(", "))?;
                }
                Ok(())
            }
        }
    }
}

/// View of a tree from one node, for the speculative-execution oracle.
pub struct TreeView<'a> {
    pub tree: &'a ConcreteTree,
    pub node: Option<NodeId>,
}

impl crate::semantics::NilOracle for TreeView<'_> {
    fn is_nil(&self, steps: &[Dir]) -> bool {
        self.tree.walk(self.node, steps).is_none()
    }

    fn field(&self, steps: &[Dir], name: &str) -> i64 {
        match self.tree.walk(self.node, steps) {
            Some(id) => self.tree.get_field(id, name),
            None => 0,
        }
    }
}
