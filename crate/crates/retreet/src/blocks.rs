//! Block extraction, the relation algebra over blocks, per-block paths,
//! and the read/write analysis.
//!
//! Blocks are numbered s0, s1, … in document order across the whole
//! program; conditions c0, c1, … likewise. Both numberings are stable
//! across runs for the same source.

use std::collections::BTreeSet;
use std::fmt;

use crate::lang::ast::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockId(pub usize);

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CondId(pub usize);

impl fmt::Display for CondId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// Node displacement of an access relative to the node an iteration runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Disp {
    Zero,
    Left,
    Right,
}

impl Disp {
    pub fn of_steps(steps: &[Dir]) -> Option<Disp> {
        match steps {
            [] => Some(Disp::Zero),
            [Dir::Left] => Some(Disp::Left),
            [Dir::Right] => Some(Disp::Right),
            _ => None,
        }
    }
}

impl fmt::Display for Disp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Disp::Zero => write!(f, "self"),
            Disp::Left => write!(f, "left"),
            Disp::Right => write!(f, "right"),
        }
    }
}

/// Named storage location relative to a node: a data field, an
/// activation-local variable, or a return slot (the ghost a caller reads).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LocName {
    Field(String),
    Local { func: String, var: String },
    Ret { func: String, slot: usize },
}

impl fmt::Display for LocName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocName::Field(name) => write!(f, "{}", name),
            LocName::Local { func, var } => write!(f, "{}::{}", func, var),
            LocName::Ret { func, slot } => write!(f, "{}::ret{}", func, slot),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AccessPath {
    pub disp: Disp,
    pub loc: LocName,
}

impl fmt::Display for AccessPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.disp, self.loc)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RWSets {
    pub reads: BTreeSet<AccessPath>,
    pub writes: BTreeSet<AccessPath>,
}

impl RWSets {
    pub fn union(&self, other: &RWSets) -> RWSets {
        RWSets {
            reads: self.reads.union(&other.reads).cloned().collect(),
            writes: self.writes.union(&other.writes).cloned().collect(),
        }
    }
}

/// One entry of the straight-line path from a function entry to a block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathEntry {
    Straight(Vec<Assgn>),
    SpeculatedCall(BlockId),
    Assume { cond: CondId, value: bool },
    /// A conditional that completed before the target block; both arms
    /// rejoin, so later substitutions must consider either.
    CompletedIf { cond: CondId, then_entries: Vec<PathEntry>, else_entries: Vec<PathEntry> },
}

pub type Path = Vec<PathEntry>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Seq,
    If,
    Par,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepTag {
    pub kind: NodeKind,
    pub side: u8,
}

#[derive(Debug, Clone)]
pub struct BlockInfo {
    pub id: BlockId,
    pub func: usize,
    pub ast: Block,
    pub pos: Vec<StepTag>,
    pub path: Path,
}

#[derive(Debug, Clone)]
pub struct CondInfo {
    pub id: CondId,
    pub func: usize,
    pub cond: BExpr,
    pub pos: Vec<StepTag>,
    pub path: Path,
}

impl CondInfo {
    /// Structural conditions test nil-ness; everything else carries
    /// integer content.
    pub fn is_structural(&self) -> bool {
        matches!(self.cond, BExpr::NilTest(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockRelation {
    /// first block precedes the second under a sequential ancestor
    Precedes,
    /// second block precedes the first
    PrecededBy,
    Branches,
    Parallel,
    DifferentFunctions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlocksError {
    NotACall(BlockId),
    NotStraight(BlockId),
}

impl fmt::Display for BlocksError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlocksError::NotACall(b) => write!(f, "{} is not a call block", b),
            BlocksError::NotStraight(b) => write!(f, "{} is not a straight-line block", b),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BlockTable {
    pub program: Program,
    blocks: Vec<BlockInfo>,
    conds: Vec<CondInfo>,
    func_blocks: Vec<Vec<BlockId>>,
}

pub fn build_block_table(p: &Program) -> BlockTable {
    let mut blocks = Vec::new();
    let mut conds = Vec::new();
    let mut func_blocks = Vec::new();
    for (fi, f) in p.functions.iter().enumerate() {
        let mut ids = Vec::new();
        let mut prefix: Path = Vec::new();
        walk(
            &f.body,
            fi,
            &mut Vec::new(),
            &mut prefix,
            &mut blocks,
            &mut conds,
            &mut ids,
        );
        func_blocks.push(ids);
    }
    BlockTable { program: p.clone(), blocks, conds, func_blocks }
}

fn walk(
    s: &Stmt,
    fi: usize,
    pos: &mut Vec<StepTag>,
    prefix: &mut Path,
    blocks: &mut Vec<BlockInfo>,
    conds: &mut Vec<CondInfo>,
    ids: &mut Vec<BlockId>,
) {
    match s {
        Stmt::Block(b) => {
            let id = BlockId(blocks.len());
            blocks.push(BlockInfo {
                id,
                func: fi,
                ast: b.clone(),
                pos: pos.clone(),
                path: prefix.clone(),
            });
            ids.push(id);
            prefix.push(match b {
                Block::Call { .. } => PathEntry::SpeculatedCall(id),
                Block::Straight(assgns) => PathEntry::Straight(assgns.clone()),
            });
        }
        Stmt::If { cond, then, els, .. } => {
            let cid = CondId(conds.len());
            conds.push(CondInfo {
                id: cid,
                func: fi,
                cond: cond.clone(),
                pos: pos.clone(),
                path: prefix.clone(),
            });
            let base = prefix.len();
            prefix.push(PathEntry::Assume { cond: cid, value: true });
            pos.push(StepTag { kind: NodeKind::If, side: 0 });
            walk(then, fi, pos, prefix, blocks, conds, ids);
            pos.pop();
            let then_entries: Vec<PathEntry> = prefix.drain(base + 1..).collect();
            prefix.pop();

            prefix.push(PathEntry::Assume { cond: cid, value: false });
            pos.push(StepTag { kind: NodeKind::If, side: 1 });
            walk(els, fi, pos, prefix, blocks, conds, ids);
            pos.pop();
            let else_entries: Vec<PathEntry> = prefix.drain(base + 1..).collect();
            prefix.pop();

            prefix.push(PathEntry::CompletedIf { cond: cid, then_entries, else_entries });
        }
        Stmt::Seq(a, b) => {
            pos.push(StepTag { kind: NodeKind::Seq, side: 0 });
            walk(a, fi, pos, prefix, blocks, conds, ids);
            pos.pop();
            pos.push(StepTag { kind: NodeKind::Seq, side: 1 });
            walk(b, fi, pos, prefix, blocks, conds, ids);
            pos.pop();
        }
        Stmt::Par(a, b) => {
            // each arm's path ignores its sibling; the continuation sees
            // both arms linearized left-then-right
            let base = prefix.len();
            pos.push(StepTag { kind: NodeKind::Par, side: 0 });
            walk(a, fi, pos, prefix, blocks, conds, ids);
            pos.pop();
            let left_entries: Vec<PathEntry> = prefix.drain(base..).collect();
            pos.push(StepTag { kind: NodeKind::Par, side: 1 });
            walk(b, fi, pos, prefix, blocks, conds, ids);
            pos.pop();
            let right_entries: Vec<PathEntry> = prefix.drain(base..).collect();
            prefix.extend(left_entries);
            prefix.extend(right_entries);
        }
        Stmt::Empty => {}
    }
}

impl BlockTable {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn info(&self, id: BlockId) -> &BlockInfo {
        &self.blocks[id.0]
    }

    pub fn cond(&self, id: CondId) -> &CondInfo {
        &self.conds[id.0]
    }

    pub fn conds(&self) -> &[CondInfo] {
        &self.conds
    }

    pub fn blocks(&self) -> &[BlockInfo] {
        &self.blocks
    }

    pub fn all_blocks(&self) -> impl Iterator<Item = BlockId> + '_ {
        (0..self.blocks.len()).map(BlockId)
    }

    pub fn all_calls(&self) -> Vec<BlockId> {
        self.blocks.iter().filter(|b| b.ast.is_call()).map(|b| b.id).collect()
    }

    pub fn all_non_calls(&self) -> Vec<BlockId> {
        self.blocks.iter().filter(|b| !b.ast.is_call()).map(|b| b.id).collect()
    }

    pub fn function_name(&self, fi: usize) -> &str {
        &self.program.functions[fi].name
    }

    pub fn function_of(&self, id: BlockId) -> &Function {
        &self.program.functions[self.info(id).func]
    }

    pub fn func_index(&self, name: &str) -> Option<usize> {
        self.program.functions.iter().position(|f| f.name == name)
    }

    pub fn blocks_of(&self, func: &str) -> &[BlockId] {
        match self.func_index(func) {
            Some(fi) => &self.func_blocks[fi],
            None => &[],
        }
    }

    pub fn blocks_of_index(&self, fi: usize) -> &[BlockId] {
        &self.func_blocks[fi]
    }

    pub fn params_of(&self, func: &str) -> &[String] {
        self.program.function(func).map(|f| f.int_params.as_slice()).unwrap_or(&[])
    }

    pub fn path_of(&self, id: BlockId) -> &Path {
        &self.info(id).path
    }

    /// Displacement of a call's location argument (or of the pseudo
    /// self-transition for a straight block).
    pub fn direction(&self, id: BlockId) -> Disp {
        match &self.info(id).ast {
            Block::Call { loc_arg, .. } => {
                Disp::of_steps(&loc_arg.steps).expect("deep call paths are rejected upstream")
            }
            Block::Straight(_) => Disp::Zero,
        }
    }

    pub fn block_relation(&self, s: BlockId, q: BlockId) -> BlockRelation {
        assert_ne!(s, q, "block_relation requires distinct blocks");
        let a = self.info(s);
        let b = self.info(q);
        if a.func != b.func {
            return BlockRelation::DifferentFunctions;
        }
        let mut i = 0;
        while i < a.pos.len() && i < b.pos.len() && a.pos[i] == b.pos[i] {
            i += 1;
        }
        let (ta, tb) = (&a.pos[i], &b.pos[i]);
        debug_assert_eq!(ta.kind, tb.kind);
        debug_assert_ne!(ta.side, tb.side);
        match ta.kind {
            NodeKind::Seq => {
                if ta.side < tb.side {
                    BlockRelation::Precedes
                } else {
                    BlockRelation::PrecededBy
                }
            }
            NodeKind::If => BlockRelation::Branches,
            NodeKind::Par => BlockRelation::Parallel,
        }
    }

    pub fn callees(&self, s: BlockId) -> Result<Vec<BlockId>, BlocksError> {
        match &self.info(s).ast {
            Block::Call { callee, .. } => Ok(self.blocks_of(callee).to_vec()),
            Block::Straight(_) => Err(BlocksError::NotACall(s)),
        }
    }

    pub fn callee_name(&self, s: BlockId) -> Option<&str> {
        match &self.info(s).ast {
            Block::Call { callee, .. } => Some(callee),
            Block::Straight(_) => None,
        }
    }

    /// Caller blocks that can reach block `t` as the next stack record:
    /// calls to the function `t` belongs to.
    pub fn callers_of_block(&self, t: BlockId) -> Vec<BlockId> {
        let fname = &self.program.functions[self.info(t).func].name;
        self.blocks
            .iter()
            .filter(|b| b.ast.is_call() && self.callee_name(b.id) == Some(fname.as_str()))
            .map(|b| b.id)
            .collect()
    }

    /// Signed ancestor conditions of a block, entry to block order.
    pub fn governing_conds(&self, id: BlockId) -> Vec<(CondId, bool)> {
        let mut out = Vec::new();
        collect_assumes(&self.info(id).path, &mut out);
        out
    }

    /// All condition occurrences (governing and completed) on the path.
    pub fn path_conds(&self, id: BlockId) -> Vec<CondId> {
        let mut out = Vec::new();
        collect_all_conds(&self.info(id).path, &mut out);
        out
    }

    pub fn read_write_sets(&self, s: BlockId) -> Result<RWSets, BlocksError> {
        let info = self.info(s);
        let Block::Straight(assgns) = &info.ast else {
            return Err(BlocksError::NotStraight(s));
        };
        let f = &self.program.functions[info.func];
        let mut rw = RWSets::default();

        // reads arising from every condition evaluated on the way here;
        // variables in a condition resolve against the prefix to that
        // condition, not to the block
        for cid in self.path_conds(s) {
            let ci = self.cond(cid);
            collect_bexpr_reads(&ci.cond, f, &ci.path, self, &mut rw.reads);
        }

        for (i, a) in assgns.iter().enumerate() {
            match &a.lhs {
                Lhs::Field(le, name) => {
                    if let Some(disp) = Disp::of_steps(&le.steps) {
                        rw.writes
                            .insert(AccessPath { disp, loc: LocName::Field(name.clone()) });
                    }
                }
                Lhs::Var(v) => {
                    rw.writes.insert(AccessPath {
                        disp: Disp::Zero,
                        loc: LocName::Local { func: f.name.clone(), var: v.clone() },
                    });
                }
                Lhs::Ret(k) => {
                    rw.writes.insert(AccessPath {
                        disp: Disp::Zero,
                        loc: LocName::Ret { func: f.name.clone(), slot: *k },
                    });
                }
            }
            collect_aexpr_reads(&a.rhs, f, &info.path, i, assgns, self, &mut rw.reads);
        }
        Ok(rw)
    }
}

fn collect_assumes(path: &[PathEntry], out: &mut Vec<(CondId, bool)>) {
    for e in path {
        if let PathEntry::Assume { cond, value } = e {
            out.push((*cond, *value));
        }
    }
}

fn collect_all_conds(path: &[PathEntry], out: &mut Vec<CondId>) {
    for e in path {
        match e {
            PathEntry::Assume { cond, .. } => out.push(*cond),
            PathEntry::CompletedIf { cond, then_entries, else_entries } => {
                out.push(*cond);
                collect_all_conds(then_entries, out);
                collect_all_conds(else_entries, out);
            }
            _ => {}
        }
    }
}

fn collect_bexpr_reads(
    b: &BExpr,
    f: &Function,
    path: &[PathEntry],
    table: &BlockTable,
    out: &mut BTreeSet<AccessPath>,
) {
    match b {
        BExpr::Positive(e) => collect_expr_reads(e, f, path, &[], 0, table, out),
        BExpr::Not(x) => collect_bexpr_reads(x, f, path, table, out),
        BExpr::And(x, y) => {
            collect_bexpr_reads(x, f, path, table, out);
            collect_bexpr_reads(y, f, path, table, out);
        }
        BExpr::NilTest(_) | BExpr::True => {}
    }
}

fn collect_aexpr_reads(
    e: &AExpr,
    f: &Function,
    path: &[PathEntry],
    assgn_index: usize,
    block_assgns: &[Assgn],
    table: &BlockTable,
    out: &mut BTreeSet<AccessPath>,
) {
    collect_expr_reads(e, f, path, block_assgns, assgn_index, table, out)
}

fn collect_expr_reads(
    e: &AExpr,
    f: &Function,
    path: &[PathEntry],
    block_assgns: &[Assgn],
    assgn_index: usize,
    table: &BlockTable,
    out: &mut BTreeSet<AccessPath>,
) {
    match e {
        AExpr::Field(le, name) => {
            if let Some(disp) = Disp::of_steps(&le.steps) {
                out.insert(AccessPath { disp, loc: LocName::Field(name.clone()) });
            }
        }
        AExpr::Var(v) => {
            // defined earlier inside this block: the external reads were
            // recorded when that defining assignment's RHS was scanned
            let internal = block_assgns[..assgn_index]
                .iter()
                .any(|a| a.lhs == Lhs::Var(v.clone()));
            if internal {
                return;
            }
            if f.int_params.contains(v) {
                return; // parameters are values, not locations
            }
            let mut found = Vec::new();
            let dominated = resolve_var(v, path, table, f, &mut found);
            if !dominated {
                found.push(AccessPath {
                    disp: Disp::Zero,
                    loc: LocName::Local { func: f.name.clone(), var: v.clone() },
                });
            }
            out.extend(found);
        }
        AExpr::Add(a, b) | AExpr::Sub(a, b) => {
            collect_expr_reads(a, f, path, block_assgns, assgn_index, table, out);
            collect_expr_reads(b, f, path, block_assgns, assgn_index, table, out);
        }
        AExpr::Const(_) => {}
    }
}

/// Finds the storage a variable read refers to by scanning the path
/// backwards. A result bound by a call is the callee's return slot at the
/// call's displacement; a plain assignment pins it to an activation local.
/// Joins contribute every arm that defines the variable. Returns true when
/// every route to this point defines the variable.
fn resolve_var(
    v: &str,
    path: &[PathEntry],
    table: &BlockTable,
    f: &Function,
    out: &mut Vec<AccessPath>,
) -> bool {
    for e in path.iter().rev() {
        match e {
            PathEntry::Straight(assgns) => {
                if assgns.iter().any(|a| a.lhs == Lhs::Var(v.to_string())) {
                    push_unique(
                        out,
                        AccessPath {
                            disp: Disp::Zero,
                            loc: LocName::Local { func: f.name.clone(), var: v.to_string() },
                        },
                    );
                    return true;
                }
            }
            PathEntry::SpeculatedCall(id) => {
                if let Block::Call { results, callee, loc_arg, .. } = &table.info(*id).ast {
                    if let Some(slot) = results.iter().position(|r| r == v) {
                        if let Some(disp) = Disp::of_steps(&loc_arg.steps) {
                            push_unique(
                                out,
                                AccessPath { disp, loc: LocName::Ret { func: callee.clone(), slot } },
                            );
                        }
                        return true;
                    }
                }
            }
            PathEntry::CompletedIf { then_entries, else_entries, .. } => {
                let t_dom = resolve_var(v, then_entries, table, f, out);
                let e_dom = resolve_var(v, else_entries, table, f, out);
                if t_dom && e_dom {
                    return true;
                }
            }
            PathEntry::Assume { .. } => {}
        }
    }
    false
}

fn push_unique(out: &mut Vec<AccessPath>, a: AccessPath) {
    if !out.contains(&a) {
        out.push(a);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{load_program, ODD_EVEN_SRC};

    fn odd_even_table() -> BlockTable {
        build_block_table(&load_program(ODD_EVEN_SRC).unwrap())
    }

    #[test]
    fn odd_even_numbering_matches_expected_partition() {
        let t = odd_even_table();
        assert_eq!(t.len(), 11);
        let calls: Vec<String> = t.all_calls().iter().map(|b| b.to_string()).collect();
        assert_eq!(calls, ["s1", "s2", "s5", "s6", "s8", "s9"]);
        let non_calls: Vec<String> = t.all_non_calls().iter().map(|b| b.to_string()).collect();
        assert_eq!(non_calls, ["s0", "s3", "s4", "s7", "s10"]);
    }

    #[test]
    fn single_block_main() {
        let t = build_block_table(&load_program("Main(n) { return 0 }").unwrap());
        assert_eq!(t.len(), 1);
        assert!(t.path_of(BlockId(0)).is_empty());
    }

    #[test]
    fn relations_match_lca_kinds() {
        let t = odd_even_table();
        // s5 precedes s7 inside Even
        assert_eq!(t.block_relation(BlockId(5), BlockId(7)), BlockRelation::Precedes);
        assert_eq!(t.block_relation(BlockId(7), BlockId(5)), BlockRelation::PrecededBy);
        // s0 and s1 sit on opposite arms of Odd's nil test
        assert_eq!(t.block_relation(BlockId(0), BlockId(1)), BlockRelation::Branches);
        // s8 and s9 run in parallel
        assert_eq!(t.block_relation(BlockId(8), BlockId(9)), BlockRelation::Parallel);
        assert_eq!(
            t.block_relation(BlockId(0), BlockId(4)),
            BlockRelation::DifferentFunctions
        );
        // s8 precedes the return block s10
        assert_eq!(t.block_relation(BlockId(8), BlockId(10)), BlockRelation::Precedes);
    }

    #[test]
    fn callees_of_s2_are_even_blocks() {
        let t = odd_even_table();
        let cs: Vec<String> =
            t.callees(BlockId(2)).unwrap().iter().map(|b| b.to_string()).collect();
        assert_eq!(cs, ["s4", "s5", "s6", "s7"]);
        let cs8: Vec<String> =
            t.callees(BlockId(8)).unwrap().iter().map(|b| b.to_string()).collect();
        assert_eq!(cs8, ["s0", "s1", "s2", "s3"]);
        assert!(matches!(t.callees(BlockId(0)), Err(BlocksError::NotACall(_))));
    }

    #[test]
    fn path_of_s6_is_assume_then_s5() {
        let t = odd_even_table();
        let path = t.path_of(BlockId(6));
        assert_eq!(path.len(), 2);
        assert!(matches!(path[0], PathEntry::Assume { value: false, .. }));
        assert!(matches!(path[1], PathEntry::SpeculatedCall(BlockId(5))));
    }

    #[test]
    fn s3_reads_ghost_return_slots() {
        let t = odd_even_table();
        let rw = t.read_write_sets(BlockId(3)).unwrap();
        let reads: Vec<String> = rw.reads.iter().map(|a| a.to_string()).collect();
        assert_eq!(reads, ["(left, Even::ret0)", "(right, Even::ret0)"]);
        let writes: Vec<String> = rw.writes.iter().map(|a| a.to_string()).collect();
        assert_eq!(writes, ["(self, Odd::ret0)"]);
    }

    #[test]
    fn neighbor_field_access() {
        let src = "Main(n) {
            if (n == nil) { return 0 } else {
              if (n.l == nil) { return 0 } else { n.v = n.l.v + 1 return n.v }
            }
        }";
        let t = build_block_table(&load_program(src).unwrap());
        // the assignment block is the one writing (self, v)
        let target = t
            .all_non_calls()
            .into_iter()
            .find(|b| {
                t.read_write_sets(*b)
                    .unwrap()
                    .writes
                    .contains(&AccessPath { disp: Disp::Zero, loc: LocName::Field("v".into()) })
            })
            .unwrap();
        let rw = t.read_write_sets(target).unwrap();
        assert!(rw
            .reads
            .contains(&AccessPath { disp: Disp::Left, loc: LocName::Field("v".into()) }));
    }

    #[test]
    fn field_zero_write_has_no_reads() {
        let src = "Main(n) { if (n == nil) { return 0 } else { n.f = 0 return 0 } }";
        let t = build_block_table(&load_program(src).unwrap());
        let rw = t.read_write_sets(BlockId(1)).unwrap();
        assert!(rw.reads.is_empty());
        assert_eq!(
            rw.writes.iter().next().unwrap(),
            &AccessPath { disp: Disp::Zero, loc: LocName::Field("f".into()) }
        );
    }

    #[test]
    fn numbering_is_stable() {
        let a = odd_even_table();
        let b = odd_even_table();
        for (x, y) in a.blocks().iter().zip(b.blocks().iter()) {
            assert_eq!(x.id, y.id);
            assert_eq!(x.ast, y.ast);
        }
    }
}
