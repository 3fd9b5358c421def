//! Block-atomic interleaving interpreter.
//!
//! A program state is a tree store plus a frontier of activations; a step
//! executes one straight-line block as an iteration. Control structure
//! (branch tests, call expansion, result binding) advances through silent
//! moves. Silent moves that read only private state apply eagerly; ones
//! that read shared fields interleave like iterations but leave no trace
//! entry.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::blocks::{BlockId, BlockTable};
use crate::lang::ast::*;
use crate::oracle::tree::{ConcreteTree, NodeId};

/// Where an iteration runs: a real node or a nil position identified by
/// its parent link (the root-nil when the whole tree is empty).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pos {
    Node(NodeId),
    Nil(Option<(NodeId, Dir)>),
}

impl Pos {
    pub fn path_string(&self, tree: &ConcreteTree) -> String {
        match self {
            Pos::Node(id) => render_path(&tree.path_of(*id).unwrap_or_default()),
            Pos::Nil(None) => ".".to_string(),
            Pos::Nil(Some((parent, d))) => {
                let mut steps = tree.path_of(*parent).unwrap_or_default();
                steps.push(*d);
                render_path(&steps)
            }
        }
    }
}

fn render_path(steps: &[Dir]) -> String {
    let mut s = String::from(".");
    for d in steps {
        s.push_str(d.field_name());
    }
    s
}

/// A concrete storage location.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Loc {
    Field(NodeId, String),
    /// Return slot of one activation instance (what the caller's bound
    /// result variable aliases).
    Slot(usize, usize),
    /// Plain local of one activation instance.
    Local(usize, String),
}

/// Dynamic parallel context: the `(site, side)` choices above an iteration,
/// outermost first. Two iterations are parallel-related when their contexts
/// first differ in side at the same site.
pub type ParCtx = Vec<(u64, u8)>;

pub fn parallel_related(a: &ParCtx, b: &ParCtx) -> bool {
    for (x, y) in a.iter().zip(b.iter()) {
        if x.0 != y.0 {
            return false;
        }
        if x.1 != y.1 {
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Iteration {
    pub block: BlockId,
    pub pos: Pos,
    pub pos_path: String,
    pub pre_store_hash: u64,
    pub ctx: ParCtx,
    pub reads: Vec<Loc>,
    pub writes: Vec<Loc>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub iterations: Vec<Iteration>,
    pub final_store: BTreeMap<String, i64>,
    pub returns: Vec<i64>,
}

impl Trace {
    pub fn schedule_key(&self) -> Vec<(BlockId, Pos)> {
        self.iterations.iter().map(|i| (i.block, i.pos)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InterpError {
    BudgetExceeded { explored: usize },
    NilDereference,
    MissingMain,
}

impl fmt::Display for InterpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InterpError::BudgetExceeded { explored } => {
                write!(f, "interleaving budget exceeded after {} states", explored)
            }
            InterpError::NilDereference => write!(f, "nil dereference during execution"),
            InterpError::MissingMain => write!(f, "program has no Main function"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Activation {
    func: usize,
    node: Option<NodeId>,
    pos: Pos,
    locals: BTreeMap<String, (i64, Provenance)>,
    slots: Vec<i64>,
    ctx: ParCtx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Provenance {
    Plain,
    CallResult { act: usize, slot: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Fr<'p> {
    Stmt { act: usize, stmt: &'p Stmt, pending: Vec<Loc> },
    Seq(Box<Fr<'p>>, Box<Fr<'p>>),
    Par { site: u64, left: Box<Fr<'p>>, right: Box<Fr<'p>> },
    Bind { act: usize, callee: usize, results: &'p [String] },
    Done,
}

impl<'p> Fr<'p> {
    fn done(&self) -> bool {
        match self {
            Fr::Done => true,
            Fr::Seq(a, b) => a.done() && b.done(),
            Fr::Par { left, right, .. } => left.done() && right.done(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State<'p> {
    tree: ConcreteTree,
    acts: Vec<Activation>,
    frontier: Fr<'p>,
    next_site: u64,
}

impl<'p> State<'p> {
    pub fn returns(&self) -> Vec<i64> {
        self.acts[0].slots.clone()
    }
}

pub(crate) struct Machine<'p> {
    table: &'p BlockTable,
    /// positional identity of block statements
    block_ids: BTreeMap<usize, BlockId>,
}

fn stmt_addr(s: &Stmt) -> usize {
    s as *const Stmt as usize
}

impl<'p> Machine<'p> {
    pub fn new(table: &'p BlockTable) -> Self {
        let mut block_ids = BTreeMap::new();
        let mut counter = 0usize;
        for f in &table.program.functions {
            index_blocks(&f.body, &mut counter, &mut block_ids);
        }
        Machine { table, block_ids }
    }

    pub fn initial(&self, tree: &ConcreteTree) -> Result<State<'p>, InterpError> {
        let main = self.table.func_index(MAIN).ok_or(InterpError::MissingMain)?;
        let f = &self.table.program.functions[main];
        let mut locals = BTreeMap::new();
        for p in &f.int_params {
            locals.insert(p.clone(), (0, Provenance::Plain));
        }
        let pos = match tree.root() {
            Some(id) => Pos::Node(id),
            None => Pos::Nil(None),
        };
        let act = Activation {
            func: main,
            node: tree.root(),
            pos,
            locals,
            slots: vec![0; f.return_arity],
            ctx: Vec::new(),
        };
        let mut st = State {
            tree: tree.clone(),
            acts: vec![act],
            frontier: Fr::Stmt { act: 0, stmt: &f.body, pending: Vec::new() },
            next_site: 0,
        };
        self.normalize(&mut st)?;
        Ok(st)
    }

    /// Applies every eager silent move: structure expansion always, branch
    /// tests and call spawns when their expressions read no shared fields.
    fn normalize(&self, st: &mut State<'p>) -> Result<(), InterpError> {
        loop {
            let mut paths = Vec::new();
            self.collect_moves(&st.frontier, &mut Vec::new(), &mut paths);
            let mut advanced = false;
            for (path, kind) in paths {
                if kind == MoveKind::EagerSilent {
                    let it = self.step(st, &path)?;
                    debug_assert!(it.is_none());
                    advanced = true;
                    break; // frontier changed; recompute
                }
            }
            if !advanced {
                return Ok(());
            }
        }
    }

    pub fn enabled(&self, st: &State<'p>) -> Vec<(Vec<u8>, bool)> {
        let mut paths = Vec::new();
        self.collect_moves(&st.frontier, &mut Vec::new(), &mut paths);
        paths
            .into_iter()
            .filter(|(_, k)| *k != MoveKind::EagerSilent)
            .map(|(p, k)| (p, k == MoveKind::Iteration))
            .collect()
    }

    fn collect_moves(&self, fr: &Fr<'p>, prefix: &mut Vec<u8>, out: &mut Vec<(Vec<u8>, MoveKind)>) {
        match fr {
            Fr::Done => {}
            Fr::Bind { .. } => out.push((prefix.clone(), MoveKind::EagerSilent)),
            Fr::Stmt { stmt, .. } => {
                let kind = match stmt {
                    Stmt::Block(Block::Straight(_)) => MoveKind::Iteration,
                    Stmt::Empty | Stmt::Seq(..) | Stmt::Par(..) => MoveKind::EagerSilent,
                    Stmt::If { cond, .. } => {
                        if bexpr_reads_fields(cond) {
                            MoveKind::LazySilent
                        } else {
                            MoveKind::EagerSilent
                        }
                    }
                    Stmt::Block(Block::Call { int_args, .. }) => {
                        if int_args.iter().any(aexpr_reads_fields) {
                            MoveKind::LazySilent
                        } else {
                            MoveKind::EagerSilent
                        }
                    }
                };
                out.push((prefix.clone(), kind));
            }
            Fr::Seq(a, b) => {
                if a.done() {
                    prefix.push(1);
                    self.collect_moves(b, prefix, out);
                    prefix.pop();
                } else {
                    prefix.push(0);
                    self.collect_moves(a, prefix, out);
                    prefix.pop();
                }
            }
            Fr::Par { left, right, .. } => {
                prefix.push(0);
                self.collect_moves(left, prefix, out);
                prefix.pop();
                prefix.push(1);
                self.collect_moves(right, prefix, out);
                prefix.pop();
            }
        }
    }

    /// Executes the move at `path` and re-normalizes.
    pub fn step_normalized(
        &self,
        st: &mut State<'p>,
        path: &[u8],
    ) -> Result<Option<Iteration>, InterpError> {
        let it = self.step(st, path)?;
        self.normalize(st)?;
        Ok(it)
    }

    fn step(&self, st: &mut State<'p>, path: &[u8]) -> Result<Option<Iteration>, InterpError> {
        let mut site_ctx: ParCtx = Vec::new();
        let leaf = descend(&mut st.frontier, path, &mut site_ctx);
        let taken = std::mem::replace(leaf, Fr::Done);
        match taken {
            Fr::Stmt { act, stmt, pending } => match stmt {
                Stmt::Empty => Ok(None),
                Stmt::Seq(a, b) => {
                    *leaf = Fr::Seq(
                        Box::new(Fr::Stmt { act, stmt: a, pending }),
                        Box::new(Fr::Stmt { act, stmt: b, pending: Vec::new() }),
                    );
                    Ok(None)
                }
                Stmt::Par(a, b) => {
                    let site = st.next_site;
                    st.next_site += 1;
                    *leaf = Fr::Par {
                        site,
                        left: Box::new(Fr::Stmt { act, stmt: a, pending }),
                        right: Box::new(Fr::Stmt { act, stmt: b, pending: Vec::new() }),
                    };
                    Ok(None)
                }
                Stmt::If { cond, then, els, .. } => {
                    let mut reads = pending;
                    let value = eval_cond(&st.tree, &st.acts, act, cond, &mut reads)
                        .ok_or(InterpError::NilDereference)?;
                    let branch: &'p Stmt = if value { then } else { els };
                    *leaf = Fr::Stmt { act, stmt: branch, pending: reads };
                    Ok(None)
                }
                Stmt::Block(Block::Call { results, callee, loc_arg, int_args, .. }) => {
                    let caller_node = st.acts[act].node;
                    let target = st.tree.walk(caller_node, &loc_arg.steps);
                    let pos = match target {
                        Some(id) => Pos::Node(id),
                        None => {
                            if loc_arg.steps.is_empty() {
                                st.acts[act].pos
                            } else {
                                let prefix = st
                                    .tree
                                    .walk(caller_node, &loc_arg.steps[..loc_arg.steps.len() - 1])
                                    .ok_or(InterpError::NilDereference)?;
                                Pos::Nil(Some((prefix, *loc_arg.steps.last().unwrap())))
                            }
                        }
                    };
                    let callee_idx = self.table.func_index(callee).expect("resolved call");
                    let cf = &self.table.program.functions[callee_idx];
                    let mut reads = pending;
                    let mut locals = BTreeMap::new();
                    for (k, p) in cf.int_params.iter().enumerate() {
                        let v = match int_args.get(k) {
                            Some(e) => eval_aexpr(&st.tree, &st.acts, act, e, &mut reads)
                                .ok_or(InterpError::NilDereference)?,
                            None => 0,
                        };
                        locals.insert(p.clone(), (v, Provenance::Plain));
                    }
                    let mut ctx = st.acts[act].ctx.clone();
                    ctx.extend(site_ctx.iter().copied());
                    let callee_act = st.acts.len();
                    st.acts.push(Activation {
                        func: callee_idx,
                        node: target,
                        pos,
                        locals,
                        slots: vec![0; cf.return_arity],
                        ctx,
                    });
                    *leaf = Fr::Seq(
                        Box::new(Fr::Stmt { act: callee_act, stmt: &cf.body, pending: reads }),
                        Box::new(Fr::Bind { act, callee: callee_act, results }),
                    );
                    Ok(None)
                }
                Stmt::Block(Block::Straight(assgns)) => {
                    let block_id = *self
                        .block_ids
                        .get(&stmt_addr(stmt))
                        .expect("block statement is indexed");
                    let pre_hash = store_hash(&st.tree);
                    let mut reads = pending;
                    let mut writes = Vec::new();
                    for a in assgns {
                        let value = eval_aexpr(&st.tree, &st.acts, act, &a.rhs, &mut reads)
                            .ok_or(InterpError::NilDereference)?;
                        match &a.lhs {
                            Lhs::Var(v) => {
                                writes.push(Loc::Local(act, v.clone()));
                                st.acts[act].locals.insert(v.clone(), (value, Provenance::Plain));
                            }
                            Lhs::Ret(k) => {
                                writes.push(Loc::Slot(act, *k));
                                if *k < st.acts[act].slots.len() {
                                    st.acts[act].slots[*k] = value;
                                }
                            }
                            Lhs::Field(le, f) => {
                                let node = st
                                    .tree
                                    .walk(st.acts[act].node, &le.steps)
                                    .ok_or(InterpError::NilDereference)?;
                                writes.push(Loc::Field(node, f.clone()));
                                st.tree.set_field(node, f, value);
                            }
                        }
                    }
                    let mut ctx = st.acts[act].ctx.clone();
                    ctx.extend(site_ctx.iter().copied());
                    let pos = st.acts[act].pos;
                    let pos_path = pos.path_string(&st.tree);
                    Ok(Some(Iteration {
                        block: block_id,
                        pos,
                        pos_path,
                        pre_store_hash: pre_hash,
                        ctx,
                        reads,
                        writes,
                    }))
                }
            },
            Fr::Bind { act, callee, results } => {
                let slots = st.acts[callee].slots.clone();
                for (k, name) in results.iter().enumerate() {
                    let v = slots.get(k).copied().unwrap_or(0);
                    st.acts[act]
                        .locals
                        .insert(name.clone(), (v, Provenance::CallResult { act: callee, slot: k }));
                }
                Ok(None)
            }
            other => {
                *leaf = other;
                unreachable!("step must land on a leaf")
            }
        }
    }

    pub fn state_key(&self, st: &State<'p>) -> String {
        let mut out = st.tree.store_key();
        out.push('|');
        fr_key(&st.frontier, &mut out);
        out.push('|');
        for a in &st.acts {
            out.push_str(&format!("{}@{:?}", a.func, a.node));
            for (k, (v, _)) in &a.locals {
                out.push_str(&format!(",{}={}", k, v));
            }
            out.push_str(&format!(":{:?};", a.slots));
        }
        out
    }

    pub fn final_trace_parts(&self, st: &State<'p>) -> (BTreeMap<String, i64>, Vec<i64>) {
        (final_store(&st.tree), st.acts[0].slots.clone())
    }

    pub fn is_final(&self, st: &State<'p>) -> bool {
        self.enabled(st).is_empty() && st.frontier.done()
    }
}

fn index_blocks(s: &Stmt, counter: &mut usize, out: &mut BTreeMap<usize, BlockId>) {
    match s {
        Stmt::Block(_) => {
            out.insert(stmt_addr(s), BlockId(*counter));
            *counter += 1;
        }
        Stmt::If { then, els, .. } => {
            index_blocks(then, counter, out);
            index_blocks(els, counter, out);
        }
        Stmt::Seq(a, b) | Stmt::Par(a, b) => {
            index_blocks(a, counter, out);
            index_blocks(b, counter, out);
        }
        Stmt::Empty => {}
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MoveKind {
    Iteration,
    EagerSilent,
    LazySilent,
}

fn descend<'f, 'p>(fr: &'f mut Fr<'p>, path: &[u8], ctx: &mut ParCtx) -> &'f mut Fr<'p> {
    if path.is_empty() {
        return fr;
    }
    match fr {
        Fr::Seq(a, b) => descend(if path[0] == 0 { a } else { b }, &path[1..], ctx),
        Fr::Par { site, left, right } => {
            ctx.push((*site, path[0]));
            descend(if path[0] == 0 { left } else { right }, &path[1..], ctx)
        }
        _ => unreachable!("path descends through interior nodes only"),
    }
}

fn aexpr_reads_fields(e: &AExpr) -> bool {
    match e {
        AExpr::Field(..) => true,
        AExpr::Add(a, b) | AExpr::Sub(a, b) => aexpr_reads_fields(a) || aexpr_reads_fields(b),
        _ => false,
    }
}

fn bexpr_reads_fields(b: &BExpr) -> bool {
    match b {
        BExpr::Positive(e) => aexpr_reads_fields(e),
        BExpr::Not(x) => bexpr_reads_fields(x),
        BExpr::And(x, y) => bexpr_reads_fields(x) || bexpr_reads_fields(y),
        _ => false,
    }
}

fn eval_aexpr(
    tree: &ConcreteTree,
    acts: &[Activation],
    act: usize,
    e: &AExpr,
    reads: &mut Vec<Loc>,
) -> Option<i64> {
    match e {
        AExpr::Const(c) => Some(*c),
        AExpr::Var(v) => match acts[act].locals.get(v) {
            Some((value, prov)) => {
                match prov {
                    Provenance::Plain => reads.push(Loc::Local(act, v.clone())),
                    Provenance::CallResult { act: callee, slot } => {
                        reads.push(Loc::Slot(*callee, *slot))
                    }
                }
                Some(*value)
            }
            None => {
                reads.push(Loc::Local(act, v.clone()));
                Some(0)
            }
        },
        AExpr::Field(le, f) => {
            let node = tree.walk(acts[act].node, &le.steps)?;
            reads.push(Loc::Field(node, f.clone()));
            Some(tree.get_field(node, f))
        }
        AExpr::Add(a, b) => {
            Some(eval_aexpr(tree, acts, act, a, reads)? + eval_aexpr(tree, acts, act, b, reads)?)
        }
        AExpr::Sub(a, b) => {
            Some(eval_aexpr(tree, acts, act, a, reads)? - eval_aexpr(tree, acts, act, b, reads)?)
        }
    }
}

fn eval_cond(
    tree: &ConcreteTree,
    acts: &[Activation],
    act: usize,
    b: &BExpr,
    reads: &mut Vec<Loc>,
) -> Option<bool> {
    match b {
        BExpr::True => Some(true),
        BExpr::NilTest(le) => Some(tree.walk(acts[act].node, &le.steps).is_none()),
        BExpr::Positive(e) => Some(eval_aexpr(tree, acts, act, e, reads)? > 0),
        BExpr::Not(x) => Some(!eval_cond(tree, acts, act, x, reads)?),
        BExpr::And(x, y) => {
            Some(eval_cond(tree, acts, act, x, reads)? && eval_cond(tree, acts, act, y, reads)?)
        }
    }
}

fn store_hash(tree: &ConcreteTree) -> u64 {
    use std::collections::hash_map::DefaultHasher;
    use std::hash::{Hash, Hasher};
    let mut h = DefaultHasher::new();
    tree.store_key().hash(&mut h);
    h.finish()
}

fn final_store(tree: &ConcreteTree) -> BTreeMap<String, i64> {
    let mut out = BTreeMap::new();
    for id in tree.node_ids() {
        let path = Pos::Node(id).path_string(tree);
        for (k, v) in tree.fields(id) {
            out.insert(format!("{}:{}", path, k), *v);
        }
    }
    out
}

/// All block-granularity interleavings of a program on one tree,
/// deduplicated by schedule.
pub fn interpret_all(
    table: &BlockTable,
    tree: &ConcreteTree,
    budget: usize,
) -> Result<Vec<Trace>, InterpError> {
    let machine = Machine::new(table);
    let initial = machine.initial(tree)?;
    let mut traces = Vec::new();
    let mut seen = BTreeSet::new();
    let mut stack: Vec<(State, Vec<Iteration>)> = vec![(initial, Vec::new())];
    let mut explored = 0usize;
    while let Some((state, iters)) = stack.pop() {
        explored += 1;
        if explored > budget {
            return Err(InterpError::BudgetExceeded { explored });
        }
        let moves = machine.enabled(&state);
        if moves.is_empty() {
            let key: Vec<(BlockId, Pos)> = iters.iter().map(|i| (i.block, i.pos)).collect();
            if seen.insert(key) {
                let (final_store, returns) = machine.final_trace_parts(&state);
                traces.push(Trace { iterations: iters, final_store, returns });
            }
            continue;
        }
        for (path, _is_iter) in moves.into_iter().rev() {
            let mut next = state.clone();
            let recorded = machine.step_normalized(&mut next, &path)?;
            let mut next_iters = iters.clone();
            if let Some(it) = recorded {
                next_iters.push(it);
            }
            stack.push((next, next_iters));
        }
    }
    traces.sort_by_key(|t| t.schedule_key());
    Ok(traces)
}

/// The canonical (leftmost-first) execution; for parallel programs this is
/// the left-biased interleaving.
pub fn interpret_sequential(
    table: &BlockTable,
    tree: &ConcreteTree,
    budget: usize,
) -> Result<Trace, InterpError> {
    let machine = Machine::new(table);
    let mut state = machine.initial(tree)?;
    let mut iters = Vec::new();
    let mut steps = 0usize;
    loop {
        steps += 1;
        if steps > budget {
            return Err(InterpError::BudgetExceeded { explored: steps });
        }
        let moves = machine.enabled(&state);
        let Some((path, _)) = moves.into_iter().next() else {
            let (final_store, returns) = machine.final_trace_parts(&state);
            return Ok(Trace { iterations: iters, final_store, returns });
        };
        if let Some(it) = machine.step_normalized(&mut state, &path)? {
            iters.push(it);
        }
    }
}

/// Memoized walk over every reachable state. The visitor receives the
/// simultaneously enabled iterations of each state together with the state
/// itself (for continuing a schedule from it).
pub(crate) fn explore_states<'p>(
    table: &'p BlockTable,
    tree: &ConcreteTree,
    budget: usize,
    mut visit: impl FnMut(&Machine<'p>, &State<'p>, &[(Iteration, Vec<u8>)]) -> bool,
) -> Result<(), InterpError> {
    let machine = Machine::new(table);
    let initial = machine.initial(tree)?;
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut stack = vec![initial];
    let mut explored = 0usize;
    while let Some(state) = stack.pop() {
        explored += 1;
        if explored > budget {
            return Err(InterpError::BudgetExceeded { explored });
        }
        if !seen.insert(machine.state_key(&state)) {
            continue;
        }
        let moves = machine.enabled(&state);
        let mut enabled = Vec::new();
        for (path, is_iter) in &moves {
            if !is_iter {
                continue;
            }
            let mut probe = state.clone();
            if let Some(it) = machine.step(&mut probe, path)? {
                enabled.push((it, path.clone()));
            }
        }
        if !visit(&machine, &state, &enabled) {
            return Ok(()); // visitor found what it wanted
        }
        for (path, _) in moves {
            let mut next = state.clone();
            machine.step_normalized(&mut next, &path)?;
            stack.push(next);
        }
    }
    Ok(())
}

/// Completes a schedule from `state`, taking `first` then leftmost moves.
pub(crate) fn drain_from<'p>(
    machine: &Machine<'p>,
    state: &State<'p>,
    first: &[u8],
    budget: usize,
) -> Result<Trace, InterpError> {
    let mut st = state.clone();
    let mut iters = Vec::new();
    if let Some(it) = machine.step_normalized(&mut st, first)? {
        iters.push(it);
    }
    let mut steps = 0usize;
    loop {
        steps += 1;
        if steps > budget {
            return Err(InterpError::BudgetExceeded { explored: steps });
        }
        let moves = machine.enabled(&st);
        let Some((path, _)) = moves.into_iter().next() else {
            let (final_store, returns) = machine.final_trace_parts(&st);
            return Ok(Trace { iterations: iters, final_store, returns });
        };
        if let Some(it) = machine.step_normalized(&mut st, &path)? {
            iters.push(it);
        }
    }
}

fn fr_key(fr: &Fr, out: &mut String) {
    match fr {
        Fr::Done => out.push('d'),
        Fr::Stmt { act, stmt, .. } => {
            out.push_str(&format!("s{}:{:x}", act, stmt_addr(stmt)))
        }
        Fr::Seq(a, b) => {
            out.push('(');
            fr_key(a, out);
            out.push(';');
            fr_key(b, out);
            out.push(')');
        }
        Fr::Par { left, right, .. } => {
            out.push('[');
            fr_key(left, out);
            out.push('|');
            fr_key(right, out);
            out.push(']');
        }
        Fr::Bind { act, callee, .. } => out.push_str(&format!("b{}:{}", act, callee)),
    }
}
