//! Symbolic layer: weakest preconditions over straight-line code, path
//! conditions for record transitions, and deterministic speculative
//! execution of one function body under supplied ghost outputs.

use std::collections::BTreeMap;
use std::fmt;

use crate::blocks::{BlockId, BlockTable, CondId, PathEntry};
use crate::formula::{DirectionAtom, Formula, LinTerm, NilAtom, NodeVar, Sym};
use crate::lang::ast::*;

/// Record valuation: initial parameter values plus speculative outputs of
/// the call blocks of one function.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Valuation {
    pub params: BTreeMap<String, i64>,
    pub ghosts: BTreeMap<(BlockId, usize), i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    UnknownSymbol(Sym),
    MissingGhost(BlockId),
    NotStraightLine,
}

impl fmt::Display for SemanticsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemanticsError::UnknownSymbol(s) => write!(f, "symbol {} is not in scope", s),
            SemanticsError::MissingGhost(b) => {
                write!(f, "no speculative output supplied for call block {}", b)
            }
            SemanticsError::NotStraightLine => {
                write!(f, "weakest preconditions require straight-line code")
            }
        }
    }
}

impl std::error::Error for SemanticsError {}

/// Translates an integer expression into a linear term over program-variable
/// symbols (`Sym::Free`), initial field symbols, and return-slot symbols.
pub fn aexpr_term(e: &AExpr) -> LinTerm {
    match e {
        AExpr::Const(c) => LinTerm::constant(*c),
        AExpr::Var(v) => LinTerm::sym(Sym::Free(v.clone())),
        AExpr::Field(le, f) => LinTerm::sym(Sym::Field {
            node: NodeVar::U,
            steps: le.steps.clone(),
            field: f.clone(),
        }),
        AExpr::Add(a, b) => aexpr_term(a).add(&aexpr_term(b)),
        AExpr::Sub(a, b) => aexpr_term(a).sub(&aexpr_term(b)),
    }
}

fn lhs_sym(lhs: &Lhs) -> Sym {
    match lhs {
        Lhs::Var(v) => Sym::Free(v.clone()),
        Lhs::Ret(k) => Sym::Slot(*k),
        Lhs::Field(le, f) => Sym::Field {
            node: NodeVar::U,
            steps: le.steps.clone(),
            field: f.clone(),
        },
    }
}

fn subst_formula(phi: &Formula, sym: &Sym, by: &LinTerm) -> Formula {
    match phi {
        Formula::Ge(t) => Formula::Ge(t.subst(sym, by)),
        Formula::Eq(t) => Formula::Eq(t.subst(sym, by)),
        Formula::Not(x) => subst_formula(x, sym, by).negate(),
        Formula::And(xs) => {
            Formula::and(xs.iter().map(|x| subst_formula(x, sym, by)).collect())
        }
        Formula::Or(xs) => Formula::or(xs.iter().map(|x| subst_formula(x, sym, by)).collect()),
        other => other.clone(),
    }
}

/// Backward weakest precondition over straight-line path entries: plain
/// substitution for assignments, ghost substitution for call results.
/// Assume entries carry no state change; joined conditionals are rejected.
pub fn wp(entries: &[PathEntry], phi: Formula, table: &BlockTable) -> Result<Formula, SemanticsError> {
    let mut phi = phi;
    for e in entries.iter().rev() {
        match e {
            PathEntry::Straight(assgns) => {
                for a in assgns.iter().rev() {
                    phi = subst_formula(&phi, &lhs_sym(&a.lhs), &aexpr_term(&a.rhs));
                }
            }
            PathEntry::SpeculatedCall(id) => {
                if let Block::Call { results, .. } = &table.info(*id).ast {
                    for (k, r) in results.iter().enumerate() {
                        phi = subst_formula(
                            &phi,
                            &Sym::Free(r.clone()),
                            &LinTerm::sym(Sym::MGhost { call: *id, slot: k }),
                        );
                    }
                }
            }
            PathEntry::Assume { .. } => {}
            PathEntry::CompletedIf { .. } => return Err(SemanticsError::NotStraightLine),
        }
    }
    Ok(phi)
}

/// Rewrites leftover program-variable symbols into M-symbols of `func`
/// (parameters to their initial images, anything undefined to 0).
pub fn close_over_m(phi: &Formula, func: &Function) -> Formula {
    let mut phi = phi.clone();
    for sym in phi.symbols() {
        match &sym {
            Sym::Free(name) => {
                let by = if func.int_params.contains(name) {
                    LinTerm::sym(Sym::MParam { func: func.name.clone(), name: name.clone() })
                } else {
                    LinTerm::constant(0)
                };
                phi = subst_formula(&phi, &sym, &by);
            }
            Sym::Slot(_) => {
                phi = subst_formula(&phi, &sym, &LinTerm::constant(0));
            }
            _ => {}
        }
    }
    phi
}

/// Forward symbolic state along one straight-line route through a path.
#[derive(Debug, Clone)]
pub struct SymEnv {
    vars: BTreeMap<String, LinTerm>,
    fields: BTreeMap<(Vec<Dir>, String), LinTerm>,
    slots: BTreeMap<usize, LinTerm>,
}

impl SymEnv {
    /// Entry state of a function activation under the record valuation M.
    pub fn entry(func: &Function) -> SymEnv {
        let mut vars = BTreeMap::new();
        for p in &func.int_params {
            vars.insert(
                p.clone(),
                LinTerm::sym(Sym::MParam { func: func.name.clone(), name: p.clone() }),
            );
        }
        SymEnv { vars, fields: BTreeMap::new(), slots: BTreeMap::new() }
    }

    pub fn eval(&self, e: &AExpr) -> LinTerm {
        match e {
            AExpr::Const(c) => LinTerm::constant(*c),
            AExpr::Var(v) => match self.vars.get(v) {
                Some(t) => t.clone(),
                None => LinTerm::constant(0), // uninitialized local
            },
            AExpr::Field(le, f) => {
                let key = (le.steps.clone(), f.clone());
                match self.fields.get(&key) {
                    Some(t) => t.clone(),
                    None => LinTerm::sym(Sym::Field {
                        node: NodeVar::U,
                        steps: le.steps.clone(),
                        field: f.clone(),
                    }),
                }
            }
            AExpr::Add(a, b) => self.eval(a).add(&self.eval(b)),
            AExpr::Sub(a, b) => self.eval(a).sub(&self.eval(b)),
        }
    }

    pub fn eval_cond(&self, b: &BExpr) -> Formula {
        match b {
            BExpr::True => Formula::True,
            BExpr::NilTest(le) => {
                Formula::Nil(NilAtom { node: NodeVar::U, steps: le.steps.clone() })
            }
            BExpr::Positive(e) => Formula::positive(self.eval(e)),
            BExpr::Not(x) => self.eval_cond(x).negate(),
            BExpr::And(x, y) => Formula::and(vec![self.eval_cond(x), self.eval_cond(y)]),
        }
    }

    fn assign(&mut self, lhs: &Lhs, value: LinTerm) {
        match lhs {
            Lhs::Var(v) => {
                self.vars.insert(v.clone(), value);
            }
            Lhs::Ret(k) => {
                self.slots.insert(*k, value);
            }
            Lhs::Field(le, f) => {
                self.fields.insert((le.steps.clone(), f.clone()), value);
            }
        }
    }
}

/// One straight-line route through a (possibly joined) path: the conditions
/// that select it and the symbolic state it produces.
#[derive(Debug, Clone)]
pub struct SymRoute {
    pub feasibility: Formula,
    pub env: SymEnv,
}

pub fn symbolic_routes(entries: &[PathEntry], table: &BlockTable, func: &Function) -> Vec<SymRoute> {
    let mut routes = vec![SymRoute { feasibility: Formula::True, env: SymEnv::entry(func) }];
    extend_routes(entries, table, &mut routes);
    routes
}

fn extend_routes(entries: &[PathEntry], table: &BlockTable, routes: &mut Vec<SymRoute>) {
    for e in entries {
        match e {
            PathEntry::Straight(assgns) => {
                for r in routes.iter_mut() {
                    for a in assgns {
                        let value = r.env.eval(&a.rhs);
                        r.env.assign(&a.lhs, value);
                    }
                }
            }
            PathEntry::SpeculatedCall(id) => {
                if let Block::Call { results, .. } = &table.info(*id).ast {
                    for r in routes.iter_mut() {
                        for (k, name) in results.iter().enumerate() {
                            r.env.vars.insert(
                                name.clone(),
                                LinTerm::sym(Sym::MGhost { call: *id, slot: k }),
                            );
                        }
                    }
                }
            }
            // governing conditions are separate conjuncts of the path
            // condition; they select no route and change no state
            PathEntry::Assume { .. } => {}
            PathEntry::CompletedIf { cond, then_entries, else_entries } => {
                let c = &table.cond(*cond).cond;
                let mut out = Vec::new();
                for r in routes.drain(..) {
                    let mut t = r.clone();
                    t.feasibility =
                        Formula::and(vec![t.feasibility.clone(), t.env.eval_cond(c)]);
                    let mut tv = vec![t];
                    extend_routes(then_entries, table, &mut tv);
                    out.extend(tv);

                    let mut f = r;
                    f.feasibility =
                        Formula::and(vec![f.feasibility.clone(), f.env.eval_cond(c).negate()]);
                    let mut fv = vec![f];
                    extend_routes(else_entries, table, &mut fv);
                    out.extend(fv);
                }
                *routes = out;
            }
        }
    }
}

/// The signed weakest precondition of one condition occurrence, expressed
/// over M-symbols, initial field symbols, and structural nil atoms.
pub fn wp_condition(table: &BlockTable, cond: CondId, value: bool) -> Formula {
    let info = table.cond(cond);
    let func = &table.program.functions[info.func];
    let routes = symbolic_routes(&info.path, table, func);
    let mut cases = Vec::new();
    for r in routes {
        let mut signed = r.env.eval_cond(&info.cond);
        if !value {
            signed = signed.negate();
        }
        cases.push(Formula::and(vec![r.feasibility, signed]));
    }
    Formula::or(cases)
}

/// Match constraint for the record transition created by block `q` (inside
/// the function that call block `s` targets): the structural direction plus
/// equations tying the callee's initial parameter values to the argument
/// expressions' symbolic values at the call site.
pub fn match_constraint(table: &BlockTable, s: BlockId, q: BlockId) -> (DirectionAtom, Formula) {
    debug_assert!(table.callees(s).map(|cs| cs.contains(&q)).unwrap_or(false));
    let qinfo = table.info(q);
    let host = &table.program.functions[qinfo.func];
    match &qinfo.ast {
        Block::Straight(_) => (DirectionAtom::SameNode, Formula::True),
        Block::Call { callee, loc_arg, int_args, .. } => {
            let dir = DirectionAtom::from(
                crate::blocks::Disp::of_steps(&loc_arg.steps)
                    .expect("deep call paths are rejected upstream"),
            );
            let callee_params: Vec<String> = table.params_of(callee).to_vec();
            let routes = symbolic_routes(&qinfo.path, table, host);
            let mut cases = Vec::new();
            for r in routes {
                let mut eqs = vec![r.feasibility.clone()];
                for (k, p) in callee_params.iter().enumerate() {
                    let lhs = LinTerm::sym(Sym::NParam { func: callee.clone(), name: p.clone() });
                    let rhs = match int_args.get(k) {
                        Some(e) => r.env.eval(e),
                        None => LinTerm::constant(0),
                    };
                    eqs.push(Formula::eq_terms(&lhs, &rhs));
                }
                cases.push(Formula::and(eqs));
            }
            (dir, Formula::or(cases))
        }
    }
}

/// Constraint under which record (s, u, M) reaches record (q, v, N).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCond {
    pub direction: DirectionAtom,
    pub formula: Formula,
}

impl fmt::Display for PathCond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} && ({})", self.formula, self.direction)
    }
}

pub fn path_condition(table: &BlockTable, s: BlockId, q: BlockId) -> PathCond {
    let (direction, match_formula) = match_constraint(table, s, q);
    let mut parts = vec![match_formula];
    for (cond, value) in table.governing_conds(q) {
        parts.push(wp_condition(table, cond, value));
    }
    PathCond { direction, formula: Formula::and(parts) }
}

/// Nil-ness and initial field values of the node neighbourhood a
/// speculative execution runs on.
pub trait NilOracle {
    fn is_nil(&self, steps: &[Dir]) -> bool;
    fn field(&self, steps: &[Dir], name: &str) -> i64 {
        let _ = (steps, name);
        0
    }
}

/// Fixed nil-ness map; anything unspecified is nil. Fields default to 0.
#[derive(Debug, Clone, Default)]
pub struct FixedShape {
    pub non_nil: Vec<Vec<Dir>>,
}

impl FixedShape {
    pub fn node_only() -> Self {
        FixedShape { non_nil: vec![Vec::new()] }
    }
}

impl NilOracle for FixedShape {
    fn is_nil(&self, steps: &[Dir]) -> bool {
        !self.non_nil.iter().any(|p| p == steps)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecStep {
    pub block: BlockId,
    pub displacement: Vec<Dir>,
    pub vals: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpecTrace {
    pub steps: Vec<SpecStep>,
    pub returns: Vec<i64>,
}

/// Deterministic replay of one function body: calls yield their supplied
/// ghost outputs, branches evaluate concretely, parallel arms run left
/// then right.
pub fn speculative_execute(
    table: &BlockTable,
    func: &str,
    valuation: &Valuation,
    shape: &dyn NilOracle,
) -> Result<SpecTrace, SemanticsError> {
    let f = table
        .program
        .function(func)
        .unwrap_or_else(|| panic!("unknown function {}", func));
    let fi = table.func_index(func).unwrap();
    let mut st = ExecState {
        vars: valuation.params.clone(),
        fields: BTreeMap::new(),
        slots: vec![0; f.return_arity],
        trace: SpecTrace::default(),
        table,
        fi,
        ghosts: &valuation.ghosts,
        shape,
    };
    st.run(&f.body)?;
    let mut trace = st.trace;
    trace.returns = st.slots;
    Ok(trace)
}

struct ExecState<'a> {
    vars: BTreeMap<String, i64>,
    fields: BTreeMap<(Vec<Dir>, String), i64>,
    slots: Vec<i64>,
    trace: SpecTrace,
    table: &'a BlockTable,
    fi: usize,
    ghosts: &'a BTreeMap<(BlockId, usize), i64>,
    shape: &'a dyn NilOracle,
}

impl<'a> ExecState<'a> {
    fn run(&mut self, s: &Stmt) -> Result<(), SemanticsError> {
        match s {
            Stmt::Block(b) => self.run_block(b),
            Stmt::If { cond, then, els, .. } => {
                if self.eval_cond(cond) {
                    self.run(then)
                } else {
                    self.run(els)
                }
            }
            Stmt::Seq(a, b) | Stmt::Par(a, b) => {
                self.run(a)?;
                self.run(b)
            }
            Stmt::Empty => Ok(()),
        }
    }

    fn run_block(&mut self, b: &Block) -> Result<(), SemanticsError> {
        // identify the block by structural match within the function
        let id = self
            .table
            .blocks_of_index(self.fi)
            .iter()
            .copied()
            .find(|&bid| self.table.info(bid).ast == *b)
            .expect("block belongs to its own function");
        match b {
            Block::Call { results, loc_arg, .. } => {
                for (k, name) in results.iter().enumerate() {
                    let value = *self
                        .ghosts
                        .get(&(id, k))
                        .ok_or(SemanticsError::MissingGhost(id))?;
                    self.vars.insert(name.clone(), value);
                }
                self.trace.steps.push(SpecStep {
                    block: id,
                    displacement: loc_arg.steps.clone(),
                    vals: self.vars.clone(),
                });
            }
            Block::Straight(assgns) => {
                for a in assgns {
                    let value = self.eval(&a.rhs);
                    match &a.lhs {
                        Lhs::Var(v) => {
                            self.vars.insert(v.clone(), value);
                        }
                        Lhs::Ret(k) => {
                            if *k < self.slots.len() {
                                self.slots[*k] = value;
                            }
                        }
                        Lhs::Field(le, f) => {
                            self.fields.insert((le.steps.clone(), f.clone()), value);
                        }
                    }
                }
                self.trace.steps.push(SpecStep {
                    block: id,
                    displacement: Vec::new(),
                    vals: self.vars.clone(),
                });
            }
        }
        Ok(())
    }

    fn eval(&self, e: &AExpr) -> i64 {
        match e {
            AExpr::Const(c) => *c,
            AExpr::Var(v) => self.vars.get(v).copied().unwrap_or(0),
            AExpr::Field(le, f) => {
                let key = (le.steps.clone(), f.clone());
                match self.fields.get(&key) {
                    Some(v) => *v,
                    None => self.shape.field(&le.steps, f),
                }
            }
            AExpr::Add(a, b) => self.eval(a) + self.eval(b),
            AExpr::Sub(a, b) => self.eval(a) - self.eval(b),
        }
    }

    fn eval_cond(&self, b: &BExpr) -> bool {
        match b {
            BExpr::True => true,
            BExpr::NilTest(le) => self.shape.is_nil(&le.steps),
            BExpr::Positive(e) => self.eval(e) > 0,
            BExpr::Not(x) => !self.eval_cond(x),
            BExpr::And(x, y) => self.eval_cond(x) && self.eval_cond(y),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::build_block_table;
    use crate::lang::{load_program, ODD_EVEN_SRC};

    fn term_var(name: &str) -> LinTerm {
        LinTerm::sym(Sym::Free(name.to_string()))
    }

    #[test]
    fn wp_single_substitution() {
        // wp(v = v + 1, v > 0) = v + 1 > 0
        let table = build_block_table(&load_program("Main(n) { return 0 }").unwrap());
        let assgn = Assgn {
            lhs: Lhs::Var("v".into()),
            rhs: AExpr::Add(Box::new(AExpr::var("v")), Box::new(AExpr::Const(1))),
            span: Span::default(),
        };
        let phi = Formula::positive(term_var("v"));
        let got = wp(&[PathEntry::Straight(vec![assgn])], phi, &table).unwrap();
        // v + 1 > 0  ==  v + 1 - 1 >= 0  ==  v >= 0
        let expect = Formula::Ge(term_var("v"));
        assert_eq!(got, expect);
    }

    /// The worked example: through `n.f = p + 1 ; r1 = r0`, the negated test
    /// `n.f < r1` becomes M(p) + 1 >= M(r0).
    #[test]
    fn wp_through_field_and_copy() {
        let src = "Func(n, p, r0) {
            if (n == nil) { return 0 } else {
              n.f = p + 1
              r1 = r0
              if (n.f < r1) { return 0 } else { x = Func(n.l, p, r0) return x }
            }
        }
        Main(n) { y = Func(n, 0, 0) return y }";
        let p = load_program(src).unwrap();
        let table = build_block_table(&p);
        // the inner condition is c1 (c0 is the nil test)
        let phi = wp_condition(&table, CondId(1), false);
        let func = p.function("Func").unwrap();
        let closed = close_over_m(&phi, func);
        // expected: !(M(r0) - (M(p)+1) > 0)  ==  M(p) + 1 - M(r0) >= 0
        let m = |name: &str| {
            LinTerm::sym(Sym::MParam { func: "Func".into(), name: name.into() })
        };
        let expect = Formula::Ge(m("p").add(&LinTerm::constant(1)).sub(&m("r0")));
        assert_eq!(closed, expect, "got {}", closed);
    }

    #[test]
    fn wp_call_rule_substitutes_ghost() {
        // through `ls = Even(n.l)` (block s1), ls + rs + 1 > 0 becomes
        // M(s1) + rs + 1 > 0
        let p = load_program(ODD_EVEN_SRC).unwrap();
        let table = build_block_table(&p);
        let phi = Formula::positive(
            term_var("ls").add(&term_var("rs")).add(&LinTerm::constant(1)),
        );
        let got = wp(&[PathEntry::SpeculatedCall(BlockId(1))], phi.clone(), &table).unwrap();
        let expect = Formula::positive(
            LinTerm::sym(Sym::MGhost { call: BlockId(1), slot: 0 })
                .add(&term_var("rs"))
                .add(&LinTerm::constant(1)),
        );
        assert_eq!(got, expect);

        // numeric cross-check under 20 random-ish valuations
        for seed in 0..20i64 {
            let ls = seed * 7 % 13 - 6;
            let rs = seed * 5 % 11 - 5;
            let mut env1 = BTreeMap::new();
            env1.insert(Sym::Free("ls".into()), ls);
            env1.insert(Sym::Free("rs".into()), rs);
            let mut env2 = BTreeMap::new();
            env2.insert(Sym::MGhost { call: BlockId(1), slot: 0 }, ls);
            env2.insert(Sym::Free("rs".into()), rs);
            assert_eq!(phi.eval_int(&env1), expect.eval_int(&env2));
        }
    }

    #[test]
    fn nil_condition_wp_is_structural_only() {
        let p = load_program(ODD_EVEN_SRC).unwrap();
        let table = build_block_table(&p);
        // c1 is Even's nil test; on Path(s5) it occurs negatively
        let phi = wp_condition(&table, CondId(1), false);
        assert!(!phi.has_integer_atoms(), "{}", phi);
        assert!(phi.has_structural_atoms());
    }

    #[test]
    fn match_constraint_directions() {
        let p = load_program(ODD_EVEN_SRC).unwrap();
        let table = build_block_table(&p);
        // s2 (rs = Even(n.r)) targeted from s5 (a call to Odd): v = u.r
        let (dir, _) = match_constraint(&table, BlockId(5), BlockId(2));
        assert_eq!(dir, DirectionAtom::RightChild);
        // s9 calls Even on the same node, reached from the entry pseudo-call
        // is exercised in the mso module; here check a non-call target
        let (dir3, f3) = match_constraint(&table, BlockId(8), BlockId(3));
        assert_eq!(dir3, DirectionAtom::SameNode);
        assert_eq!(f3, Formula::True);
    }

    #[test]
    fn match_constraint_constant_args() {
        let src = "A(n, p) {
            if (n == nil) { return 0 } else { x = A(n.r, 0) return x + p }
        }
        Main(n) { y = A(n, 1) return y }";
        let p = load_program(src).unwrap();
        let table = build_block_table(&p);
        // the self call `x = A(n.r, 0)` is s1 (s0 = return 0)
        let (dir, phi) = match_constraint(&table, BlockId(1), BlockId(1));
        assert_eq!(dir, DirectionAtom::RightChild);
        // N(p) = 0
        let n_p = Sym::NParam { func: "A".into(), name: "p".into() };
        let mut env = BTreeMap::new();
        env.insert(n_p.clone(), 0);
        // structural feasibility conjunct aside, N(p)=0 must hold
        let sat = phi.eval_full(&env, &|_| false);
        assert_eq!(sat, Some(true), "{}", phi);
        env.insert(n_p, 1);
        assert_eq!(phi.eval_full(&env, &|_| false), Some(false));
    }

    #[test]
    fn speculative_execution_of_even_with_ghosts() {
        let p = load_program(ODD_EVEN_SRC).unwrap();
        let table = build_block_table(&p);
        let mut val = Valuation::default();
        val.ghosts.insert((BlockId(5), 0), 3);
        val.ghosts.insert((BlockId(6), 0), 0);
        let shape = FixedShape::node_only();
        let trace = speculative_execute(&table, "Even", &val, &shape).unwrap();
        let blocks: Vec<String> =
            trace.steps.iter().map(|s| s.block.to_string()).collect();
        assert_eq!(blocks, ["s5", "s6", "s7"]);
        assert_eq!(trace.returns, vec![3]);
    }

    #[test]
    fn speculative_execution_on_nil_node() {
        let p = load_program(ODD_EVEN_SRC).unwrap();
        let table = build_block_table(&p);
        let val = Valuation::default();
        let shape = FixedShape::default(); // everything nil
        let trace = speculative_execute(&table, "Odd", &val, &shape).unwrap();
        let blocks: Vec<String> =
            trace.steps.iter().map(|s| s.block.to_string()).collect();
        assert_eq!(blocks, ["s0"]);
        assert_eq!(trace.returns, vec![0]);
    }

    #[test]
    fn missing_ghost_is_reported() {
        let p = load_program(ODD_EVEN_SRC).unwrap();
        let table = build_block_table(&p);
        let val = Valuation::default();
        let shape = FixedShape::node_only();
        let err = speculative_execute(&table, "Even", &val, &shape).unwrap_err();
        assert_eq!(err, SemanticsError::MissingGhost(BlockId(5)));
    }

    #[test]
    fn speculative_execution_is_deterministic() {
        let p = load_program(ODD_EVEN_SRC).unwrap();
        let table = build_block_table(&p);
        let mut val = Valuation::default();
        val.ghosts.insert((BlockId(5), 0), 3);
        val.ghosts.insert((BlockId(6), 0), 4);
        let shape = FixedShape::node_only();
        let a = speculative_execute(&table, "Even", &val, &shape).unwrap();
        let b = speculative_execute(&table, "Even", &val, &shape).unwrap();
        assert_eq!(a, b);
    }

    /// The full worked example: PathCond for the recursive call is
    /// M(p)+1 >= M(r0) together with v = u.l.
    #[test]
    fn path_condition_worked_example() {
        let src = "Func(n, p, r0) {
            if (n == nil) { return 0 } else {
              n.f = p + 1
              r1 = r0
              if (n.f < r1) { return 0 } else { x = Func(n.l, p, r0) return x }
            }
        }
        Main(n) { y = Func(n, 0, 0) return y }";
        let p = load_program(src).unwrap();
        let table = build_block_table(&p);
        // blocks in Func: s0 = return 0 (nil), s1 = [n.f=..; r1=..],
        // s2 = return 0 (then), s3 = call Func(n.l), s4 = return x
        let target = BlockId(3);
        assert!(table.info(target).ast.is_call());
        let pc = path_condition(&table, target, target);
        assert_eq!(pc.direction, DirectionAtom::LeftChild);
        // strip structural atoms, close over M, and check the integer part
        // equals M(p) + 1 - M(r0) >= 0 on a grid of valuations
        let func = p.function("Func").unwrap();
        let closed = close_over_m(&pc.formula, func);
        let m = |name: &str| Sym::MParam { func: "Func".into(), name: name.into() };
        for pv in -4..=4 {
            for r0v in -4..=4 {
                let mut env = BTreeMap::new();
                env.insert(m("p"), pv);
                env.insert(m("r0"), r0v);
                // N-params equal M-params on this self-call
                env.insert(Sym::NParam { func: "Func".into(), name: "p".into() }, pv);
                env.insert(Sym::NParam { func: "Func".into(), name: "r0".into() }, r0v);
                let got = closed.eval_full(&env, &|_| false).unwrap();
                assert_eq!(got, pv + 1 >= r0v, "p={} r0={} : {}", pv, r0v, closed);
            }
        }
    }
}
