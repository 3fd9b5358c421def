//! Linear integer arithmetic decisions (omega-test elimination over a DNF
//! expansion) and the consistent-condition-set computation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::blocks::{BlockTable, CondId};
use crate::formula::{Formula, LinTerm, Sym};
use crate::semantics::{close_over_m, wp_condition};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatVerdict {
    Sat(BTreeMap<Sym, i64>),
    Unsat,
    Unknown(String),
}

impl SatVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatVerdict::Sat(_))
    }
}

impl fmt::Display for SatVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SatVerdict::Sat(m) => {
                write!(f, "sat")?;
                if !m.is_empty() {
                    let parts: Vec<String> =
                        m.iter().map(|(s, v)| format!("{} = {}", s, v)).collect();
                    write!(f, " [{}]", parts.join(", "))?;
                }
                Ok(())
            }
            SatVerdict::Unsat => write!(f, "unsat"),
            SatVerdict::Unknown(r) => write!(f, "unknown ({})", r),
        }
    }
}

/// A conjunction of linear constraints: terms required >= 0 and terms
/// required = 0.
#[derive(Debug, Clone, Default)]
struct Conjunct {
    ges: Vec<LinTerm>,
    eqs: Vec<LinTerm>,
}

/// Expands to disjunctive normal form. Structural atoms are rejected —
/// callers strip or resolve them first.
fn dnf(
    phi: &Formula,
    negated: bool,
    out: &mut Vec<Conjunct>,
    budget: &mut usize,
) -> Result<(), String> {
    if *budget == 0 {
        return Err("dnf expansion budget exceeded".to_string());
    }
    match (phi, negated) {
        (Formula::True, false) | (Formula::False, true) => out.push(Conjunct::default()),
        (Formula::True, true) | (Formula::False, false) => {}
        (Formula::Ge(t), false) => out.push(Conjunct { ges: vec![t.clone()], eqs: vec![] }),
        (Formula::Ge(t), true) => {
            // !(t >= 0)  ==  -t - 1 >= 0
            let mut neg = t.scale(-1);
            neg.constant -= 1;
            out.push(Conjunct { ges: vec![neg], eqs: vec![] });
        }
        (Formula::Eq(t), false) => out.push(Conjunct { ges: vec![], eqs: vec![t.clone()] }),
        (Formula::Eq(t), true) => {
            // t != 0  ==  t - 1 >= 0  or  -t - 1 >= 0
            let mut hi = t.clone();
            hi.constant -= 1;
            let mut lo = t.scale(-1);
            lo.constant -= 1;
            out.push(Conjunct { ges: vec![hi], eqs: vec![] });
            out.push(Conjunct { ges: vec![lo], eqs: vec![] });
        }
        (Formula::Nil(a), _) => return Err(format!("structural atom {} in integer query", a)),
        (Formula::Not(x), n) => dnf(x, !n, out, budget)?,
        (Formula::And(xs), false) | (Formula::Or(xs), true) => {
            let mut acc: Vec<Conjunct> = vec![Conjunct::default()];
            for x in xs {
                let mut parts = Vec::new();
                dnf(x, negated, &mut parts, budget)?;
                let mut next = Vec::new();
                for a in &acc {
                    for p in &parts {
                        *budget = budget.saturating_sub(1);
                        if *budget == 0 {
                            return Err("dnf expansion budget exceeded".to_string());
                        }
                        let mut merged = a.clone();
                        merged.ges.extend(p.ges.iter().cloned());
                        merged.eqs.extend(p.eqs.iter().cloned());
                        next.push(merged);
                    }
                }
                acc = next;
            }
            out.extend(acc);
        }
        (Formula::Or(xs), false) | (Formula::And(xs), true) => {
            for x in xs {
                dnf(x, negated, out, budget)?;
            }
        }
    }
    Ok(())
}

/// Complete satisfiability for quantifier-free linear integer arithmetic.
pub fn lia_satisfiable(phi: &Formula) -> SatVerdict {
    let mut conjuncts = Vec::new();
    let mut budget = 200_000usize;
    if let Err(e) = dnf(phi, false, &mut conjuncts, &mut budget) {
        return SatVerdict::Unknown(e);
    }
    for c in conjuncts {
        if let Some(model) = solve(&c) {
            debug_assert_eq!(
                phi.eval_int(&restrict(&model, phi)),
                Some(true),
                "model {:?} must satisfy {}",
                model,
                phi
            );
            return SatVerdict::Sat(restrict(&model, phi));
        }
    }
    SatVerdict::Unsat
}

fn restrict(model: &BTreeMap<Sym, i64>, phi: &Formula) -> BTreeMap<Sym, i64> {
    let mut out = BTreeMap::new();
    for s in phi.symbols() {
        out.insert(s.clone(), model.get(&s).copied().unwrap_or(0));
    }
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn symmetric_mod(a: i64, m: i64) -> i64 {
    let r = a.rem_euclid(m);
    if 2 * r >= m {
        r - m
    } else {
        r
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + if a.rem_euclid(b) != 0 { 1 } else { 0 }
}

fn div_floor(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

const SOLVE_DEPTH_LIMIT: usize = 128;

/// Omega-test satisfiability of one conjunct with full model
/// reconstruction. Equalities eliminate through unit substitution or the
/// coefficient-reduction substitution; inequalities eliminate through the
/// real/dark shadow with splinter enumeration.
fn solve(c: &Conjunct) -> Option<BTreeMap<Sym, i64>> {
    solve_rec(c.clone(), 0)
}

fn solve_rec(mut c: Conjunct, depth: usize) -> Option<BTreeMap<Sym, i64>> {
    if depth > SOLVE_DEPTH_LIMIT {
        return None;
    }

    // gcd screening
    let mut eqs = Vec::new();
    for t in &c.eqs {
        if t.is_constant() {
            if t.constant != 0 {
                return None;
            }
            continue;
        }
        let g = t.coeffs.values().fold(0, |acc, &k| gcd(acc, k));
        if t.constant % g != 0 {
            return None;
        }
        eqs.push(t.scale_exact_div(g));
    }
    c.eqs = eqs;
    let mut ges = Vec::new();
    for t in &c.ges {
        if t.is_constant() {
            if t.constant < 0 {
                return None;
            }
            continue;
        }
        let g = t.coeffs.values().fold(0, |acc, &k| gcd(acc, k));
        let mut s = LinTerm {
            coeffs: t.coeffs.iter().map(|(s, k)| (s.clone(), k / g)).collect(),
            constant: div_floor(t.constant, g),
        };
        s.coeffs.retain(|_, k| *k != 0);
        ges.push(s);
    }
    c.ges = ges;

    // equality elimination
    if let Some(eq) = c.eqs.first().cloned() {
        // unit coefficient: direct substitution
        if let Some((sym, &a)) = eq.coeffs.iter().find(|(_, k)| k.abs() == 1) {
            let sym = sym.clone();
            let mut rest = eq.clone();
            rest.coeffs.remove(&sym);
            let by = rest.scale(-a.signum()); // sym = by
            let mut reduced = Conjunct::default();
            for (i, t) in c.eqs.iter().enumerate() {
                if i != 0 {
                    reduced.eqs.push(t.subst(&sym, &by));
                }
            }
            for t in &c.ges {
                reduced.ges.push(t.subst(&sym, &by));
            }
            let mut model = solve_rec(reduced, depth + 1)?;
            let value = eval_filling(&by, &mut model);
            model.insert(sym, value);
            return Some(model);
        }
        // coefficient reduction: pick the smallest |a_k|, m = |a_k| + 1,
        // and resolve x_k against a fresh variable sigma
        let (sym, &ak) = eq.coeffs.iter().min_by_key(|(_, k)| k.abs()).unwrap();
        let sym = sym.clone();
        let m = ak.abs() + 1;
        let used: BTreeSet<Sym> = c
            .eqs
            .iter()
            .chain(c.ges.iter())
            .flat_map(|t| t.coeffs.keys().cloned())
            .collect();
        let sigma = fresh_symbol(&used);
        // m*sigma = sum_i mod^(a_i, m) x_i + mod^(const, m), where
        // mod^(a_k, m) = -sign(a_k); solving for x_k:
        // x_k = sign(a_k) * ( -m*sigma + sum_{i!=k} mod^(a_i,m) x_i + mod^(c,m) )
        let mut rhs = LinTerm::sym(sigma).scale(-m);
        for (s2, &k) in &eq.coeffs {
            if *s2 == sym {
                continue;
            }
            let mk = symmetric_mod(k, m);
            if mk != 0 {
                rhs = rhs.add(&LinTerm::sym(s2.clone()).scale(mk));
            }
        }
        rhs.constant += symmetric_mod(eq.constant, m);
        let by = rhs.scale(ak.signum()); // sym = by
        let mut reduced = Conjunct::default();
        for t in &c.eqs {
            reduced.eqs.push(t.subst(&sym, &by));
        }
        for t in &c.ges {
            reduced.ges.push(t.subst(&sym, &by));
        }
        let mut model = solve_rec(reduced, depth + 1)?;
        let value = eval_filling(&by, &mut model);
        model.insert(sym, value);
        return Some(model);
    }

    // inequalities only
    let syms: BTreeSet<Sym> =
        c.ges.iter().flat_map(|t| t.coeffs.keys().cloned()).collect();
    let Some(sym) = pick_ineq_symbol(&c, &syms) else {
        return Some(BTreeMap::new()); // no constraints left
    };
    let mut lowers = Vec::new(); // a*sym >= alpha, a > 0
    let mut uppers = Vec::new(); // b*sym <= beta,  b > 0
    let mut rest = Conjunct::default();
    for t in &c.ges {
        match t.coeffs.get(&sym) {
            None => rest.ges.push(t.clone()),
            Some(&k) if k > 0 => {
                let mut r = t.clone();
                r.coeffs.remove(&sym);
                lowers.push((k, r.scale(-1)));
            }
            Some(&k) => {
                let mut r = t.clone();
                r.coeffs.remove(&sym);
                uppers.push((-k, r));
            }
        }
    }
    if lowers.is_empty() || uppers.is_empty() {
        let mut model = solve_rec(rest, depth + 1)?;
        let value = one_sided_value(&lowers, &uppers, &mut model);
        model.insert(sym, value);
        return Some(model);
    }
    let exact = lowers.iter().all(|&(a, _)| a == 1) || uppers.iter().all(|&(b, _)| b == 1);
    let mut shadow = rest.clone();
    for &(a, ref alpha) in &lowers {
        for &(b, ref beta) in &uppers {
            let mut s = beta.scale(a).sub(&alpha.scale(b));
            if !exact {
                s.constant -= (a - 1) * (b - 1);
            }
            shadow.ges.push(s);
        }
    }
    if let Some(mut model) = solve_rec(shadow, depth + 1) {
        if let Some(value) = boxed_value(&lowers, &uppers, &mut model) {
            model.insert(sym, value);
            return Some(model);
        }
    }
    if exact {
        return None;
    }
    // splinters: a*sym pinned close above some lower bound
    let bmax = uppers.iter().map(|&(b, _)| b).max().unwrap();
    for &(a, ref alpha) in &lowers {
        let limit = (a * bmax - a - bmax) / bmax;
        for i in 0..=limit {
            let mut eq = LinTerm::sym(sym.clone()).scale(a).sub(alpha);
            eq.constant -= i;
            let mut candidate = c.clone();
            candidate.eqs.push(eq);
            if let Some(model) = solve_rec(candidate, depth + 1) {
                return Some(model);
            }
        }
    }
    None
}

fn pick_ineq_symbol(c: &Conjunct, syms: &BTreeSet<Sym>) -> Option<Sym> {
    // prefer a symbol whose elimination is exact
    for s in syms {
        let mut lo_unit = true;
        let mut hi_unit = true;
        for t in &c.ges {
            if let Some(&k) = t.coeffs.get(s) {
                if k > 0 && k != 1 {
                    lo_unit = false;
                }
                if k < 0 && k != -1 {
                    hi_unit = false;
                }
            }
        }
        if lo_unit || hi_unit {
            return Some(s.clone());
        }
    }
    syms.iter().next().cloned()
}

fn eval_filling(t: &LinTerm, model: &mut BTreeMap<Sym, i64>) -> i64 {
    let mut acc = t.constant;
    for (s, k) in &t.coeffs {
        let v = *model.entry(s.clone()).or_insert(0);
        acc += k * v;
    }
    acc
}

fn one_sided_value(
    lowers: &[(i64, LinTerm)],
    uppers: &[(i64, LinTerm)],
    model: &mut BTreeMap<Sym, i64>,
) -> i64 {
    if !lowers.is_empty() {
        lowers
            .iter()
            .map(|(a, alpha)| div_ceil(eval_filling(alpha, model), *a))
            .max()
            .unwrap()
    } else if !uppers.is_empty() {
        uppers
            .iter()
            .map(|(b, beta)| div_floor(eval_filling(beta, model), *b))
            .min()
            .unwrap()
    } else {
        0
    }
}

fn boxed_value(
    lowers: &[(i64, LinTerm)],
    uppers: &[(i64, LinTerm)],
    model: &mut BTreeMap<Sym, i64>,
) -> Option<i64> {
    let lo = lowers
        .iter()
        .map(|(a, alpha)| div_ceil(eval_filling(alpha, model), *a))
        .max()
        .unwrap_or(i64::MIN);
    let hi = uppers
        .iter()
        .map(|(b, beta)| div_floor(eval_filling(beta, model), *b))
        .min()
        .unwrap_or(i64::MAX);
    if lo <= hi {
        Some(lo)
    } else {
        None
    }
}

fn fresh_symbol(used: &BTreeSet<Sym>) -> Sym {
    let mut i = 0;
    loop {
        let s = Sym::Free(format!("__omega{}", i));
        if !used.contains(&s) {
            return s;
        }
        i += 1;
    }
}

impl LinTerm {
    fn scale_exact_div(&self, g: i64) -> LinTerm {
        LinTerm {
            coeffs: self.coeffs.iter().map(|(s, k)| (s.clone(), k / g)).collect(),
            constant: self.constant / g,
        }
    }
}

/// Exact existential projection of the given symbols, available when every
/// elimination step is unit-coefficient (always the case for constraints
/// the traversal grammar produces). None when exactness cannot be kept.
pub fn project_out(phi: &Formula, syms: &BTreeSet<Sym>) -> Option<Formula> {
    if syms.is_empty() {
        return Some(phi.clone());
    }
    let mut conjuncts = Vec::new();
    let mut budget = 200_000usize;
    dnf(phi, false, &mut conjuncts, &mut budget).ok()?;
    let mut cases = Vec::new();
    'conj: for mut c in conjuncts {
        for s in syms {
            match project_one(&c, s) {
                Projected::Gone(next) => c = next,
                Projected::Empty => continue 'conj,
                Projected::Inexact => return None,
            }
        }
        let mut parts: Vec<Formula> = Vec::new();
        parts.extend(c.eqs.iter().map(|t| Formula::Eq(t.clone())));
        parts.extend(c.ges.iter().map(|t| Formula::Ge(t.clone())));
        cases.push(Formula::and(parts));
    }
    Some(Formula::or(cases))
}

enum Projected {
    Gone(Conjunct),
    Empty,
    Inexact,
}

fn project_one(c: &Conjunct, sym: &Sym) -> Projected {
    if let Some(idx) = c.eqs.iter().position(|t| t.coeffs.contains_key(sym)) {
        let eq = &c.eqs[idx];
        let a = eq.coeffs[sym];
        if a.abs() != 1 {
            return Projected::Inexact;
        }
        let mut rest = eq.clone();
        rest.coeffs.remove(sym);
        let by = rest.scale(-a.signum());
        let mut out = Conjunct::default();
        for (j, t) in c.eqs.iter().enumerate() {
            if j != idx {
                out.eqs.push(t.subst(sym, &by));
            }
        }
        for t in &c.ges {
            out.ges.push(t.subst(sym, &by));
        }
        return check_consts(out);
    }
    let mut lowers = Vec::new();
    let mut uppers = Vec::new();
    let mut rest = Conjunct { eqs: c.eqs.clone(), ges: Vec::new() };
    for t in &c.ges {
        match t.coeffs.get(sym) {
            None => rest.ges.push(t.clone()),
            Some(&k) if k > 0 => {
                let mut r = t.clone();
                r.coeffs.remove(sym);
                lowers.push((k, r.scale(-1)));
            }
            Some(&k) => {
                let mut r = t.clone();
                r.coeffs.remove(sym);
                uppers.push((-k, r));
            }
        }
    }
    if !(lowers.iter().all(|&(a, _)| a == 1) || uppers.iter().all(|&(b, _)| b == 1)) {
        return Projected::Inexact;
    }
    for &(a, ref alpha) in &lowers {
        for &(b, ref beta) in &uppers {
            rest.ges.push(beta.scale(a).sub(&alpha.scale(b)));
        }
    }
    check_consts(rest)
}

fn check_consts(mut c: Conjunct) -> Projected {
    for t in &c.eqs {
        if t.is_constant() && t.constant != 0 {
            return Projected::Empty;
        }
    }
    for t in &c.ges {
        if t.is_constant() && t.constant < 0 {
            return Projected::Empty;
        }
    }
    c.eqs.retain(|t| !t.is_constant());
    c.ges.retain(|t| !t.is_constant());
    Projected::Gone(c)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    NotEquivalent(BTreeMap<Sym, i64>),
    Unknown(String),
}

pub fn lia_equivalent(f: &Formula, g: &Formula) -> Equivalence {
    let fg = Formula::and(vec![f.clone(), g.clone().negate()]);
    match lia_satisfiable(&fg) {
        SatVerdict::Sat(model) => return Equivalence::NotEquivalent(model),
        SatVerdict::Unknown(r) => return Equivalence::Unknown(r),
        SatVerdict::Unsat => {}
    }
    let gf = Formula::and(vec![g.clone(), f.clone().negate()]);
    match lia_satisfiable(&gf) {
        SatVerdict::Sat(model) => Equivalence::NotEquivalent(model),
        SatVerdict::Unknown(r) => Equivalence::Unknown(r),
        SatVerdict::Unsat => Equivalence::Equivalent,
    }
}

/// The family of condition subsets whose signed weakest preconditions are
/// jointly satisfiable. Structural (nil-test) conditions are resolved by
/// unification: two structural conditions on the same node path must carry
/// the same sign, and a structural condition's integer content is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondSetFamily {
    pub conds: Vec<CondId>,
    pub consistent: BTreeSet<BTreeSet<CondId>>,
}

impl CondSetFamily {
    /// Projection onto the integer-content conditions: the label alphabet
    /// of the tree encoding (structural conditions inline as nil atoms).
    pub fn integer_family(&self, table: &BlockTable) -> (Vec<CondId>, BTreeSet<BTreeSet<CondId>>) {
        let int_conds: Vec<CondId> = self
            .conds
            .iter()
            .copied()
            .filter(|c| !table.cond(*c).is_structural())
            .collect();
        let mut sets = BTreeSet::new();
        for s in &self.consistent {
            sets.insert(
                s.iter().copied().filter(|c| int_conds.contains(c)).collect::<BTreeSet<_>>(),
            );
        }
        (int_conds, sets)
    }
}

pub fn consistent_condition_sets(table: &BlockTable) -> CondSetFamily {
    let conds: Vec<CondId> = table.conds().iter().map(|c| c.id).collect();
    let mut consistent = BTreeSet::new();
    let mut assignment: Vec<(CondId, bool)> = Vec::new();
    enumerate(table, &conds, 0, &mut assignment, &mut consistent);
    CondSetFamily { conds, consistent }
}

fn enumerate(
    table: &BlockTable,
    conds: &[CondId],
    i: usize,
    assignment: &mut Vec<(CondId, bool)>,
    out: &mut BTreeSet<BTreeSet<CondId>>,
) {
    if !signed_consistent(table, assignment) {
        return; // no extension can recover consistency of this prefix
    }
    if i == conds.len() {
        out.insert(assignment.iter().filter(|(_, v)| *v).map(|(c, _)| *c).collect());
        return;
    }
    for value in [true, false] {
        assignment.push((conds[i], value));
        enumerate(table, conds, i + 1, assignment, out);
        assignment.pop();
    }
}

/// Tests whether a partial signed assignment of conditions is consistent:
/// structural atoms are unified per node path, integer parts go to the
/// satisfiability procedure with shared field symbols.
pub fn signed_consistent(table: &BlockTable, assignment: &[(CondId, bool)]) -> bool {
    let mut nil_signs: BTreeMap<Vec<crate::lang::ast::Dir>, bool> = BTreeMap::new();
    let mut integer_parts: Vec<Formula> = Vec::new();
    for (cid, value) in assignment {
        let info = table.cond(*cid);
        if info.is_structural() {
            if let crate::lang::ast::BExpr::NilTest(le) = &info.cond {
                match nil_signs.get(&le.steps) {
                    Some(prev) if *prev != *value => return false,
                    _ => {
                        nil_signs.insert(le.steps.clone(), *value);
                    }
                }
            }
        } else {
            let func = &table.program.functions[info.func];
            integer_parts.push(close_over_m(&wp_condition(table, *cid, *value), func));
        }
    }
    if integer_parts.is_empty() {
        return true;
    }
    let conj = Formula::and(integer_parts);
    let resolved = resolve_structural(&conj, &nil_signs);
    match lia_satisfiable(&resolved) {
        SatVerdict::Sat(_) => true,
        SatVerdict::Unsat => false,
        SatVerdict::Unknown(_) => true, // conservative: keep the set
    }
}

/// Replaces nil atoms by true/false according to the unified signs;
/// unresolved atoms become true (over-approximation).
fn resolve_structural(
    phi: &Formula,
    signs: &BTreeMap<Vec<crate::lang::ast::Dir>, bool>,
) -> Formula {
    match phi {
        Formula::Nil(a) => match signs.get(&a.steps) {
            Some(true) => Formula::True,
            Some(false) => Formula::False,
            None => Formula::True,
        },
        Formula::Not(x) => resolve_structural(x, signs).negate(),
        Formula::And(xs) => {
            Formula::and(xs.iter().map(|x| resolve_structural(x, signs)).collect())
        }
        Formula::Or(xs) => {
            Formula::or(xs.iter().map(|x| resolve_structural(x, signs)).collect())
        }
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::build_block_table;
    use crate::lang::{load_program, ODD_EVEN_SRC};

    fn var(name: &str) -> LinTerm {
        LinTerm::sym(Sym::Free(name.to_string()))
    }

    #[test]
    fn sat_with_model() {
        let p = LinTerm::sym(Sym::MParam { func: "f".into(), name: "p".into() });
        let r0 = LinTerm::sym(Sym::MParam { func: "f".into(), name: "r0".into() });
        let phi = Formula::Ge(p.add(&LinTerm::constant(1)).sub(&r0));
        let SatVerdict::Sat(model) = lia_satisfiable(&phi) else { panic!("expected sat") };
        assert_eq!(phi.eval_int(&model), Some(true));
    }

    #[test]
    fn integer_gap_is_unsat() {
        let phi = Formula::and(vec![
            Formula::positive(var("x")),
            Formula::positive(LinTerm::constant(1).sub(&var("x"))),
        ]);
        assert_eq!(lia_satisfiable(&phi), SatVerdict::Unsat);
    }

    #[test]
    fn parity_conflict_is_unsat() {
        // 2x = y && y = 2z + 1 && x = z
        let phi = Formula::and(vec![
            Formula::Eq(var("x").scale(2).sub(&var("y"))),
            Formula::Eq(var("y").sub(&var("z").scale(2)).sub(&LinTerm::constant(1))),
            Formula::Eq(var("x").sub(&var("z"))),
        ]);
        assert_eq!(lia_satisfiable(&phi), SatVerdict::Unsat);
        // brute-force confirmation over x, z in [-10, 10]
        for x in -10i64..=10 {
            for z in -10i64..=10 {
                assert!(!(2 * x == 2 * z + 1 && x == z));
            }
        }
    }

    #[test]
    fn pure_parity_equation_is_unsat() {
        // 2x = 2y + 1 exercises the coefficient-reduction substitution
        let phi = Formula::Eq(var("x").scale(2).sub(&var("y").scale(2)).sub(&LinTerm::constant(1)));
        assert_eq!(lia_satisfiable(&phi), SatVerdict::Unsat);
    }

    #[test]
    fn dark_shadow_and_splinters() {
        // 3x >= y && 2x <= y - 1 has solutions (e.g. y=5, x=2):
        // 3*2=6 >= 5, 2*2=4 <= 4
        let phi = Formula::and(vec![
            Formula::Ge(var("x").scale(3).sub(&var("y"))),
            Formula::Ge(var("y").sub(&LinTerm::constant(1)).sub(&var("x").scale(2))),
        ]);
        let SatVerdict::Sat(model) = lia_satisfiable(&phi) else { panic!("expected sat") };
        assert_eq!(phi.eval_int(&model), Some(true));

        // 2x >= 3 && 2x <= 3 squeezes x between non-integers
        let phi2 = Formula::and(vec![
            Formula::Ge(var("x").scale(2).sub(&LinTerm::constant(3))),
            Formula::Ge(LinTerm::constant(3).sub(&var("x").scale(2))),
        ]);
        assert_eq!(lia_satisfiable(&phi2), SatVerdict::Unsat);
    }

    #[test]
    fn equivalences() {
        let f = Formula::positive(var("x"));
        assert_eq!(lia_equivalent(&f, &f), Equivalence::Equivalent);
        // x > 0 vs x >= 1 over integers
        let g = Formula::Ge(var("x").sub(&LinTerm::constant(1)));
        assert_eq!(lia_equivalent(&f, &g), Equivalence::Equivalent);
        // x >= 0 vs x > 0: witness x = 0
        let h = Formula::Ge(var("x"));
        match lia_equivalent(&h, &f) {
            Equivalence::NotEquivalent(model) => {
                assert_eq!(h.eval_int(&model), Some(true));
                assert_eq!(f.eval_int(&model), Some(false));
            }
            other => panic!("expected inequivalence, got {:?}", other),
        }
    }

    #[test]
    fn projection_unit_cases() {
        // exists y: x = y + 1 && y >= 0   ==   x >= 1
        let phi = Formula::and(vec![
            Formula::Eq(var("x").sub(&var("y")).sub(&LinTerm::constant(1))),
            Formula::Ge(var("y")),
        ]);
        let mut syms = BTreeSet::new();
        syms.insert(Sym::Free("y".into()));
        let projected = project_out(&phi, &syms).unwrap();
        let expect = Formula::Ge(var("x").sub(&LinTerm::constant(1)));
        assert_eq!(lia_equivalent(&projected, &expect), Equivalence::Equivalent);
    }

    #[test]
    fn unsat_has_no_model_in_box() {
        let phi = Formula::and(vec![
            Formula::positive(var("x").sub(&var("y"))),
            Formula::positive(var("y").sub(&var("x"))),
        ]);
        assert_eq!(lia_satisfiable(&phi), SatVerdict::Unsat);
        for x in -16i64..=16 {
            for y in -16i64..=16 {
                let mut env = BTreeMap::new();
                env.insert(Sym::Free("x".into()), x);
                env.insert(Sym::Free("y".into()), y);
                assert_eq!(phi.eval_int(&env), Some(false));
            }
        }
    }

    #[test]
    fn odd_even_consistent_sets_collapse_structurally() {
        let p = load_program(ODD_EVEN_SRC).unwrap();
        let table = build_block_table(&p);
        let fam = consistent_condition_sets(&table);
        let all: BTreeSet<CondId> = fam.conds.iter().copied().collect();
        let expected: BTreeSet<BTreeSet<CondId>> =
            [BTreeSet::new(), all].into_iter().collect();
        assert_eq!(fam.consistent, expected);
    }

    #[test]
    fn no_conditions_gives_singleton_family() {
        let table = build_block_table(&load_program("Main(n) { return 0 }").unwrap());
        let fam = consistent_condition_sets(&table);
        assert_eq!(fam.consistent.len(), 1);
        assert!(fam.consistent.contains(&BTreeSet::new()));
    }

    #[test]
    fn single_integer_condition_both_polarities() {
        let src = "Func(n, p, r0) {
            if (n == nil) { return 0 } else {
              n.f = p + 1
              r1 = r0
              if (n.f < r1) { return 0 } else { x = Func(n.l, p, r0) return x }
            }
        }
        Main(n) { y = Func(n, 0, 0) return y }";
        let table = build_block_table(&load_program(src).unwrap());
        let fam = consistent_condition_sets(&table);
        let has_with = fam.consistent.iter().any(|s| s.contains(&CondId(1)));
        let has_without = fam.consistent.iter().any(|s| !s.contains(&CondId(1)));
        assert!(has_with && has_without, "{:?}", fam.consistent);
    }

    #[test]
    fn consistent_sets_match_brute_force_on_small_programs() {
        let src = "Work(n, v) {
            if (n == nil) { return 0 } else {
              if (v > 0) {
                if (v - 1 > 0) { return 2 } else { return 1 }
              } else {
                x = Work(n.l, v + 1)
                return x
              }
            }
        }
        Main(n) { y = Work(n, 0) return y }";
        let table = build_block_table(&load_program(src).unwrap());
        let fam = consistent_condition_sets(&table);
        let conds = fam.conds.clone();
        let mut expect = BTreeSet::new();
        for mask in 0u32..(1 << conds.len()) {
            let assignment: Vec<(CondId, bool)> = conds
                .iter()
                .enumerate()
                .map(|(i, c)| (*c, mask & (1 << i) != 0))
                .collect();
            if signed_consistent(&table, &assignment) {
                expect.insert(
                    assignment.iter().filter(|(_, v)| *v).map(|(c, _)| *c).collect(),
                );
            }
        }
        assert_eq!(fam.consistent, expect);
        // v > 0 false together with v - 1 > 0 true is pruned
        let (c1, c2) = (CondId(1), CondId(2));
        assert!(!fam.consistent.iter().any(|s| s.contains(&c2) && !s.contains(&c1)));
    }
}
