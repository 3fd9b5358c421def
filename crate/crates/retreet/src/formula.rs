//! Quantifier-free formulas over linear integer atoms and structural
//! nil-atoms on the two node placeholders u and v.

use std::collections::BTreeMap;
use std::fmt;

use crate::blocks::BlockId;
use crate::lang::ast::Dir;

/// The two node placeholders of a record transition: u is the node of the
/// earlier record, v of the later one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeVar {
    U,
    V,
}

impl fmt::Display for NodeVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeVar::U => write!(f, "u"),
            NodeVar::V => write!(f, "v"),
        }
    }
}

/// Integer-valued symbols.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    /// M(p): initial value of parameter p in the earlier record.
    MParam { func: String, name: String },
    /// M(s) or M(s.k): speculative output slot k of call block s.
    MGhost { call: BlockId, slot: usize },
    /// N(p): initial value of parameter p in the later record.
    NParam { func: String, name: String },
    /// Field f of the node reached from a placeholder by pointer steps.
    Field { node: NodeVar, steps: Vec<Dir>, field: String },
    /// Return slot k of the function under analysis.
    Slot(usize),
    /// An uninterpreted integer variable: program variables during wp
    /// computation, plain unknowns in tests and generators.
    Free(String),
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::MParam { name, .. } => write!(f, "M({})", name),
            Sym::MGhost { call, slot } => {
                if *slot == 0 {
                    write!(f, "M({})", call)
                } else {
                    write!(f, "M({}.{})", call, slot)
                }
            }
            Sym::NParam { name, .. } => write!(f, "N({})", name),
            Sym::Field { node, steps, field } => {
                write!(f, "{}", node)?;
                for d in steps {
                    write!(f, ".{}", d)?;
                }
                write!(f, ".{}", field)
            }
            Sym::Slot(k) => write!(f, "ret{}", k),
            Sym::Free(name) => write!(f, "{}", name),
        }
    }
}

/// Linear combination of symbols plus a constant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LinTerm {
    pub coeffs: BTreeMap<Sym, i64>,
    pub constant: i64,
}

impl LinTerm {
    pub fn constant(c: i64) -> Self {
        LinTerm { coeffs: BTreeMap::new(), constant: c }
    }

    pub fn sym(s: Sym) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(s, 1);
        LinTerm { coeffs, constant: 0 }
    }

    pub fn add(&self, other: &LinTerm) -> LinTerm {
        let mut out = self.clone();
        for (s, c) in &other.coeffs {
            *out.coeffs.entry(s.clone()).or_insert(0) += c;
        }
        out.constant += other.constant;
        out.normalize();
        out
    }

    pub fn sub(&self, other: &LinTerm) -> LinTerm {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> LinTerm {
        let mut out = LinTerm {
            coeffs: self.coeffs.iter().map(|(s, c)| (s.clone(), c * k)).collect(),
            constant: self.constant * k,
        };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        self.coeffs.retain(|_, c| *c != 0);
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, env: &BTreeMap<Sym, i64>) -> Option<i64> {
        let mut acc = self.constant;
        for (s, c) in &self.coeffs {
            acc += c * env.get(s)?;
        }
        Some(acc)
    }

    /// Substitutes a symbol by a term.
    pub fn subst(&self, sym: &Sym, by: &LinTerm) -> LinTerm {
        match self.coeffs.get(sym) {
            None => self.clone(),
            Some(&k) => {
                let mut rest = self.clone();
                rest.coeffs.remove(sym);
                rest.add(&by.scale(k))
            }
        }
    }
}

impl fmt::Display for LinTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, c) in &self.coeffs {
            if first {
                match *c {
                    1 => write!(f, "{}", s)?,
                    -1 => write!(f, "-{}", s)?,
                    c => write!(f, "{}*{}", c, s)?,
                }
                first = false;
            } else if *c >= 0 {
                if *c == 1 {
                    write!(f, " + {}", s)?;
                } else {
                    write!(f, " + {}*{}", c, s)?;
                }
            } else if *c == -1 {
                write!(f, " - {}", s)?;
            } else {
                write!(f, " - {}*{}", -c, s)?;
            }
        }
        if first {
            write!(f, "{}", self.constant)?;
        } else if self.constant > 0 {
            write!(f, " + {}", self.constant)?;
        } else if self.constant < 0 {
            write!(f, " - {}", -self.constant)?;
        }
        Ok(())
    }
}

/// Structural atom: the node reached by `steps` from a placeholder is nil.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NilAtom {
    pub node: NodeVar,
    pub steps: Vec<Dir>,
}

impl fmt::Display for NilAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "isNil({}", self.node)?;
        for d in &self.steps {
            write!(f, ".{}", d)?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    /// term >= 0
    Ge(LinTerm),
    /// term = 0
    Eq(LinTerm),
    Nil(NilAtom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn and(parts: Vec<Formula>) -> Formula {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(xs) => flat.extend(xs),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Formula::True,
            1 => flat.pop().unwrap(),
            _ => Formula::And(flat),
        }
    }

    pub fn or(parts: Vec<Formula>) -> Formula {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(xs) => flat.extend(xs),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Formula::False,
            1 => flat.pop().unwrap(),
            _ => Formula::Or(flat),
        }
    }

    pub fn negate(self) -> Formula {
        match self {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(inner) => *inner,
            // keep integer atoms in positive form
            Formula::Ge(t) => {
                let mut neg = t.scale(-1);
                neg.constant -= 1;
                Formula::Ge(neg)
            }
            other => Formula::Not(Box::new(other)),
        }
    }

    /// term > 0 as term - 1 >= 0
    pub fn positive(t: LinTerm) -> Formula {
        let mut t = t;
        t.constant -= 1;
        Formula::Ge(t)
    }

    pub fn ge_zero(t: LinTerm) -> Formula {
        Formula::Ge(t)
    }

    pub fn eq_terms(a: &LinTerm, b: &LinTerm) -> Formula {
        Formula::Eq(a.sub(b))
    }

    pub fn has_integer_atoms(&self) -> bool {
        match self {
            Formula::Ge(_) | Formula::Eq(_) => true,
            Formula::Nil(_) | Formula::True | Formula::False => false,
            Formula::Not(x) => x.has_integer_atoms(),
            Formula::And(xs) | Formula::Or(xs) => xs.iter().any(|x| x.has_integer_atoms()),
        }
    }

    pub fn has_structural_atoms(&self) -> bool {
        match self {
            Formula::Nil(_) => true,
            Formula::Ge(_) | Formula::Eq(_) | Formula::True | Formula::False => false,
            Formula::Not(x) => x.has_structural_atoms(),
            Formula::And(xs) | Formula::Or(xs) => {
                xs.iter().any(|x| x.has_structural_atoms())
            }
        }
    }

    /// Symbols of every integer atom.
    pub fn symbols(&self) -> std::collections::BTreeSet<Sym> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut std::collections::BTreeSet<Sym>) {
        match self {
            Formula::Ge(t) | Formula::Eq(t) => out.extend(t.coeffs.keys().cloned()),
            Formula::Not(x) => x.collect_symbols(out),
            Formula::And(xs) | Formula::Or(xs) => {
                for x in xs {
                    x.collect_symbols(out);
                }
            }
            _ => {}
        }
    }

    /// Evaluates a pure-integer formula; None if a symbol is unassigned or
    /// a structural atom appears.
    pub fn eval_int(&self, env: &BTreeMap<Sym, i64>) -> Option<bool> {
        match self {
            Formula::True => Some(true),
            Formula::False => Some(false),
            Formula::Ge(t) => Some(t.eval(env)? >= 0),
            Formula::Eq(t) => Some(t.eval(env)? == 0),
            Formula::Nil(_) => None,
            Formula::Not(x) => Some(!x.eval_int(env)?),
            Formula::And(xs) => {
                for x in xs {
                    if !x.eval_int(env)? {
                        return Some(false);
                    }
                }
                Some(true)
            }
            Formula::Or(xs) => {
                for x in xs {
                    if x.eval_int(env)? {
                        return Some(true);
                    }
                }
                Some(false)
            }
        }
    }

    /// Evaluates with structural atoms resolved by a nil-ness oracle.
    pub fn eval_full(
        &self,
        env: &BTreeMap<Sym, i64>,
        nil: &dyn Fn(&NilAtom) -> bool,
    ) -> Option<bool> {
        match self {
            Formula::Nil(a) => Some(nil(a)),
            Formula::Not(x) => Some(!x.eval_full(env, nil)?),
            Formula::And(xs) => {
                for x in xs {
                    if !x.eval_full(env, nil)? {
                        return Some(false);
                    }
                }
                Some(true)
            }
            Formula::Or(xs) => {
                for x in xs {
                    if x.eval_full(env, nil)? {
                        return Some(true);
                    }
                }
                Some(false)
            }
            other => other.eval_int(env),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Ge(t) => write!(f, "{} >= 0", t),
            Formula::Eq(t) => write!(f, "{} = 0", t),
            Formula::Nil(a) => write!(f, "{}", a),
            Formula::Not(x) => write!(f, "!({})", x),
            Formula::And(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| format!("({})", x)).collect();
                write!(f, "{}", parts.join(" && "))
            }
            Formula::Or(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| format!("({})", x)).collect();
                write!(f, "{}", parts.join(" || "))
            }
        }
    }
}

/// Structural relation between the two placeholder nodes of a record
/// transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DirectionAtom {
    /// v = u
    SameNode,
    /// v = u.l
    LeftChild,
    /// v = u.r
    RightChild,
}

impl fmt::Display for DirectionAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DirectionAtom::SameNode => write!(f, "v = u"),
            DirectionAtom::LeftChild => write!(f, "v = u.l"),
            DirectionAtom::RightChild => write!(f, "v = u.r"),
        }
    }
}

impl From<crate::blocks::Disp> for DirectionAtom {
    fn from(d: crate::blocks::Disp) -> Self {
        match d {
            crate::blocks::Disp::Zero => DirectionAtom::SameNode,
            crate::blocks::Disp::Left => DirectionAtom::LeftChild,
            crate::blocks::Disp::Right => DirectionAtom::RightChild,
        }
    }
}
