//! Exhaustive race search and equivalence comparison on one tree.

use std::collections::BTreeSet;

use crate::blocks::BlockTable;
use crate::oracle::interp::{
    drain_from, explore_states, interpret_sequential, parallel_related, InterpError, Iteration,
    Loc, Trace,
};
use crate::oracle::tree::ConcreteTree;

/// Two parallel-related iterations touching a common location with at
/// least one write, plus one legal trace for each order.
#[derive(Debug, Clone)]
pub struct RaceWitness {
    pub tree: ConcreteTree,
    pub first: Iteration,
    pub second: Iteration,
    pub location: Loc,
    pub order_one: Trace,
    pub order_two: Trace,
}

fn conflict(a: &Iteration, b: &Iteration) -> Option<Loc> {
    for w in &a.writes {
        if b.writes.contains(w) || b.reads.contains(w) {
            return Some(w.clone());
        }
    }
    for w in &b.writes {
        if a.reads.contains(w) {
            return Some(w.clone());
        }
    }
    None
}

/// Searches every reachable state for two simultaneously enabled,
/// parallel-related, conflicting iterations. For programs whose control
/// never depends on raced data this finds a race exactly when one exists.
pub fn oracle_datarace(
    table: &BlockTable,
    tree: &ConcreteTree,
    budget: usize,
) -> Result<Option<RaceWitness>, InterpError> {
    let mut found: Option<RaceWitness> = None;
    explore_states(table, tree, budget, |machine, state, enabled| {
        for i in 0..enabled.len() {
            for j in i + 1..enabled.len() {
                let (a, pa) = &enabled[i];
                let (b, pb) = &enabled[j];
                if !parallel_related(&a.ctx, &b.ctx) {
                    continue;
                }
                if let Some(loc) = conflict(a, b) {
                    let order_one = drain_from(machine, state, pa, budget);
                    let order_two = drain_from(machine, state, pb, budget);
                    if let (Ok(t1), Ok(t2)) = (order_one, order_two) {
                        found = Some(RaceWitness {
                            tree: tree.clone(),
                            first: a.clone(),
                            second: b.clone(),
                            location: loc,
                            order_one: t1,
                            order_two: t2,
                        });
                        return false; // stop exploring
                    }
                }
            }
        }
        true
    })?;
    Ok(found)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivVerdict {
    Equal,
    Differ { left: String, right: String },
    /// One of the programs races on this tree; equivalence is undefined.
    NotApplicable,
}

/// Compares final field stores and entry returns of two race-free programs
/// on one tree. Race-freeness makes every schedule confluent, so the
/// canonical trace of each side decides.
pub fn oracle_equivalent(
    p: &BlockTable,
    p2: &BlockTable,
    tree: &ConcreteTree,
    budget: usize,
) -> Result<EquivVerdict, InterpError> {
    if oracle_datarace(p, tree, budget)?.is_some()
        || oracle_datarace(p2, tree, budget)?.is_some()
    {
        return Ok(EquivVerdict::NotApplicable);
    }
    let ta = interpret_sequential(p, tree, budget)?;
    let tb = interpret_sequential(p2, tree, budget)?;
    if ta.final_store == tb.final_store && ta.returns == tb.returns {
        Ok(EquivVerdict::Equal)
    } else {
        Ok(EquivVerdict::Differ {
            left: format!("store {:?} returns {:?}", ta.final_store, ta.returns),
            right: format!("store {:?} returns {:?}", tb.final_store, tb.returns),
        })
    }
}

/// All distinct final stores over every interleaving; singleton for
/// race-free programs (the confluence property).
pub fn final_store_set(
    table: &BlockTable,
    tree: &ConcreteTree,
    budget: usize,
) -> Result<BTreeSet<String>, InterpError> {
    let traces = crate::oracle::interp::interpret_all(table, tree, budget)?;
    Ok(traces
        .into_iter()
        .map(|t| format!("{:?}|{:?}", t.final_store, t.returns))
        .collect())
}
