//! Witness replay: materialize a decoded solver model as a concrete tree
//! and confirm the claimed race or inequivalence on it.

use crate::blocks::BlockTable;
use crate::oracle::interp::{InterpError, Loc};
use crate::oracle::race::{oracle_datarace, oracle_equivalent, EquivVerdict};
use crate::oracle::tree::ConcreteTree;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Replay {
    Confirmed(String),
    Unconfirmed(String),
}

impl Replay {
    pub fn confirmed(&self) -> bool {
        matches!(self, Replay::Confirmed(_))
    }
}

/// Confirms a race claim: the tree must exhibit a race, and when the claim
/// names a field the race must touch that field.
pub fn replay_race_witness(
    table: &BlockTable,
    tree: &ConcreteTree,
    claimed_field: Option<&str>,
    budget: usize,
) -> Result<Replay, InterpError> {
    match oracle_datarace(table, tree, budget)? {
        None => Ok(Replay::Unconfirmed("no race occurs on the witness tree".to_string())),
        Some(w) => {
            if let Some(field) = claimed_field {
                let matches = matches!(&w.location, Loc::Field(_, name) if name == field);
                if !matches {
                    // search is first-found; accept any race on the claimed
                    // field among the conflicting pair's accesses
                    let touches = w
                        .first
                        .writes
                        .iter()
                        .chain(w.first.reads.iter())
                        .chain(w.second.writes.iter())
                        .chain(w.second.reads.iter())
                        .any(|l| matches!(l, Loc::Field(_, n) if n == field));
                    if !touches {
                        return Ok(Replay::Unconfirmed(format!(
                            "a race occurs but not on field {}",
                            field
                        )));
                    }
                }
            }
            Ok(Replay::Confirmed(format!(
                "race between {} at {} and {} at {} on {:?}",
                w.first.block, w.first.pos_path, w.second.block, w.second.pos_path, w.location
            )))
        }
    }
}

/// Confirms an inequivalence claim: the two programs must produce different
/// observables on the witness tree.
pub fn replay_equiv_witness(
    p: &BlockTable,
    p2: &BlockTable,
    tree: &ConcreteTree,
    budget: usize,
) -> Result<Replay, InterpError> {
    match oracle_equivalent(p, p2, tree, budget)? {
        EquivVerdict::Differ { left, right } => Ok(Replay::Confirmed(format!(
            "programs diverge on the witness tree: {} vs {}",
            left, right
        ))),
        EquivVerdict::Equal => {
            Ok(Replay::Unconfirmed("programs agree on the witness tree".to_string()))
        }
        EquivVerdict::NotApplicable => Ok(Replay::Confirmed(
            "a program races on the witness tree; equivalence is undefined there".to_string(),
        )),
    }
}
