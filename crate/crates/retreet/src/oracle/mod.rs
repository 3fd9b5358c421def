//! Concrete reference semantics: execute programs on small trees under
//! block-level interleaving, detect races and check equivalence by
//! exhaustive enumeration, and replay decoded solver witnesses.

mod enumerate;
mod interp;
mod race;
mod replay;
mod tree;

pub use enumerate::{enumerate_trees, EnumerateError};
pub use interp::{interpret_all, interpret_sequential, InterpError, Iteration, Trace};
pub use race::{final_store_set, oracle_datarace, oracle_equivalent, EquivVerdict, RaceWitness};
pub use replay::{replay_equiv_witness, replay_race_witness, Replay};
pub use tree::{ConcreteTree, NodeId, TreeView};
