//! Bisimulation search (placeholder during bring-up).
