//! Tree-logic encoding (placeholder during bring-up).
