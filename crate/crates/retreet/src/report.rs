//! Report output (placeholder during bring-up).
