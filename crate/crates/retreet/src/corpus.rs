//! Case-study corpus driver (placeholder during bring-up).
