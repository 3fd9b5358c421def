//! WS2S decision procedure (placeholder during bring-up).
