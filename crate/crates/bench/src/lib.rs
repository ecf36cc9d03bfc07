//! Empty library stub; the crate exists for its `benches/` targets.
