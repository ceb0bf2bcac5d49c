//! Ramification.
pub fn ramify() {}
