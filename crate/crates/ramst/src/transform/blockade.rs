//! Exponentiation blockade demo.
pub fn gen_doubling_attempt() {}
