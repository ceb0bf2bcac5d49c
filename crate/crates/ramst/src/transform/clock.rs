//! Clock construction.
pub fn gen_clock() {}
