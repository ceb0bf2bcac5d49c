//! Program generators and the executable corpus: duplication and spawning,
//! enumerators, numeral arithmetic, insertion sort, rank-shifted
//! composition, clock construction, and the ramification of PTime ST
//! programs into STR.

mod arith;
mod blockade;
mod build;
mod clock;
mod compose;
mod duplicator;
mod enumerator;
mod ramify;
mod sort;

pub use arith::{gen_add, gen_identity, gen_mult, ADD_IN1, ADD_IN2, ARITH_OUT};
pub use blockade::gen_doubling_attempt;
pub use clock::gen_clock;
pub use compose::{compose, shift_ranks};
pub use duplicator::{gen_duplicator, gen_string_duplicator, CopyGroup, DuplicatorSpec};
pub use enumerator::{gen_enumerator, ENUM_OUT};
pub use ramify::ramify;
pub use sort::{gen_insertion_sort, SORT_IN, SORT_OUT};

use thiserror::Error;

/// Input/output interface of a transducer unit: identifier names plus the
/// common rank on each side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransducerSig {
    pub inputs: Vec<String>,
    pub input_rank: u32,
    pub outputs: Vec<String>,
    pub output_rank: u32,
}

impl TransducerSig {
    /// The output vocabulary as declared by the unit (for reducts).
    pub fn out_vocab(
        &self,
        unit: &crate::syntax::SourceUnit,
    ) -> crate::structure::Vocabulary {
        let mut v = crate::structure::Vocabulary::new();
        for name in &self.outputs {
            let id = unit
                .vocab
                .id(name)
                .unwrap_or_else(|| panic!("output `{name}` not declared by the unit"));
            v.push(unit.vocab.decl(id).clone()).unwrap();
        }
        v
    }
}

#[derive(Debug, Error)]
pub enum TransformError {
    /// The request violates the ramification discipline (for example two
    /// same-rank copies of a variant).
    #[error("refused: {0}")]
    Refused(String),
    #[error("{0}")]
    Invalid(String),
}
