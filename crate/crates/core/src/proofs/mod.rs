//! Hilbert systems and a line-by-line proof checker.

mod check;
mod cpl;
pub mod fixtures;
mod logic;
mod text;

pub use check::{check_proof, check_proof_in, Justification, Mode, Proof, ProofError, ProofErrorKind, ProofLine};
pub use cpl::{cpl_consequence, TooManyAtoms, MAX_CPL_ATOMS};
pub use logic::{builtin_logics, modal_schemes, Logic, Registry};
pub use text::{parse_proof, render_justification, render_proof, ProofParseError, ProofParseErrorKind};
