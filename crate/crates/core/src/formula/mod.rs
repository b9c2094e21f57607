//! Bounded arithmetic formulas: syntax, evaluation, sentences over a matrix
//! `θ(x, y, z)`, Ramsey-like predicates and a prefix rewrite.

pub mod ast;
pub mod eval;
pub mod parser;
pub mod rtlike;
pub mod sentence;
pub mod transform;

pub use ast::{Formula, Quantifier, Term};
pub use eval::{eval, Compiled, SecondOrderParam};
pub use parser::{parse, parse_with_free};
pub use rtlike::{psi_by_name, psi_registry, Psi0, RtLikeStatement};
pub use sentence::{Pi03Sentence, Theta};
pub use transform::{weakly_pi04_transform, PrefixQuant, PrefixSentence};
