//! Symbolic toolkit for restricted products of finite connected rings.
//!
//! * [`formula`]: syntax for the languages of rings and of Boolean algebras
//!   with `Fin` and `C_n`.
//! * [`boolalg`]: the finite/cofinite algebra over the naturals with its
//!   ideal of finite sets.
//! * [`tarski_qe`]: quantifier elimination and decision for infinite atomic
//!   Boolean algebras with a finiteness predicate.
//! * [`stalk`]: finite commutative rings and brute-force satisfaction.
//! * [`rprod`]: the restricted-product model, Boolean values, witness
//!   patching and a direct existential/universal oracle.
//! * [`fv`]: the Feferman-Vaught reduction and the model decision pipeline.

pub mod formula;
pub mod boolalg;
pub mod tarski_qe;
pub mod stalk;
pub mod rprod;
pub mod fv;
