//! Exact Witt-class computations for diagonal quadratic forms over iterated
//! Laurent fields `F_n = k((t_1))…((t_n))`, `k` a finite field of odd
//! characteristic or the reals.
//!
//! A nonzero element of `F_n` is, up to squares, `u · t_1^{e_1} ⋯ t_n^{e_n}`
//! with `u ∈ k^×` and each `e_i ∈ {0, 1}`. Repeated Springer residues
//! therefore split the Witt class of a diagonal form into `2^n` base-field
//! forms, one for each subset `I ⊆ {1, …, n}`, and two forms are isometric
//! exactly when they have the same rank and the same component table.
//!
//! The same table describes loop torsors over a regular local ring `A` with
//! parameters `f_1, …, f_n` and fraction field `K`: reading `t_i` as `f_i`
//! and `F_n` as the iterated completion `K_v`, a loop form over `K` is
//! determined by its image over `K_v`. This crate computes in `F_n` only; the
//! translation is a convention for callers.
//!
//! Modules, bottom up:
//! - [`basefield`]: `F_p` and `R`, square classes, Witt reduction of base forms.
//! - [`laurent`]: Laurent polynomials in `t_1, …, t_n`, their quotients and
//!   square classes.
//! - [`wittcore`]: symmetric matrices, diagonalization with certificates,
//!   residues, Witt classes and indices.
//! - [`loopforms`]: component tables, loop forms and classification.
//! - [`cocycles`]: loop cocycles on tame Galois groups and diagonal forms.
//! - [`formlang`]: text syntax and rendering.

pub mod basefield;
pub mod cocycles;
pub mod error;
pub mod formlang;
pub mod laurent;
pub mod loopforms;
pub mod wittcore;

pub use basefield::{BaseField, BaseForm, FieldElem, SquareClass};
pub use error::{Error, Result};
pub use laurent::{Frac, LaurentPoly, Monomial, SqClassFn};
pub use loopforms::{LoopComponents, Verdict};
pub use wittcore::{DiagForm, SymMatrix, WittClass};
