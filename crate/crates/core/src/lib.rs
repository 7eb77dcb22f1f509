//! Untyped lambda calculus engine for experimenting with fixed point
//! combinators, their generators, and bounded conversion checking.

pub mod boehm;
pub mod combinators;
pub mod fpc;
pub mod generators;
pub mod graph;
pub mod join;
pub mod lab;
pub mod reduction;
pub mod syntax;
pub mod term;

pub use boehm::{approximant, head_normal_form, BoehmApprox};
pub use graph::{reduct_set, ReductGraph};
pub use join::{join_bounded, JoinVerdict};
pub use reduction::{normalize, Bounds, Normalization, RedexPosition};
pub use syntax::{parse, parse_lenient, ParseError};
pub use term::{Name, Term, TermKind};
