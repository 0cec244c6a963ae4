//! Data-parallel helpers.
//!
//! With the `parallel` feature (on by default) [`map`] fans work out over the
//! rayon pool. Without it, [`map`] is [`map_sequential`]. Results always come
//! back in input order.

use crate::discourse::{CausalAxiom, Discourse};
use crate::interpret::{interpret, InterpretOptions, Interpretation};

pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_sequential(items, f)
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

/// Interprets every discourse against the same axioms.
pub fn interpret_all(discourses: &[Discourse], axioms: &[CausalAxiom], opts: InterpretOptions) -> Vec<Interpretation> {
    map(discourses, |d| interpret(d, axioms, opts))
}

pub fn interpret_all_sequential(
    discourses: &[Discourse],
    axioms: &[CausalAxiom],
    opts: InterpretOptions,
) -> Vec<Interpretation> {
    map_sequential(discourses, |d| interpret(d, axioms, opts))
}
