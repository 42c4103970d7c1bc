//! Supersaturation for forbidden intersections in uniform set families.
//!
//! The central quantity is `ρ(ℓ)`: the minimum, over families of `ℓ`
//! `k`-subsets of `[n]`, of the number of pairs meeting in exactly `t`
//! elements, i.e. the fewest edges induced by `ℓ` vertices of the
//! generalized Johnson graph `G(n, k, t)`.
//!
//! - [`setfam`]: sets, families, pair counts, shadows, links.
//! - [`johnson`]: closed forms and neighbourhoods of `G(n, k, t)`, and its
//!   independence number.
//! - [`kk`]: colex segments and the Lovász form of Kruskal–Katona.
//! - [`structure`]: k-partite projections, intersection structures,
//!   sunflowers and a greedy regularizer.
//! - [`constructions`]: extremal and baseline families with predicted
//!   edge counts.
//! - [`bounds`]: lower and upper bounds on `ρ(ℓ)` and the sandwich report.
//! - [`solver`]: exact and heuristic computation of `ρ(ℓ)`.

pub mod binom;
pub mod bounds;
pub mod constructions;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod johnson;
pub mod kk;
pub mod setfam;
pub mod solver;
pub mod structure;

pub use error::{Error, Result};
pub use setfam::{Element, Family, KSet, Params};
