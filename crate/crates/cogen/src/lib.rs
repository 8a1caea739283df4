//! Exact computations on generating graphs of symmetric and alternating groups.
//!
//! The generating graph of a finite group G has the non-identity elements of G
//! as vertices, with x and y adjacent exactly when ⟨x, y⟩ = G. This crate
//! decides, for the intransitive maximal subgroups M = (Sym(k) × Sym(n−k)) ∩ G
//! of G ∈ {Sym(n), Alt(n)} with n > k > n/2, whether M \ {1} is a *maximal*
//! coclique (independent set) in that graph, and it produces checkable
//! certificates either way:
//!
//! - for an element x outside M it constructs an explicit partner y ∈ M with
//!   ⟨x, y⟩ = G, following deterministic cycle-type recipes ([`witness`]);
//! - when no partner exists it exhibits why: a block system preserved by
//!   ⟨x, M_x⟩ ([`witness::imprimitivity_certificate`]) or the unique larger
//!   coclique that swallows M ([`coclique::coclique_closure`]).
//!
//! Everything is exact integer computation — stabilizer chains give exact
//! group orders, and every witness is re-verified from scratch before it is
//! reported. The `cogen` binary exposes the same operations as subcommands
//! emitting JSON reports.

#![forbid(unsafe_code)]

pub mod cli;
pub mod coclique;
pub mod group;
pub mod jordan;
pub mod perm;
pub mod prime_degree;
pub mod primes;
pub mod witness;
