//! Exact T-sequences on countable Abelian groups.
//!
//! The crate builds explicit sequences on direct sums of ℤ, ℤ(p^a) and
//! ℤ(p^∞), checks the exclusion criterion `g ∉ A(k, m)` on index windows,
//! computes von Neumann radicals of finite truncations through characters,
//! and decides which bounded groups admit a minimally almost periodic or a
//! prescribed-radical topology.

pub mod akm;
pub mod character;
pub mod cli;
pub mod group;
pub mod invariants;
pub mod reduction;
pub mod tseq;
