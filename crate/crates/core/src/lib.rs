//! Exact-arithmetic engine for torus localization on stacky GKM targets.
//!
//! The crate is organized bottom-up:
//! - [`qfield`]: multivariate rational arithmetic over Q(u1..um).
//! - [`groups`]: finite groups as Cayley tables, classes, characters, cover
//!   counts.
//! - [`gkm`]: the decorated target graphs, their validation, a catalog of
//!   built-in examples, and edge fundamental-group machinery.
//! - [`crcoh`]: inertia classes, ages, pairing and the affine cup product.
//! - [`psihodge`]: psi intersection numbers, their gerbe analogues, and the
//!   unstable-moduli conventions.
//! - [`fixedloci`]: enumeration of the decorated graphs indexing fixed loci.
//! - [`localize`]: the weight factors and the graph sum producing invariants.

pub mod crcoh;
pub mod fixedloci;
pub mod gkm;
pub mod groups;
pub mod localize;
pub mod psihodge;
pub mod qfield;
