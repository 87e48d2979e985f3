//! Numerical and combinatorial laboratory for equivariant Yamabe upper
//! bounds on three-manifolds.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blowup;
pub mod cli;
pub mod error;
pub mod geom;
pub mod groups;
pub mod levelset;
pub mod numerics;
pub mod quotient;
pub mod topo;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/conformal-ends.md")]
    mod conformal_ends {}
    #[doc = include_str!("../../../book/src/group-actions.md")]
    mod group_actions {}
    #[doc = include_str!("../../../book/src/blowup.md")]
    mod blowup {}
    #[doc = include_str!("../../../book/src/level-sets.md")]
    mod level_sets {}
    #[doc = include_str!("../../../book/src/quotient.md")]
    mod quotient {}
    #[doc = include_str!("../../../book/src/topology.md")]
    mod topology {}
    #[doc = include_str!("../../../book/src/scenarios.md")]
    mod scenarios {}
}
