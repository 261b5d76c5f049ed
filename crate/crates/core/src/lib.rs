//! Exact classification of the projective image of weight-one newforms.

pub mod abelian;
pub mod arith;
pub mod characters;
pub mod classifier;
pub mod cyclo;
pub mod quadfields;
pub mod store;
