//! Inner Lipschitz classification invariants of semialgebraic surfaces.
//!
//! The exact side ([`code_model`], [`strata`]) manipulates codes whose
//! exponents are arbitrary-precision rationals. The numeric side
//! ([`contact`], [`mesh`], [`normal_forms`]) is generic over the float type
//! through [`Real`]; the aliases below fix it to `f64`.

pub mod code_model;
pub mod contact;
pub mod corpus;
pub mod mesh;
pub mod normal_forms;
pub mod puiseux;
pub mod rational;
pub mod regression;
pub mod scalar;
pub mod strata;

pub use code_model::{
    canonicalize, code_equiv, curve_code, make_component_code, normalize, BetaVector, CodeError, ComponentCode,
    EquivWitness, InnerLipschitzCode, Theta,
};
pub use rational::{rational_round, Rational, RationalError};
pub use scalar::Real;
pub use strata::{code_from_strata, glue_strips, strip_exponent_from_profile, tube_from_strips, StrataSpec, StratifiedSurface};

/// Default seed threaded through every sampling step.
pub const DEFAULT_SEED: u64 = 0x5EED;

pub type PuiseuxExpr = puiseux::PuiseuxExpr<f64>;
pub type CurveSampler = contact::CurveSampler<f64>;
pub type ContactEstimate = contact::ContactEstimate<f64>;
pub type Mesh = mesh::Mesh<f64>;
pub type GrowthEstimate = mesh::GrowthEstimate<f64>;

pub type PuiseuxExpr32 = puiseux::PuiseuxExpr<f32>;
pub type CurveSampler32 = contact::CurveSampler<f32>;
pub type Mesh32 = mesh::Mesh<f32>;
