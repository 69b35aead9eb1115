//! Gluing calculus for strips and tubes at infinity.
//!
//! A surface is described by its compact part (orientability, genus), its
//! ends as cyclic sequences of strips, and the horn exponents of its sheets
//! at each singular point. A chain of strips sharing consecutive boundary
//! arcs is again a strip, and a closed cycle of strips is a tube; in both
//! cases the exponent of the union is the largest exponent of the pieces.
//! Adjacency of arcs is carried by the input format and is not re-verified.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code_model::{make_component_code, normalize, CodeError, InnerLipschitzCode, Label, Theta};
use crate::puiseux::PuiseuxExpr;
use crate::rational::Rational;
use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrataError {
    #[error("a chain of strips must be non-empty")]
    EmptyChain,
    #[error("a cycle of strips must be non-empty")]
    EmptyCycle,
    #[error("strip exponent {0} exceeds 1")]
    StripExponentAboveOne(Rational),
    #[error("invalid strip profile: {0}")]
    InvalidProfile(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("malformed strata JSON: {0}")]
    Json(String),
}

/// One strip at infinity, given by its exponent or by a width profile.
#[derive(Debug, Clone, PartialEq)]
pub enum StripSpec {
    Beta(Rational),
    Profile(PuiseuxExpr<f64>),
}

impl StripSpec {
    pub fn exponent(&self) -> Result<Rational, StrataError> {
        match self {
            StripSpec::Beta(b) if *b > Rational::one() => Err(StrataError::StripExponentAboveOne(b.clone())),
            StripSpec::Beta(b) => Ok(b.clone()),
            StripSpec::Profile(f) => strip_exponent_from_profile(f),
        }
    }
}

/// Exponent of the strip `{a <= x, 0 <= y <= f(x)}`: the leading power of `f`.
pub fn strip_exponent_from_profile<T: Real>(f: &PuiseuxExpr<T>) -> Result<Rational, StrataError> {
    let (c, q) = f
        .leading()
        .ok_or_else(|| StrataError::InvalidProfile("profile is identically zero".into()))?;
    if c <= T::zero() {
        return Err(StrataError::InvalidProfile(format!("leading coefficient {c} is not positive")));
    }
    if *q > Rational::one() {
        return Err(StrataError::InvalidProfile(format!("leading exponent {q} exceeds 1")));
    }
    Ok(q.clone())
}

fn max_exponent(list: &[Rational], empty: StrataError) -> Result<Rational, StrataError> {
    if let Some(b) = list.iter().find(|b| **b > Rational::one()) {
        return Err(StrataError::StripExponentAboveOne(b.clone()));
    }
    list.iter().max().cloned().ok_or(empty)
}

/// Exponent of a chain of strips glued along consecutive boundary arcs.
pub fn glue_strips(chain: &[Rational]) -> Result<Rational, StrataError> {
    max_exponent(chain, StrataError::EmptyChain)
}

/// Exponent of the tube closed up from a cyclic sequence of strips.
pub fn tube_from_strips(cycle: &[Rational]) -> Result<Rational, StrataError> {
    max_exponent(cycle, StrataError::EmptyCycle)
}

/// Stratified description of one component of the regular part.
#[derive(Debug, Clone, PartialEq)]
pub struct StrataSpec {
    pub theta: Theta,
    pub genus: u32,
    /// Each end as a cyclic sequence of strips.
    pub ends: Vec<Vec<StripSpec>>,
    /// Horn exponents of this component's sheets at each singular point.
    pub singular_points: BTreeMap<Label, Vec<Rational>>,
}

/// A surface whose regular part has one or more components.
#[derive(Debug, Clone, PartialEq)]
pub struct StratifiedSurface {
    pub components: Vec<StrataSpec>,
}

impl From<StrataSpec> for StratifiedSurface {
    fn from(s: StrataSpec) -> Self {
        StratifiedSurface { components: vec![s] }
    }
}

impl StrataSpec {
    pub fn end_exponents(&self) -> Result<Vec<Rational>, StrataError> {
        self.ends
            .iter()
            .map(|cycle| {
                let betas = cycle.iter().map(StripSpec::exponent).collect::<Result<Vec<_>, _>>()?;
                tube_from_strips(&betas)
            })
            .collect()
    }
}

/// Assemble the normalized code of a stratified surface.
pub fn code_from_strata(surface: &StratifiedSurface) -> Result<InnerLipschitzCode, StrataError> {
    let comps = surface
        .components
        .iter()
        .map(|s| Ok(make_component_code(s.theta, s.genus, s.end_exponents()?, s.singular_points.clone())?))
        .collect::<Result<Vec<_>, StrataError>>()?;
    Ok(normalize(&InnerLipschitzCode::from_components(comps)?))
}

// JSON layer. Strips are either "p/q" strings or {"profile": [["c", "p/q"], ...]}.

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawStrip {
    Beta(Rational),
    Profile { profile: Vec<(String, Rational)> },
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    theta: Theta,
    genus: u32,
    #[serde(default)]
    ends: Vec<Vec<RawStrip>>,
    #[serde(default)]
    singular_points: BTreeMap<Label, Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawSurface {
    Many { components: Vec<RawSpec> },
    One(RawSpec),
}

impl TryFrom<RawSpec> for StrataSpec {
    type Error = StrataError;
    fn try_from(raw: RawSpec) -> Result<Self, StrataError> {
        let ends = raw
            .ends
            .into_iter()
            .map(|cycle| {
                if cycle.is_empty() {
                    return Err(StrataError::EmptyCycle);
                }
                cycle
                    .into_iter()
                    .map(|s| match s {
                        RawStrip::Beta(b) => Ok(StripSpec::Beta(b)),
                        RawStrip::Profile { profile } => {
                            let terms = profile
                                .into_iter()
                                .map(|(c, q)| {
                                    c.trim()
                                        .parse::<f64>()
                                        .map(|c| (c, q))
                                        .map_err(|_| StrataError::InvalidProfile(format!("bad coefficient {c:?}")))
                                })
                                .collect::<Result<Vec<_>, _>>()?;
                            Ok(StripSpec::Profile(PuiseuxExpr::new(terms)))
                        }
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(StrataSpec { theta: raw.theta, genus: raw.genus, ends, singular_points: raw.singular_points })
    }
}

impl From<&StrataSpec> for RawSpec {
    fn from(s: &StrataSpec) -> Self {
        RawSpec {
            theta: s.theta,
            genus: s.genus,
            ends: s
                .ends
                .iter()
                .map(|cycle| {
                    cycle
                        .iter()
                        .map(|strip| match strip {
                            StripSpec::Beta(b) => RawStrip::Beta(b.clone()),
                            StripSpec::Profile(f) => RawStrip::Profile {
                                profile: f.terms().iter().map(|(c, q)| (c.to_string(), q.clone())).collect(),
                            },
                        })
                        .collect()
                })
                .collect(),
            singular_points: s.singular_points.clone(),
        }
    }
}

impl StratifiedSurface {
    /// Accepts a single component object or `{"components": [...]}`.
    pub fn from_json(text: &str) -> Result<Self, StrataError> {
        let raw: RawSurface = serde_json::from_str(text).map_err(|e| StrataError::Json(e.to_string()))?;
        let comps = match raw {
            RawSurface::One(s) => vec![s],
            RawSurface::Many { components } => components,
        };
        if comps.is_empty() {
            return Err(StrataError::Code(CodeError::NoComponents));
        }
        Ok(StratifiedSurface { components: comps.into_iter().map(StrataSpec::try_from).collect::<Result<_, _>>()? })
    }

    pub fn to_json(&self) -> String {
        let raw = if self.components.len() == 1 {
            RawSurface::One(RawSpec::from(&self.components[0]))
        } else {
            RawSurface::Many { components: self.components.iter().map(RawSpec::from).collect() }
        };
        serde_json::to_string_pretty(&raw).expect("strata serialize")
    }
}
