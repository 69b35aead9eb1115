//! Inner Lipschitz codes: the complete invariant of a surface with isolated
//! singularities, up to inner lipeomorphism.
//!
//! A code is a list of [`ComponentCode`]s, one per closure of a connected
//! component of the regular part, together with the set of singular-point
//! labels those components attach to. Each component records orientability,
//! genus, the sorted tube exponents of its ends (all `<= 1`) and, per
//! singular label, the sorted horn exponents of its sheets there (all `>= 1`).
//!
//! Genus convention: for orientable components `genus` is the usual genus.
//! For non-orientable components it is the genus of the orientable double
//! cover of the compact core, i.e. one less than the cross-cap count. This is
//! the convention under which the Moebius band has genus 0 and the Klein
//! bottle genus 1.

mod canonical;
mod equiv;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;

pub use canonical::canonicalize;
pub use equiv::{code_equiv, EquivWitness};

pub type Label = String;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("end exponent {0} exceeds 1")]
    EndExponentAboveOne(Rational),
    #[error("horn exponent {exponent} at {label:?} is below 1")]
    HornExponentBelowOne { label: Label, exponent: Rational },
    #[error("attachment vector at {0:?} is empty")]
    EmptyAttachment(Label),
    #[error("label {0:?} is attached but not declared in singular_labels")]
    UndeclaredLabel(Label),
    #[error("label {0:?} is declared but attached to no component")]
    UnattachedLabel(Label),
    #[error("a code needs at least one component")]
    NoComponents,
    #[error("theta must be +1 or -1, got {0}")]
    BadTheta(i64),
    #[error("label {0:?} has no incident component")]
    EmptyIncidence(Label),
    #[error("label {label:?} refers to component {index}, but only {count} exist")]
    ComponentOutOfRange { label: Label, index: usize, count: usize },
    #[error("sheet count at {0:?} must be at least 1")]
    ZeroSheets(Label),
    #[error("malformed code JSON: {0}")]
    Json(String),
}

impl CodeError {
    /// True for the errors the contract calls `OutOfRangeExponent`.
    pub fn is_out_of_range_exponent(&self) -> bool {
        matches!(self, CodeError::EndExponentAboveOne(_) | CodeError::HornExponentBelowOne { .. })
    }
}

/// Orientability sign of the compact core.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theta {
    NonOrientable,
    Orientable,
}

impl Theta {
    pub fn from_sign(s: i64) -> Result<Self, CodeError> {
        match s {
            1 => Ok(Theta::Orientable),
            -1 => Ok(Theta::NonOrientable),
            other => Err(CodeError::BadTheta(other)),
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Theta::Orientable => 1,
            Theta::NonOrientable => -1,
        }
    }
}

impl Serialize for Theta {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.sign())
    }
}

impl<'de> Deserialize<'de> for Theta {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Theta::from_sign(i64::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sign())
    }
}

/// Ascending list of exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct BetaVector(Vec<Rational>);

impl BetaVector {
    pub fn new(mut entries: Vec<Rational>) -> Self {
        entries.sort();
        BetaVector(entries)
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn ones(n: usize) -> Self {
        BetaVector(vec![Rational::one(); n])
    }
}

impl<'de> Deserialize<'de> for BetaVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(BetaVector::new(Vec::<Rational>::deserialize(d)?))
    }
}

impl FromIterator<Rational> for BetaVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        BetaVector::new(iter.into_iter().collect())
    }
}

impl fmt::Display for BetaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

/// Code of one closure of a connected component of the regular part.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawComponent")]
pub struct ComponentCode {
    theta: Theta,
    genus: u32,
    ends: BetaVector,
    attachments: BTreeMap<Label, BetaVector>,
}

#[derive(Deserialize)]
struct RawComponent {
    theta: Theta,
    genus: u32,
    #[serde(default)]
    ends: Vec<Rational>,
    #[serde(default)]
    attachments: BTreeMap<Label, Vec<Rational>>,
}

impl TryFrom<RawComponent> for ComponentCode {
    type Error = CodeError;
    fn try_from(raw: RawComponent) -> Result<Self, Self::Error> {
        make_component_code(raw.theta, raw.genus, raw.ends, raw.attachments)
    }
}

/// Build a component code, sorting every exponent vector.
pub fn make_component_code(
    theta: Theta,
    genus: u32,
    ends: Vec<Rational>,
    attachments: BTreeMap<Label, Vec<Rational>>,
) -> Result<ComponentCode, CodeError> {
    let one = Rational::one();
    if let Some(b) = ends.iter().find(|b| **b > one) {
        return Err(CodeError::EndExponentAboveOne(b.clone()));
    }
    let mut att = BTreeMap::new();
    for (label, sheets) in attachments {
        if sheets.is_empty() {
            return Err(CodeError::EmptyAttachment(label));
        }
        if let Some(b) = sheets.iter().find(|b| **b < one) {
            return Err(CodeError::HornExponentBelowOne { label, exponent: b.clone() });
        }
        att.insert(label, BetaVector::new(sheets));
    }
    Ok(ComponentCode { theta, genus, ends: BetaVector::new(ends), attachments: att })
}

impl ComponentCode {
    pub fn theta(&self) -> Theta {
        self.theta
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn ends(&self) -> &BetaVector {
        &self.ends
    }

    /// Number of ends, e(X).
    pub fn end_count(&self) -> usize {
        self.ends.len()
    }

    pub fn attachments(&self) -> &BTreeMap<Label, BetaVector> {
        &self.attachments
    }

    pub(crate) fn with_attachments(&self, attachments: BTreeMap<Label, BetaVector>) -> Self {
        ComponentCode { attachments, ..self.clone() }
    }

    /// Sorted multiset of attachment vectors, forgetting labels.
    pub(crate) fn attachment_profile(&self) -> Vec<&BetaVector> {
        let mut v: Vec<_> = self.attachments.values().collect();
        v.sort();
        v
    }
}

impl fmt::Display for ComponentCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{},{},{{", self.theta, self.genus, self.ends)?;
        for (i, (l, b)) in self.attachments.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({l};{b})")?;
        }
        write!(f, "}}}}")
    }
}

/// The inner Lipschitz code of a surface.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCode")]
pub struct InnerLipschitzCode {
    components: Vec<ComponentCode>,
    singular_labels: BTreeSet<Label>,
}

#[derive(Deserialize)]
struct RawCode {
    components: Vec<ComponentCode>,
    #[serde(default)]
    singular_labels: Option<BTreeSet<Label>>,
}

impl TryFrom<RawCode> for InnerLipschitzCode {
    type Error = CodeError;
    fn try_from(raw: RawCode) -> Result<Self, Self::Error> {
        match raw.singular_labels {
            Some(labels) => InnerLipschitzCode::new(raw.components, labels),
            None => InnerLipschitzCode::from_components(raw.components),
        }
    }
}

impl InnerLipschitzCode {
    /// Validate label bookkeeping: the declared labels are exactly the
    /// attached ones.
    pub fn new(components: Vec<ComponentCode>, singular_labels: BTreeSet<Label>) -> Result<Self, CodeError> {
        if components.is_empty() {
            return Err(CodeError::NoComponents);
        }
        let used: BTreeSet<&Label> = components.iter().flat_map(|c| c.attachments.keys()).collect();
        if let Some(l) = used.iter().find(|l| !singular_labels.contains(**l)) {
            return Err(CodeError::UndeclaredLabel((*l).clone()));
        }
        if let Some(l) = singular_labels.iter().find(|l| !used.contains(l)) {
            return Err(CodeError::UnattachedLabel(l.clone()));
        }
        Ok(InnerLipschitzCode { components, singular_labels })
    }

    /// Declared labels inferred from the attachments.
    pub fn from_components(components: Vec<ComponentCode>) -> Result<Self, CodeError> {
        let labels = components.iter().flat_map(|c| c.attachments.keys().cloned()).collect();
        Self::new(components, labels)
    }

    pub fn single(component: ComponentCode) -> Self {
        Self::from_components(vec![component]).expect("single component is always consistent")
    }

    pub fn components(&self) -> &[ComponentCode] {
        &self.components
    }

    pub fn singular_labels(&self) -> &BTreeSet<Label> {
        &self.singular_labels
    }

    /// ℓ(X,p): total number of sheets at `label` over all components.
    pub fn link_count(&self, label: &str) -> usize {
        self.components
            .iter()
            .filter_map(|c| c.attachments.get(label))
            .map(BetaVector::len)
            .sum()
    }

    /// Sheets at `label`, merged over components and sorted: β(X,p).
    pub fn horn_exponents(&self, label: &str) -> BetaVector {
        self.components
            .iter()
            .filter_map(|c| c.attachments.get(label))
            .flat_map(|b| b.iter().cloned())
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self, CodeError> {
        serde_json::from_str(text).map_err(|e| CodeError::Json(e.to_string()))
    }

    /// JSON with object keys sorted and components in stored order.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("code serializes");
        serde_json::to_string(&v).expect("value serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        let v = serde_json::to_value(self).expect("code serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }
}

impl fmt::Display for InnerLipschitzCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.len() == 1 {
            return write!(f, "{}", self.components[0]);
        }
        write!(f, "{{")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// Drop labels of inner Lipschitz regular points: a single sheet with horn
/// exponent 1.
pub fn normalize(code: &InnerLipschitzCode) -> InnerLipschitzCode {
    let regular: BTreeSet<&Label> = code
        .singular_labels
        .iter()
        .filter(|l| {
            let b = code.horn_exponents(l);
            b.len() == 1 && b.as_slice()[0].is_one()
        })
        .collect();
    if regular.is_empty() {
        return code.clone();
    }
    let components = code
        .components
        .iter()
        .map(|c| {
            let att = c
                .attachments
                .iter()
                .filter(|(l, _)| !regular.contains(l))
                .map(|(l, b)| (l.clone(), b.clone()))
                .collect();
            c.with_attachments(att)
        })
        .collect();
    let labels = code.singular_labels.iter().filter(|l| !regular.contains(l)).cloned().collect();
    InnerLipschitzCode { components, singular_labels: labels }
}

/// Code of a complex algebraic curve from its irreducible components
/// `(genus, end_count)` and, per singular point, the number of sheets each
/// component has there. Every end is a 1-tube and every sheet a 1-horn.
pub fn curve_code(
    components: &[(u32, usize)],
    incidences: &BTreeMap<Label, BTreeMap<usize, usize>>,
) -> Result<InnerLipschitzCode, CodeError> {
    if components.is_empty() {
        return Err(CodeError::NoComponents);
    }
    let mut attachments: Vec<BTreeMap<Label, Vec<Rational>>> = vec![BTreeMap::new(); components.len()];
    for (label, per_comp) in incidences {
        if per_comp.is_empty() {
            return Err(CodeError::EmptyIncidence(label.clone()));
        }
        for (&idx, &sheets) in per_comp {
            if idx >= components.len() {
                return Err(CodeError::ComponentOutOfRange {
                    label: label.clone(),
                    index: idx,
                    count: components.len(),
                });
            }
            if sheets == 0 {
                return Err(CodeError::ZeroSheets(label.clone()));
            }
            attachments[idx].insert(label.clone(), vec![Rational::one(); sheets]);
        }
    }
    let comps = components
        .iter()
        .zip(attachments)
        .map(|(&(genus, ends), att)| make_component_code(Theta::Orientable, genus, vec![Rational::one(); ends], att))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(normalize(&InnerLipschitzCode::from_components(comps)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn qs(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| q(s)).collect()
    }

    #[test]
    fn paraboloid_and_torus_components() {
        let p = make_component_code(Theta::Orientable, 0, qs(&["1/2"]), BTreeMap::new()).unwrap();
        assert_eq!(p.to_string(), "{1,0,(1/2),{}}");
        let t = make_component_code(Theta::Orientable, 1, vec![], BTreeMap::new()).unwrap();
        assert_eq!(t.to_string(), "{1,1,(),{}}");
        assert_eq!(t.end_count(), 0);
    }

    #[test]
    fn ends_are_sorted() {
        let c = make_component_code(Theta::Orientable, 0, qs(&["1", "1/3"]), BTreeMap::new()).unwrap();
        assert_eq!(c.ends().as_slice(), &qs(&["1/3", "1"])[..]);
    }

    #[test]
    fn out_of_range_exponents() {
        let e = make_component_code(Theta::Orientable, 0, qs(&["3/2"]), BTreeMap::new()).unwrap_err();
        assert!(e.is_out_of_range_exponent());
        let att = BTreeMap::from([("p".to_string(), qs(&["1/2"]))]);
        let e = make_component_code(Theta::Orientable, 0, vec![], att).unwrap_err();
        assert!(e.is_out_of_range_exponent());
        let att = BTreeMap::from([("p".to_string(), vec![])]);
        let e = make_component_code(Theta::Orientable, 0, vec![], att).unwrap_err();
        assert_eq!(e, CodeError::EmptyAttachment("p".into()));
    }

    #[test]
    fn label_bookkeeping_is_validated() {
        let att = BTreeMap::from([("p".to_string(), qs(&["2"]))]);
        let c = make_component_code(Theta::Orientable, 0, vec![], att).unwrap();
        assert_eq!(
            InnerLipschitzCode::new(vec![c.clone()], BTreeSet::new()),
            Err(CodeError::UndeclaredLabel("p".into()))
        );
        let labels = BTreeSet::from(["p".to_string(), "q".to_string()]);
        assert_eq!(InnerLipschitzCode::new(vec![c], labels), Err(CodeError::UnattachedLabel("q".into())));
        assert_eq!(InnerLipschitzCode::new(vec![], BTreeSet::new()), Err(CodeError::NoComponents));
    }

    #[test]
    fn normalize_drops_regular_points_only() {
        let att = BTreeMap::from([("p".to_string(), qs(&["1"]))]);
        let c = make_component_code(Theta::Orientable, 0, qs(&["1"]), att).unwrap();
        let n = normalize(&InnerLipschitzCode::single(c));
        assert!(n.singular_labels().is_empty());
        assert!(n.components()[0].attachments().is_empty());

        // Global 2-horn keeps its vertex.
        let att = BTreeMap::from([("v".to_string(), qs(&["2"]))]);
        let horn = InnerLipschitzCode::single(make_component_code(Theta::Orientable, 0, qs(&["1"]), att).unwrap());
        assert_eq!(normalize(&horn), horn);

        // Two spheres touching at a point: two sheets, so the point stays.
        let att = BTreeMap::from([("o".to_string(), qs(&["1"]))]);
        let s = make_component_code(Theta::Orientable, 0, vec![], att).unwrap();
        let edge = InnerLipschitzCode::from_components(vec![s.clone(), s]).unwrap();
        assert_eq!(normalize(&edge), edge);
        assert_eq!(edge.link_count("o"), 2);
    }

    #[test]
    fn curve_code_examples() {
        let cubic = curve_code(&[(1, 3)], &BTreeMap::new()).unwrap();
        assert_eq!(cubic.to_string(), "{1,1,(1,1,1),{}}");

        let line = curve_code(&[(0, 1)], &BTreeMap::new()).unwrap();
        assert_eq!(line.to_string(), "{1,0,(1),{}}");

        let inc = BTreeMap::from([("p".to_string(), BTreeMap::from([(0, 1), (1, 1)]))]);
        let node = curve_code(&[(0, 1), (0, 1)], &inc).unwrap();
        assert_eq!(node.to_string(), "{{1,0,(1),{(p;(1))}}, {1,0,(1),{(p;(1))}}}");
        assert_eq!(node.link_count("p"), 2);

        let inc = BTreeMap::from([("p".to_string(), BTreeMap::new())]);
        assert_eq!(curve_code(&[(0, 1)], &inc), Err(CodeError::EmptyIncidence("p".into())));

        // A smooth point listed as singular is erased.
        let inc = BTreeMap::from([("p".to_string(), BTreeMap::from([(0, 1)]))]);
        assert!(curve_code(&[(0, 1)], &inc).unwrap().singular_labels().is_empty());

        // A cusp-like point with two sheets on one component stays.
        let inc = BTreeMap::from([("p".to_string(), BTreeMap::from([(0, 2)]))]);
        assert_eq!(curve_code(&[(0, 1)], &inc).unwrap().link_count("p"), 2);
    }

    #[test]
    fn json_schema_roundtrip() {
        let text = r#"{"components":[{"theta":1,"genus":0,"ends":["1"],"attachments":{"v":["3/2"]}}],"singular_labels":["v"]}"#;
        let code = InnerLipschitzCode::from_json(text).unwrap();
        assert_eq!(code.to_string(), "{1,0,(1),{(v;(3/2))}}");
        assert_eq!(
            code.to_json(),
            r#"{"components":[{"attachments":{"v":["3/2"]},"ends":["1"],"genus":0,"theta":1}],"singular_labels":["v"]}"#
        );
        assert_eq!(InnerLipschitzCode::from_json(&code.to_json()).unwrap(), code);
        assert!(InnerLipschitzCode::from_json(r#"{"components":[{"theta":2,"genus":0}]}"#).is_err());
        assert!(InnerLipschitzCode::from_json(r#"{"components":[{"theta":1,"genus":0,"ends":["2"]}]}"#).is_err());
    }
}
