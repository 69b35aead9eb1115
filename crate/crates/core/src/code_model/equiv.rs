//! Direct backtracking search for a component bijection and a singular-label
//! bijection carrying one code onto another.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{ComponentCode, InnerLipschitzCode, Label};

/// Bijections realizing an equivalence of two codes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivWitness {
    /// `component_bijection[i]` is the index in the target of source component `i`.
    pub component_bijection: Vec<usize>,
    /// Source label to target label.
    pub point_bijection: BTreeMap<Label, Label>,
}

impl EquivWitness {
    /// Transport `code` along the bijections. For a witness of `a ~ b`,
    /// `apply(a)` equals `b` exactly, component order included.
    pub fn apply(&self, code: &InnerLipschitzCode) -> Option<InnerLipschitzCode> {
        let n = code.components.len();
        if self.component_bijection.len() != n {
            return None;
        }
        let mut slots: Vec<Option<ComponentCode>> = vec![None; n];
        for (i, c) in code.components.iter().enumerate() {
            let j = self.component_bijection[i];
            if j >= n || slots[j].is_some() {
                return None;
            }
            let mut att = BTreeMap::new();
            for (l, b) in &c.attachments {
                att.insert(self.point_bijection.get(l)?.clone(), b.clone());
            }
            slots[j] = Some(c.with_attachments(att));
        }
        let comps = slots.into_iter().collect::<Option<Vec<_>>>()?;
        InnerLipschitzCode::from_components(comps).ok()
    }
}

/// Decide equivalence of two codes; on success, return the bijections.
pub fn code_equiv(a: &InnerLipschitzCode, b: &InnerLipschitzCode) -> Option<EquivWitness> {
    if a.components.len() != b.components.len() || a.singular_labels.len() != b.singular_labels.len() {
        return None;
    }
    let mut s = Search::new(a, b);
    if !s.assign_component(0) {
        return None;
    }
    Some(EquivWitness {
        component_bijection: s.pi.into_iter().map(|j| j.expect("complete assignment")).collect(),
        point_bijection: s.sigma.into_iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
    })
}

struct Search<'a> {
    a: &'a InnerLipschitzCode,
    b: &'a InnerLipschitzCode,
    a_labels: Vec<Vec<&'a Label>>,
    pi: Vec<Option<usize>>,
    used: Vec<bool>,
    sigma: BTreeMap<&'a Label, &'a Label>,
    sigma_inv: BTreeMap<&'a Label, &'a Label>,
}

impl<'a> Search<'a> {
    fn new(a: &'a InnerLipschitzCode, b: &'a InnerLipschitzCode) -> Self {
        let n = a.components.len();
        Search {
            a,
            b,
            a_labels: a.components.iter().map(|c| c.attachments.keys().collect()).collect(),
            pi: vec![None; n],
            used: vec![false; n],
            sigma: BTreeMap::new(),
            sigma_inv: BTreeMap::new(),
        }
    }

    fn compatible(x: &ComponentCode, y: &ComponentCode) -> bool {
        x.theta == y.theta
            && x.genus == y.genus
            && x.ends == y.ends
            && x.attachments.len() == y.attachments.len()
            && x.attachment_profile() == y.attachment_profile()
    }

    fn assign_component(&mut self, ci: usize) -> bool {
        if ci == self.a.components.len() {
            return true;
        }
        for j in 0..self.b.components.len() {
            if self.used[j] || !Self::compatible(&self.a.components[ci], &self.b.components[j]) {
                continue;
            }
            self.used[j] = true;
            self.pi[ci] = Some(j);
            if self.assign_label(ci, 0) {
                return true;
            }
            self.pi[ci] = None;
            self.used[j] = false;
        }
        false
    }

    fn assign_label(&mut self, ci: usize, li: usize) -> bool {
        if li == self.a_labels[ci].len() {
            return self.assign_component(ci + 1);
        }
        let label = self.a_labels[ci][li];
        let vec_a = &self.a.components[ci].attachments[label];
        let target = &self.b.components[self.pi[ci].expect("component assigned")];
        if let Some(&mapped) = self.sigma.get(label) {
            return target.attachments.get(mapped) == Some(vec_a) && self.assign_label(ci, li + 1);
        }
        for (bl, bv) in &target.attachments {
            if bv != vec_a || self.sigma_inv.contains_key(bl) {
                continue;
            }
            self.sigma.insert(label, bl);
            self.sigma_inv.insert(bl, label);
            if self.assign_label(ci, li + 1) {
                return true;
            }
            self.sigma.remove(label);
            self.sigma_inv.remove(bl);
        }
        false
    }
}
