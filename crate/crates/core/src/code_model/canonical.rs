//! Canonical labeling of codes.
//!
//! Components and singular labels form a bipartite incidence structure whose
//! edges carry attachment vectors. Colours are refined until stable; while
//! some label class has more than one member, each member is individualized
//! in turn and the search recurses. Every leaf fixes a total order on labels,
//! hence a fully relabeled code, and the lexicographically least leaf is the
//! canonical form.

use std::collections::BTreeMap;

use super::{BetaVector, ComponentCode, InnerLipschitzCode, Label, Theta};

type CompKey = (Theta, u32, BetaVector, Vec<(usize, BetaVector)>);

struct Incidence<'a> {
    /// Per component: (label index, attachment vector).
    comp_edges: Vec<Vec<(usize, &'a BetaVector)>>,
    /// Per label: (component index, attachment vector).
    label_edges: Vec<Vec<(usize, &'a BetaVector)>>,
    comp_base: Vec<usize>,
}

/// Dense ranks of `keys` under their natural order.
fn ranks<K: Ord>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<&K> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(&k).expect("present")).collect()
}

fn class_count(colours: &[usize]) -> usize {
    colours.iter().max().map_or(0, |m| m + 1)
}

impl<'a> Incidence<'a> {
    fn new(code: &'a InnerLipschitzCode, labels: &[&'a Label]) -> Self {
        let index: BTreeMap<&Label, usize> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        let mut comp_edges = Vec::with_capacity(code.components.len());
        let mut label_edges = vec![Vec::new(); labels.len()];
        for (ci, c) in code.components.iter().enumerate() {
            let mut edges = Vec::new();
            for (l, b) in &c.attachments {
                let li = index[l];
                edges.push((li, b));
                label_edges[li].push((ci, b));
            }
            comp_edges.push(edges);
        }
        let base: Vec<_> = code
            .components
            .iter()
            .map(|c| (c.theta, c.genus, &c.ends, c.attachment_profile()))
            .collect();
        Incidence { comp_edges, label_edges, comp_base: ranks(&base) }
    }

    /// Refine to a stable colouring, starting from the given label colours.
    fn refine(&self, mut label_col: Vec<usize>) -> (Vec<usize>, Vec<usize>) {
        let mut comp_col = self.comp_base.clone();
        loop {
            let comp_sig: Vec<(usize, Vec<(usize, &BetaVector)>)> = self
                .comp_edges
                .iter()
                .enumerate()
                .map(|(ci, edges)| {
                    let mut s: Vec<_> = edges.iter().map(|&(l, b)| (label_col[l], b)).collect();
                    s.sort();
                    (comp_col[ci], s)
                })
                .collect();
            let label_sig: Vec<(usize, Vec<(usize, &BetaVector)>)> = self
                .label_edges
                .iter()
                .enumerate()
                .map(|(li, edges)| {
                    let mut s: Vec<_> = edges.iter().map(|&(c, b)| (comp_col[c], b)).collect();
                    s.sort();
                    (label_col[li], s)
                })
                .collect();
            let next_comp = ranks(&comp_sig);
            let next_label = ranks(&label_sig);
            let stable = class_count(&next_comp) == class_count(&comp_col)
                && class_count(&next_label) == class_count(&label_col);
            comp_col = next_comp;
            label_col = next_label;
            if stable {
                return (comp_col, label_col);
            }
        }
    }
}

fn leaf_key(code: &InnerLipschitzCode, inc: &Incidence<'_>, label_col: &[usize]) -> Vec<CompKey> {
    let mut key: Vec<CompKey> = code
        .components
        .iter()
        .zip(&inc.comp_edges)
        .map(|(c, edges)| {
            let mut att: Vec<_> = edges.iter().map(|&(l, b)| (label_col[l], b.clone())).collect();
            att.sort();
            (c.theta, c.genus, c.ends.clone(), att)
        })
        .collect();
    key.sort();
    key
}

fn search(code: &InnerLipschitzCode, inc: &Incidence<'_>, label_init: Vec<usize>, best: &mut Option<Vec<CompKey>>) {
    let (_, label_col) = inc.refine(label_init);
    let n = label_col.len();
    let mut cell_sizes = vec![0usize; n];
    for &c in &label_col {
        cell_sizes[c] += 1;
    }
    let Some(target) = (0..n).find(|&c| cell_sizes[c] > 1) else {
        let key = leaf_key(code, inc, &label_col);
        if best.as_ref().is_none_or(|b| key < *b) {
            *best = Some(key);
        }
        return;
    };
    for chosen in (0..n).filter(|&l| label_col[l] == target) {
        let split: Vec<(usize, bool)> = label_col.iter().enumerate().map(|(l, &c)| (c, l != chosen)).collect();
        search(code, inc, ranks(&split), best);
    }
}

/// Canonical representative of the equivalence class of `code`: labels are
/// renamed `s1, s2, …` and components sorted, so that two codes are
/// equivalent exactly when their canonical forms are equal.
pub fn canonicalize(code: &InnerLipschitzCode) -> InnerLipschitzCode {
    let labels: Vec<&Label> = code.singular_labels.iter().collect();
    let inc = Incidence::new(code, &labels);
    let mut best = None;
    search(code, &inc, vec![0; labels.len()], &mut best);
    let key = best.expect("search visits at least one leaf");
    let components = key
        .into_iter()
        .map(|(theta, genus, ends, att)| ComponentCode {
            theta,
            genus,
            ends,
            attachments: att.into_iter().map(|(l, b)| (format!("s{}", l + 1), b)).collect(),
        })
        .collect();
    InnerLipschitzCode::from_components(components).expect("relabeling preserves consistency")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code_model::{code_equiv, make_component_code};

    fn comp(genus: u32, ends: &[&str], att: &[(&str, &[&str])]) -> ComponentCode {
        make_component_code(
            Theta::Orientable,
            genus,
            ends.iter().map(|s| s.parse().unwrap()).collect(),
            att.iter()
                .map(|(l, v)| (l.to_string(), v.iter().map(|s| s.parse().unwrap()).collect()))
                .collect(),
        )
        .unwrap()
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn single_component_labels_become_s_indices() {
        let c = comp(0, &["1"], &[("vertex", &["2"]), ("apex", &["3/2"])]);
        let canon = canonicalize(&InnerLipschitzCode::single(c));
        let labels: Vec<_> = canon.singular_labels().iter().cloned().collect();
        assert_eq!(labels, vec!["s1", "s2"]);
        assert_eq!(canon.components()[0].attachments()["s1"].to_string(), "(3/2)");
    }

    #[test]
    fn two_identical_components_sharing_a_point_all_orders() {
        let parts = vec![
            comp(0, &["1/2"], &[("p", &["2"])]),
            comp(0, &["1/2"], &[("p", &["3/2"])]),
            comp(1, &[], &[("p", &["2"]), ("q", &["2"])]),
        ];
        let mut outputs = Vec::new();
        for perm in permutations(parts.len()) {
            let cs = perm.iter().map(|&i| parts[i].clone()).collect();
            outputs.push(canonicalize(&InnerLipschitzCode::from_components(cs).unwrap()).to_json());
        }
        assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn separates_cases_refinement_alone_cannot() {
        let pairs = InnerLipschitzCode::from_components(vec![
            comp(0, &[], &[("p", &["2"]), ("q", &["2"])]),
            comp(0, &[], &[("p", &["2"]), ("q", &["2"])]),
            comp(0, &[], &[("r", &["2"]), ("s", &["2"])]),
            comp(0, &[], &[("r", &["2"]), ("s", &["2"])]),
        ])
        .unwrap();
        let cycle = InnerLipschitzCode::from_components(vec![
            comp(0, &[], &[("p", &["2"]), ("q", &["2"])]),
            comp(0, &[], &[("q", &["2"]), ("r", &["2"])]),
            comp(0, &[], &[("r", &["2"]), ("s", &["2"])]),
            comp(0, &[], &[("s", &["2"]), ("p", &["2"])]),
        ])
        .unwrap();
        assert_ne!(canonicalize(&pairs), canonicalize(&cycle));
        assert!(code_equiv(&pairs, &cycle).is_none());
        let canon = canonicalize(&cycle);
        assert!(code_equiv(&canon, &cycle).is_some());
        assert_eq!(canonicalize(&canon), canon);
    }
}
