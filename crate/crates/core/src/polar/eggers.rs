//! Eggers–Wall tree of the polar factors, optionally together with the
//! branch `f` and its semiroots.
//!
//! Internal nodes carry a contact value; the path from the root to a leaf
//! passes through nodes of strictly increasing contact, and two leaves
//! separate at the node whose value is their mutual contact. Each edge is
//! labelled by the index of the leaf below it, restricted to the
//! characteristic exponents not exceeding the contact at the edge's end
//! nearer the root: the lcm of their denominators.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{FactorKind, PolarPrediction};
use crate::num::{fmt_q, JsonInt, JsonRational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EwNodeKind {
    Root,
    Contact { contact: JsonRational },
    Branch,
    Semiroot { l: usize },
    Factor { group: usize, factor: FactorKind, multiplicity: JsonInt },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EwNode {
    pub id: usize,
    pub label: String,
    #[serde(flatten)]
    pub kind: EwNodeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EwEdge {
    pub from: usize,
    pub to: usize,
    pub index: JsonInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EggersWallTree {
    pub nodes: Vec<EwNode>,
    pub edges: Vec<EwEdge>,
}

fn index_below(chars: &[BigRational], c: &BigRational) -> BigInt {
    chars.iter().filter(|x| *x <= c).fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

struct Builder {
    nodes: Vec<EwNode>,
    /// (parent, child, index) with `None` for removed entries.
    edges: Vec<Option<(usize, usize, BigInt)>>,
    values: Vec<BigRational>,
}

impl Builder {
    fn node(&mut self, label: String, kind: EwNodeKind, value: BigRational) -> usize {
        let id = self.nodes.len();
        self.nodes.push(EwNode { id, label, kind });
        self.values.push(value);
        id
    }

    fn contact(&mut self, c: &BigRational) -> usize {
        self.node(fmt_q(c), EwNodeKind::Contact { contact: JsonRational(c.clone()) }, c.clone())
    }

    fn edge(&mut self, from: usize, to: usize, chars: &[BigRational]) {
        let index = index_below(chars, &self.values[from]);
        self.edges.push(Some((from, to, index)));
    }
}

impl EggersWallTree {
    pub(super) fn build(p: &PolarPrediction, include_branch: bool) -> Self {
        let cs = &p.char;
        let h = cs.h();
        let exps = cs.exponents();
        let mut b = Builder { nodes: Vec::new(), edges: Vec::new(), values: Vec::new() };
        let root = b.node("0".into(), EwNodeKind::Root, BigRational::zero());

        // trunk: root -> b_1/b0 -> ... -> b_h/b0 -> f
        let mut trunk = Vec::with_capacity(h);
        let mut prev = root;
        for c in &exps {
            let id = b.contact(c);
            b.edge(prev, id, &exps);
            trunk.push(id);
            prev = id;
        }
        let f = b.node("f".into(), EwNodeKind::Branch, BigRational::zero());
        b.edge(prev, f, &exps);
        let mut removable = vec![f];

        for l in 1..=h {
            let semiroot_chars = &exps[..l - 1];
            let group = p.group(l);
            // nodes on the semiroot's path, one per distinct contact
            let mut contacts: Vec<BigRational> = group
                .map(|g| {
                    g.factors
                        .iter()
                        .filter(|z| z.kind == FactorKind::Z)
                        .map(|z| z.contact_with_semiroot.clone())
                        .collect()
                })
                .unwrap_or_default();
            contacts.sort();
            contacts.dedup();
            let mut prev = trunk[l - 1];
            let mut at = Vec::with_capacity(contacts.len());
            for c in &contacts {
                let id = b.contact(c);
                b.edge(prev, id, semiroot_chars);
                at.push((c.clone(), id));
                prev = id;
            }
            let fl = b.node(format!("f_{l}"), EwNodeKind::Semiroot { l }, BigRational::zero());
            b.edge(prev, fl, semiroot_chars);
            removable.push(fl);

            for z in group.into_iter().flat_map(|g| g.factors.iter()) {
                let parent = match z.kind {
                    FactorKind::Z => at.iter().find(|(c, _)| *c == z.contact_with_semiroot).expect("node exists").1,
                    FactorKind::W => trunk[l - 1],
                };
                let kind =
                    EwNodeKind::Factor { group: l, factor: z.kind, multiplicity: JsonInt(z.multiplicity.clone()) };
                let id = b.node(z.label(), kind, BigRational::zero());
                b.edge(parent, id, &z.char_exponents);
            }
        }

        if !include_branch {
            b.prune(&removable, root);
        }
        b.finish()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("tree serializes")
    }

    pub fn to_dot(&self) -> String {
        const PALETTE: [&str; 6] = ["red", "blue", "darkgreen", "orange", "purple", "brown"];
        let mut s = String::from("digraph eggers_wall {\n  rankdir=BT;\n  node [fontname=\"Helvetica\"];\n");
        for n in &self.nodes {
            let attrs = match &n.kind {
                EwNodeKind::Root | EwNodeKind::Contact { .. } => "shape=point, xlabel".to_string(),
                EwNodeKind::Branch | EwNodeKind::Semiroot { .. } => "shape=plaintext, label".to_string(),
                EwNodeKind::Factor { group, .. } => {
                    format!("shape=plaintext, fontcolor={}, label", PALETTE[(group - 1) % PALETTE.len()])
                }
            };
            let text = match &n.kind {
                EwNodeKind::Factor { multiplicity, .. } => format!("{} ({})", n.label, multiplicity.0),
                _ => n.label.clone(),
            };
            writeln!(s, "  n{} [{}=\"{}\"];", n.id, attrs, text).expect("write to string");
        }
        for e in &self.edges {
            writeln!(s, "  n{} -> n{} [arrowhead=none, label=\"{}\"];", e.from, e.to, e.index.0)
                .expect("write to string");
        }
        s.push_str("}\n");
        s
    }

    /// Leaves of the tree in construction order.
    pub fn leaves(&self) -> Vec<&EwNode> {
        self.nodes.iter().filter(|n| !self.edges.iter().any(|e| e.from == n.id)).collect()
    }

    pub fn parent(&self, id: usize) -> Option<usize> {
        self.edges.iter().find(|e| e.to == id).map(|e| e.from)
    }

    /// Contact value of an internal node; leaves and unknown ids give `None`.
    pub fn contact(&self, id: usize) -> Option<BigRational> {
        match &self.nodes.iter().find(|n| n.id == id)?.kind {
            EwNodeKind::Root => Some(BigRational::zero()),
            EwNodeKind::Contact { contact } => Some(contact.0.clone()),
            _ => None,
        }
    }

    /// Value of the deepest common ancestor of two leaves.
    pub fn meet(&self, a: usize, b: usize) -> Option<BigRational> {
        let path = |mut x: usize| {
            let mut v = vec![x];
            while let Some(p) = self.parent(x) {
                v.push(p);
                x = p;
            }
            v
        };
        let pa = path(a);
        let pb = path(b);
        pa.iter().find(|x| pb.contains(x)).and_then(|&x| self.contact(x))
    }
}

impl Builder {
    fn children(&self, id: usize) -> Vec<usize> {
        self.edges.iter().flatten().filter(|e| e.0 == id).map(|e| e.1).collect()
    }

    fn incoming(&self, id: usize) -> Option<usize> {
        self.edges.iter().position(|e| e.as_ref().is_some_and(|e| e.1 == id))
    }

    /// Drops the given leaves, then every internal node left without
    /// children, then merges chains through single-child nodes whose two
    /// edges carry the same index.
    fn prune(&mut self, leaves: &[usize], root: usize) {
        let mut dead = vec![false; self.nodes.len()];
        for &l in leaves {
            dead[l] = true;
            if let Some(e) = self.incoming(l) {
                self.edges[e] = None;
            }
        }
        loop {
            let mut changed = false;
            // `dead` and the edges change inside the loop
            #[allow(clippy::needless_range_loop)]
            for id in 0..self.nodes.len() {
                if dead[id] || id == root || !matches!(self.nodes[id].kind, EwNodeKind::Contact { .. }) {
                    continue;
                }
                let kids = self.children(id);
                if kids.is_empty() {
                    dead[id] = true;
                    if let Some(e) = self.incoming(id) {
                        self.edges[e] = None;
                    }
                    changed = true;
                } else if kids.len() == 1 {
                    let inc = self.incoming(id).expect("non-root node has a parent");
                    let out = self.edges.iter().position(|e| e.as_ref().is_some_and(|e| e.0 == id)).expect("one child");
                    let (parent, _, ia) = self.edges[inc].clone().expect("live edge");
                    let (_, child, ib) = self.edges[out].clone().expect("live edge");
                    if ia == ib {
                        self.edges[inc] = Some((parent, child, ia));
                        self.edges[out] = None;
                        dead[id] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let nodes = std::mem::take(&mut self.nodes);
        self.nodes = nodes.into_iter().filter(|n| !dead[n.id]).collect();
    }

    fn finish(self) -> EggersWallTree {
        // renumber densely, preserving order
        let map: std::collections::HashMap<usize, usize> =
            self.nodes.iter().enumerate().map(|(new, n)| (n.id, new)).collect();
        let nodes = self.nodes.into_iter().map(|mut n| {
            n.id = map[&n.id];
            n
        });
        let edges =
            self.edges.into_iter().flatten().map(|(a, c, i)| EwEdge { from: map[&a], to: map[&c], index: JsonInt(i) });
        EggersWallTree { nodes: nodes.collect(), edges: edges.collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::super::predict;
    use super::*;
    use crate::charclass::CharSequence;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn tree(v: &[u64], k: u64, full: bool) -> EggersWallTree {
        predict(&CharSequence::from_u64s(v).unwrap(), k).unwrap().eggers_wall(full)
    }

    fn id(t: &EggersWallTree, label: &str) -> usize {
        t.nodes.iter().find(|n| n.label == label).unwrap().id
    }

    fn edge_into(t: &EggersWallTree, label: &str) -> (String, i64) {
        let e = t.edges.iter().find(|e| e.to == id(t, label)).unwrap();
        (t.nodes[e.from].label.clone(), i64::try_from(&e.index.0).unwrap())
    }

    #[test]
    fn first_example_with_branch() {
        let t = tree(&[12, 16, 31], 1, true);
        assert_eq!(edge_into(&t, "f"), ("31/12".into(), 12));
        assert_eq!(edge_into(&t, "31/12"), ("4/3".into(), 3));
        assert_eq!(edge_into(&t, "4/3"), ("0".into(), 1));
        assert_eq!(edge_into(&t, "z_1^(1)"), ("3/2".into(), 2));
        assert_eq!(edge_into(&t, "f_1"), ("3/2".into(), 1));
        assert_eq!(edge_into(&t, "f_2"), ("8/3".into(), 3));
        assert_eq!(edge_into(&t, "8/3"), ("31/12".into(), 3));
        for j in 1..=3 {
            assert_eq!(edge_into(&t, &format!("z_{j}^(2)")), ("8/3".into(), 3));
        }
        assert_eq!(t.leaves().len(), 7);
    }

    #[test]
    fn second_example_second_polar() {
        let t = tree(&[10, 14, 15], 2, true);
        assert_eq!(edge_into(&t, "f"), ("3/2".into(), 10));
        assert_eq!(edge_into(&t, "w_1^(1)"), ("7/5".into(), 5));
        assert_eq!(edge_into(&t, "z_1^(1)"), ("2".into(), 1));
        assert_eq!(edge_into(&t, "z_2^(1)"), ("3/2".into(), 2));
        assert_eq!(edge_into(&t, "f_2"), ("3/2".into(), 5));
    }

    #[test]
    fn meets_are_pairwise_contacts() {
        for (v, k) in [(&[12u64, 16, 31][..], 2), (&[10, 14, 15], 1), (&[10, 14, 15], 2), (&[12, 16, 31], 1)] {
            let p = predict(&CharSequence::from_u64s(v).unwrap(), k).unwrap();
            for full in [true, false] {
                let t = p.eggers_wall(full);
                for (a, b, c) in p.contact_table() {
                    assert_eq!(t.meet(id(&t, &a), id(&t, &b)), Some(c), "{a} {b}");
                }
                for f in p.factors() {
                    let cf = if full { t.meet(id(&t, &f.label()), id(&t, "f")) } else { None };
                    if full {
                        assert_eq!(cf, Some(f.contact_with_f.clone()));
                    }
                }
            }
        }
    }

    #[test]
    fn single_smooth_factor_gives_two_nodes() {
        let t = tree(&[2, 3], 1, false);
        assert_eq!(t.nodes.len(), 2);
        assert_eq!(t.edges.len(), 1);
        assert_eq!(t.nodes[1].label, "z_1^(1)");
    }

    #[test]
    fn contacts_increase_towards_leaves() {
        let t = tree(&[12, 16, 31], 2, true);
        for e in &t.edges {
            if let (Some(a), Some(b)) = (t.contact(e.from), t.contact(e.to)) {
                assert!(a < b);
            }
        }
        assert_eq!(t.contact(id(&t, "8/3")), Some(q(8, 3)));
    }

    #[test]
    fn dot_has_edge_labels() {
        let d = tree(&[12, 16, 31], 1, true).to_dot();
        assert!(d.starts_with("digraph"));
        assert!(d.contains("label=\"12\""));
        assert!(d.contains("z_1^(2) (3)"));
    }
}
