//! The order `mu < nu  iff  mu * nu = nu` on idempotent states, and its Hasse diagram.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SekineError};
use crate::functionals::{convolve, fourier_all, Functional, FUNCTIONAL_EQ_TOL};
use crate::idempotents::{Catalog, IdempotentDescriptor};

/// Default threshold for the numeric order tests.
pub const ORDER_TOL: f64 = FUNCTIONAL_EQ_TOL;

/// `mu * nu = nu` up to `tol` in L-infinity.
pub fn precedes(mu: &Functional, nu: &Functional, tol: f64) -> bool {
    match convolve(mu, nu) {
        Ok(prod) => prod.distance(nu) < tol,
        Err(_) => false,
    }
}

/// `mu_hat(pi) nu_hat(pi) = nu_hat(pi)` at every label.
pub fn precedes_fourier(mu: &Functional, nu: &Functional, tol: f64) -> bool {
    if mu.k() != nu.k() {
        return false;
    }
    let fm = fourier_all(mu);
    let fn_ = fourier_all(nu);
    fm.iter().all(|(label, a)| {
        let b = &fn_[label];
        b.distance(&(a.matrix * b.matrix)) < tol
    })
}

/// Combinatorial decision of `da < db` from the descriptors alone.
pub fn theoretic_precedes(k: usize, da: &IdempotentDescriptor, db: &IdempotentDescriptor) -> bool {
    use IdempotentDescriptor::*;
    let contained = || match (da.gamma(k), db.gamma(k)) {
        (Ok(a), Ok(b)) => a.is_subset_of(&b),
        _ => false,
    };
    // l_mu = l_nu (mod q_nu) with q_nu | q_mu
    let congruent = |q_mu: usize, l_mu: usize, q_nu: usize, l_nu: usize| {
        q_mu.is_multiple_of(q_nu) && l_mu % q_nu == l_nu % q_nu
    };
    match (da, db) {
        (_, Haar) => true,
        (Haar, _) => false,
        (HaarSub { .. }, _) => contained(),
        (_, HaarSub { .. }) => false,
        (TypeII { q: qa, l: la }, TypeII { q: qb, l: lb }) => congruent(*qa, *la, *qb, *lb),
        (TypeII { .. }, TypeIII { .. }) => false,
        (TypeIII { p: pa, l: la, .. }, TypeII { q: qb, l: lb }) => congruent(k / pa, *la, *qb, *lb),
        (TypeIII { .. }, TypeIII { .. }) => da == db,
    }
}

/// Boolean relation matrix over labelled nodes, `rel[i][j]` meaning `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderRelation {
    pub labels: Vec<String>,
    pub rel: Vec<Vec<bool>>,
}

impl OrderRelation {
    pub fn new(labels: Vec<String>, rel: Vec<Vec<bool>>) -> Result<Self> {
        let n = labels.len();
        if rel.len() != n || rel.iter().any(|row| row.len() != n) {
            return Err(SekineError::InvalidParameter(format!(
                "relation must be {n}x{n}"
            )));
        }
        Ok(Self { labels, rel })
    }

    pub fn from_fn(labels: Vec<String>, f: impl Fn(usize, usize) -> bool + Sync) -> Self {
        let n = labels.len();
        let rel = (0..n)
            .into_par_iter()
            .map(|i| (0..n).map(|j| f(i, j)).collect())
            .collect();
        Self { labels, rel }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn holds(&self, i: usize, j: usize) -> bool {
        self.rel[i][j]
    }

    /// Reflexivity, antisymmetry and transitivity, or the first violation.
    pub fn check_partial_order(&self) -> Result<()> {
        let n = self.len();
        let l = &self.labels;
        for i in 0..n {
            if !self.rel[i][i] {
                return Err(SekineError::NotPartialOrder(format!("{} is not reflexive", l[i])));
            }
            for j in 0..n {
                if i != j && self.rel[i][j] && self.rel[j][i] {
                    return Err(SekineError::NotPartialOrder(format!(
                        "{} and {} precede each other",
                        l[i], l[j]
                    )));
                }
                if !self.rel[i][j] {
                    continue;
                }
                if let Some(m) = (0..n).find(|&m| self.rel[j][m] && !self.rel[i][m]) {
                    return Err(SekineError::NotPartialOrder(format!(
                        "{} < {} < {} but not {} < {}",
                        l[i], l[j], l[m], l[i], l[m]
                    )));
                }
            }
        }
        Ok(())
    }

    /// The element below everything, if any.
    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.rel[i].iter().all(|&b| b))
    }

    /// The element above everything, if any.
    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&j| self.rel.iter().all(|row| row[j]))
    }

    /// Pairs on which two relations over the same nodes disagree.
    pub fn mismatches(&self, other: &Self) -> Vec<(usize, usize)> {
        let n = self.len().min(other.len());
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.rel[i][j] != other.rel[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

fn labels_of(catalog: &Catalog) -> Vec<String> {
    catalog.descriptors().map(IdempotentDescriptor::label).collect()
}

/// Order by the convolution definition; asserts the partial-order axioms and
/// that counit and Haar state are the extremes.
pub fn build_order(catalog: &Catalog) -> Result<OrderRelation> {
    build_order_with_tol(catalog, ORDER_TOL)
}

pub fn build_order_with_tol(catalog: &Catalog, tol: f64) -> Result<OrderRelation> {
    let e = &catalog.entries;
    let rel = OrderRelation::from_fn(labels_of(catalog), |i, j| {
        precedes(&e[i].functional, &e[j].functional, tol)
    });
    rel.check_partial_order()?;
    let min = rel.minimum().map(|i| rel.labels[i].as_str());
    let max = rel.maximum().map(|i| rel.labels[i].as_str());
    if min != Some("eps") || max != Some("h") {
        return Err(SekineError::NotPartialOrder(format!(
            "expected minimum eps and maximum h, got {min:?} and {max:?}"
        )));
    }
    Ok(rel)
}

pub fn build_order_fourier(catalog: &Catalog, tol: f64) -> OrderRelation {
    let e = &catalog.entries;
    OrderRelation::from_fn(labels_of(catalog), |i, j| {
        precedes_fourier(&e[i].functional, &e[j].functional, tol)
    })
}

pub fn build_order_theoretic(catalog: &Catalog) -> OrderRelation {
    let e = &catalog.entries;
    let k = catalog.k;
    OrderRelation::from_fn(labels_of(catalog), |i, j| {
        theoretic_precedes(k, &e[i].descriptor, &e[j].descriptor)
    })
}

/// Cover relations of a partial order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HasseDiagram {
    pub labels: Vec<String>,
    /// `(lower, upper)` pairs, sorted.
    pub edges: Vec<(usize, usize)>,
}

/// Transitive reduction. Rejects relations with a cycle.
pub fn hasse(rel: &OrderRelation) -> Result<HasseDiagram> {
    let n = rel.len();
    for i in 0..n {
        for j in i + 1..n {
            if rel.rel[i][j] && rel.rel[j][i] {
                return Err(SekineError::NotPartialOrder(format!(
                    "cycle through {} and {}",
                    rel.labels[i], rel.labels[j]
                )));
            }
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || !rel.rel[i][j] {
                continue;
            }
            let covered = (0..n).any(|m| m != i && m != j && rel.rel[i][m] && rel.rel[m][j]);
            if !covered {
                edges.push((i, j));
            }
        }
    }
    Ok(HasseDiagram {
        labels: rel.labels.clone(),
        edges,
    })
}

impl HasseDiagram {
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Length of the longest chain of covers from a minimal node, per node.
    pub fn ranks(&self) -> Vec<usize> {
        let n = self.labels.len();
        let mut rank = vec![0usize; n];
        // n passes of relaxation settle every longest path in a DAG.
        for _ in 0..n {
            let mut changed = false;
            for &(a, b) in &self.edges {
                if rank[b] < rank[a] + 1 {
                    rank[b] = rank[a] + 1;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        rank
    }

    /// Nodes grouped by rank, bottom first.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let ranks = self.ranks();
        let depth = ranks.iter().copied().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); depth];
        for (i, r) in ranks.into_iter().enumerate() {
            out[r].push(i);
        }
        out
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.labels.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
        }
        adj
    }
}

/// Graphviz text, nodes in catalog order, edges from smaller to larger.
pub fn export_dot(hd: &HasseDiagram) -> String {
    let mut out = String::from("digraph idempotents {\n  rankdir=BT;\n");
    for (i, label) in hd.labels.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", label.replace('"', "\\\""));
    }
    for &(a, b) in &hd.edges {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct JsonNode<'a> {
    id: usize,
    label: &'a str,
    covers: Vec<usize>,
}

#[derive(Serialize)]
struct JsonGraph<'a> {
    nodes: Vec<JsonNode<'a>>,
    edges: &'a [(usize, usize)],
}

/// Adjacency list JSON: each node lists the nodes covering it.
pub fn export_json(hd: &HasseDiagram) -> Result<String> {
    let adj = hd.adjacency();
    let graph = JsonGraph {
        nodes: hd
            .labels
            .iter()
            .enumerate()
            .map(|(id, label)| JsonNode {
                id,
                label,
                covers: adj[id].clone(),
            })
            .collect(),
        edges: &hd.edges,
    };
    Ok(serde_json::to_string_pretty(&graph)?)
}
