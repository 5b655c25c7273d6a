//! Subgroups of `Z_k x Z_k`.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{check_order, Result, SekineError};

/// A subgroup of `Z_k x Z_k`, stored as its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subgroup {
    k: usize,
    elements: Vec<(usize, usize)>,
}

impl Subgroup {
    /// The subgroup generated by `gens`.
    pub fn generated_by(k: usize, gens: &[(usize, usize)]) -> Result<Self> {
        check_order(k)?;
        let mut member = vec![false; k * k];
        member[0] = true;
        let mut elements = vec![(0, 0)];
        // Closing under addition by each generator is enough in a finite group.
        let mut frontier = 0;
        while frontier < elements.len() {
            let (i, j) = elements[frontier];
            frontier += 1;
            for &(a, b) in gens {
                let next = ((i + a) % k, (j + b) % k);
                let slot = next.0 * k + next.1;
                if !member[slot] {
                    member[slot] = true;
                    elements.push(next);
                }
            }
        }
        elements.sort_unstable();
        Ok(Self { k, elements })
    }

    /// Validates an explicit element list and wraps it.
    pub fn from_elements(k: usize, elements: &[(usize, usize)]) -> Result<Self> {
        check_order(k)?;
        let set: BTreeSet<(usize, usize)> = elements.iter().map(|&(i, j)| (i % k, j % k)).collect();
        let candidate = Self {
            k,
            elements: set.into_iter().collect(),
        };
        if !candidate.is_closed() {
            return Err(SekineError::InvalidParameter(format!(
                "{:?} is not a subgroup of Z_{k} x Z_{k}",
                candidate.elements
            )));
        }
        Ok(candidate)
    }

    /// `pZ_k x qZ_k` for divisors `p`, `q` of `k`.
    pub fn product(k: usize, p: usize, q: usize) -> Result<Self> {
        if p == 0 || q == 0 || !k.is_multiple_of(p) || !k.is_multiple_of(q) {
            return Err(SekineError::InvalidParameter(format!(
                "{p} and {q} must both divide {k}"
            )));
        }
        Self::generated_by(k, &[(p % k, 0), (0, q % k)])
    }

    pub fn trivial(k: usize) -> Result<Self> {
        Self::generated_by(k, &[])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[(usize, usize)] {
        &self.elements
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.elements.binary_search(&(i % self.k, j % self.k)).is_ok()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.k == other.k && self.elements.iter().all(|&(i, j)| other.contains(i, j))
    }

    /// Contains the identity, and is closed under addition and negation.
    pub fn is_closed(&self) -> bool {
        let k = self.k;
        if !self.contains(0, 0) || !(k * k).is_multiple_of(self.order()) {
            return false;
        }
        self.elements.iter().all(|&(a, b)| {
            self.contains((k - a) % k, (k - b) % k)
                && self
                    .elements
                    .iter()
                    .all(|&(c, d)| self.contains(a + c, b + d))
        })
    }

    /// Canonical generators `(a, b), (0, d)`: `a` is the least positive first
    /// coordinate occurring, `b` the least second coordinate paired with it,
    /// and `d` the least positive `j` with `(0, j)` in the subgroup. Values
    /// equal to `k` are reported as `0`.
    pub fn canonical_generators(&self) -> [(usize, usize); 2] {
        let k = self.k;
        let a = (1..=k)
            .find(|&i| self.elements.iter().any(|&(x, _)| x == i % k))
            .expect("(0,0) is always present");
        let b = (0..k)
            .find(|&j| self.contains(a % k, j))
            .expect("a was chosen from an element");
        let d = (1..=k).find(|&j| self.contains(0, j)).expect("(0,k) = (0,0)");
        [(a % k, b), (0, d % k)]
    }

    /// `(p, q)` when this subgroup equals `pZ_k x qZ_k`.
    pub fn as_product(&self) -> Option<(usize, usize)> {
        let k = self.k;
        let p = (1..=k).find(|&i| self.contains(i, 0))?;
        let q = (1..=k).find(|&j| self.contains(0, j))?;
        let expected = (k / p) * (k / q);
        (expected == self.order()).then_some((p, q))
    }

    /// `{(i, j) : eta^{ai + bj} = 1 for all (a, b) in the subgroup}`.
    pub fn annihilator(&self) -> Self {
        let k = self.k;
        let mut elements = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if self.elements.iter().all(|&(a, b)| (a * i + b * j) % k == 0) {
                    elements.push((i, j));
                }
            }
        }
        Self { k, elements }
    }

    fn sum_with(&self, other: &Self) -> Self {
        let k = self.k;
        let mut set = BTreeSet::new();
        for &(a, b) in &self.elements {
            for &(c, d) in &other.elements {
                set.insert(((a + c) % k, (b + d) % k));
            }
        }
        Self {
            k,
            elements: set.into_iter().collect(),
        }
    }

    /// Order of subgroups used for catalog output: by size, then elements.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.elements.cmp(&other.elements))
    }
}

/// Every subgroup of `Z_k x Z_k`, each once, in canonical order.
///
/// Subgroups of `Z_k x Z_k` are generated by two elements, so each is the sum
/// of two cyclic subgroups. Cyclic subgroups are collected first and their
/// pairwise sums deduplicated.
pub fn enumerate_subgroups(k: usize) -> Result<Vec<Subgroup>> {
    check_order(k)?;
    let mut cyclic = BTreeSet::new();
    for i in 0..k {
        for j in 0..k {
            cyclic.insert(Subgroup::generated_by(k, &[(i, j)])?.elements);
        }
    }
    let cyclic: Vec<Subgroup> = cyclic
        .into_iter()
        .map(|elements| Subgroup { k, elements })
        .collect();

    let mut all = BTreeSet::new();
    for (x, a) in cyclic.iter().enumerate() {
        for b in &cyclic[x..] {
            all.insert(a.sum_with(b).elements);
        }
    }
    let mut out: Vec<Subgroup> = all
        .into_iter()
        .map(|elements| Subgroup { k, elements })
        .collect();
    out.sort_by(Subgroup::canonical_cmp);
    Ok(out)
}
