//! Subset-sum search over the discovered values.
//!
//! The core repeatedly asks: which subsets of the values found so far sum to
//! the next cell value? All values are strictly positive, so a depth-first
//! search that picks the largest element first can prune hard with prefix
//! sums and binary-searched candidate windows; typical queries cost
//! O(log m + matches). The search runs to a *second* matching subset (or a
//! node budget), because an ambiguous match must be certified, never decoded
//! arbitrarily.

use num_rational::BigRational;
use num_traits::Zero;

/// Value arithmetic plus the matching window. Exact mode has a zero-width
/// window; float mode matches within `w` of the current target.
pub(crate) trait SumDomain {
    type V: Clone;
    fn zero(&self) -> Self::V;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn lt(&self, a: &Self::V, b: &Self::V) -> bool;
    /// a ≤ b + w.
    fn le_window(&self, a: &Self::V, b: &Self::V) -> bool;
    /// |a| ≤ w.
    fn zeroish(&self, a: &Self::V) -> bool;
}

pub(crate) struct ExactDomain;

impl SumDomain for ExactDomain {
    type V = BigRational;
    fn zero(&self) -> Self::V {
        BigRational::zero()
    }
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V {
        a + b
    }
    fn sub(&self, a: &Self::V, b: &Self::V) -> Self::V {
        a - b
    }
    fn lt(&self, a: &Self::V, b: &Self::V) -> bool {
        a < b
    }
    fn le_window(&self, a: &Self::V, b: &Self::V) -> bool {
        a <= b
    }
    fn zeroish(&self, a: &Self::V) -> bool {
        a.is_zero()
    }
}

/// `w` is fixed per search target: `max(abs_tol, rel_tol · |target|)`.
pub(crate) struct FloatDomain {
    pub w: f64,
}

impl SumDomain for FloatDomain {
    type V = f64;
    fn zero(&self) -> Self::V {
        0.0
    }
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V {
        a + b
    }
    fn sub(&self, a: &Self::V, b: &Self::V) -> Self::V {
        a - b
    }
    fn lt(&self, a: &Self::V, b: &Self::V) -> bool {
        a < b
    }
    fn le_window(&self, a: &Self::V, b: &Self::V) -> bool {
        *a <= *b + self.w
    }
    fn zeroish(&self, a: &Self::V) -> bool {
        a.abs() <= self.w
    }
}

#[derive(Clone, PartialEq, Debug)]
pub(crate) enum SubsetOutcome {
    None,
    /// Original indices, ascending.
    Unique(Vec<u32>),
    Ambiguous(Vec<u32>, Vec<u32>),
    BudgetExceeded,
}

/// The growing set of discovered values, kept sorted with prefix sums.
pub(crate) struct Pool<V> {
    /// (value, original index), ascending by value.
    vals: Vec<(V, u32)>,
    /// prefix[i] = Σ vals[0..i].
    prefix: Vec<V>,
}

impl<V: Clone> Pool<V> {
    pub fn new() -> Self {
        Pool {
            vals: Vec::new(),
            prefix: Vec::new(),
        }
    }

    pub fn push<D: SumDomain<V = V>>(&mut self, dom: &D, value: V, index: u32) {
        let at = self.vals.partition_point(|(v, _)| dom.lt(v, &value));
        self.vals.insert(at, (value, index));
        // Rebuilt in full: the pool grows rarely relative to how often it is
        // searched, and this keeps the sums exact per mode.
        self.prefix.clear();
        self.prefix.push(dom.zero());
        for (v, _) in &self.vals {
            let next = dom.add(self.prefix.last().unwrap(), v);
            self.prefix.push(next);
        }
    }

    /// All subsets summing to `target` (up to the second one found).
    pub fn find<D: SumDomain<V = V>>(
        &self,
        dom: &D,
        target: &V,
        node_budget: u64,
    ) -> SubsetOutcome {
        let mut s = Searcher {
            dom,
            vals: &self.vals,
            prefix: &self.prefix,
            stack: Vec::new(),
            found: Vec::new(),
            budget: node_budget,
            exhausted: false,
        };
        s.descend(self.vals.len(), target.clone());
        let mut found = s.found;
        if s.exhausted && found.len() < 2 {
            // An unseen part of the space could hide a (second) match, so
            // neither None nor Unique would be trustworthy.
            return SubsetOutcome::BudgetExceeded;
        }
        for subset in &mut found {
            subset.sort_unstable();
        }
        match found.len() {
            0 => SubsetOutcome::None,
            1 => SubsetOutcome::Unique(found.pop().unwrap()),
            _ => {
                let b = found.swap_remove(1);
                let a = found.swap_remove(0);
                SubsetOutcome::Ambiguous(a, b)
            }
        }
    }
}

struct Searcher<'a, D: SumDomain> {
    dom: &'a D,
    vals: &'a [(D::V, u32)],
    prefix: &'a [D::V],
    stack: Vec<u32>,
    found: Vec<Vec<u32>>,
    budget: u64,
    exhausted: bool,
}

impl<'a, D: SumDomain> Searcher<'a, D> {
    fn spend(&mut self) -> bool {
        if self.budget == 0 {
            self.exhausted = true;
            return false;
        }
        self.budget -= 1;
        true
    }

    /// Explore subsets of `vals[0..hi]` summing (within window) to `r`.
    /// Elements are chosen in descending index order, so each subset is
    /// visited exactly once.
    fn descend(&mut self, hi: usize, r: D::V) {
        if !self.spend() {
            return;
        }
        // Completions by a single element: v_i within the window of r.
        let lo_eq = self.vals[..hi].partition_point(|(v, _)| !self.dom.le_window(&r, v));
        let hi_eq = self.vals[..hi].partition_point(|(v, _)| self.dom.le_window(v, &r));
        for i in lo_eq..hi_eq {
            self.stack.push(self.vals[i].1);
            self.found.push(self.stack.clone());
            self.stack.pop();
            if self.found.len() >= 2 {
                return;
            }
        }
        if self.vals.is_empty() {
            return;
        }
        // Extensions: pick v_i as the subset's largest element, leaving
        // r - v_i for elements below i. That remainder needs at least one
        // more element, so v_i ≤ r - min_value + w; and everything below i
        // must be able to reach r, so prefix[i+1] ≥ r - w.
        let ext_cap = self.dom.sub(&r, &self.vals[0].0);
        let hi_ext = self.vals[..hi].partition_point(|(v, _)| self.dom.le_window(v, &ext_cap));
        // Prefix sums ascend, so the feasibility cut is a partition point.
        let lo_ext = self.prefix[1..=hi].partition_point(|p| !self.dom.le_window(&r, p));
        if lo_ext == hi {
            return;
        }
        for i in (lo_ext..hi_ext).rev() {
            if self.found.len() >= 2 || self.exhausted {
                return;
            }
            if !self.spend() {
                return;
            }
            let rem = self.dom.sub(&r, &self.vals[i].0);
            // A zeroish remainder was already handled by the window pass.
            if self.dom.zeroish(&rem) {
                continue;
            }
            self.stack.push(self.vals[i].1);
            self.descend(i, rem);
            self.stack.pop();
        }
    }
}
