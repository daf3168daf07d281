//! Finite groups as dense index sets.
//!
//! Elements are the indices `0..order`. Structured groups (cyclic, affine,
//! direct products) carry an index codec; the multiplication is evaluated from
//! the codec and cached in a Cayley table when the order is small enough.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng;

/// Largest order for which the Cayley table is materialized.
pub const CAYLEY_TABLE_MAX_ORDER: usize = 4096;
/// Largest modulus accepted by [`make_affine`].
pub const AFFINE_MAX_PRIME: u64 = 1_000_000;

const EXHAUSTIVE_AXIOM_ORDER: usize = 64;
const RANDOM_AXIOM_TRIPLES: usize = 100_000;

/// How the multiplication of a group is computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    /// Z_n under addition.
    Cyclic { n: usize },
    /// Z_p x Z_p^* with `(k,l)(k',l') = (k + l k', l l')`, index `k (p-1) + (l-1)`.
    Affine { p: u64 },
    /// Componentwise product, index `a |H| + b`.
    Product(Box<GroupKind>, Box<GroupKind>),
}

impl GroupKind {
    fn order(&self) -> usize {
        match self {
            GroupKind::Cyclic { n } => *n,
            GroupKind::Affine { p } => (p * (p - 1)) as usize,
            GroupKind::Product(a, b) => a.order() * b.order(),
        }
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        match self {
            GroupKind::Cyclic { n } => (a + b) % n,
            GroupKind::Affine { p } => {
                let (k1, l1) = affine_decode(*p, a);
                let (k2, l2) = affine_decode(*p, b);
                affine_encode(*p, (k1 + l1 * k2) % p, (l1 * l2) % p)
            }
            GroupKind::Product(g, h) => {
                let w = h.order();
                g.mul(a / w, b / w) * w + h.mul(a % w, b % w)
            }
        }
    }

    fn inv(&self, a: usize) -> usize {
        match self {
            GroupKind::Cyclic { n } => (n - a % n) % n,
            GroupKind::Affine { p } => {
                let (k, l) = affine_decode(*p, a);
                let l_inv = mod_inverse(l, *p);
                affine_encode(*p, (p - (l_inv * k) % p) % p, l_inv)
            }
            GroupKind::Product(g, h) => {
                let w = h.order();
                g.inv(a / w) * w + h.inv(a % w)
            }
        }
    }

    fn label(&self) -> String {
        match self {
            GroupKind::Cyclic { n } => format!("Z{n}"),
            GroupKind::Affine { p } => format!("Aff({p})"),
            GroupKind::Product(a, b) => format!("{}x{}", a.label(), b.label()),
        }
    }
}

fn affine_encode(p: u64, k: u64, l: u64) -> usize {
    (k * (p - 1) + (l - 1)) as usize
}

fn affine_decode(p: u64, idx: usize) -> (u64, u64) {
    let idx = idx as u64;
    (idx / (p - 1), idx % (p - 1) + 1)
}

/// Inverse of `a` modulo the prime `p`.
fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i64) as u64
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A finite group on the element indices `0..order`.
///
/// Cloning is cheap; the Cayley table is shared.
#[derive(Clone)]
pub struct FiniteGroup {
    kind: GroupKind,
    order: usize,
    label: String,
    table: Option<Arc<[u32]>>,
    inverses: Option<Arc<[u32]>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.order)
            .field("cayley_table", &self.table.is_some())
            .finish()
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    fn from_kind(kind: GroupKind) -> Self {
        let order = kind.order();
        let label = kind.label();
        let (table, inverses) = if order <= CAYLEY_TABLE_MAX_ORDER {
            let mut table = Vec::with_capacity(order * order);
            for a in 0..order {
                table.extend((0..order).map(|b| kind.mul(a, b) as u32));
            }
            let inverses: Vec<u32> = (0..order).map(|a| kind.inv(a) as u32).collect();
            (Some(Arc::from(table)), Some(Arc::from(inverses)))
        } else {
            (None, None)
        };
        FiniteGroup {
            kind,
            order,
            label,
            table,
            inverses,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Index of the neutral element.
    pub fn identity(&self) -> usize {
        match self.kind {
            GroupKind::Affine { p } => affine_encode(p, 0, 1),
            _ => 0,
        }
    }

    pub fn has_cayley_table(&self) -> bool {
        self.table.is_some()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.order && b < self.order);
        match &self.table {
            Some(t) => t[a * self.order + b] as usize,
            None => self.kind.mul(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        debug_assert!(a < self.order);
        match &self.inverses {
            Some(t) => t[a] as usize,
            None => self.kind.inv(a),
        }
    }

    /// The pair `(k, l)` of an affine-group element.
    pub fn affine_pair(&self, idx: usize) -> Result<(u64, u64)> {
        match self.kind {
            GroupKind::Affine { p } if idx < self.order => Ok(affine_decode(p, idx)),
            GroupKind::Affine { .. } => Err(Error::InvalidArgument(format!(
                "element {idx} out of range for {}",
                self.label
            ))),
            _ => Err(Error::InvalidArgument(format!("{} is not an affine group", self.label))),
        }
    }

    /// Index of the affine-group element `(k, l)`.
    pub fn affine_element(&self, k: u64, l: u64) -> Result<usize> {
        match self.kind {
            GroupKind::Affine { p } if k < p && (1..p).contains(&l) => Ok(affine_encode(p, k, l)),
            GroupKind::Affine { p } => Err(Error::InvalidArgument(format!(
                "({k}, {l}) is not an element of Aff({p})"
            ))),
            _ => Err(Error::InvalidArgument(format!("{} is not an affine group", self.label))),
        }
    }

    /// Components of a direct-product element.
    pub fn product_pair(&self, idx: usize) -> Result<(usize, usize)> {
        match &self.kind {
            GroupKind::Product(_, h) if idx < self.order => Ok((idx / h.order(), idx % h.order())),
            _ => Err(Error::InvalidArgument(format!(
                "{idx} is not an element of a direct product ({})",
                self.label
            ))),
        }
    }

    /// Index of the direct-product element `(a, b)`.
    pub fn product_element(&self, a: usize, b: usize) -> Result<usize> {
        match &self.kind {
            GroupKind::Product(g, h) if a < g.order() && b < h.order() => Ok(a * h.order() + b),
            _ => Err(Error::InvalidArgument(format!(
                "({a}, {b}) is not an element of {}",
                self.label
            ))),
        }
    }

    /// Whether the group is abelian (exhaustive, intended for small groups).
    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Order of the element `a`.
    pub fn element_order(&self, a: usize) -> usize {
        let e = self.identity();
        let mut x = a;
        let mut k = 1;
        while x != e {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Checks the group axioms: exhaustively up to order 64, otherwise on
    /// 10^5 random triples. Identity and inverse laws are checked on every
    /// element when the Cayley table exists.
    pub fn verify_axioms(&self) -> Result<()> {
        let n = self.order;
        let e = self.identity();
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::GroupAxiom(format!("associativity fails at ({a}, {b}, {c})")));
            }
            Ok(())
        };
        let unit = |a: usize| -> Result<()> {
            if self.mul(e, a) != a || self.mul(a, e) != a {
                return Err(Error::GroupAxiom(format!("identity law fails at {a}")));
            }
            if self.mul(a, self.inv(a)) != e {
                return Err(Error::GroupAxiom(format!("inverse law fails at {a}")));
            }
            Ok(())
        };

        if n <= EXHAUSTIVE_AXIOM_ORDER {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = rng::stream(n as u64, rng::TAG_SAMPLING);
            for _ in 0..RANDOM_AXIOM_TRIPLES {
                check(rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n))?;
            }
        }

        if self.table.is_some() {
            for a in 0..n {
                unit(a)?;
            }
            self.verify_latin_square()?;
        } else {
            let mut rng = rng::stream(n as u64 ^ 1, rng::TAG_SAMPLING);
            for _ in 0..RANDOM_AXIOM_TRIPLES {
                unit(rng.random_range(0..n))?;
            }
        }
        Ok(())
    }

    fn verify_latin_square(&self) -> Result<()> {
        let n = self.order;
        let mut seen = vec![false; n];
        for a in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                let c = self.mul(a, b);
                if seen[c] {
                    return Err(Error::GroupAxiom(format!("row {a} of the Cayley table repeats {c}")));
                }
                seen[c] = true;
            }
        }
        for b in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for a in 0..n {
                let c = self.mul(a, b);
                if seen[c] {
                    return Err(Error::GroupAxiom(format!("column {b} of the Cayley table repeats {c}")));
                }
                seen[c] = true;
            }
        }
        Ok(())
    }
}

/// The cyclic group Z_n.
pub fn make_cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidOrder(0));
    }
    Ok(FiniteGroup::from_kind(GroupKind::Cyclic { n }))
}

/// The affine group Z_p x Z_p^* for a prime `p`.
pub fn make_affine(p: u64) -> Result<FiniteGroup> {
    if p > AFFINE_MAX_PRIME {
        return Err(Error::InvalidArgument(format!(
            "affine modulus {p} exceeds {AFFINE_MAX_PRIME}"
        )));
    }
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(FiniteGroup::from_kind(GroupKind::Affine { p }))
}

/// The direct product G x H, limited to order 4096.
pub fn make_direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
    let order = g.order().saturating_mul(h.order());
    if order > CAYLEY_TABLE_MAX_ORDER {
        return Err(Error::SizeLimit {
            what: "direct product order",
            size: order,
            limit: CAYLEY_TABLE_MAX_ORDER,
        });
    }
    Ok(FiniteGroup::from_kind(GroupKind::Product(
        Box::new(g.kind.clone()),
        Box::new(h.kind.clone()),
    )))
}

/// The elements `(k, 1)`, `k` in Z_p, of the affine group over `p`.
pub fn affine_axis_subset(p: u64) -> Result<Vec<usize>> {
    let g = make_affine(p)?;
    (0..p).map(|k| g.affine_element(k, 1)).collect()
}

/// An ordered set of distinct group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplingSet {
    elements: Vec<usize>,
    group_label: String,
}

impl SamplingSet {
    /// Builds a sampling set from explicit elements. Duplicates are an error.
    pub fn new(group: &FiniteGroup, elements: Vec<usize>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidArgument("sampling set must be non-empty".into()));
        }
        let mut seen = HashSet::with_capacity(elements.len());
        for &e in &elements {
            if e >= group.order() {
                return Err(Error::InvalidArgument(format!(
                    "element {e} out of range for {} (order {})",
                    group.label(),
                    group.order()
                )));
            }
            if !seen.insert(e) {
                return Err(Error::InvalidArgument(format!("duplicate element {e} in sampling set")));
            }
        }
        Ok(SamplingSet {
            elements,
            group_label: group.label().to_string(),
        })
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn group_label(&self) -> &str {
        &self.group_label
    }
}

/// Draws `m` distinct elements uniformly without replacement from `allowed`
/// (all of `group` when `None`), in draw order.
pub fn random_sampling_set(group: &FiniteGroup, m: usize, allowed: Option<&[usize]>, seed: u64) -> Result<SamplingSet> {
    if m == 0 {
        return Err(Error::InvalidArgument("sampling set size must be at least 1".into()));
    }
    let available = allowed.map_or(group.order(), <[usize]>::len);
    if m > available {
        return Err(Error::InfeasibleSample {
            requested: m,
            available,
        });
    }
    let mut rng = rng::stream(seed, rng::TAG_SAMPLING);
    let picks = index::sample(&mut rng, available, m);
    let elements: Vec<usize> = match allowed {
        Some(pool) => picks.iter().map(|i| pool[i]).collect(),
        None => picks.iter().collect(),
    };
    SamplingSet::new(group, elements)
}
