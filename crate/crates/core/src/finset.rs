//! Canonical finite sets and functions, with the (co)limit machinery the rest
//! of the crate leans on: products of cospans (pullbacks), pushouts and
//! coequalizers by union-find, exponentials, and limits of quiver-shaped
//! diagrams computed by exhaustive tuple filtering.
//!
//! Everything is skeletal: a finite set of size `n` is `{0, ..., n-1}`, so
//! equality of sets is equality of sizes and every enumeration order is
//! canonical. Isomorphisms are always carried as explicit [`FinFunction`]s.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::ops::Range;

use crate::error::{Error, Result};

/// Default cap on the number of candidate tuples any exhaustive enumeration
/// may materialize before giving up with a hard error.
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// A canonical finite set `{0, ..., n-1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FinSet(pub usize);

impl FinSet {
    pub fn size(self) -> usize {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn elements(self) -> Range<usize> {
        0..self.0
    }
}

impl std::fmt::Display for FinSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A total function between canonical finite sets, given by its image table.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FinFunction {
    dom: FinSet,
    cod: FinSet,
    table: Vec<usize>,
}

impl FinFunction {
    pub fn new(dom: FinSet, cod: FinSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.size() {
            return Err(Error::validation(
                "table",
                format!("length {} does not equal domain size {}", table.len(), dom.size()),
            ));
        }
        for (i, &v) in table.iter().enumerate() {
            if v >= cod.size() {
                return Err(Error::validation(
                    "table",
                    format!("entry {v} at position {i} is not below codomain size {}", cod.size()),
                ));
            }
        }
        Ok(FinFunction { dom, cod, table })
    }

    pub fn identity(a: FinSet) -> Self {
        FinFunction {
            dom: a,
            cod: a,
            table: a.elements().collect(),
        }
    }

    /// The constant function at `value`.
    pub fn constant(dom: FinSet, cod: FinSet, value: usize) -> Result<Self> {
        if value >= cod.size() {
            return Err(Error::IndexOutOfRange { index: value, size: cod.size() });
        }
        Ok(FinFunction { dom, cod, table: vec![value; dom.size()] })
    }

    /// The unique map `dom -> 1`.
    pub fn terminal(dom: FinSet) -> Self {
        FinFunction { dom, cod: FinSet(1), table: vec![0; dom.size()] }
    }

    /// The unique map `0 -> cod`.
    pub fn initial(cod: FinSet) -> Self {
        FinFunction { dom: FinSet(0), cod, table: Vec::new() }
    }

    pub fn dom(&self) -> FinSet {
        self.dom
    }

    pub fn cod(&self) -> FinSet {
        self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.table.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        self.table.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        for &v in &self.table {
            seen[v] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.size() == self.cod.size() && self.is_injective()
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_bijective() {
            return Err(Error::validation("function", "not a bijection, cannot invert"));
        }
        let mut table = vec![0; self.cod.size()];
        for (i, &v) in self.table.iter().enumerate() {
            table[v] = i;
        }
        Ok(FinFunction { dom: self.cod, cod: self.dom, table })
    }
}

/// `compose(g, f) = g ∘ f`.
pub fn compose(g: &FinFunction, f: &FinFunction) -> Result<FinFunction> {
    if f.cod != g.dom {
        return Err(Error::CodomainMismatch { expected: g.dom.size(), found: f.cod.size() });
    }
    let table = f.table.iter().map(|&i| g.table[i]).collect();
    Ok(FinFunction { dom: f.dom, cod: g.cod, table })
}

/// Encodes mixed-radix digits with position 0 most significant.
pub fn encode_mixed(digits: &[usize], radices: &[usize]) -> usize {
    debug_assert_eq!(digits.len(), radices.len());
    let mut code = 0usize;
    for (&d, &r) in digits.iter().zip(radices) {
        code = code * r + d;
    }
    code
}

/// Inverse of [`encode_mixed`].
pub fn decode_mixed(mut code: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for (slot, &r) in digits.iter_mut().zip(radices).rev() {
        *slot = code % r;
        code /= r;
    }
    digits
}

/// The number of functions `dom -> cod`, exactly (`0^0 = 1`).
pub fn function_count(dom: FinSet, cod: FinSet) -> BigUint {
    BigUint::from(cod.size()).pow(dom.size() as u32)
}

/// All functions `dom -> cod` in lexicographic table order (equivalently,
/// mixed-radix order with position 0 most significant).
pub fn all_functions(dom: FinSet, cod: FinSet) -> Functions {
    Functions { dom, cod, next: Some(vec![0; dom.size()]), started: cod.size() > 0 || dom.size() == 0 }
}

pub struct Functions {
    dom: FinSet,
    cod: FinSet,
    next: Option<Vec<usize>>,
    started: bool,
}

impl Iterator for Functions {
    type Item = FinFunction;

    fn next(&mut self) -> Option<FinFunction> {
        if !self.started {
            return None;
        }
        let table = self.next.take()?;
        // Odometer step.
        let mut succ = table.clone();
        let mut j = succ.len();
        loop {
            if j == 0 {
                self.next = None;
                break;
            }
            j -= 1;
            succ[j] += 1;
            if succ[j] < self.cod.size() {
                self.next = Some(succ);
                break;
            }
            succ[j] = 0;
        }
        Some(FinFunction { dom: self.dom, cod: self.cod, table })
    }
}

/// `pullback(f, g)` over the shared codomain: pairs `(a, b)` with
/// `f(a) = g(b)`, enumerated in lexicographic order of `(a, b)`.
pub fn pullback(f: &FinFunction, g: &FinFunction) -> Result<(FinSet, FinFunction, FinFunction)> {
    if f.cod != g.cod {
        return Err(Error::CodomainMismatch { expected: f.cod.size(), found: g.cod.size() });
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    for a in f.dom.elements() {
        for b in g.dom.elements() {
            if f.apply(a) == g.apply(b) {
                left.push(a);
                right.push(b);
            }
        }
    }
    let apex = FinSet(left.len());
    Ok((
        apex,
        FinFunction { dom: apex, cod: f.dom, table: left },
        FinFunction { dom: apex, cod: g.dom, table: right },
    ))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            // Root at the smaller index so class numbering by first
            // appearance falls out of a single scan.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Quotient map onto classes numbered by first appearance.
    fn quotient(mut self) -> (usize, Vec<usize>) {
        let n = self.parent.len();
        let mut class = vec![usize::MAX; n];
        let mut next = 0;
        let mut table = Vec::with_capacity(n);
        for x in 0..n {
            let r = self.find(x);
            if class[r] == usize::MAX {
                class[r] = next;
                next += 1;
            }
            table.push(class[r]);
        }
        (next, table)
    }
}

/// Pushout of the span `f.cod <- C -> g.cod`: the quotient of the disjoint
/// union `f.cod + g.cod` by the relation `f(c) ~ g(c)`, classes numbered by
/// first appearance (all of `f.cod` before all of `g.cod`).
pub fn pushout(f: &FinFunction, g: &FinFunction) -> Result<(FinSet, FinFunction, FinFunction)> {
    if f.dom != g.dom {
        return Err(Error::DomainMismatch { expected: f.dom.size(), found: g.dom.size() });
    }
    let n1 = f.cod.size();
    let n2 = g.cod.size();
    let mut uf = UnionFind::new(n1 + n2);
    for c in f.dom.elements() {
        uf.union(f.apply(c), n1 + g.apply(c));
    }
    let (classes, table) = uf.quotient();
    let q = FinSet(classes);
    Ok((
        q,
        FinFunction { dom: f.cod, cod: q, table: table[..n1].to_vec() },
        FinFunction { dom: g.cod, cod: q, table: table[n1..].to_vec() },
    ))
}

/// Coequalizer of the parallel pair `f, g`: the quotient of the shared
/// codomain by `f(x) ~ g(x)`, classes numbered by first appearance.
pub fn coequalizer(f: &FinFunction, g: &FinFunction) -> Result<(FinSet, FinFunction)> {
    if f.dom != g.dom {
        return Err(Error::DomainMismatch { expected: f.dom.size(), found: g.dom.size() });
    }
    if f.cod != g.cod {
        return Err(Error::CodomainMismatch { expected: f.cod.size(), found: g.cod.size() });
    }
    let mut uf = UnionFind::new(f.cod.size());
    for x in f.dom.elements() {
        uf.union(f.apply(x), g.apply(x));
    }
    let (classes, table) = uf.quotient();
    let q = FinSet(classes);
    Ok((q, FinFunction { dom: f.cod, cod: q, table }))
}

/// The set of functions `exp -> base`, with `0^0 = 1`. Elements index
/// functions in mixed-radix order, position 0 most significant.
pub fn exponential(base: FinSet, exp: FinSet) -> FinSet {
    let size = BigUint::from(base.size()).pow(exp.size() as u32);
    FinSet(biguint_to_usize(&size).expect("exponential size exceeds the addressable range"))
}

/// `base^exp` exactly, with `0^0 = 1`.
pub fn exponential_big(base: usize, exp: usize) -> BigUint {
    BigUint::from(base).pow(exp as u32)
}

pub(crate) fn biguint_to_usize(n: &BigUint) -> Option<usize> {
    let digits = n.to_u64_digits();
    match digits.len() {
        0 => Some(0),
        1 => usize::try_from(digits[0]).ok(),
        _ => None,
    }
}

/// A finite quiver-shaped diagram of sets: the free shape over which we take
/// conical limits.
#[derive(Clone, Debug)]
pub struct QuiverDiagram {
    objects: Vec<FinSet>,
    edges: Vec<(usize, usize, FinFunction)>,
}

impl QuiverDiagram {
    pub fn new(objects: Vec<FinSet>, edges: Vec<(usize, usize, FinFunction)>) -> Result<Self> {
        for (i, (src, dst, func)) in edges.iter().enumerate() {
            let src_obj = *objects.get(*src).ok_or(Error::IndexOutOfRange { index: *src, size: objects.len() })?;
            let dst_obj = *objects.get(*dst).ok_or(Error::IndexOutOfRange { index: *dst, size: objects.len() })?;
            if func.dom() != src_obj {
                return Err(Error::validation(
                    "edges",
                    format!("edge {i} has domain {} but source object has size {}", func.dom(), src_obj),
                ));
            }
            if func.cod() != dst_obj {
                return Err(Error::validation(
                    "edges",
                    format!("edge {i} has codomain {} but target object has size {}", func.cod(), dst_obj),
                ));
            }
        }
        Ok(QuiverDiagram { objects, edges })
    }

    pub fn objects(&self) -> &[FinSet] {
        &self.objects
    }

    pub fn edges(&self) -> &[(usize, usize, FinFunction)] {
        &self.edges
    }
}

/// Conical limit of a quiver diagram: tuples, one element per object, on
/// which every edge commutes, in lexicographic order (position 0 most
/// significant). Returns the limit set and its projections.
pub fn limit_of_quiver(d: &QuiverDiagram, cap: u64) -> Result<(FinSet, Vec<FinFunction>)> {
    let mut ambient = BigUint::one();
    for obj in &d.objects {
        ambient *= BigUint::from(obj.size());
    }
    let needed = match biguint_to_usize(&ambient) {
        Some(n) if (n as u128) <= cap as u128 => n,
        _ => {
            let needed = biguint_to_usize(&ambient).map(|n| n as u128).unwrap_or(u128::MAX);
            return Err(Error::EnumerationCapExceeded { needed, cap });
        }
    };
    let k = d.objects.len();
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    if !ambient.is_zero() {
        let mut tuple = vec![0usize; k];
        let mut remaining = needed;
        loop {
            if d.edges.iter().all(|(s, t, u)| u.apply(tuple[*s]) == tuple[*t]) {
                tuples.push(tuple.clone());
            }
            remaining -= 1;
            if remaining == 0 {
                break;
            }
            // Odometer over the objects, last position fastest.
            let mut j = k;
            loop {
                j -= 1;
                tuple[j] += 1;
                if tuple[j] < d.objects[j].size() {
                    break;
                }
                tuple[j] = 0;
            }
        }
    }
    let limit = FinSet(tuples.len());
    let projections = (0..k)
        .map(|j| FinFunction {
            dom: limit,
            cod: d.objects[j],
            table: tuples.iter().map(|t| t[j]).collect(),
        })
        .collect();
    Ok((limit, projections))
}
