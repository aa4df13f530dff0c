//! Bundles `π : E -> B` over canonical finite sets, stored by their fiber
//! sizes, together with the covariant, contravariant and cartesian morphism
//! notions between them, the `Σ / Π / Δ` slice operations, the adjoint
//! sextuple on the arrow category, and the vertical / cartesian
//! factorization system.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::{self, FinFunction, FinSet};

/// A bundle `π : E -> B`, canonically flattened: the total set is the
/// concatenation of the fibers in base order, so the bundle is determined by
/// its fiber-size list.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bundle {
    #[serde(rename = "fibers")]
    fiber_sizes: Vec<usize>,
}

/// An object of `Set_{/B}`: a bundle whose base is `B`. The base is carried
/// by the bundle itself, so slice objects are bundles used with an explicit
/// base contract; the slice operations below check it.
pub type SliceObject = Bundle;

impl Bundle {
    pub fn new(fiber_sizes: Vec<usize>) -> Self {
        Bundle { fiber_sizes }
    }

    /// Normalizes an arbitrary projection into canonical form, returning the
    /// bundle together with the relabelling `E_original -> E_canonical`
    /// (elements sorted by base point, original order preserved within each
    /// fiber).
    pub fn from_projection(proj: &FinFunction) -> (Bundle, FinFunction) {
        let base = proj.cod();
        let mut fiber_sizes = vec![0usize; base.size()];
        for e in proj.dom().elements() {
            fiber_sizes[proj.apply(e)] += 1;
        }
        let bundle = Bundle::new(fiber_sizes);
        let mut next = (0..base.size()).map(|b| bundle.offset(b)).collect::<Vec<_>>();
        let table = proj
            .dom()
            .elements()
            .map(|e| {
                let slot = next[proj.apply(e)];
                next[proj.apply(e)] += 1;
                slot
            })
            .collect();
        let relabel = FinFunction::new(proj.dom(), bundle.total(), table).expect("relabelling is total");
        (bundle, relabel)
    }

    pub fn base(&self) -> FinSet {
        FinSet(self.fiber_sizes.len())
    }

    pub fn total(&self) -> FinSet {
        FinSet(self.fiber_sizes.iter().sum())
    }

    pub fn fiber_sizes(&self) -> &[usize] {
        &self.fiber_sizes
    }

    pub fn fiber_size(&self, b: usize) -> Result<usize> {
        self.fiber_sizes
            .get(b)
            .copied()
            .ok_or(Error::IndexOutOfRange { index: b, size: self.fiber_sizes.len() })
    }

    /// Offset of fiber `b` inside the flattened total set.
    pub fn offset(&self, b: usize) -> usize {
        self.fiber_sizes[..b].iter().sum()
    }

    /// The fiber over `b` as a finite set, with its embedding into the total
    /// set.
    pub fn fiber(&self, b: usize) -> Result<(FinSet, FinFunction)> {
        let size = self.fiber_size(b)?;
        let offset = self.offset(b);
        let fiber = FinSet(size);
        let embed = FinFunction::new(fiber, self.total(), (offset..offset + size).collect())?;
        Ok((fiber, embed))
    }

    /// Flattens a pair (base point, index within fiber) to a total element.
    pub fn encode(&self, b: usize, i: usize) -> usize {
        debug_assert!(i < self.fiber_sizes[b]);
        self.offset(b) + i
    }

    /// Inverse of [`Bundle::encode`].
    pub fn decode(&self, e: usize) -> (usize, usize) {
        let mut rest = e;
        for (b, &k) in self.fiber_sizes.iter().enumerate() {
            if rest < k {
                return (b, rest);
            }
            rest -= k;
        }
        panic!("total element {e} out of range for bundle {:?}", self.fiber_sizes);
    }

    /// The projection `π : E -> B` as a function.
    pub fn projection(&self) -> FinFunction {
        let mut table = Vec::with_capacity(self.total().size());
        for (b, &k) in self.fiber_sizes.iter().enumerate() {
            table.extend(std::iter::repeat_n(b, k));
        }
        FinFunction::new(self.total(), self.base(), table).expect("projection is total")
    }
}

/// All bundles with `|B| <= max_base` and every fiber of size `<= max_fiber`,
/// in canonical order: base size ascending, then fiber-size lists
/// lexicographically.
pub fn all_bundles(max_base: usize, max_fiber: usize) -> Vec<Bundle> {
    let mut out = Vec::new();
    for base in 0..=max_base {
        let radices = vec![max_fiber + 1; base];
        let count = (max_fiber + 1).pow(base as u32);
        for code in 0..count {
            out.push(Bundle::new(finset::decode_mixed(code, &radices)));
        }
    }
    out
}

/// A covariant bundle map: a commuting square from `src` to `dst`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(into = "RawBundleMap", try_from = "RawBundleMap")]
pub struct BundleMap {
    src: Bundle,
    dst: Bundle,
    base_map: FinFunction,
    total_map: FinFunction,
}

#[derive(Serialize, Deserialize)]
struct RawBundleMap {
    src: Bundle,
    dst: Bundle,
    base_map: Vec<usize>,
    total_map: Vec<usize>,
}

impl From<BundleMap> for RawBundleMap {
    fn from(m: BundleMap) -> RawBundleMap {
        RawBundleMap {
            base_map: m.base_map.table().to_vec(),
            total_map: m.total_map.table().to_vec(),
            src: m.src,
            dst: m.dst,
        }
    }
}

impl TryFrom<RawBundleMap> for BundleMap {
    type Error = Error;

    fn try_from(raw: RawBundleMap) -> Result<BundleMap> {
        let base_map = FinFunction::new(raw.src.base(), raw.dst.base(), raw.base_map)
            .map_err(|e| rename_field(e, "base_map"))?;
        let total_map = FinFunction::new(raw.src.total(), raw.dst.total(), raw.total_map)
            .map_err(|e| rename_field(e, "total_map"))?;
        BundleMap::new(raw.src, raw.dst, base_map, total_map)
    }
}

fn rename_field(e: Error, field: &str) -> Error {
    match e {
        Error::Validation { reason, .. } => Error::Validation { field: field.to_string(), reason },
        other => other,
    }
}

impl BundleMap {
    /// Builds a covariant map, checking shapes and that the square commutes:
    /// `π' ∘ total_map = base_map ∘ π`.
    pub fn new(src: Bundle, dst: Bundle, base_map: FinFunction, total_map: FinFunction) -> Result<Self> {
        if base_map.dom() != src.base() {
            return Err(Error::DomainMismatch { expected: src.base().size(), found: base_map.dom().size() });
        }
        if base_map.cod() != dst.base() {
            return Err(Error::CodomainMismatch { expected: dst.base().size(), found: base_map.cod().size() });
        }
        if total_map.dom() != src.total() {
            return Err(Error::DomainMismatch { expected: src.total().size(), found: total_map.dom().size() });
        }
        if total_map.cod() != dst.total() {
            return Err(Error::CodomainMismatch { expected: dst.total().size(), found: total_map.cod().size() });
        }
        for e in src.total().elements() {
            let (b, _) = src.decode(e);
            let (b_image, _) = dst.decode(total_map.apply(e));
            if b_image != base_map.apply(b) {
                return Err(Error::SquareDoesNotCommute { element: e });
            }
        }
        Ok(BundleMap { src, dst, base_map, total_map })
    }

    pub fn identity(bundle: &Bundle) -> Self {
        BundleMap {
            src: bundle.clone(),
            dst: bundle.clone(),
            base_map: FinFunction::identity(bundle.base()),
            total_map: FinFunction::identity(bundle.total()),
        }
    }

    pub fn src(&self) -> &Bundle {
        &self.src
    }

    pub fn dst(&self) -> &Bundle {
        &self.dst
    }

    pub fn base_map(&self) -> &FinFunction {
        &self.base_map
    }

    pub fn total_map(&self) -> &FinFunction {
        &self.total_map
    }

    /// The restriction of the total map to the fiber over `b`, as a function
    /// `fiber(src, b) -> fiber(dst, base_map(b))`.
    pub fn fiber_map(&self, b: usize) -> Result<FinFunction> {
        let k = self.src.fiber_size(b)?;
        let target = self.base_map.apply(b);
        let table = (0..k)
            .map(|i| {
                let (_, j) = self.dst.decode(self.total_map.apply(self.src.encode(b, i)));
                j
            })
            .collect();
        FinFunction::new(FinSet(k), FinSet(self.dst.fiber_size(target)?), table)
    }
}

/// A contravariant bundle map: a base map together with backwards fiber maps
/// `E'_{f(b)} -> E_b`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ContraBundleMap {
    src: Bundle,
    dst: Bundle,
    base_map: FinFunction,
    fiber_back: Vec<FinFunction>,
}

impl ContraBundleMap {
    pub fn new(src: Bundle, dst: Bundle, base_map: FinFunction, fiber_back: Vec<FinFunction>) -> Result<Self> {
        if base_map.dom() != src.base() {
            return Err(Error::DomainMismatch { expected: src.base().size(), found: base_map.dom().size() });
        }
        if base_map.cod() != dst.base() {
            return Err(Error::CodomainMismatch { expected: dst.base().size(), found: base_map.cod().size() });
        }
        if fiber_back.len() != src.base().size() {
            return Err(Error::validation(
                "fiber_back",
                format!("expected {} backwards fiber maps, found {}", src.base().size(), fiber_back.len()),
            ));
        }
        for (b, back) in fiber_back.iter().enumerate() {
            let expected_dom = dst.fiber_size(base_map.apply(b))?;
            if back.dom().size() != expected_dom {
                return Err(Error::DomainMismatch { expected: expected_dom, found: back.dom().size() });
            }
            if back.cod().size() != src.fiber_size(b)? {
                return Err(Error::CodomainMismatch { expected: src.fiber_size(b)?, found: back.cod().size() });
            }
        }
        Ok(ContraBundleMap { src, dst, base_map, fiber_back })
    }

    pub fn identity(bundle: &Bundle) -> Self {
        let fiber_back = bundle
            .fiber_sizes()
            .iter()
            .map(|&k| FinFunction::identity(FinSet(k)))
            .collect();
        ContraBundleMap {
            src: bundle.clone(),
            dst: bundle.clone(),
            base_map: FinFunction::identity(bundle.base()),
            fiber_back,
        }
    }

    pub fn src(&self) -> &Bundle {
        &self.src
    }

    pub fn dst(&self) -> &Bundle {
        &self.dst
    }

    pub fn base_map(&self) -> &FinFunction {
        &self.base_map
    }

    pub fn fiber_back(&self) -> &[FinFunction] {
        &self.fiber_back
    }

    /// Composition in the contravariant direction: `g ∘ f` has base map
    /// `g.base ∘ f.base` and backwards fiber maps `f_back ∘ g_back`.
    pub fn compose(g: &ContraBundleMap, f: &ContraBundleMap) -> Result<ContraBundleMap> {
        if f.dst != g.src {
            return Err(Error::CodomainMismatch { expected: g.src.base().size(), found: f.dst.base().size() });
        }
        let base_map = finset::compose(&g.base_map, &f.base_map)?;
        let fiber_back = f
            .src
            .base()
            .elements()
            .map(|b| finset::compose(&f.fiber_back[b], &g.fiber_back[f.base_map.apply(b)]))
            .collect::<Result<Vec<_>>>()?;
        ContraBundleMap::new(f.src.clone(), g.dst.clone(), base_map, fiber_back)
    }
}

/// Componentwise composition of commuting squares.
pub fn compose_maps(g: &BundleMap, f: &BundleMap) -> Result<BundleMap> {
    if f.dst != g.src {
        return Err(Error::CodomainMismatch { expected: g.src.base().size(), found: f.dst.base().size() });
    }
    BundleMap::new(
        f.src.clone(),
        g.dst.clone(),
        finset::compose(&g.base_map, &f.base_map)?,
        finset::compose(&g.total_map, &f.total_map)?,
    )
}

/// True iff the square is a pullback, checked fiberwise: the total map must
/// restrict to a bijection on every fiber.
pub fn is_cartesian(m: &BundleMap) -> bool {
    m.src
        .base()
        .elements()
        .all(|b| m.fiber_map(b).map(|f| f.is_bijective()).unwrap_or(false))
}

/// The same predicate, decided through the universal property instead: the
/// mediating map into `pullback(π', base_map)` must be a bijection.
pub fn is_cartesian_via_pullback(m: &BundleMap) -> bool {
    let (p, p1, _p2) = finset::pullback(&m.dst.projection(), &m.base_map)
        .expect("projection and base map share a codomain");
    if p.size() != m.src.total().size() {
        return false;
    }
    // Mediating map e |-> (total(e), π(e)); bijectivity onto the pullback.
    let mut hit = vec![false; p.size()];
    'outer: for e in m.src.total().elements() {
        let (b, _) = m.src.decode(e);
        let te = m.total_map.apply(e);
        for i in p.elements() {
            if p1.apply(i) == te && _p2.apply(i) == b {
                if hit[i] {
                    return false;
                }
                hit[i] = true;
                continue 'outer;
            }
        }
        return false;
    }
    hit.into_iter().all(|h| h)
}

/// Turns a fiberwise-bijective contravariant map into the cartesian covariant
/// map with the inverse fiber maps.
pub fn contra_to_cartesian_covariant(m: &ContraBundleMap) -> Result<BundleMap> {
    let mut table = vec![0usize; m.src.total().size()];
    for b in m.src.base().elements() {
        let back = &m.fiber_back[b];
        if !back.is_bijective() {
            return Err(Error::NotFiberwiseBijective { base: b });
        }
        let fwd = back.inverse()?;
        let target = m.base_map.apply(b);
        for i in 0..m.src.fiber_size(b)? {
            table[m.src.encode(b, i)] = m.dst.encode(target, fwd.apply(i));
        }
    }
    let total_map = FinFunction::new(m.src.total(), m.dst.total(), table)?;
    BundleMap::new(m.src.clone(), m.dst.clone(), m.base_map.clone(), total_map)
}

/// Inverse translation: a cartesian covariant map yields the contravariant
/// map whose backwards fiber maps are the inverse bijections.
pub fn cartesian_covariant_to_contra(m: &BundleMap) -> Result<ContraBundleMap> {
    let fiber_back = m
        .src
        .base()
        .elements()
        .map(|b| {
            let fwd = m.fiber_map(b)?;
            fwd.inverse().map_err(|_| Error::NotCartesian { base: b })
        })
        .collect::<Result<Vec<_>>>()?;
    ContraBundleMap::new(m.src.clone(), m.dst.clone(), m.base_map.clone(), fiber_back)
}

/// `Σ` along the terminal map: the total set of the bundle.
pub fn sigma(pi: &Bundle) -> FinSet {
    pi.total()
}

/// `Π_π` applied to a slice object `q` over the total set of `π`: over each
/// base point `b`, the set of sections of `q` over the fiber `E_b`. Sections
/// are counted as a product and enumerated in mixed-radix order over the
/// fiber elements in increasing `E`-index.
pub fn pi_along(pi: &Bundle, q: &SliceObject) -> Result<SliceObject> {
    if q.base() != pi.total() {
        return Err(Error::BaseMismatch { expected: pi.total().size(), found: q.base().size() });
    }
    let fibers = pi
        .base()
        .elements()
        .map(|b| {
            let offset = pi.offset(b);
            let mut product = 1usize;
            for e in offset..offset + pi.fiber_sizes()[b] {
                product = product
                    .checked_mul(q.fiber_sizes()[e])
                    .ok_or_else(|| Error::CardinalityOverflow { value: "section count".to_string() })?;
            }
            Ok(product)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Bundle::new(fibers))
}

/// `Δ_f`: pullback of a slice object along `f : X -> B`, fiber over `x` the
/// `q`-fiber over `f(x)`.
pub fn delta(f: &FinFunction, q: &SliceObject) -> Result<SliceObject> {
    if f.cod() != q.base() {
        return Err(Error::BaseMismatch { expected: q.base().size(), found: f.cod().size() });
    }
    let fibers = f.dom().elements().map(|x| q.fiber_sizes()[f.apply(x)]).collect();
    Ok(Bundle::new(fibers))
}

/// Fiberwise hom `Set_{/B}(q, r)`: fiber over `b` is the set of functions
/// from the `q`-fiber to the `r`-fiber, in mixed-radix order.
pub fn fiberwise_hom(q: &SliceObject, r: &SliceObject) -> Result<SliceObject> {
    if q.base() != r.base() {
        return Err(Error::BaseMismatch { expected: q.base().size(), found: r.base().size() });
    }
    let fibers = q
        .base()
        .elements()
        .map(|b| finset::exponential(FinSet(r.fiber_sizes()[b]), FinSet(q.fiber_sizes()[b])).size())
        .collect();
    Ok(Bundle::new(fibers))
}

/// `dom`: the total set of the bundle.
pub fn dom_set(pi: &Bundle) -> FinSet {
    pi.total()
}

/// `cod`: the base set of the bundle.
pub fn cod_set(pi: &Bundle) -> FinSet {
    pi.base()
}

/// `const`: the identity bundle `X -> X`.
pub fn const_bundle(x: FinSet) -> Bundle {
    Bundle::new(vec![1; x.size()])
}

/// `!^X`: the bundle `0 -> X`.
pub fn bang_up(x: FinSet) -> Bundle {
    Bundle::new(vec![0; x.size()])
}

/// `!_X`: the bundle `X -> 1`.
pub fn bang_down(x: FinSet) -> Bundle {
    Bundle::new(vec![x.size()])
}

/// `ZC`: the locus of empty fibers, returned with its inclusion into the
/// base.
pub fn zc(pi: &Bundle) -> (FinSet, FinFunction) {
    let members: Vec<usize> = pi
        .base()
        .elements()
        .filter(|&b| pi.fiber_sizes()[b] == 0)
        .collect();
    let subset = FinSet(members.len());
    let inclusion = FinFunction::new(subset, pi.base(), members).expect("inclusion is total");
    (subset, inclusion)
}

/// The vertical / cartesian factorization of a covariant map: the cartesian
/// part is the pullback of the target along the base map, the vertical part
/// is the mediating map over the identity base.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub vertical: BundleMap,
    pub cartesian: BundleMap,
}

pub fn factor_vertical_cartesian(m: &BundleMap) -> Factorization {
    let middle = delta(m.base_map(), m.dst()).expect("base map lands in the target base");
    // Cartesian leg: (b, i) |-> (f(b), i).
    let cart_table = middle
        .total()
        .elements()
        .map(|e| {
            let (b, i) = middle.decode(e);
            m.dst().encode(m.base_map().apply(b), i)
        })
        .collect();
    let cartesian = BundleMap::new(
        middle.clone(),
        m.dst().clone(),
        m.base_map().clone(),
        FinFunction::new(middle.total(), m.dst().total(), cart_table).expect("cartesian leg is total"),
    )
    .expect("pullback square commutes");
    // Vertical leg: e over b goes to the element of the pulled-back fiber
    // matching total(e) inside the target fiber over f(b).
    let vert_table = m
        .src()
        .total()
        .elements()
        .map(|e| {
            let (b, _) = m.src().decode(e);
            let (_, j) = m.dst().decode(m.total_map().apply(e));
            middle.encode(b, j)
        })
        .collect();
    let vertical = BundleMap::new(
        m.src().clone(),
        middle.clone(),
        FinFunction::identity(m.src().base()),
        FinFunction::new(m.src().total(), middle.total(), vert_table).expect("vertical leg is total"),
    )
    .expect("mediating square commutes");
    Factorization { vertical, cartesian }
}

/// One of the five adjacent pairs in the adjoint sextuple
/// `ZC ⊣ !^(-) ⊣ cod ⊣ const ⊣ dom ⊣ !_(-)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AdjointPair {
    /// `!^(-) ⊣ cod`: `Hom^↓(!^X, π) ≅ Hom(X, B)`.
    BangUpCod,
    /// `cod ⊣ const`: `Hom(B, X) ≅ Hom^↓(π, const X)`.
    CodConst,
    /// `const ⊣ dom`: `Hom^↓(const X, π) ≅ Hom(X, E)`.
    ConstDom,
    /// `dom ⊣ !_(-)`: `Hom(E, X) ≅ Hom^↓(π, !_X)`.
    DomBangDown,
    /// `ZC ⊣ !^(-)`: `Hom(ZC π, X)` vs `Hom^↓(π, !^X)`. Fails the naive
    /// hom-count test whenever the total set is nonempty but some fiber
    /// set is empty; the checker reports the counterexample.
    ZcBangUp,
}

impl AdjointPair {
    pub const ALL: [AdjointPair; 5] = [
        AdjointPair::BangUpCod,
        AdjointPair::CodConst,
        AdjointPair::ConstDom,
        AdjointPair::DomBangDown,
        AdjointPair::ZcBangUp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AdjointPair::BangUpCod => "bangup-cod",
            AdjointPair::CodConst => "cod-const",
            AdjointPair::ConstDom => "const-dom",
            AdjointPair::DomBangDown => "dom-bangdown",
            AdjointPair::ZcBangUp => "zc-bangup",
        }
    }
}

impl std::str::FromStr for AdjointPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AdjointPair::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::validation("pair", format!("unknown adjoint pair `{s}`")))
    }
}

/// One probed instance of a claimed adjunction: a bundle, a set, the two
/// hom-set cardinalities, and whether the canonical transpose is a bijection
/// between them.
#[derive(Clone, Debug)]
pub struct AdjunctionInstance {
    pub bundle: Bundle,
    pub set: FinSet,
    pub left_count: usize,
    pub right_count: usize,
    pub bijection_ok: bool,
}

#[derive(Clone, Debug)]
pub struct AdjunctionReport {
    pub pair: AdjointPair,
    pub cartesian_only: bool,
    pub instances: Vec<AdjunctionInstance>,
    pub first_counterexample: Option<usize>,
}

impl AdjunctionReport {
    pub fn holds(&self) -> bool {
        self.first_counterexample.is_none()
    }
}

/// Exhaustively probes one adjunction over all bundles with base and fibers
/// `<= max_size` and all sets `<= max_size`, reporting per-instance hom-set
/// cardinalities and the first counterexample. `cartesian_only` restricts
/// the bundle-map side to cartesian squares (diagnostic mode).
pub fn check_adjunction(pair: AdjointPair, max_size: usize, cap: u64) -> Result<AdjunctionReport> {
    check_adjunction_with(pair, max_size, false, cap)
}

pub fn check_adjunction_with(
    pair: AdjointPair,
    max_size: usize,
    cartesian_only: bool,
    cap: u64,
) -> Result<AdjunctionReport> {
    if max_size < 1 {
        return Err(Error::validation("max_size", "must be at least 1"));
    }
    let mut instances = Vec::new();
    for bundle in all_bundles(max_size, max_size) {
        for x in 0..=max_size {
            instances.push(check_adjunction_instance(pair, &bundle, FinSet(x), cartesian_only, cap)?);
        }
    }
    let first_counterexample = instances.iter().position(|i| !i.bijection_ok);
    Ok(AdjunctionReport { pair, cartesian_only, instances, first_counterexample })
}

fn square_side(src: &Bundle, dst: &Bundle, cartesian_only: bool, cap: u64) -> Result<Vec<BundleMap>> {
    let mut maps = crate::equivalence::enumerate_covariant_maps(src, dst, cap)?;
    if cartesian_only {
        maps.retain(is_cartesian);
    }
    Ok(maps)
}

fn check_adjunction_instance(
    pair: AdjointPair,
    pi: &Bundle,
    x: FinSet,
    cartesian_only: bool,
    cap: u64,
) -> Result<AdjunctionInstance> {
    let b = pi.base();
    let e = pi.total();
    // Enumerate both hom-sets and transpose left to right; the instance
    // passes when the transpose is a bijection onto the enumerated right
    // side.
    let (left_count, right_count, bijection_ok) = match pair {
        AdjointPair::BangUpCod => {
            let left = square_side(&bang_up(x), pi, cartesian_only, cap)?;
            let right: Vec<FinFunction> = finset::all_functions(x, b).collect();
            let images: Vec<FinFunction> = left.iter().map(|m| m.base_map().clone()).collect();
            (left.len(), right.len(), matches_exactly(&images, &right))
        }
        AdjointPair::CodConst => {
            let left: Vec<FinFunction> = finset::all_functions(b, x).collect();
            let right = square_side(pi, &const_bundle(x), cartesian_only, cap)?;
            let proj = pi.projection();
            let images = left
                .iter()
                .map(|g| {
                    BundleMap::new(pi.clone(), const_bundle(x), g.clone(), finset::compose(g, &proj)?)
                })
                .collect::<Result<Vec<_>>>()?;
            (left.len(), right.len(), matches_exactly(&images, &right))
        }
        AdjointPair::ConstDom => {
            let left = square_side(&const_bundle(x), pi, cartesian_only, cap)?;
            let right: Vec<FinFunction> = finset::all_functions(x, e).collect();
            let images: Vec<FinFunction> = left.iter().map(|m| m.total_map().clone()).collect();
            (left.len(), right.len(), matches_exactly(&images, &right))
        }
        AdjointPair::DomBangDown => {
            let left: Vec<FinFunction> = finset::all_functions(e, x).collect();
            let right = square_side(pi, &bang_down(x), cartesian_only, cap)?;
            let images = left
                .iter()
                .map(|h| {
                    BundleMap::new(pi.clone(), bang_down(x), FinFunction::terminal(b), h.clone())
                })
                .collect::<Result<Vec<_>>>()?;
            (left.len(), right.len(), matches_exactly(&images, &right))
        }
        AdjointPair::ZcBangUp => {
            let (zc_set, _) = zc(pi);
            let left: Vec<FinFunction> = finset::all_functions(zc_set, x).collect();
            let right = square_side(pi, &bang_up(x), cartesian_only, cap)?;
            if e.is_empty() {
                // ZC π = B; the transpose reads a square straight off the map.
                let images = left
                    .iter()
                    .map(|g| {
                        BundleMap::new(pi.clone(), bang_up(x), g.clone(), FinFunction::initial(FinSet(0)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                (left.len(), right.len(), matches_exactly(&images, &right))
            } else {
                // No total map E -> 0 exists; the adjunction can only hold
                // vacuously.
                (left.len(), right.len(), left.len() == right.len())
            }
        }
    };
    Ok(AdjunctionInstance { bundle: pi.clone(), set: x, left_count, right_count, bijection_ok })
}

fn matches_exactly<T: PartialEq>(images: &[T], right: &[T]) -> bool {
    if images.len() != right.len() {
        return false;
    }
    let mut used = vec![false; right.len()];
    images.iter().all(|img| {
        right
            .iter()
            .enumerate()
            .find(|(i, r)| !used[*i] && *r == img)
            .map(|(i, _)| used[i] = true)
            .is_some()
    })
}
