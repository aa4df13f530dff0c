//! Evaluation of the polynomial and Dirichlet functors attached to a bundle,
//! the several presentations of the Dirichlet extent, natural transformations
//! induced by bundle maps, and the brute-force checkers for naturality,
//! cartesianness, and connected-limit preservation.
//!
//! Element encodings are part of the public contract: a Dirichlet element
//! `(b, h)` of `D(X)` has code `sum_{b' < b} k_{b'}^{|X|} + code(h)` where
//! `h` is read mixed-radix with position 0 most significant, and dually for
//! polynomial elements.

use num_bigint::BigUint;
use std::collections::HashMap;

use crate::bundle::{self, Bundle, BundleMap};
use crate::error::{Error, Result};
use crate::finset::{self, FinFunction, FinSet};

/// A concrete citizen of `D(X)`: a base point and a function `X -> E_b`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DirichletElement {
    pub base: usize,
    /// `h : X -> E_b`, one fiber index per element of `X`.
    pub fiber_datum: Vec<usize>,
}

/// A concrete citizen of `P(X)`: a base point and a function `E_b -> X`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyElement {
    pub base: usize,
    /// `t : E_b -> X`, one `X`-element per fiber index.
    pub fiber_datum: Vec<usize>,
}

/// `|D(X)| = sum_b k_b^{|X|}`, exactly (`0^0 = 1`).
pub fn dir_card(pi: &Bundle, x: usize) -> BigUint {
    pi.fiber_sizes()
        .iter()
        .map(|&k| BigUint::from(k).pow(x as u32))
        .sum()
}

/// `|P(X)| = sum_b |X|^{k_b}`, exactly.
pub fn poly_card(pi: &Bundle, x: usize) -> BigUint {
    pi.fiber_sizes()
        .iter()
        .map(|&k| BigUint::from(x).pow(k as u32))
        .sum()
}

/// The set `D(X)` with the canonical code order. The size is always
/// computed exactly; this only fails when it does not fit the addressable
/// range.
pub fn dir_eval(pi: &Bundle, x: FinSet) -> Result<FinSet> {
    let card = dir_card(pi, x.size());
    finset::biguint_to_usize(&card)
        .map(FinSet)
        .ok_or_else(|| Error::CardinalityOverflow { value: card.to_string() })
}

/// The set `P(X)` with the canonical code order.
pub fn poly_eval(pi: &Bundle, x: FinSet) -> Result<FinSet> {
    let card = poly_card(pi, x.size());
    finset::biguint_to_usize(&card)
        .map(FinSet)
        .ok_or_else(|| Error::CardinalityOverflow { value: card.to_string() })
}

pub fn dir_encode(pi: &Bundle, x: usize, elem: &DirichletElement) -> usize {
    debug_assert_eq!(elem.fiber_datum.len(), x);
    let k = pi.fiber_sizes()[elem.base];
    let offset: usize = pi.fiber_sizes()[..elem.base].iter().map(|&kb| kb.pow(x as u32)).sum();
    offset + finset::encode_mixed(&elem.fiber_datum, &vec![k; x])
}

pub fn dir_decode(pi: &Bundle, x: usize, code: usize) -> DirichletElement {
    let mut rest = code;
    for (b, &k) in pi.fiber_sizes().iter().enumerate() {
        let block = k.pow(x as u32);
        if rest < block {
            return DirichletElement { base: b, fiber_datum: finset::decode_mixed(rest, &vec![k; x]) };
        }
        rest -= block;
    }
    panic!("code {code} out of range for D(X) with |X| = {x}");
}

pub fn poly_encode(pi: &Bundle, x: usize, elem: &PolyElement) -> usize {
    let k = pi.fiber_sizes()[elem.base];
    debug_assert_eq!(elem.fiber_datum.len(), k);
    let offset: usize = pi.fiber_sizes()[..elem.base].iter().map(|&kb| x.pow(kb as u32)).sum();
    offset + finset::encode_mixed(&elem.fiber_datum, &vec![x; k])
}

pub fn poly_decode(pi: &Bundle, x: usize, code: usize) -> PolyElement {
    let mut rest = code;
    for (b, &k) in pi.fiber_sizes().iter().enumerate() {
        let block = x.pow(k as u32);
        if rest < block {
            return PolyElement { base: b, fiber_datum: finset::decode_mixed(rest, &vec![x; k]) };
        }
        rest -= block;
    }
    panic!("code {code} out of range for P(X) with |X| = {x}");
}

/// Contravariant action: `g : X -> X'` yields `D(g) : D(X') -> D(X)` sending
/// `(b, h)` to `(b, h ∘ g)`.
pub fn dir_eval_map(pi: &Bundle, g: &FinFunction) -> Result<FinFunction> {
    let dom = dir_eval(pi, g.cod())?;
    let cod = dir_eval(pi, g.dom())?;
    let table = dom
        .elements()
        .map(|code| {
            let elem = dir_decode(pi, g.cod().size(), code);
            let datum = g.table().iter().map(|&i| elem.fiber_datum[i]).collect();
            dir_encode(pi, g.dom().size(), &DirichletElement { base: elem.base, fiber_datum: datum })
        })
        .collect();
    FinFunction::new(dom, cod, table)
}

/// Covariant action: `g : X -> X'` yields `P(g) : P(X) -> P(X')` sending
/// `(b, t)` to `(b, g ∘ t)`.
pub fn poly_eval_map(pi: &Bundle, g: &FinFunction) -> Result<FinFunction> {
    let dom = poly_eval(pi, g.dom())?;
    let cod = poly_eval(pi, g.cod())?;
    let table = dom
        .elements()
        .map(|code| {
            let elem = poly_decode(pi, g.dom().size(), code);
            let datum = elem.fiber_datum.iter().map(|&i| g.apply(i)).collect();
            poly_encode(pi, g.cod().size(), &PolyElement { base: elem.base, fiber_datum: datum })
        })
        .collect();
    FinFunction::new(dom, cod, table)
}

/// The presentations of the Dirichlet extent that admit a direct evaluator.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DirMethod {
    /// The defining sum `Σ_b E_b^X`.
    Sum,
    /// The restricted representable `Set^↓(!_X, π)`: commuting squares.
    Hom,
    /// The conical limit over the left cone of `X`.
    Limit,
    /// The pointwise pullback of `E^X -> B^X <- B`.
    Pullback,
    /// The slice composite `Σ_B ∘ Set_{/B}(-, π) ∘ Δ_{!_B}`.
    Slice,
}

impl DirMethod {
    pub const ALL: [DirMethod; 5] =
        [DirMethod::Sum, DirMethod::Hom, DirMethod::Limit, DirMethod::Pullback, DirMethod::Slice];

    pub fn name(self) -> &'static str {
        match self {
            DirMethod::Sum => "sum",
            DirMethod::Hom => "hom",
            DirMethod::Limit => "limit",
            DirMethod::Pullback => "pullback",
            DirMethod::Slice => "slice",
        }
    }
}

impl std::str::FromStr for DirMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DirMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::validation("method", format!("unknown evaluation method `{s}`")))
    }
}

/// A presentation's value at `X`: the set it computes together with the
/// canonical bijection onto the defining sum.
#[derive(Clone, Debug)]
pub struct DirPresentation {
    pub set: FinSet,
    /// Bijection from this presentation's set onto `dir_eval(π, X)`.
    pub to_sum: FinFunction,
}

fn cap_guard(candidates: BigUint, cap: u64) -> Result<()> {
    if candidates > BigUint::from(cap) {
        let needed = candidates.to_string().parse::<u128>().unwrap_or(u128::MAX);
        return Err(Error::EnumerationCapExceeded { needed, cap });
    }
    Ok(())
}

/// The quiver for the left-cone limit formula at `X`: one vertex over the
/// base, `|X|` vertices over the total set, every edge the projection.
fn left_cone_quiver(pi: &Bundle, x: FinSet) -> finset::QuiverDiagram {
    let proj = pi.projection();
    let mut objects = vec![pi.base()];
    let mut edges = Vec::new();
    for i in 0..x.size() {
        objects.push(pi.total());
        edges.push((i + 1, 0, proj.clone()));
    }
    finset::QuiverDiagram::new(objects, edges).expect("left cone quiver is well formed")
}

/// Evaluates `D(X)` through the stated presentation, returning the computed
/// set with its canonical bijection onto the defining sum.
pub fn dir_eval_via(method: DirMethod, pi: &Bundle, x: FinSet, cap: u64) -> Result<DirPresentation> {
    let sum_set = dir_eval(pi, x)?;
    match method {
        DirMethod::Sum => Ok(DirPresentation { set: sum_set, to_sum: FinFunction::identity(sum_set) }),
        DirMethod::Hom => {
            let maps = crate::equivalence::enumerate_covariant_maps(&bundle::bang_down(x), pi, cap)?;
            let set = FinSet(maps.len());
            let table = maps
                .iter()
                .map(|m| {
                    let b = m.base_map().apply(0);
                    let offset = pi.offset(b);
                    let datum = x.elements().map(|i| m.total_map().apply(i) - offset).collect();
                    dir_encode(pi, x.size(), &DirichletElement { base: b, fiber_datum: datum })
                })
                .collect();
            Ok(DirPresentation { set, to_sum: FinFunction::new(set, sum_set, table)? })
        }
        DirMethod::Limit => {
            let quiver = left_cone_quiver(pi, x);
            let (set, projs) = finset::limit_of_quiver(&quiver, cap)?;
            let table = set
                .elements()
                .map(|l| {
                    let b = projs[0].apply(l);
                    let offset = pi.offset(b);
                    let datum = (0..x.size()).map(|i| projs[i + 1].apply(l) - offset).collect();
                    dir_encode(pi, x.size(), &DirichletElement { base: b, fiber_datum: datum })
                })
                .collect();
            Ok(DirPresentation { set, to_sum: FinFunction::new(set, sum_set, table)? })
        }
        DirMethod::Pullback => {
            let e = pi.total();
            let b = pi.base();
            let sections = finset::function_count(x, e);
            cap_guard(&sections * BigUint::from(b.size()), cap)?;
            let e_to_x = finset::exponential(e, x);
            let b_to_x = finset::exponential(b, x);
            let proj = pi.projection();
            // Postcomposition with the projection, on codes.
            let post_table: Vec<usize> = e_to_x
                .elements()
                .map(|s| {
                    let digits = finset::decode_mixed(s, &vec![e.size(); x.size()]);
                    let image: Vec<usize> = digits.iter().map(|&d| proj.apply(d)).collect();
                    finset::encode_mixed(&image, &vec![b.size(); x.size()])
                })
                .collect();
            let post = FinFunction::new(e_to_x, b_to_x, post_table)?;
            // Constants.
            let const_table: Vec<usize> = b
                .elements()
                .map(|pt| finset::encode_mixed(&vec![pt; x.size()], &vec![b.size(); x.size()]))
                .collect();
            let consts = FinFunction::new(b, b_to_x, const_table)?;
            let (set, p1, p2) = finset::pullback(&post, &consts)?;
            let table = set
                .elements()
                .map(|i| {
                    let s = p1.apply(i);
                    let base = p2.apply(i);
                    let offset = pi.offset(base);
                    let digits = finset::decode_mixed(s, &vec![e.size(); x.size()]);
                    let datum = digits.iter().map(|&d| d - offset).collect();
                    dir_encode(pi, x.size(), &DirichletElement { base, fiber_datum: datum })
                })
                .collect();
            Ok(DirPresentation { set, to_sum: FinFunction::new(set, sum_set, table)? })
        }
        DirMethod::Slice => {
            cap_guard(dir_card(pi, x.size()), cap)?;
            let hom = slice_hom_bundle(pi, x);
            let set = bundle::sigma(&hom);
            let table = set
                .elements()
                .map(|code| {
                    let (b, idx) = hom.decode(code);
                    let datum = finset::decode_mixed(idx, &vec![pi.fiber_sizes()[b]; x.size()]);
                    dir_encode(pi, x.size(), &DirichletElement { base: b, fiber_datum: datum })
                })
                .collect();
            Ok(DirPresentation { set, to_sum: FinFunction::new(set, sum_set, table)? })
        }
    }
}

/// The bundle `Set_{/B}(Δ_{!_B} X, π)` over the base, used by the slice
/// presentation.
fn slice_hom_bundle(pi: &Bundle, x: FinSet) -> Bundle {
    let constant = bundle::delta(&FinFunction::terminal(pi.base()), &bundle::bang_down(x))
        .expect("terminal map lands in the singleton base");
    bundle::fiberwise_hom(&constant, pi).expect("bases agree by construction")
}

/// The contravariant action of `g : X -> X'` computed inside the given
/// presentation (not transported through the bijection to the sum).
pub fn dir_via_map(method: DirMethod, pi: &Bundle, g: &FinFunction, cap: u64) -> Result<FinFunction> {
    let x = g.dom();
    let x_prime = g.cod();
    match method {
        DirMethod::Sum => dir_eval_map(pi, g),
        DirMethod::Hom => {
            let source = crate::equivalence::enumerate_covariant_maps(&bundle::bang_down(x_prime), pi, cap)?;
            let target = crate::equivalence::enumerate_covariant_maps(&bundle::bang_down(x), pi, cap)?;
            let index: HashMap<(usize, Vec<usize>), usize> = target
                .iter()
                .enumerate()
                .map(|(i, m)| ((m.base_map().apply(0), m.total_map().table().to_vec()), i))
                .collect();
            let table = source
                .iter()
                .map(|m| {
                    // Precompose with the bundle map !_g : !_X -> !_X'.
                    let total = finset::compose(m.total_map(), g)?;
                    Ok(index[&(m.base_map().apply(0), total.table().to_vec())])
                })
                .collect::<Result<Vec<_>>>()?;
            FinFunction::new(FinSet(source.len()), FinSet(target.len()), table)
        }
        DirMethod::Limit => {
            let (src_set, src_projs) = finset::limit_of_quiver(&left_cone_quiver(pi, x_prime), cap)?;
            let (dst_set, dst_projs) = finset::limit_of_quiver(&left_cone_quiver(pi, x), cap)?;
            let index: HashMap<Vec<usize>, usize> = dst_set
                .elements()
                .map(|l| (dst_projs.iter().map(|p| p.apply(l)).collect(), l))
                .collect();
            let table = src_set
                .elements()
                .map(|l| {
                    let mut tuple = vec![src_projs[0].apply(l)];
                    for i in 0..x.size() {
                        tuple.push(src_projs[g.apply(i) + 1].apply(l));
                    }
                    index[&tuple]
                })
                .collect();
            FinFunction::new(src_set, dst_set, table)
        }
        DirMethod::Pullback => {
            let e = pi.total();
            let radix_src = vec![e.size(); x_prime.size()];
            let radix_dst = vec![e.size(); x.size()];
            let src = dir_eval_via(DirMethod::Pullback, pi, x_prime, cap)?;
            let dst = dir_eval_via(DirMethod::Pullback, pi, x, cap)?;
            // Rebuild (section, base point) pairs from the presentation's
            // bijection to recover the pullback coordinates.
            let decode_pair = |p: &DirPresentation, i: usize, radix: &[usize], xs: usize| {
                let elem = dir_decode(pi, xs, p.to_sum.apply(i));
                let offset = pi.offset(elem.base);
                let digits: Vec<usize> = elem.fiber_datum.iter().map(|&d| d + offset).collect();
                (finset::encode_mixed(&digits, radix), elem.base)
            };
            let index: HashMap<(usize, usize), usize> = dst
                .set
                .elements()
                .map(|i| (decode_pair(&dst, i, &radix_dst, x.size()), i))
                .collect();
            let table = src
                .set
                .elements()
                .map(|i| {
                    let (s, base) = decode_pair(&src, i, &radix_src, x_prime.size());
                    let digits = finset::decode_mixed(s, &radix_src);
                    let precomposed: Vec<usize> = g.table().iter().map(|&j| digits[j]).collect();
                    index[&(finset::encode_mixed(&precomposed, &radix_dst), base)]
                })
                .collect();
            FinFunction::new(src.set, dst.set, table)
        }
        DirMethod::Slice => {
            cap_guard(dir_card(pi, x_prime.size()), cap)?;
            let src_hom = slice_hom_bundle(pi, x_prime);
            let dst_hom = slice_hom_bundle(pi, x);
            let table = bundle::sigma(&src_hom)
                .elements()
                .map(|code| {
                    let (b, idx) = src_hom.decode(code);
                    let k = pi.fiber_sizes()[b];
                    let digits = finset::decode_mixed(idx, &vec![k; x_prime.size()]);
                    let precomposed: Vec<usize> = g.table().iter().map(|&j| digits[j]).collect();
                    dst_hom.encode(b, finset::encode_mixed(&precomposed, &vec![k; x.size()]))
                })
                .collect();
            FinFunction::new(bundle::sigma(&src_hom), bundle::sigma(&dst_hom), table)
        }
    }
}

/// A natural transformation of Dirichlet functors, which by the equivalence
/// with bundles is exactly its carrier bundle map (the datum at `!_0`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NatTransform {
    carrier: BundleMap,
}

impl NatTransform {
    pub fn new(carrier: BundleMap) -> Self {
        NatTransform { carrier }
    }

    pub fn carrier(&self) -> &BundleMap {
        &self.carrier
    }

    pub fn src(&self) -> &Bundle {
        self.carrier.src()
    }

    pub fn dst(&self) -> &Bundle {
        self.carrier.dst()
    }
}

/// Component of the transformation at `X`: `(b, h) |-> (f(b), f_♯ ∘ h)`.
pub fn nat_component(t: &NatTransform, x: FinSet) -> Result<FinFunction> {
    let src = t.src();
    let dst = t.dst();
    let dom = dir_eval(src, x)?;
    let cod = dir_eval(dst, x)?;
    let m = t.carrier();
    let table = dom
        .elements()
        .map(|code| {
            let elem = dir_decode(src, x.size(), code);
            let target = m.base_map().apply(elem.base);
            let offset = dst.offset(target);
            let datum = elem
                .fiber_datum
                .iter()
                .map(|&i| m.total_map().apply(src.encode(elem.base, i)) - offset)
                .collect();
            dir_encode(dst, x.size(), &DirichletElement { base: target, fiber_datum: datum })
        })
        .collect();
    FinFunction::new(dom, cod, table)
}

/// All functions between canonical sets of size `<= probe_max`.
pub fn probe_maps(probe_max: usize) -> Vec<FinFunction> {
    let mut out = Vec::new();
    for x in 0..=probe_max {
        for x_prime in 0..=probe_max {
            out.extend(finset::all_functions(FinSet(x), FinSet(x_prime)));
        }
    }
    out
}

/// A failed naturality square, named by the probe map and the first element
/// where the two composites disagree.
#[derive(Clone, Debug)]
pub struct NaturalityFailure {
    pub probe: FinFunction,
    pub element: usize,
}

#[derive(Clone, Debug)]
pub struct NaturalityReport {
    pub failure: Option<NaturalityFailure>,
}

impl NaturalityReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks every naturality square over the probe for an arbitrary family of
/// component tables (index `i` holds the component at the set of size `i`).
/// Used both for generated transformations and as a negative control on
/// corrupted tables.
pub fn check_component_family(
    src: &Bundle,
    dst: &Bundle,
    components: &[FinFunction],
    probe_max: usize,
) -> Result<NaturalityReport> {
    if components.len() < probe_max + 1 {
        return Err(Error::validation(
            "components",
            format!("need {} component tables, found {}", probe_max + 1, components.len()),
        ));
    }
    for g in probe_maps(probe_max) {
        let x = g.dom().size();
        let x_prime = g.cod().size();
        let src_action = dir_eval_map(src, &g)?;
        let dst_action = dir_eval_map(dst, &g)?;
        // D'(g) ∘ t_{X'} vs t_X ∘ D(g), both D(X') -> D'(X).
        let lhs = finset::compose(&dst_action, &components[x_prime])?;
        let rhs = finset::compose(&components[x], &src_action)?;
        if lhs != rhs {
            let element = lhs
                .table()
                .iter()
                .zip(rhs.table())
                .position(|(a, b)| a != b)
                .expect("tables differ");
            return Ok(NaturalityReport { failure: Some(NaturalityFailure { probe: g, element }) });
        }
    }
    Ok(NaturalityReport { failure: None })
}

/// Verifies all naturality squares of the transformation induced by a bundle
/// map, for probe maps between sets of size `<= probe_max`.
pub fn check_naturality(t: &NatTransform, probe_max: usize) -> Result<NaturalityReport> {
    let components = (0..=probe_max)
        .map(|x| nat_component(t, FinSet(x)))
        .collect::<Result<Vec<_>>>()?;
    check_component_family(t.src(), t.dst(), &components, probe_max)
}

/// Whether the cone `(p1, p2)` exhibits its domain as the pullback of
/// `f` and `g` (assumes `f ∘ p1 = g ∘ p2`).
pub fn is_pullback_cone(p1: &FinFunction, p2: &FinFunction, f: &FinFunction, g: &FinFunction) -> bool {
    let (apex, q1, q2) = match finset::pullback(f, g) {
        Ok(p) => p,
        Err(_) => return false,
    };
    if apex.size() != p1.dom().size() {
        return false;
    }
    let index: HashMap<(usize, usize), usize> =
        apex.elements().map(|i| ((q1.apply(i), q2.apply(i)), i)).collect();
    let mut hit = vec![false; apex.size()];
    for a in p1.dom().elements() {
        match index.get(&(p1.apply(a), p2.apply(a))) {
            Some(&i) if !hit[i] => hit[i] = true,
            _ => return false,
        }
    }
    true
}

/// Decides cartesianness of a transformation two ways: from the carrier
/// bundle map directly, and by checking that every probe naturality square
/// is a pullback. The two answers agree (that agreement is itself a tested
/// theorem).
pub fn is_cartesian_nat(t: &NatTransform, probe_max: usize) -> Result<(bool, bool)> {
    let by_bundle = bundle::is_cartesian(t.carrier());
    let mut by_probe = true;
    'probes: for g in probe_maps(probe_max) {
        let src_action = dir_eval_map(t.src(), &g)?;
        let dst_action = dir_eval_map(t.dst(), &g)?;
        let t_upper = nat_component(t, g.cod())?;
        let t_lower = nat_component(t, g.dom())?;
        if !is_pullback_cone(&src_action, &t_upper, &t_lower, &dst_action) {
            by_probe = false;
            break 'probes;
        }
    }
    Ok((by_bundle, by_probe))
}

#[derive(Clone, Debug)]
pub struct ConnectedLimitsReport {
    pub failure: Option<String>,
}

impl ConnectedLimitsReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Verifies that `D = dir_eval(π, -)` sends probe pushouts to pullbacks and
/// probe coequalizers to equalizers, with the canonical comparison maps built
/// from the cone legs.
pub fn check_preserves_connected_limits(
    pi: &Bundle,
    probe_max: usize,
    cap: u64,
) -> Result<ConnectedLimitsReport> {
    // Every evaluation materialized below has at most dir_card(π, 2 * probe_max)
    // elements (the pushout of two probe sets).
    cap_guard(dir_card(pi, 2 * probe_max), cap)?;
    for z in 0..=probe_max {
        for xs in 0..=probe_max {
            for ys in 0..=probe_max {
                for f in finset::all_functions(FinSet(z), FinSet(xs)) {
                    for g in finset::all_functions(FinSet(z), FinSet(ys)) {
                        let (_, q1, q2) = finset::pushout(&f, &g)?;
                        let d_q1 = dir_eval_map(pi, &q1)?;
                        let d_q2 = dir_eval_map(pi, &q2)?;
                        let d_f = dir_eval_map(pi, &f)?;
                        let d_g = dir_eval_map(pi, &g)?;
                        if !is_pullback_cone(&d_q1, &d_q2, &d_f, &d_g) {
                            return Ok(ConnectedLimitsReport {
                                failure: Some(format!(
                                    "pushout comparison fails for span {:?} <- {z} -> {:?}",
                                    f.table(),
                                    g.table()
                                )),
                            });
                        }
                    }
                }
            }
        }
    }
    for a in 0..=probe_max {
        for bs in 0..=probe_max {
            for f in finset::all_functions(FinSet(a), FinSet(bs)) {
                for g in finset::all_functions(FinSet(a), FinSet(bs)) {
                    let (_, q) = finset::coequalizer(&f, &g)?;
                    let d_q = dir_eval_map(pi, &q)?;
                    let d_f = dir_eval_map(pi, &f)?;
                    let d_g = dir_eval_map(pi, &g)?;
                    // D(q) must be the equalizer of D(f), D(g): injective
                    // with image exactly the agreement locus.
                    let mut seen = vec![false; d_q.cod().size()];
                    let injective = d_q.table().iter().all(|&v| !std::mem::replace(&mut seen[v], true));
                    let image_ok = d_q
                        .cod()
                        .elements()
                        .all(|y| seen[y] == (d_f.apply(y) == d_g.apply(y)));
                    if !injective || !image_ok {
                        return Ok(ConnectedLimitsReport {
                            failure: Some(format!(
                                "coequalizer comparison fails for pair {:?}, {:?} on {a} -> {bs}",
                                f.table(),
                                g.table()
                            )),
                        });
                    }
                }
            }
        }
    }
    Ok(ConnectedLimitsReport { failure: None })
}

/// Synthesizes the bundle presenting the composite `P ∘ D` of the polynomial
/// functor of `p` after the Dirichlet functor of `d`: base points are pairs
/// `(b, g : E_{p,b} -> B_d)` in canonical order, the fiber over `(b, g)` has
/// size `Π_e |E_{d,g(e)}|`.
pub fn compose_poly_after_dirichlet(p: &Bundle, d: &Bundle, cap: u64) -> Result<Bundle> {
    let base_count: BigUint = p
        .fiber_sizes()
        .iter()
        .map(|&k| BigUint::from(d.base().size()).pow(k as u32))
        .sum();
    cap_guard(base_count, cap)?;
    let mut fibers = Vec::new();
    for &k in p.fiber_sizes() {
        for g in finset::all_functions(FinSet(k), d.base()) {
            let mut product = 1usize;
            for e in 0..k {
                product = product
                    .checked_mul(d.fiber_sizes()[g.apply(e)])
                    .ok_or_else(|| Error::CardinalityOverflow { value: "composite fiber".to_string() })?;
            }
            fibers.push(product);
        }
    }
    Ok(Bundle::new(fibers))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::all_bundles;
    use crate::finset::{all_functions, DEFAULT_ENUM_CAP};

    fn func(dom: usize, cod: usize, table: &[usize]) -> FinFunction {
        FinFunction::new(FinSet(dom), FinSet(cod), table.to_vec()).unwrap()
    }

    #[test]
    fn dir_eval_sizes() {
        let pi = Bundle::new(vec![2, 3]);
        // Oracle: enumerate pairs (b, h) by hand.
        let mut count = 0;
        for &k in pi.fiber_sizes() {
            count += k * k; // functions 2 -> E_b
        }
        assert_eq!(count, 13);
        assert_eq!(dir_eval(&pi, FinSet(2)).unwrap(), FinSet(13));

        for pi in all_bundles(3, 3) {
            assert_eq!(dir_eval(&pi, FinSet(0)).unwrap(), pi.base());
            assert_eq!(dir_eval(&pi, FinSet(1)).unwrap(), pi.total());
            assert_eq!(poly_eval(&pi, FinSet(1)).unwrap(), pi.base());
        }
    }

    #[test]
    fn poly_eval_sizes() {
        let pi = Bundle::new(vec![2, 3]);
        assert_eq!(poly_eval(&pi, FinSet(2)).unwrap(), FinSet(12));
    }

    #[test]
    fn dir_codes_round_trip() {
        let pi = Bundle::new(vec![2, 0, 3]);
        for x in 0..=3usize {
            let d = dir_eval(&pi, FinSet(x)).unwrap();
            for code in d.elements() {
                let elem = dir_decode(&pi, x, code);
                assert_eq!(dir_encode(&pi, x, &elem), code);
                assert!(elem.fiber_datum.iter().all(|&i| i < pi.fiber_sizes()[elem.base]));
            }
            let p = poly_eval(&pi, FinSet(x)).unwrap();
            for code in p.elements() {
                let elem = poly_decode(&pi, x, code);
                assert_eq!(poly_encode(&pi, x, &elem), code);
            }
        }
    }

    #[test]
    fn dir_eval_map_examples() {
        let pi = Bundle::new(vec![2]);
        // g = identity is sent to the identity.
        let g = FinFunction::identity(FinSet(2));
        assert!(dir_eval_map(&pi, &g).unwrap().is_identity());

        // g = !_0 : 0 -> X forgets the fiber datum.
        let g = FinFunction::initial(FinSet(2));
        let action = dir_eval_map(&pi, &g).unwrap();
        for code in action.dom().elements() {
            assert_eq!(action.apply(code), dir_decode(&pi, 2, code).base);
        }

        // Constant g : 1 -> 2 at 0 keeps the first coordinate.
        let g = func(1, 2, &[0]);
        let action = dir_eval_map(&pi, &g).unwrap();
        assert_eq!(action.dom(), FinSet(4));
        assert_eq!(action.cod(), FinSet(2));
        for code in 0..4 {
            let elem = dir_decode(&pi, 2, code);
            assert_eq!(action.apply(code), elem.fiber_datum[0]);
        }
    }

    #[test]
    fn poly_eval_map_identity() {
        let pi = Bundle::new(vec![2, 3]);
        let g = FinFunction::identity(FinSet(2));
        assert!(poly_eval_map(&pi, &g).unwrap().is_identity());
    }

    #[test]
    fn functor_laws_small() {
        let pi = Bundle::new(vec![2, 1]);
        for g in all_functions(FinSet(2), FinSet(2)) {
            for h in all_functions(FinSet(2), FinSet(2)) {
                let hg = finset::compose(&h, &g).unwrap();
                // Contravariance: D(h ∘ g) = D(g) ∘ D(h).
                let lhs = dir_eval_map(&pi, &hg).unwrap();
                let rhs =
                    finset::compose(&dir_eval_map(&pi, &g).unwrap(), &dir_eval_map(&pi, &h).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
                // Covariance: P(h ∘ g) = P(h) ∘ P(g).
                let lhs = poly_eval_map(&pi, &hg).unwrap();
                let rhs =
                    finset::compose(&poly_eval_map(&pi, &h).unwrap(), &poly_eval_map(&pi, &g).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn presentations_agree_on_witness() {
        let pi = Bundle::new(vec![2, 3]);
        for method in DirMethod::ALL {
            let p = dir_eval_via(method, &pi, FinSet(2), DEFAULT_ENUM_CAP).unwrap();
            assert_eq!(p.set, FinSet(13), "{}", method.name());
            assert!(p.to_sum.is_bijective(), "{}", method.name());
        }
    }

    #[test]
    fn presentation_bijections_are_natural_on_witness() {
        let pi = Bundle::new(vec![2, 3]);
        for method in DirMethod::ALL {
            for g in probe_maps(2) {
                let upper = dir_eval_via(method, &pi, g.cod(), DEFAULT_ENUM_CAP).unwrap();
                let lower = dir_eval_via(method, &pi, g.dom(), DEFAULT_ENUM_CAP).unwrap();
                let via_action = dir_via_map(method, &pi, &g, DEFAULT_ENUM_CAP).unwrap();
                let sum_action = dir_eval_map(&pi, &g).unwrap();
                let left = finset::compose(&lower.to_sum, &via_action).unwrap();
                let right = finset::compose(&sum_action, &upper.to_sum).unwrap();
                assert_eq!(left, right, "{} at g = {:?}", method.name(), g.table());
            }
        }
    }

    #[test]
    fn nat_component_examples() {
        let b = Bundle::new(vec![2, 3]);
        let t = NatTransform::new(BundleMap::identity(&b));
        for x in 0..=4usize {
            assert!(nat_component(&t, FinSet(x)).unwrap().is_identity());
        }

        // At X = 0 the component is the base map under D(0) = B.
        let src = Bundle::new(vec![2]);
        let dst = Bundle::new(vec![1, 3]);
        let m = BundleMap::new(src.clone(), dst.clone(), func(1, 2, &[1]), func(2, 4, &[1, 2])).unwrap();
        let t = NatTransform::new(m.clone());
        let c0 = nat_component(&t, FinSet(0)).unwrap();
        assert_eq!(c0.table(), m.base_map().table());
        // At X = 1 the component is the total map under D(1) = E.
        let c1 = nat_component(&t, FinSet(1)).unwrap();
        assert_eq!(c1.table(), m.total_map().table());

        // The 4 elements of D(2) land in the 9-element block of D'(2).
        let c2 = nat_component(&t, FinSet(2)).unwrap();
        assert_eq!(c2.dom(), FinSet(4));
        assert_eq!(c2.cod(), FinSet(10));
        assert!(c2.table().iter().all(|&v| v >= 1));
    }

    #[test]
    fn naturality_holds_and_corruption_is_detected() {
        let src = Bundle::new(vec![2]);
        let dst = Bundle::new(vec![1, 3]);
        let m = BundleMap::new(src.clone(), dst.clone(), func(1, 2, &[1]), func(2, 4, &[1, 2])).unwrap();
        let t = NatTransform::new(m);
        assert!(check_naturality(&t, 3).unwrap().holds());

        let mut components = (0..=2)
            .map(|x| nat_component(&t, FinSet(x)).unwrap())
            .collect::<Vec<_>>();
        // Corrupt the component at X = 2.
        let mut table = components[2].table().to_vec();
        table[0] = (table[0] + 1) % components[2].cod().size();
        components[2] = FinFunction::new(components[2].dom(), components[2].cod(), table).unwrap();
        let report = check_component_family(&src, &dst, &components, 2).unwrap();
        assert!(!report.holds());
    }

    #[test]
    fn cartesian_nat_examples() {
        let b = Bundle::new(vec![2, 3]);
        let t = NatTransform::new(BundleMap::identity(&b));
        assert_eq!(is_cartesian_nat(&t, 2).unwrap(), (true, true));

        let src = Bundle::new(vec![2]);
        let dst = Bundle::new(vec![1, 3]);
        let m = BundleMap::new(src, dst.clone(), func(1, 2, &[1]), func(2, 4, &[1, 2])).unwrap();
        assert_eq!(is_cartesian_nat(&NatTransform::new(m), 2).unwrap(), (false, false));

        let src = Bundle::new(vec![3]);
        let m = BundleMap::new(src, dst, func(1, 2, &[1]), func(3, 4, &[2, 1, 3])).unwrap();
        assert_eq!(is_cartesian_nat(&NatTransform::new(m), 2).unwrap(), (true, true));
    }

    #[test]
    fn connected_limits_witness() {
        // Pushout of 1 <- 0 -> 1 is 2: |D(2)| = 13 vs 4 + 9 over D(0).
        let pi = Bundle::new(vec![2, 3]);
        let f = FinFunction::initial(FinSet(1));
        let (q, q1, q2) = finset::pushout(&f, &f).unwrap();
        assert_eq!(q, FinSet(2));
        let d_q1 = dir_eval_map(&pi, &q1).unwrap();
        let d_q2 = dir_eval_map(&pi, &q2).unwrap();
        let d_f = dir_eval_map(&pi, &f).unwrap();
        assert!(is_pullback_cone(&d_q1, &d_q2, &d_f, &d_f));
        assert_eq!(dir_eval(&pi, q).unwrap(), FinSet(13));

        assert!(check_preserves_connected_limits(&pi, 2, DEFAULT_ENUM_CAP).unwrap().holds());
        assert!(check_preserves_connected_limits(&Bundle::new(vec![1]), 2, DEFAULT_ENUM_CAP)
            .unwrap()
            .holds());
    }

    #[test]
    fn compose_pd_examples() {
        // Identity polynomial leaves the Dirichlet bundle unchanged.
        let p = Bundle::new(vec![1]);
        let d = Bundle::new(vec![2]);
        assert_eq!(compose_poly_after_dirichlet(&p, &d, DEFAULT_ENUM_CAP).unwrap().fiber_sizes(), &[2]);

        // P(X) = X^2 after D(X) = 2^X is 4^X.
        let p = Bundle::new(vec![2]);
        let composite = compose_poly_after_dirichlet(&p, &d, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(composite.fiber_sizes(), &[4]);
        for x in 0..=3usize {
            let outer = poly_card(&p, finset::biguint_to_usize(&dir_card(&d, x)).unwrap());
            assert_eq!(dir_card(&composite, x), outer);
        }

        // Constant polynomial P(X) = 1.
        let p = Bundle::new(vec![0]);
        assert_eq!(compose_poly_after_dirichlet(&p, &d, DEFAULT_ENUM_CAP).unwrap().fiber_sizes(), &[1]);
    }

    #[test]
    fn compose_pd_bijection_is_natural() {
        // The canonical bijection D_{P∘D}(X) -> P(D(X)) sends ((b, g), H) to
        // (b, e |-> (g(e), x |-> H(x)_e)) and commutes with the actions.
        let p = Bundle::new(vec![2, 1]);
        let d = Bundle::new(vec![2, 0]);
        let composite = compose_poly_after_dirichlet(&p, &d, DEFAULT_ENUM_CAP).unwrap();

        let bijection = |x: usize| -> Vec<usize> {
            let d_card = finset::biguint_to_usize(&dir_card(&d, x)).unwrap();
            let dom = dir_eval(&composite, FinSet(x)).unwrap();
            dom.elements()
                .map(|code| {
                    let elem = dir_decode(&composite, x, code);
                    // Recover (b, g) from the composite base point.
                    let (b, g_idx) = {
                        let mut rest = elem.base;
                        let mut found = None;
                        for (b, &k) in p.fiber_sizes().iter().enumerate() {
                            let block = d.base().size().pow(k as u32);
                            if rest < block {
                                found = Some((b, rest));
                                break;
                            }
                            rest -= block;
                        }
                        found.unwrap()
                    };
                    let k = p.fiber_sizes()[b];
                    let g = finset::decode_mixed(g_idx, &vec![d.base().size(); k]);
                    // Fiber elements of the composite are section tuples.
                    let radices: Vec<usize> = g.iter().map(|&bd| d.fiber_sizes()[bd]).collect();
                    let sections: Vec<Vec<usize>> = elem
                        .fiber_datum
                        .iter()
                        .map(|&s| finset::decode_mixed(s, &radices))
                        .collect();
                    let t: Vec<usize> = (0..k)
                        .map(|e| {
                            let h: Vec<usize> = sections.iter().map(|sec| sec[e]).collect();
                            dir_encode(&d, x, &DirichletElement { base: g[e], fiber_datum: h })
                        })
                        .collect();
                    poly_encode(&p, d_card, &PolyElement { base: b, fiber_datum: t })
                })
                .collect()
        };

        for g in probe_maps(3) {
            let x = g.dom().size();
            let x_prime = g.cod().size();
            let upper = bijection(x_prime);
            let lower = bijection(x);
            let inner = dir_eval_map(&composite, &g).unwrap();
            let outer = {
                let d_action = dir_eval_map(&d, &g).unwrap();
                poly_eval_map(&p, &d_action).unwrap()
            };
            for code in 0..upper.len() {
                assert_eq!(lower[inner.apply(code)], outer.apply(upper[code]));
            }
            // Bijectivity.
            let mut seen = vec![false; upper.len()];
            for &v in &upper {
                assert!(!std::mem::replace(&mut seen[v], true));
            }
        }
    }
}
