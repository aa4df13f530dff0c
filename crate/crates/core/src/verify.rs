//! The verification suite: ten named exhaustive checks at desk scale, one
//! per theorem the crate makes executable. Each check reports pass/fail with
//! the first counterexample spelled out; infrastructure problems (caps,
//! malformed inputs) surface as errors instead of failures.

use crate::bundle::{
    self, all_bundles, AdjointPair, Bundle, BundleMap,
};
use crate::equivalence;
use crate::error::Result;
use crate::finset::{self, FinSet, DEFAULT_ENUM_CAP};
use crate::functor::{self, DirMethod, NatTransform};
use crate::series::{self, SeriesKind};

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    /// Bound on base size and fiber sizes for the single-bundle corpus and
    /// on probed set sizes for the adjunction checks.
    pub max_size: usize,
    /// Probe category bound for naturality checking.
    pub probe_max: usize,
    pub cap: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { max_size: 3, probe_max: 3, cap: DEFAULT_ENUM_CAP }
    }
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(id: &'static str, detail: impl Into<String>) -> Self {
        CheckOutcome { id, passed: true, detail: detail.into() }
    }

    fn fail(id: &'static str, detail: impl Into<String>) -> Self {
        CheckOutcome { id, passed: false, detail: detail.into() }
    }
}

pub const CHECK_IDS: [&str; 10] = [
    "presentations",
    "equivalence",
    "cartesian",
    "poly-dir",
    "factorization",
    "connected-limits",
    "series",
    "adjunctions",
    "composite",
    "functor-laws",
];

/// Runs every check in id order.
pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<CheckOutcome>> {
    CHECK_IDS.iter().map(|id| run_check(id, cfg)).collect()
}

pub fn run_check(id: &str, cfg: &VerifyConfig) -> Result<CheckOutcome> {
    match id {
        "presentations" => check_presentations(cfg),
        "equivalence" => check_equivalence(cfg),
        "cartesian" => check_cartesian(cfg),
        "poly-dir" => check_poly_dir(cfg),
        "factorization" => check_factorization(cfg),
        "connected-limits" => check_connected_limits(cfg),
        "series" => check_series(cfg),
        "adjunctions" => check_adjunctions(cfg),
        "composite" => check_composite(cfg),
        "functor-laws" => check_functor_laws(cfg),
        other => Err(crate::error::Error::validation("check", format!("unknown check id `{other}`"))),
    }
}

/// Bundle pairs get quadratic cost, so their corpus is capped at size 2.
fn pair_bound(cfg: &VerifyConfig) -> usize {
    cfg.max_size.min(2)
}

fn check_presentations(cfg: &VerifyConfig) -> Result<CheckOutcome> {
    const ID: &str = "presentations";
    let corpus = all_bundles(cfg.max_size, cfg.max_size);
    let probes = functor::probe_maps(cfg.max_size);
    let mut squares = 0usize;
    for pi in &corpus {
        for method in DirMethod::ALL {
            for x in 0..=cfg.max_size {
                let p = functor::dir_eval_via(method, pi, FinSet(x), cfg.cap)?;
                let expected = functor::dir_eval(pi, FinSet(x))?;
                if p.set != expected || !p.to_sum.is_bijective() {
                    return Ok(CheckOutcome::fail(
                        ID,
                        format!(
                            "presentation {} of fibers {:?} at |X| = {x} has size {} (sum form has {})",
                            method.name(),
                            pi.fiber_sizes(),
                            p.set.size(),
                            expected.size()
                        ),
                    ));
                }
            }
            for g in &probes {
                let upper = functor::dir_eval_via(method, pi, g.cod(), cfg.cap)?;
                let lower = functor::dir_eval_via(method, pi, g.dom(), cfg.cap)?;
                let action = functor::dir_via_map(method, pi, g, cfg.cap)?;
                let lhs = finset::compose(&lower.to_sum, &action)?;
                let rhs = finset::compose(&functor::dir_eval_map(pi, g)?, &upper.to_sum)?;
                if lhs != rhs {
                    return Ok(CheckOutcome::fail(
                        ID,
                        format!(
                            "bijection of presentation {} is not natural for fibers {:?} at probe {:?}",
                            method.name(),
                            pi.fiber_sizes(),
                            g.table()
                        ),
                    ));
                }
                squares += 1;
            }
        }
    }
    Ok(CheckOutcome::pass(
        ID,
        format!("{} bundles, 5 presentations, {squares} naturality squares", corpus.len()),
    ))
}

fn check_equivalence(cfg: &VerifyConfig) -> Result<CheckOutcome> {
    const ID: &str = "equivalence";
    let bound = pair_bound(cfg);
    let corpus = all_bundles(bound, bound);
    let mut pairs = 0usize;
    for src in &corpus {
        for dst in &corpus {
            let maps = equivalence::enumerate_covariant_maps(src, dst, cfg.cap)?;
            let families = equivalence::enumerate_natural_families(src, dst, cfg.probe_max, cfg.cap)?;
            if maps.len() != families.len() {
                return Ok(CheckOutcome::fail(
                    ID,
                    format!(
                        "fibers {:?} -> {:?}: {} bundle maps but {} natural families",
                        src.fiber_sizes(),
                        dst.fiber_sizes(),
                        maps.len(),
                        families.len()
                    ),
                ));
            }
            for m in &maps {
                let back = equivalence::restrict_at_bang0(&equivalence::extend_from_bang0(m, cfg.probe_max)?)?;
                if &back != m {
                    return Ok(CheckOutcome::fail(ID, "extend/restrict round trip moved a bundle map".to_string()));
                }
            }
            for f in &families {
                let back = equivalence::extend_from_bang0(&equivalence::restrict_at_bang0(f)?, cfg.probe_max)?;
                if &back != f {
                    return Ok(CheckOutcome::fail(ID, "restrict/extend round trip moved a family".to_string()));
                }
            }
            pairs += 1;
        }
    }
    // Frozen witness, independent of the corpus bound.
    let w_src = Bundle::new(vec![2]);
    let w_dst = Bundle::new(vec![1, 3]);
    let w_maps = equivalence::enumerate_covariant_maps(&w_src, &w_dst, cfg.cap)?.len();
    let w_fams = equivalence::enumerate_natural_families(&w_src, &w_dst, cfg.probe_max, cfg.cap)?.len();
    if w_maps != 10 || w_fams != 10 {
        return Ok(CheckOutcome::fail(
            ID,
            format!("witness [2] vs [1,3] expected 10 = 10, got {w_maps} maps and {w_fams} families"),
        ));
    }
    Ok(CheckOutcome::pass(ID, format!("{pairs} bundle pairs, witness 10 = 10")))
}

fn check_cartesian(cfg: &VerifyConfig) -> Result<CheckOutcome> {
    const ID: &str = "cartesian";
    let bound = pair_bound(cfg);
    let corpus = all_bundles(bound, bound);
    let mut checked = 0usize;
    for src in &corpus {
        for dst in &corpus {
            let mut by_bundle_count = 0usize;
            let mut pullback_count = 0usize;
            for m in equivalence::enumerate_covariant_maps(src, dst, cfg.cap)? {
                let t = NatTransform::new(m.clone());
                let (by_bundle, by_probe) = functor::is_cartesian_nat(&t, cfg.probe_max)?;
                if by_bundle != by_probe {
                    return Ok(CheckOutcome::fail(
                        ID,
                        format!(
                            "fibers {:?} -> {:?}, base {:?}, total {:?}: by_bundle = {by_bundle}, by_probe = {by_probe}",
                            src.fiber_sizes(),
                            dst.fiber_sizes(),
                            m.base_map().table(),
                            m.total_map().table()
                        ),
                    ));
                }
                by_bundle_count += by_bundle as usize;
                pullback_count += bundle::is_cartesian_via_pullback(&m) as usize;
                checked += 1;
            }
            if by_bundle_count != pullback_count {
                return Ok(CheckOutcome::fail(
                    ID,
                    format!(
                        "fibers {:?} -> {:?}: {by_bundle_count} cartesian maps but {pullback_count} pullback squares",
                        src.fiber_sizes(),
                        dst.fiber_sizes()
                    ),
                ));
            }
        }
    }
    Ok(CheckOutcome::pass(ID, format!("{checked} maps agree on both cartesianness tests")))
}

fn check_poly_dir(cfg: &VerifyConfig) -> Result<CheckOutcome> {
    const ID: &str = "poly-dir";
    let bound = pair_bound(cfg);
    let corpus = all_bundles(bound, bound);
    for src in &corpus {
        for dst in &corpus {
            let eq = equivalence::poly_dir_cartesian_equiv(src, dst, cfg.cap)?;
            if eq.covariant.len() != eq.contravariant.len() {
                return Ok(CheckOutcome::fail(
                    ID,
                    format!(
                        "fibers {:?} -> {:?}: {} cartesian maps vs {} fiberwise-bijective contravariant maps",
                        src.fiber_sizes(),
                        dst.fiber_sizes(),
                        eq.covariant.len(),
                        eq.contravariant.len()
                    ),
                ));
            }
            let mut used = vec![false; eq.contravariant.len()];
            for &j in &eq.pairing {
                if std::mem::replace(&mut used[j], true) {
                    return Ok(CheckOutcome::fail(ID, "fiberwise inversion is not injective".to_string()));
                }
            }
        }
    }
    // Identities and composition are preserved.
    for mid in &corpus {
        let id_contra = bundle::cartesian_covariant_to_contra(&BundleMap::identity(mid))?;
        if id_contra != bundle::ContraBundleMap::identity(mid) {
            return Ok(CheckOutcome::fail(ID, "translation moves an identity".to_string()));
        }
        for src in &corpus {
            for dst in &corpus {
                let firsts = equivalence::poly_dir_cartesian_equiv(src, mid, cfg.cap)?;
                let seconds = equivalence::poly_dir_cartesian_equiv(mid, dst, cfg.cap)?;
                for f in &firsts.covariant {
                    for g in &seconds.covariant {
                        let composite = bundle::cartesian_covariant_to_contra(&bundle::compose_maps(g, f)?)?;
                        let piecewise = bundle::ContraBundleMap::compose(
                            &bundle::cartesian_covariant_to_contra(g)?,
                            &bundle::cartesian_covariant_to_contra(f)?,
                        )?;
                        if composite != piecewise {
                            return Ok(CheckOutcome::fail(ID, "translation breaks a composition".to_string()));
                        }
                    }
                }
            }
        }
    }
    let n = Bundle::new(vec![3]);
    let witness = equivalence::poly_dir_cartesian_equiv(&n, &n, cfg.cap)?;
    if witness.covariant.len() != 6 || witness.contravariant.len() != 6 {
        return Ok(CheckOutcome::fail(
            ID,
            format!(
                "representable witness n = 3 expected 6 = 6, got {} and {}",
                witness.covariant.len(),
                witness.contravariant.len()
            ),
        ));
    }
    Ok(CheckOutcome::pass(ID, "fiberwise inversion is a functorial bijection; witness 3! = 6".to_string()))
}

fn check_factorization(cfg: &VerifyConfig) -> Result<CheckOutcome> {
    const ID: &str = "factorization";
    let bound = pair_bound(cfg);
    let corpus = all_bundles(bound, bound);
    let mut maps_checked = 0usize;
    for src in &corpus {
        for dst in &corpus {
            for m in equivalence::enumerate_covariant_maps(src, dst, cfg.cap)? {
                let f = bundle::factor_vertical_cartesian(&m);
                let recomposed = bundle::compose_maps(&f.cartesian, &f.vertical)?;
                if recomposed != m
                    || !bundle::is_cartesian(&f.cartesian)
                    || !f.vertical.base_map().is_identity()
                {
                    return Ok(CheckOutcome::fail(
                        ID,
                        format!(
                            "fibers {:?} -> {:?}, base {:?}, total {:?}: factorization is not vertical-then-cartesian",
                            src.fiber_sizes(),
                            dst.fiber_sizes(),
                            m.base_map().table(),
                            m.total_map().table()
                        ),
                    ));
                }
                // Uniqueness: with the canonical cartesian leg fixed, exactly
                // one vertical map mediates.
                let middle = f.vertical.dst();
                let mut count = 0usize;
                for v in equivalence::enumerate_covariant_maps(src, middle, cfg.cap)? {
                    if v.base_map().is_identity() && bundle::compose_maps(&f.cartesian, &v)? == m {
                        count += 1;
                    }
                }
                if count != 1 {
                    return Ok(CheckOutcome::fail(
                        ID,
                        format!(
                            "fibers {:?} -> {:?}: {count} factorizations through the canonical pullback",
                            src.fiber_sizes(),
                            dst.fiber_sizes()
                        ),
                    ));
                }
                maps_checked += 1;
            }
        }
    }
    Ok(CheckOutcome::pass(ID, format!("{maps_checked} maps factor uniquely")))
}

fn check_connected_limits(cfg: &VerifyConfig) -> Result<CheckOutcome> {
    const ID: &str = "connected-limits";
    let corpus = all_bundles(cfg.max_size, cfg.max_size);
    for pi in &corpus {
        let report = functor::check_preserves_connected_limits(pi, cfg.probe_max, cfg.cap)?;
        if let Some(failure) = report.failure {
            return Ok(CheckOutcome::fail(ID, format!("fibers {:?}: {failure}", pi.fiber_sizes())));
        }
    }
    // Frozen witness: the pushout 1 <- 0 -> 1 is the two-point set, and
    // D of it for fibers [2, 3] has 2^2 + 3^2 = 13 elements.
    let lhs = functor::dir_card(&Bundle::new(vec![2, 3]), 2);
    if lhs != num_bigint::BigUint::from(13usize) {
        return Ok(CheckOutcome::fail(ID, format!("witness D(1 +_0 1) expected 13, got {lhs}")));
    }
    Ok(CheckOutcome::pass(
        ID,
        format!("{} bundles preserve probe pushouts and coequalizers; witness 13 = 4 + 9", corpus.len()),
    ))
}

fn check_series(cfg: &VerifyConfig) -> Result<CheckOutcome> {
    const ID: &str = "series";
    let corpus = all_bundles(cfg.max_size, cfg.max_size);
    for pi in &corpus {
        let d = series::series_of(pi, SeriesKind::Dirichlet);
        let p = series::series_of(pi, SeriesKind::Polynomial);
        for x in 0..=6 {
            if d.eval(x) != functor::dir_card(pi, x) || p.eval(x) != functor::poly_card(pi, x) {
                return Ok(CheckOutcome::fail(
                    ID,
                    format!("fibers {:?}: series disagrees with the evaluator at |X| = {x}", pi.fiber_sizes()),
                ));
            }
        }
    }
    let golden = series::series_of(&Bundle::new(vec![2, 3, 3]), SeriesKind::Dirichlet).render();
    if golden != "2^X + 2·3^X" {
        return Ok(CheckOutcome::fail(ID, format!("golden rendering mismatch: `{golden}`")));
    }
    Ok(CheckOutcome::pass(ID, format!("{} bundles, x <= 6, golden `{golden}`", corpus.len())))
}

fn check_adjunctions(cfg: &VerifyConfig) -> Result<CheckOutcome> {
    const ID: &str = "adjunctions";
    for pair in [
        AdjointPair::BangUpCod,
        AdjointPair::CodConst,
        AdjointPair::ConstDom,
        AdjointPair::DomBangDown,
    ] {
        let report = bundle::check_adjunction(pair, cfg.max_size, cfg.cap)?;
        if let Some(i) = report.first_counterexample {
            let inst = &report.instances[i];
            return Ok(CheckOutcome::fail(
                ID,
                format!(
                    "{} fails at fibers {:?}, |X| = {}: {} vs {}",
                    pair.name(),
                    inst.bundle.fiber_sizes(),
                    inst.set.size(),
                    inst.left_count,
                    inst.right_count
                ),
            ));
        }
    }
    // The leftmost pair is expected to fail, and at the documented spot:
    // fibers [1], X = 1 gives hom-counts 1 vs 0. Silently passing here would
    // mean ZC no longer computes the empty-fiber locus.
    let report = bundle::check_adjunction(AdjointPair::ZcBangUp, cfg.max_size, cfg.cap)?;
    let documented = report.instances.iter().any(|i| {
        i.bundle.fiber_sizes() == [1] && i.set == FinSet(1) && i.left_count == 1 && i.right_count == 0
    });
    if report.holds() || !documented {
        return Ok(CheckOutcome::fail(
            ID,
            "zc-bangup: documented counterexample (fibers [1], |X| = 1: 1 vs 0) was not reproduced".to_string(),
        ));
    }
    Ok(CheckOutcome::pass(
        ID,
        format!(
            "four adjunctions hold at size <= {}; zc-bangup shows the expected counterexample 1 vs 0",
            cfg.max_size
        ),
    ))
}

fn check_composite(cfg: &VerifyConfig) -> Result<CheckOutcome> {
    const ID: &str = "composite";
    let corpus = all_bundles(cfg.max_size, cfg.max_size);
    let mut pairs = 0usize;
    for p in &corpus {
        for d in &corpus {
            let composite = functor::compose_poly_after_dirichlet(p, d, cfg.cap)?;
            for x in 0..=cfg.max_size {
                let direct = functor::dir_card(&composite, x);
                let staged = functor::poly_card(p, functor::dir_eval(d, FinSet(x))?.size());
                if direct != staged {
                    return Ok(CheckOutcome::fail(
                        ID,
                        format!(
                            "p = {:?}, d = {:?}, |X| = {x}: composite gives {direct}, staged evaluation gives {staged}",
                            p.fiber_sizes(),
                            d.fiber_sizes()
                        ),
                    ));
                }
            }
            pairs += 1;
        }
    }
    let witness = functor::compose_poly_after_dirichlet(
        &Bundle::new(vec![2]),
        &Bundle::new(vec![2]),
        cfg.cap,
    )?;
    let rendered = series::series_of(&witness, SeriesKind::Dirichlet).render();
    if rendered != "4^X" {
        return Ok(CheckOutcome::fail(ID, format!("witness [2] after [2] expected 4^X, got `{rendered}`")));
    }
    Ok(CheckOutcome::pass(ID, format!("{pairs} composites match; witness 4^X")))
}

fn check_functor_laws(cfg: &VerifyConfig) -> Result<CheckOutcome> {
    const ID: &str = "functor-laws";
    let corpus = all_bundles(cfg.max_size, cfg.max_size);
    let probes = functor::probe_maps(cfg.max_size);
    let mut squares = 0usize;
    for pi in &corpus {
        for x in 0..=cfg.max_size {
            let id = finset::FinFunction::identity(FinSet(x));
            if !functor::dir_eval_map(pi, &id)?.is_identity()
                || !functor::poly_eval_map(pi, &id)?.is_identity()
            {
                return Ok(CheckOutcome::fail(
                    ID,
                    format!("fibers {:?}: identity law fails at |X| = {x}", pi.fiber_sizes()),
                ));
            }
        }
        // Precompute the actions once per bundle, then check composition as
        // pure table algebra.
        let dir_actions: Vec<finset::FinFunction> =
            probes.iter().map(|g| functor::dir_eval_map(pi, g)).collect::<Result<_>>()?;
        let poly_actions: Vec<finset::FinFunction> =
            probes.iter().map(|g| functor::poly_eval_map(pi, g)).collect::<Result<_>>()?;
        for (i, f) in probes.iter().enumerate() {
            for (j, g) in probes.iter().enumerate() {
                if f.cod() != g.dom() {
                    continue;
                }
                let gf = finset::compose(g, f)?;
                let dir_composite = functor::dir_eval_map(pi, &gf)?;
                if dir_composite != finset::compose(&dir_actions[i], &dir_actions[j])? {
                    return Ok(CheckOutcome::fail(
                        ID,
                        format!("fibers {:?}: contravariant composition law fails", pi.fiber_sizes()),
                    ));
                }
                let poly_composite = functor::poly_eval_map(pi, &gf)?;
                if poly_composite != finset::compose(&poly_actions[j], &poly_actions[i])? {
                    return Ok(CheckOutcome::fail(
                        ID,
                        format!("fibers {:?}: covariant composition law fails", pi.fiber_sizes()),
                    ));
                }
                squares += 1;
            }
        }
    }
    Ok(CheckOutcome::pass(
        ID,
        format!("{} bundles, {squares} composition squares, identities exact", corpus.len()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass_at_size_two() {
        let cfg = VerifyConfig { max_size: 2, probe_max: 3, cap: DEFAULT_ENUM_CAP };
        let outcomes = run_all(&cfg).unwrap();
        assert_eq!(outcomes.len(), CHECK_IDS.len());
        for o in &outcomes {
            assert!(o.passed, "{}: {}", o.id, o.detail);
        }
    }

    #[test]
    fn unknown_check_is_rejected() {
        let cfg = VerifyConfig::default();
        assert!(run_check("no-such-check", &cfg).is_err());
    }
}
