//! Command-line front door. Loads bundles and bundle maps from JSON files,
//! runs the evaluators, enumerations, factorization, series, and the
//! verification suite.
//!
//! Exit codes: 0 success, 1 verification failure (first counterexample
//! printed), 2 input/validation error, 3 enumeration cap exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dirichlet_core::{
    bundle, equivalence, functor, series, verify, Bundle, BundleMap, CardinalitySeries,
    DirMethod, Error, FinFunction, FinSet, NatTransform, SeriesKind, VerifyConfig,
    DEFAULT_ENUM_CAP,
};

#[derive(Parser)]
#[command(name = "dirichlet", about = "Polynomial and Dirichlet functors over finite sets", version)]
struct Cli {
    /// Enumeration cap: commands refuse to materialize more candidates than this.
    #[arg(long, global = true, env = "DIRICHLET_ENUM_CAP", default_value_t = DEFAULT_ENUM_CAP)]
    cap: u64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Copy, Clone, ValueEnum)]
enum Kind {
    Dirichlet,
    Polynomial,
}

impl From<Kind> for SeriesKind {
    fn from(k: Kind) -> SeriesKind {
        match k {
            Kind::Dirichlet => SeriesKind::Dirichlet,
            Kind::Polynomial => SeriesKind::Polynomial,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum DirMethodArg {
    Sum,
    Hom,
    Limit,
    Pullback,
    Slice,
}

impl From<DirMethodArg> for DirMethod {
    fn from(m: DirMethodArg) -> DirMethod {
        match m {
            DirMethodArg::Sum => DirMethod::Sum,
            DirMethodArg::Hom => DirMethod::Hom,
            DirMethodArg::Limit => DirMethod::Limit,
            DirMethodArg::Pullback => DirMethod::Pullback,
            DirMethodArg::Slice => DirMethod::Slice,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum PolyMethodArg {
    /// Direct sum-of-representables count.
    Sum,
    /// The slice composite Σ ∘ Π ∘ Δ.
    Composite,
}

#[derive(Copy, Clone, ValueEnum)]
enum MapVariant {
    Covariant,
    Contravariant,
    Cartesian,
}

#[derive(Copy, Clone, ValueEnum)]
enum Property {
    Commutes,
    Cartesian,
    Naturality,
    ConnectedLimits,
}

#[derive(Copy, Clone, ValueEnum)]
enum PairArg {
    BangupCod,
    CodConst,
    ConstDom,
    DomBangdown,
    ZcBangup,
}

impl From<PairArg> for bundle::AdjointPair {
    fn from(p: PairArg) -> bundle::AdjointPair {
        match p {
            PairArg::BangupCod => bundle::AdjointPair::BangUpCod,
            PairArg::CodConst => bundle::AdjointPair::CodConst,
            PairArg::ConstDom => bundle::AdjointPair::ConstDom,
            PairArg::DomBangdown => bundle::AdjointPair::DomBangDown,
            PairArg::ZcBangup => bundle::AdjointPair::ZcBangUp,
        }
    }
}

#[derive(Args)]
struct BundleArg {
    /// Bundle file, JSON of the form {"fibers": [k_0, ...]}.
    #[arg(long)]
    bundle: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Cardinality of the Dirichlet functor D(X) = Σ_b E_b^X at |X| = SIZE.
    EvalDirichlet {
        #[command(flatten)]
        bundle: BundleArg,
        #[arg(long)]
        size: usize,
        /// Presentation to evaluate through; all agree.
        #[arg(long, value_enum, default_value_t = DirMethodArg::Sum)]
        method: DirMethodArg,
    },
    /// Cardinality of the polynomial functor P(X) = Σ_b X^{E_b} at |X| = SIZE.
    EvalPoly {
        #[command(flatten)]
        bundle: BundleArg,
        #[arg(long)]
        size: usize,
        #[arg(long, value_enum, default_value_t = PolyMethodArg::Sum)]
        method: PolyMethodArg,
    },
    /// Cardinality series of a bundle (fiber-size histogram).
    Series {
        #[command(flatten)]
        bundle: BundleArg,
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Evaluate a series file at a point.
    EvalSeries {
        /// Series file, JSON of the form {"kind": ..., "coefficients": {...}}.
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        at: usize,
    },
    /// Enumerate bundle maps between two bundles in canonical order.
    EnumMaps {
        #[arg(long)]
        src: PathBuf,
        #[arg(long)]
        dst: PathBuf,
        #[arg(long, value_enum, default_value_t = MapVariant::Covariant)]
        variant: MapVariant,
    },
    /// Enumerate probe-natural transformations between Dirichlet functors.
    EnumNats {
        #[arg(long)]
        src: PathBuf,
        #[arg(long)]
        dst: PathBuf,
        #[arg(long, default_value_t = 3)]
        probe_max: usize,
    },
    /// Vertical/cartesian factorization of a bundle map.
    Factor {
        /// Bundle map file, JSON {"src", "dst", "base_map", "total_map"}.
        #[arg(long)]
        map: PathBuf,
    },
    /// Check a property of a map or bundle; exit 1 with the counterexample if it fails.
    Check {
        #[arg(long, value_enum)]
        property: Property,
        /// Bundle map file (commutes, cartesian, naturality).
        #[arg(long)]
        map: Option<PathBuf>,
        /// Bundle file (connected-limits).
        #[arg(long)]
        bundle: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        probe_max: usize,
    },
    /// Synthesize the bundle presenting P ∘ D.
    ComposePd {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        dirichlet: PathBuf,
    },
    /// The adjoint sextuple evaluated on a bundle (and a set, if given).
    Adjoints {
        #[command(flatten)]
        bundle: BundleArg,
        #[arg(long)]
        size: Option<usize>,
    },
    /// Exhaustively probe one adjunction of the sextuple.
    AdjunctionCheck {
        #[arg(long, value_enum)]
        pair: PairArg,
        #[arg(long, default_value_t = 2)]
        max_size: usize,
        /// Restrict the bundle-map side to cartesian squares (diagnostic).
        #[arg(long)]
        cartesian_only: bool,
    },
    /// Run the verification suite; one line per check.
    Verify {
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = 3)]
        probe_max: usize,
        /// Run a single check by id.
        #[arg(long)]
        check: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e.source {
                Error::EnumerationCapExceeded { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

/// A core error annotated with the file it came from, when there is one.
struct CliError {
    source: Error,
    context: Option<String>,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.context {
            Some(c) => write!(f, "{c}: {}", self.source),
            None => write!(f, "{}", self.source),
        }
    }
}

impl From<Error> for CliError {
    fn from(source: Error) -> CliError {
        CliError { source, context: None }
    }
}

type CliResult<T> = Result<T, CliError>;

fn invalid(path: &Path, what: &str, reason: impl std::fmt::Display) -> CliError {
    CliError {
        source: Error::Validation { field: what.to_string(), reason: reason.to_string() },
        context: Some(format!("{}", path.display())),
    }
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(path, what, e))?;
    serde_json::from_str(&text).map_err(|e| invalid(path, what, e))
}

fn load_bundle(path: &Path) -> CliResult<Bundle> {
    load_json(path, "bundle file")
}

fn load_map(path: &Path) -> CliResult<BundleMap> {
    load_json(path, "bundle map file")
}

fn print_value(format: Format, value: impl std::fmt::Display) {
    match format {
        Format::Text => println!("{value}"),
        Format::Machine => println!("{}", serde_json::json!({ "value": value.to_string() })),
    }
}

fn pass(format: Format, detail: &str) -> ExitCode {
    match format {
        Format::Text => println!("PASS: {detail}"),
        Format::Machine => println!("{}", serde_json::json!({ "passed": true, "detail": detail })),
    }
    ExitCode::SUCCESS
}

fn fail(format: Format, detail: &str) -> ExitCode {
    match format {
        Format::Text => println!("FAIL: {detail}"),
        Format::Machine => println!("{}", serde_json::json!({ "passed": false, "detail": detail })),
    }
    ExitCode::from(1)
}

fn run(cli: &Cli) -> CliResult<ExitCode> {
    match &cli.command {
        Command::EvalDirichlet { bundle, size, method } => {
            let pi = load_bundle(&bundle.bundle)?;
            let value = match DirMethod::from(*method) {
                DirMethod::Sum => functor::dir_card(&pi, *size),
                m => functor::dir_eval_via(m, &pi, FinSet(*size), cli.cap)?.set.size().into(),
            };
            print_value(cli.format, value);
            Ok(ExitCode::SUCCESS)
        }
        Command::EvalPoly { bundle, size, method } => {
            let pi = load_bundle(&bundle.bundle)?;
            let value = match method {
                PolyMethodArg::Sum => functor::poly_card(&pi, *size),
                PolyMethodArg::Composite => {
                    // Σ_{!_B} ∘ Π_π ∘ Δ_{!_E} applied to X -> 1.
                    let constant = bundle::delta(
                        &FinFunction::terminal(pi.total()),
                        &bundle::bang_down(FinSet(*size)),
                    )?;
                    bundle::sigma(&bundle::pi_along(&pi, &constant)?).size().into()
                }
            };
            print_value(cli.format, value);
            Ok(ExitCode::SUCCESS)
        }
        Command::Series { bundle, kind } => {
            let pi = load_bundle(&bundle.bundle)?;
            let s = series::series_of(&pi, (*kind).into());
            match cli.format {
                Format::Text => println!("{}", s.render()),
                Format::Machine => println!("{}", serde_json::to_string(&s).expect("series serializes")),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::EvalSeries { series, at } => {
            let s: CardinalitySeries = load_json(series, "series file")?;
            print_value(cli.format, s.eval(*at));
            Ok(ExitCode::SUCCESS)
        }
        Command::EnumMaps { src, dst, variant } => {
            let src = load_bundle(src)?;
            let dst = load_bundle(dst)?;
            run_enum_maps(cli, &src, &dst, *variant)
        }
        Command::EnumNats { src, dst, probe_max } => {
            let src = load_bundle(src)?;
            let dst = load_bundle(dst)?;
            let families = equivalence::enumerate_natural_families(&src, &dst, *probe_max, cli.cap)?;
            match cli.format {
                Format::Text => {
                    println!("{}", families.len());
                    for f in &families {
                        println!(
                            "at0 {:?} at1 {:?}",
                            f.component(0).table(),
                            f.component(1).table()
                        );
                    }
                }
                Format::Machine => {
                    let rows: Vec<_> = families
                        .iter()
                        .map(|f| {
                            serde_json::json!({
                                "components": f.components().iter().map(|c| c.table()).collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    println!("{}", serde_json::json!({ "count": families.len(), "families": rows }));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Factor { map } => {
            let m = load_map(map)?;
            let f = bundle::factor_vertical_cartesian(&m);
            match cli.format {
                Format::Text => {
                    println!(
                        "vertical: base {:?} total {:?} into fibers {:?}",
                        f.vertical.base_map().table(),
                        f.vertical.total_map().table(),
                        f.vertical.dst().fiber_sizes()
                    );
                    println!(
                        "cartesian: base {:?} total {:?}",
                        f.cartesian.base_map().table(),
                        f.cartesian.total_map().table()
                    );
                }
                Format::Machine => println!(
                    "{}",
                    serde_json::json!({
                        "vertical": serde_json::to_value(&f.vertical).expect("map serializes"),
                        "cartesian": serde_json::to_value(&f.cartesian).expect("map serializes"),
                    })
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { property, map, bundle, probe_max } => run_check(cli, *property, map.as_deref(), bundle.as_deref(), *probe_max),
        Command::ComposePd { poly, dirichlet } => {
            let p = load_bundle(poly)?;
            let d = load_bundle(dirichlet)?;
            let composite = functor::compose_poly_after_dirichlet(&p, &d, cli.cap)?;
            println!("{}", serde_json::to_string(&composite).expect("bundle serializes"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Adjoints { bundle: b, size } => {
            let pi = load_bundle(&b.bundle)?;
            let (zc_set, inclusion) = bundle::zc(&pi);
            match cli.format {
                Format::Text => {
                    println!("dom = {}", bundle::dom_set(&pi).size());
                    println!("cod = {}", bundle::cod_set(&pi).size());
                    println!("zc = {} (inclusion {:?})", zc_set.size(), inclusion.table());
                    if let Some(x) = size {
                        let x = FinSet(*x);
                        println!("const = {:?}", bundle::const_bundle(x).fiber_sizes());
                        println!("bang_up = {:?}", bundle::bang_up(x).fiber_sizes());
                        println!("bang_down = {:?}", bundle::bang_down(x).fiber_sizes());
                    }
                }
                Format::Machine => {
                    let mut out = serde_json::json!({
                        "dom": bundle::dom_set(&pi).size(),
                        "cod": bundle::cod_set(&pi).size(),
                        "zc": { "size": zc_set.size(), "inclusion": inclusion.table() },
                    });
                    if let Some(x) = size {
                        let x = FinSet(*x);
                        out["const"] = serde_json::json!(bundle::const_bundle(x).fiber_sizes());
                        out["bang_up"] = serde_json::json!(bundle::bang_up(x).fiber_sizes());
                        out["bang_down"] = serde_json::json!(bundle::bang_down(x).fiber_sizes());
                    }
                    println!("{out}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::AdjunctionCheck { pair, max_size, cartesian_only } => {
            let pair = bundle::AdjointPair::from(*pair);
            let report = bundle::check_adjunction_with(pair, *max_size, *cartesian_only, cli.cap)?;
            match report.first_counterexample {
                None => Ok(pass(
                    cli.format,
                    &format!("{}: {} instances, all hom-counts agree", pair.name(), report.instances.len()),
                )),
                Some(i) => {
                    let inst = &report.instances[i];
                    Ok(fail(
                        cli.format,
                        &format!(
                            "{}: fibers {:?}, |X| = {}: hom-counts {} vs {}",
                            pair.name(),
                            inst.bundle.fiber_sizes(),
                            inst.set.size(),
                            inst.left_count,
                            inst.right_count
                        ),
                    ))
                }
            }
        }
        Command::Verify { max_size, probe_max, check } => {
            let cfg = VerifyConfig { max_size: *max_size, probe_max: *probe_max, cap: cli.cap };
            let outcomes = match check {
                Some(id) => vec![verify::run_check(id, &cfg)?],
                None => verify::run_all(&cfg)?,
            };
            let mut all_passed = true;
            for o in &outcomes {
                all_passed &= o.passed;
                match cli.format {
                    Format::Text => {
                        println!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.detail)
                    }
                    Format::Machine => println!(
                        "{}",
                        serde_json::json!({ "id": o.id, "passed": o.passed, "detail": o.detail })
                    ),
                }
            }
            Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn run_enum_maps(cli: &Cli, src: &Bundle, dst: &Bundle, variant: MapVariant) -> CliResult<ExitCode> {
    match variant {
        MapVariant::Covariant | MapVariant::Cartesian => {
            let mut maps = equivalence::enumerate_covariant_maps(src, dst, cli.cap)?;
            if matches!(variant, MapVariant::Cartesian) {
                maps.retain(bundle::is_cartesian);
            }
            match cli.format {
                Format::Text => {
                    println!("{}", maps.len());
                    for m in &maps {
                        println!("base {:?} total {:?}", m.base_map().table(), m.total_map().table());
                    }
                }
                Format::Machine => {
                    let rows: Vec<_> = maps.iter().map(|m| serde_json::to_value(m).expect("map serializes")).collect();
                    println!("{}", serde_json::json!({ "count": maps.len(), "maps": rows }));
                }
            }
        }
        MapVariant::Contravariant => {
            let maps = equivalence::enumerate_contravariant_maps(src, dst, cli.cap)?;
            match cli.format {
                Format::Text => {
                    println!("{}", maps.len());
                    for m in &maps {
                        let backs: Vec<_> = m.fiber_back().iter().map(|f| f.table()).collect();
                        println!("base {:?} fiber_back {:?}", m.base_map().table(), backs);
                    }
                }
                Format::Machine => {
                    let rows: Vec<_> = maps
                        .iter()
                        .map(|m| {
                            serde_json::json!({
                                "base_map": m.base_map().table(),
                                "fiber_back": m.fiber_back().iter().map(|f| f.table()).collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    println!("{}", serde_json::json!({ "count": maps.len(), "maps": rows }));
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_check(
    cli: &Cli,
    property: Property,
    map: Option<&Path>,
    bundle_path: Option<&Path>,
    probe_max: usize,
) -> CliResult<ExitCode> {
    fn need_map(map: Option<&Path>) -> CliResult<&Path> {
        map.ok_or_else(|| {
            CliError::from(Error::Validation {
                field: "--map".to_string(),
                reason: "this property checks a bundle map file".to_string(),
            })
        })
    }
    match property {
        Property::Commutes => {
            // Load the pieces without the constructor so a non-commuting
            // square is a check failure, not an input error.
            let path = need_map(map)?;
            #[derive(serde::Deserialize)]
            struct Raw {
                src: Bundle,
                dst: Bundle,
                base_map: Vec<usize>,
                total_map: Vec<usize>,
            }
            let raw: Raw = load_json(path, "bundle map file")?;
            let base = FinFunction::new(raw.src.base(), raw.dst.base(), raw.base_map)
                .map_err(|e| invalid(path, "base_map", e))?;
            let total = FinFunction::new(raw.src.total(), raw.dst.total(), raw.total_map)
                .map_err(|e| invalid(path, "total_map", e))?;
            match BundleMap::new(raw.src, raw.dst, base, total) {
                Ok(_) => Ok(pass(cli.format, "square commutes")),
                Err(e @ Error::SquareDoesNotCommute { .. }) => Ok(fail(cli.format, &e.to_string())),
                Err(e) => Err(invalid(path, "bundle map file", e)),
            }
        }
        Property::Cartesian => {
            let m = load_map(need_map(map)?)?;
            if bundle::is_cartesian(&m) {
                Ok(pass(cli.format, "map is cartesian (fiberwise bijective, pullback square)"))
            } else {
                let witness = m
                    .src()
                    .base()
                    .elements()
                    .find(|&b| !m.fiber_map(b).map(|f| f.is_bijective()).unwrap_or(false));
                Ok(fail(
                    cli.format,
                    &format!(
                        "fiber over base point {} is not carried bijectively",
                        witness.unwrap_or(0)
                    ),
                ))
            }
        }
        Property::Naturality => {
            let m = load_map(need_map(map)?)?;
            let report = functor::check_naturality(&NatTransform::new(m), probe_max)?;
            match report.failure {
                None => Ok(pass(cli.format, &format!("all naturality squares commute up to probe {probe_max}"))),
                Some(f) => Ok(fail(
                    cli.format,
                    &format!("naturality square at probe {:?} fails at element {}", f.probe.table(), f.element),
                )),
            }
        }
        Property::ConnectedLimits => {
            let path = bundle_path.ok_or_else(|| {
                CliError::from(Error::Validation {
                    field: "--bundle".to_string(),
                    reason: "this property checks a bundle file".to_string(),
                })
            })?;
            let pi = load_bundle(path)?;
            let report = functor::check_preserves_connected_limits(&pi, probe_max, cli.cap)?;
            match report.failure {
                None => Ok(pass(
                    cli.format,
                    &format!("pushouts and coequalizers up to size {probe_max} are preserved"),
                )),
                Some(detail) => Ok(fail(cli.format, &detail)),
            }
        }
    }
}
