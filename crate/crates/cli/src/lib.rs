//! `nct`: JSON front end for the class calculus.
//!
//! Every verb prints an envelope `{"version", "verb", "result"}`. Domain errors
//! exit with 2 and `{"version", "verb", "error": {code, message, context}}`;
//! malformed input exits with 1 and the same shape with code `MalformedInput`.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use nct_core::bundles::{
    self, build_transverse_atlas, check_dimension, commutative_origin_check, dualize_atlas,
    k_monodromy, pointwise_commutative, winding_number, Arc, Base, Chart, ClassPath, LiftSample,
    LiftStrategy, Sample, TransverseAtlas,
};
use nct_core::cocycle::{dual_class, CocycleClass};
use nct_core::dim2::{classify_2d, dual_system_2d, System2D};
use nct_core::finite::{verify_appendix_a, AppendixOptions};
use nct_core::matrix::Matrix;
use nct_core::rational::{self, Rational};
use nct_core::transversality::{
    dualize_pair, dualize_pair_inverse, heisenberg_form, is_transverse, phi_hat_of, phi_of,
    polarize, polarize_exact, TransversePair,
};
use nct_core::{Error, QMatrix};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "nct", version = VERSION, about = "Class-level noncommutative T-duality calculator")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug, Clone, Default)]
struct Io {
    /// Read the input document from FILE instead of standard input.
    #[arg(long = "in", value_name = "FILE", global = true)]
    input: Option<PathBuf>,
    /// Write the output document to FILE instead of standard output.
    #[arg(long = "out", value_name = "FILE", global = true)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct PlanarFlags {
    /// θ for a two-dimensional class (inline alternative to a JSON document).
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// θ̂ on the dual side.
    #[arg(long, allow_hyphen_values = true)]
    mackey: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Dual class σ⁻¹ of a totally skew class.
    Dual {
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<String>,
        #[command(flatten)]
        io: Io,
    },
    /// φ = I + ŜS, its determinant and the transversality verdict.
    TransverseCheck {
        #[command(flatten)]
        flags: PlanarFlags,
        #[command(flatten)]
        io: Io,
    },
    /// Dual transverse pair (ω⊼̄ω̂, ω̂⋊ω).
    PairDual {
        #[command(flatten)]
        flags: PlanarFlags,
        /// Apply the inverse map instead.
        #[arg(long)]
        inverse: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Branch, φ and restricted invariants of a planar pair.
    Classify2d {
        #[command(flatten)]
        flags: PlanarFlags,
        #[command(flatten)]
        io: Io,
    },
    /// Dual planar system for a chosen lift of the torus class.
    Dual2d {
        #[command(flatten)]
        flags: PlanarFlags,
        /// Real lift of the torus class; required since the dual depends on it.
        #[arg(long, allow_hyphen_values = true)]
        lift: Option<String>,
        #[command(flatten)]
        io: Io,
    },
    /// Darboux factorisation Σ = φᵀJφ.
    Polarize {
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[command(flatten)]
        io: Io,
    },
    /// Finite-scale checks for the (ℤ/3)² twisted algebras.
    FiniteVerify {
        /// Multiply the σ boundary table by a non-cocycle phase (negative control).
        #[arg(long)]
        perturb: bool,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[command(flatten)]
        io: Io,
    },
    /// Chart-wise dual of a transverse atlas.
    BundleDual {
        #[arg(long, value_enum)]
        example: Option<ExampleAtlas>,
        #[arg(long, default_value_t = 8)]
        resolution: usize,
        #[command(flatten)]
        io: Io,
    },
    /// Winding, monodromy and commutativity of a class path; optionally an atlas.
    BundleCheck {
        #[arg(long, value_enum)]
        strategy: Option<Strategy>,
        #[command(flatten)]
        io: Io,
    },
    /// Descriptors of the worked bundle examples.
    BundleExamples {
        /// Samples per unit of the twisted Heisenberg atlas.
        #[arg(long, default_value_t = 8)]
        resolution: usize,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ExampleAtlas {
    Twisted,
    Heisenberg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Strategy {
    Axis,
    Hyperbola,
}

impl Verb {
    fn name(&self) -> &'static str {
        match self {
            Verb::Dual { .. } => "dual",
            Verb::TransverseCheck { .. } => "transverse-check",
            Verb::PairDual { .. } => "pair-dual",
            Verb::Classify2d { .. } => "classify2d",
            Verb::Dual2d { .. } => "dual2d",
            Verb::Polarize { .. } => "polarize",
            Verb::FiniteVerify { .. } => "finite-verify",
            Verb::BundleDual { .. } => "bundle-dual",
            Verb::BundleCheck { .. } => "bundle-check",
            Verb::BundleExamples { .. } => "bundle-examples",
        }
    }

    fn io(&self) -> &Io {
        match self {
            Verb::Dual { io, .. }
            | Verb::TransverseCheck { io, .. }
            | Verb::PairDual { io, .. }
            | Verb::Classify2d { io, .. }
            | Verb::Dual2d { io, .. }
            | Verb::Polarize { io, .. }
            | Verb::FiniteVerify { io, .. }
            | Verb::BundleDual { io, .. }
            | Verb::BundleCheck { io, .. }
            | Verb::BundleExamples { io, .. } => io,
        }
    }
}

/// Failure of a verb.
#[derive(Debug)]
enum Failure {
    Malformed(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Malformed(m),
            e => Failure::Domain(e),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn malformed(msg: impl Into<String>) -> Failure {
    Failure::Malformed(msg.into())
}

/// Lazily supplied input document.
struct Input<'a> {
    path: Option<PathBuf>,
    stdin: &'a mut dyn FnMut() -> std::io::Result<String>,
}

impl Input<'_> {
    fn text(&mut self) -> Outcome<String> {
        let text = match &self.path {
            Some(p) => std::fs::read_to_string(p)
                .map_err(|e| malformed(format!("cannot read {}: {e}", p.display())))?,
            None => (self.stdin)().map_err(|e| malformed(format!("cannot read stdin: {e}")))?,
        };
        if text.trim().is_empty() {
            return Err(malformed("no input: pass inline flags, --in FILE or a JSON document on stdin"));
        }
        Ok(text)
    }

    fn parse<T: for<'de> Deserialize<'de>>(&mut self) -> Outcome<T> {
        let text = self.text()?;
        serde_json::from_str(&text).map_err(|e| malformed(format!("invalid input document: {e}")))
    }
}

fn q(s: &str) -> Outcome<Rational> {
    Ok(rational::parse(s)?)
}

// Input documents are parsed into plain shapes first so that validation
// failures are reported as domain errors, not as malformed JSON.

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassDoc {
    #[serde(default)]
    n: Option<usize>,
    sigma: QMatrix,
}

impl ClassDoc {
    fn build(self) -> Outcome<CocycleClass> {
        if let Some(n) = self.n {
            if n != self.sigma.rows() {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: self.sigma.rows(),
                }
                .into());
            }
        }
        Ok(CocycleClass::new(self.sigma)?)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairDoc {
    s: ClassDoc,
    s_hat: ClassDoc,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanarDoc {
    theta: String,
    mackey: String,
    #[serde(default)]
    lift: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PathDoc {
    #[serde(default)]
    n: Option<usize>,
    base: Base,
    samples: Vec<Sample>,
    #[serde(default)]
    thickening: Option<[String; 2]>,
}

impl PathDoc {
    fn build(self) -> Outcome<ClassPath> {
        if let Some(n) = self.n {
            check_dimension(n)?;
        }
        let p = ClassPath::new(self.base, self.samples)?;
        match self.thickening {
            Some([a, b]) => Ok(p.with_thickening(q(&a)?, q(&b)?)?),
            None => Ok(p),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChartDoc {
    name: String,
    arc: Arc,
    omega_lift: Vec<LiftSample>,
    omega_hat: Vec<LiftSample>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AtlasDoc {
    #[serde(default)]
    n: Option<usize>,
    base: Base,
    charts: Vec<ChartDoc>,
}

impl AtlasDoc {
    fn build(self) -> Outcome<TransverseAtlas> {
        if let Some(n) = self.n {
            check_dimension(n)?;
        }
        let charts = self
            .charts
            .into_iter()
            .map(|c| Chart::from_lifts(c.name, c.arc, c.omega_lift, c.omega_hat))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TransverseAtlas::new(self.base, charts)?)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolarizeDoc {
    matrix: Vec<Vec<Value>>,
}

fn planar_pair(flags: &PlanarFlags, input: &mut Input) -> Outcome<(CocycleClass, CocycleClass)> {
    match (&flags.theta, &flags.mackey) {
        (Some(t), Some(m)) => Ok((CocycleClass::theta(q(t)?), CocycleClass::theta(q(m)?))),
        (None, None) => {
            let d: PairDoc = input.parse()?;
            Ok((d.s.build()?, d.s_hat.build()?))
        }
        _ => Err(malformed("--theta and --mackey must be given together")),
    }
}

fn planar_values(flags: &PlanarFlags, lift: Option<&String>, input: &mut Input) -> Outcome<(Rational, Rational, Option<Rational>)> {
    match (&flags.theta, &flags.mackey) {
        (Some(t), Some(m)) => Ok((q(t)?, q(m)?, lift.map(|l| q(l)).transpose()?)),
        (None, None) => {
            let d: PlanarDoc = input.parse()?;
            let lift = match lift {
                Some(l) => Some(q(l)?),
                None => d.lift.as_deref().map(q).transpose()?,
            };
            Ok((q(&d.theta)?, q(&d.mackey)?, lift))
        }
        _ => Err(malformed("--theta and --mackey must be given together")),
    }
}

fn fmt(x: &Rational) -> String {
    rational::format(x)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("core types serialise")
}

fn paths_of(a: &TransverseAtlas) -> Outcome<(Value, Value)> {
    Ok((to_value(&a.torus_path()?), to_value(&a.mackey_path()?)))
}

fn execute(verb: &Verb, input: &mut Input) -> Outcome<Value> {
    match verb {
        Verb::Dual { theta, .. } => {
            let c = match theta {
                Some(t) => CocycleClass::theta(q(t)?),
                None => input.parse::<ClassDoc>()?.build()?,
            };
            Ok(json!({ "class": to_value(&dual_class(&c)?) }))
        }
        Verb::TransverseCheck { flags, .. } => {
            let (s, s_hat) = planar_pair(flags, input)?;
            let phi = phi_of(&s, &s_hat)?;
            let phi_hat = phi_hat_of(&s, &s_hat)?;
            let det = phi.det()?;
            Ok(json!({
                "transverse": is_transverse(&s, &s_hat),
                "phi": to_value(&phi),
                "phi_hat": to_value(&phi_hat),
                "phi_det": fmt(&det),
            }))
        }
        Verb::PairDual { flags, inverse, .. } => {
            let (s, s_hat) = planar_pair(flags, input)?;
            let p = TransversePair::new(s, s_hat)?;
            let d = if *inverse { dualize_pair_inverse(&p)? } else { dualize_pair(&p)? };
            Ok(json!({ "pair": to_value(&d), "phi": to_value(d.phi()) }))
        }
        Verb::Classify2d { flags, .. } => {
            let (t, m, _) = planar_values(flags, None, input)?;
            Ok(to_value(&classify_2d(&t, &m)))
        }
        Verb::Dual2d { flags, lift, .. } => {
            let (t, m, lift) = planar_values(flags, lift.as_ref(), input)?;
            let lift = lift.ok_or_else(|| malformed("dual2d needs --lift: the dual depends on the chosen lift"))?;
            let sys = System2D::new(rational::frac(&t), m);
            Ok(to_value(&dual_system_2d(&sys, &lift)?))
        }
        Verb::Polarize { tolerance, .. } => {
            let d: PolarizeDoc = input.parse()?;
            polarize_doc(d, *tolerance)
        }
        Verb::FiniteVerify {
            perturb,
            seed,
            samples,
            ..
        } => {
            let report = verify_appendix_a(&AppendixOptions {
                perturb_step2: *perturb,
                seed: *seed,
                samples: *samples,
            });
            Ok(to_value(&report))
        }
        Verb::BundleDual {
            example,
            resolution,
            ..
        } => {
            let atlas = match example {
                Some(ExampleAtlas::Twisted) => bundles::twisted_heisenberg_atlas_with(*resolution)?,
                Some(ExampleAtlas::Heisenberg) => bundles::heisenberg_descriptor().commutative_atlas,
                None => input.parse::<AtlasDoc>()?.build()?,
            };
            let dual = dualize_atlas(&atlas)?;
            let (torus, mackey) = paths_of(&dual)?;
            Ok(json!({ "atlas": to_value(&dual), "torus_path": torus, "mackey_path": mackey }))
        }
        Verb::BundleCheck { strategy, .. } => {
            let p = input.parse::<PathDoc>()?.build()?;
            let circle = p.base() == Base::Circle;
            let winding = if circle { Some(winding_number(&p)?) } else { None };
            let mut out = json!({
                "base": to_value(&p.base()),
                "winding": winding,
                "commutative_origin": if circle { Some(commutative_origin_check(&p)?) } else { None },
                "monodromy": winding.map(|w| to_value(&k_monodromy(w))),
                "pointwise_commutative": pointwise_commutative(&p),
            });
            if let Some(s) = strategy {
                let s = match s {
                    Strategy::Axis => LiftStrategy::AxisLift,
                    Strategy::Hyperbola => LiftStrategy::HyperbolaLift,
                };
                out["atlas"] = to_value(&build_transverse_atlas(&p, s)?);
            }
            Ok(out)
        }
        Verb::BundleExamples { resolution, .. } => {
            let e = bundles::example_bundles();
            Ok(json!({
                "heisenberg": to_value(&bundles::heisenberg_descriptor()),
                "twisted_heisenberg": to_value(&bundles::twisted_heisenberg_atlas_with(*resolution)?),
                "a1": to_value(&e.a1),
                "a2": to_value(&e.a2),
            }))
        }
    }
}

fn polarize_doc(d: PolarizeDoc, tolerance: f64) -> Outcome<Value> {
    let all_strings = d.matrix.iter().flatten().all(Value::is_string);
    if all_strings {
        let rows = d
            .matrix
            .iter()
            .map(|r| r.iter().map(|v| q(v.as_str().expect("checked"))).collect())
            .collect::<Outcome<Vec<Vec<Rational>>>>()?;
        let v = QMatrix::from_rows(rows)?;
        let phi = polarize_exact(&v)?;
        return Ok(json!({ "exact": true, "phi": to_value(&phi) }));
    }
    let rows = d
        .matrix
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| v.as_f64().ok_or_else(|| malformed("matrix entries must all be numbers or all be \"p/q\" strings")))
                .collect()
        })
        .collect::<Outcome<Vec<Vec<f64>>>>()?;
    let v = Matrix::from_rows(rows)?;
    let phi = polarize(&v, tolerance)?;
    let j = heisenberg_form(v.rows() / 2).to_f64();
    let residual = phi.transpose().try_mul(&j)?.try_mul(&phi)?.try_sub(&v)?.max_abs();
    Ok(json!({ "exact": false, "phi": phi.to_rows(), "residual": residual }))
}

fn context(e: &Error) -> Value {
    match e {
        Error::DimensionMismatch { expected, found } => json!({ "expected": expected, "found": found }),
        Error::BadLift { lift, class } => json!({ "lift": lift, "class": class }),
        Error::ShapeMismatch { k, n } => json!({ "k": k, "n": n }),
        Error::NotScalar { deviation } | Error::PhaseExtraction { deviation } => {
            json!({ "deviation": deviation })
        }
        Error::AmbiguousLift { from, to } | Error::NoLift { from, to } => {
            json!({ "from": from, "to": to })
        }
        Error::UnsupportedDimension(n) => json!({ "n": n }),
        _ => json!({}),
    }
}

fn envelope(verb: &str, key: &str, body: Value) -> String {
    let mut s = serde_json::to_string_pretty(&json!({ "version": VERSION, "verb": verb, key: body }))
        .expect("json values serialise");
    s.push('\n');
    s
}

/// Runs one invocation. `stdin` is consulted only when the verb needs a
/// document and neither inline flags nor `--in` supply one.
/// Returns the exit code and the text destined for standard output.
pub fn run_with_stdin<I, S>(argv: I, stdin: &mut dyn FnMut() -> std::io::Result<String>) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, e.to_string()),
                _ => (
                    1,
                    envelope(
                        "",
                        "error",
                        json!({ "code": "MalformedInput", "message": e.to_string().trim(), "context": {} }),
                    ),
                ),
            };
        }
    };
    let verb = &cli.verb;
    let io = verb.io();
    let mut input = Input {
        path: io.input.clone(),
        stdin,
    };
    let (code, text) = match execute(verb, &mut input) {
        Ok(v) => (0, envelope(verb.name(), "result", v)),
        Err(Failure::Malformed(m)) => (
            1,
            envelope(
                verb.name(),
                "error",
                json!({ "code": "MalformedInput", "message": m, "context": {} }),
            ),
        ),
        Err(Failure::Domain(e)) => (
            2,
            envelope(
                verb.name(),
                "error",
                json!({ "code": e.code(), "message": e.to_string(), "context": context(&e) }),
            ),
        ),
    };
    if code == 0 {
        if let Some(out) = &io.output {
            return match std::fs::write(out, &text) {
                Ok(()) => (0, String::new()),
                Err(e) => (
                    1,
                    envelope(
                        verb.name(),
                        "error",
                        json!({ "code": "MalformedInput", "message": format!("cannot write {}: {e}", out.display()), "context": {} }),
                    ),
                ),
            };
        }
    }
    (code, text)
}

/// [`run_with_stdin`] reading the process's standard input.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let mut read = || {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    };
    run_with_stdin(argv, &mut read)
}
