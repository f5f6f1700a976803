//! Obstruction functions over `[0, 1]` and `S¹`, transverse atlases and the
//! chart-wise duality.
//!
//! Everything here is two-dimensional: a class in H²(ℤ², U(1)) is one number
//! mod 1 and a lift to H²(ℝ², U(1)) is one rational.

mod examples;

pub use examples::{
    example_bundles, heisenberg_descriptor, twisted_heisenberg_atlas,
    twisted_heisenberg_atlas_with, twisted_heisenberg_path, BundleDescriptor, ExampleBundles,
    Gluing, HeisenbergDescriptor,
};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cocycle::CocycleClass;
use crate::dim2::transverse_locus;
use crate::error::{Error, Result};
use crate::rational::{self, centered, frac, int, q, Rational};
use crate::transversality::{dualize_pair, TransversePair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    Interval,
    Circle,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sample {
    #[serde(with = "rational::serde_q")]
    pub t: Rational,
    #[serde(with = "rational::serde_q")]
    pub value: Rational,
}

impl Sample {
    pub fn new(t: Rational, value: Rational) -> Self {
        Self { t, value }
    }
}

/// A sampled map `B → 𝕋`, interpolated in the nearest lift on each segment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassPath {
    base: Base,
    samples: Vec<Sample>,
    /// A parameter range over which the path is constant by construction.
    #[serde(skip_serializing_if = "Option::is_none")]
    thickening: Option<[String; 2]>,
}

#[derive(Deserialize)]
struct ClassPathRaw {
    base: Base,
    samples: Vec<Sample>,
    #[serde(default)]
    thickening: Option<[String; 2]>,
}

impl<'de> Deserialize<'de> for ClassPath {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ClassPathRaw::deserialize(d)?;
        let mut p = ClassPath::new(raw.base, raw.samples).map_err(D::Error::custom)?;
        if let Some([a, b]) = raw.thickening {
            let a = rational::parse(&a).map_err(D::Error::custom)?;
            let b = rational::parse(&b).map_err(D::Error::custom)?;
            p = p.with_thickening(a, b).map_err(D::Error::custom)?;
        }
        Ok(p)
    }
}

impl ClassPath {
    /// Values are reduced mod 1. Requires `t` strictly increasing from 0 to 1,
    /// matching endpoint classes on a circle, and no segment jump of exactly 1/2.
    pub fn new(base: Base, samples: Vec<Sample>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidPath("need at least two samples".into()));
        }
        if !samples[0].t.is_zero() || !samples[samples.len() - 1].t.is_one() {
            return Err(Error::InvalidPath("samples must start at t=0 and end at t=1".into()));
        }
        if let Some(w) = samples.windows(2).find(|w| w[0].t >= w[1].t) {
            return Err(Error::InvalidPath(format!(
                "t not strictly increasing at {}",
                rational::format(&w[1].t)
            )));
        }
        let samples: Vec<Sample> = samples
            .into_iter()
            .map(|s| Sample::new(s.t, frac(&s.value)))
            .collect();
        if base == Base::Circle && samples[0].value != samples[samples.len() - 1].value {
            return Err(Error::InvalidPath(
                "circle path must have equal classes at t=0 and t=1".into(),
            ));
        }
        for w in samples.windows(2) {
            if centered(&(&w[1].value - &w[0].value)) == q(-1, 2) {
                return Err(Error::AmbiguousLift {
                    from: rational::format(&w[0].t),
                    to: rational::format(&w[1].t),
                });
            }
        }
        Ok(Self {
            base,
            samples,
            thickening: None,
        })
    }

    /// Builds from `(t, value)` pairs.
    pub fn from_pairs(base: Base, pairs: &[(Rational, Rational)]) -> Result<Self> {
        Self::new(
            base,
            pairs
                .iter()
                .map(|(t, v)| Sample::new(t.clone(), v.clone()))
                .collect(),
        )
    }

    /// Marks `[a, b]` as a thickened point; the path must be constant there.
    pub fn with_thickening(mut self, a: Rational, b: Rational) -> Result<Self> {
        let inside: Vec<&Sample> = self.samples.iter().filter(|s| s.t >= a && s.t <= b).collect();
        if a >= b || inside.is_empty() || inside.iter().any(|s| s.value != inside[0].value) {
            return Err(Error::InvalidPath("thickening must be a constant segment".into()));
        }
        self.thickening = Some([rational::format(&a), rational::format(&b)]);
        Ok(self)
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn thickening(&self) -> Option<(Rational, Rational)> {
        let [a, b] = self.thickening.as_ref()?;
        Some((rational::parse(a).ok()?, rational::parse(b).ok()?))
    }

    /// Lift increment of each segment, in `(−1/2, 1/2)`.
    pub fn increments(&self) -> Vec<Rational> {
        self.samples
            .windows(2)
            .map(|w| centered(&(&w[1].value - &w[0].value)))
            .collect()
    }

    /// The continuous real lift starting at `value(0) ∈ [0, 1)`.
    pub fn lift(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.samples.len());
        let mut acc = self.samples[0].value.clone();
        out.push(acc.clone());
        for inc in self.increments() {
            acc += inc;
            out.push(acc.clone());
        }
        out
    }

    /// `t ↦ 1 − t`.
    pub fn reversed(&self) -> Self {
        let samples = self
            .samples
            .iter()
            .rev()
            .map(|s| Sample::new(Rational::one() - &s.t, s.value.clone()))
            .collect();
        Self::new(self.base, samples).expect("reversal preserves validity")
    }

    /// Runs `self` on `[0, 1/2]` and `other` on `[1/2, 1]`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let end = &self.samples[self.samples.len() - 1].value;
        if *end != other.samples[0].value {
            return Err(Error::InvalidPath("paths do not meet".into()));
        }
        let half = q(1, 2);
        let mut samples: Vec<Sample> = self
            .samples
            .iter()
            .map(|s| Sample::new(&s.t * &half, s.value.clone()))
            .collect();
        samples.extend(
            other.samples[1..]
                .iter()
                .map(|s| Sample::new(&half + &s.t * &half, s.value.clone())),
        );
        let base = if self.base == Base::Circle && other.base == Base::Circle {
            Base::Circle
        } else {
            Base::Interval
        };
        Self::new(base, samples)
    }

    /// Inserts the midpoint of every segment.
    pub fn subdivided(&self) -> Self {
        let lift = self.lift();
        let mut samples = Vec::with_capacity(2 * self.samples.len());
        for i in 0..self.samples.len() - 1 {
            samples.push(self.samples[i].clone());
            let t = (&self.samples[i].t + &self.samples[i + 1].t) / int(2);
            let v = (&lift[i] + &lift[i + 1]) / int(2);
            samples.push(Sample::new(t, v));
        }
        samples.push(self.samples[self.samples.len() - 1].clone());
        let mut p = Self::new(self.base, samples).expect("halving keeps jumps below 1/2");
        p.thickening = self.thickening.clone();
        p
    }
}

/// Total lift increment around a circle.
pub fn winding_number(p: &ClassPath) -> Result<i64> {
    if p.base != Base::Circle {
        return Err(Error::InvalidPath("winding number needs a circle path".into()));
    }
    let total: Rational = p.increments().iter().sum();
    rational::to_i64(&total).ok_or_else(|| Error::InvalidPath("non-integral winding".into()))
}

pub fn pointwise_commutative(theta_hat: &ClassPath) -> bool {
    theta_hat.samples.iter().all(|s| s.value.is_zero())
}

/// An arc `(start, end)` of the base. On a circle the parameter is unwrapped,
/// so `start < end ≤ start + 1` with `start ∈ [0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arc {
    #[serde(with = "rational::serde_q")]
    pub start: Rational,
    #[serde(with = "rational::serde_q")]
    pub end: Rational,
}

impl Arc {
    pub fn new(start: Rational, end: Rational) -> Self {
        Self { start, end }
    }

    fn validate(&self, base: Base) -> Result<()> {
        let ok = self.start < self.end
            && match base {
                Base::Interval => self.start >= Rational::zero() && self.end <= Rational::one(),
                Base::Circle => {
                    self.start >= Rational::zero()
                        && self.start < Rational::one()
                        && self.end <= &self.start + Rational::one()
                }
            };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidAtlas(format!(
                "bad arc ({}, {})",
                rational::format(&self.start),
                rational::format(&self.end)
            )))
        }
    }

    /// The arc as pieces of `[0, 1]`. A piece touching 0 or 1 is relatively open there.
    pub fn pieces_on_unit_interval(&self) -> Vec<(Rational, Rational)> {
        let one = Rational::one();
        if self.end <= one {
            vec![(self.start.clone(), self.end.clone())]
        } else {
            vec![(Rational::zero(), &self.end - &one), (self.start.clone(), one)]
        }
    }

    fn contains_closure(&self, t: &Rational) -> bool {
        *t >= self.start && *t <= self.end
    }
}

/// Whether the interiors cover the base. On an interval, arcs ending at 0 or 1
/// count as relatively open there.
pub fn arcs_cover(base: Base, arcs: &[Arc]) -> bool {
    let zero = Rational::zero();
    let one = Rational::one();
    let mut pieces: Vec<(Rational, Rational, bool, bool)> = Vec::new();
    for a in arcs {
        match base {
            Base::Interval => {
                pieces.push((a.start.clone(), a.end.clone(), a.start == zero, a.end == one))
            }
            Base::Circle => {
                for shift in [-1i64, 0, 1] {
                    let s = int(shift);
                    pieces.push((&a.start + &s, &a.end + &s, false, false));
                }
            }
        }
    }
    let inside = |x: &Rational| {
        pieces.iter().any(|(s, e, cs, ce)| {
            (x > s || (*cs && x == s)) && (x < e || (*ce && x == e))
        })
    };
    let mut marks: Vec<Rational> = vec![zero.clone(), one.clone()];
    for (s, e, _, _) in &pieces {
        for x in [s, e] {
            if *x >= zero && *x <= one {
                marks.push(x.clone());
            }
        }
    }
    marks.sort();
    marks.dedup();
    let mids: Vec<Rational> = marks.windows(2).map(|w| (&w[0] + &w[1]) / int(2)).collect();
    marks.iter().chain(mids.iter()).all(inside)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LiftSample {
    #[serde(with = "rational::serde_q")]
    pub t: Rational,
    #[serde(with = "rational::serde_q")]
    pub value: Rational,
}

/// An ω-trivialising chart: real lifts `θ(t)` on the torus side and `θ̂(t)` on
/// the Mackey side, pointwise transverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub name: String,
    pub arc: Arc,
    omega_lift: Vec<LiftSample>,
    omega_hat: Vec<LiftSample>,
}

#[derive(Deserialize)]
struct ChartRaw {
    name: String,
    arc: Arc,
    omega_lift: Vec<LiftSample>,
    omega_hat: Vec<LiftSample>,
}

impl<'de> Deserialize<'de> for Chart {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ChartRaw::deserialize(d)?;
        Chart::from_lifts(r.name, r.arc, r.omega_lift, r.omega_hat).map_err(serde::de::Error::custom)
    }
}

impl Chart {
    /// `points` are `(t, θ, θ̂)` with `t` in the closure of the arc, increasing.
    pub fn new(name: impl Into<String>, arc: Arc, points: Vec<(Rational, Rational, Rational)>) -> Result<Self> {
        let name = name.into();
        if points.is_empty() {
            return Err(Error::InvalidAtlas(format!("chart {name} has no samples")));
        }
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidAtlas(format!("chart {name}: t not increasing")));
            }
        }
        for (t, th, thh) in &points {
            if !arc.contains_closure(t) {
                return Err(Error::InvalidAtlas(format!(
                    "chart {name}: sample {} outside its arc",
                    rational::format(t)
                )));
            }
            if !transverse_locus(th, thh) {
                return Err(Error::InvalidAtlas(format!(
                    "chart {name}: not transverse at t={} (theta={}, theta_hat={})",
                    rational::format(t),
                    rational::format(th),
                    rational::format(thh)
                )));
            }
        }
        let (omega_lift, omega_hat) = points
            .into_iter()
            .map(|(t, a, b)| {
                (
                    LiftSample {
                        t: t.clone(),
                        value: a,
                    },
                    LiftSample { t, value: b },
                )
            })
            .unzip();
        Ok(Self {
            name,
            arc,
            omega_lift,
            omega_hat,
        })
    }

    /// Like [`Chart::new`], from the two lift paths; their `t` values must agree.
    pub fn from_lifts(
        name: impl Into<String>,
        arc: Arc,
        omega_lift: Vec<LiftSample>,
        omega_hat: Vec<LiftSample>,
    ) -> Result<Self> {
        let name = name.into();
        if omega_lift.len() != omega_hat.len()
            || omega_lift.iter().zip(&omega_hat).any(|(a, b)| a.t != b.t)
        {
            return Err(Error::InvalidAtlas(format!(
                "chart {name}: omega_lift and omega_hat are sampled at different t"
            )));
        }
        let pts = omega_lift
            .into_iter()
            .zip(omega_hat)
            .map(|(a, b)| (a.t, a.value, b.value))
            .collect();
        Chart::new(name, arc, pts)
    }

    pub fn omega_lift(&self) -> &[LiftSample] {
        &self.omega_lift
    }

    pub fn omega_hat(&self) -> &[LiftSample] {
        &self.omega_hat
    }

    /// `(t, θ, θ̂)` triples.
    pub fn points(&self) -> impl Iterator<Item = (&Rational, &Rational, &Rational)> {
        self.omega_lift
            .iter()
            .zip(&self.omega_hat)
            .map(|(a, b)| (&a.t, &a.value, &b.value))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransverseAtlas {
    base: Base,
    charts: Vec<Chart>,
}

#[derive(Deserialize)]
struct AtlasRaw {
    base: Base,
    charts: Vec<Chart>,
}

impl<'de> Deserialize<'de> for TransverseAtlas {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = AtlasRaw::deserialize(d)?;
        TransverseAtlas::new(r.base, r.charts).map_err(serde::de::Error::custom)
    }
}

impl TransverseAtlas {
    pub fn new(base: Base, charts: Vec<Chart>) -> Result<Self> {
        for c in &charts {
            c.arc.validate(base)?;
        }
        let arcs: Vec<Arc> = charts.iter().map(|c| c.arc.clone()).collect();
        if !arcs_cover(base, &arcs) {
            return Err(Error::InvalidAtlas("chart interiors do not cover the base".into()));
        }
        Ok(Self { base, charts })
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    fn merged(&self, pick: impl Fn(&Chart) -> &[LiftSample]) -> Result<ClassPath> {
        let mut pts: Vec<(Rational, Rational)> = Vec::new();
        for c in &self.charts {
            for s in pick(c) {
                let t = match self.base {
                    Base::Interval => s.t.clone(),
                    Base::Circle => frac(&s.t),
                };
                pts.push((t.clone(), frac(&s.value)));
                if self.base == Base::Circle && t.is_zero() {
                    pts.push((Rational::one(), frac(&s.value)));
                }
            }
        }
        pts.sort();
        pts.dedup();
        if let Some(w) = pts.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidAtlas(format!(
                "charts disagree at t={}",
                rational::format(&w[0].0)
            )));
        }
        ClassPath::from_pairs(self.base, &pts)
    }

    /// The torus-side obstruction function `θ mod 1`, assembled from all charts.
    pub fn torus_path(&self) -> Result<ClassPath> {
        self.merged(Chart::omega_lift)
    }

    /// The Mackey side restricted to the dual lattice, `θ̂ mod 1`.
    pub fn mackey_path(&self) -> Result<ClassPath> {
        self.merged(Chart::omega_hat)
    }
}

/// One dual chart sample `(θ, θ̂) ↦ ([ω̂⋊ω], [ω⊼̄ω̂])`, via the pair duality.
fn dual_point(theta: &Rational, theta_hat: &Rational) -> Result<(Rational, Rational)> {
    let pair = TransversePair::new(
        CocycleClass::theta(theta.clone()),
        CocycleClass::theta(theta_hat.clone()),
    )?;
    let d = dualize_pair(&pair)?;
    Ok((d.s_hat().theta_param(), d.s().theta_param()))
}

/// Chart-wise duality. The new torus side is the old `ω̂⋊ω` and the new
/// Mackey side is `ω⊼̄ω̂`; the map is an involution.
pub fn dualize_atlas(a: &TransverseAtlas) -> Result<TransverseAtlas> {
    let charts = a
        .charts
        .iter()
        .map(|c| {
            let pts = c
                .points()
                .map(|(t, th, thh)| {
                    let (nt, nh) = dual_point(th, thh)?;
                    Ok((t.clone(), nt, nh))
                })
                .collect::<Result<Vec<_>>>()?;
            Chart::new(c.name.clone(), c.arc.clone(), pts)
        })
        .collect::<Result<Vec<_>>>()?;
    TransverseAtlas::new(a.base, charts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftStrategy {
    /// `θ̂ ≡ 0`; always transverse.
    AxisLift,
    /// `θ ∈ [1, 2]` and `θ̂ = 2/θ`.
    HyperbolaLift,
}

/// Greedy chart decomposition. Each chart is a run of consecutive segments;
/// neighbours overlap in one segment.
pub fn build_transverse_atlas(p: &ClassPath, strategy: LiftStrategy) -> Result<TransverseAtlas> {
    let mut path = p.clone();
    if path.base == Base::Circle {
        while path.samples.len() < 5 {
            path = path.subdivided();
        }
    }
    let segs = path.samples.len() - 1;
    let lift = path.lift();
    let (cap, max_len) = match path.base {
        Base::Interval => (segs, segs),
        Base::Circle => (segs + 1, segs - 1),
    };
    let winding = &lift[segs] - &lift[0];
    // unwrapped sample i ∈ [0, cap]
    let t_at = |i: usize| -> Rational {
        if i <= segs {
            path.samples[i].t.clone()
        } else {
            &path.samples[i - segs].t + Rational::one()
        }
    };
    let l_at = |i: usize| -> Rational {
        if i <= segs {
            lift[i].clone()
        } else {
            &lift[i - segs] + &winding
        }
    };
    let fits = |a: usize, b: usize| -> bool {
        match strategy {
            LiftStrategy::AxisLift => true,
            LiftStrategy::HyperbolaLift => {
                let vals: Vec<Rational> = (a..=b).map(l_at).collect();
                let lo = vals.iter().min().expect("nonempty").floor();
                let hi = vals.iter().max().expect("nonempty");
                *hi <= lo + Rational::one()
            }
        }
    };

    let mut charts = Vec::new();
    let mut a = 0usize;
    loop {
        let mut b = a + 1;
        while b < cap && b + 1 - a <= max_len && fits(a, b + 1) {
            b += 1;
        }
        if b < cap && b < a + 2 || !fits(a, b) {
            let end = (a + 2).min(cap);
            return Err(Error::NoLift {
                from: rational::format(&frac_base(path.base, &t_at(a))),
                to: rational::format(&frac_base(path.base, &t_at(end))),
            });
        }
        let vals: Vec<Rational> = (a..=b).map(l_at).collect();
        let shift = match strategy {
            LiftStrategy::AxisLift => -vals.iter().min().expect("nonempty").floor(),
            LiftStrategy::HyperbolaLift => {
                Rational::one() - vals.iter().min().expect("nonempty").floor()
            }
        };
        let pts = (a..=b)
            .map(|i| {
                let th = l_at(i) + &shift;
                let thh = match strategy {
                    LiftStrategy::AxisLift => Rational::zero(),
                    LiftStrategy::HyperbolaLift => int(2) / &th,
                };
                (t_at(i), th, thh)
            })
            .collect();
        let arc = Arc::new(t_at(a), t_at(b));
        charts.push(Chart::new(format!("chart-{}", charts.len()), arc, pts)?);
        if b == cap {
            break;
        }
        a = b - 1;
    }
    TransverseAtlas::new(path.base, charts)
}

fn frac_base(base: Base, t: &Rational) -> Rational {
    match base {
        Base::Circle if *t > Rational::one() => t - Rational::one(),
        _ => t.clone(),
    }
}

/// Bundles here are two-dimensional only.
pub fn check_dimension(n: usize) -> Result<()> {
    if n == 2 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

/// An integral `2 × 2` matrix of determinant one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonodromyMatrix {
    pub m: [[i64; 2]; 2],
}

impl MonodromyMatrix {
    pub const IDENTITY: Self = Self { m: [[1, 0], [0, 1]] };

    pub fn new(m: [[i64; 2]; 2]) -> Result<Self> {
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 1 {
            return Err(Error::NotLatticeAutomorphism("determinant is not 1".into()));
        }
        Ok(Self { m })
    }

    pub fn mul(&self, o: &Self) -> Self {
        let a = &self.m;
        let b = &o.m;
        Self {
            m: [
                [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
                [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
            ],
        }
    }

    pub fn inverse(&self) -> Self {
        let a = &self.m;
        Self {
            m: [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]],
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

/// The `K₀` gluing matrix `[[1, 1], [0, 1]]` raised to the power `w`.
pub fn k_monodromy(w: i64) -> MonodromyMatrix {
    let base = MonodromyMatrix { m: [[1, 1], [0, 1]] };
    let step = if w >= 0 { base } else { base.inverse() };
    (0..w.unsigned_abs()).fold(MonodromyMatrix::IDENTITY, |acc, _| acc.mul(&step))
}

/// Null-homotopy of the obstruction function, the criterion for the bundle
/// to arise as the dual of a commutative polarisable pair.
pub fn commutative_origin_check(theta: &ClassPath) -> Result<bool> {
    Ok(winding_number(theta)? == 0)
}

#[cfg(test)]
mod tests;
