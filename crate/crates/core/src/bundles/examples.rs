use num_traits::{One, Zero};
use serde::Serialize;

use super::{
    build_transverse_atlas, winding_number, Arc, Base, Chart, ClassPath, LiftStrategy,
    TransverseAtlas,
};
use crate::error::{Error, Result};
use crate::rational::{self, int, q, Rational};

/// The Heisenberg bundle over S¹: obstruction `θ₀(s) = s`, dual side `θ̂₀ ≡ 0`,
/// and the commutative-side atlas (`θ ≡ 0`, `θ̂` the lift of `s`).
#[derive(Clone, Debug, Serialize)]
pub struct HeisenbergDescriptor {
    pub theta: ClassPath,
    pub theta_hat: ClassPath,
    pub commutative_atlas: TransverseAtlas,
}

pub fn heisenberg_descriptor() -> HeisenbergDescriptor {
    let ts: Vec<Rational> = (0..=4).map(|j| q(j, 4)).collect();
    let theta = ClassPath::from_pairs(
        Base::Circle,
        &ts.iter().map(|t| (t.clone(), t.clone())).collect::<Vec<_>>(),
    )
    .expect("valid");
    let theta_hat = ClassPath::from_pairs(
        Base::Circle,
        &ts.iter().map(|t| (t.clone(), Rational::zero())).collect::<Vec<_>>(),
    )
    .expect("valid");
    let chart = |name: &str, from: i64, to: i64| {
        let pts = (from..=to)
            .map(|j| (q(j, 4), Rational::zero(), q(j, 4)))
            .collect();
        Chart::new(name, Arc::new(q(from, 4), q(to, 4)), pts).expect("axis is transverse")
    };
    let commutative_atlas =
        TransverseAtlas::new(Base::Circle, vec![chart("U", 0, 3), chart("V", 2, 5)]).expect("covers");
    HeisenbergDescriptor {
        theta,
        theta_hat,
        commutative_atlas,
    }
}

// S^⊓ is parametrised by u ∈ [0, 1]: s = 2u on [0, 1/2], then the thickened
// point on [1/2, 1], glued back to s = 0 at u = 1.
fn check_resolution(n: usize) -> Result<i64> {
    if n < 8 || !n.is_multiple_of(4) {
        return Err(Error::InvalidPath(format!(
            "resolution must be a multiple of 4 and at least 8, got {n}"
        )));
    }
    Ok(n as i64)
}

/// `θ₁` over S^⊓, with the thickening flagged.
pub fn twisted_heisenberg_path(resolution: usize) -> Result<ClassPath> {
    let n = check_resolution(resolution)?;
    let pairs: Vec<(Rational, Rational)> = (0..=n)
        .map(|j| {
            let u = q(j, n);
            let v = if 2 * j <= n { int(2) * &u } else { Rational::zero() };
            (u, v)
        })
        .collect();
    ClassPath::from_pairs(Base::Circle, &pairs)?.with_thickening(q(1, 2), Rational::one())
}

pub fn twisted_heisenberg_atlas() -> TransverseAtlas {
    twisted_heisenberg_atlas_with(1000).expect("default resolution is valid")
}

/// The two charts `U`, `V` with `θ ∈ [1, 2]` and `θ̂ = 2/θ`.
pub fn twisted_heisenberg_atlas_with(resolution: usize) -> Result<TransverseAtlas> {
    let n = check_resolution(resolution)?;
    let two = int(2);
    let one = Rational::one();
    // U = (0, 3/4): ω_{1+s} on the segment, ω_2 on the thickening.
    let u_pts = (0..=3 * n / 4)
        .map(|j| {
            let u = q(j, n);
            let th = if 2 * j <= n { &one + &two * &u } else { two.clone() };
            let thh = &two / &th;
            (u, th, thh)
        })
        .collect();
    // V = (1/2, 5/4): ω_1 on the thickening, ω_{1+s} past the gluing point.
    let v_pts = (n / 2..=5 * n / 4)
        .map(|j| {
            let u = q(j, n);
            let th = if j <= n { one.clone() } else { &one + &two * (&u - &one) };
            let thh = &two / &th;
            (u, th, thh)
        })
        .collect();
    TransverseAtlas::new(
        Base::Circle,
        vec![
            Chart::new("U", Arc::new(Rational::zero(), q(3, 4)), u_pts)?,
            Chart::new("V", Arc::new(q(1, 2), q(5, 4)), v_pts)?,
        ],
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gluing {
    /// Equal classes at the ends; fibres identified canonically.
    Canonical,
    /// Morita equivalent but non-isomorphic end fibres.
    StableIsomorphism { from: String, to: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartRecord {
    pub name: String,
    /// Pieces of `[0, 1]`; a piece touching 0 or 1 is relatively open there.
    pub pieces: Vec<Arc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trivialised_by: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BundleDescriptor {
    pub name: String,
    pub path: ClassPath,
    pub endpoint_classes: [String; 2],
    pub gluing: Gluing,
    pub charts: Vec<ChartRecord>,
    pub atlas: TransverseAtlas,
    pub locally_omega_trivial: bool,
    pub globally_omega_trivial: bool,
}

impl BundleDescriptor {
    pub fn chart(&self, name: &str) -> Option<&ChartRecord> {
        self.charts.iter().find(|c| c.name == name)
    }

    pub fn endpoint_values(&self) -> (Rational, Rational) {
        let s = self.path.samples();
        (s[0].value.clone(), s[s.len() - 1].value.clone())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleBundles {
    pub a1: BundleDescriptor,
    pub a2: BundleDescriptor,
}

fn a1() -> BundleDescriptor {
    // 0 on [0,1/4], once around 𝕋 on [1/4,3/4], back at 0 on [3/4,1].
    let pairs: Vec<(Rational, Rational)> = (0..=12)
        .map(|j: i64| (q(j, 12), q((j - 3).clamp(0, 6), 6)))
        .collect();
    let path = ClassPath::from_pairs(Base::Circle, &pairs).expect("valid");
    let atlas = build_transverse_atlas(&path, LiftStrategy::AxisLift).expect("axis always lifts");
    let charts = atlas
        .charts()
        .iter()
        .map(|c| ChartRecord {
            name: c.name.clone(),
            pieces: c.arc.pieces_on_unit_interval().into_iter().map(|(a, b)| Arc::new(a, b)).collect(),
            trivialised_by: None,
        })
        .collect();
    let globally = winding_number(&path).expect("circle") == 0;
    let (v0, v1) = (path.samples()[0].value.clone(), path.samples()[12].value.clone());
    BundleDescriptor {
        name: "A1".into(),
        endpoint_classes: [rational::format(&v0), rational::format(&v1)],
        gluing: Gluing::Canonical,
        charts,
        locally_omega_trivial: true,
        globally_omega_trivial: globally,
        path,
        atlas,
    }
}

fn a2() -> BundleDescriptor {
    // class 0 on [0,1/4], 1/2 on [3/4,1], linear between.
    let lift = |j: i64| q((j - 2).clamp(0, 4), 8);
    let pairs: Vec<(Rational, Rational)> = (0..=8).map(|j| (q(j, 8), lift(j))).collect();
    let path = ClassPath::from_pairs(Base::Interval, &pairs).expect("valid");
    let axis = |name: &str, from: i64, to: i64| {
        let pts = (from..=to)
            .map(|j| (q(j, 8), lift(j), Rational::zero()))
            .collect();
        Chart::new(name, Arc::new(q(from, 8), q(to, 8)), pts).expect("axis is transverse")
    };
    let atlas = TransverseAtlas::new(
        Base::Interval,
        vec![axis("U-left", 0, 2), axis("V", 1, 7), axis("U-right", 6, 8)],
    )
    .expect("covers");
    let charts = vec![
        ChartRecord {
            name: "V".into(),
            pieces: vec![Arc::new(q(1, 8), q(7, 8))],
            trivialised_by: None,
        },
        ChartRecord {
            name: "U".into(),
            pieces: vec![Arc::new(Rational::zero(), q(1, 4)), Arc::new(q(3, 4), Rational::one())],
            trivialised_by: Some("1/2".into()),
        },
    ];
    BundleDescriptor {
        name: "A2".into(),
        endpoint_classes: ["0/1".into(), "1/2".into()],
        gluing: Gluing::StableIsomorphism {
            from: "0/1".into(),
            to: "1/2".into(),
        },
        charts,
        locally_omega_trivial: true,
        globally_omega_trivial: false,
        path,
        atlas,
    }
}

pub fn example_bundles() -> ExampleBundles {
    ExampleBundles { a1: a1(), a2: a2() }
}
