//! The two-dimensional dictionary: classes are single parameters θ with
//! `ω_θ(x, y) = exp(2πi θ x₂ y₁)`, and transversality reads `θθ̂ ∈ {0, 2}`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cocycle::{restrict_to_torus, CocycleClass};
use crate::error::{Error, Result};
use crate::rational::{self, frac, int, Rational};
use crate::transversality::{dualize_pair, TransversePair};

/// A system `(𝒦 ⊗ (ℂ ⋊_θ̇ ℤ²), μ̂ ⊗ inf)` up to its class data.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct System2D {
    #[serde(with = "rational::serde_q")]
    torus_class: Rational,
    #[serde(with = "rational::serde_q")]
    mackey: Rational,
}

impl System2D {
    /// `torus_class` is reduced into `[0, 1)`.
    pub fn new(torus_class: Rational, mackey: Rational) -> Self {
        Self {
            torus_class: frac(&torus_class),
            mackey,
        }
    }

    pub fn torus_class(&self) -> &Rational {
        &self.torus_class
    }

    pub fn mackey(&self) -> &Rational {
        &self.mackey
    }
}

/// `{t, −t} mod 1`, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ThetaPerpSet2D {
    #[serde(with = "rational::serde_q_vec")]
    members: Vec<Rational>,
}

impl ThetaPerpSet2D {
    fn from_values(values: impl IntoIterator<Item = Rational>) -> Self {
        let mut members: Vec<_> = values.into_iter().map(|v| frac(&v)).collect();
        members.sort();
        members.dedup();
        Self { members }
    }

    pub fn members(&self) -> &[Rational] {
        &self.members
    }

    pub fn contains(&self, t: &Rational) -> bool {
        self.members.contains(&frac(t))
    }

    pub fn is_zero_only(&self) -> bool {
        self.members.len() == 1 && self.members[0].is_zero()
    }
}

pub fn transverse_locus(theta: &Rational, theta_hat: &Rational) -> bool {
    let p = theta * theta_hat;
    p.is_zero() || p == int(2)
}

/// Mackey obstructions `θ̂` transverse to some lift of a torus class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransverseObstructions {
    /// Every `θ̂ ∈ ℝ` (the torus class vanishes, so the lift 0 is transverse to everything).
    All,
    /// `{0} ∪ {2/(θ + n) : n ∈ ℤ}` for the lift `θ`.
    Hyperbola {
        #[serde(with = "rational::serde_q")]
        lift: Rational,
    },
}

impl TransverseObstructions {
    pub fn contains(&self, theta_hat: &Rational) -> bool {
        match self {
            Self::All => true,
            Self::Hyperbola { lift } => {
                theta_hat.is_zero() || (int(2) / theta_hat - lift).is_integer()
            }
        }
    }

    /// `0` followed by `2/(θ + n)` for `n = −bound, …, bound`, skipping `θ + n = 0`.
    /// `None` for [`TransverseObstructions::All`].
    pub fn enumerate(&self, bound: u32) -> Option<Vec<Rational>> {
        let Self::Hyperbola { lift } = self else {
            return None;
        };
        let b = i64::from(bound);
        let mut out = vec![Rational::zero()];
        out.extend(
            (-b..=b)
                .map(|n| lift + int(n))
                .filter(|d| !d.is_zero())
                .map(|d| int(2) / d),
        );
        Some(out)
    }
}

/// The set does not depend on the chosen lift: shifting `θ` by an integer reindexes `n`.
pub fn transverse_obstructions(torus_class: &Rational) -> TransverseObstructions {
    let t = frac(torus_class);
    if t.is_zero() {
        TransverseObstructions::All
    } else {
        TransverseObstructions::Hyperbola { lift: t }
    }
}

/// The dual system for the chosen lift `θ` of `sys.torus_class`.
///
/// In closed form this is `(θ̂(1 − θθ̂) mod 1, θ/(1 − θθ̂))`.
pub fn dual_system_2d(sys: &System2D, lift: &Rational) -> Result<System2D> {
    if frac(lift) != sys.torus_class {
        return Err(Error::BadLift {
            lift: rational::format(lift),
            class: rational::format(&sys.torus_class),
        });
    }
    if !transverse_locus(lift, &sys.mackey) {
        return Err(Error::NotTransverse(format!(
            "theta * theta_hat = {}",
            rational::format(&(lift * &sys.mackey))
        )));
    }
    let pair = TransversePair::new(
        CocycleClass::theta(lift.clone()),
        CocycleClass::theta(sys.mackey.clone()),
    )?;
    let dual = dualize_pair(&pair)?;
    let torus = restrict_to_torus(dual.s_hat()).entries()[0].clone();
    Ok(System2D::new(torus, dual.s().theta_param()))
}

pub fn theta_perp_set_2d(theta_hat_torus: &Rational) -> ThetaPerpSet2D {
    ThetaPerpSet2D::from_values([theta_hat_torus.clone(), -theta_hat_torus.clone()])
}

pub fn is_commutative_obstruction(theta_hat_torus: &Rational) -> bool {
    frac(theta_hat_torus).is_zero()
}

/// `Ma mod 1`, the restriction of the Mackey obstruction to the dual lattice.
pub fn restricted_mackey_invariant(sys: &System2D) -> Rational {
    frac(&sys.mackey)
}

/// Which branch of the transverse locus a pair lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocusBranch {
    Origin,
    /// `θ̂ = 0`, `θ ≠ 0`.
    ThetaAxis,
    /// `θ = 0`, `θ̂ ≠ 0`.
    MackeyAxis,
    /// `θθ̂ = 2`.
    Hyperbola,
    NotTransverse,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification2D {
    pub branch: LocusBranch,
    pub transverse: bool,
    /// `φ = (1 − θθ̂)·I`.
    #[serde(with = "rational::serde_q")]
    pub phi_scalar: Rational,
    #[serde(with = "rational::serde_q")]
    pub torus_class: Rational,
    #[serde(with = "rational::serde_q")]
    pub restricted_mackey: Rational,
    pub theta_perp: ThetaPerpSet2D,
    pub commutative_dual: bool,
}

pub fn classify_2d(theta: &Rational, theta_hat: &Rational) -> Classification2D {
    let transverse = transverse_locus(theta, theta_hat);
    let branch = match (theta.is_zero(), theta_hat.is_zero()) {
        (true, true) => LocusBranch::Origin,
        (false, true) => LocusBranch::ThetaAxis,
        (true, false) => LocusBranch::MackeyAxis,
        _ if transverse => LocusBranch::Hyperbola,
        _ => LocusBranch::NotTransverse,
    };
    let restricted = frac(theta_hat);
    Classification2D {
        branch,
        transverse,
        phi_scalar: Rational::one() - theta * theta_hat,
        torus_class: frac(theta),
        theta_perp: theta_perp_set_2d(&restricted),
        commutative_dual: is_commutative_obstruction(&restricted),
        restricted_mackey: restricted,
    }
}
