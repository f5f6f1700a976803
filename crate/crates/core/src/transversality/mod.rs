//! Transverse pairs `(ω, ω̂)`, the twisted products `⋊` and `⊼̄`, the duality
//! bijection on transverse pairs and the Heisenberg block calculus.

mod polarize;

pub use polarize::{polarize, polarize_exact};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cocycle::{class_inverse, class_product, pullback, pushforward, CocycleClass};
use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::rational::{format, int, Rational};

fn same_dim(w: &CocycleClass, w_hat: &CocycleClass) -> Result<()> {
    if w.n() == w_hat.n() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: w.n(),
            found: w_hat.n(),
        })
    }
}

/// `φ = I + Ŝ·S`.
pub fn phi_of(w: &CocycleClass, w_hat: &CocycleClass) -> Result<QMatrix> {
    same_dim(w, w_hat)?;
    QMatrix::identity(w.n()).try_add(&w_hat.sigma().try_mul(w.sigma())?)
}

/// `φ̂ = I + S·Ŝ`, which equals `φᵀ`.
pub fn phi_hat_of(w: &CocycleClass, w_hat: &CocycleClass) -> Result<QMatrix> {
    phi_of(w_hat, w)
}

fn unimodularity(phi: &QMatrix) -> std::result::Result<(), String> {
    if !phi.is_integral() {
        return Err("phi has non-integer entries".into());
    }
    let d = phi.det().map_err(|e| e.to_string())?;
    if d == int(1) || d == int(-1) {
        Ok(())
    } else {
        Err(format!("det(phi) = {}", format(&d)))
    }
}

/// Exact test that `φ` is an integer matrix of determinant ±1.
pub fn is_transverse(w: &CocycleClass, w_hat: &CocycleClass) -> bool {
    phi_of(w, w_hat).is_ok_and(|phi| unimodularity(&phi).is_ok())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversePair {
    s: CocycleClass,
    s_hat: CocycleClass,
    phi: QMatrix,
    phi_hat: QMatrix,
}

impl TransversePair {
    pub fn new(s: CocycleClass, s_hat: CocycleClass) -> Result<Self> {
        let phi = phi_of(&s, &s_hat)?;
        unimodularity(&phi).map_err(Error::NotTransverse)?;
        let phi_hat = phi_hat_of(&s, &s_hat)?;
        Ok(Self {
            s,
            s_hat,
            phi,
            phi_hat,
        })
    }

    pub fn n(&self) -> usize {
        self.s.n()
    }

    pub fn s(&self) -> &CocycleClass {
        &self.s
    }

    pub fn s_hat(&self) -> &CocycleClass {
        &self.s_hat
    }

    pub fn phi(&self) -> &QMatrix {
        &self.phi
    }

    pub fn phi_hat(&self) -> &QMatrix {
        &self.phi_hat
    }
}

#[derive(Serialize, Deserialize)]
struct PairRaw {
    s: CocycleClass,
    s_hat: CocycleClass,
}

impl Serialize for TransversePair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PairRaw {
            s: self.s.clone(),
            s_hat: self.s_hat.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TransversePair {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PairRaw::deserialize(d)?;
        TransversePair::new(raw.s, raw.s_hat).map_err(serde::de::Error::custom)
    }
}

/// `ω⋊ω̂ = ω · (h_ω^* ω̂)⁻¹`, built from pullback and product.
pub fn semidirect(w: &CocycleClass, w_hat: &CocycleClass) -> Result<CocycleClass> {
    same_dim(w, w_hat)?;
    let pulled = pullback(w.sigma(), w_hat)?;
    class_product(w, &class_inverse(&pulled))
}

/// The closed form `S + S·Ŝ·S` of [`semidirect`].
pub fn semidirect_matrix(w: &CocycleClass, w_hat: &CocycleClass) -> Result<QMatrix> {
    same_dim(w, w_hat)?;
    let s = w.sigma();
    s.try_add(&s.try_mul(w_hat.sigma())?.try_mul(s)?)
}

/// `ω⊼̄ω̂ = φ_*(ω⋊ω̂)`.
pub fn semidirect_bar(w: &CocycleClass, w_hat: &CocycleClass) -> Result<CocycleClass> {
    let phi = phi_of(w, w_hat)?;
    if phi.det()?.is_zero() {
        return Err(Error::PhiSingular);
    }
    pushforward(&phi, &semidirect(w, w_hat)?)
}

/// `(ω, ω̂) ↦ (ω⊼̄ω̂, ω̂⋊ω)`.
pub fn dualize_pair(p: &TransversePair) -> Result<TransversePair> {
    let s = semidirect_bar(&p.s, &p.s_hat)?;
    let s_hat = semidirect(&p.s_hat, &p.s)?;
    TransversePair::new(s, s_hat)
}

/// `(ω, ω̂) ↦ (ω⋊ω̂, ω̂⊼̄ω)`, the inverse of [`dualize_pair`].
pub fn dualize_pair_inverse(p: &TransversePair) -> Result<TransversePair> {
    let s = semidirect(&p.s, &p.s_hat)?;
    let s_hat = semidirect_bar(&p.s_hat, &p.s)?;
    TransversePair::new(s, s_hat)
}

/// Coordinate order of a block class on `G × Ĝ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockOrder {
    /// `(G, Ĝ)`, used for `∨`-side objects.
    GGhat,
    /// `(Ĝ, G)`, used for `∧`-side objects.
    GhatG,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VeeClass {
    n: usize,
    order: BlockOrder,
    block: QMatrix,
}

impl VeeClass {
    pub fn new(order: BlockOrder, block: QMatrix) -> Result<Self> {
        if !block.is_square() || block.rows() % 2 != 0 {
            return Err(Error::DimensionMismatch {
                expected: block.rows() + block.rows() % 2,
                found: block.cols(),
            });
        }
        if !block.is_antisymmetric() {
            return Err(Error::NotAntisymmetric);
        }
        Ok(Self {
            n: block.rows() / 2,
            order,
            block,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> BlockOrder {
        self.order
    }

    pub fn block(&self) -> &QMatrix {
        &self.block
    }

    /// The same class written in the other coordinate order.
    pub fn flipped(&self) -> Self {
        let p = flip(self.n);
        let block = p
            .try_mul(&self.block)
            .and_then(|m| m.try_mul(&p))
            .expect("flip has matching size");
        let order = match self.order {
            BlockOrder::GGhat => BlockOrder::GhatG,
            BlockOrder::GhatG => BlockOrder::GGhat,
        };
        Self {
            n: self.n,
            order,
            block,
        }
    }
}

/// The permutation `[[0, I], [I, 0]]` swapping the two factors.
pub fn flip(n: usize) -> QMatrix {
    let i = QMatrix::identity(n);
    let z = QMatrix::zeros(n, n);
    QMatrix::block(&z, &i, &i, &z).expect("square blocks")
}

/// The standard form `J = [[0, I], [−I, 0]]`.
pub fn heisenberg_form(n: usize) -> QMatrix {
    let i = QMatrix::identity(n);
    let z = QMatrix::zeros(n, n);
    QMatrix::block(&z, &i, &i.scale(&-Rational::one()), &z).expect("square blocks")
}

/// The `∧` class on `Ĝ × G`, `(ψ, h) ∧ (χ, g) = ⟨h, χ⟩`.
pub fn wedge(n: usize) -> VeeClass {
    VeeClass {
        n,
        order: BlockOrder::GhatG,
        block: heisenberg_form(n),
    }
}

/// `h_{ω∨ω̂} = [[S, I], [−I, Ŝ]]` on `G × Ĝ`.
pub fn h_vee(w: &CocycleClass, w_hat: &CocycleClass) -> Result<VeeClass> {
    same_dim(w, w_hat)?;
    let n = w.n();
    let i = QMatrix::identity(n);
    let block = QMatrix::block(w.sigma(), &i, &i.scale(&-Rational::one()), w_hat.sigma())?;
    Ok(VeeClass {
        n,
        order: BlockOrder::GGhat,
        block,
    })
}

/// Invertibility of `(φ, φ̂, h_∨)`; the three always agree.
pub fn vee_invertibility_equivalence(
    w: &CocycleClass,
    w_hat: &CocycleClass,
) -> Result<(bool, bool, bool)> {
    let nonzero = |m: &QMatrix| m.det().map(|d| !d.is_zero());
    let phi = nonzero(&phi_of(w, w_hat)?)?;
    let phi_hat = nonzero(&phi_hat_of(w, w_hat)?)?;
    let vee = nonzero(h_vee(w, w_hat)?.block())?;
    Ok((phi, phi_hat, vee))
}

/// Block diagonal `[[a, 0], [0, d]]`.
fn block_diag(a: &QMatrix, d: &QMatrix) -> Result<QMatrix> {
    QMatrix::block(
        a,
        &QMatrix::zeros(a.rows(), d.cols()),
        &QMatrix::zeros(d.rows(), a.cols()),
        d,
    )
}

/// The right-hand side `[ω̂⊼̄ω] ⊕ [ω⊼̄ω̂] − (φ̂ × id)_*[∧]` as a block matrix.
pub fn vee_dual_decomposition(p: &TransversePair) -> Result<QMatrix> {
    let hat_bar = semidirect_bar(&p.s_hat, &p.s)?;
    let bar = semidirect_bar(&p.s, &p.s_hat)?;
    let l = block_diag(&p.phi_hat, &QMatrix::identity(p.n()))?;
    let wedge_class = CocycleClass::new(wedge(p.n()).block)?;
    let pushed = pushforward(&l, &wedge_class)?;
    block_diag(hat_bar.sigma(), bar.sigma())?.try_sub(pushed.sigma())
}

/// Checks `h_∨⁻¹` against [`vee_dual_decomposition`] exactly.
pub fn vee_dual_decomposition_check(p: &TransversePair) -> Result<bool> {
    let vee = h_vee(&p.s, &p.s_hat)?;
    let inv = vee.block.inverse().map_err(|_| Error::PhiSingular)?;
    Ok(inv == vee_dual_decomposition(p)?)
}
