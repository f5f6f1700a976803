//! Projective representations, their boundaries, and class read-off of 2-cocycle tables.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use serde::Serialize;

use super::{unit, FiniteCocycle, C};
use crate::error::{Error, Result};
use crate::rational::{self, frac, q as ratio, Rational};

const UNITARY_TOL: f64 = 1e-10;
const SCALAR_TOL: f64 = 1e-10;
const COCYCLE_TOL: f64 = 1e-10;
const SNAP_TOL: f64 = 1e-8;

fn identity(d: usize) -> DMatrix<C> {
    DMatrix::identity(d, d)
}

fn max_abs(m: &DMatrix<C>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Returns `λ` with `m ≈ λI`, or the deviation.
fn as_scalar(m: &DMatrix<C>) -> std::result::Result<C, f64> {
    let d = m.nrows();
    let lambda = m.trace() / C::new(d as f64, 0.0);
    let dev = max_abs(&(m - identity(d) * lambda));
    if dev <= SCALAR_TOL {
        Ok(lambda)
    } else {
        Err(dev)
    }
}

/// Unitaries `V(s)`, one per element of `(ℤ/k)ⁿ`, multiplying up to scalars.
#[derive(Clone, Debug)]
pub struct ProjectiveRep {
    group: FiniteCocycle,
    matrices: Vec<DMatrix<C>>,
}

impl ProjectiveRep {
    pub fn new(k: u32, n: usize, matrices: Vec<DMatrix<C>>) -> Result<Self> {
        let group = FiniteCocycle::trivial(k, n);
        if matrices.len() != group.order() {
            return Err(Error::InvalidRepresentation(format!(
                "expected {} matrices, found {}",
                group.order(),
                matrices.len()
            )));
        }
        let d = matrices.first().map_or(0, DMatrix::nrows);
        for (s, v) in matrices.iter().enumerate() {
            if v.nrows() != d || v.ncols() != d {
                return Err(Error::InvalidRepresentation(format!("matrix {s} is not {d}x{d}")));
            }
            let dev = max_abs(&(v.adjoint() * v - identity(d)));
            if dev > UNITARY_TOL {
                return Err(Error::InvalidRepresentation(format!(
                    "V({s}) is not unitary (deviation {dev:e})"
                )));
            }
        }
        for s in 0..matrices.len() {
            for t in 0..matrices.len() {
                let prod = &matrices[s] * &matrices[t] * matrices[group.add(s, t)].adjoint();
                if let Err(dev) = as_scalar(&prod) {
                    return Err(Error::InvalidRepresentation(format!(
                        "V({s})V({t}) is not a multiple of V(s+t) (deviation {dev:e})"
                    )));
                }
            }
        }
        Ok(Self { group, matrices })
    }

    pub fn k(&self) -> u32 {
        self.group.k()
    }

    pub fn n(&self) -> usize {
        self.group.n()
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn matrix(&self, s: usize) -> &DMatrix<C> {
        &self.matrices[s]
    }

    /// Multiplies each `V(s)` by the scalar `u(s)`.
    pub fn twisted(&self, u: &[C]) -> Result<Self> {
        let matrices = self
            .matrices
            .iter()
            .zip(u)
            .map(|(v, c)| v * *c)
            .collect();
        Self::new(self.k(), self.n(), matrices)
    }
}

/// A table of unit scalars `c(s, s')` on `(ℤ/k)ⁿ`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleTable {
    group: FiniteCocycle,
    values: Vec<C>,
}

impl CocycleTable {
    pub fn new(k: u32, n: usize, values: Vec<C>) -> Result<Self> {
        let group = FiniteCocycle::trivial(k, n);
        let size = group.order();
        if values.len() != size * size {
            return Err(Error::ShapeMismatch { k, n });
        }
        Ok(Self { group, values })
    }

    pub fn from_fn(k: u32, n: usize, f: impl Fn(&[u32], &[u32]) -> C) -> Self {
        let group = FiniteCocycle::trivial(k, n);
        let size = group.order();
        let mut values = Vec::with_capacity(size * size);
        for s in 0..size {
            for t in 0..size {
                values.push(f(&group.element(s), &group.element(t)));
            }
        }
        Self { group, values }
    }

    pub fn from_cocycle(w: &FiniteCocycle) -> Self {
        let size = w.order();
        let values = (0..size * size).map(|i| w.value(i / size, i % size)).collect();
        Self {
            group: FiniteCocycle::trivial(w.k(), w.n()),
            values,
        }
    }

    pub fn k(&self) -> u32 {
        self.group.k()
    }

    pub fn n(&self) -> usize {
        self.group.n()
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn get(&self, s: usize, t: usize) -> C {
        self.values[s * self.order() + t]
    }

    /// Pointwise product with another table.
    pub fn times(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::ShapeMismatch {
                k: other.k(),
                n: other.n(),
            });
        }
        Ok(Self {
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    /// Exact phases, snapped to `k²`-th roots of unity.
    pub fn phases(&self) -> Result<Vec<Rational>> {
        let order = self.k() * self.k();
        self.values.iter().map(|z| snap_phase(*z, order)).collect()
    }

    /// Largest violation of `c(a,b)c(a+b,e) = c(b,e)c(a,b+e)`.
    pub fn cocycle_defect(&self) -> f64 {
        let size = self.order();
        let g = &self.group;
        let mut worst: f64 = 0.0;
        for a in 0..size {
            for b in 0..size {
                let ab = g.add(a, b);
                for e in 0..size {
                    let lhs = self.get(a, b) * self.get(ab, e);
                    let rhs = self.get(b, e) * self.get(a, g.add(b, e));
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
        worst
    }

    pub fn element(&self, idx: usize) -> Vec<u32> {
        self.group.element(idx)
    }

    pub fn index(&self, m: &[u32]) -> usize {
        self.group.index(m)
    }
}

/// The phase `x ∈ [0, 1)` with `z = exp(2πi x)` and `x·order ∈ ℤ`.
pub fn snap_phase(z: C, order: u32) -> Result<Rational> {
    let steps = (z.arg() / TAU * f64::from(order)).round() as i64;
    let x = frac(&ratio(steps, i64::from(order)));
    let deviation = (z - unit(rational::to_f64(&x))).norm();
    if deviation > SNAP_TOL {
        return Err(Error::PhaseExtraction { deviation });
    }
    Ok(x)
}

/// `(∂V)(s, s') = V(s')V(s+s')⁻¹V(s)`, which must be scalar.
pub fn boundary(rep: &ProjectiveRep) -> Result<CocycleTable> {
    let g = &rep.group;
    let size = g.order();
    let mut values = Vec::with_capacity(size * size);
    for s in 0..size {
        for t in 0..size {
            let m = rep.matrix(t) * rep.matrix(g.add(s, t)).adjoint() * rep.matrix(s);
            let lambda = as_scalar(&m).map_err(|deviation| Error::NotScalar { deviation })?;
            values.push(lambda);
        }
    }
    Ok(CocycleTable {
        group: g.clone(),
        values,
    })
}

/// The same formula for a scalar 1-cochain `u`.
pub fn boundary_cochain(k: u32, n: usize, u: &[C]) -> Result<CocycleTable> {
    let g = FiniteCocycle::trivial(k, n);
    let size = g.order();
    if u.len() != size {
        return Err(Error::ShapeMismatch { k, n });
    }
    let mut values = Vec::with_capacity(size * size);
    for s in 0..size {
        for t in 0..size {
            values.push(u[t] * u[g.add(s, t)].conj() * u[s]);
        }
    }
    Ok(CocycleTable { group: g, values })
}

/// The antisymmetrised pairing `c(m, m')/c(m', m)` of a cocycle table on the
/// standard generators, as exponents mod `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MackeyClass {
    pub k: u32,
    pub n: usize,
    /// `pairing[i][j]` is `p` with `c(eᵢ, eⱼ)/c(eⱼ, eᵢ) = exp(2πi p/k)`.
    pub pairing: Vec<Vec<i64>>,
}

impl MackeyClass {
    /// The parameter `θ` with pairing `exp(2πi θ)` at `(e₂, e₁)`; for `ω_θ(x,y) = exp(2πiθx₂y₁)`
    /// this recovers `θ mod 1`.
    pub fn theta(&self) -> Rational {
        if self.n < 2 {
            return Rational::default();
        }
        frac(&ratio(self.pairing[1][0], i64::from(self.k)))
    }

    pub fn is_trivial(&self) -> bool {
        self.pairing.iter().flatten().all(|&p| p == 0)
    }
}

/// Reads off the class of a cocycle table. Fails if the table is not a cocycle.
pub fn mackey_class(table: &CocycleTable) -> Result<MackeyClass> {
    let defect = table.cocycle_defect();
    if defect > COCYCLE_TOL {
        return Err(Error::NotACocycle(format!("identity violated by {defect:e}")));
    }
    let (k, n) = (table.k(), table.n());
    let gens: Vec<usize> = (0..n)
        .map(|i| {
            let mut e = vec![0u32; n];
            e[i] = 1;
            table.index(&e)
        })
        .collect();
    let mut pairing = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let z = table.get(gens[i], gens[j]) / table.get(gens[j], gens[i]);
            let x = snap_phase(z, k)?;
            pairing[i][j] = (x * Rational::from_integer(k.into()))
                .to_integer()
                .try_into()
                .unwrap_or(0);
        }
    }
    Ok(MackeyClass { k, n, pairing })
}
