//! Twisted group algebras `ℂ ⋊_ω (ℤ/k)ⁿ` as dense complex arrays.
//!
//! Group elements are indexed row-major with the first coordinate most
//! significant, so `(m₁, m₂) ↦ m₁·k + m₂` when `n = 2`.

mod appendix;
mod projective;

pub use appendix::{
    appendix_cocycle, appendix_unitary, dual_action, tilde_iso, transfer_matrix, verify_appendix_a,
    AppendixOptions, AppendixReport, StepResult,
};
pub use projective::{
    boundary, boundary_cochain, mackey_class, snap_phase, CocycleTable, MackeyClass,
    ProjectiveRep,
};

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{q as ratio, Rational};

pub type C = Complex64;

/// `exp(2πi·x)`.
pub fn unit(x: f64) -> C {
    C::from_polar(1.0, TAU * x)
}

/// The bicharacter `ω(m, m') = exp(2πi mᵀqm'/k)` on `(ℤ/k)ⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteCocycle {
    k: u32,
    n: usize,
    q: Vec<Vec<i64>>,
}

impl FiniteCocycle {
    /// Entries of `q` are reduced into `[0, k)`.
    pub fn new(k: u32, q: Vec<Vec<i64>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::ShapeMismatch { k, n: q.len() });
        }
        let n = q.len();
        if n == 0 || q.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch { k, n });
        }
        let km = i64::from(k);
        let q = q
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.rem_euclid(km)).collect())
            .collect();
        Ok(Self { k, n, q })
    }

    pub fn trivial(k: u32, n: usize) -> Self {
        Self {
            k,
            n,
            q: vec![vec![0; n]; n],
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> &[Vec<i64>] {
        &self.q
    }

    /// `kⁿ`.
    pub fn order(&self) -> usize {
        (self.k as usize).pow(self.n as u32)
    }

    pub fn element(&self, mut idx: usize) -> Vec<u32> {
        let k = self.k as usize;
        let mut m = vec![0; self.n];
        for slot in m.iter_mut().rev() {
            *slot = (idx % k) as u32;
            idx /= k;
        }
        m
    }

    pub fn index(&self, m: &[u32]) -> usize {
        m.iter()
            .fold(0, |acc, &x| acc * self.k as usize + (x % self.k) as usize)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.element(a), self.element(b));
        let s: Vec<u32> = x.iter().zip(&y).map(|(p, q)| (p + q) % self.k).collect();
        self.index(&s)
    }

    pub fn neg(&self, a: usize) -> usize {
        let x = self.element(a);
        let s: Vec<u32> = x.iter().map(|p| (self.k - p) % self.k).collect();
        self.index(&s)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Numerator `mᵀqm' mod k` of the phase.
    pub fn exponent(&self, a: usize, b: usize) -> i64 {
        let (x, y) = (self.element(a), self.element(b));
        let mut acc = 0i64;
        for i in 0..self.n {
            for j in 0..self.n {
                acc += i64::from(x[i]) * self.q[i][j] * i64::from(y[j]);
            }
        }
        acc.rem_euclid(i64::from(self.k))
    }

    /// Exact phase of `ω(a, b)` in `[0, 1)`.
    pub fn phase(&self, a: usize, b: usize) -> Rational {
        ratio(self.exponent(a, b), i64::from(self.k))
    }

    pub fn value(&self, a: usize, b: usize) -> C {
        unit(self.exponent(a, b) as f64 / f64::from(self.k))
    }

    /// `(q − qᵀ)` reduced mod k: the antisymmetrised pairing.
    pub fn antisymmetric_part(&self) -> Vec<Vec<i64>> {
        let km = i64::from(self.k);
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| (self.q[i][j] - self.q[j][i]).rem_euclid(km))
                    .collect()
            })
            .collect()
    }

    fn check(&self, f: &FiniteAlgebraElement) -> Result<()> {
        if f.k != self.k || f.n != self.n || f.coeffs.len() != self.order() {
            Err(Error::ShapeMismatch {
                k: self.k,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }
}

/// A function `(ℤ/k)ⁿ → ℂ`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteAlgebraElement {
    k: u32,
    n: usize,
    coeffs: Vec<C>,
}

impl FiniteAlgebraElement {
    pub fn new(k: u32, n: usize, coeffs: Vec<C>) -> Result<Self> {
        if k < 2 || n == 0 || coeffs.len() != (k as usize).pow(n as u32) {
            return Err(Error::ShapeMismatch { k, n });
        }
        Ok(Self { k, n, coeffs })
    }

    pub fn zero(w: &FiniteCocycle) -> Self {
        Self {
            k: w.k,
            n: w.n,
            coeffs: vec![C::new(0.0, 0.0); w.order()],
        }
    }

    /// The point mass at group index `m`.
    pub fn delta(w: &FiniteCocycle, m: usize) -> Self {
        let mut f = Self::zero(w);
        f.coeffs[m] = C::new(1.0, 0.0);
        f
    }

    /// Coefficients with real and imaginary parts uniform in `[−1, 1]`.
    pub fn random<R: Rng + ?Sized>(w: &FiniteCocycle, rng: &mut R) -> Self {
        let coeffs = (0..w.order())
            .map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Self {
            k: w.k,
            n: w.n,
            coeffs,
        }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn get(&self, m: usize) -> C {
        self.coeffs[m]
    }

    /// `max |f − g|` over the group.
    pub fn distance(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn scale(&self, c: C) -> Self {
        Self {
            k: self.k,
            n: self.n,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRaw {
    k: u32,
    n: usize,
    coeffs: Vec<[String; 2]>,
}

impl Serialize for FiniteAlgebraElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRaw {
            k: self.k,
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| [c.re.to_string(), c.im.to_string()])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteAlgebraElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ElementRaw::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|[re, im]| -> std::result::Result<C, D::Error> {
                let p = |s: &str| s.trim().parse::<f64>().map_err(D::Error::custom);
                Ok(C::new(p(re)?, p(im)?))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        FiniteAlgebraElement::new(raw.k, raw.n, coeffs).map_err(D::Error::custom)
    }
}

/// `(f ∗ g)(m) = Σ_h f(h) g(m − h) ω(h, m − h)`.
pub fn convolve(
    w: &FiniteCocycle,
    f: &FiniteAlgebraElement,
    g: &FiniteAlgebraElement,
) -> Result<FiniteAlgebraElement> {
    w.check(f)?;
    w.check(g)?;
    let size = w.order();
    let mut out = FiniteAlgebraElement::zero(w);
    for h in 0..size {
        if f.coeffs[h] == C::new(0.0, 0.0) {
            continue;
        }
        for r in 0..size {
            let m = w.add(h, r);
            out.coeffs[m] += f.coeffs[h] * g.coeffs[r] * w.value(h, r);
        }
    }
    Ok(out)
}

/// `f⋆(m) = conj(ω(m, −m) f(−m))`.
pub fn star(w: &FiniteCocycle, f: &FiniteAlgebraElement) -> Result<FiniteAlgebraElement> {
    w.check(f)?;
    let mut out = FiniteAlgebraElement::zero(w);
    for m in 0..w.order() {
        let neg = w.neg(m);
        out.coeffs[m] = (w.value(m, neg) * f.coeffs[neg]).conj();
    }
    Ok(out)
}

/// Matrix of `ξ ↦ f ∗ ξ` on `ℓ²((ℤ/k)ⁿ)`.
pub fn left_regular(w: &FiniteCocycle, f: &FiniteAlgebraElement) -> Result<DMatrix<C>> {
    w.check(f)?;
    let size = w.order();
    Ok(DMatrix::from_fn(size, size, |m, j| {
        let h = w.sub(m, j);
        f.coeffs[h] * w.value(h, j)
    }))
}

/// Operator norm in the left regular representation.
pub fn norm(w: &FiniteCocycle, f: &FiniteAlgebraElement) -> Result<f64> {
    let l = left_regular(w, f)?;
    Ok(l.singular_values().iter().cloned().fold(0.0, f64::max))
}

/// Numerical rank with singular values above `tol · σ_max`.
pub fn numeric_rank(m: &DMatrix<C>, tol: f64) -> usize {
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > tol * max.max(1.0)).count()
}

/// The kernel `S` of the antisymmetrised pairing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryGroup {
    pub elements: Vec<Vec<u32>>,
    pub generators: Vec<Vec<u32>>,
}

impl SymmetryGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// `S = {m : (q − qᵀ)m ≡ 0 mod k}` by exhaustive search.
pub fn symmetry_group(w: &FiniteCocycle) -> SymmetryGroup {
    let anti = w.antisymmetric_part();
    let km = i64::from(w.k);
    let members: Vec<usize> = (0..w.order())
        .filter(|&idx| {
            let m = w.element(idx);
            anti.iter().all(|row| {
                row.iter()
                    .zip(&m)
                    .map(|(a, &x)| a * i64::from(x))
                    .sum::<i64>()
                    .rem_euclid(km)
                    == 0
            })
        })
        .collect();
    // greedy generating set: add any element outside the current span
    let mut span = vec![0usize];
    let mut gens = Vec::new();
    for &m in &members {
        if span.contains(&m) {
            continue;
        }
        gens.push(m);
        let mut frontier = span.clone();
        while let Some(x) = frontier.pop() {
            let y = w.add(x, m);
            if !span.contains(&y) {
                span.push(y);
                frontier.push(y);
            }
        }
        // close under the new generator repeatedly until stable
        loop {
            let before = span.len();
            for &g in &gens {
                for i in 0..span.len() {
                    let y = w.add(span[i], g);
                    if !span.contains(&y) {
                        span.push(y);
                    }
                }
            }
            if span.len() == before {
                break;
            }
        }
    }
    SymmetryGroup {
        elements: members.iter().map(|&m| w.element(m)).collect(),
        generators: gens.iter().map(|&m| w.element(m)).collect(),
    }
}

/// Dimension of the centre, as the nullity of `f ↦ [f, δ_{eᵢ}]` over the generators `eᵢ`.
pub fn center_dimension(w: &FiniteCocycle) -> usize {
    let size = w.order();
    let mut rows = Vec::new();
    for i in 0..w.n {
        let mut e = vec![0u32; w.n];
        e[i] = 1;
        let g = w.index(&e);
        // (f ∗ δ_g)(m) = f(m − g) ω(m − g, g); (δ_g ∗ f)(m) = f(m − g) ω(g, m − g)
        let block = DMatrix::from_fn(size, size, |m, j| {
            let h = w.sub(m, g);
            if j == h {
                w.value(h, g) - w.value(g, h)
            } else {
                C::new(0.0, 0.0)
            }
        });
        rows.push(block);
    }
    let stacked = DMatrix::from_fn(size * w.n, size, |r, c| rows[r / size][(r % size, c)]);
    size - numeric_rank(&stacked, 1e-9)
}
