//! Seeded random generators for classes, transverse pairs and forms.
//!
//! Used by the property suites; exposed so downstream tests can draw from the
//! same distributions.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::bundles::{Base, ClassPath};
use crate::cocycle::{antisym_of, is_totally_skew, CocycleClass, UpperRepresentative};
use crate::matrix::{Matrix, QMatrix};
use crate::rational::{int, q, Rational};
use crate::transversality::TransversePair;

/// A small rational `p/d` with `|p| ≤ 9`, `1 ≤ d ≤ 6`.
pub fn rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    q(rng.gen_range(-9..=9), rng.gen_range(1..=6))
}

fn nonzero_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    loop {
        let x = rational(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn class<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CocycleClass {
    let entries: Vec<_> = (0..n * n.saturating_sub(1) / 2).map(|_| rational(rng)).collect();
    antisym_of(&UpperRepresentative::from_entries(n, &entries).expect("entry count"))
}

/// Rejection-samples a class with invertible `sigma`; `n` must be even.
pub fn totally_skew<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CocycleClass {
    assert!(n % 2 == 0 && n > 0, "totally skew classes need even n");
    loop {
        let c = class(rng, n);
        if is_totally_skew(&c) {
            return c;
        }
    }
}

/// A product of elementary integer row operations and sign flips.
pub fn unimodular<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QMatrix {
    let mut m = QMatrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..rng.gen_range(1..=4) {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = int(rng.gen_range(-1..=1));
        for col in 0..n {
            let v = m[(i, col)].clone() + c.clone() * m[(j, col)].clone();
            m[(i, col)] = v;
        }
    }
    if rng.gen_bool(0.3) {
        let i = rng.gen_range(0..n);
        for col in 0..n {
            m[(i, col)] = -m[(i, col)].clone();
        }
    }
    m
}

/// A point of the two-dimensional transverse locus `θθ̂ ∈ {0, 2}`.
pub fn locus_point<R: Rng + ?Sized>(rng: &mut R) -> (Rational, Rational) {
    match rng.gen_range(0..4) {
        0 => (Rational::zero(), rational(rng)),
        1 => (rational(rng), Rational::zero()),
        _ => {
            let t = nonzero_rational(rng);
            let th = int(2) / &t;
            (t, th)
        }
    }
}

fn block_sum(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let z1 = QMatrix::zeros(a.rows(), b.cols());
    let z2 = QMatrix::zeros(b.rows(), a.cols());
    QMatrix::block(a, &z1, &z2, b).expect("block shapes")
}

/// Conjugates `(S, Ŝ)` to `(LᵀSL, L⁻¹ŜL⁻ᵀ)`, which sends `φ` to `L⁻¹φL`.
pub fn conjugate(p: &TransversePair, l: &QMatrix) -> TransversePair {
    let li = l.inverse().expect("unimodular matrices are invertible");
    let s = l.transpose().try_mul(p.s().sigma()).and_then(|m| m.try_mul(l));
    let s_hat = li.try_mul(p.s_hat().sigma()).and_then(|m| m.try_mul(&li.transpose()));
    let s = CocycleClass::new(s.expect("square")).expect("antisymmetric");
    let s_hat = CocycleClass::new(s_hat.expect("square")).expect("antisymmetric");
    TransversePair::new(s, s_hat).expect("conjugation preserves transversality")
}

pub fn transverse_pair_2d<R: Rng + ?Sized>(rng: &mut R) -> TransversePair {
    let (t, th) = locus_point(rng);
    TransversePair::new(CocycleClass::theta(t), CocycleClass::theta(th)).expect("on the locus")
}

/// Block sum of two planar locus points, conjugated by a random unimodular `L`.
pub fn transverse_pair_4d<R: Rng + ?Sized>(rng: &mut R) -> TransversePair {
    let a = transverse_pair_2d(rng);
    let b = transverse_pair_2d(rng);
    let s = CocycleClass::new(block_sum(a.s().sigma(), b.s().sigma())).expect("antisymmetric");
    let s_hat =
        CocycleClass::new(block_sum(a.s_hat().sigma(), b.s_hat().sigma())).expect("antisymmetric");
    let p = TransversePair::new(s, s_hat).expect("block sums stay transverse");
    let l = unimodular(rng, 4);
    conjugate(&p, &l)
}

/// A transverse pair in dimension 2 or 4, chosen uniformly.
pub fn transverse_pair<R: Rng + ?Sized>(rng: &mut R) -> TransversePair {
    if rng.gen_bool(0.5) {
        transverse_pair_2d(rng)
    } else {
        transverse_pair_4d(rng)
    }
}

/// A random invertible antisymmetric `2n × 2n` float matrix, `1 ≤ n ≤ 4`,
/// with entries in `[−1, 1]` and no tiny determinant.
pub fn antisymmetric_f64<R: Rng + ?Sized>(rng: &mut R) -> Matrix<f64> {
    let dims = [2usize, 4, 6, 8];
    let dim = *dims.choose(rng).expect("nonempty");
    loop {
        let mut m = Matrix::<f64>::zeros(dim, dim);
        for i in 0..dim {
            for j in i + 1..dim {
                let x: f64 = rng.gen_range(-1.0..1.0);
                m[(i, j)] = x;
                m[(j, i)] = -x;
            }
        }
        if m.det().map(|d| d.abs() > 1e-3).unwrap_or(false) {
            return m;
        }
    }
}

/// A circle class path with winding number `w`: increments `w/L` plus a
/// zero-sum wobble below 1/8 in size.
pub fn circle_path<R: Rng + ?Sized>(rng: &mut R, w: i64) -> ClassPath {
    let len = 4 * w.unsigned_abs() as i64 + 4 + rng.gen_range(0..6);
    let r: Vec<Rational> = (0..len).map(|_| q(rng.gen_range(-7..=7), 64)).collect();
    let mut acc = Rational::zero();
    let mut pairs = vec![(Rational::zero(), Rational::zero())];
    for i in 0..len as usize {
        acc += q(w, len) + &r[i] - &r[(i + 1) % len as usize];
        pairs.push((q(i as i64 + 1, len), acc.clone()));
    }
    ClassPath::from_pairs(Base::Circle, &pairs).expect("jumps stay below 1/2")
}
