//! 2-cocycle classes on ℝⁿ and ℤⁿ, stored by their antisymmetric matrices.
//!
//! A class on ℝⁿ is determined by `sigma = A − Aᵀ` for any strictly upper
//! representative `A` of a bicharacter `ω_A(x, y) = exp(2πi (Ax)ᵀy)`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::rational::{self, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CocycleClass {
    n: usize,
    sigma: QMatrix,
}

#[derive(Deserialize)]
struct CocycleClassRaw {
    n: usize,
    sigma: QMatrix,
}

impl<'de> Deserialize<'de> for CocycleClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CocycleClassRaw::deserialize(d)?;
        if raw.sigma.rows() != raw.n {
            return Err(serde::de::Error::custom(Error::DimensionMismatch {
                expected: raw.n,
                found: raw.sigma.rows(),
            }));
        }
        CocycleClass::new(raw.sigma).map_err(serde::de::Error::custom)
    }
}

impl CocycleClass {
    /// Wraps an antisymmetric matrix.
    pub fn new(sigma: QMatrix) -> Result<Self> {
        if !sigma.is_square() || sigma.rows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: sigma.rows().max(1),
                found: sigma.cols(),
            });
        }
        if !sigma.is_antisymmetric() {
            return Err(Error::NotAntisymmetric);
        }
        Ok(Self {
            n: sigma.rows(),
            sigma,
        })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            sigma: QMatrix::zeros(n, n),
        }
    }

    /// The 2-dimensional class of `ω_θ(x, y) = exp(2πi θ x₂ y₁)`, i.e. `sigma = [[0, θ], [−θ, 0]]`.
    pub fn theta(theta: Rational) -> Self {
        let mut sigma = QMatrix::zeros(2, 2);
        sigma[(0, 1)] = theta.clone();
        sigma[(1, 0)] = -theta;
        Self { n: 2, sigma }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> &QMatrix {
        &self.sigma
    }

    pub fn into_sigma(self) -> QMatrix {
        self.sigma
    }

    /// The `(0, 1)` entry; the class parameter θ when `n = 2`.
    pub fn theta_param(&self) -> Rational {
        if self.n < 2 {
            Rational::zero()
        } else {
            self.sigma[(0, 1)].clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sigma.is_zero()
    }

    /// Canonical upper representative: the strictly upper part of `sigma`.
    pub fn upper(&self) -> UpperRepresentative {
        let a = QMatrix::from_fn(self.n, self.n, |i, j| {
            if i < j {
                self.sigma[(i, j)].clone()
            } else {
                Rational::zero()
            }
        });
        UpperRepresentative { n: self.n, a }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperRepresentative {
    n: usize,
    a: QMatrix,
}

impl UpperRepresentative {
    pub fn new(a: QMatrix) -> Result<Self> {
        if !a.is_square() || a.rows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: a.rows().max(1),
                found: a.cols(),
            });
        }
        let n = a.rows();
        for i in 0..n {
            for j in 0..=i {
                if !a[(i, j)].is_zero() {
                    return Err(Error::NotStrictlyUpper);
                }
            }
        }
        Ok(Self { n, a })
    }

    /// Builds from the upper entries ordered (1,2), (1,3), …, (n−1,n).
    pub fn from_entries(n: usize, entries: &[Rational]) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if entries.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: entries.len(),
            });
        }
        let mut a = QMatrix::zeros(n, n);
        let mut it = entries.iter();
        for i in 0..n {
            for j in i + 1..n {
                a[(i, j)] = it.next().cloned().unwrap_or_default();
            }
        }
        Ok(Self { n, a })
    }

    pub fn theta(theta: Rational) -> Self {
        let mut a = QMatrix::zeros(2, 2);
        a[(0, 1)] = theta;
        Self { n: 2, a }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.a
    }
}

/// A class in H²(ℤⁿ, U(1)) ≅ 𝕋^{n(n−1)/2}. Entries live in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusClass {
    n: usize,
    #[serde(with = "rational::serde_q_vec")]
    entries: Vec<Rational>,
}

impl TorusClass {
    /// Reduces each entry mod 1.
    pub fn new(n: usize, entries: Vec<Rational>) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if entries.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: entries.len(),
            });
        }
        Ok(Self {
            n,
            entries: entries.iter().map(rational::frac).collect(),
        })
    }

    pub fn scalar(t: Rational) -> Self {
        Self {
            n: 2,
            entries: vec![rational::frac(&t)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeAutomorphism {
    n: usize,
    m: QMatrix,
}

impl LatticeAutomorphism {
    pub fn new(m: QMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.rows(),
                found: m.cols(),
            });
        }
        if !m.is_integral() {
            return Err(Error::NotLatticeAutomorphism("non-integer entry".into()));
        }
        let d = m.det()?;
        if d != int(1) && d != int(-1) {
            return Err(Error::NotLatticeAutomorphism(format!(
                "determinant {}",
                rational::format(&d)
            )));
        }
        Ok(Self { n: m.rows(), m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.m
    }
}

pub fn antisym_of(a: &UpperRepresentative) -> CocycleClass {
    let sigma = a
        .a
        .try_sub(&a.a.transpose())
        .expect("square matrix minus its transpose");
    CocycleClass { n: a.n, sigma }
}

/// `(A x)ᵀ y mod 1`, the phase of `ω_A(x, y)`.
pub fn evaluate(a: &UpperRepresentative, x: &[Rational], y: &[Rational]) -> Result<Rational> {
    for v in [x, y] {
        if v.len() != a.n {
            return Err(Error::DimensionMismatch {
                expected: a.n,
                found: v.len(),
            });
        }
    }
    let mut acc = Rational::zero();
    for i in 0..a.n {
        for j in 0..a.n {
            acc += &a.a[(i, j)] * &x[j] * &y[i];
        }
    }
    Ok(rational::frac(&acc))
}

pub fn is_totally_skew(c: &CocycleClass) -> bool {
    c.sigma.det().map(|d| !d.is_zero()).unwrap_or(false)
}

/// The class whose matrix is `sigma⁻¹`.
pub fn dual_class(c: &CocycleClass) -> Result<CocycleClass> {
    let inv = c.sigma.inverse().map_err(|_| Error::NotTotallySkew)?;
    Ok(CocycleClass { n: c.n, sigma: inv })
}

pub fn restrict_to_torus(c: &CocycleClass) -> TorusClass {
    let mut entries = Vec::with_capacity(c.n * (c.n - 1) / 2);
    for i in 0..c.n {
        for j in i + 1..c.n {
            entries.push(rational::frac(&c.sigma[(i, j)]));
        }
    }
    TorusClass { n: c.n, entries }
}

/// All integer translates of `t` with every shift in `[−bound, bound]`.
pub fn lifts_of(t: &TorusClass, bound: u32) -> Vec<CocycleClass> {
    let shifts: Vec<i64> = (-(bound as i64)..=bound as i64).collect();
    let mut combos: Vec<Vec<Rational>> = vec![Vec::new()];
    for e in &t.entries {
        combos = combos
            .into_iter()
            .flat_map(|prefix| {
                shifts.iter().map(move |&m| {
                    let mut next = prefix.clone();
                    next.push(e + int(m));
                    next
                })
            })
            .collect();
    }
    combos
        .into_iter()
        .map(|entries| {
            let a = UpperRepresentative::from_entries(t.n, &entries)
                .expect("entry count matches dimension");
            antisym_of(&a)
        })
        .collect()
}

/// `lᵀ · sigma · l`.
pub fn pullback(l: &QMatrix, c: &CocycleClass) -> Result<CocycleClass> {
    if !l.is_square() || l.rows() != c.n {
        return Err(Error::DimensionMismatch {
            expected: c.n,
            found: l.rows(),
        });
    }
    let sigma = l.transpose().try_mul(&c.sigma)?.try_mul(l)?;
    Ok(CocycleClass { n: c.n, sigma })
}

/// Push-forward along an invertible `phi`, i.e. pullback along `phi⁻¹`.
pub fn pushforward(phi: &QMatrix, c: &CocycleClass) -> Result<CocycleClass> {
    pullback(&phi.inverse()?, c)
}

pub fn class_product(c1: &CocycleClass, c2: &CocycleClass) -> Result<CocycleClass> {
    if c1.n != c2.n {
        return Err(Error::DimensionMismatch {
            expected: c1.n,
            found: c2.n,
        });
    }
    Ok(CocycleClass {
        n: c1.n,
        sigma: c1.sigma.try_add(&c2.sigma)?,
    })
}

pub fn class_inverse(c: &CocycleClass) -> CocycleClass {
    CocycleClass {
        n: c.n,
        sigma: c.sigma.scale(&int(-1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn upper3(a12: i64, a13: i64, a23: i64) -> UpperRepresentative {
        UpperRepresentative::from_entries(3, &[int(a12), int(a13), int(a23)]).unwrap()
    }

    #[test]
    fn antisym_examples() {
        let c = antisym_of(&UpperRepresentative::theta(q(1, 3)));
        assert_eq!(c, CocycleClass::theta(q(1, 3)));
        assert!(antisym_of(&upper3(0, 0, 0)).is_zero());
        let c = antisym_of(&upper3(1, 2, 3));
        let expected = QMatrix::from_i64_rows(&[&[0, 1, 2], &[-1, 0, 3], &[-2, -3, 0]]);
        assert_eq!(c.sigma(), &expected);
    }

    #[test]
    fn evaluate_theta_cocycle() {
        let a = UpperRepresentative::theta(q(1, 3));
        let v = evaluate(&a, &[int(0), int(1)], &[int(1), int(0)]).unwrap();
        assert_eq!(v, q(1, 3));
        assert_eq!(evaluate(&a, &[int(0), int(0)], &[int(5), q(1, 7)]).unwrap(), int(0));
        assert!(evaluate(&a, &[int(0)], &[int(1), int(0)]).is_err());
    }

    #[test]
    fn strictly_upper_enforced() {
        let bad = QMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(UpperRepresentative::new(bad), Err(Error::NotStrictlyUpper));
        let not_anti = QMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(CocycleClass::new(not_anti), Err(Error::NotAntisymmetric));
    }

    #[test]
    fn total_skewness() {
        assert!(is_totally_skew(&CocycleClass::theta(q(2, 3))));
        assert!(!is_totally_skew(&CocycleClass::zero(2)));
        let j = QMatrix::from_i64_rows(&[&[0, 1], &[-1, 0]]);
        let z = QMatrix::zeros(2, 2);
        let m = QMatrix::block(&j, &z, &z, &z).unwrap();
        assert!(!is_totally_skew(&CocycleClass::new(m).unwrap()));
    }

    /// Antisymmetrises `B = Σ⁻¹ A Σ⁻¹`, the cochain-level dual representative.
    fn dual_via_b(c: &CocycleClass) -> QMatrix {
        let a = c.upper();
        let si = c.sigma().inverse().unwrap();
        let b = si.try_mul(a.matrix()).unwrap().try_mul(&si).unwrap();
        b.try_sub(&b.transpose()).unwrap()
    }

    #[test]
    fn dual_class_examples() {
        let c = CocycleClass::theta(int(2));
        let d = dual_class(&c).unwrap();
        assert_eq!(d, CocycleClass::theta(q(-1, 2)));
        assert_eq!(d.sigma(), &dual_via_b(&c));
        let d1 = dual_class(&CocycleClass::theta(int(1))).unwrap();
        assert_eq!(d1, CocycleClass::theta(int(-1)));
        assert_eq!(d1.sigma(), &dual_via_b(&CocycleClass::theta(int(1))));
        assert_eq!(dual_class(&CocycleClass::zero(2)), Err(Error::NotTotallySkew));
    }

    #[test]
    fn restriction_examples() {
        let r = |t| restrict_to_torus(&CocycleClass::theta(t)).entries()[0].clone();
        assert_eq!(r(int(3)), int(0));
        assert_eq!(r(q(-2, 3)), q(1, 3));
        assert_eq!(r(int(0)), int(0));
    }

    #[test]
    fn lifts_examples() {
        let t = TorusClass::scalar(q(2, 3));
        let thetas: Vec<_> = lifts_of(&t, 1).iter().map(CocycleClass::theta_param).collect();
        assert_eq!(thetas, vec![q(-1, 3), q(2, 3), q(5, 3)]);
        let zero = TorusClass::scalar(int(0));
        assert_eq!(lifts_of(&zero, 0), vec![CocycleClass::zero(2)]);
        let t3 = TorusClass::new(3, vec![q(1, 2), q(1, 3), q(1, 5)]).unwrap();
        let ls = lifts_of(&t3, 2);
        assert_eq!(ls.len(), 125);
        assert!(ls.iter().all(|c| restrict_to_torus(c) == t3));
    }

    #[test]
    fn pullback_examples() {
        let c = CocycleClass::theta(q(2, 5));
        assert_eq!(pullback(&QMatrix::identity(2), &c).unwrap(), c);
        let s = q(3, 2);
        let l = QMatrix::scalar(2, s.clone());
        let p = pullback(&l, &c).unwrap();
        assert_eq!(p, CocycleClass::theta(q(2, 5) * &s * &s));
        // cocycle level: ω(lx, ly) antisymmetrised equals the pulled-back pairing
        let a = c.upper();
        let x = [q(1, 3), int(2)];
        let y = [int(-1), q(5, 7)];
        let lx: Vec<_> = x.iter().map(|v| v * &s).collect();
        let ly: Vec<_> = y.iter().map(|v| v * &s).collect();
        let lhs = rational::frac(
            &(evaluate(&a, &lx, &ly).unwrap() - evaluate(&a, &ly, &lx).unwrap()),
        );
        let pa = p.upper();
        let rhs = rational::frac(
            &(evaluate(&pa, &x, &y).unwrap() - evaluate(&pa, &y, &x).unwrap()),
        );
        assert_eq!(lhs, rhs);
        let phi = QMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        assert_eq!(
            pushforward(&phi, &c).unwrap(),
            pullback(&phi.inverse().unwrap(), &c).unwrap()
        );
    }

    #[test]
    fn group_structure() {
        let c = CocycleClass::theta(q(1, 2));
        assert!(class_product(&c, &class_inverse(&c)).unwrap().is_zero());
        let p = class_product(&c, &CocycleClass::theta(q(1, 3))).unwrap();
        assert_eq!(p, CocycleClass::theta(q(5, 6)));
        assert!(class_product(&c, &CocycleClass::zero(3)).is_err());
    }

    #[test]
    fn lattice_automorphism_det() {
        assert!(LatticeAutomorphism::new(QMatrix::from_i64_rows(&[&[2, 1], &[1, 1]])).is_ok());
        assert!(LatticeAutomorphism::new(QMatrix::from_i64_rows(&[&[2, 0], &[0, 1]])).is_err());
    }

    #[test]
    fn json_shape() {
        let c = CocycleClass::theta(q(2, 3));
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v, serde_json::json!({"n": 2, "sigma": [["0/1", "2/3"], ["-2/3", "0/1"]]}));
        let back: CocycleClass = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
        let t = serde_json::to_value(TorusClass::scalar(q(-2, 3))).unwrap();
        assert_eq!(t, serde_json::json!({"n": 2, "entries": ["1/3"]}));
        let bad = serde_json::json!({"n": 2, "sigma": [["0", "1"], ["1", "0"]]});
        assert!(serde_json::from_value::<CocycleClass>(bad).is_err());
    }

    fn small_q() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=7).prop_map(|(p, d)| q(p, d))
    }

    fn class(n: usize) -> impl Strategy<Value = CocycleClass> {
        proptest::collection::vec(small_q(), n * (n - 1) / 2).prop_map(move |e| {
            antisym_of(&UpperRepresentative::from_entries(n, &e).unwrap())
        })
    }

    fn square(n: usize) -> impl Strategy<Value = QMatrix> {
        proptest::collection::vec(small_q(), n * n)
            .prop_map(move |v| QMatrix::from_fn(n, n, |i, j| v[i * n + j].clone()))
    }

    proptest! {
        #[test]
        fn antisym_is_antisymmetric(c in (2usize..5).prop_flat_map(class)) {
            prop_assert!(c.sigma().is_antisymmetric());
            prop_assert_eq!(antisym_of(&c.upper()), c);
        }

        #[test]
        fn double_dual(c in prop_oneof![class(2), class(4)]) {
            prop_assume!(is_totally_skew(&c));
            let dd = dual_class(&dual_class(&c).unwrap()).unwrap();
            prop_assert_eq!(dd, c);
        }

        #[test]
        fn dual_matches_b_formula(c in prop_oneof![class(2), class(4)]) {
            prop_assume!(is_totally_skew(&c));
            prop_assert_eq!(dual_class(&c).unwrap().into_sigma(), dual_via_b(&c));
        }

        #[test]
        fn antisymmetrised_evaluation(
            c in class(3),
            x in proptest::collection::vec(small_q(), 3),
            y in proptest::collection::vec(small_q(), 3),
        ) {
            let a = c.upper();
            let lhs = rational::frac(&(evaluate(&a, &x, &y).unwrap() - evaluate(&a, &y, &x).unwrap()));
            // ω(x,y)/ω(y,x) = exp(2πi (sigma·x)ᵀ y)
            let mut sx = Rational::zero();
            for i in 0..3 {
                for j in 0..3 {
                    sx += &c.sigma()[(i, j)] * &x[j] * &y[i];
                }
            }
            prop_assert_eq!(lhs, rational::frac(&sx));
        }

        #[test]
        fn restriction_kernel(c in class(3), shifts in proptest::collection::vec(-5i64..=5, 3)) {
            let ints: Vec<_> = shifts.iter().map(|&s| int(s)).collect();
            let k = antisym_of(&UpperRepresentative::from_entries(3, &ints).unwrap());
            prop_assert_eq!(restrict_to_torus(&class_product(&c, &k).unwrap()), restrict_to_torus(&c));
        }

        #[test]
        fn pullback_contravariant(c in class(3), l1 in square(3), l2 in square(3)) {
            let l12 = l1.try_mul(&l2).unwrap();
            let lhs = pullback(&l12, &c).unwrap();
            let rhs = pullback(&l2, &pullback(&l1, &c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn product_commutes(a in class(3), b in class(3)) {
            prop_assert_eq!(class_product(&a, &b).unwrap(), class_product(&b, &a).unwrap());
        }
    }
}
