//! Darboux-basis factorisation `Σ = φᵀ J φ` of an invertible antisymmetric form.

use crate::error::{Error, Result};
use crate::matrix::{Field, Matrix, QMatrix};

/// Float version. `tolerance` bounds both the antisymmetry defect and the
/// smallest acceptable pivot, relative to the largest entry of `v`.
pub fn polarize(v: &Matrix<f64>, tolerance: f64) -> Result<Matrix<f64>> {
    check_shape(v)?;
    let scale = v.max_abs().max(1.0);
    let defect = v.try_add(&v.transpose())?.max_abs();
    if defect > tolerance * scale {
        return Err(Error::NotAntisymmetric);
    }
    darboux(v, |x: &f64| x.abs() <= tolerance * scale)
}

/// Exact rational version.
pub fn polarize_exact(v: &QMatrix) -> Result<QMatrix> {
    check_shape(v)?;
    if !v.is_antisymmetric() {
        return Err(Error::NotAntisymmetric);
    }
    darboux(v, Field::is_zero)
}

fn check_shape<T: Field>(v: &Matrix<T>) -> Result<()> {
    if !v.is_square() {
        return Err(Error::DimensionMismatch {
            expected: v.rows(),
            found: v.cols(),
        });
    }
    if v.rows() == 0 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: 0,
        });
    }
    Ok(())
}

fn form<T: Field>(v: &Matrix<T>, x: &[T], y: &[T]) -> T {
    let mut acc = T::zero();
    for i in 0..v.rows() {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..v.cols() {
            acc = acc + x[i].clone() * v[(i, j)].clone() * y[j].clone();
        }
    }
    acc
}

/// Symplectic Gram-Schmidt: builds `B = [e₁…eₙ f₁…fₙ]` with `Bᵀ v B = J` and returns `B⁻¹`.
fn darboux<T: Field>(v: &Matrix<T>, negligible: impl Fn(&T) -> bool) -> Result<Matrix<T>> {
    let dim = v.rows();
    if dim % 2 == 1 {
        // odd antisymmetric matrices are singular
        return Err(Error::Singular);
    }
    let n = dim / 2;
    let mut work: Vec<Vec<T>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    let mut es = Vec::with_capacity(n);
    let mut fs = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<(usize, usize, T, f64)> = None;
        for a in 0..work.len() {
            for b in a + 1..work.len() {
                let val = form(v, &work[a], &work[b]);
                let mag = val.magnitude();
                if best.as_ref().map_or(true, |(_, _, _, m)| mag > *m) {
                    best = Some((a, b, val, mag));
                }
            }
        }
        let (a, b, pivot, _) = best.ok_or(Error::Singular)?;
        if negligible(&pivot) {
            return Err(Error::Singular);
        }
        let fb = work.remove(b);
        let e = work.remove(a);
        let f: Vec<T> = fb.into_iter().map(|x| x / pivot.clone()).collect();
        for w in &mut work {
            let fw = form(v, &f, w);
            let ew = form(v, &e, w);
            for i in 0..dim {
                w[i] = w[i].clone() + fw.clone() * e[i].clone() - ew.clone() * f[i].clone();
            }
        }
        es.push(e);
        fs.push(f);
    }
    let cols: Vec<&Vec<T>> = es.iter().chain(fs.iter()).collect();
    let basis = Matrix::from_fn(dim, dim, |i, j| cols[j][i].clone());
    basis.inverse()
}
