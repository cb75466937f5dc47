//! Dense complex matrices on small Hilbert spaces.
//!
//! [`Operator`] wraps a square `Array2<C64>`. Everything here is sized for
//! atom spaces (n <= 16) and single Fock modes (d <= ~40); the joint-space
//! oracle reuses the same helpers on blocks of a few hundred rows.

use std::ops::{Add, Mul, Sub};

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Dense square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    mat: Array2<C64>,
}

impl Operator {
    pub fn from_array(mat: Array2<C64>) -> Result<Self> {
        let (r, c) = mat.dim();
        if r != c {
            return Err(Error::Dimension(format!("operator must be square, got {r}x{c}")));
        }
        if r == 0 {
            return Err(Error::Dimension("operator must have dimension >= 1".into()));
        }
        Ok(Self { mat })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: Array2::zeros((dim, dim)),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self { mat: Array2::eye(dim) }
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let mut mat = Array2::zeros((entries.len(), entries.len()));
        for (k, &v) in entries.iter().enumerate() {
            mat[[k, k]] = v;
        }
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.mat[[row, col]]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.mat[[row, col]] = value;
    }

    pub fn as_array(&self) -> &Array2<C64> {
        &self.mat
    }

    pub fn into_array(self) -> Array2<C64> {
        self.mat
    }

    pub fn view(&self) -> ArrayView2<'_, C64> {
        self.mat.view()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self {
            mat: self.mat.t().mapv(|z| z.conj()),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.dot(&other.mat),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            mat: &self.mat * factor,
        }
    }

    /// Integer matrix power by repeated squaring; `power(0)` is the identity.
    pub fn power(&self, mut exp: u32) -> Self {
        let mut result = Self::identity(self.dim());
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.matmul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.matmul(&base);
            }
        }
        result
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.mat)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |U^dagger U - I|` entrywise.
    pub fn unitarity_defect(&self) -> f64 {
        self.dagger().matmul(self).max_abs_diff(&Self::identity(self.dim()))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn trace(&self) -> C64 {
        self.mat.diag().sum()
    }

    /// Returns `Some(lambda)` when the operator equals `lambda * I` within `tol`.
    pub fn as_scalar(&self, tol: f64) -> Option<C64> {
        let lambda = self.mat[[0, 0]];
        let scaled = Self::identity(self.dim()).scale(lambda);
        (self.max_abs_diff(&scaled) <= tol).then_some(lambda)
    }

    /// Matrix exponential, see [`expm`].
    pub fn exp(&self) -> Result<Self> {
        expm(&self.mat).map(|mat| Self { mat })
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator {
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator {
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.matmul(rhs)
    }
}

pub(crate) fn max_abs(mat: &Array2<C64>) -> f64 {
    mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn one_norm(a: &Array2<C64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

// Pade(13) numerator coefficients, Higham 2005.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with a degree-13 Pade
/// approximant.
pub fn expm(a: &Array2<C64>) -> Result<Array2<C64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Dimension(format!(
            "expm needs a square matrix, got {:?}",
            a.dim()
        )));
    }
    let norm = one_norm(a);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let a = a * C64::new(2f64.powi(-squarings), 0.0);

    let ident: Array2<C64> = Array2::eye(n);
    let a2 = a.dot(&a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);
    let b = |k: usize| C64::new(PADE13[k], 0.0);

    let u_inner = &a6 * b(13) + &a4 * b(11) + &a2 * b(9);
    let u_outer = a6.dot(&u_inner) + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &ident * b(1);
    let u = a.dot(&u_outer);
    let v_inner = &a6 * b(12) + &a4 * b(10) + &a2 * b(8);
    let v = a6.dot(&v_inner) + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &ident * b(0);

    let mut r = solve(&(&v - &u), &(&v + &u))?;
    for _ in 0..squarings {
        r = r.dot(&r);
    }
    Ok(r)
}

/// Solves `A X = B` by LU decomposition with partial pivoting.
pub fn solve(a: &Array2<C64>, b: &Array2<C64>) -> Result<Array2<C64>> {
    let n = a.nrows();
    let mut lu = a.clone();
    let mut x = b.clone();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| lu[[i, col]].norm().total_cmp(&lu[[j, col]].norm()))
            .unwrap_or(col);
        if lu[[pivot, col]].norm() == 0.0 {
            return Err(Error::Singular);
        }
        if pivot != col {
            for k in 0..n {
                lu.swap([pivot, k], [col, k]);
            }
            for k in 0..x.ncols() {
                x.swap([pivot, k], [col, k]);
            }
        }
        let diag = lu[[col, col]];
        for row in col + 1..n {
            let factor = lu[[row, col]] / diag;
            if factor == C64::new(0.0, 0.0) {
                continue;
            }
            for k in col..n {
                let upd = factor * lu[[col, k]];
                lu[[row, k]] -= upd;
            }
            for k in 0..x.ncols() {
                let upd = factor * x[[col, k]];
                x[[row, k]] -= upd;
            }
        }
    }
    for col in (0..n).rev() {
        let diag = lu[[col, col]];
        for k in 0..x.ncols() {
            let mut acc = x[[col, k]];
            for j in col + 1..n {
                acc -= lu[[col, j]] * x[[j, k]];
            }
            x[[col, k]] = acc / diag;
        }
    }
    Ok(x)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[[i, j]];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            let mut block = out.slice_mut(ndarray::s![i * br..(i + 1) * br, j * bc..(j + 1) * bc]);
            block.zip_mut_with(b, |o, &v| *o = aij * v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn expm_of_diagonal() {
        let d = Operator::diagonal(&[c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.5)]);
        let e = d.exp().unwrap();
        for (k, z) in [c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.5)].iter().enumerate() {
            assert!((e.get(k, k) - z.exp()).norm() < 1e-14);
        }
        assert!(e.get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn expm_of_rotation_generator_with_large_norm() {
        // exp(i theta X) = cos theta I + i sin theta X
        let theta = 37.3;
        let mut gen = Operator::zeros(2);
        gen.set(0, 1, c(0.0, theta));
        gen.set(1, 0, c(0.0, theta));
        let e = gen.exp().unwrap();
        assert!((e.get(0, 0) - c(theta.cos(), 0.0)).norm() < 1e-12);
        assert!((e.get(0, 1) - c(0.0, theta.sin())).norm() < 1e-12);
    }

    #[test]
    fn solve_recovers_known_solution() {
        let a = Array2::from_shape_vec(
            (3, 3),
            vec![
                c(0.0, 0.0),
                c(2.0, 1.0),
                c(1.0, 0.0),
                c(1.0, 0.0),
                c(1.0, -1.0),
                c(0.0, 0.0),
                c(3.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 2.0),
            ],
        )
        .unwrap();
        let x = Array2::from_shape_vec((3, 1), vec![c(1.0, 0.0), c(-1.0, 2.0), c(0.5, 0.5)]).unwrap();
        let b = a.dot(&x);
        let got = solve(&a, &b).unwrap();
        assert!(max_abs(&(&got - &x)) < 1e-14);
    }

    #[test]
    fn singular_solve_errors() {
        let a = Array2::<C64>::zeros((2, 2));
        assert_eq!(solve(&a, &Array2::eye(2)), Err(Error::Singular));
    }

    #[test]
    fn power_and_scalar_detection() {
        let mut x = Operator::zeros(2);
        x.set(0, 1, c(0.0, 1.0));
        x.set(1, 0, c(0.0, 1.0));
        let sq = x.power(2);
        assert_eq!(sq.as_scalar(1e-15), Some(c(-1.0, 0.0)));
        assert_eq!(x.power(0), Operator::identity(2));
        assert!(x.as_scalar(1e-12).is_none());
    }

    #[test]
    fn kron_layout() {
        let a = Array2::from_shape_vec((2, 2), vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
        let b: Array2<C64> = Array2::eye(2);
        let k = kron(&a, &b);
        assert_eq!(k[[0, 2]], c(2.0, 0.0));
        assert_eq!(k[[3, 1]], c(3.0, 0.0));
        assert_eq!(k[[1, 0]], c(0.0, 0.0));
    }

    #[test]
    fn rejects_non_square() {
        assert!(Operator::from_array(Array2::zeros((2, 3))).is_err());
    }
}
