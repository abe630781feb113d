//! Compact classical groups SO(n), U(n), Sp(n): Haar sampling, corners, the
//! Υ-map, the Cayley transform and cube coordinates.
//!
//! Quaternionic matrices are stored in their 2n×2n complex realization: the
//! quaternion `a + b·j` (a, b complex) becomes the block `[[a, b], [-b̄, ā]]`.
//! A quaternionic k×k corner is therefore the complex 2k×2k corner.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};

/// |det(1+P)| below this makes the Υ-map undefined.
pub const UPSILON_TOL: f64 = 1e-12;
/// |det(g+1)| below this makes the Cayley transform undefined.
pub const CAYLEY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
    Quaternion,
}

impl Field {
    /// Rows of the stored realization per scalar row.
    pub fn width(self) -> usize {
        match self {
            Field::Quaternion => 2,
            _ => 1,
        }
    }

    pub fn group_name(self) -> &'static str {
        match self {
            Field::Real => "so",
            Field::Complex => "u",
            Field::Quaternion => "sp",
        }
    }
}

/// A square matrix over ℝ, ℂ or ℍ (the latter in complex realization).
#[derive(Debug, Clone, PartialEq)]
pub enum FieldMatrix {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
    Quaternion(DMatrix<Complex64>),
}

fn max_abs<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    m.iter().map(|x| x.clone().modulus()).fold(0.0, f64::max)
}

fn corner_of<T: ComplexField>(m: &DMatrix<T>, k: usize) -> DMatrix<T> {
    m.view((0, 0), (k, k)).into_owned()
}

fn upsilon_rows<T: ComplexField<RealField = f64>>(g: &DMatrix<T>, m: usize) -> Result<DMatrix<T>> {
    let n = g.nrows();
    let p = g.view((0, 0), (m, m));
    let q = g.view((0, m), (m, n - m));
    let r = g.view((m, 0), (n - m, m));
    let t = g.view((m, m), (n - m, n - m));
    let one_plus_p = DMatrix::<T>::identity(m, m) + p;
    let lu = one_plus_p.lu();
    let det = lu.determinant().modulus();
    if det < UPSILON_TOL {
        return Err(Error::SingularUpsilon { det });
    }
    let x = lu.solve(&q.into_owned()).expect("nonsingular by the determinant check");
    Ok(t.into_owned() - r * x)
}

fn cayley_of<T: ComplexField<RealField = f64>>(g: &DMatrix<T>) -> Result<DMatrix<T>> {
    let n = g.nrows();
    let id = DMatrix::<T>::identity(n, n);
    let lu = (g + &id).lu();
    let det = lu.determinant().modulus();
    if det < CAYLEY_TOL {
        return Err(Error::SingularCayley { det });
    }
    let inv = lu.try_inverse().expect("nonsingular by the determinant check");
    Ok((g - id) * inv)
}

fn block_diag_one<T: ComplexField>(m: usize, a: &DMatrix<T>) -> DMatrix<T> {
    let k = a.nrows();
    let mut out = DMatrix::<T>::identity(m + k, m + k);
    out.view_mut((m, m), (k, k)).copy_from(a);
    out
}

impl FieldMatrix {
    pub fn identity(field: Field, n: usize) -> Self {
        match field {
            Field::Real => FieldMatrix::Real(DMatrix::identity(n, n)),
            Field::Complex => FieldMatrix::Complex(DMatrix::identity(n, n)),
            Field::Quaternion => FieldMatrix::Quaternion(DMatrix::identity(2 * n, 2 * n)),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            FieldMatrix::Real(_) => Field::Real,
            FieldMatrix::Complex(_) => Field::Complex,
            FieldMatrix::Quaternion(_) => Field::Quaternion,
        }
    }

    /// Size over the scalar field.
    pub fn n(&self) -> usize {
        self.storage_rows() / self.field().width()
    }

    fn storage_rows(&self) -> usize {
        match self {
            FieldMatrix::Real(m) => m.nrows(),
            FieldMatrix::Complex(m) | FieldMatrix::Quaternion(m) => m.nrows(),
        }
    }

    /// Upper-left k×k corner over the scalar field.
    pub fn corner(&self, k: usize) -> FieldMatrix {
        match self {
            FieldMatrix::Real(m) => FieldMatrix::Real(corner_of(m, k)),
            FieldMatrix::Complex(m) => FieldMatrix::Complex(corner_of(m, k)),
            FieldMatrix::Quaternion(m) => FieldMatrix::Quaternion(corner_of(m, 2 * k)),
        }
    }

    /// Lower-right k×k corner over the scalar field.
    pub fn lower_right(&self, k: usize) -> FieldMatrix {
        let w = self.field().width();
        let s = self.storage_rows() - w * k;
        let take = |m: &DMatrix<Complex64>| m.view((s, s), (w * k, w * k)).into_owned();
        match self {
            FieldMatrix::Real(m) => FieldMatrix::Real(m.view((s, s), (k, k)).into_owned()),
            FieldMatrix::Complex(m) => FieldMatrix::Complex(take(m)),
            FieldMatrix::Quaternion(m) => FieldMatrix::Quaternion(take(m)),
        }
    }

    /// det(1 + A): the real or complex determinant, or the quaternionic
    /// (Study) determinant, which is real and nonnegative.
    pub fn det_one_plus(&self) -> Result<Complex64> {
        match self {
            FieldMatrix::Real(m) => {
                let n = m.nrows();
                Ok(Complex64::new((DMatrix::identity(n, n) + m).determinant(), 0.0))
            }
            FieldMatrix::Complex(m) => {
                let n = m.nrows();
                Ok((DMatrix::identity(n, n) + m).determinant())
            }
            FieldMatrix::Quaternion(m) => {
                let n = m.nrows();
                Ok(Complex64::new(quaternionic_det(&(DMatrix::identity(n, n) + m))?, 0.0))
            }
        }
    }

    /// Eigenvalues of A (complex), used for a branch-continuous log det(1+A).
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let c = self.to_complex();
        c.schur()
            .eigenvalues()
            .map(|v| v.iter().copied().collect())
            .unwrap_or_default()
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        match self {
            FieldMatrix::Real(m) => m.map(|x| Complex64::new(x, 0.0)),
            FieldMatrix::Complex(m) | FieldMatrix::Quaternion(m) => m.clone(),
        }
    }

    pub fn sub_max_abs(&self, other: &FieldMatrix) -> f64 {
        match (self, other) {
            (FieldMatrix::Real(a), FieldMatrix::Real(b)) => max_abs(&(a - b)),
            _ => max_abs(&(self.to_complex() - other.to_complex())),
        }
    }

    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        match (self, other) {
            (FieldMatrix::Real(a), FieldMatrix::Real(b)) => FieldMatrix::Real(a * b),
            (FieldMatrix::Complex(a), FieldMatrix::Complex(b)) => FieldMatrix::Complex(a * b),
            (FieldMatrix::Quaternion(a), FieldMatrix::Quaternion(b)) => {
                FieldMatrix::Quaternion(a * b)
            }
            _ => panic!("field mismatch in matrix product"),
        }
    }

    /// diag(1_m, A) over the scalar field.
    pub fn pad_identity(&self, m: usize) -> FieldMatrix {
        match self {
            FieldMatrix::Real(a) => FieldMatrix::Real(block_diag_one(m, a)),
            FieldMatrix::Complex(a) => FieldMatrix::Complex(block_diag_one(m, a)),
            FieldMatrix::Quaternion(a) => FieldMatrix::Quaternion(block_diag_one(2 * m, a)),
        }
    }

    /// ‖A*A − I‖ (max-abs entry).
    pub fn unitarity_residual(&self) -> f64 {
        match self {
            FieldMatrix::Real(m) => {
                let n = m.nrows();
                max_abs(&(m.transpose() * m - DMatrix::<f64>::identity(n, n)))
            }
            FieldMatrix::Complex(m) | FieldMatrix::Quaternion(m) => {
                let n = m.nrows();
                max_abs(&(m.adjoint() * m - DMatrix::<Complex64>::identity(n, n)))
            }
        }
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        match self {
            FieldMatrix::Real(m) => m.clone().singular_values().max(),
            FieldMatrix::Complex(m) | FieldMatrix::Quaternion(m) => {
                m.clone().singular_values().max()
            }
        }
    }

    /// Υ^m(A) = T − R(1+P)^{-1}Q for the block split at scalar index m.
    pub fn upsilon(&self, m: usize) -> Result<FieldMatrix> {
        Ok(match self {
            FieldMatrix::Real(g) => FieldMatrix::Real(upsilon_rows(g, m)?),
            FieldMatrix::Complex(g) => FieldMatrix::Complex(upsilon_rows(g, m)?),
            FieldMatrix::Quaternion(g) => FieldMatrix::Quaternion(upsilon_rows(g, 2 * m)?),
        })
    }

    /// S = (A − 1)(A + 1)^{-1}.
    pub fn cayley(&self) -> Result<FieldMatrix> {
        Ok(match self {
            FieldMatrix::Real(g) => FieldMatrix::Real(cayley_of(g)?),
            FieldMatrix::Complex(g) => FieldMatrix::Complex(cayley_of(g)?),
            FieldMatrix::Quaternion(g) => FieldMatrix::Quaternion(cayley_of(g)?),
        })
    }
}

/// An element of SO(n), U(n) or Sp(n).
#[derive(Debug, Clone, PartialEq)]
pub struct CompactGroupElement {
    matrix: FieldMatrix,
}

impl CompactGroupElement {
    pub const TOL: f64 = 1e-12;

    /// Wraps a matrix after checking unitarity (and det = 1 over ℝ) to `tol`.
    pub fn new(matrix: FieldMatrix, tol: f64) -> Result<Self> {
        let res = matrix.unitarity_residual();
        if res > tol {
            return Err(Error::Precondition(format!(
                "matrix is not unitary (residual {res:e})"
            )));
        }
        if let FieldMatrix::Real(m) = &matrix {
            let d = m.determinant();
            if (d - 1.0).abs() > tol.max(1e-10) {
                return Err(Error::Precondition(format!(
                    "orthogonal matrix has determinant {d}"
                )));
            }
        }
        if let FieldMatrix::Quaternion(m) = &matrix {
            if m.nrows() % 2 != 0 || !is_quaternionic(m, tol.max(1e-10)) {
                return Err(Error::Precondition(
                    "matrix is not a complex realization of a quaternionic matrix".into(),
                ));
            }
        }
        Ok(CompactGroupElement { matrix })
    }

    fn trusted(matrix: FieldMatrix) -> Self {
        CompactGroupElement { matrix }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Self::trusted(FieldMatrix::identity(field, n))
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> FieldMatrix {
        self.matrix
    }

    pub fn corner(&self, k: usize) -> FieldMatrix {
        assert!(k >= 1 && k <= self.n(), "corner size out of range");
        self.matrix.corner(k)
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.matrix.unitarity_residual()
    }

    pub fn mul(&self, other: &CompactGroupElement) -> CompactGroupElement {
        Self::trusted(self.matrix.mul(&other.matrix))
    }

    /// Υ^m(g) ∈ SO(n−m) / U(n−m) / Sp(n−m).
    pub fn upsilon(&self, m: usize) -> Result<CompactGroupElement> {
        if m == 0 || m >= self.n() {
            return Err(Error::Precondition(format!(
                "upsilon needs 1 <= m < n, got m={m}, n={}",
                self.n()
            )));
        }
        Ok(Self::trusted(self.matrix.upsilon(m)?))
    }

    pub fn cayley(&self) -> Result<FieldMatrix> {
        self.matrix.cayley()
    }

    /// Coordinates (x₁, …, x_{n−1}) with x_{n−1} = [g]₁ and
    /// x_j = [Υ^{n−1−j}(g)]₁, obtained by iterating Υ¹.
    pub fn cube_coords(&self) -> Result<Vec<f64>> {
        let FieldMatrix::Real(_) = self.matrix else {
            return Err(Error::Precondition("cube coordinates need SO(n)".into()));
        };
        let n = self.n();
        let mut x = vec![0.0; n.saturating_sub(1)];
        let mut cur = self.matrix.clone();
        for j in (1..n).rev() {
            let FieldMatrix::Real(m) = &cur else { unreachable!() };
            x[j - 1] = m[(0, 0)];
            if j > 1 {
                cur = cur.upsilon(1)?;
            }
        }
        Ok(x)
    }

    pub fn haar_sample<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Self {
        let m = match field {
            Field::Real => FieldMatrix::Real(haar_special_orthogonal(n, rng)),
            Field::Complex => FieldMatrix::Complex(haar_unitary(n, rng)),
            Field::Quaternion => FieldMatrix::Quaternion(haar_symplectic(n, rng)),
        };
        Self::trusted(m)
    }
}

/// ‖Υ^m(diag(1,A)·g·diag(1,B)) − A·Υ^m(g)·B‖.
pub fn equivariance_residual(
    g: &CompactGroupElement,
    a: &CompactGroupElement,
    b: &CompactGroupElement,
    m: usize,
) -> Result<f64> {
    let lhs_arg = a
        .matrix
        .pad_identity(m)
        .mul(&g.matrix)
        .mul(&b.matrix.pad_identity(m));
    let lhs = lhs_arg.upsilon(m)?;
    let rhs = a.matrix.mul(&g.matrix.upsilon(m)?).mul(&b.matrix);
    Ok(lhs.sub_max_abs(&rhs))
}

/// |det(1+[g]_p) − det(1+[g]_m)·det(1+[Υ^m(g)]_{p−m})|.
pub fn corner_det_multiplicativity_residual(
    g: &CompactGroupElement,
    m: usize,
    p: usize,
) -> Result<f64> {
    if !(m < p && p <= g.n()) || m == 0 {
        return Err(Error::Precondition(format!("need 1 <= m < p <= n, got m={m}, p={p}")));
    }
    let lhs = g.corner(p).det_one_plus()?;
    let ups = g.upsilon(m)?;
    let rhs = g.corner(m).det_one_plus()? * ups.corner(p - m).det_one_plus()?;
    Ok((lhs - rhs).norm())
}

fn gaussian_real<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal))
}

fn gaussian_complex<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(s * re, s * im)
    })
}

/// Haar-distributed element of O(n).
pub fn haar_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let qr = gaussian_real(n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Haar-distributed element of SO(n).
pub fn haar_special_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let mut q = haar_orthogonal(n, rng);
    if q.determinant() < 0.0 {
        q.column_mut(n - 1).neg_mut();
    }
    q
}

/// Haar-distributed element of U(n).
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let qr = gaussian_complex(n, n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// The companion column `(−v̄₁, v̄₀)` per row pair: right multiplication by j.
fn quaternion_twin(u: &DVector<Complex64>) -> DVector<Complex64> {
    let mut t = DVector::zeros(u.len());
    for i in (0..u.len()).step_by(2) {
        t[i] = -u[i + 1].conj();
        t[i + 1] = u[i].conj();
    }
    t
}

/// Haar-distributed element of Sp(n) in 2n×2n complex realization.
///
/// Quaternionic Gram–Schmidt on a Gaussian quaternion matrix with real positive
/// normalizers (the quaternionic analogue of the phase-corrected QR).
pub fn haar_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let dim = 2 * n;
    let mut out = DMatrix::<Complex64>::zeros(dim, dim);
    let g = gaussian_complex(dim, n, rng);
    for j in 0..n {
        let mut u: DVector<Complex64> = g.column(j).into_owned();
        for _ in 0..2 {
            for k in 0..2 * j {
                let e = out.column(k);
                let c = e.dotc(&u);
                u -= e * c;
            }
        }
        let nrm = u.norm();
        u /= Complex64::new(nrm, 0.0);
        let t = quaternion_twin(&u);
        out.set_column(2 * j, &u);
        out.set_column(2 * j + 1, &t);
    }
    out
}

/// Complex 2×2 realization of the quaternion q₀ + q₁i + q₂j + q₃k.
pub fn quaternion_block(q: [f64; 4]) -> [[Complex64; 2]; 2] {
    let a = Complex64::new(q[0], q[1]);
    let b = Complex64::new(q[2], q[3]);
    [[a, b], [-b.conj(), a.conj()]]
}

/// Builds the complex realization of an n×n quaternion matrix given row-major components.
pub fn quaternion_matrix(n: usize, entries: &[[f64; 4]]) -> DMatrix<Complex64> {
    assert_eq!(entries.len(), n * n);
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let b = quaternion_block(entries[r * n + c]);
            for (i, row) in b.iter().enumerate() {
                for (k, v) in row.iter().enumerate() {
                    m[(2 * r + i, 2 * c + k)] = *v;
                }
            }
        }
    }
    m
}

fn is_quaternionic(m: &DMatrix<Complex64>, tol: f64) -> bool {
    let n = m.nrows() / 2;
    (0..n).all(|r| {
        (0..n).all(|c| {
            let a = m[(2 * r, 2 * c)];
            let b = m[(2 * r, 2 * c + 1)];
            (m[(2 * r + 1, 2 * c)] + b.conj()).norm() <= tol
                && (m[(2 * r + 1, 2 * c + 1)] - a.conj()).norm() <= tol
        })
    })
}

/// Left-multiplication matrix of a quaternion on ℝ⁴.
fn quaternion_real_block(q: [f64; 4]) -> [[f64; 4]; 4] {
    let [a, b, c, d] = q;
    [
        [a, -b, -c, -d],
        [b, a, -d, c],
        [c, d, a, -b],
        [d, -c, b, a],
    ]
}

/// Determinant of a quaternionic matrix (complex realization), computed as the
/// fourth root of the 4n×4n real realization's determinant and cross-checked
/// against the square root of the complex realization's determinant.
pub fn quaternionic_det(a: &DMatrix<Complex64>) -> Result<f64> {
    let n = a.nrows() / 2;
    let mut real = DMatrix::<f64>::zeros(4 * n, 4 * n);
    for r in 0..n {
        for c in 0..n {
            let x = a[(2 * r, 2 * c)];
            let y = a[(2 * r, 2 * c + 1)];
            let blk = quaternion_real_block([x.re, x.im, y.re, y.im]);
            for (i, row) in blk.iter().enumerate() {
                for (k, v) in row.iter().enumerate() {
                    real[(4 * r + i, 4 * c + k)] = *v;
                }
            }
        }
    }
    let scale = real.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
    let tol = 1e-12 * scale.powi(4 * n as i32);
    let det_r = real.determinant();
    if det_r < -tol {
        return Err(Error::NegativeRealDeterminant(det_r));
    }
    let root_r = det_r.max(0.0).powf(0.25);
    let root_c = a.determinant().norm().sqrt();
    if (root_r - root_c).abs() > 1e-8 * root_r.max(root_c).max(1.0) {
        return Err(Error::RealizationMismatch {
            real: root_r,
            complex: root_c,
        });
    }
    Ok(root_r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for field in [Field::Real, Field::Complex, Field::Quaternion] {
            for n in 1..=6 {
                let g = CompactGroupElement::haar_sample(field, n, &mut rng);
                assert!(g.unitarity_residual() < 1e-12, "{field:?} {n}");
                assert!(CompactGroupElement::new(g.matrix().clone(), 1e-12).is_ok());
            }
        }
    }

    #[test]
    fn corners_of_identity_and_full_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = CompactGroupElement::haar_sample(Field::Complex, 4, &mut rng);
        assert_eq!(g.corner(4), *g.matrix());
        let id = CompactGroupElement::identity(Field::Quaternion, 3);
        assert_eq!(id.corner(2), FieldMatrix::identity(Field::Quaternion, 2));
        assert!(g.corner(2).spectral_norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn upsilon_of_identity_and_rotation() {
        let id = CompactGroupElement::identity(Field::Real, 5);
        assert_eq!(
            id.upsilon(2).unwrap(),
            CompactGroupElement::identity(Field::Real, 3)
        );
        let th: f64 = 1.1;
        let rot = DMatrix::from_row_slice(2, 2, &[th.cos(), -th.sin(), th.sin(), th.cos()]);
        let g = CompactGroupElement::new(FieldMatrix::Real(rot), 1e-12).unwrap();
        let FieldMatrix::Real(u) = g.upsilon(1).unwrap().into_matrix() else { panic!() };
        assert!((u[(0, 0)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn upsilon_rejects_singular_block() {
        let rot = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -1.0]);
        let g = CompactGroupElement::new(FieldMatrix::Real(rot), 1e-12).unwrap();
        assert!(matches!(g.upsilon(1), Err(Error::SingularUpsilon { .. })));
    }

    #[test]
    fn cayley_of_identity_is_zero_and_skew() {
        let id = CompactGroupElement::identity(Field::Real, 3);
        let FieldMatrix::Real(s) = id.cayley().unwrap() else { panic!() };
        assert!(s.iter().all(|v| *v == 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = CompactGroupElement::haar_sample(Field::Real, 5, &mut rng);
        let FieldMatrix::Real(s) = g.cayley().unwrap() else { panic!() };
        assert!(max_abs(&(s.transpose() + &s)) < 1e-12);
    }

    #[test]
    fn cube_coords_of_identity() {
        let id = CompactGroupElement::identity(Field::Real, 5);
        assert_eq!(id.cube_coords().unwrap(), vec![1.0; 4]);
    }

    #[test]
    fn quaternionic_determinants() {
        let id = quaternion_matrix(2, &[[1., 0., 0., 0.], [0.; 4], [0.; 4], [1., 0., 0., 0.]]);
        assert!((quaternionic_det(&id).unwrap() - 1.0).abs() < 1e-14);
        let two = quaternion_matrix(1, &[[2., 0., 0., 0.]]);
        assert!((quaternionic_det(&two).unwrap() - 2.0).abs() < 1e-14);
        let j = quaternion_matrix(1, &[[0., 0., 1., 0.]]);
        assert!((quaternionic_det(&j).unwrap() - 1.0).abs() < 1e-14);
        let q = quaternion_matrix(1, &[[1., 2., -1., 3.]]);
        assert!((quaternionic_det(&q).unwrap() - 15f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn quaternion_realization_is_multiplicative() {
        // i·j = k
        let i = quaternion_matrix(1, &[[0., 1., 0., 0.]]);
        let j = quaternion_matrix(1, &[[0., 0., 1., 0.]]);
        let k = quaternion_matrix(1, &[[0., 0., 0., 1.]]);
        assert!(max_abs(&(&i * &j - k)) < 1e-15);
    }

    #[test]
    fn symplectic_sample_has_quaternionic_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = haar_symplectic(3, &mut rng);
        assert!(is_quaternionic(&g, 1e-12));
    }
}
