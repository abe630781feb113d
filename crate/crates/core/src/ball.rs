//! The real matrix ball B_{p,q} and the right Möbius action of O(p,q).
//!
//! Convention: g acts on the right by z^[g] = (a + zc)^{-1}(b + zd), which is
//! the row-projective action [1, z]·g. With this convention
//! (z^[g])^[h] = z^[gh] and det(a_{gh} + z c_{gh}) = det(a_g + z c_g)·det(a_h + z^[g] c_h).

use nalgebra::DMatrix;
use rand::Rng;

use crate::compact::haar_orthogonal;
use crate::error::{Error, Result};

/// Default bound on cond(a + zc) before the action is refused.
pub const DEFAULT_COND_BOUND: f64 = 1e12;
/// Default relative tolerance for numerical rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;
/// Default tolerance for the form-preservation check.
pub const FORM_TOL: f64 = 1e-12;

fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    // from the symmetric eigenproblem: nalgebra's bidiagonal SVD loses ~1e-10
    // on clustered singular values
    let g = m * m.transpose();
    g.symmetric_eigenvalues().max().max(0.0).sqrt()
}

/// A real p×q matrix of spectral norm < 1 (or ≤ 1 + tol for closure points).
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    z: DMatrix<f64>,
    closure: bool,
}

impl BallPoint {
    /// Interior point; requires p ≤ q and ‖z‖ < 1.
    pub fn new(z: DMatrix<f64>) -> Result<Self> {
        Self::check_shape(&z)?;
        let norm = spectral_norm(&z);
        if norm >= 1.0 {
            return Err(Error::OutsideBall { norm });
        }
        Ok(BallPoint { z, closure: false })
    }

    /// Point of the closed ball; requires ‖z‖ ≤ 1 + tol.
    pub fn closure(z: DMatrix<f64>, tol: f64) -> Result<Self> {
        Self::check_shape(&z)?;
        let norm = spectral_norm(&z);
        if norm > 1.0 + tol {
            return Err(Error::OutsideBall { norm });
        }
        Ok(BallPoint { z, closure: true })
    }

    fn check_shape(z: &DMatrix<f64>) -> Result<()> {
        if z.nrows() == 0 || z.nrows() > z.ncols() {
            return Err(Error::InvalidParams(format!(
                "ball points need 1 <= p <= q, got {}x{}",
                z.nrows(),
                z.ncols()
            )));
        }
        Ok(())
    }

    pub fn zero(p: usize, q: usize) -> Self {
        BallPoint {
            z: DMatrix::zeros(p, q),
            closure: false,
        }
    }

    /// Random interior point U·diag(σ)·Vᵗ with Haar U, V and σ_i uniform on [0, max_norm).
    pub fn random<R: Rng + ?Sized>(p: usize, q: usize, max_norm: f64, rng: &mut R) -> Self {
        let u = haar_orthogonal(p, rng);
        let v = haar_orthogonal(q, rng);
        let mut s = DMatrix::zeros(p, q);
        for i in 0..p {
            s[(i, i)] = rng.random_range(0.0..max_norm);
        }
        BallPoint {
            z: u * s * v.transpose(),
            closure: false,
        }
    }

    pub fn p(&self) -> usize {
        self.z.nrows()
    }

    pub fn q(&self) -> usize {
        self.z.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.z
    }

    pub fn is_closure(&self) -> bool {
        self.closure
    }

    pub fn spectral_norm(&self) -> f64 {
        spectral_norm(&self.z)
    }
}

/// An element of O(p,q) in block form ((a, b), (c, d)).
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoOrthogonalElement {
    p: usize,
    q: usize,
    m: DMatrix<f64>,
}

fn form(p: usize, q: usize) -> DMatrix<f64> {
    let mut j = DMatrix::identity(p + q, p + q);
    for i in p..p + q {
        j[(i, i)] = -1.0;
    }
    j
}

/// true iff ‖gᵗJg − J‖ ≤ tol·‖J‖ (max-abs entry norm, ‖J‖ = 1).
pub fn validate_pseudo_orthogonal(g: &PseudoOrthogonalElement, tol: f64) -> bool {
    form_residual(g.p, g.q, &g.m) <= tol
}

fn form_residual(p: usize, q: usize, m: &DMatrix<f64>) -> f64 {
    let j = form(p, q);
    (m.transpose() * &j * m - j).amax()
}

impl PseudoOrthogonalElement {
    /// Wraps a (p+q)×(p+q) matrix after checking the form to `tol`.
    pub fn from_matrix(p: usize, q: usize, m: DMatrix<f64>, tol: f64) -> Result<Self> {
        if m.nrows() != p + q || m.ncols() != p + q {
            return Err(Error::InvalidParams("matrix size must be p+q".into()));
        }
        let res = form_residual(p, q, &m);
        if res > tol {
            return Err(Error::Precondition(format!(
                "matrix does not preserve the form (residual {res:e})"
            )));
        }
        Ok(PseudoOrthogonalElement { p, q, m })
    }

    pub fn from_blocks(
        a: &DMatrix<f64>,
        b: &DMatrix<f64>,
        c: &DMatrix<f64>,
        d: &DMatrix<f64>,
        tol: f64,
    ) -> Result<Self> {
        let (p, q) = (a.nrows(), d.nrows());
        let mut m = DMatrix::zeros(p + q, p + q);
        m.view_mut((0, 0), (p, p)).copy_from(a);
        m.view_mut((0, p), (p, q)).copy_from(b);
        m.view_mut((p, 0), (q, p)).copy_from(c);
        m.view_mut((p, p), (q, q)).copy_from(d);
        Self::from_matrix(p, q, m, tol)
    }

    pub fn identity(p: usize, q: usize) -> Self {
        PseudoOrthogonalElement {
            p,
            q,
            m: DMatrix::identity(p + q, p + q),
        }
    }

    /// diag(a, d) with a ∈ O(p), d ∈ O(q).
    pub fn block_diag(a: &DMatrix<f64>, d: &DMatrix<f64>) -> Result<Self> {
        let (p, q) = (a.nrows(), d.nrows());
        Self::from_blocks(a, &DMatrix::zeros(p, q), &DMatrix::zeros(q, p), d, FORM_TOL)
    }

    /// Hyperbolic boost mixing coordinate i of ℝ^p with coordinate i of ℝ^q by angle t_i.
    pub fn boost(p: usize, q: usize, t: &[f64]) -> Self {
        assert!(t.len() <= p && p <= q, "need len(t) <= p <= q");
        let mut m = DMatrix::identity(p + q, p + q);
        for (i, &ti) in t.iter().enumerate() {
            let (s, c) = (ti.sinh(), ti.cosh());
            m[(i, i)] = c;
            m[(p + i, p + i)] = c;
            m[(i, p + i)] = s;
            m[(p + i, i)] = s;
        }
        PseudoOrthogonalElement { p, q, m }
    }

    /// k₁·B(t)·k₂ with Haar k_i ∈ O(p)×O(q) and t_i uniform on [−t_max, t_max].
    pub fn random<R: Rng + ?Sized>(p: usize, q: usize, t_max: f64, rng: &mut R) -> Self {
        let k = |rng: &mut R| {
            let a = haar_orthogonal(p, rng);
            let d = haar_orthogonal(q, rng);
            let mut m = DMatrix::zeros(p + q, p + q);
            m.view_mut((0, 0), (p, p)).copy_from(&a);
            m.view_mut((p, p), (q, q)).copy_from(&d);
            m
        };
        let k1 = k(rng);
        let t: Vec<f64> = (0..p).map(|_| rng.random_range(-t_max..=t_max)).collect();
        let b = Self::boost(p, q, &t).m;
        let k2 = k(rng);
        PseudoOrthogonalElement {
            p,
            q,
            m: k1 * b * k2,
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn a(&self) -> DMatrix<f64> {
        self.m.view((0, 0), (self.p, self.p)).into_owned()
    }

    pub fn b(&self) -> DMatrix<f64> {
        self.m.view((0, self.p), (self.p, self.q)).into_owned()
    }

    pub fn c(&self) -> DMatrix<f64> {
        self.m.view((self.p, 0), (self.q, self.p)).into_owned()
    }

    pub fn d(&self) -> DMatrix<f64> {
        self.m.view((self.p, self.p), (self.q, self.q)).into_owned()
    }

    /// Group product; z^[g·h] = (z^[g])^[h].
    pub fn compose(&self, other: &PseudoOrthogonalElement) -> Self {
        PseudoOrthogonalElement {
            p: self.p,
            q: self.q,
            m: &self.m * &other.m,
        }
    }

    /// g^{-1} = J gᵗ J.
    pub fn inverse(&self) -> Self {
        let j = form(self.p, self.q);
        PseudoOrthogonalElement {
            p: self.p,
            q: self.q,
            m: &j * self.m.transpose() * &j,
        }
    }

    fn a_plus_zc(&self, z: &BallPoint) -> Result<DMatrix<f64>> {
        if z.p() != self.p || z.q() != self.q {
            return Err(Error::InvalidParams("point and group sizes differ".into()));
        }
        Ok(self.a() + z.matrix() * self.c())
    }
}

fn condition(m: &DMatrix<f64>) -> f64 {
    let s = m.clone().singular_values();
    let (lo, hi) = (s.min(), s.max());
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// z^[g] = (a + zc)^{-1}(b + zd), refusing when cond(a + zc) exceeds the default bound.
pub fn moebius_act(g: &PseudoOrthogonalElement, z: &BallPoint) -> Result<BallPoint> {
    moebius_act_with(g, z, DEFAULT_COND_BOUND)
}

pub fn moebius_act_with(
    g: &PseudoOrthogonalElement,
    z: &BallPoint,
    cond_bound: f64,
) -> Result<BallPoint> {
    let azc = g.a_plus_zc(z)?;
    let condition = condition(&azc);
    if condition > cond_bound {
        return Err(Error::NearSingularCocycle { condition });
    }
    let rhs = g.b() + z.matrix() * g.d();
    let w = azc
        .lu()
        .solve(&rhs)
        .ok_or(Error::NearSingularCocycle { condition })?;
    Ok(BallPoint {
        z: w,
        closure: z.closure,
    })
}

/// det(a + zc), the base of the scalar multiplier.
pub fn cocycle(g: &PseudoOrthogonalElement, z: &BallPoint) -> Result<f64> {
    let azc = g.a_plus_zc(z)?;
    let condition = condition(&azc);
    if condition > DEFAULT_COND_BOUND {
        return Err(Error::NearSingularCocycle { condition });
    }
    Ok(azc.determinant())
}

/// Number of singular values of 1 − zzᵗ above tol·max(σ_max, 1).
pub fn orbit_rank(z: &BallPoint, tol: f64) -> usize {
    let p = z.p();
    let m = DMatrix::<f64>::identity(p, p) - z.matrix() * z.matrix().transpose();
    let s = m.symmetric_eigenvalues().abs();
    let cut = tol * s.max().max(1.0);
    s.iter().filter(|&&v| v > cut).count()
}

/// f applied to the spectrum of a symmetric matrix.
fn symmetric_fn(m: DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let e = m.symmetric_eigen();
    let fl = DMatrix::from_diagonal(&e.eigenvalues.map(f));
    &e.eigenvectors * fl * e.eigenvectors.transpose()
}

/// An element g with z^[g] = 0.
///
/// With z = U[Σ 0]Vᵗ this is k·B(−artanh Σ)·k⁻¹ for k = diag(U, V), written
/// without the singular vectors as ((A, −Az), (−(Az)ᵗ, D)) where
/// A = (1 − zzᵗ)^{-1/2} and D = (1 − zᵗz)^{-1/2}. Both roots come from
/// symmetric eigendecompositions, which stay accurate when singular values cluster.
pub fn transport_to_origin(z: &BallPoint) -> Result<PseudoOrthogonalElement> {
    let (p, q) = (z.p(), z.q());
    let zm = z.matrix();
    if zm.iter().all(|&x| x == 0.0) {
        return Ok(PseudoOrthogonalElement::identity(p, q));
    }
    let norm = z.spectral_norm();
    if norm >= 1.0 {
        return Err(Error::OutsideBall { norm });
    }
    let inv_sqrt = |l: f64| 1.0 / (1.0 - l).sqrt();
    let a = symmetric_fn(zm * zm.transpose(), inv_sqrt);
    let d = symmetric_fn(zm.transpose() * zm, inv_sqrt);
    let b = -(&a * zm);
    let c = b.transpose();
    let mut m = DMatrix::zeros(p + q, p + q);
    m.view_mut((0, 0), (p, p)).copy_from(&a);
    m.view_mut((0, p), (p, q)).copy_from(&b);
    m.view_mut((p, 0), (q, p)).copy_from(&c);
    m.view_mut((p, p), (q, q)).copy_from(&d);
    PseudoOrthogonalElement::from_matrix(p, q, m, FORM_TOL * (1.0 - norm * norm).recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_perturbation() {
        let g = PseudoOrthogonalElement::identity(2, 3);
        assert!(validate_pseudo_orthogonal(&g, 1e-12));
        let mut m = g.matrix().clone();
        m[(1, 3)] += 1e-3;
        assert!(PseudoOrthogonalElement::from_matrix(2, 3, m, 1e-12).is_err());
    }

    #[test]
    fn stabilizer_fixes_origin() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = haar_orthogonal(2, &mut rng);
        let d = haar_orthogonal(3, &mut rng);
        let g = PseudoOrthogonalElement::block_diag(&a, &d).unwrap();
        assert!(validate_pseudo_orthogonal(&g, 1e-12));
        let w = moebius_act(&g, &BallPoint::zero(2, 3)).unwrap();
        assert!(w.matrix().amax() < 1e-15);
        assert!((cocycle(&g, &BallPoint::zero(2, 3)).unwrap().abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scalar_boost() {
        for &t in &[-1.3, 0.2, 2.0] {
            let g = PseudoOrthogonalElement::boost(1, 1, &[t]);
            let w = moebius_act(&g, &BallPoint::zero(1, 1)).unwrap();
            assert!((w.matrix()[(0, 0)] - f64::tanh(t)).abs() < 1e-15);
            let s: f64 = 0.4;
            let z = BallPoint::new(DMatrix::from_element(1, 1, s.tanh())).unwrap();
            let w = moebius_act(&g, &z).unwrap();
            assert!((w.matrix()[(0, 0)] - (s + t).tanh()).abs() < 1e-14);
        }
    }

    #[test]
    fn transport_of_scalar_point() {
        let t: f64 = 0.8;
        let z = BallPoint::new(DMatrix::from_element(1, 1, t.tanh())).unwrap();
        let g = transport_to_origin(&z).unwrap();
        assert!((g.matrix()[(0, 1)].abs() - t.sinh()).abs() < 1e-12);
        assert_eq!(
            transport_to_origin(&BallPoint::zero(2, 2)).unwrap(),
            PseudoOrthogonalElement::identity(2, 2)
        );
    }

    #[test]
    fn orbit_rank_extremes() {
        assert_eq!(orbit_rank(&BallPoint::zero(2, 4), DEFAULT_RANK_TOL), 2);
        let mut z = DMatrix::zeros(2, 4);
        z[(0, 1)] = 1.0;
        z[(1, 3)] = 1.0;
        let z = BallPoint::closure(z, 1e-12).unwrap();
        assert_eq!(orbit_rank(&z, DEFAULT_RANK_TOL), 0);
    }

    #[test]
    fn rejects_points_outside() {
        assert!(BallPoint::new(DMatrix::from_element(1, 2, 0.8)).is_err());
        assert!(BallPoint::new(DMatrix::zeros(3, 2)).is_err());
    }
}
