//! 2×2 complex linear algebra and the biorthogonal eigendecomposition.
//!
//! Bras are always formed by conjugation: `a.dot(b)` is ⟨a|b⟩. Left
//! eigenvectors are stored as kets of H†, so the biorthonormality condition
//! reads `left[n].dot(right[m]) == δ_nm`.

use core::ops::{Add, AddAssign, Mul, Neg, Sub};
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Default relative tolerance for [`eigensystem_2x2`].
pub const DEFAULT_TOL: f64 = 1e-9;

/// Two-component complex column vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub c1: C64,
    pub c2: C64,
}

impl Vec2 {
    pub const fn new(c1: C64, c2: C64) -> Self {
        Self { c1, c2 }
    }

    pub const fn basis1() -> Self {
        Self::new(ONE, ZERO)
    }

    pub const fn basis2() -> Self {
        Self::new(ZERO, ONE)
    }

    /// ⟨self|other⟩
    pub fn dot(&self, other: &Vec2) -> C64 {
        self.c1.conj() * other.c1 + self.c2.conj() * other.c2
    }

    /// Bilinear product without conjugation, `selfᵀ other`.
    pub fn tdot(&self, other: &Vec2) -> C64 {
        self.c1 * other.c1 + self.c2 * other.c2
    }

    pub fn conj(&self) -> Vec2 {
        Vec2::new(self.c1.conj(), self.c2.conj())
    }

    pub fn scale(&self, k: C64) -> Vec2 {
        Vec2::new(self.c1 * k, self.c2 * k)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// |c_k|² for k = 1, 2.
    pub fn population(&self, k: usize) -> f64 {
        match k {
            1 => self.c1.norm_sqr(),
            2 => self.c2.norm_sqr(),
            _ => panic!("population index must be 1 or 2, got {k}"),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.c1.is_finite() && self.c2.is_finite()
    }

    /// |self⟩⟨bra|
    pub fn outer(&self, bra: &Vec2) -> Mat2 {
        Mat2::new(
            self.c1 * bra.c1.conj(),
            self.c1 * bra.c2.conj(),
            self.c2 * bra.c1.conj(),
            self.c2 * bra.c2.conj(),
        )
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.c1 + o.c1, self.c2 + o.c2)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.c1 - o.c1, self.c2 - o.c2)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.c1, -self.c2)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.c1 * k, self.c2 * k)
    }
}

impl Mul<C64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: C64) -> Vec2 {
        self.scale(k)
    }
}

/// 2×2 complex matrix, row-major entries.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2 {
    pub m11: C64,
    pub m12: C64,
    pub m21: C64,
    pub m22: C64,
}

impl Mat2 {
    pub const fn new(m11: C64, m12: C64, m21: C64, m22: C64) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub fn from_real(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Self::new(m11.into(), m12.into(), m21.into(), m22.into())
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn diag(d1: C64, d2: C64) -> Self {
        Self::new(d1, ZERO, ZERO, d2)
    }

    pub fn adjoint(&self) -> Mat2 {
        Mat2::new(
            self.m11.conj(),
            self.m21.conj(),
            self.m12.conj(),
            self.m22.conj(),
        )
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.m11, self.m21, self.m12, self.m22)
    }

    pub fn trace(&self) -> C64 {
        self.m11 + self.m22
    }

    pub fn det(&self) -> C64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn scale(&self, k: C64) -> Mat2 {
        Mat2::new(self.m11 * k, self.m12 * k, self.m21 * k, self.m22 * k)
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2::new(
            self.m11 * v.c1 + self.m12 * v.c2,
            self.m21 * v.c1 + self.m22 * v.c2,
        )
    }

    pub fn frobenius(&self) -> f64 {
        (self.m11.norm_sqr() + self.m12.norm_sqr() + self.m21.norm_sqr() + self.m22.norm_sqr())
            .sqrt()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.m11
            .norm()
            .max(self.m12.norm())
            .max(self.m21.norm())
            .max(self.m22.norm())
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        *self * *other - *other * *self
    }

    pub fn is_complex_symmetric(&self) -> bool {
        self.m12 == self.m21
    }

    pub fn is_finite(&self) -> bool {
        self.m11.is_finite() && self.m12.is_finite() && self.m21.is_finite() && self.m22.is_finite()
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.m11 + o.m11,
            self.m12 + o.m12,
            self.m21 + o.m21,
            self.m22 + o.m22,
        )
    }
}

impl AddAssign for Mat2 {
    fn add_assign(&mut self, o: Mat2) {
        *self = *self + o;
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.m11 - o.m11,
            self.m12 - o.m12,
            self.m21 - o.m21,
            self.m22 - o.m22,
        )
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-ONE)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.m11 * o.m11 + self.m12 * o.m21,
            self.m11 * o.m12 + self.m12 * o.m22,
            self.m21 * o.m11 + self.m22 * o.m21,
            self.m21 * o.m12 + self.m22 * o.m22,
        )
    }
}

impl Mul<Vec2> for Mat2 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        self.apply(&v)
    }
}

impl Mul<C64> for Mat2 {
    type Output = Mat2;
    fn mul(self, k: C64) -> Mat2 {
        self.scale(k)
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, k: f64) -> Mat2 {
        self.scale(k.into())
    }
}

/// Eigenvalues with right eigenvectors and their biorthogonal partners.
///
/// `left[n]` is an eigenvector of H† with eigenvalue `conj(values[n])`,
/// normalized so that ⟨left[n]|right[m]⟩ = δ_nm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiorthoBasis {
    pub values: [C64; 2],
    pub right: [Vec2; 2],
    pub left: [Vec2; 2],
}

impl BiorthoBasis {
    /// |r_n⟩⟨l_n|
    pub fn projector(&self, n: usize) -> Mat2 {
        self.right[n].outer(&self.left[n])
    }

    /// Largest |⟨l_n|r_m⟩ − δ_nm| over the four pairs.
    pub fn biorthonormality_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for n in 0..2 {
            for m in 0..2 {
                let target = if n == m { ONE } else { ZERO };
                worst = worst.max((self.left[n].dot(&self.right[m]) - target).norm());
            }
        }
        worst
    }

    /// Frobenius norm of Σ_n |r_n⟩⟨l_n| − 1.
    pub fn closure_defect(&self) -> f64 {
        closure_defect(self)
    }

    pub fn reconstruct(&self) -> Mat2 {
        reconstruct(self)
    }

    /// Biorthogonal expansion coefficients c_n = ⟨l_n|ψ⟩.
    pub fn coefficients(&self, psi: &Vec2) -> [C64; 2] {
        [self.left[0].dot(psi), self.left[1].dot(psi)]
    }
}

/// Σ_n |r_n⟩ E_n ⟨l_n|
pub fn reconstruct(basis: &BiorthoBasis) -> Mat2 {
    basis.projector(0) * basis.values[0] + basis.projector(1) * basis.values[1]
}

/// Frobenius norm of Σ_n |r_n⟩⟨l_n| − 1; zero for an exact biorthonormal set.
pub fn closure_defect(basis: &BiorthoBasis) -> f64 {
    (basis.projector(0) + basis.projector(1) - Mat2::identity()).frobenius()
}

/// Closed-form eigenvalues, `values[0] = mean − s`, `values[1] = mean + s`
/// with `s` the principal square root of the discriminant.
pub fn eigenvalues_2x2(h: &Mat2) -> [C64; 2] {
    let mean = h.trace() * 0.5;
    let half_diff = (h.m11 - h.m22) * 0.5;
    let s = (half_diff * half_diff + h.m12 * h.m21).sqrt();
    [mean - s, mean + s]
}

/// Biorthogonal eigendecomposition of a non-degenerate 2×2 matrix.
///
/// Complex-symmetric input (m12 == m21) gets the transpose normalization
/// rᵀr = 1 with l = conj(r); everything else gets unit-norm right vectors
/// whose largest component is real-positive. Fails with
/// [`Error::DegenerateSpectrum`](crate::Error::DegenerateSpectrum) when
/// |E₁ − E₂| ≤ tol·max(1, ‖H‖).
pub fn eigensystem_2x2(h: &Mat2, tol: f64) -> crate::Result<BiorthoBasis> {
    let values = eigenvalues_2x2(h);
    let gap = (values[1] - values[0]).norm();
    let threshold = tol * h.frobenius().max(1.0);
    if !(gap > threshold) {
        return Err(crate::Error::DegenerateSpectrum { gap, threshold });
    }
    let symmetric = h.is_complex_symmetric();
    let mut right = [Vec2::default(); 2];
    let mut left = [Vec2::default(); 2];
    for n in 0..2 {
        let lambda = values[n];
        let r = right_kernel(h, lambda);
        if symmetric {
            let mut k = r.tdot(&r).sqrt().inv();
            let rr = r.scale(k);
            let big = if rr.c1.norm() >= rr.c2.norm() {
                rr.c1
            } else {
                rr.c2
            };
            if big.re < 0.0 {
                k = -k;
            }
            right[n] = r.scale(k);
            left[n] = right[n].conj();
        } else {
            let r = r.scale(ONE / r.norm());
            let big = if r.c1.norm() >= r.c2.norm() {
                r.c1
            } else {
                r.c2
            };
            let r = r.scale(big.conj() / big.norm());
            // row vector w with w (H − λ) = 0, then |l⟩ = w†
            let w = left_kernel(h, lambda);
            let w = w.scale(w.tdot(&r).inv());
            right[n] = r;
            left[n] = w.conj();
        }
    }
    Ok(BiorthoBasis {
        values,
        right,
        left,
    })
}

/// Null vector of (H − λ), picking the better-conditioned of two candidates.
fn right_kernel(h: &Mat2, lambda: C64) -> Vec2 {
    let a = Vec2::new(h.m12, lambda - h.m11);
    let b = Vec2::new(lambda - h.m22, h.m21);
    let v = if a.norm_sqr() >= b.norm_sqr() { a } else { b };
    if v.norm_sqr() == 0.0 {
        // diagonal matrix: the kernel is a coordinate axis
        if (h.m11 - lambda).norm() <= (h.m22 - lambda).norm() {
            Vec2::basis1()
        } else {
            Vec2::basis2()
        }
    } else {
        v
    }
}

/// Row vector w (stored as components) with w·(H − λ) = 0.
fn left_kernel(h: &Mat2, lambda: C64) -> Vec2 {
    let a = Vec2::new(lambda - h.m22, h.m12);
    let b = Vec2::new(h.m21, lambda - h.m11);
    let v = if a.norm_sqr() >= b.norm_sqr() { a } else { b };
    if v.norm_sqr() == 0.0 {
        if (h.m11 - lambda).norm() <= (h.m22 - lambda).norm() {
            Vec2::basis1()
        } else {
            Vec2::basis2()
        }
    } else {
        v
    }
}
