//! Graded rational class groups for the Segre coordinate rings: dense vectors
//! over dimensions 0..d, the projection β from the bivariate Chow ring, the
//! degree-rescaling operator ψ^ℓ, and the test-class predicate.
//!
//! β substitutes a ↦ −ℓb along the relation a + ℓb = 0 cut out by the very
//! ample divisor: the monomial a^s b^t lands in the b^{s+t} slot with weight
//! (−1)^s ℓ^s, i.e. in geometric dimension d − (s+t), and anything past b^n
//! dies. ψ^ℓ multiplies the dimension-i component by ℓ^i; with ℓ a prime
//! power it models Frobenius pushforward on class data.

use num_traits::{Signed, Zero};

use crate::exactalg::{int_pow, BivariateChowClass, Rat};

/// A rational class graded by geometric dimension: component i sits in
/// dimension i for i = 0..d. The top slot d carries rank multiples of the
/// fundamental class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedClass {
    components: Vec<Rat>,
}

impl GradedClass {
    /// The zero class in ambient dimension d.
    pub fn zero(d: usize) -> Self {
        Self { components: vec![Rat::zero(); d + 1] }
    }

    /// A class concentrated in the top dimension (a rank multiple of the
    /// fundamental class).
    pub fn from_top(d: usize, rank: Rat) -> Self {
        let mut c = Self::zero(d);
        c.components[d] = rank;
        c
    }

    /// A class concentrated in one dimension.
    pub fn homogeneous(d: usize, dim: usize, value: Rat) -> Self {
        assert!(dim <= d, "dimension outside 0..=d");
        let mut c = Self::zero(d);
        c.components[dim] = value;
        c
    }

    /// Ambient dimension d.
    pub fn dim(&self) -> usize {
        self.components.len() - 1
    }

    /// Component in dimension i.
    pub fn component(&self, i: usize) -> &Rat {
        &self.components[i]
    }

    /// All components, dimension 0 first.
    pub fn components(&self) -> &[Rat] {
        &self.components
    }

    /// Overwrites the component in dimension i.
    pub fn set_component(&mut self, i: usize, value: Rat) {
        assert!(i < self.components.len(), "dimension outside 0..=d");
        self.components[i] = value;
    }

    /// Sum of two classes of the same ambient dimension.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "graded dimension mismatch");
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a + b)
            .collect();
        Self { components }
    }

    /// Every component multiplied by `c`.
    pub fn scale(&self, c: &Rat) -> Self {
        Self { components: self.components.iter().map(|a| a * c).collect() }
    }

    /// True when every component vanishes.
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Rat::is_zero)
    }

    /// The dimensions 0..d−1 slots as a slice (everything below the top).
    pub fn lower_components(&self) -> &[Rat] {
        &self.components[..self.components.len() - 1]
    }

    /// If the class is concentrated in one dimension, returns (dim, value).
    pub fn as_homogeneous(&self) -> Option<(usize, &Rat)> {
        let mut found = None;
        for (i, c) in self.components.iter().enumerate() {
            if !c.is_zero() {
                if found.is_some() {
                    return None;
                }
                found = Some((i, c));
            }
        }
        found
    }
}

/// Projection of a bivariate class to the graded class group of the Segre
/// ring along a ↦ −ℓb: a^s b^t goes to (−1)^s ℓ^s b^{s+t}, the b^v slot
/// living in geometric dimension d − v, and slots with s + t > n vanishing.
/// The caller supplies d = m + n + 1 explicitly as a cross-check.
pub fn beta_map(c: &BivariateChowClass, ell: u64, d: usize) -> GradedClass {
    let (m, n) = c.dims();
    assert_eq!(d, m + n + 1, "beta_map requires d = m + n + 1");
    assert!(ell >= 1, "beta_map requires ell >= 1");
    let mut out = GradedClass::zero(d);
    for s in 0..=m {
        let weight = if s % 2 == 0 {
            int_pow(ell, s as u32)
        } else {
            -int_pow(ell, s as u32)
        };
        for t in 0..=n {
            if s + t > n {
                break;
            }
            let q = c.coeff(s, t);
            if !q.is_zero() {
                let dim = d - (s + t);
                let add = q * &weight;
                let cur = out.component(dim).clone();
                out.set_component(dim, cur + add);
            }
        }
    }
    out
}

/// The operator ψ^ℓ: multiplies the dimension-i component by ℓ^i.
pub fn psi_ell(c: &GradedClass, ell: u64) -> GradedClass {
    assert!(ell >= 1, "psi_ell requires ell >= 1");
    let mut out = c.clone();
    for i in 0..=c.dim() {
        let v = c.component(i) * int_pow(ell, i as u32);
        out.set_component(i, v);
    }
    out
}

/// True iff the class is a positive multiple of the fundamental class:
/// everything below the top dimension vanishes and the top is positive.
/// The zero class is not a test class.
pub fn is_test_class(c: &GradedClass) -> bool {
    c.component(c.dim()).is_positive() && c.lower_components().iter().all(Rat::is_zero)
}
