//! Todd calculus on the product of projective spaces P^m × P^n.
//!
//! The central object is the power series f(x) = x/(1 − e^{−x}); the Todd
//! class of the twist O(s,t), pushed into the Chow ring
//! Q[a,b]/(a^{m+1}, b^{n+1}), is
//!
//! ```text
//!   τ(O(s,t)) = e^{sa} f(a)^{m+1} · e^{tb} f(b)^{n+1}.
//! ```
//!
//! A second, independent route to the same a-coefficients goes through the
//! shifted factorial polynomials h_{m,q}(x) = (x+q+m)(x+q+m−1)⋯(x+q+1):
//! the coefficient of a^v in e^{qa} f(a)^{m+1} equals
//! ((m−v)!/m!) · [x^{m−v}] h_{m,q}(x). The two routes cross-check each other
//! in the test and verification suites.
//!
//! Sign data of these coefficients drives everything downstream: for
//! 0 < u < m some shift q ∈ {−1,…,−m} makes [x^u] h_{m,q} negative, and the
//! twist profiles over q = 0,…,−m therefore take both signs in every
//! sub-leading slot. Embedding by the very ample divisor a + ℓb turns a
//! bivariate class into Hilbert-polynomial data via [`pushforward_degrees`].

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{
    binomial, exp_series, factorial, int_pow, invert_unit_series, rat_i, sign, signed_pow,
    BivariateChowClass, Rat, TruncatedSeries,
};

/// The Todd series f(x) = x/(1 − e^{−x}) to the given truncation order,
/// computed by inverting (1 − e^{−x})/x = Σ (−1)^k x^k/(k+1)!.
pub fn todd_series(order: usize) -> TruncatedSeries {
    let u = TruncatedSeries::from_coeffs(
        (0..=order)
            .map(|k| {
                let f = Rat::from_integer(factorial(k + 1));
                if k % 2 == 0 {
                    Rat::one() / f
                } else {
                    -Rat::one() / f
                }
            })
            .collect(),
    );
    invert_unit_series(&u).expect("(1 - e^{-x})/x is a unit series")
}

/// The univariate factor e^{qx} f(x)^{e} of a twisted Todd class, truncated
/// at `order`.
fn twist_factor(q: i64, e: usize, order: usize) -> TruncatedSeries {
    exp_series(&rat_i(q), order).mul(&todd_series(order).pow(e))
}

/// Todd class of the twist O(s,t) on P^m × P^n:
/// e^{sa} f(a)^{m+1} e^{tb} f(b)^{n+1} in Q[a,b]/(a^{m+1}, b^{n+1}).
pub fn todd_twist(m: usize, n: usize, s: i64, t: i64) -> BivariateChowClass {
    assert!(m >= 1 && n >= 1, "todd_twist needs m, n >= 1");
    let fa = twist_factor(s, m + 1, m);
    let fb = twist_factor(t, n + 1, n);
    BivariateChowClass::outer_product(&fa, &fb)
}

/// The shifted factorial polynomial (x+q+m)(x+q+m−1)⋯(x+q+1), expanded
/// densely. Monic of degree m with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerShiftPolynomial {
    m: usize,
    q: i64,
    coeffs: Vec<Rat>,
}

impl IntegerShiftPolynomial {
    /// Degree of the polynomial (the number of factors).
    pub fn degree(&self) -> usize {
        self.m
    }

    /// The shift parameter q.
    pub fn shift(&self) -> i64 {
        self.q
    }

    /// Coefficient of x^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> &Rat {
        &self.coeffs[k]
    }

    /// All coefficients, constant term first.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Exact evaluation at an integer.
    pub fn eval(&self, x: i64) -> Rat {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * signed_pow(x, k as u32))
            .sum()
    }
}

/// Expands h_{m,q}(x) = (x+q+m)(x+q+m−1)⋯(x+q+1). The factors are monic
/// with integer constants, so the expansion runs in integer arithmetic and
/// converts to rationals once at the end.
pub fn shift_poly(m: usize, q: i64) -> IntegerShiftPolynomial {
    assert!(m >= 1, "shift_poly needs m >= 1");
    let mut coeffs = vec![BigInt::one()];
    for j in 1..=m {
        // Multiply by (x + q + j).
        let shift = BigInt::from(q + j as i64);
        let mut next = vec![BigInt::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] += c * &shift;
        }
        coeffs = next;
    }
    let coeffs = coeffs.into_iter().map(Rat::from).collect();
    IntegerShiftPolynomial { m, q, coeffs }
}

/// Coefficient of a^v in e^{qa} f(a)^{m+1}, computed through the shifted
/// factorial polynomial as ((m−v)!/m!) · [x^{m−v}] h_{m,q}(x). This is the
/// combinatorial route; the series route reads the same number off
/// [`todd_twist`], and the two must agree exactly.
pub fn twist_coeff_via_shift_poly(m: usize, q: i64, v: usize) -> Result<Rat> {
    if v > m {
        return Err(Error::IndexError(format!("v={v} out of range 0..={m}")));
    }
    let h = shift_poly(m, q);
    let ratio = Rat::new(factorial(m - v), factorial(m));
    Ok(ratio * h.coeff(m - v))
}

/// Searches the shift range q ∈ {−1,…,−m} for one whose polynomial h_{m,q}
/// has a negative x^u coefficient, scanning q = −1 downward and returning the
/// first hit. For every m ≥ 2 and 0 < u < m such a shift exists.
pub fn negative_coeff_witness(m: usize, u: usize) -> Result<(bool, Option<i64>)> {
    if m < 2 || u == 0 || u >= m {
        return Err(Error::RangeError(format!(
            "need m >= 2 and 0 < u < m, got m={m}, u={u}"
        )));
    }
    for q in 1..=m as i64 {
        if shift_poly(m, -q).coeff(u).is_negative() {
            return Ok((true, Some(-q)));
        }
    }
    Ok((false, None))
}

/// One entry of a sign profile: the twist parameter q, the exact coefficient,
/// and its sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignProfileEntry {
    pub q: i64,
    pub value: Rat,
    pub sign: i8,
}

/// Signs of the a^v-coefficient of τ(O(q,0)) on P^m × P^n for q = 0, −1, …,
/// −m. The b-exponent is zero, so the value is the a^v coefficient of
/// e^{qa} f(a)^{m+1}, evaluated through the shifted factorial polynomial
/// (the route pinned to the direct bivariate expansion by the route-equality
/// tests). For v < m the profile always contains both a positive and a
/// negative entry; for v = m = n it is positive at q = 0 and zero at q = −1.
pub fn twist_sign_profile(m: usize, n: usize, v: usize) -> Result<Vec<SignProfileEntry>> {
    if !(1 <= v && v <= n && n <= m) {
        return Err(Error::RangeError(format!(
            "need 1 <= v <= n <= m, got m={m}, n={n}, v={v}"
        )));
    }
    let mut out = Vec::with_capacity(m + 1);
    for q in 0..=m as i64 {
        let value = twist_coeff_via_shift_poly(m, -q, v)?;
        out.push(SignProfileEntry { q: -q, sign: sign(&value), value });
    }
    Ok(out)
}

/// Hilbert-polynomial data: P(t) = Σ_i (ℓ_i / i!) t^i with exact rational
/// degree coefficients ℓ_0 … ℓ_degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertPolynomial {
    coeffs: Vec<Rat>,
}

impl HilbertPolynomial {
    /// Builds from the degree coefficients ℓ_0..ℓ_d (index = dimension).
    pub fn from_degree_coeffs(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "need at least the dimension-0 slot");
        Self { coeffs }
    }

    /// Highest dimension carried (the polynomial degree bound).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The degree coefficient ℓ_i.
    pub fn degree_coeff(&self, i: usize) -> &Rat {
        &self.coeffs[i]
    }

    /// All degree coefficients, dimension 0 first.
    pub fn degree_coeffs(&self) -> &[Rat] {
        &self.coeffs
    }
}

/// Degrees of a bivariate class against powers of the very ample divisor
/// a + ℓb: the dimension-i part a^s b^t (with i = (m−s) + (n−t)) contributes
/// q_{st} · C(m+n−s−t, m−s) · ℓ^{n−t} to ℓ_i. The result packages the ℓ_i as
/// a [`HilbertPolynomial`].
pub fn pushforward_degrees(c: &BivariateChowClass, ell: u64) -> HilbertPolynomial {
    assert!(ell >= 1, "the divisor a + ell*b needs ell >= 1");
    let (m, n) = c.dims();
    let mut coeffs = vec![Rat::zero(); m + n + 1];
    for s in 0..=m {
        for t in 0..=n {
            let q = c.coeff(s, t);
            if q.is_zero() {
                continue;
            }
            let i = (m - s) + (n - t);
            let count = Rat::from_integer(binomial(m + n - s - t, m - s));
            let weight = int_pow(ell, (n - t) as u32);
            coeffs[i] += q * count * weight;
        }
    }
    HilbertPolynomial::from_degree_coeffs(coeffs)
}

/// Exact evaluation P(t) = Σ_i ℓ_i t^i / i!.
pub fn hilbert_eval(h: &HilbertPolynomial, t: i64) -> Rat {
    let mut acc = Rat::zero();
    for (i, l) in h.degree_coeffs().iter().enumerate() {
        if !l.is_zero() {
            acc += l * signed_pow(t, i as u32) / Rat::from_integer(factorial(i));
        }
    }
    acc
}

/// Product of binomials C(t+m, m)·C(ℓt+n, n) — the dimension of the degree-t
/// piece of the twisted Segre product, used as the closed-form side of the
/// Hilbert checks.
pub fn segre_dimension_formula(m: usize, n: usize, ell: u64, t: u64) -> BigInt {
    let choose = |top: u64, k: usize| -> BigInt {
        let mut acc = BigInt::one();
        for i in 0..k {
            acc = acc * BigInt::from(top + (k - i) as u64) / BigInt::from(i as u64 + 1);
        }
        // Product over (top+k)(top+k−1)…(top+1) / k! accumulated stepwise;
        // each partial product is an exact integer (consecutive integers).
        acc
    };
    choose(t, m) * choose(ell * t, n)
}
