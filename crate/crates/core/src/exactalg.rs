//! Exact arithmetic substrate: arbitrary-precision rationals, truncated
//! univariate power series, and the truncated bivariate ring
//! Q[a,b]/(a^{m+1}, b^{n+1}).
//!
//! Nothing here ever rounds. Rationals are reduced eagerly (positive
//! denominator, gcd 1). A series carries an explicit truncation order and
//! binary operations insist on equal orders; dropping precision is always an
//! explicit [`TruncatedSeries::truncate`] call, never an implicit coercion.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number: arbitrary-precision, always reduced.
pub type Rat = num_rational::BigRational;

/// The rational num/den. Panics if `den` is zero.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// The integer `n` as a rational.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Sign of a rational: −1, 0, or 1.
pub fn sign(r: &Rat) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Renders `r` as `"num/den"`, or just `"num"` when the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"num/den"` or `"num"` with arbitrary-precision parts.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let t = s.trim();
    // Reject a zero denominator gracefully rather than panicking in `new`.
    if let Some((_, den)) = t.split_once('/') {
        if den.trim().parse::<BigInt>().is_ok_and(|d| d.is_zero()) {
            return None;
        }
    }
    t.parse::<Rat>().ok()
}

/// n! as an exact integer.
pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient C(n, k) as an exact integer; 0 when k > n.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// ℓ^e for a nonnegative integer base and exponent, as a rational.
pub fn int_pow(base: u64, exp: u32) -> Rat {
    Rat::from_integer(BigInt::from(base).pow(exp))
}

/// Deterministic trial-division primality test; plenty for the word-sized
/// characteristics used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Univariate power series truncated at a fixed order: coefficients of
/// x^0 … x^order, all exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rat>,
}

impl TruncatedSeries {
    /// The zero series at the given order.
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Rat::zero(); order + 1] }
    }

    /// The constant series 1 at the given order.
    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rat::one();
        s
    }

    /// Builds a series from coefficients x^0..x^k (order = len − 1).
    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least a constant term");
        Self { coeffs }
    }

    /// Truncation order (highest retained power of x).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of x^k.
    pub fn coeff(&self, k: usize) -> &Rat {
        &self.coeffs[k]
    }

    /// All coefficients, x^0 first.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Sum of two series of the same order.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "series order mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Self { coeffs }
    }

    /// Every coefficient multiplied by `c`.
    pub fn scale(&self, c: &Rat) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Truncated Cauchy product of two series of the same order.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "series order mismatch");
        let ord = self.order();
        let mut coeffs = vec![Rat::zero(); ord + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(ord + 1 - i).enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self { coeffs }
    }

    /// self^e by repeated squaring (truncated at the series order).
    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Drops coefficients above `new_order` (must not exceed the current
    /// order; extending would fabricate unknown coefficients).
    pub fn truncate(&self, new_order: usize) -> Self {
        assert!(new_order <= self.order(), "cannot extend a truncated series");
        Self { coeffs: self.coeffs[..=new_order].to_vec() }
    }

    /// Substitutes x ↦ −x (flips the sign of odd coefficients).
    pub fn negate_variable(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
            .collect();
        Self { coeffs }
    }
}

/// e^{cx} truncated at the given order: coefficients c^k / k!.
pub fn exp_series(c: &Rat, order: usize) -> TruncatedSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut term = Rat::one();
    coeffs.push(term.clone());
    for k in 1..=order {
        term = term * c / rat_i(k as i64);
        coeffs.push(term.clone());
    }
    TruncatedSeries::from_coeffs(coeffs)
}

/// Multiplicative inverse of a unit series (nonzero constant term), exact to
/// the same order. The defining recursion inv₀ = 1/u₀,
/// invₖ = −(Σ_{j≥1} uⱼ inv_{k−j})/u₀ is verified by back-multiplication in
/// the test suite.
pub fn invert_unit_series(u: &TruncatedSeries) -> Result<TruncatedSeries> {
    if u.coeff(0).is_zero() {
        return Err(Error::NonUnitSeries);
    }
    let ord = u.order();
    let mut inv = vec![Rat::zero(); ord + 1];
    inv[0] = Rat::one() / u.coeff(0);
    for k in 1..=ord {
        let mut s = Rat::zero();
        for j in 1..=k {
            if !u.coeff(j).is_zero() {
                s += u.coeff(j) * &inv[k - j];
            }
        }
        inv[k] = -s / u.coeff(0);
    }
    Ok(TruncatedSeries::from_coeffs(inv))
}

/// Element of Q[a,b]/(a^{m+1}, b^{n+1}): an (m+1)×(n+1) grid of exact
/// rational coefficients, entry (s, t) being the coefficient of a^s b^t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateChowClass {
    m: usize,
    n: usize,
    coeffs: Vec<Vec<Rat>>,
}

impl BivariateChowClass {
    /// The zero element of Q[a,b]/(a^{m+1}, b^{n+1}).
    pub fn zero(m: usize, n: usize) -> Self {
        Self { m, n, coeffs: vec![vec![Rat::zero(); n + 1]; m + 1] }
    }

    /// The multiplicative identity.
    pub fn one(m: usize, n: usize) -> Self {
        let mut c = Self::zero(m, n);
        c.coeffs[0][0] = Rat::one();
        c
    }

    /// The monomial coeff·a^s b^t.
    pub fn monomial(m: usize, n: usize, s: usize, t: usize, coeff: Rat) -> Self {
        assert!(s <= m && t <= n, "monomial outside the truncated ring");
        let mut c = Self::zero(m, n);
        c.coeffs[s][t] = coeff;
        c
    }

    /// Product p(a)·q(b) of univariate series in the two variables; the
    /// series orders fix (m, n).
    pub fn outer_product(pa: &TruncatedSeries, qb: &TruncatedSeries) -> Self {
        let (m, n) = (pa.order(), qb.order());
        let mut c = Self::zero(m, n);
        for s in 0..=m {
            for t in 0..=n {
                c.coeffs[s][t] = pa.coeff(s) * qb.coeff(t);
            }
        }
        c
    }

    /// Truncation degrees (m, n) of the ambient ring.
    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    /// Coefficient of a^s b^t.
    pub fn coeff(&self, s: usize, t: usize) -> &Rat {
        &self.coeffs[s][t]
    }

    /// Overwrites the coefficient of a^s b^t.
    pub fn set_coeff(&mut self, s: usize, t: usize, c: Rat) {
        assert!(s <= self.m && t <= self.n, "coefficient outside the ring");
        self.coeffs[s][t] = c;
    }

    /// Sum in the same ring.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for s in 0..=self.m {
            for t in 0..=self.n {
                out.coeffs[s][t] += &other.coeffs[s][t];
            }
        }
        Ok(out)
    }

    /// Every coefficient multiplied by `c`.
    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = self.clone();
        for row in &mut out.coeffs {
            for x in row.iter_mut() {
                *x *= c;
            }
        }
        out
    }

    /// Product in Q[a,b]/(a^{m+1}, b^{n+1}): the convolution truncated by the
    /// two nilpotency relations.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = Self::zero(self.m, self.n);
        for s1 in 0..=self.m {
            for t1 in 0..=self.n {
                let a = &self.coeffs[s1][t1];
                if a.is_zero() {
                    continue;
                }
                for s2 in 0..=(self.m - s1) {
                    for t2 in 0..=(self.n - t1) {
                        let b = &other.coeffs[s2][t2];
                        if !b.is_zero() {
                            out.coeffs[s1 + s2][t1 + t2] += a * b;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.m != other.m || self.n != other.n {
            return Err(Error::RingMismatch(self.m, self.n, other.m, other.n));
        }
        Ok(())
    }
}

/// Exact rational t^k for signed integer t (helper for polynomial evaluation).
pub fn signed_pow(t: i64, k: u32) -> Rat {
    Rat::from_integer(BigInt::from(t).pow(k))
}

/// Coefficients (low degree first) of the unique polynomial of degree
/// < points.len() through the given points, by exact Lagrange interpolation.
/// Panics if two nodes coincide.
pub fn lagrange_interpolate(points: &[(Rat, Rat)]) -> Vec<Rat> {
    let n = points.len();
    assert!(n > 0, "interpolation needs at least one point");
    let mut total = vec![Rat::zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // Numerator polynomial ∏_{j≠i} (x − x_j), built coefficient-wise.
        let mut num = vec![Rat::zero(); n];
        num[0] = Rat::one();
        let mut deg = 0;
        let mut denom = Rat::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            assert!(xi != xj, "interpolation nodes must be distinct");
            denom *= xi - xj;
            // num *= (x − x_j)
            for k in (0..=deg).rev() {
                let c = num[k].clone();
                num[k + 1] += &c;
                num[k] = -(xj * &c);
            }
            deg += 1;
        }
        let w = yi / denom;
        for k in 0..n {
            total[k] += &num[k] * &w;
        }
    }
    total
}

/// Evaluates a dense polynomial (coefficients low degree first) at a rational.
pub fn poly_eval(coeffs: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Floor of a nonnegative rational as a BigInt.
pub fn rat_floor(r: &Rat) -> BigInt {
    assert!(!r.is_negative(), "floor helper expects a nonnegative rational");
    r.numer() / r.denom()
}

/// Exact conversion to u64 when the rational is a small nonnegative integer.
pub fn rat_to_u64(r: &Rat) -> Option<u64> {
    if r.denom().is_one() {
        r.numer().to_u64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_reduces_eagerly() {
        let x = rat(2, 4);
        assert_eq!(x, rat(1, 2));
        assert_eq!(format_rat(&x), "1/2");
        assert_eq!(format_rat(&rat(-6, 3)), "-2");
        assert_eq!(format_rat(&(rat(1, 3) + rat(1, 6))), "1/2");
        // Denominators stay positive under reduction.
        assert_eq!(rat(1, -2), rat(-1, 2));
    }

    #[test]
    fn parse_round_trips() {
        for s in ["0", "7", "-3", "22/7", "-1/720", "100000000000000000001/3"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
    }

    #[test]
    fn binomial_and_factorial_agree() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 7), BigInt::zero());
        for n in 0..10usize {
            for k in 0..=n {
                let direct = factorial(n) / (factorial(k) * factorial(n - k));
                assert_eq!(binomial(n, k), direct);
            }
        }
    }

    #[test]
    fn exp_series_matches_reciprocal_factorials() {
        let e = exp_series(&rat_i(1), 5);
        assert_eq!(e.coeff(3), &rat(1, 6));
        assert_eq!(e.coeff(5), &rat(1, 120));
        let em = exp_series(&rat_i(-2), 3);
        assert_eq!(em.coeff(1), &rat_i(-2));
        assert_eq!(em.coeff(2), &rat_i(2));
        assert_eq!(em.coeff(3), &rat(-4, 3));
    }

    #[test]
    fn inversion_back_multiplies_to_one() {
        // u = (1 − e^{−x})/x has coefficients (−1)^k/(k+1)!.
        let u = TruncatedSeries::from_coeffs(
            (0..=8)
                .map(|k| {
                    let f = Rat::from_integer(factorial(k + 1));
                    let s = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
                    s / f
                })
                .collect(),
        );
        let inv = invert_unit_series(&u).unwrap();
        assert_eq!(u.mul(&inv), TruncatedSeries::one(8));
        // Frozen values for the inverse of (1 − e^{−x})/x at order 4.
        let expect = [rat_i(1), rat(1, 2), rat(1, 12), rat_i(0), rat(-1, 720)];
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(inv.coeff(k), e);
        }
    }

    #[test]
    fn inversion_rejects_non_units() {
        let s = TruncatedSeries::from_coeffs(vec![rat_i(0), rat_i(1)]);
        assert_eq!(invert_unit_series(&s), Err(Error::NonUnitSeries));
    }

    #[test]
    #[should_panic(expected = "series order mismatch")]
    fn mixed_order_products_are_rejected() {
        let a = TruncatedSeries::one(3);
        let b = TruncatedSeries::one(4);
        let _ = a.mul(&b);
    }

    #[test]
    fn explicit_truncation_drops_high_terms() {
        let e = exp_series(&rat_i(1), 6);
        let t = e.truncate(2);
        assert_eq!(t.order(), 2);
        assert_eq!(t.coeff(2), &rat(1, 2));
    }

    #[test]
    fn bivariate_product_respects_truncation() {
        // (1 + a)(1 + b) in Q[a,b]/(a², b²)
        let f = TruncatedSeries::from_coeffs(vec![rat_i(1), rat_i(1)]);
        let c = BivariateChowClass::outer_product(&f, &f);
        assert_eq!(c.coeff(1, 1), &rat_i(1));
        // Squaring kills a² and b² but keeps the 2ab cross term.
        let sq = c.mul(&c).unwrap();
        assert_eq!(sq.coeff(0, 0), &rat_i(1));
        assert_eq!(sq.coeff(1, 0), &rat_i(2));
        assert_eq!(sq.coeff(1, 1), &rat_i(4));
    }

    #[test]
    fn bivariate_ring_mismatch_is_reported() {
        let a = BivariateChowClass::one(1, 1);
        let b = BivariateChowClass::one(2, 1);
        assert_eq!(a.mul(&b), Err(Error::RingMismatch(1, 1, 2, 1)));
        assert_eq!(a.add(&b), Err(Error::RingMismatch(1, 1, 2, 1)));
    }

    #[test]
    fn lagrange_recovers_polynomials_exactly() {
        // p(x) = (4/3)x³ − (1/3)x through four points, then evaluated afresh.
        let p = |x: i64| rat(4, 3) * signed_pow(x, 3) - rat(1, 3) * rat_i(x);
        let pts: Vec<(Rat, Rat)> = [1i64, 2, 4, 8].iter().map(|&x| (rat_i(x), p(x))).collect();
        let coef = lagrange_interpolate(&pts);
        assert_eq!(coef, vec![rat_i(0), rat(-1, 3), rat_i(0), rat(4, 3)]);
        assert_eq!(poly_eval(&coef, &rat_i(16)), rat_i(5456));
    }
}
