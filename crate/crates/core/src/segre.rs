//! Segre products of projective coordinate rings: descriptors for S # T^(ℓ),
//! Hilbert functions, the maximal Cohen-Macaulay window for twisted section
//! modules, Todd data of the rank-one module family, sign-coverage search
//! over the twist range, and an exact feasibility solver for test-module
//! weights.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::chow::{beta_map, GradedClass};
use crate::error::{Error, Result};
use crate::exactalg::{sign, Rat};
use crate::linalg::{nonneg_kernel_rays, positive_functional};
use crate::todd::{segre_dimension_formula, todd_series, todd_twist};

/// Default cap for the minimal-ℓ search.
pub const DEFAULT_ELL_MAX: u64 = 10_000;

/// Splits a target Krull dimension d = m + n + 1 into the canonical factor
/// dimensions: (d/2, d/2 − 1) for even d, ((d−1)/2, (d−1)/2) for odd d.
pub fn split_dimension(d: usize) -> Result<(usize, usize)> {
    if d < 3 {
        return Err(Error::DimensionTooSmall(d));
    }
    Ok(if d.is_multiple_of(2) {
        (d / 2, d / 2 - 1)
    } else {
        ((d - 1) / 2, (d - 1) / 2)
    })
}

/// The Segre product of an (m+1)-variable polynomial ring with the ℓ-th
/// Veronese of an (n+1)-variable one; a graded ring of Krull dimension
/// m + n + 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SegreDescriptor {
    m: usize,
    n: usize,
    ell: u64,
}

impl SegreDescriptor {
    /// Requires m ≥ n ≥ 1 and ℓ ≥ 1.
    pub fn new(m: usize, n: usize, ell: u64) -> Result<Self> {
        if n < 1 || m < n {
            return Err(Error::RangeError(format!(
                "factor dimensions must satisfy m >= n >= 1, got ({m},{n})"
            )));
        }
        if ell < 1 {
            return Err(Error::RangeError("Veronese degree must be >= 1".into()));
        }
        Ok(SegreDescriptor { m, n, ell })
    }

    /// Canonical descriptor of Krull dimension d via [`split_dimension`].
    pub fn from_dimension(d: usize, ell: u64) -> Result<Self> {
        let (m, n) = split_dimension(d)?;
        SegreDescriptor::new(m, n, ell)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// Krull dimension d = m + n + 1.
    pub fn dimension(&self) -> usize {
        self.m + self.n + 1
    }

    /// Bundles twist q with its Todd class and MCM verdict.
    pub fn module_class(&self, q: i64) -> SegreModuleClass {
        SegreModuleClass {
            descriptor: *self,
            q,
            todd: nq_todd(self, q),
            mcm: nq_is_mcm(self, q),
        }
    }
}

/// Dimension of the degree-t graded piece: C(t+m, m) · C(ℓt+n, n).
pub fn segre_hilbert(desc: &SegreDescriptor, t: u64) -> BigInt {
    segre_dimension_formula(desc.m, desc.n, desc.ell, t)
}

/// The twisted section module of twist q together with its graded Todd class
/// and maximal Cohen-Macaulay verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct SegreModuleClass {
    pub descriptor: SegreDescriptor,
    pub q: i64,
    pub todd: GradedClass,
    pub mcm: bool,
}

/// Inclusive twist interval in which the twisted section module is maximal
/// Cohen-Macaulay: −m ≤ q ≤ ⌈(n+1)/ℓ⌉ − 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McmWindow {
    pub min_q: i64,
    pub max_q: i64,
}

impl McmWindow {
    pub fn contains(&self, q: i64) -> bool {
        self.min_q <= q && q <= self.max_q
    }
}

/// The MCM twist window of a descriptor.
pub fn mcm_window(desc: &SegreDescriptor) -> McmWindow {
    McmWindow {
        min_q: -(desc.m as i64),
        max_q: (desc.n as u64 + 1).div_ceil(desc.ell) as i64 - 1,
    }
}

/// Whether the twisted section module of twist q is maximal Cohen-Macaulay:
/// −m−1 < q < ⌈(n+1)/ℓ⌉.
pub fn nq_is_mcm(desc: &SegreDescriptor, q: i64) -> bool {
    mcm_window(desc).contains(q)
}

/// Degree supports of the cohomology of the two tensor factors, from which
/// the MCM verdict can be re-derived without the closed-form window.
///
/// On the polynomial side twisted by q, sections live in degrees
/// s ≥ `section_min` and top local cohomology in degrees s ≤ `top_max`.
/// On the Veronese side, sections live in degrees s ≥ `veronese_section_min`
/// and top local cohomology in degrees s ≤ `veronese_top_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CohomologyWindows {
    pub section_min: i64,
    pub top_max: i64,
    pub veronese_section_min: i64,
    pub veronese_top_max: i64,
}

pub fn cohomology_windows(desc: &SegreDescriptor, q: i64) -> CohomologyWindows {
    CohomologyWindows {
        section_min: -q,
        top_max: -q - desc.m as i64 - 1,
        veronese_section_min: 0,
        veronese_top_max: -((desc.n as u64 + 1).div_ceil(desc.ell) as i64),
    }
}

/// Independent route to the MCM verdict: the module is maximal
/// Cohen-Macaulay iff neither mixed Künneth window (sections on one factor
/// against top local cohomology on the other) contains an integer degree.
pub fn middle_cohomology_vanishes(desc: &SegreDescriptor, q: i64) -> bool {
    let w = cohomology_windows(desc, q);
    let sections_meet_veronese_top = w.section_min <= w.veronese_top_max;
    let veronese_sections_meet_top = w.veronese_section_min <= w.top_max;
    !(sections_meet_veronese_top || veronese_sections_meet_top)
}

/// Graded Todd class of the twisted section module: the hyperplane
/// substitution applied to the twisted Todd class of the ambient product.
/// The top component is always 1 (the module has rank one).
pub fn nq_todd(desc: &SegreDescriptor, q: i64) -> GradedClass {
    let tw = todd_twist(desc.m, desc.n, q, 0);
    beta_map(&tw, desc.ell, desc.dimension())
}

/// The three branches of the rank-one maximal Cohen-Macaulay family on the
/// determinantal (ℓ = 1) Segre product: twists concentrated on the first
/// factor (`P`), on the second factor (`Q`), or the ring itself (`B`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankOneSide {
    P,
    Q,
    B,
}

impl RankOneSide {
    pub fn label(&self) -> &'static str {
        match self {
            RankOneSide::P => "P",
            RankOneSide::Q => "Q",
            RankOneSide::B => "B",
        }
    }
}

/// Graded Todd class of a rank-one module on the ℓ = 1 Segre product,
/// truncated at b^(n+1) and placed in dimensions d, d−1, …, d−n:
/// f(−b)^(m+1−s) f(b)^(n+1+s) on side `P`, the exponent-swapped series on
/// side `Q`, and the untwisted product on side `B`.
pub fn rank_one_todd(m: usize, n: usize, side: RankOneSide, power: usize) -> Result<GradedClass> {
    assert!(m >= n && n >= 1, "factor dimensions must satisfy m >= n >= 1");
    let (neg_exp, pos_exp) = match side {
        RankOneSide::P => {
            if power > m {
                return Err(Error::NotInMcmList(format!(
                    "side P admits powers 0..={m}, got {power}"
                )));
            }
            (m + 1 - power, n + 1 + power)
        }
        RankOneSide::Q => {
            if power > n {
                return Err(Error::NotInMcmList(format!(
                    "side Q admits powers 0..={n}, got {power}"
                )));
            }
            (m + 1 + power, n + 1 - power)
        }
        RankOneSide::B => {
            if power != 0 {
                return Err(Error::NotInMcmList(format!(
                    "the ring carries no twist, got power {power}"
                )));
            }
            (m + 1, n + 1)
        }
    };
    let f = todd_series(n);
    let series = f.negate_variable().pow(neg_exp).mul(&f.pow(pos_exp));
    let d = m + n + 1;
    let mut out = GradedClass::zero(d);
    for v in 0..=n {
        out.set_component(d - v, series.coeff(v).clone());
    }
    Ok(out)
}

/// A rank-one module of the ℓ = 1 family together with its Todd class.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOneClass {
    pub side: RankOneSide,
    pub power: usize,
    pub todd: GradedClass,
}

impl RankOneClass {
    pub fn new(m: usize, n: usize, side: RankOneSide, power: usize) -> Result<Self> {
        Ok(RankOneClass {
            side,
            power,
            todd: rank_one_todd(m, n, side, power)?,
        })
    }
}

/// One exact Todd-class component at a given twist.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverageEntry {
    pub q: i64,
    pub value: Rat,
    /// −1, 0, or 1.
    pub sign: i8,
}

/// Sign record of the dimension-(d−v) Todd components across the MCM twists
/// q = 0, −1, …, −m.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverageRow {
    /// Offset below the top dimension (the b-exponent), 1 ≤ v ≤ n.
    pub v: usize,
    /// Ambient graded slot d − v.
    pub dimension: usize,
    pub entries: Vec<CoverageEntry>,
    pub has_positive: bool,
    pub has_negative: bool,
    /// Strictly opposite signs at q = 0 and q = −1; the covering pattern
    /// used when v = m (only possible for m = n).
    pub top_pair_opposed: bool,
    pub covered: bool,
}

/// Sign-coverage table of a descriptor: one row per dimension below the top.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverageReport {
    pub m: usize,
    pub n: usize,
    pub ell: u64,
    pub rows: Vec<CoverageRow>,
    pub fully_covered: bool,
}

/// For each v = 1..n, the exact values and signs of the dimension-(d−v)
/// components of the Todd classes at twists q = 0, −1, …, −m. A row with
/// v < m is covered when both strict signs occur; a row with v = m is
/// covered when the q = 0 and q = −1 values have strictly opposite signs.
pub fn coverage_report(desc: &SegreDescriptor) -> CoverageReport {
    let d = desc.dimension();
    let classes: Vec<(i64, GradedClass)> = (0..=desc.m as i64)
        .map(|k| (-k, nq_todd(desc, -k)))
        .collect();
    let mut rows = Vec::with_capacity(desc.n);
    for v in 1..=desc.n {
        let entries: Vec<CoverageEntry> = classes
            .iter()
            .map(|(q, c)| {
                let value = c.component(d - v).clone();
                let sign = sign(&value);
                CoverageEntry { q: *q, value, sign }
            })
            .collect();
        let has_positive = entries.iter().any(|e| e.sign > 0);
        let has_negative = entries.iter().any(|e| e.sign < 0);
        let top_pair_opposed = entries[0].sign * entries[1].sign == -1;
        let covered = if v < desc.m {
            has_positive && has_negative
        } else {
            top_pair_opposed
        };
        rows.push(CoverageRow {
            v,
            dimension: d - v,
            entries,
            has_positive,
            has_negative,
            top_pair_opposed,
            covered,
        });
    }
    let fully_covered = rows.iter().all(|r| r.covered);
    CoverageReport {
        m: desc.m,
        n: desc.n,
        ell: desc.ell,
        rows,
        fully_covered,
    }
}

/// Smallest ℓ ≤ ell_max whose coverage report is fully covered, together
/// with the certifying report. Linear search from ℓ = 1.
pub fn min_ell(m: usize, n: usize, ell_max: u64) -> Result<(u64, CoverageReport)> {
    assert!(ell_max >= 1, "search cap must be >= 1");
    for ell in 1..=ell_max {
        let desc = SegreDescriptor::new(m, n, ell)?;
        let report = coverage_report(&desc);
        if report.fully_covered {
            return Ok((ell, report));
        }
    }
    Err(Error::SearchExhausted(ell_max))
}

/// Nonnegative coprime integer weights certifying a test module, plus
/// whether the ring itself enters the direct sum (weight at the ring's own
/// index is positive).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestModuleCertificate {
    pub weights: Vec<BigInt>,
    pub contains_ring: bool,
}

/// Exact separating functional proving that no nonzero nonnegative weight
/// vector exists: `functional`·column > 0 for every constraint column.
#[derive(Clone, Debug, PartialEq)]
pub struct FarkasWitness {
    pub functional: Vec<Rat>,
    pub values: Vec<Rat>,
}

/// Outcome of the test-module weight search. Infeasibility is a result, not
/// an error.
#[derive(Clone, Debug, PartialEq)]
pub enum TestModuleOutcome {
    Feasible(TestModuleCertificate),
    Infeasible(FarkasWitness),
}

/// Constraint columns of the test-module problem for the ℓ = 1 family:
/// column k (k = 0..m+n) holds the b^1..b^n coefficients of
/// f(−b)^(1+k) f(b)^(m+n+1−k). Column m is the ring itself.
pub fn test_module_columns(m: usize, n: usize) -> Vec<Vec<Rat>> {
    assert!(m >= n && n >= 1, "factor dimensions must satisfy m >= n >= 1");
    let f = todd_series(n);
    let fneg = f.negate_variable();
    (0..=m + n)
        .map(|k| {
            let g = fneg.pow(1 + k).mul(&f.pow(m + n + 1 - k));
            (1..=n).map(|v| g.coeff(v).clone()).collect()
        })
        .collect()
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y)
        .fold(Rat::zero(), |acc, x| acc + x)
}

/// Solves the weight feasibility problem for arbitrary constraint columns:
/// find w ≥ 0, w ≠ 0 with Σ w_k·column_k = 0. Feasible outcomes return the
/// componentwise sum of all extreme rays (a relative-interior point, so the
/// weight at `ring_index` is positive iff some solution has it positive),
/// scaled to coprime integers. Infeasible outcomes return a strictly
/// separating functional.
pub fn solve_weight_problem(columns: &[Vec<Rat>], ring_index: usize) -> TestModuleOutcome {
    assert!(ring_index < columns.len(), "ring index out of range");
    let rays = nonneg_kernel_rays(columns);
    if rays.is_empty() {
        let functional = positive_functional(columns)
            .expect("no nonnegative dependency, so a separating functional must exist");
        let values = columns.iter().map(|c| dot(c, &functional)).collect();
        return TestModuleOutcome::Infeasible(FarkasWitness { functional, values });
    }
    let mut total = vec![BigInt::zero(); columns.len()];
    for ray in &rays {
        for (t, x) in total.iter_mut().zip(ray) {
            *t += x;
        }
    }
    let mut g = BigInt::zero();
    for x in &total {
        g = g.gcd(x);
    }
    let weights: Vec<BigInt> = total.into_iter().map(|x| x / &g).collect();
    let contains_ring = weights[ring_index].is_positive();
    TestModuleOutcome::Feasible(TestModuleCertificate {
        weights,
        contains_ring,
    })
}

/// Searches for nonnegative weights q_0..q_{m+n}, not all zero, killing the
/// b^1..b^n coefficients of Σ q_k f(−b)^(1+k) f(b)^(m+n+1−k) — exactly the
/// condition for the weighted direct sum of the rank-one family to be a test
/// module.
pub fn test_module_search(m: usize, n: usize) -> TestModuleOutcome {
    solve_weight_problem(&test_module_columns(m, n), m)
}

/// Direct series re-verification of a weight vector: the weighted sum must
/// equal (Σ weights) in degree 0 with vanishing b^1..b^n coefficients.
pub fn verify_test_module_weights(m: usize, n: usize, weights: &[BigInt]) -> bool {
    if weights.len() != m + n + 1 || weights.iter().any(|w| w.is_negative()) {
        return false;
    }
    if weights.iter().all(|w| w.is_zero()) {
        return false;
    }
    let f = todd_series(n);
    let fneg = f.negate_variable();
    let mut sum = crate::exactalg::TruncatedSeries::zero(n);
    for (k, w) in weights.iter().enumerate() {
        let g = fneg.pow(1 + k).mul(&f.pow(m + n + 1 - k));
        sum = sum.add(&g.scale(&Rat::from(w.clone())));
    }
    let total: BigInt = weights.iter().sum();
    if sum.coeff(0) != &Rat::from(total) {
        return false;
    }
    (1..=n).all(|v| sum.coeff(v).is_zero())
}
