//! Symbolic construction of Hilbert-Kunz multiplicity certificates: combine
//! several Chern functionals into one that is nonzero on every target slot,
//! inductively correct a graded class until the functional sees a prescribed
//! sign in each dimension, and assemble the closed-form evaluation
//! ℓ(R/I^[pⁿ]) = α·p^(dn) + Σ ε_i β_i p^(in).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chow::{is_test_class, GradedClass};
use crate::error::{Error, Result};
use crate::exactalg::{format_rat, is_prime, parse_rat, rat, sign, Rat};

/// A sign prescription ε_0..ε_d: the top sign is 1, everything in dimensions
/// ≤ d/2 is 0, and the remaining middle dimensions carry −1, 0, or 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignPattern {
    eps: Vec<i8>,
}

impl SignPattern {
    pub fn new(eps: Vec<i8>) -> Result<Self> {
        if eps.is_empty() {
            return Err(Error::InvalidPattern("empty pattern".into()));
        }
        let d = eps.len() - 1;
        if eps[d] != 1 {
            return Err(Error::InvalidPattern(format!(
                "top sign must be 1, got {}",
                eps[d]
            )));
        }
        for (i, &e) in eps.iter().enumerate() {
            if !(-1..=1).contains(&e) {
                return Err(Error::InvalidPattern(format!(
                    "sign at dimension {i} must be -1, 0, or 1, got {e}"
                )));
            }
            if 2 * i <= d && i < d && e != 0 {
                return Err(Error::InvalidPattern(format!(
                    "sign at dimension {i} <= d/2 must be 0, got {e}"
                )));
            }
        }
        Ok(SignPattern { eps })
    }

    /// Dimension d.
    pub fn d(&self) -> usize {
        self.eps.len() - 1
    }

    pub fn eps(&self) -> &[i8] {
        &self.eps
    }

    pub fn eps_at(&self, i: usize) -> i8 {
        self.eps[i]
    }

    /// Every admissible pattern of dimension d, in lexicographic order of
    /// the free middle signs (−1 < 0 < 1), least dimension varying fastest.
    pub fn admissible_patterns(d: usize) -> Vec<SignPattern> {
        assert!(d >= 1, "dimension must be positive");
        let free: Vec<usize> = (0..d).filter(|&i| 2 * i > d).collect();
        let mut out = Vec::new();
        let mut choice = vec![0usize; free.len()]; // index into [-1, 0, 1]
        loop {
            let mut eps = vec![0i8; d + 1];
            eps[d] = 1;
            for (slot, &i) in free.iter().enumerate() {
                eps[i] = choice[slot] as i8 - 1;
            }
            out.push(SignPattern::new(eps).expect("enumerated pattern is admissible"));
            let mut carry = 0;
            loop {
                if carry == free.len() {
                    return out;
                }
                choice[carry] += 1;
                if choice[carry] < 3 {
                    break;
                }
                choice[carry] = 0;
                carry += 1;
            }
            if free.is_empty() {
                return out;
            }
        }
    }
}

/// Values λ_0..λ_d of a Chern-character functional on the one-dimensional
/// graded slots. The planner never builds the underlying complex; the
/// functional itself is the interface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernFunctional {
    values: Vec<Rat>,
}

impl ChernFunctional {
    pub fn new(values: Vec<Rat>) -> Self {
        assert!(!values.is_empty(), "functional needs at least one slot");
        ChernFunctional { values }
    }

    /// The generic functional that is 1 in every dimension.
    pub fn all_ones(d: usize) -> Self {
        ChernFunctional {
            values: vec![Rat::one(); d + 1],
        }
    }

    pub fn d(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn value_at(&self, i: usize) -> &Rat {
        &self.values[i]
    }

    /// Full evaluation Σ λ_i·v_i.
    pub fn apply(&self, class: &GradedClass) -> Rat {
        assert_eq!(self.d(), class.dim(), "functional/class dimension mismatch");
        self.values
            .iter()
            .zip(class.components())
            .map(|(l, v)| l * v)
            .fold(Rat::zero(), |acc, x| acc + x)
    }

    /// Single-slot evaluation λ_i·v_i.
    pub fn apply_at(&self, class: &GradedClass, i: usize) -> Rat {
        assert_eq!(self.d(), class.dim(), "functional/class dimension mismatch");
        self.value_at(i) * class.component(i)
    }

    /// Checks the functional can realize the pattern: λ_d > 0 and λ_i ≠ 0
    /// wherever ε_i ≠ 0.
    pub fn validate_for(&self, pattern: &SignPattern) -> Result<()> {
        assert_eq!(self.d(), pattern.d(), "functional/pattern dimension mismatch");
        if !self.values[self.d()].is_positive() {
            return Err(Error::RangeError(
                "top evaluation of the functional must be positive".into(),
            ));
        }
        for i in 0..=self.d() {
            if pattern.eps_at(i) != 0 && self.values[i].is_zero() {
                return Err(Error::FunctionalCannotRealize(i));
            }
        }
        Ok(())
    }
}

/// Combines functionals into Σ n_k·fns[k] that is nonzero at every target
/// dimension and positive at the top. Multipliers are chosen back to front;
/// each n_k is the smallest positive integer avoiding the finitely many
/// values that would cancel an already-secured target.
pub fn combine_functionals(
    fns: &[ChernFunctional],
    targets: &[usize],
) -> Result<(Vec<u64>, ChernFunctional)> {
    assert_eq!(fns.len(), targets.len(), "one target per functional");
    assert!(!fns.is_empty(), "need at least one functional");
    let d = fns[0].d();
    for f in fns {
        assert_eq!(f.d(), d, "functionals must share a dimension");
    }
    for (k, f) in fns.iter().enumerate() {
        if f.value_at(targets[k]).is_zero() {
            return Err(Error::TargetNotReachable(format!(
                "functional {k} vanishes at its own target dimension {}",
                targets[k]
            )));
        }
        if f.value_at(d).is_negative() {
            return Err(Error::TargetNotReachable(format!(
                "functional {k} is negative at the top dimension"
            )));
        }
    }
    if fns.iter().all(|f| f.value_at(d).is_zero()) {
        return Err(Error::TargetNotReachable(
            "no functional is positive at the top dimension".into(),
        ));
    }

    let mut multipliers = vec![0u64; fns.len()];
    let last = fns.len() - 1;
    multipliers[last] = 1;
    let mut combined = fns[last].values().to_vec();
    for k in (0..last).rev() {
        // n must keep every target in k..=last nonzero; each secured target
        // rules out at most one rational value of n.
        let mut n = 1u64;
        'search: loop {
            let nr = Rat::from(BigInt::from(n));
            for &t in &targets[k..] {
                let candidate = fns[k].value_at(t) * &nr + &combined[t];
                if candidate.is_zero() {
                    n += 1;
                    continue 'search;
                }
            }
            break;
        }
        multipliers[k] = n;
        let nr = Rat::from(BigInt::from(n));
        for (c, v) in combined.iter_mut().zip(fns[k].values()) {
            *c += v * &nr;
        }
    }
    let combined = ChernFunctional::new(combined);
    debug_assert!(combined.value_at(d).is_positive());
    debug_assert!(targets.iter().all(|&t| !combined.value_at(t).is_zero()));
    Ok((multipliers, combined))
}

/// What to put in the dimensions strictly below a correction's target slot.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LowerTermsPolicy {
    #[default]
    /// All lower slots zero (default).
    Zero,
    /// Small pseudo-random rationals from a seeded generator, for
    /// robustness runs; the certificate stays valid because later induction
    /// steps repair whatever appears below.
    SeededRandom(u64),
}

enum LowerSource {
    Zero,
    Rng(Box<ChaCha8Rng>),
}

impl LowerSource {
    fn from_policy(policy: &LowerTermsPolicy) -> Self {
        match policy {
            LowerTermsPolicy::Zero => LowerSource::Zero,
            LowerTermsPolicy::SeededRandom(seed) => {
                LowerSource::Rng(Box::new(ChaCha8Rng::seed_from_u64(*seed)))
            }
        }
    }

    fn next_value(&mut self) -> Rat {
        match self {
            LowerSource::Zero => Rat::zero(),
            LowerSource::Rng(rng) => {
                let num = rng.gen_range(-3i64..=3);
                let den = rng.gen_range(1i64..=4);
                rat(num, den)
            }
        }
    }
}

/// A correction class: positive top component, an integral multiple of the
/// target slot, and policy-controlled lower terms.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionClass {
    /// Smallest positive integer making n·(target value) integral.
    pub n: BigInt,
    /// Top component 1, component n·b at the target dimension, zero strictly
    /// between target and top, lower terms per policy.
    pub class: GradedClass,
}

fn correction_class_from(
    target: &GradedClass,
    test_class: &GradedClass,
    lower: &mut LowerSource,
) -> Result<CorrectionClass> {
    assert!(
        is_test_class(test_class),
        "correction requires a valid test class"
    );
    assert_eq!(target.dim(), test_class.dim(), "dimension mismatch");
    let d = target.dim();
    let Some((slot, value)) = target.as_homogeneous() else {
        return Err(Error::InhomogeneousTarget(if target.is_zero() {
            "zero class needs no correction".into()
        } else {
            "class is supported in more than one dimension".into()
        }));
    };
    if slot == d {
        return Err(Error::InhomogeneousTarget(
            "target must sit strictly below the top dimension".into(),
        ));
    }
    let n = value.denom().clone();
    let mut class = GradedClass::zero(d);
    class.set_component(d, Rat::one());
    class.set_component(slot, value * Rat::from(n.clone()));
    for i in 0..slot {
        class.set_component(i, lower.next_value());
    }
    Ok(CorrectionClass { n, class })
}

/// Builds the numerical shadow of a corrective maximal Cohen-Macaulay
/// module: given a homogeneous target b at a dimension below the top,
/// returns a class with positive top component and slot n·b, where n is the
/// smallest positive integer clearing b's denominator. The test class is the
/// hypothesis making such a module available; it enters as a precondition,
/// not as data.
pub fn correction_class(
    target: &GradedClass,
    test_class: &GradedClass,
    policy: &LowerTermsPolicy,
) -> Result<CorrectionClass> {
    let mut lower = LowerSource::from_policy(policy);
    correction_class_from(target, test_class, &mut lower)
}

/// One induction step of the sign-realization loop.
#[derive(Clone, Debug, PartialEq)]
pub struct PlannerStep {
    /// Induction counter: step j fixes dimension d−j−1 (recorded steps skip
    /// pass-through dimensions).
    pub j: usize,
    /// The dimension this step fixes.
    pub dimension: usize,
    pub e: BigInt,
    pub f: BigInt,
    pub n: BigInt,
    /// The homogeneous target handed to the correction (value at
    /// `dimension`).
    pub b: GradedClass,
    /// The correction class actually added.
    pub correction: GradedClass,
    /// The class after v ← e·v + f·correction.
    pub result: GradedClass,
}

/// Full record of a sign-realization run.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanTrace {
    pub pattern: SignPattern,
    pub lambda: ChernFunctional,
    pub seed: GradedClass,
    pub policy: LowerTermsPolicy,
    pub steps: Vec<PlannerStep>,
    pub final_class: GradedClass,
    /// β_0..β_d: ε_i·λ_i·v_i (positive) where ε_i ≠ 0, and 1 elsewhere.
    pub betas: Vec<Rat>,
}

/// Corrects `seed` dimension by dimension, top down, until
/// sign(λ_i·v_i) = ε_i everywhere. Matching dimensions pass through
/// untouched. A dimension with ε = 0 is zeroed exactly by e = n, f = 1 and
/// target −v_i; a dimension with ε ≠ 0 is overwhelmed by e = 1, n = 1,
/// b = ε·sign(λ_i) and the smallest f making the new term dominate. Later
/// steps only rescale higher dimensions by positive integers, so secured
/// signs persist.
pub fn realize_sign_pattern(
    pattern: &SignPattern,
    lambda: &ChernFunctional,
    seed: &GradedClass,
    test_class: &GradedClass,
    policy: &LowerTermsPolicy,
) -> Result<PlanTrace> {
    let d = pattern.d();
    assert_eq!(seed.dim(), d, "seed/pattern dimension mismatch");
    assert_eq!(test_class.dim(), d, "test class/pattern dimension mismatch");
    assert!(
        seed.component(d).is_positive(),
        "seed must have positive top component"
    );
    lambda.validate_for(pattern)?;

    let mut lower = LowerSource::from_policy(policy);
    let mut v = seed.clone();
    let mut steps = Vec::new();
    for i_star in (0..d).rev() {
        let eps = pattern.eps_at(i_star);
        let current = lambda.apply_at(&v, i_star);
        if sign(&current) == eps {
            continue;
        }
        let (b_value, e, f, n) = if eps == 0 {
            // λ_{i*} ≠ 0 here (otherwise the sign would already match);
            // cancel the slot exactly.
            let b_value = -v.component(i_star).clone();
            let n = b_value.denom().clone();
            (b_value, n.clone(), BigInt::one(), n)
        } else {
            let lam = lambda.value_at(i_star);
            if lam.is_zero() {
                return Err(Error::FunctionalCannotRealize(i_star));
            }
            // b = ±1 (so n = 1) with sign(λ·b) = ε; pick the smallest f
            // letting f·λ(b) dominate λ(v_{i*}).
            let b_value = Rat::from(BigInt::from(i64::from(eps * sign(lam))));
            let lam_b = (lam * &b_value).abs();
            let f = crate::exactalg::rat_floor(&(current.abs() / lam_b)) + 1;
            (b_value, BigInt::one(), f, BigInt::one())
        };
        let target = GradedClass::homogeneous(d, i_star, b_value);
        let correction = correction_class_from(&target, test_class, &mut lower)?;
        debug_assert_eq!(correction.n, n, "correction must clear the denominator");
        let result = v
            .scale(&Rat::from(e.clone()))
            .add(&correction.class.scale(&Rat::from(f.clone())));
        steps.push(PlannerStep {
            j: steps.len(),
            dimension: i_star,
            e,
            f,
            n,
            b: target,
            correction: correction.class,
            result: result.clone(),
        });
        v = result;
        debug_assert_eq!(
            sign(&lambda.apply_at(&v, i_star)),
            eps,
            "step failed to realize the sign at dimension {i_star}"
        );
    }

    let mut betas = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let eps = pattern.eps_at(i);
        let lam_v = lambda.apply_at(&v, i);
        if eps == 0 {
            assert!(lam_v.is_zero(), "zero-sign slot must evaluate to zero");
            betas.push(Rat::one());
        } else {
            let beta = lam_v * Rat::from(BigInt::from(i64::from(eps)));
            assert!(beta.is_positive(), "realized beta must be positive");
            betas.push(beta);
        }
    }
    Ok(PlanTrace {
        pattern: pattern.clone(),
        lambda: lambda.clone(),
        seed: seed.clone(),
        policy: *policy,
        steps,
        final_class: v,
        betas,
    })
}

/// One recorded induction step in serialized form (big integers as decimal
/// strings).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateStep {
    pub dimension: usize,
    pub e: String,
    pub f: String,
    pub n: String,
    /// The homogeneous target value at `dimension`, as "num/den".
    pub b_value: String,
}

/// A self-contained Hilbert-Kunz evaluation certificate. All rationals are
/// serialized "num/den" (or plain "num" for integers) so the JSON form
/// round-trips exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HKCertificate {
    pub dimension: usize,
    pub prime: u64,
    /// ε_0..ε_d.
    pub pattern: Vec<i8>,
    /// α = β_d + Σ colengths.
    pub alpha: String,
    /// β_0..β_d.
    pub betas: Vec<String>,
    pub colengths: Vec<u64>,
    /// λ_0..λ_d, recorded so an independent check can replay the run.
    pub lambda: Vec<String>,
    pub steps: Vec<CertificateStep>,
}

impl HKCertificate {
    pub fn alpha_rat(&self) -> Rat {
        parse_rat(&self.alpha).expect("certificate alpha is a valid rational")
    }

    pub fn beta_rat(&self, i: usize) -> Rat {
        parse_rat(&self.betas[i]).expect("certificate beta is a valid rational")
    }

    pub fn sign_pattern(&self) -> Result<SignPattern> {
        SignPattern::new(self.pattern.clone())
    }
}

/// Assembles the certificate from a realization trace: α = β_d + Σ
/// colengths, p recorded after a primality check. An empty colength list is
/// allowed (α = β_d alone is already positive).
pub fn assemble_certificate(
    trace: &PlanTrace,
    colengths: &[u64],
    p: u64,
) -> Result<HKCertificate> {
    if trace.pattern.eps().is_empty() {
        return Err(Error::InvalidPattern("empty pattern".into()));
    }
    if !is_prime(p) {
        return Err(Error::RangeError(format!("{p} is not prime")));
    }
    assert!(
        colengths.iter().all(|&c| c >= 1),
        "colengths must be positive"
    );
    let d = trace.pattern.d();
    let colength_sum: u64 = colengths.iter().sum();
    let alpha = &trace.betas[d] + Rat::from(BigInt::from(colength_sum));
    assert!(alpha.is_positive(), "alpha must be positive");
    Ok(HKCertificate {
        dimension: d,
        prime: p,
        pattern: trace.pattern.eps().to_vec(),
        alpha: format_rat(&alpha),
        betas: trace.betas.iter().map(format_rat).collect(),
        colengths: colengths.to_vec(),
        lambda: trace.lambda.values().iter().map(format_rat).collect(),
        steps: trace
            .steps
            .iter()
            .map(|s| CertificateStep {
                dimension: s.dimension,
                e: s.e.to_string(),
                f: s.f.to_string(),
                n: s.n.to_string(),
                b_value: format_rat(s.b.component(s.dimension)),
            })
            .collect(),
    })
}

/// Exact evaluation α·p^(dn) + Σ_{i<d} ε_i·β_i·p^(in).
pub fn hk_eval(cert: &HKCertificate, n: u32) -> Rat {
    assert!(n >= 1, "Frobenius exponent must be >= 1");
    let d = cert.dimension;
    assert_eq!(cert.pattern.len(), d + 1, "pattern length mismatch");
    assert_eq!(cert.betas.len(), d + 1, "betas length mismatch");
    let p = BigInt::from(cert.prime);
    let mut total = cert.alpha_rat() * Rat::from(p.pow(d as u32 * n));
    for i in 0..d {
        let eps = cert.pattern[i];
        if eps == 0 {
            continue;
        }
        let term = cert.beta_rat(i)
            * Rat::from(BigInt::from(i64::from(eps)))
            * Rat::from(p.pow(i as u32 * n));
        total += term;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{lagrange_interpolate, rat_i};

    fn top_seed(d: usize, top: Rat) -> GradedClass {
        GradedClass::from_top(d, top)
    }

    fn unit_test_class(d: usize) -> GradedClass {
        GradedClass::from_top(d, rat_i(1))
    }

    #[test]
    fn pattern_validation() {
        assert!(SignPattern::new(vec![]).is_err());
        assert!(SignPattern::new(vec![0, 0, 0, 0, 0]).is_err()); // top not 1
        assert!(SignPattern::new(vec![0, 0, 1, 0, 1]).is_err()); // 2·2 <= 4
        assert!(SignPattern::new(vec![0, 0, 0, 2, 1]).is_err()); // out of range
        let p = SignPattern::new(vec![0, 0, 0, -1, 1]).unwrap();
        assert_eq!(p.d(), 4);
        assert_eq!(p.eps_at(3), -1);
    }

    #[test]
    fn admissible_pattern_counts() {
        assert_eq!(SignPattern::admissible_patterns(4).len(), 3);
        assert_eq!(SignPattern::admissible_patterns(5).len(), 9);
        assert_eq!(SignPattern::admissible_patterns(6).len(), 9);
        // d=3: free dimension is only i=2 (2·2 > 3), so three patterns.
        assert_eq!(SignPattern::admissible_patterns(3).len(), 3);
    }

    #[test]
    fn combine_single_functional() {
        let f = ChernFunctional::new(vec![rat_i(0), rat_i(2), rat_i(3)]);
        let (ns, combined) = combine_functionals(std::slice::from_ref(&f), &[1]).unwrap();
        assert_eq!(ns, vec![1]);
        assert_eq!(combined, f);
    }

    #[test]
    fn combine_complementary_functionals() {
        // λ-vectors (1,1,0) and (1,0,1) on dimensions (d, i1, i2) = (3,2,1).
        let f1 = ChernFunctional::new(vec![rat_i(0), rat_i(0), rat_i(1), rat_i(1)]);
        let f2 = ChernFunctional::new(vec![rat_i(0), rat_i(1), rat_i(0), rat_i(1)]);
        let (ns, combined) = combine_functionals(&[f1, f2], &[2, 1]).unwrap();
        assert_eq!(ns, vec![1, 1]);
        assert_eq!(
            combined.values(),
            &[rat_i(0), rat_i(1), rat_i(1), rat_i(2)]
        );
    }

    #[test]
    fn combine_avoids_cancellation() {
        // (1,1,0) and (1,−1,1): n = 1 on the first would cancel slot i1.
        let f1 = ChernFunctional::new(vec![rat_i(0), rat_i(0), rat_i(1), rat_i(1)]);
        let f2 = ChernFunctional::new(vec![rat_i(0), rat_i(1), rat_i(-1), rat_i(1)]);
        let (ns, combined) = combine_functionals(&[f1, f2], &[2, 1]).unwrap();
        assert_eq!(ns, vec![2, 1]);
        assert!(!combined.value_at(2).is_zero());
        assert!(!combined.value_at(1).is_zero());
        assert!(combined.value_at(3).is_positive());
    }

    #[test]
    fn combine_rejects_impossible_targets() {
        let f = ChernFunctional::new(vec![rat_i(0), rat_i(0), rat_i(1)]);
        let err = combine_functionals(std::slice::from_ref(&f), &[1]).unwrap_err();
        assert!(matches!(err, Error::TargetNotReachable(_)));
    }

    #[test]
    fn correction_clears_denominators() {
        let d = 4;
        let target = GradedClass::homogeneous(d, 2, rat(1, 3));
        let c = correction_class(&target, &unit_test_class(d), &LowerTermsPolicy::Zero).unwrap();
        assert_eq!(c.n, BigInt::from(3));
        assert_eq!(c.class.component(2), &rat_i(1));
        assert_eq!(c.class.component(4), &rat_i(1));
        assert!(c.class.component(3).is_zero());

        let target = GradedClass::homogeneous(d, 2, rat_i(-2));
        let c = correction_class(&target, &unit_test_class(d), &LowerTermsPolicy::Zero).unwrap();
        assert_eq!(c.n, BigInt::from(1));
        assert_eq!(c.class.component(2), &rat_i(-2));
        assert!(c.class.component(4).is_positive());
    }

    #[test]
    fn correction_rejects_degenerate_targets() {
        let d = 4;
        let zero = GradedClass::zero(d);
        assert!(matches!(
            correction_class(&zero, &unit_test_class(d), &LowerTermsPolicy::Zero),
            Err(Error::InhomogeneousTarget(_))
        ));
        let mut two_slots = GradedClass::homogeneous(d, 2, rat_i(1));
        two_slots.set_component(1, rat_i(1));
        assert!(matches!(
            correction_class(&two_slots, &unit_test_class(d), &LowerTermsPolicy::Zero),
            Err(Error::InhomogeneousTarget(_))
        ));
        let top = GradedClass::homogeneous(d, d, rat_i(1));
        assert!(correction_class(&top, &unit_test_class(d), &LowerTermsPolicy::Zero).is_err());
    }

    #[test]
    fn no_correction_needed_for_matching_seed() {
        let pattern = SignPattern::new(vec![0, 0, 0, 0, 1]).unwrap();
        let lambda = ChernFunctional::all_ones(4);
        let seed = top_seed(4, rat(5, 2));
        let trace = realize_sign_pattern(
            &pattern,
            &lambda,
            &seed,
            &unit_test_class(4),
            &LowerTermsPolicy::Zero,
        )
        .unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.betas[4], rat(5, 2));
        assert_eq!(trace.betas[..4], vec![rat_i(1); 4]);
        assert_eq!(trace.final_class, seed);
    }

    #[test]
    fn negative_sign_is_overwhelmed() {
        // Seed with dimension-3 slot 2; forcing ε₃ = −1 with the all-ones
        // functional takes one step with e = n = 1 and f = 2 + 1.
        let pattern = SignPattern::new(vec![0, 0, 0, -1, 1]).unwrap();
        let lambda = ChernFunctional::all_ones(4);
        let mut seed = top_seed(4, rat_i(1));
        seed.set_component(3, rat_i(2));
        let trace = realize_sign_pattern(
            &pattern,
            &lambda,
            &seed,
            &unit_test_class(4),
            &LowerTermsPolicy::Zero,
        )
        .unwrap();
        assert_eq!(trace.steps.len(), 1);
        let step = &trace.steps[0];
        assert_eq!(step.dimension, 3);
        assert_eq!(step.e, BigInt::one());
        assert_eq!(step.n, BigInt::one());
        assert_eq!(step.f, BigInt::from(3));
        assert_eq!(step.b.component(3), &rat_i(-1));
        assert_eq!(trace.final_class.component(3), &rat_i(-1));
        assert_eq!(trace.betas[3], rat_i(1));
    }

    #[test]
    fn zero_sign_is_cancelled_exactly() {
        // Seed with dimension-3 slot 1/2: b = −1/2 needs n = 2, so e = 2,
        // f = 1 and the slot lands exactly on zero.
        let pattern = SignPattern::new(vec![0, 0, 0, 0, 1]).unwrap();
        let lambda = ChernFunctional::all_ones(4);
        let mut seed = top_seed(4, rat_i(1));
        seed.set_component(3, rat(1, 2));
        let trace = realize_sign_pattern(
            &pattern,
            &lambda,
            &seed,
            &unit_test_class(4),
            &LowerTermsPolicy::Zero,
        )
        .unwrap();
        assert_eq!(trace.steps.len(), 1);
        let step = &trace.steps[0];
        assert_eq!(step.e, BigInt::from(2));
        assert_eq!(step.f, BigInt::one());
        assert_eq!(step.n, BigInt::from(2));
        assert_eq!(step.e, &step.f * &step.n);
        assert!(trace.final_class.component(3).is_zero());
    }

    #[test]
    fn every_admissible_pattern_is_realized() {
        for d in [4usize, 5] {
            let lambda = ChernFunctional::all_ones(d);
            let mut seed = top_seed(d, rat_i(2));
            // A messy seed exercising every branch.
            for i in 0..d {
                seed.set_component(i, rat(((i as i64) % 3) - 1, 2));
            }
            seed.set_component(d, rat_i(2));
            for pattern in SignPattern::admissible_patterns(d) {
                let trace = realize_sign_pattern(
                    &pattern,
                    &lambda,
                    &seed,
                    &unit_test_class(d),
                    &LowerTermsPolicy::Zero,
                )
                .unwrap();
                assert!(trace.steps.len() <= d);
                for i in 0..=d {
                    assert_eq!(
                        sign(&lambda.apply_at(&trace.final_class, i)),
                        pattern.eps_at(i),
                        "dimension {i} of pattern {:?}",
                        pattern.eps()
                    );
                }
                for beta in &trace.betas {
                    assert!(beta.is_positive());
                }
            }
        }
    }

    #[test]
    fn seeded_lower_terms_still_realize_patterns() {
        let d = 5;
        let lambda = ChernFunctional::all_ones(d);
        let mut seed = top_seed(d, rat_i(3));
        seed.set_component(4, rat(-7, 3));
        seed.set_component(2, rat_i(1));
        let pattern = SignPattern::new(vec![0, 0, 0, 1, -1, 1]).unwrap();
        let policy = LowerTermsPolicy::SeededRandom(42);
        let trace = realize_sign_pattern(&pattern, &lambda, &seed, &unit_test_class(d), &policy)
            .unwrap();
        for i in 0..=d {
            assert_eq!(
                sign(&lambda.apply_at(&trace.final_class, i)),
                pattern.eps_at(i)
            );
        }
        // Determinism: the same seed reproduces the identical trace.
        let again = realize_sign_pattern(&pattern, &lambda, &seed, &unit_test_class(d), &policy)
            .unwrap();
        assert_eq!(trace, again);
    }

    #[test]
    fn functional_zero_on_required_slot_is_rejected() {
        let pattern = SignPattern::new(vec![0, 0, 0, 1, 1]).unwrap();
        let mut values = vec![rat_i(1); 5];
        values[3] = rat_i(0);
        let lambda = ChernFunctional::new(values);
        let err = realize_sign_pattern(
            &pattern,
            &lambda,
            &top_seed(4, rat_i(1)),
            &unit_test_class(4),
            &LowerTermsPolicy::Zero,
        )
        .unwrap_err();
        assert!(matches!(err, Error::FunctionalCannotRealize(3)));
    }

    fn trace_with_top_beta(d: usize, top: Rat) -> PlanTrace {
        let pattern =
            SignPattern::new((0..=d).map(|i| i8::from(i == d)).collect()).unwrap();
        let lambda = ChernFunctional::all_ones(d);
        realize_sign_pattern(
            &pattern,
            &lambda,
            &top_seed(d, top),
            &unit_test_class(d),
            &LowerTermsPolicy::Zero,
        )
        .unwrap()
    }

    #[test]
    fn assembly_alpha_examples() {
        let t = trace_with_top_beta(4, rat_i(2));
        assert_eq!(assemble_certificate(&t, &[1], 2).unwrap().alpha, "3");
        let t = trace_with_top_beta(4, rat(1, 2));
        assert_eq!(assemble_certificate(&t, &[], 2).unwrap().alpha, "1/2");
        let t = trace_with_top_beta(4, rat_i(1));
        assert_eq!(assemble_certificate(&t, &[2, 3], 5).unwrap().alpha, "6");
    }

    #[test]
    fn assembly_requires_a_prime() {
        let t = trace_with_top_beta(3, rat_i(1));
        assert!(assemble_certificate(&t, &[1], 6).is_err());
        assert!(assemble_certificate(&t, &[1], 1).is_err());
        assert!(assemble_certificate(&t, &[1], 97).is_ok());
    }

    fn spec_like_certificate() -> HKCertificate {
        // d = 4, p = 2, α = 2, ε₃ = −1 with β₃ = 1/2, all other ε_i = 0.
        HKCertificate {
            dimension: 4,
            prime: 2,
            pattern: vec![0, 0, 0, -1, 1],
            alpha: "2".into(),
            betas: vec!["1".into(), "1".into(), "1".into(), "1/2".into(), "1".into()],
            colengths: vec![1],
            lambda: vec!["1".into(); 5],
            steps: vec![],
        }
    }

    #[test]
    fn evaluation_examples() {
        let cert = spec_like_certificate();
        assert_eq!(hk_eval(&cert, 1), rat_i(28));
        assert_eq!(hk_eval(&cert, 2), rat_i(480));

        let mut regular = spec_like_certificate();
        regular.pattern = vec![0, 0, 0, 0, 1];
        regular.alpha = "1".into();
        regular.prime = 3;
        assert_eq!(hk_eval(&regular, 2), rat_i(6561)); // 3^(4·2)
    }

    #[test]
    fn certificate_serde_round_trip() {
        let t = trace_with_top_beta(4, rat(1, 2));
        let cert = assemble_certificate(&t, &[1, 4], 3).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        let back: HKCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(cert, back);
        assert_eq!(hk_eval(&cert, 2), hk_eval(&back, 2));
    }

    #[test]
    fn coefficients_recoverable_from_evaluations() {
        // Interpolating (p^n, value) at n = 1..d+1 recovers (ε_iβ_i, α) as
        // the coefficient vector.
        let cert = spec_like_certificate();
        let d = cert.dimension;
        let points: Vec<(Rat, Rat)> = (1..=(d as u32 + 1))
            .map(|n| {
                let x = crate::exactalg::int_pow(cert.prime, n);
                (x, hk_eval(&cert, n))
            })
            .collect();
        let coeffs = lagrange_interpolate(&points);
        assert_eq!(coeffs.len(), d + 1);
        assert_eq!(coeffs[d], cert.alpha_rat());
        for (i, coeff) in coeffs.iter().enumerate().take(d) {
            let expected = cert.beta_rat(i)
                * Rat::from(BigInt::from(i64::from(cert.pattern[i])));
            assert_eq!(coeff, &expected, "coefficient at dimension {i}");
        }
    }
}
