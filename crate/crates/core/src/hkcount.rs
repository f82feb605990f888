//! Brute-force Hilbert-Kunz functions for toric presets: exact colengths of
//! Frobenius powers of monomial maximal-primary ideals, computed by lattice
//! enumeration, tabulated over q = pⁿ, and fitted by exact polynomial
//! interpolation.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::exactalg::{is_prime, lagrange_interpolate, poly_eval, Rat};
use num_bigint::BigInt;

/// Visited-point cap guarding against non-primary input.
pub const DEFAULT_COMPLEMENT_CAP: usize = 10_000_000;

/// An affine semigroup given by an explicit facet description, with its
/// minimal degree-one generator set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemigroupPreset {
    /// N^k: the polynomial ring in k variables.
    Polynomial { k: usize },
    /// Pairs (u, v) ∈ N^(m+1) × N^(n+1) with ℓ·|u| = |v|: the Segre product
    /// of a polynomial ring with the ℓ-th Veronese of another.
    Segre { m: usize, n: usize, ell: u64 },
}

impl SemigroupPreset {
    /// The quadric cone xy = zw: the simplest Segre preset.
    pub fn quadric() -> Self {
        SemigroupPreset::Segre { m: 1, n: 1, ell: 1 }
    }

    /// Parses "polynomial(k)", "segre(m,n,ell)", or "quadric".
    pub fn from_name(name: &str) -> Option<Self> {
        let name = name.trim();
        if name == "quadric" {
            return Some(SemigroupPreset::quadric());
        }
        let inner = |prefix: &str| -> Option<Vec<u64>> {
            let rest = name.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
            rest.split(',')
                .map(|p| p.trim().parse::<u64>().ok())
                .collect()
        };
        if let Some(args) = inner("polynomial") {
            if let [k] = args[..] {
                if k >= 1 {
                    return Some(SemigroupPreset::Polynomial { k: k as usize });
                }
            }
        }
        if let Some(args) = inner("segre") {
            if let [m, n, ell] = args[..] {
                if m >= 1 && n >= 1 && ell >= 1 {
                    return Some(SemigroupPreset::Segre {
                        m: m as usize,
                        n: n as usize,
                        ell,
                    });
                }
            }
        }
        None
    }

    pub fn name(&self) -> String {
        match self {
            SemigroupPreset::Polynomial { k } => format!("polynomial({k})"),
            SemigroupPreset::Segre { m, n, ell } => format!("segre({m},{n},{ell})"),
        }
    }

    /// Rank of the ambient lattice the description lives in.
    pub fn rank(&self) -> usize {
        match self {
            SemigroupPreset::Polynomial { k } => *k,
            SemigroupPreset::Segre { m, n, .. } => m + n + 2,
        }
    }

    /// Membership by the facet description alone.
    pub fn contains(&self, x: &[i64]) -> bool {
        if x.len() != self.rank() {
            return false;
        }
        if x.iter().any(|&c| c < 0) {
            return false;
        }
        match self {
            SemigroupPreset::Polynomial { .. } => true,
            SemigroupPreset::Segre { m, ell, .. } => {
                let u: i64 = x[..m + 1].iter().sum();
                let v: i64 = x[m + 1..].iter().sum();
                (*ell as i64) * u == v
            }
        }
    }

    /// Minimal degree-one generators. For the Segre preset these are the
    /// (m+1)·C(ℓ+n, n) pairs of a unit vector with a degree-ℓ monomial.
    pub fn generators(&self) -> Vec<Vec<i64>> {
        match self {
            SemigroupPreset::Polynomial { k } => (0..*k)
                .map(|i| {
                    let mut g = vec![0i64; *k];
                    g[i] = 1;
                    g
                })
                .collect(),
            SemigroupPreset::Segre { m, n, ell } => {
                let monomials = compositions(*ell as i64, n + 1);
                let mut gens = Vec::with_capacity((m + 1) * monomials.len());
                for i in 0..=*m {
                    for w in &monomials {
                        let mut g = vec![0i64; m + n + 2];
                        g[i] = 1;
                        g[m + 1..].copy_from_slice(w);
                        gens.push(g);
                    }
                }
                gens
            }
        }
    }
}

/// All ways to write `total` as an ordered sum of `parts` nonnegative
/// integers.
fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    assert!(parts >= 1 && total >= 0);
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            let mut c = Vec::with_capacity(parts);
            c.push(first);
            c.append(&mut rest);
            out.push(c);
        }
    }
    out
}

/// A monomial ideal in a semigroup, given by nonzero generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    generators: Vec<Vec<i64>>,
}

impl MonomialIdeal {
    pub fn new(generators: Vec<Vec<i64>>) -> Self {
        assert!(!generators.is_empty(), "ideal needs at least one generator");
        assert!(
            generators.iter().all(|g| g.iter().any(|&c| c != 0)),
            "ideal generators must be nonzero"
        );
        MonomialIdeal { generators }
    }

    /// The maximal ideal: generated by every degree-one semigroup element,
    /// so the complement of any Frobenius power is finite.
    pub fn maximal(preset: &SemigroupPreset) -> Self {
        MonomialIdeal::new(preset.generators())
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }
}

fn in_frobenius_power(
    preset: &SemigroupPreset,
    ideal: &MonomialIdeal,
    q: u64,
    x: &[i64],
) -> bool {
    ideal.generators.iter().any(|g| {
        let shifted: Vec<i64> = x
            .iter()
            .zip(g)
            .map(|(&xc, &gc)| xc - q as i64 * gc)
            .collect();
        preset.contains(&shifted)
    })
}

/// Number of semigroup elements outside the q-th Frobenius power of the
/// ideal, with an explicit cap on visited points. Breadth-first search from
/// 0 along semigroup generators, pruning on ideal membership: survivors are
/// downward-closed along generator decompositions, so the traversal visits
/// exactly the complement.
pub fn frobenius_colength_capped(
    preset: &SemigroupPreset,
    ideal: &MonomialIdeal,
    q: u64,
    cap: usize,
) -> Result<usize> {
    assert!(q >= 1, "Frobenius exponent must be >= 1");
    let origin = vec![0i64; preset.rank()];
    debug_assert!(preset.contains(&origin));
    let generators = preset.generators();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    seen.insert(origin.clone());
    queue.push_back(origin);
    let mut survivors = 0usize;
    while let Some(x) = queue.pop_front() {
        if in_frobenius_power(preset, ideal, q, &x) {
            continue;
        }
        survivors += 1;
        if survivors > cap {
            return Err(Error::ComplementCapExceeded(cap));
        }
        for g in &generators {
            let next: Vec<i64> = x.iter().zip(g).map(|(a, b)| a + b).collect();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(survivors)
}

/// [`frobenius_colength_capped`] with the default cap.
pub fn frobenius_colength(preset: &SemigroupPreset, ideal: &MonomialIdeal, q: u64) -> Result<usize> {
    frobenius_colength_capped(preset, ideal, q, DEFAULT_COMPLEMENT_CAP)
}

/// Exact colengths at q = pⁿ for n = 0..n_max.
pub fn hk_table(
    preset: &SemigroupPreset,
    ideal: &MonomialIdeal,
    p: u64,
    n_max: u32,
) -> Result<Vec<(u64, usize)>> {
    if !is_prime(p) {
        return Err(Error::RangeError(format!("{p} is not prime")));
    }
    (0..=n_max)
        .map(|n| {
            let q = p
                .checked_pow(n)
                .expect("Frobenius power exceeds the machine word");
            Ok((q, frobenius_colength(preset, ideal, q)?))
        })
        .collect()
}

/// A fitted Hilbert-Kunz polynomial with its cross-validation verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFit {
    /// Coefficients in q, ascending degree, length d+1.
    pub coefficients: Vec<Rat>,
    /// True iff every table entry beyond the fitted d+1 matches exactly.
    pub verified: bool,
}

/// Interpolates the first d+1 table rows by a degree-d polynomial in q and
/// verifies it against the remaining rows. Needs at least d+2 rows so that
/// at least one row is a genuine check.
pub fn poly_fit_check(table: &[(u64, usize)], d: usize) -> Result<PolyFit> {
    if table.len() < d + 2 {
        return Err(Error::InsufficientData {
            need: d + 2,
            got: table.len(),
        });
    }
    let as_rat = |(q, c): &(u64, usize)| {
        (
            Rat::from(BigInt::from(*q)),
            Rat::from(BigInt::from(*c)),
        )
    };
    let points: Vec<(Rat, Rat)> = table[..=d].iter().map(as_rat).collect();
    let coefficients = lagrange_interpolate(&points);
    let verified = table[d + 1..].iter().all(|row| {
        let (q, c) = as_rat(row);
        poly_eval(&coefficients, &q) == c
    });
    Ok(PolyFit {
        coefficients,
        verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, rat_i};

    /// Independent oracle: enumerate the semigroup degree by degree,
    /// counting survivors until a degree has none (survivor degrees form an
    /// interval because the ideal is upward closed along generators).
    fn oracle_count(preset: &SemigroupPreset, ideal: &MonomialIdeal, q: u64) -> usize {
        let mut total = 0usize;
        for degree in 0.. {
            let layer = degree_layer(preset, degree);
            assert!(!layer.is_empty(), "every degree is nonempty");
            let survivors = layer
                .iter()
                .filter(|x| !in_frobenius_power(preset, ideal, q, x))
                .count();
            if survivors == 0 {
                return total;
            }
            total += survivors;
        }
        unreachable!()
    }

    fn degree_layer(preset: &SemigroupPreset, degree: i64) -> Vec<Vec<i64>> {
        match preset {
            SemigroupPreset::Polynomial { k } => compositions(degree, *k),
            SemigroupPreset::Segre { m, n, ell } => {
                let us = compositions(degree, m + 1);
                let vs = compositions(*ell as i64 * degree, n + 1);
                let mut out = Vec::with_capacity(us.len() * vs.len());
                for u in &us {
                    for v in &vs {
                        let mut x = u.clone();
                        x.extend_from_slice(v);
                        out.push(x);
                    }
                }
                out
            }
        }
    }

    #[test]
    fn preset_descriptions() {
        let quadric = SemigroupPreset::quadric();
        assert_eq!(quadric.rank(), 4);
        assert_eq!(quadric.generators().len(), 4);
        assert!(quadric.contains(&[1, 0, 0, 1]));
        assert!(!quadric.contains(&[1, 0, 0, 0]));
        assert!(!quadric.contains(&[-1, 1, 0, 0]));

        let segre = SemigroupPreset::Segre { m: 2, n: 1, ell: 2 };
        assert_eq!(segre.rank(), 5);
        // (m+1)·C(ell+n, n) = 3·3.
        assert_eq!(segre.generators().len(), 9);
        for g in segre.generators() {
            assert!(segre.contains(&g));
        }
    }

    #[test]
    fn preset_parsing() {
        assert_eq!(
            SemigroupPreset::from_name("quadric"),
            Some(SemigroupPreset::quadric())
        );
        assert_eq!(
            SemigroupPreset::from_name("polynomial(3)"),
            Some(SemigroupPreset::Polynomial { k: 3 })
        );
        assert_eq!(
            SemigroupPreset::from_name("segre(2,1,2)"),
            Some(SemigroupPreset::Segre { m: 2, n: 1, ell: 2 })
        );
        assert_eq!(SemigroupPreset::from_name("segre(2,1)"), None);
        assert_eq!(SemigroupPreset::from_name("polynomial(0)"), None);
        assert_eq!(SemigroupPreset::from_name("cube"), None);
    }

    #[test]
    fn polynomial_colengths_are_power_laws() {
        let preset = SemigroupPreset::Polynomial { k: 2 };
        let ideal = MonomialIdeal::maximal(&preset);
        assert_eq!(frobenius_colength(&preset, &ideal, 4).unwrap(), 16);
        let preset = SemigroupPreset::Polynomial { k: 3 };
        let ideal = MonomialIdeal::maximal(&preset);
        let table = hk_table(&preset, &ideal, 2, 2).unwrap();
        assert_eq!(table, vec![(1, 1), (2, 8), (4, 64)]);
    }

    #[test]
    fn quadric_colengths() {
        let preset = SemigroupPreset::quadric();
        let ideal = MonomialIdeal::maximal(&preset);
        assert_eq!(frobenius_colength(&preset, &ideal, 1).unwrap(), 1);
        assert_eq!(frobenius_colength(&preset, &ideal, 2).unwrap(), 10);
        let table = hk_table(&preset, &ideal, 2, 3).unwrap();
        assert_eq!(table, vec![(1, 1), (2, 10), (4, 84), (8, 680)]);
    }

    #[test]
    fn bfs_matches_the_degreewise_oracle() {
        let quadric = SemigroupPreset::quadric();
        let segre = SemigroupPreset::Segre { m: 2, n: 1, ell: 1 };
        for preset in [quadric, segre] {
            let ideal = MonomialIdeal::maximal(&preset);
            for q in 1..=4 {
                assert_eq!(
                    frobenius_colength(&preset, &ideal, q).unwrap(),
                    oracle_count(&preset, &ideal, q),
                    "{} at q={q}",
                    preset.name()
                );
            }
        }
    }

    #[test]
    fn mixed_segre_frozen_values() {
        // Colengths at q = 1..4, frozen from the degreewise enumeration.
        let preset = SemigroupPreset::Segre { m: 2, n: 1, ell: 1 };
        let ideal = MonomialIdeal::maximal(&preset);
        let counts: Vec<usize> = (1..=4)
            .map(|q| frobenius_colength(&preset, &ideal, q).unwrap())
            .collect();
        assert_eq!(counts, vec![1, 23, 123, 397]);
    }

    #[test]
    fn tables_require_prime_characteristic() {
        let preset = SemigroupPreset::Polynomial { k: 1 };
        let ideal = MonomialIdeal::maximal(&preset);
        assert!(hk_table(&preset, &ideal, 6, 2).is_err());
        assert!(hk_table(&preset, &ideal, 1, 2).is_err());
    }

    #[test]
    fn non_primary_ideals_hit_the_cap() {
        // (x) in k[x,y]: the complement of any Frobenius power is infinite.
        let preset = SemigroupPreset::Polynomial { k: 2 };
        let ideal = MonomialIdeal::new(vec![vec![1, 0]]);
        let err = frobenius_colength_capped(&preset, &ideal, 2, 1000).unwrap_err();
        assert_eq!(err.to_string(), "complement not finite within cap 1000");
    }

    #[test]
    #[should_panic(expected = "ideal generators must be nonzero")]
    fn zero_generators_are_rejected() {
        MonomialIdeal::new(vec![vec![0, 0]]);
    }

    #[test]
    fn quadric_fit_is_cubic() {
        let preset = SemigroupPreset::quadric();
        let ideal = MonomialIdeal::maximal(&preset);
        let table = hk_table(&preset, &ideal, 2, 4).unwrap();
        assert_eq!(table[4], (16, 5456));
        let fit = poly_fit_check(&table, 3).unwrap();
        assert!(fit.verified);
        assert_eq!(
            fit.coefficients,
            vec![rat_i(0), rat(-1, 3), rat_i(0), rat(4, 3)]
        );
    }

    #[test]
    fn polynomial_fit_recovers_the_power_law() {
        let preset = SemigroupPreset::Polynomial { k: 3 };
        let ideal = MonomialIdeal::maximal(&preset);
        let table = hk_table(&preset, &ideal, 2, 4).unwrap();
        let fit = poly_fit_check(&table, 3).unwrap();
        assert!(fit.verified);
        assert_eq!(
            fit.coefficients,
            vec![rat_i(0), rat_i(0), rat_i(0), rat_i(1)]
        );
    }

    #[test]
    fn fit_guards_against_short_tables() {
        let table = vec![(1u64, 1usize), (2, 10), (4, 84)];
        let err = poly_fit_check(&table, 3).unwrap_err();
        assert_eq!(
            err.to_string(),
            "insufficient data: need at least 5 points, got 3"
        );
    }

    #[test]
    fn fit_detects_non_polynomial_tables() {
        // A table that is NOT a degree-1 polynomial: mismatch reported, not
        // an error.
        let table = vec![(1u64, 1usize), (2, 2), (4, 5)];
        let fit = poly_fit_check(&table, 1).unwrap();
        assert!(!fit.verified);
    }
}
