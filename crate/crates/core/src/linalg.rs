//! Internal exact linear algebra over Q: Gaussian elimination, kernels,
//! extreme rays of {w ≥ 0 : Cw = 0}, and strictly-positive separating
//! functionals via Fourier–Motzkin elimination.
//!
//! Everything here runs on problem sizes of at most a dozen rows/columns, so
//! the algorithms favor exactness and auditability over asymptotics.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactalg::Rat;

/// Reduced row echelon form (in place); returns the pivot column of each row.
pub(crate) fn row_reduce(a: &mut [Vec<Rat>]) -> Vec<usize> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let inv = Rat::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, pv) in a[i].iter_mut().zip(&pivot_row) {
                    let sub = &factor * pv;
                    *x -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Rank of a rational matrix.
pub(crate) fn rank(a: &[Vec<Rat>]) -> usize {
    let mut m = a.to_vec();
    row_reduce(&mut m).len()
}

/// Basis of the kernel {x : Ax = 0}.
pub(crate) fn kernel_basis(a: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    if a.is_empty() {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut m = a.to_vec();
    let pivots = row_reduce(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rat::zero(); cols];
            v[fc] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][fc].clone();
            }
            v
        })
        .collect()
}

/// One solution of Ax = b, or None when inconsistent.
pub(crate) fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    assert_eq!(rows, b.len(), "system shape mismatch");
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.contains(&cols) {
        return None; // a pivot in the augmented column: inconsistent
    }
    let mut x = vec![Rat::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

/// Scales a rational vector to coprime integers, preserving direction.
/// Panics on the zero vector.
pub(crate) fn to_coprime_integers(v: &[Rat]) -> Vec<BigInt> {
    assert!(v.iter().any(|x| !x.is_zero()), "zero vector has no direction");
    let mut den = BigInt::one();
    for x in v {
        den = den.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * &den / x.denom()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Extreme rays of the cone {w ≥ 0 : Cw = 0}, where `cols[k]` is the k-th
/// column of C. Each ray is returned as coprime nonnegative integers; the
/// list is ordered by the lexicographically smallest support that produces
/// the ray. The cone is pointed (it sits in the nonnegative orthant), so it
/// is nonzero iff at least one ray exists, and every extreme ray is supported
/// on at most rank(C)+1 coordinates.
pub(crate) fn nonneg_kernel_rays(cols: &[Vec<Rat>]) -> Vec<Vec<BigInt>> {
    let ncols = cols.len();
    if ncols == 0 {
        return Vec::new();
    }
    let nrows = cols[0].len();
    let full_rank = {
        let matrix: Vec<Vec<Rat>> = (0..nrows)
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        rank(&matrix)
    };
    let max_support = full_rank + 1;
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    let mut support = Vec::new();
    enumerate_supports(ncols, max_support, &mut support, &mut |sub| {
        let matrix: Vec<Vec<Rat>> = (0..nrows)
            .map(|r| sub.iter().map(|&c| cols[c][r].clone()).collect())
            .collect();
        let kb = kernel_basis(&matrix);
        if kb.len() != 1 {
            return;
        }
        let v = &kb[0];
        let strictly_positive = v.iter().all(|x| x.is_positive());
        let strictly_negative = v.iter().all(|x| x.is_negative());
        if !(strictly_positive || strictly_negative) {
            return; // zeros belong to a smaller support; mixed signs are not rays
        }
        let mut full = vec![Rat::zero(); ncols];
        for (j, &c) in sub.iter().enumerate() {
            full[c] = if strictly_positive { v[j].clone() } else { -v[j].clone() };
        }
        let ints = to_coprime_integers(&full);
        if !rays.contains(&ints) {
            rays.push(ints);
        }
    });
    rays
}

fn enumerate_supports(
    ncols: usize,
    max_size: usize,
    current: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    // Depth-first enumeration of all nonempty subsets of size ≤ max_size in
    // lexicographic order.
    let start = current.last().map_or(0, |&l| l + 1);
    for c in start..ncols {
        current.push(c);
        visit(current);
        if current.len() < max_size {
            enumerate_supports(ncols, max_size, current, visit);
        }
        current.pop();
    }
}

/// A linear inequality Σ coeffs[i]·y_i > 0 (strict) or ≥ 0 (weak).
#[derive(Clone, Debug)]
struct Ineq {
    coeffs: Vec<Rat>,
    strict: bool,
}

/// Finds y with y·col > 0 for every column, or None when no such functional
/// exists. By Gordan duality, None is returned exactly when the columns admit
/// a nonzero nonnegative dependency (i.e. [`nonneg_kernel_rays`] is
/// nonempty). Uses Fourier–Motzkin elimination with back-substitution.
pub(crate) fn positive_functional(cols: &[Vec<Rat>]) -> Option<Vec<Rat>> {
    if cols.is_empty() {
        return Some(Vec::new());
    }
    let dim = cols[0].len();
    let system: Vec<Ineq> = cols
        .iter()
        .map(|c| Ineq {
            coeffs: c.clone(),
            strict: true,
        })
        .collect();
    fm_solve(system, dim)
}

/// Finds y with y·g ≥ 0 for every generator and y·query < 0, or None when
/// the query lies in the cone spanned by the generators (Farkas duality).
pub(crate) fn separating_functional(
    generators: &[Vec<Rat>],
    query: &[Rat],
) -> Option<Vec<Rat>> {
    let dim = query.len();
    let mut system: Vec<Ineq> = generators
        .iter()
        .map(|g| {
            assert_eq!(g.len(), dim, "generator/query dimension mismatch");
            Ineq {
                coeffs: g.clone(),
                strict: false,
            }
        })
        .collect();
    system.push(Ineq {
        coeffs: query.iter().map(|c| -c).collect(),
        strict: true,
    });
    fm_solve(system, dim)
}

fn fm_solve(system: Vec<Ineq>, dim: usize) -> Option<Vec<Rat>> {
    if dim == 0 {
        // Constant inequalities: 0 ≥ 0 holds, 0 > 0 does not.
        return if system.iter().any(|i| i.strict) {
            None
        } else {
            Some(Vec::new())
        };
    }
    // Eliminate the last variable y_{dim-1}.
    let var = dim - 1;
    let mut lowers: Vec<(Vec<Rat>, bool)> = Vec::new(); // y_var {>, ≥} L(y')
    let mut uppers: Vec<(Vec<Rat>, bool)> = Vec::new(); // y_var {<, ≤} U(y')
    let mut rest: Vec<Ineq> = Vec::new();
    for ineq in &system {
        let a = &ineq.coeffs[var];
        if a.is_zero() {
            rest.push(Ineq {
                coeffs: ineq.coeffs[..var].to_vec(),
                strict: ineq.strict,
            });
        } else {
            // a·y_var + r(y') {>, ≥} 0 bounds y_var by −r/a from the side
            // given by the sign of a.
            let bound: Vec<Rat> = ineq.coeffs[..var].iter().map(|c| -(c / a)).collect();
            if a.is_positive() {
                lowers.push((bound, ineq.strict));
            } else {
                uppers.push((bound, ineq.strict));
            }
        }
    }
    // Each lower bound must sit below each upper bound, strictly when either
    // side is strict.
    for (lo, ls) in &lowers {
        for (up, us) in &uppers {
            let coeffs: Vec<Rat> = up.iter().zip(lo).map(|(u, l)| u - l).collect();
            rest.push(Ineq {
                coeffs,
                strict: *ls || *us,
            });
        }
    }
    let partial = fm_solve(rest, var)?;
    // Back-substitute: pick y_var inside the evaluated interval.
    let eval = |bound: &[Rat]| -> Rat {
        bound
            .iter()
            .zip(&partial)
            .map(|(c, y)| c * y)
            .fold(Rat::zero(), |acc, x| acc + x)
    };
    let mut lo: Option<(Rat, bool)> = None;
    for (b, s) in &lowers {
        let v = eval(b);
        let tighter = match &lo {
            None => true,
            Some((cur, cur_s)) => v > *cur || (v == *cur && *s && !cur_s),
        };
        if tighter {
            lo = Some((v, *s));
        }
    }
    let mut up: Option<(Rat, bool)> = None;
    for (b, s) in &uppers {
        let v = eval(b);
        let tighter = match &up {
            None => true,
            Some((cur, cur_s)) => v < *cur || (v == *cur && *s && !cur_s),
        };
        if tighter {
            up = Some((v, *s));
        }
    }
    let y = match (lo, up) {
        (None, None) => Rat::zero(),
        (Some((l, _)), None) => l + Rat::one(),
        (None, Some((u, _))) => u - Rat::one(),
        (Some((l, ls)), Some((u, us))) => {
            if l == u {
                debug_assert!(
                    !ls && !us,
                    "Fourier-Motzkin produced an empty interval"
                );
                l
            } else {
                debug_assert!(l < u, "Fourier-Motzkin produced an empty interval");
                (l + u) / (Rat::one() + Rat::one())
            }
        }
    };
    let mut out = partial;
    out.push(y);
    Some(out)
}
