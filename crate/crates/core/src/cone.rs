//! A small exact model of the Cohen-Macaulay cone in a rank-ρ numerical
//! class lattice: cone membership and interior tests with Farkas
//! certificates, nef-functional checks, and stability of the cone under the
//! degree-rescaling operators ψ^ℓ. The built-in preset is the quadric cone,
//! whose coordinates are computed from the rank-one Todd classes rather than
//! transcribed.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{int_pow, Rat};
use crate::linalg::{kernel_basis, rank, separating_functional, solve};
use crate::segre::{rank_one_todd, RankOneSide};

/// A point of the numerical class lattice, in the model's fixed coordinate
/// basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericalClass {
    pub coords: Vec<Rat>,
}

impl NumericalClass {
    pub fn new(coords: Vec<Rat>) -> Self {
        assert!(!coords.is_empty(), "class needs at least one coordinate");
        NumericalClass { coords }
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        NumericalClass::new(
            coords
                .iter()
                .map(|&c| Rat::from(num_bigint::BigInt::from(c)))
                .collect(),
        )
    }

    pub fn rho(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rat::is_zero)
    }
}

/// A polyhedral cone model: generator classes with labels, plus the graded
/// dimension carried by each coordinate (used by the ψ^ℓ rescaling).
#[derive(Clone, Debug, PartialEq)]
pub struct ConeModel {
    coordinate_dims: Vec<usize>,
    generators: Vec<NumericalClass>,
    labels: Vec<String>,
}

impl ConeModel {
    pub fn new(
        coordinate_dims: Vec<usize>,
        generators: Vec<NumericalClass>,
        labels: Vec<String>,
    ) -> Self {
        let rho = coordinate_dims.len();
        assert!(rho >= 1, "model needs at least one coordinate");
        assert!(!generators.is_empty(), "model needs at least one generator");
        assert_eq!(generators.len(), labels.len(), "one label per generator");
        for g in &generators {
            assert_eq!(g.rho(), rho, "generator lives in the wrong lattice");
        }
        ConeModel {
            coordinate_dims,
            generators,
            labels,
        }
    }

    pub fn rho(&self) -> usize {
        self.coordinate_dims.len()
    }

    pub fn coordinate_dims(&self) -> &[usize] {
        &self.coordinate_dims
    }

    pub fn generators(&self) -> &[NumericalClass] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn generator_matrix_columns(&self) -> Vec<Vec<Rat>> {
        self.generators.iter().map(|g| g.coords.clone()).collect()
    }

    /// Rank of the generator set inside Q^ρ.
    pub fn span_rank(&self) -> usize {
        let cols = self.generator_matrix_columns();
        let rows: Vec<Vec<Rat>> = (0..self.rho())
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        rank(&rows)
    }
}

/// The quadric-cone preset together with the ring's own class.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadricModel {
    pub cone: ConeModel,
    /// The class of the ring itself, (1, 0).
    pub ring: NumericalClass,
}

fn todd_to_coords(class: &crate::chow::GradedClass, dims: &[usize]) -> NumericalClass {
    NumericalClass::new(dims.iter().map(|&i| class.component(i).clone()).collect())
}

/// Builds the quadric cone model from the rank-one Todd classes: coordinates
/// are the dimension-3 and dimension-2 components, giving generators
/// [P] = (1,1) and [Q] = (1,−1) and ring class [B] = (1,0).
pub fn quadric_model() -> QuadricModel {
    let dims = vec![3usize, 2];
    let p = rank_one_todd(1, 1, RankOneSide::P, 1).expect("P(1) is in the MCM list");
    let q = rank_one_todd(1, 1, RankOneSide::Q, 1).expect("Q(1) is in the MCM list");
    let b = rank_one_todd(1, 1, RankOneSide::B, 0).expect("the ring is in the MCM list");
    QuadricModel {
        cone: ConeModel::new(
            dims.clone(),
            vec![todd_to_coords(&p, &dims), todd_to_coords(&q, &dims)],
            vec!["P".into(), "Q".into()],
        ),
        ring: todd_to_coords(&b, &dims),
    }
}

/// Outcome of a cone membership query, always with an exact certificate:
/// inside comes with generator weights, outside with a functional that is
/// nonnegative on every generator and negative on the query (nonpositive
/// when rejecting an interior query that sits on the boundary).
#[derive(Clone, Debug, PartialEq)]
pub enum ConeMembership {
    Inside { weights: Vec<Rat> },
    Outside { separating_functional: Vec<Rat> },
}

impl ConeMembership {
    pub fn is_inside(&self) -> bool {
        matches!(self, ConeMembership::Inside { .. })
    }
}

/// Finds nonnegative weights with Σ w_i·g_i = c by Carathéodory search over
/// generator subsets of size ≤ ρ, smallest support first.
fn nonneg_combination(model: &ConeModel, c: &NumericalClass) -> Option<Vec<Rat>> {
    let cols = model.generator_matrix_columns();
    let rho = model.rho();
    if c.is_zero() {
        return Some(vec![Rat::zero(); cols.len()]);
    }
    let mut support = Vec::new();
    let mut found: Option<Vec<Rat>> = None;
    search_supports(cols.len(), rho, &mut support, &mut |sub| {
        if found.is_some() {
            return;
        }
        let matrix: Vec<Vec<Rat>> = (0..rho)
            .map(|r| sub.iter().map(|&k| cols[k][r].clone()).collect())
            .collect();
        if let Some(w) = solve(&matrix, &c.coords) {
            if w.iter().all(|x| !x.is_negative()) {
                let mut full = vec![Rat::zero(); cols.len()];
                for (j, &k) in sub.iter().enumerate() {
                    full[k] = w[j].clone();
                }
                found = Some(full);
            }
        }
    });
    found
}

fn search_supports(
    n: usize,
    max_size: usize,
    current: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    let start = current.last().map_or(0, |&l| l + 1);
    for k in start..n {
        current.push(k);
        visit(current);
        if current.len() < max_size {
            search_supports(n, max_size, current, visit);
        }
        current.pop();
    }
}

/// Facet normals of the cone: for every (ρ−1)-subset of generators spanning
/// a hyperplane, the normal oriented nonnegatively on all generators (if
/// such an orientation exists).
fn facet_normals(model: &ConeModel) -> Vec<Vec<Rat>> {
    let rho = model.rho();
    let gens = model.generator_matrix_columns();
    let dot = |a: &[Rat], b: &[Rat]| -> Rat {
        a.iter()
            .zip(b)
            .map(|(x, y)| x * y)
            .fold(Rat::zero(), |s, v| s + v)
    };
    let mut normals: Vec<Vec<Rat>> = Vec::new();
    let mut support = Vec::new();
    let subset_size = rho - 1;
    let mut visit = |sub: &[usize]| {
        if sub.len() != subset_size {
            return;
        }
        // Normal directions = kernel of the subset rows g_k·y = 0.
        let matrix: Vec<Vec<Rat>> = sub.iter().map(|&k| gens[k].clone()).collect();
        let kb = kernel_basis(&matrix);
        if kb.len() != 1 {
            return; // subset does not span a hyperplane
        }
        let mut y = kb[0].clone();
        let mut saw_positive = false;
        let mut saw_negative = false;
        for g in &gens {
            match dot(g, &y).cmp(&Rat::zero()) {
                std::cmp::Ordering::Greater => saw_positive = true,
                std::cmp::Ordering::Less => saw_negative = true,
                std::cmp::Ordering::Equal => {}
            }
        }
        if saw_positive && saw_negative {
            return; // generators on both sides: not a facet
        }
        if saw_negative {
            for c in y.iter_mut() {
                *c = -c.clone();
            }
        }
        if !normals.contains(&y) {
            normals.push(y);
        }
    };
    if subset_size == 0 {
        // ρ = 1: the only hyperplane is the origin; facet normal is ±1.
        visit(&[]);
        // kernel of an empty system is all of Q^1, handled below instead.
        let y = vec![Rat::one()];
        let all_nonneg = gens.iter().all(|g| !g[0].is_negative());
        let all_nonpos = gens.iter().all(|g| !g[0].is_positive());
        if all_nonneg {
            normals.push(y);
        } else if all_nonpos {
            normals.push(vec![-Rat::one()]);
        }
        return normals;
    }
    search_supports(gens.len(), subset_size, &mut support, &mut visit);
    normals
}

/// Exact cone membership. Non-strict queries test c ∈ Σ R≥0·g_i; strict
/// queries test membership in the topological interior, which requires the
/// generators to span Q^ρ (otherwise `InteriorUndefined`). Every verdict
/// carries a certificate: weights inside, a separating functional outside.
pub fn cone_contains(
    model: &ConeModel,
    c: &NumericalClass,
    strict: bool,
) -> Result<ConeMembership> {
    assert_eq!(c.rho(), model.rho(), "query lives in the wrong lattice");
    if strict && model.span_rank() < model.rho() {
        return Err(Error::InteriorUndefined);
    }
    let weights = match nonneg_combination(model, c) {
        Some(w) => w,
        None => {
            let y = separating_functional(&model.generator_matrix_columns(), &c.coords)
                .expect("query outside the cone admits a separating functional");
            return Ok(ConeMembership::Outside {
                separating_functional: y,
            });
        }
    };
    if !strict {
        return Ok(ConeMembership::Inside { weights });
    }
    // Interior test: strictly positive against every facet normal. A facet
    // normal with value 0 witnesses the boundary.
    let dot = |a: &[Rat], b: &[Rat]| -> Rat {
        a.iter()
            .zip(b)
            .map(|(x, y)| x * y)
            .fold(Rat::zero(), |s, v| s + v)
    };
    for normal in facet_normals(model) {
        if !dot(&normal, &c.coords).is_positive() {
            return Ok(ConeMembership::Outside {
                separating_functional: normal,
            });
        }
    }
    Ok(ConeMembership::Inside { weights })
}

/// Evaluation report of one functional against every generator.
#[derive(Clone, Debug, PartialEq)]
pub struct NefRow {
    pub functional: Vec<Rat>,
    /// functional·generator, in generator order.
    pub values: Vec<Rat>,
    /// Indices of generators where the value is negative.
    pub violations: Vec<usize>,
}

/// Nef verdicts for a batch of functionals: each must be nonnegative on the
/// whole cone, equivalently on every generator. Violations are reported as
/// witnesses, not errors.
#[derive(Clone, Debug, PartialEq)]
pub struct NefReport {
    pub rows: Vec<NefRow>,
    pub all_nonnegative: bool,
}

pub fn nef_check(model: &ConeModel, functionals: &[Vec<Rat>]) -> NefReport {
    let rows: Vec<NefRow> = functionals
        .iter()
        .map(|f| {
            assert_eq!(f.len(), model.rho(), "functional lives in the wrong lattice");
            let values: Vec<Rat> = model
                .generators
                .iter()
                .map(|g| {
                    g.coords
                        .iter()
                        .zip(f)
                        .map(|(a, b)| a * b)
                        .fold(Rat::zero(), |s, v| s + v)
                })
                .collect();
            let violations = values
                .iter()
                .enumerate()
                .filter(|(_, v)| v.is_negative())
                .map(|(i, _)| i)
                .collect();
            NefRow {
                functional: f.clone(),
                values,
                violations,
            }
        })
        .collect();
    let all_nonnegative = rows.iter().all(|r| r.violations.is_empty());
    NefReport {
        rows,
        all_nonnegative,
    }
}

/// The nef cone of the model is pointed (Nef ∩ −Nef = {0}) iff the
/// generators span the whole lattice: a functional in both cones must kill
/// every generator.
pub fn nef_cone_is_pointed(model: &ConeModel) -> bool {
    let rows: Vec<Vec<Rat>> = model.generators.iter().map(|g| g.coords.clone()).collect();
    kernel_basis(&rows).is_empty()
}

/// Image of a class under ψ^ℓ: the coordinate carrying graded dimension i is
/// scaled by ℓ^i.
pub fn psi_image(model: &ConeModel, c: &NumericalClass, ell: u64) -> NumericalClass {
    assert!(ell >= 1, "rescaling degree must be >= 1");
    assert_eq!(c.rho(), model.rho(), "class lives in the wrong lattice");
    NumericalClass::new(
        c.coords
            .iter()
            .zip(&model.coordinate_dims)
            .map(|(v, &dim)| v * int_pow(ell, dim as u32))
            .collect(),
    )
}

/// Whether ψ^ℓ maps every generator back into the cone. For the quadric this
/// holds for every ℓ ≥ 1: ψ^ℓ[P] ∝ (ℓ, 1) = ((ℓ+1)/2)[P] + ((ℓ−1)/2)[Q].
pub fn psi_stability(model: &ConeModel, ell: u64) -> bool {
    model.generators.iter().all(|g| {
        let image = psi_image(model, g, ell);
        cone_contains(model, &image, false)
            .expect("non-strict membership cannot fail")
            .is_inside()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, rat_i};

    fn quadric() -> QuadricModel {
        quadric_model()
    }

    #[test]
    fn quadric_coordinates_are_computed() {
        let m = quadric();
        assert_eq!(m.ring.coords, vec![rat_i(1), rat_i(0)]);
        assert_eq!(m.cone.generators()[0].coords, vec![rat_i(1), rat_i(1)]);
        assert_eq!(m.cone.generators()[1].coords, vec![rat_i(1), rat_i(-1)]);
        assert_eq!(m.cone.labels(), &["P".to_string(), "Q".to_string()]);
        assert_eq!(m.cone.coordinate_dims(), &[3, 2]);
    }

    #[test]
    fn ring_is_the_generator_midpoint() {
        let m = quadric();
        let p = &m.cone.generators()[0];
        let q = &m.cone.generators()[1];
        let mid: Vec<Rat> = p
            .coords
            .iter()
            .zip(&q.coords)
            .map(|(a, b)| (a + b) / rat_i(2))
            .collect();
        assert_eq!(mid, m.ring.coords);
    }

    #[test]
    fn ring_class_is_interior() {
        let m = quadric();
        match cone_contains(&m.cone, &m.ring, true).unwrap() {
            ConeMembership::Inside { weights } => {
                assert_eq!(weights, vec![rat(1, 2), rat(1, 2)]);
            }
            ConeMembership::Outside { .. } => panic!("[B] must be interior"),
        }
    }

    #[test]
    fn generators_sit_on_the_boundary() {
        let m = quadric();
        let p = m.cone.generators()[0].clone();
        assert!(cone_contains(&m.cone, &p, false).unwrap().is_inside());
        match cone_contains(&m.cone, &p, true).unwrap() {
            ConeMembership::Inside { .. } => panic!("[P] is not interior"),
            ConeMembership::Outside {
                separating_functional,
            } => {
                // The witness is a facet normal vanishing on [P].
                let v: Rat = separating_functional
                    .iter()
                    .zip(&p.coords)
                    .map(|(a, b)| a * b)
                    .fold(Rat::zero(), |s, x| s + x);
                assert!(v.is_zero());
            }
        }
    }

    #[test]
    fn outside_queries_get_farkas_certificates() {
        let m = quadric();
        let query = NumericalClass::from_integers(&[0, 1]);
        match cone_contains(&m.cone, &query, false).unwrap() {
            ConeMembership::Inside { .. } => panic!("(0,1) is outside"),
            ConeMembership::Outside {
                separating_functional: y,
            } => {
                for g in m.cone.generators() {
                    let v: Rat = y
                        .iter()
                        .zip(&g.coords)
                        .map(|(a, b)| a * b)
                        .fold(Rat::zero(), |s, x| s + x);
                    assert!(!v.is_negative());
                }
                let v: Rat = y
                    .iter()
                    .zip(&query.coords)
                    .map(|(a, b)| a * b)
                    .fold(Rat::zero(), |s, x| s + x);
                assert!(v.is_negative());
            }
        }
    }

    #[test]
    fn interior_needs_a_full_dimensional_cone() {
        let model = ConeModel::new(
            vec![3, 2],
            vec![NumericalClass::from_integers(&[1, 1])],
            vec!["P".into()],
        );
        let q = NumericalClass::from_integers(&[1, 1]);
        assert!(matches!(
            cone_contains(&model, &q, true),
            Err(Error::InteriorUndefined)
        ));
        assert!(cone_contains(&model, &q, false).unwrap().is_inside());
    }

    #[test]
    fn nef_examples() {
        let m = quadric();
        let report = nef_check(
            &m.cone,
            &[
                vec![rat_i(1), rat_i(0)],
                vec![rat_i(2), rat_i(1)],
                vec![rat_i(1), rat_i(2)],
            ],
        );
        assert!(!report.all_nonnegative);
        assert_eq!(report.rows[0].values, vec![rat_i(1), rat_i(1)]);
        assert!(report.rows[0].violations.is_empty());
        assert_eq!(report.rows[1].values, vec![rat_i(3), rat_i(1)]);
        assert!(report.rows[1].violations.is_empty());
        assert_eq!(report.rows[2].values, vec![rat_i(3), rat_i(-1)]);
        assert_eq!(report.rows[2].violations, vec![1]);
    }

    #[test]
    fn nef_cone_pointedness() {
        let m = quadric();
        assert!(nef_cone_is_pointed(&m.cone));
        let degenerate = ConeModel::new(
            vec![3, 2],
            vec![NumericalClass::from_integers(&[1, 0])],
            vec!["X".into()],
        );
        assert!(!nef_cone_is_pointed(&degenerate));
    }

    #[test]
    fn frobenius_rescaling_keeps_the_cone() {
        let m = quadric();
        // ψ² [P] = (8, 4) ∝ (2, 1) = (3/2)[P] + (1/2)[Q].
        let image = psi_image(&m.cone, &m.cone.generators()[0], 2);
        assert_eq!(image.coords, vec![rat_i(8), rat_i(4)]);
        match cone_contains(&m.cone, &image, false).unwrap() {
            ConeMembership::Inside { weights } => {
                assert_eq!(weights, vec![rat_i(6), rat_i(2)]);
            }
            ConeMembership::Outside { .. } => panic!("psi image must stay inside"),
        }
        for ell in [1u64, 2, 3, 5, 97] {
            assert!(psi_stability(&m.cone, ell), "psi^{ell} must be stable");
        }
    }
}
