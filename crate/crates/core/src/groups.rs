//! Finite isometry groups of the round `S³ ⊂ ℝ⁴`, their orbits, isotropy
//! and group-averaged functions.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

pub type Mat4 = Matrix4<f64>;
pub type Vec4 = Vector4<f64>;

/// Tolerance for identifying points or matrices.
pub const MERGE_TOL: f64 = 1e-9;
const ORTHO_TOL: f64 = 1e-12;
const MAX_ORDER: usize = 4096;

/// Geodesic distance on the unit `S³`, accurate near `0` and near `π`.
pub fn sphere_distance(a: &Vec4, b: &Vec4) -> f64 {
    2.0 * (a - b).norm().atan2((a + b).norm())
}

/// Named families of actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupLabel {
    Trivial,
    Antipodal,
    Lens {
        p: u32,
        q: u32,
    },
    /// `diag(-1, -1, 1, 1)`: rotation by `π` fixing a great circle.
    RotationPi,
    Custom,
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::Trivial => write!(f, "trivial"),
            GroupLabel::Antipodal => write!(f, "antipodal"),
            GroupLabel::Lens { p, q } => write!(f, "lens({p},{q})"),
            GroupLabel::RotationPi => write!(f, "rotation-pi"),
            GroupLabel::Custom => write!(f, "custom"),
        }
    }
}

/// Finite subgroup of `O(4)` given by its full element list.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroupAction {
    label: GroupLabel,
    generators: Vec<Mat4>,
    elements: Vec<Mat4>,
}

fn same_matrix(a: &Mat4, b: &Mat4) -> bool {
    (a - b).amax() < MERGE_TOL
}

fn planar_rotation(angle: f64) -> (f64, f64) {
    (angle.cos(), angle.sin())
}

impl FiniteGroupAction {
    /// Closes `generators` under multiplication.
    ///
    /// Fails when a generator is not orthogonal or the closure exceeds
    /// 4096 elements.
    pub fn from_generators(label: GroupLabel, generators: Vec<Mat4>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            let defect = (g.transpose() * g - Mat4::identity()).amax();
            if defect > ORTHO_TOL {
                return Err(Error::Domain(format!(
                    "generator {i} is not orthogonal (defect {defect:e})"
                )));
            }
        }
        let mut elements = vec![Mat4::identity()];
        let mut queue = VecDeque::from([Mat4::identity()]);
        while let Some(h) = queue.pop_front() {
            for g in &generators {
                let gh = g * h;
                if !elements.iter().any(|e| same_matrix(e, &gh)) {
                    if elements.len() >= MAX_ORDER {
                        return Err(Error::TooLarge {
                            what: "group closure",
                            size: elements.len() + 1,
                            limit: MAX_ORDER,
                        });
                    }
                    elements.push(gh);
                    queue.push_back(gh);
                }
            }
        }
        let action = Self {
            label,
            generators,
            elements,
        };
        action.verify_table()?;
        Ok(action)
    }

    fn verify_table(&self) -> Result<()> {
        for a in &self.elements {
            if self.index_of(&a.transpose()).is_none() {
                return Err(Error::Consistency(
                    "group is not closed under inverses".into(),
                ));
            }
            for b in &self.elements {
                if self.index_of(&(a * b)).is_none() {
                    return Err(Error::Consistency(
                        "group is not closed under products".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn trivial() -> Self {
        Self::from_generators(GroupLabel::Trivial, Vec::new()).expect("identity group")
    }

    pub fn antipodal() -> Self {
        Self::from_generators(GroupLabel::Antipodal, vec![-Mat4::identity()]).expect("ℤ₂")
    }

    /// `ℤ_p` generated by `blockdiag(R(2π/p), R(2πq/p))`; free when `gcd(p, q) = 1`.
    pub fn lens(p: u32, q: u32) -> Result<Self> {
        if p == 0 {
            return Err(Error::Domain("lens order must be positive".into()));
        }
        let (c1, s1) = planar_rotation(2.0 * PI / p as f64);
        let (c2, s2) = planar_rotation(2.0 * PI * q as f64 / p as f64);
        #[rustfmt::skip]
        let g = Mat4::new(
            c1, -s1, 0.0, 0.0,
            s1, c1, 0.0, 0.0,
            0.0, 0.0, c2, -s2,
            0.0, 0.0, s2, c2,
        );
        Self::from_generators(GroupLabel::Lens { p, q }, vec![g])
    }

    pub fn rotation_pi() -> Self {
        let g = Mat4::from_diagonal(&Vec4::new(-1.0, -1.0, 1.0, 1.0));
        Self::from_generators(GroupLabel::RotationPi, vec![g]).expect("ℤ₂")
    }

    /// Builds the action named by `label`; `Custom` needs explicit generators.
    pub fn from_label(label: GroupLabel) -> Result<Self> {
        match label {
            GroupLabel::Trivial => Ok(Self::trivial()),
            GroupLabel::Antipodal => Ok(Self::antipodal()),
            GroupLabel::Lens { p, q } => Self::lens(p, q),
            GroupLabel::RotationPi => Ok(Self::rotation_pi()),
            GroupLabel::Custom => Err(Error::Config(
                "custom actions must list their generator matrices".into(),
            )),
        }
    }

    pub fn label(&self) -> GroupLabel {
        self.label
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Mat4] {
        &self.elements
    }

    pub fn generators(&self) -> &[Mat4] {
        &self.generators
    }

    pub fn index_of(&self, m: &Mat4) -> Option<usize> {
        self.elements.iter().position(|e| same_matrix(e, m))
    }

    /// The action `x ↦ O g Oᵀ x` for a fixed orthogonal `O`.
    pub fn conjugated(&self, o: &Mat4) -> Result<Self> {
        let gens = self
            .generators
            .iter()
            .map(|g| o * g * o.transpose())
            .collect();
        Self::from_generators(self.label, gens)
    }
}

/// Orbit of a point together with the induced permutations.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitData {
    pub base_point: Vec4,
    pub orbit_points: Vec<Vec4>,
    pub isotropy_order: usize,
}

impl OrbitData {
    pub fn cardinality(&self) -> usize {
        self.orbit_points.len()
    }

    pub fn index_of(&self, x: &Vec4) -> Option<usize> {
        self.orbit_points
            .iter()
            .position(|q| (q - x).amax() < MERGE_TOL)
    }

    /// Permutation `j ↦ index of g·q_j` of the orbit points.
    pub fn permutation(&self, g: &Mat4) -> Result<Vec<usize>> {
        self.orbit_points
            .iter()
            .map(|q| {
                self.index_of(&(g * q))
                    .ok_or_else(|| Error::Consistency("matrix does not preserve the orbit".into()))
            })
            .collect()
    }
}

fn check_unit(p: &Vec4) -> Result<()> {
    let n = p.norm();
    if (n - 1.0).abs() > MERGE_TOL {
        return Err(Error::Domain(format!("point has norm {n}, expected 1")));
    }
    Ok(())
}

/// `{ g·p : g ∈ G }` with duplicates merged at 1e-9.
pub fn orbit(action: &FiniteGroupAction, p: &Vec4) -> Result<OrbitData> {
    check_unit(p)?;
    let mut points: Vec<Vec4> = Vec::new();
    for g in action.elements() {
        let q = g * p;
        if !points.iter().any(|x| (x - q).amax() < MERGE_TOL) {
            points.push(q);
        }
    }
    let card = points.len();
    if !action.order().is_multiple_of(card) {
        return Err(Error::Consistency(format!(
            "orbit of size {card} does not divide group order {}",
            action.order()
        )));
    }
    Ok(OrbitData {
        base_point: *p,
        isotropy_order: action.order() / card,
        orbit_points: points,
    })
}

/// Orthonormal basis (columns) of `{ x : M x = 0 }` for `M` with four
/// columns and at least four rows.
fn null_space(m: &DMatrix<f64>) -> DMatrix<f64> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let rows: Vec<usize> = (0..v_t.nrows())
        .filter(|&i| svd.singular_values[i] < MERGE_TOL)
        .collect();
    DMatrix::from_fn(4, rows.len(), |r, c| v_t[(rows[c], r)])
}

fn projector(basis: &DMatrix<f64>) -> Mat4 {
    let p = basis * basis.transpose();
    Mat4::from_fn(|r, c| p[(r, c)])
}

/// `+1`-eigenspaces of all non-identity elements and their intersections,
/// as orthogonal projectors.
pub fn fixed_subspaces(action: &FiniteGroupAction) -> Vec<Mat4> {
    let mut found: Vec<Mat4> = Vec::new();
    let push = |found: &mut Vec<Mat4>, p: Mat4| {
        if p.trace() > 0.5 && !found.iter().any(|q| (q - p).amax() < 1e-8) {
            found.push(p);
            true
        } else {
            false
        }
    };
    for g in action.elements() {
        if same_matrix(g, &Mat4::identity()) {
            continue;
        }
        let m = DMatrix::from_fn(4, 4, |r, c| g[(r, c)] - if r == c { 1.0 } else { 0.0 });
        push(&mut found, projector(&null_space(&m)));
    }
    let mut i = 0;
    while i < found.len() {
        for j in 0..i {
            let a = Mat4::identity() - found[i];
            let b = Mat4::identity() - found[j];
            let stacked =
                DMatrix::from_fn(8, 4, |r, c| if r < 4 { a[(r, c)] } else { b[(r - 4, c)] });
            let p = projector(&null_space(&stacked));
            push(&mut found, p);
        }
        i += 1;
    }
    found
}

fn generic_direction(k: usize) -> Vec4 {
    Vec4::new(
        0.312_417_529 + 0.1 * k as f64,
        0.577_215_665,
        0.141_421_356 - 0.05 * k as f64,
        0.704_931_217 + 0.03 * k as f64,
    )
}

/// Smallest orbit size over `samples`, over a generic point, and over a
/// generic point of every fixed subspace.
///
/// Every stabiliser fixes a subspace in the intersection closure, so the
/// minimum is exact for finite groups.
pub fn min_orbit_cardinality(action: &FiniteGroupAction, samples: &[Vec4]) -> usize {
    let mut candidates: Vec<Vec4> = samples
        .iter()
        .filter(|p| p.norm() > 0.0)
        .map(|p| p.normalize())
        .collect();
    candidates.push(generic_direction(0).normalize());
    for proj in fixed_subspaces(action) {
        for k in 0..4 {
            let v = proj * generic_direction(k);
            if v.norm() > 1e-3 {
                candidates.push(v.normalize());
                break;
            }
        }
    }
    candidates
        .iter()
        .filter_map(|p| orbit(action, p).ok())
        .map(|o| o.cardinality())
        .min()
        .unwrap_or(action.order())
}

type ScalarField = dyn Fn(&Vec4) -> f64 + Send + Sync;

/// `x ↦ (1/|G_p|) Σ_{g∈G} f(g·x)`.
#[derive(Clone)]
pub struct AveragedFunction {
    f: Arc<ScalarField>,
    elements: Vec<Mat4>,
    isotropy_order: usize,
}

impl fmt::Debug for AveragedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AveragedFunction")
            .field("group_order", &self.elements.len())
            .field("isotropy_order", &self.isotropy_order)
            .finish_non_exhaustive()
    }
}

impl AveragedFunction {
    pub fn eval(&self, x: &Vec4) -> f64 {
        self.elements
            .iter()
            .map(|g| (self.f)(&(g * x)))
            .sum::<f64>()
            / self.isotropy_order as f64
    }

    /// Largest `|F(g·x) − F(x)|` over all elements and the given points.
    pub fn invariance_defect(&self, points: &[Vec4]) -> f64 {
        points
            .iter()
            .flat_map(|x| {
                let fx = self.eval(x);
                self.elements
                    .iter()
                    .map(move |g| (self.eval(&(g * x)) - fx).abs())
            })
            .fold(0.0, f64::max)
    }
}

pub fn average_function<F>(
    action: &FiniteGroupAction,
    f: F,
    isotropy_order: usize,
) -> Result<AveragedFunction>
where
    F: Fn(&Vec4) -> f64 + Send + Sync + 'static,
{
    if isotropy_order == 0 || !action.order().is_multiple_of(isotropy_order) {
        return Err(Error::Domain(format!(
            "isotropy order {isotropy_order} does not divide group order {}",
            action.order()
        )));
    }
    Ok(AveragedFunction {
        f: Arc::new(f),
        elements: action.elements().to_vec(),
        isotropy_order,
    })
}

/// Deterministic uniform samples on `S³`.
pub fn random_sphere_points(seed: u64, n: usize) -> Vec<Vec4> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let v = Vec4::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let r = v.norm();
        if r > 0.1 && r <= 1.0 {
            out.push(v / r);
        }
    }
    out
}

/// Deterministic random orthogonal matrix (Gram–Schmidt on a random frame).
pub fn random_orthogonal(seed: u64) -> Mat4 {
    let cols = random_sphere_points(seed, 4);
    let m = Mat4::from_columns(&cols);
    m.qr().q()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e1() -> Vec4 {
        Vec4::new(1.0, 0.0, 0.0, 0.0)
    }

    #[test]
    fn basic_orbits() {
        let o = orbit(&FiniteGroupAction::antipodal(), &e1()).unwrap();
        assert_eq!((o.cardinality(), o.isotropy_order), (2, 1));
        let l5 = FiniteGroupAction::lens(5, 1).unwrap();
        assert_eq!(l5.order(), 5);
        for p in random_sphere_points(3, 10) {
            assert_eq!(orbit(&l5, &p).unwrap().cardinality(), 5);
        }
        let t = orbit(&FiniteGroupAction::trivial(), &e1()).unwrap();
        assert_eq!(t.cardinality(), 1);
    }

    #[test]
    fn non_unit_point_rejected() {
        let r = orbit(
            &FiniteGroupAction::trivial(),
            &Vec4::new(2.0, 0.0, 0.0, 0.0),
        );
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn non_orthogonal_generator_rejected() {
        let r =
            FiniteGroupAction::from_generators(GroupLabel::Custom, vec![Mat4::identity() * 2.0]);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn infinite_order_generator_refused() {
        let (c, s) = planar_rotation(1.0);
        #[rustfmt::skip]
        let g = Mat4::new(c, -s, 0.0, 0.0, s, c, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        let r = FiniteGroupAction::from_generators(GroupLabel::Custom, vec![g]);
        assert!(matches!(r, Err(Error::TooLarge { .. })));
    }

    #[test]
    fn minimal_orbits() {
        assert_eq!(
            min_orbit_cardinality(&FiniteGroupAction::antipodal(), &[e1()]),
            2
        );
        assert_eq!(
            min_orbit_cardinality(&FiniteGroupAction::rotation_pi(), &[e1()]),
            1
        );
        assert_eq!(
            min_orbit_cardinality(&FiniteGroupAction::lens(7, 2).unwrap(), &[]),
            7
        );
        // ℤ₄ acting as R(π/2) ⊕ R(π): fixed points of g² exist only for g².
        let l = FiniteGroupAction::lens(4, 2).unwrap();
        assert_eq!(min_orbit_cardinality(&l, &[]), 2);
        // A Klein four-group whose elements all fix something but have no
        // common fixed direction beyond one axis.
        let a = Mat4::from_diagonal(&Vec4::new(-1.0, 1.0, 1.0, 1.0));
        let b = Mat4::from_diagonal(&Vec4::new(1.0, -1.0, 1.0, 1.0));
        let k = FiniteGroupAction::from_generators(GroupLabel::Custom, vec![a, b]).unwrap();
        assert_eq!(k.order(), 4);
        assert_eq!(min_orbit_cardinality(&k, &[]), 1);
    }

    #[test]
    fn averaging() {
        let t = FiniteGroupAction::trivial();
        let f = average_function(&t, |x: &Vec4| x[0] + 2.0 * x[3], 1).unwrap();
        let x = random_sphere_points(1, 1)[0];
        assert!((f.eval(&x) - (x[0] + 2.0 * x[3])).abs() < 1e-15);

        let a = FiniteGroupAction::antipodal();
        let odd = average_function(&a, |x: &Vec4| x[0], 1).unwrap();
        for x in random_sphere_points(2, 20) {
            assert!(odd.eval(&x).abs() < 1e-15);
        }
        assert!(matches!(
            average_function(&a, |_| 1.0, 0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            average_function(&a, |_| 1.0, 3),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn orbit_permutation() {
        let l = FiniteGroupAction::lens(3, 1).unwrap();
        let o = orbit(&l, &e1()).unwrap();
        let perm = o.permutation(&l.generators()[0]).unwrap();
        let mut sorted = perm.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2]);
        assert!(perm.iter().enumerate().all(|(i, &j)| i != j));
    }

    #[test]
    fn sphere_distance_is_accurate() {
        let a = e1();
        assert!((sphere_distance(&a, &-a) - PI).abs() < 1e-15);
        let b = Vec4::new(1e-9f64.cos(), 1e-9f64.sin(), 0.0, 0.0);
        assert!((sphere_distance(&a, &b) - 1e-9).abs() < 1e-22);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn any_action() -> impl Strategy<Value = FiniteGroupAction> {
            prop_oneof![
                Just(FiniteGroupAction::trivial()),
                Just(FiniteGroupAction::antipodal()),
                Just(FiniteGroupAction::rotation_pi()),
                (1u32..8, 0u32..8).prop_map(|(p, q)| FiniteGroupAction::lens(p, q).unwrap()),
            ]
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn orbit_stabilizer(action in any_action(), seed in 0u64..1000) {
                for p in random_sphere_points(seed, 3) {
                    let o = orbit(&action, &p).unwrap();
                    prop_assert_eq!(o.cardinality() * o.isotropy_order, action.order());
                }
                // Fixed-subspace points too, where isotropy is non-trivial.
                for proj in fixed_subspaces(&action) {
                    let v = proj * generic_direction(1);
                    if v.norm() > 1e-3 {
                        let o = orbit(&action, &v.normalize()).unwrap();
                        prop_assert_eq!(o.cardinality() * o.isotropy_order, action.order());
                    }
                }
            }

            #[test]
            fn averaged_function_is_invariant(action in any_action(), seed in 0u64..1000) {
                let w = random_sphere_points(seed ^ 0xabc, 1)[0];
                let f = average_function(&action, move |x: &Vec4| (x.dot(&w) * 3.0).exp(), 1).unwrap();
                prop_assert!(f.invariance_defect(&random_sphere_points(seed, 100)) < 1e-10);
            }

            #[test]
            fn min_orbit_is_conjugation_invariant(action in any_action(), seed in 0u64..1000) {
                let o = random_orthogonal(seed);
                let conj = action.conjugated(&o).unwrap();
                prop_assert_eq!(min_orbit_cardinality(&action, &[]), min_orbit_cardinality(&conj, &[]));
            }
        }
    }
}
