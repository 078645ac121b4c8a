//! Lift of a surface global body cone to a threefold whose effective
//! divisors are all nef: the cone C(S) in R^2 x N1(X) is the preimage of
//! the surface cone restricted over Q, intersected with the nonnegative
//! valuation orthant and Eff(X); its rays, shifted by the section of Y1,
//! generate the threefold body cone in R^3 x N1(X).

use num_traits::Zero;

use crate::cone::{halfspace_intersection, Cone};
use crate::error::{Error, Result};
use crate::linalg::{dot, lex_cmp, primitive, rank, vsub, Rat};
use crate::lp::cone_membership;
use crate::minkowski::GlobalBodyCone;
use crate::polygon::hull2;
use crate::surface::{DivisorClass, SurfaceData, Violation};

#[derive(Clone, Debug)]
pub struct ThreefoldData {
    pub rank: usize,
    pub eff_generators: Vec<DivisorClass>,
    pub y1_class: DivisorClass,
    /// rho(Y1) x rank matrix sending a class of X to its restriction.
    pub restriction: Vec<Vec<Rat>>,
    /// optional cubic form tensor t[i][j][k] for volume oracles
    pub triple_products: Option<Vec<Vec<Vec<Rat>>>>,
}

impl ThreefoldData {
    pub fn surface_rank(&self) -> usize {
        self.restriction.len()
    }

    pub fn restrict(&self, d: &DivisorClass) -> DivisorClass {
        DivisorClass(self.restriction.iter().map(|row| dot(row, &d.0)).collect())
    }

    pub fn eff_cone(&self) -> Result<Cone> {
        let gens: Vec<Vec<Rat>> = self.eff_generators.iter().map(|g| g.0.clone()).collect();
        Cone::from_rays(self.rank, &gens)
    }

    /// D^3 from the instance's triple products, when supplied.
    pub fn volume3(&self, d: &DivisorClass) -> Option<Rat> {
        let t = self.triple_products.as_ref()?;
        let mut v = Rat::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                for k in 0..self.rank {
                    v += &d.0[i] * &d.0[j] * &(&d.0[k] * &t[i][j][k]);
                }
            }
        }
        Some(v)
    }

    pub fn validate(&self, surface: &SurfaceData) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |invariant: &str, witness: String| {
            out.push(Violation {
                invariant: invariant.into(),
                witness,
            });
        };
        if self.restriction.len() != surface.rank
            || self.restriction.iter().any(|r| r.len() != self.rank)
        {
            push(
                "restriction_shape",
                format!(
                    "expected {} x {} matrix",
                    surface.rank, self.rank
                ),
            );
            return out;
        }
        if self.eff_generators.is_empty() {
            push("eff_generators", "empty generator list".into());
            return out;
        }
        for g in &self.eff_generators {
            if g.0.len() != self.rank {
                push("class_length", format!("{:?}", g.0));
                return out;
            }
            match surface.is_pseudo_effective(&self.restrict(g)) {
                Ok(true) => {}
                _ => push(
                    "restriction_effective",
                    format!("restriction of {:?} leaves Eff(Y1)", g.0),
                ),
            }
        }
        if self.y1_class.0.len() != self.rank {
            push("class_length", format!("{:?}", self.y1_class.0));
            return out;
        }
        match self.eff_cone() {
            Ok(eff) if eff.contains(&self.y1_class.0) => {}
            _ => push("y1_effective", format!("{:?}", self.y1_class.0)),
        }
        if let Some(t) = &self.triple_products {
            if t.len() != self.rank
                || t.iter()
                    .any(|m| m.len() != self.rank || m.iter().any(|r| r.len() != self.rank))
            {
                push("triple_products_shape", format!("{} entries", t.len()));
            }
        }
        out
    }
}

/// Q: the cone generated by the restrictions of the effective generators.
pub fn restricted_cone_q(data: &ThreefoldData, surface: &SurfaceData) -> Result<Cone> {
    let mut images = Vec::new();
    for g in &data.eff_generators {
        let img = data.restrict(g);
        if !surface.is_pseudo_effective(&img)? {
            return Err(Error::Input(format!(
                "restriction matrix inconsistent: image of {:?} lies outside Eff(Y1)",
                g.0
            )));
        }
        images.push(img.0);
    }
    Cone::from_rays(surface.rank, &images)
}

#[derive(Clone, Debug)]
pub struct LiftedCone {
    pub class_dim: usize,
    /// C(S) in R^2 x N1(X)
    pub cone: Cone,
    /// integral primitive rays w_1, ..., w_k of C(S)
    pub rays: Vec<Vec<Rat>>,
    /// conic certificate of q(w_i) over the surface cone generators
    pub certificates: Vec<Vec<Rat>>,
    /// generators of the body cone in R^3 x N1(X): ((1,0,0),[Y1]) and (0,w_i)
    pub generators: Vec<Vec<Rat>>,
    pub y1: DivisorClass,
}

fn pull_back_class_part(data: &ThreefoldData, h_class: &[Rat]) -> Vec<Rat> {
    (0..data.rank)
        .map(|j| {
            let mut s = Rat::zero();
            for (i, c) in h_class.iter().enumerate() {
                s += c * &data.restriction[i][j];
            }
            s
        })
        .collect()
}

/// C(S) = q^{-1}(p2^{-1}(Q) cap surface cone) cap (R>=0)^2 x Eff(X).
pub fn lift_cone(
    data: &ThreefoldData,
    surface: &SurfaceData,
    surface_global: &GlobalBodyCone,
) -> Result<LiftedCone> {
    if surface_global.class_dim != surface.rank
        || surface.rank != data.surface_rank()
        || surface_global.valuation_dim != 2
    {
        return Err(Error::Input(
            "surface cone ambient does not match the threefold data".into(),
        ));
    }
    let m = 2 + data.rank;
    let q_cone = restricted_cone_q(data, surface)?;
    let surf_cone = surface_global.cone()?;
    let mut halfspaces: Vec<Vec<Rat>> = Vec::new();
    for h in &surf_cone.ineqs {
        let (hv, hc) = h.split_at(2);
        let mut pulled = hv.to_vec();
        pulled.extend(pull_back_class_part(data, hc));
        halfspaces.push(pulled);
    }
    for g in &q_cone.ineqs {
        let mut pulled = vec![Rat::zero(), Rat::zero()];
        pulled.extend(pull_back_class_part(data, g));
        halfspaces.push(pulled);
    }
    for i in 0..2 {
        let mut e = crate::linalg::vzero(m);
        e[i] = crate::linalg::qi(1);
        halfspaces.push(e);
    }
    for h in &data.eff_cone()?.ineqs {
        let mut pulled = vec![Rat::zero(), Rat::zero()];
        pulled.extend(h.iter().cloned());
        halfspaces.push(pulled);
    }
    let cone = Cone::from_ineqs(m, &halfspaces)?;
    let mut certificates = Vec::new();
    for w in &cone.rays {
        if w[0] < Rat::zero() || w[1] < Rat::zero() {
            return Err(Error::Internal(
                "lifted ray has a negative valuation coordinate".into(),
            ));
        }
        let class = DivisorClass(w[2..].to_vec());
        let mut image = vec![w[0].clone(), w[1].clone()];
        image.extend(data.restrict(&class).0);
        let cert = surf_cone.membership(&image)?.ok_or_else(|| {
            Error::Internal("lifted ray maps outside the surface cone".into())
        })?;
        if cone_membership(&q_cone.rays, &data.restrict(&class).0)?.is_none() {
            return Err(Error::Internal("lifted ray maps outside Q".into()));
        }
        certificates.push(cert);
    }
    let mut generators: Vec<Vec<Rat>> = Vec::new();
    let mut g0 = vec![crate::linalg::qi(1), Rat::zero(), Rat::zero()];
    g0.extend(data.y1_class.0.iter().cloned());
    generators.push(g0);
    for w in &cone.rays {
        let mut g = vec![Rat::zero()];
        g.extend(w.iter().cloned());
        generators.push(g);
    }
    Ok(LiftedCone {
        class_dim: data.rank,
        rays: cone.rays.clone(),
        certificates,
        cone,
        generators,
        y1: data.y1_class.clone(),
    })
}

/// Exact bounded 3-polytope given by its vertices and the affine
/// inequalities that cut it out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope3 {
    pub vertices: Vec<Vec<Rat>>,
    pub ineqs: Vec<(Vec<Rat>, Rat)>,
}

impl Polytope3 {
    pub fn contains(&self, p: &[Rat]) -> bool {
        self.ineqs.iter().all(|(a, c)| dot(a, p) >= *c)
    }

    pub fn dimension(&self) -> usize {
        if self.vertices.len() < 2 {
            return 0;
        }
        let diffs: Vec<Vec<Rat>> = self.vertices[1..]
            .iter()
            .map(|v| vsub(v, &self.vertices[0]))
            .collect();
        rank(&diffs)
    }

    /// Exact volume: fan of tetrahedra from the first vertex over a
    /// triangulation of each facet.
    pub fn volume(&self) -> Rat {
        if self.dimension() < 3 {
            return Rat::zero();
        }
        let v0 = &self.vertices[0];
        let mut total = Rat::zero();
        let mut seen: Vec<Vec<Rat>> = Vec::new();
        for (a, c) in &self.ineqs {
            let mut key = a.clone();
            key.push(c.clone());
            let key = primitive(&key);
            if seen.contains(&key) {
                continue;
            }
            seen.push(key);
            if dot(a, v0) == *c {
                continue;
            }
            let facet: Vec<&Vec<Rat>> = self
                .vertices
                .iter()
                .filter(|v| dot(a, v) == *c)
                .collect();
            if facet.len() < 3 {
                continue;
            }
            let diffs: Vec<Vec<Rat>> = facet[1..].iter().map(|v| vsub(v, facet[0])).collect();
            if rank(&diffs) != 2 {
                continue;
            }
            // order the facet vertices by projecting onto two
            // coordinates independent on its plane
            let cols = independent_plane_columns(&diffs);
            let projected: Vec<(Rat, Rat)> = facet
                .iter()
                .map(|v| (v[cols.0].clone(), v[cols.1].clone()))
                .collect();
            let ordered = hull2(&projected);
            let lift = |p: &(Rat, Rat)| -> &Vec<Rat> {
                facet[projected.iter().position(|q| q == p).expect("facet vertex")]
            };
            let pts: Vec<&Vec<Rat>> = ordered.vertices().iter().map(lift).collect();
            for i in 1..pts.len() - 1 {
                let e1 = vsub(pts[0], v0);
                let e2 = vsub(pts[i], v0);
                let e3 = vsub(pts[i + 1], v0);
                let det = crate::linalg::det(&[e1, e2, e3]);
                total += if det < Rat::zero() { -det } else { det };
            }
        }
        total / crate::linalg::qi(6)
    }
}

fn independent_plane_columns(diffs: &[Vec<Rat>]) -> (usize, usize) {
    for i in 0..3 {
        for j in i + 1..3 {
            let sub: Vec<Vec<Rat>> = diffs
                .iter()
                .map(|d| vec![d[i].clone(), d[j].clone()])
                .collect();
            if rank(&sub) == 2 {
                return (i, j);
            }
        }
    }
    unreachable!("facet has affine rank 2")
}

/// Fiber of the lifted body cone over a class of X, as a 3-polytope.
pub fn fiber3(l: &LiftedCone, d: &DivisorClass) -> Result<Polytope3> {
    if d.0.len() != l.class_dim {
        return Err(Error::Dimension(format!(
            "class has length {} but the cone fibers over dimension {}",
            d.0.len(),
            l.class_dim
        )));
    }
    let ambient = 3 + l.class_dim;
    let cone = Cone::from_rays(ambient, &l.generators)?;
    let mut affine: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for h in &cone.ineqs {
        let (hv, hc) = h.split_at(3);
        affine.push((hv.to_vec(), -dot(hc, &d.0)));
    }
    let normals: Vec<Vec<Rat>> = affine.iter().map(|(a, _)| a.clone()).collect();
    let (lin, recession) = halfspace_intersection(3, &normals)?;
    if !lin.is_empty() || !recession.is_empty() {
        return Err(Error::Internal("fiber is unbounded".into()));
    }
    let mut vertices: Vec<Vec<Rat>> = Vec::new();
    let n = affine.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let rows = vec![affine[i].0.clone(), affine[j].0.clone(), affine[k].0.clone()];
                let rhs = vec![affine[i].1.clone(), affine[j].1.clone(), affine[k].1.clone()];
                let Some(sol) = crate::linalg::solve_linear(&rows, &rhs)? else {
                    continue;
                };
                if !sol.kernel.is_empty() {
                    continue;
                }
                let p = sol.particular;
                if affine.iter().all(|(a, c)| dot(a, &p) >= *c) && !vertices.contains(&p) {
                    vertices.push(p);
                }
            }
        }
    }
    if vertices.is_empty() {
        return Err(Error::Domain(
            "empty fiber: class outside the effective cone".into(),
        ));
    }
    vertices.sort_by(|a, b| lex_cmp(a, b));
    Ok(Polytope3 {
        vertices,
        ineqs: affine,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qi, qvec};
    use crate::minkowski::global_generators_surface;
    use crate::testutil::{bl2p2, flag, hirzebruch};

    /// P1 x P1 x P1 over Y1 = P1 x P1, restriction drops the last factor.
    fn boxfold() -> (ThreefoldData, SurfaceData) {
        let data = ThreefoldData {
            rank: 3,
            eff_generators: vec![
                DivisorClass(qvec(&[1, 0, 0])),
                DivisorClass(qvec(&[0, 1, 0])),
                DivisorClass(qvec(&[0, 0, 1])),
            ],
            y1_class: DivisorClass(qvec(&[0, 0, 1])),
            restriction: vec![qvec(&[1, 0, 0]), qvec(&[0, 1, 0])],
            triple_products: Some(triple_form_box()),
        };
        (data, hirzebruch(0))
    }

    /// symmetric form with D^3 = 6 d1 d2 d3
    fn triple_form_box() -> Vec<Vec<Vec<Rat>>> {
        let mut t = vec![vec![vec![qi(0); 3]; 3]; 3];
        for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            t[p[0]][p[1]][p[2]] = qi(1);
        }
        t
    }

    fn boxfold_lift() -> (ThreefoldData, LiftedCone) {
        let (data, surface) = boxfold();
        let f = flag(&[1, 1]);
        let global = global_generators_surface(&surface, &f).unwrap();
        let lifted = lift_cone(&data, &surface, &global).unwrap();
        (data, lifted)
    }

    #[test]
    fn q_of_identity_restriction_is_eff() {
        let surface = bl2p2();
        let data = ThreefoldData {
            rank: 3,
            eff_generators: surface.eff_generators.clone(),
            y1_class: DivisorClass(qvec(&[1, 0, 0])),
            restriction: vec![qvec(&[1, 0, 0]), qvec(&[0, 1, 0]), qvec(&[0, 0, 1])],
            triple_products: None,
        };
        let q = restricted_cone_q(&data, &surface).unwrap();
        assert_eq!(q, surface.eff_cone().unwrap());
    }

    #[test]
    fn boxfold_q_is_first_quadrant() {
        let (data, surface) = boxfold();
        let q = restricted_cone_q(&data, &surface).unwrap();
        assert_eq!(q.rays, vec![qvec(&[0, 1]), qvec(&[1, 0])]);
    }

    #[test]
    fn scaled_restriction_gives_same_cone() {
        let (mut data, surface) = boxfold();
        for row in data.restriction.iter_mut() {
            for x in row.iter_mut() {
                *x *= qi(2);
            }
        }
        let q = restricted_cone_q(&data, &surface).unwrap();
        assert_eq!(q.rays, vec![qvec(&[0, 1]), qvec(&[1, 0])]);
    }

    #[test]
    fn boxfold_lift_certificates_and_slice_law() {
        let (_, lifted) = boxfold_lift();
        assert_eq!(lifted.certificates.len(), lifted.rays.len());
        for g in &lifted.generators[1..] {
            assert!(g[0].is_zero());
        }
        for w in &lifted.rays {
            assert!(w[0] >= qi(0) && w[1] >= qi(0));
        }
    }

    #[test]
    fn boxfold_fiber_over_y1() {
        let (data, lifted) = boxfold_lift();
        let f = fiber3(&lifted, &data.y1_class).unwrap();
        assert!(f.contains(&qvec(&[1, 0, 0])));
        assert!(f.contains(&qvec(&[0, 0, 0])));
        assert_eq!(f.volume(), qi(0));
    }

    #[test]
    fn boxfold_fiber_volumes_match_triple_products() {
        let (data, lifted) = boxfold_lift();
        for d in [[1i64, 1, 1], [2, 3, 4], [1, 2, 1]] {
            let class = DivisorClass(qvec(&d));
            let f = fiber3(&lifted, &class).unwrap();
            let vol3 = data.volume3(&class).unwrap();
            assert_eq!(f.volume() * qi(6), vol3, "class {:?}", d);
        }
    }

    #[test]
    fn boxfold_shift_law() {
        let (data, lifted) = boxfold_lift();
        let d = DivisorClass(qvec(&[2, 1, 1]));
        let small = fiber3(&lifted, &d).unwrap();
        let big = fiber3(&lifted, &d.add(&data.y1_class)).unwrap();
        for v in &small.vertices {
            let shifted = vec![&v[0] + qi(1), v[1].clone(), v[2].clone()];
            assert!(big.contains(&shifted));
        }
    }

    #[test]
    fn boundary_fiber_slices_to_surface_fiber() {
        let (data, lifted) = boxfold_lift();
        let (_, surface) = boxfold();
        let f = flag(&[1, 1]);
        let global = global_generators_surface(&surface, &f).unwrap();
        let d = DivisorClass(qvec(&[1, 2, 0]));
        let f3 = fiber3(&lifted, &d).unwrap();
        // every vertex has x1 = 0; the (x2,x3) shadow is the surface fiber
        assert!(f3.vertices.iter().all(|v| v[0].is_zero()));
        let shadow = hull2(
            &f3.vertices
                .iter()
                .map(|v| (v[1].clone(), v[2].clone()))
                .collect::<Vec<_>>(),
        );
        let sf = crate::minkowski::fiber(&global, &data.restrict(&d)).unwrap();
        assert_eq!(shadow, sf);
    }

    #[test]
    fn unit_tetrahedron_volume() {
        let p = Polytope3 {
            vertices: vec![
                qvec(&[0, 0, 0]),
                qvec(&[0, 0, 1]),
                qvec(&[0, 1, 0]),
                qvec(&[1, 0, 0]),
            ],
            ineqs: vec![
                (qvec(&[1, 0, 0]), qi(0)),
                (qvec(&[0, 1, 0]), qi(0)),
                (qvec(&[0, 0, 1]), qi(0)),
                (qvec(&[-1, -1, -1]), qi(-1)),
            ],
        };
        assert_eq!(p.volume(), q(1, 6));
    }

    #[test]
    fn validate_catches_bad_restriction() {
        let (mut data, surface) = boxfold();
        data.restriction[0] = qvec(&[-1, 0, 0]);
        let v = data.validate(&surface);
        assert!(v.iter().any(|x| x.invariant == "restriction_effective"));
        assert!(restricted_cone_q(&data, &surface).is_err());
    }
}
