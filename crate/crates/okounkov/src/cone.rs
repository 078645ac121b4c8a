//! Rational polyhedral cones with both ray and inequality descriptions.
//!
//! The double description is computed incrementally; redundant rays are
//! pruned with the exact simplex after every halfspace, which keeps the
//! intermediate generator sets minimal without an adjacency oracle. All
//! cones handled by the higher layers are pointed.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{dot, is_zero_vec, lex_cmp, primitive, rank, vadd, vscale, vsub, vzero, Rat};
use crate::lp::{cone_membership, conic_combination};

/// Pointed rational polyhedral cone. `rays` are primitive, deduplicated
/// and pairwise non-proportional; every ray satisfies every inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub dim: usize,
    pub rays: Vec<Vec<Rat>>,
    pub ineqs: Vec<Vec<Rat>>,
}

fn dedup_primitive(vs: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut out: Vec<Vec<Rat>> = Vec::new();
    for v in vs {
        if is_zero_vec(v) {
            continue;
        }
        let p = primitive(v);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out.sort_by(|a, b| lex_cmp(a, b));
    out
}

/// Remove generators that are nonnegative combinations of the others
/// (modulo span of `lin`). Zero vectors are dropped, not an error.
pub fn extremal_rays_mod(gens: &[Vec<Rat>], lin: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    let mut kept = dedup_primitive(gens);
    let mut i = 0;
    while i < kept.len() {
        let candidate = kept[i].clone();
        let others: Vec<Vec<Rat>> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        if conic_combination(&others, lin, &candidate)?.is_some() {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(kept)
}

/// Generators that are not nonnegative combinations of the others.
pub fn extremal_rays(gens: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    if gens.is_empty() {
        return Err(Error::Input("empty generator list".into()));
    }
    extremal_rays_mod(gens, &[])
}

/// Intersection of the halfspaces `h . x >= 0`, returned as a lineality
/// basis plus extreme rays (extreme modulo the lineality space).
pub fn halfspace_intersection(
    dim: usize,
    halfspaces: &[Vec<Rat>],
) -> Result<(Vec<Vec<Rat>>, Vec<Vec<Rat>>)> {
    let mut lin: Vec<Vec<Rat>> = (0..dim)
        .map(|i| {
            let mut e = vzero(dim);
            e[i] = crate::linalg::qi(1);
            e
        })
        .collect();
    let mut rays: Vec<Vec<Rat>> = Vec::new();
    for h in halfspaces {
        if h.len() != dim {
            return Err(Error::Dimension(format!(
                "halfspace has length {} in dimension {dim}",
                h.len()
            )));
        }
        if is_zero_vec(h) {
            continue;
        }
        if let Some(k) = lin.iter().position(|v| !dot(h, v).is_zero()) {
            // split the lineality space along h
            let mut w = lin.remove(k);
            if dot(h, &w) < Rat::zero() {
                w = crate::linalg::vneg(&w);
            }
            let hw = dot(h, &w);
            for v in lin.iter_mut() {
                let f = dot(h, v) / &hw;
                *v = vsub(v, &vscale(&f, &w));
            }
            for r in rays.iter_mut() {
                let f = dot(h, r) / &hw;
                *r = vsub(r, &vscale(&f, &w));
            }
            rays.push(w);
            rays = dedup_primitive(&rays);
            continue;
        }
        let vals: Vec<Rat> = rays.iter().map(|r| dot(h, r)).collect();
        if vals.iter().all(|v| !v.is_negative_val()) {
            continue;
        }
        let mut next: Vec<Vec<Rat>> = Vec::new();
        for (r, v) in rays.iter().zip(&vals) {
            if !v.is_negative_val() {
                next.push(r.clone());
            }
        }
        for (i, (ri, vi)) in rays.iter().zip(&vals).enumerate() {
            if vi > &Rat::zero() {
                for (rj, vj) in rays.iter().zip(&vals).skip(i + 1) {
                    if vj < &Rat::zero() {
                        next.push(vadd(&vscale(vi, rj), &vscale(&-vj.clone(), ri)));
                    }
                }
            } else if vi < &Rat::zero() {
                for (rj, vj) in rays.iter().zip(&vals).skip(i + 1) {
                    if vj > &Rat::zero() {
                        next.push(vadd(&vscale(vj, ri), &vscale(&-vi.clone(), rj)));
                    }
                }
            }
        }
        rays = extremal_rays_mod(&next, &lin)?;
    }
    // canonical lineality basis: reduced row echelon form
    let lin = rref(&lin);
    Ok((lin, rays))
}

fn rref(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.iter().filter(|r| !is_zero_vec(r)).cloned().collect();
    if m.is_empty() {
        return m;
    }
    let ncols = m[0].len();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][col].clone();
        for j in 0..ncols {
            m[r][j] = &m[r][j] / &pivot;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..ncols {
                    let sub = &f * &m[r][j];
                    m[i][j] = &m[i][j] - sub;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m.iter().map(|v| primitive(v)).collect()
}

trait SignCheck {
    fn is_negative_val(&self) -> bool;
}
impl SignCheck for Rat {
    fn is_negative_val(&self) -> bool {
        *self < Rat::zero()
    }
}

impl Cone {
    /// Cone spanned by `gens`; inequalities computed by exact dualization.
    pub fn from_rays(dim: usize, gens: &[Vec<Rat>]) -> Result<Cone> {
        for g in gens {
            if g.len() != dim {
                return Err(Error::Dimension(format!(
                    "ray has length {} in dimension {dim}",
                    g.len()
                )));
            }
        }
        let rays = extremal_rays_mod(gens, &[])?;
        let (lin, dual_rays) = halfspace_intersection(dim, &rays)?;
        let mut ineqs = dual_rays;
        for v in lin {
            ineqs.push(v.clone());
            ineqs.push(crate::linalg::vneg(&v));
        }
        let ineqs = dedup_primitive(&ineqs);
        let cone = Cone { dim, rays, ineqs };
        debug_assert!(cone.consistent());
        Ok(cone)
    }

    /// Cone cut out by `h . x >= 0`; must be pointed.
    pub fn from_ineqs(dim: usize, ineqs: &[Vec<Rat>]) -> Result<Cone> {
        let (lin, rays) = halfspace_intersection(dim, ineqs)?;
        if !lin.is_empty() {
            return Err(Error::Input("cone is not pointed".into()));
        }
        // re-derive a clean inequality description from the rays
        if rays.is_empty() {
            return Ok(Cone {
                dim,
                rays,
                ineqs: dedup_primitive(ineqs),
            });
        }
        Cone::from_rays(dim, &rays)
    }

    pub fn contains(&self, point: &[Rat]) -> bool {
        self.ineqs.iter().all(|h| dot(h, point) >= Rat::zero())
    }

    pub fn contains_strictly(&self, point: &[Rat]) -> bool {
        self.ineqs.iter().all(|h| dot(h, point) > Rat::zero())
    }

    /// Explicit nonnegative ray combination, when the point is a member.
    pub fn membership(&self, point: &[Rat]) -> Result<Option<Vec<Rat>>> {
        if point.len() != self.dim {
            return Err(Error::Dimension(format!(
                "point has length {} in dimension {}",
                point.len(),
                self.dim
            )));
        }
        cone_membership(&self.rays, point)
    }

    pub fn rank(&self) -> usize {
        rank(&self.rays)
    }

    pub fn is_full_dim(&self) -> bool {
        self.rank() == self.dim
    }

    /// Sum of the extreme rays: a relative interior point.
    pub fn interior_point(&self) -> Vec<Rat> {
        let mut p = vzero(self.dim);
        for r in &self.rays {
            p = vadd(&p, r);
        }
        p
    }

    fn consistent(&self) -> bool {
        self.rays
            .iter()
            .all(|r| self.ineqs.iter().all(|h| dot(h, r) >= Rat::zero()))
    }

    /// Dual pair round-trip: the rays recovered from the inequality
    /// description span the same cone.
    pub fn roundtrips(&self) -> Result<bool> {
        let (lin, rays2) = halfspace_intersection(self.dim, &self.ineqs)?;
        if !lin.is_empty() {
            return Ok(false);
        }
        for r in &rays2 {
            if self.membership(r)?.is_none() {
                return Ok(false);
            }
        }
        for r in &self.rays {
            if cone_membership(&rays2, r)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Simplicial triangulation using only the input ray set: fan over the
/// lexicographically smallest extreme ray, recursing into the facets.
pub fn triangulate(dim: usize, gens: &[Vec<Rat>]) -> Result<Vec<Cone>> {
    let gens = dedup_primitive(gens);
    if gens.is_empty() {
        return Err(Error::Input("empty cone".into()));
    }
    if rank(&gens) != dim {
        return Err(Error::Input(
            "cone is not full-dimensional in its ambient space".into(),
        ));
    }
    let cone = Cone::from_rays(dim, &gens)?;
    if rank(&cone.ineqs) != dim {
        return Err(Error::Input("cone is not pointed".into()));
    }
    let subsets = triangulate_subsets(dim, &gens)?;
    subsets
        .into_iter()
        .map(|s| Cone::from_rays(dim, &s))
        .collect()
}

/// Triangulation as explicit ray subsets (each linearly independent).
fn triangulate_subsets(dim: usize, gens: &[Vec<Rat>]) -> Result<Vec<Vec<Vec<Rat>>>> {
    if dim == 1 {
        return Ok(vec![vec![gens[0].clone()]]);
    }
    if dim == 2 {
        // sort angularly; consecutive pairs (non-extreme generators split)
        let mut sorted = gens.to_vec();
        sorted.sort_by(|a, b| {
            let c = &a[0] * &b[1] - &a[1] * &b[0];
            if c > Rat::zero() {
                std::cmp::Ordering::Less
            } else if c < Rat::zero() {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        });
        sorted.dedup_by(|a, b| (&a[0] * &b[1] - &a[1] * &b[0]).is_zero());
        let mut out = Vec::new();
        for w in sorted.windows(2) {
            out.push(vec![w[0].clone(), w[1].clone()]);
        }
        if out.is_empty() {
            return Err(Error::Input("2d cone degenerates to a single ray".into()));
        }
        return Ok(out);
    }
    let cone = Cone::from_rays(dim, &gens.to_vec())?;
    // already simplicial: linearly independent extreme rays, nothing between
    if cone.rays.len() == dim && gens.len() == dim {
        return Ok(vec![gens.to_vec()]);
    }
    let apex = cone.rays[0].clone(); // rays are lex-sorted
    let mut out = Vec::new();
    for h in &cone.ineqs {
        if dot(h, &apex) <= Rat::zero() {
            continue; // facet contains the apex (or is an equality wall)
        }
        let facet: Vec<Vec<Rat>> = gens
            .iter()
            .filter(|g| dot(h, g).is_zero())
            .cloned()
            .collect();
        if rank(&facet) != dim - 1 {
            continue;
        }
        // project the facet onto an independent coordinate subset
        let cols = independent_columns(&facet, dim - 1).ok_or_else(|| {
            Error::Internal("facet projection lost rank".into())
        })?;
        let projected: Vec<Vec<Rat>> = facet
            .iter()
            .map(|v| cols.iter().map(|&c| v[c].clone()).collect())
            .collect();
        for sub in triangulate_subsets(dim - 1, &projected)? {
            let mut simplex: Vec<Vec<Rat>> = sub
                .iter()
                .map(|p| {
                    facet[projected.iter().position(|q| q == p).expect("projected point")].clone()
                })
                .collect();
            simplex.push(apex.clone());
            if rank(&simplex) == dim {
                out.push(simplex);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Internal("triangulation produced no simplices".into()));
    }
    Ok(out)
}

/// First lexicographic column subset of the given size on which the rows
/// have full rank.
fn independent_columns(rows: &[Vec<Rat>], want: usize) -> Option<Vec<usize>> {
    let ncols = rows.first()?.len();
    let mut chosen: Vec<usize> = Vec::new();
    for c in 0..ncols {
        let mut trial = chosen.clone();
        trial.push(c);
        let sub: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| trial.iter().map(|&i| r[i].clone()).collect())
            .collect();
        if rank(&sub) == trial.len() {
            chosen = trial;
            if chosen.len() == want {
                return Some(chosen);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qvec;

    #[test]
    fn first_quadrant_roundtrip() {
        let c = Cone::from_rays(2, &[qvec(&[1, 0]), qvec(&[0, 1])]).unwrap();
        assert_eq!(c.ineqs.len(), 2);
        assert!(c.contains(&qvec(&[2, 3])));
        assert!(!c.contains(&qvec(&[-1, 0])));
        assert!(c.roundtrips().unwrap());
    }

    #[test]
    fn extremal_rays_drops_interior_ray() {
        let r = extremal_rays(&[qvec(&[1, 0]), qvec(&[0, 1]), qvec(&[1, 1])]).unwrap();
        assert_eq!(r, vec![qvec(&[0, 1]), qvec(&[1, 0])]);
    }

    #[test]
    fn extremal_rays_identity_case() {
        let input = vec![qvec(&[0, 1]), qvec(&[1, 0])];
        assert_eq!(extremal_rays(&input).unwrap(), input);
        // idempotent
        let once = extremal_rays(&input).unwrap();
        assert_eq!(extremal_rays(&once).unwrap(), once);
    }

    #[test]
    fn from_ineqs_recovers_rays() {
        let c = Cone::from_ineqs(2, &[qvec(&[1, 0]), qvec(&[0, 1])]).unwrap();
        assert_eq!(c.rays, vec![qvec(&[0, 1]), qvec(&[1, 0])]);
    }

    #[test]
    fn non_pointed_rejected() {
        assert!(Cone::from_ineqs(2, &[qvec(&[1, 0])]).is_err());
    }

    #[test]
    fn lower_dimensional_cone_gets_equality_walls() {
        let c = Cone::from_rays(3, &[qvec(&[1, 0, 0]), qvec(&[0, 1, 0])]).unwrap();
        // the z = 0 wall appears as a pair of opposite inequalities
        assert!(c.contains(&qvec(&[1, 1, 0])));
        assert!(!c.contains(&qvec(&[1, 1, 1])));
        assert!(!c.contains(&qvec(&[1, 1, -1])));
    }

    #[test]
    fn triangulate_simplicial_identity() {
        let rays = vec![qvec(&[1, 0]), qvec(&[0, 1])];
        let t = triangulate(2, &rays).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].rays, vec![qvec(&[0, 1]), qvec(&[1, 0])]);
    }

    #[test]
    fn triangulate_cone_over_square() {
        let rays = vec![
            qvec(&[0, 0, 1]),
            qvec(&[1, 0, 1]),
            qvec(&[0, 1, 1]),
            qvec(&[1, 1, 1]),
        ];
        let t = triangulate(3, &rays).unwrap();
        assert_eq!(t.len(), 2);
        for s in &t {
            assert_eq!(s.rays.len(), 3);
            for r in &s.rays {
                assert!(rays.contains(r));
            }
        }
    }

    #[test]
    fn triangulate_nef_cone_of_bl2p2_is_identity() {
        // rays H, H-E1, H-E2 are linearly independent
        let rays = vec![qvec(&[1, -1, 0]), qvec(&[1, 0, -1]), qvec(&[1, 0, 0])];
        let t = triangulate(3, &rays).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].rays.len(), 3);
    }
}
