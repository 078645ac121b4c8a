//! Okounkov polygons of pseudo-effective classes with respect to a
//! general flag: mu, the slope function beta, wall-crossing breakpoints,
//! and the decomposition of a body into movable Minkowski summands plus
//! a negative-part translation.
//!
//! The general-flag contract makes alpha identically zero, so the body
//! of D is { (t, y) : 0 <= t <= mu, 0 <= y <= beta(t) } with
//! beta(t) = P_t . A along the slice D - tA.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{dot, Rat};
use crate::polygon::{hull2, polygon_area, Polygon2};
use crate::surface::{DivisorClass, FlagData, SurfaceData};
use crate::zariski::{enumerate_chambers, zariski_decompose, Chamber};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OkounkovPolygon {
    pub polygon: Polygon2,
    pub breakpoints: Vec<(Rat, Rat)>,
    pub mu: Rat,
    pub divisor: DivisorClass,
}

impl OkounkovPolygon {
    pub fn is_degenerate(&self) -> bool {
        self.polygon.dimension() < 2
    }
}

/// Largest t >= 0 with D - tA pseudo-effective. Finite whenever some
/// facet of Eff meets A positively, which bigness of A guarantees.
pub fn mu(surface: &SurfaceData, d: &DivisorClass, a: &DivisorClass) -> Result<Rat> {
    if !surface.is_pseudo_effective(d)? {
        return Err(Error::Domain(format!(
            "{} is not pseudo-effective",
            surface.class_label(d)
        )));
    }
    let eff = surface.eff_cone()?;
    let mut best: Option<Rat> = None;
    for h in &eff.ineqs {
        let ha = dot(h, &a.0);
        if ha > Rat::zero() {
            let t = dot(h, &d.0) / ha;
            if best.as_ref().map_or(true, |b| t < *b) {
                best = Some(t);
            }
        }
    }
    best.ok_or_else(|| {
        Error::Domain(format!(
            "slice direction {} never leaves the effective cone",
            surface.class_label(a)
        ))
    })
}

/// beta(t) = P_t . A where D - tA = P_t + N_t.
pub fn beta(surface: &SurfaceData, d: &DivisorClass, a: &DivisorClass, t: &Rat) -> Result<Rat> {
    let m = mu(surface, d, a)?;
    if t < &Rat::zero() || t > &m {
        return Err(Error::Domain(format!("t = {t} outside [0, {m}]")));
    }
    let slice = d.sub(&a.scale(t));
    let z = zariski_decompose(surface, &slice)?;
    Ok(surface.intersect(&z.positive, a))
}

/// All t in (0, mu) where the slice D - tA crosses a chamber wall.
fn wall_crossings(
    chambers: &[Chamber],
    d: &DivisorClass,
    a: &DivisorClass,
    mu: &Rat,
) -> Vec<Rat> {
    let mut ts: Vec<Rat> = Vec::new();
    for ch in chambers {
        for h in &ch.cone.ineqs {
            let ha = dot(h, &a.0);
            if ha.is_zero() {
                continue;
            }
            let t = dot(h, &d.0) / ha;
            if t > Rat::zero() && t < *mu && !ts.contains(&t) {
                ts.push(t);
            }
        }
    }
    ts.sort();
    ts
}

pub fn okounkov_polygon(
    surface: &SurfaceData,
    flag: &FlagData,
    d: &DivisorClass,
) -> Result<OkounkovPolygon> {
    let chambers = enumerate_chambers(surface)?;
    okounkov_polygon_with_chambers(surface, flag, d, &chambers)
}

/// Same as `okounkov_polygon` but reusing an enumerated chamber list;
/// batch callers keep one list per surface.
pub fn okounkov_polygon_with_chambers(
    surface: &SurfaceData,
    flag: &FlagData,
    d: &DivisorClass,
    chambers: &[Chamber],
) -> Result<OkounkovPolygon> {
    let a = &flag.curve_class;
    let m = mu(surface, d, a)?;
    let mut ts = vec![Rat::zero()];
    ts.extend(wall_crossings(chambers, d, a, &m));
    if m > Rat::zero() {
        ts.push(m.clone());
    }
    let mut breakpoints = Vec::with_capacity(ts.len());
    for t in &ts {
        let slice = d.sub(&a.scale(t));
        let z = zariski_decompose(surface, &slice)?;
        breakpoints.push((t.clone(), surface.intersect(&z.positive, a)));
    }
    let mut pts: Vec<(Rat, Rat)> = vec![(Rat::zero(), Rat::zero()), (m.clone(), Rat::zero())];
    pts.extend(breakpoints.iter().cloned());
    let polygon = hull2(&pts);
    // volume identity, checked exactly on every construction
    let z = zariski_decompose(surface, d)?;
    let two_area = polygon_area(&polygon) * crate::linalg::qi(2);
    if two_area != z.volume(surface) {
        return Err(Error::Internal(format!(
            "volume identity violated for {}: 2*area = {} but P.P = {}",
            surface.class_label(d),
            two_area,
            z.volume(surface)
        )));
    }
    Ok(OkounkovPolygon {
        polygon,
        breakpoints,
        mu: m,
        divisor: d.clone(),
    })
}

/// Coefficients of D over the elements of its Minkowski chamber, split
/// into movable summands and negative-part translations.
#[derive(Clone, Debug)]
pub struct BodyDecomposition {
    pub movable: Vec<(DivisorClass, Rat)>,
    pub fixed: Vec<(DivisorClass, Rat)>,
}

pub fn decompose_with_negative_parts(
    surface: &SurfaceData,
    flag: &FlagData,
    d: &DivisorClass,
    base: &[DivisorClass],
) -> Result<BodyDecomposition> {
    let eff = surface.eff_cone()?;
    let fan = crate::minkowski::minkowski_chambers(&eff, base)?;
    crate::minkowski::decompose_in_fan(surface, flag, d, &fan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qi, qvec};
    use crate::testutil::{bl2p2, flag, hirzebruch};

    fn pt(x: i64, y: i64) -> (Rat, Rat) {
        (qi(x), qi(y))
    }

    #[test]
    fn mu_of_ample_class_on_bl2p2() {
        let s = bl2p2();
        let d = DivisorClass(qvec(&[3, -1, -1]));
        let a = DivisorClass(qvec(&[1, 0, 0]));
        assert_eq!(mu(&s, &d, &a).unwrap(), qi(2));
    }

    #[test]
    fn mu_of_flag_class_itself() {
        let s = bl2p2();
        let a = DivisorClass(qvec(&[1, 0, 0]));
        assert_eq!(mu(&s, &a, &a).unwrap(), qi(1));
    }

    #[test]
    fn mu_on_hirzebruch_fiber_direction() {
        // D = a s + b f, A = f: D - tf leaves Eff at t = b
        for e in 0..3i64 {
            let s = hirzebruch(e);
            let d = DivisorClass(qvec(&[2, 5]));
            let a = DivisorClass(qvec(&[0, 1]));
            assert_eq!(mu(&s, &d, &a).unwrap(), qi(5));
        }
    }

    #[test]
    fn beta_values_on_bl2p2() {
        let s = bl2p2();
        let d = DivisorClass(qvec(&[3, -1, -1]));
        let a = DivisorClass(qvec(&[1, 0, 0]));
        assert_eq!(beta(&s, &d, &a, &qi(0)).unwrap(), qi(3));
        assert_eq!(beta(&s, &d, &a, &qi(1)).unwrap(), qi(2));
        assert_eq!(beta(&s, &d, &a, &qi(2)).unwrap(), qi(0));
        assert!(beta(&s, &d, &a, &qi(3)).is_err());
    }

    #[test]
    fn beta_on_hirzebruch_past_the_wall() {
        // F_e, D = a s + b f, A = f, t > b - ea: beta = (b - t)/e
        let s = hirzebruch(2);
        let d = DivisorClass(qvec(&[1, 5]));
        let a = DivisorClass(qvec(&[0, 1]));
        // wall at t = b - ea = 3
        assert_eq!(beta(&s, &d, &a, &qi(2)).unwrap(), qi(1));
        assert_eq!(beta(&s, &d, &a, &qi(4)).unwrap(), q(1, 2));
        assert_eq!(beta(&s, &d, &a, &qi(5)).unwrap(), qi(0));
    }

    #[test]
    fn polygon_of_paper_example() {
        let s = bl2p2();
        let f = flag(&[1, 0, 0]);
        let d = DivisorClass(qvec(&[3, -1, -1]));
        let p = okounkov_polygon(&s, &f, &d).unwrap();
        assert_eq!(
            p.polygon.vertices(),
            &[pt(0, 0), pt(2, 0), pt(1, 2), pt(0, 3)]
        );
        assert_eq!(polygon_area(&p.polygon), q(7, 2));
    }

    #[test]
    fn polygon_of_flag_class() {
        let s = bl2p2();
        let f = flag(&[1, 0, 0]);
        let d = DivisorClass(qvec(&[1, 0, 0]));
        let p = okounkov_polygon(&s, &f, &d).unwrap();
        assert_eq!(p.polygon.vertices(), &[pt(0, 0), pt(1, 0), pt(0, 1)]);
    }

    #[test]
    fn polygon_of_negative_curve_is_a_point() {
        let s = bl2p2();
        let f = flag(&[1, 0, 0]);
        let d = DivisorClass(qvec(&[1, -1, -1]));
        let p = okounkov_polygon(&s, &f, &d).unwrap();
        assert_eq!(p.polygon.vertices(), &[pt(0, 0)]);
        assert!(p.is_degenerate());
    }

    #[test]
    fn homogeneity() {
        let s = bl2p2();
        let f = flag(&[1, 0, 0]);
        let d = DivisorClass(qvec(&[2, -1, 0]));
        let p1 = okounkov_polygon(&s, &f, &d).unwrap();
        let p3 = okounkov_polygon(&s, &f, &d.scale(&qi(3))).unwrap();
        assert_eq!(p1.polygon.scale(&qi(3)), p3.polygon);
    }

    #[test]
    fn flag_slice_consistency() {
        // the t = 0 edge is {0} x [0, P.A]
        let s = bl2p2();
        let f = flag(&[1, 0, 0]);
        let d = DivisorClass(qvec(&[4, -2, -1]));
        let p = okounkov_polygon(&s, &f, &d).unwrap();
        let z = zariski_decompose(&s, &d).unwrap();
        let pa = s.intersect(&z.positive, &f.curve_class);
        let b0 = p
            .breakpoints
            .iter()
            .find(|(t, _)| t.is_zero())
            .unwrap()
            .1
            .clone();
        assert_eq!(b0, pa);
    }
}
