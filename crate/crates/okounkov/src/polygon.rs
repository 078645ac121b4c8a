//! Exact convex polygons in Q^2. Degenerate polygons (points, segments)
//! are first-class values: Okounkov bodies of negative-part classes are
//! single points.

use num_traits::Zero;

use crate::linalg::Rat;

pub type Point2 = (Rat, Rat);

/// Convex polygon stored counterclockwise starting from the
/// lexicographically smallest vertex; no three stored vertices are
/// collinear. Equality is a pure list comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon2 {
    verts: Vec<Point2>,
}

fn cross(o: &Point2, a: &Point2, b: &Point2) -> Rat {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

impl Polygon2 {
    pub fn point(p: Point2) -> Polygon2 {
        Polygon2 { verts: vec![p] }
    }

    pub fn origin() -> Polygon2 {
        Polygon2::point((Rat::zero(), Rat::zero()))
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.verts
    }

    /// 0 for a point, 1 for a segment, 2 otherwise.
    pub fn dimension(&self) -> usize {
        match self.verts.len() {
            1 => 0,
            2 => 1,
            _ => 2,
        }
    }

    pub fn translate(&self, d: &Point2) -> Polygon2 {
        Polygon2 {
            verts: self
                .verts
                .iter()
                .map(|(x, y)| (x + &d.0, y + &d.1))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Polygon2 {
        // hull re-canonicalizes; negative factors flip orientation
        hull2(&self
            .verts
            .iter()
            .map(|(x, y)| (c * x, c * y))
            .collect::<Vec<_>>())
    }
}

/// Canonical convex hull (Andrew monotone chain, exact predicates).
pub fn hull2(points: &[Point2]) -> Polygon2 {
    assert!(!points.is_empty(), "hull of an empty point set");
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() == 1 {
        return Polygon2 { verts: pts };
    }
    let mut lower: Vec<Point2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= Rat::zero()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= Rat::zero()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    let mut verts = lower;
    verts.extend(upper);
    if verts.len() == 2 && verts[0] > verts[1] {
        verts.swap(0, 1);
    }
    // all collinear: monotone chain leaves the two endpoints
    Polygon2 { verts }
}

/// Exact Minkowski sum; canonical output. Degenerate summands are legal.
pub fn minkowski_sum(p: &Polygon2, q: &Polygon2) -> Polygon2 {
    let mut sums = Vec::with_capacity(p.verts.len() * q.verts.len());
    for (px, py) in &p.verts {
        for (qx, qy) in &q.verts {
            sums.push((px + qx, py + qy));
        }
    }
    hull2(&sums)
}

/// Exact shoelace area; zero for degenerate polygons.
pub fn polygon_area(p: &Polygon2) -> Rat {
    let v = &p.verts;
    if v.len() < 3 {
        return Rat::zero();
    }
    let mut twice: Rat = Rat::zero();
    for i in 0..v.len() {
        let j = (i + 1) % v.len();
        twice += &v[i].0 * &v[j].1 - &v[j].0 * &v[i].1;
    }
    twice / crate::linalg::qi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qi;

    fn pt(x: i64, y: i64) -> Point2 {
        (qi(x), qi(y))
    }

    #[test]
    fn hull_drops_interior_point() {
        let h = hull2(&[pt(0, 0), pt(0, 3), pt(1, 2), pt(2, 0), pt(1, 1)]);
        assert_eq!(h.vertices(), &[pt(0, 0), pt(2, 0), pt(1, 2), pt(0, 3)]);
    }

    #[test]
    fn hull_area_matches_shoelace() {
        let h = hull2(&[pt(0, 0), pt(2, 0), pt(1, 2), pt(0, 3)]);
        assert_eq!(polygon_area(&h), crate::linalg::q(7, 2));
    }

    #[test]
    fn degenerate_polygons() {
        assert_eq!(polygon_area(&Polygon2::point(pt(1, 1))), qi(0));
        let seg = hull2(&[pt(0, 0), pt(2, 2), pt(1, 1)]);
        assert_eq!(seg.vertices(), &[pt(0, 0), pt(2, 2)]);
        assert_eq!(seg.dimension(), 1);
        assert_eq!(polygon_area(&seg), qi(0));
    }

    #[test]
    fn minkowski_point_is_identity() {
        let p = hull2(&[pt(0, 0), pt(1, 0), pt(0, 1)]);
        assert_eq!(minkowski_sum(&p, &Polygon2::origin()), p);
    }

    #[test]
    fn minkowski_segments_make_square() {
        let a = hull2(&[pt(0, 0), pt(1, 0)]);
        let b = hull2(&[pt(0, 0), pt(0, 1)]);
        let sq = minkowski_sum(&a, &b);
        assert_eq!(sq.vertices(), &[pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]);
    }

    #[test]
    fn minkowski_commutes() {
        let a = hull2(&[pt(0, 0), pt(2, 0), pt(0, 1)]);
        let b = hull2(&[pt(0, 0), pt(1, 1), pt(-1, 2)]);
        assert_eq!(minkowski_sum(&a, &b), minkowski_sum(&b, &a));
    }
}
