//! Property tests for the structural invariants the pipeline relies on:
//! polygon arithmetic laws, Zariski decomposition axioms, and the scaling
//! and additivity behaviour of the polygons themselves.

use proptest::prelude::*;

use okounkov::body::okounkov_polygon_with_chambers;
use okounkov::cone::extremal_rays;
use okounkov::instance::load_instance;
use okounkov::linalg::{primitive, qi, Rat};
use okounkov::polygon::{hull2, minkowski_sum, polygon_area, Polygon2};
use okounkov::surface::DivisorClass;
use okounkov::zariski::{enumerate_chambers, zariski_decompose, Chamber};

fn load(name: &str) -> okounkov::instance::Instance {
    let path = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join(format!("../../instances/{name}.json"));
    load_instance(&path).unwrap()
}

fn pseff(inst: &okounkov::instance::Instance, coeffs: &[i64]) -> DivisorClass {
    let mut d = vec![Rat::from_integer(0.into()); inst.surface.rank];
    for (c, g) in coeffs.iter().zip(&inst.surface.eff_generators) {
        for (x, y) in d.iter_mut().zip(&g.0) {
            *x += qi(*c) * y;
        }
    }
    DivisorClass(d)
}

fn cross(o: &(Rat, Rat), a: &(Rat, Rat), b: &(Rat, Rat)) -> Rat {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

// point-in-convex-polygon for CCW vertex lists, boundary counts as inside
fn polygon_contains(p: &Polygon2, pt: &(Rat, Rat)) -> bool {
    let vs = p.vertices();
    match vs.len() {
        0 => false,
        1 => vs[0] == *pt,
        _ => (0..vs.len()).all(|i| {
            let a = &vs[i];
            let b = &vs[(i + 1) % vs.len()];
            cross(a, b, pt) >= Rat::from_integer(0.into())
        }),
    }
}

fn points() -> impl Strategy<Value = Vec<(Rat, Rat)>> {
    prop::collection::vec((-6i64..=6, -6i64..=6), 1..7)
        .prop_map(|pts| pts.into_iter().map(|(x, y)| (qi(x), qi(y))).collect())
}

fn chambers_of(inst: &okounkov::instance::Instance) -> Vec<Chamber> {
    enumerate_chambers(&inst.surface).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minkowski_sum_laws(a in points(), b in points()) {
        let pa = hull2(&a);
        let pb = hull2(&b);
        let ab = minkowski_sum(&pa, &pb);
        let ba = minkowski_sum(&pb, &pa);
        prop_assert_eq!(&ab, &ba);
        // superadditive area and the vertex-count bound for convex sums
        prop_assert!(polygon_area(&ab) >= polygon_area(&pa) + polygon_area(&pb));
        prop_assert!(ab.vertices().len() <= pa.vertices().len() + pb.vertices().len());
        // every pairwise vertex sum lands inside
        for (x1, y1) in pa.vertices() {
            for (x2, y2) in pb.vertices() {
                prop_assert!(polygon_contains(&ab, &(x1 + x2, y1 + y2)));
            }
        }
    }

    #[test]
    fn extremal_rays_idempotent(a in points()) {
        let rays: Vec<Vec<Rat>> = a.iter().map(|(x, y)| vec![x.clone(), y.clone()]).collect();
        let rays: Vec<Vec<Rat>> = rays
            .into_iter()
            .filter(|r| r.iter().any(|x| x != &Rat::from_integer(0.into())))
            .collect();
        if rays.is_empty() {
            return Ok(());
        }
        let once = extremal_rays(&rays).unwrap();
        let twice = extremal_rays(&once).unwrap();
        let mut once_sorted: Vec<Vec<Rat>> = once.iter().map(|r| primitive(r)).collect();
        once_sorted.sort();
        let mut twice_sorted: Vec<Vec<Rat>> = twice.iter().map(|r| primitive(r)).collect();
        twice_sorted.sort();
        prop_assert_eq!(once_sorted, twice_sorted);
    }

    #[test]
    fn zariski_axioms(coeffs in prop::collection::vec(0i64..=6, 3)) {
        let inst = load("bl2p2_flagH");
        let s = &inst.surface;
        let d = pseff(&inst, &coeffs);
        if d.0.iter().all(|x| x == &Rat::from_integer(0.into())) {
            return Ok(());
        }
        let z = zariski_decompose(s, &d).unwrap();
        // D = P + N
        let n = z.negative(s);
        let mut back = z.positive.clone();
        for (x, y) in back.0.iter_mut().zip(&n.0) {
            *x += y;
        }
        prop_assert_eq!(&back, &d);
        // P is nef against every negative curve and orthogonal to supp(N)
        for (i, c) in s.negative_curves.iter().enumerate() {
            let pc = s.intersect(&z.positive, c);
            prop_assert!(pc >= Rat::from_integer(0.into()));
            if z.support.contains(&i) {
                prop_assert_eq!(pc, Rat::from_integer(0.into()));
            }
        }
        // N coefficients are nonnegative
        for c in &z.coeffs {
            prop_assert!(c >= &Rat::from_integer(0.into()));
        }
    }

    #[test]
    fn polygon_homogeneity(coeffs in prop::collection::vec(0i64..=5, 3), lambda in 1i64..=4) {
        let inst = load("bl2p2_flagH");
        let d = pseff(&inst, &coeffs);
        if d.0.iter().all(|x| x == &Rat::from_integer(0.into())) {
            return Ok(());
        }
        let chambers = chambers_of(&inst);
        let p = okounkov_polygon_with_chambers(&inst.surface, &inst.flag, &d, &chambers).unwrap();
        let scaled_class = d.scale(&qi(lambda));
        let ps =
            okounkov_polygon_with_chambers(&inst.surface, &inst.flag, &scaled_class, &chambers)
                .unwrap();
        prop_assert_eq!(ps.polygon, p.polygon.scale(&qi(lambda)));
    }

    #[test]
    fn polygon_superadditivity(
        c1 in prop::collection::vec(0i64..=4, 3),
        c2 in prop::collection::vec(0i64..=4, 3),
    ) {
        let inst = load("bl2p2_flagH");
        let d1 = pseff(&inst, &c1);
        let d2 = pseff(&inst, &c2);
        let zero = Rat::from_integer(0.into());
        if d1.0.iter().all(|x| x == &zero) || d2.0.iter().all(|x| x == &zero) {
            return Ok(());
        }
        let chambers = chambers_of(&inst);
        let p1 = okounkov_polygon_with_chambers(&inst.surface, &inst.flag, &d1, &chambers).unwrap();
        let p2 = okounkov_polygon_with_chambers(&inst.surface, &inst.flag, &d2, &chambers).unwrap();
        let sum_class = d1.add(&d2);
        let psum =
            okounkov_polygon_with_chambers(&inst.surface, &inst.flag, &sum_class, &chambers)
                .unwrap();
        let minksum = minkowski_sum(&p1.polygon, &p2.polygon);
        for v in minksum.vertices() {
            prop_assert!(polygon_contains(&psum.polygon, v), "missing {:?}", v);
        }
    }

    #[test]
    fn positive_part_linear_on_chamber_closure(
        c1 in prop::collection::vec(0i64..=4, 3),
        c2 in prop::collection::vec(0i64..=4, 3),
    ) {
        let inst = load("bl2p2_flagH");
        let s = &inst.surface;
        let d1 = pseff(&inst, &c1);
        let d2 = pseff(&inst, &c2);
        let zero = Rat::from_integer(0.into());
        if d1.0.iter().all(|x| x == &zero) || d2.0.iter().all(|x| x == &zero) {
            return Ok(());
        }
        let z1 = zariski_decompose(s, &d1).unwrap();
        let z2 = zariski_decompose(s, &d2).unwrap();
        if z1.support != z2.support {
            return Ok(());
        }
        let zsum = zariski_decompose(s, &d1.add(&d2)).unwrap();
        prop_assert_eq!(zsum.positive, z1.positive.add(&z2.positive));
    }
}
