//! Minkowski chamber decompositions, Minkowski bases, generator sets for
//! the global Okounkov body of a surface, and fiber extraction.
//!
//! The base is computed as the ray set of the coarsest refinement of the
//! BKS chamber fan on which the vertex map D -> vertices of the Okounkov
//! polygon is linear. Candidate refinement walls are spanned by the flag
//! class together with codimension-two faces of the fan; pieces on which
//! the vertex map stays linear are merged back, so walls that turn out
//! not to matter leave no trace in the ray set.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::body::{okounkov_polygon_with_chambers, BodyDecomposition, OkounkovPolygon};
use crate::cone::{extremal_rays, halfspace_intersection, triangulate, Cone};
use crate::error::{Error, Result};
use crate::linalg::{
    dot, is_zero_vec, kernel_basis, lex_cmp, primitive, rank, solve_linear, vadd, vscale, vzero,
    Rat,
};
use crate::polygon::{hull2, minkowski_sum, Polygon2};
use crate::surface::{dedup_classes, DivisorClass, FlagData, SurfaceData};
use crate::zariski::enumerate_chambers;

/// Simplicial fan covering Eff(X) whose rays are Minkowski base elements.
#[derive(Clone, Debug)]
pub struct MinkowskiFan {
    pub dim: usize,
    pub rays: Vec<DivisorClass>,
    pub chambers: Vec<Cone>,
}

/// Construction: star-subdivide Eff at every base element lying inside a
/// subcone without spanning one of its rays, then triangulate each
/// subcone without adding new rays.
pub fn minkowski_chambers(eff: &Cone, base: &[DivisorClass]) -> Result<MinkowskiFan> {
    let dim = eff.dim;
    let base = dedup_classes(base);
    for b in &base {
        if !eff.contains(&b.0) {
            return Err(Error::Input(format!(
                "base element {:?} lies outside the effective cone",
                b.0.iter().map(|r| r.to_string()).collect::<Vec<_>>()
            )));
        }
    }
    for r in &eff.rays {
        let rc = DivisorClass(r.clone());
        if !base.iter().any(|b| b.same_ray(&rc)) {
            return Err(Error::Input(
                "base does not contain every ray of the effective cone".into(),
            ));
        }
    }
    let mut worklist: Vec<Cone> = vec![eff.clone()];
    let guard = 64 * (base.len() + 1) * (base.len() + 1);
    let mut steps = 0;
    'outer: loop {
        for idx in 0..worklist.len() {
            for elem in &base {
                let cone = &worklist[idx];
                if !cone.contains(&elem.0) {
                    continue;
                }
                if cone
                    .rays
                    .iter()
                    .any(|r| DivisorClass(r.clone()).same_ray(elem))
                {
                    continue;
                }
                // star subdivision at elem: one piece per facet off elem
                let cone = worklist.remove(idx);
                for h in &cone.ineqs {
                    if dot(h, &elem.0) <= Rat::zero() {
                        continue;
                    }
                    let mut gens: Vec<Vec<Rat>> = cone
                        .rays
                        .iter()
                        .filter(|r| dot(h, r).is_zero())
                        .cloned()
                        .collect();
                    gens.push(elem.0.clone());
                    if rank(&gens) == dim {
                        worklist.push(Cone::from_rays(dim, &gens)?);
                    }
                }
                steps += 1;
                if steps > guard {
                    return Err(Error::Internal(
                        "star subdivision failed to terminate".into(),
                    ));
                }
                continue 'outer;
            }
        }
        break;
    }
    let mut chambers: Vec<Cone> = Vec::new();
    for sub in &worklist {
        chambers.extend(triangulate(dim, &sub.rays)?);
    }
    chambers.sort_by(|a, b| {
        lex_cmp(
            &a.rays.concat(),
            &b.rays.concat(),
        )
    });
    let rays = dedup_classes(
        &chambers
            .iter()
            .flat_map(|c| c.rays.iter().map(|r| DivisorClass(r.clone())))
            .collect::<Vec<_>>(),
    );
    Ok(MinkowskiFan {
        dim,
        rays,
        chambers,
    })
}

/// Unique nonnegative coefficients of D over the rays of the chamber
/// containing it, split into movable and negative-part elements.
pub fn decompose_in_fan(
    surface: &SurfaceData,
    _flag: &FlagData,
    d: &DivisorClass,
    fan: &MinkowskiFan,
) -> Result<BodyDecomposition> {
    let chamber = fan
        .chambers
        .iter()
        .find(|c| c.contains(&d.0))
        .ok_or_else(|| {
            Error::Internal(format!(
                "{} lies outside every Minkowski chamber",
                surface.class_label(d)
            ))
        })?;
    // simplicial: solve the square system over the chamber rays
    let cols = &chamber.rays;
    let matrix: Vec<Vec<Rat>> = (0..fan.dim)
        .map(|i| cols.iter().map(|r| r[i].clone()).collect())
        .collect();
    let sol = solve_linear(&matrix, &d.0)?
        .ok_or_else(|| Error::Internal("chamber system inconsistent".into()))?;
    let mut movable = Vec::new();
    let mut fixed = Vec::new();
    for (ray, coeff) in cols.iter().zip(sol.particular) {
        let class = DivisorClass(ray.clone());
        let is_fixed = surface
            .negative_curves
            .iter()
            .any(|c| c.same_ray(&class));
        if is_fixed {
            fixed.push((class, coeff));
        } else {
            movable.push((class, coeff));
        }
    }
    Ok(BodyDecomposition { movable, fixed })
}

#[derive(Clone, Debug)]
pub struct MinkowskiBase {
    pub movable: Vec<(DivisorClass, OkounkovPolygon)>,
    pub fixed: Vec<DivisorClass>,
}

impl MinkowskiBase {
    pub fn classes(&self) -> Vec<DivisorClass> {
        let mut all: Vec<DivisorClass> = self.movable.iter().map(|(c, _)| c.clone()).collect();
        all.extend(self.fixed.iter().cloned());
        dedup_classes(&all)
    }

    pub fn polygon_of(&self, class: &DivisorClass) -> Option<&OkounkovPolygon> {
        self.movable
            .iter()
            .find(|(c, _)| c.same_ray(class) || c == class)
            .map(|(_, p)| p)
    }
}

/// Canonical sign for a hyperplane normal: first nonzero entry positive.
fn canonical_normal(n: &[Rat]) -> Vec<Rat> {
    let p = primitive(n);
    match p.iter().find(|x| !x.is_zero()) {
        Some(x) if *x < Rat::zero() => crate::linalg::vneg(&p),
        _ => p,
    }
}

/// Walls spanned by the flag class and a codimension-two face of the fan.
fn shadow_hyperplanes(
    rho: usize,
    a: &DivisorClass,
    cones: &[Cone],
) -> Vec<Vec<Rat>> {
    let mut walls: Vec<Vec<Rat>> = Vec::new();
    let mut push = |n: Vec<Rat>| {
        if !is_zero_vec(&n) && !walls.contains(&n) {
            walls.push(n);
        }
    };
    match rho {
        0 | 1 => {}
        2 => {
            // the only codimension-two face is the origin: wall = span(A)
            if let Some(n) = kernel_basis(&[a.0.clone()], 2).into_iter().next() {
                push(canonical_normal(&n));
            }
        }
        _ => {
            // codimension-two faces arise as pairwise facet intersections
            let mut faces: Vec<Vec<Vec<Rat>>> = Vec::new();
            for cone in cones {
                for (i, h1) in cone.ineqs.iter().enumerate() {
                    for h2 in cone.ineqs.iter().skip(i + 1) {
                        let face: Vec<Vec<Rat>> = cone
                            .rays
                            .iter()
                            .filter(|r| dot(h1, r).is_zero() && dot(h2, r).is_zero())
                            .cloned()
                            .collect();
                        if rank(&face) == rho - 2 && !faces.contains(&face) {
                            faces.push(face);
                        }
                    }
                }
            }
            for face in faces {
                let mut span = face.clone();
                span.push(a.0.clone());
                if rank(&span) != rho - 1 {
                    continue;
                }
                if let Some(n) = kernel_basis(&span, rho).into_iter().next() {
                    push(canonical_normal(&n));
                }
            }
        }
    }
    walls.sort_by(|x, y| lex_cmp(x, y));
    walls
}

/// Facet walls of the given cones, canonically signed.
fn facet_hyperplanes(cones: &[Cone]) -> Vec<Vec<Rat>> {
    let mut walls: Vec<Vec<Rat>> = Vec::new();
    for cone in cones {
        for h in &cone.ineqs {
            let n = canonical_normal(h);
            if !walls.contains(&n) {
                walls.push(n);
            }
        }
    }
    walls.sort_by(|x, y| lex_cmp(x, y));
    walls
}

fn refine_by_hyperplanes(dim: usize, cones: Vec<Cone>, walls: &[Vec<Rat>]) -> Result<Vec<Cone>> {
    let mut current = cones;
    for n in walls {
        let mut next = Vec::new();
        for cone in current {
            let has_pos = cone.rays.iter().any(|r| dot(n, r) > Rat::zero());
            let has_neg = cone.rays.iter().any(|r| dot(n, r) < Rat::zero());
            if !(has_pos && has_neg) {
                next.push(cone);
                continue;
            }
            for side in [n.clone(), crate::linalg::vneg(n)] {
                let mut ineqs = cone.ineqs.clone();
                ineqs.push(side);
                let piece = Cone::from_ineqs(dim, &ineqs)?;
                if piece.rank() == dim {
                    next.push(piece);
                }
            }
        }
        current = next;
    }
    Ok(current)
}

/// Shared facet of two full-dimensional cones, when they have one.
fn shared_facet(dim: usize, c1: &Cone, c2: &Cone) -> Result<Option<Vec<Vec<Rat>>>> {
    let mut ineqs = c1.ineqs.clone();
    ineqs.extend(c2.ineqs.iter().cloned());
    let (lin, rays) = halfspace_intersection(dim, &ineqs)?;
    if !lin.is_empty() {
        return Ok(None);
    }
    if rank(&rays) == dim - 1 {
        Ok(Some(rays))
    } else {
        Ok(None)
    }
}

struct LinearityContext<'a> {
    surface: &'a SurfaceData,
    flag: &'a FlagData,
    chambers: Vec<crate::zariski::Chamber>,
}

impl<'a> LinearityContext<'a> {
    fn body(&self, d: &DivisorClass) -> Result<Polygon2> {
        Ok(
            okounkov_polygon_with_chambers(self.surface, self.flag, d, &self.chambers)?
                .polygon,
        )
    }

    /// Vertex map linear across the shared facet of two cones: test the
    /// Minkowski identity at a pair of interior points hugging the wall.
    fn linear_across(&self, c1: &Cone, c2: &Cone, facet: &[Vec<Rat>]) -> Result<bool> {
        let mut mid = vzero(c1.dim);
        for r in facet {
            mid = vadd(&mid, r);
        }
        let hug = crate::linalg::qi(64);
        let x1 = DivisorClass(vadd(&vscale(&hug, &mid), &c1.interior_point()));
        let x2 = DivisorClass(vadd(&vscale(&hug, &mid), &c2.interior_point()));
        let lhs = self.body(&x1.add(&x2))?;
        let rhs = minkowski_sum(&self.body(&x1)?, &self.body(&x2)?);
        Ok(lhs == rhs)
    }

    /// Vertex-linearity certificate on a simplicial cone: the body of the
    /// barycenter must be the Minkowski sum of the ray bodies.
    fn simplex_linear(&self, simplex: &Cone) -> Result<bool> {
        let bary = DivisorClass(simplex.interior_point());
        let lhs = self.body(&bary)?;
        let mut rhs = Polygon2::origin();
        for r in &simplex.rays {
            rhs = minkowski_sum(&rhs, &self.body(&DivisorClass(r.clone()))?);
        }
        Ok(lhs == rhs)
    }
}

/// Movable part: primitive rays of the coarsest refinement of the BKS
/// fan on which the vertex map is linear. Fixed part: negative curves.
pub fn compute_minkowski_base(surface: &SurfaceData, flag: &FlagData) -> Result<MinkowskiBase> {
    let rho = surface.rank;
    let bks = enumerate_chambers(surface)?;
    let ctx = LinearityContext {
        surface,
        flag,
        chambers: bks.clone(),
    };
    let mut cones: Vec<Cone> = Vec::new();
    for ch in &bks {
        cones.extend(triangulate(rho, &ch.cone.rays)?);
    }
    let mut depth = 0;
    let regions = loop {
        let ray_count = dedup_classes(
            &cones
                .iter()
                .flat_map(|c| c.rays.iter().map(|r| DivisorClass(r.clone())))
                .collect::<Vec<_>>(),
        )
        .len();
        if depth > 2 * ray_count {
            return Err(Error::Internal("linearity fan not reached".into()));
        }
        let mut walls = facet_hyperplanes(&cones);
        for w in shadow_hyperplanes(rho, &flag.curve_class, &cones) {
            if !walls.contains(&w) {
                walls.push(w);
            }
        }
        let fine = refine_by_hyperplanes(rho, cones.clone(), &walls)?;
        // merge pieces the vertex map is linear across
        let mut region_of: Vec<usize> = (0..fine.len()).collect();
        fn find(region_of: &mut Vec<usize>, mut i: usize) -> usize {
            while region_of[i] != i {
                region_of[i] = region_of[region_of[i]];
                i = region_of[i];
            }
            i
        }
        for i in 0..fine.len() {
            for j in i + 1..fine.len() {
                if find(&mut region_of, i) == find(&mut region_of, j) {
                    continue;
                }
                if let Some(facet) = shared_facet(rho, &fine[i], &fine[j])? {
                    if ctx.linear_across(&fine[i], &fine[j], &facet)? {
                        let (a, b) = (find(&mut region_of, i), find(&mut region_of, j));
                        region_of[a] = b;
                    }
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..fine.len() {
            groups.entry(find(&mut region_of, i)).or_default().push(i);
        }
        let mut regions: Vec<Cone> = Vec::new();
        for members in groups.values() {
            let rays: Vec<Vec<Rat>> = members
                .iter()
                .flat_map(|&i| fine[i].rays.iter().cloned())
                .collect();
            regions.push(Cone::from_rays(rho, &rays)?);
        }
        // certify vertex-linearity on every region
        let mut all_linear = true;
        let mut next_cones = Vec::new();
        for region in &regions {
            let simplices = triangulate(rho, &region.rays)?;
            for s in &simplices {
                if !ctx.simplex_linear(s)? {
                    all_linear = false;
                }
            }
            next_cones.extend(simplices);
        }
        if all_linear {
            break regions;
        }
        cones = next_cones;
        depth += 1;
    };
    let fan_rays = dedup_classes(
        &regions
            .iter()
            .flat_map(|c| c.rays.iter().map(|r| DivisorClass(r.clone())))
            .collect::<Vec<_>>(),
    );
    let mut movable = Vec::new();
    for class in &fan_rays {
        if surface.negative_curves.iter().any(|c| c.same_ray(class)) {
            continue;
        }
        let poly = okounkov_polygon_with_chambers(surface, flag, class, &ctx.chambers)?;
        movable.push((class.clone(), poly));
    }
    let fixed = dedup_classes(&surface.negative_curves);
    Ok(MinkowskiBase { movable, fixed })
}

/// Generator of the global body cone, a vector in Q^(2+rho).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalGenerator {
    pub valuation: Vec<Rat>,
    pub class: DivisorClass,
    pub extremal: bool,
    pub provenance: String,
}

impl GlobalGenerator {
    pub fn vector(&self) -> Vec<Rat> {
        let mut v = self.valuation.clone();
        v.extend(self.class.0.iter().cloned());
        v
    }
}

#[derive(Clone, Debug)]
pub struct GlobalBodyCone {
    pub valuation_dim: usize,
    pub class_dim: usize,
    pub generators: Vec<GlobalGenerator>,
}

impl GlobalBodyCone {
    pub fn ambient_dim(&self) -> usize {
        self.valuation_dim + self.class_dim
    }

    pub fn vectors(&self) -> Vec<Vec<Rat>> {
        self.generators.iter().map(|g| g.vector()).collect()
    }

    pub fn cone(&self) -> Result<Cone> {
        Cone::from_rays(self.ambient_dim(), &self.vectors())
    }
}

fn flag_extremal(generators: &mut Vec<GlobalGenerator>) -> Result<()> {
    let vectors: Vec<Vec<Rat>> = generators.iter().map(|g| g.vector()).collect();
    let extreme = extremal_rays(&vectors)?;
    for g in generators.iter_mut() {
        g.extremal = extreme.contains(&primitive(&g.vector()));
    }
    Ok(())
}

fn push_generator(
    gens: &mut Vec<GlobalGenerator>,
    valuation: Vec<Rat>,
    class: DivisorClass,
    provenance: &str,
) {
    let candidate = GlobalGenerator {
        valuation,
        class,
        extremal: false,
        provenance: provenance.to_string(),
    };
    if !gens
        .iter()
        .any(|g| g.valuation == candidate.valuation && g.class == candidate.class)
    {
        gens.push(candidate);
    }
}

/// Vertices of the base polygons, one generator per (vertex, element).
pub fn global_generators_from_base(base: &MinkowskiBase) -> Result<GlobalBodyCone> {
    let class_dim = base
        .movable
        .first()
        .map(|(c, _)| c.0.len())
        .or_else(|| base.fixed.first().map(|c| c.0.len()))
        .ok_or_else(|| Error::Input("empty Minkowski base".into()))?;
    let mut gens = Vec::new();
    for (class, poly) in &base.movable {
        for (x, y) in poly.polygon.vertices() {
            push_generator(
                &mut gens,
                vec![x.clone(), y.clone()],
                class.clone(),
                "base_vertex",
            );
        }
    }
    for class in &base.fixed {
        push_generator(
            &mut gens,
            vec![Rat::zero(), Rat::zero()],
            class.clone(),
            "fixed_point",
        );
    }
    flag_extremal(&mut gens)?;
    Ok(GlobalBodyCone {
        valuation_dim: 2,
        class_dim,
        generators: gens,
    })
}

/// Direct generator set for the global body of a surface: over each
/// chamber-closure ray D_i emit ((0,0),[D_i]) and, when P_i.A is
/// nonzero, ((0,P_i.A),[D_i]); finally ((1,0),[A]).
pub fn global_generators_surface(
    surface: &SurfaceData,
    flag: &FlagData,
) -> Result<GlobalBodyCone> {
    let chambers = enumerate_chambers(surface)?;
    let classes = dedup_classes(
        &chambers
            .iter()
            .flat_map(|c| c.generators.iter().cloned())
            .collect::<Vec<_>>(),
    );
    let a = &flag.curve_class;
    let mut gens = Vec::new();
    for class in &classes {
        push_generator(
            &mut gens,
            vec![Rat::zero(), Rat::zero()],
            class.clone(),
            "chamber_ray",
        );
        let z = crate::zariski::zariski_decompose(surface, class)?;
        let pa = surface.intersect(&z.positive, a);
        if !pa.is_zero() {
            push_generator(&mut gens, vec![Rat::zero(), pa], class.clone(), "chamber_ray");
        }
    }
    push_generator(
        &mut gens,
        vec![crate::linalg::qi(1), Rat::zero()],
        a.clone(),
        "flag",
    );
    flag_extremal(&mut gens)?;
    Ok(GlobalBodyCone {
        valuation_dim: 2,
        class_dim: surface.rank,
        generators: gens,
    })
}

/// Fiber of the generated cone over a class: slice the inequality
/// description and enumerate the vertices of the resulting polygon.
pub fn fiber(g: &GlobalBodyCone, d: &DivisorClass) -> Result<Polygon2> {
    if d.0.len() != g.class_dim {
        return Err(Error::Dimension(format!(
            "class has length {} but the cone fibers over dimension {}",
            d.0.len(),
            g.class_dim
        )));
    }
    let cone = g.cone()?;
    // affine inequalities a.x >= c on the valuation plane
    let mut affine: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for h in &cone.ineqs {
        let (hv, hc) = h.split_at(g.valuation_dim);
        affine.push((hv.to_vec(), -dot(hc, &d.0)));
    }
    // the fiber of a pointed cone over a fixed class is bounded; verify
    let normals: Vec<Vec<Rat>> = affine.iter().map(|(a, _)| a.clone()).collect();
    let (lin, recession) = halfspace_intersection(g.valuation_dim, &normals)?;
    if !lin.is_empty() || !recession.is_empty() {
        return Err(Error::Internal("fiber is unbounded".into()));
    }
    let mut vertices: Vec<(Rat, Rat)> = Vec::new();
    for (i, (ai, ci)) in affine.iter().enumerate() {
        for (aj, cj) in affine.iter().skip(i + 1).map(|(a, c)| (a, c)) {
            let det = &ai[0] * &aj[1] - &ai[1] * &aj[0];
            if det.is_zero() {
                continue;
            }
            let x = (ci * &aj[1] - cj * &ai[1]) / &det;
            let y = (&ai[0] * cj - &aj[0] * ci) / &det;
            if affine
                .iter()
                .all(|(a, c)| &(&a[0] * &x) + &a[1] * &y >= *c)
            {
                let v = (x, y);
                if !vertices.contains(&v) {
                    vertices.push(v);
                }
            }
        }
    }
    if vertices.is_empty() {
        return Err(Error::Domain(
            "empty fiber: class outside the effective cone".into(),
        ));
    }
    Ok(hull2(&vertices))
}

#[derive(Clone, Debug)]
pub struct VerifyFailure {
    pub divisor: DivisorClass,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub samples: usize,
    pub failures: Vec<VerifyFailure>,
}

/// Seeded sampler of pseudo-effective classes: small nonnegative integer
/// combinations of the effective generators.
pub fn sample_pseudo_effective(
    surface: &SurfaceData,
    rng: &mut ChaCha8Rng,
) -> DivisorClass {
    loop {
        let mut d = vzero(surface.rank);
        for g in &surface.eff_generators {
            let c = crate::linalg::qi(rng.gen_range(0..=6));
            d = vadd(&d, &vscale(&c, &g.0));
        }
        if !is_zero_vec(&d) {
            return DivisorClass(d);
        }
    }
}

fn verify_one(
    surface: &SurfaceData,
    flag: &FlagData,
    base: &MinkowskiBase,
    fan: &MinkowskiFan,
    chambers: &[crate::zariski::Chamber],
    d: &DivisorClass,
) -> Result<Option<VerifyFailure>> {
    let expected = okounkov_polygon_with_chambers(surface, flag, d, chambers)?.polygon;
    let dec = match decompose_in_fan(surface, flag, d, fan) {
        Ok(dec) => dec,
        Err(e) => {
            return Ok(Some(VerifyFailure {
                divisor: d.clone(),
                reason: e.to_string(),
            }))
        }
    };
    let mut reconstructed = Polygon2::origin();
    for (class, coeff) in &dec.movable {
        match base.polygon_of(class) {
            Some(p) => {
                reconstructed = minkowski_sum(&reconstructed, &p.polygon.scale(coeff));
            }
            None => {
                return Ok(Some(VerifyFailure {
                    divisor: d.clone(),
                    reason: format!(
                        "chamber ray {} is not a movable base element",
                        surface.class_label(class)
                    ),
                }))
            }
        }
    }
    // fixed elements contribute the single point (0,0): no translation
    if reconstructed != expected {
        return Ok(Some(VerifyFailure {
            divisor: d.clone(),
            reason: format!(
                "polygon mismatch: expected {:?}, reconstructed {:?}",
                expected, reconstructed
            ),
        }));
    }
    Ok(None)
}

/// Sample pseudo-effective classes, locate the Minkowski chamber, solve
/// the coefficients and test exact polygon equality of the
/// reconstruction. Failures are data, not exceptions. Samples are drawn
/// sequentially from the seed, then checked on `jobs` threads; the
/// report is identical for every job count.
pub fn verify_minkowski(
    surface: &SurfaceData,
    flag: &FlagData,
    base: &MinkowskiBase,
    samples: usize,
    seed: u64,
    jobs: usize,
) -> Result<VerifyReport> {
    let eff = surface.eff_cone()?;
    let fan = minkowski_chambers(&eff, &base.classes())?;
    let chambers = enumerate_chambers(surface)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let divisors: Vec<DivisorClass> = (0..samples)
        .map(|_| sample_pseudo_effective(surface, &mut rng))
        .collect();
    let jobs = jobs.max(1).min(samples.max(1));
    let mut results: Vec<Result<Option<VerifyFailure>>> = Vec::with_capacity(samples);
    if jobs == 1 {
        for d in &divisors {
            results.push(verify_one(surface, flag, base, &fan, &chambers, d));
        }
    } else {
        let chunk = samples.div_ceil(jobs);
        let mut per_chunk: Vec<Vec<Result<Option<VerifyFailure>>>> = Vec::new();
        std::thread::scope(|scope| {
            let handles: Vec<_> = divisors
                .chunks(chunk)
                .map(|ds| {
                    scope.spawn(|| {
                        ds.iter()
                            .map(|d| verify_one(surface, flag, base, &fan, &chambers, d))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                per_chunk.push(h.join().expect("verification thread"));
            }
        });
        results = per_chunk.into_iter().flatten().collect();
    }
    let mut failures = Vec::new();
    for r in results {
        if let Some(f) = r? {
            failures.push(f);
        }
    }
    Ok(VerifyReport { samples, failures })
}

/// 2D indecomposability report flag: a point, a primitive segment, or a
/// triangle with primitive edges.
pub fn polygon_indecomposable(p: &Polygon2) -> bool {
    let v = p.vertices();
    match v.len() {
        1 => true,
        2 => {
            let edge = vec![&v[1].0 - &v[0].0, &v[1].1 - &v[0].1];
            primitive(&edge) == edge
        }
        3 => (0..3).all(|i| {
            let j = (i + 1) % 3;
            let edge = vec![&v[j].0 - &v[i].0, &v[j].1 - &v[i].1];
            primitive(&edge) == edge
        }),
        _ => false,
    }
}
