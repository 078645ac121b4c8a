//! Zariski decomposition of pseudo-effective classes and enumeration of
//! the BKS (Zariski) chambers with their generators.
//!
//! The decomposition follows the classical support-growing scheme: start
//! from the curves the class meets negatively, solve the orthogonality
//! system over the support Gram matrix, and enlarge the support until the
//! candidate positive part is nef.

use num_traits::Zero;

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::linalg::{solve_linear, vsub, Rat};
use crate::surface::{DivisorClass, SurfaceData};

#[derive(Clone, Debug)]
pub struct ZariskiDecomposition {
    pub positive: DivisorClass,
    /// Indices into `surface.negative_curves`; coefficients all positive.
    pub support: Vec<usize>,
    pub coeffs: Vec<Rat>,
}

impl ZariskiDecomposition {
    pub fn negative(&self, surface: &SurfaceData) -> DivisorClass {
        let mut n = DivisorClass(crate::linalg::vzero(surface.rank));
        for (&i, c) in self.support.iter().zip(&self.coeffs) {
            n = n.add(&surface.negative_curves[i].scale(c));
        }
        n
    }

    /// vol(D) = P . P
    pub fn volume(&self, surface: &SurfaceData) -> Rat {
        surface.intersect(&self.positive, &self.positive)
    }
}

/// The unique decomposition D = P + N with P nef, P orthogonal to every
/// support curve, and negative-definite support Gram matrix.
pub fn zariski_decompose(surface: &SurfaceData, d: &DivisorClass) -> Result<ZariskiDecomposition> {
    if !surface.is_pseudo_effective(d)? {
        return Err(Error::Domain(format!(
            "{} is not pseudo-effective",
            surface.class_label(d)
        )));
    }
    let curves = &surface.negative_curves;
    let mut support: Vec<usize> = (0..curves.len())
        .filter(|&j| surface.intersect(d, &curves[j]) < Rat::zero())
        .collect();
    loop {
        let (p, coeffs) = solve_support_system(surface, d, &support)?;
        let grew = {
            let mut grew = false;
            for j in 0..curves.len() {
                if !support.contains(&j) && surface.intersect(&p, &curves[j]) < Rat::zero() {
                    support.push(j);
                    grew = true;
                }
            }
            support.sort_unstable();
            grew
        };
        if grew {
            continue;
        }
        if coeffs.iter().any(|c| c < &Rat::zero()) {
            return Err(Error::Internal(
                "negative-curve list inconsistent with Gram (negative Zariski coefficient)".into(),
            ));
        }
        // final nefness check against the full dual description
        let nef = surface.nef_cone()?;
        if !nef.contains(&p.0) || surface.intersect(&p, &p) < Rat::zero() {
            return Err(Error::Internal(
                "negative-curve list inconsistent with Gram (positive part not nef)".into(),
            ));
        }
        let (support, coeffs): (Vec<usize>, Vec<Rat>) = support
            .iter()
            .copied()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .unzip();
        return Ok(ZariskiDecomposition {
            positive: p,
            support,
            coeffs,
        });
    }
}

/// Solve (D - sum a_i C_i) . C_j = 0 over the support.
fn solve_support_system(
    surface: &SurfaceData,
    d: &DivisorClass,
    support: &[usize],
) -> Result<(DivisorClass, Vec<Rat>)> {
    if support.is_empty() {
        return Ok((d.clone(), Vec::new()));
    }
    let curves = &surface.negative_curves;
    let gram: Vec<Vec<Rat>> = support
        .iter()
        .map(|&i| {
            support
                .iter()
                .map(|&j| surface.intersect(&curves[i], &curves[j]))
                .collect()
        })
        .collect();
    let rhs: Vec<Rat> = support
        .iter()
        .map(|&j| surface.intersect(d, &curves[j]))
        .collect();
    let sol = solve_linear(&gram, &rhs)?.ok_or_else(|| {
        Error::Internal("negative-curve list inconsistent with Gram (singular support system)".into())
    })?;
    if !sol.kernel.is_empty() {
        return Err(Error::Internal(
            "negative-curve list inconsistent with Gram (singular support system)".into(),
        ));
    }
    let mut p = d.0.clone();
    for (&i, a) in support.iter().zip(&sol.particular) {
        p = vsub(&p, &crate::linalg::vscale(a, &curves[i].0));
    }
    Ok((DivisorClass(p), sol.particular))
}

/// Locus of big classes whose negative-part support is constant; the
/// closure is rational polyhedral.
#[derive(Clone, Debug)]
pub struct Chamber {
    pub id: String,
    pub support: Vec<usize>,
    pub cone: Cone,
    pub generators: Vec<DivisorClass>,
}

/// One chamber per negative-definite subset of the negative curves whose
/// constant-support locus has nonempty interior.
pub fn enumerate_chambers(surface: &SurfaceData) -> Result<Vec<Chamber>> {
    let k = surface.negative_curves.len();
    if k >= 16 {
        return Err(Error::Input(
            "negative-curve list too long for subset enumeration".into(),
        ));
    }
    let mut chambers = Vec::new();
    for mask in 0u32..(1 << k) {
        let support: Vec<usize> = (0..k).filter(|&j| mask & (1 << j) != 0).collect();
        if let Some(chamber) = chamber_for_support(surface, &support)? {
            chambers.push(chamber);
        }
    }
    Ok(chambers)
}

/// Closed chamber cone for a prescribed support, or `None` when the
/// support is not negative definite or the locus has empty interior.
fn chamber_for_support(surface: &SurfaceData, support: &[usize]) -> Result<Option<Chamber>> {
    let curves = &surface.negative_curves;
    let gram: Vec<Vec<Rat>> = support
        .iter()
        .map(|&i| {
            support
                .iter()
                .map(|&j| surface.intersect(&curves[i], &curves[j]))
                .collect()
        })
        .collect();
    if !support.is_empty() && !crate::linalg::is_negative_definite(&gram)? {
        return Ok(None);
    }
    // a_i(D) and P(D) are linear in D: invert the support Gram once
    let coeff_rows: Vec<Vec<Rat>> = if support.is_empty() {
        Vec::new()
    } else {
        let pair_rows: Vec<Vec<Rat>> = support
            .iter()
            .map(|&j| surface.pairing_functional(&curves[j]))
            .collect();
        // rows of Gram^{-1} * pair_rows
        let mut rows = Vec::new();
        for col in 0..surface.rank {
            let rhs: Vec<Rat> = pair_rows.iter().map(|r| r[col].clone()).collect();
            let sol = solve_linear(&gram, &rhs)?
                .ok_or_else(|| Error::Internal("negative-definite Gram must be invertible".into()))?;
            rows.push(sol.particular);
        }
        // transpose back: entry (i, col)
        (0..support.len())
            .map(|i| (0..surface.rank).map(|col| rows[col][i].clone()).collect())
            .collect()
    };
    let mut ineqs: Vec<Vec<Rat>> = coeff_rows.clone();
    for g in &surface.eff_generators {
        // P(D) . g = D . g - sum_i a_i(D) (C_i . g)
        let mut h = surface.pairing_functional(g);
        for (&i, row) in support.iter().zip(&coeff_rows) {
            let cig = surface.intersect(&curves[i], g);
            h = vsub(&h, &crate::linalg::vscale(&cig, row));
        }
        ineqs.push(h);
    }
    let cone = match Cone::from_ineqs(surface.rank, &ineqs) {
        Ok(c) => c,
        Err(Error::Input(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if !cone.is_full_dim() {
        return Ok(None);
    }
    // interior witness: the actual support at the ray sum must match
    let witness = DivisorClass(cone.interior_point());
    let z = zariski_decompose(surface, &witness)?;
    if z.support != support {
        return Ok(None);
    }
    let generators: Vec<DivisorClass> = cone.rays.iter().map(|r| DivisorClass(r.clone())).collect();
    let id = if support.is_empty() {
        "nef".to_string()
    } else {
        support
            .iter()
            .map(|&i| surface.class_label(&curves[i]))
            .collect::<Vec<_>>()
            .join(",")
    };
    Ok(Some(Chamber {
        id,
        support: support.to_vec(),
        cone,
        generators,
    }))
}

/// Chamber whose closure contains D; minimal support on walls.
pub fn chamber_of<'a>(
    surface: &SurfaceData,
    chambers: &'a [Chamber],
    d: &DivisorClass,
) -> Result<&'a Chamber> {
    let mut best: Option<&Chamber> = None;
    for ch in chambers {
        if ch.cone.contains(&d.0) {
            let better = match best {
                None => true,
                Some(b) => ch.support.len() < b.support.len(),
            };
            if better {
                best = Some(ch);
            }
        }
    }
    best.ok_or_else(|| {
        Error::Domain(format!(
            "{} lies outside every chamber closure",
            surface.class_label(d)
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qi, qvec};
    use crate::testutil::{bl2p2, f1, p2};

    #[test]
    fn nef_class_is_its_own_positive_part() {
        let s = bl2p2();
        let d = DivisorClass(qvec(&[3, -1, -1]));
        let z = zariski_decompose(&s, &d).unwrap();
        assert_eq!(z.positive, d);
        assert!(z.support.is_empty());
    }

    #[test]
    fn negative_curve_is_pure_negative_part() {
        let s = bl2p2();
        let d = DivisorClass(qvec(&[1, -1, -1]));
        let z = zariski_decompose(&s, &d).unwrap();
        assert!(z.positive.is_zero());
        assert_eq!(z.support, vec![2]);
        assert_eq!(z.coeffs, vec![qi(1)]);
    }

    #[test]
    fn mixed_decomposition() {
        // 3H-2E1-2E2 = (2H-E1-E2) + (H-E1-E2)
        let s = bl2p2();
        let d = DivisorClass(qvec(&[3, -2, -2]));
        let z = zariski_decompose(&s, &d).unwrap();
        assert_eq!(z.positive, DivisorClass(qvec(&[2, -1, -1])));
        assert_eq!(z.support, vec![2]);
        assert_eq!(z.coeffs, vec![qi(1)]);
        // orthogonality and nefness
        let n = z.negative(&s);
        assert_eq!(d, z.positive.add(&n));
        assert_eq!(s.intersect(&z.positive, &n), qi(0));
    }

    #[test]
    fn non_pseudo_effective_rejected() {
        let s = bl2p2();
        let d = DivisorClass(qvec(&[-1, 0, 0]));
        assert!(matches!(zariski_decompose(&s, &d), Err(Error::Domain(_))));
    }

    #[test]
    fn bl2p2_has_five_chambers() {
        let s = bl2p2();
        let chambers = enumerate_chambers(&s).unwrap();
        assert_eq!(chambers.len(), 5);
        let mut sets: Vec<Vec<Vec<Rat>>> = chambers
            .iter()
            .map(|c| c.cone.rays.clone())
            .collect();
        sets.sort();
        let expect = |v: &[[i64; 3]]| -> Vec<Vec<Rat>> {
            let mut r: Vec<Vec<Rat>> = v.iter().map(|x| qvec(x)).collect();
            r.sort_by(|a, b| crate::linalg::lex_cmp(a, b));
            r
        };
        let mut expected = vec![
            expect(&[[1, 0, 0], [1, -1, 0], [1, 0, -1]]),          // nef
            expect(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]),            // support {E1,E2}
            expect(&[[1, 0, 0], [1, -1, 0], [0, 0, 1]]),           // support {E1}... generators H, H-E1, E2
            expect(&[[1, 0, 0], [1, 0, -1], [0, 1, 0]]),           // support {E2}
            expect(&[[1, -1, 0], [1, 0, -1], [1, -1, -1]]),        // support {H-E1-E2}
        ];
        expected.sort();
        assert_eq!(sets, expected);
    }

    #[test]
    fn p2_has_one_chamber() {
        let s = p2();
        let chambers = enumerate_chambers(&s).unwrap();
        assert_eq!(chambers.len(), 1);
        assert_eq!(chambers[0].cone.rays, vec![qvec(&[1])]);
    }

    #[test]
    fn f1_has_two_chambers() {
        let s = f1();
        let chambers = enumerate_chambers(&s).unwrap();
        assert_eq!(chambers.len(), 2);
        let nef = chambers.iter().find(|c| c.support.is_empty()).unwrap();
        assert_eq!(nef.cone.rays, vec![qvec(&[0, 1]), qvec(&[1, 1])]);
        let neg = chambers.iter().find(|c| !c.support.is_empty()).unwrap();
        assert_eq!(neg.cone.rays, vec![qvec(&[1, 0]), qvec(&[1, 1])]);
    }

    #[test]
    fn point_location_prefers_minimal_support() {
        let s = bl2p2();
        let chambers = enumerate_chambers(&s).unwrap();
        // H is on the wall of several chambers; nef wins
        let ch = chamber_of(&s, &chambers, &DivisorClass(qvec(&[1, 0, 0]))).unwrap();
        assert!(ch.support.is_empty());
    }
}
