//! Data model for a smooth projective surface with rational polyhedral
//! pseudo-effective cone, plus an admissible general flag. Everything is
//! lattice data: Picard rank, intersection Gram matrix, effective-cone
//! generators, negative curves, flag class.

use num_traits::Zero;

use crate::cone::Cone;
use crate::error::Result;
use crate::linalg::{dot, lex_cmp, primitive, rank, signature, Rat};

/// Exact rational coefficient vector in the declared basis of N^1(X).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass(pub Vec<Rat>);

impl DivisorClass {
    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn primitive(&self) -> DivisorClass {
        DivisorClass(primitive(&self.0))
    }

    pub fn is_zero(&self) -> bool {
        crate::linalg::is_zero_vec(&self.0)
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass(crate::linalg::vadd(&self.0, &other.0))
    }

    pub fn sub(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass(crate::linalg::vsub(&self.0, &other.0))
    }

    pub fn scale(&self, c: &Rat) -> DivisorClass {
        DivisorClass(crate::linalg::vscale(c, &self.0))
    }

    /// Proportional with a positive factor (same half-line).
    pub fn same_ray(&self, other: &DivisorClass) -> bool {
        !self.is_zero() && !other.is_zero() && self.primitive() == other.primitive()
    }
}

#[derive(Clone, Debug)]
pub struct FlagData {
    /// Class of the flag curve: big and semi-ample, with the flag point
    /// chosen generally (valuations of negative-part sections vanish).
    pub curve_class: DivisorClass,
    pub general: bool,
}

#[derive(Clone, Debug)]
pub struct SurfaceData {
    pub rank: usize,
    pub gram: Vec<Vec<Rat>>,
    pub eff_generators: Vec<DivisorClass>,
    pub negative_curves: Vec<DivisorClass>,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Violation {
    pub invariant: String,
    pub witness: String,
}

impl SurfaceData {
    /// D . E through the intersection form, exactly.
    pub fn intersect(&self, d: &DivisorClass, e: &DivisorClass) -> Rat {
        assert_eq!(d.0.len(), self.rank, "divisor length mismatch");
        assert_eq!(e.0.len(), self.rank, "divisor length mismatch");
        let ge: Vec<Rat> = self.gram.iter().map(|row| dot(row, &e.0)).collect();
        dot(&d.0, &ge)
    }

    /// Linear functional x -> x . c as a coordinate vector.
    pub fn pairing_functional(&self, c: &DivisorClass) -> Vec<Rat> {
        self.gram.iter().map(|row| dot(row, &c.0)).collect()
    }

    pub fn eff_cone(&self) -> Result<Cone> {
        let rays: Vec<Vec<Rat>> = self.eff_generators.iter().map(|c| c.0.clone()).collect();
        Cone::from_rays(self.rank, &rays)
    }

    /// Dual of Eff: { D : D . C >= 0 for all effective generators C }.
    pub fn nef_cone(&self) -> Result<Cone> {
        let ineqs: Vec<Vec<Rat>> = self
            .eff_generators
            .iter()
            .map(|c| self.pairing_functional(c))
            .collect();
        Cone::from_ineqs(self.rank, &ineqs)
    }

    pub fn is_pseudo_effective(&self, d: &DivisorClass) -> Result<bool> {
        Ok(self.eff_cone()?.membership(&d.0)?.is_some())
    }

    pub fn class_label(&self, d: &DivisorClass) -> String {
        if self.labels.len() != self.rank {
            return format!("{:?}", d.0.iter().map(|r| r.to_string()).collect::<Vec<_>>());
        }
        let mut out = String::new();
        for (c, name) in d.0.iter().zip(&self.labels) {
            if c.is_zero() {
                continue;
            }
            let one = crate::linalg::qi(1);
            let minus_one = crate::linalg::qi(-1);
            if out.is_empty() {
                if *c == one {
                    out.push_str(name);
                } else if *c == minus_one {
                    out.push_str(&format!("-{name}"));
                } else {
                    out.push_str(&format!("{c}{name}"));
                }
            } else if *c == one {
                out.push_str(&format!("+{name}"));
            } else if *c == minus_one {
                out.push_str(&format!("-{name}"));
            } else if c > &Rat::zero() {
                out.push_str(&format!("+{c}{name}"));
            } else {
                out.push_str(&format!("{c}{name}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Check every surface and flag invariant; returns the full violation
/// list rather than aborting on the first failure.
pub fn validate(surface: &SurfaceData, flag: &FlagData) -> Vec<Violation> {
    let mut v = Vec::new();
    let rho = surface.rank;
    let mut push = |invariant: &str, witness: String| {
        v.push(Violation {
            invariant: invariant.to_string(),
            witness,
        })
    };

    if surface.gram.len() != rho || surface.gram.iter().any(|r| r.len() != rho) {
        push("gram-shape", format!("gram matrix is not {rho}x{rho}"));
        return v;
    }
    for i in 0..rho {
        for j in i + 1..rho {
            if surface.gram[i][j] != surface.gram[j][i] {
                push("gram-symmetry", format!("entries ({i},{j}) and ({j},{i}) differ"));
                return v;
            }
        }
    }
    match signature(&surface.gram) {
        Ok((pos, neg, zero)) => {
            if (pos, neg, zero) != (1, rho - 1, 0) {
                push(
                    "signature",
                    format!("expected (1,{}) nondegenerate, found ({pos},{neg}) with {zero} null directions", rho - 1),
                );
            }
        }
        Err(e) => push("signature", e.to_string()),
    }
    for d in surface
        .eff_generators
        .iter()
        .chain(surface.negative_curves.iter())
        .chain(std::iter::once(&flag.curve_class))
    {
        if d.0.len() != rho {
            push("class-length", format!("class of length {} in rank {rho}", d.0.len()));
            return v;
        }
    }
    let eff_rays: Vec<Vec<Rat>> = surface.eff_generators.iter().map(|c| c.0.clone()).collect();
    if rank(&eff_rays) != rho {
        push("eff-full-dimensional", "effective cone does not span N^1".into());
    }
    match surface.eff_cone() {
        Ok(eff) => {
            if crate::linalg::rank(&eff.ineqs) != rho {
                push("eff-pointed", "effective cone contains a line".into());
            }
            for c in &surface.negative_curves {
                let self_int = surface.intersect(c, c);
                if self_int >= Rat::zero() {
                    push(
                        "self-intersection",
                        format!("{} has self-intersection {}", surface.class_label(c), self_int),
                    );
                }
                match eff.membership(&c.0) {
                    Ok(Some(_)) => {}
                    Ok(None) => push(
                        "negative-curve-effective",
                        format!("{} lies outside the effective cone", surface.class_label(c)),
                    ),
                    Err(e) => push("negative-curve-effective", e.to_string()),
                }
            }
        }
        Err(e) => push("eff-cone", e.to_string()),
    }
    let a = &flag.curve_class;
    let a2 = surface.intersect(a, a);
    if a2 <= Rat::zero() {
        push(
            "flag-big",
            format!("flag class {} has self-intersection {}", surface.class_label(a), a2),
        );
    }
    for c in &surface.eff_generators {
        let prod = surface.intersect(a, c);
        if prod < Rat::zero() {
            push(
                "flag-nef",
                format!(
                    "flag class meets generator {} in {}",
                    surface.class_label(c),
                    prod
                ),
            );
        }
    }
    if !flag.general {
        push(
            "flag-generality",
            "instance does not assert the general-flag contract".into(),
        );
    }
    v
}

/// Deduplicate classes up to positive scaling, lex-sorted primitives.
pub fn dedup_classes(classes: &[DivisorClass]) -> Vec<DivisorClass> {
    let mut out: Vec<DivisorClass> = Vec::new();
    for c in classes {
        if c.is_zero() {
            continue;
        }
        let p = c.primitive();
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out.sort_by(|a, b| lex_cmp(&a.0, &b.0));
    out
}
