//! Shared fixtures for unit tests.

use crate::linalg::qvec;
use crate::surface::{DivisorClass, FlagData, SurfaceData};

pub fn p2() -> SurfaceData {
    SurfaceData {
        rank: 1,
        gram: vec![qvec(&[1])],
        eff_generators: vec![DivisorClass(qvec(&[1]))],
        negative_curves: vec![],
        labels: vec!["H".into()],
    }
}

/// Hirzebruch surface F_e in the basis (s, f).
pub fn hirzebruch(e: i64) -> SurfaceData {
    SurfaceData {
        rank: 2,
        gram: vec![qvec(&[-e, 1]), qvec(&[1, 0])],
        eff_generators: vec![DivisorClass(qvec(&[1, 0])), DivisorClass(qvec(&[0, 1]))],
        negative_curves: if e > 0 {
            vec![DivisorClass(qvec(&[1, 0]))]
        } else {
            vec![]
        },
        labels: vec!["s".into(), "f".into()],
    }
}

pub fn f1() -> SurfaceData {
    hirzebruch(1)
}

/// Blow-up of the plane in two points, basis (H, E1, E2).
pub fn bl2p2() -> SurfaceData {
    SurfaceData {
        rank: 3,
        gram: vec![qvec(&[1, 0, 0]), qvec(&[0, -1, 0]), qvec(&[0, 0, -1])],
        eff_generators: vec![
            DivisorClass(qvec(&[0, 1, 0])),
            DivisorClass(qvec(&[0, 0, 1])),
            DivisorClass(qvec(&[1, -1, -1])),
        ],
        negative_curves: vec![
            DivisorClass(qvec(&[0, 1, 0])),
            DivisorClass(qvec(&[0, 0, 1])),
            DivisorClass(qvec(&[1, -1, -1])),
        ],
        labels: vec!["H".into(), "E1".into(), "E2".into()],
    }
}

pub fn flag(class: &[i64]) -> FlagData {
    FlagData {
        curve_class: DivisorClass(qvec(class)),
        general: true,
    }
}
