//! Frozen expectations stored inside each shipped instance, plus a
//! field-identical serialization round trip for every file.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use serde_json::Value;

use okounkov::body::okounkov_polygon;
use okounkov::instance::{instance_to_json, load_instance, parse_rat_str};
use okounkov::linalg::{primitive, Rat};
use okounkov::minkowski::{compute_minkowski_base, global_generators_surface};
use okounkov::surface::DivisorClass;
use okounkov::threefold::{fiber3, lift_cone};
use okounkov::zariski::enumerate_chambers;

fn instance_files() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances");
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    files
}

fn parse_divisor(s: &str) -> DivisorClass {
    DivisorClass(
        s.split(',')
            .map(|p| parse_rat_str(p).expect("rational coordinate"))
            .collect(),
    )
}

fn int_points(v: &Value) -> Vec<Vec<Rat>> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|p| {
            p.as_array()
                .unwrap()
                .iter()
                .map(|x| match x {
                    Value::Number(n) => Rat::from_integer(n.as_i64().unwrap().into()),
                    Value::String(s) => parse_rat_str(s).unwrap(),
                    _ => panic!("not a rational: {x}"),
                })
                .collect()
        })
        .collect()
}

fn class_set(classes: &[Vec<Rat>]) -> BTreeSet<String> {
    classes.iter().map(|c| format!("{:?}", primitive(c))).collect()
}

#[test]
fn serialization_round_trips_field_identical() {
    for path in instance_files() {
        let text = fs::read_to_string(&path).unwrap();
        let original: Value = serde_json::from_str(&text).unwrap();
        let inst = load_instance(&path).unwrap();
        assert_eq!(
            instance_to_json(&inst),
            original,
            "round trip differs for {}",
            path.display()
        );
    }
}

#[test]
fn golden_blocks_hold() {
    let mut checked = 0usize;
    for path in instance_files() {
        let inst = load_instance(&path).unwrap();
        let Some(golden) = &inst.golden else { continue };
        let golden = golden.as_object().unwrap();
        let name = path.display();

        if let Some(n) = golden.get("chamber_count") {
            let chambers = enumerate_chambers(&inst.surface).unwrap();
            assert_eq!(chambers.len() as u64, n.as_u64().unwrap(), "{name}");
            checked += 1;
        }
        if let Some(bodies) = golden.get("body_vertices") {
            for (dstr, verts) in bodies.as_object().unwrap() {
                let d = parse_divisor(dstr);
                let p = okounkov_polygon(&inst.surface, &inst.flag, &d).unwrap();
                let got: Vec<Vec<Rat>> = p
                    .polygon
                    .vertices()
                    .iter()
                    .map(|(x, y)| vec![x.clone(), y.clone()])
                    .collect();
                assert_eq!(got, int_points(verts), "{name}: body of {dstr}");
            }
            checked += 1;
        }
        if let Some(n) = golden.get("global_surface_count") {
            let gs = global_generators_surface(&inst.surface, &inst.flag).unwrap();
            assert_eq!(gs.generators.len() as u64, n.as_u64().unwrap(), "{name}");
            checked += 1;
        }
        if let Some(vecs) = golden.get("global_vectors") {
            let gs = global_generators_surface(&inst.surface, &inst.flag).unwrap();
            assert_eq!(
                class_set(&gs.vectors()),
                class_set(&int_points(vecs)),
                "{name}"
            );
            checked += 1;
        }
        if golden.contains_key("mbase_movable") || golden.contains_key("mbase_fixed") {
            let base = compute_minkowski_base(&inst.surface, &inst.flag).unwrap();
            if let Some(movable) = golden.get("mbase_movable") {
                let got: Vec<Vec<Rat>> =
                    base.movable.iter().map(|(c, _)| c.0.clone()).collect();
                assert_eq!(class_set(&got), class_set(&int_points(movable)), "{name}");
            }
            if let Some(fixed) = golden.get("mbase_fixed") {
                let got: Vec<Vec<Rat>> = base.fixed.iter().map(|c| c.0.clone()).collect();
                assert_eq!(class_set(&got), class_set(&int_points(fixed)), "{name}");
            }
            checked += 1;
        }
        if let Some(vols) = golden.get("fiber3_volume") {
            let data = inst.threefold.as_ref().unwrap();
            let gs = global_generators_surface(&inst.surface, &inst.flag).unwrap();
            let lifted = lift_cone(data, &inst.surface, &gs).unwrap();
            for (dstr, vol) in vols.as_object().unwrap() {
                let d = parse_divisor(dstr);
                let f = fiber3(&lifted, &d).unwrap();
                let expect = parse_rat_str(vol.as_str().unwrap()).unwrap();
                assert_eq!(f.volume(), expect, "{name}: fiber over {dstr}");
            }
            checked += 1;
        }
    }
    assert!(checked >= 8, "golden coverage regressed: {checked} blocks");
}
