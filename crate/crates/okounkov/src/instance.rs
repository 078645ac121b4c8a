//! Instance files: a single JSON document describing a surface lattice,
//! a flag class, an optional threefold block and an optional golden
//! block of expected outputs. All numbers are exact: JSON integers or
//! strings "p/q"; floats are rejected.

use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::linalg::Rat;
use crate::surface::{DivisorClass, FlagData, SurfaceData};
use crate::threefold::ThreefoldData;

#[derive(Clone, Debug)]
pub struct Instance {
    pub id: String,
    pub surface: SurfaceData,
    pub flag: FlagData,
    pub threefold: Option<ThreefoldData>,
    pub golden: Option<Value>,
}

fn input(path: &str, msg: &str) -> Error {
    Error::Input(format!("{path}: {msg}"))
}

pub fn parse_rat(v: &Value, path: &str) -> Result<Rat> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rat::from_integer(i.into()))
            } else {
                Err(input(path, "expected an integer or a \"p/q\" string"))
            }
        }
        Value::String(s) => parse_rat_str(s)
            .ok_or_else(|| input(path, &format!("malformed rational {s:?}"))),
        _ => Err(input(path, "expected an integer or a \"p/q\" string")),
    }
}

pub fn parse_rat_str(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: num_bigint::BigInt = num.parse().ok()?;
    let d: num_bigint::BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rat::new(n, d))
}

fn parse_vec(v: &Value, path: &str) -> Result<Vec<Rat>> {
    let arr = v
        .as_array()
        .ok_or_else(|| input(path, "expected an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| parse_rat(x, &format!("{path}[{i}]")))
        .collect()
}

fn parse_matrix(v: &Value, path: &str) -> Result<Vec<Vec<Rat>>> {
    let arr = v
        .as_array()
        .ok_or_else(|| input(path, "expected an array of arrays"))?;
    arr.iter()
        .enumerate()
        .map(|(i, row)| parse_vec(row, &format!("{path}[{i}]")))
        .collect()
}

fn parse_classes(v: &Value, path: &str) -> Result<Vec<DivisorClass>> {
    Ok(parse_matrix(v, path)?.into_iter().map(DivisorClass).collect())
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| input(path, &format!("missing field `{key}`")))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| input(path, "expected an object"))
}

pub fn parse_instance(text: &str, default_id: &str) -> Result<Instance> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| Error::Input(format!("invalid JSON: {e}")))?;
    let obj = as_object(&root, "$")?;
    let id = match obj.get("id") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(input("$.id", "expected a string")),
        None => default_id.to_string(),
    };
    let surf = as_object(get(obj, "surface", "$")?, "$.surface")?;
    let rank = get(surf, "rank", "$.surface")?
        .as_u64()
        .ok_or_else(|| input("$.surface.rank", "expected a positive integer"))?
        as usize;
    let gram = parse_matrix(get(surf, "gram", "$.surface")?, "$.surface.gram")?;
    let eff_generators = parse_classes(
        get(surf, "eff_generators", "$.surface")?,
        "$.surface.eff_generators",
    )?;
    let negative_curves = parse_classes(
        get(surf, "negative_curves", "$.surface")?,
        "$.surface.negative_curves",
    )?;
    let labels = match surf.get("labels") {
        Some(v) => {
            let arr = v
                .as_array()
                .ok_or_else(|| input("$.surface.labels", "expected an array"))?;
            arr.iter()
                .map(|x| {
                    x.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| input("$.surface.labels", "expected strings"))
                })
                .collect::<Result<Vec<_>>>()?
        }
        None => (1..=rank).map(|i| format!("e{i}")).collect(),
    };
    let surface = SurfaceData {
        rank,
        gram,
        eff_generators,
        negative_curves,
        labels,
    };
    let flag_obj = as_object(get(obj, "flag", "$")?, "$.flag")?;
    let curve_class = DivisorClass(parse_vec(
        get(flag_obj, "curve_class", "$.flag")?,
        "$.flag.curve_class",
    )?);
    let general = match flag_obj.get("general") {
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(input("$.flag.general", "expected a boolean")),
        None => true,
    };
    let flag = FlagData {
        curve_class,
        general,
    };
    let threefold = match obj.get("threefold") {
        None => None,
        Some(v) => {
            let t = as_object(v, "$.threefold")?;
            let trank = get(t, "rank", "$.threefold")?
                .as_u64()
                .ok_or_else(|| input("$.threefold.rank", "expected a positive integer"))?
                as usize;
            let eff = parse_classes(
                get(t, "eff_generators", "$.threefold")?,
                "$.threefold.eff_generators",
            )?;
            let y1_class = DivisorClass(parse_vec(
                get(t, "y1_class", "$.threefold")?,
                "$.threefold.y1_class",
            )?);
            let restriction = parse_matrix(
                get(t, "restriction", "$.threefold")?,
                "$.threefold.restriction",
            )?;
            let triple_products = match t.get("triple_products") {
                None => None,
                Some(v) => {
                    let arr = v.as_array().ok_or_else(|| {
                        input("$.threefold.triple_products", "expected an array")
                    })?;
                    Some(
                        arr.iter()
                            .enumerate()
                            .map(|(i, m)| {
                                parse_matrix(m, &format!("$.threefold.triple_products[{i}]"))
                            })
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
            };
            Some(ThreefoldData {
                rank: trank,
                eff_generators: eff,
                y1_class,
                restriction,
                triple_products,
            })
        }
    };
    Ok(Instance {
        id,
        surface,
        flag,
        threefold,
        golden: obj.get("golden").cloned(),
    })
}

pub fn load_instance(path: &std::path::Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".into());
    parse_instance(&text, &stem)
}

/// Rational to JSON: an integer when integral, the string "p/q" otherwise.
pub fn rat_to_value(r: &Rat) -> Value {
    if r.denom().is_one() {
        if let Ok(i) = i64::try_from(r.numer().clone()) {
            return json!(i);
        }
    }
    Value::String(rat_string(r))
}

/// Canonical string form "p" or "p/q".
pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn vec_to_value(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_to_value).collect())
}

pub fn classes_to_value(cs: &[DivisorClass]) -> Value {
    Value::Array(cs.iter().map(|c| vec_to_value(&c.0)).collect())
}

pub fn matrix_to_value(m: &[Vec<Rat>]) -> Value {
    Value::Array(m.iter().map(|r| vec_to_value(r)).collect())
}

/// Serialize an instance back into the file format, field for field.
pub fn instance_to_json(inst: &Instance) -> Value {
    let mut root = Map::new();
    root.insert("id".into(), json!(inst.id));
    let mut surf = Map::new();
    surf.insert("rank".into(), json!(inst.surface.rank));
    surf.insert("gram".into(), matrix_to_value(&inst.surface.gram));
    surf.insert(
        "eff_generators".into(),
        classes_to_value(&inst.surface.eff_generators),
    );
    surf.insert(
        "negative_curves".into(),
        classes_to_value(&inst.surface.negative_curves),
    );
    surf.insert("labels".into(), json!(inst.surface.labels));
    root.insert("surface".into(), Value::Object(surf));
    let mut flag = Map::new();
    flag.insert(
        "curve_class".into(),
        vec_to_value(&inst.flag.curve_class.0),
    );
    flag.insert("general".into(), json!(inst.flag.general));
    root.insert("flag".into(), Value::Object(flag));
    if let Some(t) = &inst.threefold {
        let mut tf = Map::new();
        tf.insert("rank".into(), json!(t.rank));
        tf.insert(
            "eff_generators".into(),
            classes_to_value(&t.eff_generators),
        );
        tf.insert("y1_class".into(), vec_to_value(&t.y1_class.0));
        tf.insert("restriction".into(), matrix_to_value(&t.restriction));
        if let Some(tp) = &t.triple_products {
            tf.insert(
                "triple_products".into(),
                Value::Array(tp.iter().map(|m| matrix_to_value(m)).collect()),
            );
        }
        root.insert("threefold".into(), Value::Object(tf));
    }
    if let Some(g) = &inst.golden {
        root.insert("golden".into(), g.clone());
    }
    Value::Object(root)
}
