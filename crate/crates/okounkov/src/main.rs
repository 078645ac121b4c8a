//! Command-line front end. Every command reads one instance file, runs
//! the corresponding pipeline and prints a deterministic JSON report to
//! stdout (or `--out`). Timing goes to stderr so that reports for a
//! fixed instance and seed are byte-identical. Exit codes: 0 success,
//! 1 verification failures (witnesses in the report), 2 input or
//! validation errors.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use okounkov::body::{okounkov_polygon, OkounkovPolygon};
use okounkov::error::Error;
use okounkov::instance::{
    classes_to_value, load_instance, matrix_to_value, parse_rat_str, rat_to_value, vec_to_value,
    Instance,
};
use okounkov::linalg::Rat;
use okounkov::lp::cone_membership;
use okounkov::minkowski::{
    compute_minkowski_base, fiber, global_generators_from_base, global_generators_surface,
    minkowski_chambers, polygon_indecomposable, verify_minkowski, GlobalBodyCone, MinkowskiBase,
    MinkowskiFan,
};
use okounkov::polygon::{polygon_area, Polygon2};
use okounkov::surface::{DivisorClass, SurfaceData};
use okounkov::threefold::{fiber3, lift_cone, restricted_cone_q, LiftedCone};
use okounkov::zariski::{enumerate_chambers, zariski_decompose};

#[derive(Parser)]
#[command(name = "okounkov", about = "Exact Okounkov body toolkit for surfaces and lifted 3-folds", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// instance file (JSON)
    instance: PathBuf,
    /// write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// write an SVG figure (polygon or rank-2 fan commands)
    #[arg(long)]
    svg: Option<PathBuf>,
    /// seed for all sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// worker threads for sample verification
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Clone)]
struct DivisorArg {
    /// divisor class: comma-separated rationals in the instance basis
    #[arg(long)]
    divisor: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check all surface, flag and threefold invariants
    Validate(Common),
    /// Zariski decomposition of a class
    Zariski {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        divisor: DivisorArg,
    },
    /// Enumerate BKS chambers with supports and generators
    Chambers(Common),
    /// Okounkov polygon of a class
    Body {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        divisor: DivisorArg,
    },
    /// Compute the Minkowski base
    Mbase(Common),
    /// Minkowski chamber decomposition of the effective cone
    Mchambers(Common),
    /// Generator sets for the global Okounkov body cone
    Global(Common),
    /// Fiber of the global body cone over a class, with certificates
    Fiber {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        divisor: DivisorArg,
    },
    /// Sampled verification of the Minkowski base property
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Lift the surface global cone to the threefold cone C(S)
    Lift3(Common),
    /// Fiber of the lifted threefold cone over a class of X
    Fiber3 {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        divisor: DivisorArg,
    },
    /// All pipelines on one instance, summarized
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

struct Outcome {
    outputs: Value,
    exit: i32,
    figure: Option<String>,
}

fn ok(outputs: Value) -> Result<Outcome, Error> {
    Ok(Outcome {
        outputs,
        exit: 0,
        figure: None,
    })
}

fn parse_divisor(s: &str, rank: usize) -> Result<DivisorClass, Error> {
    let coords: Option<Vec<Rat>> = s.split(',').map(|t| parse_rat_str(t)).collect();
    let coords =
        coords.ok_or_else(|| Error::Input(format!("malformed divisor {s:?}")))?;
    if coords.len() != rank {
        return Err(Error::Input(format!(
            "divisor has {} coordinates, instance rank is {rank}",
            coords.len()
        )));
    }
    Ok(DivisorClass(coords))
}

fn class_value(surface: &SurfaceData, c: &DivisorClass) -> Value {
    json!({
        "coords": vec_to_value(&c.0),
        "label": surface.class_label(c),
    })
}

fn points_value(pts: &[(Rat, Rat)]) -> Value {
    Value::Array(
        pts.iter()
            .map(|(x, y)| Value::Array(vec![rat_to_value(x), rat_to_value(y)]))
            .collect(),
    )
}

fn polygon_value(p: &Polygon2) -> Value {
    points_value(p.vertices())
}

fn okounkov_value(surface: &SurfaceData, p: &OkounkovPolygon) -> Value {
    json!({
        "divisor": class_value(surface, &p.divisor),
        "mu": rat_to_value(&p.mu),
        "breakpoints": points_value(&p.breakpoints),
        "vertices": polygon_value(&p.polygon),
        "area": rat_to_value(&polygon_area(&p.polygon)),
        "degenerate": p.is_degenerate(),
    })
}

fn generators_value(surface: &SurfaceData, g: &GlobalBodyCone) -> Value {
    Value::Array(
        g.generators
            .iter()
            .map(|gen| {
                json!({
                    "valuation": vec_to_value(&gen.valuation),
                    "class": class_value(surface, &gen.class),
                    "vector": vec_to_value(&gen.vector()),
                    "extremal": gen.extremal,
                    "provenance": gen.provenance,
                })
            })
            .collect(),
    )
}

fn base_value(surface: &SurfaceData, base: &MinkowskiBase) -> Value {
    json!({
        "movable": base.movable.iter().map(|(c, p)| json!({
            "class": class_value(surface, c),
            "vertices": polygon_value(&p.polygon),
            "mu": rat_to_value(&p.mu),
            "indecomposable": polygon_indecomposable(&p.polygon),
        })).collect::<Vec<_>>(),
        "fixed": base.fixed.iter().map(|c| class_value(surface, c)).collect::<Vec<_>>(),
    })
}

fn fan_value(surface: &SurfaceData, fan: &MinkowskiFan) -> Value {
    json!({
        "rays": fan.rays.iter().map(|c| class_value(surface, c)).collect::<Vec<_>>(),
        "chambers": fan.chambers.iter().map(|c| {
            Value::Array(c.rays.iter().map(|r| class_value(surface, &DivisorClass(r.clone()))).collect())
        }).collect::<Vec<_>>(),
    })
}

/// Exact fan invariants: simplicial chambers, no base element interior
/// to a chamber, pairwise disjoint interiors, rays covered.
fn fan_checks(surface: &SurfaceData, fan: &MinkowskiFan) -> (Value, bool) {
    let simplicial = fan.chambers.iter().all(|c| c.rays.len() == surface.rank);
    let no_interior_element = fan.rays.iter().all(|b| {
        fan.chambers.iter().all(|c| !c.contains_strictly(&b.0))
    });
    let mut disjoint = true;
    for (i, c) in fan.chambers.iter().enumerate() {
        let p = c.interior_point();
        for (j, other) in fan.chambers.iter().enumerate() {
            if i != j && other.contains_strictly(&p) {
                disjoint = false;
            }
        }
    }
    let covers_eff = surface
        .eff_generators
        .iter()
        .all(|g| fan.chambers.iter().any(|c| c.contains(&g.0)));
    let all = simplicial && no_interior_element && disjoint && covers_eff;
    (
        json!({
            "simplicial": simplicial,
            "no_interior_base_element": no_interior_element,
            "disjoint_interiors": disjoint,
            "covers_effective_generators": covers_eff,
        }),
        all,
    )
}

fn cones_agree(a: &GlobalBodyCone, b: &GlobalBodyCone) -> Result<bool, Error> {
    let va = a.vectors();
    let vb = b.vectors();
    for v in &va {
        if cone_membership(&vb, v)?.is_none() {
            return Ok(false);
        }
    }
    for v in &vb {
        if cone_membership(&va, v)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_threefold(
    inst: &Instance,
) -> Result<&okounkov::threefold::ThreefoldData, Error> {
    inst.threefold
        .as_ref()
        .ok_or_else(|| Error::Input("instance has no threefold block".into()))
}

fn lifted_value(data: &okounkov::threefold::ThreefoldData, l: &LiftedCone) -> Value {
    json!({
        "y1_class": vec_to_value(&l.y1.0),
        "rays": matrix_to_value(&l.rays),
        "certificates": matrix_to_value(&l.certificates),
        "generators": matrix_to_value(&l.generators),
        "q_images": matrix_to_value(&l.rays.iter().map(|w| {
            let mut img = vec![w[0].clone(), w[1].clone()];
            img.extend(data.restrict(&DivisorClass(w[2..].to_vec())).0);
            img
        }).collect::<Vec<_>>()),
    })
}

fn validate_instance(inst: &Instance) -> Vec<okounkov::surface::Violation> {
    let mut v = okounkov::surface::validate(&inst.surface, &inst.flag);
    if let Some(t) = &inst.threefold {
        v.extend(t.validate(&inst.surface));
    }
    v
}

fn run(cmd: &Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Validate(common) => {
            let inst = load_instance(&common.instance)?;
            let violations = validate_instance(&inst);
            Ok(Outcome {
                exit: if violations.is_empty() { 0 } else { 2 },
                outputs: json!({
                    "violations": violations.iter().map(|v| json!({
                        "invariant": v.invariant,
                        "witness": v.witness,
                    })).collect::<Vec<_>>(),
                }),
                figure: None,
            })
        }
        Command::Zariski { common, divisor } => {
            let inst = load_instance(&common.instance)?;
            let s = &inst.surface;
            let d = parse_divisor(&divisor.divisor, s.rank)?;
            let z = zariski_decompose(s, &d)?;
            ok(json!({
                "divisor": class_value(s, &d),
                "positive": class_value(s, &z.positive),
                "negative": class_value(s, &z.negative(s)),
                "support": z.support.iter().map(|&i| s.class_label(&s.negative_curves[i])).collect::<Vec<_>>(),
                "coeffs": vec_to_value(&z.coeffs),
                "volume": rat_to_value(&z.volume(s)),
            }))
        }
        Command::Chambers(common) => {
            let inst = load_instance(&common.instance)?;
            let s = &inst.surface;
            let chambers = enumerate_chambers(s)?;
            let figure = if s.rank == 2 {
                Some(okounkov::svg::fan_svg(
                    &chambers.iter().map(|c| c.cone.clone()).collect::<Vec<_>>(),
                ))
            } else {
                None
            };
            Ok(Outcome {
                exit: 0,
                outputs: json!({
                    "count": chambers.len(),
                    "chambers": chambers.iter().map(|c| json!({
                        "id": c.id,
                        "support": c.support.iter().map(|&i| s.class_label(&s.negative_curves[i])).collect::<Vec<_>>(),
                        "generators": c.generators.iter().map(|g| class_value(s, g)).collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                }),
                figure,
            })
        }
        Command::Body { common, divisor } => {
            let inst = load_instance(&common.instance)?;
            let s = &inst.surface;
            let d = parse_divisor(&divisor.divisor, s.rank)?;
            let p = okounkov_polygon(s, &inst.flag, &d)?;
            Ok(Outcome {
                exit: 0,
                figure: Some(okounkov::svg::polygon_svg(&p.polygon)),
                outputs: okounkov_value(s, &p),
            })
        }
        Command::Mbase(common) => {
            let inst = load_instance(&common.instance)?;
            let base = compute_minkowski_base(&inst.surface, &inst.flag)?;
            ok(base_value(&inst.surface, &base))
        }
        Command::Mchambers(common) => {
            let inst = load_instance(&common.instance)?;
            let s = &inst.surface;
            let base = compute_minkowski_base(s, &inst.flag)?;
            let fan = minkowski_chambers(&s.eff_cone()?, &base.classes())?;
            let (checks, all_pass) = fan_checks(s, &fan);
            let figure = if s.rank == 2 {
                Some(okounkov::svg::fan_svg(&fan.chambers))
            } else {
                None
            };
            let mut outputs = fan_value(s, &fan);
            outputs
                .as_object_mut()
                .expect("fan object")
                .insert("checks".into(), checks);
            Ok(Outcome {
                exit: if all_pass { 0 } else { 1 },
                outputs,
                figure,
            })
        }
        Command::Global(common) => {
            let inst = load_instance(&common.instance)?;
            let s = &inst.surface;
            let gs = global_generators_surface(s, &inst.flag)?;
            let base = compute_minkowski_base(s, &inst.flag)?;
            let gb = global_generators_from_base(&base)?;
            let agree = cones_agree(&gs, &gb)?;
            Ok(Outcome {
                exit: if agree { 0 } else { 1 },
                outputs: json!({
                    "surface_generators": generators_value(s, &gs),
                    "base_generators": generators_value(s, &gb),
                    "cones_agree": agree,
                }),
                figure: None,
            })
        }
        Command::Fiber { common, divisor } => {
            let inst = load_instance(&common.instance)?;
            let s = &inst.surface;
            let d = parse_divisor(&divisor.divisor, s.rank)?;
            let gs = global_generators_surface(s, &inst.flag)?;
            let fib = fiber(&gs, &d)?;
            let body = okounkov_polygon(s, &inst.flag, &d)?;
            let matches = fib == body.polygon;
            let vectors = gs.vectors();
            let mut certificates = Vec::new();
            for (x, y) in fib.vertices() {
                let mut point = vec![x.clone(), y.clone()];
                point.extend(d.0.iter().cloned());
                let cert = cone_membership(&vectors, &point)?.ok_or_else(|| {
                    Error::Internal("fiber vertex escaped the generated cone".into())
                })?;
                certificates.push(json!({
                    "vertex": Value::Array(vec![rat_to_value(x), rat_to_value(y)]),
                    "coefficients": vec_to_value(&cert),
                }));
            }
            Ok(Outcome {
                exit: if matches { 0 } else { 1 },
                figure: Some(okounkov::svg::polygon_svg(&fib)),
                outputs: json!({
                    "divisor": class_value(s, &d),
                    "vertices": polygon_value(&fib),
                    "matches_okounkov_polygon": matches,
                    "certificates": certificates,
                }),
            })
        }
        Command::Verify { common, samples } => {
            let inst = load_instance(&common.instance)?;
            let s = &inst.surface;
            let base = compute_minkowski_base(s, &inst.flag)?;
            let report = verify_minkowski(s, &inst.flag, &base, *samples, common.seed, common.jobs)?;
            Ok(Outcome {
                exit: if report.failures.is_empty() { 0 } else { 1 },
                outputs: json!({
                    "samples": report.samples,
                    "seed": common.seed,
                    "failures": report.failures.iter().map(|f| json!({
                        "divisor": class_value(s, &f.divisor),
                        "reason": f.reason,
                    })).collect::<Vec<_>>(),
                }),
                figure: None,
            })
        }
        Command::Lift3(common) => {
            let inst = load_instance(&common.instance)?;
            let data = require_threefold(&inst)?;
            let s = &inst.surface;
            let q = restricted_cone_q(data, s)?;
            let gs = global_generators_surface(s, &inst.flag)?;
            let lifted = lift_cone(data, s, &gs)?;
            ok(json!({
                "q_rays": matrix_to_value(&q.rays),
                "lifted": lifted_value(data, &lifted),
            }))
        }
        Command::Fiber3 { common, divisor } => {
            let inst = load_instance(&common.instance)?;
            let data = require_threefold(&inst)?;
            let s = &inst.surface;
            let d = parse_divisor(&divisor.divisor, data.rank)?;
            let gs = global_generators_surface(s, &inst.flag)?;
            let lifted = lift_cone(data, s, &gs)?;
            let f = fiber3(&lifted, &d)?;
            let volume = f.volume();
            let mut outputs = Map::new();
            outputs.insert("divisor".into(), vec_to_value(&d.0));
            outputs.insert("vertices".into(), matrix_to_value(&f.vertices));
            outputs.insert("volume".into(), rat_to_value(&volume));
            if let Some(v3) = data.volume3(&d) {
                let expected = &v3 / okounkov::linalg::qi(6);
                outputs.insert("volume3".into(), rat_to_value(&v3));
                outputs.insert("matches_volume3".into(), json!(volume == expected));
            }
            ok(Value::Object(outputs))
        }
        Command::Report { common, samples } => {
            let inst = load_instance(&common.instance)?;
            let s = &inst.surface;
            let violations = validate_instance(&inst);
            if !violations.is_empty() {
                return Ok(Outcome {
                    exit: 2,
                    outputs: json!({
                        "violations": violations.iter().map(|v| json!({
                            "invariant": v.invariant,
                            "witness": v.witness,
                        })).collect::<Vec<_>>(),
                    }),
                    figure: None,
                });
            }
            let chambers = enumerate_chambers(s)?;
            let base = compute_minkowski_base(s, &inst.flag)?;
            let fan = minkowski_chambers(&s.eff_cone()?, &base.classes())?;
            let (checks, fan_ok) = fan_checks(s, &fan);
            let gs = global_generators_surface(s, &inst.flag)?;
            let gb = global_generators_from_base(&base)?;
            let agree = cones_agree(&gs, &gb)?;
            let verify =
                verify_minkowski(s, &inst.flag, &base, *samples, common.seed, common.jobs)?;
            let mut outputs = Map::new();
            outputs.insert("violations".into(), json!([]));
            outputs.insert("chamber_count".into(), json!(chambers.len()));
            outputs.insert(
                "base".into(),
                json!({
                    "movable": base.movable.len(),
                    "fixed": base.fixed.len(),
                    "movable_classes": classes_to_value(
                        &base.movable.iter().map(|(c, _)| c.clone()).collect::<Vec<_>>()
                    ),
                }),
            );
            outputs.insert("fan_checks".into(), checks);
            outputs.insert(
                "generators".into(),
                json!({
                    "surface": gs.generators.len(),
                    "base": gb.generators.len(),
                    "cones_agree": agree,
                }),
            );
            outputs.insert(
                "verify".into(),
                json!({
                    "samples": verify.samples,
                    "failures": verify.failures.len(),
                }),
            );
            if let Some(data) = &inst.threefold {
                let lifted = lift_cone(data, s, &gs)?;
                let f = fiber3(&lifted, &data.y1_class)?;
                outputs.insert(
                    "threefold".into(),
                    json!({
                        "lifted_rays": lifted.rays.len(),
                        "fiber_over_y1_vertices": f.vertices.len(),
                    }),
                );
            }
            let failed = !verify.failures.is_empty() || !agree || !fan_ok;
            Ok(Outcome {
                exit: if failed { 1 } else { 0 },
                outputs: Value::Object(outputs),
                figure: None,
            })
        }
    }
}

fn common_of(cmd: &Command) -> &Common {
    match cmd {
        Command::Validate(c)
        | Command::Chambers(c)
        | Command::Mbase(c)
        | Command::Mchambers(c)
        | Command::Global(c)
        | Command::Lift3(c) => c,
        Command::Zariski { common, .. }
        | Command::Body { common, .. }
        | Command::Fiber { common, .. }
        | Command::Verify { common, .. }
        | Command::Fiber3 { common, .. }
        | Command::Report { common, .. } => common,
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Validate(_) => "validate",
        Command::Zariski { .. } => "zariski",
        Command::Chambers(_) => "chambers",
        Command::Body { .. } => "body",
        Command::Mbase(_) => "mbase",
        Command::Mchambers(_) => "mchambers",
        Command::Global(_) => "global",
        Command::Fiber { .. } => "fiber",
        Command::Verify { .. } => "verify",
        Command::Lift3(_) => "lift3",
        Command::Fiber3 { .. } => "fiber3",
        Command::Report { .. } => "report",
    }
}

fn main() {
    let cli = Cli::parse();
    let common = common_of(&cli.command).clone();
    let name = command_name(&cli.command);
    let instance_id = common
        .instance
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let start = Instant::now();
    let outcome = run(&cli.command);
    let elapsed = start.elapsed();
    let (report, exit) = match outcome {
        Ok(o) => {
            if let (Some(path), Some(fig)) = (&common.svg, &o.figure) {
                if let Err(e) = std::fs::write(path, fig) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    std::process::exit(2);
                }
            } else if common.svg.is_some() {
                eprintln!("error: no figure for this command");
                std::process::exit(2);
            }
            (
                json!({
                    "command": name,
                    "instance": instance_id,
                    "seed": common.seed,
                    "outputs": o.outputs,
                }),
                o.exit,
            )
        }
        Err(e) => {
            let exit = match e {
                Error::Input(_) | Error::Dimension(_) | Error::Domain(_) => 2,
                Error::Internal(_) => 1,
            };
            (
                json!({
                    "command": name,
                    "instance": instance_id,
                    "seed": common.seed,
                    "error": e.to_string(),
                }),
                exit,
            )
        }
    };
    let text = serde_json::to_string_pretty(&report).expect("serializable report");
    match &common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                eprintln!("error: cannot write {}: {e}", path.display());
                std::process::exit(2);
            }
        }
        None => println!("{text}"),
    }
    eprintln!("# {name} {instance_id}: {} ms", elapsed.as_millis());
    std::process::exit(exit);
}
