use std::path::Path;

use alevol::ehnum::{
    cmc_record, default_directions, geometric_grid, perturbed_h_decay, renvol_estimate, ros_check,
    u_expansion_b, EhConfig, EhError, AREA_S3_Z2,
};
use alevol::exactla::independent;
use alevol::gaugeclassify::{
    coords_to_tensor, reduced_kron_g, Classifier, GaugeError, Part, ZetaGram, KERNEL_DIM,
};
use alevol::mckay::{gamma_spec, volume_report, AdeLabel, McKayError, PeriodPoint};
use alevol::ratpoly::{parse_rational, Rational};
use alevol::tensorcalc::TensorField;
use serde_json::{json, Value};

use crate::suites;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

/// Exit code plus the document written to stdout.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub body: Body,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Json(Value),
    Csv(String),
}

impl Outcome {
    fn json(code: i32, v: Value) -> Self {
        Self {
            code,
            body: Body::Json(v),
        }
    }

    pub fn error(code: i32, kind: &str, message: impl ToString) -> Self {
        Self::json(code, json!({"error": kind, "message": message.to_string()}))
    }

    pub fn render(&self) -> String {
        match &self.body {
            Body::Json(v) => serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n",
            Body::Csv(s) => s.clone(),
        }
    }
}

pub fn kernel(basis: bool, split: bool) -> Outcome {
    let c = Classifier::shared();
    let nullity = c.kernel().dim();
    let mut out = json!({
        "rows": c.h().rows(),
        "cols": c.h().cols(),
        "nullity": nullity,
        "rank": c.rank(),
    });
    let mut ok = nullity == KERNEL_DIM && c.rank() + nullity == c.h().cols();
    if basis {
        let vecs = c.kernel().vectors();
        let tensors: Vec<TensorField> = vecs.iter().map(|v| coords_to_tensor(v)).collect();
        let coords: Vec<Vec<String>> = vecs
            .iter()
            .map(|v| v.iter().map(alevol::ratpoly::rational_to_string).collect())
            .collect();
        out["basis"] = serde_json::to_value(tensors).expect("tensor JSON");
        out["coordinates"] = json!(coords);
    }
    if split {
        let mut dims = serde_json::Map::new();
        for p in Part::ALL {
            dims.insert(p.name().into(), json!(c.part(p).dim()));
        }
        let parts: Vec<_> = Part::ALL.iter().map(|&p| c.part(p)).collect();
        let indep = independent(&parts).unwrap_or(false);
        let spans = c.structured_span().equals(c.kernel()).unwrap_or(false);
        ok &= indep && spans;
        out["split"] = Value::Object(dims);
        out["independent"] = json!(indep);
        out["sum_is_kernel"] = json!(spans);
    }
    Outcome::json(if ok { EXIT_OK } else { EXIT_FAIL }, out)
}

fn read_tensor(path: &Path) -> Result<TensorField, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::error(EXIT_INPUT, "io", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Outcome::error(EXIT_INPUT, "parse", e))
}

fn gauge_failure(e: GaugeError) -> Outcome {
    match e {
        GaugeError::Tensor(t) => Outcome::error(EXIT_INPUT, "shape", t),
        GaugeError::NotInKernel(m) => Outcome::error(EXIT_PRECONDITION, "not_in_kernel", m),
        other => Outcome::error(EXIT_PRECONDITION, "precondition", other),
    }
}

pub fn decompose(path: &Path) -> Outcome {
    let h = match read_tensor(path) {
        Ok(h) => h,
        Err(o) => return o,
    };
    if !h.is_sym2() {
        return Outcome::error(EXIT_INPUT, "shape", "expected a symmetric 2-tensor");
    }
    let c = Classifier::shared();
    let d = match c.decompose(&h) {
        Ok(d) => d,
        Err(e) => return gauge_failure(e),
    };
    let ch = match c.characterize(&h) {
        Ok(ch) => ch,
        Err(e) => return gauge_failure(e),
    };
    let mut v = serde_json::to_value(d.report()).expect("report JSON");
    v["characterization"] = serde_json::to_value(ch).expect("flags JSON");
    Outcome::json(EXIT_OK, v)
}

pub fn parse_rationals(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',')
        .map(|t| parse_rational(t.trim()).map_err(|e| format!("{t:?}: {e}")))
        .collect()
}

pub enum Zeta<'a> {
    Gram(&'a str),
    Coords(&'a str),
}

pub fn volume(gamma: &str, zeta: Zeta) -> Outcome {
    let label: AdeLabel = match gamma.parse() {
        Ok(l) => l,
        Err(e) => return Outcome::error(EXIT_INPUT, "label", e),
    };
    let spec = gamma_spec(label);
    let point = match zeta {
        Zeta::Gram(s) => match parse_rationals(s) {
            Ok(v) if v.len() == 6 => {
                PeriodPoint::Gram(ZetaGram::from_upper(std::array::from_fn(|i| v[i].clone())))
            }
            Ok(v) => {
                return Outcome::error(
                    EXIT_INPUT,
                    "arity",
                    format!("expected 6 Gram entries, got {}", v.len()),
                )
            }
            Err(e) => return Outcome::error(EXIT_INPUT, "parse", e),
        },
        Zeta::Coords(s) => match parse_rationals(s) {
            Ok(v) if v.len() == 3 * spec.rank => {
                let n = spec.rank;
                PeriodPoint::Coords(std::array::from_fn(|a| v[a * n..(a + 1) * n].to_vec()))
            }
            Ok(v) => {
                return Outcome::error(
                    EXIT_INPUT,
                    "arity",
                    format!("expected 3x{} coordinates, got {}", spec.rank, v.len()),
                )
            }
            Err(e) => return Outcome::error(EXIT_INPUT, "parse", e),
        },
    };
    match point.gram(&spec) {
        Ok(g) if !g.is_psd() => {
            return Outcome::error(
                EXIT_PRECONDITION,
                "not_psd",
                "period Gram matrix is not positive semidefinite",
            )
        }
        Err(e) => return mckay_failure(e),
        _ => {}
    }
    match volume_report(&spec, &point) {
        Ok(r) => Outcome::json(EXIT_OK, serde_json::to_value(r).expect("report JSON")),
        Err(e) => mckay_failure(e),
    }
}

fn mckay_failure(e: McKayError) -> Outcome {
    match e {
        McKayError::RadiusTooSmall { .. } => Outcome::error(EXIT_PRECONDITION, "precondition", e),
        _ => Outcome::error(EXIT_INPUT, "input", e),
    }
}

fn eh_failure(e: EhError) -> Outcome {
    match e {
        EhError::BadParameter(_) | EhError::GridTooSmall(_) | EhError::NotUnit => {
            Outcome::error(EXIT_INPUT, "input", e)
        }
        EhError::Gauge(g) => gauge_failure(g),
        other => Outcome::error(EXIT_PRECONDITION, "precondition", other),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EhCheck {
    Renvol,
    B,
    Ros,
    Decay,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

pub struct EhArgs<'a> {
    pub a: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    pub points: usize,
    pub check: Option<EhCheck>,
    pub h0: Option<&'a Path>,
    pub amplitude: &'a str,
    pub format: Format,
}

pub fn eh(args: &EhArgs) -> Outcome {
    match eh_inner(args) {
        Ok(o) => o,
        Err(o) => o,
    }
}

fn eh_inner(args: &EhArgs) -> Result<Outcome, Outcome> {
    let cfg = EhConfig::new(args.a).map_err(eh_failure)?;
    let grid = geometric_grid(args.rho_min, args.rho_max, args.points).map_err(eh_failure)?;
    let params = json!({"a": args.a, "rho_min": args.rho_min, "rho_max": args.rho_max, "points": args.points});
    let Some(check) = args.check else {
        let recs: Vec<_> = grid
            .iter()
            .map(|&r| cmc_record(&cfg, r))
            .collect::<Result<_, _>>()
            .map_err(eh_failure)?;
        return Ok(match args.format {
            Format::Json => Outcome::json(EXIT_OK, json!({"params": params, "profile": recs})),
            Format::Csv => {
                let mut s = String::from("rho,R,vol_g,vol_flat,V_rho\n");
                for r in &recs {
                    s += &format!("{},{},{},{},{}\n", r.rho, r.r, r.vol_g, r.vol_flat, r.v_rho);
                }
                Outcome {
                    code: EXIT_OK,
                    body: Body::Csv(s),
                }
            }
        });
    };
    let (ok, result) = match check {
        EhCheck::Renvol => {
            let e = renvol_estimate(&cfg, &grid).map_err(eh_failure)?;
            let exact = cfg.exact_renormalized_volume();
            let rel = if exact == 0.0 {
                e.value.abs()
            } else {
                ((e.value - exact) / exact).abs()
            };
            let ok = rel <= 1e-6 && e.rel_residual < 1e-8;
            (ok, json!({"estimate": e, "exact": exact, "rel_error": rel}))
        }
        EhCheck::B => {
            let b = u_expansion_b(&cfg, &grid).map_err(eh_failure)?;
            let v = renvol_estimate(&cfg, &grid).map_err(eh_failure)?.value;
            let target = -4.0 * v;
            let rel = if target == 0.0 {
                b.b_times_area.abs()
            } else {
                ((b.b_times_area - target) / target).abs()
            };
            (
                rel <= 1e-6,
                json!({"fit": b, "area": AREA_S3_Z2, "minus_four_renvol": target, "rel_error": rel}),
            )
        }
        EhCheck::Ros => {
            let rs: Vec<_> = grid
                .iter()
                .map(|&r| ros_check(&cfg, r))
                .collect::<Result<_, _>>()
                .map_err(eh_failure)?;
            (rs.iter().all(|r| r.ok), json!({"ros": rs}))
        }
        EhCheck::Decay => {
            let h = match args.h0 {
                Some(p) => read_tensor(p)?,
                None => reduced_kron_g(&ZetaGram::unit_sym(0, 1)),
            };
            let amp = parse_rational(args.amplitude)
                .map_err(|e| Outcome::error(EXIT_INPUT, "parse", e))?;
            let d =
                perturbed_h_decay(&h, &grid, &default_directions(), &amp).map_err(eh_failure)?;
            let exponent = if d.exponent.is_finite() {
                json!(d.exponent)
            } else {
                json!("inf")
            };
            (
                true,
                json!({"exponent": exponent, "rho": d.rho, "max_deviation": d.max_deviation}),
            )
        }
    };
    let name = match check {
        EhCheck::Renvol => "renvol",
        EhCheck::B => "b",
        EhCheck::Ros => "ros",
        EhCheck::Decay => "decay",
    };
    let body = json!({"params": params, "check": name, "pass": ok, "result": result});
    Ok(Outcome::json(if ok { EXIT_OK } else { EXIT_FAIL }, body))
}

pub fn verify(suite: &str) -> Outcome {
    match suites::run(suite) {
        Some(r) => Outcome::json(
            if r.passed() { EXIT_OK } else { EXIT_FAIL },
            serde_json::to_value(&r).expect("report JSON"),
        ),
        None => Outcome::error(EXIT_INPUT, "suite", format!("unknown suite {suite:?}")),
    }
}
