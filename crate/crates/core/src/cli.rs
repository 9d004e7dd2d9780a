//! JSON request/response front end: one request document in, one response out.
//!
//! Request: `{"command": "...", "payload": {...}}`. Response:
//! `{"status": "ok"|"error", "result": ..., "diagnostics": [...]}`. Exit code
//! 0 on success, 1 on a domain error, 2 on a schema error (with a JSON
//! pointer to the offending field).

use std::sync::Arc;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::diffmod::{
    h_matrix, isomonodromy_check, order_one_verdict, pv_example_system, CompatPair, DiffSystem, LabeledPoint,
    OrderOneData, VerdictOrderOne,
};
use crate::divisors::{descent_solve, periodicity_solve, DescentOutcome, NoDescentReason, PeriodicFn};
use crate::exact::{CurveParams, EllFn, EllFnRepr, Rational, Scalar};
use crate::isogeny::{g_element, pullback};
use crate::laurent::{embed, s_membership, scale_arg, verify_system, weierstrass_series, LaurentSeries, MembershipBounds, WeierstrassKind};
use crate::numeval::{eta_values, eval, invariants_from_periods, NumTol, PeriodPair, C64};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Series,
    Pullback,
    Gq,
    Periodicity,
    Descent,
    #[serde(rename = "verdict-order1")]
    #[value(name = "verdict-order1")]
    VerdictOrder1,
    Isomonodromy,
    VerifyPvExample,
    SMembership,
    Numeval,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandRequest {
    pub command: Command,
    pub payload: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommandResponse {
    pub status: Status,
    pub result: Value,
    pub diagnostics: Vec<String>,
}

/// Values from command-line flags that override payload fields.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Overrides {
    pub order: Option<i64>,
    pub tol: Option<f64>,
    pub cutoff: Option<u32>,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;

enum Failure {
    Schema { pointer: String, message: String },
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn pointer_of(path: &serde_path_to_error::Path, prefix: &str) -> String {
    let mut out = prefix.to_string();
    for seg in path.iter() {
        use serde_path_to_error::Segment;
        let s = match seg {
            Segment::Seq { index } => index.to_string(),
            Segment::Map { key } => key.replace('~', "~0").replace('/', "~1"),
            Segment::Enum { variant } => variant.clone(),
            Segment::Unknown => continue,
        };
        out.push('/');
        out.push_str(&s);
    }
    out
}

fn decode<T: DeserializeOwned>(v: &Value, prefix: &str) -> Result<T, Failure> {
    serde_path_to_error::deserialize(v).map_err(|e| Failure::Schema {
        pointer: pointer_of(e.path(), prefix),
        message: e.inner().to_string(),
    })
}

/// Exact rational written as a string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
struct RatStr(#[serde(with = "crate::exact::scalar::rational_str")] Rational);

fn curve(g2: &Scalar, g3: &Scalar) -> Result<Arc<CurveParams>, Failure> {
    Ok(Arc::new(CurveParams::new(g2.clone(), g3.clone())?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesIn {
    kind: WeierstrassKind,
    g2: Scalar,
    g3: Scalar,
    order: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PullbackIn {
    g2: Scalar,
    g3: Scalar,
    f: EllFnRepr,
    m: u64,
    /// When present, also check `embed(pullback f) = scale_arg(embed f)` to this order.
    #[serde(default)]
    order: Option<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GqIn {
    g2: Scalar,
    g3: Scalar,
    q: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PeriodicityIn {
    f_p: PeriodicFn,
    f_q: PeriodicFn,
    e: Vec<RatStr>,
    p: u64,
    q: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DescentIn {
    alpha: PeriodicFn,
    q: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ADataIn {
    g2: Scalar,
    g3: Scalar,
    a: EllFnRepr,
    #[serde(default)]
    points: Vec<LabeledPoint>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VerdictIn {
    alpha: PeriodicFn,
    q: u64,
    #[serde(default)]
    a: Option<ADataIn>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IsoIn {
    phi: DiffSystem,
    psi: DiffSystem,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PvIn {
    g2: Scalar,
    g3: Scalar,
    q: u64,
    p: u64,
    order: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SMemIn {
    g2: Scalar,
    g3: Scalar,
    f: LaurentSeries,
    bounds: MembershipBounds,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NumIn {
    w1: C64,
    w2: C64,
    #[serde(default)]
    kind: Option<WeierstrassKind>,
    #[serde(default)]
    points: Vec<C64>,
    #[serde(default)]
    tol: Option<f64>,
    #[serde(default)]
    cutoff: Option<u32>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("response values serialize")
}

fn verdict_tag(v: &VerdictOrderOne) -> &'static str {
    match v {
        VerdictOrderOne::Descends { .. } => "descends",
        VerdictOrderOne::PsiTranscendental { .. } => "psi_transcendental",
        VerdictOrderOne::Inconclusive { .. } => "inconclusive",
    }
}

fn run_command(cmd: Command, p: &Value, ov: &Overrides, diag: &mut Vec<String>) -> Result<Value, Failure> {
    const P: &str = "/payload";
    Ok(match cmd {
        Command::Series => {
            let mut r: SeriesIn = decode(p, P)?;
            r.order = ov.order.unwrap_or(r.order);
            let s = weierstrass_series(&CurveParams::new(r.g2, r.g3)?, r.kind, r.order)?;
            json!({ "kind": r.kind, "series": s })
        }
        Command::Pullback => {
            let r: PullbackIn = decode(p, P)?;
            let e = curve(&r.g2, &r.g3)?;
            let f = EllFn::from_repr(r.f, e);
            let g = pullback(&f, r.m)?;
            let mut out = json!({ "m": r.m, "pullback": g.to_repr() });
            if let Some(order) = ov.order.or(r.order) {
                let lhs = embed(&g, order)?;
                let rhs = scale_arg(&embed(&f, order)?, r.m).truncate(order);
                let ok = lhs.truncate(order) == rhs;
                if !ok {
                    diag.push("series check of the pullback failed".into());
                }
                out["series_check"] = json!({ "order": order, "ok": ok });
            }
            out
        }
        Command::Gq => {
            let r: GqIn = decode(p, P)?;
            let g = g_element(&curve(&r.g2, &r.g3)?, r.q)?;
            json!({ "q": r.q, "g_q": g.to_repr() })
        }
        Command::Periodicity => {
            let r: PeriodicityIn = decode(p, P)?;
            let e: Vec<Rational> = r.e.into_iter().map(|x| x.0).collect();
            to_value(&periodicity_solve(&r.f_p, &r.f_q, &e, r.p, r.q)?)
        }
        Command::Descent => {
            let r: DescentIn = decode(p, P)?;
            let out = descent_solve(&r.alpha, r.q)?;
            let (verdict, reason) = match &out {
                DescentOutcome::Descends { .. } => ("descends", Value::Null),
                DescentOutcome::NoDescent(NoDescentReason::Ord0 { .. }) => ("psi_transcendental", json!("ord0")),
                DescentOutcome::NoDescent(NoDescentReason::NonPeriodic { .. }) => {
                    ("psi_transcendental", json!("no_descent_orbit"))
                }
                DescentOutcome::Inconclusive { .. } => ("inconclusive", json!("inconclusive_bounds")),
            };
            json!({ "verdict": verdict, "reason": reason, "outcome": out })
        }
        Command::VerdictOrder1 => {
            let r: VerdictIn = decode(p, P)?;
            let data = match r.a {
                Some(a) => {
                    let e = curve(&a.g2, &a.g3)?;
                    Some(OrderOneData {
                        a: EllFn::from_repr(a.a, e),
                        points: a.points,
                    })
                }
                None => None,
            };
            let v = order_one_verdict(&r.alpha, data.as_ref(), r.q)?;
            let mut out = to_value(&v);
            out["verdict"] = json!(verdict_tag(&v));
            out
        }
        Command::Isomonodromy => {
            let r: IsoIn = decode(p, P)?;
            let pair = CompatPair::new(r.phi, r.psi)?;
            json!({ "compatible": isomonodromy_check(&pair)? })
        }
        Command::VerifyPvExample => {
            let mut r: PvIn = decode(p, P)?;
            r.order = ov.order.unwrap_or(r.order);
            let e = curve(&r.g2, &r.g3)?;
            let (a, u) = pv_example_system(&e, r.q, r.order)?;
            let (b, _) = pv_example_system(&e, r.p, r.order)?;
            let va = verify_system(&a.embed(r.order)?, &u, r.q)?;
            let vb = verify_system(&b.embed(r.order)?, &u, r.p)?;
            let pair = CompatPair::new(a.clone(), b.clone())?;
            let compatible = isomonodromy_check(&pair)?;
            let h = h_matrix(&u, &b, r.p)?;
            json!({
                "phi": { "scale": r.q, "residual_zero": va.ok, "order": va.order },
                "psi": { "scale": r.p, "residual_zero": vb.ok, "order": vb.order },
                "compatible": compatible,
                "h": h,
                "A": a,
                "B": b,
            })
        }
        Command::SMembership => {
            let mut r: SMemIn = decode(p, P)?;
            if let Some(o) = ov.order {
                r.f = r.f.truncate(o);
            }
            let e = curve(&r.g2, &r.g3)?;
            match s_membership(&r.f, &e, r.bounds)? {
                Some(s) => json!({ "member": true, "witness": s }),
                None => json!({ "member": false, "bounds": r.bounds }),
            }
        }
        Command::Numeval => {
            let r: NumIn = decode(p, P)?;
            let tol = NumTol::new(
                ov.tol.or(r.tol).unwrap_or(NumTol::default().abs_tol),
                ov.cutoff.or(r.cutoff).unwrap_or(NumTol::default().lattice_cutoff),
            )?;
            let l = PeriodPair::new(r.w1.into(), r.w2.into())?;
            let (g2, g3) = invariants_from_periods(&l, &tol)?;
            let (e1, e2) = eta_values(&l, &tol)?;
            let defect = e1 * l.w2() - e2 * l.w1() - Complex64::new(0.0, 2.0 * std::f64::consts::PI);
            let mut values = Vec::new();
            if let Some(kind) = r.kind {
                for z in &r.points {
                    let v = eval(kind, (*z).into(), &l, &tol)?;
                    values.push(json!({ "z": z, "value": C64::from(v) }));
                }
            } else if !r.points.is_empty() {
                diag.push("points given without kind; nothing evaluated".into());
            }
            json!({
                "g2": C64::from(g2),
                "g3": C64::from(g3),
                "eta1": C64::from(e1),
                "eta2": C64::from(e2),
                "legendre_defect": defect.norm(),
                "kind": r.kind,
                "values": values,
            })
        }
    })
}

/// Route a decoded request.
pub fn dispatch(req: &CommandRequest, ov: &Overrides) -> (CommandResponse, i32) {
    let mut diagnostics = Vec::new();
    match run_command(req.command, &req.payload, ov, &mut diagnostics) {
        Ok(result) => (
            CommandResponse {
                status: Status::Ok,
                result,
                diagnostics,
            },
            EXIT_OK,
        ),
        Err(f) => failure_response(f, diagnostics),
    }
}

fn failure_response(f: Failure, mut diagnostics: Vec<String>) -> (CommandResponse, i32) {
    match f {
        Failure::Schema { pointer, message } => {
            diagnostics.push(format!("schema error at {pointer}: {message}"));
            (
                CommandResponse {
                    status: Status::Error,
                    result: json!({ "kind": "schema", "pointer": pointer, "message": message }),
                    diagnostics,
                },
                EXIT_SCHEMA,
            )
        }
        Failure::Domain(e) => {
            diagnostics.push(e.to_string());
            (
                CommandResponse {
                    status: Status::Error,
                    result: json!({ "kind": "domain", "message": e.to_string() }),
                    diagnostics,
                },
                EXIT_DOMAIN,
            )
        }
    }
}

/// Parse and run one document. With `command` set, the document is the bare
/// payload; otherwise it is a full request.
pub fn run_document(text: &str, command: Option<Command>, ov: &Overrides) -> (CommandResponse, i32) {
    let doc: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => {
            return failure_response(
                Failure::Schema {
                    pointer: String::new(),
                    message: format!("invalid JSON: {e}"),
                },
                Vec::new(),
            )
        }
    };
    let req = match command {
        Some(c) => CommandRequest {
            command: c,
            payload: doc,
        },
        None => match decode::<CommandRequest>(&doc, "") {
            Ok(r) => r,
            Err(f) => return failure_response(f, Vec::new()),
        },
    };
    dispatch(&req, ov)
}

/// Serialized response text: pretty JSON with a trailing newline.
pub fn render(resp: &CommandResponse) -> String {
    let mut s = serde_json::to_string_pretty(resp).expect("response serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(doc: Value) -> (CommandResponse, i32) {
        run_document(&doc.to_string(), None, &Overrides::default())
    }

    #[test]
    fn series_zeta() {
        let (r, code) = run(json!({"command":"series","payload":{"kind":"zeta","g2":"4","g3":"0","order":10}}));
        assert_eq!(code, 0, "{r:?}");
        let s: LaurentSeries = serde_json::from_value(r.result["series"].clone()).unwrap();
        assert_eq!(s.coeff(-1), Scalar::one());
        assert_eq!(s.coeff(3), Scalar::frac(-1, 15));
    }

    #[test]
    fn descent_ord0() {
        let alpha = json!({"r":"1","reps":[{"point":{"c":"0","gen":null,"v":["0","0"]},"val":"-2"},
                                           {"point":{"c":"0","gen":null,"v":["1/2","0"]},"val":"2"}]});
        let (r, code) = run(json!({"command":"descent","payload":{"alpha":alpha,"q":2}}));
        assert_eq!(code, 0, "{r:?}");
        assert_eq!(r.result["verdict"], "psi_transcendental");
        assert_eq!(r.result["reason"], "ord0");
    }

    #[test]
    fn schema_errors_have_pointers() {
        let (r, code) = run(json!({"command":"series","payload":{"kind":"zeta","g2":"4","g3":"x","order":10}}));
        assert_eq!(code, EXIT_SCHEMA);
        assert_eq!(r.result["pointer"], "/payload/g3");
        let (r, code) = run(json!({"command":"nope","payload":{}}));
        assert_eq!(code, EXIT_SCHEMA);
        assert_eq!(r.result["pointer"], "/command");
        let (_, code) = run_document("{not json", None, &Overrides::default());
        assert_eq!(code, EXIT_SCHEMA);
    }

    #[test]
    fn domain_error_exit_one() {
        let (r, code) = run(json!({"command":"gq","payload":{"g2":"0","g3":"0","q":2}}));
        assert_eq!(code, EXIT_DOMAIN);
        assert_eq!(r.status, Status::Error);
    }

    #[test]
    fn pv_example() {
        let (r, code) = run(json!({"command":"verify-pv-example","payload":{"g2":"4","g3":"0","q":2,"p":3,"order":40}}));
        assert_eq!(code, 0, "{r:?}");
        assert_eq!(r.result["phi"]["residual_zero"], true);
        assert_eq!(r.result["psi"]["residual_zero"], true);
        assert_eq!(r.result["compatible"], true);
        assert_eq!(r.result["h"]["kind"], "constant");
    }
}
