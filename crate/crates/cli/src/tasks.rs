use std::collections::BTreeMap;

use monact_core::algebra::{parse_expr, Polynomial, RationalExpr, Var, VarKind};
use monact_core::complex::{
    complex_homogenize, fourier_weight_project, is_holomorphic, niceness_check, verify_c_action,
    Holomorphy,
};
use monact_core::g2::{
    bullet_polarize, criterion_deg_le3, cubic_obstruction, extendable_to_zero, infinitesimal_pair,
    left_family_from_bullet, quartic_square, right_family, Extendability, WeightMinusOneField,
};
use monact_core::graded::{
    check_morphism, field_weight, homogenize_real, lie_bracket, lie_series_flow,
    standard_weight_field, verify_action, weight_field, ActionFamily, GradedSignature, Monoid,
    MorphismReport, Verdict, VectorField,
};
use monact_core::m2::double_weight_analysis;
use monact_core::supergeo::{body_reduce, check_normal_form, super_homogenize, verify_super_action};
use monact_core::Error;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::model::{Command, Item, Mode, Model, Task};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Violation,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub location: String,
    pub expression: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub task: String,
    pub command: String,
    pub target: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub artifacts: Map<String, Value>,
}

struct Outcome {
    witness: Option<Witness>,
    artifacts: Map<String, Value>,
}

impl Outcome {
    fn ok() -> Self {
        Outcome {
            witness: None,
            artifacts: Map::new(),
        }
    }

    fn art(mut self, k: &str, v: Value) -> Self {
        self.artifacts.insert(k.to_string(), v);
        self
    }

    fn violate(mut self, location: impl ToString, expression: impl ToString, detail: Option<String>) -> Self {
        self.witness.get_or_insert(Witness {
            location: location.to_string(),
            expression: expression.to_string(),
            detail,
        });
        self
    }
}

type TaskResult = std::result::Result<Outcome, String>;

pub fn run_task(model: &Model, task: &Task) -> Record {
    let res = dispatch(model, task);
    let (status, witness, message, artifacts) = match res {
        Ok(o) if o.witness.is_some() => (Status::Violation, o.witness, None, o.artifacts),
        Ok(o) => (Status::Ok, None, None, o.artifacts),
        Err(m) => (Status::Error, None, Some(m), Map::new()),
    };
    Record {
        task: task.name.clone(),
        command: task.command_name.clone(),
        target: task.target.clone(),
        status,
        witness,
        message,
        artifacts,
    }
}

fn e2s(e: Error) -> String {
    e.to_string()
}

fn exprs<'a>(m: impl IntoIterator<Item = (&'a Var, &'a RationalExpr)>) -> Value {
    Value::Object(m.into_iter().map(|(v, e)| (v.to_string(), json!(e.to_string()))).collect())
}

fn field_json(x: &VectorField) -> Value {
    Value::Object(
        x.components()
            .iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(v, p)| (v.to_string(), json!(p.to_string())))
            .collect(),
    )
}

fn weights_json(sig: &GradedSignature) -> Value {
    Value::Object(
        sig.decls()
            .iter()
            .map(|d| (d.var.to_string(), json!(d.weight)))
            .collect(),
    )
}

fn weight_json(w: Option<i64>) -> Value {
    w.map_or(Value::Null, |w| json!(w))
}

fn verdict(o: Outcome, v: Verdict) -> Outcome {
    match v {
        Verdict::Ok => o,
        Verdict::Violation {
            law,
            coordinate,
            residual,
        } => o.violate(coordinate, residual, Some(format!("{law} law"))),
    }
}

fn arg_str<'a>(task: &'a Task, key: &str, default: &'a str) -> std::result::Result<&'a str, String> {
    match task.args.get(key) {
        None => Ok(default),
        Some(Value::String(s)) => Ok(s),
        Some(_) => Err(format!("argument `{key}` must be a string")),
    }
}

fn arg_param(task: &Task, key: &str, default: &str) -> std::result::Result<Var, String> {
    Ok(Var::param(arg_str(task, key, default)?))
}

fn action<'a>(model: &'a Model, task: &Task) -> std::result::Result<&'a ActionFamily, String> {
    match &model.items[&task.target] {
        Item::Action(a) => Ok(a),
        other => Err(format!("`{}` is a {}, not an action", task.target, other.kind())),
    }
}

fn field<'a>(model: &'a Model, task: &Task) -> std::result::Result<&'a VectorField, String> {
    match &model.items[&task.target] {
        Item::Field(x) => Ok(x),
        other => Err(format!("`{}` is a {}, not a field", task.target, other.kind())),
    }
}

fn dispatch(model: &Model, task: &Task) -> TaskResult {
    match task.command {
        Command::VerifyAction => verify(model, task),
        Command::Weights => weights(model, task),
        Command::Homogenize => homogenize(model, task),
        Command::Flow => flow(model, task),
        Command::G2Right => g2_right(model, task),
        Command::G2Classify => g2_classify(model, task),
        Command::G2LeftBullet => g2_left_bullet(model, task),
        Command::M2Analyze => m2_analyze(model, task),
        Command::Nice => nice(model, task),
        Command::Holomorphic => holomorphic(model, task),
        Command::FourierProject => fourier(model, task),
        Command::SuperHomogenize => super_hom(model, task),
        Command::BodyReduce => body(model, task),
        Command::MorphismCheck => morphism(model, task),
    }
}

fn verify(model: &Model, task: &Task) -> TaskResult {
    let h = action(model, task)?;
    let v = match model.mode {
        Mode::Complex if h.monoid == Monoid::Complexes => verify_c_action(h),
        Mode::Super => verify_super_action(h),
        _ => verify_action(h),
    }
    .map_err(e2s)?;
    Ok(verdict(Outcome::ok().art("monoid", json!(h.monoid.to_string())), v))
}

fn weights(model: &Model, task: &Task) -> TaskResult {
    let delta = standard_weight_field(&model.signature);
    match &model.items[&task.target] {
        Item::Field(x) => Ok(Outcome::ok().art("weight", weight_json(field_weight(x, &delta)))),
        Item::Action(h) => match h.monoid {
            Monoid::Reals => {
                let d = weight_field(h).map_err(e2s)?;
                Ok(Outcome::ok()
                    .art("delta", field_json(&d))
                    .art("diagonal", json!(d == delta)))
            }
            Monoid::Jets { order: 2, .. } => {
                let (d, x) = infinitesimal_pair(h).map_err(e2s)?;
                let br = lie_bracket(&d, &x);
                Ok(Outcome::ok()
                    .art("delta", field_json(&d))
                    .art("x", field_json(&x))
                    .art("bracket", field_json(&br))
                    .art("x_weight", weight_json(field_weight(&x, &d))))
            }
            Monoid::Matrix2 { .. } => {
                let r = double_weight_analysis(h).map_err(e2s)?;
                Ok(Outcome::ok()
                    .art("delta1", field_json(&r.delta1))
                    .art("delta2", field_json(&r.delta2)))
            }
            ref m => Err(format!("no weight field for {m} actions")),
        },
        other => Err(format!("`{}` is a {}", task.target, other.kind())),
    }
}

fn homogenize(model: &Model, task: &Task) -> TaskResult {
    let h = action(model, task)?;
    if model.mode == Mode::Complex {
        let mut base = BTreeMap::new();
        let given = match task.args.get("base") {
            None => Map::new(),
            Some(Value::Object(m)) => m.clone(),
            Some(_) => return Err("argument `base` must be an object".into()),
        };
        for (k, v) in &given {
            let var = model.coordinate(k).ok_or_else(|| format!("`{k}` is not a coordinate"))?;
            let src = v.as_str().ok_or_else(|| format!("base value of `{k}` must be a string"))?;
            let c = parse_expr(src, &model.symbols)
                .map_err(e2s)?
                .as_constant()
                .ok_or_else(|| format!("base value of `{k}` is not a constant"))?;
            base.insert(var, c);
        }
        let r = complex_homogenize(&model.signature, h, &base).map_err(e2s)?;
        return Ok(Outcome::ok()
            .art("coordinates", exprs(&r.forward))
            .art("weights", weights_json(&r.signature))
            .art("jacobian_det", json!(r.jacobian_det.to_string())));
    }
    let r = homogenize_real(&model.signature, h).map_err(e2s)?;
    Ok(Outcome::ok()
        .art("coordinates", exprs(&r.forward))
        .art("inverse", exprs(&r.inverse))
        .art("weights", weights_json(&r.signature))
        .art("family", exprs(&r.family.components))
        .art("jacobian_det", json!(r.jacobian_det.to_string()))
        .art("identity", json!(r.is_identity())))
}

fn flow(model: &Model, task: &Task) -> TaskResult {
    let x = field(model, task)?;
    let s = arg_param(task, "param", "s")?;
    let cap = match task.args.get("terms") {
        None => model.signature.degree() as usize + 1,
        Some(v) => v.as_u64().ok_or("argument `terms` must be a count")? as usize,
    };
    let coords: Vec<Var> = model.signature.all_coordinates();
    let f = lie_series_flow(x, &coords, &s, cap).map_err(e2s)?;
    Ok(Outcome::ok().art("flow", exprs(&f.components)))
}

fn g2_right(model: &Model, task: &Task) -> TaskResult {
    let x = field(model, task)?;
    let (a, b) = (arg_param(task, "a", "a")?, arg_param(task, "b", "b")?);
    let fam = right_family(&model.signature, x, &a, &b).map_err(e2s)?;
    let v = verify_action(&fam).map_err(e2s)?;
    let ext = extendable_to_zero(&model.signature, &fam, &a).is_ok();
    Ok(verdict(
        Outcome::ok()
            .art("family", exprs(&fam.components))
            .art("extends_to_zero", json!(ext)),
        v,
    ))
}

fn g2_classify(model: &Model, task: &Task) -> TaskResult {
    let sig = &model.signature;
    let (fam, x) = match &model.items[&task.target] {
        Item::Field(x) => {
            let (a, b) = (arg_param(task, "a", "a")?, arg_param(task, "b", "b")?);
            (right_family(sig, x, &a, &b).map_err(e2s)?, x.clone())
        }
        Item::Action(h) if matches!(h.monoid, Monoid::Jets { order: 2, .. }) => {
            let (_, x) = infinitesimal_pair(h).map_err(e2s)?;
            (h.clone(), x)
        }
        other => return Err(format!("`{}` is a {}, not a field or G2 action", task.target, other.kind())),
    };
    let a = fam.params[0].clone();
    let mut o = Outcome::ok().art("x", field_json(&x));
    let ext = extendable_to_zero(sig, &fam, &a);
    if sig.degree() <= 3 {
        if let Ok(blocks) = WeightMinusOneField::from_field(sig, &x) {
            let crit = criterion_deg_le3(&blocks).map_err(e2s)?;
            o = o.art("criterion", json!(crit));
            if crit != ext.is_ok() {
                return Err("block criterion and extendability disagree".into());
            }
        }
    }
    Ok(match ext {
        Extendability::Ok(_) => o.art("extends_to_zero", json!(true)),
        Extendability::Blocked {
            coordinate,
            exponent,
            witness,
        } => o
            .art("extends_to_zero", json!(false))
            .violate(coordinate, witness, Some(format!("power {exponent} of {a}"))),
    })
}

fn polys<'a>(ps: impl IntoIterator<Item = &'a Polynomial>) -> Value {
    Value::Array(ps.into_iter().map(|p| json!(p.to_string())).collect())
}

fn g2_left_bullet(model: &Model, task: &Task) -> TaskResult {
    let Item::Bullet(b) = &model.items[&task.target] else {
        return Err(format!("`{}` is not a bullet tensor", task.target));
    };
    let (a, bv) = (arg_param(task, "a", "a")?, arg_param(task, "b", "b")?);
    let cubic = cubic_obstruction(b);
    let o = Outcome::ok()
        .art("cubic", polys(&cubic))
        .art("polarization", polys(&bullet_polarize(b)))
        .art("square_of_square", polys(&quartic_square(b)));
    if let Some((k, p)) = cubic.iter().enumerate().find(|(_, p)| !p.is_zero()) {
        return Ok(o.violate(format!("component {}", k + 1), p, Some("v•(v•v) does not vanish".into())));
    }
    let fam = left_family_from_bullet(b, &a, &bv).map_err(e2s)?;
    let v = verify_action(&fam).map_err(e2s)?;
    Ok(verdict(o.art("family", exprs(&fam.components)), v))
}

fn m2_analyze(model: &Model, task: &Task) -> TaskResult {
    let h = action(model, task)?;
    let v = verify_action(h).map_err(e2s)?;
    let r = double_weight_analysis(h).map_err(e2s)?;
    let brackets: Map<String, Value> = r
        .brackets
        .iter()
        .map(|(n, f)| (n.clone(), field_json(f)))
        .collect();
    let o = Outcome::ok()
        .art("delta1", field_json(&r.delta1))
        .art("delta2", field_json(&r.delta2))
        .art("x", field_json(&r.x))
        .art("y", field_json(&r.y))
        .art("brackets", Value::Object(brackets))
        .art("x_weight", json!([weight_json(r.x_weight.0), weight_json(r.x_weight.1)]))
        .art("y_weight", json!([weight_json(r.y_weight.0), weight_json(r.y_weight.1)]));
    let o = verdict(o, v);
    Ok(if r.xy_residual.is_zero() {
        o
    } else {
        o.violate("[X,Y]", &r.xy_residual, Some("[X,Y] differs from D1 - D2".into()))
    })
}

fn nice(model: &Model, task: &Task) -> TaskResult {
    let h = action(model, task)?;
    let r = niceness_check(&model.signature, h).map_err(e2s)?;
    let levels: Vec<Value> = r.levels.iter().map(|l| json!(l.nice)).collect();
    let o = Outcome::ok().art("levels", Value::Array(levels));
    Ok(match r.first_failure() {
        None => o,
        Some(l) => {
            let (z, e) = l.witness.clone().expect("failed level has a witness");
            o.violate(z, e, Some(format!("level {}", l.level)))
        }
    })
}

fn holomorphic(model: &Model, task: &Task) -> TaskResult {
    let h = action(model, task)?;
    Ok(match is_holomorphic(h) {
        Holomorphy::Holomorphic => Outcome::ok(),
        Holomorphy::NotHolomorphic {
            coordinate,
            witness,
        } => Outcome::ok().violate(coordinate, witness, Some("antiholomorphic dependence".into())),
    })
}

fn fourier(model: &Model, task: &Task) -> TaskResult {
    let h = action(model, task)?;
    let src = arg_str(task, "function", "")?;
    if src.is_empty() {
        return Err("argument `function` is required".into());
    }
    let w = task
        .args
        .get("weight")
        .and_then(Value::as_i64)
        .ok_or("argument `weight` must be an integer")?;
    let f = parse_expr(src, &model.symbols_with(&h.params)).map_err(e2s)?;
    let p = fourier_weight_project(&f, h, w as i32).map_err(e2s)?;
    Ok(Outcome::ok().art("projection", json!(p.to_string())))
}

fn super_hom(model: &Model, task: &Task) -> TaskResult {
    let h = action(model, task)?;
    let r = super_homogenize(&model.signature, h).map_err(e2s)?;
    let locus: Vec<Value> = r.singular_locus().iter().map(|e| json!(e.to_string())).collect();
    Ok(Outcome::ok()
        .art("coordinates", exprs(&r.forward))
        .art("weights", weights_json(&r.signature))
        .art("even_det", json!(r.even_det.to_string()))
        .art("odd_det", json!(r.odd_det.to_string()))
        .art("singular_locus", Value::Array(locus))
        .art("identity", json!(r.is_identity())))
}

fn body(model: &Model, task: &Task) -> TaskResult {
    let h = action(model, task)?;
    let r = body_reduce(&model.signature, h).map_err(e2s)?;
    let alpha: Vec<Value> = r
        .alpha
        .iter()
        .map(|row| Value::Array(row.iter().map(|e| json!(e.to_string())).collect()))
        .collect();
    let normal = check_normal_form(&model.signature, h);
    let o = Outcome::ok()
        .art("body", exprs(&r.body.components))
        .art("odd", Value::Array(r.odd.iter().map(|v| json!(v.to_string())).collect()))
        .art("alpha", Value::Array(alpha))
        .art("normal_form", json!(normal.is_ok()));
    Ok(verdict(o, r.alpha_verdict))
}

fn morphism(model: &Model, task: &Task) -> TaskResult {
    let Item::Map(phi) = &model.items[&task.target] else {
        return Err(format!("`{}` is not a map", task.target));
    };
    let sig = &model.signature;
    if phi.values().flat_map(|e| e.variables()).any(|v| v.kind() == VarKind::Parameter) {
        return Err("map components may not involve parameters".into());
    }
    Ok(match check_morphism(phi, sig, sig).map_err(e2s)? {
        MorphismReport::Ok => Outcome::ok(),
        MorphismReport::Violation {
            coordinate,
            component,
            detail,
        } => Outcome::ok().violate(coordinate, component, Some(detail)),
    })
}
