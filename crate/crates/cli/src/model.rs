use std::collections::BTreeMap;
use std::fmt;

use monact_core::algebra::{parse_expr, Parity, Rational, RationalExpr, Symbols, Var, VarKind};
use monact_core::g2::BulletProduct;
use monact_core::graded::{ActionFamily, GradedSignature, Monoid, Side, VarDecl, VectorField};
use serde::Deserialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Real,
    Complex,
    Super,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    mode: Mode,
    signature: Vec<VarSpec>,
    #[serde(default)]
    items: BTreeMap<String, ItemSpec>,
    #[serde(default)]
    tasks: Vec<TaskSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VarSpec {
    name: String,
    weight: u32,
    #[serde(default)]
    parity: Option<ParitySpec>,
    #[serde(default)]
    kind: Option<KindSpec>,
    /// Extra name for `conj(name)` in complex mode.
    #[serde(default)]
    conjugate: Option<String>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ParitySpec {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindSpec {
    Base,
    Fiber,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum ItemSpec {
    Action {
        monoid: String,
        params: Vec<String>,
        components: BTreeMap<String, String>,
    },
    Field {
        components: BTreeMap<String, String>,
    },
    Map {
        components: BTreeMap<String, String>,
    },
    Bullet {
        tensor: Vec<Vec<Vec<RatSpec>>>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RatSpec {
    Int(i64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TaskSpec {
    command: String,
    target: String,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    args: BTreeMap<String, Value>,
}

#[derive(Clone, Debug)]
pub enum Item {
    Action(ActionFamily),
    Field(VectorField),
    Map(BTreeMap<Var, RationalExpr>),
    Bullet(BulletProduct),
}

impl Item {
    pub fn kind(&self) -> &'static str {
        match self {
            Item::Action(_) => "action",
            Item::Field(_) => "field",
            Item::Map(_) => "map",
            Item::Bullet(_) => "bullet",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    VerifyAction,
    Weights,
    Homogenize,
    Flow,
    G2Right,
    G2Classify,
    G2LeftBullet,
    M2Analyze,
    Nice,
    Holomorphic,
    FourierProject,
    SuperHomogenize,
    BodyReduce,
    MorphismCheck,
}

impl Command {
    fn parse(s: &str) -> Option<Command> {
        Some(match s {
            "verify-action" => Command::VerifyAction,
            "weights" | "weight-field" => Command::Weights,
            "homogenize" => Command::Homogenize,
            "flow" => Command::Flow,
            "g2-right" => Command::G2Right,
            "g2-classify" => Command::G2Classify,
            "g2-left-bullet" => Command::G2LeftBullet,
            "m2-analyze" => Command::M2Analyze,
            "nice" => Command::Nice,
            "holomorphic" => Command::Holomorphic,
            "fourier-project" => Command::FourierProject,
            "super-homogenize" => Command::SuperHomogenize,
            "body-reduce" => Command::BodyReduce,
            "morphism-check" => Command::MorphismCheck,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Task {
    pub name: String,
    pub command: Command,
    pub command_name: String,
    pub target: String,
    pub args: BTreeMap<String, Value>,
}

#[derive(Clone, Debug)]
pub struct Model {
    pub mode: Mode,
    pub signature: GradedSignature,
    pub symbols: Symbols,
    pub items: BTreeMap<String, Item>,
    pub tasks: Vec<Task>,
}

/// An input problem; always maps to exit status 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn err<T>(msg: impl Into<String>) -> Result<T, InputError> {
    Err(InputError(msg.into()))
}

impl Model {
    pub fn parse(text: &str) -> Result<Model, InputError> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| {
            InputError(format!("model file: parse error at {}:{}: {e}", e.line(), e.column()))
        })?;
        let complex = file.mode == Mode::Complex;
        let mut decls = Vec::new();
        let mut aliases = Vec::new();
        for v in &file.signature {
            let parity = match v.parity.unwrap_or(ParitySpec::Even) {
                ParitySpec::Even => Parity::Even,
                ParitySpec::Odd if file.mode == Mode::Super => Parity::Odd,
                ParitySpec::Odd => return err(format!("signature: odd variable `{}` needs super mode", v.name)),
            };
            let kind = match v.kind {
                Some(KindSpec::Base) => VarKind::Base,
                Some(KindSpec::Fiber) => VarKind::Fiber,
                None if v.weight == 0 => VarKind::Base,
                None => VarKind::Fiber,
            };
            if !is_identifier(&v.name) {
                return err(format!("signature: `{}` is not an identifier", v.name));
            }
            let var = Var::new(&v.name, parity, kind);
            if let Some(c) = &v.conjugate {
                if !complex {
                    return err(format!("signature: conjugate of `{}` needs complex mode", v.name));
                }
                aliases.push((c.clone(), var.conjugate()));
            }
            decls.push(VarDecl {
                var,
                weight: v.weight,
            });
        }
        let signature = if complex {
            GradedSignature::complex(decls)
        } else {
            GradedSignature::new(decls)
        }
        .map_err(|e| InputError(format!("signature: {e}")))?;
        let mut symbols = Symbols::from_vars(signature.vars(), complex);
        for (n, v) in aliases {
            symbols.alias(&n, v);
        }

        let mut items = BTreeMap::new();
        for (name, spec) in &file.items {
            let item = build_item(file.mode, &signature, &symbols, name, spec)?;
            items.insert(name.clone(), item);
        }

        let mut tasks = Vec::new();
        let mut names = std::collections::BTreeSet::new();
        for (k, t) in file.tasks.into_iter().enumerate() {
            let Some(command) = Command::parse(&t.command) else {
                return err(format!("tasks[{k}]: unknown command `{}`", t.command));
            };
            if !items.contains_key(&t.target) {
                return err(format!("tasks[{k}]: unknown target `{}`", t.target));
            }
            let name = t.name.unwrap_or_else(|| format!("{}:{}", t.command, t.target));
            if !names.insert(name.clone()) {
                return err(format!("tasks[{k}]: duplicate task name `{name}`"));
            }
            tasks.push(Task {
                name,
                command,
                command_name: t.command,
                target: t.target,
                args: t.args,
            });
        }
        Ok(Model {
            mode: file.mode,
            signature,
            symbols,
            items,
            tasks,
        })
    }

    /// Symbols of the chart plus the given parameters.
    pub fn symbols_with(&self, params: &[Var]) -> Symbols {
        let mut s = self.symbols.clone();
        for p in params.iter().filter(|p| !p.is_conj()) {
            s.insert(p.clone());
        }
        s
    }

    pub fn coordinate(&self, name: &str) -> Option<Var> {
        self.signature.get(name).map(|d| d.var.clone())
    }
}

fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_monoid(s: &str) -> Option<Monoid> {
    let side = |t: &str| match t {
        "left" => Some(Side::Left),
        "right" => Some(Side::Right),
        _ => None,
    };
    match s {
        "reals" => Some(Monoid::Reals),
        "complexes" => Some(Monoid::Complexes),
        "additive" => Some(Monoid::Additive),
        _ => {
            let (head, tail) = s.split_once('-')?;
            let side = side(tail)?;
            if head == "M2" {
                return Some(Monoid::Matrix2 { side });
            }
            let order: usize = head.strip_prefix('G')?.parse().ok()?;
            (order >= 1).then_some(Monoid::Jets { order, side })
        }
    }
}

fn parse_components(
    sig: &GradedSignature,
    syms: &Symbols,
    item: &str,
    comps: &BTreeMap<String, String>,
) -> Result<BTreeMap<Var, RationalExpr>, InputError> {
    let mut out = BTreeMap::new();
    for (k, src) in comps {
        let Some(d) = sig.get(k) else {
            return err(format!("items.{item}: `{k}` is not a declared coordinate"));
        };
        let e = parse_expr(src, syms)
            .map_err(|e| InputError(format!("items.{item}.components.{k}: {e}")))?;
        out.insert(d.var.clone(), e);
    }
    Ok(out)
}

fn build_item(
    mode: Mode,
    sig: &GradedSignature,
    syms: &Symbols,
    name: &str,
    spec: &ItemSpec,
) -> Result<Item, InputError> {
    match spec {
        ItemSpec::Action {
            monoid,
            params,
            components,
        } => {
            let Some(monoid) = parse_monoid(monoid) else {
                return err(format!("items.{name}: unknown monoid `{monoid}`"));
            };
            let mut pvars = Vec::new();
            for p in params {
                if !is_identifier(p) || sig.get(p).is_some() {
                    return err(format!("items.{name}: bad parameter name `{p}`"));
                }
                pvars.push(Var::param(p));
            }
            if monoid == Monoid::Complexes {
                if pvars.len() != 1 {
                    return err(format!("items.{name}: complexes take one parameter"));
                }
                pvars.push(pvars[0].conjugate());
            }
            let mut local = syms.clone();
            for p in pvars.iter().filter(|p| !p.is_conj()) {
                local.insert(p.clone());
            }
            let comps = parse_components(sig, &local, name, components)?;
            let mut all = comps.clone();
            if monoid == Monoid::Complexes {
                if mode != Mode::Complex {
                    return err(format!("items.{name}: complexes act only in complex mode"));
                }
                for (v, c) in &comps {
                    all.entry(v.conjugate()).or_insert_with(|| c.conjugate());
                }
            }
            for d in sig.decls() {
                if !all.contains_key(&d.var) {
                    return err(format!("items.{name}: no component for `{}`", d.var));
                }
            }
            ActionFamily::new(monoid, pvars, all)
                .map(Item::Action)
                .map_err(|e| InputError(format!("items.{name}: {e}")))
        }
        ItemSpec::Field { components } => {
            let comps = parse_components(sig, syms, name, components)?;
            let mut polys = Vec::new();
            for (v, e) in comps {
                let p = e
                    .to_poly()
                    .map_err(|e| InputError(format!("items.{name}.components.{v}: {e}")))?;
                polys.push((v, p));
            }
            Ok(Item::Field(VectorField::from_components(polys)))
        }
        ItemSpec::Map { components } => {
            let comps = parse_components(sig, syms, name, components)?;
            for d in sig.decls() {
                if !comps.contains_key(&d.var) {
                    return err(format!("items.{name}: no component for `{}`", d.var));
                }
            }
            Ok(Item::Map(comps))
        }
        ItemSpec::Bullet { tensor } => {
            let mut t = Vec::new();
            for (i, plane) in tensor.iter().enumerate() {
                let mut rows = Vec::new();
                for (j, row) in plane.iter().enumerate() {
                    let mut r = Vec::new();
                    for (k, x) in row.iter().enumerate() {
                        let q: Rational = match x {
                            RatSpec::Int(n) => Rational::from_integer((*n).into()),
                            RatSpec::Text(s) => s.trim().parse().map_err(|_| {
                                InputError(format!("items.{name}.tensor[{i}][{j}][{k}]: `{s}` is not rational"))
                            })?,
                        };
                        r.push(q);
                    }
                    rows.push(r);
                }
                t.push(rows);
            }
            BulletProduct::new(t)
                .map(Item::Bullet)
                .map_err(|e| InputError(format!("items.{name}: {e}")))
        }
    }
}
