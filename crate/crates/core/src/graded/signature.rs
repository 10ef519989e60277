use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::algebra::{Parity, Polynomial, Var, VarKind};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecl {
    pub var: Var,
    pub weight: u32,
}

/// An ordered chart of base and fiber coordinates with weights.
///
/// In complex mode every declared variable has a formal conjugate partner
/// of the same weight and parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSignature {
    decls: Vec<VarDecl>,
    complex: bool,
}

impl GradedSignature {
    pub fn new(decls: Vec<VarDecl>) -> Result<Self> {
        Self::build(decls, false)
    }

    pub fn complex(decls: Vec<VarDecl>) -> Result<Self> {
        Self::build(decls, true)
    }

    fn build(decls: Vec<VarDecl>, complex: bool) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for d in &decls {
            let name = d.var.name();
            if !seen.insert(name.to_string()) {
                return Err(Error::InvalidSignature(format!("duplicate variable `{name}`")));
            }
            if d.var.is_conj() {
                return Err(Error::InvalidSignature(format!(
                    "declare `{name}` itself, not its conjugate"
                )));
            }
            match d.var.kind() {
                VarKind::Parameter => {
                    return Err(Error::InvalidSignature(format!(
                        "`{name}` is a parameter, not a coordinate"
                    )))
                }
                VarKind::Base if d.weight != 0 => {
                    return Err(Error::InvalidSignature(format!(
                        "base variable `{name}` must have weight 0"
                    )))
                }
                VarKind::Fiber if d.weight == 0 => {
                    return Err(Error::InvalidSignature(format!(
                        "fiber variable `{name}` must have positive weight"
                    )))
                }
                _ => {}
            }
        }
        Ok(GradedSignature { decls, complex })
    }

    /// Convenience constructor: base names, then `(name, weight)` fibers.
    pub fn simple(base: &[&str], fibers: &[(&str, u32)]) -> Self {
        let mut decls: Vec<VarDecl> = base
            .iter()
            .map(|n| VarDecl {
                var: Var::base(n),
                weight: 0,
            })
            .collect();
        decls.extend(fibers.iter().map(|(n, w)| VarDecl {
            var: Var::fiber(n),
            weight: *w,
        }));
        Self::new(decls).expect("valid signature")
    }

    pub fn is_complex(&self) -> bool {
        self.complex
    }

    pub fn decls(&self) -> &[VarDecl] {
        &self.decls
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.decls.iter().map(|d| &d.var)
    }

    /// Declared variables followed, in complex mode, by their conjugates.
    pub fn all_coordinates(&self) -> Vec<Var> {
        let mut out: Vec<Var> = self.vars().cloned().collect();
        if self.complex {
            out.extend(self.vars().map(Var::conjugate));
        }
        out
    }

    pub fn base_vars(&self) -> Vec<Var> {
        self.decls
            .iter()
            .filter(|d| d.var.kind() == VarKind::Base)
            .map(|d| d.var.clone())
            .collect()
    }

    pub fn fiber_vars(&self) -> Vec<Var> {
        self.decls
            .iter()
            .filter(|d| d.var.kind() == VarKind::Fiber)
            .map(|d| d.var.clone())
            .collect()
    }

    pub fn get(&self, name: &str) -> Option<&VarDecl> {
        self.decls.iter().find(|d| d.var.name() == name)
    }

    /// Weight of a coordinate or of its conjugate; parameters and unknown
    /// symbols weigh 0.
    pub fn weight(&self, v: &Var) -> i64 {
        if v.is_param() {
            return 0;
        }
        self.get(v.name()).map_or(0, |d| d.weight as i64)
    }

    pub fn weight_fn(&self) -> impl Fn(&Var) -> i64 + '_ {
        move |v| self.weight(v)
    }

    pub fn contains(&self, v: &Var) -> bool {
        !v.is_param()
            && self
                .get(v.name())
                .is_some_and(|d| d.var.parity() == v.parity() && (self.complex || !v.is_conj()))
    }

    pub fn degree(&self) -> u32 {
        self.decls
            .iter()
            .filter(|d| d.var.kind() != VarKind::Base)
            .map(|d| d.weight)
            .max()
            .unwrap_or(0)
    }

    /// `(d_1, .., d_k)`: number of fiber coordinates of each weight.
    pub fn rank(&self) -> Vec<usize> {
        let k = self.degree() as usize;
        let mut r = vec![0; k];
        for d in &self.decls {
            if d.var.kind() == VarKind::Fiber && d.weight > 0 {
                r[d.weight as usize - 1] += 1;
            }
        }
        r
    }

    /// Even and odd counts per weight `0..=k`.
    pub fn super_rank(&self) -> (Vec<usize>, Vec<usize>) {
        let k = self.degree() as usize;
        let (mut even, mut odd) = (vec![0; k + 1], vec![0; k + 1]);
        for d in &self.decls {
            let slot = if d.var.parity() == Parity::Odd { &mut odd } else { &mut even };
            slot[d.weight as usize] += 1;
        }
        (even, odd)
    }

    pub fn is_super(&self) -> bool {
        self.decls.iter().any(|d| d.var.is_odd())
    }

    /// Keep the declarations selected by `keep`, in order.
    pub fn restrict(&self, keep: impl Fn(&VarDecl) -> bool) -> GradedSignature {
        GradedSignature {
            decls: self.decls.iter().filter(|d| keep(d)).cloned().collect(),
            complex: self.complex,
        }
    }

    pub fn with_weights(&self, f: impl Fn(&VarDecl) -> u32) -> GradedSignature {
        GradedSignature {
            decls: self
                .decls
                .iter()
                .map(|d| VarDecl {
                    var: d.var.clone(),
                    weight: f(d),
                })
                .collect(),
            complex: self.complex,
        }
    }

    /// Substitution `y ↦ t^{w(y)} y` for every coordinate.
    pub fn homothety_map(&self, t: &Var) -> BTreeMap<Var, Polynomial> {
        let tc = t.conjugate();
        let mut m = BTreeMap::new();
        for d in &self.decls {
            let p = Polynomial::power_of(t, d.weight as i32).expect("non-negative exponent");
            m.insert(d.var.clone(), &p * &Polynomial::var(&d.var));
            if self.complex {
                let pc = Polynomial::power_of(&tc, d.weight as i32).expect("non-negative exponent");
                m.insert(d.var.conjugate(), &pc * &Polynomial::var(&d.var.conjugate()));
            }
        }
        m
    }
}

impl fmt::Display for GradedSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .decls
            .iter()
            .map(|d| {
                let p = if d.var.is_odd() { "|odd" } else { "" };
                format!("{}:{}{}", d.var.name(), d.weight, p)
            })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_degree() {
        let s = GradedSignature::simple(&["x"], &[("x1", 1), ("x2", 1), ("y", 2)]);
        assert_eq!(s.degree(), 2);
        assert_eq!(s.rank(), vec![2, 1]);
        assert_eq!(s.weight(&Var::fiber("y")), 2);
    }

    #[test]
    fn rejects_bad_declarations() {
        let dup = vec![
            VarDecl { var: Var::fiber("y"), weight: 1 },
            VarDecl { var: Var::fiber("y"), weight: 2 },
        ];
        assert!(GradedSignature::new(dup).is_err());
        let heavy_base = vec![VarDecl { var: Var::base("x"), weight: 1 }];
        assert!(GradedSignature::new(heavy_base).is_err());
    }
}
