use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

/// Role of a variable in a chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Base,
    Fiber,
    /// Monoid parameters (`t`, `ξ`, `a`, `b`, matrix entries). Only these
    /// may carry negative exponents.
    Parameter,
}

/// A symbol. The conjugate `conj(x)` of a complex variable `x` is the same
/// name with the `conj` flag set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    name: Arc<str>,
    conj: bool,
    parity: Parity,
    kind: VarKind,
}

impl Var {
    pub fn new(name: &str, parity: Parity, kind: VarKind) -> Self {
        Var {
            name: Arc::from(name),
            conj: false,
            parity,
            kind,
        }
    }

    pub fn base(name: &str) -> Self {
        Self::new(name, Parity::Even, VarKind::Base)
    }

    pub fn fiber(name: &str) -> Self {
        Self::new(name, Parity::Even, VarKind::Fiber)
    }

    pub fn odd(name: &str, kind: VarKind) -> Self {
        Self::new(name, Parity::Odd, kind)
    }

    pub fn param(name: &str) -> Self {
        Self::new(name, Parity::Even, VarKind::Parameter)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn is_odd(&self) -> bool {
        self.parity == Parity::Odd
    }

    pub fn is_param(&self) -> bool {
        self.kind == VarKind::Parameter
    }

    pub fn is_conj(&self) -> bool {
        self.conj
    }

    /// The formal conjugate; an involution.
    pub fn conjugate(&self) -> Var {
        Var {
            conj: !self.conj,
            ..self.clone()
        }
    }

    /// Same variable under a new name, keeping flags.
    pub fn renamed(&self, name: &str) -> Var {
        Var {
            name: Arc::from(name),
            ..self.clone()
        }
    }

    pub fn with_kind(&self, kind: VarKind) -> Var {
        Var {
            kind,
            ..self.clone()
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conj {
            write!(f, "conj({})", self.name)
        } else {
            write!(f, "{}", self.name)
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
