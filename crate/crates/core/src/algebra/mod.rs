pub mod cyclotomic;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod scalar;
pub mod var;

pub use parse::{parse_expr, SymbolTable, Symbols};
pub use poly::{cyclo_eval, poly_arith, Monomial, Polynomial, RingOp};
pub use rational::RationalExpr;
pub use scalar::{rat, Gaussian, Rational, Scalar};
pub use var::{Parity, Var, VarKind};
