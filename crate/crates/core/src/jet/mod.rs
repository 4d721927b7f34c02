//! Jet-space calculus for vector ODEs u_{n+1} = f(t, u, u_1, …, u_n).
//!
//! Expressions are exact rational functions ([`RatFunc`]) in the jet
//! coordinates t, u^a_k. Variable 0 is t and u^a_k is variable
//! 1 + k·m + (a − 1), so the graded lexicographic order on monomials
//! sees t < u¹₀ < … < u^m_0 < u¹₁ < ….

pub mod fields;
pub mod invariants;
pub mod ode;
mod parser;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poly::RatFunc;
use crate::scalar::Scalar;

pub use fields::{
    minus_model_symmetries, parse_fields, transitivity_fields, transitivity_rank, PointVectorField,
    SpanReport,
};
pub use invariants::{Invariant, InvariantReport};
pub use ode::OdeSystem;

pub type JetExpr = RatFunc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum JetVar {
    T,
    /// u^component_order, with `component` in 1..=m.
    U {
        order: usize,
        component: usize,
    },
}

/// Coordinates t, u^a_k for 1 ≤ a ≤ m and 0 ≤ k ≤ order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JetSpace {
    m: usize,
    order: usize,
}

impl JetSpace {
    pub fn new(m: usize, order: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Params("m must be positive".into()));
        }
        Ok(Self { m, order })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn num_vars(&self) -> usize {
        1 + (self.order + 1) * self.m
    }

    pub fn t_var(&self) -> usize {
        0
    }

    /// Variable index of u^a_k; `a` is 1-based.
    pub fn u_var(&self, k: usize, a: usize) -> usize {
        debug_assert!((1..=self.m).contains(&a));
        1 + k * self.m + (a - 1)
    }

    pub fn decode(&self, v: usize) -> JetVar {
        if v == 0 {
            JetVar::T
        } else {
            JetVar::U {
                order: (v - 1) / self.m,
                component: (v - 1) % self.m + 1,
            }
        }
    }

    pub fn name(&self, v: usize) -> String {
        match self.decode(v) {
            JetVar::T => "t".into(),
            JetVar::U { order, component } => format!("u[{order}]^{component}"),
        }
    }

    pub fn t(&self) -> JetExpr {
        RatFunc::var(0)
    }

    pub fn u(&self, k: usize, a: usize) -> JetExpr {
        RatFunc::var(self.u_var(k, a))
    }

    pub fn constant(&self, c: Scalar) -> JetExpr {
        RatFunc::constant(c)
    }

    /// Highest jet order of a u-variable in `e`, `None` if no u appears.
    pub fn order_of(&self, e: &JetExpr) -> Option<usize> {
        e.max_var().and_then(|v| match self.decode(v) {
            JetVar::T => None,
            JetVar::U { order, .. } => Some(order),
        })
    }

    pub fn format(&self, e: &JetExpr) -> String {
        e.fmt_with(&|v| self.name(v))
    }

    pub fn parse(&self, text: &str) -> Result<JetExpr> {
        parser::parse_expression(self, text)
    }

    /// Evaluation at a rational point given as variable → value.
    pub fn eval(&self, e: &JetExpr, point: &BTreeMap<usize, Scalar>) -> Option<Scalar> {
        e.eval_partial(point).and_then(|r| r.as_constant())
    }
}

pub fn parse_expression(space: &JetSpace, text: &str) -> Result<JetExpr> {
    space.parse(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variable_layout() {
        let s = JetSpace::new(3, 2).unwrap();
        assert_eq!(s.u_var(0, 1), 1);
        assert_eq!(s.u_var(1, 2), 5);
        assert_eq!(
            s.decode(5),
            JetVar::U {
                order: 1,
                component: 2
            }
        );
        assert_eq!(s.name(9), "u[2]^3");
        assert_eq!(s.num_vars(), 10);
        assert_eq!(s.order_of(&(&s.t() * &s.u(2, 1))), Some(2));
        assert_eq!(s.order_of(&s.t()), None);
    }
}
