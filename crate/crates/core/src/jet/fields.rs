//! Point vector fields τ∂_t + φ^a∂_{u^a} on J⁰, their prolongations and
//! symmetry checks.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::ode::free_total_derivative;
use super::{JetExpr, JetSpace, OdeSystem};
use crate::error::{Error, Result};
use crate::linalg::{rank, SparseVec};
use crate::poly::{gcd, Monomial, Poly, RatFunc};
use crate::scalar::{frac, int, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct PointVectorField {
    pub tau: JetExpr,
    /// φ^a with `phi[a - 1]`.
    pub phi: Vec<JetExpr>,
}

/// Coefficients of pr^(K) X: `phi[k][a - 1]` multiplies ∂_{u^a_k}.
#[derive(Clone, Debug, PartialEq)]
pub struct Prolongation {
    pub tau: JetExpr,
    pub phi: Vec<Vec<JetExpr>>,
}

impl PointVectorField {
    /// Rejects coefficients that depend on jets of positive order.
    pub fn new(m: usize, tau: JetExpr, phi: Vec<JetExpr>) -> Result<Self> {
        if phi.len() != m {
            return Err(Error::Params(format!(
                "expected {m} components, got {}",
                phi.len()
            )));
        }
        let s = JetSpace::new(m, 0)?;
        for e in std::iter::once(&tau).chain(&phi) {
            if let Some(k) = e.max_var().filter(|&v| v >= s.num_vars()) {
                return Err(Error::Params(format!(
                    "point field coefficients must depend on (t, u) only; found {}",
                    s.name(k)
                )));
            }
        }
        Ok(Self { tau, phi })
    }

    pub fn zero(m: usize) -> Self {
        Self {
            tau: RatFunc::zero(),
            phi: vec![RatFunc::zero(); m],
        }
    }

    /// ∂_t.
    pub fn d_t(m: usize) -> Self {
        Self {
            tau: RatFunc::one(),
            ..Self::zero(m)
        }
    }

    /// c·∂_{u^a}.
    pub fn d_u(m: usize, a: usize, c: JetExpr) -> Self {
        let mut f = Self::zero(m);
        f.phi[a - 1] = c;
        f
    }

    pub fn m(&self) -> usize {
        self.phi.len()
    }

    pub fn is_zero(&self) -> bool {
        self.tau.is_zero() && self.phi.iter().all(RatFunc::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            tau: &self.tau + &other.tau,
            phi: self
                .phi
                .iter()
                .zip(&other.phi)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self {
            tau: self.tau.scale(c),
            phi: self.phi.iter().map(|x| x.scale(c)).collect(),
        }
    }

    fn components(&self) -> impl Iterator<Item = &JetExpr> {
        std::iter::once(&self.tau).chain(&self.phi)
    }

    /// X(g) for a function g on J⁰.
    pub fn apply(&self, g: &JetExpr) -> JetExpr {
        let s = JetSpace::new(self.m(), 0).expect("m > 0");
        let mut acc = (&self.tau * &g.derivative(s.t_var())).clone();
        for (a, p) in self.phi.iter().enumerate() {
            if !p.is_zero() {
                acc = &acc + &(p * &g.derivative(s.u_var(0, a + 1)));
            }
        }
        acc
    }

    /// Lie bracket of vector fields on J⁰.
    pub fn bracket(&self, other: &Self) -> Self {
        Self {
            tau: &self.apply(&other.tau) - &other.apply(&self.tau),
            phi: self
                .phi
                .iter()
                .zip(&other.phi)
                .map(|(x, y)| &self.apply(y) - &other.apply(x))
                .collect(),
        }
    }

    /// φ_{k+1} = D_t φ_k − u_{k+1} D_t τ with the free total derivative.
    pub fn prolong(&self, order: usize) -> Result<Prolongation> {
        let m = self.m();
        let space = JetSpace::new(m, order)?;
        let dtau = if order > 0 {
            free_total_derivative(&space, &self.tau)?
        } else {
            RatFunc::zero()
        };
        let mut phi = vec![self.phi.clone()];
        for k in 0..order {
            let next = (1..=m)
                .map(|a| {
                    let d = free_total_derivative(&space, &phi[k][a - 1])?;
                    Ok(&d - &(&space.u(k + 1, a) * &dtau))
                })
                .collect::<Result<Vec<_>>>()?;
            phi.push(next);
        }
        Ok(Prolongation {
            tau: self.tau.clone(),
            phi,
        })
    }

    pub fn to_text(&self) -> String {
        let s = JetSpace::new(self.m(), 0).expect("m > 0");
        let mut out = format!("tau = {}\n", s.format(&self.tau));
        for (a, p) in self.phi.iter().enumerate() {
            out.push_str(&format!("phi^{} = {}\n", a + 1, s.format(p)));
        }
        out
    }
}

/// Blocks of `tau = <expr>` and `phi^a = <expr>` lines separated by blank
/// lines; absent components are zero.
pub fn parse_fields(m: usize, text: &str) -> Result<Vec<PointVectorField>> {
    let space = JetSpace::new(m, 0)?;
    let mut out = Vec::new();
    let mut current: Option<(Option<JetExpr>, Vec<Option<JetExpr>>)> = None;
    let finish = |cur: Option<(Option<JetExpr>, Vec<Option<JetExpr>>)>,
                  out: &mut Vec<PointVectorField>| {
        if let Some((tau, phi)) = cur {
            out.push(PointVectorField {
                tau: tau.unwrap_or_else(RatFunc::zero),
                phi: phi
                    .into_iter()
                    .map(|p| p.unwrap_or_else(RatFunc::zero))
                    .collect(),
            });
        }
    };
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            finish(current.take(), &mut out);
            continue;
        }
        let (lhs, rhs) = line
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("line {ln}: expected '<name> = <expr>'")))?;
        let e = space.parse(rhs).map_err(|e| match e {
            Error::Parse { pos, msg } => {
                Error::Format(format!("line {ln}, column {}: {msg}", pos + lhs.len() + 2))
            }
            other => other,
        })?;
        let cur = current.get_or_insert_with(|| (None, vec![None; m]));
        let lhs: String = lhs.chars().filter(|c| !c.is_whitespace()).collect();
        let slot = if lhs == "tau" {
            &mut cur.0
        } else {
            let a: usize = lhs
                .strip_prefix("phi^")
                .and_then(|x| x.parse().ok())
                .filter(|a| (1..=m).contains(a))
                .ok_or_else(|| Error::Format(format!("line {ln}: unknown coefficient '{lhs}'")))?;
            &mut cur.1[a - 1]
        };
        if slot.is_some() {
            return Err(Error::Format(format!(
                "line {ln}: '{lhs}' given twice in one block"
            )));
        }
        *slot = Some(e);
    }
    finish(current, &mut out);
    if out.is_empty() {
        return Err(Error::Format("no vector fields found".into()));
    }
    Ok(out)
}

pub fn fields_to_text(fields: &[PointVectorField]) -> String {
    fields
        .iter()
        .map(PointVectorField::to_text)
        .collect::<Vec<_>>()
        .join("\n")
}

/// pr X(u^a_{n+1} − f^a) restricted to u_{n+1} = f, for each a.
pub fn symmetry_residuals(ode: &OdeSystem, field: &PointVectorField) -> Result<Vec<JetExpr>> {
    if field.m() != ode.m() {
        return Err(Error::Params("field and ODE have different m".into()));
    }
    let (n, s) = (ode.n(), *ode.space());
    let pr = field.prolong(n + 1)?;
    (1..=ode.m())
        .into_par_iter()
        .map(|a| {
            let f = ode.f(a);
            let mut r = &pr.phi[n + 1][a - 1] - &(&pr.tau * &f.derivative(s.t_var()));
            for k in 0..=n {
                for b in 1..=ode.m() {
                    let c = &pr.phi[k][b - 1];
                    let v = s.u_var(k, b);
                    if c.is_zero() || !f.involves(v) {
                        continue;
                    }
                    r = &r - &(c * &f.derivative(v));
                }
            }
            ode.restrict(&r)
        })
        .collect()
}

pub fn is_symmetry(ode: &OdeSystem, field: &PointVectorField) -> Result<bool> {
    Ok(symmetry_residuals(ode, field)?.iter().all(RatFunc::is_zero))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpanReport {
    pub dim: usize,
    pub closed: bool,
    /// Index pairs whose bracket leaves the span.
    pub open_pairs: Vec<(usize, usize)>,
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    (a * b)
        .div_exact(&gcd(a, b))
        .expect("gcd divides the product")
}

/// Coefficient vectors over a shared denominator: key (slot, monomial).
fn coefficient_vectors(fields: &[PointVectorField]) -> Vec<SparseVec<(usize, Monomial)>> {
    let l = fields
        .iter()
        .flat_map(|f| f.components())
        .fold(Poly::one(), |acc, e| lcm(&acc, e.denom()));
    fields
        .iter()
        .map(|f| {
            let mut v = BTreeMap::new();
            for (slot, e) in f.components().enumerate() {
                let lifted = e.numer() * &l.div_exact(e.denom()).expect("lcm");
                for (mono, c) in lifted.terms() {
                    v.insert((slot, mono.clone()), c.clone());
                }
            }
            v
        })
        .collect()
}

/// Dimension over the constants.
pub fn span_dim(fields: &[PointVectorField]) -> usize {
    rank(&coefficient_vectors(fields))
}

/// Span dimension and bracket closure of a field list.
pub fn span_report(fields: &[PointVectorField]) -> SpanReport {
    let pairs: Vec<(usize, usize)> = (0..fields.len())
        .flat_map(|i| (i + 1..fields.len()).map(move |j| (i, j)))
        .collect();
    let brackets: Vec<PointVectorField> = pairs
        .par_iter()
        .map(|&(i, j)| fields[i].bracket(&fields[j]))
        .collect();
    let mut all = fields.to_vec();
    all.extend(brackets.iter().cloned());
    let vs = coefficient_vectors(&all);
    let e = crate::linalg::Echelon::from_vectors(vs[..fields.len()].iter());
    let open_pairs = pairs
        .iter()
        .zip(&vs[fields.len()..])
        .filter(|(_, v)| !e.contains(v))
        .map(|(p, _)| *p)
        .collect();
    let open_pairs: Vec<(usize, usize)> = open_pairs;
    SpanReport {
        dim: e.rank(),
        closed: open_pairs.is_empty(),
        open_pairs,
    }
}

/// Span report for fields that must all be point symmetries of `ode`.
pub fn symmetry_span(ode: &OdeSystem, fields: &[PointVectorField]) -> Result<SpanReport> {
    let verdicts: Vec<bool> = fields
        .par_iter()
        .map(|f| is_symmetry(ode, f))
        .collect::<Result<_>>()?;
    if let Some(i) = verdicts.iter().position(|ok| !ok) {
        return Err(Error::NotSymmetry(format!("field {} fails", i + 1)));
    }
    Ok(span_report(fields))
}

/// Point symmetries of u₃^a = 3u₁¹u₂¹u₂^a/(1 + (u₁¹)²).
pub fn minus_model_symmetries(m: usize) -> Vec<PointVectorField> {
    let s = JetSpace::new(m, 0).expect("m > 0");
    let t = s.t();
    let u = |a: usize| s.u(0, a);
    let mut out = vec![PointVectorField::d_t(m)];
    for a in 1..=m {
        out.push(PointVectorField::d_u(m, a, RatFunc::one()));
    }
    for b in 2..=m {
        out.push(PointVectorField::d_u(m, b, t.clone()));
    }
    for a in 1..=m {
        for b in 2..=m {
            out.push(PointVectorField::d_u(m, b, u(a)));
        }
    }
    let t2 = t.pow(2);
    let u12 = u(1).pow(2);
    for b in 2..=m {
        out.push(PointVectorField::d_u(m, b, &t2 + &u12));
    }
    out.push(rotation(m));
    let mut scaling = PointVectorField::zero(m);
    scaling.tau = t.clone();
    scaling.phi[0] = u(1);
    for b in 2..=m {
        scaling.phi[b - 1] = u(b).scale(&int(2));
    }
    out.push(scaling);
    let mut conformal = PointVectorField::zero(m);
    conformal.tau = &t2 - &u12;
    for a in 1..=m {
        conformal.phi[a - 1] = (&t * &u(a)).scale(&int(2));
    }
    out.push(conformal);
    let mut last = PointVectorField::zero(m);
    last.tau = &t * &u(1);
    last.phi[0] = (&u12 - &t2).scale(&frac(1, 2));
    for b in 2..=m {
        last.phi[b - 1] = &u(1) * &u(b);
    }
    out.push(last);
    out
}

/// u¹∂_t − t∂_{u¹}.
fn rotation(m: usize) -> PointVectorField {
    let s = JetSpace::new(m, 0).expect("m > 0");
    let mut f = PointVectorField::zero(m);
    f.tau = s.u(0, 1);
    f.phi[0] = -&s.t();
    f
}

/// ∂_t, ∂_{u^a}, t∂_{u^b} (b ≥ 2) and u¹∂_t − t∂_{u¹}.
pub fn transitivity_fields(m: usize) -> Vec<PointVectorField> {
    let s = JetSpace::new(m, 0).expect("m > 0");
    let mut out = vec![PointVectorField::d_t(m)];
    for a in 1..=m {
        out.push(PointVectorField::d_u(m, a, RatFunc::one()));
    }
    for b in 2..=m {
        out.push(PointVectorField::d_u(m, b, s.t()));
    }
    out.push(rotation(m));
    out
}

/// Distinct primes 2, 3, 5, … assigned to the variables of `space` in order.
pub fn prime_point(space: &JetSpace) -> BTreeMap<usize, Scalar> {
    let mut primes = Vec::new();
    let mut c = 2u64;
    while primes.len() < space.num_vars() {
        if (2..c)
            .take_while(|d| d * d <= c)
            .all(|d| !c.is_multiple_of(d))
        {
            primes.push(c);
        }
        c += 1;
    }
    primes
        .into_iter()
        .enumerate()
        .map(|(v, p)| (v, Scalar::from_integer((p as i64).into())))
        .collect()
}

/// Rank of the prolonged fields on J^order at the prime point.
pub fn jet_rank(fields: &[PointVectorField], order: usize) -> Result<usize> {
    let m = fields.first().map_or(1, PointVectorField::m);
    let space = JetSpace::new(m, order)?;
    let point = prime_point(&space);
    let rows = fields
        .iter()
        .map(|f| {
            let pr = f.prolong(order)?;
            let mut row = BTreeMap::new();
            let comps = std::iter::once(&pr.tau).chain(pr.phi.iter().flatten());
            for (j, e) in comps.enumerate() {
                let x = space.eval(e, &point).ok_or(Error::DivisionByZero)?;
                if !num_traits::Zero::is_zero(&x) {
                    row.insert(j, x);
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<SparseVec<usize>>>>()?;
    Ok(rank(&rows))
}

/// (rank on J¹, dim J¹) for the transitivity witnesses.
pub fn transitivity_rank(m: usize) -> Result<(usize, usize)> {
    Ok((jet_rank(&transitivity_fields(m), 1)?, 1 + 2 * m))
}
