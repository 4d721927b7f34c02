//! Vector ODE systems and their total derivatives.

use super::{JetExpr, JetSpace};
use crate::error::{Error, Result};
use crate::liealg::AlgebraParams;
use crate::lwv::ModuleId;
use crate::models::Branch;
use crate::poly::{gcd, Poly, RatFunc};
use crate::scalar::{frac, int, Scalar};

/// u^a_{n+1} = f^a(t, u, …, u_n) for a = 1..m.
#[derive(Clone, Debug, PartialEq)]
pub struct OdeSystem {
    n: usize,
    m: usize,
    rhs: Vec<JetExpr>,
    space: JetSpace,
    /// lcm of the denominators of the f^a.
    common_den: Poly,
    /// f^a · common_den.
    lifted: Vec<Poly>,
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    let g = gcd(a, b);
    (a * b).div_exact(&g).expect("gcd divides the product")
}

/// ∂_t + Σ_{k<K} u_{k+1}∂_{u_k} on the jet space of order K.
pub fn free_total_derivative(space: &JetSpace, e: &JetExpr) -> Result<JetExpr> {
    let top = space.order();
    if let Some(k) = space.order_of(e) {
        if k >= top {
            return Err(Error::OrderOverflow(k + 1));
        }
    }
    let kmax = space.order_of(e).unwrap_or(0);
    let mut terms = vec![(space.t_var(), Poly::one())];
    for k in 0..=kmax {
        for a in 1..=space.m() {
            terms.push((space.u_var(k, a), Poly::var(space.u_var(k + 1, a))));
        }
    }
    Ok(e.derivation(&terms, &Poly::one()))
}

impl OdeSystem {
    pub fn new(n: usize, m: usize, rhs: Vec<JetExpr>) -> Result<Self> {
        AlgebraParams::new(n, m)?;
        if rhs.len() != m {
            return Err(Error::Params(format!(
                "expected {m} right-hand sides, got {}",
                rhs.len()
            )));
        }
        let space = JetSpace::new(m, n + 1)?;
        for f in &rhs {
            if let Some(k) = space.order_of(f) {
                if k > n {
                    return Err(Error::OrderOverflow(k));
                }
            }
        }
        let common_den = rhs.iter().fold(Poly::one(), |acc, f| lcm(&acc, f.denom()));
        let lifted = rhs
            .iter()
            .map(|f| {
                let cofactor = common_den.div_exact(f.denom()).expect("lcm");
                f.numer() * &cofactor
            })
            .collect();
        Ok(Self {
            n,
            m,
            rhs,
            space,
            common_den,
            lifted,
        })
    }

    /// u_{n+1} = 0.
    pub fn trivial(n: usize, m: usize) -> Result<Self> {
        Self::new(n, m, vec![RatFunc::zero(); m])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn params(&self) -> AlgebraParams {
        AlgebraParams::new(self.n, self.m).expect("validated")
    }

    /// Jet space of order n + 1.
    pub fn space(&self) -> &JetSpace {
        &self.space
    }

    pub fn rhs(&self) -> &[JetExpr] {
        &self.rhs
    }

    /// f^a with 1-based `a`.
    pub fn f(&self, a: usize) -> &JetExpr {
        &self.rhs[a - 1]
    }

    /// The restricted total derivative ∂_t + Σ_{k<n} u_{k+1}∂_{u_k} + f∂_{u_n}.
    pub fn total_derivative(&self, e: &JetExpr) -> Result<JetExpr> {
        if e.is_zero() {
            return Ok(RatFunc::zero());
        }
        if let Some(k) = self.space.order_of(e) {
            if k > self.n {
                return Err(Error::OrderOverflow(k));
            }
        }
        let s = &self.space;
        let g = &self.common_den;
        let mut terms = vec![(s.t_var(), g.clone())];
        for a in 1..=self.m {
            for k in 0..self.n {
                terms.push((s.u_var(k, a), &Poly::var(s.u_var(k + 1, a)) * g));
            }
            terms.push((s.u_var(self.n, a), self.lifted[a - 1].clone()));
        }
        Ok(e.derivation(&terms, g))
    }

    /// `times`-fold restricted total derivative.
    pub fn total_derivative_iter(&self, e: &JetExpr, times: usize) -> Result<JetExpr> {
        (0..times).try_fold(e.clone(), |acc, _| self.total_derivative(&acc))
    }

    /// Replaces every u^a_{n+1} by f^a.
    pub fn restrict(&self, e: &JetExpr) -> Result<JetExpr> {
        let mut out = e.clone();
        for a in 1..=self.m {
            out = out
                .substitute(self.space.u_var(self.n + 1, a), self.f(a))
                .ok_or(Error::DivisionByZero)?;
        }
        Ok(out)
    }

    pub fn is_autonomous(&self) -> bool {
        self.rhs.iter().all(|f| !f.involves(self.space.t_var()))
    }

    /// The Table model for the module; `branch` applies to B4 only and
    /// defaults to plus.
    pub fn builtin(params: AlgebraParams, id: ModuleId, branch: Option<Branch>) -> Result<Self> {
        id.check(params)?;
        let (n, m) = (params.n, params.m);
        if branch.is_some() && id != ModuleId::B4 {
            return Err(Error::Incompatible(format!(
                "branches exist only for B4, not {id}"
            )));
        }
        let s = JetSpace::new(m, n + 1)?;
        let c = |x: Scalar| RatFunc::constant(x);
        let div = |a: &JetExpr, b: &JetExpr| a.checked_div(b).expect("nonzero");
        let rhs: Vec<JetExpr> = match id {
            ModuleId::B4 => {
                let (u11, u21) = (s.u(1, 1), s.u(2, 1));
                (1..=m)
                    .map(|a| match branch.unwrap_or(Branch::Plus) {
                        Branch::Plus => {
                            div(&(&(&c(int(3)) * &u21) * &s.u(2, a)), &(&c(int(2)) * &u11))
                        }
                        Branch::Minus => div(
                            &(&(&(&c(int(3)) * &u11) * &u21) * &s.u(2, a)),
                            &(&RatFunc::one() + &u11.pow(2)),
                        ),
                    })
                    .collect()
            }
            ModuleId::A2tr => {
                let k = frac(n as i64 + 1, n as i64);
                (1..=m)
                    .map(|a| div(&(&s.u(n, 1) * &s.u(n, a)).scale(&k), &s.u(n - 1, 1)))
                    .collect()
            }
            ModuleId::A2tf => (1..=m)
                .map(|a| {
                    if a == 1 {
                        s.u(n, 2).pow(2)
                    } else {
                        RatFunc::zero()
                    }
                })
                .collect(),
        };
        Self::new(n, m, rhs)
    }

    /// `n=<n> m=<m>` followed by one `u[n+1]^a = f^a` line per component.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={} m={}\n", self.n, self.m);
        for a in 1..=self.m {
            out.push_str(&format!(
                "u[{}]^{a} = {}\n",
                self.n + 1,
                self.space.format(self.f(a))
            ));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::Format("empty ODE file".into()))?;
        let (n, m) = parse_header(header).ok_or_else(|| {
            Error::Format(format!("line {hline}: expected header 'n=<int> m=<int>'"))
        })?;
        AlgebraParams::new(n, m)?;
        let space = JetSpace::new(m, n)?;
        let mut rhs: Vec<Option<JetExpr>> = vec![None; m];
        for (ln, line) in lines {
            let (lhs, expr) = line.split_once('=').ok_or_else(|| {
                Error::Format(format!("line {ln}: expected 'u[{}]^a = <expr>'", n + 1))
            })?;
            let a = parse_lhs(lhs, n + 1)
                .filter(|a| (1..=m).contains(a))
                .ok_or_else(|| {
                    Error::Format(format!("line {ln}: bad left-hand side '{}'", lhs.trim()))
                })?;
            if rhs[a - 1].is_some() {
                return Err(Error::Format(format!(
                    "line {ln}: component {a} given twice"
                )));
            }
            let e = space.parse(expr).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Format(format!(
                    "line {ln}, column {}: {msg}",
                    pos + line.len() - expr.len() + 1
                )),
                other => other,
            })?;
            rhs[a - 1] = Some(e);
        }
        let rhs = rhs
            .into_iter()
            .enumerate()
            .map(|(i, f)| {
                f.ok_or_else(|| {
                    Error::Format(format!("missing equation for u[{}]^{}", n + 1, i + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, m, rhs)
    }
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
    let rest = compact.strip_prefix("n=")?;
    let (n, m) = rest.split_once("m=")?;
    Some((n.parse().ok()?, m.parse().ok()?))
}

fn parse_lhs(lhs: &str, order: usize) -> Option<usize> {
    let compact: String = lhs.chars().filter(|c| !c.is_whitespace()).collect();
    let rest = compact.strip_prefix(&format!("u[{order}]^"))?;
    rest.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, m: usize) -> AlgebraParams {
        AlgebraParams::new(n, m).unwrap()
    }

    #[test]
    fn restricted_derivative_examples() {
        let ode = OdeSystem::builtin(params(3, 2), ModuleId::A2tr, None).unwrap();
        let s = *ode.space();
        assert_eq!(ode.total_derivative(&s.u(2, 1)).unwrap(), s.u(3, 1));
        assert_eq!(ode.total_derivative(&s.u(3, 2)).unwrap(), ode.f(2).clone());
        let triv = OdeSystem::trivial(2, 2).unwrap();
        let e = &s.t() * &s.u(0, 1);
        assert_eq!(
            triv.total_derivative(&e).unwrap(),
            &s.u(0, 1) + &(&s.t() * &s.u(1, 1))
        );
        assert_eq!(
            ode.total_derivative(&s.u(4, 1)),
            Err(Error::OrderOverflow(4))
        );
    }

    #[test]
    fn free_derivative_overflow() {
        let s = JetSpace::new(2, 2).unwrap();
        assert_eq!(free_total_derivative(&s, &s.u(1, 2)).unwrap(), s.u(2, 2));
        assert!(free_total_derivative(&s, &s.u(2, 1)).is_err());
        let q = s.u(0, 1).checked_div(&s.t()).unwrap();
        let want = &s.u(1, 1).checked_div(&s.t()).unwrap()
            - &s.u(0, 1).checked_div(&s.t().pow(2)).unwrap();
        assert_eq!(free_total_derivative(&s, &q).unwrap(), want);
    }

    #[test]
    fn text_roundtrip() {
        for (id, n, br) in [
            (ModuleId::B4, 2, Some(Branch::Plus)),
            (ModuleId::B4, 2, Some(Branch::Minus)),
            (ModuleId::A2tr, 4, None),
            (ModuleId::A2tf, 3, None),
        ] {
            let ode = OdeSystem::builtin(params(n, 3), id, br).unwrap();
            assert_eq!(OdeSystem::parse(&ode.to_text()).unwrap(), ode);
        }
    }

    #[test]
    fn file_errors() {
        assert!(OdeSystem::parse("").is_err());
        assert!(OdeSystem::parse("n=2 m=2\nu[3]^1 = 0\n").is_err());
        assert!(OdeSystem::parse("n=2 m=2\nu[3]^1 = 0\nu[3]^1 = 1\n").is_err());
        assert!(OdeSystem::parse("n=2 m=2\nu[3]^1 = 0\nu[3]^2 = u[3]^1\n").is_err());
        assert!(OdeSystem::parse("n=2 m=2\nu[2]^1 = 0\nu[3]^2 = 0\n").is_err());
        let ok = OdeSystem::parse("# comment\n n = 2  m = 2\n\nu[3]^2 = t\nu[3]^1 = 0\n").unwrap();
        assert_eq!(ok.f(2), &ok.space().t());
        assert!(!ok.is_autonomous());
    }

    #[test]
    fn builtin_rejects_bad_branch() {
        assert!(OdeSystem::builtin(params(3, 2), ModuleId::A2tr, Some(Branch::Minus)).is_err());
        assert!(OdeSystem::builtin(params(3, 2), ModuleId::B4, None).is_err());
    }
}
