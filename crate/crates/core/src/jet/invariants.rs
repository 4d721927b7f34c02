//! Fundamental invariants of vector ODEs: the generalized Wilczynski
//! invariants (under the formal substitution) and the C-class invariants
//! A₂^tf, A₂^tr and B₄.
//!
//! The Wilczynski matrices are relative invariants only when the
//! Laguerre–Forsyth flag of the report is true; otherwise they are the
//! formal expressions, returned for inspection.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::json;

use super::{JetExpr, JetSpace, OdeSystem};
use crate::error::{Error, Result};
use crate::lwv::ModuleId;
use crate::poly::RatFunc;
use crate::scalar::{factorial, frac, int, Scalar};

/// A tensor-valued expression with 1-based indices; only nonzero
/// components are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Invariant {
    pub name: String,
    pub shape: Vec<usize>,
    pub components: BTreeMap<Vec<usize>, JetExpr>,
}

impl Invariant {
    fn from_fn(
        name: impl Into<String>,
        shape: Vec<usize>,
        f: impl Fn(&[usize]) -> JetExpr + Sync,
    ) -> Self {
        let components = multi_indices(&shape)
            .into_par_iter()
            .map(|idx| {
                let v = f(&idx);
                (idx, v)
            })
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Self {
            name: name.into(),
            shape,
            components,
        }
    }

    /// Identically zero, decided on canonical numerators.
    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn get(&self, idx: &[usize]) -> JetExpr {
        self.components
            .get(idx)
            .cloned()
            .unwrap_or_else(RatFunc::zero)
    }

    pub fn to_json(&self, space: &JetSpace) -> serde_json::Value {
        json!({
            "name": self.name,
            "shape": self.shape,
            "identically_zero": self.is_zero(),
            "components": self
                .components
                .iter()
                .map(|(k, v)| json!({"index": k, "value": space.format(v)}))
                .collect::<Vec<_>>(),
        })
    }
}

fn multi_indices(shape: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &d in shape {
        out = out
            .into_iter()
            .flat_map(|p| {
                (1..=d).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantReport {
    pub entries: Vec<Invariant>,
    /// Laguerre–Forsyth flag for Wilczynski reports: P_n ≡ 0 and tr P_{n−1} ≡ 0.
    pub normalized: Option<bool>,
}

impl InvariantReport {
    pub fn get(&self, name: &str) -> Option<&Invariant> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn to_json(&self, space: &JetSpace) -> serde_json::Value {
        let mut o = json!({"invariants": self.entries.iter().map(|e| e.to_json(space)).collect::<Vec<_>>()});
        if let Some(f) = self.normalized {
            o["laguerre_forsyth"] = json!(f);
        }
        o
    }
}

/// T^a_{bc} = ∂²f^a/∂u_n^b∂u_n^c, indexed [a-1][b-1][c-1].
pub fn top_hessian(ode: &OdeSystem) -> Vec<Vec<Vec<JetExpr>>> {
    let (n, m, s) = (ode.n(), ode.m(), ode.space());
    (1..=m)
        .into_par_iter()
        .map(|a| {
            let grads: Vec<JetExpr> = (1..=m)
                .map(|b| ode.f(a).derivative(s.u_var(n, b)))
                .collect();
            (1..=m)
                .map(|b| {
                    (1..=m)
                        .map(|c| grads[b - 1].derivative(s.u_var(n, c)))
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn trace_vector(t: &[Vec<Vec<JetExpr>>]) -> Vec<JetExpr> {
    let m = t.len();
    (0..m)
        .map(|c| (0..m).fold(RatFunc::zero(), |acc, a| &acc + &t[a][a][c]))
        .collect()
}

/// tr_c = Σ_a T^a_{ac}, defined for n ≥ 3.
pub fn a2_trace(ode: &OdeSystem) -> Result<Invariant> {
    if ode.n() < 3 {
        return Err(Error::Incompatible("A2tr requires n >= 3".into()));
    }
    let tr = trace_vector(&top_hessian(ode));
    Ok(Invariant::from_fn(
        ModuleId::A2tr.label(),
        vec![ode.m()],
        |i| tr[i[0] - 1].clone(),
    ))
}

/// T^a_{bc} − (δ^a_b tr_c + δ^a_c tr_b)/(m+1).
pub fn a2_tracefree(ode: &OdeSystem) -> Invariant {
    let m = ode.m();
    let t = top_hessian(ode);
    let tr = trace_vector(&t);
    let k = frac(1, m as i64 + 1);
    Invariant::from_fn(ModuleId::A2tf.label(), vec![m, m, m], |i| {
        let (a, b, c) = (i[0] - 1, i[1] - 1, i[2] - 1);
        let mut v = t[a][b][c].clone();
        if a == b {
            v = &v - &tr[c].scale(&k);
        }
        if a == c {
            v = &v - &tr[b].scale(&k);
        }
        v
    })
}

/// B₄ together with the auxiliary H^{-1}_b and H^t; n = 2 only.
pub fn b4(ode: &OdeSystem) -> Result<InvariantReport> {
    if ode.n() != 2 {
        return Err(Error::Incompatible("B4 requires n = 2".into()));
    }
    let (m, s) = (ode.m(), *ode.space());
    let u1 = |b: usize| s.u_var(1, b);
    let u2 = |b: usize| s.u_var(2, b);
    // ∂f^a/∂u₂^c, indexed [a][c]
    let df2: Vec<Vec<JetExpr>> = (1..=m)
        .map(|a| (1..=m).map(|c| ode.f(a).derivative(u2(c))).collect())
        .collect();
    let k6 = frac(1, 6 * (m as i64 + 1));
    let h: Vec<JetExpr> = (1..=m)
        .map(|b| {
            (1..=m)
                .fold(RatFunc::zero(), |acc, a| {
                    &acc + &df2[a - 1][a - 1].derivative(u2(b))
                })
                .scale(&k6)
        })
        .collect();
    let mut inner = RatFunc::zero();
    for a in 1..=m {
        inner = &inner + &ode.f(a).derivative(u1(a));
        inner = &inner - &ode.total_derivative(&df2[a - 1][a - 1])?;
        for c in 1..=m {
            inner = &inner + &(&df2[a - 1][c - 1] * &df2[c - 1][a - 1]).scale(&frac(1, 3));
        }
    }
    let ht = inner.scale(&frac(-1, 4 * m as i64));
    let dt_h: Vec<JetExpr> = h
        .iter()
        .map(|x| ode.total_derivative(x))
        .collect::<Result<_>>()?;
    // Σ_a H_a ∂f^a/∂u₂^b
    let hf: Vec<JetExpr> = (1..=m)
        .map(|b| {
            (1..=m).fold(RatFunc::zero(), |acc, a| {
                &acc + &(&h[a - 1] * &df2[a - 1][b - 1])
            })
        })
        .collect();
    let ht_b: Vec<JetExpr> = (1..=m).map(|b| ht.derivative(u2(b))).collect();
    let b4 = Invariant::from_fn(ModuleId::B4.label(), vec![m, m], |i| {
        let (b, c) = (i[0], i[1]);
        let mut v = -&h[c - 1].derivative(u1(b));
        v = &v + &ht_b[b - 1].derivative(u2(c));
        v = &v - &dt_h[b - 1].derivative(u2(c));
        v = &v - &hf[b - 1].derivative(u2(c));
        &v + &(&h[b - 1] * &h[c - 1]).scale(&int(2))
    });
    let h_inv = Invariant::from_fn("H^-1", vec![m], |i| h[i[0] - 1].clone());
    let h_t = Invariant::from_fn("H^t", vec![], |_| ht.clone());
    Ok(InvariantReport {
        entries: vec![b4, h_inv, h_t],
        normalized: None,
    })
}

/// The C-class invariants applicable at this order.
pub fn c_class(ode: &OdeSystem) -> Result<Vec<(ModuleId, Invariant)>> {
    let mut out = vec![(ModuleId::A2tf, a2_tracefree(ode))];
    if ode.n() >= 3 {
        out.push((ModuleId::A2tr, a2_trace(ode)?));
    }
    if ode.n() == 2 {
        out.push((ModuleId::B4, b4(ode)?.entries.swap_remove(0)));
    }
    Ok(out)
}

/// Modules whose C-class invariant is not identically zero.
pub fn nonvanishing_c_class(ode: &OdeSystem) -> Result<Vec<ModuleId>> {
    Ok(c_class(ode)?
        .into_iter()
        .filter(|(_, i)| !i.is_zero())
        .map(|(id, _)| id)
        .collect())
}

/// P_j = −(∂f^a/∂u_j^b), indexed [a-1][b-1].
fn p_matrix(ode: &OdeSystem, j: usize) -> Vec<Vec<JetExpr>> {
    let (m, s) = (ode.m(), ode.space());
    (1..=m)
        .map(|a| {
            (1..=m)
                .map(|b| -&ode.f(a).derivative(s.u_var(j, b)))
                .collect()
        })
        .collect()
}

/// Terms of Θ_r as (j, derivative order, coefficient) for P_j^{(d)}.
pub fn wilczynski_coefficients(n: usize, r: usize) -> Vec<(usize, usize, Scalar)> {
    (1..r)
        .map(|k| {
            let sign = if k % 2 == 1 { int(1) } else { int(-1) };
            let c = sign * factorial((2 * r - k - 1) as u64) * factorial((n + k - r) as u64)
                / (factorial((r - k) as u64) * factorial((k - 1) as u64));
            (n + k - r, k - 1, c)
        })
        .collect()
}

/// Θ_r for r = 2..n+1 under the formal substitution P_j → −∂f/∂u_j and
/// d/dt → restricted total derivative.
pub fn wilczynski(ode: &OdeSystem) -> Result<InvariantReport> {
    let (n, m) = (ode.n(), ode.m());
    let p: Vec<Vec<Vec<JetExpr>>> = (0..=n).map(|j| p_matrix(ode, j)).collect();
    let pn_zero = p[n].iter().flatten().all(RatFunc::is_zero);
    let tr = (0..m).fold(RatFunc::zero(), |acc, a| &acc + &p[n - 1][a][a]);
    let normalized = pn_zero && tr.is_zero();
    let mut entries = Vec::new();
    for r in 2..=n + 1 {
        let terms = wilczynski_coefficients(n, r);
        let comps: Vec<((usize, usize), JetExpr)> = (0..m)
            .flat_map(|a| (0..m).map(move |b| (a, b)))
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(a, b)| {
                let mut acc = RatFunc::zero();
                for (j, d, c) in &terms {
                    let e = &p[*j][a][b];
                    if e.is_zero() {
                        continue;
                    }
                    acc = &acc + &ode.total_derivative_iter(e, *d)?.scale(c);
                }
                Ok(((a, b), acc))
            })
            .collect::<Result<_>>()?;
        let map: BTreeMap<(usize, usize), JetExpr> = comps.into_iter().collect();
        entries.push(Invariant::from_fn(format!("Theta_{r}"), vec![m, m], |i| {
            map[&(i[0] - 1, i[1] - 1)].clone()
        }));
    }
    Ok(InvariantReport {
        entries,
        normalized: Some(normalized),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::AlgebraParams;

    #[test]
    fn multi_index_order() {
        assert_eq!(
            multi_indices(&[2, 2]),
            vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]
        );
        assert_eq!(multi_indices(&[]), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn trivial_ode_has_no_invariants() {
        for n in 2..=4 {
            let ode = OdeSystem::trivial(n, 2).unwrap();
            assert!(c_class(&ode).unwrap().iter().all(|(_, i)| i.is_zero()));
            let w = wilczynski(&ode).unwrap();
            assert!(w.entries.iter().all(Invariant::is_zero));
            assert_eq!(w.normalized, Some(true));
        }
    }

    #[test]
    fn wrong_order_rejected() {
        let p = AlgebraParams::new(2, 2).unwrap();
        let ode = OdeSystem::builtin(p, ModuleId::A2tf, None).unwrap();
        assert!(a2_trace(&ode).is_err());
        let ode = OdeSystem::trivial(3, 2).unwrap();
        assert!(b4(&ode).is_err());
    }

    #[test]
    fn theta_three_coefficients() {
        assert_eq!(
            wilczynski_coefficients(3, 3),
            vec![(1, 0, int(12)), (2, 1, int(-12))]
        );
    }
}
