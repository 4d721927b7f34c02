//! Algebraic models: filtered subspaces f ⊂ g with a deformed bracket
//! [x, y]_f = [x, y] − κ(x, y), κ horizontal for p = g⁰.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::cochain::{Cochain, Complex};
use crate::error::{Error, Result};
use crate::liealg::{AlgebraParams, BasisIndex, GVector, LieAlgebra};
use crate::linalg::Echelon;
use crate::lwv::{annihilator_basis, closed_form_lwv, ModuleId};
use crate::poly::Poly;
use crate::report::Report;
use crate::scalar::{frac, to_pq, Coefficient, Scalar};
use crate::tanaka::a_phi;

use BasisIndex::{H, X, Y};

/// Sign of κ for the third-order model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            _ => Err(Error::Format(format!("unknown branch {s:?}"))),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        })
    }
}

/// Parameters of the trace-type model.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSolution {
    pub zeta: Scalar,
    pub mu1: Scalar,
    pub mu2: Scalar,
    pub mu3: Scalar,
}

impl ParamSolution {
    pub fn as_array(&self) -> [Scalar; 4] {
        [
            self.zeta.clone(),
            self.mu1.clone(),
            self.mu2.clone(),
            self.mu3.clone(),
        ]
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "zeta": to_pq(&self.zeta),
            "mu1": to_pq(&self.mu1),
            "mu2": to_pq(&self.mu2),
            "mu3": to_pq(&self.mu3),
        })
    }
}

pub const PARAM_NAMES: [&str; 4] = ["zeta", "mu1", "mu2", "mu3"];

/// Closed forms of ζ, μ₁, μ₂, μ₃.
pub fn closed_form_params(params: AlgebraParams) -> Result<ParamSolution> {
    let (n, m) = (params.n as i64, params.m as i64);
    if n < 3 {
        return Err(Error::Incompatible("trace-type model needs n >= 3".into()));
    }
    let d = m * n * (n + 1) + 6;
    Ok(ParamSolution {
        zeta: frac((2 * n - n * n - 3) * m + 3 * n - 9, d),
        mu1: frac(6 * (n - 1) * (n - 2) * (m + 1), d),
        mu2: frac(
            -6 * (n - 1) * (m + 1) * (m * (n * n * n + n * n - 6 * n + 6) + 6),
            d * d,
        ),
        mu3: frac(1 - n, 1),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicModel<S: Coefficient = Scalar> {
    pub params: AlgebraParams,
    pub module: Option<ModuleId>,
    pub branch: Option<Branch>,
    pub basis: Vec<GVector<S>>,
    pub kappa: Cochain<S>,
    pub parameters: BTreeMap<&'static str, S>,
}

impl<S: Coefficient> AlgebraicModel<S> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// [x, y]_f = [x, y] − κ(πx, πy), π the projection to g₋.
    pub fn deformed_bracket(&self, alg: &LieAlgebra, x: &GVector<S>, y: &GVector<S>) -> GVector<S> {
        let k = self.kappa.eval_vectors(&[x.clone(), y.clone()]);
        &alg.bracket(x, y) - &k
    }

    /// [x,[y,z]_f]_f − [[x,y]_f,z]_f − [y,[x,z]_f]_f.
    pub fn jacobi_residual(
        &self,
        alg: &LieAlgebra,
        x: &GVector<S>,
        y: &GVector<S>,
        z: &GVector<S>,
    ) -> GVector<S> {
        let b = |u: &GVector<S>, v: &GVector<S>| self.deformed_bracket(alg, u, v);
        let t1 = b(x, &b(y, z));
        let t2 = b(&b(x, y), z);
        let t3 = b(y, &b(x, z));
        &(&t1 - &t2) - &t3
    }
}

fn one() -> Scalar {
    <Scalar as One>::one()
}

fn v(i: usize, a: usize) -> BasisIndex {
    BasisIndex::v(i, a)
}

fn lift<S: Coefficient>(x: &GVector) -> GVector<S> {
    x.map(|c| S::from_scalar(c.clone()))
}

/// κ = 0 on f = g.
pub fn flat_model(alg: &LieAlgebra) -> AlgebraicModel {
    AlgebraicModel {
        params: alg.params(),
        module: None,
        branch: None,
        basis: alg.basis().iter().map(|b| GVector::basis(*b)).collect(),
        kappa: Cochain::zero(alg.params(), 2),
        parameters: BTreeMap::new(),
    }
}

/// The bigrade-(2,2) correction of the trace-type curvature.
pub fn kappa4<S: Coefficient>(alg: &LieAlgebra, mu1: &S, mu2: &S, mu3: &S) -> Cochain<S> {
    let mut c = Cochain::zero(alg.params(), 2);
    let half = (mu1.clone() + mu2.clone()).mul_scalar(&frac(-1, 2));
    c.add_term(&[v(3, 1), v(0, 1)], X, mu1.clone());
    c.add_term(&[v(2, 1), v(1, 1)], X, mu2.clone());
    c.add_term(&[v(2, 1), v(0, 1)], H, half.clone());
    c.add_term(&[v(1, 1), v(0, 1)], Y, half);
    for a in 1..=alg.m() {
        let w = BasisIndex::e(a, 1);
        c.add_term(&[v(2, 1), v(0, a)], w, mu3.clone());
        c.add_term(&[v(2, a), v(0, 1)], w, -mu3.clone());
        c.add_term(&[v(1, a), v(1, 1)], w, mu3.clone());
    }
    c
}

/// Ê₁₁ = E₁₁ + (n−2)ζZ₁.
pub fn hat_e11<S: Coefficient>(alg: &LieAlgebra, zeta: &S) -> GVector<S> {
    let mut e11 = GVector::basis(v(1, 1));
    e11.add_scaled(&alg.z1::<S>(), &zeta.mul_int(alg.n() as i64 - 2));
    e11
}

/// Ê₀₁ = E₀₁ + ζY.
pub fn hat_e01<S: Coefficient>(zeta: &S) -> GVector<S> {
    let mut e01 = GVector::basis(v(0, 1));
    e01.add_term(Y, zeta.clone());
    e01
}

/// Trace-type model with parameters (ζ, μ₁, μ₂, μ₃) in any coefficient ring.
pub fn a2tr_model<S: Coefficient>(alg: &LieAlgebra, p: &[S; 4]) -> Result<AlgebraicModel<S>> {
    ModuleId::A2tr.check(alg.params())?;
    let (n, m) = (alg.n(), alg.m());
    let [zeta, mu1, mu2, mu3] = p;
    let mut basis: Vec<GVector<S>> = Vec::new();
    for i in (2..=n).rev() {
        for a in 1..=m {
            basis.push(GVector::basis(v(i, a)));
        }
    }
    basis.push(hat_e11(alg, zeta));
    basis.extend((2..=m).map(|b| GVector::basis(v(1, b))));
    basis.push(hat_e01(zeta));
    basis.extend((2..=m).map(|b| GVector::basis(v(0, b))));
    basis.push(GVector::basis(X));
    basis.extend(
        annihilator_basis(alg, ModuleId::A2tr)?
            .iter()
            .map(lift::<S>),
    );

    let phi = closed_form_lwv(alg, ModuleId::A2tr)?.cochain;
    let kappa = &phi.map(|c| S::from_scalar(c.clone())) + &kappa4(alg, mu1, mu2, mu3);
    let parameters = PARAM_NAMES.iter().copied().zip(p.iter().cloned()).collect();
    Ok(AlgebraicModel {
        params: alg.params(),
        module: Some(ModuleId::A2tr),
        branch: None,
        basis,
        kappa,
        parameters,
    })
}

/// The trace-type model with ζ, μ₁, μ₂, μ₃ as polynomial variables 0..3.
pub fn symbolic_a2tr_model(alg: &LieAlgebra) -> Result<AlgebraicModel<Poly>> {
    a2tr_model(
        alg,
        &[Poly::var(0), Poly::var(1), Poly::var(2), Poly::var(3)],
    )
}

/// The model of the given module with the solved parameters.
pub fn build_model(
    alg: &LieAlgebra,
    id: ModuleId,
    branch: Option<Branch>,
) -> Result<AlgebraicModel> {
    id.check(alg.params())?;
    if branch.is_some() && id != ModuleId::B4 {
        return Err(Error::Incompatible(format!("module {id} has no branches")));
    }
    match id {
        ModuleId::A2tr => a2tr_model(alg, &closed_form_params(alg.params())?.as_array()),
        ModuleId::B4 | ModuleId::A2tf => {
            let phi = closed_form_lwv(alg, id)?.cochain;
            let basis = a_phi(alg, &phi)?.basis();
            let branch = (id == ModuleId::B4).then(|| branch.unwrap_or(Branch::Plus));
            let kappa = match branch {
                Some(Branch::Minus) => -&phi,
                _ => phi,
            };
            Ok(AlgebraicModel {
                params: alg.params(),
                module: Some(id),
                branch,
                basis,
                kappa,
                parameters: BTreeMap::new(),
            })
        }
    }
}

/// Basis triples used to pin ζ, μ₁, μ₂, μ₃, in solving order.
pub fn parameter_triples<S: Coefficient>(alg: &LieAlgebra, zeta: &S) -> [[GVector<S>; 3]; 4] {
    let e11 = hat_e11(alg, zeta);
    let e01 = hat_e01(zeta);
    let g = |i, a| GVector::basis(v(i, a));
    [
        [e11.clone(), g(0, 2), g(3, 1)],
        [e01.clone(), g(1, 2), g(3, 1)],
        [e11, g(2, 2), g(2, 1)],
        [e01, g(2, 2), g(3, 1)],
    ]
}

/// Solves for ζ, μ₁, μ₂, μ₃ from the four Jacobi triples, one variable per
/// triple, and checks the result against the closed forms.
pub fn solve_model_params(alg: &LieAlgebra) -> Result<ParamSolution> {
    let model = symbolic_a2tr_model(alg)?;
    let triples = parameter_triples(alg, &Poly::var(0));
    let mut solved: BTreeMap<usize, Scalar> = BTreeMap::new();
    let mut equations: Vec<Poly> = Vec::new();
    for (var, [x, y, z]) in triples.iter().enumerate() {
        let r = model.jacobi_residual(alg, x, y, z);
        equations.extend(r.iter().map(|(_, p)| p.clone()));
        let value = equations.iter().find_map(|eq| {
            let e = eq.eval_partial(&solved);
            if e.degree_in(var) != 1 || (0..4).any(|w| w != var && e.involves(w)) {
                return None;
            }
            let cs = e.coeffs_in(var);
            let a = cs.get(&1)?.as_constant()?;
            let b = cs
                .get(&0)
                .and_then(Poly::as_constant)
                .unwrap_or_else(<Scalar as Zero>::zero);
            Some(-b / a)
        });
        let Some(value) = value else {
            return Err(Error::Inconsistent(format!(
                "no linear equation for {} after {} triples",
                PARAM_NAMES[var],
                var + 1
            )));
        };
        solved.insert(var, value);
    }
    if let Some(bad) = equations
        .iter()
        .find(|eq| !eq.eval_partial(&solved).is_zero())
    {
        return Err(Error::Inconsistent(format!(
            "residual equation {bad:?} not satisfied"
        )));
    }
    let sol = ParamSolution {
        zeta: solved[&0].clone(),
        mu1: solved[&1].clone(),
        mu2: solved[&2].clone(),
        mu3: solved[&3].clone(),
    };
    if sol != closed_form_params(alg.params())? {
        return Err(Error::Inconsistent(format!(
            "solved parameters {sol:?} differ from closed forms"
        )));
    }
    Ok(sol)
}

fn deg_key(b: &BasisIndex) -> (i32, BasisIndex) {
    (b.degree(), *b)
}

/// Row echelon form of f with pivots at lowest filtration degree.
fn filtered_echelon(basis: &[GVector]) -> Echelon<(i32, BasisIndex)> {
    let rows: Vec<_> = basis
        .iter()
        .map(|x| x.iter().map(|(b, c)| (deg_key(b), c.clone())).collect())
        .collect();
    Echelon::from_vectors(rows.iter())
}

fn to_key_vec(x: &GVector) -> BTreeMap<(i32, BasisIndex), Scalar> {
    x.iter().map(|(b, c)| (deg_key(b), c.clone())).collect()
}

impl AlgebraicModel<Scalar> {
    /// f ∩ g⁰.
    pub fn f_zero(&self) -> Vec<GVector> {
        filtered_echelon(&self.basis)
            .rref()
            .into_iter()
            .filter(|r| r.keys().next().is_some_and(|(d, _)| *d >= 0))
            .map(|r| GVector::from_terms(r.into_iter().map(|((_, b), c)| (b, c))))
            .collect()
    }

    /// dim gr_d(f) for each filtration degree d.
    pub fn graded_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (d, _) in filtered_echelon(&self.basis).pivot_keys() {
            *out.entry(*d).or_insert(0) += 1;
        }
        out
    }

    pub fn contains(&self, x: &GVector) -> bool {
        filtered_echelon(&self.basis).contains(&to_key_vec(x))
    }

    /// Deformed bracket with membership checks on the inputs.
    pub fn checked_bracket(&self, alg: &LieAlgebra, x: &GVector, y: &GVector) -> Result<GVector> {
        let f = filtered_echelon(&self.basis);
        for u in [x, y] {
            if !f.contains(&to_key_vec(u)) {
                return Err(Error::NotInSubspace(format!("{u} is not in f")));
            }
        }
        Ok(self.deformed_bracket(alg, x, y))
    }

    /// First basis triple (i < j < k) with nonzero Jacobi residual.
    pub fn find_jacobi_failure(&self, alg: &LieAlgebra) -> Option<(usize, usize, usize)> {
        let d = self.basis.len();
        let triples: Vec<(usize, usize, usize)> = (0..d)
            .flat_map(|i| (i + 1..d).flat_map(move |j| (j + 1..d).map(move |k| (i, j, k))))
            .collect();
        triples
            .par_iter()
            .find_first(|(i, j, k)| {
                !self
                    .jacobi_residual(alg, &self.basis[*i], &self.basis[*j], &self.basis[*k])
                    .is_zero()
            })
            .copied()
    }

    /// Full verification of the model's defining conditions.
    pub fn verify(&self, alg: &LieAlgebra) -> Result<Report> {
        let cx = Complex::new(alg);
        let mut r = Report::new();
        let dims = self.graded_dims();
        let graded_ok = (-(alg.n() as i32) - 1..0)
            .all(|d| dims.get(&d).copied().unwrap_or(0) == alg.graded_basis(d).len());
        r.push("graded_negative_part", graded_ok);

        let f0 = self.f_zero();
        let horizontal = f0.iter().all(|z| {
            self.basis
                .iter()
                .all(|y| self.kappa.eval_vectors(&[z.clone(), y.clone()]).is_zero())
        });
        r.push("kappa_vanishes_on_f0", horizontal);
        r.push(
            "codifferential_closed",
            cx.codifferential(&self.kappa)?.is_zero(),
        );
        r.push("strong_regularity", self.kappa.strong_regularity_holds());

        let fail = self.find_jacobi_failure(alg);
        match fail {
            None => r.push("jacobi", true),
            Some((i, j, k)) => {
                r.push_detail("jacobi", false, format!("basis triple ({i}, {j}, {k})"))
            }
        }

        let fe = filtered_echelon(&self.basis);
        let closed = (0..self.basis.len()).into_par_iter().all(|i| {
            (i + 1..self.basis.len()).all(|j| {
                let b = self.deformed_bracket(alg, &self.basis[i], &self.basis[j]);
                fe.contains(&to_key_vec(&b))
            })
        });
        r.push("bracket_closure", closed);

        let f0_ann = f0.par_iter().all(|z| {
            (0..self.basis.len()).all(|i| {
                (i + 1..self.basis.len()).all(|j| {
                    let (x, y) = (&self.basis[i], &self.basis[j]);
                    let lhs = alg.bracket(z, &self.kappa.eval_vectors(&[x.clone(), y.clone()]));
                    let a = self
                        .kappa
                        .eval_vectors(&[self.deformed_bracket(alg, z, x), y.clone()]);
                    let b = self
                        .kappa
                        .eval_vectors(&[x.clone(), self.deformed_bracket(alg, z, y)]);
                    lhs == &a + &b
                })
            })
        });
        r.push("f0_annihilates_kappa", f0_ann);
        r.push(
            "x_annihilates_kappa",
            cx.act(&GVector::basis(X), &self.kappa)?.is_zero(),
        );
        if let Some(id) = self.module {
            let phi = closed_form_lwv(alg, id)?.cochain;
            let sign = if self.branch == Some(Branch::Minus) {
                -one()
            } else {
                one()
            };
            r.push(
                "lowest_component_is_phi",
                self.kappa.lowest_degree_component() == phi.scale_scalar(&sign),
            );
        }
        Ok(r)
    }

    /// Same model with one parameter shifted by `delta`.
    pub fn perturbed(
        &self,
        alg: &LieAlgebra,
        name: &str,
        delta: &Scalar,
    ) -> Result<AlgebraicModel> {
        let idx = PARAM_NAMES
            .iter()
            .position(|p| *p == name)
            .ok_or_else(|| Error::Params(format!("unknown parameter {name}")))?;
        if self.module != Some(ModuleId::A2tr) {
            return Err(Error::Incompatible(
                "only the trace-type model has parameters".into(),
            ));
        }
        let mut p: [Scalar; 4] = PARAM_NAMES.map(|k| self.parameters[k].clone());
        p[idx] += delta;
        a2tr_model(alg, &p)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut out = json!({
            "n": self.params.n,
            "m": self.params.m,
            "module": self.module.map(|m| m.label()),
            "dim": self.dim(),
            "basis": self.basis.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            "kappa": self.kappa.to_json(),
        });
        if let Some(b) = self.branch {
            out["branch"] = json!(b.to_string());
        }
        if !self.parameters.is_empty() {
            let p: serde_json::Map<_, _> = self
                .parameters
                .iter()
                .map(|(k, x)| ((*k).to_string(), json!(to_pq(x))))
                .collect();
            out["parameters"] = serde_json::Value::Object(p);
        }
        out
    }
}
