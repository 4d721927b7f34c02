//! The acceptance suite: ten exact checks over fixed parameter grids.
//!
//! Each criterion returns a [`CriterionResult`]; grid cells run in
//! parallel and failures are reported in a fixed order.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::cochain::{ArgDomain, Cochain, Complex, Mono};
use crate::jet::fields::{symmetry_span, transitivity_rank};
use crate::jet::invariants::nonvanishing_c_class;
use crate::jet::{minus_model_symmetries, OdeSystem};
use crate::liealg::{AlgebraParams, BasisIndex, GVector, LieAlgebra};
use crate::linalg::Echelon;
use crate::lwv::{
    annihilator_basis, closed_form_lwv, d_psi_expansion, module_span_from_lwv,
    one_cochain_invariants, pairing_functional, psi, solve_lwv, verify_harmonic, ModuleId,
};
use crate::models::{build_model, closed_form_params, solve_model_params, Branch, PARAM_NAMES};
use crate::scalar::{frac, int, Scalar};
use crate::tanaka::{a_phi, annihilator, submax_bound};

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub key: &'static str,
    pub title: &'static str,
    pub cells: usize,
    pub failures: Vec<String>,
    pub millis: u128,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "criterion {:>2} [{}] {status}: {} ({} cells, {} ms)",
            self.id, self.key, self.title, self.cells, self.millis
        );
        if let Some(f) = self.failures.first() {
            s.push_str(&format!(" first failure: {f}"));
            if self.failures.len() > 1 {
                s.push_str(&format!(" (+{} more)", self.failures.len() - 1));
            }
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "criterion": self.id,
            "key": self.key,
            "title": self.title,
            "passed": self.passed(),
            "cells": self.cells,
            "failures": self.failures,
        })
    }
}

pub const CRITERIA: [(u8, &str, &str); 10] = [
    (
        1,
        "structure",
        "Jacobi identity, bigrading and dimension of g(n,m)",
    ),
    (
        2,
        "lowest-weight",
        "one-dimensional lowest weight spaces matching the closed forms",
    ),
    (
        3,
        "harmonic",
        "harmonicity, regularity and DM condition of each lowest weight vector",
    ),
    (
        4,
        "annihilators",
        "annihilators, symmetry bounds and prolongation rigidity",
    ),
    (
        5,
        "models",
        "model parameters and Jacobi verification of every model",
    ),
    (
        6,
        "hodge",
        "Hodge decomposition dimensions and adjointness of the codifferential",
    ),
    (
        7,
        "module-dims",
        "dimensions of the modules generated by raising operators",
    ),
    (8, "branches", "C-class invariant branch of each model ODE"),
    (
        9,
        "symmetries",
        "point symmetries, span dimension and transitivity",
    ),
    (
        10,
        "psi-pairing",
        "the 1-cochain Psi, its differential and the pairing functional",
    ),
];

/// Runs `check` on every cell in parallel and collects the failure reasons.
fn over<T: Sync>(
    cells: &[T],
    check: impl Fn(&T) -> Result<(), String> + Sync,
) -> (usize, Vec<String>) {
    let failures: Vec<String> = cells.par_iter().filter_map(|c| check(c).err()).collect();
    (cells.len(), failures)
}

fn alg(n: usize, m: usize) -> LieAlgebra {
    LieAlgebra::try_new(n, m).expect("grid parameters are valid")
}

fn grid(
    ns: std::ops::RangeInclusive<usize>,
    ms: std::ops::RangeInclusive<usize>,
) -> Vec<(usize, usize)> {
    ns.flat_map(|n| ms.clone().map(move |m| (n, m))).collect()
}

fn module_grid(max_n: usize, max_m: usize) -> Vec<(ModuleId, usize, usize)> {
    let mut out = Vec::new();
    for id in ModuleId::ALL {
        for (n, m) in grid(2..=max_n, 2..=max_m) {
            if id.supports(n) {
                out.push((id, n, m));
            }
        }
    }
    out
}

fn fail(cell: impl std::fmt::Display, what: impl std::fmt::Display) -> Result<(), String> {
    Err(format!("{cell}: {what}"))
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn structure() -> (usize, Vec<String>) {
    over(&grid(2..=8, 2..=5), |&(n, m)| {
        let r = alg(n, m).check_structure();
        let expected = m * m + (n + 1) * m + 3;
        if !r.passed() || r.dim != expected {
            return fail(format!("({n},{m})"), format!("{:?}", r.violations.first()));
        }
        Ok(())
    })
}

fn alpha_beta_target(n: usize, m: usize) -> Scalar {
    let (n, m) = (n as i64, m as i64);
    frac(-6 * (n - 1) * (m + 1), m * n * (n + 1) + 6)
}

fn lowest_weight() -> (usize, Vec<String>) {
    over(&module_grid(6, 4), |&(id, n, m)| {
        let g = alg(n, m);
        let cell = format!("{id} ({n},{m})");
        let sol = match solve_lwv(&g, id) {
            Ok(s) => s,
            Err(e) => return fail(cell, e),
        };
        let closed = closed_form_lwv(&g, id).map_err(err)?;
        match sol.cochain.ratio_to(&closed.cochain) {
            Some(r) if !num_traits::Zero::is_zero(&r) => {}
            _ => return fail(cell, "solution is not a multiple of the closed form"),
        }
        if id == ModuleId::A2tr {
            let (a, b) = (
                sol.alpha.clone().ok_or("no alpha")?,
                sol.beta.clone().ok_or("no beta")?,
            );
            if a / b != alpha_beta_target(n, m) {
                return fail(cell, "alpha/beta ratio");
            }
        }
        Ok(())
    })
}

fn harmonic() -> (usize, Vec<String>) {
    over(&module_grid(6, 4), |&(id, n, m)| {
        let g = alg(n, m);
        let cell = format!("{id} ({n},{m})");
        let sol = match solve_lwv(&g, id) {
            Ok(s) => s,
            Err(e) => return fail(cell, e),
        };
        let r = match verify_harmonic(&sol) {
            Ok(r) => r,
            Err(e) => return fail(cell, e),
        };
        if !r.passed() {
            return fail(cell, format!("{:?}", r.failures()));
        }
        let needs_dm = n >= 3 && id != ModuleId::B4;
        if needs_dm && r.get("dm_condition") != Some(true) {
            return fail(cell, "DM condition not checked");
        }
        Ok(())
    })
}

fn same_span(a: &[GVector], b: &[GVector]) -> bool {
    let sp = |v: &[GVector]| {
        Echelon::from_vectors(v.iter().map(GVector::to_sparse).collect::<Vec<_>>().iter())
    };
    let (ea, eb) = (sp(a), sp(b));
    ea.rank() == eb.rank()
        && a.iter().all(|x| eb.contains(&x.to_sparse()))
        && b.iter().all(|x| ea.contains(&x.to_sparse()))
}

fn annihilators() -> (usize, Vec<String>) {
    over(&module_grid(6, 4), |&(id, n, m)| {
        let g = alg(n, m);
        let cell = format!("{id} ({n},{m})");
        let phi = closed_form_lwv(&g, id).map_err(err)?.cochain;
        let computed = annihilator(&g, &phi).map_err(err)?;
        if !same_span(&computed, &annihilator_basis(&g, id).map_err(err)?) {
            return fail(cell, "annihilator differs from the listed generators");
        }
        let a = a_phi(&g, &phi).map_err(err)?;
        let bound = submax_bound(g.params(), id).map_err(err)?;
        if a.total_dim() != bound {
            return fail(cell, format!("dim a = {} but bound {bound}", a.total_dim()));
        }
        let want_y = n == 2;
        let has_y = a.a_one() == [GVector::basis(BasisIndex::Y)];
        if want_y != has_y || (!want_y && !a.a_one().is_empty()) {
            return fail(cell, "prolongation rigidity verdict");
        }
        Ok(())
    })
}

fn models() -> (usize, Vec<String>) {
    let mut cells: Vec<(ModuleId, usize, usize, Option<Branch>)> = Vec::new();
    for (n, m) in grid(3..=8, 2..=4) {
        cells.push((ModuleId::A2tr, n, m, None));
    }
    for m in 2..=4 {
        cells.push((ModuleId::B4, 2, m, Some(Branch::Plus)));
        cells.push((ModuleId::B4, 2, m, Some(Branch::Minus)));
    }
    for (n, m) in grid(2..=6, 2..=4) {
        cells.push((ModuleId::A2tf, n, m, None));
    }
    over(&cells, |&(id, n, m, br)| {
        let g = alg(n, m);
        let cell = format!(
            "{id}{} ({n},{m})",
            br.map(|b| format!(" {b}")).unwrap_or_default()
        );
        if id == ModuleId::A2tr {
            let solved = match solve_model_params(&g) {
                Ok(s) => s,
                Err(e) => return fail(cell, e),
            };
            if solved != closed_form_params(g.params()).map_err(err)?
                || solved.mu3 != int(1 - n as i64)
            {
                return fail(cell, "parameters differ from the closed forms");
            }
        }
        let model = match build_model(&g, id, br) {
            Ok(x) => x,
            Err(e) => return fail(cell, e),
        };
        let r = model.verify(&g).map_err(err)?;
        if !r.passed() {
            return fail(cell, format!("{:?}", r.failures()));
        }
        if id == ModuleId::A2tr {
            for name in PARAM_NAMES {
                let bad = model.perturbed(&g, name, &int(1)).map_err(err)?;
                if bad.find_jacobi_failure(&g).is_none() {
                    return fail(cell, format!("perturbing {name} keeps Jacobi"));
                }
            }
        }
        Ok(())
    })
}

fn random_cochain(basis: &[Mono], rng: &mut ChaCha8Rng, p: AlgebraParams, k: usize) -> Cochain {
    let mut c = Cochain::zero(p, k);
    for _ in 0..rng.gen_range(1..=5) {
        let mo = basis[rng.gen_range(0..basis.len())].clone();
        let x: i64 = rng.gen_range(-5..=5);
        c = &c + &Cochain::monomial(p, mo, int(x));
    }
    c
}

fn hodge() -> (usize, Vec<String>) {
    over(&grid(2..=5, 2..=3), |&(n, m)| {
        let g = alg(n, m);
        let cx = Complex::new(&g);
        let cell = format!("({n},{m})");
        let bigrades = cx.bigrades(2, ArgDomain::Negative);
        let bad: Vec<String> = bigrades
            .par_iter()
            .filter_map(|&b| match cx.hodge_dims(2, b) {
                Ok(h) if h.balanced() => None,
                Ok(h) => Some(format!("{:?}", h)),
                Err(e) => Some(e.to_string()),
            })
            .collect();
        if let Some(b) = bad.first() {
            return fail(cell, b);
        }
        let p = g.params();
        let mut rng = ChaCha8Rng::seed_from_u64((n * 100 + m) as u64);
        let bases: Vec<Vec<Mono>> = (1..=3)
            .map(|k| cx.monomial_basis(k, None, ArgDomain::Negative))
            .collect();
        for trial in 0..100 {
            let k = 1 + trial % 2;
            let phi = random_cochain(&bases[k - 1], &mut rng, p, k);
            let psi_ = random_cochain(&bases[k], &mut rng, p, k + 1);
            let lhs = cx.inner_product(&cx.differential(&phi), &psi_);
            let rhs = cx.inner_product(&phi, &cx.codifferential(&psi_).map_err(err)?);
            if lhs != rhs {
                return fail(cell, format!("adjointness fails on trial {trial}"));
            }
        }
        Ok(())
    })
}

fn module_dims() -> (usize, Vec<String>) {
    let mut cells = Vec::new();
    for m in 2..=5 {
        cells.extend([
            (ModuleId::B4, 2, m),
            (ModuleId::A2tr, 3, m),
            (ModuleId::A2tf, 2, m),
            (ModuleId::A2tf, 3, m),
        ]);
    }
    over(&cells, |&(id, n, m)| {
        let g = alg(n, m);
        let sol = closed_form_lwv(&g, id).map_err(err)?;
        let dim = module_span_from_lwv(&g, &sol).map_err(err)?.len();
        let want = match id {
            ModuleId::B4 => m * (m + 1) / 2,
            ModuleId::A2tr => m,
            ModuleId::A2tf => m * m * (m + 1) / 2 - m,
        };
        if dim != want {
            return fail(format!("{id} ({n},{m})"), format!("{dim} vs {want}"));
        }
        Ok(())
    })
}

fn branches() -> (usize, Vec<String>) {
    let mut cells: Vec<(ModuleId, usize, usize, Option<Branch>)> = Vec::new();
    for m in 2..=4 {
        cells.push((ModuleId::B4, 2, m, Some(Branch::Plus)));
        cells.push((ModuleId::B4, 2, m, Some(Branch::Minus)));
        for n in 2..=5 {
            cells.push((ModuleId::A2tf, n, m, None));
            if n >= 3 {
                cells.push((ModuleId::A2tr, n, m, None));
            }
        }
    }
    over(&cells, |&(id, n, m, br)| {
        let ode =
            OdeSystem::builtin(AlgebraParams::new(n, m).map_err(err)?, id, br).map_err(err)?;
        match nonvanishing_c_class(&ode) {
            Ok(v) if v == [id] => Ok(()),
            Ok(v) => fail(format!("{id} ({n},{m})"), format!("nonvanishing {v:?}")),
            Err(e) => fail(format!("{id} ({n},{m})"), e),
        }
    })
}

fn symmetries() -> (usize, Vec<String>) {
    over(&[2usize, 3, 4], |&m| {
        let cell = format!("m={m}");
        let ode = OdeSystem::builtin(
            AlgebraParams::new(2, m).map_err(err)?,
            ModuleId::B4,
            Some(Branch::Minus),
        )
        .map_err(err)?;
        let r = match symmetry_span(&ode, &minus_model_symmetries(m)) {
            Ok(r) => r,
            Err(e) => return fail(cell, e),
        };
        let want = m * m + 2 * m + 3;
        if r.dim != want || want != AlgebraParams::new(2, m).map_err(err)?.dim() - m {
            return fail(cell, format!("span dimension {} vs {want}", r.dim));
        }
        if !r.closed {
            return fail(cell, format!("brackets leave the span: {:?}", r.open_pairs));
        }
        match transitivity_rank(m) {
            Ok((r, full)) if r == full => Ok(()),
            Ok((r, full)) => fail(cell, format!("rank {r} < {full} on first jets")),
            Err(e) => fail(cell, e),
        }
    })
}

fn psi_pairing() -> (usize, Vec<String>) {
    over(&grid(3..=6, 2..=4), |&(n, m)| {
        let g = alg(n, m);
        let cx = Complex::new(&g);
        let cell = format!("({n},{m})");
        let d_psi = cx.differential(&psi(&g));
        if d_psi != d_psi_expansion(&g) {
            return fail(cell, "differential of Psi differs from its expansion");
        }
        let sol = solve_lwv(&g, ModuleId::A2tr).map_err(err)?;
        let value = pairing_functional(g.params())
            .map_err(err)?
            .evaluate(sol.table.as_ref().ok_or("no coefficient table")?);
        if !num_traits::Zero::is_zero(&value)
            || !num_traits::Zero::is_zero(&cx.inner_product(&d_psi, &sol.cochain))
        {
            return fail(cell, "pairing does not vanish on the solution");
        }
        let inv = one_cochain_invariants(&g).map_err(err)?;
        if inv.len() != 1 || inv[0].ratio_to(&psi(&g)).is_none() {
            return fail(
                cell,
                format!("invariant 1-cochains have dimension {}", inv.len()),
            );
        }
        Ok(())
    })
}

/// Runs one criterion by number.
pub fn run_criterion(id: u8) -> Option<CriterionResult> {
    let &(id, key, title) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (cells, failures) = match id {
        1 => structure(),
        2 => lowest_weight(),
        3 => harmonic(),
        4 => annihilators(),
        5 => models(),
        6 => hodge(),
        7 => module_dims(),
        8 => branches(),
        9 => symmetries(),
        _ => psi_pairing(),
    };
    let mut failures = failures;
    failures.sort();
    Some(CriterionResult {
        id,
        key,
        title,
        cells,
        failures,
        millis: start.elapsed().as_millis(),
    })
}

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|c| run_criterion(c.0)).collect()
}
