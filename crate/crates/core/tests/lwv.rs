use num_traits::{One, Zero};
use submax_core::cochain::{Cochain, Complex, DmCondition};
use submax_core::liealg::{BasisIndex, LieAlgebra};
use submax_core::lwv::*;
use submax_core::scalar::{factorial, frac, int, Scalar};

fn alg(n: usize, m: usize) -> LieAlgebra {
    LieAlgebra::try_new(n, m).unwrap()
}

fn grid() -> Vec<(ModuleId, usize, usize)> {
    let mut out = Vec::new();
    for id in ModuleId::ALL {
        for n in 2..=6 {
            for m in 2..=4 {
                if id.supports(n) {
                    out.push((id, n, m));
                }
            }
        }
    }
    out
}

#[test]
fn solver_matches_closed_form() {
    for (id, n, m) in grid() {
        let g = alg(n, m);
        let solved = solve_lwv(&g, id).unwrap_or_else(|e| panic!("{id} ({n},{m}): {e}"));
        let closed = closed_form_lwv(&g, id).unwrap();
        let r = solved.cochain.ratio_to(&closed.cochain);
        assert!(r.is_some_and(|x| !x.is_zero()), "{id} ({n},{m})");
        assert_eq!(
            solved.cochain, closed.cochain,
            "{id} ({n},{m}) normalization"
        );
    }
}

#[test]
fn closed_forms_are_harmonic() {
    for (id, n, m) in grid() {
        let sol = closed_form_lwv(&alg(n, m), id).unwrap();
        let rep = verify_harmonic(&sol).unwrap();
        assert!(rep.passed(), "{id} ({n},{m}): {:?}", rep.failures());
    }
    let rep = verify_harmonic(&closed_form_lwv(&alg(4, 3), ModuleId::A2tr).unwrap()).unwrap();
    assert_eq!(rep.get("dm_condition"), Some(true));
}

#[test]
fn annihilators_kill_lowest_weight_vector() {
    for (id, n, m) in grid() {
        let g = alg(n, m);
        let cx = Complex::new(&g);
        let sol = closed_form_lwv(&g, id).unwrap();
        let ann = annihilator_basis(&g, id).unwrap();
        assert_eq!(ann.len(), id.annihilator_dim(m));
        for z in &ann {
            assert!(
                cx.act(z, &sol.cochain).unwrap().is_zero(),
                "{id} ({n},{m}) {z}"
            );
        }
    }
}

#[test]
fn lowest_weight_under_lowering() {
    for (id, n, m) in grid() {
        let g = alg(n, m);
        let cx = Complex::new(&g);
        let sol = closed_form_lwv(&g, id).unwrap();
        for a in 1..=m {
            for c in 1..a {
                let z = submax_core::GVector::basis(BasisIndex::e(a, c));
                assert!(cx.act(&z, &sol.cochain).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn closed_form_tables() {
    for n in 3..=6 {
        for m in 2..=4 {
            let g = alg(n, m);
            let alpha = alpha_for_unit_beta(n, m);
            let sol = closed_form_lwv(&g, ModuleId::A2tr).unwrap();
            let t = sol.table.clone().unwrap();
            assert_eq!(
                t,
                closed_form_table(n, ModuleId::A2tr, &alpha, &Scalar::one()).unwrap()
            );
            assert!(t.recursion_defects().is_empty(), "({n},{m})");
            assert_eq!(sol.alpha.clone().unwrap(), alpha);
            for i in 2..=n {
                let want = if i == n {
                    Scalar::zero()
                } else {
                    alpha.clone()
                };
                assert_eq!(t.get(2, i), want);
            }
            // γ = c_{1,n}
            assert_eq!(t.get(1, n), -Scalar::one() - &alpha * frac(n as i64, 2));
            assert_eq!(
                cochain_from_table(&g, ModuleId::A2tr, &t).unwrap(),
                sol.cochain
            );
        }
    }
    for n in 2..=6 {
        for m in 2..=4 {
            let g = alg(n, m);
            let sol = closed_form_lwv(&g, ModuleId::A2tf).unwrap();
            let t = sol.table.clone().unwrap();
            assert!(t.is_antisymmetric());
            assert!(t.recursion_defects().is_empty(), "({n},{m})");
            for i in 2..=n {
                assert_eq!(t.get(i, 1), Scalar::one());
                assert_eq!(t.get(1, i), -Scalar::one());
            }
            let beta = Scalar::one();
            assert_eq!(
                t,
                closed_form_table(n, ModuleId::A2tf, &Scalar::zero(), &beta).unwrap()
            );
        }
    }
}

#[test]
fn alpha_relation_values() {
    assert_eq!(alpha_for_unit_beta(3, 2), frac(-6, 5));
    assert_eq!(alpha_for_unit_beta(4, 3), frac(-12, 11));
}

#[test]
fn x_annihilation_gives_recursion() {
    // Perturbing one entry of the solved table breaks both.
    let g = alg(4, 2);
    let cx = Complex::new(&g);
    let sol = closed_form_lwv(&g, ModuleId::A2tr).unwrap();
    let x = submax_core::GVector::basis(BasisIndex::X);
    assert!(cx.act(&x, &sol.cochain).unwrap().is_zero());
    let mut t = sol.table.unwrap();
    t.set(3, 1, t.get(3, 1) + int(1));
    let broken = cochain_from_table(&g, ModuleId::A2tr, &t).unwrap();
    assert!(!cx.act(&x, &broken).unwrap().is_zero());
    assert!(!t.recursion_defects().is_empty());
}

#[test]
fn d_psi_matches_expansion() {
    for n in 3..=6 {
        for m in 2..=4 {
            let g = alg(n, m);
            let cx = Complex::new(&g);
            assert_eq!(cx.differential(&psi(&g)), d_psi_expansion(&g), "({n},{m})");
        }
    }
}

#[test]
fn pairing_vanishes_on_solution() {
    for n in 3..=6 {
        for m in 2..=4 {
            let g = alg(n, m);
            let cx = Complex::new(&g);
            let sol = closed_form_lwv(&g, ModuleId::A2tr).unwrap();
            let f = pairing_functional(g.params()).unwrap();
            assert!(f.evaluate(sol.table.as_ref().unwrap()).is_zero());
            assert!(cx
                .inner_product(&cx.differential(&psi(&g)), &sol.cochain)
                .is_zero());
        }
    }
}

fn pseudo_table(n: usize, seed: i64) -> CoefficientTable {
    let mut t = CoefficientTable::zero(n);
    let mut s = seed;
    for i in 0..=n {
        for j in 0..=n {
            if i + j >= 1 && i + j <= n + 1 {
                s = (s * 48271 + 11) % 2147483647;
                t.set(i, j, int(s % 13 - 6));
            }
        }
    }
    t
}

#[test]
fn pairing_constants() {
    for n in 3..=5 {
        for m in 2..=3 {
            let g = alg(n, m);
            let cx = Complex::new(&g);
            let mi = int(m as i64);
            for seed in 1..4 {
                let t = pseudo_table(n, seed);
                let phi = cochain_from_table(&g, ModuleId::A2tr, &t).unwrap();
                assert_eq!(
                    cx.inner_product(&cx.differential(&psi(&g)), &phi),
                    pairing_via_functional(g.params(), &t).unwrap()
                );
                for k in 0..=n {
                    let kk = k as i64;
                    let p2 = cx.inner_product(&phi_trace(&g, 2, k), &phi);
                    let want2 = (&mi * t.get(2, k) - t.get(k, 2))
                        * int((n as i64 - kk) * (kk + 1))
                        * factorial(n as u64 - 2)
                        * frac(1, 2);
                    assert_eq!(p2, want2, "2,{k}");
                    let p1 = cx.inner_product(&phi_trace(&g, 1, k), &phi);
                    assert_eq!(
                        p1,
                        factorial(n as u64 - 1) * (&mi * t.get(1, k) - t.get(k, 1))
                    );
                    if k >= 1 {
                        let p0 = cx.inner_product(&phi_trace(&g, 0, k), &phi);
                        let want0 = factorial(n as u64) / int(kk * (n as i64 + 1 - kk))
                            * (&mi * t.get(0, k) - t.get(k, 0));
                        assert_eq!(p0, want0, "0,{k}");
                    }
                }
            }
        }
    }
}

#[test]
fn one_cochain_lemma() {
    for n in 3..=6 {
        for m in 2..=4 {
            let g = alg(n, m);
            let inv = one_cochain_invariants(&g).unwrap();
            assert_eq!(inv.len(), 1, "({n},{m})");
            assert!(inv[0].ratio_to(&psi(&g)).is_some_and(|x| !x.is_zero()));
        }
    }
}

#[test]
fn module_dimensions() {
    for (id, n, m) in grid() {
        let g = alg(n, m);
        let sol = closed_form_lwv(&g, id).unwrap();
        assert_eq!(
            module_span_from_lwv(&g, &sol).unwrap().len(),
            id.module_dim(m),
            "{id} ({n},{m})"
        );
    }
}

#[test]
fn incompatible_modules_rejected() {
    assert!(solve_lwv(&alg(3, 2), ModuleId::B4).is_err());
    assert!(solve_lwv(&alg(2, 2), ModuleId::A2tr).is_err());
    assert!(closed_form_lwv(&alg(2, 3), ModuleId::A2tr).is_err());
}

#[test]
fn dm_holds_on_a2_vectors() {
    for n in 3..=6 {
        let g = alg(n, 3);
        let dm = DmCondition::new(&g).unwrap();
        for id in [ModuleId::A2tr, ModuleId::A2tf] {
            assert!(dm.holds(&closed_form_lwv(&g, id).unwrap().cochain).unwrap());
        }
        let mut bad = Cochain::zero(g.params(), 2);
        bad.add_term(
            &[BasisIndex::v(0, 1), BasisIndex::v(1, 2)],
            BasisIndex::v(n, 1),
            Scalar::one(),
        );
        assert!(!dm.holds(&bad).unwrap());
    }
}

#[test]
fn solution_json_has_table() {
    let sol = solve_lwv(&alg(3, 2), ModuleId::A2tr).unwrap();
    let j = sol.to_json();
    assert_eq!(j["module"], "A2tr");
    assert_eq!(j["alpha"], "-6/5");
    assert_eq!(j["coefficient_table"].as_array().unwrap().len(), 4);
    assert!(j["pretty"].as_str().unwrap().contains("E^{"));
}
