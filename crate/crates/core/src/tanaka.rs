//! Tanaka prolongations of (g₋, a₀), symmetry dimension bounds and
//! the graded complements used to parametrize deformations.

use std::collections::BTreeMap;

use crate::cochain::{Cochain, Complex};
use crate::error::{Error, Result};
use crate::liealg::{AlgebraParams, BasisIndex, GVector, LieAlgebra};
use crate::linalg::{kernel, Echelon, SparseVec};
use crate::lwv::{closed_form_lwv, ModuleId};
use crate::report::Report;
use crate::scalar::{int, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct ProlongationResult {
    pub a_minus: Vec<GVector>,
    pub a_zero: Vec<GVector>,
    /// Components of positive degree, a₁, a₂, …, up to the top of g.
    pub positive: Vec<Vec<GVector>>,
}

impl ProlongationResult {
    pub fn a_one(&self) -> &[GVector] {
        self.positive.first().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn total_dim(&self) -> usize {
        self.a_minus.len() + self.a_zero.len() + self.positive.iter().map(Vec::len).sum::<usize>()
    }

    pub fn basis(&self) -> Vec<GVector> {
        let mut out = self.a_minus.clone();
        out.extend(self.a_zero.iter().cloned());
        for p in &self.positive {
            out.extend(p.iter().cloned());
        }
        out
    }
}

fn span(vs: &[GVector]) -> Echelon<BasisIndex> {
    Echelon::from_vectors(vs.iter().map(GVector::to_sparse).collect::<Vec<_>>().iter())
}

fn rref_vectors(e: &Echelon<BasisIndex>) -> Vec<GVector> {
    e.rref().iter().map(GVector::from_sparse).collect()
}

/// pr(g₋, a₀): aₖ = {x ∈ gₖ : [x, g₋₁] ⊂ aₖ₋₁} for k ≥ 1.
pub fn tanaka_prolongation(alg: &LieAlgebra, a0: &[GVector]) -> Result<ProlongationResult> {
    for z in a0 {
        alg.check_vector(z)?;
        if z.support().any(|b| b.degree() != 0) {
            return Err(Error::NotInSubspace(format!("{z} is not in g0")));
        }
    }
    let a_zero = rref_vectors(&span(a0));
    let g_minus_one = alg.graded_basis(-1);
    let mut positive = Vec::new();
    let mut prev = span(&a_zero);
    for k in 1.. {
        let gk = alg.graded_basis(k);
        if gk.is_empty() {
            break;
        }
        let images: Vec<SparseVec<(usize, BasisIndex)>> = gk
            .iter()
            .map(|&b| {
                let mut img = BTreeMap::new();
                for (j, &e) in g_minus_one.iter().enumerate() {
                    let br = alg.bracket(&GVector::basis(b), &GVector::basis(e));
                    for (key, x) in prev.normal_form(&br.to_sparse()) {
                        img.insert((j, key), x);
                    }
                }
                img
            })
            .collect();
        let ak: Vec<GVector> = kernel(&images)
            .iter()
            .map(|kv| GVector::from_terms(kv.iter().map(|(j, x)| (gk[*j], x.clone()))))
            .collect();
        prev = span(&ak);
        positive.push(ak);
    }
    Ok(ProlongationResult {
        a_minus: alg
            .negative_basis()
            .into_iter()
            .map(GVector::basis)
            .collect(),
        a_zero,
        positive,
    })
}

/// {z ∈ g₀ : z·φ = 0}, computed as a kernel.
pub fn annihilator(alg: &LieAlgebra, phi: &Cochain) -> Result<Vec<GVector>> {
    if phi.is_zero() {
        return Err(Error::ZeroElement("cochain"));
    }
    if phi.homogeneous_bigrade().is_none() {
        return Err(Error::Inhomogeneous("cochain has several bigrades".into()));
    }
    let cx = Complex::new(alg);
    let g0 = alg.graded_basis(0);
    let images: Vec<SparseVec<_>> = g0
        .iter()
        .map(|&b| Ok(cx.act(&GVector::basis(b), phi)?.sparse()))
        .collect::<Result<_>>()?;
    Ok(kernel(&images)
        .iter()
        .map(|kv| GVector::from_terms(kv.iter().map(|(j, x)| (g0[*j], x.clone()))))
        .collect())
}

pub fn a_phi(alg: &LieAlgebra, phi: &Cochain) -> Result<ProlongationResult> {
    tanaka_prolongation(alg, &annihilator(alg, phi)?)
}

/// Closed-form submaximal symmetry dimension for the module.
pub fn submax_bound(params: AlgebraParams, id: ModuleId) -> Result<usize> {
    id.check(params)?;
    let (n, m) = (params.n, params.m);
    let f_max = params.dim();
    Ok(match id {
        ModuleId::B4 => f_max - m,
        ModuleId::A2tr => f_max - m - 1,
        ModuleId::A2tf => f_max + 1 + usize::from(n == 2) - 2 * m,
    })
}

/// dim a^Φ for the lowest weight vector Φ of the module.
pub fn submax_bound_computed(alg: &LieAlgebra, id: ModuleId) -> Result<usize> {
    let sol = closed_form_lwv(alg, id)?;
    Ok(a_phi(alg, &sol.cochain)?.total_dim())
}

/// True iff a₁ is trivial for the module's lowest weight vector.
pub fn is_prolongation_rigid(params: AlgebraParams, id: ModuleId) -> Result<bool> {
    id.check(params)?;
    Ok(params.n != 2)
}

/// Whether the span of `basis` is closed under the bracket.
pub fn is_subalgebra(alg: &LieAlgebra, basis: &[GVector]) -> bool {
    let e = span(basis);
    basis.iter().enumerate().all(|(i, x)| {
        basis[i + 1..]
            .iter()
            .all(|y| e.contains(&alg.bracket(x, y).to_sparse()))
    })
}

/// The ad_T-invariant complement of a^Φ for the module.
pub fn complement(alg: &LieAlgebra, id: ModuleId) -> Result<Vec<GVector>> {
    id.check(alg.params())?;
    let (n, m) = (alg.n(), alg.m());
    let mut out = vec![alg.z1::<Scalar>()];
    for b in 2..=m {
        out.push(GVector::basis(BasisIndex::e(1, b)));
    }
    if id == ModuleId::A2tf {
        for d in 2..m {
            out.push(GVector::basis(BasisIndex::e(d, m)));
        }
    }
    if n >= 3 {
        out.push(GVector::basis(BasisIndex::Y));
    }
    Ok(out)
}

/// g = a^Φ ⊕ s^⊥ and [T, s^⊥] ⊂ s^⊥.
pub fn verify_complement(alg: &LieAlgebra, id: ModuleId) -> Result<Report> {
    let s = complement(alg, id)?;
    let a = a_phi(alg, &closed_form_lwv(alg, id)?.cochain)?.basis();
    let mut r = Report::new();
    r.push_detail(
        "dimensions_add_up",
        a.len() + s.len() == alg.dim(),
        format!("{} + {} vs {}", a.len(), s.len(), alg.dim()),
    );
    let mut all = a.clone();
    all.extend(s.iter().cloned());
    r.push("direct_sum", span(&all).rank() == alg.dim());
    let t = alg.t_element::<Scalar>();
    let se = span(&s);
    r.push(
        "t_invariant",
        s.iter()
            .all(|x| se.contains(&alg.bracket(&t, x).to_sparse())),
    );
    Ok(r)
}

/// dim a^Φ before and after moving Φ by exp of a strictly upper
/// triangular element of gl_m.
pub fn orbit_spot_check(alg: &LieAlgebra, id: ModuleId) -> Result<(usize, usize)> {
    let m = alg.m();
    let cx = Complex::new(alg);
    let phi = closed_form_lwv(alg, id)?.cochain;
    let mut u = GVector::zero();
    for a in 1..=m {
        for c in a + 1..=m {
            u.add_term(BasisIndex::e(a, c), int((a + 2 * c) as i64));
        }
    }
    let moved = cx.exp_act(&u, &phi)?;
    Ok((
        a_phi(alg, &phi)?.total_dim(),
        a_phi(alg, &moved)?.total_dim(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(n: usize, m: usize) -> LieAlgebra {
        LieAlgebra::try_new(n, m).unwrap()
    }

    #[test]
    fn full_prolongation_is_g() {
        let g = alg(3, 2);
        let g0: Vec<GVector> = g.graded_basis(0).into_iter().map(GVector::basis).collect();
        let p = tanaka_prolongation(&g, &g0).unwrap();
        assert_eq!(p.a_one(), &[GVector::basis(BasisIndex::Y)]);
        assert_eq!(p.total_dim(), g.dim());
    }

    #[test]
    fn rejects_outside_g0() {
        let g = alg(2, 2);
        assert!(tanaka_prolongation(&g, &[GVector::basis(BasisIndex::X)]).is_err());
    }

    #[test]
    fn phi_dimensions() {
        for (id, n, m, d) in [
            (ModuleId::B4, 2, 2, 11),
            (ModuleId::A2tf, 2, 2, 11),
            (ModuleId::A2tr, 3, 2, 12),
        ] {
            let g = alg(n, m);
            let phi = closed_form_lwv(&g, id).unwrap().cochain;
            assert_eq!(a_phi(&g, &phi).unwrap().total_dim(), d);
        }
    }

    #[test]
    fn bounds() {
        let p = |n, m| AlgebraParams::new(n, m).unwrap();
        assert_eq!(submax_bound(p(2, 3), ModuleId::B4).unwrap(), 18);
        assert_eq!(submax_bound(p(2, 2), ModuleId::A2tf).unwrap(), 11);
        assert_eq!(submax_bound(p(4, 2), ModuleId::A2tr).unwrap(), 14);
        assert!(submax_bound(p(3, 2), ModuleId::B4).is_err());
        assert!(!is_prolongation_rigid(p(2, 2), ModuleId::A2tf).unwrap());
        assert!(is_prolongation_rigid(p(5, 2), ModuleId::A2tf).unwrap());
        assert!(!is_prolongation_rigid(p(2, 2), ModuleId::B4).unwrap());
    }

    #[test]
    fn zero_cochain_rejected() {
        let g = alg(2, 2);
        assert!(annihilator(&g, &Cochain::zero(g.params(), 2)).is_err());
    }
}
