//! Cochains C^k(g₋, g) = ∧^k g₋* ⊗ g and their algebraic Hodge theory.
//!
//! Only strictly increasing argument tuples are stored. With the wedge
//! convention (α∧β)(u,v) = α(u)β(v) − α(v)β(u), the stored coefficient of a
//! sorted tuple S and value w is the coefficient of e^S ⊗ w, where e^S is the
//! wedge of dual basis elements in the order of S.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::One;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::liealg::{format_combination, AlgebraParams, BasisIndex, Bigrade, GVector, LieAlgebra};
use crate::linalg::{rank, Echelon, SparseVec};
use crate::scalar::{parse_pq, Coefficient, Scalar};

pub type Args = SmallVec<[BasisIndex; 3]>;

/// Basis monomial e^{args} ⊗ value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub args: Args,
    pub value: BasisIndex,
}

impl Mono {
    pub fn new(args: &[BasisIndex], value: BasisIndex) -> Self {
        Mono {
            args: args.iter().copied().collect(),
            value,
        }
    }

    /// Sum of the dual argument bigrades and the value bigrade.
    pub fn bigrade(&self) -> Bigrade {
        self.args
            .iter()
            .fold(self.value.bigrade(), |acc, a| acc + (-a.bigrade()))
    }

    pub fn degree(&self) -> i32 {
        self.bigrade().degree()
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.args.iter().map(|a| dual_label(*a)).collect();
        if args.is_empty() {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{}⊗{}", args.join("∧"), self.value)
        }
    }
}

fn dual_label(b: BasisIndex) -> String {
    match b {
        BasisIndex::Vel(i, a) => format!("E^{{{i},{a}}}"),
        other => format!("{other}*"),
    }
}

/// Sorts `args`, returning the sorted tuple and the permutation sign, or
/// `None` if an argument repeats.
pub fn sort_args(args: &[BasisIndex]) -> Option<(Args, i64)> {
    let mut v: Args = args.iter().copied().collect();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

fn insert_sorted(args: &Args, x: BasisIndex) -> (Args, usize) {
    let pos = args.partition_point(|a| *a < x);
    let mut out = args.clone();
    out.insert(pos, x);
    (out, pos)
}

fn remove_at(args: &Args, i: usize) -> Args {
    let mut out = args.clone();
    out.remove(i);
    out
}

fn parity(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[derive(Clone, PartialEq)]
pub struct Cochain<S = Scalar> {
    params: AlgebraParams,
    degree: usize,
    entries: BTreeMap<Mono, S>,
}

impl<S: Coefficient> Cochain<S> {
    pub fn zero(params: AlgebraParams, degree: usize) -> Self {
        Cochain {
            params,
            degree,
            entries: BTreeMap::new(),
        }
    }

    pub fn params(&self) -> AlgebraParams {
        self.params
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Mono, &S)> {
        self.entries.iter()
    }

    pub fn monomial(params: AlgebraParams, mono: Mono, c: S) -> Self {
        let mut out = Self::zero(params, mono.args.len());
        out.add_sorted(mono, c);
        out
    }

    /// Adds `c` to the coefficient of an already sorted monomial.
    pub fn add_sorted(&mut self, mono: Mono, c: S) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(mono.args.len(), self.degree);
        use std::collections::btree_map::Entry;
        match self.entries.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// Adds `c · (dual of args[0]) ∧ … ∧ (dual of args[k-1]) ⊗ value`, with
    /// `args` in any order.
    pub fn add_term(&mut self, args: &[BasisIndex], value: BasisIndex, c: S) {
        if let Some((sorted, sign)) = sort_args(args) {
            self.add_sorted(
                Mono {
                    args: sorted,
                    value,
                },
                c.mul_int(sign),
            );
        }
    }

    pub fn add_wedge(&mut self, args: &[BasisIndex], value: &GVector<S>, c: &S) {
        for (w, x) in value.iter() {
            self.add_term(args, *w, x.clone() * c.clone());
        }
    }

    /// Coefficient of `value` in φ(args), for arguments in any order.
    pub fn coefficient(&self, args: &[BasisIndex], value: BasisIndex) -> S {
        match sort_args(args) {
            None => S::zero(),
            Some((sorted, sign)) => self
                .entries
                .get(&Mono {
                    args: sorted,
                    value,
                })
                .map(|c| c.mul_int(sign))
                .unwrap_or_else(S::zero),
        }
    }

    /// φ(args) on basis arguments.
    pub fn eval(&self, args: &[BasisIndex]) -> GVector<S> {
        let Some((sorted, sign)) = sort_args(args) else {
            return GVector::zero();
        };
        let lo = Mono {
            args: sorted.clone(),
            value: BasisIndex::X,
        };
        let mut out = GVector::zero();
        for (m, c) in self.entries.range(lo..) {
            if m.args != sorted {
                break;
            }
            out.add_term(m.value, c.mul_int(sign));
        }
        out
    }

    /// φ on algebra elements, extended multilinearly.
    pub fn eval_vectors(&self, xs: &[GVector<S>]) -> GVector<S> {
        let mut out = GVector::zero();
        self.eval_rec(xs, &mut Vec::new(), S::one(), &mut out);
        out
    }

    fn eval_rec(
        &self,
        xs: &[GVector<S>],
        chosen: &mut Vec<BasisIndex>,
        c: S,
        out: &mut GVector<S>,
    ) {
        if chosen.len() == xs.len() {
            let v = self.eval(chosen);
            out.add_scaled(&v, &c);
            return;
        }
        for (b, x) in xs[chosen.len()].iter() {
            if !b.is_negative() || chosen.contains(b) {
                continue;
            }
            chosen.push(*b);
            self.eval_rec(xs, chosen, c.clone() * x.clone(), out);
            chosen.pop();
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.params, self.degree);
        for (m, x) in &self.entries {
            out.add_sorted(m.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn scale_scalar(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.params, self.degree);
        for (m, x) in &self.entries {
            out.add_sorted(m.clone(), x.mul_scalar(c));
        }
        out
    }

    pub fn map<T: Coefficient>(&self, f: impl Fn(&S) -> T) -> Cochain<T> {
        let mut out = Cochain::zero(self.params, self.degree);
        for (m, x) in &self.entries {
            out.add_sorted(m.clone(), f(x));
        }
        out
    }

    pub fn filter(&self, keep: impl Fn(&Mono) -> bool) -> Self {
        Cochain {
            params: self.params,
            degree: self.degree,
            entries: self
                .entries
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn components(&self) -> BTreeMap<Bigrade, Self> {
        let mut out: BTreeMap<Bigrade, Self> = BTreeMap::new();
        for (m, c) in &self.entries {
            out.entry(m.bigrade())
                .or_insert_with(|| Self::zero(self.params, self.degree))
                .add_sorted(m.clone(), c.clone());
        }
        out
    }

    /// The bigrade if the cochain is nonzero and homogeneous.
    pub fn homogeneous_bigrade(&self) -> Option<Bigrade> {
        let mut it = self.entries.keys().map(Mono::bigrade);
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// Component of least Z-degree.
    pub fn lowest_degree_component(&self) -> Self {
        match self.entries.keys().map(Mono::degree).min() {
            None => self.clone(),
            Some(d) => self.filter(|m| m.degree() == d),
        }
    }

    /// True iff every entry with X among its arguments vanishes.
    pub fn x_insertion_is_zero(&self) -> bool {
        self.entries
            .keys()
            .all(|m| !m.args.contains(&BasisIndex::X))
    }

    /// Arguments and values both lie in V.
    pub fn is_vel_valued_on_vel(&self) -> bool {
        self.entries.keys().all(|m| {
            matches!(m.value, BasisIndex::Vel(..))
                && m.args.iter().all(|a| matches!(a, BasisIndex::Vel(..)))
        })
    }

    /// κ(g^i, g^j) ⊂ g^{i+j+1} ∩ g^{min(i,j)−1}, checked monomial-wise.
    pub fn strong_regularity_holds(&self) -> bool {
        self.entries.keys().all(|m| {
            let (p, q) = (m.args[0].degree(), m.args[1].degree());
            let d = m.value.degree();
            d > p + q && d >= p.min(q) - 1
        })
    }
}

impl Cochain<Scalar> {
    pub fn from_sparse(params: AlgebraParams, degree: usize, v: &SparseVec<Mono>) -> Self {
        let mut out = Self::zero(params, degree);
        for (m, c) in v {
            out.add_sorted(m.clone(), c.clone());
        }
        out
    }

    pub fn sparse(&self) -> SparseVec<Mono> {
        self.entries.clone()
    }

    /// Coefficient of a sorted monomial.
    pub fn get(&self, m: &Mono) -> Scalar {
        self.entries.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// λ with `self = λ·other`, if one exists. Zero is proportional only
    /// to zero (with λ = 0).
    pub fn ratio_to(&self, other: &Cochain) -> Option<Scalar> {
        let Some((m, c)) = other.entries.iter().next() else {
            return self.is_zero().then(Scalar::zero);
        };
        let lambda = self.get(m) / c;
        (*self == other.scale_scalar(&lambda)).then_some(lambda)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut grouped: BTreeMap<Args, GVector> = BTreeMap::new();
        for (m, c) in &self.entries {
            grouped
                .entry(m.args.clone())
                .or_default()
                .add_term(m.value, c.clone());
        }
        let entries: Vec<serde_json::Value> = grouped
            .into_iter()
            .map(|(args, v)| {
                serde_json::json!({
                    "args": args.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                    "value": v.to_json(),
                })
            })
            .collect();
        serde_json::json!({ "degree": self.degree, "entries": entries })
    }

    pub fn from_json(params: AlgebraParams, v: &serde_json::Value) -> Result<Self> {
        let bad = |s: &str| Error::Format(format!("cochain JSON: {s}"));
        let degree = v
            .get("degree")
            .and_then(|d| d.as_u64())
            .ok_or_else(|| bad("missing degree"))? as usize;
        let mut out = Self::zero(params, degree);
        let entries = v
            .get("entries")
            .and_then(|e| e.as_array())
            .ok_or_else(|| bad("missing entries"))?;
        for e in entries {
            let args: Vec<BasisIndex> = e
                .get("args")
                .and_then(|a| a.as_array())
                .ok_or_else(|| bad("missing args"))?
                .iter()
                .map(|a| {
                    a.as_str()
                        .ok_or_else(|| bad("argument label must be a string"))
                        .and_then(|s| s.parse())
                })
                .collect::<Result<_>>()?;
            if args.len() != degree {
                return Err(bad("argument count differs from degree"));
            }
            let value = e.get("value").ok_or_else(|| bad("missing value"))?;
            let value = value
                .as_object()
                .ok_or_else(|| bad("value must be an object"))?;
            for (k, c) in value {
                let c = c
                    .as_str()
                    .ok_or_else(|| bad("coefficient must be a string"))?;
                out.add_term(&args, k.parse()?, parse_pq(c)?);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Cochain<Scalar> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            format_combination(self.entries.iter().map(|(m, c)| (m.to_string(), c.clone())))
        )
    }
}

impl<S: Coefficient + fmt::Debug> fmt::Debug for Cochain<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(m, c)| format!("({c:?})*{m}"))
            .collect();
        write!(
            f,
            "[deg {}] {}",
            self.degree,
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ")
            }
        )
    }
}

impl<S: Coefficient> std::ops::Add for &Cochain<S> {
    type Output = Cochain<S>;
    fn add(self, rhs: &Cochain<S>) -> Cochain<S> {
        assert_eq!(
            self.degree, rhs.degree,
            "adding cochains of different degree"
        );
        let mut out = self.clone();
        for (m, c) in &rhs.entries {
            out.add_sorted(m.clone(), c.clone());
        }
        out
    }
}

impl<S: Coefficient> std::ops::Sub for &Cochain<S> {
    type Output = Cochain<S>;
    fn sub(self, rhs: &Cochain<S>) -> Cochain<S> {
        self + &(-rhs)
    }
}

impl<S: Coefficient> std::ops::Neg for &Cochain<S> {
    type Output = Cochain<S>;
    fn neg(self) -> Cochain<S> {
        self.map(|c| -c.clone())
    }
}

/// Which arguments a monomial basis ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgDomain {
    /// All of g₋ (X and V).
    Negative,
    /// V only.
    Vel,
}

/// Operators of the complex for a fixed algebra.
pub struct Complex<'a> {
    alg: &'a LieAlgebra,
    neg: Vec<BasisIndex>,
    /// s ↦ pairs x < y in g₋ with c = coefficient of s in [x, y].
    pairs_to: HashMap<BasisIndex, Vec<(BasisIndex, BasisIndex, i64)>>,
    by_bigrade: HashMap<Bigrade, Vec<BasisIndex>>,
}

impl<'a> Complex<'a> {
    pub fn new(alg: &'a LieAlgebra) -> Self {
        let neg = alg.negative_basis();
        let mut pairs_to: HashMap<BasisIndex, Vec<(BasisIndex, BasisIndex, i64)>> = HashMap::new();
        for (i, &x) in neg.iter().enumerate() {
            for &y in &neg[i + 1..] {
                for (s, c) in alg.bracket_basis(x, y) {
                    pairs_to.entry(s).or_default().push((x, y, c));
                }
            }
        }
        let mut by_bigrade: HashMap<Bigrade, Vec<BasisIndex>> = HashMap::new();
        for &b in alg.basis() {
            by_bigrade.entry(b.bigrade()).or_default().push(b);
        }
        Complex {
            alg,
            neg,
            pairs_to,
            by_bigrade,
        }
    }

    pub fn algebra(&self) -> &LieAlgebra {
        self.alg
    }

    /// ‖e^S ⊗ w‖² = ‖w‖² Π 1/‖s‖².
    pub fn norm2(&self, m: &Mono) -> Scalar {
        m.args
            .iter()
            .fold(self.alg.norm2(m.value), |acc, a| acc / self.alg.norm2(*a))
    }

    pub fn inner_product<S: Coefficient>(&self, a: &Cochain<S>, b: &Cochain<S>) -> S {
        let mut acc = S::zero();
        for (m, x) in &a.entries {
            if let Some(y) = b.entries.get(m) {
                acc = acc + (x.clone() * y.clone()).mul_scalar(&self.norm2(m));
            }
        }
        acc
    }

    /// Chevalley–Eilenberg differential of the g₋-module g.
    pub fn differential<S: Coefficient>(&self, phi: &Cochain<S>) -> Cochain<S> {
        let mut out = Cochain::zero(phi.params, phi.degree + 1);
        for (mono, c) in &phi.entries {
            let s = &mono.args;
            let w = mono.value;
            for &x in &self.neg {
                if s.contains(&x) {
                    continue;
                }
                let bx = self.alg.bracket_basis(x, w);
                if bx.is_empty() {
                    continue;
                }
                let (t, pos) = insert_sorted(s, x);
                for (w2, cc) in bx {
                    out.add_sorted(
                        Mono {
                            args: t.clone(),
                            value: w2,
                        },
                        c.mul_int(parity(pos) * cc),
                    );
                }
            }
            for (ps, sv) in s.iter().enumerate() {
                let Some(pairs) = self.pairs_to.get(sv) else {
                    continue;
                };
                let r = remove_at(s, ps);
                for &(x, y, cxy) in pairs {
                    if r.contains(&x) || r.contains(&y) {
                        continue;
                    }
                    let (t1, _) = insert_sorted(&r, x);
                    let (t, j) = insert_sorted(&t1, y);
                    let i = t.iter().position(|a| *a == x).expect("inserted");
                    out.add_sorted(
                        Mono { args: t, value: w },
                        c.mul_int(parity(i + j) * cxy * parity(ps)),
                    );
                }
            }
        }
        out
    }

    /// Metric adjoint of the differential of C^k(g, g), restricted to
    /// cochains annihilating p.
    pub fn codifferential<S: Coefficient>(&self, psi: &Cochain<S>) -> Result<Cochain<S>> {
        if psi.degree == 0 {
            return Err(Error::Params("codifferential needs degree >= 1".into()));
        }
        let mut out = Cochain::zero(psi.params, psi.degree - 1);
        for (nu, d) in &psi.entries {
            let t = &nu.args;
            let w = nu.value;
            let n_nu = self.norm2(nu);
            let push = |mu: Mono, coeff: i64, out: &mut Cochain<S>| {
                let f = &n_nu / self.norm2(&mu) * Scalar::from_integer(coeff.into());
                out.add_sorted(mu, d.mul_scalar(&f));
            };
            for (i, &x) in t.iter().enumerate() {
                let rest = remove_at(t, i);
                for &(u, c) in self.alg.preimage(x, w) {
                    push(
                        Mono {
                            args: rest.clone(),
                            value: u,
                        },
                        parity(i) * c,
                        &mut out,
                    );
                }
            }
            for i in 0..t.len() {
                for j in i + 1..t.len() {
                    let br = self.alg.bracket_basis(t[i], t[j]);
                    if br.is_empty() {
                        continue;
                    }
                    let r = remove_at(&remove_at(t, j), i);
                    for (s, cs) in br {
                        if r.contains(&s) {
                            continue;
                        }
                        let (args, pos) = insert_sorted(&r, s);
                        push(
                            Mono { args, value: w },
                            parity(i + j) * cs * parity(pos),
                            &mut out,
                        );
                    }
                }
            }
        }
        Ok(out)
    }

    /// □ = ∂∂* + ∂*∂.
    pub fn laplacian<S: Coefficient>(&self, phi: &Cochain<S>) -> Result<Cochain<S>> {
        let a = self.differential(&self.codifferential(phi)?);
        let b = self.codifferential(&self.differential(phi))?;
        Ok(&a + &b)
    }

    /// Natural action of z ∈ g₀ or z ∈ span{X}.
    pub fn act<S: Coefficient>(&self, z: &GVector<S>, phi: &Cochain<S>) -> Result<Cochain<S>> {
        let in_g0 = z.support().all(|b| b.bigrade() == Bigrade::new(0, 0));
        let in_x = z.support().all(|b| b == BasisIndex::X);
        if !(in_g0 || in_x) {
            return Err(Error::Inhomogeneous(format!("{z:?}")));
        }
        Ok(self.act_unchecked(z, phi))
    }

    fn act_unchecked<S: Coefficient>(&self, z: &GVector<S>, phi: &Cochain<S>) -> Cochain<S> {
        let mut out = Cochain::zero(phi.params, phi.degree);
        for (bz, cz) in z.iter() {
            for (mono, c) in &phi.entries {
                let cc = cz.clone() * c.clone();
                for (w2, k) in self.alg.bracket_basis(*bz, mono.value) {
                    out.add_sorted(
                        Mono {
                            args: mono.args.clone(),
                            value: w2,
                        },
                        cc.mul_int(k),
                    );
                }
                for (p, sp) in mono.args.iter().enumerate() {
                    for &(v, d) in self.alg.preimage(*bz, *sp) {
                        if !v.is_negative() {
                            continue;
                        }
                        let mut args = mono.args.clone();
                        args[p] = v;
                        out.add_term(&args, mono.value, cc.mul_int(-d));
                    }
                }
            }
        }
        out
    }

    /// Σ_k (z·)^k φ / k! for z with nilpotent action.
    pub fn exp_act(&self, z: &GVector, phi: &Cochain) -> Result<Cochain> {
        let mut sum = phi.clone();
        let mut term = phi.clone();
        for k in 1..=64 {
            term = self
                .act(z, &term)?
                .scale_scalar(&Scalar::new(1.into(), k.into()));
            if term.is_zero() {
                return Ok(sum);
            }
            sum = &sum + &term;
        }
        Err(Error::NotNilpotent)
    }

    /// Sorted monomials e^S ⊗ w of degree `k`, optionally of one bigrade.
    pub fn monomial_basis(
        &self,
        k: usize,
        bigrade: Option<Bigrade>,
        domain: ArgDomain,
    ) -> Vec<Mono> {
        let args: Vec<BasisIndex> = match domain {
            ArgDomain::Negative => self.neg.clone(),
            ArgDomain::Vel => self.alg.vel_basis(),
        };
        let mut out = Vec::new();
        let mut chosen: Vec<BasisIndex> = Vec::new();
        self.enumerate(&args, 0, k, &mut chosen, bigrade, &mut out);
        out.sort();
        out
    }

    fn enumerate(
        &self,
        args: &[BasisIndex],
        start: usize,
        k: usize,
        chosen: &mut Vec<BasisIndex>,
        bigrade: Option<Bigrade>,
        out: &mut Vec<Mono>,
    ) {
        if chosen.len() == k {
            let dual = chosen
                .iter()
                .fold(Bigrade::new(0, 0), |acc, a| acc + (-a.bigrade()));
            let values: Vec<BasisIndex> = match bigrade {
                Some(g) => {
                    let need = Bigrade::new(g.s - dual.s, g.t - dual.t);
                    self.by_bigrade.get(&need).cloned().unwrap_or_default()
                }
                None => self.alg.basis().to_vec(),
            };
            for w in values {
                out.push(Mono::new(chosen, w));
            }
            return;
        }
        for i in start..args.len() {
            chosen.push(args[i]);
            self.enumerate(args, i + 1, k, chosen, bigrade, out);
            chosen.pop();
        }
    }

    /// Bigrades occurring in C^k with the given arguments.
    pub fn bigrades(&self, k: usize, domain: ArgDomain) -> Vec<Bigrade> {
        let mut gs: Vec<Bigrade> = self
            .monomial_basis(k, None, domain)
            .iter()
            .map(Mono::bigrade)
            .collect();
        gs.sort();
        gs.dedup();
        gs
    }
}

/// The DM condition ϑ(φ) ∈ img δ, for n ≥ 3.
pub struct DmCondition {
    n: usize,
    image: Echelon<Mono>,
}

impl DmCondition {
    pub fn new(alg: &LieAlgebra) -> Result<Self> {
        let (n, m) = (alg.n(), alg.m());
        if n < 3 {
            return Err(Error::Incompatible(
                "the DM condition is not present for 3rd order ODE (n = 2)".into(),
            ));
        }
        let mut image = Echelon::new();
        for gen in Self::image_generators(alg) {
            image.insert(&gen.sparse());
        }
        let _ = m;
        Ok(DmCondition { n, image })
    }

    /// δ(E^{i,a} ⊗ X) for E_{i,a} ∈ F, each reduced mod F.
    pub fn image_generators(alg: &LieAlgebra) -> Vec<Cochain> {
        let (n, m) = (alg.n(), alg.m());
        let mut out = Vec::new();
        for i in 0..n {
            for a in 1..=m {
                let x = BasisIndex::v(i, a);
                let mut c = Cochain::zero(alg.params(), 2);
                for b in 1..=m {
                    let y = BasisIndex::v(n - 1, b);
                    c.add_term(&[x, y], BasisIndex::v(n, b), <Scalar as One>::one());
                }
                out.push(c);
            }
        }
        out
    }

    fn in_f(&self, b: BasisIndex) -> bool {
        matches!(b, BasisIndex::Vel(i, _) if (i as usize) < self.n)
    }

    /// φ restricted to ∧²F, taken mod F.
    pub fn theta(&self, phi: &Cochain) -> Cochain {
        phi.filter(|mo| {
            mo.args.iter().all(|a| self.in_f(*a))
                && matches!(mo.value, BasisIndex::Vel(i, _) if i as usize == self.n)
        })
    }

    pub fn normal_form(&self, phi: &Cochain) -> SparseVec<Mono> {
        self.image.normal_form(&self.theta(phi).sparse())
    }

    pub fn holds(&self, phi: &Cochain) -> Result<bool> {
        if phi.degree() != 2 || !phi.is_vel_valued_on_vel() {
            return Err(Error::Params(
                "the DM condition applies to V-valued 2-cochains on V".into(),
            ));
        }
        Ok(self.image.contains(&self.theta(phi).sparse()))
    }

    pub fn image_contains(&self, c: &Cochain) -> bool {
        self.image.contains(&c.sparse())
    }
}

/// Dimensions in one bigraded piece of C^k: the image of ∂ from C^{k−1},
/// the image of ∂* from C^{k+1} and ker □.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HodgeDims {
    pub bigrade: Bigrade,
    pub total: usize,
    pub image_d: usize,
    pub image_codiff: usize,
    pub harmonic: usize,
}

impl HodgeDims {
    pub fn balanced(&self) -> bool {
        self.total == self.image_d + self.image_codiff + self.harmonic
    }
}

impl Complex<'_> {
    pub fn hodge_dims(&self, k: usize, bigrade: Bigrade) -> Result<HodgeDims> {
        if k == 0 {
            return Err(Error::Params("hodge_dims needs k >= 1".into()));
        }
        let p = self.alg.params();
        let unit = |mo: &Mono| Cochain::monomial(p, mo.clone(), <Scalar as One>::one());
        let basis = |j| self.monomial_basis(j, Some(bigrade), ArgDomain::Negative);
        let (lower, middle, upper) = (basis(k - 1), basis(k), basis(k + 1));
        let d_img = operator_images(&lower, |mo| self.differential(&unit(mo)).sparse());
        let c_img = operator_images(&upper, |mo| {
            self.codifferential(&unit(mo))
                .expect("degree >= 1")
                .sparse()
        });
        let l_img = operator_images(&middle, |mo| {
            self.laplacian(&unit(mo)).expect("degree >= 1").sparse()
        });
        Ok(HodgeDims {
            bigrade,
            total: middle.len(),
            image_d: rank(&d_img),
            image_codiff: rank(&c_img),
            harmonic: middle.len() - rank(&l_img),
        })
    }
}

/// Images of every basis monomial under a linear operator.
pub fn operator_images(
    basis: &[Mono],
    op: impl Fn(&Mono) -> SparseVec<Mono> + Sync + Send,
) -> Vec<SparseVec<Mono>> {
    use rayon::prelude::*;
    basis.par_iter().map(op).collect()
}
