//! The graded Lie algebra g = (sl₂ × gl_m) ⋉ (SⁿR² ⊗ Rᵐ).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::scalar::{factorial, frac, int, parse_pq, to_pq, Coefficient, Scalar};

/// Order `n + 1` of the ODE and number `m` of dependent variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlgebraParams {
    pub n: usize,
    pub m: usize,
}

/// Hard limits from the `u8` basis labels.
pub const MAX_N: usize = 60;
pub const MAX_M: usize = 60;

impl AlgebraParams {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n < 2 || m < 2 {
            return Err(Error::Params(format!(
                "need n >= 2 and m >= 2, got n={n}, m={m}"
            )));
        }
        if n > MAX_N || m > MAX_M {
            return Err(Error::Params(format!(
                "n={n}, m={m} exceeds supported size"
            )));
        }
        Ok(AlgebraParams { n, m })
    }

    /// dim g = m² + (n+1)m + 3, the maximal symmetry dimension.
    pub fn dim(&self) -> usize {
        self.m * self.m + (self.n + 1) * self.m + 3
    }

    pub fn dim_minus(&self) -> usize {
        1 + (self.n + 1) * self.m
    }
}

/// Basis element labels in canonical order.
///
/// `Glm(a, b)` is the matrix unit e_a^b (maps w_b to w_a); `Vel(i, a)` is
/// E_{i,a}. Indices are 1-based for `a, b` and 0-based for `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisIndex {
    X,
    H,
    Y,
    Glm(u8, u8),
    Vel(u8, u8),
}

use BasisIndex::{Glm, Vel, H, X, Y};

impl BasisIndex {
    pub fn e(a: usize, b: usize) -> Self {
        Glm(a as u8, b as u8)
    }

    pub fn v(i: usize, a: usize) -> Self {
        Vel(i as u8, a as u8)
    }

    pub fn bigrade(self) -> Bigrade {
        match self {
            X => Bigrade::new(-1, 0),
            Y => Bigrade::new(1, 0),
            H | Glm(..) => Bigrade::new(0, 0),
            Vel(i, _) => Bigrade::new(-(i as i32), -1),
        }
    }

    pub fn degree(self) -> i32 {
        self.bigrade().degree()
    }

    pub fn is_negative(self) -> bool {
        self.degree() < 0
    }

    pub fn in_range(self, p: AlgebraParams) -> bool {
        let (n, m) = (p.n as u8, p.m as u8);
        match self {
            X | H | Y => true,
            Glm(a, b) => (1..=m).contains(&a) && (1..=m).contains(&b),
            Vel(i, a) => i <= n && (1..=m).contains(&a),
        }
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            X => write!(f, "X"),
            H => write!(f, "H"),
            Y => write!(f, "Y"),
            Glm(a, b) => write!(f, "e_{a}_{b}"),
            Vel(i, a) => write!(f, "E_{i}_{a}"),
        }
    }
}

impl FromStr for BasisIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Format(format!("unknown basis label {s:?}"));
        match s {
            "X" => return Ok(X),
            "H" => return Ok(H),
            "Y" => return Ok(Y),
            _ => {}
        }
        let parts: Vec<&str> = s.split('_').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let i: u8 = parts[1].parse().map_err(|_| bad())?;
        let j: u8 = parts[2].parse().map_err(|_| bad())?;
        match parts[0] {
            "e" => Ok(Glm(i, j)),
            "E" => Ok(Vel(i, j)),
            _ => Err(bad()),
        }
    }
}

/// Joint (Z₁, Z₂)-eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bigrade {
    pub s: i32,
    pub t: i32,
}

impl Bigrade {
    pub const fn new(s: i32, t: i32) -> Self {
        Bigrade { s, t }
    }

    /// Eigenvalue of the grading element Z = Z₁ + Z₂.
    pub fn degree(self) -> i32 {
        self.s + self.t
    }
}

impl std::ops::Add for Bigrade {
    type Output = Bigrade;
    fn add(self, o: Bigrade) -> Bigrade {
        Bigrade::new(self.s + o.s, self.t + o.t)
    }
}

impl std::ops::Neg for Bigrade {
    type Output = Bigrade;
    fn neg(self) -> Bigrade {
        Bigrade::new(-self.s, -self.t)
    }
}

impl fmt::Display for Bigrade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.s, self.t)
    }
}

/// Sparse linear combination of basis elements, zero coefficients elided.
#[derive(Clone, PartialEq)]
pub struct GVector<S = Scalar> {
    terms: BTreeMap<BasisIndex, S>,
}

impl<S: Coefficient> Default for GVector<S> {
    fn default() -> Self {
        GVector {
            terms: BTreeMap::new(),
        }
    }
}

impl<S: Coefficient> GVector<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: BasisIndex) -> Self {
        Self::term(b, S::one())
    }

    pub fn term(b: BasisIndex, c: S) -> Self {
        let mut v = Self::zero();
        v.add_term(b, c);
        v
    }

    pub fn from_terms(ts: impl IntoIterator<Item = (BasisIndex, S)>) -> Self {
        let mut v = Self::zero();
        for (b, c) in ts {
            v.add_term(b, c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, b: BasisIndex) -> S {
        self.terms.get(&b).cloned().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisIndex, &S)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = BasisIndex> + '_ {
        self.terms.keys().copied()
    }

    pub fn add_term(&mut self, b: BasisIndex, c: S) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(b) {
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

    pub fn add_scaled(&mut self, other: &GVector<S>, c: &S) {
        for (b, x) in &other.terms {
            self.add_term(*b, x.clone() * c.clone());
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_terms(self.terms.iter().map(|(b, x)| (*b, x.clone() * c.clone())))
    }

    pub fn scale_scalar(&self, c: &Scalar) -> Self {
        Self::from_terms(self.terms.iter().map(|(b, x)| (*b, x.mul_scalar(c))))
    }

    pub fn map<T: Coefficient>(&self, f: impl Fn(&S) -> T) -> GVector<T> {
        GVector::from_terms(self.terms.iter().map(|(b, x)| (*b, f(x))))
    }

    /// Components of degree < 0, i.e. the image in g/p.
    pub fn negative_part(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(b, _)| b.is_negative())
                .map(|(b, x)| (*b, x.clone())),
        )
    }

    pub fn filtration_degree(&self) -> Result<i32> {
        self.terms
            .keys()
            .map(|b| b.degree())
            .min()
            .ok_or(Error::ZeroElement("filtration degree"))
    }

    /// Lowest-degree graded component.
    pub fn leading_part(&self) -> Result<Self> {
        let d = self.filtration_degree()?;
        Ok(self.degree_component(d))
    }

    pub fn degree_component(&self, d: i32) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(b, _)| b.degree() == d)
                .map(|(b, x)| (*b, x.clone())),
        )
    }

    pub fn bigrade_decompose(&self) -> BTreeMap<Bigrade, Self> {
        let mut out: BTreeMap<Bigrade, Self> = BTreeMap::new();
        for (b, x) in &self.terms {
            out.entry(b.bigrade()).or_default().add_term(*b, x.clone());
        }
        out
    }
}

impl GVector<Scalar> {
    pub fn to_sparse(&self) -> SparseVec<BasisIndex> {
        self.terms.clone()
    }

    pub fn from_sparse(v: &SparseVec<BasisIndex>) -> Self {
        Self::from_terms(v.iter().map(|(b, c)| (*b, c.clone())))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .terms
            .iter()
            .map(|(b, c)| (b.to_string(), serde_json::Value::String(to_pq(c))))
            .collect();
        serde_json::Value::Object(map)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Format("algebra element must be a JSON object".into()))?;
        let mut out = Self::zero();
        for (k, c) in obj {
            let c = c.as_str().ok_or_else(|| {
                Error::Format(format!("coefficient of {k} must be a \"p/q\" string"))
            })?;
            out.add_term(k.parse()?, parse_pq(c)?);
        }
        Ok(out)
    }
}

impl<S: Coefficient> std::ops::Add for &GVector<S> {
    type Output = GVector<S>;
    fn add(self, rhs: &GVector<S>) -> GVector<S> {
        let mut out = self.clone();
        for (b, x) in &rhs.terms {
            out.add_term(*b, x.clone());
        }
        out
    }
}

impl<S: Coefficient> std::ops::Sub for &GVector<S> {
    type Output = GVector<S>;
    fn sub(self, rhs: &GVector<S>) -> GVector<S> {
        let mut out = self.clone();
        for (b, x) in &rhs.terms {
            out.add_term(*b, -x.clone());
        }
        out
    }
}

impl<S: Coefficient> std::ops::Neg for &GVector<S> {
    type Output = GVector<S>;
    fn neg(self) -> GVector<S> {
        GVector::from_terms(self.terms.iter().map(|(b, x)| (*b, -x.clone())))
    }
}

impl<S: Coefficient + fmt::Debug> fmt::Debug for GVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| format!("({c:?})*{b}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for GVector<Scalar> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            format_combination(self.terms.iter().map(|(b, c)| (b.to_string(), c.clone())))
        )
    }
}

/// Renders `Σ c·label` with unit coefficients suppressed.
pub(crate) fn format_combination(terms: impl Iterator<Item = (String, Scalar)>) -> String {
    use num_traits::Signed;
    let mut out = String::new();
    for (idx, (label, c)) in terms.enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !a.is_one() {
            if a.is_integer() {
                out.push_str(&format!("{}*", a.numer()));
            } else {
                out.push_str(&format!("{}/{}*", a.numer(), a.denom()));
            }
        }
        out.push_str(&label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub type Terms = SmallVec<[(BasisIndex, i64); 2]>;

/// Structure constants and precomputed tables for fixed (n, m).
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    params: AlgebraParams,
    basis: Vec<BasisIndex>,
    /// (x, w) ↦ [(u, c)] with c the w-coefficient of [x, u].
    preimage: HashMap<(BasisIndex, BasisIndex), Vec<(BasisIndex, i64)>>,
}

impl LieAlgebra {
    pub fn new(params: AlgebraParams) -> Self {
        let (n, m) = (params.n, params.m);
        let mut basis = vec![X, H, Y];
        for a in 1..=m {
            for b in 1..=m {
                basis.push(BasisIndex::e(a, b));
            }
        }
        for i in 0..=n {
            for a in 1..=m {
                basis.push(BasisIndex::v(i, a));
            }
        }
        let mut alg = LieAlgebra {
            params,
            basis,
            preimage: HashMap::new(),
        };
        let mut pre: HashMap<(BasisIndex, BasisIndex), Vec<(BasisIndex, i64)>> = HashMap::new();
        for &x in &alg.basis {
            for &u in &alg.basis {
                for (w, c) in alg.bracket_basis(x, u) {
                    pre.entry((x, w)).or_default().push((u, c));
                }
            }
        }
        alg.preimage = pre;
        alg
    }

    pub fn try_new(n: usize, m: usize) -> Result<Self> {
        Ok(Self::new(AlgebraParams::new(n, m)?))
    }

    pub fn params(&self) -> AlgebraParams {
        self.params
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn m(&self) -> usize {
        self.params.m
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Full basis in canonical order.
    pub fn basis(&self) -> &[BasisIndex] {
        &self.basis
    }

    /// Basis of g₋ in canonical order: X, then all E_{i,a}.
    pub fn negative_basis(&self) -> Vec<BasisIndex> {
        self.basis
            .iter()
            .copied()
            .filter(|b| b.is_negative())
            .collect()
    }

    /// Basis of the graded piece g_k.
    pub fn graded_basis(&self, k: i32) -> Vec<BasisIndex> {
        self.basis
            .iter()
            .copied()
            .filter(|b| b.degree() == k)
            .collect()
    }

    /// Basis of V = SⁿR² ⊗ Rᵐ.
    pub fn vel_basis(&self) -> Vec<BasisIndex> {
        self.basis
            .iter()
            .copied()
            .filter(|b| matches!(b, Vel(..)))
            .collect()
    }

    pub fn check_index(&self, b: BasisIndex) -> Result<()> {
        if b.in_range(self.params) {
            Ok(())
        } else {
            Err(Error::Index(format!(
                "{b} for n={}, m={}",
                self.n(),
                self.m()
            )))
        }
    }

    pub fn check_vector<S: Coefficient>(&self, x: &GVector<S>) -> Result<()> {
        x.support().try_for_each(|b| self.check_index(b))
    }

    /// Bracket of two basis elements as integer combination.
    pub fn bracket_basis(&self, a: BasisIndex, b: BasisIndex) -> Terms {
        let n = self.params.n as i64;
        let neg = |t: Terms| -> Terms { t.into_iter().map(|(k, c)| (k, -c)).collect() };
        match (a, b) {
            (H, X) => smallvec![(X, 2)],
            (H, Y) => smallvec![(Y, -2)],
            (X, Y) => smallvec![(H, 1)],
            (X, H) | (Y, H) | (Y, X) => neg(self.bracket_basis(b, a)),
            (Glm(p, q), Glm(r, s)) => {
                let mut t: Terms = SmallVec::new();
                if r == q {
                    t.push((Glm(p, s), 1));
                }
                if p == s {
                    if let Some(pos) = t.iter().position(|(k, _)| *k == Glm(r, q)) {
                        t[pos].1 -= 1;
                        if t[pos].1 == 0 {
                            t.remove(pos);
                        }
                    } else {
                        t.push((Glm(r, q), -1));
                    }
                }
                t
            }
            (X, Vel(i, c)) => {
                if (i as usize) < self.params.n {
                    smallvec![(Vel(i + 1, c), 1)]
                } else {
                    SmallVec::new()
                }
            }
            (H, Vel(i, c)) => {
                let w = 2 * i as i64 - n;
                if w == 0 {
                    SmallVec::new()
                } else {
                    smallvec![(Vel(i, c), w)]
                }
            }
            (Y, Vel(i, c)) => {
                if i == 0 {
                    SmallVec::new()
                } else {
                    let i = i as i64;
                    smallvec![(Vel((i - 1) as u8, c), i * (n + 1 - i))]
                }
            }
            (Glm(p, q), Vel(i, c)) => {
                if c == q {
                    smallvec![(Vel(i, p), 1)]
                } else {
                    SmallVec::new()
                }
            }
            (Vel(..), X | H | Y | Glm(..)) => neg(self.bracket_basis(b, a)),
            _ => SmallVec::new(),
        }
    }

    /// All `(u, c)` with `[x, u]` having coefficient `c` on `w`.
    pub fn preimage(&self, x: BasisIndex, w: BasisIndex) -> &[(BasisIndex, i64)] {
        self.preimage.get(&(x, w)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn bracket<S: Coefficient>(&self, x: &GVector<S>, y: &GVector<S>) -> GVector<S> {
        let mut out = GVector::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                let t = self.bracket_basis(*a, *b);
                if t.is_empty() {
                    continue;
                }
                let c = ca.clone() * cb.clone();
                for (k, s) in t {
                    out.add_term(k, c.mul_int(s));
                }
            }
        }
        out
    }

    pub fn checked_bracket<S: Coefficient>(
        &self,
        x: &GVector<S>,
        y: &GVector<S>,
    ) -> Result<GVector<S>> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        Ok(self.bracket(x, y))
    }

    /// ‖b‖² for a basis element.
    pub fn norm2(&self, b: BasisIndex) -> Scalar {
        match b {
            H => int(2),
            X | Y | Glm(..) => <Scalar as One>::one(),
            Vel(i, _) => factorial(i as u64) / factorial((self.params.n - i as usize) as u64),
        }
    }

    pub fn inner_product<S: Coefficient>(&self, x: &GVector<S>, y: &GVector<S>) -> S {
        let mut acc = S::zero();
        for (b, cx) in x.iter() {
            let cy = y.get(*b);
            if !cy.is_zero() {
                acc = acc + (cx.clone() * cy).mul_scalar(&self.norm2(*b));
            }
        }
        acc
    }

    /// Transpose on sl₂ × gl_m; V is left unchanged.
    pub fn transpose<S: Coefficient>(&self, x: &GVector<S>) -> GVector<S> {
        GVector::from_terms(x.iter().map(|(b, c)| {
            let t = match *b {
                X => Y,
                Y => X,
                Glm(a, b) => Glm(b, a),
                other => other,
            };
            (t, c.clone())
        }))
    }

    /// Σ_a e_a^a.
    pub fn identity_glm<S: Coefficient>(&self) -> GVector<S> {
        GVector::from_terms((1..=self.m()).map(|a| (BasisIndex::e(a, a), S::one())))
    }

    /// Z₁ = −½(H + n·id).
    pub fn z1<S: Coefficient>(&self) -> GVector<S> {
        let mut v = GVector::term(H, S::from_scalar(frac(-1, 2)));
        let c = S::from_scalar(frac(-(self.n() as i64), 2));
        v.add_scaled(&self.identity_glm(), &c);
        v
    }

    /// Z₂ = −id.
    pub fn z2<S: Coefficient>(&self) -> GVector<S> {
        -&self.identity_glm::<S>()
    }

    /// Grading element Z = Z₁ + Z₂.
    pub fn grading_element<S: Coefficient>(&self) -> GVector<S> {
        &self.z1::<S>() + &self.z2::<S>()
    }

    /// T = Z₁ − Z₂.
    pub fn t_element<S: Coefficient>(&self) -> GVector<S> {
        &self.z1::<S>() - &self.z2::<S>()
    }

    /// Σ_k ad_z^k(x)/k!, for z with nilpotent ad.
    pub fn exp_ad<S: Coefficient>(&self, z: &GVector<S>, x: &GVector<S>) -> Result<GVector<S>> {
        let mut sum = x.clone();
        let mut term = x.clone();
        for k in 1..=self.dim() + 1 {
            term = self.bracket(z, &term).scale_scalar(&frac(1, k as i64));
            if term.is_zero() {
                return Ok(sum);
            }
            sum = &sum + &term;
        }
        Err(Error::NotNilpotent)
    }

    /// Verifies antisymmetry, Jacobi, bigrade compatibility and Z-degrees
    /// on basis elements, and that g₋₁ generates g₋.
    pub fn check_structure(&self) -> StructureReport {
        let mut violations = Vec::new();
        let b = &self.basis;
        let to_map = |t: Terms| -> BTreeMap<BasisIndex, i64> { t.into_iter().collect() };
        for (i, &x) in b.iter().enumerate() {
            for &y in &b[i..] {
                let xy = to_map(self.bracket_basis(x, y));
                let mut yx = to_map(self.bracket_basis(y, x));
                for v in yx.values_mut() {
                    *v = -*v;
                }
                if xy != yx {
                    violations.push(format!("antisymmetry fails for [{x},{y}]"));
                }
                let g = x.bigrade() + y.bigrade();
                if let Some((k, _)) = xy.iter().find(|(k, _)| k.bigrade() != g) {
                    violations.push(format!("[{x},{y}] has component {k} outside bigrade {g}"));
                }
            }
        }
        let ad = |x: BasisIndex, v: &BTreeMap<BasisIndex, i64>| -> BTreeMap<BasisIndex, i64> {
            let mut out: BTreeMap<BasisIndex, i64> = BTreeMap::new();
            for (&k, &c) in v {
                for (r, s) in self.bracket_basis(x, k) {
                    *out.entry(r).or_insert(0) += c * s;
                }
            }
            out.retain(|_, c| *c != 0);
            out
        };
        for (i, &x) in b.iter().enumerate() {
            for (j, &y) in b.iter().enumerate().skip(i + 1) {
                for &z in &b[j + 1..] {
                    let mut acc: BTreeMap<BasisIndex, i64> = BTreeMap::new();
                    for (p, q, r) in [(x, y, z), (y, z, x), (z, x, y)] {
                        for (k, c) in ad(p, &to_map(self.bracket_basis(q, r))) {
                            *acc.entry(k).or_insert(0) += c;
                        }
                    }
                    acc.retain(|_, c| *c != 0);
                    if !acc.is_empty() {
                        violations.push(format!("Jacobi fails on ({x},{y},{z})"));
                    }
                }
            }
        }
        let z: GVector = self.grading_element();
        let (z1, z2): (GVector, GVector) = (self.z1(), self.z2());
        for &x in b {
            let e = GVector::basis(x);
            let g = x.bigrade();
            if self.bracket(&z, &e) != e.scale_scalar(&int(g.degree() as i64)) {
                violations.push(format!("ad_Z does not act on {x} by its degree"));
            }
            if self.bracket(&z1, &e) != e.scale_scalar(&int(g.s as i64))
                || self.bracket(&z2, &e) != e.scale_scalar(&int(g.t as i64))
            {
                violations.push(format!("{x} is not a joint eigenvector with bigrade {g}"));
            }
        }
        let generated = self.generated_by(&self.graded_basis(-1));
        let minus: BTreeSet<BasisIndex> = self.negative_basis().into_iter().collect();
        if generated.rank() != minus.len() || generated.pivot_keys().any(|k| !minus.contains(k)) {
            violations.push("g_{-1} does not generate g_-".to_string());
        }
        StructureReport {
            params: self.params,
            dim: self.dim(),
            expected_dim: self.params.dim(),
            violations,
        }
    }

    /// Span of iterated brackets of the given basis elements.
    fn generated_by(&self, gens: &[BasisIndex]) -> Echelon<BasisIndex> {
        let mut span = Echelon::new();
        let mut frontier: Vec<GVector> = Vec::new();
        for &g in gens {
            let v = GVector::basis(g);
            if span.insert(&v.to_sparse()) {
                frontier.push(v);
            }
        }
        let gens_v: Vec<GVector> = gens.iter().map(|&g| GVector::basis(g)).collect();
        while let Some(v) = frontier.pop() {
            for g in &gens_v {
                let w = self.bracket(g, &v);
                if !w.is_zero() && span.insert(&w.to_sparse()) {
                    frontier.push(w);
                }
            }
        }
        span
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub params: AlgebraParams,
    pub dim: usize,
    pub expected_dim: usize,
    pub violations: Vec<String>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.dim == self.expected_dim
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(n: usize, m: usize) -> LieAlgebra {
        LieAlgebra::try_new(n, m).unwrap()
    }

    fn b(x: BasisIndex) -> GVector {
        GVector::basis(x)
    }

    #[test]
    fn bracket_examples() {
        let g = alg(4, 2);
        assert_eq!(
            g.bracket(&b(X), &b(BasisIndex::v(2, 1))),
            b(BasisIndex::v(3, 1))
        );
        assert!(g.bracket(&b(Y), &b(BasisIndex::v(0, 2))).is_zero());
        assert!(g
            .bracket(&b(BasisIndex::v(1, 1)), &b(BasisIndex::v(3, 2)))
            .is_zero());
        let g = alg(3, 2);
        assert_eq!(
            g.bracket(&b(BasisIndex::e(2, 1)), &b(BasisIndex::v(1, 1))),
            b(BasisIndex::v(1, 2))
        );
    }

    #[test]
    fn gl_commutator_matches_matrix_units() {
        let g = alg(2, 3);
        let got = g.bracket(&b(BasisIndex::e(1, 2)), &b(BasisIndex::e(2, 1)));
        let expect = &b(BasisIndex::e(1, 1)) - &b(BasisIndex::e(2, 2));
        assert_eq!(got, expect);
        assert!(g
            .bracket(&b(BasisIndex::e(1, 1)), &b(BasisIndex::e(1, 1)))
            .is_zero());
    }

    #[test]
    fn grading_examples() {
        let g = alg(5, 2);
        let e2 = b(BasisIndex::v(2, 1));
        let d = e2.bigrade_decompose();
        assert_eq!(
            d.keys().copied().collect::<Vec<_>>(),
            vec![Bigrade::new(-2, -1)]
        );
        assert_eq!(
            b(X).bigrade_decompose().keys().next(),
            Some(&Bigrade::new(-1, 0))
        );
        let z1: GVector = g.z1();
        assert_eq!(
            z1.bigrade_decompose().keys().copied().collect::<Vec<_>>(),
            vec![Bigrade::new(0, 0)]
        );
        assert_eq!(e2.filtration_degree().unwrap(), -3);
        assert_eq!(b(Y).filtration_degree().unwrap(), 1);
        assert_eq!(
            (&b(BasisIndex::v(0, 1)) + &b(Y))
                .filtration_degree()
                .unwrap(),
            -1
        );
        assert_eq!(
            GVector::<Scalar>::zero().filtration_degree(),
            Err(Error::ZeroElement("filtration degree"))
        );
    }

    #[test]
    fn inner_product_examples() {
        let g = alg(3, 2);
        let e = b(BasisIndex::v(2, 1));
        assert_eq!(g.inner_product(&e, &e), int(2));
        assert_eq!(g.inner_product(&b(X), &b(Y)), int(0));
        assert_eq!(g.inner_product(&b(H), &b(H)), int(2));
    }

    #[test]
    fn exp_ad_examples() {
        let g = alg(3, 2);
        let t = int(3);
        let s = int(-1);
        let tz: GVector = g.t_element();
        let x = &tz + &b(Y).scale(&s);
        let got = g.exp_ad(&b(Y).scale(&t), &x).unwrap();
        assert_eq!(got, &tz + &b(Y).scale(&(s - t)));
        let e = b(BasisIndex::v(3, 2));
        assert_eq!(g.exp_ad(&b(X), &e).unwrap(), e);
        assert_eq!(g.exp_ad(&GVector::zero(), &b(H)).unwrap(), b(H));
        assert_eq!(g.exp_ad(&b(H), &b(X)), Err(Error::NotNilpotent));
    }

    #[test]
    fn structure_small() {
        for (n, m, d) in [(2, 2, 13), (3, 2, 15), (5, 4, 43)] {
            let r = alg(n, m).check_structure();
            assert!(r.passed(), "{:?}", r.violations);
            assert_eq!(r.dim, d);
        }
    }

    #[test]
    fn labels_roundtrip() {
        let g = alg(3, 3);
        for &x in g.basis() {
            assert_eq!(x.to_string().parse::<BasisIndex>().unwrap(), x);
        }
        let v = &b(BasisIndex::e(2, 3)).scale(&frac(-3, 4)) + &b(H);
        assert_eq!(GVector::from_json(&v.to_json()).unwrap(), v);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(AlgebraParams::new(1, 2).is_err());
        assert!(AlgebraParams::new(2, 1).is_err());
        let g = alg(2, 2);
        assert!(g.checked_bracket(&b(BasisIndex::v(3, 1)), &b(X)).is_err());
    }
}
