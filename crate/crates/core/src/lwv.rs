//! Lowest weight vectors of the irreducible C-class modules.
//!
//! Each module is a g₀-irreducible piece of H²₊(g₋, g) with a distinguished
//! bigrade. The lowest weight vector is found as the one-dimensional
//! solution of an exact linear system and cross-checked against closed
//! forms built from the coefficient tables c_{i,j}.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::cochain::{ArgDomain, Cochain, Complex, DmCondition, Mono};
use crate::error::{Error, Result};
use crate::liealg::{AlgebraParams, BasisIndex, Bigrade, GVector, LieAlgebra};
use crate::linalg::{kernel, Echelon, SparseVec};
use crate::report::Report;
use crate::scalar::{factorial, frac, int, to_pq, Scalar};

use BasisIndex::{H, X, Y};

/// The three irreducible C-class modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModuleId {
    /// Bigrade (2,2), third order only.
    B4,
    /// Trace part, bigrade (1,1), order at least four.
    A2tr,
    /// Trace-free part, bigrade (1,1).
    A2tf,
}

impl ModuleId {
    pub const ALL: [ModuleId; 3] = [ModuleId::B4, ModuleId::A2tr, ModuleId::A2tf];

    pub fn label(self) -> &'static str {
        match self {
            ModuleId::B4 => "B4",
            ModuleId::A2tr => "A2tr",
            ModuleId::A2tf => "A2tf",
        }
    }

    pub fn supports(self, n: usize) -> bool {
        match self {
            ModuleId::B4 => n == 2,
            ModuleId::A2tr => n >= 3,
            ModuleId::A2tf => n >= 2,
        }
    }

    pub fn check(self, p: AlgebraParams) -> Result<()> {
        if self.supports(p.n) {
            Ok(())
        } else {
            Err(Error::Incompatible(format!(
                "module {} does not occur for n = {}",
                self.label(),
                p.n
            )))
        }
    }

    pub fn bigrade(self) -> Bigrade {
        match self {
            ModuleId::B4 => Bigrade::new(2, 2),
            _ => Bigrade::new(1, 1),
        }
    }

    /// Dimension as an sl_m-module: S²W*, W*, (S²W*⊗W)₀.
    pub fn module_dim(self, m: usize) -> usize {
        match self {
            ModuleId::B4 => m * (m + 1) / 2,
            ModuleId::A2tr => m,
            ModuleId::A2tf => m * m * (m + 1) / 2 - m,
        }
    }

    pub fn annihilator_dim(self, m: usize) -> usize {
        match self {
            ModuleId::B4 | ModuleId::A2tr => m * m - m + 1,
            ModuleId::A2tf => m * m - 2 * m + 3,
        }
    }
}

impl fmt::Display for ModuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ModuleId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "B4" | "b4" => Ok(ModuleId::B4),
            "A2tr" | "a2tr" => Ok(ModuleId::A2tr),
            "A2tf" | "a2tf" => Ok(ModuleId::A2tf),
            _ => Err(Error::Format(format!("unknown module {s:?}"))),
        }
    }
}

fn one() -> Scalar {
    <Scalar as One>::one()
}

fn e(a: usize, b: usize) -> BasisIndex {
    BasisIndex::e(a, b)
}

fn v(i: usize, a: usize) -> BasisIndex {
    BasisIndex::v(i, a)
}

/// Block of index `a` in the parabolic pattern of the annihilator.
fn block(id: ModuleId, a: usize, m: usize) -> usize {
    match id {
        ModuleId::B4 | ModuleId::A2tr => usize::from(a != 1),
        ModuleId::A2tf => {
            if a == 1 {
                0
            } else if a == m {
                2
            } else {
                1
            }
        }
    }
}

/// Generators of the annihilator of the lowest weight vector in g₀.
pub fn annihilator_basis(alg: &LieAlgebra, id: ModuleId) -> Result<Vec<GVector>> {
    id.check(alg.params())?;
    let m = alg.m();
    let z2 = alg.z2::<Scalar>();
    let mut out = vec![&alg.z1::<Scalar>() - &z2];
    for a in 1..=m {
        for c in 1..=m {
            if a != c && block(id, a, m) >= block(id, c, m) {
                out.push(GVector::basis(e(a, c)));
            }
        }
    }
    for b in 1..m {
        let shift = match id {
            ModuleId::B4 | ModuleId::A2tr => int(i64::from(b == 1)),
            ModuleId::A2tf => int(2 * i64::from(b == 1) + i64::from(b == m - 1)),
        };
        let mut h = GVector::from_terms([(e(b, b), one()), (e(b + 1, b + 1), -one())]);
        h.add_scaled(&z2, &shift);
        out.push(h);
    }
    Ok(out)
}

fn is_diagonal(z: &GVector) -> bool {
    z.support()
        .all(|b| b == H || matches!(b, BasisIndex::Glm(a, c) if a == c))
}

/// Σ_a E^{i,1}∧E^{j,a} ⊗ E_{i+j−1,a}.
pub fn phi_trace(alg: &LieAlgebra, i: usize, j: usize) -> Cochain {
    let (n, m) = (alg.n(), alg.m());
    let mut c = Cochain::zero(alg.params(), 2);
    if i + j >= 1 && i + j <= n + 1 && i <= n && j <= n {
        for a in 1..=m {
            c.add_term(&[v(i, 1), v(j, a)], v(i + j - 1, a), one());
        }
    }
    c
}

/// E^{i,1}∧E^{j,1} ⊗ E_{i+j−1,m}.
pub fn phi_tracefree(alg: &LieAlgebra, i: usize, j: usize) -> Cochain {
    let (n, m) = (alg.n(), alg.m());
    let mut c = Cochain::zero(alg.params(), 2);
    if i + j >= 1 && i + j <= n + 1 && i <= n && j <= n {
        c.add_term(&[v(i, 1), v(j, 1)], v(i + j - 1, m), one());
    }
    c
}

/// Square table (c_{i,j})_{0 ≤ i,j ≤ n}; indices outside read as zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    n: usize,
    rows: Vec<Vec<Scalar>>,
}

impl CoefficientTable {
    pub fn zero(n: usize) -> Self {
        CoefficientTable {
            n,
            rows: vec![vec![Scalar::zero(); n + 1]; n + 1],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.rows
            .get(i)
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.rows[i][j] = x;
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x * s).collect())
            .collect();
        CoefficientTable { n: self.n, rows }
    }

    /// Positions (i, j) with c_{i,j} - c_{i+1,j} - c_{i,j+1} ≠ 0, over
    /// i + j ≤ n.
    pub fn recursion_defects(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..=self.n {
            for j in 0..=self.n - i {
                if self.get(i, j) != self.get(i + 1, j) + self.get(i, j + 1) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..=self.n).all(|i| (0..=self.n).all(|j| self.get(i, j) == -self.get(j, i)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!(self
            .rows
            .iter()
            .map(|r| r.iter().map(to_pq).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }
}

impl fmt::Display for CoefficientTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for r in &cells {
            let line: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Reads off c_{i,j} from an A2 cochain.
pub fn table_from_cochain(
    alg: &LieAlgebra,
    id: ModuleId,
    phi: &Cochain,
) -> Result<CoefficientTable> {
    let (n, m) = (alg.n(), alg.m());
    let mut t = CoefficientTable::zero(n);
    for i in 0..=n {
        for j in 0..=n {
            if i + j < 1 || i + j > n + 1 {
                continue;
            }
            let c = match id {
                ModuleId::A2tr => phi.coefficient(&[v(i, 1), v(j, 2)], v(i + j - 1, 2)),
                ModuleId::A2tf => {
                    phi.coefficient(&[v(i, 1), v(j, 1)], v(i + j - 1, m)) * frac(1, 2)
                }
                ModuleId::B4 => {
                    return Err(Error::Incompatible("B4 has no coefficient table".into()))
                }
            };
            t.set(i, j, c);
        }
    }
    Ok(t)
}

/// Σ c_{i,j} Φ^{i,j} for the module's Φ^{i,j}.
pub fn cochain_from_table(alg: &LieAlgebra, id: ModuleId, t: &CoefficientTable) -> Result<Cochain> {
    let n = alg.n();
    let mut out = Cochain::zero(alg.params(), 2);
    for i in 0..=n {
        for j in 0..=n {
            let c = t.get(i, j);
            if c.is_zero() {
                continue;
            }
            let phi = match id {
                ModuleId::A2tr => phi_trace(alg, i, j),
                ModuleId::A2tf => phi_tracefree(alg, i, j),
                ModuleId::B4 => {
                    return Err(Error::Incompatible("B4 has no coefficient table".into()))
                }
            };
            out = &out + &phi.scale_scalar(&c);
        }
    }
    Ok(out)
}

/// α in terms of β = 1 for the trace module.
pub fn alpha_for_unit_beta(n: usize, m: usize) -> Scalar {
    let (n, m) = (n as i64, m as i64);
    frac(-6 * (n - 1) * (m + 1), m * n * (n + 1) + 6)
}

/// Closed-form table with parameters α, β (the trace-free table ignores α).
pub fn closed_form_table(
    n: usize,
    id: ModuleId,
    alpha: &Scalar,
    beta: &Scalar,
) -> Result<CoefficientTable> {
    let mut t = CoefficientTable::zero(n);
    let ni = n as i64;
    match id {
        ModuleId::B4 => return Err(Error::Incompatible("B4 has no coefficient table".into())),
        ModuleId::A2tr => {
            if n < 3 {
                return Err(Error::Incompatible("A2tr needs n >= 3".into()));
            }
            let half = frac(1, 2);
            for i in 3..=n {
                t.set(i, 0, int(ni - i as i64 + 1) * beta);
            }
            t.set(2, 0, alpha + int(ni - 1) * beta);
            let c10 = &half * int(ni) * alpha + int(ni - 1) * beta;
            t.set(0, 1, -&c10);
            t.set(1, 0, c10);
            for i in 2..=n {
                let ii = i as i64;
                t.set(0, i, int(ii - ni - 1) * (beta + &half * int(ii) * alpha));
            }
            for i in 1..=n {
                let ii = i as i64;
                let d = if i == 1 { 0 } else { -1 };
                t.set(1, i, (&half * int(ni) - int(ii)) * alpha + int(d) * beta);
            }
            for i in 2..=n {
                t.set(i, 1, if i == 2 { beta + alpha } else { beta.clone() });
                t.set(
                    2,
                    i,
                    if i == n {
                        Scalar::zero()
                    } else {
                        alpha.clone()
                    },
                );
            }
        }
        ModuleId::A2tf => {
            for i in 2..=n {
                let c = int(ni - i as i64 + 1) * beta;
                t.set(0, i, -&c);
                t.set(i, 0, c);
                t.set(i, 1, beta.clone());
                t.set(1, i, -beta);
            }
            let c = int(ni - 1) * beta;
            t.set(0, 1, -&c);
            t.set(1, 0, c);
        }
    }
    Ok(t)
}

/// How a solution was scaled.
#[derive(Clone, Debug, PartialEq)]
pub struct Normalization {
    /// The coefficient fixed to one.
    pub pinned: String,
    /// Factor applied to the raw representative.
    pub factor: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LwvSolution {
    pub module: ModuleId,
    pub params: AlgebraParams,
    pub cochain: Cochain,
    pub table: Option<CoefficientTable>,
    pub alpha: Option<Scalar>,
    pub beta: Option<Scalar>,
    pub normalization: Normalization,
}

impl LwvSolution {
    pub fn to_json(&self) -> serde_json::Value {
        let mut out = json!({
            "module": self.module.label(),
            "n": self.params.n,
            "m": self.params.m,
            "cochain": self.cochain.to_json(),
            "pretty": self.cochain.to_string(),
            "normalization": {
                "pinned": self.normalization.pinned,
                "factor": to_pq(&self.normalization.factor),
            },
        });
        if let Some(t) = &self.table {
            out["coefficient_table"] = t.to_json();
        }
        if let Some(a) = &self.alpha {
            out["alpha"] = json!(to_pq(a));
        }
        if let Some(b) = &self.beta {
            out["beta"] = json!(to_pq(b));
        }
        out
    }
}

const B4_PIN: &str = "E^{2,1}∧E^{1,1}⊗X";
const BETA_PIN: &str = "c_{n,1}";

fn b4_pin(phi: &Cochain) -> Scalar {
    phi.coefficient(&[v(2, 1), v(1, 1)], X)
}

/// Scales `raw` to the standard normalization and fills in the table.
fn finish(alg: &LieAlgebra, id: ModuleId, raw: Cochain) -> Result<LwvSolution> {
    let n = alg.n();
    let pin = match id {
        ModuleId::B4 => b4_pin(&raw),
        _ => table_from_cochain(alg, id, &raw)?.get(n, 1),
    };
    if pin.is_zero() {
        return Err(Error::ZeroElement("normalizing coefficient"));
    }
    let factor = one() / pin;
    let cochain = raw.scale_scalar(&factor);
    let (table, alpha, beta, pinned) = match id {
        ModuleId::B4 => (None, None, None, B4_PIN),
        _ => {
            let t = table_from_cochain(alg, id, &cochain)?;
            if cochain_from_table(alg, id, &t)? != cochain {
                return Err(Error::Inconsistent(
                    "cochain is not spanned by the Φ^{i,j}".into(),
                ));
            }
            let alpha = (id == ModuleId::A2tr).then(|| t.get(2, n - 1));
            let beta = Some(t.get(n, 1));
            (Some(t), alpha, beta, BETA_PIN)
        }
    };
    Ok(LwvSolution {
        module: id,
        params: alg.params(),
        cochain,
        table,
        alpha,
        beta,
        normalization: Normalization {
            pinned: pinned.into(),
            factor,
        },
    })
}

fn b4_closed_form(alg: &LieAlgebra) -> Cochain {
    let m = alg.m();
    let half = frac(1, 2);
    let mut c = Cochain::zero(alg.params(), 2);
    c.add_term(&[v(2, 1), v(1, 1)], X, one());
    c.add_term(&[v(2, 1), v(0, 1)], H, -&half);
    c.add_term(&[v(1, 1), v(0, 1)], Y, -&half);
    for a in 1..=m {
        c.add_term(&[v(2, 1), v(0, a)], e(a, 1), one());
        c.add_term(&[v(1, 1), v(1, a)], e(a, 1), -one());
        c.add_term(&[v(0, 1), v(2, a)], e(a, 1), one());
    }
    c
}

fn a2tr_closed_form(alg: &LieAlgebra, alpha: &Scalar, beta: &Scalar) -> Cochain {
    let n = alg.n();
    let ni = n as i64;
    let mut a_part = Cochain::zero(alg.params(), 2);
    let mut b_part = Cochain::zero(alg.params(), 2);
    for i in 0..=n {
        let ii = i as i64;
        a_part = &a_part + &phi_trace(alg, 2, i);
        a_part = &a_part + &phi_trace(alg, 1, i).scale_scalar(&frac(ni - 2 * ii, 2));
        a_part = &a_part + &phi_trace(alg, 0, i).scale_scalar(&frac(-ii * (ni + 1 - ii), 2));
        let d = &phi_trace(alg, i, 0) - &phi_trace(alg, 0, i);
        b_part = &b_part + &d.scale_scalar(&int(ni + 1 - ii));
        b_part = &b_part + &(&phi_trace(alg, i, 1) - &phi_trace(alg, 1, i));
    }
    &a_part.scale_scalar(alpha) + &b_part.scale_scalar(beta)
}

fn a2tf_closed_form(alg: &LieAlgebra) -> Cochain {
    let n = alg.n();
    let mut c = Cochain::zero(alg.params(), 2);
    for j in 0..=n {
        c = &c + &phi_tracefree(alg, 0, j).scale_scalar(&int((n + 1 - j) as i64));
        c = &c + &phi_tracefree(alg, 1, j);
    }
    c
}

/// Lowest weight vector assembled from the closed-form sums, with β = 1.
pub fn closed_form_lwv(alg: &LieAlgebra, id: ModuleId) -> Result<LwvSolution> {
    id.check(alg.params())?;
    let raw = match id {
        ModuleId::B4 => b4_closed_form(alg),
        ModuleId::A2tr => a2tr_closed_form(alg, &alpha_for_unit_beta(alg.n(), alg.m()), &one()),
        ModuleId::A2tf => a2tf_closed_form(alg),
    };
    finish(alg, id, raw)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Act(usize, Mono),
    Diff(Mono),
    Dm(Mono),
    Pairing,
}

/// Solves the defining linear system from scratch.
///
/// Fails with [`Error::NullspaceDim`] unless the solution space is a line.
pub fn solve_lwv(alg: &LieAlgebra, id: ModuleId) -> Result<LwvSolution> {
    id.check(alg.params())?;
    let params = alg.params();
    let (n, m) = (alg.n(), alg.m());
    let cx = Complex::new(alg);
    let ann = annihilator_basis(alg, id)?;
    let (diag, off): (Vec<GVector>, Vec<GVector>) = ann.into_iter().partition(is_diagonal);

    let mut ops: Vec<GVector> = Vec::new();
    for a in 1..=m {
        for c in 1..a {
            ops.push(GVector::basis(e(a, c)));
        }
    }
    ops.extend(off);
    ops.push(GVector::basis(X));

    let unknowns: Vec<Mono> = cx
        .monomial_basis(2, Some(id.bigrade()), ArgDomain::Vel)
        .into_iter()
        .filter(|mo| {
            let c = Cochain::monomial(params, mo.clone(), one());
            c.strong_regularity_holds()
                && diag
                    .iter()
                    .all(|h| cx.act(h, &c).map(|r| r.is_zero()).unwrap_or(false))
        })
        .collect();
    if unknowns.is_empty() {
        return Err(Error::NullspaceDim(0));
    }

    let dm = if id != ModuleId::B4 && n >= 3 {
        Some(DmCondition::new(alg)?)
    } else {
        None
    };
    let d_psi = (id == ModuleId::A2tr).then(|| cx.differential(&psi(alg)));

    let images: Vec<SparseVec<Key>> = unknowns
        .par_iter()
        .map(|mo| {
            let c = Cochain::monomial(params, mo.clone(), one());
            let mut img: SparseVec<Key> = BTreeMap::new();
            for (k, z) in ops.iter().enumerate() {
                let r = cx.act(z, &c).expect("ops lie in g0 or span{X}");
                for (mm, x) in r.entries() {
                    img.insert(Key::Act(k, mm.clone()), x.clone());
                }
            }
            for (mm, x) in cx.differential(&c).entries() {
                img.insert(Key::Diff(mm.clone()), x.clone());
            }
            if let Some(dm) = &dm {
                for (mm, x) in dm.normal_form(&c) {
                    img.insert(Key::Dm(mm), x);
                }
            }
            if let Some(dp) = &d_psi {
                let p = cx.inner_product(&c, dp);
                if !p.is_zero() {
                    img.insert(Key::Pairing, p);
                }
            }
            img
        })
        .collect();

    let ker = kernel(&images);
    if ker.len() != 1 {
        return Err(Error::NullspaceDim(ker.len()));
    }
    let mut raw = Cochain::zero(params, 2);
    for (j, x) in &ker[0] {
        raw.add_sorted(unknowns[*j].clone(), x.clone());
    }
    let sol = finish(alg, id, raw)?;
    let report = verify_harmonic(&sol)?;
    if !report.passed() {
        return Err(Error::Inconsistent(format!(
            "solution fails {:?}",
            report.failures()
        )));
    }
    Ok(sol)
}

/// Harmonicity, strong regularity, DM (when n ≥ 3 and V-valued on V) and
/// X-insertion checks for a 2-cochain.
pub fn check_harmonic(alg: &LieAlgebra, phi: &Cochain) -> Result<Report> {
    let cx = Complex::new(alg);
    let d = cx.differential(phi);
    let ds = cx.codifferential(phi)?;
    let lap = cx.laplacian(phi)?;
    let mut r = Report::new();
    r.push("d_closed", d.is_zero());
    r.push("codifferential_closed", ds.is_zero());
    r.push("laplacian_zero", lap.is_zero());
    r.push("strong_regularity", phi.strong_regularity_holds());
    if alg.n() >= 3 && phi.is_vel_valued_on_vel() {
        r.push("dm_condition", DmCondition::new(alg)?.holds(phi)?);
    }
    r.push("x_insertion_zero", phi.x_insertion_is_zero());
    Ok(r)
}

pub fn verify_harmonic(sol: &LwvSolution) -> Result<Report> {
    let alg = LieAlgebra::new(sol.params);
    check_harmonic(&alg, &sol.cochain)
}

/// Span of Φ under the raising operators e_a^c, a < c, as an RREF basis.
pub fn module_span_from_lwv(alg: &LieAlgebra, sol: &LwvSolution) -> Result<Vec<Cochain>> {
    let cx = Complex::new(alg);
    let m = alg.m();
    let raising: Vec<GVector> = (1..=m)
        .flat_map(|a| (a + 1..=m).map(move |c| GVector::basis(e(a, c))))
        .collect();
    let mut span: Echelon<Mono> = Echelon::new();
    let mut queue = VecDeque::new();
    if span.insert(&sol.cochain.sparse()) {
        queue.push_back(sol.cochain.clone());
    }
    while let Some(c) = queue.pop_front() {
        for z in &raising {
            let r = cx.act(z, &c)?;
            if !r.is_zero() && span.insert(&r.sparse()) {
                queue.push_back(r);
            }
        }
    }
    Ok(span
        .rref()
        .iter()
        .map(|s| Cochain::from_sparse(alg.params(), 2, s))
        .collect())
}

/// Ψ = −2E^{2,1}⊗X + E^{1,1}⊗H + E^{0,1}⊗Y.
pub fn psi(alg: &LieAlgebra) -> Cochain {
    let mut c = Cochain::zero(alg.params(), 1);
    c.add_term(&[v(2, 1)], X, int(-2));
    c.add_term(&[v(1, 1)], H, one());
    c.add_term(&[v(0, 1)], Y, one());
    c
}

/// ∂Ψ written in the Φ^{i,j} of the trace module.
pub fn d_psi_expansion(alg: &LieAlgebra) -> Cochain {
    let n = alg.n();
    let ni = n as i64;
    let mut c = Cochain::zero(alg.params(), 2);
    for k in 0..=n {
        let ki = k as i64;
        if k < n {
            c = &c + &phi_trace(alg, 2, k).scale_scalar(&int(-2));
        }
        c = &c + &phi_trace(alg, 1, k).scale_scalar(&int(2 * ki - ni));
        if k >= 1 {
            c = &c + &phi_trace(alg, 0, k).scale_scalar(&int(ki * (ni + 1 - ki)));
        }
    }
    c
}

/// The linear functional on coefficient tables equal to ⟨∂Ψ, Φ⟩ / n!.
#[derive(Clone, Debug, PartialEq)]
pub struct PairingFunctional {
    pub weights: BTreeMap<(usize, usize), Scalar>,
}

impl PairingFunctional {
    pub fn evaluate(&self, t: &CoefficientTable) -> Scalar {
        self.weights
            .iter()
            .fold(Scalar::zero(), |acc, ((i, j), w)| acc + w * t.get(*i, *j))
    }
}

pub fn pairing_functional(params: AlgebraParams) -> Result<PairingFunctional> {
    let (n, m) = (params.n, params.m);
    if n < 3 {
        return Err(Error::Params("pairing functional needs n >= 3".into()));
    }
    let (ni, mi) = (n as i64, m as i64);
    let mut w: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
    let mut add = |i: usize, j: usize, x: Scalar| {
        let e = w.entry((i, j)).or_insert_with(Scalar::zero);
        *e += x;
    };
    for k in 0..n {
        let ki = k as i64;
        let c = frac((ni - ki) * (ki + 1), ni * (ni - 1));
        add(k, 2, c.clone());
        add(2, k, -c * int(mi));
    }
    for k in 0..=n {
        let c = frac(2 * k as i64 - ni, ni);
        add(1, k, &c * int(mi));
        add(k, 1, -c);
    }
    for k in 1..=n {
        add(0, k, int(mi));
        add(k, 0, int(-1));
    }
    w.retain(|_, x| !x.is_zero());
    Ok(PairingFunctional { weights: w })
}

/// ⟨∂Ψ, Φ⟩ expected from the functional: n! times its value.
pub fn pairing_via_functional(params: AlgebraParams, t: &CoefficientTable) -> Result<Scalar> {
    Ok(factorial(params.n as u64) * pairing_functional(params)?.evaluate(t))
}

/// Bigrade-(1,1) 1-cochains on g₋ annihilated by X and by the trace
/// module's annihilator, as a basis.
pub fn one_cochain_invariants(alg: &LieAlgebra) -> Result<Vec<Cochain>> {
    let params = alg.params();
    let cx = Complex::new(alg);
    let mut ops = annihilator_basis(alg, ModuleId::A2tr)?;
    ops.push(GVector::basis(X));
    let unknowns = cx.monomial_basis(1, Some(Bigrade::new(1, 1)), ArgDomain::Negative);
    let images: Vec<SparseVec<(usize, Mono)>> = unknowns
        .iter()
        .map(|mo| {
            let c = Cochain::monomial(params, mo.clone(), one());
            let mut img = BTreeMap::new();
            for (k, z) in ops.iter().enumerate() {
                if let Ok(r) = cx.act(z, &c) {
                    for (mm, x) in r.entries() {
                        img.insert((k, mm.clone()), x.clone());
                    }
                }
            }
            img
        })
        .collect();
    Ok(kernel(&images)
        .iter()
        .map(|k| {
            let mut c = Cochain::zero(params, 1);
            for (j, x) in k {
                c.add_sorted(unknowns[*j].clone(), x.clone());
            }
            c
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(n: usize, m: usize) -> LieAlgebra {
        LieAlgebra::try_new(n, m).unwrap()
    }

    #[test]
    fn annihilator_dims() {
        assert_eq!(
            annihilator_basis(&alg(2, 3), ModuleId::B4).unwrap().len(),
            7
        );
        assert_eq!(
            annihilator_basis(&alg(3, 2), ModuleId::A2tr).unwrap().len(),
            3
        );
        let a = annihilator_basis(&alg(2, 2), ModuleId::A2tf).unwrap();
        assert_eq!(a.len(), 3);
        let g = alg(2, 2);
        let mut h = GVector::from_terms([(e(1, 1), one()), (e(2, 2), -one())]);
        h.add_scaled(&g.z2::<Scalar>(), &int(3));
        assert!(a.contains(&h));
        assert!(a.contains(&GVector::basis(e(2, 1))));
        assert!(annihilator_basis(&alg(3, 2), ModuleId::B4).is_err());
    }

    #[test]
    fn alpha_ratio_example() {
        let sol = solve_lwv(&alg(3, 2), ModuleId::A2tr).unwrap();
        assert_eq!(sol.alpha.unwrap() / sol.beta.unwrap(), frac(-6, 5));
    }

    #[test]
    fn tracefree_small_case() {
        let g = alg(2, 2);
        let mut want = Cochain::zero(g.params(), 2);
        want.add_term(&[v(1, 1), v(0, 1)], v(0, 2), -one());
        want.add_term(&[v(0, 1), v(2, 1)], v(1, 2), one());
        want.add_term(&[v(1, 1), v(2, 1)], v(2, 2), one());
        let sol = solve_lwv(&g, ModuleId::A2tf).unwrap();
        assert!(sol.cochain.ratio_to(&want).is_some_and(|l| !l.is_zero()));
    }

    #[test]
    fn b4_normalized() {
        let sol = solve_lwv(&alg(2, 2), ModuleId::B4).unwrap();
        assert_eq!(b4_pin(&sol.cochain), one());
        assert_eq!(
            sol.cochain,
            closed_form_lwv(&alg(2, 2), ModuleId::B4).unwrap().cochain
        );
    }

    #[test]
    fn module_dims() {
        for (id, n, m, d) in [
            (ModuleId::B4, 2, 2, 3),
            (ModuleId::A2tr, 3, 4, 4),
            (ModuleId::A2tf, 2, 2, 4),
        ] {
            let g = alg(n, m);
            let sol = closed_form_lwv(&g, id).unwrap();
            assert_eq!(module_span_from_lwv(&g, &sol).unwrap().len(), d);
        }
    }

    #[test]
    fn pairing_examples() {
        let p = AlgebraParams::new(4, 3).unwrap();
        let f = pairing_functional(p).unwrap();
        assert!(f.evaluate(&CoefficientTable::zero(4)).is_zero());
        let mut t = CoefficientTable::zero(4);
        t.set(4, 1, one());
        assert_eq!(f.evaluate(&t), int(-1));
        assert!(pairing_functional(AlgebraParams::new(2, 3).unwrap()).is_err());
    }

    #[test]
    fn high_symmetric_monomial_not_regular() {
        let g = alg(6, 2);
        let c = phi_trace(&g, 3, 3);
        assert!(!c.is_zero());
        let r = check_harmonic(&g, &c).unwrap();
        assert!(r.failures().contains(&"strong_regularity"));
    }
}
