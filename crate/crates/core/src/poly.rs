//! Sparse multivariate polynomials and rational functions over the rationals.
//!
//! Monomials are ordered graded-lexicographically with variable 0 the
//! smallest variable, so the leading term of a polynomial is its last entry.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::scalar::Scalar;

/// Exponent vector with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: usize, e: u16) -> Self {
        let mut m = Monomial::one();
        if e > 0 {
            m.0.resize(v + 1, 0);
            m.0[v] = e;
        }
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        let mut m = Monomial(exps.iter().copied().collect());
        m.trim();
        m
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn exp(&self, v: usize) -> u16 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest variable with a nonzero exponent.
    pub fn max_var(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.0.len() >= other.0.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = long.clone();
        for (i, e) in short.0.iter().enumerate() {
            out.0[i] += e;
        }
        out
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut out = self.clone();
        for (i, &e) in other.0.iter().enumerate() {
            if out.0[i] < e {
                return None;
            }
            out.0[i] -= e;
        }
        out.trim();
        Some(out)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().min(other.0.len());
        Monomial::from_exponents(
            &(0..len)
                .map(|i| self.0[i].min(other.0[i]))
                .collect::<Vec<_>>(),
        )
    }

    /// Removes variable `v`, returning its exponent.
    fn split_var(&self, v: usize) -> (u16, Monomial) {
        let e = self.exp(v);
        if e == 0 {
            return (0, self.clone());
        }
        let mut rest = self.clone();
        rest.0[v] = 0;
        rest.trim();
        (e, rest)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let len = self.0.len().max(other.0.len());
            for v in (0..len).rev() {
                match self.exp(v).cmp(&other.exp(v)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::term(Monomial::one(), c)
    }

    pub fn var(v: usize) -> Self {
        Poly::term(Monomial::var(v, 1), Scalar::one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Constant term value when the polynomial is constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.is_zero() {
            Some(Scalar::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(Monomial::max_var).max()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u16 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn involves(&self, v: usize) -> bool {
        self.degree_in(v) > 0
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, v: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut exps: SmallVec<[u16; 8]> = m.0.clone();
            exps[v] -= 1;
            let mut nm = Monomial(exps);
            nm.trim();
            out.add_term(nm, c * Scalar::from_integer(e.into()));
        }
        out
    }

    /// Coefficients of the powers of `v`, as polynomials free of `v`.
    pub fn coeffs_in(&self, v: usize) -> BTreeMap<u16, Poly> {
        let mut out: BTreeMap<u16, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Evaluates the variables listed in `point`; others stay symbolic.
    pub fn eval_partial(&self, point: &BTreeMap<usize, Scalar>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps: SmallVec<[u16; 8]> = m.0.clone();
            for (v, e) in exps.iter_mut().enumerate() {
                if *e > 0 {
                    if let Some(x) = point.get(&v) {
                        coeff *= num_traits::pow(x.clone(), *e as usize);
                        *e = 0;
                    }
                }
            }
            let mut nm = Monomial(exps);
            nm.trim();
            out.add_term(nm, coeff);
        }
        out
    }

    /// Leading coefficient normalized to one; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (dl, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((rm, rc)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = rm.div(&dl)?;
            let qc = rc / &dc;
            r = &r - &d.mul_monomial(&qm, &qc);
            q.add_term(qm, qc);
        }
        Some(q)
    }

    fn content_in(&self, v: usize) -> Poly {
        let mut g = Poly::zero();
        for c in self.coeffs_in(v).into_values() {
            g = gcd(&g, &c);
            if g.is_constant() && !g.is_zero() {
                return Poly::one();
            }
        }
        g
    }

    fn prem(&self, b: &Poly, v: usize) -> Poly {
        let db = b.degree_in(v);
        let lb = b.coeffs_in(v).remove(&db).unwrap_or_default();
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= db {
            let dr = r.degree_in(v);
            let lr = r.coeffs_in(v).remove(&dr).unwrap_or_default();
            let shift = Monomial::var(v, dr - db);
            r = &(&r * &lb) - &(&lr * b).mul_monomial(&shift, &Scalar::one());
        }
        r
    }

    pub fn fmt_with(&self, name: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                if a.is_integer() {
                    factors.push(a.numer().to_string());
                } else {
                    factors.push(format!("{}/{}", a.numer(), a.denom()));
                }
            }
            for (v, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(name(v)),
                    _ => {
                        let nm = name(v);
                        if nm.chars().all(|ch| ch.is_alphanumeric() || ch == '_') {
                            factors.push(format!("{nm}^{e}"));
                        } else {
                            factors.push(format!("({nm})^{e}"));
                        }
                    }
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

/// Greatest common divisor, normalized to leading coefficient one.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.is_monomial() {
        return monomial_gcd(a, b);
    }
    if b.is_monomial() {
        return monomial_gcd(b, a);
    }
    if coprime(a, b) {
        return Poly::one();
    }
    let top = a.max_var().max(b.max_var()).expect("nonconstant");
    // a variable present in only one argument cannot occur in the gcd
    if let Some(w) = (0..=top).find(|&w| a.involves(w) != b.involves(w)) {
        let (with, without) = if a.involves(w) { (a, b) } else { (b, a) };
        let mut g = without.clone();
        for c in with.coeffs_in(w).into_values() {
            g = gcd(&g, &c);
            if g.is_constant() {
                return Poly::one();
            }
        }
        return g.monic();
    }
    let v = (0..=top)
        .filter(|&w| a.involves(w))
        .min_by_key(|&w| (a.degree_in(w).max(b.degree_in(w)), std::cmp::Reverse(w)))
        .expect("nonconstant");
    let (da, db) = (a.degree_in(v), b.degree_in(v));
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd(&ca, &cb);
    if coprime_in(a, b, v) {
        return c.monic();
    }
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let (mut p, mut q) = if da >= db { (pa, pb) } else { (pb, pa) };
    let g = loop {
        let r = p.prem(&q, v);
        if r.is_zero() {
            break q;
        }
        if r.degree_in(v) == 0 {
            break Poly::one();
        }
        let cr = r.content_in(v);
        p = q;
        q = r.div_exact(&cr).expect("content divides");
    };
    (&c * &g).monic()
}

/// Sufficient test for gcd(a, b) = 1: a common factor involving `w` would
/// survive every specialization of the other variables that keeps both
/// leading coefficients in `w`.
fn coprime(a: &Poly, b: &Poly) -> bool {
    let top = a.max_var().max(b.max_var()).unwrap_or(0);
    (0..=top)
        .filter(|&w| a.involves(w) && b.involves(w))
        .all(|w| coprime_in(a, b, w))
}

/// Sufficient test that the primitive parts of `a` and `b` in `v` are
/// coprime: specialize every other variable at a point where both leading
/// coefficients survive and run univariate Euclid.
fn coprime_in(a: &Poly, b: &Poly, v: usize) -> bool {
    let vars = a.max_var().max(b.max_var()).unwrap_or(0);
    let (ca, cb) = (a.coeffs_in(v), b.coeffs_in(v));
    for attempt in 0..3u64 {
        let point: BTreeMap<usize, Scalar> = (0..=vars)
            .filter(|&w| w != v)
            .map(|w| {
                let x = (w as u64 * 7 + attempt * 13 + 3) % 29 + 2;
                (w, Scalar::from_integer((x as i64).into()))
            })
            .collect();
        let special = |cs: &BTreeMap<u16, Poly>| -> Vec<Scalar> {
            let top = *cs.keys().next_back().expect("nonzero");
            let mut out = vec![Scalar::zero(); top as usize + 1];
            for (e, c) in cs {
                out[*e as usize] = c
                    .eval_partial(&point)
                    .as_constant()
                    .expect("fully specialized");
            }
            out
        };
        let (ua, ub) = (special(&ca), special(&cb));
        if ua.last().is_some_and(Zero::is_zero) || ub.last().is_some_and(Zero::is_zero) {
            continue;
        }
        return univariate_gcd_degree(ua, ub) == 0;
    }
    false
}

fn univariate_gcd_degree(mut p: Vec<Scalar>, mut q: Vec<Scalar>) -> usize {
    let trim = |x: &mut Vec<Scalar>| {
        while x.last().is_some_and(Zero::is_zero) {
            x.pop();
        }
    };
    trim(&mut p);
    trim(&mut q);
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_empty() {
        let lq = q.last().expect("nonempty").clone();
        while p.len() >= q.len() {
            let f = p.last().expect("nonempty") / &lq;
            let shift = p.len() - q.len();
            for (i, c) in q.iter().enumerate() {
                p[shift + i] -= &f * c;
            }
            p.pop();
            trim(&mut p);
        }
        std::mem::swap(&mut p, &mut q);
    }
    p.len().saturating_sub(1)
}

fn monomial_gcd(mono: &Poly, other: &Poly) -> Poly {
    let mut g = mono.leading().expect("nonzero").0.clone();
    for m in other.terms.keys() {
        g = g.gcd(m);
        if g.is_one() {
            break;
        }
    }
    Poly::term(g, Scalar::one())
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (mut out, other) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&|v| format!("x{v}")))
    }
}

impl crate::scalar::Coefficient for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn from_scalar(s: Scalar) -> Self {
        Poly::constant(s)
    }
    fn mul_scalar(&self, s: &Scalar) -> Self {
        self.scale(s)
    }
}

/// Quotient of polynomials in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }

    pub fn constant(c: Scalar) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn var(v: usize) -> Self {
        RatFunc::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    /// `num / den` reduced to canonical form; `None` if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RatFunc::zero());
        }
        if let Some(c) = den.as_constant() {
            return Some(RatFunc::from_poly(num.scale(&c.recip())));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        let lc = den.leading().expect("nonzero").1.recip();
        Some(RatFunc {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    /// Coprime `num / den`; only rescales to a monic denominator.
    fn from_reduced(num: Poly, den: Poly) -> Self {
        if let Some(c) = den.as_constant() {
            return RatFunc::from_poly(num.scale(&c.recip()));
        }
        let lc = den.leading().expect("nonzero").1.recip();
        RatFunc {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        if self.den.is_constant() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn involves(&self, v: usize) -> bool {
        self.num.involves(v) || self.den.involves(v)
    }

    pub fn max_var(&self) -> Option<usize> {
        self.num.max_var().max(self.den.max_var())
    }

    pub fn recip(&self) -> Option<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Option<RatFunc> {
        if rhs.is_zero() {
            return None;
        }
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn scale(&self, c: &Scalar) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    pub fn derivative(&self, v: usize) -> RatFunc {
        if !self.involves(v) {
            return RatFunc::zero();
        }
        self.derivation(&[(v, Poly::one())], &Poly::one())
    }

    /// Σ_v (c_v / den) ∂_v applied to `self`.
    pub fn derivation(&self, terms: &[(usize, Poly)], den: &Poly) -> RatFunc {
        let apply = |p: &Poly| {
            terms
                .iter()
                .filter(|(v, c)| !c.is_zero() && p.involves(*v))
                .fold(Poly::zero(), |acc, (v, c)| &acc + &(c * &p.derivative(*v)))
        };
        let (n, d) = (&self.num, &self.den);
        if d.is_constant() {
            return RatFunc::new(apply(n), den.clone()).expect("nonzero denominator");
        }
        // With k = gcd(d, X d), d = k d1 and X d = k e1, the numerator
        // X(n) d1 − n e1 is coprime to d1, so only k·den can cancel.
        let xd = apply(d);
        let k = gcd(d, &xd);
        let (d1, e1) = if k.is_constant() {
            (d.clone(), xd)
        } else {
            (
                d.div_exact(&k).expect("gcd divides"),
                xd.div_exact(&k).expect("gcd divides"),
            )
        };
        let top = &(&apply(n) * &d1) - &(n * &e1);
        if top.is_zero() {
            return RatFunc::zero();
        }
        let rest = &k * den;
        let h = gcd(&top, &rest);
        let (top, rest) = if h.is_constant() {
            (top, rest)
        } else {
            (
                top.div_exact(&h).expect("gcd divides"),
                rest.div_exact(&h).expect("gcd divides"),
            )
        };
        RatFunc::from_reduced(top, &(&d1 * &d1) * &rest)
    }

    /// Replaces variable `v` by `value`.
    pub fn substitute(&self, v: usize, value: &RatFunc) -> Option<RatFunc> {
        if !self.involves(v) {
            return Some(self.clone());
        }
        let n = horner(&self.num, v, value);
        let d = horner(&self.den, v, value);
        n.checked_div(&d)
    }

    /// Evaluates at a rational point; `None` if the denominator vanishes.
    pub fn eval_partial(&self, point: &BTreeMap<usize, Scalar>) -> Option<RatFunc> {
        RatFunc::new(self.num.eval_partial(point), self.den.eval_partial(point))
    }

    pub fn fmt_with(&self, name: &dyn Fn(usize) -> String) -> String {
        let n = self.num.fmt_with(name);
        if self.den.is_one_poly() {
            return n;
        }
        let nn = if self.num.len() > 1 || self.num.terms.values().any(|c| !c.is_integer()) {
            format!("({n})")
        } else {
            n
        };
        let single_factor =
            self.den.len() == 1
                && self.den.terms.iter().all(|(m, c)| {
                    (m.is_one() && c.is_integer()) || (c.is_one() && m.degree() == 1)
                });
        let d = self.den.fmt_with(name);
        let dd = if single_factor { d } else { format!("({d})") };
        format!("{nn}/{dd}")
    }
}

impl Poly {
    fn is_one_poly(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }
}

fn horner(p: &Poly, v: usize, value: &RatFunc) -> RatFunc {
    let coeffs = p.coeffs_in(v);
    let top = coeffs.keys().next_back().copied().unwrap_or(0);
    let mut acc = RatFunc::zero();
    for e in (0..=top).rev() {
        acc = &acc * value;
        if let Some(c) = coeffs.get(&e) {
            acc = &acc + &RatFunc::from_poly(c.clone());
        }
    }
    acc
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero");
        }
        // Only factors of g = gcd(d1, d2) can cancel.
        let g = gcd(&self.den, &rhs.den);
        if g.is_constant() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return RatFunc::from_reduced(num, &self.den * &rhs.den);
        }
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        if num.is_zero() {
            return RatFunc::zero();
        }
        let h = gcd(&num, &g);
        let (num, g) = if h.is_constant() {
            (num, g)
        } else {
            (
                num.div_exact(&h).expect("gcd divides"),
                g.div_exact(&h).expect("gcd divides"),
            )
        };
        RatFunc::from_reduced(num, &(&d1 * &d2) * &g)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        // Both inputs are reduced, so cross gcds suffice.
        let cancel = |n: &Poly, d: &Poly| {
            let g = gcd(n, d);
            if g.is_constant() {
                (n.clone(), d.clone())
            } else {
                (
                    n.div_exact(&g).expect("gcd divides"),
                    d.div_exact(&g).expect("gcd divides"),
                )
            }
        };
        let (n1, d2) = cancel(&self.num, &rhs.den);
        let (n2, d1) = cancel(&rhs.num, &self.den);
        RatFunc::from_reduced(&n1 * &n2, &d1 * &d2)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        &self + &rhs
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        &self - &rhs
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        &self * &rhs
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&|v| format!("x{v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};
    use proptest::prelude::*;

    fn x(v: usize) -> Poly {
        Poly::var(v)
    }
    fn c(k: i64) -> Poly {
        Poly::constant(int(k))
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::var(0, 2);
        let b = Monomial::var(1, 1);
        assert!(a > b);
        assert!(Monomial::var(1, 1) > Monomial::var(0, 1));
        assert!(Monomial::one() < Monomial::var(0, 1));
    }

    #[test]
    fn gcd_of_products() {
        let f = &(&x(0) + &x(1)) * &(&x(2) - &c(3));
        let g = &(&x(0) + &x(1)) * &(&(&x(0) * &x(2)) + &c(1));
        assert_eq!(gcd(&f, &g), &x(0) + &x(1));
        assert_eq!(gcd(&x(0), &(&x(0) * &x(1))), x(0));
        assert_eq!(gcd(&c(6), &x(1)), Poly::one());
    }

    #[test]
    fn ratfunc_normalizes() {
        let num = &(&x(0) * &x(0)) - &c(1);
        let den = (&x(0) - &c(1)).scale(&int(2));
        let r = RatFunc::new(num, den).unwrap();
        assert_eq!(r.denom(), &Poly::one());
        assert_eq!(r.numer(), &(&x(0) + &c(1)).scale(&frac(1, 2)));
    }

    #[test]
    fn quotient_rule() {
        let r = RatFunc::new(x(1), x(0)).unwrap();
        let d = r.derivative(0);
        let expect = RatFunc::new(-&x(1), &x(0) * &x(0)).unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn substitution() {
        let p = RatFunc::from_poly(&x(0) * &x(0) + x(1));
        let v = RatFunc::new(c(1), x(1)).unwrap();
        let got = p.substitute(0, &v).unwrap();
        let expect = RatFunc::new(&x(1).pow(3) + &c(1), x(1).pow(2)).unwrap();
        assert_eq!(got, expect);
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((0u16..3, 0u16..3, 0u16..2, -3i64..4), 1..4).prop_map(|ts| {
            let mut p = Poly::zero();
            for (a, b, cc, k) in ts {
                p.add_term(Monomial::from_exponents(&[a, b, cc]), int(k));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn gcd_divides_both(a in small_poly(), b in small_poly(), k in small_poly()) {
            let fa = &a * &k;
            let fb = &b * &k;
            let g = gcd(&fa, &fb);
            if !fa.is_zero() || !fb.is_zero() {
                prop_assert!(fa.div_exact(&g).is_some());
                prop_assert!(fb.div_exact(&g).is_some());
                if !k.is_zero() {
                    prop_assert!(g.div_exact(&k.monic()).is_some());
                }
            }
        }

        #[test]
        fn ratfunc_field_ops(a in small_poly(), b in small_poly(), d in small_poly()) {
            prop_assume!(!d.is_zero());
            let r = RatFunc::new(a.clone(), d.clone()).unwrap();
            let s = RatFunc::from_poly(b.clone());
            let sum = &r + &s;
            prop_assert_eq!(&(&sum - &s), &r);
            let prod = &r * &s;
            if !b.is_zero() {
                prop_assert_eq!(prod.checked_div(&s).unwrap(), r);
            }
        }
    }
}
