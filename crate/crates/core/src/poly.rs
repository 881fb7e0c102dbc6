//! Exact integer polynomials in `x` and `y`, and the substitutions that relate
//! the H-, F- and M-triangles.
//!
//! Every substitution below is a closed monomial rule. Each rule needs a
//! support condition on its input (for example `ydeg <= xdeg` for
//! H-triangles) to stay free of denominators. The rules check that condition
//! and never fall back to rational functions.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Polynomial in `x` and `y` with arbitrary-precision integer coefficients.
///
/// Zero coefficients are never stored, so structural equality is polynomial
/// equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn monomial(c: impl Into<BigInt>, xdeg: u32, ydeg: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(xdeg, ydeg, c.into());
        p
    }

    /// Build from `(xdeg, ydeg, coeff)` triples; repeated monomials add up.
    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (u32, u32, C)>) -> Self {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c.into());
        }
        p
    }

    pub fn add_term(&mut self, xdeg: u32, ydeg: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((xdeg, ydeg)).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(xdeg, ydeg));
        }
    }

    pub fn coeff(&self, xdeg: u32, ydeg: u32) -> BigInt {
        self.terms.get(&(xdeg, ydeg)).cloned().unwrap_or_default()
    }

    /// Nonzero terms in lexicographic `(xdeg, ydeg)` order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
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

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero();
        for (i, j, a) in self.terms() {
            out.add_term(i, j, a * c);
        }
        out
    }

    pub fn derivative_y(&self) -> Self {
        let mut out = Self::zero();
        for (i, j, c) in self.terms() {
            if j > 0 {
                out.add_term(i, j - 1, c * BigInt::from(j));
            }
        }
        out
    }

    /// `p(x, 1)`.
    pub fn at_y_one(&self) -> UniPoly {
        let mut out = UniPoly::zero();
        for (i, _, c) in self.terms() {
            out.add_term(i, c.clone());
        }
        out
    }

    /// Sum of all coefficients, `p(1, 1)`.
    pub fn at_one_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        self.terms()
            .map(|(i, j, c)| c * x.pow(i) * y.pow(j))
            .sum()
    }

    pub fn max_total_degree(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    /// Every monomial satisfies `ydeg <= xdeg` (H-triangle support).
    pub fn is_h_supported(&self) -> bool {
        self.terms.keys().all(|(i, j)| j <= i)
    }

    /// Every monomial satisfies `xdeg + ydeg <= n` (F-triangle support).
    pub fn is_f_supported(&self, n: u32) -> bool {
        self.terms.keys().all(|(i, j)| i + j <= n)
    }

    /// Every monomial satisfies `xdeg <= ydeg <= n` (M-triangle support).
    pub fn is_m_supported(&self, n: u32) -> bool {
        self.terms.keys().all(|(i, j)| i <= j && *j <= n)
    }

    /// Apply `x^i y^j -> rule(i, j)` term by term.
    pub fn map_monomials(&self, mut rule: impl FnMut(u32, u32) -> BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (i, j, c) in self.terms() {
            out += &rule(i, j).scale(c);
        }
        out
    }

    /// Monomials as `[xdeg, ydeg, coeff]`, sorted lexicographically.
    pub fn to_json_terms(&self) -> serde_json::Value {
        let items = self
            .terms()
            .map(|(i, j, c)| {
                serde_json::json!([i, j, serde_json::Number::from_str(&c.to_string()).unwrap()])
            })
            .collect();
        serde_json::Value::Array(items)
    }

    pub fn from_json_terms(v: &serde_json::Value) -> Result<Self> {
        let bad = || Error::Usage("expected [[xdeg, ydeg, coeff], ...]".into());
        let mut p = Self::zero();
        for item in v.as_array().ok_or_else(bad)? {
            let arr = item.as_array().ok_or_else(bad)?;
            let [i, j, c] = arr.as_slice() else {
                return Err(bad());
            };
            let i = i.as_u64().ok_or_else(bad)? as u32;
            let j = j.as_u64().ok_or_else(bad)? as u32;
            let c: BigInt = c.to_string().parse().map_err(|_| bad())?;
            p.add_term(i, j, c);
        }
        Ok(p)
    }

    /// Coefficient table as a LaTeX tabular, rows by `x`-degree and columns
    /// by `y`-degree.
    pub fn to_latex_table(&self) -> String {
        let xmax = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let ymax = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        let mut s = format!("\\begin{{tabular}}{{c|{}}}\n", "r".repeat(ymax as usize + 1));
        for j in 0..=ymax {
            s.push_str(&format!(" & $y^{{{j}}}$"));
        }
        s.push_str(" \\\\ \\hline\n");
        for i in 0..=xmax {
            s.push_str(&format!("$x^{{{i}}}$"));
            for j in 0..=ymax {
                s.push_str(&format!(" & {}", self.coeff(i, j)));
            }
            s.push_str(" \\\\\n");
        }
        s.push_str("\\end{tabular}\n");
        s
    }

    fn sorted_for_display(&self) -> Vec<(u32, u32, &BigInt)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|a, b| (a.0 + a.1).cmp(&(b.0 + b.1)).then(b.0.cmp(&a.0)));
        v
    }

    /// The polynomial as inline LaTeX math.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (n, (i, j, c)) in self.sorted_for_display().into_iter().enumerate() {
            let mono = format!("{}{}", latex_power("x", i), latex_power("y", j));
            push_term(&mut s, n == 0, c, &mono);
        }
        s
    }
}

fn latex_power(var: &str, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{{{e}}}"),
    }
}

fn text_power(var: &str, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

fn push_term(s: &mut String, first: bool, c: &BigInt, mono: &str) {
    let neg = c.is_negative();
    if first {
        if neg {
            s.push('-');
        }
    } else {
        s.push_str(if neg { " - " } else { " + " });
    }
    let a = c.abs();
    if mono.is_empty() {
        s.push_str(&a.to_string());
    } else {
        if !a.is_one() {
            s.push_str(&a.to_string());
        }
        s.push_str(mono);
    }
}

/// Terms ordered by total degree, then by descending `x`-degree, e.g.
/// `1 + x + 2xy + x^2y^2`.
impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut s = String::new();
        for (n, (i, j, c)) in self.sorted_for_display().into_iter().enumerate() {
            let mono = format!("{}{}", text_power("x", i), text_power("y", j));
            push_term(&mut s, n == 0, c, &mono);
        }
        f.write_str(&s)
    }
}

impl AddAssign<&BivarPoly> for BivarPoly {
    fn add_assign(&mut self, rhs: &BivarPoly) {
        for (i, j, c) in rhs.terms() {
            self.add_term(i, j, c.clone());
        }
    }
}

impl Add for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for BivarPoly {
    type Output = BivarPoly;
    fn add(mut self, rhs: BivarPoly) -> BivarPoly {
        self += &rhs;
        self
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        self.scale(&BigInt::from(-1))
    }
}

impl Sub for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        self + &(-rhs)
    }
}

impl Sub for BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: BivarPoly) -> BivarPoly {
        &self - &rhs
    }
}

impl Mul for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (i, j, a) in self.terms() {
            for (k, l, b) in rhs.terms() {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }
}

impl Mul for BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: BivarPoly) -> BivarPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for BivarPoly {
    fn sum<I: Iterator<Item = BivarPoly>>(iter: I) -> Self {
        let mut out = BivarPoly::zero();
        for p in iter {
            out += &p;
        }
        out
    }
}

/// Univariate integer polynomial in `x`, dense, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_coeffs<C: Into<BigInt>>(coeffs: impl IntoIterator<Item = C>) -> Self {
        let mut p = UniPoly {
            coeffs: coeffs.into_iter().map(Into::into).collect(),
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn add_term(&mut self, deg: u32, c: BigInt) {
        let d = deg as usize;
        if self.coeffs.len() <= d {
            self.coeffs.resize(d + 1, BigInt::zero());
        }
        self.coeffs[d] += c;
        self.trim();
    }

    pub fn coeff(&self, deg: u32) -> BigInt {
        self.coeffs.get(deg as usize).cloned().unwrap_or_default()
    }

    /// Coefficients from degree 0 upwards.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<u32> {
        (!self.coeffs.is_empty()).then(|| self.coeffs.len() as u32 - 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Embed as a bivariate polynomial in `x`.
    pub fn to_bivar(&self) -> BivarPoly {
        BivarPoly::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (i as u32, 0, c.clone())),
        )
    }

    /// Coefficients of `x^n, x^(n-1), ..., x^0`.
    pub fn descending(&self, n: u32) -> Vec<BigInt> {
        (0..=n).rev().map(|d| self.coeff(d)).collect()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut s = String::new();
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            push_term(&mut s, first, c, &text_power("x", d as u32));
            first = false;
        }
        f.write_str(&s)
    }
}

/// Which triangle a polynomial encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Triangle {
    H,
    F,
    M,
}

impl FromStr for Triangle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H" | "h" => Ok(Triangle::H),
            "F" | "f" => Ok(Triangle::F),
            "M" | "m" => Ok(Triangle::M),
            _ => Err(Error::Usage(format!("unknown triangle {s:?}; expected H, F or M"))),
        }
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Triangle::H => "H",
            Triangle::F => "F",
            Triangle::M => "M",
        })
    }
}

/// `{"triangle":..,"type":..,"k":..,"n":..,"monomials":[[xdeg,ydeg,coeff],..]}`.
pub fn triangle_json(kind: Triangle, type_name: &str, k: u32, n: u32, p: &BivarPoly) -> String {
    let v = serde_json::json!({
        "triangle": kind.to_string(),
        "type": type_name,
        "k": k,
        "n": n,
        "monomials": p.to_json_terms(),
    });
    serde_json::to_string(&v).expect("json")
}

// Building blocks for the substitution rules.

fn lin(c0: i64, cx: i64, cy: i64, cxy: i64) -> BivarPoly {
    BivarPoly::from_terms([(0, 0, c0), (1, 0, cx), (0, 1, cy), (1, 1, cxy)])
}

/// `1 + (y-1)x`
fn one_plus_ym1_x() -> BivarPoly {
    lin(1, -1, 0, 1)
}

/// Cached powers of a fixed polynomial.
struct Powers {
    base: BivarPoly,
    cache: Vec<BivarPoly>,
}

impl Powers {
    fn new(base: BivarPoly) -> Self {
        Powers {
            base,
            cache: vec![BivarPoly::one()],
        }
    }

    fn get(&mut self, e: u32) -> BivarPoly {
        while self.cache.len() <= e as usize {
            let next = self.cache.last().unwrap() * &self.base;
            self.cache.push(next);
        }
        self.cache[e as usize].clone()
    }
}

/// Right-hand side of the H = F identity:
/// `(x-1)^n F(1/(x-1), (1+(y-1)x)/(x-1))`, term rule
/// `x^l y^m -> (1+(y-1)x)^m (x-1)^(n-l-m)`.
pub fn hf_transform(f: &BivarPoly, n: u32) -> Result<BivarPoly> {
    if !f.is_f_supported(n) {
        return Err(Error::Precondition(format!(
            "F-triangle has a monomial of total degree above n = {n}"
        )));
    }
    let mut a = Powers::new(one_plus_ym1_x());
    let mut b = Powers::new(lin(-1, 1, 0, 0));
    Ok(f.map_monomials(|l, m| &a.get(m) * &b.get(n - l - m)))
}

/// `(1+(y-1)x)^n M(y/(y-1), (y-1)x/(1+(y-1)x))`, term rule
/// `x^a y^b -> y^a (y-1)^(b-a) x^b (1+(y-1)x)^(n-b)`.
pub fn hm_transform(m: &BivarPoly, n: u32) -> Result<BivarPoly> {
    if !m.is_m_supported(n) {
        return Err(Error::Precondition(
            "M-triangle monomial violates xdeg <= ydeg <= n".into(),
        ));
    }
    let mut ym1 = Powers::new(lin(-1, 0, 1, 0));
    let mut c = Powers::new(one_plus_ym1_x());
    Ok(m.map_monomials(|a, b| {
        &(&BivarPoly::monomial(1, b, a) * &ym1.get(b - a)) * &c.get(n - b)
    }))
}

/// `(1-y)^n H(y(x-1)/(1-y), x/(x-1))`, term rule
/// `x^i y^j -> (1-y)^(n-i) y^i (x-1)^(i-j) x^j`; inverts [`hm_transform`].
pub fn mh_transform(h: &BivarPoly, n: u32) -> Result<BivarPoly> {
    if !h.is_h_supported() || h.terms().any(|(i, _, _)| i > n) {
        return Err(Error::Precondition(
            "H-triangle monomial violates ydeg <= xdeg <= n".into(),
        ));
    }
    let mut omy = Powers::new(lin(1, 0, -1, 0));
    let mut xm1 = Powers::new(lin(-1, 1, 0, 0));
    Ok(h.map_monomials(|i, j| {
        &(&BivarPoly::monomial(1, j, i) * &omy.get(n - i)) * &xm1.get(i - j)
    }))
}

/// `y^n M((1+y)/(y-x), (y-x)/y)`, term rule
/// `x^a y^b -> (1+y)^a (y-x)^(b-a) y^(n-b)`.
pub fn fm_transform(m: &BivarPoly, n: u32) -> Result<BivarPoly> {
    if !m.is_m_supported(n) {
        return Err(Error::Precondition(
            "M-triangle monomial violates xdeg <= ydeg <= n".into(),
        ));
    }
    let mut opy = Powers::new(lin(1, 0, 1, 0));
    let mut ymx = Powers::new(lin(0, -1, 1, 0));
    Ok(m.map_monomials(|a, b| {
        &(&opy.get(a) * &ymx.get(b - a)) * &BivarPoly::monomial(1, 0, n - b)
    }))
}

/// Outcome of a polynomial identity check: `Err` carries `lhs - rhs`.
pub type IdentityResult = std::result::Result<(), BivarPoly>;

fn compare(lhs: &BivarPoly, rhs: &BivarPoly) -> IdentityResult {
    let diff = lhs - rhs;
    if diff.is_zero() {
        Ok(())
    } else {
        Err(diff)
    }
}

/// Checks `F = y^n M((1+y)/(y-x), (y-x)/y)`.
pub fn fm_check(f: &BivarPoly, m: &BivarPoly, n: u32) -> Result<IdentityResult> {
    Ok(compare(f, &fm_transform(m, n)?))
}

/// `(1-x)^n F(x/(1-x), xy/(1-x))`, term rule
/// `x^l y^m -> x^(l+m) y^m (1-x)^(n-l-m)`.
pub fn k1_transform(f: &BivarPoly, n: u32) -> Result<BivarPoly> {
    if !f.is_f_supported(n) {
        return Err(Error::Precondition(format!(
            "F-triangle has a monomial of total degree above n = {n}"
        )));
    }
    let mut omx = Powers::new(lin(1, -1, 0, 0));
    Ok(f.map_monomials(|l, m| &BivarPoly::monomial(1, l + m, m) * &omx.get(n - l - m)))
}

/// Checks the `k = 1` form `H = (1-x)^n F(x/(1-x), xy/(1-x))`.
pub fn k1_form_check(h: &BivarPoly, f: &BivarPoly, n: u32) -> Result<IdentityResult> {
    Ok(compare(h, &k1_transform(f, n)?))
}

/// `(-1)^n F(-1-x, -1-y)`; a `k = 1` F-triangle is a fixed point.
pub fn f_dual(f: &BivarPoly, n: u32) -> BivarPoly {
    let mut mx = Powers::new(lin(-1, -1, 0, 0));
    let mut my = Powers::new(lin(-1, 0, -1, 0));
    let out = f.map_monomials(|l, m| &mx.get(l) * &my.get(m));
    if n % 2 == 1 {
        -&out
    } else {
        out
    }
}

/// `(-1)^n H(1-x, -xy/(1-x))`, term rule
/// `x^i y^j -> (-1)^n (1-x)^(i-j) (-xy)^j`.
pub fn recip_transform(h: &BivarPoly, n: u32) -> Result<BivarPoly> {
    if !h.is_h_supported() {
        return Err(Error::Precondition("H-triangle monomial with ydeg > xdeg".into()));
    }
    let mut omx = Powers::new(lin(1, -1, 0, 0));
    let out = h.map_monomials(|i, j| {
        let sign = if j % 2 == 1 { -1 } else { 1 };
        &omx.get(i - j) * &BivarPoly::monomial(sign, j, j)
    });
    Ok(if n % 2 == 1 { -&out } else { out })
}

/// `x^n H(1/x, 1+(y-1)x)`, term rule `x^i y^j -> x^(n-i) (1+(y-1)x)^j`.
pub fn dual_transform(h: &BivarPoly, n: u32) -> Result<BivarPoly> {
    if !h.is_h_supported() || h.terms().any(|(i, _, _)| i > n) {
        return Err(Error::Precondition(
            "H-triangle monomial violates ydeg <= xdeg <= n".into(),
        ));
    }
    let mut c = Powers::new(one_plus_ym1_x());
    Ok(h.map_monomials(|i, j| &BivarPoly::monomial(1, n - i, 0) * &c.get(j)))
}

/// Checks `H = x^n H(1/x, 1+(y-1)x)` (only meaningful for `k = 1`).
pub fn dual_check(h: &BivarPoly, n: u32) -> Result<IdentityResult> {
    Ok(compare(h, &dual_transform(h, n)?))
}

/// `H(x, 1 - 1/x)`, term rule `x^i y^j -> x^(i-j) (x-1)^j`.
pub fn ceil_specialise(h: &BivarPoly) -> Result<UniPoly> {
    if !h.is_h_supported() {
        return Err(Error::Precondition("H-triangle monomial with ydeg > xdeg".into()));
    }
    let mut xm1 = Powers::new(lin(-1, 1, 0, 0));
    let p = h.map_monomials(|i, j| &BivarPoly::monomial(1, i - j, 0) * &xm1.get(j));
    Ok(p.at_y_one())
}

/// `x^n H(1/x, 0)`.
pub fn final_specialise(h: &BivarPoly, n: u32) -> Result<UniPoly> {
    let mut out = UniPoly::zero();
    for (i, j, c) in h.terms() {
        if j == 0 {
            if i > n {
                return Err(Error::Precondition(format!("monomial x^{i} exceeds n = {n}")));
            }
            out.add_term(n - i, c.clone());
        }
    }
    Ok(out)
}

/// `sum_{l,m} f_{l,m} (x-1)^(n-l-m)`, i.e. `sum_i h_i x^(n-i)`.
pub fn h_polynomial(f: &BivarPoly, n: u32) -> Result<UniPoly> {
    if !f.is_f_supported(n) {
        return Err(Error::Precondition(format!(
            "F-triangle has a monomial of total degree above n = {n}"
        )));
    }
    let mut xm1 = Powers::new(lin(-1, 1, 0, 0));
    Ok(f.map_monomials(|l, m| xm1.get(n - l - m)).at_y_one())
}

/// `sum_l f_{l,0} (x-1)^(n-l)`: the h-polynomial of the positive part.
pub fn positive_h_polynomial(f: &BivarPoly, n: u32) -> Result<UniPoly> {
    let positive = BivarPoly::from_terms(
        f.terms()
            .filter(|&(_, m, _)| m == 0)
            .map(|(l, m, c)| (l, m, c.clone())),
    );
    h_polynomial(&positive, n)
}

/// Product of triangles of the irreducible factors.
pub fn product<'a>(ps: impl IntoIterator<Item = &'a BivarPoly>) -> BivarPoly {
    ps.into_iter().fold(BivarPoly::one(), |acc, p| &acc * p)
}

/// Coefficients (lowest degree first) of the unique polynomial of degree
/// `< points.len()` through the given points.
pub fn interpolate(points: &[(BigRational, BigRational)]) -> Result<Vec<BigRational>> {
    let m = points.len();
    // Newton divided differences, then expand into the monomial basis.
    let xs: Vec<&BigRational> = points.iter().map(|p| &p.0).collect();
    let mut dd: Vec<BigRational> = points.iter().map(|p| p.1.clone()).collect();
    for level in 1..m {
        for i in (level..m).rev() {
            let den = xs[i] - xs[i - level];
            if den.is_zero() {
                return Err(Error::Precondition("repeated interpolation node".into()));
            }
            dd[i] = (&dd[i] - &dd[i - 1]) / den;
        }
    }
    let mut coeffs = vec![BigRational::zero(); m];
    for i in (0..m).rev() {
        // coeffs = coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![BigRational::zero(); m];
        for d in 0..m {
            if coeffs[d].is_zero() {
                continue;
            }
            if d + 1 < m {
                next[d + 1] += &coeffs[d];
            }
            next[d] -= &coeffs[d] * xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    Ok(coeffs)
}

pub fn eval_rational(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// A family of triangles indexed by `k`, with each coefficient fitted as a
/// polynomial in `k`.
#[derive(Debug, Clone)]
pub struct KFamily {
    samples: BTreeMap<i64, BivarPoly>,
    coefficient_polys: BTreeMap<(u32, u32), Vec<BigRational>>,
    max_degree: usize,
}

impl KFamily {
    /// Fit on the first `max_degree + 1` samples; every further sample is a
    /// held-out check.
    pub fn fit(samples: BTreeMap<i64, BivarPoly>, max_degree: usize, holdout: usize) -> Result<Self> {
        let need = max_degree + 1 + holdout;
        if samples.len() < need {
            return Err(Error::Precondition(format!(
                "need {need} samples in k, got {}",
                samples.len()
            )));
        }
        let fit_ks: Vec<i64> = samples.keys().copied().take(max_degree + 1).collect();
        let monomials: std::collections::BTreeSet<(u32, u32)> = samples
            .values()
            .flat_map(|p| p.terms().map(|(i, j, _)| (i, j)))
            .collect();
        let mut coefficient_polys = BTreeMap::new();
        for &(i, j) in &monomials {
            let pts: Vec<(BigRational, BigRational)> = fit_ks
                .iter()
                .map(|&k| {
                    (
                        BigRational::from_integer(k.into()),
                        BigRational::from_integer(samples[&k].coeff(i, j)),
                    )
                })
                .collect();
            let c = interpolate(&pts)?;
            if c.len() > max_degree + 1 {
                return Err(Error::Invariant(format!(
                    "coefficient of x^{i}y^{j} needs degree {} > {max_degree} in k",
                    c.len() - 1
                )));
            }
            coefficient_polys.insert((i, j), c);
        }
        let fam = KFamily {
            samples,
            coefficient_polys,
            max_degree,
        };
        for (&k, p) in &fam.samples {
            let predicted = fam.eval(k)?;
            if &predicted != p {
                return Err(Error::Invariant(format!(
                    "fitted family mispredicts k = {k}: got {predicted}, expected {p}"
                )));
            }
        }
        Ok(fam)
    }

    pub fn samples(&self) -> &BTreeMap<i64, BivarPoly> {
        &self.samples
    }

    pub fn coefficient_polys(&self) -> &BTreeMap<(u32, u32), Vec<BigRational>> {
        &self.coefficient_polys
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Evaluate the fitted family at any integer `k`, including `k <= 0`.
    pub fn eval(&self, k: i64) -> Result<BivarPoly> {
        let kr = BigRational::from_integer(k.into());
        let mut p = BivarPoly::zero();
        for (&(i, j), c) in &self.coefficient_polys {
            let v = eval_rational(c, &kr);
            if !v.is_integer() {
                return Err(Error::Invariant(format!(
                    "coefficient of x^{i}y^{j} at k = {k} is not an integer: {v}"
                )));
            }
            p.add_term(i, j, v.to_integer());
        }
        Ok(p)
    }
}

/// Checks `H^k = (-1)^n H^{-k}(1-x, -xy/(1-x))` for every sampled `k`,
/// with `H^{-k}` read off the fitted coefficient polynomials.
pub fn recip_check(fam: &KFamily, n: u32) -> Result<std::result::Result<(), (i64, BivarPoly)>> {
    if fam.max_degree() > n as usize {
        return Err(Error::Invariant(format!(
            "interpolation degree {} exceeds n = {n}",
            fam.max_degree()
        )));
    }
    for (&k, h) in fam.samples() {
        let neg = fam.eval(-k)?;
        let rhs = recip_transform(&neg, n)?;
        if let Err(diff) = compare(h, &rhs) {
            return Ok(Err((k, diff)));
        }
    }
    Ok(Ok(()))
}

/// Saturating conversion used for human-readable summaries.
pub fn to_i128(c: &BigInt) -> Option<i128> {
    c.to_i128()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(u32, u32, i64)]) -> BivarPoly {
        BivarPoly::from_terms(terms.iter().copied())
    }

    fn h_a2() -> BivarPoly {
        p(&[(0, 0, 1), (1, 0, 1), (1, 1, 2), (2, 2, 1)])
    }

    fn f_a2() -> BivarPoly {
        p(&[(0, 0, 1), (1, 0, 3), (0, 1, 2), (2, 0, 2), (1, 1, 2), (0, 2, 1)])
    }

    #[test]
    fn display() {
        assert_eq!(h_a2().to_string(), "1 + x + 2xy + x^2y^2");
        assert_eq!(p(&[(0, 0, 1), (1, 0, 3), (0, 1, 1)]).to_string(), "1 + 3x + y");
        assert_eq!(p(&[(0, 0, 1), (0, 1, -1), (1, 1, 1)]).to_string(), "1 - y + xy");
        assert_eq!(BivarPoly::zero().to_string(), "0");
        assert_eq!(UniPoly::from_coeffs([0, 1, 1]).to_string(), "x^2 + x");
    }

    #[test]
    fn arithmetic_cancels() {
        let a = p(&[(1, 0, 1), (0, 0, -1)]);
        let sq = a.pow(2);
        assert_eq!(sq, p(&[(2, 0, 1), (1, 0, -2), (0, 0, 1)]));
        assert!((&sq - &sq).is_zero());
        assert_eq!(sq.derivative_y(), BivarPoly::zero());
        assert_eq!(h_a2().derivative_y(), p(&[(1, 0, 2), (2, 1, 2)]));
    }

    #[test]
    fn hf_on_small_cases() {
        for k in 1..5 {
            let f = p(&[(0, 0, 1), (1, 0, k), (0, 1, 1)]);
            assert_eq!(hf_transform(&f, 1).unwrap(), p(&[(0, 0, k), (1, 1, 1)]));
        }
        assert_eq!(hf_transform(&f_a2(), 2).unwrap(), h_a2());
        assert!(hf_transform(&p(&[(2, 0, 1)]), 1).is_err());
        // y = 1 slice is the h-polynomial
        assert_eq!(
            hf_transform(&f_a2(), 2).unwrap().at_y_one(),
            h_polynomial(&f_a2(), 2).unwrap()
        );
    }

    #[test]
    fn hm_and_mh() {
        let m = p(&[(0, 0, 1), (0, 1, -1), (1, 1, 1)]);
        assert_eq!(hm_transform(&m, 1).unwrap(), p(&[(0, 0, 1), (1, 1, 1)]));
        assert_eq!(hm_transform(&BivarPoly::one(), 0).unwrap(), BivarPoly::one());
        assert_eq!(mh_transform(&p(&[(0, 0, 1), (1, 1, 1)]), 1).unwrap(), m);
        assert!(hm_transform(&p(&[(1, 0, 1)]), 1).is_err());
    }

    #[test]
    fn fm_small() {
        let f = p(&[(0, 0, 1), (1, 0, 1), (0, 1, 1)]);
        let m = p(&[(0, 0, 1), (0, 1, -1), (1, 1, 1)]);
        assert_eq!(fm_check(&f, &m, 1).unwrap(), Ok(()));
        assert_eq!(fm_check(&BivarPoly::one(), &BivarPoly::one(), 0).unwrap(), Ok(()));
        assert!(fm_check(&f, &BivarPoly::one(), 1).unwrap().is_err());
    }

    #[test]
    fn k1_dual_ceil() {
        let h_a1 = p(&[(0, 0, 1), (1, 1, 1)]);
        let f_a1 = p(&[(0, 0, 1), (1, 0, 1), (0, 1, 1)]);
        assert_eq!(k1_form_check(&h_a1, &f_a1, 1).unwrap(), Ok(()));
        assert_eq!(k1_form_check(&h_a2(), &f_a2(), 2).unwrap(), Ok(()));
        assert_eq!(k1_form_check(&BivarPoly::one(), &BivarPoly::one(), 0).unwrap(), Ok(()));
        assert_eq!(f_dual(&f_a2(), 2), f_a2());
        assert_eq!(f_dual(&f_a1, 1), f_a1);
        assert_eq!(dual_check(&h_a1, 1).unwrap(), Ok(()));
        assert_eq!(dual_check(&h_a2(), 2).unwrap(), Ok(()));
        assert_eq!(dual_check(&BivarPoly::one(), 0).unwrap(), Ok(()));
        assert_eq!(ceil_specialise(&h_a1).unwrap(), UniPoly::from_coeffs([0, 1]));
        assert_eq!(ceil_specialise(&h_a2()).unwrap(), UniPoly::from_coeffs([0, 1, 1]));
        assert_eq!(final_specialise(&h_a2(), 2).unwrap(), UniPoly::from_coeffs([0, 1, 1]));
        assert_eq!(
            positive_h_polynomial(&f_a2(), 2).unwrap(),
            UniPoly::from_coeffs([0, 1, 1])
        );
        assert_eq!(h_polynomial(&f_a2(), 2).unwrap(), UniPoly::from_coeffs([1, 3, 1]));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let pts: Vec<_> = (1..=4)
            .map(|k: i64| {
                let v = 3 * k * k * k - k + 7;
                (BigRational::from_integer(k.into()), BigRational::from_integer(v.into()))
            })
            .collect();
        let c = interpolate(&pts).unwrap();
        let want: Vec<BigRational> = [7, -1, 0, 3]
            .iter()
            .map(|&v: &i64| BigRational::from_integer(v.into()))
            .collect();
        assert_eq!(c, want);
    }

    #[test]
    fn recip_on_a1_family() {
        let samples: BTreeMap<i64, BivarPoly> =
            (1..=4).map(|k| (k, p(&[(0, 0, k), (1, 1, 1)]))).collect();
        let fam = KFamily::fit(samples, 1, 2).unwrap();
        assert_eq!(fam.eval(-3).unwrap(), p(&[(0, 0, -3), (1, 1, 1)]));
        assert_eq!(recip_check(&fam, 1).unwrap(), Ok(()));
        let trivial: BTreeMap<i64, BivarPoly> = (1..=3).map(|k| (k, BivarPoly::one())).collect();
        assert_eq!(recip_check(&KFamily::fit(trivial, 0, 2).unwrap(), 0).unwrap(), Ok(()));
    }

    #[test]
    fn json_roundtrip_and_schema() {
        let s = triangle_json(Triangle::H, "A2", 1, 2, &h_a2());
        assert_eq!(
            s,
            r#"{"k":1,"monomials":[[0,0,1],[1,0,1],[1,1,2],[2,2,1]],"n":2,"triangle":"H","type":"A2"}"#
        );
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(BivarPoly::from_json_terms(&v["monomials"]).unwrap(), h_a2());
        let big = BivarPoly::monomial("123456789012345678901234567890".parse::<BigInt>().unwrap(), 1, 0);
        let v = big.to_json_terms();
        assert_eq!(v.to_string(), "[[1,0,123456789012345678901234567890]]");
        assert_eq!(BivarPoly::from_json_terms(&v).unwrap(), big);
    }

    #[test]
    fn latex() {
        assert_eq!(h_a2().to_latex(), "1 + x + 2xy + x^{2}y^{2}");
        assert!(h_a2().to_latex_table().contains("$x^{2}$ & 0 & 0 & 1"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly(max_deg: u32) -> impl Strategy<Value = BivarPoly> {
            proptest::collection::vec((0..=max_deg, 0..=max_deg, -20i64..20), 0..8)
                .prop_map(|t| BivarPoly::from_terms(t))
        }

        fn arb_h(n: u32) -> impl Strategy<Value = BivarPoly> {
            proptest::collection::vec((0..=n, 0..=n, -20i64..20), 0..8).prop_map(|t| {
                BivarPoly::from_terms(t.into_iter().map(|(i, j, c)| (i.max(j), i.min(j), c)))
            })
        }

        proptest! {
            #[test]
            fn mul_distributes(a in arb_poly(3), b in arb_poly(3), c in arb_poly(3)) {
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            }

            #[test]
            fn mh_inverts_hm(h in arb_h(3)) {
                let m = mh_transform(&h, 3).unwrap();
                prop_assert!(m.is_m_supported(3));
                prop_assert_eq!(hm_transform(&m, 3).unwrap(), h);
            }

            #[test]
            fn recip_is_involutive(h in arb_h(3)) {
                let once = recip_transform(&h, 3).unwrap();
                prop_assert!(once.is_h_supported());
                prop_assert_eq!(recip_transform(&once, 3).unwrap(), h);
            }

            #[test]
            fn json_roundtrip(a in arb_poly(4)) {
                prop_assert_eq!(BivarPoly::from_json_terms(&a.to_json_terms()).unwrap(), a);
            }
        }
    }
}
