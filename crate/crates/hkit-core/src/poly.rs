//! Sparse commutative polynomials over a generic scalar, in any small number
//! of variables, together with the substitution maps and the text grammar
//! used at the tool boundary.
//!
//! Two-variable polynomials (variables `x`, `y`) model relations on an
//! operator pair; four-variable polynomials (`x1`, `y1`, `x2`, `y2`) model
//! relations on a combined pair. The three combination maps send `x`, `y` to
//! products or sums of the per-factor variables, see [`DeltaKind`].

use crate::scalar::{GaussRat, Scalar};
use num_traits::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Exponents at or above this bound abort loudly instead of wrapping.
pub const EXPONENT_CAP: u32 = 1 << 16;

/// Which combined pair a two-variable relation is transported to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeltaKind {
    /// `x -> x1*x2`, `y -> y1*y2`: relations of a Kronecker product pair.
    TensorProduct,
    /// `x -> x1 + x2`, `y -> y1`: the first operator is perturbed by a
    /// commuting block on the second factor.
    PerturbX,
    /// `x -> x1 + x2`, `y -> y1 + y2`: relations of a Kronecker sum pair.
    TensorSum,
}

impl DeltaKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DeltaKind::TensorProduct => "tensor-product",
            DeltaKind::PerturbX => "perturb",
            DeltaKind::TensorSum => "tensor-sum",
        }
    }

    pub fn parse(s: &str) -> Option<DeltaKind> {
        match s {
            "tensor-product" => Some(DeltaKind::TensorProduct),
            "perturb" => Some(DeltaKind::PerturbX),
            "tensor-sum" => Some(DeltaKind::TensorSum),
            _ => None,
        }
    }
}

impl fmt::Display for DeltaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for DeltaKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for DeltaKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        DeltaKind::parse(&s).ok_or_else(|| {
            de::Error::custom(format!(
                "unknown delta {s:?}, expected tensor-product, perturb, or tensor-sum"
            ))
        })
    }
}

/// A sparse polynomial in `N` commuting variables with coefficients in `K`.
/// The term map never stores zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly<K, const N: usize> {
    terms: BTreeMap<[u32; N], K>,
}

fn add_exps<const N: usize>(a: &[u32; N], b: &[u32; N]) -> [u32; N] {
    let mut out = [0u32; N];
    for k in 0..N {
        out[k] = a[k] + b[k];
        assert!(
            out[k] < EXPONENT_CAP,
            "polynomial exponent {} exceeds the 2^16 cap",
            out[k]
        );
    }
    out
}

impl<K: Scalar, const N: usize> MPoly<K, N> {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        MPoly::constant(K::one())
    }

    pub fn constant(k: K) -> Self {
        let mut p = MPoly::zero();
        p.insert([0u32; N], k);
        p
    }

    /// The monomial for variable `idx` (zero-based).
    pub fn var(idx: usize) -> Self {
        assert!(idx < N, "variable index {idx} out of range for {N} variables");
        let mut exp = [0u32; N];
        exp[idx] = 1;
        MPoly::monomial(exp, K::one())
    }

    pub fn monomial(exp: [u32; N], k: K) -> Self {
        let mut p = MPoly::zero();
        p.insert(exp, k);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = ([u32; N], K)>>(iter: I) -> Self {
        let mut p = MPoly::zero();
        for (exp, k) in iter {
            p.insert(exp, k);
        }
        p
    }

    /// Adds `k` to the coefficient at `exp`, dropping the term if it cancels.
    pub fn insert(&mut self, exp: [u32; N], k: K) {
        if k.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(K::zero);
        *entry = entry.clone() + k;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; N], &K)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[u32; N]) -> Option<&K> {
        self.terms.get(exp)
    }

    pub fn support(&self) -> Vec<[u32; N]> {
        self.terms.keys().copied().collect()
    }

    /// `Some(c)` iff the polynomial is the constant `c` (zero included).
    pub fn constant_value(&self) -> Option<K> {
        match self.terms.len() {
            0 => Some(K::zero()),
            1 => {
                let (exp, c) = self.terms.iter().next().unwrap();
                if exp.iter().all(|&e| e == 0) {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn max_degree(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn scale(&self, k: &K) -> Self {
        if k.is_zero() {
            return MPoly::zero();
        }
        let mut out = MPoly::zero();
        for (exp, c) in &self.terms {
            out.insert(*exp, c.clone() * k.clone());
        }
        out
    }

    pub fn map_coeffs<M: Scalar, F: Fn(&K) -> M>(&self, f: F) -> MPoly<M, N> {
        let mut out = MPoly::zero();
        for (exp, c) in &self.terms {
            out.insert(*exp, f(c));
        }
        out
    }

    /// `self^n`, with `p^0 = 1`.
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = MPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, vals: &[K; N]) -> K {
        let mut acc = K::zero();
        for (exp, c) in &self.terms {
            let mut term = c.clone();
            for (k, &e) in exp.iter().enumerate() {
                for _ in 0..e {
                    term = term * vals[k].clone();
                }
            }
            acc = acc + term;
        }
        acc
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (exp, c) in &rhs.terms {
            out.insert(*exp, c.clone());
        }
        out
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (exp, c) in &rhs.terms {
            out.insert(*exp, -c.clone());
        }
        out
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        let mut out = MPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.insert(add_exps(ea, eb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<K: Scalar> MPoly<K, 2> {
    /// Substitutes images for `x` and `y` in an `M`-variable target ring.
    /// This is the unique ring homomorphism with those images, so all the
    /// transported relations below are special cases.
    pub fn subst_into<const M: usize>(
        &self,
        x_img: &MPoly<K, M>,
        y_img: &MPoly<K, M>,
    ) -> MPoly<K, M> {
        let mut xpows: Vec<MPoly<K, M>> = vec![MPoly::one()];
        let mut ypows: Vec<MPoly<K, M>> = vec![MPoly::one()];
        let mut acc = MPoly::zero();
        for (exp, c) in &self.terms {
            let (i, j) = (exp[0] as usize, exp[1] as usize);
            while xpows.len() <= i {
                let next = xpows.last().unwrap() * x_img;
                xpows.push(next);
            }
            while ypows.len() <= j {
                let next = ypows.last().unwrap() * y_img;
                ypows.push(next);
            }
            acc = &acc + &(&xpows[i] * &ypows[j]).scale(c);
        }
        acc
    }

    /// Rescales the variables: the coefficient at `x^i y^j` picks up
    /// `lx^i * ly^j`.
    pub fn scale_vars(&self, lx: &K, ly: &K) -> Self {
        let mut out = MPoly::zero();
        for (exp, c) in &self.terms {
            let mut f = c.clone();
            for _ in 0..exp[0] {
                f = f * lx.clone();
            }
            for _ in 0..exp[1] {
                f = f * ly.clone();
            }
            out.insert(*exp, f);
        }
        out
    }

    /// `p(x + shift, y)`.
    pub fn shift_x(&self, shift: &K) -> Self {
        let x_img = MPoly::var(0) + MPoly::constant(shift.clone());
        self.subst_into(&x_img, &MPoly::var(1))
    }

    /// Transports the relation to the combined pair chosen by `kind`:
    /// `p(x1*x2, y1*y2)`, `p(x1 + x2, y1)`, or `p(x1 + x2, y1 + y2)`.
    pub fn hat(&self, kind: DeltaKind) -> MPoly<K, 4> {
        let (x1, y1, x2, y2) = (
            MPoly::<K, 4>::var(0),
            MPoly::<K, 4>::var(1),
            MPoly::<K, 4>::var(2),
            MPoly::<K, 4>::var(3),
        );
        let (xi, yi) = match kind {
            DeltaKind::TensorProduct => (&x1 * &x2, &y1 * &y2),
            DeltaKind::PerturbX => (&x1 + &x2, y1),
            DeltaKind::TensorSum => (&x1 + &x2, &y1 + &y2),
        };
        self.subst_into(&xi, &yi)
    }

    /// Embeds into the four-variable ring through the first factor's
    /// variables `x1`, `y1`.
    pub fn embed_left(&self) -> MPoly<K, 4> {
        let mut out = MPoly::zero();
        for (exp, c) in &self.terms {
            out.insert([exp[0], exp[1], 0, 0], c.clone());
        }
        out
    }

    /// Embeds through the second factor's variables `x2`, `y2`.
    pub fn embed_right(&self) -> MPoly<K, 4> {
        let mut out = MPoly::zero();
        for (exp, c) in &self.terms {
            out.insert([0, 0, exp[0], exp[1]], c.clone());
        }
        out
    }

    pub fn deg_x(&self) -> u32 {
        self.max_degree(0)
    }

    pub fn deg_y(&self) -> u32 {
        self.max_degree(1)
    }

    /// Splits `p = a(y)*x + b(y)` when `p` is linear in `x`; `None` if the
    /// `x`-degree exceeds one. Both parts come back as polynomials in `y`.
    pub fn x_linear_split(&self) -> Option<(Self, Self)> {
        if self.deg_x() > 1 {
            return None;
        }
        let mut a = MPoly::zero();
        let mut b = MPoly::zero();
        for (exp, c) in &self.terms {
            if exp[0] == 1 {
                a.insert([0, exp[1]], c.clone());
            } else {
                b.insert([0, exp[1]], c.clone());
            }
        }
        Some((a, b))
    }
}

impl<K: Scalar> MPoly<K, 4> {
    /// Exact division by `x2 - shift`; `None` if the remainder is nonzero.
    pub fn divide_by_x2_minus(&self, shift: &K) -> Option<Self> {
        // Horner / synthetic division in the variable x2.
        let deg = self.max_degree(2) as usize;
        let mut coeffs: Vec<MPoly<K, 4>> = vec![MPoly::zero(); deg + 1];
        for (exp, c) in &self.terms {
            let mut rest = *exp;
            let k = rest[2] as usize;
            rest[2] = 0;
            coeffs[k].insert(rest, c.clone());
        }
        let mut quotient: Vec<MPoly<K, 4>> = vec![MPoly::zero(); deg.max(1)];
        let mut carry = MPoly::zero();
        for k in (1..=deg).rev() {
            carry = &coeffs[k] + &carry.scale(shift);
            quotient[k - 1] = carry.clone();
        }
        let remainder = &coeffs[0] + &carry.scale(shift);
        if !remainder.is_zero() {
            return None;
        }
        let mut out = MPoly::zero();
        for (k, q) in quotient.iter().enumerate() {
            for (exp, c) in &q.terms {
                let mut e = *exp;
                e[2] = k as u32;
                out.insert(e, c.clone());
            }
        }
        Some(out)
    }

    /// Projects onto the first factor's variables; `None` if any term uses
    /// `x2` or `y2`.
    pub fn project_left(&self) -> Option<MPoly<K, 2>> {
        let mut out = MPoly::zero();
        for (exp, c) in &self.terms {
            if exp[2] != 0 || exp[3] != 0 {
                return None;
            }
            out.insert([exp[0], exp[1]], c.clone());
        }
        Some(out)
    }

    /// Projects onto the second factor's variables; `None` if any term uses
    /// `x1` or `y1`.
    pub fn project_right(&self) -> Option<MPoly<K, 2>> {
        let mut out = MPoly::zero();
        for (exp, c) in &self.terms {
            if exp[0] != 0 || exp[1] != 0 {
                return None;
            }
            out.insert([exp[2], exp[3]], c.clone());
        }
        Some(out)
    }
}

impl<K: Scalar, const N: usize> Add for &MPoly<K, N> {
    type Output = MPoly<K, N>;
    fn add(self, rhs: Self) -> MPoly<K, N> {
        self.add_ref(rhs)
    }
}

impl<K: Scalar, const N: usize> Add for MPoly<K, N> {
    type Output = MPoly<K, N>;
    fn add(self, rhs: Self) -> MPoly<K, N> {
        self.add_ref(&rhs)
    }
}

impl<K: Scalar, const N: usize> Sub for &MPoly<K, N> {
    type Output = MPoly<K, N>;
    fn sub(self, rhs: Self) -> MPoly<K, N> {
        self.sub_ref(rhs)
    }
}

impl<K: Scalar, const N: usize> Sub for MPoly<K, N> {
    type Output = MPoly<K, N>;
    fn sub(self, rhs: Self) -> MPoly<K, N> {
        self.sub_ref(&rhs)
    }
}

impl<K: Scalar, const N: usize> Mul for &MPoly<K, N> {
    type Output = MPoly<K, N>;
    fn mul(self, rhs: Self) -> MPoly<K, N> {
        self.mul_ref(rhs)
    }
}

impl<K: Scalar, const N: usize> Mul for MPoly<K, N> {
    type Output = MPoly<K, N>;
    fn mul(self, rhs: Self) -> MPoly<K, N> {
        self.mul_ref(&rhs)
    }
}

impl<K: Scalar, const N: usize> Neg for &MPoly<K, N> {
    type Output = MPoly<K, N>;
    fn neg(self) -> MPoly<K, N> {
        MPoly::zero().sub_ref(self)
    }
}

impl<K: Scalar, const N: usize> Neg for MPoly<K, N> {
    type Output = MPoly<K, N>;
    fn neg(self) -> MPoly<K, N> {
        MPoly::zero().sub_ref(&self)
    }
}

impl<K: Scalar, const N: usize> fmt::Debug for MPoly<K, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly{:?}", self.terms.iter().collect::<Vec<_>>())
    }
}

// ---------------------------------------------------------------------------
// Canonical printing (Gaussian-rational coefficients only, since signs and
// compound coefficients need to be split for readable output).

const VARS2: [&str; 2] = ["x", "y"];
const VARS4: [&str; 4] = ["x1", "y1", "x2", "y2"];

fn fmt_rat_abs(r: &num_rational::BigRational) -> String {
    let a = r.abs();
    if a.denom().is_one() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

/// Renders one coefficient as `(negative?, body, suppress_one)` where `body`
/// omits the sign and `suppress_one` says the body may be dropped before a
/// monomial.
fn coeff_parts(c: &GaussRat) -> (bool, String, bool) {
    let re = c.re();
    let im = c.im();
    if im.is_zero() {
        (re.is_negative(), fmt_rat_abs(re), re.abs().is_one())
    } else if re.is_zero() {
        let body = if im.abs().is_one() {
            "i".to_string()
        } else {
            format!("{}*i", fmt_rat_abs(im))
        };
        (im.is_negative(), body, false)
    } else {
        (false, format!("({c})"), false)
    }
}

fn monomial_string<const N: usize>(exp: &[u32; N], vars: &[&str; N]) -> String {
    let mut parts = Vec::new();
    for (k, &e) in exp.iter().enumerate() {
        if e == 1 {
            parts.push(vars[k].to_string());
        } else if e > 1 {
            parts.push(format!("{}^{}", vars[k], e));
        }
    }
    parts.join("*")
}

/// Graded lexicographic order, highest first: total degree, then the
/// exponent tuple.
fn graded_lex_desc<const N: usize>(a: &[u32; N], b: &[u32; N]) -> std::cmp::Ordering {
    let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
    db.cmp(&da).then_with(|| b.cmp(a))
}

fn canonical_string<const N: usize>(p: &MPoly<GaussRat, N>, vars: &[&str; N]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(&[u32; N], &GaussRat)> = p.terms.iter().collect();
    terms.sort_by(|a, b| graded_lex_desc(a.0, b.0));
    let mut out = String::new();
    for (idx, (exp, c)) in terms.iter().enumerate() {
        let (neg, body, suppress_one) = coeff_parts(c);
        let mono = monomial_string(exp, vars);
        let piece = if mono.is_empty() {
            body
        } else if suppress_one {
            mono
        } else {
            format!("{body}*{mono}")
        };
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&piece);
    }
    out
}

impl fmt::Display for MPoly<GaussRat, 2> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&canonical_string(self, &VARS2))
    }
}

impl fmt::Display for MPoly<GaussRat, 4> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&canonical_string(self, &VARS4))
    }
}

impl Serialize for MPoly<GaussRat, 2> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl Serialize for MPoly<GaussRat, 4> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

struct PolyVisitor<const N: usize>;

impl<const N: usize> Visitor<'_> for PolyVisitor<N> {
    type Value = String;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a polynomial string")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<String, E> {
        Ok(v.to_string())
    }
}

impl<'de> Deserialize<'de> for MPoly<GaussRat, 2> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = deserializer.deserialize_str(PolyVisitor::<2>)?;
        parse_poly(&s).map_err(|e| de::Error::custom(format!("bad polynomial {s:?}: {e}")))
    }
}

impl<'de> Deserialize<'de> for MPoly<GaussRat, 4> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = deserializer.deserialize_str(PolyVisitor::<4>)?;
        parse_poly4(&s).map_err(|e| de::Error::custom(format!("bad polynomial {s:?}: {e}")))
    }
}

// ---------------------------------------------------------------------------
// Parsing.

/// Syntax error with the byte offset where parsing stopped.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

struct Parser<'a, const N: usize> {
    bytes: &'a [u8],
    pos: usize,
    vars: [&'static str; N],
}

type PResult<T> = Result<T, ParseError>;

impl<'a, const N: usize> Parser<'a, N> {
    fn new(text: &'a str, vars: [&'static str; N]) -> Self {
        Parser { bytes: text.as_bytes(), pos: 0, vars }
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse(mut self) -> PResult<MPoly<GaussRat, N>> {
        let p = self.expr()?;
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return self.err("unexpected trailing input");
        }
        Ok(p)
    }

    fn expr(&mut self) -> PResult<MPoly<GaussRat, N>> {
        self.skip_ws();
        let negate = self.eat(b'-');
        self.skip_ws();
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc + t;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc - t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<MPoly<GaussRat, N>> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                let f = self.factor()?;
                acc = acc * f;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> PResult<MPoly<GaussRat, N>> {
        let base = self.primary()?;
        self.skip_ws();
        if self.eat(b'^') {
            self.skip_ws();
            let e = self.uint()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> PResult<MPoly<GaussRat, N>> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let r = self.rational()?;
                Ok(MPoly::constant(r))
            }
            Some(_) => {
                // Try variable names first (longest match), then the
                // imaginary unit.
                let mut names: Vec<(usize, &str)> = self.vars.iter().copied().enumerate().collect();
                names.sort_by_key(|(_, n)| std::cmp::Reverse(n.len()));
                for (idx, name) in names {
                    if self.bytes[self.pos..].starts_with(name.as_bytes()) {
                        self.pos += name.len();
                        return Ok(MPoly::var(idx));
                    }
                }
                if self.eat(b'i') {
                    return Ok(MPoly::constant(GaussRat::i()));
                }
                self.err("expected a number, variable, 'i', or '('")
            }
            None => self.err("unexpected end of input"),
        }
    }

    fn uint(&mut self) -> PResult<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an exponent");
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        match digits.parse::<u32>() {
            Ok(v) if v < EXPONENT_CAP => Ok(v),
            _ => Err(ParseError {
                offset: start,
                message: "exponent exceeds the 2^16 cap".to_string(),
            }),
        }
    }

    fn rational(&mut self) -> PResult<GaussRat> {
        let num = self.digits_bigint()?;
        self.skip_ws();
        if self.eat(b'/') {
            self.skip_ws();
            let den_off = self.pos;
            let den = self.digits_bigint()?;
            if den.is_zero() {
                return Err(ParseError {
                    offset: den_off,
                    message: "zero denominator".to_string(),
                });
            }
            Ok(GaussRat::new(
                num_rational::BigRational::new(num, den),
                num_rational::BigRational::zero(),
            ))
        } else {
            Ok(GaussRat::new(
                num_rational::BigRational::from_integer(num),
                num_rational::BigRational::zero(),
            ))
        }
    }

    fn digits_bigint(&mut self) -> PResult<num_bigint::BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected digits");
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }
}

/// Parses the two-variable grammar over `x`, `y`.
pub fn parse_poly(text: &str) -> PResult<MPoly<GaussRat, 2>> {
    Parser::new(text, VARS2).parse()
}

/// Parses the four-variable grammar over `x1`, `y1`, `x2`, `y2`.
pub fn parse_poly4(text: &str) -> PResult<MPoly<GaussRat, 4>> {
    Parser::new(text, VARS4).parse()
}
