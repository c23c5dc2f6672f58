//! Dense univariate polynomials over the Gaussian rationals, with exact
//! gcd and a root pipeline: closed forms through degree two, then a
//! square-free reduction and a rationalize-and-verify pass over numeric
//! approximations, so every root reported as exact really is one.

use crate::scalar::GaussRat;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Largest denominator tried when promoting a numeric root to an exact one.
const RATIONALIZE_DENOM_BOUND: u64 = 1_000_000;

/// Coefficients ascending by degree, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<GaussRat>,
}

/// A root only known approximately, with the absolute value of the
/// polynomial at the approximation.
#[derive(Clone, Debug)]
pub struct NumericRoot {
    pub value: Complex64,
    pub residual: f64,
}

/// Roots of a univariate polynomial, split by how well they are known.
/// Exact roots are verified by exact evaluation; numeric entries are the
/// leftovers that resisted rationalization.
#[derive(Clone, Debug, Default)]
pub struct Roots {
    pub exact: Vec<GaussRat>,
    pub numeric: Vec<NumericRoot>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<GaussRat>) -> Self {
        while coeffs.last().is_some_and(GaussRat::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> GaussRat {
        self.coeffs.get(k).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn leading(&self) -> Option<&GaussRat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &GaussRat) -> GaussRat {
        let mut acc = GaussRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_complex64();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| GaussRat::from_int(k as i64) * c.clone())
            .collect();
        UniPoly::new(coeffs)
    }

    #[must_use]
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => UniPoly::zero(),
            Some(lead) => {
                let inv = lead.clone().inv().expect("leading coefficient is nonzero");
                UniPoly::new(self.coeffs.iter().map(|c| c.clone() * inv.clone()).collect())
            }
        }
    }

    /// Euclidean division; panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dlead = divisor.leading().unwrap().clone();
        let dlead_inv = dlead.inv().expect("leading coefficient is nonzero");
        let ddeg = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= ddeg {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![GaussRat::zero(); rem.len() - ddeg];
        while rem.len() > ddeg {
            let lead = rem.last().unwrap().clone();
            if lead.is_zero() {
                rem.pop();
                continue;
            }
            let shift = rem.len() - 1 - ddeg;
            let q = lead * dlead_inv.clone();
            for (k, dc) in divisor.coeffs.iter().enumerate() {
                let t = q.clone() * dc.clone();
                rem[shift + k] = rem[shift + k].clone() - t;
            }
            quot[shift] = q;
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Monic greatest common divisor; zero when both inputs are zero.
    pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let (mut p, mut q) = (a.monic(), b.monic());
        while !q.is_zero() {
            let (_, r) = p.div_rem(&q);
            p = q;
            q = r.monic();
        }
        p
    }

    /// Product of the distinct linear factors, i.e. `self / gcd(self, self')`.
    #[must_use]
    pub fn square_free_part(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let g = UniPoly::gcd(self, &self.derivative());
        if g.degree() == Some(0) {
            return self.monic();
        }
        let (q, r) = self.div_rem(&g);
        debug_assert!(r.is_zero(), "gcd must divide the polynomial");
        q.monic()
    }

    /// Finds the roots. Exact roots are always verified by exact
    /// evaluation; with `numeric_fallback` off, approximate leftovers are
    /// dropped instead of reported.
    pub fn find_roots(&self, numeric_fallback: bool) -> Roots {
        let mut out = Roots::default();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let sf = self.square_free_part();
        match sf.degree().unwrap() {
            0 => unreachable!("square-free part of a nonconstant polynomial"),
            1 => {
                let root = -(sf.coeff(0) / sf.coeff(1));
                debug_assert!(self.eval(&root).is_zero());
                out.exact.push(root);
            }
            2 => {
                // Monic: z^2 + b z + c with discriminant b^2 - 4c.
                let b = sf.coeff(1);
                let c = sf.coeff(0);
                let disc = b.clone() * b.clone() - GaussRat::from_int(4) * c;
                let half = GaussRat::from_ratio(1, 2);
                match disc.sqrt_exact() {
                    Some(s) => {
                        let r1 = (s.clone() - b.clone()) * half.clone();
                        let r2 = (-s - b) * half;
                        debug_assert!(self.eval(&r1).is_zero() && self.eval(&r2).is_zero());
                        out.exact.push(r1.clone());
                        if r2 != r1 {
                            out.exact.push(r2);
                        }
                    }
                    None if numeric_fallback => {
                        let s = disc.to_complex64().sqrt();
                        let bz = b.to_complex64();
                        for z in [(-bz + s) / 2.0, (-bz - s) / 2.0] {
                            out.numeric.push(NumericRoot {
                                value: z,
                                residual: self.eval_complex(z).norm(),
                            });
                        }
                    }
                    None => {}
                }
            }
            _ => {
                let approx = durand_kerner(&sf);
                let mut residue = Vec::new();
                for z in approx {
                    match rationalize_gauss(z).filter(|cand| self.eval(cand).is_zero()) {
                        Some(cand) => {
                            if !out.exact.contains(&cand) {
                                out.exact.push(cand);
                            }
                        }
                        None => residue.push(z),
                    }
                }
                if numeric_fallback {
                    for z in residue {
                        if out
                            .numeric
                            .iter()
                            .all(|r| (r.value - z).norm() > 1e-8)
                        {
                            out.numeric.push(NumericRoot {
                                value: z,
                                residual: self.eval_complex(z).norm(),
                            });
                        }
                    }
                }
            }
        }
        out.exact.sort();
        out
    }
}

/// Simultaneous root iteration on the square-free monic polynomial.
fn durand_kerner(monic: &UniPoly) -> Vec<Complex64> {
    let deg = monic.degree().expect("nonzero polynomial");
    let radius = 1.0
        + monic
            .coeffs()
            .iter()
            .map(|c| c.to_complex64().norm())
            .fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut zs: Vec<Complex64> = (0..deg).map(|k| radius * seed.powu(k as u32 + 1)).collect();
    for _ in 0..300 {
        let mut delta: f64 = 0.0;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    denom *= zs[i] - zs[j];
                }
            }
            if denom.norm() < 1e-300 {
                continue;
            }
            let step = monic.eval_complex(zs[i]) / denom;
            zs[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    zs
}

/// Best rational approximation with bounded denominator, by continued
/// fractions.
fn rationalize_f64(x: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::from(x.floor() as i64), BigInt::one());
    let mut frac = x - x.floor();
    let bound = BigInt::from(max_den);
    for _ in 0..64 {
        if frac.abs() < 1e-12 {
            break;
        }
        let recip = 1.0 / frac;
        let a = recip.floor();
        if !a.is_finite() || a.abs() > 1e18 {
            break;
        }
        frac = recip - a;
        let a = BigInt::from(a as i64);
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > bound {
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
    if q1.is_zero() {
        return None;
    }
    let cand = BigRational::new(p1, q1);
    let back = cand.to_f64()?;
    if (back - x).abs() <= 1e-9 * x.abs().max(1.0) {
        Some(cand)
    } else {
        None
    }
}

fn rationalize_gauss(z: Complex64) -> Option<GaussRat> {
    let re = rationalize_f64(z.re, RATIONALIZE_DENOM_BOUND)?;
    let im = rationalize_f64(z.im, RATIONALIZE_DENOM_BOUND)?;
    Some(GaussRat::new(re, im))
}
