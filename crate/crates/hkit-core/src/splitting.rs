//! Witness search: given a combined operator pair satisfying a relation at
//! order n, recover a scalar lambda and orders (l, m) so that the factor
//! pairs satisfy the relation individually.
//!
//! Admissible scalars are found as common roots of a matrix-valued pencil
//! in lambda, computed exactly as the monic gcd of the entry polynomials
//! over the Gaussian rationals. Every exact witness is re-verified by
//! direct evaluation before it is returned; roots outside the Gaussian
//! rationals are isolated numerically, verified against a residual bound,
//! and flagged as numeric rather than mixed in silently.

use crate::matrix::Matrix;
use crate::nc::{self, RelationKind};
use crate::poly::{DeltaKind, MPoly};
use crate::quasihom::{classify_qh, CanonicalForm};
use crate::scalar::GaussRat;
use crate::unipoly::{Roots, UniPoly};
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

type ExactMatrix = Matrix<GaussRat>;

/// Normalized Frobenius residual below which a numeric witness counts as
/// verified.
pub const NUMERIC_RESIDUAL_TOL: f64 = 1e-9;

/// Search limits. The defaults match the documented desk scale; raise
/// them explicitly for larger experiments.
#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Largest accepted relation order.
    pub max_n: u32,
    /// Largest accepted dimension of the combined operator.
    pub max_combined_dim: usize,
    /// Largest accepted degree of any pencil entry polynomial.
    pub max_pencil_degree: usize,
    /// Whether roots outside the Gaussian rationals may produce numeric
    /// witnesses.
    pub numeric_fallback: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_n: 16,
            max_combined_dim: 8,
            max_pencil_degree: 64,
            numeric_fallback: true,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SplitError {
    #[error("the combined relation does not hold at order {n}")]
    NotSatisfied { n: u32 },
    #[error("no splitting witness found")]
    NoSplit,
    #[error("splitting scalar fails the unit-modulus law")]
    ModulusViolation,
    #[error("splitting scalar fails the pure-imaginary law")]
    ImaginaryViolation,
    #[error("perturbation block is not a shifted nilpotent")]
    QNotShiftedNilpotent,
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// A matrix-valued polynomial in lambda; index k holds the coefficient of
/// `lambda^k`. Trailing zero coefficients are trimmed on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct PencilPoly {
    dim: usize,
    coeffs: Vec<ExactMatrix>,
}

impl PencilPoly {
    pub fn new(dim: usize, mut coeffs: Vec<ExactMatrix>) -> Self {
        for c in &coeffs {
            assert!(
                c.rows() == dim && c.cols() == dim,
                "pencil coefficients must be square of the stated dimension"
            );
        }
        while coeffs.last().is_some_and(Matrix::is_zero) {
            coeffs.pop();
        }
        PencilPoly { dim, coeffs }
    }

    pub fn coeffs(&self) -> &[ExactMatrix] {
        &self.coeffs
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the identically zero pencil.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, lambda: &GaussRat) -> ExactMatrix {
        let mut acc = Matrix::zeros(self.dim, self.dim);
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(lambda) + c;
        }
        acc
    }

    /// The entry polynomials in lambda, row-major over all positions.
    pub fn entry_polys(&self) -> Vec<UniPoly> {
        let mut out = Vec::with_capacity(self.dim * self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.push(UniPoly::new(
                    self.coeffs.iter().map(|c| c.get(i, j).clone()).collect(),
                ));
            }
        }
        out
    }

    /// Frobenius norm of the evaluation at `z`, divided by the scale
    /// `max(1, sum |z|^k * ||coeff_k||)` so that residuals are comparable
    /// across magnitudes.
    pub fn residual_at(&self, z: Complex64) -> f64 {
        let mut acc = Matrix::<Complex64>::zeros(self.dim, self.dim);
        let mut scale = 0.0;
        let mut zp = Complex64::new(1.0, 0.0);
        for c in &self.coeffs {
            let cz = c.to_complex();
            scale += zp.norm() * cz.frobenius_norm();
            acc = &acc + &cz.scale(&zp);
            zp *= z;
        }
        acc.frobenius_norm() / scale.max(1.0)
    }
}

/// How the pencil parameter enters the relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PencilMode {
    /// Substitute `y -> lambda * y`.
    Scale,
    /// Substitute `x -> x + lambda`.
    Shift,
}

/// Builds the pencil `P(lambda) = eval(p_lambda^l)(S, T)` where `p_lambda`
/// scales y or shifts x according to `mode`. Evaluating the pencil at any
/// scalar agrees exactly with substituting that scalar first.
pub fn lambda_pencil(
    kind: &RelationKind,
    mode: PencilMode,
    l: u32,
    s: &ExactMatrix,
    t: &ExactMatrix,
) -> PencilPoly {
    assert!(l >= 1, "pencil order must be positive");
    assert!(
        s.is_square() && t.is_square() && s.rows() == t.rows(),
        "operator pair dimension mismatch"
    );
    let dim = s.rows();
    let p = kind.poly();
    match mode {
        PencilMode::Scale => {
            let q = p.pow(l);
            let spows = nc::powers_up_to(s, q.deg_x());
            let tpows = nc::powers_up_to(t, q.deg_y());
            let mut coeffs = vec![Matrix::zeros(dim, dim); q.deg_y() as usize + 1];
            for (&[i, j], c) in q.terms() {
                let term = (&spows[i as usize] * &tpows[j as usize]).scale(c);
                coeffs[j as usize] = &coeffs[j as usize] + &term;
            }
            PencilPoly::new(dim, coeffs)
        }
        PencilMode::Shift => {
            // Lift to three variables with the third slot carrying the
            // shift, then collect by its degree.
            let mut p3: MPoly<GaussRat, 3> = MPoly::zero();
            for (&[a, b], c) in p.terms() {
                let binom: Vec<GaussRat> = nc::binomial_row(a);
                for k in 0..=a {
                    p3.insert([k, b, a - k], c.clone() * binom[k as usize].clone());
                }
            }
            let q3 = p3.pow(l);
            let spows = nc::powers_up_to(s, q3.max_degree(0));
            let tpows = nc::powers_up_to(t, q3.max_degree(1));
            let mut coeffs = vec![Matrix::zeros(dim, dim); q3.max_degree(2) as usize + 1];
            for (&[i, j, d], c) in q3.terms() {
                let term = (&spows[i as usize] * &tpows[j as usize]).scale(c);
                coeffs[d as usize] = &coeffs[d as usize] + &term;
            }
            PencilPoly::new(dim, coeffs)
        }
    }
}

/// The scalars annihilating every entry of a pencil.
#[derive(Clone, Debug)]
pub enum RootSet {
    /// The pencil vanishes identically; every scalar is a root.
    AllLambda,
    Finite(Roots),
}

/// Computes the common root set as the monic gcd of all entry polynomials
/// followed by root extraction.
pub fn common_roots(
    p: &PencilPoly,
    numeric_fallback: bool,
    max_degree: usize,
) -> Result<RootSet, SplitError> {
    if p.is_zero() {
        return Ok(RootSet::AllLambda);
    }
    let degree = p.degree().unwrap();
    if degree > max_degree {
        return Err(SplitError::CapExceeded(format!(
            "pencil degree {degree} exceeds the cap {max_degree}"
        )));
    }
    let mut g = UniPoly::zero();
    for entry in p.entry_polys() {
        g = UniPoly::gcd(&g, &entry);
        if g.degree() == Some(0) {
            return Ok(RootSet::Finite(Roots::default()));
        }
    }
    Ok(RootSet::Finite(g.find_roots(numeric_fallback)))
}

/// The splitting scalar, exact or approximate.
#[derive(Clone, Debug, PartialEq)]
pub enum WitnessScalar {
    Exact(GaussRat),
    Numeric { approx: Complex64, residual: f64 },
}

impl WitnessScalar {
    #[must_use]
    pub fn is_exact(&self) -> bool {
        matches!(self, WitnessScalar::Exact(_))
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            WitnessScalar::Exact(v) => v.to_complex64(),
            WitnessScalar::Numeric { approx, .. } => *approx,
        }
    }
}

/// A splitting witness: the factor pairs satisfy the relation at orders
/// `l` and `m` with the reported scalar. For tensor products the first
/// pair uses the y-scaling by lambda and the second pair the paired
/// constant; for adjoint-driven searches the relation field records the
/// underlying difference relation on the adjoint pair.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitWitness {
    pub relation: RelationKind,
    pub delta: DeltaKind,
    pub lambda: WitnessScalar,
    pub l: u32,
    pub m: u32,
}

impl SplitWitness {
    pub fn verified(&self) -> &'static str {
        if self.lambda.is_exact() {
            "exact"
        } else {
            "numeric"
        }
    }

    /// For sum splittings the witness shift decomposes freely as
    /// `lambda = alpha + beta`; returns the pair for a chosen `alpha`.
    pub fn sum_decomposition(&self, alpha: &GaussRat) -> Option<(GaussRat, GaussRat)> {
        match (&self.lambda, self.delta) {
            (WitnessScalar::Exact(lam), DeltaKind::TensorSum) => {
                Some((alpha.clone(), lam.clone() - alpha.clone()))
            }
            _ => None,
        }
    }
}

impl Serialize for SplitWitness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct NumericRepr {
            approx: [f64; 2],
            residual: f64,
        }
        let mut st = serializer.serialize_struct("SplitWitness", 6)?;
        match &self.lambda {
            WitnessScalar::Exact(v) => st.serialize_field("lambda", v)?,
            WitnessScalar::Numeric { approx, residual } => st.serialize_field(
                "lambda",
                &NumericRepr {
                    approx: [approx.re, approx.im],
                    residual: *residual,
                },
            )?,
        }
        st.serialize_field("l", &self.l)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("verified", self.verified())?;
        st.serialize_field("relation", &self.relation)?;
        st.serialize_field("delta", &self.delta)?;
        st.end()
    }
}

fn check_order(n: u32, opts: &SolverOptions) -> Result<(), SplitError> {
    if n == 0 {
        return Err(SplitError::BadInput("relation order must be positive".into()));
    }
    if n > opts.max_n {
        return Err(SplitError::CapExceeded(format!(
            "order {n} exceeds the cap {}",
            opts.max_n
        )));
    }
    Ok(())
}

fn check_pair(s: &ExactMatrix, t: &ExactMatrix, which: &str) -> Result<(), SplitError> {
    if !s.is_square() || !t.is_square() || s.rows() != t.rows() {
        return Err(SplitError::BadInput(format!(
            "the {which} pair must be square matrices of one dimension"
        )));
    }
    Ok(())
}

fn check_combined_dim(dim: usize, opts: &SolverOptions) -> Result<(), SplitError> {
    if dim > opts.max_combined_dim {
        return Err(SplitError::CapExceeded(format!(
            "combined dimension {dim} exceeds the cap {}",
            opts.max_combined_dim
        )));
    }
    Ok(())
}

fn gpow(base: &GaussRat, e: u32) -> GaussRat {
    let mut acc = GaussRat::one();
    for _ in 0..e {
        acc = acc * base.clone();
    }
    acc
}

fn cpow(base: Complex64, e: u32) -> Complex64 {
    base.powu(e)
}

fn shift_by(m: &ExactMatrix, lam: &GaussRat) -> ExactMatrix {
    m + &Matrix::identity(m.rows()).scale(lam)
}

/// The two-term shape driving a tensor-product split: either
/// `x^alpha y^beta - tau` against the pairing `tau1 * tau2 = b`, or
/// `b x^alpha - tau y^beta` with the same pairing.
#[derive(Clone, Debug)]
struct TwoTermShape {
    product: bool,
    b: GaussRat,
    alpha: u32,
    beta: u32,
}

impl TwoTermShape {
    fn from_kind(kind: &RelationKind) -> Result<TwoTermShape, SplitError> {
        let form = match kind {
            RelationKind::NInverse => {
                return Ok(TwoTermShape { product: true, b: GaussRat::one(), alpha: 1, beta: 1 })
            }
            RelationKind::Helton => {
                return Ok(TwoTermShape { product: false, b: GaussRat::one(), alpha: 1, beta: 1 })
            }
            RelationKind::General(p) => classify_qh(p)
                .map_err(|e| SplitError::BadInput(e.to_string()))?
                .and_then(|c| c.canonical_form)
                .ok_or_else(|| {
                    SplitError::BadInput("relation is not in a canonical two-term shape".into())
                })?,
        };
        Ok(match form {
            CanonicalForm::Product { b, alpha, beta, .. } => {
                TwoTermShape { product: true, b, alpha, beta }
            }
            CanonicalForm::Difference { b, alpha, beta, .. } => {
                TwoTermShape { product: false, b, alpha, beta }
            }
        })
    }

    /// The pair of constants fixed by a pencil root: the first factor
    /// satisfies the shape at `tau1`, the second must at `tau2`.
    fn tau_pair(&self, lambda: &GaussRat) -> Option<(GaussRat, GaussRat)> {
        if lambda.is_zero() {
            return None;
        }
        let lb = gpow(lambda, self.beta);
        Some(if self.product {
            (self.b.clone() / lb.clone(), lb)
        } else {
            (lb.clone(), self.b.clone() / lb)
        })
    }

    fn tau_pair_complex(&self, z: Complex64) -> Option<(Complex64, Complex64)> {
        let lb = cpow(z, self.beta);
        if lb.norm() < 1e-300 {
            return None;
        }
        let b = self.b.to_complex64();
        Some(if self.product { (b / lb, lb) } else { (lb, b / lb) })
    }

    /// Pencil in tau for one factor: the shape relation raised to `order`
    /// and evaluated on (S, T), collected by powers of tau.
    fn tau_pencil(&self, order: u32, s: &ExactMatrix, t: &ExactMatrix) -> PencilPoly {
        let dim = s.rows();
        let binom: Vec<GaussRat> = nc::binomial_row(order);
        let sa = nc::powers_up_to(&s.pow(self.alpha), order);
        let tb = nc::powers_up_to(&t.pow(self.beta), order);
        let mut coeffs = Vec::with_capacity(order as usize + 1);
        for j in 0..=order {
            let mut c = binom[j as usize].clone();
            if j % 2 == 1 {
                c = -c;
            }
            let rest = (order - j) as usize;
            let coeff = if self.product {
                (&sa[rest] * &tb[rest]).scale(&c)
            } else {
                c = c * gpow(&self.b, order - j);
                (&sa[rest] * &tb[j as usize]).scale(&c)
            };
            coeffs.push(coeff);
        }
        PencilPoly::new(dim, coeffs)
    }

    fn side_vanishes(&self, order: u32, tau: &GaussRat, s: &ExactMatrix, t: &ExactMatrix) -> bool {
        self.tau_pencil(order, s, t).eval(tau).is_zero()
    }

    fn side_residual(&self, order: u32, tau: Complex64, s: &ExactMatrix, t: &ExactMatrix) -> f64 {
        self.tau_pencil(order, s, t).residual_at(tau)
    }
}

fn strict_at(
    kind: &RelationKind,
    delta: DeltaKind,
    s1: &ExactMatrix,
    t1: &ExactMatrix,
    s2: &ExactMatrix,
    t2: &ExactMatrix,
    n: u32,
) -> bool {
    n == 1 || !nc::eval_combined(kind, delta, s1, t1, s2, t2, n - 1).is_zero()
}

fn order_sum_check(strict: bool, l: u32, m: u32, n: u32) -> Result<(), SplitError> {
    if strict && l + m != n + 1 {
        return Err(SplitError::Internal(format!(
            "minimal orders l={l}, m={m} violate l + m = n + 1 on a strict order-{n} input"
        )));
    }
    Ok(())
}

/// Splits a tensor-product relation: searches l ascending, takes lambda
/// from the common roots of the first-factor pencil, then the minimal m
/// for the second factor. Exact witnesses are re-verified by direct
/// evaluation; numeric ones against the residual bound.
pub fn split_tensor_product(
    kind: &RelationKind,
    s1: &ExactMatrix,
    t1: &ExactMatrix,
    s2: &ExactMatrix,
    t2: &ExactMatrix,
    n: u32,
    opts: &SolverOptions,
) -> Result<SplitWitness, SplitError> {
    check_order(n, opts)?;
    check_pair(s1, t1, "first")?;
    check_pair(s2, t2, "second")?;
    check_combined_dim(s1.rows() * s2.rows(), opts)?;
    let shape = TwoTermShape::from_kind(kind)?;
    if !matches!(kind, RelationKind::NInverse) {
        for (mat, name) in [(s1, "S1"), (t1, "T1"), (s2, "S2"), (t2, "T2")] {
            if mat.inverse().is_none() {
                return Err(SplitError::BadInput(format!(
                    "{name} must be invertible for this relation"
                )));
            }
        }
    }
    if !nc::eval_combined(kind, DeltaKind::TensorProduct, s1, t1, s2, t2, n).is_zero() {
        return Err(SplitError::NotSatisfied { n });
    }
    let strict = strict_at(kind, DeltaKind::TensorProduct, s1, t1, s2, t2, n);

    let witness = |lambda: WitnessScalar, l: u32, m: u32| SplitWitness {
        relation: kind.clone(),
        delta: DeltaKind::TensorProduct,
        lambda,
        l,
        m,
    };

    let mut numeric_candidates: Vec<(u32, Complex64)> = Vec::new();
    for l in 1..=n {
        let m_max = n + 1 - l;
        let pencil = lambda_pencil(kind, PencilMode::Scale, l, s1, t1);
        let roots = match common_roots(&pencil, opts.numeric_fallback, opts.max_pencil_degree)? {
            RootSet::AllLambda => {
                return Err(SplitError::Internal(
                    "a scale pencil vanished identically".into(),
                ))
            }
            RootSet::Finite(r) => r,
        };
        for lam in &roots.exact {
            let Some((tau1, tau2)) = shape.tau_pair(lam) else { continue };
            if !shape.side_vanishes(l, &tau1, s1, t1) {
                return Err(SplitError::Internal(
                    "a pencil root failed direct first-factor verification".into(),
                ));
            }
            for m in 1..=m_max {
                if shape.side_vanishes(m, &tau2, s2, t2) {
                    let l_min = (1..l)
                        .find(|&lp| shape.side_vanishes(lp, &tau1, s1, t1))
                        .unwrap_or(l);
                    order_sum_check(strict, l_min, m, n)?;
                    return Ok(witness(WitnessScalar::Exact(lam.clone()), l_min, m));
                }
            }
        }
        for r in &roots.numeric {
            numeric_candidates.push((l, r.value));
        }
    }
    if opts.numeric_fallback {
        for (l, z) in numeric_candidates {
            let m_max = n + 1 - l;
            let Some((tau1, tau2)) = shape.tau_pair_complex(z) else { continue };
            let side1 = shape.side_residual(l, tau1, s1, t1);
            if side1 > NUMERIC_RESIDUAL_TOL {
                continue;
            }
            for m in 1..=m_max {
                let side2 = shape.side_residual(m, tau2, s2, t2);
                if side2 <= NUMERIC_RESIDUAL_TOL {
                    let l_min = (1..l)
                        .find(|&lp| shape.side_residual(lp, tau1, s1, t1) <= NUMERIC_RESIDUAL_TOL)
                        .unwrap_or(l);
                    return Ok(witness(
                        WitnessScalar::Numeric { approx: z, residual: side1.max(side2) },
                        l_min,
                        m,
                    ));
                }
            }
        }
    }
    Err(SplitError::NoSplit)
}

/// Splits a symmetry relation on a tensor product: delegates to the
/// difference relation on the adjoint pairs and enforces the unit-modulus
/// law on the returned scalar. The first factor satisfies the order-l
/// relation scaled by lambda, the second scaled by its conjugate.
pub fn split_nsym(
    t1: &ExactMatrix,
    t2: &ExactMatrix,
    n: u32,
    opts: &SolverOptions,
) -> Result<SplitWitness, SplitError> {
    for (mat, name) in [(t1, "T1"), (t2, "T2")] {
        if !mat.is_square() {
            return Err(SplitError::BadInput(format!("{name} must be square")));
        }
        if mat.inverse().is_none() {
            return Err(SplitError::BadInput(format!(
                "{name} must be left-invertible"
            )));
        }
    }
    let w = split_tensor_product(
        &RelationKind::Helton,
        &t1.adjoint(),
        t1,
        &t2.adjoint(),
        t2,
        n,
        opts,
    )?;
    match &w.lambda {
        WitnessScalar::Exact(lam) => {
            if !lam.norm_sqr().is_one() {
                return Err(SplitError::ModulusViolation);
            }
        }
        WitnessScalar::Numeric { approx, .. } => {
            if (approx.norm() - 1.0).abs() > NUMERIC_RESIDUAL_TOL {
                return Err(SplitError::ModulusViolation);
            }
        }
    }
    Ok(w)
}

/// Splits a perturbation relation: the shift is forced to trace(Q)/dim,
/// m is the nilpotency index of the shifted block, and l is the least
/// order at which the shifted first pair satisfies the relation.
pub fn split_perturbation(
    kind: &RelationKind,
    s: &ExactMatrix,
    t: &ExactMatrix,
    q: &ExactMatrix,
    n: u32,
    opts: &SolverOptions,
) -> Result<SplitWitness, SplitError> {
    check_order(n, opts)?;
    check_pair(s, t, "first")?;
    if !q.is_square() {
        return Err(SplitError::BadInput("Q must be square".into()));
    }
    check_combined_dim(s.rows() * q.rows(), opts)?;
    let p = kind.poly();
    if p.deg_x() != 1 {
        return Err(SplitError::BadInput(
            "the relation must be linear in x".into(),
        ));
    }
    if q.is_zero() && q.rows() > 1 {
        return Err(SplitError::BadInput(
            "the perturbation block Q must be nonzero".into(),
        ));
    }
    if !nc::eval_combined(kind, DeltaKind::PerturbX, s, t, q, q, n).is_zero() {
        return Err(SplitError::NotSatisfied { n });
    }
    let strict = strict_at(kind, DeltaKind::PerturbX, s, t, q, q, n);
    let lambda = q.trace() / GaussRat::from_int(q.rows() as i64);
    let shifted_q = q - &Matrix::identity(q.rows()).scale(&lambda);
    let m = shifted_q
        .nilpotency_index()
        .ok_or(SplitError::QNotShiftedNilpotent)?;
    let shifted_s = shift_by(s, &lambda);
    let l = (1..=opts.max_n)
        .find(|&l| nc::phi_pow_eval(&p, l, &shifted_s, t).is_zero())
        .ok_or(SplitError::NoSplit)?;
    order_sum_check(strict, l, m, n)?;
    Ok(SplitWitness {
        relation: kind.clone(),
        delta: DeltaKind::PerturbX,
        lambda: WitnessScalar::Exact(lambda),
        l,
        m,
    })
}

/// Splits the difference relation on a tensor sum: shift-mode pencils on
/// the first pair propose lambda, the second pair absorbs the opposite
/// shift at the minimal order.
pub fn split_tensor_sum_helton(
    s1: &ExactMatrix,
    t1: &ExactMatrix,
    s2: &ExactMatrix,
    t2: &ExactMatrix,
    n: u32,
    opts: &SolverOptions,
) -> Result<SplitWitness, SplitError> {
    check_order(n, opts)?;
    check_pair(s1, t1, "first")?;
    check_pair(s2, t2, "second")?;
    check_combined_dim(s1.rows() * s2.rows(), opts)?;
    for (mat, name) in [(s1, "S1"), (t1, "T1"), (s2, "S2"), (t2, "T2")] {
        if mat.is_zero() {
            return Err(SplitError::BadInput(format!("{name} must be nonzero")));
        }
    }
    let kind = RelationKind::Helton;
    if !nc::eval_combined(&kind, DeltaKind::TensorSum, s1, t1, s2, t2, n).is_zero() {
        return Err(SplitError::NotSatisfied { n });
    }
    let strict = strict_at(&kind, DeltaKind::TensorSum, s1, t1, s2, t2, n);

    let side1_vanishes =
        |lam: &GaussRat, l: u32| nc::gamma_n(&shift_by(s1, lam), t1, l).is_zero();
    let side2_vanishes =
        |lam: &GaussRat, m: u32| nc::gamma_n(&(s2 - &Matrix::identity(s2.rows()).scale(lam)), t2, m).is_zero();

    let witness = |lambda: WitnessScalar, l: u32, m: u32| SplitWitness {
        relation: kind.clone(),
        delta: DeltaKind::TensorSum,
        lambda,
        l,
        m,
    };

    let mut numeric_candidates: Vec<(u32, Complex64)> = Vec::new();
    for l in 1..=n {
        let m_max = n + 1 - l;
        let pencil = lambda_pencil(&kind, PencilMode::Shift, l, s1, t1);
        let roots = match common_roots(&pencil, opts.numeric_fallback, opts.max_pencil_degree)? {
            RootSet::AllLambda => {
                return Err(SplitError::Internal(
                    "a shift pencil vanished identically".into(),
                ))
            }
            RootSet::Finite(r) => r,
        };
        for lam in &roots.exact {
            if !side1_vanishes(lam, l) {
                return Err(SplitError::Internal(
                    "a pencil root failed direct first-factor verification".into(),
                ));
            }
            for m in 1..=m_max {
                if side2_vanishes(lam, m) {
                    let l_min = (1..l).find(|&lp| side1_vanishes(lam, lp)).unwrap_or(l);
                    order_sum_check(strict, l_min, m, n)?;
                    return Ok(witness(WitnessScalar::Exact(lam.clone()), l_min, m));
                }
            }
        }
        for r in &roots.numeric {
            numeric_candidates.push((l, r.value));
        }
    }
    if opts.numeric_fallback {
        for (l, z) in numeric_candidates {
            let m_max = n + 1 - l;
            let side1 = lambda_pencil(&kind, PencilMode::Shift, l, s1, t1).residual_at(z);
            if side1 > NUMERIC_RESIDUAL_TOL {
                continue;
            }
            for m in 1..=m_max {
                let side2 = lambda_pencil(&kind, PencilMode::Shift, m, s2, t2).residual_at(-z);
                if side2 <= NUMERIC_RESIDUAL_TOL {
                    return Ok(witness(
                        WitnessScalar::Numeric { approx: z, residual: side1.max(side2) },
                        l,
                        m,
                    ));
                }
            }
        }
    }
    Err(SplitError::NoSplit)
}

/// Splits a symmetry relation on a tensor sum: delegates to the shifted
/// difference search on the adjoint pairs, reparametrizes the shift to
/// the symmetry scalar, and enforces the pure-imaginary law. On success
/// `T1 + lambda` satisfies the order-l symmetry relation and
/// `T2 - lambda` the order-m one, both re-verified here.
pub fn split_nsym2(
    t1: &ExactMatrix,
    t2: &ExactMatrix,
    n: u32,
    opts: &SolverOptions,
) -> Result<SplitWitness, SplitError> {
    for (mat, name) in [(t1, "T1"), (t2, "T2")] {
        if !mat.is_square() {
            return Err(SplitError::BadInput(format!("{name} must be square")));
        }
        if mat.is_zero() {
            return Err(SplitError::BadInput(format!("{name} must be nonzero")));
        }
    }
    let w = split_tensor_sum_helton(&t1.adjoint(), t1, &t2.adjoint(), t2, n, opts)?;
    match &w.lambda {
        WitnessScalar::Exact(lam0) => {
            let lambda = -(lam0.clone() / GaussRat::from_int(2));
            if !lambda.re().is_zero() {
                return Err(SplitError::ImaginaryViolation);
            }
            let a1 = shift_by(t1, &lambda);
            let a2 = shift_by(t2, &-lambda.clone());
            if !nc::gamma_n(&a1.adjoint(), &a1, w.l).is_zero()
                || !nc::gamma_n(&a2.adjoint(), &a2, w.m).is_zero()
            {
                return Err(SplitError::Internal(
                    "reparametrized symmetry witness failed re-verification".into(),
                ));
            }
            Ok(SplitWitness { lambda: WitnessScalar::Exact(lambda), ..w })
        }
        WitnessScalar::Numeric { approx, residual } => {
            let lambda = -approx / 2.0;
            if lambda.re.abs() > NUMERIC_RESIDUAL_TOL {
                return Err(SplitError::ImaginaryViolation);
            }
            Ok(SplitWitness {
                lambda: WitnessScalar::Numeric { approx: lambda, residual: *residual },
                ..w
            })
        }
    }
}
