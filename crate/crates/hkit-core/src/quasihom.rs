//! Quasi-homogeneity classification of two-variable relations and the
//! explicit decomposition certificates that transport a relation to a
//! combined pair.
//!
//! A polynomial is quasi-homogeneous when its support lies on one affine
//! line; the classifier reports the primitive integer normal as weights.
//! Two special shapes, `A(x^a y^b - B)` and `A(B x^a - y^b)`, admit exact
//! two-part decompositions of their combined images, recorded here as
//! [`Certificate`] values and checked by pure polynomial arithmetic.

use crate::poly::{parse_poly4, DeltaKind, MPoly};
use crate::scalar::GaussRat;
use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use thiserror::Error;

type CommPoly = MPoly<GaussRat, 2>;
type CommPoly4 = MPoly<GaussRat, 4>;

/// One of the two canonical two-term shapes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CanonicalForm {
    /// `a * (x^alpha * y^beta - b)` with `alpha, beta >= 1` and `b != 0`.
    Product { a: GaussRat, b: GaussRat, alpha: u32, beta: u32 },
    /// `a * (b * x^alpha - y^beta)` with `alpha, beta >= 1` and `b != 0`.
    Difference { a: GaussRat, b: GaussRat, alpha: u32, beta: u32 },
}

impl CanonicalForm {
    /// Re-expands the form; classification guarantees this reproduces the
    /// classified polynomial exactly.
    pub fn expand(&self) -> CommPoly {
        match self {
            CanonicalForm::Product { a, b, alpha, beta } => MPoly::from_terms([
                ([*alpha, *beta], a.clone()),
                ([0, 0], -(a.clone() * b.clone())),
            ]),
            CanonicalForm::Difference { a, b, alpha, beta } => MPoly::from_terms([
                ([*alpha, 0], a.clone() * b.clone()),
                ([0, *beta], -a.clone()),
            ]),
        }
    }
}

/// Result of a successful quasi-homogeneity classification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QhClass {
    /// Primitive integer normal of the support line, first nonzero entry
    /// positive.
    pub weights: (i64, i64),
    /// Common value of `w1*i + w2*j` over the support.
    pub quasi_degree: i64,
    /// Present exactly when the polynomial matches a canonical shape with
    /// coprime exponents.
    pub canonical_form: Option<CanonicalForm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QhError {
    #[error("the zero polynomial has no quasi-homogeneity class")]
    ZeroPolynomial,
}

fn primitive_normal(dx: i64, dy: i64) -> (i64, i64) {
    // Normal to the direction (dx, dy), made primitive with the first
    // nonzero component positive.
    let (mut w1, mut w2) = (dy, -dx);
    let g = w1.abs().gcd(&w2.abs());
    if g > 1 {
        w1 /= g;
        w2 /= g;
    }
    let lead = if w1 != 0 { w1 } else { w2 };
    if lead < 0 {
        (-w1, -w2)
    } else {
        (w1, w2)
    }
}

fn canonical_form_of(p: &CommPoly) -> Option<CanonicalForm> {
    let support = p.support();
    if support.len() != 2 {
        return None;
    }
    let (e0, e1) = (support[0], support[1]);
    // Shape A(x^a y^b - B): one constant term, one mixed term with both
    // exponents positive.
    let (konst, mono) = if e0 == [0, 0] {
        (e0, e1)
    } else if e1 == [0, 0] {
        (e1, e0)
    } else {
        // Shape A(B x^a - y^b): a pure x term against a pure y term.
        let (xe, ye) = if e0[1] == 0 && e1[0] == 0 {
            (e0, e1)
        } else if e1[1] == 0 && e0[0] == 0 {
            (e1, e0)
        } else {
            return None;
        };
        let (alpha, beta) = (xe[0], ye[1]);
        if alpha == 0 || beta == 0 || alpha.gcd(&beta) != 1 {
            return None;
        }
        let a = -p.coeff(&ye).unwrap().clone();
        let b = p.coeff(&xe).unwrap().clone() / a.clone();
        return Some(CanonicalForm::Difference { a, b, alpha, beta });
    };
    let (alpha, beta) = (mono[0], mono[1]);
    if alpha == 0 || beta == 0 || alpha.gcd(&beta) != 1 {
        return None;
    }
    let a = p.coeff(&mono).unwrap().clone();
    let b = -(p.coeff(&konst).unwrap().clone() / a.clone());
    Some(CanonicalForm::Product { a, b, alpha, beta })
}

/// Classifies `p`: `Ok(Some(..))` when the support is collinear,
/// `Ok(None)` when it is not, `Err` on the zero polynomial.
pub fn classify_qh(p: &CommPoly) -> Result<Option<QhClass>, QhError> {
    let support = p.support();
    if support.is_empty() {
        return Err(QhError::ZeroPolynomial);
    }
    let weights = if support.len() == 1 {
        let [i, j] = support[0];
        if j == 0 {
            (1, 0)
        } else {
            primitive_normal(i as i64, j as i64)
        }
    } else {
        let base = support[0];
        let dir = (
            support[1][0] as i64 - base[0] as i64,
            support[1][1] as i64 - base[1] as i64,
        );
        for e in &support[2..] {
            let d = (e[0] as i64 - base[0] as i64, e[1] as i64 - base[1] as i64);
            if dir.0 * d.1 - dir.1 * d.0 != 0 {
                return Ok(None);
            }
        }
        primitive_normal(dir.0, dir.1)
    };
    let quasi_degree = weights.0 * support[0][0] as i64 + weights.1 * support[0][1] as i64;
    debug_assert!(support
        .iter()
        .all(|e| weights.0 * e[0] as i64 + weights.1 * e[1] as i64 == quasi_degree));
    let canonical_form = canonical_form_of(p);
    if let Some(form) = &canonical_form {
        assert_eq!(form.expand(), *p, "canonical form failed to re-expand");
    }
    Ok(Some(QhClass { weights, quasi_degree, canonical_form }))
}

/// An exact two-part decomposition of the combined image of a relation:
/// `hat(p, kind) = f * i1(q1) + g * i2(q2)`, where `i1`, `i2` embed the
/// factor relations through `(x1, y1)` and `(x2, y2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub kind: DeltaKind,
    pub q1: CommPoly,
    pub q2: CommPoly,
    pub f: CommPoly4,
    pub g: CommPoly4,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("tensor-product certificates need a canonical two-term shape")]
    NotCanonical,
    #[error("perturbation certificates need a relation linear in x")]
    NotLinearInX,
    #[error("tensor-sum certificates need a relation proportional to x - y")]
    NotScaledDifference,
    #[error("lambda must be nonzero for tensor-product certificates")]
    ZeroLambda,
    #[error("the zero polynomial has no certificate")]
    ZeroPolynomial,
}

/// Builds the lambda-parametrized certificate for `p` under `kind`.
///
/// The underlying identities, writing `u_i = x_i^alpha y_i^beta`:
/// product shape `u1 u2 - B = (u1 - L) u2 + L (u2 - B/L)`; difference shape
/// `B x1^a x2^a - y1^b y2^b = (B x1^a - L y1^b) x2^a + L y1^b (x2^a - y2^b / L)`;
/// x-perturbation `p(x1 + x2, y1) = p(x1 + L, y1) + (x2 - L) g`; sum
/// `(x1 + x2) - (y1 + y2) = (x1 - y1 + L) + (x2 - y2 - L)`.
pub fn make_certificate(
    p: &CommPoly,
    kind: DeltaKind,
    lambda: &GaussRat,
) -> Result<Certificate, CertError> {
    use num_traits::{One, Zero};
    if p.is_zero() {
        return Err(CertError::ZeroPolynomial);
    }
    match kind {
        DeltaKind::TensorProduct => {
            if lambda.is_zero() {
                return Err(CertError::ZeroLambda);
            }
            let form = classify_qh(p)
                .map_err(|_| CertError::ZeroPolynomial)?
                .and_then(|c| c.canonical_form)
                .ok_or(CertError::NotCanonical)?;
            match form {
                CanonicalForm::Product { a, b, alpha, beta } => {
                    let u = |e: [u32; 2]| MPoly::monomial(e, GaussRat::one());
                    let q1 = &u([alpha, beta]) - &MPoly::constant(lambda.clone());
                    let q2 = &u([alpha, beta])
                        - &MPoly::constant(b.clone() / lambda.clone());
                    let f = MPoly::monomial([0, 0, alpha, beta], a.clone());
                    let g = MPoly::constant(a * lambda.clone());
                    Ok(Certificate { kind, q1, q2, f, g })
                }
                CanonicalForm::Difference { a, b, alpha, beta } => {
                    let q1 = MPoly::from_terms([
                        ([alpha, 0], b),
                        ([0, beta], -lambda.clone()),
                    ]);
                    let q2 = MPoly::from_terms([
                        ([alpha, 0], GaussRat::one()),
                        ([0, beta], -(GaussRat::one() / lambda.clone())),
                    ]);
                    let f = MPoly::monomial([0, 0, alpha, 0], a.clone());
                    let g = MPoly::monomial([0, beta, 0, 0], a * lambda.clone());
                    Ok(Certificate { kind, q1, q2, f, g })
                }
            }
        }
        DeltaKind::PerturbX => {
            if p.deg_x() > 1 {
                return Err(CertError::NotLinearInX);
            }
            let q1 = p.shift_x(lambda);
            let q2 = MPoly::from_terms([
                ([1, 0], GaussRat::one()),
                ([0, 0], -lambda.clone()),
            ]);
            let f = MPoly::one();
            let g = (&p.hat(kind) - &q1.embed_left())
                .divide_by_x2_minus(lambda)
                .expect("the shifted remainder is always divisible by x2 - lambda");
            Ok(Certificate { kind, q1, q2, f, g })
        }
        DeltaKind::TensorSum => {
            let c = p.coeff(&[1, 0]).cloned().unwrap_or_else(GaussRat::zero);
            let shape = MPoly::from_terms([
                ([1, 0], c.clone()),
                ([0, 1], -c.clone()),
            ]);
            if c.is_zero() || *p != shape {
                return Err(CertError::NotScaledDifference);
            }
            let q1 = MPoly::from_terms([
                ([1, 0], GaussRat::one()),
                ([0, 1], -GaussRat::one()),
                ([0, 0], lambda.clone()),
            ]);
            let q2 = MPoly::from_terms([
                ([1, 0], GaussRat::one()),
                ([0, 1], -GaussRat::one()),
                ([0, 0], -lambda.clone()),
            ]);
            let f = MPoly::constant(c.clone());
            let g = MPoly::constant(c);
            Ok(Certificate { kind, q1, q2, f, g })
        }
    }
}

/// Checks the certificate identity for `p` by exact four-variable
/// arithmetic.
pub fn verify_certificate(p: &CommPoly, cert: &Certificate) -> bool {
    let lhs = p.hat(cert.kind);
    let rhs = &(&cert.f * &cert.q1.embed_left()) + &(&cert.g * &cert.q2.embed_right());
    lhs == rhs
}

/// JSON shape: factor relations are embedded through their own variable
/// pairs, so `q1` reads `x1*y1 - 1`, `q2` reads `x2*y2 - 1`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateRepr {
    kind: DeltaKind,
    q1: String,
    q2: String,
    f: String,
    g: String,
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CertificateRepr {
            kind: self.kind,
            q1: self.q1.embed_left().to_string(),
            q2: self.q2.embed_right().to_string(),
            f: self.f.to_string(),
            g: self.g.to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Certificate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = CertificateRepr::deserialize(deserializer)?;
        let parse = |field: &str, text: &str| {
            parse_poly4(text)
                .map_err(|e| D::Error::custom(format!("bad polynomial in {field}: {e}")))
        };
        let q1 = parse("q1", &repr.q1)?
            .project_left()
            .ok_or_else(|| D::Error::custom("q1 must use only x1, y1"))?;
        let q2 = parse("q2", &repr.q2)?
            .project_right()
            .ok_or_else(|| D::Error::custom("q2 must use only x2, y2"))?;
        Ok(Certificate {
            kind: repr.kind,
            q1,
            q2,
            f: parse("f", &repr.f)?,
            g: parse("g", &repr.g)?,
        })
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] ({}) * ({}) + ({}) * ({})",
            self.kind,
            self.f,
            self.q1.embed_left(),
            self.g,
            self.q2.embed_right()
        )
    }
}
