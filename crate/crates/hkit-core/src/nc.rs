//! Normal-ordered evaluation of polynomial relations at an operator pair.
//!
//! A two-variable polynomial `sum c_ij x^i y^j` is read as the operator
//! expression `sum c_ij S^i T^j` with every power of `S` to the left of every
//! power of `T`. This linear (not multiplicative) reading is what makes the
//! defect operators below meaningful for noncommuting pairs.

use crate::matrix::Matrix;
use crate::poly::{parse_poly, DeltaKind, MPoly};
use crate::scalar::{GaussRat, Scalar};
use serde::de;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// A polynomial in the noncommuting pair `X`, `Y`, stored in normal order:
/// the coefficient at `(i, j)` multiplies `X^i Y^j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NcPoly<K: Scalar> {
    coeffs: MPoly<K, 2>,
}

impl<K: Scalar> NcPoly<K> {
    /// Reads a commutative polynomial as its normal-ordered counterpart.
    /// This is linear in the coefficients but not a ring map.
    pub fn from_commutative(p: &MPoly<K, 2>) -> Self {
        NcPoly { coeffs: p.clone() }
    }

    /// Forgets the ordering and returns the commutative polynomial with the
    /// same coefficients.
    pub fn to_commutative(&self) -> MPoly<K, 2> {
        self.coeffs.clone()
    }

    pub fn zero() -> Self {
        NcPoly { coeffs: MPoly::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        NcPoly { coeffs: &self.coeffs + &rhs.coeffs }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        NcPoly { coeffs: &self.coeffs - &rhs.coeffs }
    }

    pub fn scale(&self, k: &K) -> Self {
        NcPoly { coeffs: self.coeffs.scale(k) }
    }

    /// Left multiplication by `X`; stays normal ordered.
    #[must_use]
    pub fn mul_left_x(&self) -> Self {
        let mut out = MPoly::zero();
        for (exp, c) in self.coeffs.terms() {
            out.insert([exp[0] + 1, exp[1]], c.clone());
        }
        NcPoly { coeffs: out }
    }

    /// Right multiplication by `Y`; stays normal ordered.
    #[must_use]
    pub fn mul_right_y(&self) -> Self {
        let mut out = MPoly::zero();
        for (exp, c) in self.coeffs.terms() {
            out.insert([exp[0], exp[1] + 1], c.clone());
        }
        NcPoly { coeffs: out }
    }

    /// Evaluates `sum c_ij S^i T^j` with memoized powers.
    pub fn eval(&self, s: &Matrix<K>, t: &Matrix<K>) -> Matrix<K> {
        assert!(s.is_square() && t.is_square(), "evaluation requires square matrices");
        assert_eq!(s.rows(), t.rows(), "operator pair dimension mismatch");
        let spows = powers_up_to(s, self.coeffs.deg_x());
        let tpows = powers_up_to(t, self.coeffs.deg_y());
        let mut acc = Matrix::zeros(s.rows(), s.rows());
        for (exp, c) in self.coeffs.terms() {
            let term = &spows[exp[0] as usize] * &tpows[exp[1] as usize];
            acc = &acc + &term.scale(c);
        }
        acc
    }
}

/// All powers `m^0 ..= m^d` of a square matrix.
pub fn powers_up_to<K: Scalar>(m: &Matrix<K>, d: u32) -> Vec<Matrix<K>> {
    assert!(m.is_square(), "powers require a square matrix");
    let mut pows = Vec::with_capacity(d as usize + 1);
    pows.push(Matrix::identity(m.rows()));
    for _ in 0..d {
        let next = pows.last().unwrap() * m;
        pows.push(next);
    }
    pows
}

/// Row `n` of Pascal's triangle in the scalar `K`.
pub fn binomial_row<K: Scalar>(n: u32) -> Vec<K> {
    let mut row = vec![K::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(K::one());
        for w in row.windows(2) {
            next.push(w[0].clone() + w[1].clone());
        }
        next.push(K::one());
        row = next;
    }
    row
}

/// Evaluates the normal-ordered reading of `p^n` at `(s, t)`.
pub fn phi_pow_eval<K: Scalar>(
    p: &MPoly<K, 2>,
    n: u32,
    s: &Matrix<K>,
    t: &Matrix<K>,
) -> Matrix<K> {
    NcPoly::from_commutative(&p.pow(n)).eval(s, t)
}

/// Evaluates a four-variable polynomial at block operators: the coefficient
/// at `(a, b, c, d)` multiplies `(S1^a T1^b) (x) (S2^c T2^d)`. Factor-one
/// operators act on the left Kronecker slot, so they commute with factor-two
/// operators, and within each factor the powers stay normal ordered.
pub fn nc_eval4<K: Scalar>(
    p: &MPoly<K, 4>,
    s1: &Matrix<K>,
    t1: &Matrix<K>,
    s2: &Matrix<K>,
    t2: &Matrix<K>,
) -> Matrix<K> {
    assert!(
        s1.is_square() && t1.is_square() && s2.is_square() && t2.is_square(),
        "evaluation requires square matrices"
    );
    assert_eq!(s1.rows(), t1.rows(), "first pair dimension mismatch");
    assert_eq!(s2.rows(), t2.rows(), "second pair dimension mismatch");
    let s1p = powers_up_to(s1, p.max_degree(0));
    let t1p = powers_up_to(t1, p.max_degree(1));
    let s2p = powers_up_to(s2, p.max_degree(2));
    let t2p = powers_up_to(t2, p.max_degree(3));
    let dim = s1.rows() * s2.rows();
    let mut acc = Matrix::zeros(dim, dim);
    for (exp, c) in p.terms() {
        let left = &s1p[exp[0] as usize] * &t1p[exp[1] as usize];
        let right = &s2p[exp[2] as usize] * &t2p[exp[3] as usize];
        acc = &acc + &left.kron(&right).scale(c);
    }
    acc
}

/// The combined operator pair for a choice of combination map.
pub fn combine_pair<K: Scalar>(
    delta: DeltaKind,
    s1: &Matrix<K>,
    t1: &Matrix<K>,
    s2: &Matrix<K>,
    t2: &Matrix<K>,
) -> (Matrix<K>, Matrix<K>) {
    match delta {
        DeltaKind::TensorProduct => (s1.kron(s2), t1.kron(t2)),
        DeltaKind::PerturbX => (
            s1.tensor_sum(s2),
            t1.kron(&Matrix::identity(s2.rows())),
        ),
        DeltaKind::TensorSum => (s1.tensor_sum(s2), t1.tensor_sum(t2)),
    }
}

/// `beta_n(S, T) = sum_k (-1)^(n-k) C(n,k) S^k T^k`, the defect whose
/// vanishing says the pair is an n-inverse pair.
///
/// The binomial sum is cross-checked against the independent one-step
/// recursion on every call; the two must agree exactly, so this function is
/// meant for exact scalars (the numeric fallback paths evaluate relation
/// powers directly instead).
pub fn beta_n<K: Scalar>(s: &Matrix<K>, t: &Matrix<K>, n: u32) -> Matrix<K> {
    assert_eq!(s.rows(), t.rows(), "operator pair dimension mismatch");
    let binom: Vec<K> = binomial_row(n);
    let spows = powers_up_to(s, n);
    let tpows = powers_up_to(t, n);
    let mut acc = Matrix::zeros(s.rows(), s.rows());
    for k in 0..=n {
        let mut c = binom[k as usize].clone();
        if (n - k) % 2 == 1 {
            c = -c;
        }
        let term = (&spows[k as usize] * &tpows[k as usize]).scale(&c);
        acc = &acc + &term;
    }
    assert!(
        acc == beta_recursive(s, t, n),
        "defect sum and recursion disagree; exact arithmetic is broken"
    );
    acc
}

/// The same operator through the one-step recursion
/// `beta_n = S beta_(n-1) T - beta_(n-1)`.
pub fn beta_recursive<K: Scalar>(s: &Matrix<K>, t: &Matrix<K>, n: u32) -> Matrix<K> {
    let mut acc = Matrix::identity(s.rows());
    for _ in 0..n {
        acc = &(&(s * &acc) * t) - &acc;
    }
    acc
}

/// `gamma_n(S, T) = sum_k (-1)^(n-k) C(n,k) S^k T^(n-k)`, the defect whose
/// vanishing says the pair is an n-symmetry pair. Cross-checked against the
/// recursion like [`beta_n`].
pub fn gamma_n<K: Scalar>(s: &Matrix<K>, t: &Matrix<K>, n: u32) -> Matrix<K> {
    assert_eq!(s.rows(), t.rows(), "operator pair dimension mismatch");
    let binom: Vec<K> = binomial_row(n);
    let spows = powers_up_to(s, n);
    let tpows = powers_up_to(t, n);
    let mut acc = Matrix::zeros(s.rows(), s.rows());
    for k in 0..=n {
        let mut c = binom[k as usize].clone();
        if (n - k) % 2 == 1 {
            c = -c;
        }
        let term = (&spows[k as usize] * &tpows[(n - k) as usize]).scale(&c);
        acc = &acc + &term;
    }
    assert!(
        acc == gamma_recursive(s, t, n),
        "defect sum and recursion disagree; exact arithmetic is broken"
    );
    acc
}

/// The same operator through `gamma_n = S gamma_(n-1) - gamma_(n-1) T`.
pub fn gamma_recursive<K: Scalar>(s: &Matrix<K>, t: &Matrix<K>, n: u32) -> Matrix<K> {
    let mut acc = Matrix::identity(s.rows());
    for _ in 0..n {
        acc = &(s * &acc) - &(&acc * t);
    }
    acc
}

/// Which defect family a query is about. The two named families carry their
/// defining polynomial; the general form carries an arbitrary one.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RelationKind {
    /// `x*y - 1`; the defect is `beta_n`.
    NInverse,
    /// `x - y`; the defect is `gamma_n`.
    Helton,
    /// Any nonzero polynomial relation.
    General(MPoly<GaussRat, 2>),
}

impl RelationKind {
    /// The defining two-variable polynomial.
    pub fn poly(&self) -> MPoly<GaussRat, 2> {
        match self {
            RelationKind::NInverse => parse_poly("x*y - 1").unwrap(),
            RelationKind::Helton => parse_poly("x - y").unwrap(),
            RelationKind::General(p) => p.clone(),
        }
    }

    /// Parses `n-inverse`, `helton`, or `general:<polynomial>`.
    pub fn parse(s: &str) -> Result<RelationKind, String> {
        match s {
            "n-inverse" => Ok(RelationKind::NInverse),
            "helton" => Ok(RelationKind::Helton),
            _ => {
                if let Some(body) = s.strip_prefix("general:") {
                    let p = parse_poly(body).map_err(|e| e.to_string())?;
                    if p.is_zero() {
                        return Err("the zero polynomial is not a usable relation".to_string());
                    }
                    Ok(RelationKind::General(p))
                } else {
                    Err(format!(
                        "unknown relation {s:?}, expected n-inverse, helton, or general:<polynomial>"
                    ))
                }
            }
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationKind::NInverse => f.write_str("n-inverse"),
            RelationKind::Helton => f.write_str("helton"),
            RelationKind::General(p) => write!(f, "general:{p}"),
        }
    }
}

impl Serialize for RelationKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RelationKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        RelationKind::parse(&s).map_err(de::Error::custom)
    }
}

/// The order-`n` defect of the pair for the given relation, exactly.
pub fn defect(
    kind: &RelationKind,
    n: u32,
    s: &Matrix<GaussRat>,
    t: &Matrix<GaussRat>,
) -> Matrix<GaussRat> {
    match kind {
        RelationKind::NInverse => beta_n(s, t, n),
        RelationKind::Helton => gamma_n(s, t, n),
        RelationKind::General(p) => phi_pow_eval(p, n, s, t),
    }
}

/// Builds the combined pair for `delta` from the four operands and returns
/// the order-`n` defect there. For `PerturbX` the fourth operand is unused
/// (the combined pair is `(S1 (+) S2, T1 (x) I)`).
pub fn eval_combined(
    kind: &RelationKind,
    delta: DeltaKind,
    s1: &Matrix<GaussRat>,
    t1: &Matrix<GaussRat>,
    s2: &Matrix<GaussRat>,
    t2: &Matrix<GaussRat>,
    n: u32,
) -> Matrix<GaussRat> {
    assert!(n >= 1, "relation order must be positive");
    let (s, t) = combine_pair(delta, s1, t1, s2, t2);
    defect(kind, n, &s, &t)
}

/// Least `n` in `1..=max_n` whose defect vanishes, if any. Defects of the
/// named families are not monotone in general, so this scans from below.
pub fn min_order(
    kind: &RelationKind,
    s: &Matrix<GaussRat>,
    t: &Matrix<GaussRat>,
    max_n: u32,
) -> Option<u32> {
    (1..=max_n).find(|&n| defect(kind, n, s, t).is_zero())
}

/// True when the defect vanishes at `n` but not at `n - 1` (so `n` is the
/// exact order, not just an upper bound).
pub fn is_strict_at(
    kind: &RelationKind,
    n: u32,
    s: &Matrix<GaussRat>,
    t: &Matrix<GaussRat>,
) -> bool {
    if n == 0 {
        return false;
    }
    defect(kind, n, s, t).is_zero() && !defect(kind, n - 1, s, t).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::scalar::GaussRat;

    fn m(rows: Vec<Vec<i64>>) -> Matrix<GaussRat> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(GaussRat::from_int).collect())
                .collect(),
        )
    }

    #[test]
    fn normal_order_shifts() {
        let p = NcPoly::from_commutative(&parse_poly("x*y - 1").unwrap());
        let xp = p.mul_left_x();
        assert_eq!(xp.to_commutative(), parse_poly("x^2*y - x").unwrap());
        let py = p.mul_right_y();
        assert_eq!(py.to_commutative(), parse_poly("x*y^2 - y").unwrap());
    }

    #[test]
    fn evaluation_respects_normal_order() {
        // S and T do not commute, so x*y evaluates to S*T, not T*S.
        let s = m(vec![vec![0, 1], vec![0, 0]]);
        let t = m(vec![vec![0, 0], vec![1, 0]]);
        let p = NcPoly::from_commutative(&parse_poly("x*y").unwrap());
        assert_eq!(p.eval(&s, &t), m(vec![vec![1, 0], vec![0, 0]]));
    }

    #[test]
    fn unit_triangular_pair_is_a_strict_3_inverse_pair() {
        let s = m(vec![vec![1, 0], vec![1, 1]]);
        let t = m(vec![vec![1, 1], vec![0, 1]]);
        assert_eq!(beta_n(&s, &t, 1), m(vec![vec![0, 1], vec![1, 1]]));
        assert_eq!(beta_n(&s, &t, 2), m(vec![vec![0, 0], vec![0, 2]]));
        assert!(beta_n(&s, &t, 3).is_zero());
        assert_eq!(min_order(&RelationKind::NInverse, &s, &t, 16), Some(3));
        assert!(is_strict_at(&RelationKind::NInverse, 3, &s, &t));
        assert!(!is_strict_at(&RelationKind::NInverse, 4, &s, &t));
    }

    #[test]
    fn adjoint_shift_pair_is_a_strict_3_symmetry() {
        let n = m(vec![vec![0, 1], vec![0, 0]]);
        let nad = n.adjoint();
        assert_eq!(gamma_n(&nad, &n, 2), m(vec![vec![0, 0], vec![0, -2]]));
        assert!(gamma_n(&nad, &n, 3).is_zero());
        assert!(is_strict_at(&RelationKind::Helton, 3, &nad, &n));
    }

    #[test]
    fn recursions_agree_with_binomial_sums() {
        let s = m(vec![vec![1, 2], vec![0, 3]]);
        let t = m(vec![vec![2, 0], vec![1, 1]]);
        for n in 0..6 {
            assert_eq!(beta_n(&s, &t, n), beta_recursive(&s, &t, n));
            assert_eq!(gamma_n(&s, &t, n), gamma_recursive(&s, &t, n));
        }
    }

    #[test]
    fn commuting_pairs_collapse() {
        let s = m(vec![vec![2, 0], vec![0, 3]]);
        let t = m(vec![vec![5, 0], vec![0, 7]]);
        let st_minus_i = &(&s * &t) - &Matrix::identity(2);
        let s_minus_t = &s - &t;
        for n in 1..5 {
            assert_eq!(beta_n(&s, &t, n), st_minus_i.pow(n));
            assert_eq!(gamma_n(&s, &t, n), s_minus_t.pow(n));
        }
    }

    #[test]
    fn defect_matches_power_evaluation() {
        let s = m(vec![vec![1, 0], vec![1, 1]]);
        let t = m(vec![vec![1, 1], vec![0, 1]]);
        let p = parse_poly("x*y - 1").unwrap();
        for n in 0..5 {
            assert_eq!(beta_n(&s, &t, n), phi_pow_eval(&p, n, &s, &t));
        }
        let q = parse_poly("x - y").unwrap();
        for n in 0..5 {
            assert_eq!(gamma_n(&s, &t, n), phi_pow_eval(&q, n, &s, &t));
        }
    }

    #[test]
    fn combined_evaluation_factors_through_the_hat_map() {
        let s1 = m(vec![vec![1, 0], vec![1, 1]]);
        let t1 = m(vec![vec![1, 1], vec![0, 1]]);
        let s2 = m(vec![vec![2]]);
        let t2 = m(vec![vec![3]]);
        let p = parse_poly("x*y^2 - 2*x + 1").unwrap();
        for delta in [DeltaKind::TensorProduct, DeltaKind::PerturbX, DeltaKind::TensorSum] {
            for n in 0..4 {
                let (s, t) = combine_pair(delta, &s1, &t1, &s2, &t2);
                let direct = phi_pow_eval(&p, n, &s, &t);
                let through_hat = nc_eval4(&p.pow(n).hat(delta), &s1, &t1, &s2, &t2);
                assert_eq!(direct, through_hat, "delta {delta} order {n}");
            }
        }
    }

    #[test]
    fn relation_strings_round_trip() {
        for s in ["n-inverse", "helton", "general:x*y^2 - 2"] {
            let k = RelationKind::parse(s).unwrap();
            assert_eq!(RelationKind::parse(&k.to_string()).unwrap(), k);
        }
        assert_eq!(
            RelationKind::parse("general:x*y^2-2").unwrap(),
            RelationKind::General(parse_poly("x*y^2 - 2").unwrap())
        );
        assert!(RelationKind::parse("inverse").is_err());
        assert!(RelationKind::parse("general:0").is_err());
        assert!(RelationKind::parse("general:x +").is_err());
    }
}
