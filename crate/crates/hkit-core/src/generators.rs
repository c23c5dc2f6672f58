//! Deterministic builders of operator instances with known splitting
//! witnesses: the oracle side of every round-trip test.
//!
//! Strictness is not sampled and hoped for; it is built in (Jordan blocks
//! of exact nilpotency index, commuting stock pairs) and asserted before
//! an instance is handed out. Relations that involve adjoints never get
//! similarity conjugation, so exactness of the adjoint arithmetic is
//! preserved; everything else is conjugated by random unimodular
//! matrices to avoid shipping suspiciously clean triangular instances.

use crate::matrix::Matrix;
use crate::nc::{self, RelationKind};
use crate::poly::DeltaKind;
use crate::scalar::{rational_sqrt, GaussRat};
use crate::splitting::{SplitWitness, WitnessScalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

type ExactMatrix = Matrix<GaussRat>;

/// A request for one generated instance with a known witness.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub relation: RelationKind,
    pub delta: DeltaKind,
    pub l: u32,
    pub m: u32,
    pub lambda: GaussRat,
    pub dims: (usize, usize),
    pub seed: u64,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GenError {
    #[error("strict order {order} needs dimension at least {needed}, got {dim}")]
    DimensionTooSmall { order: u32, needed: usize, dim: usize },
    #[error("strict even-order symmetries do not exist on matrices")]
    EvenOrder,
    #[error("lambda has no exact representation here: {0}")]
    UnrepresentableLambda(String),
    #[error("inconsistent instance spec: {0}")]
    Inconsistent(String),
}

/// Operand bundle shapes, one per solver entry point.
#[derive(Clone, Debug)]
pub enum GeneratedOperands {
    /// Two factor pairs, for tensor products and tensor sums.
    Four {
        s1: ExactMatrix,
        t1: ExactMatrix,
        s2: ExactMatrix,
        t2: ExactMatrix,
    },
    /// A pair plus the perturbation block.
    Perturb {
        s: ExactMatrix,
        t: ExactMatrix,
        q: ExactMatrix,
    },
    /// Operators whose adjoints complete the pairs.
    AdjointPair { t1: ExactMatrix, t2: ExactMatrix },
}

/// A generated instance: operands whose combined relation vanishes at
/// `n = l + m - 1` (asserted at generation time) plus the witness that
/// produced it.
#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    pub operands: GeneratedOperands,
    pub n: u32,
    pub witness: SplitWitness,
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rand_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num = rng.gen_range(-4i64..=4);
    let den = rng.gen_range(1i64..=4);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn rand_gauss(rng: &mut ChaCha8Rng) -> GaussRat {
    GaussRat::new(rand_rational(rng), rand_rational(rng))
}

fn rand_nonzero_real(rng: &mut ChaCha8Rng) -> GaussRat {
    loop {
        let r = rand_rational(rng);
        if !r.is_zero() {
            return GaussRat::new(r, BigRational::zero());
        }
    }
}

/// A Jordan block of index exactly `index`, padded with zeros, with
/// random positive superdiagonal entries.
fn rand_nilpotent(dim: usize, index: u32, rng: &mut ChaCha8Rng) -> ExactMatrix {
    let mut n = Matrix::zeros(dim, dim);
    for i in 0..(index as usize - 1) {
        n.set(i, i + 1, GaussRat::from_int(rng.gen_range(1i64..=4)));
    }
    assert_eq!(n.nilpotency_index(), Some(index), "index drifted");
    n
}

/// A random unimodular matrix: unit upper times unit lower triangular,
/// so the inverse is exact and small.
fn rand_unimodular(dim: usize, rng: &mut ChaCha8Rng) -> ExactMatrix {
    let mut upper: ExactMatrix = Matrix::identity(dim);
    let mut lower: ExactMatrix = Matrix::identity(dim);
    for i in 0..dim {
        for j in 0..dim {
            if i < j {
                upper.set(i, j, GaussRat::from_int(rng.gen_range(-2i64..=2)));
            } else if i > j {
                lower.set(i, j, GaussRat::from_int(rng.gen_range(-2i64..=2)));
            }
        }
    }
    &upper * &lower
}

fn conjugate(m: &ExactMatrix, p: &ExactMatrix) -> ExactMatrix {
    let p_inv = p.inverse().expect("unimodular matrices are invertible");
    &(p * m) * &p_inv
}

/// Shifts by the first nonnegative integer making the matrix invertible;
/// real shifts keep hermitian inputs hermitian.
fn make_invertible(m: ExactMatrix) -> ExactMatrix {
    let mut c = 0i64;
    loop {
        let shifted = &m + &Matrix::identity(m.rows()).scale(&GaussRat::from_int(c));
        if shifted.inverse().is_some() {
            return shifted;
        }
        c += 1;
    }
}

fn rand_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> ExactMatrix {
    let mut h = Matrix::zeros(dim, dim);
    for i in 0..dim {
        h.set(i, i, GaussRat::new(rand_rational(rng), BigRational::zero()));
        for j in (i + 1)..dim {
            let v = rand_gauss(rng);
            h.set(i, j, v.clone());
            h.set(j, i, v.conj());
        }
    }
    make_invertible(h)
}

fn rand_real_symmetric(dim: usize, rng: &mut ChaCha8Rng) -> ExactMatrix {
    let mut h = Matrix::zeros(dim, dim);
    for i in 0..dim {
        h.set(i, i, GaussRat::new(rand_rational(rng), BigRational::zero()));
        for j in (i + 1)..dim {
            let v = GaussRat::new(rand_rational(rng), BigRational::zero());
            h.set(i, j, v.clone());
            h.set(j, i, v);
        }
    }
    make_invertible(h)
}

/// Builds a strict inverse-type pair `(S, T) = (c^-1 (I + N), c I)` with N
/// of nilpotency index exactly `l`, jointly conjugated by a random
/// unimodular matrix.
pub fn gen_strict_inverse_pair(
    l: u32,
    dim: usize,
    c: &GaussRat,
    seed: u64,
) -> Result<(ExactMatrix, ExactMatrix), GenError> {
    if l == 0 || (l as usize) > dim {
        return Err(GenError::DimensionTooSmall { order: l, needed: l as usize, dim });
    }
    if c.is_zero() {
        return Err(GenError::Inconsistent("the unit c must be nonzero".into()));
    }
    let mut rng = rng_for(seed);
    let n_mat = rand_nilpotent(dim, l, &mut rng);
    let c_inv = c.inv().unwrap();
    let s0 = (&Matrix::identity(dim) + &n_mat).scale(&c_inv);
    let t = Matrix::identity(dim).scale(c);
    let p = rand_unimodular(dim, &mut rng);
    let s = conjugate(&s0, &p);
    assert!(
        nc::min_order(&RelationKind::NInverse, &s, &t, l) == Some(l),
        "strict inverse stock lost its order"
    );
    Ok((s, t))
}

/// Builds one operator T with `min_order` of the symmetry relation on
/// (T*, T) exactly `order`: a random hermitian matrix for order 1, a
/// nilpotent of index (order + 1) / 2 for odd orders above. Even strict
/// orders do not exist at matrix scale and are rejected.
pub fn gen_nsymmetry(order: u32, dim: usize, seed: u64) -> Result<ExactMatrix, GenError> {
    if order == 0 || order % 2 == 0 {
        return Err(GenError::EvenOrder);
    }
    let mut rng = rng_for(seed);
    let t = if order == 1 {
        rand_hermitian(dim, &mut rng)
    } else {
        let q = (order + 1) / 2;
        if (q as usize) > dim {
            return Err(GenError::DimensionTooSmall { order, needed: q as usize, dim });
        }
        rand_nilpotent(dim, q, &mut rng)
    };
    assert!(
        nc::min_order(&RelationKind::Helton, &t.adjoint(), &t, order) == Some(order),
        "symmetry stock lost its strict order"
    );
    Ok(t)
}

/// Real stock with `gamma_order((A*)  , A) = 0` strictly at the given odd
/// order: symmetric for order 1, a real shift of an exact-index nilpotent
/// otherwise. Always invertible.
fn symmetry_stock(order: u32, dim: usize, rng: &mut ChaCha8Rng) -> Result<ExactMatrix, GenError> {
    if order % 2 == 0 || order == 0 {
        return Err(GenError::EvenOrder);
    }
    if order == 1 {
        return Ok(rand_real_symmetric(dim, rng));
    }
    let q = (order + 1) / 2;
    if (q as usize) > dim {
        return Err(GenError::DimensionTooSmall { order, needed: q as usize, dim });
    }
    let n_mat = rand_nilpotent(dim, q, rng);
    Ok(&n_mat + &Matrix::identity(dim).scale(&rand_nonzero_real(rng)))
}

fn assert_combined(
    kind: &RelationKind,
    delta: DeltaKind,
    s1: &ExactMatrix,
    t1: &ExactMatrix,
    s2: &ExactMatrix,
    t2: &ExactMatrix,
    n: u32,
) {
    assert!(
        nc::eval_combined(kind, delta, s1, t1, s2, t2, n).is_zero(),
        "generated instance misses the combined relation at order {n}"
    );
    assert!(
        n == 1 || !nc::eval_combined(kind, delta, s1, t1, s2, t2, n - 1).is_zero(),
        "generated instance is not strict at order {n}"
    );
}

/// Builds a combined instance for the requested family with witness
/// `(lambda, l, m)` and the relation vanishing strictly at
/// `n = l + m - 1`.
pub fn gen_combined_instance(spec: &InstanceSpec) -> Result<GeneratedInstance, GenError> {
    if spec.l == 0 || spec.m == 0 {
        return Err(GenError::Inconsistent("orders must be positive".into()));
    }
    let (d1, d2) = spec.dims;
    if d1 == 0 || d2 == 0 {
        return Err(GenError::Inconsistent("dimensions must be positive".into()));
    }
    let n = spec.l + spec.m - 1;
    let lambda = &spec.lambda;
    let mut rng = rng_for(spec.seed);
    let witness = SplitWitness {
        relation: spec.relation.clone(),
        delta: spec.delta,
        lambda: WitnessScalar::Exact(lambda.clone()),
        l: spec.l,
        m: spec.m,
    };
    match (&spec.relation, spec.delta) {
        (RelationKind::NInverse, DeltaKind::TensorProduct) => {
            if lambda.is_zero() {
                return Err(GenError::Inconsistent(
                    "tensor-product instances need a nonzero lambda".into(),
                ));
            }
            let lambda_inv = lambda.inv().unwrap();
            let c1 = rand_nonzero_real(&mut rng);
            let c2 = rand_nonzero_real(&mut rng);
            let seeds = (rng.gen::<u64>(), rng.gen::<u64>());
            let (s1, t1_raw) = gen_strict_inverse_pair(spec.l, d1, &c1, seeds.0)?;
            let (s2, t2_raw) = gen_strict_inverse_pair(spec.m, d2, &c2, seeds.1)?;
            // (S1, lambda T1) carries order l, (S2, T2 / lambda) order m.
            let t1 = t1_raw.scale(&lambda_inv);
            let t2 = t2_raw.scale(lambda);
            assert_combined(&spec.relation, spec.delta, &s1, &t1, &s2, &t2, n);
            Ok(GeneratedInstance {
                operands: GeneratedOperands::Four { s1, t1, s2, t2 },
                n,
                witness,
            })
        }
        (RelationKind::Helton, DeltaKind::TensorProduct) => {
            if lambda.is_zero() {
                return Err(GenError::Inconsistent(
                    "tensor-product instances need a nonzero lambda".into(),
                ));
            }
            if (spec.l as usize) > d1 || (spec.m as usize) > d2 {
                return Err(GenError::DimensionTooSmall {
                    order: spec.l.max(spec.m),
                    needed: spec.l.max(spec.m) as usize,
                    dim: d1.min(d2),
                });
            }
            let lambda_inv = lambda.inv().unwrap();
            let c1 = rand_nonzero_real(&mut rng);
            let c2 = rand_nonzero_real(&mut rng);
            let n1 = rand_nilpotent(d1, spec.l, &mut rng);
            let n2 = rand_nilpotent(d2, spec.m, &mut rng);
            let p1 = rand_unimodular(d1, &mut rng);
            let p2 = rand_unimodular(d2, &mut rng);
            // Commuting stock: gamma_l(cI + N, cI) = N^l.
            let s1 = conjugate(&(&Matrix::identity(d1).scale(&c1) + &n1), &p1);
            let t1 = Matrix::identity(d1).scale(&(c1.clone() * lambda_inv));
            let s2 = conjugate(&(&Matrix::identity(d2).scale(&c2) + &n2), &p2);
            let t2 = Matrix::identity(d2).scale(&(c2.clone() * lambda.clone()));
            assert_combined(&spec.relation, spec.delta, &s1, &t1, &s2, &t2, n);
            Ok(GeneratedInstance {
                operands: GeneratedOperands::Four { s1, t1, s2, t2 },
                n,
                witness,
            })
        }
        (RelationKind::NInverse, DeltaKind::PerturbX)
        | (RelationKind::Helton, DeltaKind::PerturbX) => {
            if (spec.l as usize) > d1 || (spec.m as usize) > d2 {
                return Err(GenError::DimensionTooSmall {
                    order: spec.l.max(spec.m),
                    needed: spec.l.max(spec.m) as usize,
                    dim: d1.min(d2),
                });
            }
            let c = rand_nonzero_real(&mut rng);
            let n1 = rand_nilpotent(d1, spec.l, &mut rng);
            let nq = rand_nilpotent(d2, spec.m, &mut rng);
            let p1 = rand_unimodular(d1, &mut rng);
            let pq = rand_unimodular(d2, &mut rng);
            // The shifted pair (S + lambda, T) carries the strict order l.
            let shifted = match spec.relation {
                RelationKind::NInverse => {
                    (&Matrix::identity(d1) + &n1).scale(&c.inv().unwrap())
                }
                _ => &Matrix::identity(d1).scale(&c) + &n1,
            };
            let t = Matrix::identity(d1).scale(&c);
            let s0 = &shifted - &Matrix::identity(d1).scale(lambda);
            let s = conjugate(&s0, &p1);
            let t = conjugate(&t, &p1);
            let q = &conjugate(&nq, &pq) + &Matrix::identity(d2).scale(lambda);
            assert_combined(&spec.relation, spec.delta, &s, &t, &q, &q, n);
            Ok(GeneratedInstance {
                operands: GeneratedOperands::Perturb { s, t, q },
                n,
                witness,
            })
        }
        (RelationKind::Helton, DeltaKind::TensorSum) => {
            if (spec.l as usize) > d1 || (spec.m as usize) > d2 {
                return Err(GenError::DimensionTooSmall {
                    order: spec.l.max(spec.m),
                    needed: spec.l.max(spec.m) as usize,
                    dim: d1.min(d2),
                });
            }
            // gamma_l(S1 + lambda, T1) = 0 needs S1 + lambda = c1 I + N1;
            // keep the factors themselves nonzero.
            let c1 = loop {
                let c = rand_nonzero_real(&mut rng);
                if !(spec.l == 1 && c == *lambda) {
                    break c;
                }
            };
            let c2 = loop {
                let c = rand_nonzero_real(&mut rng);
                if !(spec.m == 1 && c == -lambda.clone()) {
                    break c;
                }
            };
            let n1 = rand_nilpotent(d1, spec.l, &mut rng);
            let n2 = rand_nilpotent(d2, spec.m, &mut rng);
            let p1 = rand_unimodular(d1, &mut rng);
            let p2 = rand_unimodular(d2, &mut rng);
            let s1 = conjugate(
                &(&Matrix::identity(d1).scale(&(c1.clone() - lambda.clone())) + &n1),
                &p1,
            );
            let t1 = Matrix::identity(d1).scale(&c1);
            let s2 = conjugate(
                &(&Matrix::identity(d2).scale(&(c2.clone() + lambda.clone())) + &n2),
                &p2,
            );
            let t2 = Matrix::identity(d2).scale(&c2);
            assert_combined(&spec.relation, spec.delta, &s1, &t1, &s2, &t2, n);
            Ok(GeneratedInstance {
                operands: GeneratedOperands::Four { s1, t1, s2, t2 },
                n,
                witness,
            })
        }
        _ => Err(GenError::Inconsistent(
            "no generator family for this relation and delta".into(),
        )),
    }
}

/// A unit scalar as a quotient rho / conj(rho); every such quotient has
/// exact modulus one.
fn random_unit(rng: &mut ChaCha8Rng) -> GaussRat {
    let rho = GaussRat::new(
        BigRational::from(BigInt::from(rng.gen_range(1i64..=5))),
        BigRational::from(BigInt::from(rng.gen_range(-5i64..=5))),
    );
    rho.clone() / rho.conj()
}

/// The unit omega-bar with square lambda, when one exists in the
/// Gaussian rationals: `(1 + lambda) / sqrt(2 + 2 Re lambda)`, or `i`
/// at the branch point lambda = -1.
fn unit_square_root(lambda: &GaussRat) -> Result<GaussRat, GenError> {
    if !lambda.norm_sqr().is_one() {
        return Err(GenError::Inconsistent(
            "symmetry scalars must have exact modulus one".into(),
        ));
    }
    if *lambda == GaussRat::from_int(-1) {
        return Ok(GaussRat::i());
    }
    let two = BigRational::from(BigInt::from(2));
    let s_sq = &two + &two * lambda.re();
    match rational_sqrt(&s_sq) {
        Some(s) => {
            let s = GaussRat::new(s, BigRational::zero());
            Ok((GaussRat::one() + lambda.clone()) / s)
        }
        None => Err(GenError::UnrepresentableLambda(format!(
            "no Gaussian-rational unit squares to {lambda}"
        ))),
    }
}

/// Builds (T1, T2) with the symmetry relation on the adjoint tensor
/// product vanishing strictly at `l + m - 1`, and the known unit scalar
/// pairing the factors. `lambda = None` draws a representable unit from
/// the seed.
pub fn gen_nsym_instance(
    l: u32,
    m: u32,
    dims: (usize, usize),
    lambda: Option<&GaussRat>,
    seed: u64,
) -> Result<GeneratedInstance, GenError> {
    let mut rng = rng_for(seed);
    let omega_bar = match lambda {
        Some(lam) => unit_square_root(lam)?,
        None => random_unit(&mut rng),
    };
    let lambda = omega_bar.clone() * omega_bar.clone();
    let a1 = symmetry_stock(l, dims.0, &mut rng)?;
    let a2 = symmetry_stock(m, dims.1, &mut rng)?;
    let t1 = a1.scale(&omega_bar.conj());
    let t2 = a2.scale(&omega_bar);
    let n = l + m - 1;
    // The factor relations the witness promises, checked exactly.
    let side1 = |k: u32| nc::gamma_n(&t1.adjoint(), &t1.scale(&lambda), k);
    let side2 = |k: u32| nc::gamma_n(&t2.adjoint(), &t2.scale(&lambda.conj()), k);
    assert!(side1(l).is_zero() && (l == 1 || !side1(l - 1).is_zero()));
    assert!(side2(m).is_zero() && (m == 1 || !side2(m - 1).is_zero()));
    assert_combined(
        &RelationKind::Helton,
        DeltaKind::TensorProduct,
        &t1.adjoint(),
        &t1,
        &t2.adjoint(),
        &t2,
        n,
    );
    Ok(GeneratedInstance {
        operands: GeneratedOperands::AdjointPair { t1, t2 },
        n,
        witness: SplitWitness {
            relation: RelationKind::Helton,
            delta: DeltaKind::TensorProduct,
            lambda: WitnessScalar::Exact(lambda),
            l,
            m,
        },
    })
}

/// Builds (T1, T2) with the symmetry relation on the adjoint tensor sum
/// vanishing strictly at `l + m - 1`; the witness shift is pure
/// imaginary, drawn from the seed when not supplied.
pub fn gen_nsym2_instance(
    l: u32,
    m: u32,
    dims: (usize, usize),
    lambda: Option<&GaussRat>,
    seed: u64,
) -> Result<GeneratedInstance, GenError> {
    let mut rng = rng_for(seed);
    let lambda = match lambda {
        Some(lam) => {
            if !lam.re().is_zero() {
                return Err(GenError::Inconsistent(
                    "tensor-sum symmetry shifts must be pure imaginary".into(),
                ));
            }
            lam.clone()
        }
        None => GaussRat::new(
            BigRational::zero(),
            BigRational::from(BigInt::from(rng.gen_range(-3i64..=3))),
        ),
    };
    let a1 = symmetry_stock(l, dims.0, &mut rng)?;
    let a2 = symmetry_stock(m, dims.1, &mut rng)?;
    let t1 = &a1 - &Matrix::identity(dims.0).scale(&lambda);
    let t2 = &a2 + &Matrix::identity(dims.1).scale(&lambda);
    let n = l + m - 1;
    let shifted1 = &t1 + &Matrix::identity(dims.0).scale(&lambda);
    let shifted2 = &t2 - &Matrix::identity(dims.1).scale(&lambda);
    assert!(nc::gamma_n(&shifted1.adjoint(), &shifted1, l).is_zero());
    assert!(nc::gamma_n(&shifted2.adjoint(), &shifted2, m).is_zero());
    assert_combined(
        &RelationKind::Helton,
        DeltaKind::TensorSum,
        &t1.adjoint(),
        &t1,
        &t2.adjoint(),
        &t2,
        n,
    );
    Ok(GeneratedInstance {
        operands: GeneratedOperands::AdjointPair { t1, t2 },
        n,
        witness: SplitWitness {
            relation: RelationKind::Helton,
            delta: DeltaKind::TensorSum,
            lambda: WitnessScalar::Exact(lambda),
            l,
            m,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitting::{
        split_nsym, split_nsym2, split_perturbation, split_tensor_product,
        split_tensor_sum_helton, SolverOptions,
    };

    fn gr(n: i64) -> GaussRat {
        GaussRat::from_int(n)
    }

    fn spec(
        relation: RelationKind,
        delta: DeltaKind,
        l: u32,
        m: u32,
        lambda: GaussRat,
        dims: (usize, usize),
        seed: u64,
    ) -> InstanceSpec {
        InstanceSpec { relation, delta, l, m, lambda, dims, seed }
    }

    #[test]
    fn strict_inverse_pair_shapes() {
        let (s, t) = gen_strict_inverse_pair(1, 1, &gr(1), 7).unwrap();
        assert!(s.is_identity() && t.is_identity());

        let (s, t) = gen_strict_inverse_pair(2, 2, &gr(1), 7).unwrap();
        assert!(!nc::beta_n(&s, &t, 1).is_zero());
        assert!(nc::beta_n(&s, &t, 2).is_zero());

        // Conjugation must preserve the strict order at any dimension.
        let (s, t) = gen_strict_inverse_pair(3, 4, &GaussRat::from_ratio(2, 3), 99).unwrap();
        assert_eq!(nc::min_order(&RelationKind::NInverse, &s, &t, 5), Some(3));
    }

    #[test]
    fn strict_inverse_pair_is_deterministic_and_bounded() {
        let a = gen_strict_inverse_pair(2, 3, &gr(2), 11).unwrap();
        let b = gen_strict_inverse_pair(2, 3, &gr(2), 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            gen_strict_inverse_pair(4, 3, &gr(1), 0),
            Err(GenError::DimensionTooSmall { order: 4, needed: 4, dim: 3 })
        );
        assert!(matches!(
            gen_strict_inverse_pair(1, 1, &GaussRat::zero(), 0),
            Err(GenError::Inconsistent(_))
        ));
    }

    #[test]
    fn nsymmetry_stock_orders() {
        let h = gen_nsymmetry(1, 2, 5).unwrap();
        assert!(h.is_hermitian());

        let t = gen_nsymmetry(3, 2, 5).unwrap();
        assert_eq!(t.nilpotency_index(), Some(2));
        assert!(nc::gamma_n(&t.adjoint(), &t, 3).is_zero());
        assert!(!nc::gamma_n(&t.adjoint(), &t, 2).is_zero());

        let t = gen_nsymmetry(5, 3, 5).unwrap();
        assert_eq!(t.nilpotency_index(), Some(3));
        assert_eq!(
            nc::min_order(&RelationKind::Helton, &t.adjoint(), &t, 6),
            Some(5)
        );

        assert_eq!(gen_nsymmetry(2, 2, 0), Err(GenError::EvenOrder));
        assert_eq!(gen_nsymmetry(4, 4, 0), Err(GenError::EvenOrder));
    }

    #[test]
    fn tensor_product_families_round_trip() {
        for seed in [1u64, 2, 3] {
            let inst = gen_combined_instance(&spec(
                RelationKind::NInverse,
                DeltaKind::TensorProduct,
                2,
                1,
                gr(2),
                (2, 1),
                seed,
            ))
            .unwrap();
            let GeneratedOperands::Four { s1, t1, s2, t2 } = &inst.operands else {
                panic!("tensor products carry four operands")
            };
            let w = split_tensor_product(
                &RelationKind::NInverse,
                s1,
                t1,
                s2,
                t2,
                inst.n,
                &SolverOptions::default(),
            )
            .unwrap();
            assert_eq!(w.l + w.m, inst.n + 1);
            assert_eq!(w.verified(), "exact");

            let inst = gen_combined_instance(&spec(
                RelationKind::Helton,
                DeltaKind::TensorProduct,
                1,
                2,
                GaussRat::from_ratio(-3, 2),
                (2, 2),
                seed,
            ))
            .unwrap();
            let GeneratedOperands::Four { s1, t1, s2, t2 } = &inst.operands else {
                panic!()
            };
            let w = split_tensor_product(
                &RelationKind::Helton,
                s1,
                t1,
                s2,
                t2,
                inst.n,
                &SolverOptions::default(),
            )
            .unwrap();
            assert_eq!(w.l + w.m, inst.n + 1);
        }
    }

    #[test]
    fn perturbation_families_round_trip() {
        let inst = gen_combined_instance(&spec(
            RelationKind::NInverse,
            DeltaKind::PerturbX,
            2,
            2,
            gr(0),
            (2, 2),
            4,
        ))
        .unwrap();
        let GeneratedOperands::Perturb { s, t, q } = &inst.operands else {
            panic!("perturbations carry three operands")
        };
        let w = split_perturbation(
            &RelationKind::NInverse,
            s,
            t,
            q,
            inst.n,
            &SolverOptions::default(),
        )
        .unwrap();
        assert_eq!((w.l, w.m), (2, 2));

        let inst = gen_combined_instance(&spec(
            RelationKind::Helton,
            DeltaKind::PerturbX,
            1,
            3,
            GaussRat::from_ratio(1, 2),
            (1, 3),
            4,
        ))
        .unwrap();
        let GeneratedOperands::Perturb { s, t, q } = &inst.operands else { panic!() };
        let w = split_perturbation(
            &RelationKind::Helton,
            s,
            t,
            q,
            inst.n,
            &SolverOptions::default(),
        )
        .unwrap();
        assert_eq!(w.l + w.m, inst.n + 1);
        match &w.lambda {
            WitnessScalar::Exact(v) => assert_eq!(*v, GaussRat::from_ratio(1, 2)),
            _ => panic!("perturbation witnesses are exact"),
        }
    }

    #[test]
    fn tensor_sum_family_round_trips() {
        let inst = gen_combined_instance(&spec(
            RelationKind::Helton,
            DeltaKind::TensorSum,
            1,
            3,
            gr(-2),
            (2, 3),
            9,
        ))
        .unwrap();
        let GeneratedOperands::Four { s1, t1, s2, t2 } = &inst.operands else { panic!() };
        let w =
            split_tensor_sum_helton(s1, t1, s2, t2, inst.n, &SolverOptions::default()).unwrap();
        assert_eq!(w.l + w.m, inst.n + 1);
        assert_eq!(w.verified(), "exact");
    }

    #[test]
    fn unsupported_families_are_rejected() {
        assert!(matches!(
            gen_combined_instance(&spec(
                RelationKind::NInverse,
                DeltaKind::TensorSum,
                1,
                1,
                gr(1),
                (1, 1),
                0,
            )),
            Err(GenError::Inconsistent(_))
        ));
        assert!(matches!(
            gen_combined_instance(&spec(
                RelationKind::NInverse,
                DeltaKind::TensorProduct,
                1,
                1,
                gr(0),
                (1, 1),
                0,
            )),
            Err(GenError::Inconsistent(_))
        ));
    }

    #[test]
    fn nsym_instances_pair_unit_scalars() {
        for seed in 0..5u64 {
            let inst = gen_nsym_instance(3, 1, (2, 2), None, seed).unwrap();
            let GeneratedOperands::AdjointPair { t1, t2 } = &inst.operands else { panic!() };
            let w = split_nsym(t1, t2, inst.n, &SolverOptions::default()).unwrap();
            assert_eq!(w.l + w.m, inst.n + 1);
            match &w.lambda {
                WitnessScalar::Exact(v) => assert!(v.norm_sqr().is_one()),
                _ => panic!("expected an exact unit scalar"),
            }
        }

        // A requested scalar must be representable: (-7 + 24i)/25 is the
        // square of (3 + 4i)/5, while i has no Gaussian-rational root.
        let lam = GaussRat::new(
            BigRational::new(BigInt::from(-7), BigInt::from(25)),
            BigRational::new(BigInt::from(24), BigInt::from(25)),
        );
        let inst = gen_nsym_instance(1, 1, (2, 2), Some(&lam), 3).unwrap();
        match &inst.witness.lambda {
            WitnessScalar::Exact(v) => assert_eq!(*v, lam),
            _ => panic!(),
        }
        assert!(matches!(
            gen_nsym_instance(1, 1, (1, 1), Some(&GaussRat::i()), 0),
            Err(GenError::UnrepresentableLambda(_))
        ));
        assert!(gen_nsym_instance(1, 1, (1, 1), Some(&gr(-1)), 0).is_ok());
        assert!(matches!(
            gen_nsym_instance(2, 1, (2, 1), None, 0),
            Err(GenError::EvenOrder)
        ));
    }

    #[test]
    fn nsym2_instances_have_imaginary_shifts() {
        let inst = gen_nsym2_instance(1, 3, (2, 2), Some(&GaussRat::i()), 6).unwrap();
        let GeneratedOperands::AdjointPair { t1, t2 } = &inst.operands else { panic!() };
        let w = split_nsym2(t1, t2, inst.n, &SolverOptions::default()).unwrap();
        assert_eq!(w.l + w.m, inst.n + 1);
        match &w.lambda {
            WitnessScalar::Exact(v) => assert!(v.re().is_zero()),
            _ => panic!("expected an exact witness"),
        }

        assert!(matches!(
            gen_nsym2_instance(1, 1, (1, 1), Some(&gr(1)), 0),
            Err(GenError::Inconsistent(_))
        ));

        for seed in 0..4u64 {
            let inst = gen_nsym2_instance(3, 3, (2, 2), None, seed).unwrap();
            let GeneratedOperands::AdjointPair { t1, t2 } = &inst.operands else { panic!() };
            assert!(split_nsym2(t1, t2, inst.n, &SolverOptions::default()).is_ok());
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let s = spec(
            RelationKind::Helton,
            DeltaKind::TensorSum,
            2,
            2,
            gr(1),
            (2, 2),
            42,
        );
        let a = gen_combined_instance(&s).unwrap();
        let b = gen_combined_instance(&s).unwrap();
        match (&a.operands, &b.operands) {
            (
                GeneratedOperands::Four { s1: a1, .. },
                GeneratedOperands::Four { s1: b1, .. },
            ) => assert_eq!(a1, b1),
            _ => panic!(),
        }
    }
}
