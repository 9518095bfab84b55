//! Face counts `f_d(r)` in the binomial basis, f- and h-vectors, cyclic comparisons.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::faces::{KostkaPolytope, Limits};

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn d_min(d: usize) -> usize {
    (d + 3) / 2
}

/// `f_d(r) = sum_k alpha_k C(r, k)` for `d_min <= k <= 3d + 3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialPolynomial {
    pub d: usize,
    /// JSON object keys are decimal strings
    pub alpha: BTreeMap<usize, u64>,
}

impl BinomialPolynomial {
    pub fn d_min(&self) -> usize {
        d_min(self.d)
    }

    pub fn evaluate(&self, r: u64) -> BigUint {
        self.alpha.iter().map(|(&k, &a)| binomial(r, k as u64) * a).sum()
    }

    /// The leading coefficient `alpha_{3d+3}`, if the fit reached that far.
    pub fn leading(&self) -> Option<u64> {
        self.alpha.get(&(3 * self.d + 3)).copied()
    }
}

pub fn evaluate(p: &BinomialPolynomial, r: u64) -> BigUint {
    p.evaluate(r)
}

/// Fits the binomial-basis coefficients of `f_d` from `values[k] = f_d(k)`,
/// which must cover `d_min..=3d+3`. Any further values are checked against the fit.
pub fn fit_face_polynomial(d: usize, values: &BTreeMap<usize, u64>) -> Result<BinomialPolynomial> {
    let lo = d_min(d);
    let hi = 3 * d + 3;
    let mut alpha: BTreeMap<usize, u64> = BTreeMap::new();
    for k in lo..=hi {
        let fk = values.get(&k).ok_or_else(|| {
            Error::InvalidArgument(format!("missing value f_{d}({k}); need r = {lo}..={hi}"))
        })?;
        let mut a = BigInt::from(*fk);
        for (&j, &aj) in &alpha {
            a -= BigInt::from(binomial(k as u64, j as u64) * aj);
        }
        let a = a
            .to_u64()
            .ok_or_else(|| Error::BadCoefficient { k, value: a.to_string() })?;
        alpha.insert(k, a);
    }
    let p = BinomialPolynomial { d, alpha };
    for (&r, &v) in values {
        if p.evaluate(r as u64) != BigUint::from(v) {
            return Err(Error::InvalidArgument(format!(
                "f_{d}({r}) = {v} is inconsistent with the fit from r = {lo}..={hi}"
            )));
        }
    }
    Ok(p)
}

/// `f_d(k)` for `k = d_min..=3d+3`, by enumeration.
pub fn enumerated_values(d: usize, limits: &Limits) -> Result<BTreeMap<usize, u64>> {
    (d_min(d)..=3 * d + 3)
        .map(|k| {
            let counts = KostkaPolytope::new(k)?.face_counts(d, limits)?;
            Ok((k, counts[d]))
        })
        .collect()
}

pub fn fit_from_enumeration(d: usize, limits: &Limits) -> Result<BinomialPolynomial> {
    fit_face_polynomial(d, &enumerated_values(d, limits)?)
}

/// Number of `d`-faces of the smallest Kostka polytope that has any.
pub fn alpha_dmin_expected(d: usize) -> u64 {
    match d {
        1 => 3,
        _ if d % 2 == 1 => 3 * d as u64 - 2,
        _ => 1,
    }
}

/// `(f_{-1}, f_0, ..., f_{2r-3})` of `P_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector {
    pub r: usize,
    pub f_start: i64,
    pub f: Vec<u64>,
}

/// `(h_0, ..., h_{2r-2})` of `P_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HVector {
    pub r: usize,
    pub h_start: i64,
    pub h: Vec<i64>,
}

pub fn f_vector(r: usize, limits: &Limits) -> Result<FVector> {
    let top = 2 * r - 2;
    let mut f = vec![1];
    if top > 0 {
        f.extend(KostkaPolytope::new(r)?.face_counts(top - 1, limits)?);
    }
    Ok(FVector { r, f_start: -1, f })
}

/// `h_k = sum_{i=0..k} (-1)^(k-i) C(D-i, k-i) f_{i-1}` with `D = 2r - 2`.
pub fn h_from_f(fv: &FVector) -> Result<HVector> {
    let dim = 2 * fv.r as u64 - 2;
    if fv.f.len() as u64 != dim + 1 {
        return Err(Error::InvalidArgument(format!(
            "f-vector of P_{} needs {} entries, got {}",
            fv.r,
            dim + 1,
            fv.f.len()
        )));
    }
    let h = (0..=dim)
        .map(|k| {
            let mut acc = BigInt::zero();
            for i in 0..=k {
                let term = BigInt::from(binomial(dim - i, k - i) * fv.f[i as usize]);
                if (k - i) % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc.to_i64().ok_or(Error::Overflow("h-vector entry"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HVector { r: fv.r, h_start: 0, h })
}

pub fn h_vector(r: usize, limits: &Limits) -> Result<HVector> {
    h_from_f(&f_vector(r, limits)?)
}

/// Outcome of testing `h_k = 1` for `r - 1 <= k <= 2r - 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HConjectureCheck {
    pub r: usize,
    pub holds: bool,
    /// first offending `k`
    pub witness: Option<usize>,
    pub h: Vec<i64>,
}

pub fn check_h_conjecture_for(hv: &HVector) -> HConjectureCheck {
    let witness = (hv.r - 1..hv.h.len()).find(|&k| hv.h[k] != 1);
    HConjectureCheck { r: hv.r, holds: witness.is_none(), witness, h: hv.h.clone() }
}

pub fn check_h_conjecture(r: usize, limits: &Limits) -> Result<HConjectureCheck> {
    Ok(check_h_conjecture_for(&h_vector(r, limits)?))
}

/// Number of `d`-faces of the cyclic `m`-polytope with `n` vertices, `C(n, d+1)`.
pub fn cyclic_face_count(n: u64, m: usize, d: usize) -> Result<BigUint> {
    if d > m / 2 {
        return Err(Error::InvalidArgument(format!("need d <= floor(m/2), got d = {d}, m = {m}")));
    }
    Ok(binomial(n, d as u64 + 1))
}

/// `6^(d+1) (d+1)! / (3d+3)!`.
pub fn limit_ratio(d: usize) -> BigRational {
    let fact = |n: u64| (1..=n).fold(BigUint::one(), |a, i| a * i);
    let d = d as u64;
    let num = BigUint::from(6u32).pow(d as u32 + 1) * fact(d + 1);
    BigRational::new(BigInt::from(num), BigInt::from(fact(3 * d + 3)))
}

/// Number of vertices of `P_r`.
pub fn vertex_count_big(r: u64) -> BigUint {
    binomial(r, 3) + binomial(r, 2) + binomial(r, 1)
}

/// `f_d(r) / C(n_r, d+1)` with `n_r` the vertex count of `P_r`.
pub fn cyclic_ratio(p: &BinomialPolynomial, r: u64) -> Result<BigRational> {
    let m = 2 * r as usize - 2;
    let c = cyclic_face_count(vertex_count_big(r).to_u64().ok_or(Error::Overflow("n_r"))?, m, p.d)?;
    Ok(BigRational::new(BigInt::from(p.evaluate(r)), BigInt::from(c)))
}
