//! Density of pairs `(mu1, lambda1)` meeting one of the three initial-pair
//! conditions: truncated Euler products with rigorous bounds, and exact finite counts.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::gcd;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest prime bound accepted by [`alpha`].
pub const MAX_B: u64 = 100_000_000;
/// Up to this bound the products are kept as exact rationals.
pub const EXACT_LIMIT: u64 = 100_000;
const FIXED_BITS: u64 = 192;

/// Primes `<= n` by an odd-only bit sieve.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    // bit i stands for 2i + 1
    let len = (n as usize).div_ceil(2);
    let mut composite = vec![0u64; len.div_ceil(64)];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= n as usize {
        if composite[i / 64] >> (i % 64) & 1 == 0 {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < len {
                composite[j / 64] |= 1 << (j % 64);
                j += p;
            }
        }
        i += 1;
    }
    let mut out = vec![2];
    out.extend((1..len).filter(|&i| composite[i / 64] >> (i % 64) & 1 == 0).map(|i| 2 * i as u64 + 1));
    out
}

/// A closed interval with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lower: BigRational,
    pub upper: BigRational,
}

impl Interval {
    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    /// Containment of a decimal literal such as `"0.937293"`.
    pub fn contains_decimal(&self, x: &str) -> bool {
        self.contains(&parse_decimal(x).expect("decimal literal"))
    }

    pub fn is_within(&self, other: &Interval) -> bool {
        other.lower <= self.lower && self.upper <= other.upper
    }

    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lower + &self.upper) / BigInt::from(2)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Interval", 3)?;
        st.serialize_field("lower", &self.lower.to_string())?;
        st.serialize_field("upper", &self.upper.to_string())?;
        st.serialize_field("decimal", &to_decimal(&self.midpoint(), 12))?;
        st.end()
    }
}

/// `x` truncated to `digits` decimals.
pub fn to_decimal(x: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (x.abs() * &scale).to_integer();
    let int = &scaled / &scale;
    let frac = (&scaled % &scale).to_string();
    let sign = if x.is_negative() { "-" } else { "" };
    format!("{sign}{int}.{}{frac}", "0".repeat(digits as usize - frac.len()))
}

pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("not a decimal number: {s:?}"));
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    Ok(BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32)))
}

fn product_tree(xs: &[u64]) -> BigUint {
    match xs.len() {
        0 => BigUint::one(),
        1 => BigUint::from(xs[0]),
        n => product_tree(&xs[..n / 2]) * product_tree(&xs[n / 2..]),
    }
}

/// Bounds on `prod over all primes p of (1 - k/p^2)` from the primes `p <= b`.
///
/// The truncated product is the upper end; the lower end multiplies it by
/// `1 - k/b`, which bounds the omitted factors because `sum_{p>b} 1/p^2 < 1/b`.
pub fn alpha(k: u32, b: u64) -> Result<Interval> {
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidArgument(format!("k must be 1, 2 or 3, got {k}")));
    }
    if !(2..=MAX_B).contains(&b) {
        return Err(Error::InvalidArgument(format!("B must be in 2..={MAX_B}, got {b}")));
    }
    let primes = primes_up_to(b);
    let k = k as u64;
    let upper = if b <= EXACT_LIMIT {
        let num: Vec<u64> = primes.iter().map(|p| p * p - k).collect();
        let den: Vec<u64> = primes.iter().map(|p| p * p).collect();
        BigRational::new(product_tree(&num).into(), product_tree(&den).into())
    } else {
        let mut hi = BigUint::one() << FIXED_BITS;
        for &p in &primes {
            let sq = p * p;
            hi = (hi * (sq - k) + (sq - 1)) / sq;
        }
        BigRational::new(hi.into(), (BigUint::one() << FIXED_BITS).into())
    };
    let lower = if b > k {
        let exact = &upper * BigRational::new(BigInt::from(b - k), BigInt::from(b));
        if b <= EXACT_LIMIT {
            exact
        } else {
            // round down onto the fixed grid to keep the endpoint short
            let scale = BigInt::one() << FIXED_BITS;
            BigRational::new((exact * &scale).floor().to_integer(), scale)
        }
    } else {
        BigRational::zero()
    };
    Ok(Interval { lower, upper })
}

/// Bounds on `5/2 alpha_1 - 2 alpha_2 + 1/2 alpha_3`.
pub fn initial_pair_probability(b: u64) -> Result<Interval> {
    let (a1, a2, a3) = (alpha(1, b)?, alpha(2, b)?, alpha(3, b)?);
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    Ok(Interval {
        lower: q(5, 2) * &a1.lower - q(2, 1) * &a2.upper + q(1, 2) * &a3.lower,
        upper: q(5, 2) * &a1.upper - q(2, 1) * &a2.lower + q(1, 2) * &a3.upper,
    })
}

/// A nonempty subset of the conditions `{1, 2, 3}` on a pair `m < n`:
/// 1. `gcd(m, n) = 1`;
/// 2. `gcd(m, n+1) = 1`;
/// 3. `gcd(m+1, n+1) = 1` and `2m >= n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConditionSet(u8);

impl ConditionSet {
    pub fn new(conditions: &[u8]) -> Result<Self> {
        let mut bits = 0;
        for &c in conditions {
            if !(1..=3).contains(&c) {
                return Err(Error::InvalidArgument(format!("conditions are 1, 2, 3; got {c}")));
            }
            bits |= 1 << (c - 1);
        }
        if bits == 0 {
            return Err(Error::InvalidArgument("empty condition set".into()));
        }
        Ok(ConditionSet(bits))
    }

    /// All seven nonempty subsets.
    pub fn all() -> impl Iterator<Item = ConditionSet> {
        (1..8u8).map(ConditionSet)
    }

    pub fn len(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, c: u8) -> bool {
        (1..=3).contains(&c) && self.0 >> (c - 1) & 1 == 1
    }

    /// All conditions in the set hold for `(m, n)`.
    pub fn holds(&self, m: u64, n: u64) -> bool {
        self.0 & !condition_mask(m, n) == 0
    }
}

/// Bit `i - 1` set when condition `i` holds.
pub fn condition_mask(m: u64, n: u64) -> u8 {
    let c1 = gcd(m, n) == 1;
    let c2 = gcd(m, n + 1) == 1;
    let c3 = gcd(m + 1, n + 1) == 1 && 2 * m >= n;
    c1 as u8 | (c2 as u8) << 1 | (c3 as u8) << 2
}

impl fmt::Debug for ConditionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries((1..=3).filter(|&c| self.contains(c))).finish()
    }
}

impl fmt::Display for ConditionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (1..=3).filter(|&c| self.contains(c)).map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for ConditionSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let items: std::result::Result<Vec<u8>, _> =
            s.split(',').map(|t| t.trim().parse::<u8>()).collect();
        ConditionSet::new(&items.map_err(|_| Error::InvalidArgument(format!("bad condition set {s:?}")))?)
    }
}

fn pair_count(n: u64) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need N >= 2, got {n}")));
    }
    Ok(BigInt::from(n) * BigInt::from(n - 1) / 2)
}

/// Number of pairs `1 <= m < n <= big_n` for each condition mask.
fn mask_histogram(big_n: u64) -> [u64; 8] {
    (2..=big_n)
        .into_par_iter()
        .map(|n| {
            let mut h = [0u64; 8];
            for m in 1..n {
                h[condition_mask(m, n) as usize] += 1;
            }
            h
        })
        .reduce(|| [0; 8], |mut a, b| {
            for i in 0..8 {
                a[i] += b[i];
            }
            a
        })
}

/// Proportion of pairs `1 <= m < n <= big_n` satisfying every condition in `set`.
pub fn empirical_density(big_n: u64, set: ConditionSet) -> Result<BigRational> {
    let total = pair_count(big_n)?;
    let hits: u64 = (2..=big_n)
        .into_par_iter()
        .map(|n| (1..n).filter(|&m| set.holds(m, n)).count() as u64)
        .sum();
    Ok(BigRational::new(hits.into(), total))
}

/// `sum over nonempty I of (-1)^(|I|+1) d(N, I)`.
pub fn inclusion_exclusion_estimate(big_n: u64) -> Result<BigRational> {
    let total = pair_count(big_n)?;
    let h = mask_histogram(big_n);
    let mut acc = BigInt::zero();
    for set in ConditionSet::all() {
        let hits: u64 = (0..8).filter(|&m| set.0 & !(m as u8) == 0).map(|m| h[m]).sum();
        if set.len() % 2 == 1 {
            acc += hits;
        } else {
            acc -= hits;
        }
    }
    Ok(BigRational::new(acc, total))
}

/// Proportion of pairs satisfying at least one condition, counted directly.
pub fn union_density(big_n: u64) -> Result<BigRational> {
    let total = pair_count(big_n)?;
    let hits: u64 = (2..=big_n)
        .into_par_iter()
        .map(|n| (1..n).filter(|&m| condition_mask(m, n) != 0).count() as u64)
        .sum();
    Ok(BigRational::new(hits.into(), total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::unresolved_pairs;
    use num_traits::ToPrimitive;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sieve() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes_up_to(1).is_empty());
        assert_eq!(primes_up_to(2), vec![2]);
        let counts = [4, 25, 168, 1229, 9592, 78498, 664579];
        for (k, &c) in counts.iter().enumerate() {
            assert_eq!(primes_up_to(10u64.pow(k as u32 + 1)).len(), c);
        }
        let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        let ps = primes_up_to(2000);
        assert_eq!(ps, (0..=2000).filter(|&n| trial(n)).collect::<Vec<_>>());
    }

    #[test]
    fn small_bounds() {
        for k in 1..=3 {
            let a = alpha(k, 2).unwrap();
            assert_eq!(a.upper, q(4 - k as i64, 4));
            assert!(a.lower <= a.upper);
        }
        assert_eq!(alpha(1, 3).unwrap().upper, q(2, 3));
        assert_eq!(alpha(1, 3).unwrap().lower, q(4, 9));
        assert!(alpha(1, 1).is_err());
        assert!(alpha(4, 10).is_err());
        assert!(alpha(1, MAX_B + 1).is_err());
    }

    #[test]
    fn nested_intervals() {
        for k in 1..=3 {
            let mut prev = alpha(k, 2).unwrap();
            for b in [3, 10, 100, 1000, 10_000, EXACT_LIMIT, 200_000] {
                let cur = alpha(k, b).unwrap();
                assert!(cur.is_within(&prev), "k={k} b={b}");
                prev = cur;
            }
        }
    }

    #[test]
    fn known_constants() {
        let a1 = alpha(1, 1_000_000).unwrap();
        assert!(a1.contains_decimal("0.6079271018"));
        let six_over_pi2 = 6.0 / std::f64::consts::PI.powi(2);
        assert!((a1.midpoint().to_f64().unwrap() - six_over_pi2).abs() < 1e-5);
        assert!(alpha(2, 1_000_000).unwrap().contains_decimal("0.3226340"));
        let p = initial_pair_probability(1_000_000).unwrap();
        assert!(p.contains_decimal("0.937293"));
        assert!(p.width() < q(1, 10_000));
        let exact = initial_pair_probability(EXACT_LIMIT).unwrap();
        assert!(exact.contains_decimal("0.93729"));
    }

    #[test]
    fn interval_json() {
        let a = alpha(1, 3).unwrap();
        let v = serde_json::to_value(&a).unwrap();
        assert_eq!(v["lower"], "4/9");
        assert_eq!(v["upper"], "2/3");
        assert_eq!(v["decimal"], "0.555555555555");
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal(&q(1, 8), 4), "0.1250");
        assert_eq!(to_decimal(&q(-3, 2), 2), "-1.50");
        assert_eq!(parse_decimal("0.25").unwrap(), q(1, 4));
        assert!(parse_decimal("x").is_err());
    }

    #[test]
    fn condition_sets() {
        let s: ConditionSet = "1,3".parse().unwrap();
        assert!(s.contains(1) && !s.contains(2) && s.contains(3));
        assert_eq!(s.to_string(), "1,3");
        assert!("".parse::<ConditionSet>().is_err());
        assert!("4".parse::<ConditionSet>().is_err());
        assert_eq!(ConditionSet::all().count(), 7);
    }

    #[test]
    fn densities() {
        let one: ConditionSet = "1".parse().unwrap();
        assert_eq!(empirical_density(3, one).unwrap(), BigRational::one());
        assert_eq!(inclusion_exclusion_estimate(2).unwrap(), BigRational::one());
        assert_eq!(inclusion_exclusion_estimate(30).unwrap(), q(435 - 12, 435));
        assert!(empirical_density(1, one).is_err());
        for n in 2..=200 {
            let ie = inclusion_exclusion_estimate(n).unwrap();
            assert_eq!(ie, union_density(n).unwrap());
            let failing = unresolved_pairs(n).len() as i64;
            let total = (n * (n - 1) / 2) as i64;
            assert_eq!(ie, q(total - failing, total));
        }
        // inclusion-exclusion from the single-set densities
        let n = 150;
        let mut acc = BigRational::zero();
        for s in ConditionSet::all() {
            let d = empirical_density(n, s).unwrap();
            if s.len() % 2 == 1 {
                acc += d;
            } else {
                acc -= d;
            }
        }
        assert_eq!(acc, inclusion_exclusion_estimate(n).unwrap());
    }

    #[test]
    fn densities_approach_constants() {
        let d1 = empirical_density(1000, "1".parse().unwrap()).unwrap().to_f64().unwrap();
        assert!((d1 - 6.0 / std::f64::consts::PI.powi(2)).abs() < 0.01);
        // d(N, I) tends to alpha_|I|, halved when condition 3 is in I
        for set in ConditionSet::all() {
            let a = alpha(set.len(), 1_000_000).unwrap().midpoint().to_f64().unwrap();
            let limit = if set.contains(3) { a / 2.0 } else { a };
            let d = empirical_density(1000, set).unwrap().to_f64().unwrap();
            assert!((d - limit).abs() < 0.01, "{set}: {d} vs {limit}");
        }
        let ie = inclusion_exclusion_estimate(1000).unwrap().to_f64().unwrap();
        assert!((ie - 0.93729).abs() < 0.01);
    }
}
