//! Partitions, dominance order, integral points of the Kostka cone and
//! Kostka numbers.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer partition stored without trailing zeros.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    /// Builds a partition, dropping trailing zeros. Fails if the parts increase anywhere.
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotPartition(parts));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    pub(crate) fn from_sorted(mut parts: Vec<u64>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    /// `count` copies of `value`.
    pub fn rectangle(value: u64, count: usize) -> Self {
        Self::from_sorted(vec![value; count])
    }

    /// Nonzero parts.
    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The size `n` of the partition.
    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// The `i`-th part (0-based), zero past the end.
    pub fn part(&self, i: usize) -> u64 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Parts zero-padded (or truncated) to exactly `len` entries.
    pub fn padded(&self, len: usize) -> Vec<u64> {
        (0..len).map(|i| self.part(i)).collect()
    }

    /// Number of distinct nonzero part sizes.
    pub fn distinct_part_sizes(&self) -> usize {
        let mut n = 0;
        for (i, &p) in self.parts.iter().enumerate() {
            if i == 0 || self.parts[i - 1] != p {
                n += 1;
            }
        }
        n
    }

    /// All nonzero parts equal (the empty partition counts as a rectangle).
    pub fn is_rectangle(&self) -> bool {
        self.distinct_part_sizes() <= 1
    }

    /// Column heights of the Young diagram.
    pub fn conjugate(&self) -> Partition {
        let width = self.part(0) as usize;
        let cols = (0..width)
            .map(|j| self.parts.iter().take_while(|&&p| p as usize > j).count() as u64)
            .collect();
        Partition { parts: cols }
    }

    /// Prefix sums `p_1, p_1 + p_2, ...` over `len` entries.
    pub fn prefix_sums(&self, len: usize) -> Vec<u64> {
        let mut acc = 0;
        (0..len)
            .map(|i| {
                acc += self.part(i);
                acc
            })
            .collect()
    }

    /// Every partition of `n` with at most `max_len` parts, each at most `max_part`,
    /// in reverse lexicographic order (largest first).
    pub fn all(n: u64, max_len: usize, max_part: u64) -> Vec<Partition> {
        fn rec(rem: u64, max_part: u64, slots: usize, cur: &mut Vec<u64>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            if slots == 0 {
                return;
            }
            let hi = rem.min(max_part);
            // the remaining slots must be able to absorb `rem`
            for p in (1..=hi).rev() {
                if p * (slots as u64) < rem {
                    break;
                }
                cur.push(p);
                rec(rem - p, p, slots - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, max_part, max_len, &mut Vec::new(), &mut out);
        out
    }
}

impl TryFrom<Vec<u64>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<u64>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u64> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{self}")
    }
}

/// True iff both partitions have the same size and every prefix sum of
/// `lambda` is at least the matching prefix sum of `mu`.
pub fn dominates(lambda: &Partition, mu: &Partition) -> bool {
    if lambda.size() != mu.size() {
        return false;
    }
    let len = lambda.len().max(mu.len());
    lambda
        .prefix_sums(len)
        .iter()
        .zip(mu.prefix_sums(len))
        .all(|(&l, m)| l >= m)
}

/// An integral point `(lambda, mu)` of the Kostka cone in ambient dimension `2r`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ConePointRepr", into = "ConePointRepr")]
pub struct ConePoint {
    r: usize,
    lambda: Partition,
    mu: Partition,
}

#[derive(Serialize, Deserialize)]
struct ConePointRepr {
    r: usize,
    lambda: Vec<u64>,
    mu: Vec<u64>,
}

impl TryFrom<ConePointRepr> for ConePoint {
    type Error = Error;
    fn try_from(c: ConePointRepr) -> Result<Self> {
        ConePoint::new(c.r, Partition::new(c.lambda)?, Partition::new(c.mu)?)
    }
}

impl From<ConePoint> for ConePointRepr {
    fn from(p: ConePoint) -> Self {
        ConePointRepr {
            r: p.r,
            lambda: p.lambda.padded(p.r),
            mu: p.mu.padded(p.r),
        }
    }
}

impl ConePoint {
    pub fn new(r: usize, lambda: Partition, mu: Partition) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidConePoint("ambient r must be positive".into()));
        }
        if lambda.len() > r || mu.len() > r {
            return Err(Error::InvalidConePoint(format!(
                "{lambda} or {mu} has more than {r} parts"
            )));
        }
        if lambda.size() != mu.size() {
            return Err(Error::InvalidConePoint(format!(
                "sizes differ: |{lambda}| = {}, |{mu}| = {}",
                lambda.size(),
                mu.size()
            )));
        }
        if !dominates(&lambda, &mu) {
            return Err(Error::InvalidConePoint(format!("{lambda} does not dominate {mu}")));
        }
        Ok(ConePoint { r, lambda, mu })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn mu(&self) -> &Partition {
        &self.mu
    }

    pub fn is_zero(&self) -> bool {
        self.lambda.is_empty()
    }

    /// Coordinates `(lambda_1..lambda_r, mu_1..mu_r)`.
    pub fn coordinates(&self) -> Vec<u64> {
        let mut v = self.lambda.padded(self.r);
        v.extend(self.mu.padded(self.r));
        v
    }

    /// The same point viewed in the larger cone `K_{r2}` (zero padding).
    pub fn embed(&self, r2: usize) -> Result<ConePoint> {
        if r2 < self.r {
            return Err(Error::InvalidArgument(format!(
                "cannot embed K_{} into K_{r2}",
                self.r
            )));
        }
        Ok(ConePoint { r: r2, ..self.clone() })
    }

    /// Divides both partitions by the gcd of all entries.
    pub fn primitive(&self) -> ConePoint {
        let g = self
            .lambda
            .parts()
            .iter()
            .chain(self.mu.parts())
            .fold(0u64, |g, &x| num_integer::gcd(g, x));
        if g <= 1 {
            return self.clone();
        }
        let div = |p: &Partition| Partition::from_sorted(p.parts().iter().map(|x| x / g).collect());
        ConePoint { r: self.r, lambda: div(&self.lambda), mu: div(&self.mu) }
    }
}

impl fmt::Display for ConePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}) in K_{}", self.lambda, self.mu, self.r)
    }
}

impl fmt::Debug for ConePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Memoized Kostka-number counter with a cap on the number of memo states.
pub struct KostkaCounter {
    max_states: usize,
    memo: HashMap<(Vec<u64>, usize), BigUint>,
}

impl Default for KostkaCounter {
    fn default() -> Self {
        Self::new(10_000_000)
    }
}

impl KostkaCounter {
    pub fn new(max_states: usize) -> Self {
        KostkaCounter { max_states, memo: HashMap::new() }
    }

    /// Number of semistandard tableaux of shape `lambda` and content `mu`.
    ///
    /// The largest entry occupies a horizontal strip at the end of each row;
    /// peeling it off leaves a tableau with one fewer distinct entry.
    pub fn count(&mut self, lambda: &Partition, mu: &Partition) -> Result<BigUint> {
        if lambda.size() != mu.size() {
            return Ok(BigUint::zero());
        }
        self.peel(lambda.parts().to_vec(), mu.parts(), mu.len())
    }

    fn peel(&mut self, shape: Vec<u64>, content: &[u64], k: usize) -> Result<BigUint> {
        if k == 0 {
            return Ok(if shape.is_empty() { BigUint::one() } else { BigUint::zero() });
        }
        // entries 1..k must fit in columns of height at most k
        if shape.len() > k {
            return Ok(BigUint::zero());
        }
        let key = (shape, k);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        if self.memo.len() >= self.max_states {
            return Err(Error::ResourceCap {
                what: "Kostka recursion states",
                limit: self.max_states as u64,
            });
        }
        let shape = key.0.clone();
        let strip = content[k - 1];
        let mut total = BigUint::zero();
        let mut inner = shape.clone();
        self.strips(&shape, 0, strip, &mut inner, content, k, &mut total)?;
        self.memo.insert(key, total.clone());
        Ok(total)
    }

    /// Enumerates inner shapes `nu` with `shape / nu` a horizontal strip of `remaining` boxes.
    #[allow(clippy::too_many_arguments)]
    fn strips(
        &mut self,
        shape: &[u64],
        row: usize,
        remaining: u64,
        inner: &mut Vec<u64>,
        content: &[u64],
        k: usize,
        total: &mut BigUint,
    ) -> Result<()> {
        if row == shape.len() {
            if remaining == 0 {
                let nu = Partition::from_sorted(inner.clone());
                *total += self.peel(nu.parts, content, k - 1)?;
            }
            return Ok(());
        }
        let below = shape.get(row + 1).copied().unwrap_or(0);
        let max_take = (shape[row] - below).min(remaining);
        for take in 0..=max_take {
            inner[row] = shape[row] - take;
            self.strips(shape, row + 1, remaining - take, inner, content, k, total)?;
        }
        inner[row] = shape[row];
        Ok(())
    }
}

/// Kostka number with the default state cap.
pub fn kostka_number(lambda: &Partition, mu: &Partition) -> Result<BigUint> {
    KostkaCounter::default().count(lambda, mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u64]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    /// Brute force: fill the diagram box by box, row-major, checking rows weakly
    /// increase and columns strictly increase.
    fn brute_kostka(lambda: &Partition, mu: &Partition) -> u64 {
        let cells: Vec<(usize, usize)> = lambda
            .parts()
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (0..len as usize).map(move |j| (i, j)))
            .collect();
        let k = mu.len();
        let mut grid = vec![vec![0usize; lambda.part(0) as usize]; lambda.len()];
        let mut left: Vec<u64> = mu.parts().to_vec();
        fn go(
            idx: usize,
            cells: &[(usize, usize)],
            grid: &mut Vec<Vec<usize>>,
            left: &mut Vec<u64>,
            k: usize,
        ) -> u64 {
            if idx == cells.len() {
                return 1;
            }
            let (i, j) = cells[idx];
            let mut n = 0;
            for v in 1..=k {
                if left[v - 1] == 0 {
                    continue;
                }
                if j > 0 && grid[i][j - 1] > v {
                    continue;
                }
                if i > 0 && grid[i - 1][j] >= v {
                    continue;
                }
                grid[i][j] = v;
                left[v - 1] -= 1;
                n += go(idx + 1, cells, grid, left, k);
                left[v - 1] += 1;
            }
            n
        }
        if lambda.size() != mu.size() {
            return 0;
        }
        go(0, &cells, &mut grid, &mut left, k)
    }

    #[test]
    fn rejects_increasing_parts() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(p(&[3, 1, 0, 0]).parts(), &[3, 1]);
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&p(&[2, 1, 1]), &p(&[2, 1, 1])));
        assert!(dominates(&p(&[4, 2]), &p(&[2, 2, 1, 1])));
        assert!(!dominates(&p(&[1, 1]), &p(&[2])));
        assert!(!dominates(&p(&[3]), &p(&[1, 1])));
    }

    #[test]
    fn kostka_examples() {
        assert_eq!(kostka_number(&p(&[4, 2]), &p(&[2, 2, 1, 1])).unwrap(), 4u32.into());
        assert_eq!(kostka_number(&p(&[2, 1]), &p(&[1, 1, 1])).unwrap(), 2u32.into());
        assert_eq!(brute_kostka(&p(&[2, 1]), &p(&[1, 1, 1])), 2);
        for lam in [p(&[3, 2, 1]), p(&[5]), p(&[2, 2, 2, 1])] {
            assert_eq!(kostka_number(&lam, &lam).unwrap(), 1u32.into());
        }
    }

    #[test]
    fn kostka_matches_brute_force_and_dominance() {
        for n in 0..=8 {
            let parts = Partition::all(n, n as usize, n);
            for lam in &parts {
                for mu in &parts {
                    let k = kostka_number(lam, mu).unwrap();
                    if n <= 6 {
                        assert_eq!(k, brute_kostka(lam, mu).into(), "{lam} {mu}");
                    }
                    assert_eq!(!k.is_zero(), dominates(lam, mu), "{lam} {mu}");
                }
            }
        }
    }

    #[test]
    fn kostka_state_cap() {
        let mut c = KostkaCounter::new(2);
        let err = c.count(&p(&[4, 2]), &p(&[2, 2, 1, 1])).unwrap_err();
        assert!(err.is_resource_cap());
    }

    #[test]
    fn dominance_is_partial_order() {
        for n in 0..=8 {
            let parts = Partition::all(n, n as usize, n);
            for a in &parts {
                assert!(dominates(a, a));
                for b in &parts {
                    if a != b && dominates(a, b) {
                        assert!(!dominates(b, a));
                    }
                    for c in &parts {
                        if dominates(a, b) && dominates(b, c) {
                            assert!(dominates(a, c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn partition_counts() {
        // p(8) = 22, partitions of 8 into at most 3 parts = 10
        assert_eq!(Partition::all(8, 8, 8).len(), 22);
        assert_eq!(Partition::all(8, 3, 8).len(), 10);
        assert_eq!(Partition::all(0, 3, 3), vec![Partition::default()]);
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(p(&[4, 2]).conjugate(), p(&[2, 2, 1, 1]));
        assert_eq!(p(&[3, 3, 3]).conjugate(), p(&[3, 3, 3]));
        assert_eq!(p(&[]).conjugate(), p(&[]));
        for n in 0..=8 {
            for q in Partition::all(n, n as usize, n) {
                assert_eq!(q.conjugate().conjugate(), q);
                assert_eq!(q.conjugate().size(), n);
            }
        }
    }

    #[test]
    fn cone_point_validation_and_embedding() {
        let pt = ConePoint::new(2, p(&[2]), p(&[1, 1])).unwrap();
        let e = pt.embed(4).unwrap();
        assert_eq!(e.coordinates(), vec![2, 0, 0, 0, 1, 1, 0, 0]);
        assert_eq!(pt.embed(2).unwrap(), pt);
        assert!(pt.embed(1).is_err());
        assert!(ConePoint::new(2, p(&[1, 1]), p(&[2])).is_err());
        assert!(ConePoint::new(1, p(&[1, 1]), p(&[1, 1])).is_err());
    }

    #[test]
    fn cone_point_json() {
        let pt = ConePoint::new(4, p(&[2]), p(&[1, 1])).unwrap();
        let s = serde_json::to_string(&pt).unwrap();
        assert_eq!(s, r#"{"r":4,"lambda":[2,0,0,0],"mu":[1,1,0,0]}"#);
        let back: ConePoint = serde_json::from_str(&s).unwrap();
        assert_eq!(back, pt);
        assert!(serde_json::from_str::<ConePoint>(r#"{"r":2,"lambda":[1,2],"mu":[3]}"#).is_err());
        assert_eq!(serde_json::to_string(&p(&[3, 1])).unwrap(), "[3,1]");
    }
}
