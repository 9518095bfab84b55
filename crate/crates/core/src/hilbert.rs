//! Hilbert basis of the Kostka cone: membership, two construction families,
//! initial pairs and a bounded search for `r`-initial pairs.

use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use num_integer::gcd;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::faces::cone_face_dimension;
use crate::partition::{ConePoint, Partition};

/// Largest `|lambda|` accepted by [`decompose`].
pub const DEFAULT_DECOMPOSE_BOUND: u64 = 20;

/// Column heights grouped as `(height, multiplicity)`, tallest first.
fn column_groups(p: &Partition) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = Vec::new();
    for &h in p.conjugate().parts() {
        match out.last_mut() {
            Some((g, m)) if *g == h => *m += 1,
            _ => out.push((h, 1)),
        }
    }
    out
}

/// Achievable sub-multiset sums, as a table indexed by sum.
fn subset_sums(groups: &[(u64, u64)], total: u64) -> Vec<bool> {
    let mut reach = vec![false; total as usize + 1];
    reach[0] = true;
    extend_sums(&mut reach, groups);
    reach
}

fn extend_sums(reach: &mut [bool], groups: &[(u64, u64)]) {
    for &(h, m) in groups {
        let h = h as usize;
        for _ in 0..m {
            for s in (h..reach.len()).rev() {
                if reach[s - h] {
                    reach[s] = true;
                }
            }
        }
    }
}

/// True when no proper nonempty set of columns of `lambda` has the same total
/// as a set of columns of `mu`.
///
/// A `true` answer proves irreducibility. A `false` answer is only a
/// candidate split: the matching column sets still have to satisfy dominance,
/// which [`is_hilbert_basis_element`] checks.
pub fn column_sum_test(p: &ConePoint) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("the zero point is not a Hilbert basis candidate".into()));
    }
    let n = p.lambda().size();
    let a = subset_sums(&column_groups(p.lambda()), n);
    let b = subset_sums(&column_groups(p.mu()), n);
    // a match at s gives one at n - s
    Ok(!(1..=n / 2).any(|s| a[s as usize] && b[s as usize]))
}

/// Whether `p` is irreducible, i.e. a Hilbert basis element of its cone.
pub fn is_hilbert_basis_element(p: &ConePoint) -> Result<bool> {
    if column_sum_test(p)? {
        return Ok(true);
    }
    Ok(column_split(p)?.is_none())
}

/// Row lengths of the diagram with the chosen columns.
fn from_columns(groups: &[(u64, u64)], counts: &[u64]) -> Partition {
    let height = groups.iter().zip(counts).filter(|(_, &k)| k > 0).map(|(g, _)| g.0).max();
    let rows = (0..height.unwrap_or(0))
        .map(|i| groups.iter().zip(counts).filter(|(g, _)| g.0 > i).map(|(_, &k)| k).sum())
        .collect();
    Partition::new(rows).expect("rows of a diagram are non-increasing")
}

/// `P(i) = sum over chosen columns of min(height, i)` for `i = 1..=r`: the prefix
/// sums of the row lengths.
fn profile(groups: &[(u64, u64)], counts: &[u64], r: usize) -> Vec<u64> {
    (1..=r as u64)
        .map(|i| groups.iter().zip(counts).map(|(g, &k)| k * g.0.min(i)).sum())
        .collect()
}

/// Mixed-radix enumeration of sub-multisets.
fn for_each_subset<B>(
    groups: &[(u64, u64)],
    mut f: impl FnMut(&[u64]) -> ControlFlow<B>,
) -> Option<B> {
    let mut counts = vec![0u64; groups.len()];
    loop {
        if let ControlFlow::Break(b) = f(&counts) {
            return Some(b);
        }
        let mut i = 0;
        while i < counts.len() && counts[i] == groups[i].1 {
            counts[i] = 0;
            i += 1;
        }
        if i == counts.len() {
            return None;
        }
        counts[i] += 1;
    }
}

/// A splitting `p = q1 + q2` into nonzero cone points, searched over column sets.
pub fn column_split(p: &ConePoint) -> Result<Option<(ConePoint, ConePoint)>> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("the zero point has no splitting".into()));
    }
    let r = p.r();
    let n = p.lambda().size();
    let lg = column_groups(p.lambda());
    let mg = column_groups(p.mu());
    let lam_all = p.lambda().prefix_sums(r);
    let mu_all = p.mu().prefix_sums(r);
    // suffix[j][s]: sum s reachable with groups j..
    let mut suffix = vec![vec![false; n as usize + 1]; lg.len() + 1];
    suffix[lg.len()][0] = true;
    for j in (0..lg.len()).rev() {
        let mut reach = suffix[j + 1].clone();
        extend_sums(&mut reach, &lg[j..j + 1]);
        suffix[j] = reach;
    }

    let found = for_each_subset(&mg, |b| {
        let s: u64 = mg.iter().zip(b).map(|(g, &k)| g.0 * k).sum();
        // complements give the same splits, so s <= n/2 suffices
        if s == 0 || 2 * s > n || !suffix[0][s as usize] {
            return ControlFlow::Continue(());
        }
        let mb = profile(&mg, b, r);
        let mut a = vec![0u64; lg.len()];
        let ok = |a: &[u64]| {
            let la = profile(&lg, a, r);
            (0..r).all(|i| la[i] >= mb[i] && lam_all[i] - la[i] >= mu_all[i] - mb[i])
        };
        if search_columns(&lg, &suffix, 0, s, &mut a, &ok) {
            ControlFlow::Break((a, b.to_vec()))
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(found.map(|(a, b)| {
        let rest = |groups: &[(u64, u64)], c: &[u64]| {
            let comp: Vec<u64> = groups.iter().zip(c).map(|(g, &k)| g.1 - k).collect();
            from_columns(groups, &comp)
        };
        let q1 = ConePoint::new(r, from_columns(&lg, &a), from_columns(&mg, &b));
        let q2 = ConePoint::new(r, rest(&lg, &a), rest(&mg, &b));
        (q1.expect("dominance checked"), q2.expect("dominance checked"))
    }))
}

fn search_columns(
    groups: &[(u64, u64)],
    suffix: &[Vec<bool>],
    j: usize,
    rem: u64,
    a: &mut Vec<u64>,
    ok: &dyn Fn(&[u64]) -> bool,
) -> bool {
    if !suffix[j][rem as usize] {
        return false;
    }
    if j == groups.len() {
        return rem == 0 && ok(a);
    }
    let (h, m) = groups[j];
    for k in (0..=m.min(rem / h)).rev() {
        a[j] = k;
        if search_columns(groups, suffix, j + 1, rem - k * h, a, ok) {
            return true;
        }
    }
    a[j] = 0;
    false
}

/// Sub-partitions `q <= p` (entrywise) whose difference `p - q` is again a
/// partition, largest first in reverse lexicographic order.
fn row_splits(p: &[u64]) -> Vec<Vec<u64>> {
    fn rec(p: &[u64], i: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == p.len() {
            out.push(cur.clone());
            return;
        }
        let (lo, hi) = if i == 0 {
            (0, p[0])
        } else {
            let prev = cur[i - 1];
            (prev.saturating_sub(p[i - 1] - p[i]), prev.min(p[i]))
        };
        for q in (lo..=hi).rev() {
            cur.push(q);
            rec(p, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if !p.is_empty() {
        rec(p, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// Brute-force splitting `p = q1 + q2` into nonzero cone points, trying every
/// entrywise split of both partitions. Refuses `|lambda|` above `bound`.
pub fn decompose_bounded(p: &ConePoint, bound: u64) -> Result<Option<(ConePoint, ConePoint)>> {
    let n = p.lambda().size();
    if n > bound {
        return Err(Error::ResourceCap { what: "decomposition size |lambda|", limit: bound });
    }
    let r = p.r();
    let lam = p.lambda().padded(r);
    let mu = p.mu().padded(r);
    let mu_splits = row_splits(&mu);
    for l1 in row_splits(&lam) {
        let s: u64 = l1.iter().sum();
        if s == 0 || s == n {
            continue;
        }
        for m1 in &mu_splits {
            if m1.iter().sum::<u64>() != s {
                continue;
            }
            let l2: Vec<u64> = lam.iter().zip(&l1).map(|(a, b)| a - b).collect();
            let m2: Vec<u64> = mu.iter().zip(m1).map(|(a, b)| a - b).collect();
            let q1 = ConePoint::new(r, Partition::new(l1.clone())?, Partition::new(m1.clone())?);
            let q2 = ConePoint::new(r, Partition::new(l2)?, Partition::new(m2)?);
            if let (Ok(q1), Ok(q2)) = (q1, q2) {
                return Ok(Some((q1, q2)));
            }
        }
    }
    Ok(None)
}

pub fn decompose(p: &ConePoint) -> Result<Option<(ConePoint, ConePoint)>> {
    decompose_bounded(p, DEFAULT_DECOMPOSE_BOUND)
}

/// Least `z >= lambda1` coprime to `mu1`.
pub fn r_min(lambda1: u64, mu1: u64) -> Result<u64> {
    if mu1 == 0 || lambda1 <= mu1 {
        return Err(Error::InvalidArgument(format!(
            "need lambda1 > mu1 >= 1, got ({lambda1}, {mu1})"
        )));
    }
    Ok((lambda1..).find(|&z| gcd(z, mu1) == 1).expect("some z is coprime"))
}

/// `lambda = lambda1^mu1`, `mu = (mu1^(r-mu1), (mu1-(r-lambda1))^mu1)` with `r = r_min`.
pub fn construct_gcd1(lambda1: u64, mu1: u64) -> Result<(usize, ConePoint)> {
    let r = r_min(lambda1, mu1)?;
    let tail = (mu1 + lambda1).checked_sub(r).ok_or_else(|| {
        Error::InvalidArgument(format!("r = {r} exceeds lambda1 + mu1 for ({lambda1}, {mu1})"))
    })?;
    let lambda = Partition::rectangle(lambda1, mu1 as usize);
    let mut mu = vec![mu1; (r - mu1) as usize];
    mu.extend(std::iter::repeat_n(tail, mu1 as usize));
    let r = r as usize;
    Ok((r, ConePoint::new(r, lambda, Partition::new(mu)?)?))
}

/// The weak hypothesis `gcd(lambda1+1, mu1+1) = 1` and `2 mu1 >= lambda1`.
pub fn gcd2_hypothesis(lambda1: u64, mu1: u64) -> bool {
    mu1 >= 1 && lambda1 >= mu1 && gcd(lambda1 + 1, mu1 + 1) == 1 && 2 * mu1 >= lambda1
}

/// The strict variant `2 mu1 > lambda1 + 1` of the same hypothesis.
pub fn gcd2_strict_hypothesis(lambda1: u64, mu1: u64) -> bool {
    gcd2_hypothesis(lambda1, mu1) && 2 * mu1 > lambda1 + 1
}

/// `lambda = (lambda1^(2mu1-lambda1+1), (lambda1-1)^(lambda1-mu1))`,
/// `mu = mu1^(lambda1+1)` in `K_(lambda1+1)`.
pub fn construct_gcd2(lambda1: u64, mu1: u64) -> Result<(usize, ConePoint)> {
    if !gcd2_hypothesis(lambda1, mu1) {
        return Err(Error::InvalidArgument(format!(
            "({lambda1}, {mu1}) needs lambda1 >= mu1 >= 1, gcd(lambda1+1, mu1+1) = 1 and 2 mu1 >= lambda1"
        )));
    }
    let r = (lambda1 + 1) as usize;
    let mut lambda = vec![lambda1; (2 * mu1 + 1 - lambda1) as usize];
    lambda.extend(std::iter::repeat_n(lambda1 - 1, (lambda1 - mu1) as usize));
    let p = ConePoint::new(r, Partition::new(lambda)?, Partition::rectangle(mu1, r))?;
    if !is_hilbert_basis_element(&p)? {
        return Err(Error::InvalidConePoint(format!("{p} is reducible")));
    }
    Ok((r, p))
}

/// The three sufficient conditions for `(lambda1, mu1)` to be `(lambda1+1)`-initial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "InitialPairRepr", try_from = "InitialPairRepr")]
pub struct InitialPair {
    pub lambda1: u64,
    pub mu1: u64,
    pub conditions: [bool; 3],
}

#[derive(Serialize, Deserialize)]
struct InitialPairRepr {
    pair: [u64; 2],
    conditions: [bool; 3],
    sufficient: bool,
}

impl From<InitialPair> for InitialPairRepr {
    fn from(p: InitialPair) -> Self {
        InitialPairRepr { pair: [p.lambda1, p.mu1], conditions: p.conditions, sufficient: p.sufficient() }
    }
}

impl TryFrom<InitialPairRepr> for InitialPair {
    type Error = Error;
    fn try_from(r: InitialPairRepr) -> Result<Self> {
        let p = classify_initial_pair(r.pair[0], r.pair[1])?;
        if p.conditions != r.conditions || p.sufficient() != r.sufficient {
            return Err(Error::InvalidArgument(format!("inconsistent verdict for {:?}", r.pair)));
        }
        Ok(p)
    }
}

impl InitialPair {
    pub fn sufficient(&self) -> bool {
        self.conditions.iter().any(|&c| c)
    }
}

pub fn classify_initial_pair(lambda1: u64, mu1: u64) -> Result<InitialPair> {
    if mu1 == 0 || lambda1 < mu1 {
        return Err(Error::InvalidArgument(format!(
            "need lambda1 >= mu1 >= 1, got ({lambda1}, {mu1})"
        )));
    }
    Ok(InitialPair {
        lambda1,
        mu1,
        conditions: [
            gcd(lambda1, mu1) == 1,
            gcd(lambda1 + 1, mu1) == 1,
            gcd2_hypothesis(lambda1, mu1),
        ],
    })
}

/// Pairs `mu1 < lambda1 <= max_lambda1` for which no condition holds.
pub fn unresolved_pairs(max_lambda1: u64) -> Vec<(u64, u64)> {
    (2..=max_lambda1)
        .flat_map(|l| (1..l).map(move |m| (l, m)))
        .filter(|&(l, m)| !classify_initial_pair(l, m).expect("valid pair").sufficient())
        .collect()
}

/// Whether some Hilbert basis element of `K_r` has `lambda_1 = r` and first `mu` part `mu1`.
pub fn is_initial_at_width(r: u64, mu1: u64) -> Result<bool> {
    if mu1 == 0 || mu1 > r {
        return Err(Error::InvalidArgument(format!("need 1 <= mu1 <= r, got r = {r}, mu1 = {mu1}")));
    }
    Ok(gcd(r, mu1) == 1)
}

/// Whether the smallest face of the cone containing `p` has dimension at most 2.
pub fn lies_on_2face(p: &ConePoint) -> bool {
    cone_face_dimension(p) <= 2
}

/// One partition rectangular, the other with at most two distinct nonzero parts.
pub fn has_two_part_shape(p: &ConePoint) -> bool {
    let (l, m) = (p.lambda(), p.mu());
    (l.is_rectangle() && m.distinct_part_sizes() <= 2)
        || (m.is_rectangle() && l.distinct_part_sizes() <= 2)
}

#[derive(Clone, Copy, Debug)]
pub struct ScanBudget {
    /// Maximum number of candidate points tested.
    pub max_candidates: u64,
    pub time_limit: Option<Duration>,
}

impl Default for ScanBudget {
    fn default() -> Self {
        ScanBudget { max_candidates: 1_000_000, time_limit: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ScanVerdict {
    Found { certificate: ConePoint, source: String },
    ExhaustedNo,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanOutcome {
    pub pair: [u64; 2],
    pub r: usize,
    #[serde(flatten)]
    pub verdict: ScanVerdict,
    pub candidates: u64,
}

/// Looks for a Hilbert basis element of `K_r` with `lambda_1 = lambda1`, `mu_1 = mu1`.
///
/// The constructions are tried first; otherwise every candidate with
/// `|lambda| <= mu1 * r` is tested in increasing size.
pub fn scan_initial(lambda1: u64, mu1: u64, r: usize, budget: &ScanBudget) -> Result<ScanOutcome> {
    if mu1 == 0 || lambda1 < mu1 || (r as u64) < lambda1 {
        return Err(Error::InvalidArgument(format!(
            "need r >= lambda1 >= mu1 >= 1, got ({lambda1}, {mu1}) in K_{r}"
        )));
    }
    let outcome = |verdict, candidates| ScanOutcome { pair: [lambda1, mu1], r, verdict, candidates };
    let found = |p: ConePoint, source: &str| ScanVerdict::Found {
        certificate: p,
        source: source.to_string(),
    };
    if lambda1 > mu1 && r_min(lambda1, mu1)? <= r as u64 {
        let (_, p) = construct_gcd1(lambda1, mu1)?;
        return Ok(outcome(found(p.embed(r)?, "gcd1"), 0));
    }
    if gcd2_hypothesis(lambda1, mu1) && lambda1 < r as u64 {
        let (_, p) = construct_gcd2(lambda1, mu1)?;
        return Ok(outcome(found(p.embed(r)?, "gcd2"), 0));
    }

    let start = Instant::now();
    let mut candidates = 0u64;
    let mut stop: Option<ScanVerdict> = None;
    'sizes: for n in lambda1..=mu1 * r as u64 {
        let mut lambdas = Vec::new();
        let _ = visit_partitions(n - lambda1, r - 1, lambda1, 0, &[], &mut |rest| {
            let mut l = vec![lambda1];
            l.extend_from_slice(rest);
            lambdas.push(l);
            ControlFlow::<()>::Continue(())
        });
        for lam in lambdas {
            let lam_p = Partition::new(lam)?;
            let bound = lam_p.prefix_sums(r);
            let res = visit_partitions(n - mu1, r - 1, mu1, mu1, &bound[1..], &mut |rest| {
                candidates += 1;
                if candidates > budget.max_candidates {
                    return ControlFlow::Break(ScanVerdict::BudgetExceeded);
                }
                if candidates.is_multiple_of(1024) {
                    if let Some(t) = budget.time_limit {
                        if start.elapsed() > t {
                            return ControlFlow::Break(ScanVerdict::BudgetExceeded);
                        }
                    }
                }
                let mut m = vec![mu1];
                m.extend_from_slice(rest);
                let p = ConePoint::new(r, lam_p.clone(), Partition::new(m).expect("non-increasing"))
                    .expect("dominance enforced while generating");
                match is_hilbert_basis_element(&p) {
                    Ok(true) => ControlFlow::Break(found(p, "search")),
                    _ => ControlFlow::Continue(()),
                }
            });
            if let Some(v) = res {
                stop = Some(v);
                break 'sizes;
            }
        }
    }
    Ok(outcome(stop.unwrap_or(ScanVerdict::ExhaustedNo), candidates))
}

/// Calls `f` on every partition of `n` into at most `slots` parts of size at
/// most `max_part`, in reverse lexicographic order, stopping at the first break.
/// With a nonempty `cap`, `offset` plus the `i`-th prefix sum may not exceed `cap[i]`.
fn visit_partitions<B>(
    n: u64,
    slots: usize,
    max_part: u64,
    offset: u64,
    cap: &[u64],
    f: &mut dyn FnMut(&[u64]) -> ControlFlow<B>,
) -> Option<B> {
    #[allow(clippy::too_many_arguments)]
    fn rec<B>(
        rem: u64,
        max_part: u64,
        slots: usize,
        acc: u64,
        cap: &[u64],
        cur: &mut Vec<u64>,
        f: &mut dyn FnMut(&[u64]) -> ControlFlow<B>,
    ) -> Option<B> {
        if rem == 0 {
            return match f(cur) {
                ControlFlow::Break(b) => Some(b),
                ControlFlow::Continue(()) => None,
            };
        }
        let i = cur.len();
        for p in (1..=rem.min(max_part)).rev() {
            if p * (slots as u64) < rem {
                break;
            }
            if cap.get(i).is_some_and(|&c| acc + p > c) {
                continue;
            }
            cur.push(p);
            let out = rec(rem - p, p, slots - 1, acc + p, cap, cur, f);
            cur.pop();
            if out.is_some() {
                return out;
            }
        }
        None
    }
    if n > 0 && slots == 0 {
        return None;
    }
    rec(n, max_part, slots, offset, cap, &mut Vec::new(), f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(r: usize, l: &[u64], m: &[u64]) -> ConePoint {
        ConePoint::new(r, Partition::new(l.to_vec()).unwrap(), Partition::new(m.to_vec()).unwrap())
            .unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(is_hilbert_basis_element(&cp(1, &[1], &[1])).unwrap());
        assert!(!is_hilbert_basis_element(&cp(2, &[2, 2], &[2, 2])).unwrap());
        assert!(is_hilbert_basis_element(&cp(2, &[2], &[1, 1])).unwrap());
        assert!(is_hilbert_basis_element(&ConePoint::new(1, Partition::new(vec![]).unwrap(), Partition::new(vec![]).unwrap()).unwrap()).is_err());
        // column sums match, but no split respects dominance
        let p = cp(4, &[3, 3], &[3, 1, 1, 1]);
        assert!(!column_sum_test(&p).unwrap());
        assert!(is_hilbert_basis_element(&p).unwrap());
        assert_eq!(decompose(&p).unwrap(), None);
    }

    #[test]
    fn decompose_examples() {
        let half = cp(2, &[1, 1], &[1, 1]);
        assert_eq!(decompose(&cp(2, &[2, 2], &[2, 2])).unwrap(), Some((half.clone(), half.clone())));
        assert_eq!(decompose(&cp(2, &[2], &[1, 1])).unwrap(), None);
        assert_eq!(
            decompose(&cp(2, &[3, 1], &[2, 2])).unwrap(),
            Some((cp(2, &[2], &[1, 1]), half))
        );
        let big = cp(1, &[21], &[21]);
        assert!(decompose(&big).unwrap_err().is_resource_cap());
    }

    #[test]
    fn column_splits_are_valid() {
        for r in 1..=4 {
            for n in 1..=8 {
                let parts = Partition::all(n, r, n);
                for l in &parts {
                    for m in &parts {
                        let Ok(p) = ConePoint::new(r, l.clone(), m.clone()) else { continue };
                        let split = column_split(&p).unwrap();
                        assert_eq!(split.is_some(), decompose(&p).unwrap().is_some(), "{p}");
                        if let Some((a, b)) = split {
                            assert!(!a.is_zero() && !b.is_zero());
                            let sum: Vec<u64> =
                                a.coordinates().iter().zip(b.coordinates()).map(|(x, y)| x + y).collect();
                            assert_eq!(sum, p.coordinates());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn r_min_examples() {
        assert_eq!(r_min(20, 15).unwrap(), 22);
        assert_eq!(r_min(7, 3).unwrap(), 7);
        assert_eq!(r_min(15, 6).unwrap(), 17);
        assert!(r_min(3, 3).is_err());
        for l in 2..60 {
            for m in 1..l {
                assert!(r_min(l, m).unwrap() < l + m);
            }
        }
    }

    #[test]
    fn constructions() {
        let (r, p) = construct_gcd1(20, 15).unwrap();
        assert_eq!(r, 22);
        assert_eq!(p, cp(22, &[20; 15], &[&[15u64; 7][..], &[13; 15]].concat()));
        assert!(is_hilbert_basis_element(&p).unwrap());
        let (r, p) = construct_gcd1(9, 1).unwrap();
        assert_eq!(p, cp(9, &[9], &[1; 9]));
        assert_eq!(r, 9);
        let (r, p) = construct_gcd1(5, 3).unwrap();
        assert_eq!((r, p.clone()), (5, cp(5, &[5, 5, 5], &[3; 5])));
        assert_eq!(decompose(&p).unwrap(), None);

        let (r, p) = construct_gcd2(20, 15).unwrap();
        assert_eq!(r, 21);
        assert_eq!(p, cp(21, &[&[20u64; 11][..], &[19; 5]].concat(), &[15; 21]));
        let (r, p) = construct_gcd2(6, 4).unwrap();
        assert_eq!((r, p.clone()), (7, cp(7, &[6, 6, 6, 5, 5], &[4; 7])));
        assert_eq!(decompose_bounded(&p, 28).unwrap(), None);
        assert!(construct_gcd2(5, 5).is_err());
        assert!(construct_gcd2(9, 3).is_err());
    }

    #[test]
    fn classification() {
        assert!(classify_initial_pair(7, 3).unwrap().conditions[0]);
        let p = classify_initial_pair(14, 6).unwrap();
        assert!(!p.sufficient());
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"pair":[14,6],"conditions":[false,false,false],"sufficient":false}"#
        );
        assert_eq!(serde_json::from_str::<InitialPair>(&serde_json::to_string(&p).unwrap()).unwrap(), p);
        assert!(classify_initial_pair(3, 4).is_err());
        assert_eq!(
            unresolved_pairs(30),
            vec![
                (14, 6), (15, 6), (20, 6), (20, 14), (21, 6), (24, 10),
                (25, 10), (26, 6), (26, 12), (27, 6), (27, 12), (27, 21)
            ]
        );
        assert!(!is_initial_at_width(14, 6).unwrap());
        assert!(is_initial_at_width(11, 1).unwrap());
        assert!(!is_initial_at_width(9, 6).unwrap());
        assert!(is_initial_at_width(3, 4).is_err());
    }

    #[test]
    fn two_faces() {
        let (_, a) = construct_gcd1(20, 15).unwrap();
        let (_, b) = construct_gcd2(20, 15).unwrap();
        for p in [&a, &b] {
            assert!(lies_on_2face(p));
            assert!(has_two_part_shape(p));
        }
        let p = cp(3, &[3, 2, 1], &[2, 2, 2]);
        assert!(!lies_on_2face(&p));
        assert!(!has_two_part_shape(&p));
    }

    #[test]
    fn scans() {
        let small = ScanBudget { max_candidates: 10_000, time_limit: None };
        let out = scan_initial(5, 3, 5, &small).unwrap();
        assert_eq!(
            out.verdict,
            ScanVerdict::Found { certificate: cp(5, &[5, 5, 5], &[3; 5]), source: "gcd1".into() }
        );
        let out = scan_initial(4, 2, 4, &small).unwrap();
        assert_eq!(out.verdict, ScanVerdict::ExhaustedNo);
        assert!(out.candidates > 0);
        let out = scan_initial(14, 6, 15, &ScanBudget { max_candidates: 2_000, time_limit: None })
            .unwrap();
        assert_eq!(out.verdict, ScanVerdict::BudgetExceeded);
        assert!(scan_initial(5, 3, 4, &small).is_err());
    }

    #[test]
    fn scan_certificates_respect_width_bound() {
        let budget = ScanBudget { max_candidates: 50_000, time_limit: None };
        for r in 1..=5usize {
            for l1 in 1..=r as u64 {
                for m1 in 1..=l1 {
                    let out = scan_initial(l1, m1, r, &budget).unwrap();
                    if let ScanVerdict::Found { certificate: p, .. } = &out.verdict {
                        assert!(is_hilbert_basis_element(p).unwrap());
                        assert_eq!(p.lambda().part(0), l1);
                        assert_eq!(p.mu().part(0), m1);
                        assert!(p.lambda().part(0) <= r as u64);
                        if l1 == r as u64 {
                            assert!(p.lambda().is_rectangle() && p.mu().is_rectangle(), "{p}");
                            assert_eq!(gcd(r as u64, m1), 1);
                        }
                    } else if l1 == r as u64 {
                        assert_eq!(out.verdict, ScanVerdict::ExhaustedNo);
                        assert_ne!(gcd(r as u64, m1), 1);
                    }
                }
            }
        }
    }
}
