//! Extremal rays of `K_r` (vertices of `P_r`) and the bounding hyperplanes.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::partition::{ConePoint, Partition};

/// Vertex label `(a, b, l)`: `0 <= l < b < a`, or `a = b = l >= 1` for rectangles.
///
/// Ordering is lexicographic in `(a, b, l)`, which fixes vertex indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[usize; 3]", into = "[usize; 3]")]
pub struct RayLabel {
    pub a: usize,
    pub b: usize,
    pub l: usize,
}

impl RayLabel {
    /// Validates the triple. Rectangle labels `(a, a, x)` are normalized to `(a, a, a)`.
    pub fn new(a: usize, b: usize, l: usize) -> Result<Self> {
        if a == b {
            if a == 0 || l > a {
                return Err(Error::InvalidArgument(format!("({a},{b},{l}) is not a vertex label")));
            }
            return Ok(RayLabel { a, b: a, l: a });
        }
        if !(l < b && b < a) {
            return Err(Error::InvalidArgument(format!("({a},{b},{l}) is not a vertex label")));
        }
        Ok(RayLabel { a, b, l })
    }

    pub fn rectangle(a: usize) -> Self {
        assert!(a >= 1);
        RayLabel { a, b: a, l: a }
    }

    pub fn is_rectangle(&self) -> bool {
        self.a == self.b
    }

    pub fn is_valid_in(&self, r: usize) -> bool {
        self.a <= r
    }

    pub fn check(&self, r: usize) -> Result<()> {
        if self.is_valid_in(r) {
            Ok(())
        } else {
            Err(Error::InvalidLabel { r, label: *self })
        }
    }

    pub fn entries(&self) -> [usize; 3] {
        [self.a, self.b, self.l]
    }
}

impl TryFrom<[usize; 3]> for RayLabel {
    type Error = Error;
    fn try_from(v: [usize; 3]) -> Result<Self> {
        RayLabel::new(v[0], v[1], v[2])
    }
}

impl From<RayLabel> for [usize; 3] {
    fn from(l: RayLabel) -> Self {
        l.entries()
    }
}

impl fmt::Display for RayLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.l)
    }
}

impl fmt::Debug for RayLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Number of vertices of `P_r`: `C(r,3) + C(r,2) + r`.
pub fn vertex_count(r: usize) -> usize {
    let (r1, r2) = (r.saturating_sub(1), r.saturating_sub(2));
    r * r1 * r2 / 6 + r * r1 / 2 + r
}

/// All vertex labels of `P_r` in lexicographic order.
pub fn enumerate_ray_labels(r: usize) -> Vec<RayLabel> {
    let mut out = Vec::with_capacity(vertex_count(r));
    for a in 1..=r {
        for b in 1..a {
            for l in 0..b {
                out.push(RayLabel { a, b, l });
            }
        }
        out.push(RayLabel::rectangle(a));
    }
    out
}

/// The canonical generator of the extremal ray labeled `lab`.
///
/// For `a != b`: `lambda = (a-l)^b`, `mu = ((a-l)^l, (b-l)^(a-l))`;
/// rectangles give `lambda = mu = a^a`.
pub fn ray_generator(r: usize, lab: RayLabel) -> Result<ConePoint> {
    lab.check(r)?;
    let RayLabel { a, b, l } = lab;
    let (lambda, mu) = if a == b {
        (Partition::rectangle(a as u64, a), Partition::rectangle(a as u64, a))
    } else {
        let w = (a - l) as u64;
        let mut mu = vec![w; l];
        mu.extend(std::iter::repeat_n((b - l) as u64, a - l));
        (Partition::rectangle(w, b), Partition::from_sorted(mu))
    };
    ConePoint::new(r, lambda, mu)
}

/// The ray generator divided by the gcd of its entries.
pub fn primitive_generator(r: usize, lab: RayLabel) -> Result<ConePoint> {
    Ok(ray_generator(r, lab)?.primitive())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FacetKind {
    /// `lambda_i = lambda_{i+1}` (`lambda_r = 0` for `i = r`)
    H,
    /// `mu_i = mu_{i+1}`
    #[serde(rename = "HHAT")]
    HHat,
    /// `lambda_1 + .. + lambda_i = mu_1 + .. + mu_i`
    J,
}

/// One of the bounding hyperplanes `H_i` (`1 <= i <= r`), `HHAT_i`, `J_i` (`1 <= i < r`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FacetId {
    pub kind: FacetKind,
    pub i: usize,
}

impl FacetId {
    pub fn h(i: usize) -> Self {
        FacetId { kind: FacetKind::H, i }
    }
    pub fn hhat(i: usize) -> Self {
        FacetId { kind: FacetKind::HHat, i }
    }
    pub fn j(i: usize) -> Self {
        FacetId { kind: FacetKind::J, i }
    }

    pub fn is_valid_in(&self, r: usize) -> bool {
        match self.kind {
            FacetKind::H => (1..=r).contains(&self.i),
            FacetKind::HHat | FacetKind::J => (1..r).contains(&self.i),
        }
    }

    /// Position in the `3r - 2` bit hyperplane mask used by the face machinery:
    /// `H_1..H_r`, then `HHAT_1..HHAT_{r-1}`, then `J_1..J_{r-1}`.
    pub fn bit(&self, r: usize) -> usize {
        match self.kind {
            FacetKind::H => self.i - 1,
            FacetKind::HHat => r + self.i - 1,
            FacetKind::J => 2 * r - 1 + self.i - 1,
        }
    }

    /// Whether the point satisfies the defining equation, checked on coordinates.
    pub fn contains(&self, p: &ConePoint) -> bool {
        let (lam, mu) = (p.lambda(), p.mu());
        let i = self.i;
        match self.kind {
            FacetKind::H => lam.part(i - 1) == lam.part(i),
            FacetKind::HHat => mu.part(i - 1) == mu.part(i),
            FacetKind::J => lam.prefix_sums(i)[i - 1] == mu.prefix_sums(i)[i - 1],
        }
    }

    /// The hyperplane's normal vector in `(lambda, mu)` coordinates.
    pub fn normal(&self, r: usize) -> Vec<i64> {
        let mut v = vec![0i64; 2 * r];
        let i = self.i;
        match self.kind {
            FacetKind::H => {
                v[i - 1] = 1;
                if i < r {
                    v[i] = -1;
                }
            }
            FacetKind::HHat => {
                v[r + i - 1] = 1;
                v[r + i] = -1;
            }
            FacetKind::J => {
                for k in 0..i {
                    v[k] = 1;
                    v[r + k] = -1;
                }
            }
        }
        v
    }
}

impl fmt::Display for FacetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            FacetKind::H => "H",
            FacetKind::HHat => "HHAT",
            FacetKind::J => "J",
        };
        write!(f, "{name}_{}", self.i)
    }
}

/// All `3r - 2` bounding hyperplanes, ordered as in [`FacetId::bit`].
pub fn all_hyperplanes(r: usize) -> Vec<FacetId> {
    let mut v: Vec<FacetId> = (1..=r).map(FacetId::h).collect();
    v.extend((1..r).map(FacetId::hhat));
    v.extend((1..r).map(FacetId::j));
    v
}

/// Hyperplanes containing the vertex, by the combinatorial rules on its label.
pub fn facet_incidence(r: usize, lab: RayLabel) -> Result<BTreeSet<FacetId>> {
    lab.check(r)?;
    Ok(all_hyperplanes(r)
        .into_iter()
        .filter(|f| label_in_hyperplane(lab, *f))
        .collect())
}

pub(crate) fn label_in_hyperplane(lab: RayLabel, f: FacetId) -> bool {
    let RayLabel { a, b, l } = lab;
    let i = f.i;
    match f.kind {
        FacetKind::H => b != i,
        FacetKind::HHat => a != i && l != i,
        FacetKind::J => i <= l || i >= a || a == b,
    }
}

/// Incidence as a bit mask over [`all_hyperplanes`].
pub(crate) fn incidence_mask(r: usize, lab: RayLabel) -> u128 {
    all_hyperplanes(r)
        .into_iter()
        .filter(|f| label_in_hyperplane(lab, *f))
        .fold(0u128, |m, f| m | (1u128 << f.bit(r)))
}

/// Number of facets of `K_r`.
///
/// For `r > 2` the `3r - 2` hyperplanes cut distinct facets. For smaller `r`
/// they are deduplicated by vertex set and kept only if they have codimension one.
pub fn facet_count(r: usize) -> Result<usize> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    if r > 2 {
        return Ok(3 * r - 2);
    }
    Ok(facet_count_from_coordinates(r))
}

pub(crate) fn facet_count_from_coordinates(r: usize) -> usize {
    let labels = enumerate_ray_labels(r);
    let gens: Vec<Vec<i64>> = labels
        .iter()
        .map(|&l| {
            primitive_generator(r, l)
                .unwrap()
                .coordinates()
                .into_iter()
                .map(|x| x as i64)
                .collect()
        })
        .collect();
    let polytope_dim = 2 * r as i64 - 2;
    let mut seen = BTreeSet::new();
    for f in all_hyperplanes(r) {
        let members: Vec<usize> = (0..labels.len())
            .filter(|&v| f.contains(&primitive_generator(r, labels[v]).unwrap()))
            .collect();
        let rows: Vec<Vec<i64>> = members.iter().map(|&v| gens[v].clone()).collect();
        let dim = linalg::rank_i64(&rows) as i64 - 1;
        if dim == polytope_dim - 1 {
            seen.insert(members);
        }
    }
    seen.len()
}
