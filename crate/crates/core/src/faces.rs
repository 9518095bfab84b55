//! Face lattice of the Kostka polytope `P_r`.
//!
//! Faces are identified by their vertex sets. Vertex `i` is the `i`-th label of
//! [`enumerate_ray_labels`]. Two closure routes are provided: the label rules
//! of [`KostkaPolytope::minimal_face`] and the hyperplane intersection of
//! [`KostkaPolytope::closure`]; they must agree.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::partition::ConePoint;
use crate::rays::{self, all_hyperplanes, enumerate_ray_labels, primitive_generator, RayLabel};

/// Largest `r` for which the `3r - 2` hyperplanes fit the incidence mask.
pub const MAX_R: usize = 43;

/// Fixed-width bit set over vertex indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexMask {
    words: Box<[u64]>,
}

impl VertexMask {
    pub fn empty(n: usize) -> Self {
        VertexMask { words: vec![0; n.div_ceil(64).max(1)].into_boxed_slice() }
    }

    pub fn full(n: usize) -> Self {
        let mut m = Self::empty(n);
        for i in 0..n {
            m.insert(i);
        }
        m
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect_with(&mut self, other: &VertexMask) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= b;
        }
    }

    pub fn is_subset(&self, other: &VertexMask) -> bool {
        self.words.iter().zip(other.words.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

impl Ord for VertexMask {
    /// By size, then lexicographically on the ascending index lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            for (a, b) in self.words.iter().zip(other.words.iter()) {
                let x = a ^ b;
                if x != 0 {
                    let low = x & x.wrapping_neg();
                    return if a & low != 0 { Ordering::Less } else { Ordering::Greater };
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for VertexMask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Vertex set of a (candidate) face of `P_r`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceVertexSet {
    r: usize,
    members: VertexMask,
}

impl FaceVertexSet {
    pub fn new(r: usize, members: VertexMask) -> Self {
        FaceVertexSet { r, members }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn members(&self) -> &VertexMask {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn labels(&self) -> Vec<RayLabel> {
        let all = enumerate_ray_labels(self.r);
        self.members.iter().map(|i| all[i]).collect()
    }
}

impl fmt::Debug for FaceVertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P_{}{:?}", self.r, self.labels())
    }
}

/// One line of a face dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRecord {
    pub r: usize,
    pub dim: i64,
    pub labels: Vec<RayLabel>,
}

/// Guards for face enumeration.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Maximum number of faces held by one enumeration.
    pub max_faces: usize,
    pub time_budget: Option<Duration>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_faces: 2_000_000, time_budget: None }
    }
}

/// Precomputed incidence data for `P_r`.
pub struct KostkaPolytope {
    r: usize,
    labels: Vec<RayLabel>,
    index: HashMap<RayLabel, usize>,
    /// hyperplanes containing each vertex, as bits of [`rays::FacetId::bit`]
    incidence: Vec<u128>,
    /// vertices lying on each hyperplane
    on_hyperplane: Vec<VertexMask>,
}

impl KostkaPolytope {
    pub fn new(r: usize) -> Result<Self> {
        if r == 0 || r > MAX_R {
            return Err(Error::InvalidArgument(format!("r must be in 1..={MAX_R}, got {r}")));
        }
        let labels = enumerate_ray_labels(r);
        let n = labels.len();
        let index = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let incidence: Vec<u128> = labels.iter().map(|&l| rays::incidence_mask(r, l)).collect();
        let on_hyperplane = (0..3 * r - 2)
            .map(|h| {
                let mut m = VertexMask::empty(n);
                for (v, inc) in incidence.iter().enumerate() {
                    if inc >> h & 1 == 1 {
                        m.insert(v);
                    }
                }
                m
            })
            .collect();
        Ok(KostkaPolytope { r, labels, index, incidence, on_hyperplane })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn labels(&self) -> &[RayLabel] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn vertex_index(&self, lab: RayLabel) -> Result<usize> {
        self.index.get(&lab).copied().ok_or(Error::InvalidLabel { r: self.r, label: lab })
    }

    pub fn mask_of(&self, labels: &[RayLabel]) -> Result<VertexMask> {
        let mut m = VertexMask::empty(self.vertex_count());
        for &l in labels {
            m.insert(self.vertex_index(l)?);
        }
        Ok(m)
    }

    pub fn face(&self, members: VertexMask) -> FaceVertexSet {
        FaceVertexSet::new(self.r, members)
    }

    /// Minimal face containing the given vertices, from the label rules:
    /// `b` is one of the `b_i`; `a` and `l` are among the `a_i, l_i`; every integer
    /// strictly between `l` and `a` lies strictly inside some `(l_i, a_i)`.
    pub fn minimal_face(&self, labels: &[RayLabel]) -> Result<FaceVertexSet> {
        if labels.is_empty() {
            return Err(Error::InvalidArgument("minimal face of an empty label set".into()));
        }
        for l in labels {
            l.check(self.r)?;
        }
        let bs: BTreeSet<usize> = labels.iter().map(|l| l.b).collect();
        let ends: BTreeSet<usize> = labels.iter().flat_map(|l| [l.a, l.l]).collect();
        let mut covered = vec![false; self.r + 1];
        for l in labels {
            for x in l.l + 1..l.a {
                covered[x] = true;
            }
        }
        let mut m = VertexMask::empty(self.vertex_count());
        for (v, cand) in self.labels.iter().enumerate() {
            let ok = bs.contains(&cand.b)
                && ends.contains(&cand.a)
                && ends.contains(&cand.l)
                && (cand.l + 1..cand.a).all(|x| covered[x]);
            if ok {
                m.insert(v);
            }
        }
        Ok(self.face(m))
    }

    /// Hyperplanes containing every vertex of `s` (all of them for empty `s`).
    pub fn common_hyperplanes(&self, s: &VertexMask) -> u128 {
        s.iter().fold(self.all_hyperplane_bits(), |m, v| m & self.incidence[v])
    }

    fn all_hyperplane_bits(&self) -> u128 {
        let n = 3 * self.r - 2;
        if n == 128 {
            u128::MAX
        } else {
            (1u128 << n) - 1
        }
    }

    /// Vertices lying on every hyperplane in `hyperplanes`.
    pub fn vertices_on(&self, hyperplanes: u128) -> VertexMask {
        let mut m = VertexMask::full(self.vertex_count());
        let mut bits = hyperplanes;
        while bits != 0 {
            let h = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            m.intersect_with(&self.on_hyperplane[h]);
        }
        m
    }

    /// Minimal face containing `s`, by intersecting the hyperplanes through `s`.
    pub fn closure(&self, s: &VertexMask) -> VertexMask {
        self.vertices_on(self.common_hyperplanes(s))
    }

    /// Dimension as (rank of primitive generators) - 1; the empty set gives -1.
    pub fn face_dimension(&self, fs: &FaceVertexSet) -> i64 {
        let rows: Vec<Vec<i64>> = fs
            .members
            .iter()
            .map(|v| {
                primitive_generator(self.r, self.labels[v])
                    .expect("label of P_r")
                    .coordinates()
                    .into_iter()
                    .map(|x| x as i64)
                    .collect()
            })
            .collect();
        linalg::rank_i64(&rows) as i64 - 1
    }

    /// Edge test by the case analysis on labels.
    pub fn is_edge(&self, u: RayLabel, v: RayLabel) -> Result<bool> {
        u.check(self.r)?;
        v.check(self.r)?;
        is_edge_labels(u, v)
    }

    /// Edge test by closure and rank.
    pub fn is_edge_by_closure(&self, u: RayLabel, v: RayLabel) -> Result<bool> {
        let f = self.minimal_face(&[u, v])?;
        Ok(f.len() == 2 && self.face_dimension(&f) == 1)
    }

    /// Faces covering `g` in the face lattice.
    ///
    /// A candidate `F = closure(g + v)` covers `g` exactly when every vertex of
    /// `F \ g` regenerates `F`, i.e. when `F` is produced by `|F| - |g|` choices of `v`.
    fn covers(&self, g: &VertexMask) -> Vec<VertexMask> {
        let gm = self.common_hyperplanes(g);
        let mut by_mask: HashMap<u128, usize> = HashMap::new();
        for v in 0..self.vertex_count() {
            if !g.contains(v) {
                *by_mask.entry(gm & self.incidence[v]).or_default() += 1;
            }
        }
        let mut cands: HashMap<VertexMask, usize> = HashMap::new();
        for (m, cnt) in by_mask {
            *cands.entry(self.vertices_on(m)).or_default() += cnt;
        }
        let base = g.len();
        cands
            .into_iter()
            .filter(|(f, cnt)| f.len() - base == *cnt)
            .map(|(f, _)| f)
            .collect()
    }

    /// Face vertex sets grouped by dimension `0..=max_dim`, each level sorted.
    pub fn face_levels(&self, max_dim: usize, limits: &Limits) -> Result<Vec<Vec<VertexMask>>> {
        let start = Instant::now();
        let top = 2 * self.r - 2;
        let n = self.vertex_count();
        let mut level: Vec<VertexMask> = (0..n)
            .map(|v| {
                let mut m = VertexMask::empty(n);
                m.insert(v);
                m
            })
            .collect();
        let mut total = level.len();
        check_cap(total, limits)?;
        let mut levels = vec![level.clone()];
        for _ in 1..=max_dim.min(top) {
            if let Some(budget) = limits.time_budget {
                if start.elapsed() > budget {
                    return Err(Error::ResourceCap {
                        what: "face enumeration time budget in ms",
                        limit: budget.as_millis() as u64,
                    });
                }
            }
            let found: Vec<Vec<VertexMask>> = level.par_iter().map(|g| self.covers(g)).collect();
            let mut next: HashSet<VertexMask> = HashSet::new();
            for f in found.into_iter().flatten() {
                next.insert(f);
                check_cap(total + next.len(), limits)?;
            }
            let mut next: Vec<VertexMask> = next.into_iter().collect();
            next.par_sort_unstable();
            total += next.len();
            level = next;
            levels.push(level.clone());
        }
        Ok(levels)
    }

    /// Number of faces of each dimension `0..=max_dim`.
    pub fn face_counts(&self, max_dim: usize, limits: &Limits) -> Result<Vec<u64>> {
        let mut counts: Vec<u64> =
            self.face_levels(max_dim, limits)?.iter().map(|l| l.len() as u64).collect();
        counts.resize(max_dim + 1, 0);
        Ok(counts)
    }

    /// All faces of dimension `d`, or of every dimension when `d` is `None`,
    /// sorted by dimension, then size, then lexicographically.
    pub fn enumerate_faces(&self, d: Option<usize>, limits: &Limits) -> Result<Vec<FaceVertexSet>> {
        let top = 2 * self.r - 2;
        let max_dim = d.unwrap_or(top);
        let levels = self.face_levels(max_dim, limits)?;
        let out = match d {
            Some(d) => levels.into_iter().nth(d).unwrap_or_default(),
            None => levels.into_iter().flatten().collect(),
        };
        Ok(out.into_iter().map(|m| self.face(m)).collect())
    }

    /// Largest vertex count of a `d`-face.
    pub fn max_face_vertices(&self, d: usize, limits: &Limits) -> Result<usize> {
        if d > 2 * self.r - 2 {
            return Err(Error::InvalidArgument(format!(
                "P_{} has no faces of dimension {d}",
                self.r
            )));
        }
        let levels = self.face_levels(d, limits)?;
        Ok(levels[d].iter().map(|f| f.len()).max().unwrap_or(0))
    }

    /// The face with vertex labels `0 <= l < z1 <= b <= z1+z2-1 <= r-z3 < a <= r`.
    pub fn construct_max_face(&self, z1: usize, z2: usize, z3: usize) -> Result<FaceVertexSet> {
        let r = self.r;
        if z1 == 0 || z2 == 0 || z3 == 0 {
            return Err(Error::InvalidArgument("z1, z2, z3 must be positive".into()));
        }
        let d = z1 + z2 + z3 - 3;
        if r <= d + 1 {
            return Err(Error::InvalidArgument(format!(
                "need r > d + 1, got r = {r}, d = {d}"
            )));
        }
        let mut m = VertexMask::empty(self.vertex_count());
        for (v, l) in self.labels.iter().enumerate() {
            if l.l < z1 && z1 <= l.b && l.b < z1 + z2 && r - z3 < l.a {
                m.insert(v);
            }
        }
        Ok(self.face(m))
    }
}

fn check_cap(n: usize, limits: &Limits) -> Result<()> {
    if n > limits.max_faces {
        Err(Error::ResourceCap { what: "face count", limit: limits.max_faces as u64 })
    } else {
        Ok(())
    }
}

fn is_edge_labels(u: RayLabel, v: RayLabel) -> Result<bool> {
    if u == v {
        return Err(Error::InvalidArgument(format!("{u} is not an edge with itself")));
    }
    // order so that a - b <= a' - b'
    let (u, v) = if u.a - u.b <= v.a - v.b { (u, v) } else { (v, u) };
    let RayLabel { a, b, l } = u;
    let RayLabel { a: a2, b: b2, l: l2 } = v;
    Ok(if a == b {
        a2 == b2 || a == b2 || a >= a2 || l2 >= a
    } else {
        let equal = [a == a2, b == b2, l == l2].iter().filter(|&&x| x).count();
        equal >= 2 || l >= a2 || l2 >= a
    })
}

/// Minimal face of `P_r` containing the given labels.
pub fn minimal_face(r: usize, labels: &[RayLabel]) -> Result<FaceVertexSet> {
    KostkaPolytope::new(r)?.minimal_face(labels)
}

pub fn face_dimension(fs: &FaceVertexSet) -> Result<i64> {
    Ok(KostkaPolytope::new(fs.r)?.face_dimension(fs))
}

/// Whether `{u, v}` is an edge of `P_r`.
pub fn is_edge(r: usize, u: RayLabel, v: RayLabel) -> Result<bool> {
    for l in [u, v] {
        l.check(r)?;
    }
    is_edge_labels(u, v)
}

pub fn enumerate_faces(r: usize, d: Option<usize>, limits: &Limits) -> Result<Vec<FaceVertexSet>> {
    KostkaPolytope::new(r)?.enumerate_faces(d, limits)
}

pub fn max_face_vertices(r: usize, d: usize, limits: &Limits) -> Result<usize> {
    KostkaPolytope::new(r)?.max_face_vertices(d, limits)
}

pub fn construct_max_face(r: usize, z1: usize, z2: usize, z3: usize) -> Result<FaceVertexSet> {
    KostkaPolytope::new(r)?.construct_max_face(z1, z2, z3)
}

/// Largest product of three positive integers summing to `d + 3`.
pub fn m_closed_form(d: usize) -> u64 {
    (1..=3u64).map(|i| (d as u64 + 2 + i) / 3).product()
}

/// Order-isomorphism class of a label list: the rank-compressed concatenation
/// `(a_1, b_1, l_1, a_2, ...)` of the lexicographically sorted labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrderClass {
    pub tuple: Vec<usize>,
    pub t: usize,
}

pub fn canonical_class(labels: &[RayLabel]) -> OrderClass {
    let mut sorted = labels.to_vec();
    sorted.sort();
    let flat: Vec<usize> = sorted.iter().flat_map(|l| l.entries()).collect();
    let mut values = flat.clone();
    values.sort_unstable();
    values.dedup();
    let tuple = flat.iter().map(|x| values.binary_search(x).unwrap()).collect();
    OrderClass { tuple, t: values.len() }
}

/// Dimension of the smallest face of the cone `K_r` containing `p`.
///
/// Tight `H`/`HHAT` equations merge equal coordinates into blocks (and pin the last
/// `lambda` block to zero when `lambda_r = 0`); the dimension is the number of free
/// blocks minus the rank of the tight prefix-sum equations and the equal-size equation.
pub fn cone_face_dimension(p: &ConePoint) -> usize {
    let r = p.r();
    let lam = p.lambda().padded(r);
    let mu = p.mu().padded(r);
    let blocks = |x: &[u64]| {
        let mut id = vec![0usize; x.len()];
        for i in 1..x.len() {
            id[i] = id[i - 1] + usize::from(x[i] != x[i - 1]);
        }
        id
    };
    let lb = blocks(&lam);
    let mb = blocks(&mu);
    let n_lam_blocks = lb[r - 1] + 1;
    // the block containing lambda_r is pinned when lambda_r = 0
    let lam_free = if lam[r - 1] == 0 { n_lam_blocks - 1 } else { n_lam_blocks };
    let n_mu_blocks = mb[r - 1] + 1;
    let nvars = lam_free + n_mu_blocks;
    let lp = p.lambda().prefix_sums(r);
    let mp = p.mu().prefix_sums(r);
    let mut rows = Vec::new();
    for i in 1..=r {
        // i = r is the equal-size equation, always tight
        if lp[i - 1] != mp[i - 1] {
            continue;
        }
        let mut row = vec![0i64; nvars];
        for k in 0..i {
            if lb[k] < lam_free {
                row[lb[k]] += 1;
            }
            row[lam_free + mb[k]] -= 1;
        }
        rows.push(row);
    }
    nvars - linalg::rank_i64(&rows)
}

/// Same quantity via vertices: the vertices on every hyperplane through `p`,
/// and the rank of their generators.
pub fn cone_face_dimension_by_vertices(p: &ConePoint) -> Result<usize> {
    let poly = KostkaPolytope::new(p.r())?;
    let tight = all_hyperplanes(p.r())
        .into_iter()
        .filter(|f| f.contains(p))
        .fold(0u128, |m, f| m | 1u128 << f.bit(p.r()));
    let f = poly.face(poly.vertices_on(tight));
    Ok((poly.face_dimension(&f) + 1) as usize)
}
