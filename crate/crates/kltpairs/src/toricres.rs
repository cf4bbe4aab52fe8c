//! Lattice fans, piecewise-linear divisor functions, smooth subdivision, and
//! toric discrepancy ledgers.
//!
//! Two-dimensional cones are resolved by the canonical minimal chain (the
//! Hilbert-basis boundary, i.e. the Hirzebruch-Jung subdivision); higher
//! dimensional cones by iterated stellar subdivision at a shortest lattice
//! point of the fundamental parallelepiped of a worst-multiplicity cone. The
//! fan rank is capped at 4.

use crate::ledger::{DiscrepancyLedger, DivisorKind, LedgerEntry};
use crate::linalg;
use crate::{is_unit_interval, parse_rat, rat_to_string, Error, Rat, Result};
use num_traits::{One, Signed, Zero};
use serde::Deserialize;
use std::collections::{BTreeMap, BTreeSet};

pub const FAN_RANK_CAP: usize = 4;

/// A fan: primitive integer rays plus maximal cones as ray-index sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
    all_simplicial: bool,
    /// Whether pairwise cone intersections were exactly validated. Full-
    /// dimensional simplicial pairs in rank <= 3 are checked for disjoint
    /// interiors; other configurations are accepted with this flag false.
    intersections_validated: bool,
}

impl Fan {
    pub fn new(rank: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Result<Fan> {
        if rank > FAN_RANK_CAP {
            return Err(Error::RankCapExceeded(rank));
        }
        let mut seen = BTreeSet::new();
        for ray in &rays {
            if ray.len() != rank {
                return Err(Error::InvalidFan("ray of wrong dimension".into()));
            }
            if ray.iter().all(|&c| c == 0) {
                return Err(Error::InvalidFan("zero ray".into()));
            }
            if linalg::primitive(ray) != *ray {
                return Err(Error::InvalidFan(format!("ray {ray:?} is not primitive")));
            }
            if !seen.insert(ray.clone()) {
                return Err(Error::InvalidFan(format!("duplicate ray {ray:?}")));
            }
        }
        let mut norm_cones = Vec::with_capacity(cones.len());
        for cone in cones {
            let set: BTreeSet<usize> = cone.into_iter().collect();
            for &i in &set {
                if i >= rays.len() {
                    return Err(Error::InvalidFan(format!("cone ray index {i} out of range")));
                }
            }
            norm_cones.push(set.into_iter().collect::<Vec<usize>>());
        }
        let all_simplicial = norm_cones
            .iter()
            .all(|c| cone_dim(&rays, c) == c.len());
        let mut fan = Fan {
            rank,
            rays,
            cones: norm_cones,
            all_simplicial,
            intersections_validated: false,
        };
        fan.intersections_validated = fan.validate_intersections()?;
        Ok(fan)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn all_simplicial(&self) -> bool {
        self.all_simplicial
    }

    pub fn intersections_validated(&self) -> bool {
        self.intersections_validated
    }

    /// Disjoint-interior check for pairs of full-dimensional simplicial
    /// cones, rank <= 3. Returns whether every pair was covered.
    fn validate_intersections(&self) -> Result<bool> {
        if self.rank > 3 {
            return Ok(false);
        }
        let full_simplicial: Vec<&Vec<usize>> = self
            .cones
            .iter()
            .filter(|c| c.len() == self.rank && cone_dim(&self.rays, c) == self.rank)
            .collect();
        let mut covered = full_simplicial.len() == self.cones.len();
        for (a, ca) in full_simplicial.iter().enumerate() {
            let Some(na) = interior_constraints(&self.rays, ca) else {
                covered = false;
                continue;
            };
            for cb in full_simplicial.iter().skip(a + 1) {
                let Some(nb) = interior_constraints(&self.rays, cb) else {
                    covered = false;
                    continue;
                };
                let mut rows = na.clone();
                rows.extend(nb);
                if strictly_feasible(rows) {
                    return Err(Error::InvalidFan(format!(
                        "cones {ca:?} and {cb:?} have overlapping interiors"
                    )));
                }
            }
        }
        Ok(covered)
    }

    /// Solves `sum t_i r_i = point` over the cone's rays; `Some(t)` iff the
    /// point lies in the (simplicial) cone.
    pub fn cone_coordinates(&self, cone: &[usize], point: &[i64]) -> Option<Vec<Rat>> {
        cone_coordinates(&self.rays, cone, point)
    }
}

fn cone_dim(rays: &[Vec<i64>], cone: &[usize]) -> usize {
    if cone.is_empty() {
        return 0;
    }
    // Rank = ncols - dim ker of the ray matrix.
    let int_rows: Vec<Vec<i64>> = cone.iter().map(|&i| rays[i].clone()).collect();
    let ncols = int_rows[0].len();
    ncols - linalg::integer_kernel(&int_rows, ncols).len()
}

fn cone_coordinates(rays: &[Vec<i64>], cone: &[usize], point: &[i64]) -> Option<Vec<Rat>> {
    let rank = point.len();
    let rows: Vec<Vec<Rat>> = (0..rank)
        .map(|c| cone.iter().map(|&i| Rat::from_integer(rays[i][c])).collect())
        .collect();
    let rhs: Vec<Rat> = point.iter().map(|&x| Rat::from_integer(x)).collect();
    let t = linalg::solve_rows(&rows, &rhs)?;
    if t.iter().all(|x| !x.is_negative()) {
        Some(t)
    } else {
        None
    }
}

/// Facet normals (rows of the inverse ray matrix) cutting out the interior of
/// a full-dimensional simplicial cone.
fn interior_constraints(rays: &[Vec<i64>], cone: &[usize]) -> Option<Vec<Vec<Rat>>> {
    let m: Vec<Vec<Rat>> = cone
        .iter()
        .map(|&i| rays[i].iter().map(|&x| Rat::from_integer(x)).collect())
        .collect();
    // Columns are the rays: x = M^T t, so t = (M^T)^{-1} x; rows of that
    // inverse are the constraints t_i > 0.
    let n = m.len();
    let mt: Vec<Vec<Rat>> = (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect();
    linalg::invert(&mt)
}

/// Fourier-Motzkin feasibility of a homogeneous strict system `row . x > 0`.
fn strictly_feasible(mut rows: Vec<Vec<Rat>>) -> bool {
    let Some(nvars) = rows.first().map(Vec::len) else {
        return true;
    };
    for j in 0..nvars {
        if rows.iter().any(|r| r.iter().all(Zero::is_zero)) {
            return false;
        }
        let (pos, rest): (Vec<Vec<Rat>>, Vec<Vec<Rat>>) =
            rows.into_iter().partition(|r| r[j].is_positive());
        let (neg, zero): (Vec<Vec<Rat>>, Vec<Vec<Rat>>) =
            rest.into_iter().partition(|r| r[j].is_negative());
        let mut next = zero;
        if !pos.is_empty() && !neg.is_empty() {
            for p in &pos {
                for n in &neg {
                    let combo: Vec<Rat> = p
                        .iter()
                        .zip(n)
                        .map(|(a, b)| *a * (-n[j]) + *b * p[j])
                        .collect();
                    next.push(combo);
                }
            }
        }
        rows = next;
    }
    !rows.iter().any(|r| r.iter().all(Zero::is_zero)) || rows.is_empty()
}

/// True iff the cone's primitive ray generators extend to a lattice basis:
/// |det| = 1 in the full-dimensional case, gcd of maximal minors = 1 below.
pub fn is_smooth_cone(fan: &Fan, cone_idx: usize) -> Result<bool> {
    let cone = &fan.cones()[cone_idx];
    if cone_dim(fan.rays(), cone) != cone.len() {
        return Err(Error::NonSimplicial(cone_idx));
    }
    Ok(rays_smooth(fan.rays(), cone))
}

fn rays_smooth(rays: &[Vec<i64>], cone: &[usize]) -> bool {
    let k = cone.len();
    if k == 0 {
        return true;
    }
    let rank = rays[cone[0]].len();
    let mut g: i64 = 0;
    for cols in combinations(rank, k) {
        let minor: Vec<Vec<i64>> = cone
            .iter()
            .map(|&i| cols.iter().map(|&c| rays[i][c]).collect())
            .collect();
        let d = linalg::det_i64(&minor);
        debug_assert!(d.denom().is_one());
        g = num_integer::Integer::gcd(&g, d.numer());
        if g == 1 {
            return true;
        }
    }
    g == 1
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Saturated lattice of the rational span of `rays`: basis rows plus the
/// rays' integer coordinates in that basis.
fn span_lattice(rank: usize, rays: &[Vec<i64>]) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let equations = linalg::integer_kernel(rays, rank);
    let basis = linalg::integer_kernel(&equations, rank);
    let coords: Vec<Vec<i64>> = rays
        .iter()
        .map(|ray| {
            let rows: Vec<Vec<Rat>> = (0..rank)
                .map(|c| basis.iter().map(|b| Rat::from_integer(b[c])).collect())
                .collect();
            let rhs: Vec<Rat> = ray.iter().map(|&x| Rat::from_integer(x)).collect();
            let sol = linalg::solve_rows(&rows, &rhs)
                .expect("ray lies in the span of its own cone");
            sol.iter()
                .map(|r| {
                    debug_assert!(r.denom().is_one(), "saturated lattice coordinates");
                    *r.numer()
                })
                .collect()
        })
        .collect();
    (basis, coords)
}

fn from_span_coords(basis: &[Vec<i64>], coords: &[i64]) -> Vec<i64> {
    let rank = basis.first().map_or(0, Vec::len);
    let mut out = vec![0i64; rank];
    for (b, &c) in basis.iter().zip(coords) {
        for (o, &x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

fn det2(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Hilbert-basis chain of a two-dimensional cone in Z^2: the rays of the
/// canonical minimal smooth subdivision, in angular order from `u` to `v`.
fn hj_chain(u: &[i64], v: &[i64]) -> Vec<Vec<i64>> {
    let orientation = det2(u, v).signum();
    assert!(orientation != 0, "degenerate 2d cone");
    // Lattice points of the closed fundamental parallelogram.
    let corners = [
        vec![0, 0],
        u.to_vec(),
        v.to_vec(),
        vec![u[0] + v[0], u[1] + v[1]],
    ];
    let lo = |i: usize| corners.iter().map(|c| c[i]).min().expect("corners");
    let hi = |i: usize| corners.iter().map(|c| c[i]).max().expect("corners");
    let d = det2(u, v);
    let mut points: BTreeSet<Vec<i64>> = BTreeSet::new();
    for x in lo(0)..=hi(0) {
        for y in lo(1)..=hi(1) {
            if x == 0 && y == 0 {
                continue;
            }
            let p = [x, y];
            // p = s u + t v with s = det(p, v)/d, t = det(u, p)/d.
            let s = Rat::new(det2(&p, v), d);
            let t = Rat::new(det2(u, &p), d);
            if is_unit_interval(&s) && is_unit_interval(&t) {
                points.insert(p.to_vec());
            }
        }
    }
    // Hilbert basis: points not expressible as a sum of two others.
    let mut chain: Vec<Vec<i64>> = points
        .iter()
        .filter(|w| {
            !points.iter().any(|a| {
                let b = vec![w[0] - a[0], w[1] - a[1]];
                b != [0, 0] && points.contains(&b)
            })
        })
        .cloned()
        .collect();
    // Strict angular order from u toward v.
    chain.sort_by(|a, b| match det2(a, b).signum() * orientation {
        1 => std::cmp::Ordering::Less,
        -1 => std::cmp::Ordering::Greater,
        _ => std::cmp::Ordering::Equal,
    });
    assert_eq!(chain.first().map(Vec::as_slice), Some(u));
    assert_eq!(chain.last().map(Vec::as_slice), Some(v));
    chain
}

#[derive(Debug, Clone)]
struct WorkCone {
    rays: Vec<usize>,
    origin: usize,
}

/// Smooth subdivision of a fan. Every input ray is an output ray; the
/// provenance map sends each new ray index to the input cone it subdivides.
pub fn resolve_fan(fan: &Fan) -> Result<(Fan, BTreeMap<usize, usize>)> {
    let rank = fan.rank();
    let mut rays = fan.rays().to_vec();
    let mut provenance: BTreeMap<usize, usize> = BTreeMap::new();

    // Simplicialize. Extra rays are never needed here: non-simplicial cones
    // are fanned out from one of their own rays.
    let mut work: Vec<WorkCone> = Vec::new();
    for (idx, cone) in fan.cones().iter().enumerate() {
        let dim = cone_dim(&rays, cone);
        if dim == cone.len() {
            work.push(WorkCone {
                rays: cone.clone(),
                origin: idx,
            });
        } else {
            for piece in simplicialize(&rays, cone, dim, idx)? {
                work.push(WorkCone {
                    rays: piece,
                    origin: idx,
                });
            }
        }
    }

    // Main loop: subdivide a worst-multiplicity cone at a fundamental-
    // parallelepiped lattice point; two-dimensional cones use the adjacent
    // Hilbert-chain point so the result is the canonical minimal resolution.
    loop {
        let mut worst: Option<(usize, i64)> = None;
        for (i, wc) in work.iter().enumerate() {
            let m = multiplicity(rank, &rays, &wc.rays);
            if m > 1 && worst.is_none_or(|(_, wm)| m > wm) {
                worst = Some((i, m));
            }
        }
        let Some((ci, _)) = worst else { break };
        let wc = work[ci].clone();
        let (basis, coords) = span_lattice(rank, &ray_vecs(&rays, &wc.rays));
        let nu = if wc.rays.len() == 2 {
            let chain = hj_chain(&coords[0], &coords[1]);
            from_span_coords(&basis, &chain[1])
        } else {
            let p = shortest_pp_point(&basis, &coords);
            linalg::primitive(&p)
        };
        let nu = linalg::primitive(&nu);
        let nu_idx = rays.len();
        rays.push(nu.clone());
        provenance.insert(nu_idx, wc.origin);
        work = stellar_subdivide(&rays, work, nu_idx);
    }

    let mut cones: Vec<Vec<usize>> = work.iter().map(|w| w.rays.clone()).collect();
    for c in &mut cones {
        c.sort_unstable();
    }
    cones.sort();
    cones.dedup();
    let out = Fan::new(rank, rays, cones)?;
    for i in 0..out.cones().len() {
        assert!(is_smooth_cone(&out, i)?, "resolution left a singular cone");
    }
    Ok((out, provenance))
}

fn ray_vecs(rays: &[Vec<i64>], cone: &[usize]) -> Vec<Vec<i64>> {
    cone.iter().map(|&i| rays[i].clone()).collect()
}

/// Multiplicity of a simplicial cone: index of the sublattice its rays span
/// inside the saturated lattice of their rational span. 1 means smooth.
fn multiplicity(rank: usize, rays: &[Vec<i64>], cone: &[usize]) -> i64 {
    if cone.is_empty() {
        return 1;
    }
    let (_, coords) = span_lattice(rank, &ray_vecs(rays, cone));
    let d = linalg::det_i64(&coords);
    debug_assert!(d.denom().is_one());
    d.numer().abs()
}

/// Shortest nonzero lattice point of the half-open fundamental
/// parallelepiped, mapped to ambient coordinates. Ties break lexicographically.
fn shortest_pp_point(basis: &[Vec<i64>], coords: &[Vec<i64>]) -> Vec<i64> {
    let d = coords.len();
    let corners: Vec<Vec<i64>> = (0..1usize << d)
        .map(|mask| {
            let mut c = vec![0i64; d];
            for (i, ray) in coords.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    for (x, &r) in c.iter_mut().zip(ray) {
                        *x += r;
                    }
                }
            }
            c
        })
        .collect();
    let lo: Vec<i64> = (0..d)
        .map(|i| corners.iter().map(|c| c[i]).min().expect("corners"))
        .collect();
    let hi: Vec<i64> = (0..d)
        .map(|i| corners.iter().map(|c| c[i]).max().expect("corners"))
        .collect();
    let cmat: Vec<Vec<Rat>> = (0..d)
        .map(|r| (0..d).map(|c| Rat::from_integer(coords[c][r])).collect())
        .collect();
    let cinv = linalg::invert(&cmat).expect("simplicial cone");
    let mut best: Option<(i64, Vec<i64>, Vec<i64>)> = None;
    let mut cursor = lo.clone();
    'outer: loop {
        let x = cursor.clone();
        if x.iter().any(|&c| c != 0) {
            let t = linalg::mat_vec(
                &cinv,
                &x.iter().map(|&c| Rat::from_integer(c)).collect::<Vec<_>>(),
            );
            if t.iter().all(|ti| !ti.is_negative() && *ti < Rat::one()) {
                let ambient = from_span_coords(basis, &x);
                let len2: i64 = ambient.iter().map(|c| c * c).sum();
                let key = (len2, ambient.clone());
                if best
                    .as_ref()
                    .is_none_or(|(bl, ba, _)| key < (*bl, ba.clone()))
                {
                    best = Some((len2, ambient, x));
                }
            }
        }
        // Advance the box cursor.
        for i in 0..d {
            cursor[i] += 1;
            if cursor[i] <= hi[i] {
                continue 'outer;
            }
            cursor[i] = lo[i];
        }
        break;
    }
    best.expect("singular cone has a parallelepiped lattice point").1
}

/// Inserts a lattice point (made primitive) as a ray of a simplicial fan by
/// stellar subdivision. Returns the new fan, a map from new-fan cone index to
/// input cone index, and the ray's index. A no-op when the point already
/// generates a ray.
pub fn stellar_insert(fan: &Fan, point: &[i64]) -> Result<(Fan, Vec<usize>, usize)> {
    if point.len() != fan.rank() {
        return Err(Error::DimensionMismatch);
    }
    if point.iter().all(|&c| c == 0) {
        return Err(Error::InvalidFan("cannot insert the zero ray".into()));
    }
    if let Some(idx) = fan.cones().iter().position(|c| cone_dim(fan.rays(), c) != c.len()) {
        return Err(Error::NonSimplicial(idx));
    }
    let prim = linalg::primitive(point);
    if let Some(ri) = fan.rays().iter().position(|r| *r == prim) {
        let origins: Vec<usize> = (0..fan.cones().len()).collect();
        return Ok((fan.clone(), origins, ri));
    }
    let mut rays = fan.rays().to_vec();
    let nu_idx = rays.len();
    rays.push(prim.clone());
    let mut cones = Vec::new();
    let mut origins = Vec::new();
    for (idx, cone) in fan.cones().iter().enumerate() {
        match cone_coordinates(&rays, cone, &prim) {
            None => {
                cones.push(cone.clone());
                origins.push(idx);
            }
            Some(t) => {
                for (i, ti) in t.iter().enumerate() {
                    if ti.is_positive() {
                        let mut child = cone.clone();
                        child[i] = nu_idx;
                        cones.push(child);
                        origins.push(idx);
                    }
                }
            }
        }
    }
    Ok((Fan::new(fan.rank(), rays, cones)?, origins, nu_idx))
}

/// Replaces every work cone containing the new ray by its star around it.
fn stellar_subdivide(rays: &[Vec<i64>], work: Vec<WorkCone>, nu_idx: usize) -> Vec<WorkCone> {
    let nu = &rays[nu_idx];
    let mut out = Vec::with_capacity(work.len());
    for wc in work {
        match cone_coordinates(rays, &wc.rays, nu) {
            None => out.push(wc),
            Some(t) => {
                if wc.rays.contains(&nu_idx) {
                    out.push(wc);
                    continue;
                }
                for (i, ti) in t.iter().enumerate() {
                    if ti.is_positive() {
                        let mut child = wc.rays.clone();
                        child[i] = nu_idx;
                        out.push(WorkCone {
                            rays: child,
                            origin: wc.origin,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Fans a non-simplicial cone out from one of its rays. Supported for cones
/// of dimension <= 3.
fn simplicialize(
    rays: &[Vec<i64>],
    cone: &[usize],
    dim: usize,
    idx: usize,
) -> Result<Vec<Vec<usize>>> {
    match dim {
        0 | 1 => Err(Error::InvalidFan(format!(
            "cone {idx} is not strongly convex"
        ))),
        2 => {
            // Extra rays inside a planar cone: order angularly and chain.
            let (_, coords) = span_lattice(rays[cone[0]].len(), &ray_vecs(rays, cone));
            let mut order: Vec<usize> = (0..cone.len()).collect();
            // All rays lie in a halfplane iff the cone is pointed.
            order.sort_by(|&a, &b| match det2(&coords[a], &coords[b]).signum() {
                1 => std::cmp::Ordering::Less,
                -1 => std::cmp::Ordering::Greater,
                _ => std::cmp::Ordering::Equal,
            });
            if det2(&coords[order[0]], &coords[*order.last().expect("nonempty")]) <= 0 {
                return Err(Error::InvalidFan(format!(
                    "cone {idx} is not strongly convex"
                )));
            }
            Ok(order
                .windows(2)
                .map(|w| vec![cone[w[0]], cone[w[1]]])
                .collect())
        }
        3 => {
            // Cone over a polygon: find a functional positive on all rays,
            // order the rays around the cross-section, fan from ray 0.
            let vecs = ray_vecs(rays, cone);
            let phi = positive_functional(&vecs).ok_or_else(|| {
                Error::Unsupported(format!(
                    "cannot order the rays of non-simplicial cone {idx}"
                ))
            })?;
            let section: Vec<Vec<Rat>> = vecs
                .iter()
                .map(|v| {
                    let h: Rat = v
                        .iter()
                        .zip(&phi)
                        .map(|(&x, p)| Rat::from_integer(x) * *p)
                        .sum();
                    v.iter().map(|&x| Rat::from_integer(x) / h).collect()
                })
                .collect();
            // `order` starts at the anchor, so fanning out over consecutive
            // pairs of the rest triangulates the polygon.
            let order = polygon_order(&section, idx)?;
            let anchor = order[0];
            Ok(order[1..]
                .windows(2)
                .map(|w| vec![cone[anchor], cone[w[0]], cone[w[1]]])
                .collect())
        }
        _ => Err(Error::Unsupported(format!(
            "non-simplicial cone {idx} of dimension {dim}"
        ))),
    }
}

/// A rational functional strictly positive on all given vectors, if one of
/// the two cheap candidates works.
fn positive_functional(vecs: &[Vec<i64>]) -> Option<Vec<Rat>> {
    let rank = vecs.first()?.len();
    // Candidate 1: solve phi . v = 1 for all v.
    let rows: Vec<Vec<Rat>> = vecs
        .iter()
        .map(|v| v.iter().map(|&x| Rat::from_integer(x)).collect())
        .collect();
    let rhs = vec![Rat::one(); vecs.len()];
    if let Some(phi) = linalg::solve_rows(&rows, &rhs) {
        let ok = vecs.iter().all(|v| {
            v.iter()
                .zip(&phi)
                .map(|(&x, p)| Rat::from_integer(x) * *p)
                .sum::<Rat>()
                .is_positive()
        });
        if ok {
            return Some(phi);
        }
    }
    // Candidate 2: the sum of the rays, paired via the standard dot product.
    let sum: Vec<Rat> = (0..rank)
        .map(|c| Rat::from_integer(vecs.iter().map(|v| v[c]).sum::<i64>()))
        .collect();
    let ok = vecs.iter().all(|v| {
        v.iter()
            .zip(&sum)
            .map(|(&x, p)| Rat::from_integer(x) * *p)
            .sum::<Rat>()
            .is_positive()
    });
    ok.then_some(sum)
}

/// Cyclic order of coplanar points around their centroid, starting at point 0.
fn polygon_order(points: &[Vec<Rat>], idx: usize) -> Result<Vec<usize>> {
    let n = points.len();
    let rank = points[0].len();
    let centroid: Vec<Rat> = (0..rank)
        .map(|c| points.iter().map(|p| p[c]).sum::<Rat>() / Rat::from_integer(n as i64))
        .collect();
    // Use two independent direction vectors in the section plane.
    let rel: Vec<Vec<Rat>> = points
        .iter()
        .map(|p| p.iter().zip(&centroid).map(|(a, b)| *a - *b).collect())
        .collect();
    let e1 = rel[0].clone();
    let e2 = rel
        .iter()
        .find(|r| {
            // Independent from e1: some 2x2 minor nonzero.
            (0..rank).any(|i| {
                (i + 1..rank).any(|j| (e1[i] * r[j] - e1[j] * r[i]) != Rat::zero())
            })
        })
        .cloned()
        .ok_or_else(|| Error::InvalidFan(format!("degenerate cross-section in cone {idx}")))?;
    // Planar coordinates by least squares against (e1, e2): exact solve.
    let coords2: Vec<(Rat, Rat)> = rel
        .iter()
        .map(|r| {
            let rows: Vec<Vec<Rat>> = (0..rank).map(|c| vec![e1[c], e2[c]]).collect();
            let sol = linalg::solve_rows(&rows, r).ok_or(())?;
            Ok((sol[0], sol[1]))
        })
        .collect::<std::result::Result<_, ()>>()
        .map_err(|()| Error::InvalidFan(format!("non-planar cross-section in cone {idx}")))?;
    let half = |p: &(Rat, Rat)| -> u8 {
        // Half-plane split for exact angular comparison.
        u8::from(p.1.is_negative() || (p.1.is_zero() && p.0.is_negative()))
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (&coords2[a], &coords2[b]);
        half(pa).cmp(&half(pb)).then_with(|| {
            let cross = pa.0 * pb.1 - pa.1 * pb.0;
            if cross.is_positive() {
                std::cmp::Ordering::Less
            } else if cross.is_negative() {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        })
    });
    // Rotate so the order starts at index 0.
    let start = order.iter().position(|&i| i == 0).expect("present");
    order.rotate_left(start);
    Ok(order)
}

/// A Q-Cartier divisor as per-maximal-cone linear functionals agreeing with
/// the given ray values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLDivisor {
    functionals: Vec<Vec<Rat>>,
    ray_values: Vec<Rat>,
}

impl PLDivisor {
    pub fn functionals(&self) -> &[Vec<Rat>] {
        &self.functionals
    }

    pub fn ray_values(&self) -> &[Rat] {
        &self.ray_values
    }

    pub fn eval_in_cone(&self, cone_idx: usize, point: &[i64]) -> Rat {
        self.functionals[cone_idx]
            .iter()
            .zip(point)
            .map(|(m, &x)| *m * Rat::from_integer(x))
            .sum()
    }
}

/// Solves for the per-cone linear functionals of a divisor given by ray
/// values; fails with the offending cone when the divisor is not Q-Cartier.
pub fn pl_function(fan: &Fan, ray_values: &[Rat]) -> Result<PLDivisor> {
    pl_function_with_constraints(fan, ray_values, &[])
}

/// Extra interpolation constraints: (lattice point, value, cone ids the
/// constraint applies to). Used for colors of horospherical fans.
pub fn pl_function_with_constraints(
    fan: &Fan,
    ray_values: &[Rat],
    extra: &[(Vec<i64>, Rat, Vec<usize>)],
) -> Result<PLDivisor> {
    if ray_values.len() != fan.rays().len() {
        return Err(Error::DimensionMismatch);
    }
    let mut functionals = Vec::with_capacity(fan.cones().len());
    for (idx, cone) in fan.cones().iter().enumerate() {
        let mut rows: Vec<Vec<Rat>> = cone
            .iter()
            .map(|&i| fan.rays()[i].iter().map(|&x| Rat::from_integer(x)).collect())
            .collect();
        let mut rhs: Vec<Rat> = cone.iter().map(|&i| ray_values[i]).collect();
        for (point, value, cone_ids) in extra {
            if cone_ids.contains(&idx) {
                rows.push(point.iter().map(|&x| Rat::from_integer(x)).collect());
                rhs.push(*value);
            }
        }
        if rows.is_empty() {
            functionals.push(vec![Rat::zero(); fan.rank()]);
            continue;
        }
        let m = linalg::solve_rows(&rows, &rhs).ok_or(Error::NotQCartier(idx))?;
        functionals.push(m);
    }
    Ok(PLDivisor {
        functionals,
        ray_values: ray_values.to_vec(),
    })
}

/// Boundary coefficients d_i on the G-stable divisors, one per ray, in [0,1].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ToricBoundary(Vec<Rat>);

impl ToricBoundary {
    pub fn new(coeffs: Vec<Rat>) -> Result<Self> {
        for c in &coeffs {
            if !is_unit_interval(c) {
                return Err(Error::CoefficientOutOfRange(format!(
                    "d = {}",
                    rat_to_string(c)
                )));
            }
        }
        Ok(ToricBoundary(coeffs))
    }

    pub fn zeros(n: usize) -> Self {
        ToricBoundary(vec![Rat::zero(); n])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn floor_is_zero(&self) -> bool {
        self.0.iter().all(|c| *c < Rat::one())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricDiscrepancies {
    pub ledger: DiscrepancyLedger,
    /// Whether the pull-back of -K_X - D is strictly effective (positive PL
    /// value at every original ray); implies every discrepancy is > -1.
    pub strictly_effective: bool,
}

/// Discrepancies of the resolution: for each new ray v with provenance cone
/// sigma, a_v = psi(v) - 1 with psi the PL function of -K_X - D (ray values
/// 1 - d_i) extended linearly on sigma.
pub fn toric_discrepancies(
    fan: &Fan,
    resolved: &Fan,
    provenance: &BTreeMap<usize, usize>,
    d: &ToricBoundary,
) -> Result<ToricDiscrepancies> {
    if d.coeffs().len() != fan.rays().len() {
        return Err(Error::DimensionMismatch);
    }
    let values: Vec<Rat> = d.coeffs().iter().map(|c| Rat::one() - *c).collect();
    let psi = pl_function(fan, &values)?;
    let mut entries = Vec::new();
    for (&ray_idx, &cone_idx) in provenance {
        let v = &resolved.rays()[ray_idx];
        let a = psi.eval_in_cone(cone_idx, v) - Rat::one();
        entries.push(LedgerEntry {
            id: format!(
                "toric:({})",
                v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
            ),
            kind: DivisorKind::ToricExceptional,
            discrepancy: a,
        });
    }
    Ok(ToricDiscrepancies {
        ledger: DiscrepancyLedger { entries },
        strictly_effective: values.iter().all(Signed::is_positive),
    })
}

/// On-disk fan schema: `{rank, rays, cones, d: ["p/q", ...]}`.
#[derive(Debug, Clone, Deserialize)]
pub struct FanFile {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
    #[serde(default)]
    pub d: Option<Vec<String>>,
}

impl FanFile {
    pub fn parse(text: &str) -> Result<(Fan, Option<ToricBoundary>)> {
        let file: FanFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let fan = Fan::new(file.rank, file.rays, file.cones)?;
        let d = match file.d {
            None => None,
            Some(strings) => {
                let coeffs: Vec<Rat> = strings
                    .iter()
                    .map(|s| parse_rat(s))
                    .collect::<Result<_>>()?;
                Some(ToricBoundary::new(coeffs)?)
            }
        };
        Ok((fan, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn fan2(rays: &[[i64; 2]], cones: &[&[usize]]) -> Fan {
        Fan::new(
            2,
            rays.iter().map(|r| r.to_vec()).collect(),
            cones.iter().map(|c| c.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn smoothness_examples() {
        let f = fan2(&[[1, 0], [0, 1]], &[&[0, 1]]);
        assert!(is_smooth_cone(&f, 0).unwrap());
        let f = fan2(&[[1, 0], [1, 2]], &[&[0, 1]]);
        assert!(!is_smooth_cone(&f, 0).unwrap());
        let f = Fan::new(
            3,
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        assert!(!is_smooth_cone(&f, 0).unwrap());
        // Lower-dimensional smooth cone via gcd of maximal minors.
        let f = Fan::new(3, vec![vec![1, 0, 0], vec![0, 1, 1]], vec![vec![0, 1]]).unwrap();
        assert!(is_smooth_cone(&f, 0).unwrap());
        let f = Fan::new(3, vec![vec![1, 1, 0], vec![1, -1, 0]], vec![vec![0, 1]]).unwrap();
        assert!(!is_smooth_cone(&f, 0).unwrap());
    }

    #[test]
    fn fan_validation() {
        assert!(Fan::new(2, vec![vec![2, 4]], vec![vec![0]]).is_err());
        assert!(Fan::new(2, vec![vec![0, 0]], vec![vec![0]]).is_err());
        assert!(Fan::new(2, vec![vec![1, 0]], vec![vec![1]]).is_err());
        // Overlapping interiors rejected in rank 2.
        let bad = Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![1, 1]],
            vec![vec![0, 1], vec![0, 2]],
        );
        assert!(matches!(bad, Err(Error::InvalidFan(_))));
        // A proper subdivision is fine.
        let good = Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![1, 1]],
            vec![vec![0, 2], vec![1, 2]],
        )
        .unwrap();
        assert!(good.intersections_validated());
    }

    #[test]
    fn hj_resolution_examples() {
        // Smooth input: unchanged.
        let f = fan2(&[[1, 0], [0, 1]], &[&[0, 1]]);
        let (r, prov) = resolve_fan(&f).unwrap();
        assert_eq!(r.rays().len(), 2);
        assert!(prov.is_empty());

        // (1,0),(1,2): one new ray (1,1).
        let f = fan2(&[[1, 0], [1, 2]], &[&[0, 1]]);
        let (r, prov) = resolve_fan(&f).unwrap();
        assert_eq!(r.rays().len(), 3);
        assert_eq!(r.rays()[2], vec![1, 1]);
        assert_eq!(prov, [(2usize, 0usize)].into_iter().collect());

        // (1,0),(1,3): new rays (1,1),(1,2).
        let f = fan2(&[[1, 0], [1, 3]], &[&[0, 1]]);
        let (r, _) = resolve_fan(&f).unwrap();
        let new: BTreeSet<Vec<i64>> = r.rays()[2..].iter().cloned().collect();
        assert_eq!(new, [vec![1, 1], vec![1, 2]].into_iter().collect());
    }

    #[test]
    fn hj_chain_counts() {
        // (1,0),(1,n) resolves with exactly n-1 new rays (1,k).
        for n in 2..=12 {
            let f = fan2(&[[1, 0], [1, n]], &[&[0, 1]]);
            let (r, prov) = resolve_fan(&f).unwrap();
            assert_eq!(prov.len() as i64, n - 1, "n = {n}");
            for k in 1..n {
                assert!(r.rays().contains(&vec![1, k]), "missing (1,{k})");
            }
        }
    }

    #[test]
    fn refinement_property() {
        let f = fan2(&[[1, 0], [2, 3], [-1, 1]], &[&[0, 1], &[1, 2]]);
        let (r, prov) = resolve_fan(&f).unwrap();
        // Every original ray survives with its index.
        assert_eq!(&r.rays()[..3], f.rays());
        // Every new cone lies inside some input cone.
        for cone in r.cones() {
            let found = f.cones().iter().any(|orig| {
                cone.iter().all(|&ri| {
                    f.cone_coordinates(orig, &r.rays()[ri]).is_some()
                })
            });
            assert!(found, "cone {cone:?} escapes the input fan");
        }
        // New rays land in the cone their provenance names.
        for (&ray, &cone) in &prov {
            assert!(f
                .cone_coordinates(&f.cones()[cone], &r.rays()[ray])
                .is_some());
        }
    }

    #[test]
    fn stellar_rank3() {
        // Quadric cone point: (1,0,0),(0,1,0),(1,1,2) has multiplicity 2.
        let f = Fan::new(
            3,
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        let (r, prov) = resolve_fan(&f).unwrap();
        for i in 0..r.cones().len() {
            assert!(is_smooth_cone(&r, i).unwrap());
        }
        assert!(!prov.is_empty());
        for (&ray, _) in &prov {
            assert!(f.cone_coordinates(&f.cones()[0], &r.rays()[ray]).is_some());
        }
    }

    #[test]
    fn pl_function_examples() {
        let f = fan2(&[[1, 0], [1, 2]], &[&[0, 1]]);
        // All zero values: zero functional.
        let psi = pl_function(&f, &[rat(0, 1), rat(0, 1)]).unwrap();
        assert_eq!(psi.functionals()[0], vec![rat(0, 1), rat(0, 1)]);
        // Values (1,1): functional x.
        let psi = pl_function(&f, &[rat(1, 1), rat(1, 1)]).unwrap();
        assert_eq!(psi.functionals()[0], vec![rat(1, 1), rat(0, 1)]);
        assert_eq!(psi.eval_in_cone(0, &[1, 1]), rat(1, 1));
        // Round-trip at the rays.
        for (i, ray) in f.rays().iter().enumerate() {
            assert_eq!(psi.eval_in_cone(0, ray), psi.ray_values()[i]);
        }
        // Non-Q-Cartier on the cone over the unit square.
        let f = Fan::new(
            3,
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 1]],
            vec![vec![0, 1, 2, 3]],
        )
        .unwrap();
        assert!(!f.all_simplicial());
        let err = pl_function(&f, &[rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)]);
        assert_eq!(err, Err(Error::NotQCartier(0)));
    }

    #[test]
    fn discrepancy_examples() {
        // Smooth fan: empty ledger.
        let f = fan2(&[[1, 0], [0, 1]], &[&[0, 1]]);
        let (r, prov) = resolve_fan(&f).unwrap();
        let t = toric_discrepancies(&f, &r, &prov, &ToricBoundary::zeros(2)).unwrap();
        assert!(t.ledger.entries.is_empty());
        assert!(t.strictly_effective);

        // A_1 cone, d = 0: discrepancy 0 on (1,1).
        let f = fan2(&[[1, 0], [1, 2]], &[&[0, 1]]);
        let (r, prov) = resolve_fan(&f).unwrap();
        let t = toric_discrepancies(&f, &r, &prov, &ToricBoundary::zeros(2)).unwrap();
        assert_eq!(t.ledger.entries.len(), 1);
        assert_eq!(t.ledger.entries[0].discrepancy, rat(0, 1));

        // Same cone, d = 1/2 on both rays: discrepancy -1/2.
        let d = ToricBoundary::new(vec![rat(1, 2), rat(1, 2)]).unwrap();
        let t = toric_discrepancies(&f, &r, &prov, &d).unwrap();
        assert_eq!(t.ledger.entries[0].discrepancy, rat(-1, 2));
        assert!(t.strictly_effective);

        // d = 1 on both rays: discrepancy exactly -1, not strictly effective.
        let d = ToricBoundary::new(vec![rat(1, 1), rat(1, 1)]).unwrap();
        let t = toric_discrepancies(&f, &r, &prov, &d).unwrap();
        assert_eq!(t.ledger.entries[0].discrepancy, rat(-1, 1));
        assert!(!t.strictly_effective);
    }

    #[test]
    fn hj_discrepancies_canonical() {
        // A_{n-1} singularities are canonical: all discrepancies 0 at d = 0.
        for n in 2..=12 {
            let f = fan2(&[[1, 0], [1, n]], &[&[0, 1]]);
            let (r, prov) = resolve_fan(&f).unwrap();
            let t = toric_discrepancies(&f, &r, &prov, &ToricBoundary::zeros(2)).unwrap();
            assert!(t
                .ledger
                .entries
                .iter()
                .all(|e| e.discrepancy == rat(0, 1)));
        }
    }

    #[test]
    fn non_simplicial_resolution() {
        // The cone over the unit square splits into two smooth triangles.
        let f = Fan::new(
            3,
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 1]],
            vec![vec![0, 1, 2, 3]],
        )
        .unwrap();
        let (r, prov) = resolve_fan(&f).unwrap();
        assert!(prov.is_empty());
        assert_eq!(r.cones().len(), 2);
        for i in 0..r.cones().len() {
            assert!(is_smooth_cone(&r, i).unwrap());
        }
    }

    #[test]
    fn rank_cap() {
        assert!(matches!(
            Fan::new(5, vec![], vec![]),
            Err(Error::RankCapExceeded(5))
        ));
    }

    #[test]
    fn fan_file_parse() {
        let (fan, d) = FanFile::parse(
            r#"{"rank":2,"rays":[[1,0],[1,2]],"cones":[[0,1]],"d":["1/2","0"]}"#,
        )
        .unwrap();
        assert_eq!(fan.rays().len(), 2);
        assert_eq!(d.unwrap().coeffs(), &[rat(1, 2), rat(0, 1)]);
        assert!(FanFile::parse(r#"{"rank":2,"rays":[[1,0]],"cones":[[0]],"d":["0.5"]}"#).is_err());
    }
}
