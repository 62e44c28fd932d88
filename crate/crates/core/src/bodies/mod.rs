//! Convex bodies with exact support, width, membership, chord and volume.
//!
//! Every body is validated at construction and immutable afterwards. Degenerate
//! (lower-dimensional) bodies are rejected; thin limits are modelled as
//! families of full-dimensional bodies instead.

mod polytope;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

pub use polytope::Halfspace;

use crate::error::{Error, Result};
use crate::linalg::{det, distance, dot, invert, rank, sub};
use crate::special::unit_ball_volume;

/// Tolerance on `|u| = 1` for direction arguments.
pub const UNIT_TOL: f64 = 1e-12;

/// Slack with which boundary points of a vertex-described polytope count as
/// inside.
pub const VPOLYTOPE_BOUNDARY_TOL: f64 = 1e-10;

/// Barycentric slack for simplex membership; absorbs rounding only.
const SIMPLEX_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum BodyKind {
    Ball { center: Vec<f64>, radius: f64 },
    /// Axis-aligned ellipsoid.
    Ellipsoid { center: Vec<f64>, semi_axes: Vec<f64> },
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Simplex { vertices: Vec<Vec<f64>> },
    VPolytope { vertices: Vec<Vec<f64>> },
    /// Planar, centred at the origin, vertex 0 at angle 0.
    RegularPolygon { n_sides: usize, circumradius: f64 },
}

#[derive(Debug, Clone)]
enum Derived {
    None,
    /// `λ = A x + c`, one row per vertex; the body is `{λ ≥ 0}`.
    Simplex {
        bary: Vec<Vec<f64>>,
        bary_offset: Vec<f64>,
        hull: Vec<Halfspace>,
        volume: f64,
    },
    Polytope {
        vertices: Vec<Vec<f64>>,
        hull: Vec<Halfspace>,
        volume: f64,
    },
}

#[derive(Debug, Clone)]
pub struct ConvexBody {
    kind: BodyKind,
    dim: usize,
    derived: Derived,
}

impl PartialEq for ConvexBody {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

fn check_finite(field: &'static str, xs: &[f64]) -> Result<()> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::invalid(field, "coordinates must be finite"))
    }
}

fn check_points(field: &'static str, pts: &[Vec<f64>]) -> Result<usize> {
    let d = pts
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::invalid(field, "no vertices given"))?;
    if d == 0 {
        return Err(Error::invalid(field, "vertices must have at least one coordinate"));
    }
    for p in pts {
        if p.len() != d {
            return Err(Error::invalid(field, "vertices have inconsistent dimensions"));
        }
        check_finite(field, p)?;
    }
    Ok(d)
}

impl ConvexBody {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::invalid("center", "dimension must be at least 1"));
        }
        check_finite("center", &center)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("radius", format!("must be positive, got {radius}")));
        }
        let dim = center.len();
        Ok(Self { kind: BodyKind::Ball { center, radius }, dim, derived: Derived::None })
    }

    /// The unit ball centred at the origin.
    pub fn unit_ball(d: usize) -> Result<Self> {
        Self::ball(vec![0.0; d], 1.0)
    }

    pub fn ellipsoid(center: Vec<f64>, semi_axes: Vec<f64>) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::invalid("center", "dimension must be at least 1"));
        }
        if center.len() != semi_axes.len() {
            return Err(Error::invalid(
                "semi_axes",
                format!("expected {} semi-axes, got {}", center.len(), semi_axes.len()),
            ));
        }
        check_finite("center", &center)?;
        if semi_axes.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
            return Err(Error::invalid("semi_axes", "all semi-axes must be positive"));
        }
        let dim = center.len();
        Ok(Self {
            kind: BodyKind::Ellipsoid { center, semi_axes },
            dim,
            derived: Derived::None,
        })
    }

    pub fn cuboid(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::invalid("upper", "lower and upper must have the same positive length"));
        }
        check_finite("lower", &lower)?;
        check_finite("upper", &upper)?;
        if let Some(k) = (0..lower.len()).find(|&k| !(lower[k] < upper[k])) {
            return Err(Error::invalid(
                "upper",
                format!("degenerate box: lower[{k}] = {} is not below upper[{k}] = {}", lower[k], upper[k]),
            ));
        }
        let dim = lower.len();
        Ok(Self { kind: BodyKind::Box { lower, upper }, dim, derived: Derived::None })
    }

    pub fn unit_cube(d: usize) -> Result<Self> {
        Self::cuboid(vec![0.0; d], vec![1.0; d])
    }

    pub fn simplex(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let d = check_points("vertices", &vertices)?;
        if vertices.len() != d + 1 {
            return Err(Error::invalid(
                "vertices",
                format!("a simplex in R^{d} needs {} vertices, got {}", d + 1, vertices.len()),
            ));
        }
        let v0 = &vertices[0];
        // Edge matrix with edges as columns.
        let mut m = vec![0.0; d * d];
        for (j, v) in vertices[1..].iter().enumerate() {
            for i in 0..d {
                m[i * d + j] = v[i] - v0[i];
            }
        }
        let factorial: f64 = (1..=d).map(|k| k as f64).product();
        let volume = libm::fabs(det(m.clone(), d)) / factorial;
        let scale = polytope::extent(&vertices);
        if !(volume > 1e-14 * libm::pow(scale, d as f64)) {
            return Err(Error::invalid("vertices", "simplex vertices are affinely dependent (zero volume)"));
        }
        let inv = invert(&m, d)
            .ok_or_else(|| Error::invalid("vertices", "simplex vertices are affinely dependent (zero volume)"))?;
        // λ_j = (M⁻¹ (x - v0))_j for j ≥ 1, λ_0 = 1 - Σ λ_j.
        let mut bary = Vec::with_capacity(d + 1);
        let mut bary_offset = Vec::with_capacity(d + 1);
        let mut row0 = vec![0.0; d];
        let mut off0 = 1.0;
        for j in 0..d {
            let row: Vec<f64> = (0..d).map(|k| inv[j * d + k]).collect();
            let off = -dot(&row, v0);
            for k in 0..d {
                row0[k] -= row[k];
            }
            off0 -= off;
            bary.push(row);
            bary_offset.push(off);
        }
        bary.insert(0, row0);
        bary_offset.insert(0, off0);
        let hull = bary
            .iter()
            .zip(&bary_offset)
            .map(|(row, off)| {
                let len = libm::sqrt(dot(row, row));
                Halfspace {
                    normal: row.iter().map(|v| -v / len).collect(),
                    offset: off / len,
                }
            })
            .collect();
        Ok(Self {
            kind: BodyKind::Simplex { vertices },
            dim: d,
            derived: Derived::Simplex { bary, bary_offset, hull, volume },
        })
    }

    pub fn vpolytope(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let d = check_points("vertices", &vertices)?;
        if vertices.len() < d + 1 {
            return Err(Error::invalid(
                "vertices",
                format!("need at least {} vertices in R^{d}, got {}", d + 1, vertices.len()),
            ));
        }
        let edges: Vec<Vec<f64>> = vertices[1..].iter().map(|v| sub(v, &vertices[0])).collect();
        if rank(&edges, 1e-10) < d {
            return Err(Error::invalid("vertices", "affine hull is not full-dimensional (empty interior)"));
        }
        let hull = polytope::facets(&vertices);
        let volume = polytope::volume(&vertices, &hull);
        Ok(Self {
            kind: BodyKind::VPolytope { vertices: vertices.clone() },
            dim: d,
            derived: Derived::Polytope { vertices, hull, volume },
        })
    }

    pub fn regular_polygon(n_sides: usize, circumradius: f64) -> Result<Self> {
        if n_sides < 3 {
            return Err(Error::invalid("n", format!("a polygon needs at least 3 sides, got {n_sides}")));
        }
        if !(circumradius > 0.0 && circumradius.is_finite()) {
            return Err(Error::invalid("circumradius", "must be positive"));
        }
        let vertices = polygon_vertices(n_sides, circumradius);
        let hull = polytope::facets(&vertices);
        let volume = 0.5 * n_sides as f64 * circumradius * circumradius * libm::sin(2.0 * PI / n_sides as f64);
        Ok(Self {
            kind: BodyKind::RegularPolygon { n_sides, circumradius },
            dim: 2,
            derived: Derived::Polytope { vertices, hull, volume },
        })
    }

    pub fn kind(&self) -> &BodyKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertex list for polytopal kinds (boxes enumerate their `2^d` corners).
    pub fn vertices(&self) -> Option<Vec<Vec<f64>>> {
        match (&self.kind, &self.derived) {
            (BodyKind::Simplex { vertices }, _) => Some(vertices.clone()),
            (_, Derived::Polytope { vertices, .. }) => Some(vertices.clone()),
            (BodyKind::Box { lower, upper }, _) => Some(
                (0..1usize << self.dim)
                    .map(|m| {
                        (0..self.dim)
                            .map(|k| if (m >> k) & 1 == 1 { upper[k] } else { lower[k] })
                            .collect()
                    })
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Outer facet normals for polytopal kinds other than boxes.
    pub fn facets(&self) -> Option<&[Halfspace]> {
        match &self.derived {
            Derived::Simplex { hull, .. } | Derived::Polytope { hull, .. } => Some(hull),
            Derived::None => None,
        }
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(())
    }

    fn check_direction(&self, u: &[f64]) -> Result<()> {
        self.check_point(u)?;
        let n2 = dot(u, u);
        if libm::fabs(libm::sqrt(n2) - 1.0) > UNIT_TOL {
            return Err(Error::invalid("direction", format!("must be a unit vector, |u| = {}", libm::sqrt(n2))));
        }
        Ok(())
    }

    /// `sup_{x ∈ K} ⟨x, u⟩`.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        self.check_direction(u)?;
        Ok(self.support_unchecked(u))
    }

    pub(crate) fn support_unchecked(&self, u: &[f64]) -> f64 {
        match (&self.kind, &self.derived) {
            (BodyKind::Ball { center, radius }, _) => dot(center, u) + radius,
            (BodyKind::Ellipsoid { center, semi_axes }, _) => {
                let q: f64 = semi_axes.iter().zip(u).map(|(a, v)| a * a * v * v).sum();
                dot(center, u) + libm::sqrt(q)
            }
            (BodyKind::Box { lower, upper }, _) => lower
                .iter()
                .zip(upper)
                .zip(u)
                .map(|((l, h), v)| (l * v).max(h * v))
                .sum(),
            (BodyKind::Simplex { vertices }, _) | (_, Derived::Polytope { vertices, .. }) => {
                vertices.iter().map(|v| dot(v, u)).fold(f64::NEG_INFINITY, f64::max)
            }
            _ => unreachable!("polytope kinds carry vertices"),
        }
    }

    /// Length of the projection of the body onto the line spanned by `u`.
    pub fn width(&self, u: &[f64]) -> Result<f64> {
        self.check_direction(u)?;
        Ok(self.width_unchecked(u))
    }

    pub(crate) fn width_unchecked(&self, u: &[f64]) -> f64 {
        let neg: Vec<f64> = u.iter().map(|v| -v).collect();
        self.support_unchecked(u) + self.support_unchecked(&neg)
    }

    /// Closed membership test.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        self.check_point(x)?;
        Ok(self.contains_unchecked(x))
    }

    pub(crate) fn contains_unchecked(&self, x: &[f64]) -> bool {
        match (&self.kind, &self.derived) {
            (BodyKind::Ball { center, radius }, _) => {
                let r2: f64 = center.iter().zip(x).map(|(c, v)| (v - c) * (v - c)).sum();
                r2 <= radius * radius
            }
            (BodyKind::Ellipsoid { center, semi_axes }, _) => {
                let q: f64 = center
                    .iter()
                    .zip(semi_axes)
                    .zip(x)
                    .map(|((c, a), v)| {
                        let z = (v - c) / a;
                        z * z
                    })
                    .sum();
                q <= 1.0
            }
            (BodyKind::Box { lower, upper }, _) => {
                lower.iter().zip(upper).zip(x).all(|((l, h), v)| *l <= *v && *v <= *h)
            }
            (_, Derived::Simplex { bary, bary_offset, .. }) => bary
                .iter()
                .zip(bary_offset)
                .all(|(row, off)| dot(row, x) + off >= -SIMPLEX_TOL),
            (BodyKind::RegularPolygon { circumradius, .. }, Derived::Polytope { hull, .. }) => {
                let tol = 1e-12 * circumradius;
                hull.iter().all(|h| h.slack(x) >= -tol)
            }
            (_, Derived::Polytope { vertices, hull, .. }) => {
                let tol = VPOLYTOPE_BOUNDARY_TOL * polytope::extent(vertices).max(1.0);
                hull.iter().all(|h| h.slack(x) >= -tol)
            }
            _ => unreachable!("polytope kinds carry facets"),
        }
    }

    /// Exact volume.
    pub fn volume(&self) -> f64 {
        match (&self.kind, &self.derived) {
            (BodyKind::Ball { radius, .. }, _) => {
                unit_ball_volume(self.dim) * libm::pow(*radius, self.dim as f64)
            }
            (BodyKind::Ellipsoid { semi_axes, .. }, _) => {
                unit_ball_volume(self.dim) * semi_axes.iter().product::<f64>()
            }
            (BodyKind::Box { lower, upper }, _) => {
                lower.iter().zip(upper).map(|(l, h)| h - l).product()
            }
            (_, Derived::Simplex { volume, .. }) | (_, Derived::Polytope { volume, .. }) => *volume,
            _ => unreachable!(),
        }
    }

    /// Length of `K ∩ {x + s u : s ∈ ℝ}`; zero when the line misses.
    pub fn chord_length(&self, x: &[f64], u: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        self.check_direction(u)?;
        Ok(self.chord_unchecked(x, u))
    }

    pub(crate) fn chord_unchecked(&self, x: &[f64], u: &[f64]) -> f64 {
        match (&self.kind, &self.derived) {
            (BodyKind::Ball { center, radius }, _) => {
                let w = sub(x, center);
                let b = dot(&w, u);
                let disc = b * b - dot(&w, &w) + radius * radius;
                if disc > 0.0 {
                    2.0 * libm::sqrt(disc)
                } else {
                    0.0
                }
            }
            (BodyKind::Ellipsoid { center, semi_axes }, _) => {
                let (mut a, mut b, mut c) = (0.0, 0.0, -1.0);
                for k in 0..self.dim {
                    let z = (x[k] - center[k]) / semi_axes[k];
                    let v = u[k] / semi_axes[k];
                    a += v * v;
                    b += z * v;
                    c += z * z;
                }
                let disc = b * b - a * c;
                if disc > 0.0 {
                    2.0 * libm::sqrt(disc) / a
                } else {
                    0.0
                }
            }
            (BodyKind::Box { lower, upper }, _) => {
                let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
                for k in 0..self.dim {
                    if u[k] == 0.0 {
                        if x[k] < lower[k] || x[k] > upper[k] {
                            return 0.0;
                        }
                    } else {
                        let s1 = (lower[k] - x[k]) / u[k];
                        let s2 = (upper[k] - x[k]) / u[k];
                        lo = lo.max(s1.min(s2));
                        hi = hi.min(s1.max(s2));
                    }
                }
                (hi - lo).max(0.0)
            }
            (_, Derived::Simplex { hull, .. }) | (_, Derived::Polytope { hull, .. }) => {
                halfspace_chord(hull, x, u)
            }
            _ => unreachable!(),
        }
    }

    /// Maximal distance between two points of the body.
    pub fn diameter(&self) -> f64 {
        match &self.kind {
            BodyKind::Ball { radius, .. } => 2.0 * radius,
            BodyKind::Ellipsoid { semi_axes, .. } => 2.0 * semi_axes.iter().copied().fold(0.0, f64::max),
            BodyKind::Box { lower, upper } => distance(lower, upper),
            _ => {
                let vs = self.vertices().unwrap_or_default();
                let mut best = 0.0_f64;
                for (i, a) in vs.iter().enumerate() {
                    for b in &vs[i + 1..] {
                        best = best.max(distance(a, b));
                    }
                }
                best
            }
        }
    }

    /// Componentwise bounds of the body.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = Vec::with_capacity(self.dim);
        let mut hi = Vec::with_capacity(self.dim);
        let mut e = vec![0.0; self.dim];
        for k in 0..self.dim {
            e[k] = 1.0;
            hi.push(self.support_unchecked(&e));
            e[k] = -1.0;
            lo.push(-self.support_unchecked(&e));
            e[k] = 0.0;
        }
        (lo, hi)
    }

    /// Returns `λ K` (scaling about the origin).
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid("lambda", "scale factor must be positive"));
        }
        let sc = |v: &[f64]| v.iter().map(|x| x * lambda).collect::<Vec<f64>>();
        match &self.kind {
            BodyKind::Ball { center, radius } => Self::ball(sc(center), radius * lambda),
            BodyKind::Ellipsoid { center, semi_axes } => Self::ellipsoid(sc(center), sc(semi_axes)),
            BodyKind::Box { lower, upper } => Self::cuboid(sc(lower), sc(upper)),
            BodyKind::Simplex { vertices } => Self::simplex(vertices.iter().map(|v| sc(v)).collect()),
            BodyKind::VPolytope { vertices } => Self::vpolytope(vertices.iter().map(|v| sc(v)).collect()),
            BodyKind::RegularPolygon { n_sides, circumradius } => {
                Self::regular_polygon(*n_sides, circumradius * lambda)
            }
        }
    }

    /// Perimeter of a planar polygon (`None` for smooth or non-planar kinds).
    pub fn perimeter(&self) -> Option<f64> {
        if self.dim != 2 {
            return None;
        }
        match &self.kind {
            BodyKind::Box { lower, upper } => Some(2.0 * ((upper[0] - lower[0]) + (upper[1] - lower[1]))),
            BodyKind::Ball { radius, .. } => Some(2.0 * PI * radius),
            BodyKind::Ellipsoid { .. } => None,
            _ => {
                let mut vs = self.vertices()?;
                // Only hull vertices matter; order them by angle about the centroid.
                let hull = self.facets()?;
                let tol = 1e-9 * self.diameter();
                vs.retain(|v| hull.iter().filter(|h| libm::fabs(h.slack(v)) <= tol).count() >= 2);
                let cx = vs.iter().map(|v| v[0]).sum::<f64>() / vs.len() as f64;
                let cy = vs.iter().map(|v| v[1]).sum::<f64>() / vs.len() as f64;
                vs.sort_by(|a, b| {
                    libm::atan2(a[1] - cy, a[0] - cx).total_cmp(&libm::atan2(b[1] - cy, b[0] - cx))
                });
                Some((0..vs.len()).map(|i| distance(&vs[i], &vs[(i + 1) % vs.len()])).sum())
            }
        }
    }
}

pub(crate) fn polygon_vertices(n: usize, r: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / n as f64;
            vec![r * libm::cos(a), r * libm::sin(a)]
        })
        .collect()
}

fn halfspace_chord(hull: &[Halfspace], x: &[f64], u: &[f64]) -> f64 {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for h in hull {
        let a = dot(&h.normal, u);
        let c = h.slack(x);
        if libm::fabs(a) < 1e-15 {
            if c < 0.0 {
                return 0.0;
            }
        } else if a > 0.0 {
            hi = hi.min(c / a);
        } else {
            lo = lo.max(c / a);
        }
    }
    (hi - lo).max(0.0)
}
