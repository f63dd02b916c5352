use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest angle change between consecutive samples, in radians.
pub const MAX_ANGLE_STEP: f64 = 0.05;
/// Offset applied to integer `t`, where the plateau would lie on the axis.
pub const DEGENERACY_OFFSET: f64 = 1e-3;

/// Boundary ramp `g: [0, 1] → [0, 1]`, `g(0) = 1`, `g(1) = 0`, monotone.
#[derive(Clone)]
pub enum Ramp {
    Cosine,
    Linear,
    Custom { name: String, g: Arc<dyn Fn(f64) -> f64 + Send + Sync> },
}

impl fmt::Debug for Ramp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ramp::Cosine => write!(f, "Cosine"),
            Ramp::Linear => write!(f, "Linear"),
            Ramp::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

impl Ramp {
    pub fn eval(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match self {
            Ramp::Cosine => 0.5 * (1.0 + (PI * u).cos()),
            Ramp::Linear => 1.0 - u,
            Ramp::Custom { g, .. } => g(u),
        }
    }

    fn check(&self) -> Result<()> {
        if self.eval(0.0) != 1.0 || self.eval(1.0) != 0.0 {
            return Err(Error::OutOfRange(format!("{self:?} ramp must run from 1 to 0")));
        }
        let mut prev = 1.0;
        for i in 1..=1024 {
            let v = self.eval(i as f64 / 1024.0);
            if v > prev {
                return Err(Error::OutOfRange(format!("{self:?} ramp is not monotone")));
            }
            prev = v;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct RotationParams {
    /// Rotation amount: the inner disk turns by `πt`.
    pub t: f64,
    /// Ramp width: the angle falls from `πt` at `r = 1 − eps` to 0 at `r = 1`.
    pub eps: f64,
    pub ramp: Ramp,
    /// Base number of radial samples per half-diameter.
    pub samples: usize,
}

impl RotationParams {
    pub fn new(t: f64) -> RotationParams {
        RotationParams { t, eps: 0.05, ramp: Ramp::Cosine, samples: 1000 }
    }

    /// `t` after moving off the degenerate set.
    pub fn effective_t(&self) -> f64 {
        if self.t > 0.0 && self.t.fract() == 0.0 {
            self.t + DEGENERACY_OFFSET
        } else {
            self.t
        }
    }

    /// Rotation angle at radius `r`.
    pub fn angle(&self, r: f64) -> f64 {
        let t = self.effective_t();
        let inner = 1.0 - self.eps;
        if r <= inner {
            PI * t
        } else {
            PI * t * self.ramp.eval((r - inner) / self.eps)
        }
    }
}

/// Curve from `(−1, 0)` to `(1, 0)` through the open disk.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyline {
    pub points: Vec<[f64; 2]>,
    /// Largest angle step used when sampling.
    pub resolution: f64,
}

impl Polyline {
    pub fn straight(samples: usize) -> Polyline {
        let n = samples.max(1) * 2;
        let points = (0..=n).map(|i| [-1.0 + 2.0 * i as f64 / n as f64, 0.0]).collect();
        Polyline { points, resolution: 0.0 }
    }

    pub fn segments(&self) -> impl Iterator<Item = ([f64; 2], [f64; 2])> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Image of the standard diameter under the angle-profile rotation.
///
/// Radii are sampled on a uniform grid that never hits the center (so the
/// central crossing is never a vertex), refined wherever the angle moves by
/// more than [`MAX_ANGLE_STEP`].
pub fn rotated_diameter(p: &RotationParams) -> Result<Polyline> {
    if !(p.t >= 0.0 && p.t.is_finite()) {
        return Err(Error::OutOfRange(format!("t = {} must be finite and nonnegative", p.t)));
    }
    if !(p.eps > 0.0 && p.eps < 1.0) {
        return Err(Error::OutOfRange(format!("eps = {} must lie in (0, 1)", p.eps)));
    }
    if p.samples < 2 {
        return Err(Error::OutOfRange("need at least 2 samples".into()));
    }
    p.ramp.check()?;
    if p.t == 0.0 {
        return Ok(Polyline::straight(p.samples));
    }
    let mut radii = Vec::new();
    let base: Vec<f64> = (0..p.samples).map(|i| (i as f64 + 0.5) / p.samples as f64).chain([1.0]).collect();
    fn refine(p: &RotationParams, r0: f64, r1: f64, out: &mut Vec<f64>) {
        if (p.angle(r1) - p.angle(r0)).abs() <= MAX_ANGLE_STEP || r1 - r0 < 1e-12 {
            out.push(r0);
        } else {
            let mid = 0.5 * (r0 + r1);
            refine(p, r0, mid, out);
            refine(p, mid, r1, out);
        }
    }
    for w in base.windows(2) {
        refine(p, w[0], w[1], &mut radii);
    }
    radii.push(1.0);
    let point = |r: f64, base_angle: f64| {
        let a = base_angle + p.angle(r);
        [r * a.cos(), r * a.sin()]
    };
    let mut points: Vec<[f64; 2]> = radii.iter().rev().map(|&r| point(r, PI)).collect();
    points.extend(radii.iter().map(|&r| point(r, 0.0)));
    // pin the endpoints exactly
    points[0] = [-1.0, 0.0];
    *points.last_mut().expect("nonempty") = [1.0, 0.0];
    let poly = Polyline { points, resolution: MAX_ANGLE_STEP };
    check_embedded(&poly)?;
    Ok(poly)
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn segments_meet(p: ([f64; 2], [f64; 2]), q: ([f64; 2], [f64; 2])) -> bool {
    // disjoint boxes first: collinear samples on a ray give orientation noise
    for k in 0..2 {
        if p.0[k].max(p.1[k]) < q.0[k].min(q.1[k]) || q.0[k].max(q.1[k]) < p.0[k].min(p.1[k]) {
            return false;
        }
    }
    let (d1, d2) = (orient(q.0, q.1, p.0), orient(q.0, q.1, p.1));
    let (d3, d4) = (orient(p.0, p.1, q.0), orient(p.0, p.1, q.1));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |a: [f64; 2], b: [f64; 2], c: [f64; 2], d: f64| {
        d == 0.0 && c[0] >= a[0].min(b[0]) && c[0] <= a[0].max(b[0]) && c[1] >= a[1].min(b[1]) && c[1] <= a[1].max(b[1])
    };
    on(q.0, q.1, p.0, d1) || on(q.0, q.1, p.1, d2) || on(p.0, p.1, q.0, d3) || on(p.0, p.1, q.1, d4)
}

/// Errors if two non-adjacent segments touch. Uses a uniform grid hash.
pub fn check_embedded(c: &Polyline) -> Result<()> {
    let segs: Vec<_> = c.segments().collect();
    if segs.is_empty() {
        return Err(Error::Curve("polyline has no segments".into()));
    }
    let longest = segs.iter().map(|(a, b)| (a[0] - b[0]).hypot(a[1] - b[1])).fold(0.0, f64::max);
    let cell = longest.max(1e-9);
    let key = |x: f64| (x / cell).floor() as i64;
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, (a, b)) in segs.iter().enumerate() {
        for gx in key(a[0].min(b[0]))..=key(a[0].max(b[0])) {
            for gy in key(a[1].min(b[1]))..=key(a[1].max(b[1])) {
                grid.entry((gx, gy)).or_default().push(i);
            }
        }
    }
    for bucket in grid.values() {
        for (x, &i) in bucket.iter().enumerate() {
            for &j in &bucket[x + 1..] {
                if i.abs_diff(j) > 1 && segments_meet(segs[i], segs[j]) {
                    return Err(Error::Curve(format!("segments {i} and {j} intersect")));
                }
            }
        }
    }
    Ok(())
}

/// Sign changes of `y` along the interior vertices.
///
/// The endpoints sit on the axis and are skipped; an interior vertex exactly
/// on the axis is a tangency (or unperturbed degeneracy) and is rejected,
/// except for the straight diameter itself.
pub fn count_axis_crossings(c: &Polyline) -> Result<usize> {
    Ok(axis_crossings(c)?.len())
}

/// Crossing points in traversal order: `(segment index, x)`.
pub fn axis_crossings(c: &Polyline) -> Result<Vec<(usize, f64)>> {
    let n = c.points.len();
    if n < 2 {
        return Err(Error::Curve("polyline needs two points".into()));
    }
    let interior = &c.points[1..n - 1];
    if interior.iter().all(|p| p[1] == 0.0) {
        return Ok(Vec::new());
    }
    if let Some(i) = interior.iter().position(|p| p[1] == 0.0) {
        return Err(Error::Curve(format!("vertex {} lies on the axis", i + 1)));
    }
    let mut out = Vec::new();
    for i in 1..n - 2 {
        let (p, q) = (c.points[i], c.points[i + 1]);
        if (p[1] > 0.0) != (q[1] > 0.0) {
            let s = p[1] / (p[1] - q[1]);
            out.push((i, p[0] + s * (q[0] - p[0])));
        }
    }
    Ok(out)
}
