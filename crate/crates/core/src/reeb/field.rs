use std::fmt;
use std::sync::Arc;

use super::mesh::TriangulatedDisk;
use crate::error::{Error, Result};

/// Piecewise-linear function on a triangulated disk.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    pub mesh: Arc<TriangulatedDisk>,
    pub values: Vec<f64>,
    /// True when every boundary vertex has value 0.
    pub supported: bool,
}

impl ScalarField {
    pub fn new(mesh: Arc<TriangulatedDisk>, values: Vec<f64>) -> Result<ScalarField> {
        if values.len() != mesh.vertices.len() {
            return Err(Error::Mesh(format!(
                "{} values for {} vertices",
                values.len(),
                mesh.vertices.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Mesh(format!("value at vertex {i} is not finite")));
        }
        let supported = values.iter().zip(&mesh.boundary).all(|(&v, &b)| !b || v == 0.0);
        Ok(ScalarField { mesh, values, supported })
    }

    pub fn zero(mesh: Arc<TriangulatedDisk>) -> ScalarField {
        let n = mesh.vertices.len();
        ScalarField { mesh, values: vec![0.0; n], supported: true }
    }

    /// Samples a radial profile at the vertices; boundary vertices get 0.
    pub fn from_radial(mesh: Arc<TriangulatedDisk>, profile: &RadialProfile) -> ScalarField {
        let values = mesh
            .vertices
            .iter()
            .zip(&mesh.boundary)
            .map(|(p, &b)| if b { 0.0 } else { profile.value(p[0].hypot(p[1])) })
            .collect();
        ScalarField { mesh, values, supported: true }
    }

    pub fn scaled(&self, t: f64) -> ScalarField {
        ScalarField {
            mesh: Arc::clone(&self.mesh),
            values: self.values.iter().map(|v| v * t).collect(),
            supported: self.supported,
        }
    }

    /// Plain-text form:
    ///
    /// ```text
    /// # comment
    /// vertices 3
    /// 0 0 0.5
    /// 1 0 0
    /// 0 1 0
    /// triangles 1
    /// 0 1 2
    /// ```
    pub fn parse(text: &str) -> Result<ScalarField> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .enumerate()
            .filter(|(_, l)| !l.is_empty());
        let nv = header(&mut lines, "vertices")?;
        let mut points = Vec::with_capacity(nv);
        let mut values = Vec::with_capacity(nv);
        for _ in 0..nv {
            let (no, line) = lines.next().ok_or_else(|| Error::Parse("too few vertex lines".into()))?;
            let nums: Vec<f64> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("line {}: expected `x y value`", no + 1)))?;
            let [x, y, v] = nums[..] else {
                return Err(Error::Parse(format!("line {}: expected `x y value`", no + 1)));
            };
            points.push([x, y]);
            values.push(v);
        }
        let nt = header(&mut lines, "triangles")?;
        let mut triangles = Vec::with_capacity(nt);
        for _ in 0..nt {
            let (no, line) = lines.next().ok_or_else(|| Error::Parse("too few triangle lines".into()))?;
            let idx: Vec<usize> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("line {}: expected `i j k`", no + 1)))?;
            let [a, b, c] = idx[..] else {
                return Err(Error::Parse(format!("line {}: expected `i j k`", no + 1)));
            };
            triangles.push([a, b, c]);
        }
        if let Some((no, _)) = lines.next() {
            return Err(Error::Parse(format!("line {}: trailing content", no + 1)));
        }
        let mesh = TriangulatedDisk::new(points, triangles)?;
        ScalarField::new(Arc::new(mesh), values)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("vertices {}\n", self.values.len());
        for (p, v) in self.mesh.vertices.iter().zip(&self.values) {
            out += &format!("{} {} {}\n", p[0], p[1], v);
        }
        out += &format!("triangles {}\n", self.mesh.triangles.len());
        for t in &self.mesh.triangles {
            out += &format!("{} {} {}\n", t[0], t[1], t[2]);
        }
        out
    }
}

fn header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, want: &str) -> Result<usize> {
    let (no, line) = lines.next().ok_or_else(|| Error::Parse(format!("missing `{want}` header")))?;
    match line.split_whitespace().collect::<Vec<_>>()[..] {
        [w, count] if w == want => count
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: bad count {count:?}", no + 1))),
        _ => Err(Error::Parse(format!("line {}: expected `{want} <count>`", no + 1))),
    }
}

/// `∫ F ω` with `ω` the area form normalized by `π`: exact for
/// piecewise-linear `F`.
pub fn integrate(f: &ScalarField) -> f64 {
    f.mesh
        .triangles
        .iter()
        .enumerate()
        .map(|(t, tri)| {
            let mean = tri.iter().map(|&i| f.values[i]).sum::<f64>() / 3.0;
            mean * f.mesh.normalized_area(t)
        })
        .sum()
}

/// A level function of the radius, `0` at `r = 1`.
#[derive(Clone)]
pub enum RadialProfile {
    /// `(1 − r²)/2` on the whole disk.
    Parabola,
    /// `(1 − r²)/2` on `r ≤ 1 − eps/4`, then a C¹ cubic taper reaching 0
    /// with zero slope at `r = 1`. Agrees with the parabola on `r ≤ 1 − eps`.
    Tapered { eps: f64 },
    Custom { name: String, f: Arc<dyn Fn(f64) -> f64 + Send + Sync>, breaks: Vec<f64> },
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialProfile::Parabola => write!(f, "Parabola"),
            RadialProfile::Tapered { eps } => write!(f, "Tapered {{ eps: {eps} }}"),
            RadialProfile::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

impl RadialProfile {
    /// The rotation Hamiltonian with boundary smoothing width `eps`.
    pub fn h_eps(eps: f64) -> Result<RadialProfile> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::OutOfRange(format!("eps = {eps} must lie in (0, 1)")));
        }
        Ok(RadialProfile::Tapered { eps })
    }

    pub fn value(&self, r: f64) -> f64 {
        match self {
            RadialProfile::Parabola => (1.0 - r * r) / 2.0,
            RadialProfile::Tapered { eps } => {
                let r1 = 1.0 - eps / 4.0;
                if r <= r1 {
                    return (1.0 - r * r) / 2.0;
                }
                if r >= 1.0 {
                    return 0.0;
                }
                // Hermite basis on [r1, 1]: value y0, slope -r1 at r1; 0, 0 at 1
                let h = 1.0 - r1;
                let s = (r - r1) / h;
                let y0 = (1.0 - r1 * r1) / 2.0;
                let h00 = 2.0 * s * s * s - 3.0 * s * s + 1.0;
                let h10 = s * s * s - 2.0 * s * s + s;
                y0 * h00 + h * (-r1) * h10
            }
            RadialProfile::Custom { f, .. } => f(r),
        }
    }

    /// Radii where the profile may fail to be smooth.
    pub fn breaks(&self) -> Vec<f64> {
        match self {
            RadialProfile::Parabola => vec![],
            RadialProfile::Tapered { eps } => vec![1.0 - eps / 4.0],
            RadialProfile::Custom { breaks, .. } => breaks.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taper_is_c1_and_monotone() {
        let p = RadialProfile::h_eps(0.05).unwrap();
        let r1 = 1.0 - 0.05 / 4.0;
        let d = 1e-7;
        assert!((p.value(r1 + d) - p.value(r1 - d)).abs() < 1e-6);
        let slope = |r: f64| (p.value(r + d) - p.value(r - d)) / (2.0 * d);
        assert!((slope(r1 + 2.0 * d) - slope(r1 - 2.0 * d)).abs() < 1e-4);
        assert_eq!(p.value(1.0), 0.0);
        let mut prev = p.value(0.0);
        for i in 1..=10_000 {
            let v = p.value(i as f64 / 10_000.0);
            assert!(v <= prev);
            prev = v;
        }
        for r in [0.0, 0.5, 0.95] {
            assert_eq!(p.value(r), RadialProfile::Parabola.value(r));
        }
        assert!(RadialProfile::h_eps(0.0).is_err());
    }

    #[test]
    fn integral_of_h_eps() {
        let mesh = Arc::new(TriangulatedDisk::ring_disk(92).unwrap());
        let f = ScalarField::from_radial(mesh.clone(), &RadialProfile::h_eps(0.05).unwrap());
        assert!(f.supported);
        assert!((integrate(&f) - 0.25).abs() < 1e-3);
        assert_eq!(integrate(&ScalarField::zero(mesh)), 0.0);
        let scaled = integrate(&f.scaled(3.0));
        assert!((scaled - 3.0 * integrate(&f)).abs() < 1e-12);
    }

    #[test]
    fn text_round_trip_and_errors() {
        let text = "# one triangle\nvertices 3\n0 0 0\n1 0 0\n0 1 0 # corner\ntriangles 1\n0 1 2\n";
        let f = ScalarField::parse(text).unwrap();
        assert_eq!(f.values, vec![0.0; 3]);
        assert_eq!(ScalarField::parse(&f.to_text()).unwrap(), f);
        assert!(ScalarField::parse("vertices 1\n0 0\ntriangles 0\n").is_err());
        assert!(ScalarField::parse("vertices 3\n0 0 0\n1 0 0\n0 1 0\ntriangles 1\n0 1 5\n").is_err());
        assert!(ScalarField::parse("vertices 3\n0 0 0\n1 0 0\n0 1 0\ntriangles 1\n0 1 2\nextra\n").is_err());
        let bumped = ScalarField::parse("vertices 3\n0 0 1\n1 0 0\n0 1 0\ntriangles 1\n0 1 2\n").unwrap();
        assert!(!bumped.supported);
    }
}
