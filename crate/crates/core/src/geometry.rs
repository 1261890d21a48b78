//! Planar primitives, predicates, and point-set generators.
//!
//! All predicates use double-precision floats with two documented tolerances:
//! [`COLLINEARITY_TOL`] bounds the *normalized* signed area (signed area
//! divided by the product of the adjacent segment lengths, i.e. the sine of
//! the spanned angle) below which three points count as collinear, and
//! [`MIN_SEPARATION`] is the absolute distance under which two points are
//! considered coincident. Every configuration produced by the generators in
//! this module is well separated, so exact arithmetic is unnecessary; the
//! collinear triples of [`hex13`] are detected reliably because its
//! coordinates are built analytically from exact multiples of 1/2 and √3/2.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Normalized signed-area threshold below which three points are collinear.
pub const COLLINEARITY_TOL: f64 = 1e-9;

/// Minimum pairwise distance between points of a [`PointSet`].
pub const MIN_SEPARATION: f64 = 1e-9;

/// Smallest accepted offset for [`extend_collinear`]; far enough that a
/// detour through the tail can never shortcut a path inside the base set.
pub const MIN_EXTENSION_OFFSET: f64 = 100.0;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("points {i} and {j} coincide (distance <= {MIN_SEPARATION:e})")]
    Coincident { i: usize, j: usize },
    #[error("a regular polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("circumradius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("extension target {target} is smaller than the base size {base}")]
    ExtensionTooSmall { target: usize, base: usize },
    #[error("extension offset must be at least {MIN_EXTENSION_OFFSET}, got {0}")]
    OffsetTooSmall(f64),
    #[error("csv line {line}: {message}")]
    Csv { line: usize, message: String },
}

/// A point in the Euclidean plane. Coordinates are always finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// An ordered list of pairwise-distinct points. Indices `0..n-1` are stable
/// identifiers used by every other module.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<Point>,
    label: Option<String>,
}

impl PointSet {
    /// Builds a point set, validating finiteness and pairwise distinctness.
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        for (index, p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(GeometryError::NonFinite { index });
            }
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i].distance(&points[j]) <= MIN_SEPARATION {
                    return Err(GeometryError::Coincident { i, j });
                }
            }
        }
        Ok(PointSet { points, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn get(&self, i: usize) -> Option<&Point> {
        self.points.get(i)
    }

    /// Parses the `x,y`-per-line CSV format. `#` starts a comment line; blank
    /// lines are skipped; the 0-based point index is the data-line order.
    pub fn from_csv_str(input: &str) -> Result<Self, GeometryError> {
        let mut points = Vec::new();
        for (lineno, raw) in input.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split(',');
            let (Some(xs), Some(ys), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(GeometryError::Csv {
                    line: lineno + 1,
                    message: format!("expected exactly two comma-separated fields, got {line:?}"),
                });
            };
            let parse = |s: &str| -> Result<f64, GeometryError> {
                s.trim().parse::<f64>().map_err(|e| GeometryError::Csv {
                    line: lineno + 1,
                    message: format!("bad coordinate {s:?}: {e}"),
                })
            };
            points.push(Point::new(parse(xs)?, parse(ys)?));
        }
        PointSet::new(points)
    }

    /// Inverse of [`PointSet::from_csv_str`]; full `f64` round-trip precision.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            out.push_str(&format!("{:?},{:?}\n", p.x, p.y));
        }
        out
    }
}

impl std::ops::Index<usize> for PointSet {
    type Output = Point;
    fn index(&self, i: usize) -> &Point {
        &self.points[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Clockwise,
    CounterClockwise,
    Collinear,
}

/// Sign of the signed area of triangle `pqr`. The signed area is normalized
/// by `|pq|·|pr|` (making it the sine of the angle at `p`) before comparison
/// against [`COLLINEARITY_TOL`], so the verdict is scale-invariant.
pub fn orientation(p: &Point, q: &Point, r: &Point) -> Orientation {
    let area = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    let scale = p.distance(q) * p.distance(r);
    if area.abs() <= COLLINEARITY_TOL * scale {
        Orientation::Collinear
    } else if area > 0.0 {
        Orientation::CounterClockwise
    } else {
        Orientation::Clockwise
    }
}

/// True iff the *open* segments `ab` and `cd` share a point: a transversal
/// crossing of the interiors, or a collinear overlap of positive length.
/// Segments that share only an endpoint, or touch an endpoint against an
/// interior, do not properly cross.
pub fn segments_properly_cross(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);

    use Orientation::Collinear;
    if o1 != Collinear && o2 != Collinear && o3 != Collinear && o4 != Collinear {
        return o1 != o2 && o3 != o4;
    }

    // Both segments on one line: check for an overlap of positive length by
    // projecting on the dominant axis of ab.
    if o1 == Collinear && o2 == Collinear {
        let horizontal = (b.x - a.x).abs() >= (b.y - a.y).abs();
        let key = |p: &Point| if horizontal { p.x } else { p.y };
        let (alo, ahi) = minmax(key(a), key(b));
        let (clo, chi) = minmax(key(c), key(d));
        return alo.max(clo) < ahi.min(chi);
    }

    // An endpoint of one segment touches the other segment's line (a "T"
    // contact at most): the open interiors cannot share a point.
    false
}

fn minmax(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// True iff `p` lies on segment `ab` strictly between `a` and `b`, within the
/// collinearity tolerance.
pub fn point_in_segment_interior(p: &Point, a: &Point, b: &Point) -> bool {
    if p.distance(a) <= MIN_SEPARATION || p.distance(b) <= MIN_SEPARATION {
        return false;
    }
    if orientation(a, b, p) != Orientation::Collinear {
        return false;
    }
    let t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y))
        / ((b.x - a.x).powi(2) + (b.y - a.y).powi(2));
    t > 0.0 && t < 1.0
}

/// Vertices of the regular n-gon, counterclockwise, vertex 0 at the top of
/// the circle (angle π/2). All results downstream are rotation-invariant;
/// the fixed convention only pins witness indices.
pub fn regular_ngon(n: usize, circumradius: f64) -> Result<PointSet, GeometryError> {
    if n < 3 {
        return Err(GeometryError::TooFewVertices(n));
    }
    if !(circumradius > 0.0) {
        return Err(GeometryError::NonPositiveRadius(circumradius));
    }
    let points = (0..n)
        .map(|i| {
            let theta = std::f64::consts::FRAC_PI_2
                + 2.0 * std::f64::consts::PI * (i as f64) / (n as f64);
            Point::new(circumradius * theta.cos(), circumradius * theta.sin())
        })
        .collect();
    Ok(PointSet::new(points)
        .expect("regular n-gon vertices are distinct")
        .with_label(format!("S{n}")))
}

/// The 13-point set of two homothetic regular hexagons centered at `p0`.
///
/// `p0` is the origin; the odd indices `p1,p3,…,p11` are the radius-1 hexagon
/// and the even indices `p2,p4,…,p12` the radius-2 hexagon, with `p_{i+1}`
/// placed radially outward of `p_i` (so `p2 = 2·p1` and so on). The set is
/// oriented with `p3 = (1,0)`, which puts the five points
/// `{p4,p3,p0,p9,p10}` on the x-axis — the axis later used for collinear
/// extensions. Coordinates are exact multiples of 1/2 and √3/2, so the
/// collinear triples are detected exactly, not merely within tolerance.
pub fn hex13() -> PointSet {
    let s = 3f64.sqrt();
    let h = s / 2.0;
    // Radius-1 hexagon directions, counterclockwise from p1 at angle -60°.
    let inner = [
        Point::new(0.5, -h),  // p1
        Point::new(1.0, 0.0), // p3
        Point::new(0.5, h),   // p5
        Point::new(-0.5, h),  // p7
        Point::new(-1.0, 0.0), // p9
        Point::new(-0.5, -h), // p11
    ];
    let mut points = vec![Point::new(0.0, 0.0)];
    for p in inner {
        points.push(p);
        points.push(Point::new(2.0 * p.x, 2.0 * p.y));
    }
    PointSet::new(points)
        .expect("hex13 points are distinct")
        .with_label("hex13")
}

/// The pentagon set: `p0` at the origin, `p1..p5` the unit-circumradius
/// regular pentagon starting at angle π/2, counterclockwise.
pub fn pentagon6() -> PointSet {
    let ngon = regular_ngon(5, 1.0).expect("pentagon parameters are valid");
    let mut points = vec![Point::new(0.0, 0.0)];
    points.extend_from_slice(ngon.points());
    PointSet::new(points)
        .expect("pentagon6 points are distinct")
        .with_label("pentagon6")
}

/// Extends `base` to `n` points by appending `(offset + i, 0)` for
/// `i = |base|..n-1`: a far-away collinear tail on the x-axis.
pub fn extend_collinear(
    base: &PointSet,
    n: usize,
    offset: f64,
) -> Result<PointSet, GeometryError> {
    if n < base.len() {
        return Err(GeometryError::ExtensionTooSmall { target: n, base: base.len() });
    }
    if !(offset >= MIN_EXTENSION_OFFSET) {
        return Err(GeometryError::OffsetTooSmall(offset));
    }
    let mut points = base.points().to_vec();
    for i in base.len()..n {
        points.push(Point::new(offset + i as f64, 0.0));
    }
    let set = PointSet::new(points)?;
    Ok(match base.label() {
        Some(label) if n > base.len() => set.with_label(format!("{label}+tail{}", n - base.len())),
        Some(label) => set.with_label(label.to_string()),
        None => set,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn orientation_basic_cases() {
        assert_eq!(
            orientation(&pt(0.0, 0.0), &pt(1.0, 0.0), &pt(0.0, 1.0)),
            Orientation::CounterClockwise
        );
        assert_eq!(
            orientation(&pt(0.0, 0.0), &pt(1.0, 1.0), &pt(2.0, 2.0)),
            Orientation::Collinear
        );
        assert_eq!(
            orientation(&pt(0.0, 0.0), &pt(1.0, 0.0), &pt(1.0, -1.0)),
            Orientation::Clockwise
        );
    }

    #[test]
    fn crossing_basic_cases() {
        // X crossing at (1,1).
        assert!(segments_properly_cross(
            &pt(0.0, 0.0),
            &pt(2.0, 2.0),
            &pt(0.0, 2.0),
            &pt(2.0, 0.0)
        ));
        // Shared endpoint only.
        assert!(!segments_properly_cross(
            &pt(0.0, 0.0),
            &pt(1.0, 0.0),
            &pt(1.0, 0.0),
            &pt(2.0, 1.0)
        ));
        // Collinear positive-length overlap.
        assert!(segments_properly_cross(
            &pt(0.0, 0.0),
            &pt(2.0, 0.0),
            &pt(1.0, 0.0),
            &pt(3.0, 0.0)
        ));
        // Collinear, touching at a single shared endpoint.
        assert!(!segments_properly_cross(
            &pt(0.0, 0.0),
            &pt(1.0, 0.0),
            &pt(1.0, 0.0),
            &pt(2.0, 0.0)
        ));
        // T contact: endpoint of one segment in the interior of the other.
        assert!(!segments_properly_cross(
            &pt(0.0, 0.0),
            &pt(2.0, 0.0),
            &pt(1.0, 0.0),
            &pt(1.0, 1.0)
        ));
        // A true transversal through the same interior point.
        assert!(segments_properly_cross(
            &pt(0.0, 0.0),
            &pt(2.0, 0.0),
            &pt(1.0, -1.0),
            &pt(1.0, 1.0)
        ));
    }

    #[test]
    fn segment_interior_basic_cases() {
        assert!(point_in_segment_interior(&pt(1.0, 0.0), &pt(0.0, 0.0), &pt(2.0, 0.0)));
        assert!(!point_in_segment_interior(&pt(0.0, 0.0), &pt(0.0, 0.0), &pt(2.0, 0.0)));
        assert!(!point_in_segment_interior(&pt(1.0, 0.5), &pt(0.0, 0.0), &pt(2.0, 0.0)));
        assert!(!point_in_segment_interior(&pt(3.0, 0.0), &pt(0.0, 0.0), &pt(2.0, 0.0)));
    }

    #[test]
    fn ngon_chords_match_closed_form() {
        // |s_i s_j| = 2 r sin(μ(i,j) π / n), μ = hull distance.
        for &(n, r) in &[(4usize, 1.0f64), (5, 1.0), (23, 1.0), (12, 2.5)] {
            let s = regular_ngon(n, r).unwrap();
            for i in 0..n {
                for j in (i + 1)..n {
                    let mu = (j - i).min(n - (j - i));
                    let expect = 2.0 * r * (mu as f64 * std::f64::consts::PI / n as f64).sin();
                    let got = s[i].distance(&s[j]);
                    assert!(
                        (got - expect).abs() <= 1e-12 * expect,
                        "n={n} r={r} ({i},{j}): {got} vs {expect}"
                    );
                }
            }
        }
    }

    #[test]
    fn ngon_named_chords() {
        let square = regular_ngon(4, 1.0).unwrap();
        assert!((square[0].distance(&square[2]) - 2.0).abs() < 1e-12);

        let s23 = regular_ngon(23, 1.0).unwrap();
        let expect = 2.0 * (11.0 * std::f64::consts::PI / 23.0).sin();
        assert!((s23[0].distance(&s23[11]) - expect).abs() < 1e-12);
        assert!((expect - 1.99534).abs() < 1e-5);

        let s5 = regular_ngon(5, 1.0).unwrap();
        let side = 2.0 * (std::f64::consts::PI / 5.0).sin();
        assert!((s5[0].distance(&s5[1]) - side).abs() < 1e-12);
        // The pentagon side length also equals √((5-√5)/2).
        assert!((side - ((5.0 - 5f64.sqrt()) / 2.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ngon_rejects_bad_input() {
        assert_eq!(regular_ngon(2, 1.0), Err(GeometryError::TooFewVertices(2)));
        assert_eq!(regular_ngon(5, 0.0), Err(GeometryError::NonPositiveRadius(0.0)));
        assert_eq!(regular_ngon(5, -1.0), Err(GeometryError::NonPositiveRadius(-1.0)));
    }

    #[test]
    fn hex13_caption_distances() {
        let h = hex13();
        assert_eq!(h.len(), 13);
        let s3 = 3f64.sqrt();
        let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
        assert!(close(h[2].distance(&h[12]), 2.0));
        assert!(close(h[2].distance(&h[3]), s3));
        assert!(close(h[1].distance(&h[5]), s3));
        assert!(close(h[1].distance(&h[12]), s3));
        // Radii: odd indices on the unit hexagon, even (nonzero) at radius 2.
        let origin = pt(0.0, 0.0);
        for i in (1..13).step_by(2) {
            assert!(close(h[i].distance(&origin), 1.0));
        }
        for i in (2..13).step_by(2) {
            assert!(close(h[i].distance(&origin), 2.0));
        }
    }

    #[test]
    fn hex13_collinear_triples_exact() {
        let h = hex13();
        for line in [[2usize, 1, 0, 7, 8], [4, 3, 0, 9, 10], [12, 11, 0, 5, 6]] {
            for w in line.windows(3) {
                let (a, b, c) = (&h[w[0]], &h[w[1]], &h[w[2]]);
                // Exact zero, not merely below tolerance.
                let area = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
                assert_eq!(area, 0.0, "triple {w:?}");
                assert_eq!(orientation(a, b, c), Orientation::Collinear);
            }
        }
        // Pin the orientation: the +x axis runs through p3 = (1,0), p4 = (2,0).
        assert_eq!(h[3], pt(1.0, 0.0));
        assert_eq!(h[4], pt(2.0, 0.0));
    }

    #[test]
    fn pentagon6_distances() {
        let p = pentagon6();
        assert_eq!(p.len(), 6);
        assert!((p[0].distance(&p[1]) - 1.0).abs() < 1e-12);
        let side = ((5.0 - 5f64.sqrt()) / 2.0).sqrt();
        assert!((p[1].distance(&p[2]) - side).abs() < 1e-12);
        assert!((p[1].distance(&p[5]) - side).abs() < 1e-12);
        let diag = 2.0 * (2.0 * std::f64::consts::PI / 5.0).sin();
        assert!((p[1].distance(&p[3]) - diag).abs() < 1e-12);
        // p1 sits at the top of the circle.
        assert!(p[1].x.abs() < 1e-15 && (p[1].y - 1.0).abs() < 1e-15);
    }

    #[test]
    fn extend_collinear_places_tail() {
        let h = hex13();
        let same = extend_collinear(&h, 13, 100.0).unwrap();
        assert_eq!(same.points(), h.points());

        let ext = extend_collinear(&h, 14, 100.0).unwrap();
        assert_eq!(ext.len(), 14);
        assert_eq!(ext[13], pt(113.0, 0.0));

        let p = pentagon6();
        let ext = extend_collinear(&p, 8, 100.0).unwrap();
        assert_eq!(ext.len(), 8);
        assert_eq!(ext[6], pt(106.0, 0.0));
        assert_eq!(ext[7], pt(107.0, 0.0));
        assert_eq!(
            orientation(&ext[6], &ext[7], &pt(0.0, 0.0)),
            Orientation::Collinear
        );

        assert!(matches!(
            extend_collinear(&h, 12, 100.0),
            Err(GeometryError::ExtensionTooSmall { target: 12, base: 13 })
        ));
        assert!(matches!(
            extend_collinear(&h, 15, 5.0),
            Err(GeometryError::OffsetTooSmall(_))
        ));
    }

    #[test]
    fn pointset_rejects_duplicates_and_nonfinite() {
        assert!(matches!(
            PointSet::new(vec![pt(0.0, 0.0), pt(0.0, 0.0)]),
            Err(GeometryError::Coincident { i: 0, j: 1 })
        ));
        assert!(matches!(
            PointSet::new(vec![pt(0.0, f64::NAN)]),
            Err(GeometryError::NonFinite { index: 0 })
        ));
        // Just above the separation tolerance is accepted.
        assert!(PointSet::new(vec![pt(0.0, 0.0), pt(2e-9, 0.0)]).is_ok());
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let text = "# demo set\n0.0,0.0\n1.5,-2.25\n\n3.0,4.0\n";
        let set = PointSet::from_csv_str(text).unwrap();
        assert_eq!(set.len(), 3);
        assert_eq!(set[1], pt(1.5, -2.25));

        let back = PointSet::from_csv_str(&set.to_csv_string()).unwrap();
        assert_eq!(back.points(), set.points());

        assert!(matches!(
            PointSet::from_csv_str("1.0\n"),
            Err(GeometryError::Csv { line: 1, .. })
        ));
        assert!(matches!(
            PointSet::from_csv_str("0,0\n1,zed\n"),
            Err(GeometryError::Csv { line: 2, .. })
        ));
        assert!(matches!(
            PointSet::from_csv_str("0,0,0\n"),
            Err(GeometryError::Csv { line: 1, .. })
        ));
        // Exotic but finite-parsing inputs must still hit set validation.
        assert!(PointSet::from_csv_str("inf,0\n").is_err());
        assert!(PointSet::from_csv_str("0,0\n0,0\n").is_err());
    }
}
