use rand::Rng;

use super::{Coding, MmcError};

/// Convex hull of a 1-D or 2-D coding.
#[derive(Debug, Clone, PartialEq)]
pub enum Hull {
    Interval { lo: f64, hi: f64 },
    /// Counterclockwise vertices without repeats. Fewer than three vertices
    /// means the input was collinear and the hull has zero area.
    Polygon { vertices: Vec<[f64; 2]> },
}

impl Hull {
    pub fn dim(&self) -> usize {
        match self {
            Hull::Interval { .. } => 1,
            Hull::Polygon { .. } => 2,
        }
    }

    /// Length or area.
    pub fn volume(&self) -> f64 {
        match self {
            Hull::Interval { lo, hi } => hi - lo,
            Hull::Polygon { vertices } => {
                let n = vertices.len();
                if n < 3 {
                    return 0.0;
                }
                let twice: f64 = (0..n)
                    .map(|i| {
                        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                        a[0] * b[1] - a[1] * b[0]
                    })
                    .sum();
                0.5 * twice
            }
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.volume() <= 0.0
    }

    /// Axis-aligned bounding box as `(min, max)` per dimension.
    pub fn bounds(&self) -> Vec<(f64, f64)> {
        match self {
            Hull::Interval { lo, hi } => vec![(*lo, *hi)],
            Hull::Polygon { vertices } => (0..2)
                .map(|k| {
                    vertices.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                        (lo.min(v[k]), hi.max(v[k]))
                    })
                })
                .collect(),
        }
    }

    /// Point-in-hull test with an absolute `slack`.
    pub fn contains(&self, p: &[f64], slack: f64) -> bool {
        match self {
            Hull::Interval { lo, hi } => p[0] >= lo - slack && p[0] <= hi + slack,
            Hull::Polygon { vertices } => match vertices.len() {
                0 => false,
                1 => (p[0] - vertices[0][0]).hypot(p[1] - vertices[0][1]) <= slack,
                2 => segment_distance(p, vertices[0], vertices[1]) <= slack,
                n => (0..n).all(|i| {
                    let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                    let (ex, ey) = (b[0] - a[0], b[1] - a[1]);
                    let len = ex.hypot(ey);
                    // signed distance to the left of edge a→b
                    (ex * (p[1] - a[1]) - ey * (p[0] - a[0])) / len >= -slack
                }),
            },
        }
    }

    /// Uniform sample inside the hull (rejection from the bounding box for
    /// polygons). Degenerate hulls are not sampled.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match self {
            Hull::Interval { lo, hi } => vec![lo + (hi - lo) * rng.random::<f64>()],
            Hull::Polygon { .. } => {
                let b = self.bounds();
                loop {
                    let p: Vec<f64> = b
                        .iter()
                        .map(|(lo, hi)| lo + (hi - lo) * rng.random::<f64>())
                        .collect();
                    if self.contains(&p, 0.0) {
                        return p;
                    }
                }
            }
        }
    }
}

fn segment_distance(p: &[f64], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (ex, ey) = (b[0] - a[0], b[1] - a[1]);
    let len2 = ex * ex + ey * ey;
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * ex + (p[1] - a[1]) * ey) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p[0] - a[0] - t * ex).hypot(p[1] - a[1] - t * ey)
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// `[min, max]` for 1-D codes, Andrew's monotone chain for 2-D codes.
pub fn convex_hull(coding: &Coding) -> Result<Hull, MmcError> {
    if coding.is_empty() {
        return Err(MmcError::Degenerate("cannot take the hull of zero codes".into()));
    }
    match coding.m() {
        1 => {
            let c = coding.codes.as_slice();
            let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Ok(Hull::Interval { lo, hi })
        }
        2 => {
            let mut pts: Vec<[f64; 2]> = coding.codes.row_iter().map(|r| [r[0], r[1]]).collect();
            pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
            pts.dedup();
            if pts.len() < 3 {
                return Ok(Hull::Polygon { vertices: pts });
            }
            let mut lower: Vec<[f64; 2]> = Vec::new();
            for &p in &pts {
                while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
                    lower.pop();
                }
                lower.push(p);
            }
            let mut upper: Vec<[f64; 2]> = Vec::new();
            for &p in pts.iter().rev() {
                while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
                    upper.pop();
                }
                upper.push(p);
            }
            lower.pop();
            upper.pop();
            lower.extend(upper);
            Ok(Hull::Polygon { vertices: lower })
        }
        m => Err(MmcError::Config(format!("hulls are supported for m ∈ {{1, 2}}, got {m}"))),
    }
}
