//! Minimal SVG/CSV exports for 2-D point sets, ordered paths and
//! discriminator landscapes.

use std::fmt::Write;

use crate::nn::{Matrix, MlpModel, NnError};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 20.0;

/// Square plotting window with data-space bounds.
struct Canvas {
    lo: f64,
    hi: f64,
    body: String,
}

impl Canvas {
    fn fitting(sets: &[&Matrix]) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for m in sets {
            for &v in m.as_slice() {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        if !(lo < hi) {
            lo -= 1.0;
            hi += 1.0;
        }
        let pad = 0.05 * (hi - lo);
        Self::new(lo - pad, hi + pad)
    }

    fn new(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            body: String::new(),
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.lo) / (self.hi - self.lo) * SIZE
    }

    /// SVG y grows downward.
    fn py(&self, y: f64) -> f64 {
        MARGIN + (self.hi - y) / (self.hi - self.lo) * SIZE
    }

    fn circle(&mut self, x: f64, y: f64, r: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{r}" fill="{fill}"/>"#,
            self.px(x),
            self.py(y)
        );
    }

    fn line(&mut self, a: &[f64], b: &[f64], stroke: &str) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{stroke}" stroke-width="1"/>"#,
            self.px(a[0]),
            self.py(a[1]),
            self.px(b[0]),
            self.py(b[1])
        );
    }

    fn finish(self) -> String {
        let side = SIZE + 2.0 * MARGIN;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{side}\" height=\"{side}\" viewBox=\"0 0 {side} {side}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

fn check_2d(m: &Matrix) -> Result<(), NnError> {
    if m.cols() != 2 {
        return Err(NnError::Shape(format!("plots need 2-D points, got {} columns", m.cols())));
    }
    Ok(())
}

/// Points visited in `ordering`, joined by `N − 1` segments.
pub fn path_svg(points: &Matrix, ordering: &[usize]) -> Result<String, NnError> {
    check_2d(points)?;
    let mut c = Canvas::fitting(&[points]);
    for w in ordering.windows(2) {
        c.line(points.row(w[0]), points.row(w[1]), "steelblue");
    }
    for p in points.row_iter() {
        c.circle(p[0], p[1], 2.5, "black");
    }
    Ok(c.finish())
}

/// Overlaid scatter plots, one `(points, colour, radius)` layer each.
pub fn scatter_svg(layers: &[(&Matrix, &str, f64)]) -> Result<String, NnError> {
    for (m, _, _) in layers {
        check_2d(m)?;
    }
    let sets: Vec<&Matrix> = layers.iter().map(|l| l.0).collect();
    let mut c = Canvas::fitting(&sets);
    for (m, colour, r) in layers {
        for p in m.row_iter() {
            c.circle(p[0], p[1], *r, colour);
        }
    }
    Ok(c.finish())
}

/// Discriminator output on an `n × n` grid over `[lo, hi]²`; row `i` holds
/// `y_i`, column `j` holds `x_j`. Packed discriminators see the grid point
/// repeated once per packed slot.
pub fn contour_grid(disc: &MlpModel, n: usize, lo: f64, hi: f64) -> Result<Matrix, NnError> {
    if disc.in_dim() % 2 != 0 || n < 2 {
        return Err(NnError::Shape(format!(
            "need a 2-D (optionally packed) discriminator and n >= 2, got input {} and n = {n}",
            disc.in_dim()
        )));
    }
    let pack = disc.in_dim() / 2;
    let coord = |k: usize| lo + (hi - lo) * k as f64 / (n - 1) as f64;
    let mut input = Matrix::zeros(n * n, disc.in_dim());
    for i in 0..n {
        for j in 0..n {
            let row = input.row_mut(i * n + j);
            for s in 0..pack {
                row[2 * s] = coord(j);
                row[2 * s + 1] = coord(i);
            }
        }
    }
    let out = disc.predict(&input)?;
    Matrix::from_vec(n, n, out.into_vec())
}

pub fn grid_csv(grid: &Matrix) -> String {
    let mut s = String::new();
    for row in grid.row_iter() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    s
}

/// Grey-scale heat map of a [`contour_grid`] with optional points on top.
pub fn heatmap_svg(grid: &Matrix, lo: f64, hi: f64, overlay: Option<&Matrix>) -> Result<String, NnError> {
    let n = grid.rows();
    let (min, max) = grid
        .as_slice()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let span = if max > min { max - min } else { 1.0 };
    let mut c = Canvas::new(lo, hi);
    let cell = SIZE / n as f64;
    for i in 0..n {
        for j in 0..n {
            let level = (255.0 * (grid.get(i, j) - min) / span).round() as u8;
            let _ = writeln!(
                c.body,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="rgb({level},{level},{level})"/>"#,
                MARGIN + j as f64 * cell,
                MARGIN + (n - 1 - i) as f64 * cell,
                cell + 0.1,
                cell + 0.1
            );
        }
    }
    if let Some(points) = overlay {
        check_2d(points)?;
        for p in points.row_iter() {
            c.circle(p[0], p[1], 2.0, "crimson");
        }
    }
    Ok(c.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::grid_centers;
    use crate::rng::{stream, Stream};

    #[test]
    fn path_has_n_minus_one_segments() {
        let pts = Matrix::from_rows(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]]).unwrap();
        let svg = path_svg(&pts, &[4, 0, 1, 2, 3]).unwrap();
        assert_eq!(svg.matches("<line").count(), 4);
        assert_eq!(svg.matches("<circle").count(), 5);
    }

    #[test]
    fn contour_is_square_and_covers_centers() {
        let d = MlpModel::discriminator(2, 8, false, &mut stream(0, Stream::DiscriminatorInit)).unwrap();
        let g = contour_grid(&d, 100, -1.5, 1.5).unwrap();
        assert_eq!(g.shape(), (100, 100));
        let csv = grid_csv(&g);
        assert_eq!(csv.lines().count(), 100);
        assert!(csv.lines().all(|l| l.split(',').count() == 100));
        let max = grid_centers().as_slice().iter().fold(0.0f64, |a, v| a.max(v.abs()));
        assert!(max < 1.5);
    }

    #[test]
    fn packed_discriminator_contour() {
        let d = MlpModel::discriminator(4, 8, true, &mut stream(0, Stream::DiscriminatorInit)).unwrap();
        assert_eq!(contour_grid(&d, 10, -1.0, 1.0).unwrap().shape(), (10, 10));
    }

    #[test]
    fn heatmap_cell_count() {
        let g = Matrix::filled(5, 5, 0.3);
        let svg = heatmap_svg(&g, -1.0, 1.0, Some(&grid_centers())).unwrap();
        // background plus one rect per cell
        assert_eq!(svg.matches("<rect").count(), 26);
        assert_eq!(svg.matches("<circle").count(), 25);
    }
}
