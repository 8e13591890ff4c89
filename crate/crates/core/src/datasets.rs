//! The two toy datasets (2D-SwissRoll, 25-Grid) and the plain-text table
//! format shared by dataset and coding files.
//!
//! File layout:
//!
//! ```text
//! # meta: generator=grid25 seed=0 noise=0 scale=1 n=200
//! 0.35355339059327373 -0.7071067811865475
//! ...
//! ```
//!
//! Any number of `# meta:` lines may appear before the first row; other lines
//! starting with `#` are ignored. Values are written with Rust's shortest
//! round-trip float formatting, so reading back is bit exact.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::nn::Matrix;
use crate::rng::{stream, Stream};

/// Per-component variance of each 25-Grid Gaussian.
pub const GRID_VARIANCE: f64 = 1.0 / 3200.0;

pub const SWISS_ROLL: &str = "swiss_roll";
pub const GRID25: &str = "grid25";

#[derive(Debug, Error)]
pub enum DataError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("N ≥ 1 violated: file holds no rows")]
    Empty,
    #[error("missing meta key `{0}`")]
    MissingMeta(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetMeta {
    pub generator: String,
    pub seed: u64,
    pub noise: f64,
    pub scale: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub points: Matrix,
    pub meta: DatasetMeta,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.points.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.rows() == 0
    }

    pub fn dim(&self) -> usize {
        self.points.cols()
    }

    /// FNV-1a over the shape and raw bits of the points; binds codings to
    /// the exact rows they were computed from.
    pub fn fingerprint(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        eat(self.points.rows() as u64);
        eat(self.points.cols() as u64);
        for v in self.points.as_slice() {
            eat(v.to_bits());
        }
        format!("{h:016x}")
    }

    /// Wraps arbitrary points, e.g. for tests and hand-built instances.
    pub fn from_points(points: Matrix, generator: &str) -> Result<Self, DataError> {
        if points.rows() == 0 {
            return Err(DataError::Empty);
        }
        if !points.is_finite() {
            return Err(DataError::Invalid("dataset contains non-finite values".into()));
        }
        let n = points.rows();
        Ok(Self {
            points,
            meta: DatasetMeta {
                generator: generator.to_string(),
                seed: 0,
                noise: 0.0,
                scale: 1.0,
                n,
            },
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), DataError> {
        let m = &self.meta;
        let header = [
            ("generator", m.generator.clone()),
            ("seed", m.seed.to_string()),
            ("noise", m.noise.to_string()),
            ("scale", m.scale.to_string()),
            ("n", m.n.to_string()),
        ];
        write_table(path, &header, &self.points)
    }

    pub fn read(path: &Path) -> Result<Self, DataError> {
        let (meta, points) = read_table(path)?;
        let get = |k: &str| meta.get(k).ok_or_else(|| DataError::MissingMeta(k.into()));
        let num = |k: &str| -> Result<f64, DataError> {
            get(k)?
                .parse()
                .map_err(|_| DataError::Invalid(format!("meta `{k}` is not a number")))
        };
        let n: usize = get("n")?
            .parse()
            .map_err(|_| DataError::Invalid("meta `n` is not a count".into()))?;
        if n != points.rows() {
            return Err(DataError::Invalid(format!(
                "meta says n={n} but file holds {} rows",
                points.rows()
            )));
        }
        Ok(Self {
            meta: DatasetMeta {
                generator: get("generator")?.clone(),
                seed: get("seed")?
                    .parse()
                    .map_err(|_| DataError::Invalid("meta `seed` is not a u64".into()))?,
                noise: num("noise")?,
                scale: num("scale")?,
                n,
            },
            points,
        })
    }
}

/// Parameter `t = 1.5π(1 + 2u)` mapped onto the spiral plane, plus noise,
/// then scaled.
pub fn swiss_roll_point(u: f64, noise_xy: [f64; 2], noise: f64, scale: f64) -> [f64; 2] {
    let t = 1.5 * PI * (1.0 + 2.0 * u);
    [
        (t * t.cos() + noise * noise_xy[0]) * scale,
        (t * t.sin() + noise * noise_xy[1]) * scale,
    ]
}

pub fn sample_swiss_roll(
    n_samples: usize,
    noise: f64,
    scale: f64,
    seed: u64,
) -> Result<Dataset, DataError> {
    if n_samples == 0 {
        return Err(DataError::Empty);
    }
    if !(noise >= 0.0) || !scale.is_finite() {
        return Err(DataError::Invalid(format!(
            "swiss roll needs noise >= 0 and finite scale, got {noise}, {scale}"
        )));
    }
    let mut rng = stream(seed, Stream::Dataset);
    let mut data = Vec::with_capacity(2 * n_samples);
    for _ in 0..n_samples {
        let u: f64 = rng.random();
        let eps = [rng.sample(StandardNormal), rng.sample(StandardNormal)];
        data.extend(swiss_roll_point(u, eps, noise, scale));
    }
    Ok(Dataset {
        points: Matrix::from_vec(n_samples, 2, data).expect("sized above"),
        meta: DatasetMeta {
            generator: SWISS_ROLL.into(),
            seed,
            noise,
            scale,
            n: n_samples,
        },
    })
}

/// The 25 mixture means `(i/(2√2), j/(2√2))`, `i, j ∈ {−2..2}`, `i` outer.
pub fn grid_centers() -> Matrix {
    let step = 1.0 / (2.0 * 2f64.sqrt());
    let mut data = Vec::with_capacity(50);
    for i in -2..=2 {
        for j in -2..=2 {
            data.push(i as f64 * step);
            data.push(j as f64 * step);
        }
    }
    Matrix::from_vec(25, 2, data).expect("25x2")
}

pub fn sample_25grid(n_samples: usize, seed: u64) -> Result<Dataset, DataError> {
    sample_25grid_with_std(n_samples, GRID_VARIANCE.sqrt(), seed)
}

/// 25-Grid with an explicit per-component standard deviation.
pub fn sample_25grid_with_std(n_samples: usize, std: f64, seed: u64) -> Result<Dataset, DataError> {
    if n_samples == 0 {
        return Err(DataError::Empty);
    }
    if !(std >= 0.0) {
        return Err(DataError::Invalid(format!("std must be >= 0, got {std}")));
    }
    let centers = grid_centers();
    let mut rng = stream(seed, Stream::Dataset);
    let mut data = Vec::with_capacity(2 * n_samples);
    for _ in 0..n_samples {
        let c = centers.row(rng.random_range(0..25));
        let e: [f64; 2] = [rng.sample(StandardNormal), rng.sample(StandardNormal)];
        data.push(c[0] + std * e[0]);
        data.push(c[1] + std * e[1]);
    }
    Ok(Dataset {
        points: Matrix::from_vec(n_samples, 2, data).expect("sized above"),
        meta: DatasetMeta {
            generator: GRID25.into(),
            seed,
            noise: std,
            scale: 1.0,
            n: n_samples,
        },
    })
}

/// Dispatches on a generator name as used in config files.
pub fn generate(
    generator: &str,
    n_samples: usize,
    noise: f64,
    scale: f64,
    seed: u64,
) -> Result<Dataset, DataError> {
    match generator {
        SWISS_ROLL => sample_swiss_roll(n_samples, noise, scale, seed),
        GRID25 => sample_25grid(n_samples, seed),
        other => Err(DataError::Invalid(format!(
            "unknown generator `{other}` (expected `{SWISS_ROLL}` or `{GRID25}`)"
        ))),
    }
}

/// Writes `# meta:` header pairs followed by one whitespace-separated row
/// per matrix row.
pub fn write_table(path: &Path, header: &[(&str, String)], rows: &Matrix) -> Result<(), DataError> {
    let mut out = String::new();
    out.push_str("# meta:");
    for (k, v) in header {
        let _ = write!(out, " {k}={v}");
    }
    out.push('\n');
    for r in rows.row_iter() {
        for (j, x) in r.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{x:?}");
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_table(path: &Path) -> Result<(BTreeMap<String, String>, Matrix), DataError> {
    let text = std::fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_table(&text)
}

pub fn parse_table(text: &str) -> Result<(BTreeMap<String, String>, Matrix), DataError> {
    let mut meta = BTreeMap::new();
    let mut data = Vec::new();
    let mut cols: Option<usize> = None;
    let mut rows = 0;
    let mut saw_anything = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        saw_anything = true;
        if let Some(rest) = line.strip_prefix('#') {
            if rows > 0 {
                continue;
            }
            if let Some(kv) = rest.trim_start().strip_prefix("meta:") {
                for pair in kv.split_whitespace() {
                    let (k, v) = pair.split_once('=').ok_or_else(|| DataError::Parse {
                        line: line_no,
                        msg: format!("meta entry `{pair}` is not key=value"),
                    })?;
                    meta.insert(k.to_string(), v.to_string());
                }
            }
            continue;
        }
        let before = data.len();
        for tok in line.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| DataError::Parse {
                line: line_no,
                msg: format!("`{tok}` is not a number"),
            })?;
            if !v.is_finite() {
                return Err(DataError::Parse {
                    line: line_no,
                    msg: format!("non-finite value `{tok}`"),
                });
            }
            data.push(v);
        }
        let width = data.len() - before;
        match cols {
            None => cols = Some(width),
            Some(c) if c != width => {
                return Err(DataError::Parse {
                    line: line_no,
                    msg: format!("expected {c} values, found {width}"),
                })
            }
            _ => {}
        }
        rows += 1;
    }
    if !saw_anything {
        return Err(DataError::Parse {
            line: 0,
            msg: "empty file".into(),
        });
    }
    if rows == 0 {
        return Err(DataError::Empty);
    }
    let m = Matrix::from_vec(rows, cols.unwrap_or(0), data).expect("consistent widths");
    Ok((meta, m))
}
