use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;

use super::shp::PathOrder;
use super::MmcError;
use crate::datasets::{read_table, write_table, DataError, Dataset};
use crate::nn::Matrix;
use crate::rng::{stream, Stream};

/// Per-sample latent codes, row `i` belonging to dataset row `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coding {
    pub codes: Matrix,
    /// Fingerprint of the dataset the codes were computed from.
    pub dataset_ref: String,
    pub standardized: bool,
}

impl Coding {
    pub fn new(codes: Matrix, data: &Dataset) -> Result<Self, MmcError> {
        if codes.rows() != data.len() {
            return Err(MmcError::Mismatch(format!(
                "{} codes for {} samples",
                codes.rows(),
                data.len()
            )));
        }
        if !codes.is_finite() {
            return Err(MmcError::Degenerate("non-finite codes".into()));
        }
        Ok(Self {
            codes,
            dataset_ref: data.fingerprint(),
            standardized: false,
        })
    }

    pub fn m(&self) -> usize {
        self.codes.cols()
    }

    pub fn len(&self) -> usize {
        self.codes.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.rows() == 0
    }

    pub fn check_matches(&self, data: &Dataset) -> Result<(), MmcError> {
        if self.codes.rows() != data.len() {
            return Err(MmcError::Mismatch(format!(
                "{} codes for {} samples",
                self.codes.rows(),
                data.len()
            )));
        }
        let fp = data.fingerprint();
        if self.dataset_ref != fp {
            return Err(MmcError::Mismatch(format!(
                "coding was computed for dataset {} but got {fp}",
                self.dataset_ref
            )));
        }
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<(), DataError> {
        let header = [
            ("m", self.m().to_string()),
            ("n", self.len().to_string()),
            ("dataset", self.dataset_ref.clone()),
            ("standardized", self.standardized.to_string()),
        ];
        write_table(path, &header, &self.codes)
    }

    pub fn read(path: &Path) -> Result<Self, DataError> {
        let (meta, codes) = read_table(path)?;
        let get = |k: &str| meta.get(k).ok_or_else(|| DataError::MissingMeta(k.into()));
        let m: usize = get("m")?
            .parse()
            .map_err(|_| DataError::Invalid("meta `m` is not a count".into()))?;
        if m != codes.cols() {
            return Err(DataError::Invalid(format!(
                "meta says m={m} but rows hold {} values",
                codes.cols()
            )));
        }
        Ok(Self {
            codes,
            dataset_ref: get("dataset")?.clone(),
            standardized: get("standardized")? == "true",
        })
    }
}

/// Column means and population standard deviations.
fn moments(codes: &Matrix) -> (Vec<f64>, Vec<f64>) {
    let n = codes.rows() as f64;
    let mean: Vec<f64> = codes.column_sums().into_iter().map(|s| s / n).collect();
    let mut var = vec![0.0; codes.cols()];
    for r in codes.row_iter() {
        for ((v, x), mu) in var.iter_mut().zip(r).zip(&mean) {
            *v += (x - mu) * (x - mu);
        }
    }
    (mean, var.into_iter().map(|v| (v / n).sqrt()).collect())
}

/// z-score per code dimension: `(c − mean) / std` with population std.
pub fn standardize_codes(coding: &Coding) -> Result<Coding, MmcError> {
    if coding.is_empty() {
        return Err(MmcError::Degenerate("empty coding".into()));
    }
    let (mean, std) = moments(&coding.codes);
    if let Some(d) = std.iter().position(|s| !(*s > 0.0)) {
        return Err(MmcError::Degenerate(format!("code dimension {d} has zero variance")));
    }
    let mut codes = coding.codes.clone();
    let m = codes.cols();
    for row in codes.as_mut_slice().chunks_exact_mut(m) {
        for ((x, mu), s) in row.iter_mut().zip(&mean).zip(&std) {
            *x = (*x - mu) / s;
        }
    }
    Ok(Coding {
        codes,
        dataset_ref: coding.dataset_ref.clone(),
        standardized: true,
    })
}

/// Adds `N(0, σ²)` noise to every code, used to break exact ties.
pub fn jitter_codes(coding: &Coding, sigma: f64, seed: u64) -> Coding {
    let mut rng = stream(seed, Stream::Jitter);
    let mut out = coding.clone();
    for x in out.codes.as_mut_slice() {
        *x += sigma * rng.sample::<f64, _>(StandardNormal);
    }
    out
}

/// The polyline through the data in code order (1-D codings only).
pub fn coding_path_length(data: &Dataset, coding: &Coding) -> Result<PathOrder, MmcError> {
    if coding.m() != 1 {
        return Err(MmcError::Config(format!(
            "path length needs a 1-D coding, got m={}",
            coding.m()
        )));
    }
    if coding.len() != data.len() {
        return Err(MmcError::Mismatch(format!(
            "{} codes for {} samples",
            coding.len(),
            data.len()
        )));
    }
    let codes = coding.codes.as_slice();
    let mut order: Vec<usize> = (0..codes.len()).collect();
    order.sort_by(|&a, &b| codes[a].total_cmp(&codes[b]).then(a.cmp(&b)));
    for w in order.windows(2) {
        if codes[w[0]] == codes[w[1]] {
            return Err(MmcError::TiedCodes {
                first: w[0],
                second: w[1],
            });
        }
    }
    PathOrder::new(&data.points, order)
}

/// Projection onto the first principal component, found by power iteration
/// on the sample covariance. The direction's largest component is made
/// positive so the sign is deterministic.
pub fn pca_codes(data: &Dataset) -> Result<Coding, MmcError> {
    let n = data.len();
    if n < 2 {
        return Err(MmcError::Degenerate("PCA needs at least two samples".into()));
    }
    let d = data.dim();
    let (mean, _) = moments(&data.points);
    let mut centered = data.points.clone();
    for row in centered.as_mut_slice().chunks_exact_mut(d) {
        for (x, mu) in row.iter_mut().zip(&mean) {
            *x -= mu;
        }
    }
    let mut cov = centered.t_matmul(&centered);
    cov.scale(1.0 / n as f64);
    let trace: f64 = (0..d).map(|i| cov.get(i, i)).sum();
    if !(trace > 0.0) {
        return Err(MmcError::Degenerate("data has zero variance".into()));
    }

    let start = (0..d)
        .max_by(|&a, &b| cov.get(a, a).total_cmp(&cov.get(b, b)).then(b.cmp(&a)))
        .expect("d >= 1");
    let mut dir = vec![0.0; d];
    dir[start] = 1.0;
    for _ in 0..100_000 {
        let mut next = cov.mul_vec(&dir);
        let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            break;
        }
        next.iter_mut().for_each(|x| *x /= norm);
        let change = next
            .iter()
            .zip(&dir)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        dir = next;
        if change < 1e-10 {
            break;
        }
    }
    let lead = (0..d)
        .max_by(|&a, &b| dir[a].abs().total_cmp(&dir[b].abs()))
        .expect("d >= 1");
    if dir[lead] < 0.0 {
        dir.iter_mut().for_each(|x| *x = -*x);
    }
    let codes = Matrix::from_vec(n, 1, centered.mul_vec(&dir))?;
    Coding::new(codes, data)
}
