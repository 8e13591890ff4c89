//! Adversarial losses on raw discriminator outputs (`[batch × 1]`). Each
//! `*_grad` function also returns the gradient of the loss w.r.t. its inputs.

use super::{GanError, LossVariant};
use crate::nn::Matrix;

#[inline]
fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

#[inline]
fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn check(m: &Matrix, what: &str) -> Result<(), GanError> {
    if m.rows() == 0 {
        return Err(GanError::Contract(format!("{what} is empty")));
    }
    if !m.is_finite() {
        return Err(GanError::Numeric(format!("non-finite {what}")));
    }
    Ok(())
}

/// Discriminator loss and its gradients w.r.t. `d_real` and `d_fake`.
///
/// * standard: `E softplus(−D(x)) + E softplus(D(G(z)))`, i.e.
///   `−E log σ(D(x)) − E log(1 − σ(D(G(z))))`
/// * wgan: `−E D(x) + E D(G(z))` (penalty added separately)
/// * hinge: `E (1 − D(x))₊ + E (1 + D(G(z)))₊`
pub fn d_loss_grad(
    variant: LossVariant,
    d_real: &Matrix,
    d_fake: &Matrix,
) -> Result<(f64, Matrix, Matrix), GanError> {
    check(d_real, "d_real")?;
    check(d_fake, "d_fake")?;
    let (nr, nf) = (d_real.rows() as f64, d_fake.rows() as f64);
    let mut loss = 0.0;
    let (gr, gf) = match variant {
        LossVariant::Standard => {
            loss += d_real.as_slice().iter().map(|&r| softplus(-r)).sum::<f64>() / nr;
            loss += d_fake.as_slice().iter().map(|&f| softplus(f)).sum::<f64>() / nf;
            (
                d_real.map(|r| -sigmoid(-r) / nr),
                d_fake.map(|f| sigmoid(f) / nf),
            )
        }
        LossVariant::WganGp => {
            loss -= d_real.as_slice().iter().sum::<f64>() / nr;
            loss += d_fake.as_slice().iter().sum::<f64>() / nf;
            (d_real.map(|_| -1.0 / nr), d_fake.map(|_| 1.0 / nf))
        }
        LossVariant::HingeSn => {
            loss += d_real.as_slice().iter().map(|&r| (1.0 - r).max(0.0)).sum::<f64>() / nr;
            loss += d_fake.as_slice().iter().map(|&f| (1.0 + f).max(0.0)).sum::<f64>() / nf;
            (
                d_real.map(|r| if r < 1.0 { -1.0 / nr } else { 0.0 }),
                d_fake.map(|f| if f > -1.0 { 1.0 / nf } else { 0.0 }),
            )
        }
    };
    Ok((loss, gr, gf))
}

pub fn d_loss(variant: LossVariant, d_real: &Matrix, d_fake: &Matrix) -> Result<f64, GanError> {
    d_loss_grad(variant, d_real, d_fake).map(|(l, _, _)| l)
}

/// Generator loss: `E softplus(−D(G(z)))` (non-saturating) for standard,
/// `−E D(G(z))` for wgan and hinge.
pub fn g_loss_grad(variant: LossVariant, d_fake: &Matrix) -> Result<(f64, Matrix), GanError> {
    check(d_fake, "d_fake")?;
    let n = d_fake.rows() as f64;
    Ok(match variant {
        LossVariant::Standard => (
            d_fake.as_slice().iter().map(|&f| softplus(-f)).sum::<f64>() / n,
            d_fake.map(|f| -sigmoid(-f) / n),
        ),
        LossVariant::WganGp | LossVariant::HingeSn => (
            -d_fake.as_slice().iter().sum::<f64>() / n,
            d_fake.map(|_| -1.0 / n),
        ),
    })
}

pub fn g_loss(variant: LossVariant, d_fake: &Matrix) -> Result<f64, GanError> {
    g_loss_grad(variant, d_fake).map(|(l, _)| l)
}
