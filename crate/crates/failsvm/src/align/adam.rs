//! Adam parameter updates with bias correction.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct AdamState {
    first_moment: Vec<f64>,
    second_moment: Vec<f64>,
    step: usize,
    beta1: f64,
    beta2: f64,
    eps: f64,
}

impl AdamState {
    pub fn new(dim: usize, beta1: f64, beta2: f64, eps: f64) -> Result<Self> {
        for (name, v, hi) in [("beta1", beta1, 1.0), ("beta2", beta2, 1.0)] {
            if !(v >= 0.0 && v < hi) {
                return Err(Error::Parameter(format!(
                    "{name} must lie in [0, 1), got {v}"
                )));
            }
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::Parameter(format!("eps must be positive, got {eps}")));
        }
        Ok(AdamState {
            first_moment: vec![0.0; dim],
            second_moment: vec![0.0; dim],
            step: 0,
            beta1,
            beta2,
            eps,
        })
    }

    pub fn step_count(&self) -> usize {
        self.step
    }

    /// One ascent step: `params += lr * m_hat / (sqrt(v_hat) + eps)`.
    pub fn ascend(&mut self, params: &mut [f64], grad: &[f64], lr: f64) -> Result<()> {
        if params.len() != self.first_moment.len() || grad.len() != params.len() {
            return Err(Error::Shape(format!(
                "adam state holds {} parameter(s), got {} params / {} grads",
                self.first_moment.len(),
                params.len(),
                grad.len()
            )));
        }
        self.step += 1;
        let t = self.step as i32;
        let bc1 = 1.0 - self.beta1.powi(t);
        let bc2 = 1.0 - self.beta2.powi(t);
        for i in 0..params.len() {
            self.first_moment[i] = self.beta1 * self.first_moment[i] + (1.0 - self.beta1) * grad[i];
            self.second_moment[i] =
                self.beta2 * self.second_moment[i] + (1.0 - self.beta2) * grad[i] * grad[i];
            let m_hat = self.first_moment[i] / bc1;
            let v_hat = self.second_moment[i] / bc2;
            params[i] += lr * m_hat / (v_hat.sqrt() + self.eps);
        }
        Ok(())
    }
}
