//! Float sampler of the natural parametrization of the critical curve of
//! an analytic germ: the trajectory of the field (-J_y, J_x) from the
//! origin, the image curve Sigma = f(Gamma), and finite-difference
//! estimates of the derivatives Sigma^(n)(0).

use num_complex::Complex64;
use thiserror::Error;

use super::AnalyticGerm;
use crate::series2::{Axis, Series2};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("step size underflow")]
    StepUnderflow,
}

#[derive(Clone, Debug)]
pub struct FlowSample {
    pub t: f64,
    pub gamma: (f64, f64),
    pub sigma: Complex64,
}

#[derive(Clone, Debug)]
pub struct FlowData {
    pub samples: Vec<FlowSample>,
    /// Central-difference estimates of Sigma^(n)(0), n = 1..=4.
    pub sigma_derivs_fd: [Complex64; 4],
    /// Difference between full-step and half-step endpoints.
    pub richardson_err: f64,
}

struct FieldEval {
    jx: Series2,
    jy: Series2,
    f1: Series2,
    f2: Series2,
}

impl FieldEval {
    fn velocity(&self, p: (f64, f64)) -> (f64, f64) {
        // the Jacobian is real-valued; imaginary parts vanish up to rounding
        let jy = self.jy.eval_f64(p.0, p.1).re;
        let jx = self.jx.eval_f64(p.0, p.1).re;
        (-jy, jx)
    }

    fn sigma(&self, p: (f64, f64)) -> Complex64 {
        let a = self.f1.eval_f64(p.0, p.1);
        let b = self.f2.eval_f64(p.0, p.1);
        Complex64::new(a.re, b.re)
    }

    fn rk4_step(&self, p: (f64, f64), h: f64) -> (f64, f64) {
        let k1 = self.velocity(p);
        let k2 = self.velocity((p.0 + 0.5 * h * k1.0, p.1 + 0.5 * h * k1.1));
        let k3 = self.velocity((p.0 + 0.5 * h * k2.0, p.1 + 0.5 * h * k2.1));
        let k4 = self.velocity((p.0 + h * k3.0, p.1 + h * k3.1));
        (
            p.0 + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            p.1 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        )
    }

    /// Integrate from the origin to time t with |substeps| of size <= h_cap.
    fn flow_to(&self, t: f64, h_cap: f64) -> (f64, f64) {
        let mut p = (0.0, 0.0);
        if t == 0.0 {
            return p;
        }
        let n = (t.abs() / h_cap).ceil().max(1.0) as usize;
        let h = t / n as f64;
        for _ in 0..n {
            p = self.rk4_step(p, h);
        }
        p
    }
}

/// Fourth-order integration of Gamma' = (-J_y, J_x), Gamma(0) = 0, sampled
/// at `count + 1` uniform times in [0, t_max], plus finite-difference
/// estimates of Sigma^(n)(0) for n <= 4 at step 1e-3.
pub fn sample_gradient_flow(
    g: &AnalyticGerm,
    t_max: f64,
    count: usize,
) -> Result<FlowData, FlowError> {
    let jac = g.jacobian();
    let (f1, f2) = g.components();
    let eval = FieldEval {
        jx: jac.partial(Axis::X),
        jy: jac.partial(Axis::Y),
        f1: f1.clone(),
        f2: f2.clone(),
    };

    let mut samples = Vec::new();
    let mut richardson_err = 0.0f64;
    if t_max == 0.0 || count == 0 {
        let p = (0.0, 0.0);
        samples.push(FlowSample {
            t: 0.0,
            gamma: p,
            sigma: eval.sigma(p),
        });
    } else {
        let h = t_max / count as f64;
        if !h.is_normal() {
            return Err(FlowError::StepUnderflow);
        }
        let mut p = (0.0, 0.0);
        samples.push(FlowSample {
            t: 0.0,
            gamma: p,
            sigma: eval.sigma(p),
        });
        for k in 1..=count {
            p = eval.rk4_step(p, h);
            samples.push(FlowSample {
                t: k as f64 * h,
                gamma: p,
                sigma: eval.sigma(p),
            });
        }
        // one Richardson halving check on the endpoint
        let mut ph = (0.0, 0.0);
        for _ in 0..2 * count {
            ph = eval.rk4_step(ph, h / 2.0);
        }
        richardson_err = ((p.0 - ph.0).powi(2) + (p.1 - ph.1).powi(2)).sqrt();
    }

    // central differences at step 1e-3 (sub-integrated at cap 1e-4)
    let hfd = 1e-3;
    let cap = 1e-4;
    let s = |t: f64| eval.sigma(eval.flow_to(t, cap));
    let (s2n, s1n, s0, s1, s2) = (s(-2.0 * hfd), s(-hfd), s(0.0), s(hfd), s(2.0 * hfd));
    let d1 = (s1 - s1n) / (2.0 * hfd);
    let d2 = (s1 - 2.0 * s0 + s1n) / (hfd * hfd);
    let d3 = (s2 - 2.0 * s1 + 2.0 * s1n - s2n) / (2.0 * hfd.powi(3));
    let d4 = (s2 - 4.0 * s1 + 6.0 * s0 - 4.0 * s1n + s2n) / hfd.powi(4);

    Ok(FlowData {
        samples,
        sigma_derivs_fd: [d1, d2, d3, d4],
        richardson_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::AnalyticGerm;
    use crate::text::parse_series2;

    fn germ(f1: &str, f2: &str) -> AnalyticGerm {
        AnalyticGerm::new(
            parse_series2(f1, 8).unwrap(),
            parse_series2(f2, 8).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn fold_first_derivative_matches_m1() {
        // (x, y^2): M_1(0) = -2 and Sigma(t) = (-2t, 0)
        let g = germ("x", "y^2");
        let data = sample_gradient_flow(&g, 0.1, 50).unwrap();
        let d1 = data.sigma_derivs_fd[0];
        assert!((d1.re + 2.0).abs() / 2.0 < 1e-6, "got {d1}");
        assert!(d1.im.abs() < 1e-9);
        assert!(data.richardson_err < 1e-9);
    }

    #[test]
    fn cusp_second_derivative_matches_m2() {
        // (x, xy + y^3): Sigma(t) = -3t^2 - 2i t^3
        let g = germ("x", "x*y + y^3");
        let data = sample_gradient_flow(&g, 0.1, 50).unwrap();
        assert!(data.sigma_derivs_fd[0].norm() < 1e-4);
        let d2 = data.sigma_derivs_fd[1];
        assert!((d2.re + 6.0).abs() / 6.0 < 1e-4, "got {d2}");
    }

    #[test]
    fn zero_range_single_sample() {
        let g = germ("x", "y^2");
        let data = sample_gradient_flow(&g, 0.0, 10).unwrap();
        assert_eq!(data.samples.len(), 1);
        assert_eq!(data.samples[0].gamma, (0.0, 0.0));
        assert_eq!(data.samples[0].sigma, Complex64::new(0.0, 0.0));
    }
}
