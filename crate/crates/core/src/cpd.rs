//! Conditional distributions attached to nodes.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore};
use rand_distr::StandardNormal;

use crate::value::Value;

pub type SampleFn = dyn Fn(&[&Value], &mut dyn RngCore) -> Value + Send + Sync;
pub type DensityFn = dyn Fn(&Value, &[&Value]) -> f64 + Send + Sync;

/// A conditional distribution `P(X | parents)`.
///
/// Parent values are passed in the order the parents were declared on the
/// node. The density is optional; samplers that feed likelihood weights or
/// the enumeration oracle need one.
#[derive(Clone)]
pub struct Cpd {
    sampler: Arc<SampleFn>,
    density: Option<Arc<DensityFn>>,
}

impl fmt::Debug for Cpd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cpd")
            .field("has_density", &self.density.is_some())
            .finish()
    }
}

impl Cpd {
    pub fn new<S, D>(sampler: S, density: D) -> Self
    where
        S: Fn(&[&Value], &mut dyn RngCore) -> Value + Send + Sync + 'static,
        D: Fn(&Value, &[&Value]) -> f64 + Send + Sync + 'static,
    {
        Cpd {
            sampler: Arc::new(sampler),
            density: Some(Arc::new(density)),
        }
    }

    /// A CPD that can be sampled but not evaluated.
    pub fn sampler_only<S>(sampler: S) -> Self
    where
        S: Fn(&[&Value], &mut dyn RngCore) -> Value + Send + Sync + 'static,
    {
        Cpd {
            sampler: Arc::new(sampler),
            density: None,
        }
    }

    /// A deterministic function of the parents. Its density is the
    /// indicator of the function's output.
    pub fn deterministic<F>(f: F) -> Self
    where
        F: Fn(&[&Value]) -> Value + Send + Sync + 'static,
    {
        let f = Arc::new(f);
        let g = Arc::clone(&f);
        Cpd {
            sampler: Arc::new(move |pa: &[&Value], _rng: &mut dyn RngCore| f(pa)),
            density: Some(Arc::new(
                move |x: &Value, pa: &[&Value]| {
                    if *x == g(pa) {
                        1.0
                    } else {
                        0.0
                    }
                },
            )),
        }
    }

    /// A categorical distribution over `support` whose probabilities depend
    /// on the parents. `probs` must return one weight per support entry.
    pub fn categorical<F>(support: Vec<i64>, probs: F) -> Self
    where
        F: Fn(&[&Value]) -> Vec<f64> + Send + Sync + 'static,
    {
        let probs = Arc::new(probs);
        let p2 = Arc::clone(&probs);
        let support2 = support.clone();
        Cpd {
            sampler: Arc::new(move |pa: &[&Value], rng: &mut dyn RngCore| {
                let p = probs(pa);
                let total: f64 = p.iter().sum();
                let mut u = rng.random::<f64>() * total;
                for (x, w) in support.iter().zip(&p) {
                    if u < *w {
                        return Value::Discrete(*x);
                    }
                    u -= w;
                }
                // Rounding left a sliver past the last bucket: take the last
                // entry with positive weight.
                let last = p
                    .iter()
                    .rposition(|w| *w > 0.0)
                    .unwrap_or(support.len() - 1);
                Value::Discrete(support[last])
            }),
            density: Some(Arc::new(move |x: &Value, pa: &[&Value]| {
                let Some(x) = x.as_discrete() else { return 0.0 };
                match support2.iter().position(|s| *s == x) {
                    Some(i) => p2(pa)[i],
                    None => 0.0,
                }
            })),
        }
    }

    /// A parent-free categorical distribution.
    pub fn table(support: Vec<i64>, probs: Vec<f64>) -> Self {
        Cpd::categorical(support, move |_| probs.clone())
    }

    /// Uniform over a finite support.
    pub fn uniform_discrete(support: Vec<i64>) -> Self {
        let n = support.len();
        Cpd::table(support, vec![1.0 / n as f64; n])
    }

    /// A Gaussian with parent-dependent mean and fixed standard deviation.
    pub fn gaussian<F>(mean: F, sigma: f64) -> Self
    where
        F: Fn(&[&Value]) -> f64 + Send + Sync + 'static,
    {
        let mean = Arc::new(mean);
        let m2 = Arc::clone(&mean);
        Cpd {
            sampler: Arc::new(move |pa: &[&Value], rng: &mut dyn RngCore| {
                let z: f64 = rng.sample(StandardNormal);
                Value::Real(mean(pa) + sigma * z)
            }),
            density: Some(Arc::new(move |x: &Value, pa: &[&Value]| {
                match x.as_real() {
                    Some(x) => normal_pdf(x, m2(pa), sigma),
                    None => 0.0,
                }
            })),
        }
    }

    /// Uniform on `[lower, upper]`.
    pub fn uniform_interval(lower: f64, upper: f64) -> Self {
        let width = upper - lower;
        Cpd::new(
            move |_pa, rng| Value::Real(lower + width * rng.random::<f64>()),
            move |x, _pa| match x.as_real() {
                Some(x) if x >= lower && x <= upper => 1.0 / width,
                _ => 0.0,
            },
        )
    }

    pub fn sample(&self, parents: &[&Value], rng: &mut dyn RngCore) -> Value {
        (self.sampler)(parents, rng)
    }

    pub fn density(&self, value: &Value, parents: &[&Value]) -> Option<f64> {
        self.density.as_ref().map(|d| d(value, parents))
    }

    pub fn has_density(&self) -> bool {
        self.density.is_some()
    }
}

/// Normal density; `sigma == 0` is treated as a point mass (indicator).
pub fn normal_pdf(x: f64, mean: f64, sigma: f64) -> f64 {
    if sigma == 0.0 {
        return if x == mean { 1.0 } else { 0.0 };
    }
    let z = (x - mean) / sigma;
    (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
}
