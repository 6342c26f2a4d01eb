//! Lens (filter) functions.

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::PointCloud;
use crate::scalar::Real;

/// A real-valued function on data points.
#[derive(Debug, Clone, PartialEq)]
pub enum LensSpec<T> {
    L2Norm,
    /// Population standard deviation of the coordinates.
    StdDev,
    MinValue,
    Coordinate(usize),
    Linear {
        coeffs: Vec<T>,
    },
    /// Linear part plus `alpha * x_i * x_j` monomials.
    Quadratic {
        coeffs: Vec<T>,
        terms: Vec<(usize, usize, T)>,
    },
}

impl<T: Real> LensSpec<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            LensSpec::L2Norm => "l2_norm",
            LensSpec::StdDev => "std_dev",
            LensSpec::MinValue => "min_value",
            LensSpec::Coordinate(_) => "coordinate",
            LensSpec::Linear { .. } => "linear",
            LensSpec::Quadratic { .. } => "quadratic",
        }
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        let mismatch = |what: String| Err(Error::domain(format!("{what} for dimension {dim}")));
        match self {
            LensSpec::Coordinate(j) if *j >= dim => mismatch(format!("coordinate {j} out of range")),
            LensSpec::Linear { coeffs } if coeffs.len() != dim => {
                mismatch(format!("{} linear coefficients", coeffs.len()))
            }
            LensSpec::Quadratic { coeffs, terms } => {
                if coeffs.len() != dim {
                    return mismatch(format!("{} linear coefficients", coeffs.len()));
                }
                if let Some((i, j, _)) = terms.iter().find(|(i, j, _)| *i >= dim || *j >= dim) {
                    return mismatch(format!("quadratic term ({i}, {j}) out of range"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Value of the lens at a single point.
    pub fn eval_point(&self, x: &[T]) -> T {
        let dot = |c: &[T]| c.iter().zip(x).fold(T::zero(), |s, (&a, &b)| s + a * b);
        match self {
            LensSpec::L2Norm => x.iter().fold(T::zero(), |s, &v| s + v * v).sqrt(),
            LensSpec::StdDev => {
                let n = T::from_count(x.len());
                let m = x.iter().fold(T::zero(), |s, &v| s + v) / n;
                (x.iter().fold(T::zero(), |s, &v| s + (v - m) * (v - m)) / n).sqrt()
            }
            LensSpec::MinValue => x.iter().copied().fold(T::infinity(), T::min),
            LensSpec::Coordinate(j) => x[*j],
            LensSpec::Linear { coeffs } => dot(coeffs),
            LensSpec::Quadratic { coeffs, terms } => terms
                .iter()
                .fold(dot(coeffs), |s, &(i, j, a)| s + a * x[i] * x[j]),
        }
    }

    /// Linear coefficients, if the lens has a linear part.
    pub fn linear_part(&self) -> Option<&[T]> {
        match self {
            LensSpec::Linear { coeffs } | LensSpec::Quadratic { coeffs, .. } => Some(coeffs),
            _ => None,
        }
    }
}

/// Evaluates the lens on every point of the cloud.
pub fn eval_lens<T: Real>(spec: &LensSpec<T>, cloud: &PointCloud<T>) -> Result<Vec<T>> {
    spec.check_dim(cloud.dim())?;
    Ok(cloud.points().map(|x| spec.eval_point(x)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LensFamily {
    Linear,
    Quadratic,
}

impl std::str::FromStr for LensFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(LensFamily::Linear),
            "quadratic" => Ok(LensFamily::Quadratic),
            _ => Err(Error::domain(format!("unknown lens family '{s}'"))),
        }
    }
}

/// Parameters of the random lens sampler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    pub family: LensFamily,
    /// Fraction of linear coefficients forced to zero.
    pub sparsity: f64,
    /// Number of quadratic monomials; `None` means `ceil(dim / 10)`.
    pub quad_terms: Option<usize>,
    pub seed: u64,
}

impl SamplerConfig {
    pub const SUBSET_SPARSITY: f64 = 0.9;

    pub fn new(family: LensFamily) -> Self {
        SamplerConfig {
            family,
            sparsity: 0.0,
            quad_terms: None,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.sparsity) {
            return Err(Error::domain("sparsity must lie in [0, 1]"));
        }
        Ok(())
    }

    pub fn quad_terms_for(&self, dim: usize) -> usize {
        self.quad_terms.unwrap_or(dim.div_ceil(10))
    }
}

fn unit_coeff<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::from_f64_lossy(rng.random_range(-1.0..=1.0))
}

/// Draws a random linear or quadratic lens with coefficients uniform on `[-1, 1]`.
///
/// `floor(sparsity * dim)` uniformly chosen linear coefficients are zeroed.
/// Quadratic monomial indices are drawn with replacement, so squares occur.
pub fn sample_lens<T: Real, R: Rng + ?Sized>(
    config: &SamplerConfig,
    dim: usize,
    rng: &mut R,
) -> Result<LensSpec<T>> {
    config.validate()?;
    if dim == 0 {
        return Err(Error::domain("lens dimension must be at least 1"));
    }
    let mut coeffs: Vec<T> = (0..dim).map(|_| unit_coeff(rng)).collect();
    let zeroed = ((config.sparsity * dim as f64).floor() as usize).min(dim);
    for i in sample(rng, dim, zeroed) {
        coeffs[i] = T::zero();
    }
    Ok(match config.family {
        LensFamily::Linear => LensSpec::Linear { coeffs },
        LensFamily::Quadratic => {
            let terms = (0..config.quad_terms_for(dim))
                .map(|_| {
                    let i = rng.random_range(0..dim);
                    let j = rng.random_range(0..dim);
                    (i, j, unit_coeff(rng))
                })
                .collect();
            LensSpec::Quadratic { coeffs, terms }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cloud(points: Vec<Vec<f64>>) -> PointCloud<f64> {
        let n = points.len();
        PointCloud::new(points, vec![0.0; n]).unwrap()
    }

    #[test]
    fn builtin_lenses() {
        let c = cloud(vec![vec![3.0, 4.0], vec![2.0, 0.5]]);
        assert_eq!(eval_lens(&LensSpec::L2Norm, &c).unwrap()[0], 5.0);
        assert_eq!(eval_lens(&LensSpec::MinValue, &c).unwrap(), vec![3.0, 0.5]);
        assert_eq!(eval_lens(&LensSpec::StdDev, &c).unwrap()[0], 0.5);
        assert_eq!(eval_lens(&LensSpec::Coordinate(1), &c).unwrap(), vec![4.0, 0.5]);
        let lin = LensSpec::Linear {
            coeffs: vec![1.0, -1.0],
        };
        assert_eq!(eval_lens(&lin, &c).unwrap()[1], 1.5);
        let zero = LensSpec::Linear {
            coeffs: vec![0.0, 0.0],
        };
        assert!(eval_lens(&zero, &c).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn quadratic_lens() {
        let c = cloud(vec![vec![2.0, 3.0]]);
        let q = LensSpec::Quadratic {
            coeffs: vec![1.0, 0.0],
            terms: vec![(0, 1, 0.5), (1, 1, -1.0)],
        };
        // 2 + 0.5*6 - 9
        assert_eq!(eval_lens(&q, &c).unwrap(), vec![-4.0]);
    }

    #[test]
    fn dimension_mismatch() {
        let c = cloud(vec![vec![1.0, 2.0]]);
        assert!(eval_lens(&LensSpec::Coordinate(2), &c).is_err());
        assert!(eval_lens(&LensSpec::Linear { coeffs: vec![1.0] }, &c).is_err());
        let q = LensSpec::Quadratic {
            coeffs: vec![1.0, 1.0],
            terms: vec![(0, 5, 1.0)],
        };
        assert!(eval_lens(&q, &c).is_err());
    }

    #[test]
    fn full_sparsity_zeroes_everything() {
        let mut cfg = SamplerConfig::new(LensFamily::Linear);
        cfg.sparsity = 1.0;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let lens: LensSpec<f64> = sample_lens(&cfg, 7, &mut rng).unwrap();
        assert!(lens.linear_part().unwrap().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn sparsity_count() {
        let mut cfg = SamplerConfig::new(LensFamily::Linear);
        cfg.sparsity = 0.9;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let lens: LensSpec<f64> = sample_lens(&cfg, 50, &mut rng).unwrap();
        let nonzero = lens.linear_part().unwrap().iter().filter(|&&c| c != 0.0).count();
        assert_eq!(nonzero, 5);
    }

    #[test]
    fn sampling_is_deterministic() {
        let cfg = SamplerConfig::new(LensFamily::Quadratic);
        let a: LensSpec<f64> = sample_lens(&cfg, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b: LensSpec<f64> = sample_lens(&cfg, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        match a {
            LensSpec::Quadratic { terms, .. } => assert_eq!(terms.len(), 1),
            _ => panic!("expected quadratic"),
        }
    }

    #[test]
    fn invalid_sampler_config() {
        let mut cfg = SamplerConfig::new(LensFamily::Linear);
        cfg.sparsity = 1.5;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(sample_lens::<f64, _>(&cfg, 3, &mut rng).is_err());
        cfg.sparsity = 0.0;
        assert!(sample_lens::<f64, _>(&cfg, 0, &mut rng).is_err());
    }
}
