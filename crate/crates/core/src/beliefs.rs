//! Shared posterior representations and their conjugate updates.
//!
//! Three families cover every environment in the crate:
//!
//! * [`GaussianVectorBelief`]: independent or correlated Gaussian beliefs over
//!   reward parameters, either on the natural scale (normal likelihood) or on
//!   the log scale (lognormal likelihood).
//! * [`DirichletBelief`]: Dirichlet counts over next-state distributions.
//! * [`FiniteScenarioBelief`]: a categorical posterior over a finite list of
//!   complete parameterizations with noiseless rewards.

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::linalg::Matrix;
use crate::planner::TransitionModel;
use crate::strategies::SampledModel;
use crate::{Error, Result};

/// Whether parameters are modelled directly or through their logarithm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Normal,
    Lognormal,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Covariance {
    Diagonal(Vec<f64>),
    Dense(Matrix),
}

impl Covariance {
    pub fn dim(&self) -> usize {
        match self {
            Covariance::Diagonal(v) => v.len(),
            Covariance::Dense(m) => m.dim(),
        }
    }

    pub fn variance(&self, i: usize) -> f64 {
        match self {
            Covariance::Diagonal(v) => v[i],
            Covariance::Dense(m) => m[(i, i)],
        }
    }

    pub fn to_dense(&self) -> Matrix {
        match self {
            Covariance::Diagonal(v) => Matrix::from_diagonal(v),
            Covariance::Dense(m) => m.clone(),
        }
    }
}

/// Square-root factor `D` of a covariance matrix, with `DᵀD = Σ`.
///
/// `D` is the transpose of the lower Cholesky factor. Mapping a standard
/// normal seed through [`CovarianceFactor::apply`] (which multiplies by `Dᵀ`)
/// yields covariance `Σ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceFactor {
    upper: Matrix,
}

impl CovarianceFactor {
    pub fn matrix(&self) -> &Matrix {
        &self.upper
    }

    /// Returns `Dᵀ z`.
    pub fn apply(&self, z: &[f64]) -> Vec<f64> {
        let n = self.upper.dim();
        (0..n)
            .map(|i| (0..=i).map(|k| self.upper[(k, i)] * z[k]).sum())
            .collect()
    }
}

/// Factors a symmetric positive semidefinite matrix as `DᵀD`.
pub fn factorize_covariance(sigma: &Matrix) -> Result<CovarianceFactor> {
    let lower = sigma.cholesky_lower()?;
    Ok(CovarianceFactor { upper: lower.transpose() })
}

/// Gaussian belief over a parameter vector (or its logarithm).
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianVectorBelief {
    mean: Vec<f64>,
    covariance: Covariance,
    noise_variance: f64,
    scale: Scale,
}

impl GaussianVectorBelief {
    pub fn diagonal(mean: Vec<f64>, variances: Vec<f64>, noise_variance: f64, scale: Scale) -> Result<Self> {
        if mean.len() != variances.len() {
            return Err(Error::DimensionMismatch { expected: mean.len(), found: variances.len() });
        }
        if variances.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidPrior("variances must be finite and nonnegative".into()));
        }
        Self::build(mean, Covariance::Diagonal(variances), noise_variance, scale)
    }

    pub fn dense(mean: Vec<f64>, covariance: Matrix, noise_variance: f64, scale: Scale) -> Result<Self> {
        if mean.len() != covariance.dim() {
            return Err(Error::DimensionMismatch { expected: mean.len(), found: covariance.dim() });
        }
        covariance.cholesky_lower()?;
        Self::build(mean, Covariance::Dense(covariance), noise_variance, scale)
    }

    fn build(mean: Vec<f64>, covariance: Covariance, noise_variance: f64, scale: Scale) -> Result<Self> {
        if !(noise_variance.is_finite() && noise_variance > 0.0) {
            return Err(Error::InvalidPrior("noise variance must be positive".into()));
        }
        if mean.iter().any(|m| !m.is_finite()) {
            return Err(Error::InvalidPrior("prior mean must be finite".into()));
        }
        Ok(Self { mean, covariance, noise_variance, scale })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn covariance(&self) -> &Covariance {
        &self.covariance
    }

    pub fn variance(&self, i: usize) -> f64 {
        self.covariance.variance(i)
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.dim() {
            return Err(Error::InvalidInput(format!("parameter index {i} out of range {}", self.dim())));
        }
        Ok(())
    }

    /// Normal-normal update of coordinate `i` given one reward.
    pub fn update_normal(&mut self, i: usize, reward: f64) -> Result<()> {
        if self.scale != Scale::Normal {
            return Err(Error::InvalidInput("normal update on a lognormal belief".into()));
        }
        if !reward.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite reward {reward}")));
        }
        self.check_index(i)?;
        self.condition(i, reward);
        Ok(())
    }

    /// Lognormal update of coordinate `i`. The likelihood is
    /// `ln r ~ N(ln θ − σ²/2, σ²)`, so `ln r + σ²/2` is an unbiased
    /// observation of `ln θ`.
    pub fn update_lognormal(&mut self, i: usize, reward: f64) -> Result<()> {
        if self.scale != Scale::Lognormal {
            return Err(Error::InvalidInput("lognormal update on a normal belief".into()));
        }
        if !(reward.is_finite() && reward > 0.0) {
            return Err(Error::InvalidInput(format!("lognormal reward must be positive, got {reward}")));
        }
        self.check_index(i)?;
        self.condition(i, reward.ln() + self.noise_variance / 2.0);
        Ok(())
    }

    /// Dispatches on the belief's scale.
    pub fn observe(&mut self, i: usize, reward: f64) -> Result<()> {
        match self.scale {
            Scale::Normal => self.update_normal(i, reward),
            Scale::Lognormal => self.update_lognormal(i, reward),
        }
    }

    // Conditions on y = θ_i + ε, ε ~ N(0, σ²).
    fn condition(&mut self, i: usize, y: f64) {
        let noise = self.noise_variance;
        match &mut self.covariance {
            Covariance::Diagonal(var) => {
                let v = var[i];
                if v == 0.0 {
                    return;
                }
                self.mean[i] = (noise * self.mean[i] + v * y) / (v + noise);
                var[i] = v * noise / (v + noise);
            }
            Covariance::Dense(sigma) => {
                let n = sigma.dim();
                let s = sigma[(i, i)] + noise;
                let col: Vec<f64> = (0..n).map(|r| sigma[(r, i)]).collect();
                if col.iter().all(|&c| c == 0.0) {
                    return;
                }
                let innovation = y - self.mean[i];
                for r in 0..n {
                    self.mean[r] += col[r] / s * innovation;
                }
                for r in 0..n {
                    for c in 0..n {
                        sigma[(r, c)] -= col[r] * col[c] / s;
                    }
                }
                // keep exact symmetry
                for r in 0..n {
                    for c in 0..r {
                        let avg = 0.5 * (sigma[(r, c)] + sigma[(c, r)]);
                        sigma[(r, c)] = avg;
                        sigma[(c, r)] = avg;
                    }
                }
            }
        }
    }

    pub fn factor(&self) -> Result<CovarianceFactor> {
        factorize_covariance(&self.covariance.to_dense())
    }

    /// `μ + Dᵀz` on the modelling scale (no exponentiation).
    pub fn shift(&self, z: &[f64]) -> Result<Vec<f64>> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: z.len() });
        }
        let perturbation = match &self.covariance {
            Covariance::Diagonal(var) => var.iter().zip(z).map(|(v, z)| v.sqrt() * z).collect(),
            Covariance::Dense(_) => self.factor()?.apply(z),
        };
        Ok(self.mean.iter().zip(perturbation).map(|(m, p)| m + p).collect())
    }

    /// Maps a modelling-scale vector to parameter values.
    pub fn to_natural(&self, mut v: Vec<f64>) -> Vec<f64> {
        if self.scale == Scale::Lognormal {
            v.iter_mut().for_each(|x| *x = x.exp());
        }
        v
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let z: Vec<f64> = (0..self.dim()).map(|_| rng.sample(StandardNormal)).collect();
        let draw = self.shift(&z).expect("covariance validated at construction");
        self.to_natural(draw)
    }

    /// Coordinatewise `μ + β·sqrt(diag Σ)`, exponentiated for lognormal beliefs.
    pub fn upper_bound(&self, beta: f64) -> Vec<f64> {
        let ucb = (0..self.dim())
            .map(|i| self.mean[i] + beta * self.variance(i).sqrt())
            .collect();
        self.to_natural(ucb)
    }
}

/// Dirichlet counts over next states for every (state, action) pair.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletBelief {
    n_states: usize,
    n_actions: usize,
    alpha: Vec<f64>,
}

impl DirichletBelief {
    pub fn uniform(n_states: usize, n_actions: usize, alpha0: f64) -> Result<Self> {
        Self::from_alpha(n_states, n_actions, vec![alpha0; n_states * n_actions * n_states])
    }

    pub fn from_alpha(n_states: usize, n_actions: usize, alpha: Vec<f64>) -> Result<Self> {
        let expected = n_states * n_actions * n_states;
        if alpha.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: alpha.len() });
        }
        if alpha.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::InvalidPrior("Dirichlet parameters must be positive".into()));
        }
        Ok(Self { n_states, n_actions, alpha })
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    fn offset(&self, s: usize, a: usize) -> usize {
        (s * self.n_actions + a) * self.n_states
    }

    pub fn row(&self, s: usize, a: usize) -> &[f64] {
        let o = self.offset(s, a);
        &self.alpha[o..o + self.n_states]
    }

    pub fn alpha(&self, s: usize, a: usize, s2: usize) -> f64 {
        self.row(s, a)[s2]
    }

    pub fn row_total(&self, s: usize, a: usize) -> f64 {
        self.row(s, a).iter().sum()
    }

    pub fn update(&mut self, s: usize, a: usize, s2: usize) -> Result<()> {
        if s >= self.n_states || a >= self.n_actions || s2 >= self.n_states {
            return Err(Error::InvalidInput(format!("transition ({s}, {a}, {s2}) out of range")));
        }
        let o = self.offset(s, a);
        self.alpha[o + s2] += 1.0;
        Ok(())
    }

    pub fn has_integer_alpha(&self) -> bool {
        self.alpha.iter().all(|a| a.fract() == 0.0)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> TransitionModel {
        let mut probs = Vec::with_capacity(self.alpha.len());
        for row in self.alpha.chunks(self.n_states) {
            let draws: Vec<f64> = row
                .iter()
                .map(|&a| Gamma::new(a, 1.0).expect("positive shape").sample(rng))
                .collect();
            let total: f64 = draws.iter().sum();
            probs.extend(draws.iter().map(|d| d / total));
        }
        TransitionModel::new(self.n_states, self.n_actions, probs).expect("normalized rows")
    }

    pub fn mean(&self) -> TransitionModel {
        let mut probs = Vec::with_capacity(self.alpha.len());
        for row in self.alpha.chunks(self.n_states) {
            let total: f64 = row.iter().sum();
            probs.extend(row.iter().map(|a| a / total));
        }
        TransitionModel::new(self.n_states, self.n_actions, probs).expect("normalized rows")
    }
}

/// Categorical posterior over complete parameterizations. Rewards are
/// noiseless, so an observation either matches a scenario or rules it out.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteScenarioBelief {
    scenarios: Vec<Vec<f64>>,
    probabilities: Vec<f64>,
}

const SCENARIO_MATCH_TOL: f64 = 1e-9;

impl FiniteScenarioBelief {
    pub fn new(scenarios: Vec<Vec<f64>>, probabilities: Vec<f64>) -> Result<Self> {
        if scenarios.is_empty() {
            return Err(Error::InvalidPrior("at least one scenario is required".into()));
        }
        if scenarios.len() != probabilities.len() {
            return Err(Error::DimensionMismatch { expected: scenarios.len(), found: probabilities.len() });
        }
        let dim = scenarios[0].len();
        if scenarios.iter().any(|s| s.len() != dim) {
            return Err(Error::InvalidPrior("scenarios differ in dimension".into()));
        }
        let total: f64 = probabilities.iter().sum();
        if probabilities.iter().any(|p| !(p.is_finite() && *p >= 0.0)) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidPrior("scenario probabilities must form a probability vector".into()));
        }
        Ok(Self { scenarios, probabilities })
    }

    pub fn scenarios(&self) -> &[Vec<f64>] {
        &self.scenarios
    }

    pub fn scenario(&self, index: usize) -> &[f64] {
        &self.scenarios[index]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn dim(&self) -> usize {
        self.scenarios[0].len()
    }

    pub fn is_revealed(&self) -> bool {
        self.probabilities.iter().filter(|&&p| p > 0.0).count() == 1
    }

    /// Bayes rule with an indicator likelihood. `param` is the parameter the
    /// reward reveals; `None` marks an uninformative observation.
    pub fn update(&mut self, param: Option<usize>, reward: f64) -> Result<()> {
        let Some(i) = param else { return Ok(()) };
        if i >= self.dim() {
            return Err(Error::InvalidInput(format!("parameter index {i} out of range {}", self.dim())));
        }
        let posterior: Vec<f64> = self
            .scenarios
            .iter()
            .zip(&self.probabilities)
            .map(|(theta, &p)| {
                let tol = SCENARIO_MATCH_TOL * reward.abs().max(1.0);
                if (theta[i] - reward).abs() <= tol { p } else { 0.0 }
            })
            .collect();
        let total: f64 = posterior.iter().sum();
        if total <= 0.0 {
            return Err(Error::ModelMismatch);
        }
        self.probabilities = posterior.into_iter().map(|p| p / total).collect();
        Ok(())
    }

    /// Inverse CDF of the scenario distribution at `u ∈ [0, 1)`.
    pub fn inverse_cdf(&self, u: f64) -> usize {
        let mut cumulative = 0.0;
        let mut last_positive = 0;
        for (n, &p) in self.probabilities.iter().enumerate() {
            if p <= 0.0 {
                continue;
            }
            last_positive = n;
            cumulative += p;
            if u < cumulative {
                return n;
            }
        }
        last_positive
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.inverse_cdf(rng.random::<f64>())
    }

    pub fn mean(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.dim()];
        for (theta, &p) in self.scenarios.iter().zip(&self.probabilities) {
            for (acc, t) in m.iter_mut().zip(theta) {
                *acc += p * t;
            }
        }
        m
    }

    /// Positive-probability scenario maximizing `value`; ties go to the
    /// lowest index.
    pub fn most_optimistic(&self, value: &dyn Fn(&[f64]) -> f64) -> usize {
        let mut best: Option<(usize, f64)> = None;
        for (n, theta) in self.scenarios.iter().enumerate() {
            if self.probabilities[n] <= 0.0 {
                continue;
            }
            let v = value(theta);
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((n, v));
            }
        }
        best.expect("at least one scenario has positive probability").0
    }
}

/// The shared posterior, whichever family it belongs to.
#[derive(Clone, Debug, PartialEq)]
pub enum BeliefState {
    Gaussian(GaussianVectorBelief),
    Dirichlet(DirichletBelief),
    Scenario(FiniteScenarioBelief),
}

impl BeliefState {
    pub fn family(&self) -> &'static str {
        match self {
            BeliefState::Gaussian(_) => "gaussian",
            BeliefState::Dirichlet(_) => "dirichlet",
            BeliefState::Scenario(_) => "finite-scenario",
        }
    }

    /// One exact draw from the posterior.
    pub fn sample_posterior<R: Rng + ?Sized>(&self, rng: &mut R) -> SampledModel {
        match self {
            BeliefState::Gaussian(b) => SampledModel::Rewards(b.sample(rng)),
            BeliefState::Dirichlet(b) => SampledModel::Transitions(b.sample(rng)),
            BeliefState::Scenario(b) => {
                let index = b.sample(rng);
                SampledModel::Scenario { index, theta: b.scenario(index).to_vec() }
            }
        }
    }

    /// Optimistic parameters. `scenario_value` scores a complete
    /// parameterization by its optimal value and is consulted only for
    /// finite-scenario beliefs.
    pub fn ucb_parameters(&self, beta: f64, scenario_value: &dyn Fn(&[f64]) -> f64) -> Result<SampledModel> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::InvalidInput(format!("confidence width must be nonnegative, got {beta}")));
        }
        match self {
            BeliefState::Gaussian(b) => Ok(SampledModel::Rewards(b.upper_bound(beta))),
            BeliefState::Scenario(b) => {
                let index = b.most_optimistic(scenario_value);
                Ok(SampledModel::Scenario { index, theta: b.scenario(index).to_vec() })
            }
            BeliefState::Dirichlet(_) => Err(Error::Unsupported { strategy: "concurrent-ucrl", belief: "dirichlet" }),
        }
    }
}
