//! Seeded synthetic PSDP instances.
//!
//! `A = P Λ Qᵀ` with `P`, `Q` random orthogonal and `Λ` an `n × m` matrix
//! whose leading `min(n, m)` diagonal is drawn per [`ProblemKind`]; every
//! other entry of `Λ` is zero. A planted optimum `X*` gives `B = X* A`, so
//! `F(X*) = 0`.
//!
//! Randomness: each instance owns a `ChaCha8Rng` seeded with
//! `seed_from_u64(seed)`. Gaussian draws use `rand_distr::StandardNormal`
//! (ziggurat). Matrices are filled in row-major order and the draws happen
//! in a fixed sequence: `P`, `Q`, `Λ`, the optimum, then the start. Repeated
//! instances of an experiment use [`derive_seed`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::cone::{project_psd, PsdMatrix};
use crate::error::{Error, Result};
use crate::linalg::{matmul, matmul_transpose, qr_orthogonal_factor, DenseMatrix};
use crate::objective::ProblemInstance;

pub type InstanceRng = ChaCha8Rng;

/// Distribution of the singular values of `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemKind {
    /// Truncated normal on [10, 12]: well conditioned.
    P1,
    /// `λ_i = i + 2 r_i`.
    P2,
    /// `λ_i = 1 + 99 (i − 1)/(m + 1) + 2 r_i`.
    P3,
}

impl ProblemKind {
    pub fn number(self) -> u8 {
        match self {
            ProblemKind::P1 => 1,
            ProblemKind::P2 => 2,
            ProblemKind::P3 => 3,
        }
    }

    pub fn from_number(k: u8) -> Result<Self> {
        match k {
            1 => Ok(ProblemKind::P1),
            2 => Ok(ProblemKind::P2),
            3 => Ok(ProblemKind::P3),
            _ => Err(Error::InvalidConfig(format!("problem must be 1, 2 or 3, got {k}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OptimumKind {
    /// `X* = π(X̃)` with Gaussian `X̃`.
    ProjectedRandom,
    /// `X* = Vᵀ Σ V`, two zero eigenvalues, the rest uniform on [0, 1).
    RankDeficient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub n: usize,
    pub m: usize,
    pub problem: ProblemKind,
    pub optimum: OptimumKind,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::InvalidConfig("n and m must be positive".into()));
        }
        if self.optimum == OptimumKind::RankDeficient && self.n < 3 {
            return Err(Error::InvalidConfig(
                "a rank-deficient optimum needs n >= 3".into(),
            ));
        }
        Ok(())
    }
}

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `index`-th instance of an experiment:
/// `master ^ splitmix64(index)`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    master ^ splitmix64(index)
}

pub fn rng_from_seed(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> DenseMatrix {
    let entries: Vec<f64> = (0..rows * cols).map(|_| StandardNormal.sample(rng)).collect();
    DenseMatrix::from_row_major(rows, cols, &entries).expect("sized buffer")
}

/// Orthogonal factor of the QR decomposition of a Gaussian matrix, signed so
/// that `R` has a positive diagonal (Haar distributed).
pub fn random_orthogonal(dim: usize, rng: &mut impl Rng) -> DenseMatrix {
    loop {
        let g = gaussian_matrix(dim, dim, rng);
        if let Ok(q) = qr_orthogonal_factor(&g) {
            return q;
        }
    }
}

/// Random PSD matrix `Qᵀ D Q` with `D` uniform on `[0, scale)`.
pub fn random_psd(dim: usize, scale: f64, rng: &mut impl Rng) -> PsdMatrix {
    let q = random_orthogonal(dim, rng);
    let d: Vec<f64> = (0..dim).map(|_| scale * rng.random::<f64>()).collect();
    // QᵀDQ = (D^½Q)ᵀ(D^½Q)
    let half = DenseMatrix::from_fn(dim, dim, |i, j| d[i].sqrt() * q.get(i, j));
    let mut p = matmul(&half.transpose(), &half).expect("square");
    crate::linalg::symmetrize_in_place(&mut p);
    PsdMatrix::new_unchecked(p)
}

const P1_MEAN: f64 = 11.0;
const P1_STD: f64 = 1.0;

/// The `min(n, m)` diagonal entries of `Λ`.
pub fn lambda_diagonal(spec: &GeneratorSpec, rng: &mut impl Rng) -> Vec<f64> {
    let len = spec.n.min(spec.m);
    let m = spec.m as f64;
    match spec.problem {
        ProblemKind::P1 => {
            let normal = Normal::new(P1_MEAN, P1_STD).expect("valid normal");
            (0..len)
                .map(|_| loop {
                    let v: f64 = normal.sample(rng);
                    if (10.0..=12.0).contains(&v) {
                        break v;
                    }
                })
                .collect()
        }
        ProblemKind::P2 => (1..=len)
            .map(|i| i as f64 + 2.0 * rng.random::<f64>())
            .collect(),
        ProblemKind::P3 => (1..=len)
            .map(|i| 1.0 + 99.0 * (i as f64 - 1.0) / (m + 1.0) + 2.0 * rng.random::<f64>())
            .collect(),
    }
}

fn planted_optimum(spec: &GeneratorSpec, rng: &mut impl Rng) -> Result<PsdMatrix> {
    let n = spec.n;
    match spec.optimum {
        OptimumKind::ProjectedRandom => project_psd(&gaussian_matrix(n, n, rng)),
        OptimumKind::RankDeficient => {
            let v = random_orthogonal(n, rng);
            let sigma: Vec<f64> = (0..n)
                .map(|i| if i < 2 { 0.0 } else { rng.random::<f64>() })
                .collect();
            let half = DenseMatrix::from_fn(n, n, |i, j| sigma[i].sqrt() * v.get(i, j));
            let mut x = matmul(&half.transpose(), &half)?;
            crate::linalg::symmetrize_in_place(&mut x);
            Ok(PsdMatrix::new_unchecked(x))
        }
    }
}

/// Builds `(instance, X₀)` with `X₀ = π(X̄₀)` for a Gaussian `X̄₀`.
pub fn make_instance(spec: &GeneratorSpec) -> Result<(ProblemInstance, PsdMatrix)> {
    spec.validate()?;
    let (n, m) = (spec.n, spec.m);
    let mut rng = rng_from_seed(spec.seed);
    let p = random_orthogonal(n, &mut rng);
    let q = random_orthogonal(m, &mut rng);
    let lambda = lambda_diagonal(spec, &mut rng);
    let r = lambda.len();
    // P Λ Qᵀ only touches the first r columns of P and Q
    let p_scaled = DenseMatrix::from_fn(n, r, |i, j| p.get(i, j) * lambda[j]);
    let q_lead = DenseMatrix::from_fn(m, r, |i, j| q.get(i, j));
    let a = matmul_transpose(&p_scaled, &q_lead)?;

    let x_star = planted_optimum(spec, &mut rng)?;
    let b = matmul(x_star.as_matrix(), &a)?;
    let x0 = project_psd(&gaussian_matrix(n, n, &mut rng))?;

    let label = format!("{:?}-n{n}-m{m}-seed{}", spec.problem, spec.seed);
    let inst = ProblemInstance::new(label, a, b)?.with_known_optimum(x_star)?;
    Ok((inst, x0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{spectral_norm, sym_eig};
    use crate::objective::SmoothObjective;

    fn spec(n: usize, m: usize, problem: ProblemKind, optimum: OptimumKind, seed: u64) -> GeneratorSpec {
        GeneratorSpec { n, m, problem, optimum, seed }
    }

    #[test]
    fn orthogonal_examples() {
        let mut rng = rng_from_seed(1);
        let q = random_orthogonal(1, &mut rng);
        assert_eq!(q.get(0, 0).abs(), 1.0);
        for dim in [2, 7, 30] {
            let q = random_orthogonal(dim, &mut rng);
            let qtq = matmul(&q.transpose(), &q).unwrap();
            assert!((&qtq - &DenseMatrix::identity(dim)).frobenius_norm() <= 1e-10);
        }
    }

    #[test]
    fn orthogonal_is_reproducible() {
        let a = random_orthogonal(5, &mut rng_from_seed(99));
        let b = random_orthogonal(5, &mut rng_from_seed(99));
        assert_eq!(a, b);
    }

    #[test]
    fn lambda_ranges() {
        let mut rng = rng_from_seed(2);
        for seed in 0..20 {
            let p1 = lambda_diagonal(&spec(40, 30, ProblemKind::P1, OptimumKind::ProjectedRandom, seed), &mut rng);
            assert_eq!(p1.len(), 30);
            assert!(p1.iter().all(|l| (10.0..=12.0).contains(l)));

            let m = 25;
            let p2 = lambda_diagonal(&spec(m, m, ProblemKind::P2, OptimumKind::ProjectedRandom, seed), &mut rng);
            assert!((1.0..=3.0).contains(&p2[0]));
            assert!((m as f64..=m as f64 + 2.0).contains(&p2[m - 1]));

            let p3 = lambda_diagonal(&spec(10, m, ProblemKind::P3, OptimumKind::ProjectedRandom, seed), &mut rng);
            assert_eq!(p3.len(), 10);
            assert!((1.0..=3.0).contains(&p3[0]));
            assert!(p3.iter().all(|&l| l <= 102.0));
        }
    }

    #[test]
    fn spec_validation() {
        assert!(spec(2, 3, ProblemKind::P1, OptimumKind::RankDeficient, 0).validate().is_err());
        assert!(spec(0, 3, ProblemKind::P1, OptimumKind::ProjectedRandom, 0).validate().is_err());
        assert!(ProblemKind::from_number(4).is_err());
    }

    #[test]
    fn planted_optimum_has_zero_objective() {
        for (kind, opt) in [
            (ProblemKind::P1, OptimumKind::ProjectedRandom),
            (ProblemKind::P2, OptimumKind::RankDeficient),
            (ProblemKind::P3, OptimumKind::ProjectedRandom),
        ] {
            let (inst, x0) = make_instance(&spec(12, 7, kind, opt, 5)).unwrap();
            let x_star = inst.known_optimum().unwrap();
            let f = inst.value(x_star.as_matrix()).unwrap();
            assert!(f <= 1e-16 * (1.0 + inst.b().frobenius_norm_squared()));
            PsdMatrix::new(x_star.as_matrix().clone()).unwrap();
            PsdMatrix::new(x0.as_matrix().clone()).unwrap();
        }
    }

    #[test]
    fn singular_values_follow_lambda() {
        let s = spec(9, 6, ProblemKind::P2, OptimumKind::ProjectedRandom, 8);
        let (inst, _) = make_instance(&s).unwrap();
        let mut rng = rng_from_seed(s.seed);
        random_orthogonal(9, &mut rng);
        random_orthogonal(6, &mut rng);
        let mut lambda = lambda_diagonal(&s, &mut rng);
        lambda.sort_by(|a, b| b.total_cmp(a));
        let gram = matmul(&inst.a().transpose(), inst.a()).unwrap();
        let sv: Vec<f64> = sym_eig(&gram).unwrap().eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
        for (got, want) in sv.iter().zip(&lambda) {
            assert!((got - want).abs() <= 1e-8 * want);
        }
        assert!((spectral_norm(inst.a()) - lambda[0]).abs() <= 1e-8 * lambda[0]);
    }

    #[test]
    fn rank_deficient_spectrum() {
        let (inst, _) = make_instance(&spec(10, 10, ProblemKind::P1, OptimumKind::RankDeficient, 3)).unwrap();
        let eig = sym_eig(inst.known_optimum().unwrap().as_matrix()).unwrap();
        let zeros = eig.eigenvalues.iter().filter(|l| l.abs() <= 1e-10).count();
        assert_eq!(zeros, 2);
    }

    #[test]
    fn make_instance_is_reproducible() {
        let s = spec(8, 5, ProblemKind::P3, OptimumKind::ProjectedRandom, 1234);
        let (a, x0a) = make_instance(&s).unwrap();
        let (b, x0b) = make_instance(&s).unwrap();
        assert_eq!(a, b);
        assert_eq!(x0a, x0b);
        let (c, _) = make_instance(&GeneratorSpec { seed: 1235, ..s }).unwrap();
        assert_ne!(a.a(), c.a());
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(7, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(derive_seed(0, 0), splitmix64(0));
    }
}
