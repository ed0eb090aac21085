use psdp_core::generator::{make_instance, GeneratorSpec, OptimumKind, ProblemKind};
use psdp_core::linalg::{matmul, sym_eig};
use psdp_core::ProblemInstance;

/// Ratio of extreme nonzero singular values of `A` (`n ≥ m`).
fn condition_number(inst: &ProblemInstance) -> f64 {
    let a = inst.a();
    let gram = matmul(&a.transpose(), a).unwrap();
    let eig = sym_eig(&gram).unwrap();
    (eig.max_eigenvalue() / eig.min_eigenvalue()).sqrt()
}

fn generate(n: usize, m: usize, problem: ProblemKind, seed: u64) -> ProblemInstance {
    make_instance(&GeneratorSpec {
        n,
        m,
        problem,
        optimum: OptimumKind::ProjectedRandom,
        seed,
    })
    .unwrap()
    .0
}

#[test]
fn p1_is_well_conditioned() {
    for seed in 0..20 {
        let inst = generate(40, 25, ProblemKind::P1, seed);
        assert!(condition_number(&inst) <= 1.2 + 1e-9, "seed {seed}");
    }
}

#[test]
fn p3_is_ill_conditioned() {
    // λ_max ≥ 1 + 99·19/21 > 90 ≥ 30·λ_min once m ≥ 20
    for (n, m) in [(20, 20), (50, 20), (60, 30)] {
        for seed in 0..20 {
            let inst = generate(n, m, ProblemKind::P3, seed);
            assert!(condition_number(&inst) >= 30.0, "n = {n}, m = {m}, seed {seed}");
        }
    }
}

#[test]
fn planted_optimum_fits_exactly() {
    for (problem, optimum) in [
        (ProblemKind::P1, OptimumKind::ProjectedRandom),
        (ProblemKind::P3, OptimumKind::RankDeficient),
    ] {
        let (inst, x0) = make_instance(&GeneratorSpec {
            n: 15,
            m: 9,
            problem,
            optimum,
            seed: 21,
        })
        .unwrap();
        let x_star = inst.known_optimum().unwrap();
        let scale = 1.0 + inst.b().frobenius_norm_squared();
        assert!(inst.objective(x_star.as_matrix()).unwrap() <= 1e-20 * scale);
        assert!(inst.objective(x0.as_matrix()).unwrap() > 0.0);
    }
}

#[test]
fn instances_survive_json() {
    let inst = generate(7, 4, ProblemKind::P2, 3);
    let back = ProblemInstance::from_json(&inst.to_json().unwrap()).unwrap();
    assert_eq!(back, inst);
}
