use darboux_core::lattice::{
    compare_flows, conserved_p, hamiltonian, integrate, integrate_at, vector_field, Transport,
};
use darboux_core::moser::{darboux_apply, DarbouxMap, Direction};
use darboux_core::{Boundary, LatticeState, ModelKind, ModelParams, Trajectory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_state(rng: &mut ChaCha8Rng, n: usize, radius: f64, bc: Boundary) -> LatticeState {
    loop {
        let v: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-3 && norm <= 1.0 {
            let scale = radius * rng.gen_range(0.0f64..1.0).powf(1.0 / (2 * n) as f64) / norm;
            let v: Vec<f64> = v.iter().map(|a| a * scale).collect();
            return LatticeState::from_flat(&v, bc).unwrap();
        }
    }
}

fn all_models() -> Vec<ModelParams> {
    vec![
        ModelParams::new(ModelKind::DNls, 0.5, 1.0, 0.3).unwrap(),
        ModelParams::new(ModelKind::Al, 0.5, 0.0, 0.3).unwrap(),
        ModelParams::new(ModelKind::Salerno, 0.5, 1.0, 0.3).unwrap(),
        ModelParams::new(ModelKind::Z0, 0.5, 1.0, 0.3).unwrap(),
        ModelParams::new(ModelKind::Z1, 0.5, 1.0, 0.3).unwrap(),
    ]
}

/// (1 + νA_j)·J·∇_j H (or J·∇H) from central differences of the energy.
fn finite_difference_field(p: &ModelParams, s: &LatticeState) -> Vec<f64> {
    let n = s.sites();
    let z = s.flat();
    let h = 1e-6;
    let grad: Vec<f64> = (0..2 * n)
        .map(|i| {
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[i] += h;
            zm[i] -= h;
            let hp = hamiltonian(p, &LatticeState::from_flat(&zp, s.bc).unwrap()).unwrap();
            let hm = hamiltonian(p, &LatticeState::from_flat(&zm, s.bc).unwrap()).unwrap();
            (hp - hm) / (2.0 * h)
        })
        .collect();
    let mut out = vec![0.0; 2 * n];
    for j in 0..n {
        let w = if p.kind.nonstandard() { 1.0 + p.nu * s.site_norm2(j) } else { 1.0 };
        out[j] = w * grad[n + j];
        out[n + j] = -w * grad[j];
    }
    out
}

#[test]
fn vector_fields_match_bracket_of_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for bc in [Boundary::Periodic, Boundary::Fixed] {
        for _ in 0..50 {
            let s = random_state(&mut rng, 5, 0.3, bc);
            for p in all_models() {
                let (vx, vy) = vector_field(&p, &s);
                let fd = finite_difference_field(&p, &s);
                let scale = fd.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-3);
                for (a, b) in vx.iter().chain(&vy).zip(&fd) {
                    assert!((a - b).abs() <= 1e-7 * scale, "{:?}: {a} vs {b}", p.kind);
                }
            }
        }
    }
}

#[test]
fn salerno_velocity_example_matches_bracket() {
    let s = LatticeState::new(vec![0.1, 0.0, 0.0], vec![0.0; 3], Boundary::Periodic).unwrap();
    let p = ModelParams::new(ModelKind::Salerno, 0.5, 1.0, 0.1).unwrap();
    let (vx, vy) = vector_field(&p, &s);
    let fd = finite_difference_field(&p, &s);
    for (a, b) in vx.iter().chain(&vy).zip(&fd) {
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn phase_rotation_commutes_with_every_field() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let s = random_state(&mut rng, 6, 0.3, Boundary::Periodic);
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        for p in all_models() {
            let (vx, vy) = vector_field(&p, &s);
            let rotated_field = LatticeState { x: vx, y: vy, bc: s.bc }.rotated(theta);
            let (wx, wy) = vector_field(&p, &s.rotated(theta));
            for (a, b) in rotated_field.x.iter().chain(&rotated_field.y).zip(wx.iter().chain(&wy)) {
                assert!((a - b).abs() < 1e-14, "{:?}", p.kind);
            }
        }
    }
}

#[test]
fn single_site_dnls_keeps_its_amplitude() {
    let p = ModelParams::new(ModelKind::DNls, 0.0, 1.0, 0.0).unwrap();
    let s = LatticeState::new(vec![0.2], vec![0.0], Boundary::Fixed).unwrap();
    let traj = integrate(&p, &s, 100.0, 1e-12).unwrap();
    for st in &traj.states {
        assert!((st.site_norm2(0) - 0.04).abs() < 1e-10);
    }
    // phase rotates at rate γA/2
    let last = traj.states.last().unwrap();
    let angle = 0.5 * 0.04 * 100.0;
    assert!((last.x[0] - 0.2 * f64::cos(angle)).abs() < 1e-9);
    assert!((last.y[0] + 0.2 * f64::sin(angle)).abs() < 1e-9);
}

#[test]
fn al_conserves_energy_and_p() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let s = random_state(&mut rng, 8, 0.1, Boundary::Periodic);
    let eps = 0.01;
    let p = ModelParams::new(ModelKind::Al, 0.5, 0.0, eps).unwrap();
    let traj = integrate(&p, &s, 1.0 / eps, 1e-12).unwrap();
    assert!(Trajectory::relative_drift(&traj.h_values) < 1e-8);
    assert!(Trajectory::relative_drift(&traj.p_values) < 1e-8);
}

#[test]
fn every_model_conserves_its_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let s = random_state(&mut rng, 6, 0.3, Boundary::Fixed);
    for p in all_models() {
        let traj = integrate(&p, &s, 20.0, 1e-11).unwrap();
        assert!(Trajectory::relative_drift(&traj.h_values) < 1e-7, "{:?}", p.kind);
        assert!(Trajectory::relative_drift(&traj.p_values) < 1e-7, "{:?}", p.kind);
    }
}

#[test]
fn zero_state_stays_zero() {
    for p in all_models() {
        let z = LatticeState::zeros(4, Boundary::Periodic);
        let traj = integrate(&p, &z, 5.0, 1e-10).unwrap();
        assert!(traj.states.iter().all(|s| s == &z));
    }
}

#[test]
fn forward_then_backward_returns() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let s = random_state(&mut rng, 5, 0.3, Boundary::Periodic);
    let tol = 1e-12;
    for p in all_models() {
        let fwd = integrate_at(&p, &s, &[10.0], tol).unwrap();
        let back = integrate_at(&p, &fwd.states[0], &[-10.0], tol).unwrap();
        assert!(back.states[0].distance(&s) < 100.0 * tol, "{:?}", p.kind);
    }
}

#[test]
fn p_equals_half_norm_after_forward_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let s = random_state(&mut rng, 8, 0.1, Boundary::Periodic);
    let p = ModelParams::new(ModelKind::Salerno, 0.5, 1.0, 0.05).unwrap();
    let traj = integrate(&p, &s, 20.0, 1e-12).unwrap();
    let fwd = DarbouxMap::new(Direction::Forward, 0.5);
    for st in &traj.states {
        let mapped = darboux_apply(&fwd, st).unwrap();
        let half = 0.5 * mapped.norm() * mapped.norm();
        assert!((conserved_p(0.5, st) - half).abs() < 1e-10);
    }
}

#[test]
fn identical_models_do_not_separate() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let s = random_state(&mut rng, 6, 0.2, Boundary::Periodic);
    let p = ModelParams::new(ModelKind::Salerno, 0.5, 1.0, 0.04).unwrap();
    let c = compare_flows(&p, &p, &s, 10.0, Transport::Darboux, 1e-12, 20).unwrap();
    assert!(c.max < 1e-12);
}
