use spfti::acquisition::{add_noise, ForwardModel, HyperCube};
use spfti::phantom::{generate_phantom, PhantomSpec};
use spfti::sampling::{DomainMask, SamplingPattern};
use spfti::solver::{solve, sre, SolverConfig};

fn full_pattern(n_xi: usize, nx: usize, ny: usize) -> SamplingPattern {
    SamplingPattern::new(
        DomainMask::uniform(n_xi, n_xi, 0).unwrap(),
        DomainMask::uniform(nx * ny, nx * ny, 0).unwrap(),
        nx,
        ny,
    )
    .unwrap()
}

fn run(label: &str, x: &HyperCube, pattern: &SamplingPattern, cfg: &SolverConfig) {
    let model = ForwardModel::new(x.n_nu(), x.nx(), x.ny()).unwrap();
    let y = model.forward(x, pattern).unwrap();
    let meas = add_noise(&y, 0.0, 0, pattern).unwrap();
    let r = solve(&meas, cfg).unwrap();
    println!(
        "{label} tau={:5.3} sigma={:5.3} scale={:7.5} used={:4} conv={} res={:.2e} sre={:7.2} dB",
        cfg.step_primal, cfg.step_dual, cfg.l1_scale_rel,
        r.iterations, r.converged, r.final_residual,
        sre(x, &r.x_hat).unwrap(),
    );
}

fn main() {
    let spec = PhantomSpec::default_small();
    let phantom = generate_phantom(&spec).unwrap();
    let full = full_pattern(64, 16, 16);
    for (tau, sigma) in [
        (0.70710678f64, 0.70710678f64),
        (0.35, 1.4285),
        (0.2, 2.5),
        (0.1, 5.0),
        (1.4, 0.357),
        (2.0, 0.25),
    ] {
        for scale in [0.01, 0.001] {
            let cfg = SolverConfig {
                max_iters: 50,
                step_primal: tau,
                step_dual: sigma,
                l1_scale_rel: scale,
                ..Default::default()
            };
            run("C5", &phantom, &full, &cfg);
        }
    }
}
