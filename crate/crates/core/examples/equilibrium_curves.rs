//! Quantum and classical equilibrium density against initial density.
//! Usage: equilibrium_curves [L] [samples]
use qgol::experiment::{
    classical_ensemble, ensemble_initial_states, quantum_ensemble, EnsembleOptions,
    CLASSICAL_WINDOW, QUANTUM_WINDOW,
};
use qgol::*;

fn main() -> Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<usize>().expect("integer argument"));
    let len = args.next().unwrap_or(12);
    let samples = args.next().unwrap_or(8);
    let options = EnsembleOptions {
        samples,
        seed: 1,
        rk4: Rk4Options::new(QUANTUM_WINDOW.1, 0.01, 10),
        quantum_window: QUANTUM_WINDOW,
        classical_window: CLASSICAL_WINDOW,
    };
    println!("rho0    quantum         classical");
    for k in (1..len).step_by(2) {
        let rho0 = k as f64 / len as f64;
        let q = quantum_ensemble(len, rho0, &options)?;
        let initial = ensemble_initial_states(len, rho0, 64, options.seed)?;
        let c = classical_ensemble(&initial, rho0, CLASSICAL_WINDOW)?;
        println!(
            "{rho0:.3}   {:.3} +- {:.3}   {:.3} +- {:.3}",
            q.mean.density, q.stderr.density, c.mean.density, c.stderr.density
        );
    }
    Ok(())
}
