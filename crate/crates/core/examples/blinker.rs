//! Quantum blinker: populations and single-site entropy at L = 11.
use qgol::*;

fn main() -> Result<()> {
    let initial: SpinConfig = "00001010000".parse()?;
    let opts = Rk4Options::new(20.0, 0.01, 50);
    let traj = evolve_fock_rk4_with(&initial, &opts, |_, psi| {
        let d = discretize(&local_population(psi)?);
        let s6 = von_neumann_entropy(&reduced_density_matrix(psi, &[6])?)?;
        Ok((d, s6))
    })?;
    println!("{:>6}  {:<11}  S_6", "t", "pattern");
    for (t, (d, s6)) in traj.times.iter().zip(&traj.snapshots) {
        let pattern: String = d.values().iter().map(|v| char::from(b'0' + v)).collect();
        println!("{t:6.2}  {pattern}  {s6:.3}");
    }
    println!("norm drift {:.1e}", traj.norm_drift);
    Ok(())
}
