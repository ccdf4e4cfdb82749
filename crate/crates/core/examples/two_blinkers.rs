//! Two separated blinkers: entanglement builds up between them.
//! L = 19 needs a few hundred MB and tens of seconds in release mode.
use qgol::quantum_info::bond_entropy_profile;
use qgol::*;

fn main() -> Result<()> {
    let initial: SpinConfig = "0000101000001010000".parse()?;
    let opts = Rk4Options::new(40.0, 0.01, 1000);
    let traj = evolve_fock_rk4_with(&initial, &opts, |_, psi| bond_entropy_profile(psi))?;
    for (t, profile) in traj.times.iter().zip(&traj.snapshots) {
        let shown: Vec<String> = profile.iter().map(|s| format!("{s:4.2}")).collect();
        println!("t = {t:4.0}  {}", shown.join(" "));
    }
    Ok(())
}
