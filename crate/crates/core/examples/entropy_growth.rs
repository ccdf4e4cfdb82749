//! Central bond entropy of a blinker at L = 15, and the late-time profile.
use qgol::quantum_info::bond_entropy_profile;
use qgol::*;

fn main() -> Result<()> {
    let initial: SpinConfig = "000000101000000".parse()?;
    let opts = Rk4Options::new(60.0, 0.01, 200);
    let traj = evolve_fock_rk4_with(&initial, &opts, |_, psi| {
        Ok((bond_entropy(psi, 7)?, bond_entropy_profile(psi)?))
    })?;
    for (t, (s, _)) in traj.times.iter().zip(&traj.snapshots) {
        println!("t = {t:5.1}  S_7 = {s:.3}");
    }
    let (_, profile) = traj.snapshots.last().unwrap();
    let shown: Vec<String> = profile.iter().map(|s| format!("{s:.2}")).collect();
    println!("profile at t = 60: {}", shown.join(" "));
    Ok(())
}
