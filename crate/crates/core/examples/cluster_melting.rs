//! A block of eight alive sites breaks up into small clusters.
use qgol::observables::alive_cluster_counts;
use qgol::*;

fn main() -> Result<()> {
    let initial: SpinConfig = "0000111111110000".parse()?;
    let opts = Rk4Options::new(15.0, 0.01, 50);
    let traj = evolve_fock_rk4_with(&initial, &opts, |_, psi| {
        Ok(discretize(&local_population(psi)?))
    })?;
    println!("{:>5}  {:<16}  density  clusters by size", "t", "pattern");
    for (t, d) in traj.times.iter().zip(&traj.snapshots) {
        let pattern: String = d.values().iter().map(|v| char::from(b'0' + v)).collect();
        let counts = alive_cluster_counts(d);
        let sizes: Vec<String> = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(l, c)| format!("{c}x{}", l + 1))
            .collect();
        println!(
            "{t:5.1}  {pattern}  {:.3}    {}",
            density(d),
            sizes.join(" ")
        );
    }
    Ok(())
}
