//! Mutual information network and concurrence of an evolved blinker.
use qgol::network::network_summary;
use qgol::*;

fn main() -> Result<()> {
    let initial: SpinConfig = "0000101000".parse()?;
    let h = build_hamiltonian(initial.len())?;
    let psi = evolve_exact(&h, &make_fock_state(&initial)?, 3.0)?;
    let amps = psi.amplitudes();

    let mi = mutual_information_matrix(amps)?;
    println!("mutual information at t = 3:");
    for row in mi.matrix().row_iter() {
        let shown: Vec<String> = row.iter().map(|x| format!("{x:.3}")).collect();
        println!("  {}", shown.join(" "));
    }
    let s = network_summary(&mi);
    println!(
        "density {:.4}  disparity {:.4}  clustering {:.4}",
        s.density, s.disparity, s.clustering
    );
    for d in 1..=3 {
        println!(
            "average concurrence at distance {d}: {:.4}",
            average_concurrence(amps, d)?
        );
    }
    let rho = reduced_density_matrix(amps, &[5, 6])?;
    println!("C(5, 6) = {:.4}", concurrence(&rho)?);
    Ok(())
}
