//! Measure-and-rotate dynamics agree with the classical rule.
use qgol::*;

fn main() -> Result<()> {
    let h = build_hamiltonian(12)?;
    let initial: SpinConfig = "000011010000".parse()?;
    let quantum = stroboscopic_quantum(&h, &initial, 8)?;
    let classical = classical_trajectory(&initial, 8);
    for (k, (q, c)) in quantum.steps.iter().zip(&classical.steps).enumerate() {
        println!("{k:2} {q} {c} {}", if q == c { "=" } else { "!=" });
    }
    Ok(())
}
