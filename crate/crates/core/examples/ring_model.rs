//! Ring model of a classical cycle: spectrum, recurrences, long-time average.
use qgol::circulant::{ring_time_average, DEFAULT_MAX_DENOMINATOR, DEFAULT_RATIO_TOL};
use qgol::*;

fn main() -> Result<()> {
    let initial: SpinConfig = "00001010000".parse()?;
    let cycle = find_classical_cycle(&initial, 1000).expect("finite lattice orbits repeat");
    println!(
        "orbit enters a cycle of period {} after {} steps",
        cycle.period, cycle.offset
    );

    for n in [cycle.period.max(2), 4, 5, 6, 7] {
        let model = ring_eigensystem(n, 1.0)?;
        let report = commensurability_check(n, DEFAULT_RATIO_TOL, DEFAULT_MAX_DENOMINATOR)?;
        let energies: Vec<String> = model
            .eigenvalues
            .iter()
            .map(|e| format!("{e:.3}"))
            .collect();
        println!(
            "n = {n}: E = [{}], commensurate {}",
            energies.join(", "),
            report.commensurate
        );
    }

    let model = ring_eigensystem(5, 1.0)?;
    for t in [0.0, 1.0, 2.0, 5.0, 10.0] {
        let p = ring_evolution(&model, 0, t)?;
        println!("n = 5, t = {t:4.1}: return probability {:.3}", p[0]);
    }
    let average = ring_time_average(&model, 0, 1e-9)?;
    println!("n = 5 long-time average {average:.3?}");
    Ok(())
}
