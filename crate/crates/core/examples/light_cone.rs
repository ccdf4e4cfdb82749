//! Classical rule from a blinker seed: the pattern spreads one site per step.
use qgol::*;

fn main() {
    let initial: SpinConfig = "000000000101000000000".parse().unwrap();
    let traj = classical_trajectory(&initial, 12);
    for (k, c) in traj.steps.iter().enumerate() {
        let row: String = c
            .to_string()
            .chars()
            .map(|b| if b == '1' { '#' } else { '.' })
            .collect();
        println!("{k:3} {row}");
    }
    match traj.period() {
        Some(p) => println!("periodic with period {p}"),
        None => println!("no repeat within {} steps", traj.len() - 1),
    }
}
