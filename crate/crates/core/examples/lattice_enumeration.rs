//! Every 0/1 assignment on the projectors of an `N`-dimensional commuting
//! set that respects the product rule. Besides the all-zero one, each is 1
//! exactly on the projectors containing a fixed one.

use std::time::Instant;

use hardylab::prodrule::{
    enumerate_lattice_assignments, uniqueness_theorem_check, DiagonalProjector,
};

pub fn run_example() -> hardylab::Result<Vec<usize>> {
    let mut counts = Vec::new();
    for n in 3..=5 {
        let start = Instant::now();
        let found = enumerate_lattice_assignments(n)?;
        let unique = uniqueness_theorem_check(n)?;
        println!(
            "N = {n}: {} assignments in {:.1?}, mixed ones are principal filters: {unique}",
            found.len(),
            start.elapsed()
        );
        if n == 3 {
            for a in &found {
                match a.principal_generator() {
                    Some(m) => println!("  supersets of {}", DiagonalProjector::from_mask(n, m)?),
                    None => println!("  identically zero"),
                }
            }
        }
        counts.push(found.len());
    }
    Ok(counts)
}

fn main() {
    run_example().expect("example runs");
}
