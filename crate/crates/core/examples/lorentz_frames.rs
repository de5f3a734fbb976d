//! Boosts of the default layout: which second splitter comes first, interval
//! invariance and velocity addition.

use hardylab::causal::{interval, HardyGeometry, LorentzBoost};

pub fn run_example() -> hardylab::Result<()> {
    let geometry = HardyGeometry::default();
    for beta in [-0.6, 0.0, 0.6] {
        let frame = LorentzBoost::new(beta)?;
        let order: Vec<&str> = geometry.ordering(&frame).iter().map(|(n, _)| *n).collect();
        println!(
            "beta {beta:+.1} (gamma {:.4}): {}",
            frame.gamma(),
            order.join(" < ")
        );
    }

    let a = LorentzBoost::new(0.6)?;
    let b = LorentzBoost::new(0.3)?;
    let composed = a.then(&b);
    println!("0.6 then 0.3 = {:.12}", composed.beta());

    let (p, q) = (&geometry.u_plus_box, &geometry.d_minus);
    let rest = interval(p, q);
    let moved = interval(&composed.apply(p), &composed.apply(q));
    println!(
        "U+box to D-: {:?} {} in F, {} after boosting",
        rest.class, rest.value, moved.value
    );
    Ok(())
}

fn main() {
    run_example().expect("example runs");
}
