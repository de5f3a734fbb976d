//! Regions built from light cones: the union and intersection of the
//! boxes' forward-cone exteriors, and where a state checked by two local
//! measurements stays valid once one particle is measured later.

use hardylab::causal::{
    nonlocal_region, CausalRegion, HardyGeometry, NonlocalKind, SpacetimeEvent,
};
use hardylab::scenario::AharonovAlbert;

pub fn run_example() -> hardylab::Result<()> {
    let g = HardyGeometry::default();
    let union = nonlocal_region(NonlocalKind::Union, &g.boxes())?;
    let intersection = nonlocal_region(NonlocalKind::Intersection, &g.boxes())?;
    for e in [
        &g.d_plus,
        &g.d_minus,
        &SpacetimeEvent::new(-3.0, 0.0),
        &SpacetimeEvent::new(3.0, 0.0),
    ] {
        println!(
            "{e}: in union {}, in intersection {}",
            union.contains(e),
            intersection.contains(e)
        );
    }

    // De Morgan: the complement of the union is the intersection of the
    // forward interiors.
    let interiors =
        CausalRegion::Intersection(g.boxes().map(CausalRegion::forward_interior).to_vec());
    let probe = SpacetimeEvent::new(2.5, 0.2);
    assert_eq!(
        union.clone().complement().contains(&probe),
        interiors.contains(&probe)
    );

    for collapse_time in [1.0, 2.5] {
        let setup = AharonovAlbert {
            separation: 1.0,
            epsilon: 0.1,
            collapse_time,
        };
        let region = setup.validity_region()?;
        let [_, right] = setup.check_events()?;
        println!(
            "left measured at t = {collapse_time}: checked state valid at {right}: {}",
            region.contains(&right)
        );
    }
    Ok(())
}

fn main() {
    run_example().expect("example runs");
}
