//! Smooth subdivision of lattice fans and the toric discrepancy ledger:
//! a Hirzebruch-Jung chain in rank 2 and a stellar resolution in rank 3.

use kltpairs::toricres::{resolve_fan, toric_discrepancies, Fan, ToricBoundary};
use kltpairs::{rat, rat_to_string};

fn main() {
    // The A_4 surface singularity: cone over (1,0), (1,5).
    let fan = Fan::new(2, vec![vec![1, 0], vec![1, 5]], vec![vec![0, 1]]).unwrap();
    let (resolved, provenance) = resolve_fan(&fan).unwrap();
    println!("cone (1,0),(1,5):");
    for (&ray, _) in &provenance {
        println!("  exceptional ray {:?}", resolved.rays()[ray]);
    }
    let d = ToricBoundary::new(vec![rat(1, 3), rat(1, 3)]).unwrap();
    let t = toric_discrepancies(&fan, &resolved, &provenance, &d).unwrap();
    println!("ledger at d = (1/3, 1/3):");
    for e in &t.ledger.entries {
        println!("  {}: {}", e.id, rat_to_string(&e.discrepancy));
    }
    println!("strictly effective: {}", t.strictly_effective);

    // A rank-3 quadric cone point, resolved by stellar subdivision.
    let fan = Fan::new(
        3,
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]],
        vec![vec![0, 1, 2]],
    )
    .unwrap();
    let (resolved, provenance) = resolve_fan(&fan).unwrap();
    println!("\nquadric cone point:");
    println!("  resolved into {} smooth cones", resolved.cones().len());
    let t = toric_discrepancies(&fan, &resolved, &provenance, &ToricBoundary::zeros(3)).unwrap();
    for e in &t.ledger.entries {
        println!("  {}: {}", e.id, rat_to_string(&e.discrepancy));
    }
}
