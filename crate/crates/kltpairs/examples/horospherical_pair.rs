//! End-to-end verdict for a horospherical pair (X, D): the toric and
//! Bott-Samelson parts of the ledger, and the audited klt verdict.

use kltpairs::horoklt::{horospherical_discrepancies, is_klt_horospherical, HorosphericalPair};
use kltpairs::rat_to_string;

fn main() {
    let pair = HorosphericalPair::parse(
        r#"{
          "root_system": "A2",
          "parabolic_I": ["a1"],
          "fan": {"rank": 2, "rays": [[1,0],[1,2]], "cones": [[0,1]]},
          "colors": [],
          "d_G": ["1/4", "1/4"],
          "d_B": {"a2": "1/2"}
        }"#,
    )
    .unwrap();

    let horo = horospherical_discrepancies(&pair).unwrap();
    println!("ledger:");
    for e in &horo.ledger.entries {
        println!(
            "  {} [{}]: {}",
            e.id,
            e.kind.as_str(),
            rat_to_string(&e.discrepancy)
        );
    }

    let verdict = is_klt_horospherical(&pair).unwrap();
    println!("klt: {}", verdict.klt);
    println!(
        "exceptional min: {}",
        verdict
            .exceptional_min
            .map(|m| rat_to_string(&m))
            .unwrap_or_default()
    );
    println!(
        "total min (with strict transforms): {}",
        verdict.total_min.map(|m| rat_to_string(&m)).unwrap_or_default()
    );
    println!("consistent: {}", verdict.consistent);
    assert!(verdict.klt && verdict.consistent);
}
