//! Root-system and parabolic bookkeeping: positive roots, fundamental
//! weights, and the data attached to a parabolic subgroup.

use kltpairs::rootcore::datum_from_str;
use kltpairs::rat_to_string;

fn main() {
    let datum = datum_from_str("B3").unwrap();
    println!("B3: {} positive roots", datum.num_positive_roots());
    for (root, coroot) in datum.positive_roots().iter().zip(datum.positive_coroots()) {
        println!("  root {root:?}  coroot {coroot:?}");
    }
    let rho = datum.rho();
    println!(
        "rho (simple-root basis): [{}]",
        rho.root_coords()
            .iter()
            .map(rat_to_string)
            .collect::<Vec<_>>()
            .join(", ")
    );

    // The parabolic with Levi simple roots I = {a1, a3}.
    let p = datum.parabolic(&[0, 2].into_iter().collect()).unwrap();
    println!("\nI = {{a1, a3}}:");
    println!("  |R+_I| = {}", p.levi_positive_roots.len());
    println!("  dim G/P = {}", p.w0p_word.len());
    println!("  coset word = {}", p.w0p_word);
    println!("  w_(0,P) = {}", p.w0_levi_word);
    println!(
        "  2 rho^P (fundamental basis) = [{}]",
        datum
            .to_fundamental(&p.two_rho_superp)
            .iter()
            .map(rat_to_string)
            .collect::<Vec<_>>()
            .join(", ")
    );
}
