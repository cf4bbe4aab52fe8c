//! The klt verdict for (G/P, D) via the strict-pairing criterion, including
//! the boundary behavior at d = 1.

use kltpairs::flagklt::{is_klt_flag, FlagBoundary};
use kltpairs::rootcore::datum_from_str;
use kltpairs::{rat, rat_to_string, Rat};

fn main() {
    let datum = datum_from_str("G2").unwrap();
    let p = datum.parabolic(&[0].into_iter().collect()).unwrap();

    for d2 in [rat(0, 1), rat(1, 2), rat(3, 4), rat(1, 1)] {
        let d = FlagBoundary::new([(1usize, d2)].into_iter().collect()).unwrap();
        let verdict = is_klt_flag(&datum, &p, &d).unwrap();
        print!("G2, I = {{a1}}, d_a2 = {}: ", rat_to_string(&d2));
        match &verdict.witness {
            None => println!("klt"),
            Some(w) => println!(
                "not klt (beta = {:?} pairs to {})",
                datum.positive_roots()[w.beta_index],
                rat_to_string(&w.pairing)
            ),
        }
        assert_eq!(verdict.klt, d2 < Rat::from_integer(1));
    }
}
