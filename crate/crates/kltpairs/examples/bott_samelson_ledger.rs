//! The Bott-Samelson discrepancy ledger of a B-stable pair (G/P, D): the
//! beta-sequence of a reduced word and the exact discrepancy of each divisor.

use kltpairs::flagklt::{flag_discrepancies, flag_discrepancies_for_word, FlagBoundary};
use kltpairs::rootcore::{datum_from_str, WeylWord};
use kltpairs::{rat, rat_to_string};

fn main() {
    let datum = datum_from_str("A2").unwrap();
    let p = datum.parabolic(&[0].into_iter().collect()).unwrap();
    let d = FlagBoundary::new([(1, rat(1, 2))].into_iter().collect()).unwrap();

    let ledger = flag_discrepancies(&datum, &p, &d).unwrap();
    println!("A2, I = {{a1}}, d_a2 = 1/2, word {}:", ledger.word);
    for e in &ledger.entries {
        println!(
            "  {}: beta = {:?}, discrepancy = {}",
            e.label,
            datum.positive_roots()[e.beta_index],
            rat_to_string(&e.discrepancy)
        );
    }
    println!(
        "  min = {}",
        rat_to_string(&ledger.min_discrepancy().unwrap())
    );

    // A different reduced word gives the same discrepancy multiset.
    let datum = datum_from_str("A2").unwrap();
    let p = datum.parabolic(&std::collections::BTreeSet::new()).unwrap();
    let d = FlagBoundary::constant(&p, &datum, rat(1, 2)).unwrap();
    for letters in [vec![0, 1, 0], vec![1, 0, 1]] {
        let word = WeylWord::new(letters);
        let ledger = flag_discrepancies_for_word(&datum, &p, &d, &word).unwrap();
        let values: Vec<String> = ledger
            .entries
            .iter()
            .map(|e| rat_to_string(&e.discrepancy))
            .collect();
        println!("word {word}: discrepancies [{}]", values.join(", "));
    }
}
