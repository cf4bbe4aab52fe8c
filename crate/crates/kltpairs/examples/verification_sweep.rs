//! The root-system verification sweep: the pairing inequality by three
//! routes, the longest-Levi-element identity, equality witnesses, reduced
//! word independence, and the flag klt theorem on coefficient grids.

use kltpairs::oracle::run_sweep;

fn main() {
    let report = run_sweep(&["A1", "A2", "A3", "B2", "B3", "G2"]).unwrap();
    print!("{}", report.to_table());
    std::process::exit(i32::from(!report.all_passed()));
}
