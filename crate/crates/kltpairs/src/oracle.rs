//! Independent exhaustive checks of the root-system facts the klt criteria
//! rest on: the pairing inequality with its three equivalent routes, the
//! longest-Levi-element identity, the equality characterization, beta-set
//! word independence, and the flag klt theorem on coefficient grids.

use crate::flagklt::{
    beta_sequence, beta_sequence_for_word, flag_discrepancies_for_word, is_klt_flag, FlagBoundary,
};
use crate::rootcore::{datum_from_str, RootDatum, Weight, WeylWord};
use crate::{rat, rat_to_string, Rat, Result};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Root systems covered by the default sweep.
pub const DEFAULT_SWEEP: &[&str] = &[
    "A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "G2",
];

/// Coefficient grid used by the theorem sweep; all values are < 1.
pub const DEFAULT_GRID: &[(i64, i64)] = &[(0, 1), (1, 4), (1, 2), (3, 4)];

/// Cap on reduced words enumerated per Weyl element in rank >= 4.
pub const WORD_BUDGET_RANK4: usize = 120;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &str, cases: usize) -> CheckResult {
        CheckResult {
            name: name.into(),
            passed: true,
            cases,
            detail: format!("{cases} cases"),
        }
    }

    fn fail(name: &str, cases: usize, detail: String) -> CheckResult {
        CheckResult {
            name: name.into(),
            passed: false,
            cases,
            detail,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SweepReport {
    pub checks: Vec<CheckResult>,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn total_cases(&self) -> usize {
        self.checks.iter().map(|c| c.cases).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "all_passed": self.all_passed(),
            "total_cases": self.total_cases(),
            "checks": self.checks.iter().map(|c| serde_json::json!({
                "name": c.name,
                "passed": c.passed,
                "cases": c.cases,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status}  {:<44} {}\n", c.name, c.detail));
        }
        out.push_str(&format!(
            "{}  {} checks, {} cases\n",
            if self.all_passed() { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.total_cases()
        ));
        out
    }
}

fn all_subsets(rank: usize) -> impl Iterator<Item = BTreeSet<usize>> {
    (0..(1u32 << rank)).map(move |mask| (0..rank).filter(|&i| mask & (1 << i) != 0).collect())
}

fn sum_fundamental(datum: &RootDatum, i_set: &BTreeSet<usize>) -> Weight {
    i_set
        .iter()
        .fold(Weight::zero(datum.rank()), |acc, &i| {
            acc.add(datum.fundamental_weight(i))
        })
}

/// The pairing inequality, computed by three routes that must agree:
/// (1) <2 rho^P - rho - sum_{S\I} varpi, beta^vee> >= 0,
/// (2) <sum_I varpi - sum_{R+_I} gamma, beta^vee> >= 0,
/// (3) <sum_I varpi, w_{0,P}(beta^vee)> >= 0.
pub fn verify_inequality(datum: &RootDatum) -> Result<CheckResult> {
    let name = "pairing-inequality-three-routes";
    let mut cases = 0;
    for i_set in all_subsets(datum.rank()) {
        let p = datum.parabolic(&i_set)?;
        let mut mu1 = p.two_rho_superp.sub(&datum.rho());
        for a in p.boundary_simples(datum) {
            mu1 = mu1.sub(datum.fundamental_weight(a));
        }
        let varpi_i = sum_fundamental(datum, &i_set);
        let mu2 = varpi_i.sub(&p.levi_root_sum);
        for k in p.complement_indices(datum) {
            let cov = &datum.positive_coroots()[k];
            let v1 = datum.pairing(&mu1, cov)?;
            let v2 = datum.pairing(&mu2, cov)?;
            let v3 = datum.pairing(&varpi_i, &datum.weyl_apply_coroot(&p.w0_levi_word, cov))?;
            cases += 1;
            if v1 != v2 || v2 != v3 {
                return Ok(CheckResult::fail(
                    name,
                    cases,
                    format!(
                        "routes disagree at I={i_set:?}, beta={:?}: {} / {} / {}",
                        datum.positive_roots()[k],
                        rat_to_string(&v1),
                        rat_to_string(&v2),
                        rat_to_string(&v3)
                    ),
                ));
            }
            if v1.is_negative() {
                return Ok(CheckResult::fail(
                    name,
                    cases,
                    format!(
                        "negative pairing {} at I={i_set:?}, beta={:?}",
                        rat_to_string(&v1),
                        datum.positive_roots()[k]
                    ),
                ));
            }
        }
    }
    Ok(CheckResult::pass(name, cases))
}

/// w_{0,P}(sum_I varpi) = sum_I varpi - sum_{R+_I} gamma.
pub fn verify_levi_identity(datum: &RootDatum) -> Result<CheckResult> {
    let name = "longest-levi-element-identity";
    let mut cases = 0;
    for i_set in all_subsets(datum.rank()) {
        let p = datum.parabolic(&i_set)?;
        let varpi_i = sum_fundamental(datum, &i_set);
        let lhs = datum.weyl_apply(&p.w0_levi_word, &varpi_i);
        let rhs = varpi_i.sub(&p.levi_root_sum);
        cases += 1;
        if lhs != rhs {
            return Ok(CheckResult::fail(
                name,
                cases,
                format!("identity fails at I={i_set:?}"),
            ));
        }
    }
    Ok(CheckResult::pass(name, cases))
}

/// Equality in the inequality holds exactly when w_{0,P}(beta) lies in
/// R+_{S\I}; when I is proper there is at least one such beta.
pub fn verify_equality_characterization(datum: &RootDatum) -> Result<CheckResult> {
    let name = "equality-characterization";
    let mut cases = 0;
    for i_set in all_subsets(datum.rank()) {
        let p = datum.parabolic(&i_set)?;
        let varpi_i = sum_fundamental(datum, &i_set);
        let mu = varpi_i.sub(&p.levi_root_sum);
        let mut witnesses = 0usize;
        for k in p.complement_indices(datum) {
            cases += 1;
            let v = datum.pairing(&mu, &datum.positive_coroots()[k])?;
            let img = datum.weyl_apply_root(&p.w0_levi_word, &datum.positive_roots()[k]);
            let in_complement_system = img.iter().all(|&c| c >= 0)
                && img
                    .iter()
                    .enumerate()
                    .all(|(j, &c)| c == 0 || !i_set.contains(&j));
            if v.is_zero() != in_complement_system {
                return Ok(CheckResult::fail(
                    name,
                    cases,
                    format!(
                        "characterization fails at I={i_set:?}, beta={:?}",
                        datum.positive_roots()[k]
                    ),
                ));
            }
            if v.is_zero() {
                witnesses += 1;
            }
        }
        if i_set.len() < datum.rank() && witnesses == 0 {
            return Ok(CheckResult::fail(
                name,
                cases,
                format!("no equality witness for proper I={i_set:?}"),
            ));
        }
    }
    Ok(CheckResult::pass(name, cases))
}

/// All reduced words of the Weyl element with the given action matrix,
/// enumerated right to left over right descents, truncated at `budget`.
fn reduced_words_of(datum: &RootDatum, word: &WeylWord, budget: usize) -> Vec<WeylWord> {
    let n = datum.rank();
    // Columns of the matrix are the images of the simple roots.
    let matrix_of = |w: &WeylWord| -> Vec<Vec<i64>> {
        (0..n)
            .map(|j| {
                let mut e = vec![0i64; n];
                e[j] = 1;
                datum.weyl_apply_root(w, &e)
            })
            .collect() // columns
    };
    let identity: Vec<Vec<i64>> = (0..n)
        .map(|j| {
            let mut e = vec![0i64; n];
            e[j] = 1;
            e
        })
        .collect();
    fn rec(
        datum: &RootDatum,
        cols: &[Vec<i64>],
        identity: &[Vec<i64>],
        suffix: &mut Vec<usize>,
        out: &mut Vec<WeylWord>,
        budget: usize,
    ) {
        if out.len() >= budget {
            return;
        }
        if cols == identity {
            let mut letters = suffix.clone();
            letters.reverse();
            out.push(WeylWord::new(letters));
            return;
        }
        let n = cols.len();
        for i in 0..n {
            // Right descent: the image of alpha_i is negative.
            if cols[i].iter().all(|&c| c <= 0) {
                // (u s_i)(alpha_j) = u(s_i(alpha_j)) = u(alpha_j) - c_ij u(alpha_i).
                let next: Vec<Vec<i64>> = (0..n)
                    .map(|j| {
                        if j == i {
                            cols[i].iter().map(|&c| -c).collect()
                        } else {
                            let cij = datum.cartan()[i][j];
                            cols[j]
                                .iter()
                                .zip(&cols[i])
                                .map(|(&a, &b)| a - cij * b)
                                .collect()
                        }
                    })
                    .collect();
                suffix.push(i);
                rec(datum, &next, identity, suffix, out, budget);
                suffix.pop();
                if out.len() >= budget {
                    return;
                }
            }
        }
    }
    let cols = matrix_of(word);
    let mut out = Vec::new();
    let mut suffix = Vec::new();
    rec(datum, &cols, &identity, &mut suffix, &mut out, budget);
    out
}

/// Beta-set identity and word independence: every reduced word of the coset
/// representative yields the same beta-set (= R+ \ R+_I) and, at d = 1/2,
/// the same discrepancy multiset.
pub fn verify_word_independence(datum: &RootDatum) -> Result<CheckResult> {
    let name = "beta-set-and-word-independence";
    let budget = if datum.rank() <= 3 {
        usize::MAX
    } else {
        WORD_BUDGET_RANK4
    };
    let mut cases = 0;
    for i_set in all_subsets(datum.rank()) {
        let p = datum.parabolic(&i_set)?;
        let d = FlagBoundary::constant(&p, datum, rat(1, 2))?;
        let complement: BTreeSet<usize> = p.complement_indices(datum).into_iter().collect();
        let reference: BTreeMap<Rat, usize> = {
            let mut m = BTreeMap::new();
            for e in flag_discrepancies_for_word(datum, &p, &d, &p.w0p_word)?.entries {
                *m.entry(e.discrepancy).or_insert(0) += 1;
            }
            m
        };
        let ref_betas: BTreeSet<usize> = beta_sequence(datum, &p)?.into_iter().collect();
        if ref_betas != complement {
            return Ok(CheckResult::fail(
                name,
                cases,
                format!("pinned word beta-set mismatch at I={i_set:?}"),
            ));
        }
        for word in reduced_words_of(datum, &p.w0p_word, budget) {
            cases += 1;
            let betas: BTreeSet<usize> =
                beta_sequence_for_word(datum, &word)?.into_iter().collect();
            if betas != complement {
                return Ok(CheckResult::fail(
                    name,
                    cases,
                    format!("beta-set mismatch at I={i_set:?}, word {word}"),
                ));
            }
            let mut multiset: BTreeMap<Rat, usize> = BTreeMap::new();
            for e in flag_discrepancies_for_word(datum, &p, &d, &word)?.entries {
                *multiset.entry(e.discrepancy).or_insert(0) += 1;
            }
            if multiset != reference {
                return Ok(CheckResult::fail(
                    name,
                    cases,
                    format!("discrepancy multiset differs at I={i_set:?}, word {word}"),
                ));
            }
        }
    }
    Ok(CheckResult::pass(name, cases))
}

/// The flag klt theorem on a grid: every boundary with all coefficients < 1
/// is klt with every discrepancy > -1, and pushing a single coefficient to 1
/// kills the verdict with minimum discrepancy exactly -1.
pub fn verify_flag_theorem(datum: &RootDatum, grid: &[Rat]) -> Result<CheckResult> {
    let name = "flag-klt-theorem-grid";
    let mut cases = 0;
    for i_set in all_subsets(datum.rank()) {
        let p = datum.parabolic(&i_set)?;
        let simples = p.boundary_simples(datum);
        let k = simples.len();
        for combo in 0..grid.len().pow(k as u32) {
            let mut c = combo;
            let mut coeffs = BTreeMap::new();
            for &a in &simples {
                coeffs.insert(a, grid[c % grid.len()]);
                c /= grid.len();
            }
            let d = FlagBoundary::new(coeffs)?;
            cases += 1;
            let verdict = is_klt_flag(datum, &p, &d)?;
            let min = flag_discrepancies_for_word(datum, &p, &d, &p.w0p_word)?
                .min_discrepancy();
            let min_ok = min.is_none_or(|m| m > -Rat::one());
            if !verdict.klt || !min_ok {
                return Ok(CheckResult::fail(
                    name,
                    cases,
                    format!("sub-boundary coefficients not klt at I={i_set:?}"),
                ));
            }
        }
        // Sharpness: a single coefficient at 1 fails with minimum exactly -1.
        for &a in &simples {
            let d = FlagBoundary::new([(a, Rat::one())].into_iter().collect())?;
            cases += 1;
            let verdict = is_klt_flag(datum, &p, &d)?;
            let min = flag_discrepancies_for_word(datum, &p, &d, &p.w0p_word)?
                .min_discrepancy();
            if verdict.klt || min != Some(-Rat::one()) {
                return Ok(CheckResult::fail(
                    name,
                    cases,
                    format!("sharpness fails at I={i_set:?}, d_a{} = 1", a + 1),
                ));
            }
        }
    }
    Ok(CheckResult::pass(name, cases))
}

fn merge_named(report: &mut BTreeMap<String, (bool, usize, String)>, c: CheckResult) {
    let entry = report
        .entry(c.name)
        .or_insert((true, 0, String::from("")));
    entry.1 += c.cases;
    if !c.passed && entry.0 {
        entry.0 = false;
        entry.2 = c.detail;
    }
}

/// Runs every check over the given root systems, aggregating per check name.
pub fn run_sweep(types: &[&str]) -> Result<SweepReport> {
    let grid: Vec<Rat> = DEFAULT_GRID.iter().map(|&(p, q)| rat(p, q)).collect();
    let mut agg: BTreeMap<String, (bool, usize, String)> = BTreeMap::new();
    for ty in types {
        let datum = datum_from_str(ty)?;
        merge_named(&mut agg, verify_inequality(&datum)?);
        merge_named(&mut agg, verify_levi_identity(&datum)?);
        merge_named(&mut agg, verify_equality_characterization(&datum)?);
        merge_named(&mut agg, verify_word_independence(&datum)?);
        merge_named(&mut agg, verify_flag_theorem(&datum, &grid)?);
    }
    Ok(SweepReport {
        checks: agg
            .into_iter()
            .map(|(name, (passed, cases, detail))| CheckResult {
                detail: if passed {
                    format!("{cases} cases")
                } else {
                    detail.clone()
                },
                name,
                passed,
                cases,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_pass_on_small_types() {
        for ty in ["A1", "A2", "B2", "G2", "A3"] {
            let d = datum_from_str(ty).unwrap();
            assert!(verify_inequality(&d).unwrap().passed, "{ty}");
            assert!(verify_levi_identity(&d).unwrap().passed, "{ty}");
            assert!(verify_equality_characterization(&d).unwrap().passed, "{ty}");
            assert!(verify_word_independence(&d).unwrap().passed, "{ty}");
        }
    }

    #[test]
    fn word_enumeration_counts() {
        let d = datum_from_str("A2").unwrap();
        let p = d.parabolic(&BTreeSet::new()).unwrap();
        // w_0 of A2 has exactly two reduced words.
        let words = reduced_words_of(&d, &p.w0p_word, usize::MAX);
        assert_eq!(words.len(), 2);
        for w in &words {
            assert!(d.is_reduced(w));
            assert_eq!(w.len(), 3);
        }
        // A3: the number of reduced words of w_0 is 16.
        let d = datum_from_str("A3").unwrap();
        let p = d.parabolic(&BTreeSet::new()).unwrap();
        assert_eq!(reduced_words_of(&d, &p.w0p_word, usize::MAX).len(), 16);
        // Budget truncation is respected.
        assert_eq!(reduced_words_of(&d, &p.w0p_word, 5).len(), 5);
    }

    #[test]
    fn theorem_grid_small() {
        let grid: Vec<Rat> = DEFAULT_GRID.iter().map(|&(p, q)| rat(p, q)).collect();
        for ty in ["A1", "A2", "B2"] {
            let d = datum_from_str(ty).unwrap();
            assert!(verify_flag_theorem(&d, &grid).unwrap().passed, "{ty}");
        }
    }

    #[test]
    fn sweep_report_shapes() {
        let report = run_sweep(&["A1", "A2"]).unwrap();
        assert!(report.all_passed());
        assert_eq!(report.checks.len(), 5);
        let json = report.to_json();
        assert_eq!(json["all_passed"], serde_json::json!(true));
        let table = report.to_table();
        assert!(table.contains("PASS"));
        assert!(!table.contains("FAIL"));
    }
}
