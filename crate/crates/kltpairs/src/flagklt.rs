//! Bott-Samelson discrepancy ledgers for B-stable pairs (G/P, D), and the klt
//! verdict via the strict-pairing criterion over R+ \ R+_I.

use crate::ledger::{DiscrepancyLedger, DivisorKind, LedgerEntry};
use crate::rootcore::{ParabolicData, RootDatum, Weight, WeylWord};
use crate::{is_unit_interval, rat_to_string, Error, Rat, Result};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Boundary coefficients d_alpha on the Schubert divisors D_alpha, keyed by
/// simple-root index in S \ I. Missing keys mean zero. Values in [0, 1]; the
/// boundary value 1 is admitted so sharpness is testable.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FlagBoundary {
    coeffs: BTreeMap<usize, Rat>,
}

impl FlagBoundary {
    pub fn new(coeffs: BTreeMap<usize, Rat>) -> Result<Self> {
        for (i, v) in &coeffs {
            if !is_unit_interval(v) {
                return Err(Error::CoefficientOutOfRange(format!(
                    "d_a{} = {}",
                    i + 1,
                    rat_to_string(v)
                )));
            }
        }
        Ok(FlagBoundary { coeffs })
    }

    pub fn constant(parab: &ParabolicData, datum: &RootDatum, value: Rat) -> Result<Self> {
        FlagBoundary::new(
            parab
                .boundary_simples(datum)
                .iter()
                .map(|&i| (i, value))
                .collect(),
        )
    }

    pub fn get(&self, i: usize) -> Rat {
        self.coeffs.get(&i).copied().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, Rat> {
        &self.coeffs
    }

    /// Keys must avoid I; this is checked per operation, not at the type.
    fn check_support(&self, parab: &ParabolicData) -> Result<()> {
        for i in self.coeffs.keys() {
            if parab.i_set.contains(i) {
                return Err(Error::CoefficientOutOfRange(format!(
                    "d_a{} is indexed by a simple root of I",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn floor_is_zero(&self) -> bool {
        self.coeffs.values().all(|v| *v < Rat::one())
    }
}

/// Per-divisor record of the Bott-Samelson ledger.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BSEntry {
    /// Divisor label E_i, 1-based position in the word.
    pub label: String,
    /// Index of beta_i in the positive-root list.
    pub beta_index: usize,
    pub discrepancy: Rat,
    /// Whether E_i is contracted by the resolution (reporting only; the klt
    /// verdict tests every divisor regardless).
    pub contracted: bool,
}

/// The beta-sequence of a reduced word together with the per-divisor
/// discrepancies of K_{Z/P} - phi^*(K_{G/P} + D).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BSLedger {
    pub word: WeylWord,
    pub betas: Vec<usize>,
    pub entries: Vec<BSEntry>,
}

impl BSLedger {
    pub fn min_discrepancy(&self) -> Option<Rat> {
        self.entries.iter().map(|e| e.discrepancy).min()
    }

    pub fn to_json(&self, datum: &RootDatum) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "divisor": e.label,
                        "beta": datum.positive_roots()[e.beta_index],
                        "discrepancy": rat_to_string(&e.discrepancy),
                        "contracted": e.contracted,
                    })
                })
                .collect(),
        )
    }

    pub fn to_discrepancy_ledger(&self, datum: &RootDatum) -> DiscrepancyLedger {
        DiscrepancyLedger {
            entries: self
                .entries
                .iter()
                .map(|e| LedgerEntry {
                    id: format!(
                        "flag:{}(beta={:?})",
                        e.label,
                        datum.positive_roots()[e.beta_index]
                    ),
                    kind: DivisorKind::FlagExceptional,
                    discrepancy: e.discrepancy,
                })
                .collect(),
        }
    }
}

/// beta_i = s_{a_1} ... s_{a_{i-1}}(alpha_{a_i}) for a reduced word; the
/// resulting set is the inversion set of the word.
pub fn beta_sequence_for_word(datum: &RootDatum, word: &WeylWord) -> Result<Vec<usize>> {
    if !datum.is_reduced(word) {
        return Err(Error::NotReducedWord);
    }
    let mut betas = Vec::with_capacity(word.len());
    for i in 0..word.len() {
        let prefix = WeylWord::new(word.letters[..i].to_vec());
        let mut e = vec![0i64; datum.rank()];
        e[word.letters[i]] = 1;
        let beta = datum.weyl_apply_root(&prefix, &e);
        let idx = datum
            .root_index(&beta)
            .expect("beta of a reduced word is a positive root");
        betas.push(idx);
    }
    Ok(betas)
}

/// beta-sequence of the pinned coset word of the parabolic.
pub fn beta_sequence(datum: &RootDatum, parab: &ParabolicData) -> Result<Vec<usize>> {
    beta_sequence_for_word(datum, &parab.w0p_word)
}

fn check_p_character(datum: &RootDatum, parab: &ParabolicData, lambda: &Weight) -> Result<()> {
    for &i in &parab.i_set {
        let mut cov = vec![0i64; datum.rank()];
        cov[i] = 1;
        if !datum.pairing(lambda, &cov)?.is_zero() {
            return Err(Error::NotPCharacter(i));
        }
    }
    Ok(())
}

/// Pullback coefficients of D_lambda along the resolution: <lambda, beta_i^vee>
/// in word order. lambda must be a character of P.
pub fn pullback_coefficients(
    datum: &RootDatum,
    parab: &ParabolicData,
    lambda: &Weight,
) -> Result<Vec<Rat>> {
    check_p_character(datum, parab, lambda)?;
    let betas = beta_sequence(datum, parab)?;
    betas
        .iter()
        .map(|&b| datum.pairing(lambda, &datum.positive_coroots()[b]))
        .collect()
}

/// Coefficients <lambda, alpha^vee> of D_lambda on the Schubert divisors
/// D_alpha, alpha in S \ I.
pub fn schubert_divisor_of_character(
    datum: &RootDatum,
    parab: &ParabolicData,
    lambda: &Weight,
) -> Result<BTreeMap<usize, Rat>> {
    check_p_character(datum, parab, lambda)?;
    parab
        .boundary_simples(datum)
        .iter()
        .map(|&i| {
            let mut cov = vec![0i64; datum.rank()];
            cov[i] = 1;
            Ok((i, datum.pairing(lambda, &cov)?))
        })
        .collect()
}

/// Anticanonical coefficients on the E_i: <rho, beta_i^vee> + 1.
pub fn anticanonical_bs(datum: &RootDatum, parab: &ParabolicData) -> Result<Vec<Rat>> {
    let rho = datum.rho();
    let betas = beta_sequence(datum, parab)?;
    betas
        .iter()
        .map(|&b| Ok(datum.pairing(&rho, &datum.positive_coroots()[b])? + Rat::one()))
        .collect()
}

/// The weight 2 rho^P - rho - sum_{alpha in S\I} d_alpha varpi_alpha whose
/// pairings against the beta^vee drive both the ledger and the verdict.
pub fn klt_weight(datum: &RootDatum, parab: &ParabolicData, d: &FlagBoundary) -> Weight {
    let mut w = parab.two_rho_superp.sub(&datum.rho());
    for (&i, &c) in d.coeffs() {
        w = w.sub(&datum.fundamental_weight(i).scale(c));
    }
    w
}

/// Discrepancy ledger along a chosen reduced word: a_i = <klt weight,
/// beta_i^vee> - 1.
pub fn flag_discrepancies_for_word(
    datum: &RootDatum,
    parab: &ParabolicData,
    d: &FlagBoundary,
    word: &WeylWord,
) -> Result<BSLedger> {
    d.check_support(parab)?;
    let betas = beta_sequence_for_word(datum, word)?;
    let mu = klt_weight(datum, parab, d);
    let mut entries = Vec::with_capacity(betas.len());
    for (i, &b) in betas.iter().enumerate() {
        let a = datum.pairing(&mu, &datum.positive_coroots()[b])? - Rat::one();
        // E_i maps onto a divisor of G/P exactly when the punctured word is
        // still reduced; otherwise it is contracted.
        let punctured = WeylWord::new(
            word.letters
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &l)| l)
                .collect(),
        );
        entries.push(BSEntry {
            label: format!("E{}", i + 1),
            beta_index: b,
            discrepancy: a,
            contracted: !datum.is_reduced(&punctured),
        });
    }
    Ok(BSLedger {
        word: word.clone(),
        betas,
        entries,
    })
}

pub fn flag_discrepancies(
    datum: &RootDatum,
    parab: &ParabolicData,
    d: &FlagBoundary,
) -> Result<BSLedger> {
    flag_discrepancies_for_word(datum, parab, d, &parab.w0p_word)
}

/// Witness for a failed klt verdict: a beta with nonpositive pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagWitness {
    pub beta_index: usize,
    pub pairing: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagVerdict {
    pub klt: bool,
    pub witness: Option<FlagWitness>,
}

/// (G/P, D) is klt iff <2 rho^P - rho - sum d_alpha varpi_alpha, beta^vee> > 0
/// for every beta in R+ \ R+_I.
pub fn is_klt_flag(
    datum: &RootDatum,
    parab: &ParabolicData,
    d: &FlagBoundary,
) -> Result<FlagVerdict> {
    d.check_support(parab)?;
    let mu = klt_weight(datum, parab, d);
    let mut worst: Option<FlagWitness> = None;
    for k in parab.complement_indices(datum) {
        let p = datum.pairing(&mu, &datum.positive_coroots()[k])?;
        if worst.as_ref().is_none_or(|w| p < w.pairing) {
            worst = Some(FlagWitness {
                beta_index: k,
                pairing: p,
            });
        }
    }
    match worst {
        None => Ok(FlagVerdict {
            klt: true,
            witness: None,
        }),
        Some(w) => {
            if w.pairing.is_positive() {
                Ok(FlagVerdict {
                    klt: true,
                    witness: None,
                })
            } else {
                Ok(FlagVerdict {
                    klt: false,
                    witness: Some(w),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use crate::rootcore::datum_from_str;
    use num_traits::Signed;
    use std::collections::BTreeSet;

    fn setup(s: &str, i: &[usize]) -> (RootDatum, ParabolicData) {
        let d = datum_from_str(s).unwrap();
        let p = d.parabolic(&i.iter().copied().collect()).unwrap();
        (d, p)
    }

    fn boundary(pairs: &[(usize, Rat)]) -> FlagBoundary {
        FlagBoundary::new(pairs.iter().copied().collect()).unwrap()
    }

    #[test]
    fn beta_sequences() {
        let (d, p) = setup("A1", &[]);
        assert_eq!(beta_sequence(&d, &p).unwrap(), vec![0]);

        let (d, p) = setup("A2", &[0]);
        let seq = beta_sequence(&d, &p).unwrap();
        let roots: Vec<_> = seq.iter().map(|&k| d.positive_roots()[k].clone()).collect();
        assert_eq!(roots, vec![vec![0, 1], vec![1, 1]]);

        let (d, _) = setup("A2", &[]);
        let word = WeylWord::new(vec![0, 1, 0]);
        let seq = beta_sequence_for_word(&d, &word).unwrap();
        let roots: Vec<_> = seq.iter().map(|&k| d.positive_roots()[k].clone()).collect();
        assert_eq!(roots, vec![vec![1, 0], vec![1, 1], vec![0, 1]]);

        // Non-reduced words are rejected.
        let bad = WeylWord::new(vec![0, 0]);
        assert_eq!(beta_sequence_for_word(&d, &bad), Err(Error::NotReducedWord));
    }

    #[test]
    fn beta_set_equals_complement() {
        for s in ["A2", "A3", "B2", "B3", "G2"] {
            let d = datum_from_str(s).unwrap();
            for mask in 0..(1u32 << d.rank()) {
                let i_set: BTreeSet<usize> =
                    (0..d.rank()).filter(|&i| mask & (1 << i) != 0).collect();
                let p = d.parabolic(&i_set).unwrap();
                let seq = beta_sequence(&d, &p).unwrap();
                let as_set: BTreeSet<usize> = seq.iter().copied().collect();
                assert_eq!(as_set.len(), seq.len(), "{s}: repeated beta");
                let complement: BTreeSet<usize> =
                    p.complement_indices(&d).into_iter().collect();
                assert_eq!(as_set, complement, "{s}");
            }
        }
    }

    #[test]
    fn pullback_examples() {
        let (d, p) = setup("A2", &[0]);
        let zero = Weight::zero(2);
        assert_eq!(
            pullback_coefficients(&d, &p, &zero).unwrap(),
            vec![rat(0, 1); 2]
        );
        let lam = d.weight_from_fundamental(&[rat(0, 1), rat(3, 1)]).unwrap();
        assert_eq!(
            pullback_coefficients(&d, &p, &lam).unwrap(),
            vec![rat(3, 1), rat(3, 1)]
        );
        // rho is not a character of P when I is nonempty.
        assert_eq!(
            pullback_coefficients(&d, &p, &d.rho()),
            Err(Error::NotPCharacter(0))
        );

        let (d, p) = setup("A1", &[]);
        assert_eq!(
            pullback_coefficients(&d, &p, &d.rho()).unwrap(),
            vec![rat(1, 1)]
        );
    }

    #[test]
    fn pullback_linearity() {
        let (d, p) = setup("B2", &[1]);
        let lam = d.weight_from_fundamental(&[rat(2, 1), rat(0, 1)]).unwrap();
        let mu = d.weight_from_fundamental(&[rat(-1, 2), rat(0, 1)]).unwrap();
        let a = pullback_coefficients(&d, &p, &lam).unwrap();
        let b = pullback_coefficients(&d, &p, &mu).unwrap();
        let ab = pullback_coefficients(&d, &p, &lam.add(&mu)).unwrap();
        let sum: Vec<Rat> = a.iter().zip(&b).map(|(x, y)| *x + *y).collect();
        assert_eq!(ab, sum);
    }

    #[test]
    fn schubert_divisor_examples() {
        let (d, p) = setup("A2", &[0]);
        let lam = p.two_rho_superp.clone(); // 3 varpi_2
        let div = schubert_divisor_of_character(&d, &p, &lam).unwrap();
        assert_eq!(div, [(1usize, rat(3, 1))].into_iter().collect());

        let (d, p) = setup("A1", &[]);
        let two_rho = d.rho().scale(rat(2, 1));
        let div = schubert_divisor_of_character(&d, &p, &two_rho).unwrap();
        assert_eq!(div, [(0usize, rat(2, 1))].into_iter().collect());

        let zero = Weight::zero(1);
        let div = schubert_divisor_of_character(&d, &p, &zero).unwrap();
        assert_eq!(div, [(0usize, rat(0, 1))].into_iter().collect());
    }

    #[test]
    fn anticanonical_examples() {
        let (d, p) = setup("A1", &[]);
        assert_eq!(anticanonical_bs(&d, &p).unwrap(), vec![rat(2, 1)]);
        let (d, p) = setup("A2", &[0]);
        assert_eq!(anticanonical_bs(&d, &p).unwrap(), vec![rat(2, 1), rat(3, 1)]);
        // Heights are >= 1, so every coefficient is >= 2.
        for s in ["A3", "B3", "G2"] {
            let (d, p) = setup(s, &[]);
            assert!(anticanonical_bs(&d, &p)
                .unwrap()
                .iter()
                .all(|c| *c >= rat(2, 1)));
        }
    }

    #[test]
    fn discrepancy_examples() {
        let (d, p) = setup("A1", &[]);
        let l = flag_discrepancies(&d, &p, &FlagBoundary::default()).unwrap();
        assert_eq!(l.min_discrepancy(), Some(rat(0, 1)));
        let l = flag_discrepancies(&d, &p, &boundary(&[(0, rat(1, 2))])).unwrap();
        assert_eq!(l.min_discrepancy(), Some(rat(-1, 2)));

        let (d, p) = setup("A2", &[0]);
        let l = flag_discrepancies(&d, &p, &boundary(&[(1, rat(1, 2))])).unwrap();
        let mut values: Vec<Rat> = l.entries.iter().map(|e| e.discrepancy).collect();
        values.sort();
        assert_eq!(values, vec![rat(-1, 2), rat(1, 2)]);
    }

    #[test]
    fn klt_verdicts() {
        let (d, p) = setup("A2", &[0]);
        assert!(is_klt_flag(&d, &p, &FlagBoundary::default()).unwrap().klt);
        assert!(is_klt_flag(&d, &p, &boundary(&[(1, rat(1, 2))])).unwrap().klt);

        let v = is_klt_flag(&d, &p, &boundary(&[(1, rat(1, 1))])).unwrap();
        assert!(!v.klt);
        let w = v.witness.unwrap();
        assert_eq!(d.positive_roots()[w.beta_index], vec![1, 1]);
        assert_eq!(w.pairing, rat(0, 1));

        // Out-of-range coefficients are rejected at the type.
        assert!(FlagBoundary::new([(1, rat(3, 2))].into_iter().collect()).is_err());
        assert!(FlagBoundary::new([(1, rat(-1, 4))].into_iter().collect()).is_err());
        // Coefficients indexed inside I are rejected per operation.
        let d_in_levi = FlagBoundary::new([(0, rat(1, 2))].into_iter().collect()).unwrap();
        assert!(matches!(
            is_klt_flag(&d, &p, &d_in_levi),
            Err(Error::CoefficientOutOfRange(_))
        ));
    }

    #[test]
    fn boundary_sharpness() {
        // d_alpha = 1 forces min discrepancy exactly -1, attained at
        // beta = w_{0,P}(alpha).
        for (s, i_set) in [("A2", vec![0usize]), ("B2", vec![0]), ("A3", vec![0, 2])] {
            let (d, p) = setup(s, &i_set);
            for &alpha in &p.boundary_simples(&d) {
                let b = boundary(&[(alpha, rat(1, 1))]);
                let l = flag_discrepancies(&d, &p, &b).unwrap();
                assert_eq!(l.min_discrepancy(), Some(rat(-1, 1)), "{s} a{}", alpha + 1);
                let mut e = vec![0i64; d.rank()];
                e[alpha] = 1;
                let target = d.weyl_apply_root(&p.w0_levi_word, &e);
                let ti = d.root_index(&target).unwrap();
                let hit = l
                    .entries
                    .iter()
                    .find(|en| en.discrepancy == rat(-1, 1))
                    .unwrap();
                assert_eq!(hit.beta_index, ti);
            }
        }
    }

    #[test]
    fn word_independent_multiset_rank2() {
        // Both reduced words of w_0 in A2 give the same discrepancy multiset.
        let (d, p) = setup("A2", &[]);
        let b = FlagBoundary::constant(&p, &d, rat(1, 2)).unwrap();
        let mut m1: Vec<Rat> = flag_discrepancies_for_word(&d, &p, &b, &WeylWord::new(vec![0, 1, 0]))
            .unwrap()
            .entries
            .iter()
            .map(|e| e.discrepancy)
            .collect();
        let mut m2: Vec<Rat> = flag_discrepancies_for_word(&d, &p, &b, &WeylWord::new(vec![1, 0, 1]))
            .unwrap()
            .entries
            .iter()
            .map(|e| e.discrepancy)
            .collect();
        m1.sort();
        m2.sort();
        assert_eq!(m1, m2);
    }

    #[test]
    fn theorem_reproduction_small_grid() {
        // Every d with all coefficients < 1 is klt, with min discrepancy > -1.
        let grid = [rat(0, 1), rat(1, 4), rat(1, 2), rat(3, 4)];
        for (s, i_set) in [("A2", vec![]), ("A2", vec![0usize]), ("B2", vec![1])] {
            let (d, p) = setup(s, &i_set);
            let simples = p.boundary_simples(&d);
            let k = simples.len();
            for combo in 0..grid.len().pow(k as u32) {
                let mut c = combo;
                let mut coeffs = BTreeMap::new();
                for &a in &simples {
                    coeffs.insert(a, grid[c % grid.len()]);
                    c /= grid.len();
                }
                let b = FlagBoundary::new(coeffs).unwrap();
                assert!(is_klt_flag(&d, &p, &b).unwrap().klt);
                let l = flag_discrepancies(&d, &p, &b).unwrap();
                assert!(l.min_discrepancy().unwrap() > rat(-1, 1));
            }
        }
    }

    #[test]
    fn ledger_json_shape() {
        let (d, p) = setup("A2", &[0]);
        let l = flag_discrepancies(&d, &p, &boundary(&[(1, rat(1, 2))])).unwrap();
        let json = l.to_json(&d);
        let arr = json.as_array().unwrap();
        assert_eq!(arr.len(), 2);
        assert_eq!(arr[0]["divisor"], "E1");
        assert!(arr[0]["discrepancy"].is_string());
        // P^1-bundle steps contract nothing here; min entry is on a1+a2.
        assert!(arr
            .iter()
            .any(|e| e["discrepancy"] == serde_json::json!("-1/2")));
    }

    #[test]
    fn anticanonical_positive() {
        // The klt weight at d = 0 pairs nonnegatively with every complement
        // coroot minus one, i.e. discrepancies at d = 0 are >= 0.
        for s in ["A3", "B3", "C3", "G2"] {
            let d = datum_from_str(s).unwrap();
            for mask in 0..(1u32 << d.rank()) {
                let i_set: BTreeSet<usize> =
                    (0..d.rank()).filter(|&i| mask & (1 << i) != 0).collect();
                let p = d.parabolic(&i_set).unwrap();
                let l = flag_discrepancies(&d, &p, &FlagBoundary::default()).unwrap();
                if let Some(m) = l.min_discrepancy() {
                    assert!(!m.is_negative(), "{s} mask {mask}");
                }
            }
        }
    }
}
