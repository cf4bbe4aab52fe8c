//! Horospherical pairs: colored fans over a parabolic datum, anticanonical
//! coefficients, toroidal resolutions, and the combined discrepancy ledger
//! (toric part plus Bott-Samelson part).

use crate::flagklt::{self, FlagBoundary};
use crate::ledger::{DiscrepancyLedger, DivisorKind, LedgerEntry};
use crate::rootcore::{datum_from_str, parse_simple, ParabolicData, RootDatum};
use crate::toricres::{
    pl_function_with_constraints, resolve_fan, stellar_insert, Fan, PLDivisor, ToricBoundary,
};
use crate::{is_unit_interval, parse_rat, rat_to_string, Error, Rat, Result};
use num_traits::{One, Signed};
use serde::Deserialize;
use std::collections::{BTreeMap, BTreeSet};

/// A color: the simple root alpha in S \ I indexing it, its image point in
/// the lattice N, and the maximal cones whose interiors it meets (possibly
/// none, in which case it does not constrain the fan side at all).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Color {
    pub alpha: usize,
    pub point: Vec<i64>,
    pub cones: Vec<usize>,
}

/// A B-stable pair (X, D) on a horospherical variety: the parabolic datum of
/// the open orbit, the (colored) fan, and boundary coefficients d_G on the
/// G-stable divisors (one per ray) and d_B on the colors (keyed by alpha).
#[derive(Debug, Clone)]
pub struct HorosphericalPair {
    pub datum: RootDatum,
    pub parab: ParabolicData,
    pub fan: Fan,
    pub colors: Vec<Color>,
    pub d_g: ToricBoundary,
    pub d_b: FlagBoundary,
}

impl HorosphericalPair {
    pub fn new(
        datum: RootDatum,
        i_set: &BTreeSet<usize>,
        fan: Fan,
        colors: Vec<Color>,
        d_g: ToricBoundary,
        d_b: FlagBoundary,
    ) -> Result<HorosphericalPair> {
        let parab = datum.parabolic(i_set)?;
        if d_g.coeffs().len() != fan.rays().len() {
            return Err(Error::DimensionMismatch);
        }
        let mut seen_alpha = BTreeSet::new();
        for color in &colors {
            if color.alpha >= datum.rank() || parab.i_set.contains(&color.alpha) {
                return Err(Error::InvalidFan(format!(
                    "color a{} is not a simple root of S \\ I",
                    color.alpha + 1
                )));
            }
            if !seen_alpha.insert(color.alpha) {
                return Err(Error::InvalidFan(format!(
                    "duplicate color a{}",
                    color.alpha + 1
                )));
            }
            if color.point.len() != fan.rank() {
                return Err(Error::DimensionMismatch);
            }
            if color.point.iter().all(|&c| c == 0) {
                return Err(Error::InvalidFan(format!(
                    "color a{} has image zero",
                    color.alpha + 1
                )));
            }
            for &ci in &color.cones {
                let cone = fan
                    .cones()
                    .get(ci)
                    .ok_or_else(|| Error::InvalidFan(format!("color cone id {ci} out of range")))?;
                // Membership is decidable for simplicial fans; trust the
                // incidence data otherwise.
                if fan.all_simplicial() && fan.cone_coordinates(cone, &color.point).is_none() {
                    return Err(Error::InvalidFan(format!(
                        "color a{} does not lie in cone {ci}",
                        color.alpha + 1
                    )));
                }
            }
        }
        for i in d_b.coeffs().keys() {
            if parab.i_set.contains(i) {
                return Err(Error::CoefficientOutOfRange(format!(
                    "d_a{} is indexed by a simple root of I",
                    i + 1
                )));
            }
        }
        Ok(HorosphericalPair {
            datum,
            parab,
            fan,
            colors,
            d_g,
            d_b,
        })
    }

    /// Coefficient a_alpha = <2 rho^P, alpha^vee> of the color D_alpha in
    /// -K_X; every G-stable divisor X_i has coefficient 1.
    pub fn anticanonical_color_coefficient(&self, alpha: usize) -> Result<Rat> {
        let mut cov = vec![0i64; self.datum.rank()];
        cov[alpha] = 1;
        self.datum.pairing(&self.parab.two_rho_superp, &cov)
    }

    fn color_constraints(&self) -> Result<Vec<(Vec<i64>, Rat, Vec<usize>)>> {
        self.colors
            .iter()
            .filter(|c| !c.cones.is_empty())
            .map(|c| {
                let a = self.anticanonical_color_coefficient(c.alpha)?;
                Ok((c.point.clone(), a - self.d_b.get(c.alpha), c.cones.clone()))
            })
            .collect()
    }

    /// PL function of -K_X - D on the fan: ray values 1 - d_i, interpolating
    /// a_alpha - d_alpha at each incident color point.
    pub fn pl_divisor(&self) -> Result<PLDivisor> {
        let values: Vec<Rat> = self.d_g.coeffs().iter().map(|c| Rat::one() - *c).collect();
        pl_function_with_constraints(&self.fan, &values, &self.color_constraints()?)
    }

    pub fn floor_is_zero(&self) -> bool {
        self.d_g.floor_is_zero() && self.d_b.floor_is_zero()
    }

    pub fn parse(text: &str) -> Result<HorosphericalPair> {
        let file: PairFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let datum = datum_from_str(&file.root_system)?;
        let i_set: BTreeSet<usize> = file
            .parabolic_i
            .iter()
            .map(|s| parse_simple(s, datum.rank()))
            .collect::<Result<_>>()?;
        let fan = Fan::new(file.fan.rank, file.fan.rays, file.fan.cones)?;
        let colors = file
            .colors
            .iter()
            .map(|c| {
                Ok(Color {
                    alpha: parse_simple(&c.alpha, datum.rank())?,
                    point: c.point.clone(),
                    cones: c.cones.clone(),
                })
            })
            .collect::<Result<Vec<Color>>>()?;
        let d_g = ToricBoundary::new(
            file.d_g
                .iter()
                .map(|s| parse_rat(s))
                .collect::<Result<_>>()?,
        )?;
        let d_b = FlagBoundary::new(
            file.d_b
                .iter()
                .map(|(k, v)| Ok((parse_simple(k, datum.rank())?, parse_rat(v)?)))
                .collect::<Result<_>>()?,
        )?;
        HorosphericalPair::new(datum, &i_set, fan, colors, d_g, d_b)
    }
}

#[derive(Debug, Deserialize)]
struct PairFile {
    root_system: String,
    #[serde(rename = "parabolic_I", default)]
    parabolic_i: Vec<String>,
    fan: PairFanFile,
    #[serde(default)]
    colors: Vec<ColorFile>,
    #[serde(rename = "d_G", default)]
    d_g: Vec<String>,
    #[serde(rename = "d_B", default)]
    d_b: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
struct PairFanFile {
    rank: usize,
    #[serde(default)]
    rays: Vec<Vec<i64>>,
    #[serde(default)]
    cones: Vec<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
struct ColorFile {
    alpha: String,
    point: Vec<i64>,
    #[serde(default)]
    cones: Vec<usize>,
}

/// The toroidal resolution data: the fan refined so every incident color
/// point spans a ray, then smoothed. `ray_provenance` maps each ray that is
/// exceptional for X -> X (neither an input ray nor a color ray) to the input
/// cone it subdivides.
#[derive(Debug, Clone)]
pub struct ToroidalResolution {
    /// Input fan with the incident color points inserted as rays.
    pub colored: Fan,
    /// Ray index in `colored` of each inserted color, keyed by alpha.
    pub color_rays: BTreeMap<usize, usize>,
    /// Smooth refinement of `colored`.
    pub resolved: Fan,
    /// Exceptional ray index in `resolved` -> input cone index.
    pub ray_provenance: BTreeMap<usize, usize>,
}

pub fn toroidal_resolution(pair: &HorosphericalPair) -> Result<ToroidalResolution> {
    let mut colored = pair.fan.clone();
    // cone index in `colored` -> cone index in the input fan.
    let mut cone_origin: Vec<usize> = (0..colored.cones().len()).collect();
    let mut color_rays = BTreeMap::new();
    for color in &pair.colors {
        if color.cones.is_empty() {
            continue;
        }
        let (next, origins, ray_idx) = stellar_insert(&colored, &color.point)?;
        cone_origin = origins.iter().map(|&c| cone_origin[c]).collect();
        colored = next;
        color_rays.insert(color.alpha, ray_idx);
    }
    let (resolved, prov) = resolve_fan(&colored)?;
    let ray_provenance = prov
        .into_iter()
        .map(|(ray, cone)| (ray, cone_origin[cone]))
        .collect();
    Ok(ToroidalResolution {
        colored,
        color_rays,
        resolved,
        ray_provenance,
    })
}

/// The combined ledger plus effectivity bookkeeping.
#[derive(Debug, Clone)]
pub struct HoroLedger {
    pub ledger: DiscrepancyLedger,
    /// Whether the PL values of -K_X - D are strictly positive at every ray
    /// and every incident color point.
    pub strictly_effective: bool,
}

/// Discrepancies of the full resolution of (X, D): toric-exceptional entries
/// a_v = psi(v) - 1 over the new rays, then the Bott-Samelson entries of the
/// flag fibration with boundary d_B.
pub fn horospherical_discrepancies(pair: &HorosphericalPair) -> Result<HoroLedger> {
    let psi = pair.pl_divisor()?;
    let tor = toroidal_resolution(pair)?;
    let mut entries = Vec::new();
    for (&ray_idx, &cone_idx) in &tor.ray_provenance {
        let v = &tor.resolved.rays()[ray_idx];
        entries.push(LedgerEntry {
            id: format!(
                "toric:({})",
                v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
            ),
            kind: DivisorKind::ToricExceptional,
            discrepancy: psi.eval_in_cone(cone_idx, v) - Rat::one(),
        });
    }
    let toric = DiscrepancyLedger { entries };
    let flag = flagklt::flag_discrepancies(&pair.datum, &pair.parab, &pair.d_b)?
        .to_discrepancy_ledger(&pair.datum);

    let mut strictly_effective = psi.ray_values().iter().all(Signed::is_positive);
    for (_, value, _) in pair.color_constraints()? {
        strictly_effective &= value.is_positive();
    }
    Ok(HoroLedger {
        ledger: toric.merge(flag),
        strictly_effective,
    })
}

/// The verdict record for (X, D). `klt` restates `floor_is_zero`; the ledger
/// minima are carried along and cross-checked so the criterion is audited on
/// every call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoroVerdict {
    pub klt: bool,
    pub floor_is_zero: bool,
    /// Minimum over exceptional divisors of the resolution.
    pub exceptional_min: Option<Rat>,
    /// Minimum including the strict transforms, which carry -d_i and
    /// -d_alpha; klt is equivalent to this being > -1.
    pub total_min: Option<Rat>,
    /// Agreement of the two routes: floor_is_zero vs total_min > -1.
    pub consistent: bool,
    pub strictly_effective: bool,
}

pub fn is_klt_horospherical(pair: &HorosphericalPair) -> Result<HoroVerdict> {
    let horo = horospherical_discrepancies(pair)?;
    let floor_is_zero = pair.floor_is_zero();
    let exceptional_min = horo.ledger.min();
    let mut total: Vec<Rat> = horo.ledger.entries.iter().map(|e| e.discrepancy).collect();
    total.extend(pair.d_g.coeffs().iter().map(|d| -d));
    total.extend(
        pair.parab
            .boundary_simples(&pair.datum)
            .iter()
            .map(|&a| -pair.d_b.get(a)),
    );
    let total_min = total.into_iter().min();
    let consistent = floor_is_zero == total_min.is_none_or(|m| m > -Rat::one());
    Ok(HoroVerdict {
        klt: floor_is_zero,
        floor_is_zero,
        exceptional_min,
        total_min,
        consistent,
        strictly_effective: horo.strictly_effective,
    })
}

pub fn verdict_to_json(v: &HoroVerdict, ledger: &DiscrepancyLedger) -> serde_json::Value {
    serde_json::json!({
        "klt": v.klt,
        "floor_is_zero": v.floor_is_zero,
        "exceptional_min": v.exceptional_min.map(|m| rat_to_string(&m)),
        "total_min": v.total_min.map(|m| rat_to_string(&m)),
        "consistent": v.consistent,
        "strictly_effective": v.strictly_effective,
        "ledger": ledger.to_json(),
    })
}

/// Sanity helper for fixtures: every boundary coefficient lies in [0, 1].
pub fn boundary_in_range(pair: &HorosphericalPair) -> bool {
    pair.d_g.coeffs().iter().all(is_unit_interval)
        && pair.d_b.coeffs().values().all(is_unit_interval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn pair_json(text: &str) -> HorosphericalPair {
        HorosphericalPair::parse(text).unwrap()
    }

    #[test]
    fn flag_only_pair() {
        // Trivial fan: X = G/P itself; the ledger is purely Bott-Samelson.
        let p = pair_json(
            r#"{
              "root_system": "A2",
              "parabolic_I": ["a1"],
              "fan": {"rank": 1, "rays": [], "cones": [[]]},
              "colors": [],
              "d_G": [],
              "d_B": {"a2": "1/2"}
            }"#,
        );
        let h = horospherical_discrepancies(&p).unwrap();
        let mut vals: Vec<Rat> = h.ledger.entries.iter().map(|e| e.discrepancy).collect();
        vals.sort();
        assert_eq!(vals, vec![rat(-1, 2), rat(1, 2)]);
        assert!(h
            .ledger
            .entries
            .iter()
            .all(|e| e.kind == DivisorKind::FlagExceptional));
        let v = is_klt_horospherical(&p).unwrap();
        assert!(v.klt && v.consistent);
        assert_eq!(v.total_min, Some(rat(-1, 2)));
    }

    #[test]
    fn smooth_toric_times_flag() {
        // P^1 seen horospherically: A1 acting through its torus quotient.
        let p = pair_json(
            r#"{
              "root_system": "A1",
              "parabolic_I": [],
              "fan": {"rank": 1, "rays": [[1], [-1]], "cones": [[0], [1]]},
              "d_G": ["0", "0"],
              "d_B": {}
            }"#,
        );
        let h = horospherical_discrepancies(&p).unwrap();
        // Smooth fan contributes nothing; the flag side contributes one zero.
        let vals: Vec<Rat> = h.ledger.entries.iter().map(|e| e.discrepancy).collect();
        assert_eq!(vals, vec![rat(0, 1)]);
        assert!(is_klt_horospherical(&p).unwrap().klt);
    }

    #[test]
    fn toric_and_flag_entries() {
        let p = pair_json(
            r#"{
              "root_system": "A1",
              "parabolic_I": [],
              "fan": {"rank": 2, "rays": [[1,0],[1,2]], "cones": [[0,1]]},
              "d_G": ["0", "0"],
              "d_B": {}
            }"#,
        );
        let h = horospherical_discrepancies(&p).unwrap();
        let toric: Vec<&LedgerEntry> = h
            .ledger
            .entries
            .iter()
            .filter(|e| e.kind == DivisorKind::ToricExceptional)
            .collect();
        let flag: Vec<&LedgerEntry> = h
            .ledger
            .entries
            .iter()
            .filter(|e| e.kind == DivisorKind::FlagExceptional)
            .collect();
        assert_eq!(toric.len(), 1);
        assert_eq!(toric[0].discrepancy, rat(0, 1));
        assert_eq!(flag.len(), 1);
        assert_eq!(flag[0].discrepancy, rat(0, 1));
        let v = is_klt_horospherical(&p).unwrap();
        assert!(v.klt && v.consistent && v.strictly_effective);
    }

    #[test]
    fn color_constrained_pl() {
        // A color point inside the cone forces the PL solve to interpolate
        // a_alpha - d_alpha there.
        let p = pair_json(
            r#"{
              "root_system": "A2",
              "parabolic_I": ["a1"],
              "fan": {"rank": 2, "rays": [[1,0],[0,1]], "cones": [[0,1]]},
              "colors": [{"alpha": "a2", "point": [1,1], "cones": [0]}],
              "d_G": ["0", "0"],
              "d_B": {"a2": "0"}
            }"#,
        );
        // a_{a2} = <2 rho^P, a2^vee> = <3 varpi_2, a2^vee> = 3.
        assert_eq!(p.anticanonical_color_coefficient(1).unwrap(), rat(3, 1));
        // Constraint: psi(1,1) = 3 with psi(1,0) = psi(0,1) = 1 is
        // inconsistent on a smooth cone: not Q-Cartier.
        assert_eq!(p.pl_divisor().unwrap_err(), Error::NotQCartier(0));

        // With d_a2 = 1 the same constraint reads psi(1,1) = 2 = 1 + 1 and
        // the solve succeeds; the pair is not klt (floor nonzero) and the
        // strict transform of the color carries the witnessing -1.
        let p = pair_json(
            r#"{
              "root_system": "A2",
              "parabolic_I": ["a1"],
              "fan": {"rank": 2, "rays": [[1,0],[0,1]], "cones": [[0,1]]},
              "colors": [{"alpha": "a2", "point": [1,1], "cones": [0]}],
              "d_G": ["0", "0"],
              "d_B": {"a2": "1"}
            }"#,
        );
        let psi = p.pl_divisor().unwrap();
        assert_eq!(psi.eval_in_cone(0, &[1, 1]), rat(2, 1));
        let v = is_klt_horospherical(&p).unwrap();
        assert!(!v.klt && !v.floor_is_zero);
        assert_eq!(v.total_min, Some(rat(-1, 1)));
        assert!(v.consistent);
    }

    #[test]
    fn color_insertion_in_resolution() {
        // Color point interior to a singular cone: it becomes a ray first
        // (not exceptional), then the rest is resolved. The point (2,4) is
        // deliberately non-primitive; psi interpolates a_{a1} = 2 there,
        // which is consistent with ray values 1, 1 (functional x).
        let p = pair_json(
            r#"{
              "root_system": "A1",
              "parabolic_I": [],
              "fan": {"rank": 2, "rays": [[1,0],[1,4]], "cones": [[0,1]]},
              "colors": [{"alpha": "a1", "point": [2,4], "cones": [0]}],
              "d_G": ["0", "0"],
              "d_B": {"a1": "0"}
            }"#,
        );
        assert_eq!(p.anticanonical_color_coefficient(0).unwrap(), rat(2, 1));
        let tor = toroidal_resolution(&p).unwrap();
        assert_eq!(tor.color_rays.get(&0), Some(&2));
        assert_eq!(tor.colored.rays()[2], vec![1, 2]);
        // Exceptional rays exclude the color ray.
        assert!(!tor.ray_provenance.contains_key(&2));
        assert!(tor.resolved.rays().contains(&vec![1, 1]));
        assert!(tor.resolved.rays().contains(&vec![1, 3]));
        let h = horospherical_discrepancies(&p).unwrap();
        let toric: BTreeMap<String, Rat> = h
            .ledger
            .entries
            .iter()
            .filter(|e| e.kind == DivisorKind::ToricExceptional)
            .map(|e| (e.id.clone(), e.discrepancy))
            .collect();
        // psi = x on the whole cone, so psi(1,1) = psi(1,3) = 1.
        assert_eq!(toric.get("toric:(1,1)"), Some(&rat(0, 1)));
        assert_eq!(toric.get("toric:(1,3)"), Some(&rat(0, 1)));
        assert!(is_klt_horospherical(&p).unwrap().klt);
    }

    #[test]
    fn not_q_cartier_pair() {
        let p = pair_json(
            r#"{
              "root_system": "A1",
              "parabolic_I": [],
              "fan": {"rank": 3,
                      "rays": [[1,0,0],[0,1,0],[1,0,1],[0,1,1]],
                      "cones": [[0,1,2,3]]},
              "d_G": ["1/2", "0", "0", "0"],
              "d_B": {}
            }"#,
        );
        assert_eq!(
            horospherical_discrepancies(&p).unwrap_err(),
            Error::NotQCartier(0)
        );
    }

    #[test]
    fn boundary_coefficient_one_is_not_klt_but_consistent() {
        let p = pair_json(
            r#"{
              "root_system": "A1",
              "parabolic_I": [],
              "fan": {"rank": 1, "rays": [[1], [-1]], "cones": [[0], [1]]},
              "d_G": ["1", "0"],
              "d_B": {}
            }"#,
        );
        let v = is_klt_horospherical(&p).unwrap();
        assert!(!v.klt && !v.floor_is_zero);
        // The strict transform carries -1, so the total route agrees even
        // though no exceptional divisor witnesses the failure.
        assert_eq!(v.total_min, Some(rat(-1, 1)));
        assert!(v.consistent);
        assert!(!v.strictly_effective);
    }

    #[test]
    fn monotonicity_in_d() {
        // Increasing d decreases every toric discrepancy.
        let base = r#"{
              "root_system": "A1",
              "parabolic_I": [],
              "fan": {"rank": 2, "rays": [[1,0],[1,3]], "cones": [[0,1]]},
              "d_G": [D, D],
              "d_B": {}
            }"#;
        let at = |d: &str| {
            let p = pair_json(&base.replace('D', &format!("\"{d}\"")));
            let h = horospherical_discrepancies(&p).unwrap();
            h.ledger
                .entries
                .iter()
                .filter(|e| e.kind == DivisorKind::ToricExceptional)
                .map(|e| e.discrepancy)
                .collect::<Vec<Rat>>()
        };
        let d0 = at("0");
        let d1 = at("1/2");
        let d2 = at("3/4");
        assert_eq!(d0.len(), 2);
        for i in 0..d0.len() {
            assert!(d0[i] > d1[i] && d1[i] > d2[i]);
        }
    }

    #[test]
    fn pair_validation() {
        // Color indexed by a simple root of I.
        let bad = HorosphericalPair::parse(
            r#"{
              "root_system": "A2",
              "parabolic_I": ["a1"],
              "fan": {"rank": 1, "rays": [[1]], "cones": [[0]]},
              "colors": [{"alpha": "a1", "point": [1], "cones": []}],
              "d_G": ["0"],
              "d_B": {}
            }"#,
        );
        assert!(bad.is_err());
        // d_G length mismatch.
        let bad = HorosphericalPair::parse(
            r#"{
              "root_system": "A2",
              "parabolic_I": ["a1"],
              "fan": {"rank": 1, "rays": [[1]], "cones": [[0]]},
              "d_G": [],
              "d_B": {}
            }"#,
        );
        assert_eq!(bad.unwrap_err(), Error::DimensionMismatch);
        // Color point outside its declared cone.
        let bad = HorosphericalPair::parse(
            r#"{
              "root_system": "A2",
              "parabolic_I": ["a1"],
              "fan": {"rank": 2, "rays": [[1,0],[0,1]], "cones": [[0,1]]},
              "colors": [{"alpha": "a2", "point": [-1,-1], "cones": [0]}],
              "d_G": ["0","0"],
              "d_B": {}
            }"#,
        );
        assert!(matches!(bad, Err(Error::InvalidFan(_))));
        // Out-of-range coefficient.
        let bad = HorosphericalPair::parse(
            r#"{
              "root_system": "A1",
              "parabolic_I": [],
              "fan": {"rank": 1, "rays": [[1]], "cones": [[0]]},
              "d_G": ["3/2"],
              "d_B": {}
            }"#,
        );
        assert!(matches!(bad, Err(Error::CoefficientOutOfRange(_))));
    }
}
