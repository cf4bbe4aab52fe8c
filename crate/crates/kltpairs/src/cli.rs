//! The `kltpairs` command-line interface. Output on stdout is byte
//! deterministic; timing and diagnostics go to stderr.
//!
//! Exit codes: 0 success, 1 failed verification or non-Q-Cartier input,
//! 2 invalid input.

use crate::flagklt::{flag_discrepancies_for_word, is_klt_flag, FlagBoundary};
use crate::horoklt::{
    horospherical_discrepancies, is_klt_horospherical, verdict_to_json, HorosphericalPair,
};
use crate::oracle::{run_sweep, DEFAULT_SWEEP};
use crate::rootcore::{datum_from_str, parse_simple, RootDatum, WeylWord};
use crate::toricres::{resolve_fan, toric_discrepancies, FanFile};
use crate::{parse_rat, rat_to_string, Error, Rat, Result};
use clap::{Parser, Subcommand};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Parser)]
#[command(name = "kltpairs", version, about = "Exact klt verdicts for B-stable pairs on flag and horospherical varieties")]
pub struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Positive roots, coroots, and fundamental weights of a root system.
    Roots {
        /// Root system, e.g. A3, B2xA1, G2.
        root_system: String,
    },
    /// Parabolic data: Levi roots, 2 rho^P, and the pinned coset word.
    Parabolic {
        root_system: String,
        /// Simple roots of the Levi, e.g. --I a1,a3.
        #[arg(long = "I", value_delimiter = ',', num_args = 0..)]
        i: Vec<String>,
    },
    /// Bott-Samelson beta-sequence and discrepancy ledger.
    Bs {
        root_system: String,
        #[arg(long = "I", value_delimiter = ',', num_args = 0..)]
        i: Vec<String>,
        /// Reduced word, e.g. --word s2,s1 (default: the pinned coset word).
        #[arg(long, value_delimiter = ',')]
        word: Option<Vec<String>>,
        /// Boundary coefficients, e.g. --d a2=1/2 (repeatable).
        #[arg(long = "d")]
        d: Vec<String>,
    },
    /// klt verdict for (G/P, D).
    KltFlag {
        root_system: String,
        #[arg(long = "I", value_delimiter = ',', num_args = 0..)]
        i: Vec<String>,
        #[arg(long = "d")]
        d: Vec<String>,
    },
    /// Smooth subdivision of a fan from a JSON file; with "d" present,
    /// also the toric discrepancy ledger.
    ResolveFan {
        /// Path to a fan file {rank, rays, cones, d?}.
        file: String,
    },
    /// klt verdict for a horospherical pair from a JSON file.
    KltHoro {
        /// Path to a pair file.
        file: String,
    },
    /// Root-system verification sweep.
    Verify {
        /// Root systems to sweep (default: the standard list).
        #[arg(long, value_delimiter = ',')]
        types: Option<Vec<String>>,
    },
}

fn parse_i_set(datum: &RootDatum, names: &[String]) -> Result<BTreeSet<usize>> {
    names
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_simple(s, datum.rank()))
        .collect()
}

fn parse_d(datum: &RootDatum, specs: &[String]) -> Result<BTreeMap<usize, Rat>> {
    let mut out = BTreeMap::new();
    for spec in specs {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected a<k>=p/q, got {spec:?}")))?;
        let idx = parse_simple(name, datum.rank())?;
        if out.insert(idx, parse_rat(value)?).is_some() {
            return Err(Error::Parse(format!("duplicate coefficient for {name}")));
        }
    }
    Ok(out)
}

fn parse_word(datum: &RootDatum, letters: &[String]) -> Result<WeylWord> {
    let letters = letters
        .iter()
        .map(|s| {
            let t = s.trim();
            let k: usize = t
                .strip_prefix(['s', 'S'])
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| Error::Parse(format!("expected a letter like \"s1\", got {s:?}")))?;
            if k == 0 || k > datum.rank() {
                return Err(Error::Parse(format!("letter {t:?} out of range")));
            }
            Ok(k - 1)
        })
        .collect::<Result<Vec<usize>>>()?;
    Ok(WeylWord::new(letters))
}

fn rats(values: &[Rat]) -> Vec<String> {
    values.iter().map(rat_to_string).collect()
}

fn cmd_roots(root_system: &str, json: bool) -> Result<String> {
    let datum = datum_from_str(root_system)?;
    if json {
        let fw: Vec<Vec<String>> = (0..datum.rank())
            .map(|i| rats(datum.fundamental_weight(i).root_coords()))
            .collect();
        Ok(serde_json::to_string_pretty(&serde_json::json!({
            "root_system": root_system,
            "rank": datum.rank(),
            "cartan": datum.cartan(),
            "positive_roots": datum.positive_roots(),
            "positive_coroots": datum.positive_coroots(),
            "fundamental_weights": fw,
        }))
        .expect("serializable"))
    } else {
        let mut out = format!("{root_system}: rank {}\n", datum.rank());
        out.push_str(&format!("{} positive roots (root / coroot):\n", datum.num_positive_roots()));
        for (r, c) in datum.positive_roots().iter().zip(datum.positive_coroots()) {
            out.push_str(&format!("  {r:?}  /  {c:?}\n"));
        }
        out.push_str("fundamental weights (simple-root basis):\n");
        for i in 0..datum.rank() {
            out.push_str(&format!(
                "  varpi_{}: [{}]\n",
                i + 1,
                rats(datum.fundamental_weight(i).root_coords()).join(", ")
            ));
        }
        Ok(out)
    }
}

fn cmd_parabolic(root_system: &str, i: &[String], json: bool) -> Result<String> {
    let datum = datum_from_str(root_system)?;
    let i_set = parse_i_set(&datum, i)?;
    let p = datum.parabolic(&i_set)?;
    let levi: Vec<&Vec<i64>> = p
        .levi_positive_roots
        .iter()
        .map(|&k| &datum.positive_roots()[k])
        .collect();
    let two_rho_superp = rats(&datum.to_fundamental(&p.two_rho_superp));
    if json {
        Ok(serde_json::to_string_pretty(&serde_json::json!({
            "root_system": root_system,
            "I": i_set.iter().map(|&k| format!("a{}", k + 1)).collect::<Vec<_>>(),
            "levi_positive_roots": levi,
            "two_rho_superP_fundamental": two_rho_superp,
            "w0P_word": p.w0p_word.to_string(),
            "w0_levi_word": p.w0_levi_word.to_string(),
            "dim_G_over_P": p.w0p_word.len(),
        }))
        .expect("serializable"))
    } else {
        Ok(format!(
            "I = {{{}}}\nR+_I = {levi:?}\n2 rho^P (fundamental basis) = [{}]\nw0P word = {}\nw_(0,P) word = {}\ndim G/P = {}\n",
            i_set
                .iter()
                .map(|&k| format!("a{}", k + 1))
                .collect::<Vec<_>>()
                .join(","),
            two_rho_superp.join(", "),
            p.w0p_word,
            p.w0_levi_word,
            p.w0p_word.len(),
        ))
    }
}

fn cmd_bs(
    root_system: &str,
    i: &[String],
    word: Option<&[String]>,
    d: &[String],
    json: bool,
) -> Result<String> {
    let datum = datum_from_str(root_system)?;
    let i_set = parse_i_set(&datum, i)?;
    let p = datum.parabolic(&i_set)?;
    let boundary = FlagBoundary::new(parse_d(&datum, d)?)?;
    let word = match word {
        Some(letters) => parse_word(&datum, letters)?,
        None => p.w0p_word.clone(),
    };
    let ledger = flag_discrepancies_for_word(&datum, &p, &boundary, &word)?;
    if json {
        Ok(serde_json::to_string_pretty(&serde_json::json!({
            "word": word.to_string(),
            "ledger": ledger.to_json(&datum),
            "min_discrepancy": ledger.min_discrepancy().map(|m| rat_to_string(&m)),
        }))
        .expect("serializable"))
    } else {
        let mut out = format!("word = {word}\n");
        for e in &ledger.entries {
            out.push_str(&format!(
                "  {}: beta = {:?}, discrepancy = {}{}\n",
                e.label,
                datum.positive_roots()[e.beta_index],
                rat_to_string(&e.discrepancy),
                if e.contracted { " (contracted)" } else { "" },
            ));
        }
        if let Some(m) = ledger.min_discrepancy() {
            out.push_str(&format!("min discrepancy = {}\n", rat_to_string(&m)));
        }
        Ok(out)
    }
}

fn cmd_klt_flag(root_system: &str, i: &[String], d: &[String], json: bool) -> Result<String> {
    let datum = datum_from_str(root_system)?;
    let i_set = parse_i_set(&datum, i)?;
    let p = datum.parabolic(&i_set)?;
    let boundary = FlagBoundary::new(parse_d(&datum, d)?)?;
    let verdict = is_klt_flag(&datum, &p, &boundary)?;
    if json {
        Ok(serde_json::to_string_pretty(&serde_json::json!({
            "klt": verdict.klt,
            "witness": verdict.witness.as_ref().map(|w| serde_json::json!({
                "beta": datum.positive_roots()[w.beta_index],
                "pairing": rat_to_string(&w.pairing),
            })),
        }))
        .expect("serializable"))
    } else {
        match &verdict.witness {
            None => Ok("klt: yes\n".into()),
            Some(w) => Ok(format!(
                "klt: no (beta = {:?} pairs to {})\n",
                datum.positive_roots()[w.beta_index],
                rat_to_string(&w.pairing)
            )),
        }
    }
}

fn cmd_resolve_fan(path: &str, json: bool) -> Result<String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
    let (fan, d) = FanFile::parse(&text)?;
    let (resolved, provenance) = resolve_fan(&fan)?;
    let disc = match &d {
        Some(d) => Some(toric_discrepancies(&fan, &resolved, &provenance, d)?),
        None => None,
    };
    if json {
        Ok(serde_json::to_string_pretty(&serde_json::json!({
            "rank": resolved.rank(),
            "rays": resolved.rays(),
            "cones": resolved.cones(),
            "provenance": provenance
                .iter()
                .map(|(&r, &c)| serde_json::json!({"ray": r, "cone": c}))
                .collect::<Vec<_>>(),
            "ledger": disc.as_ref().map(|t| t.ledger.to_json()),
            "strictly_effective": disc.as_ref().map(|t| t.strictly_effective),
        }))
        .expect("serializable"))
    } else {
        let mut out = format!(
            "resolved: {} rays, {} cones\n",
            resolved.rays().len(),
            resolved.cones().len()
        );
        for (&r, &c) in &provenance {
            out.push_str(&format!(
                "  new ray {:?} from cone {c}\n",
                resolved.rays()[r]
            ));
        }
        if let Some(t) = &disc {
            for e in &t.ledger.entries {
                out.push_str(&format!("  {}: {}\n", e.id, rat_to_string(&e.discrepancy)));
            }
            out.push_str(&format!("strictly effective: {}\n", t.strictly_effective));
        }
        Ok(out)
    }
}

fn cmd_klt_horo(path: &str, json: bool) -> Result<String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
    let pair = HorosphericalPair::parse(&text)?;
    let horo = horospherical_discrepancies(&pair)?;
    let verdict = is_klt_horospherical(&pair)?;
    if json {
        Ok(
            serde_json::to_string_pretty(&verdict_to_json(&verdict, &horo.ledger))
                .expect("serializable"),
        )
    } else {
        let mut out = String::new();
        for e in &horo.ledger.entries {
            out.push_str(&format!(
                "  {} [{}]: {}\n",
                e.id,
                e.kind.as_str(),
                rat_to_string(&e.discrepancy)
            ));
        }
        out.push_str(&format!(
            "klt: {}\nconsistent: {}\nstrictly effective: {}\n",
            if verdict.klt { "yes" } else { "no" },
            verdict.consistent,
            verdict.strictly_effective
        ));
        Ok(out)
    }
}

fn cmd_verify(types: Option<&[String]>, json: bool) -> Result<(String, bool)> {
    let owned: Vec<String>;
    let types: Vec<&str> = match types {
        Some(t) => {
            owned = t.to_vec();
            owned.iter().map(String::as_str).collect()
        }
        None => DEFAULT_SWEEP.to_vec(),
    };
    let start = std::time::Instant::now();
    let report = run_sweep(&types)?;
    eprintln!("sweep took {:?}", start.elapsed());
    let out = if json {
        serde_json::to_string_pretty(&report.to_json()).expect("serializable")
    } else {
        report.to_table()
    };
    Ok((out, report.all_passed()))
}

/// Runs the CLI; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let json = cli.json;
    let result: Result<(String, i32)> = match &cli.cmd {
        Command::Roots { root_system } => cmd_roots(root_system, json).map(|s| (s, 0)),
        Command::Parabolic { root_system, i } => {
            cmd_parabolic(root_system, i, json).map(|s| (s, 0))
        }
        Command::Bs {
            root_system,
            i,
            word,
            d,
        } => cmd_bs(root_system, i, word.as_deref(), d, json).map(|s| (s, 0)),
        Command::KltFlag { root_system, i, d } => {
            cmd_klt_flag(root_system, i, d, json).map(|s| (s, 0))
        }
        Command::ResolveFan { file } => cmd_resolve_fan(file, json).map(|s| (s, 0)),
        Command::KltHoro { file } => cmd_klt_horo(file, json).map(|s| (s, 0)),
        Command::Verify { types } => {
            cmd_verify(types.as_deref(), json).map(|(s, ok)| (s, i32::from(!ok)))
        }
    };
    match result {
        Ok((out, code)) => {
            print!("{out}");
            if json && !out.ends_with('\n') {
                println!();
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NotQCartier(_) => 1,
                _ => 2,
            }
        }
    }
}
