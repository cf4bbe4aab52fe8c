//! The universal output shape: a labeled list of (divisor id, exact rational
//! discrepancy) entries.

use crate::{rat_to_string, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivisorKind {
    /// Exceptional divisor coming from the toric resolution (Z x^P Y_i).
    ToricExceptional,
    /// Exceptional divisor coming from the Bott-Samelson part (F_i x^P Y).
    FlagExceptional,
}

impl DivisorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DivisorKind::ToricExceptional => "toric-exceptional",
            DivisorKind::FlagExceptional => "flag-exceptional",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    pub id: String,
    pub kind: DivisorKind,
    pub discrepancy: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiscrepancyLedger {
    pub entries: Vec<LedgerEntry>,
}

impl DiscrepancyLedger {
    pub fn min(&self) -> Option<Rat> {
        self.entries.iter().map(|e| e.discrepancy).min()
    }

    pub fn merge(mut self, other: DiscrepancyLedger) -> DiscrepancyLedger {
        self.entries.extend(other.entries);
        debug_assert!(
            {
                let mut ids: Vec<&str> = self.entries.iter().map(|e| e.id.as_str()).collect();
                ids.sort_unstable();
                ids.windows(2).all(|w| w[0] != w[1])
            },
            "ledger ids must be unique"
        );
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "divisor": e.id,
                        "kind": e.kind.as_str(),
                        "discrepancy": rat_to_string(&e.discrepancy),
                    })
                })
                .collect(),
        )
    }
}
