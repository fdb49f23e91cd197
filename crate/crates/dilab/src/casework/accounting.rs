//! Edge-accounting inequalities, normalised by n.
//!
//! Symbols: `m` filament count, `p0`, `q0`, `r0` the edge counts of the accounting
//! lemma, `p'` and `q'` the primed counts.

use serde::Serialize;

use super::{CaseError, Constraint};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Accounting {
    Basic,
    OneA,
    OneB { kappa: f64 },
    TwoA,
    TwoB { kappa1: f64, kappa2: f64 },
}

fn check_kappa(k: f64) -> Result<(), CaseError> {
    if (-1.0..=2.0).contains(&k) {
        Ok(())
    } else {
        Err(CaseError::Domain(format!("kappa must lie in [-1, 2], got {k}")))
    }
}

fn row(terms: &[(&str, f64)]) -> Constraint {
    Constraint::new(terms.iter().map(|&(s, c)| (s, c)), 1.0)
}

pub fn accounting_constraints(kind: Accounting) -> Result<Vec<Constraint>, CaseError> {
    Ok(match kind {
        Accounting::Basic => vec![row(&[("m", 1.0)]), row(&[("p0", 1.0), ("q0", 1.0), ("r0", 1.0)])],
        Accounting::OneA => vec![row(&[("p0", 1.0), ("q0", 1.0), ("p'", 1.0 / 3.0)])],
        Accounting::OneB { kappa } => {
            check_kappa(kappa)?;
            vec![row(&[
                ("p0", kappa - 1.0),
                ("q0", 1.0),
                ("r0", 1.0),
                ("p'", (2.0 - kappa) / 3.0),
            ])]
        }
        Accounting::TwoA => vec![row(&[("p0", 1.0), ("q0", 1.0), ("p'", 1.0 / 3.0), ("q'", 1.0 / 3.0)])],
        Accounting::TwoB { kappa1, kappa2 } => {
            check_kappa(kappa1)?;
            check_kappa(kappa2)?;
            vec![row(&[
                ("p0", kappa1 - 1.0),
                ("q0", kappa2 - 1.0),
                ("r0", 1.0),
                ("p'", (2.0 - kappa1) / 3.0),
                ("q'", (2.0 - kappa2) / 3.0),
            ])]
        }
    })
}
