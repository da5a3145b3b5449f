//! Law reports shared by every checker in the crate.
//!
//! A checker records each named law it evaluates, how many instances it
//! tried, and up to [`MAX_WITNESSES`] counterexamples. Violations past that
//! cap are counted but not stored.

use std::fmt;

pub const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawOutcome {
    pub law: String,
    pub checked: usize,
    pub failed: usize,
    pub witnesses: Vec<String>,
}

impl LawOutcome {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LawReport {
    laws: Vec<LawOutcome>,
}

/// A single counterexample, flattened from a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub law: String,
    pub witness: String,
}

impl LawReport {
    pub fn new() -> Self {
        Self::default()
    }

    fn slot(&mut self, law: &str) -> &mut LawOutcome {
        if let Some(i) = self.laws.iter().position(|l| l.law == law) {
            &mut self.laws[i]
        } else {
            self.laws.push(LawOutcome {
                law: law.to_string(),
                checked: 0,
                failed: 0,
                witnesses: Vec::new(),
            });
            self.laws.last_mut().unwrap()
        }
    }

    /// Records one instance of `law`. The witness closure only runs on failure.
    pub fn check(&mut self, law: &str, ok: bool, witness: impl FnOnce() -> String) {
        let slot = self.slot(law);
        slot.checked += 1;
        if !ok {
            slot.failed += 1;
            if slot.witnesses.len() < MAX_WITNESSES {
                slot.witnesses.push(witness());
            }
        }
    }

    /// Registers a law with zero instances so it still shows up in listings.
    pub fn declare(&mut self, law: &str) {
        self.slot(law);
    }

    pub fn merge(&mut self, other: LawReport) {
        for o in other.laws {
            let slot = self.slot(&o.law);
            slot.checked += o.checked;
            slot.failed += o.failed;
            for w in o.witnesses {
                if slot.witnesses.len() < MAX_WITNESSES {
                    slot.witnesses.push(w);
                }
            }
        }
    }

    /// Merges `other` with every law name prefixed by `prefix: `.
    pub fn merge_prefixed(&mut self, prefix: &str, other: LawReport) {
        let renamed = LawReport {
            laws: other
                .laws
                .into_iter()
                .map(|mut l| {
                    l.law = format!("{prefix}: {}", l.law);
                    l
                })
                .collect(),
        };
        self.merge(renamed);
    }

    pub fn is_ok(&self) -> bool {
        self.laws.iter().all(LawOutcome::passed)
    }

    pub fn laws(&self) -> &[LawOutcome] {
        &self.laws
    }

    pub fn law(&self, name: &str) -> Option<&LawOutcome> {
        self.laws.iter().find(|l| l.law == name)
    }

    pub fn total_checked(&self) -> usize {
        self.laws.iter().map(|l| l.checked).sum()
    }

    pub fn total_failed(&self) -> usize {
        self.laws.iter().map(|l| l.failed).sum()
    }

    pub fn violations(&self) -> Vec<Violation> {
        self.laws
            .iter()
            .flat_map(|l| {
                l.witnesses.iter().map(move |w| Violation {
                    law: l.law.clone(),
                    witness: w.clone(),
                })
            })
            .collect()
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.laws {
            let verdict = if l.passed() { "pass" } else { "FAIL" };
            writeln!(
                f,
                "{verdict:4}  {:<48} {:>9} checked {:>6} failed",
                l.law, l.checked, l.failed
            )?;
            for w in &l.witnesses {
                writeln!(f, "        witness: {w}")?;
            }
        }
        Ok(())
    }
}
