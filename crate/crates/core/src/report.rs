//! Machine-readable certification reports.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::rational::{fmt_rational, Rational};

/// Placeholder for `expected` when a quantity has no reference value.
pub const NO_REFERENCE: &str = "none";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub name: String,
    pub anchor: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub claims: Vec<Claim>,
    pub details: BTreeMap<String, String>,
    pub all_pass: bool,
}

/// SHA-256 over the length-prefixed inputs, hex encoded.
pub fn digest(inputs: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for i in inputs {
        h.update((i.len() as u64).to_le_bytes());
        h.update(i);
    }
    hex::encode(h.finalize())
}

impl Report {
    pub fn new(command: impl Into<String>, inputs: &[&[u8]]) -> Self {
        Report {
            command: command.into(),
            inputs_digest: digest(inputs),
            seed: None,
            claims: Vec::new(),
            details: BTreeMap::new(),
            all_pass: true,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn claim(
        &mut self,
        name: &str,
        anchor: &str,
        expected: String,
        computed: String,
        pass: bool,
    ) {
        self.all_pass &= pass;
        self.claims.push(Claim {
            name: name.into(),
            anchor: anchor.into(),
            expected,
            computed,
            pass,
        });
    }

    /// Exact equality claim between rationals.
    pub fn claim_eq(&mut self, name: &str, anchor: &str, expected: &Rational, computed: &Rational) {
        self.claim(
            name,
            anchor,
            fmt_rational(expected),
            fmt_rational(computed),
            expected == computed,
        );
    }

    /// Claim that `hits` out of `total` checks passed.
    pub fn claim_count(&mut self, name: &str, anchor: &str, hits: usize, total: usize) {
        self.claim(
            name,
            anchor,
            format!("{total}/{total}"),
            format!("{hits}/{total}"),
            hits == total,
        );
    }

    pub fn detail(&mut self, key: &str, value: impl Into<String>) {
        self.details.insert(key.into(), value.into());
    }

    pub fn first_failure(&self) -> Option<&Claim> {
        self.claims.iter().find(|c| !c.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
