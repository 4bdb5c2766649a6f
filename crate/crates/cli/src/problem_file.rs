//! Plain-text oracle problem files.
//!
//! ```text
//! # comments run to the end of a line
//! name = toy
//! m = 2              # input bits
//! r = 1              # output bits (default 1)
//! prior = partition  # uniform | partition | weights
//! algorithm = kickback   # kickback | sandwich
//! ---
//! c0 constant 0000
//! b3 balanced 0011
//! ```
//!
//! Each oracle line is `id class truth_table [weight]`. The truth table lists
//! `f(x)` for `x = 0, 1, ...` either as one digit per input (`0110`) or as
//! comma-separated integers (`0,3,1,2`). Weights are required with
//! `prior = weights` and rejected otherwise.

use std::collections::HashSet;

use infolab::problems::{from_truth_tables, Prior, TruthTableOracle};
use infolab::{AlgorithmSpec, OracleProblem};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// `|0^m>|1^r>`, Hadamards everywhere before the query, on the inputs after.
    Kickback,
    /// `|0^m>|0^r>`, Hadamards on the inputs before and after the query.
    Sandwich,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub name: String,
    pub inputs: usize,
    pub outputs: usize,
    pub prior: PriorKind,
    pub algorithm: Algorithm,
    pub oracles: Vec<TruthTableOracle>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorKind {
    Uniform,
    Partition,
    Weights,
}

fn config(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("problem file line {line}: {msg}"))
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_table(line: usize, text: &str, inputs: usize) -> Result<Vec<u64>, CliError> {
    let values: Vec<u64> = if text.contains(',') {
        text.split(',')
            .map(|v| {
                v.trim()
                    .parse::<u64>()
                    .map_err(|e| config(line, format!("bad table entry {v:?}: {e}")))
            })
            .collect::<Result<_, _>>()?
    } else {
        text.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(u64::from)
                    .ok_or_else(|| config(line, format!("bad table digit {c:?}")))
            })
            .collect::<Result<_, _>>()?
    };
    let expected = 1usize << inputs;
    if values.len() != expected {
        return Err(config(
            line,
            format!(
                "truth table has {} entries, expected {expected}",
                values.len()
            ),
        ));
    }
    Ok(values)
}

pub fn parse(text: &str) -> Result<ProblemFile, CliError> {
    let mut name = None;
    let mut inputs = None;
    let mut outputs = 1;
    let mut prior = PriorKind::Uniform;
    let mut algorithm = Algorithm::Kickback;
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)));
    let mut separator = false;
    for (no, line) in lines.by_ref() {
        if line.is_empty() {
            continue;
        }
        if line == "---" {
            separator = true;
            break;
        }
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| config(no, "expected `key = value`"))?;
        match key {
            "name" => name = Some(value.to_string()),
            "m" => inputs = Some(value.parse::<usize>().map_err(|e| config(no, e))?),
            "r" => outputs = value.parse::<usize>().map_err(|e| config(no, e))?,
            "prior" => {
                prior = match value {
                    "uniform" => PriorKind::Uniform,
                    "partition" => PriorKind::Partition,
                    "weights" => PriorKind::Weights,
                    other => return Err(config(no, format!("unknown prior {other:?}"))),
                }
            }
            "algorithm" => {
                algorithm = match value {
                    "kickback" => Algorithm::Kickback,
                    "sandwich" => Algorithm::Sandwich,
                    other => return Err(config(no, format!("unknown algorithm {other:?}"))),
                }
            }
            other => return Err(config(no, format!("unknown key {other:?}"))),
        }
    }
    if !separator {
        return Err(CliError::Config(
            "problem file has no `---` line after the header".into(),
        ));
    }
    let inputs = inputs.ok_or_else(|| CliError::Config("problem file header lacks `m`".into()))?;
    if !(1..=16).contains(&inputs) || !(1..=16).contains(&outputs) {
        return Err(CliError::Config("`m` and `r` must lie in 1..=16".into()));
    }
    let mut oracles = Vec::new();
    let mut ids = HashSet::new();
    for (no, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let weight = match (fields.len(), prior) {
            (3, PriorKind::Weights) => return Err(config(no, "missing weight")),
            (3, _) => None,
            (4, PriorKind::Weights) => Some(fields[3].parse::<f64>().map_err(|e| config(no, e))?),
            (4, _) => return Err(config(no, "weights need `prior = weights`")),
            _ => return Err(config(no, "expected `id class truth_table [weight]`")),
        };
        if !ids.insert(fields[0].to_string()) {
            return Err(config(no, format!("duplicate oracle id {:?}", fields[0])));
        }
        oracles.push(TruthTableOracle {
            id: fields[0].to_string(),
            class: fields[1].to_string(),
            table: parse_table(no, fields[2], inputs)?,
            weight,
        });
    }
    if oracles.is_empty() {
        return Err(CliError::Config("problem file lists no oracles".into()));
    }
    Ok(ProblemFile {
        name: name.unwrap_or_else(|| "custom".into()),
        inputs,
        outputs,
        prior,
        algorithm,
        oracles,
    })
}

impl ProblemFile {
    pub fn build(&self) -> Result<(OracleProblem, AlgorithmSpec), CliError> {
        let prior = match self.prior {
            PriorKind::Uniform => Prior::UniformOverF,
            PriorKind::Partition => Prior::PartitionUniform,
            PriorKind::Weights => Prior::Custom(vec![]),
        };
        let problem = from_truth_tables(
            self.name.clone(),
            self.inputs,
            self.outputs,
            &self.oracles,
            prior,
        )?;
        let spec = match self.algorithm {
            Algorithm::Kickback => AlgorithmSpec::kickback(self.inputs, self.outputs)?,
            Algorithm::Sandwich => AlgorithmSpec::hadamard_sandwich(self.inputs, self.outputs)?,
        };
        Ok((problem, spec))
    }
}
