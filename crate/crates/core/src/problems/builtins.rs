use super::{bit_oracle, OracleAction, OracleProblem, OracleSpec, Prior};
use crate::hspkit::{FiniteAbelianGroup, HiddenSubgroupInstance, Subgroup};
use crate::{limits, Error, Result};

fn check_range(what: &'static str, value: usize, lo: usize, hi: usize) -> Result<()> {
    if value < lo || value > hi {
        return Err(Error::OutOfRange {
            what,
            value,
            range: format!("{lo}..={hi}"),
        });
    }
    Ok(())
}

fn bitstring(value: usize, width: usize) -> String {
    (0..width)
        .rev()
        .map(|b| if value >> b & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Deutsch-Jozsa on `k` input bits: the two constant functions (class
/// `constant`) and every balanced function (class `balanced`), in
/// lexicographic truth-table order, with the partition-uniform prior.
pub fn build_dj(k: usize) -> Result<OracleProblem> {
    check_range("Deutsch-Jozsa input bits", k, 1, limits::current().dj_max_k)?;
    let inputs = 1usize << k;
    let half = (inputs / 2) as u32;
    let mut oracles = Vec::new();
    // Bit x of the truth table is f(x), with f(0) most significant.
    for code in 0u64..1 << inputs {
        let ones = code.count_ones();
        let class = if ones == 0 || ones == inputs as u32 {
            0
        } else if ones == half {
            1
        } else {
            continue;
        };
        let table: Vec<u64> = (0..inputs).map(|x| code >> (inputs - 1 - x) & 1).collect();
        oracles.push(OracleSpec {
            id: bitstring(code as usize, inputs),
            class,
            action: bit_oracle(k, 1, &table)?,
        });
    }
    OracleProblem::finite(
        format!("dj-{k}"),
        vec![2; k + 1],
        vec!["constant".into(), "balanced".into()],
        oracles,
        Prior::PartitionUniform,
    )
}

/// Bernstein-Vazirani on `n` bits: `f_a(x) = a·x mod 2`, one class per `a`.
pub fn build_bv(n: usize) -> Result<OracleProblem> {
    check_range("Bernstein-Vazirani bits", n, 1, limits::current().bv_max_n)?;
    let size = 1usize << n;
    let oracles = (0..size)
        .map(|a| {
            let table: Vec<u64> = (0..size)
                .map(|x| ((a & x).count_ones() % 2) as u64)
                .collect();
            Ok(OracleSpec {
                id: bitstring(a, n),
                class: a,
                action: bit_oracle(n, 1, &table)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    OracleProblem::finite(
        format!("bv-{n}"),
        vec![2; n + 1],
        (0..size).map(|a| bitstring(a, n)).collect(),
        oracles,
        Prior::UniformOverF,
    )
}

/// `|g>|y> -> |g>|y + f(g)>` where `f` is constant on cosets of `subgroup`
/// and `labels[c]` is the value on the `c`-th coset (cosets ordered by their
/// smallest element). Distinct labels make `f` hide exactly `subgroup`.
pub fn hsp_oracle(
    group: &FiniteAbelianGroup,
    subgroup: &Subgroup,
    labels: &[usize],
) -> Result<OracleAction> {
    let order = group.order();
    limits::check_dim(order.saturating_mul(order))?;
    let mut coset_of = vec![usize::MAX; order];
    let mut cosets = 0;
    for g in group.elements() {
        if coset_of[g] == usize::MAX {
            for &h in subgroup.elements() {
                coset_of[group.add(g, h)] = cosets;
            }
            cosets += 1;
        }
    }
    if labels.len() != cosets {
        return Err(Error::InvalidProblem(format!(
            "{} labels for {cosets} cosets",
            labels.len()
        )));
    }
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != labels.len() || sorted.last().is_some_and(|&l| l >= order) {
        return Err(Error::InvalidProblem(
            "coset labels must be distinct group elements".into(),
        ));
    }
    Ok(OracleAction::Permutation(
        (0..order * order)
            .map(|i| {
                let (g, y) = (i / order, i % order);
                g * order + group.add(y, labels[coset_of[g]])
            })
            .collect(),
    ))
}

/// One representative oracle per hidden subgroup: `f(g)` is the smallest
/// element of `g + H`. The register is the group followed by an output copy
/// of the group.
pub fn build_hsp(
    name: impl Into<String>,
    instance: HiddenSubgroupInstance,
) -> Result<OracleProblem> {
    let group = instance.group();
    let oracles = instance
        .subgroups()
        .iter()
        .enumerate()
        .map(|(j, h)| {
            let mut reps: Vec<usize> = Vec::new();
            for g in group.elements() {
                if h.elements().iter().all(|&x| group.add(g, x) >= g) {
                    reps.push(g);
                }
            }
            Ok(OracleSpec {
                id: format!("H{j}"),
                class: j,
                action: hsp_oracle(group, h, &reps)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let dims = instance.register_dims().repeat(2);
    let names = (0..instance.subgroups().len())
        .map(|j| format!("H{j}"))
        .collect();
    Ok(OracleProblem::finite(
        name,
        dims,
        names,
        oracles,
        Prior::Custom(instance.priors().to_vec()),
    )?
    .with_hidden_subgroups(instance))
}

/// Simon's problem on `n` bits, one class per `s` (including `s = 0`),
/// uniform over `s`, with representative oracle `f_s(x) = min(x, x ⊕ s)`.
pub fn build_simon(n: usize) -> Result<OracleProblem> {
    check_range("Simon bits", n, 2, limits::current().simon_max_n)?;
    let instance = HiddenSubgroupInstance::simon(n)?;
    let size = 1usize << n;
    let oracles = (0..size)
        .map(|s| {
            let table: Vec<u64> = (0..size).map(|x| x.min(x ^ s) as u64).collect();
            Ok(OracleSpec {
                id: bitstring(s, n),
                class: s,
                action: bit_oracle(n, n, &table)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleProblem::finite(
        format!("simon-{n}"),
        vec![2; 2 * n],
        (0..size).map(|s| bitstring(s, n)).collect(),
        oracles,
        Prior::UniformOverF,
    )?
    .with_hidden_subgroups(instance))
}
