use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{character_table, FiniteAbelianGroup, HiddenSubgroupInstance, Subgroup};
use crate::densemat::spectral_entropy;
use crate::infometrics::MetricsRow;
use crate::{limits, Error, Result};

/// Eigenvalues of `ρ_Y = Σ_j p_j σ_j` at the final stage, indexed by character:
/// `λ_χ = (1/|G|) Σ_{j : χ ∈ H_j^⊥} p_j |H_j|`.
pub fn lambda_spectrum(
    group: &FiniteAbelianGroup,
    subgroups: &[Subgroup],
    priors: &[f64],
) -> Result<Vec<f64>> {
    lambda_spectrum_t(group, subgroups, priors, 1)
}

/// The same eigenvalues for a uniform prior, read off the character table:
/// `λ_χ = <c|v_χ> / (sqrt|G| |J|)` where `c_g` counts the subgroups
/// containing `g` and `v_χ` is the normalized conjugated table row.
pub fn lambda_spectrum_character_form(
    group: &FiniteAbelianGroup,
    subgroups: &[Subgroup],
) -> Result<Vec<f64>> {
    let table = character_table(group)?;
    let n = group.order();
    let mut counts = vec![0.0; n];
    for h in subgroups {
        for &g in h.elements() {
            counts[g] += 1.0;
        }
    }
    let norm = 1.0 / (n as f64).sqrt();
    let scale = 1.0 / ((n as f64).sqrt() * subgroups.len() as f64);
    Ok((0..n)
        .map(|chi| {
            let overlap: Complex64 = (0..n)
                .map(|g| table[(chi, g)].conj() * norm * counts[g])
                .sum();
            overlap.re * scale
        })
        .collect())
}

/// Bitset over class indices.
type ClassMask = Vec<u64>;

fn class_masks(instance: &HiddenSubgroupInstance) -> Vec<ClassMask> {
    let classes = instance.subgroups().len();
    let words = classes.div_ceil(64);
    instance
        .group()
        .elements()
        .map(|chi| {
            let mut mask = vec![0u64; words];
            for (j, perp) in instance.annihilators().iter().enumerate() {
                if perp.contains(chi) {
                    mask[j / 64] |= 1 << (j % 64);
                }
            }
            mask
        })
        .collect()
}

/// `Σ_{j ∈ mask} p_j (|H_j|/|G|)^t`.
fn mask_eigenvalue(instance: &HiddenSubgroupInstance, mask: &[u64], t: usize) -> f64 {
    let g = instance.group().order() as f64;
    instance
        .subgroups()
        .iter()
        .zip(instance.priors())
        .enumerate()
        .filter(|(j, _)| mask[j / 64] >> (j % 64) & 1 == 1)
        .map(|(_, (h, &p))| p * (h.order() as f64 / g).powi(t as i32))
        .sum()
}

fn instance_from(
    group: &FiniteAbelianGroup,
    subgroups: &[Subgroup],
    priors: &[f64],
) -> Result<HiddenSubgroupInstance> {
    HiddenSubgroupInstance::new(group.clone(), subgroups.to_vec(), priors.to_vec())
}

fn check_spectrum_size(group: &FiniteAbelianGroup, t: usize) -> Result<usize> {
    if t == 0 {
        return Err(Error::OutOfRange {
            what: "query count",
            value: 0,
            range: ">= 1".into(),
        });
    }
    let cap = limits::current().spectrum_cap;
    let size = (0..t).try_fold(1usize, |acc, _| acc.checked_mul(group.order()));
    match size {
        Some(s) if s <= cap => Ok(s),
        _ => Err(Error::DimensionCap {
            requested: size.unwrap_or(usize::MAX),
            cap,
        }),
    }
}

/// Stream `λ(χ_1, ..., χ_t)` over all character tuples in lexicographic
/// order (`χ_1` most significant), without materializing the spectrum.
pub fn for_each_spectrum_entry_t(
    instance: &HiddenSubgroupInstance,
    t: usize,
    mut visit: impl FnMut(usize, f64),
) -> Result<()> {
    let total = check_spectrum_size(instance.group(), t)?;
    let masks = class_masks(instance);
    let order = instance.group().order();
    let words = masks[0].len();
    let full_mask: ClassMask = {
        let classes = instance.subgroups().len();
        (0..words)
            .map(|w| {
                let bits = (classes - w * 64).min(64);
                if bits == 64 {
                    u64::MAX
                } else {
                    (1u64 << bits) - 1
                }
            })
            .collect()
    };
    let mut value_cache: BTreeMap<ClassMask, f64> = BTreeMap::new();
    let mut digits = vec![0usize; t];
    // prefix[i] = AND of the masks of digits[0..i].
    let mut prefix: Vec<ClassMask> = vec![full_mask; t + 1];
    for i in 0..t {
        prefix[i + 1] = prefix[i]
            .iter()
            .zip(&masks[0])
            .map(|(a, b)| a & b)
            .collect();
    }
    for index in 0..total {
        let mask = &prefix[t];
        let lambda = match value_cache.get(mask) {
            Some(&v) => v,
            None => {
                let v = mask_eigenvalue(instance, mask, t);
                value_cache.insert(mask.clone(), v);
                v
            }
        };
        visit(index, lambda);
        // Odometer increment; recompute prefixes from the changed digit on.
        let mut pos = t;
        while pos > 0 {
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < order {
                break;
            }
            digits[pos] = 0;
        }
        for i in pos..t {
            let next: ClassMask = prefix[i]
                .iter()
                .zip(&masks[digits[i]])
                .map(|(a, b)| a & b)
                .collect();
            prefix[i + 1] = next;
        }
    }
    Ok(())
}

/// Eigenvalues of `ρ_Y^{(t)} = Σ_j p_j σ_j^{⊗t}` at the final stage,
/// indexed by character tuples.
pub fn lambda_spectrum_t(
    group: &FiniteAbelianGroup,
    subgroups: &[Subgroup],
    priors: &[f64],
    t: usize,
) -> Result<Vec<f64>> {
    let instance = instance_from(group, subgroups, priors)?;
    let mut out = Vec::with_capacity(check_spectrum_size(group, t)?);
    for_each_spectrum_entry_t(&instance, t, |_, lambda| out.push(lambda))?;
    Ok(out)
}

/// A distinct eigenvalue with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumLevel {
    pub eigenvalue: f64,
    pub multiplicity: u64,
}

/// The `t`-query spectrum aggregated by distinct class-membership pattern.
///
/// `λ(χ_1..χ_t)` depends only on which classes contain every `χ_i` in their
/// annihilator, so the tuples are counted per pattern by a dynamic program
/// over `t`, costing `O(t |G| · #patterns)` instead of `|G|^t`.
pub fn spectrum_multiplicities_t(
    instance: &HiddenSubgroupInstance,
    t: usize,
) -> Result<Vec<SpectrumLevel>> {
    if t == 0 {
        return Err(Error::OutOfRange {
            what: "query count",
            value: 0,
            range: ">= 1".into(),
        });
    }
    let masks = class_masks(instance);
    let mut per_character: BTreeMap<ClassMask, u64> = BTreeMap::new();
    for m in masks {
        *per_character.entry(m).or_default() += 1;
    }
    let mut counts: BTreeMap<ClassMask, u64> = BTreeMap::new();
    // Start from "all classes"; the first step intersects with real masks.
    for (m, &c) in &per_character {
        *counts.entry(m.clone()).or_default() += c;
    }
    for _ in 1..t {
        let mut next: BTreeMap<ClassMask, u64> = BTreeMap::new();
        for (m, &c) in &counts {
            for (cm, &cc) in &per_character {
                let joined: ClassMask = m.iter().zip(cm).map(|(a, b)| a & b).collect();
                let slot = next.entry(joined).or_default();
                *slot = slot
                    .checked_add(c.checked_mul(cc).ok_or(Error::DimensionCap {
                        requested: usize::MAX,
                        cap: u64::MAX as usize,
                    })?)
                    .ok_or(Error::DimensionCap {
                        requested: usize::MAX,
                        cap: u64::MAX as usize,
                    })?;
            }
        }
        counts = next;
    }
    let mut levels: Vec<SpectrumLevel> = counts
        .into_iter()
        .map(|(m, multiplicity)| SpectrumLevel {
            eigenvalue: mask_eigenvalue(instance, &m, t),
            multiplicity,
        })
        .collect();
    levels.sort_by(|a, b| b.eigenvalue.total_cmp(&a.eigenvalue));
    let mut merged: Vec<SpectrumLevel> = Vec::with_capacity(levels.len());
    for level in levels {
        match merged.last_mut() {
            Some(last)
                if (last.eigenvalue - level.eigenvalue).abs() <= 1e-12 * last.eigenvalue.abs() =>
            {
                last.multiplicity += level.multiplicity;
            }
            _ => merged.push(level),
        }
    }
    Ok(merged)
}

/// Final-stage quantities of `t` parallel Fourier-sampling queries.
///
/// Every class state is diagonal in the Fourier basis, so coherence and
/// discord vanish and `I(J;Y_t) = χ = S(ρ_Y^{(t)}) - t H(Y|J)`.
pub fn hsp_metrics_t(instance: &HiddenSubgroupInstance, t: usize) -> Result<MetricsRow> {
    let levels = spectrum_multiplicities_t(instance, t)?;
    let s: f64 = levels
        .iter()
        .map(|l| l.multiplicity as f64 * spectral_entropy([l.eigenvalue]))
        .sum();
    let h_y_given_j = t as f64 * instance.conditional_entropy_single();
    let info = (s - h_y_given_j).max(0.0);
    Ok(MetricsRow {
        h_y: s,
        s_rho_y: s,
        coherence: 0.0,
        h_y_given_j,
        chi: info,
        mutual_information: info,
        discord: 0.0,
        irrealism: 0.0,
        lower_bound: s - h_y_given_j,
        upper_bound: info,
    })
}
