use std::collections::{BTreeSet, VecDeque};
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::densemat::ComplexMatrix;
use crate::{limits, Error, Result};

/// `Z/p_1 × ... × Z/p_M`.
///
/// Elements are encoded as mixed-radix integers with the first factor most
/// significant, so for `(Z/2)^n` the encoding is the usual big-endian bit
/// string and matches the qubit ordering of the rest of the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    orders: Vec<usize>,
    order: usize,
    /// Least common multiple of the cycle orders.
    exponent: usize,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<usize>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidGroup("no cyclic factors".into()));
        }
        if let Some(&bad) = orders.iter().find(|&&p| p < 2) {
            return Err(Error::InvalidGroup(format!("cycle order {bad} < 2")));
        }
        let order = orders
            .iter()
            .try_fold(1usize, |acc, &p| acc.checked_mul(p))
            .ok_or_else(|| Error::InvalidGroup("group order overflows".into()))?;
        let exponent = orders.iter().fold(1, |acc, &p| acc / gcd(acc, p) * p);
        Ok(Self {
            orders,
            order,
            exponent,
        })
    }

    /// `(Z/2)^n`.
    pub fn elementary_abelian_2(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn cycle_orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order
    }

    pub fn coords(&self, g: usize) -> Vec<usize> {
        let mut out = vec![0; self.orders.len()];
        let mut rest = g;
        for (slot, &p) in out.iter_mut().zip(&self.orders).rev() {
            *slot = rest % p;
            rest /= p;
        }
        out
    }

    pub fn from_coords(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.orders)
            .fold(0, |acc, (&c, &p)| acc * p + c % p)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for &p in self.orders.iter().rev() {
            out += ((a % p + b % p) % p) * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }

    pub fn neg(&self, a: usize) -> usize {
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for &p in self.orders.iter().rev() {
            out += ((p - a % p) % p) * place;
            place *= p;
            a /= p;
        }
        out
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `χ_g(l)` scaled to an integer phase: `χ_g(l) = e^{2πi k / exponent}`.
    fn pairing_phase(&self, g: usize, l: usize) -> usize {
        let gc = self.coords(g);
        let lc = self.coords(l);
        gc.iter()
            .zip(&lc)
            .zip(&self.orders)
            .map(|((&gi, &li), &p)| (gi * li % p) * (self.exponent / p))
            .sum::<usize>()
            % self.exponent
    }

    /// `χ_g(l) = Π_i e^{2πi l_i g_i / p_i}`.
    pub fn character(&self, g: usize, l: usize) -> Complex64 {
        let k = self.pairing_phase(g, l);
        Complex64::from_polar(1.0, 2.0 * PI * k as f64 / self.exponent as f64)
    }

    /// Exact test for `χ_g(l) = 1`.
    pub fn pairing_is_trivial(&self, g: usize, l: usize) -> bool {
        self.pairing_phase(g, l) == 0
    }
}

/// Entry `(g, l)` is `χ_g(l)`.
pub fn character_table(group: &FiniteAbelianGroup) -> Result<ComplexMatrix> {
    limits::check_dim(group.order())?;
    let n = group.order();
    Ok(ComplexMatrix::from_fn(n, n, |g, l| group.character(g, l)))
}

/// Fourier transform over the group, `|x> -> |G|^{-1/2} Σ_g χ_g(x) |g>`.
pub fn group_fourier(group: &FiniteAbelianGroup) -> Result<ComplexMatrix> {
    let scale = 1.0 / (group.order() as f64).sqrt();
    Ok(character_table(group)?.scale_real(scale))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    /// Validate an explicit element list.
    pub fn new(
        group: &FiniteAbelianGroup,
        elements: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let set: BTreeSet<usize> = elements.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&g| g >= group.order()) {
            return Err(Error::NotASubgroup(format!("element {bad} not in group")));
        }
        if !set.contains(&group.identity()) {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        for &a in &set {
            if !set.contains(&group.neg(a)) {
                return Err(Error::NotASubgroup(format!("inverse of {a} missing")));
            }
            for &b in &set {
                if !set.contains(&group.add(a, b)) {
                    return Err(Error::NotASubgroup(format!("{a} + {b} not in set")));
                }
            }
        }
        if !group.order().is_multiple_of(set.len()) {
            return Err(Error::NotASubgroup(
                "order does not divide group order".into(),
            ));
        }
        Ok(Self {
            elements: set.into_iter().collect(),
        })
    }

    pub fn trivial() -> Self {
        Self { elements: vec![0] }
    }

    pub fn whole(group: &FiniteAbelianGroup) -> Self {
        Self {
            elements: group.elements().collect(),
        }
    }

    /// Smallest subgroup containing `generators`.
    pub fn generated_by(group: &FiniteAbelianGroup, generators: &[usize]) -> Result<Self> {
        if let Some(&bad) = generators.iter().find(|&&g| g >= group.order()) {
            return Err(Error::NotASubgroup(format!("generator {bad} not in group")));
        }
        let mut set = BTreeSet::from([group.identity()]);
        let mut queue: VecDeque<usize> = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            for &g in generators {
                let y = group.add(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Ok(Self {
            elements: set.into_iter().collect(),
        })
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }
}

/// Characters restricting trivially to a subgroup, `H^⊥ ⊆ Ĝ`, indexed by
/// their group label `g` of `χ_g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterSet {
    pub elements: Vec<usize>,
}

impl CharacterSet {
    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// `H^⊥ = {χ_g : χ_g(h) = 1 for all h in H}`, by exact enumeration.
pub fn annihilator(group: &FiniteAbelianGroup, subgroup: &Subgroup) -> Result<CharacterSet> {
    if subgroup.elements().iter().any(|&h| h >= group.order())
        || !subgroup.contains(group.identity())
    {
        return Err(Error::NotASubgroup(
            "subgroup does not belong to this group".into(),
        ));
    }
    let elements: Vec<usize> = group
        .elements()
        .filter(|&g| {
            subgroup
                .elements()
                .iter()
                .all(|&h| group.pairing_is_trivial(g, h))
        })
        .collect();
    debug_assert_eq!(elements.len() * subgroup.order(), group.order());
    Ok(CharacterSet { elements })
}

/// Every subgroup of a small group, ordered by size then elements.
pub fn enumerate_subgroups(group: &FiniteAbelianGroup) -> Result<Vec<Subgroup>> {
    let cap = limits::current().subgroup_enumeration_cap;
    if group.order() > cap {
        return Err(Error::DimensionCap {
            requested: group.order(),
            cap,
        });
    }
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue = VecDeque::from([Subgroup::trivial()]);
    found.insert(Subgroup::trivial().elements);
    while let Some(h) = queue.pop_front() {
        for g in group.elements().filter(|&g| !h.contains(g)) {
            let mut gens = h.elements().to_vec();
            gens.push(g);
            let bigger = Subgroup::generated_by(group, &gens)?;
            if found.insert(bigger.elements.clone()) {
                queue.push_back(bigger);
            }
        }
    }
    let mut all: Vec<Subgroup> = found
        .into_iter()
        .map(|elements| Subgroup { elements })
        .collect();
    all.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.elements.cmp(&b.elements))
    });
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_table() {
        let g = FiniteAbelianGroup::new(vec![2]).unwrap();
        let t = character_table(&g).unwrap();
        let expected = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, -1.0]).unwrap();
        assert!((&t - &expected).max_abs() < 1e-15);
    }

    #[test]
    fn z2_squared_table_is_hadamard_pattern() {
        let g = FiniteAbelianGroup::elementary_abelian_2(2).unwrap();
        let t = character_table(&g).unwrap();
        let h = crate::densemat::gates::hadamard_n(2)
            .unwrap()
            .scale_real(2.0);
        assert!((&t - &h).max_abs() < 1e-14);
    }

    #[test]
    fn z3_row_one() {
        let g = FiniteAbelianGroup::new(vec![3]).unwrap();
        let t = character_table(&g).unwrap();
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!((t[(1, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((t[(1, 1)] - w).norm() < 1e-15);
        assert!((t[(1, 2)] - w * w).norm() < 1e-15);
    }

    #[test]
    fn fourier_is_unitary_for_mixed_orders() {
        let g = FiniteAbelianGroup::new(vec![2, 3, 4]).unwrap();
        assert!(group_fourier(&g).unwrap().is_unitary(1e-10));
    }

    #[test]
    fn annihilator_extremes() {
        let g = FiniteAbelianGroup::new(vec![2, 4]).unwrap();
        let all = annihilator(&g, &Subgroup::trivial()).unwrap();
        assert_eq!(all.len(), 8);
        let none = annihilator(&g, &Subgroup::whole(&g)).unwrap();
        assert_eq!(none.elements, vec![0]);
    }

    #[test]
    fn simon_annihilator_is_orthogonal_complement() {
        for n in 2..=4 {
            let g = FiniteAbelianGroup::elementary_abelian_2(n).unwrap();
            for s in 1..(1usize << n) {
                let h = Subgroup::new(&g, [0, s]).unwrap();
                let perp = annihilator(&g, &h).unwrap();
                let brute: Vec<usize> = (0..1usize << n)
                    .filter(|&x| (x & s).count_ones() % 2 == 0)
                    .collect();
                assert_eq!(perp.elements, brute);
                assert_eq!(perp.len(), 1 << (n - 1));
            }
        }
    }

    #[test]
    fn rejects_non_subgroups() {
        let g = FiniteAbelianGroup::new(vec![4]).unwrap();
        assert!(Subgroup::new(&g, [0, 1]).is_err());
        assert!(Subgroup::new(&g, [1, 3]).is_err());
        assert!(Subgroup::new(&g, [0, 2]).is_ok());
    }

    #[test]
    fn subgroup_lattice_sizes() {
        // (Z/2)^2 has 5 subgroups, Z/12 has one per divisor, (Z/2)^3 has 16.
        let v4 = FiniteAbelianGroup::elementary_abelian_2(2).unwrap();
        assert_eq!(enumerate_subgroups(&v4).unwrap().len(), 5);
        let z12 = FiniteAbelianGroup::new(vec![12]).unwrap();
        assert_eq!(enumerate_subgroups(&z12).unwrap().len(), 6);
        let e8 = FiniteAbelianGroup::elementary_abelian_2(3).unwrap();
        assert_eq!(enumerate_subgroups(&e8).unwrap().len(), 16);
    }

    #[test]
    fn arithmetic_round_trips() {
        let g = FiniteAbelianGroup::new(vec![3, 4]).unwrap();
        for a in g.elements() {
            assert_eq!(g.from_coords(&g.coords(a)), a);
            assert_eq!(g.add(a, g.neg(a)), 0);
            for b in g.elements() {
                assert_eq!(g.sub(g.add(a, b), b), a);
            }
        }
    }
}
