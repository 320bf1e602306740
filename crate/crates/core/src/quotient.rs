//! Quotients by normal subgroups, as coset-representative tables.

use crate::subgroup::{require_normal, Subgroup, SubgroupError};
use crate::view::{Elem, GroupView};
use crate::word::Word;

/// `G/N` with each coset represented by its smallest parent index, which is
/// the lexicographically least exponent vector for a [`crate::PcGroup`].
pub struct QuotientGroup<'a, G: GroupView + ?Sized> {
    parent: &'a G,
    kernel: Subgroup,
    reps: Vec<Elem>,
    coset_of: Vec<u32>,
    generators: Vec<Elem>,
}

pub fn quotient<'a, G: GroupView + ?Sized>(
    g: &'a G,
    n: &Subgroup,
) -> Result<QuotientGroup<'a, G>, SubgroupError> {
    QuotientGroup::new(g, n)
}

impl<'a, G: GroupView + ?Sized> QuotientGroup<'a, G> {
    pub fn new(parent: &'a G, kernel: &Subgroup) -> Result<Self, SubgroupError> {
        require_normal(parent, kernel)?;
        let mut coset_of = vec![u32::MAX; parent.order()];
        let mut reps = Vec::with_capacity(parent.order() / kernel.order());
        for x in parent.elements() {
            if coset_of[x as usize] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(x);
            for &k in kernel.elements() {
                coset_of[parent.multiply(k, x) as usize] = c;
            }
        }
        let mut generators: Vec<Elem> = Vec::new();
        for s in parent.generators() {
            let c = coset_of[s as usize];
            if c != 0 && !generators.contains(&c) {
                generators.push(c);
            }
        }
        Ok(Self {
            parent,
            kernel: kernel.clone(),
            reps,
            coset_of,
            generators,
        })
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    /// Canonical parent representative of a coset.
    pub fn representative(&self, c: Elem) -> Elem {
        self.reps[c as usize]
    }

    /// The coset containing a parent element.
    pub fn coset_of(&self, x: Elem) -> Elem {
        self.coset_of[x as usize]
    }

    /// Full preimage of a subgroup of the quotient.
    pub fn preimage(&self, h: &Subgroup) -> Subgroup {
        let elements: Vec<Elem> = self
            .parent
            .elements()
            .filter(|&x| h.contains(self.coset_of[x as usize]))
            .collect();
        let mut gens: Vec<Elem> = h
            .generators()
            .iter()
            .map(|&c| self.reps[c as usize])
            .collect();
        gens.extend_from_slice(self.kernel.generators());
        Subgroup::from_closed_set(self.parent.order(), elements, gens)
    }
}

impl<G: GroupView + ?Sized> GroupView for QuotientGroup<'_, G> {
    fn prime(&self) -> u32 {
        self.parent.prime()
    }
    fn order(&self) -> usize {
        self.reps.len()
    }
    fn multiply(&self, x: Elem, y: Elem) -> Elem {
        self.coset_of[self
            .parent
            .multiply(self.reps[x as usize], self.reps[y as usize]) as usize]
    }
    fn inverse(&self, x: Elem) -> Elem {
        self.coset_of[self.parent.inverse(self.reps[x as usize]) as usize]
    }
    fn generators(&self) -> Vec<Elem> {
        self.generators.clone()
    }
    fn word(&self, x: Elem) -> Word {
        self.parent.word(self.reps[x as usize])
    }
    fn generator_names(&self) -> Vec<String> {
        self.parent.generator_names()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PcGroup;
    use crate::subgroup::{center, closure};

    #[test]
    fn quotient_by_trivial_is_isomorphic() {
        let g = PcGroup::from_text("prime 3\ngen x 3\ngen y 3\ngen z 3\nconj y x = y z\n").unwrap();
        let q = quotient(&g, &Subgroup::trivial(g.order())).unwrap();
        assert_eq!(q.order(), 27);
        for x in g.elements() {
            assert_eq!(q.representative(x), x);
            for y in g.elements() {
                assert_eq!(q.multiply(x, y), g.multiply(x, y));
            }
        }
    }

    #[test]
    fn extraspecial_mod_center_is_elementary() {
        let g = PcGroup::from_text("prime 3\ngen x 3\ngen y 3\ngen z 3\nconj y x = y z\n").unwrap();
        let z = center(&g);
        let q = quotient(&g, &z).unwrap();
        assert_eq!(q.order() * z.order(), g.order());
        assert_eq!(center(&q).order(), 9);
        assert_eq!(q.generators().len(), 2);
        let h = closure(&q, &[q.generators()[0]]).unwrap();
        assert_eq!(q.preimage(&h).order(), 9);
    }

    #[test]
    fn non_normal_kernel_rejected() {
        let g = PcGroup::from_text("prime 3\ngen x 3\ngen y 3\ngen z 3\nconj y x = y z\n").unwrap();
        let y = closure(&g, &[g.generators()[1]]).unwrap();
        assert!(matches!(
            quotient(&g, &y),
            Err(SubgroupError::NotNormal { .. })
        ));
    }
}
