//! Named finite groups used by fixtures, the CLI and the random generators.

use std::collections::BTreeMap;

use super::finite::FiniteGroup;

pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let labels = (0..n).map(|i| i.to_string()).collect();
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroup::from_valid_table(labels, table)
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    // (p ∘ q)(x) = p(q(x))
    q.iter().map(|&x| p[x]).collect()
}

fn perm_label(p: &[usize]) -> String {
    let body: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("[{}]", body.join(" "))
}

/// Closure of a set of permutations of `{0..degree}` under composition.
/// Elements are ordered by first discovery from the identity; the product
/// `a·b` is `a ∘ b`.
pub fn permutation_group(degree: usize, gens: &[Vec<usize>]) -> FiniteGroup {
    let id: Vec<usize> = (0..degree).collect();
    let mut elems = vec![id.clone()];
    let mut index = BTreeMap::from([(id, 0usize)]);
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let next = compose(&elems[i], g);
            if !index.contains_key(&next) {
                index.insert(next.clone(), elems.len());
                elems.push(next);
            }
        }
        i += 1;
    }
    let labels = elems.iter().map(|p| perm_label(p)).collect();
    let table = elems
        .iter()
        .map(|a| elems.iter().map(|b| index[&compose(a, b)]).collect())
        .collect();
    FiniteGroup::from_valid_table(labels, table)
}

/// Permutation images of each element of a group built by
/// [`permutation_group`], recovered from its labels.
pub fn permutation_of(g: &FiniteGroup, x: usize) -> Vec<usize> {
    let label = g.label(x);
    label
        .trim_matches(|c| c == '[' || c == ']')
        .split_whitespace()
        .map(|t| t.parse().expect("permutation label"))
        .collect()
}

pub fn symmetric(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    if n == 1 {
        return permutation_group(1, &[]);
    }
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    permutation_group(n, &[swap, cycle])
}

pub fn alternating4() -> FiniteGroup {
    permutation_group(4, &[vec![1, 2, 0, 3], vec![0, 2, 3, 1]])
}

/// Dihedral group of order `2n` acting on the vertices of an `n`-gon.
pub fn dihedral(n: usize) -> FiniteGroup {
    assert!(n >= 3);
    let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    permutation_group(n, &[rot, refl])
}

/// Quaternion group of order 8, as a regular permutation representation.
pub fn quaternion() -> FiniteGroup {
    // elements 1,i,j,k,-1,-i,-j,-k indexed 0..8; left multiplication by i and j
    let sign = |x: usize| x / 4;
    let unit = |x: usize| x % 4;
    let mul = |a: usize, b: usize| -> usize {
        // unit products for 1,i,j,k with sign
        const T: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let (s, u) = T[unit(a)][unit(b)];
        ((sign(a) + sign(b) + s) % 2) * 4 + u
    };
    let left = |g: usize| -> Vec<usize> { (0..8).map(|x| mul(g, x)).collect() };
    permutation_group(8, &[left(1), left(2)])
}

pub fn klein() -> FiniteGroup {
    cyclic(2).direct_product(&cyclic(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(cyclic(5).order(), 5);
        assert_eq!(symmetric(3).order(), 6);
        assert_eq!(symmetric(4).order(), 24);
        assert_eq!(alternating4().order(), 12);
        assert_eq!(dihedral(4).order(), 8);
        assert_eq!(dihedral(6).order(), 12);
        assert_eq!(quaternion().order(), 8);
        assert_eq!(klein().order(), 4);
    }

    #[test]
    fn library_tables_validate() {
        for g in [symmetric(4), alternating4(), dihedral(5), quaternion(), klein()] {
            let checked = FiniteGroup::from_table(g.labels().to_vec(), g.table().to_vec()).unwrap();
            assert_eq!(checked, g);
        }
    }

    #[test]
    fn class_counts() {
        assert_eq!(symmetric(4).conjugacy_classes().len(), 5);
        assert_eq!(alternating4().conjugacy_classes().len(), 4);
        assert_eq!(dihedral(4).conjugacy_classes().len(), 5);
        assert_eq!(quaternion().conjugacy_classes().len(), 5);
        assert!(!quaternion().is_abelian());
    }
}
