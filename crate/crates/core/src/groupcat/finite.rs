//! Finite groups given by multiplication tables, and homomorphisms between them.
//!
//! Tables are validated in full on construction (closure, associativity,
//! identity, inverses). Groups built internally from already-valid groups
//! (direct products, subgroups) skip the cubic associativity scan.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates `table` as the multiplication table of a group on `labels`,
    /// reporting the first violated axiom in the order closure,
    /// associativity, identity, inverses.
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::MalformedTable(n));
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        for (a, row) in table.iter().enumerate() {
            for (b, &c) in row.iter().enumerate() {
                if c >= n {
                    return Err(Error::NotClosed(a, b, c));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(Error::NoIdentity)?;
        let mut inverses = Vec::with_capacity(n);
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or(Error::NoInverse(x))?;
            inverses.push(inv);
        }
        Ok(FiniteGroup { labels, table, identity, inverses })
    }

    /// Caller guarantees the table is a group table.
    pub(crate) fn from_valid_table(labels: Vec<String>, table: Vec<Vec<usize>>) -> Self {
        let n = labels.len();
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x))
            .expect("group table without identity");
        let inverses = (0..n)
            .map(|x| (0..n).find(|&y| table[x][y] == identity).expect("element without inverse"))
            .collect();
        FiniteGroup { labels, table, identity, inverses }
    }

    pub fn trivial() -> Self {
        Self::from_valid_table(vec!["e".to_string()], vec![vec![0]])
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Orbits of `x ↦ g x g⁻¹`, each sorted, listed by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut assigned = vec![false; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if assigned[x] {
                continue;
            }
            let class: BTreeSet<usize> = (0..n).map(|g| self.conjugate(g, x)).collect();
            for &y in &class {
                assigned[y] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        self.check_subgroup(elems).is_ok()
    }

    fn check_subgroup(&self, elems: &[usize]) -> Result<BTreeSet<usize>> {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        if let Some(&bad) = set.iter().find(|&&x| x >= self.order()) {
            return Err(Error::NotASubgroup(format!("index {bad} out of range")));
        }
        if !set.contains(&self.identity) {
            return Err(Error::NotASubgroup("missing identity".into()));
        }
        for &a in &set {
            if !set.contains(&self.inv(a)) {
                return Err(Error::NotASubgroup(format!("{} has no inverse in the subset", self.label(a))));
            }
            for &b in &set {
                if !set.contains(&self.mul(a, b)) {
                    return Err(Error::NotASubgroup(format!(
                        "{}·{} leaves the subset",
                        self.label(a),
                        self.label(b)
                    )));
                }
            }
        }
        Ok(set)
    }

    /// The subgroup generated by `gens`, as sorted element indices.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// Extracts a subgroup as a standalone group. Returns the group and the
    /// embedding (standalone index → index in `self`).
    pub fn subgroup(&self, elems: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        let set = self.check_subgroup(elems)?;
        let embedding: Vec<usize> = set.into_iter().collect();
        let mut local = vec![usize::MAX; self.order()];
        for (i, &x) in embedding.iter().enumerate() {
            local[x] = i;
        }
        let labels = embedding.iter().map(|&x| self.labels[x].clone()).collect();
        let table = embedding
            .iter()
            .map(|&a| embedding.iter().map(|&b| local[self.mul(a, b)]).collect())
            .collect();
        Ok((FiniteGroup::from_valid_table(labels, table), embedding))
    }

    /// Direct product; element `(a, b)` has index `a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let m = other.order();
        let n = self.order() * m;
        let labels = (0..n)
            .map(|i| format!("({},{})", self.label(i / m), other.label(i % m)))
            .collect();
        let table = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.mul(i / m, j / m) * m + other.mul(i % m, j % m))
                    .collect()
            })
            .collect();
        FiniteGroup::from_valid_table(labels, table)
    }

    /// Double cosets `A β B` of subgroups `a`, `b`, as `(smallest member, size)`
    /// in increasing order of representative.
    pub fn double_cosets(&self, a: &[usize], b: &[usize]) -> Result<Vec<(usize, usize)>> {
        let a = self.check_subgroup(a)?;
        let b = self.check_subgroup(b)?;
        let n = self.order();
        let mut assigned = vec![false; n];
        let mut out = Vec::new();
        for beta in 0..n {
            if assigned[beta] {
                continue;
            }
            let mut size = 0;
            for &x in &a {
                let xb = self.mul(x, beta);
                for &y in &b {
                    let z = self.mul(xb, y);
                    if !assigned[z] {
                        assigned[z] = true;
                        size += 1;
                    }
                }
            }
            out.push((beta, size));
        }
        Ok(out)
    }
}

/// A homomorphism of finite groups, stored as per-element image indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupHom {
    source: FiniteGroup,
    target: FiniteGroup,
    images: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: FiniteGroup, target: FiniteGroup, images: Vec<usize>) -> Result<Self> {
        if images.len() != source.order() {
            return Err(Error::NotAHomomorphism(format!(
                "{} images for a source of order {}",
                images.len(),
                source.order()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&y| y >= target.order()) {
            return Err(Error::NotAHomomorphism(format!("image index {bad} out of range")));
        }
        if images[source.identity()] != target.identity() {
            return Err(Error::NotAHomomorphism("identity not preserved".into()));
        }
        let n = source.order();
        for a in 0..n {
            for b in 0..n {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(Error::NotAHomomorphism(format!(
                        "f({}·{}) ≠ f({})·f({})",
                        source.label(a),
                        source.label(b),
                        source.label(a),
                        source.label(b)
                    )));
                }
            }
        }
        Ok(GroupHom { source, target, images })
    }

    pub(crate) fn new_unchecked(source: FiniteGroup, target: FiniteGroup, images: Vec<usize>) -> Self {
        GroupHom { source, target, images }
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), images: (0..g.order()).collect() }
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn kernel(&self) -> Vec<usize> {
        let e = self.target.identity();
        (0..self.source.order()).filter(|&x| self.images[x] == e).collect()
    }

    pub fn image(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.images.iter().copied().collect();
        set.into_iter().collect()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().len() == 1
    }

    /// `(|ker|, |im|, |target| / |im|)`.
    pub fn kernel_quotient(&self) -> (usize, usize, usize) {
        let image = self.image().len();
        (self.kernel().len(), image, self.target.order() / image)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        if self.target != next.source {
            return Err(Error::NotAHomomorphism("composition across different groups".into()));
        }
        let images = self.images.iter().map(|&y| next.images[y]).collect();
        Ok(GroupHom { source: self.source.clone(), target: next.target.clone(), images })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcat::library::{cyclic, symmetric};

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("g{i}")).collect()
    }

    /// Independent brute-force associativity scan.
    fn first_nonassociative(t: &[Vec<usize>]) -> Option<(usize, usize, usize)> {
        let n = t.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if t[t[a][b]][c] != t[a][t[b][c]] {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    #[test]
    fn trivial_and_z2() {
        let g = FiniteGroup::from_table(vec!["e".into()], vec![vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        let z2 = FiniteGroup::from_table(labels(2), vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(z2.order(), 2);
        assert_eq!(z2.inv(1), 1);
    }

    #[test]
    fn rejects_nonassociative() {
        // identity 0, 1·1 = 2, 2·2 = 1, 1·2 = 0, 2·1 = 1 is a loop that is not associative
        let t = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 1]];
        let expected = first_nonassociative(&t).expect("oracle finds a bad triple");
        let (a, b, c) = expected;
        assert_eq!(
            FiniteGroup::from_table(labels(3), t),
            Err(Error::NotAssociative(a, b, c))
        );
    }

    #[test]
    fn rejects_other_axioms() {
        assert!(matches!(
            FiniteGroup::from_table(labels(2), vec![vec![0, 2], vec![1, 0]]),
            Err(Error::NotClosed(0, 1, 2))
        ));
        // constant table: associative, no identity
        assert_eq!(
            FiniteGroup::from_table(labels(2), vec![vec![0, 0], vec![0, 0]]),
            Err(Error::NoIdentity)
        );
        // monoid {1, 0} under multiplication: 0 has no inverse
        assert_eq!(
            FiniteGroup::from_table(labels(2), vec![vec![0, 0], vec![0, 1]]),
            Err(Error::NoInverse(0))
        );
        assert!(matches!(
            FiniteGroup::from_table(vec!["a".into(), "a".into()], vec![vec![0, 1], vec![1, 0]]),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(matches!(
            FiniteGroup::from_table(labels(2), vec![vec![0, 1]]),
            Err(Error::MalformedTable(2))
        ));
    }

    #[test]
    fn conjugacy_classes_small_groups() {
        assert_eq!(FiniteGroup::trivial().conjugacy_classes(), vec![vec![0]]);
        let z4 = cyclic(4);
        assert_eq!(z4.conjugacy_classes().len(), 4);
        assert!(z4.conjugacy_classes().iter().all(|c| c.len() == 1));

        let s3 = symmetric(3);
        // brute force: class of x is {g x g⁻¹} over all 36 pairs
        let mut sizes: Vec<usize> = (0..6)
            .map(|x| {
                let mut c: Vec<usize> = (0..6)
                    .map(|g| s3.mul(s3.mul(g, x), s3.inv(g)))
                    .collect();
                c.sort();
                c.dedup();
                c
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(|c| c.len())
            .collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        let mut got: Vec<usize> = s3.conjugacy_classes().iter().map(Vec::len).collect();
        got.sort();
        assert_eq!(got, sizes);
    }

    #[test]
    fn kernel_quotient_examples() {
        let z2 = cyclic(2);
        let e = FiniteGroup::trivial();
        assert_eq!(GroupHom::identity(&z2).kernel_quotient(), (1, 2, 1));
        let collapse = GroupHom::new(z2.clone(), e.clone(), vec![0, 0]).unwrap();
        assert_eq!(collapse.kernel_quotient(), (2, 1, 1));
        let include = GroupHom::new(e, z2, vec![0]).unwrap();
        assert_eq!(include.kernel_quotient(), (1, 1, 2));
    }

    #[test]
    fn rejects_non_homomorphism() {
        let z2 = cyclic(2);
        let z3 = cyclic(3);
        assert!(GroupHom::new(z3, z2.clone(), vec![0, 1, 1]).is_err());
        assert!(GroupHom::new(z2.clone(), z2, vec![1, 0]).is_err());
    }

    #[test]
    fn double_cosets_examples() {
        let s3 = symmetric(3);
        let e = [s3.identity()];
        let all: Vec<usize> = (0..6).collect();
        let trivial = s3.double_cosets(&e, &e).unwrap();
        assert_eq!(trivial.len(), 6);
        assert!(trivial.iter().all(|&(_, s)| s == 1));
        assert_eq!(s3.double_cosets(&all, &e).unwrap(), vec![(0, 6)]);

        let t = (0..6).find(|&x| x != s3.identity() && s3.mul(x, x) == s3.identity()).unwrap();
        let h = s3.generated_subgroup(&[t]);
        let mut sizes: Vec<usize> = s3.double_cosets(&h, &h).unwrap().iter().map(|d| d.1).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 4]);

        assert!(matches!(s3.double_cosets(&[t], &e), Err(Error::NotASubgroup(_))));
    }

    #[test]
    fn subgroup_extraction_and_products() {
        let s3 = symmetric(3);
        let t = (0..6).find(|&x| x != s3.identity() && s3.mul(x, x) == s3.identity()).unwrap();
        let (h, emb) = s3.subgroup(&s3.generated_subgroup(&[t])).unwrap();
        assert_eq!(h.order(), 2);
        assert!(GroupHom::new(h, s3.clone(), emb).unwrap().is_injective());

        let p = cyclic(2).direct_product(&cyclic(3));
        assert_eq!(p.order(), 6);
        assert!(p.is_abelian());
        // the product table must pass the full validation
        let checked = FiniteGroup::from_table(p.labels().to_vec(), p.table().to_vec()).unwrap();
        assert_eq!(checked, p);
    }
}
