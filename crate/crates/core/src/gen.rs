//! Seeded random instances for law checking.
//!
//! Every case draws from its own ChaCha stream (`seed`, `case`), so a case
//! is reproducible on its own and independent of how cases are scheduled.
//! Stacks have at most 8 strata, finite stabilizers have order at most 24,
//! and fibre Euler characteristics lie in `[-3, 3]`.

use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::groupcat::library::{alternating4, cyclic, dihedral, klein, quaternion, symmetric};
use crate::groupcat::{FiniteGroup, GroupExpr, GroupHom};
use crate::orbifold::FiniteGSet;
use crate::pushpull::{RemainderMap, StabData, StackMorphism, StratumMap};
use crate::rational::{ratio, Rational};
use crate::strata::{ConstructibleFn, StratifiedStack, Stratum};

pub const MAX_STRATA: usize = 8;
pub const MAX_GROUP_ORDER: usize = 24;
pub const FIBER_CHI_RANGE: i64 = 3;

fn pool() -> &'static [FiniteGroup] {
    static POOL: OnceLock<Vec<FiniteGroup>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut groups: Vec<FiniteGroup> = (1..=12).map(cyclic).collect();
        groups.extend([
            klein(),
            symmetric(3),
            dihedral(4),
            quaternion(),
            alternating4(),
            dihedral(6),
            symmetric(4),
            cyclic(2).direct_product(&symmetric(3)),
            cyclic(4).direct_product(&cyclic(2)),
            klein().direct_product(&cyclic(2)),
            cyclic(3).direct_product(&symmetric(3)),
        ]);
        groups
    })
}

/// Which stabilizers a generated stack may carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// Finite groups only.
    Finite,
    /// Catalogue groups without `GL_n` factors (orbifold weight defined).
    NoGl,
    /// Catalogue groups without tori or `GL_n` (orbifold weight nonzero).
    NonzeroOrbifold,
    /// Anything in the catalogue.
    Any,
}

#[derive(Debug, Clone)]
pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64, case: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(case);
        Gen { rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn finite_group(&mut self, max_order: usize) -> FiniteGroup {
        let fits: Vec<&FiniteGroup> = pool().iter().filter(|g| g.order() <= max_order).collect();
        (*fits.choose(&mut self.rng).expect("the trivial group always fits")).clone()
    }

    /// A group of order at least 2 and at most `max_order`, if one exists.
    pub fn nontrivial_group(&mut self, max_order: usize) -> Option<FiniteGroup> {
        let fits: Vec<&FiniteGroup> =
            pool().iter().filter(|g| g.order() >= 2 && g.order() <= max_order).collect();
        fits.choose(&mut self.rng).map(|g| (*g).clone())
    }

    pub fn subgroup_of(&mut self, g: &FiniteGroup) -> Vec<usize> {
        let k = self.rng.gen_range(0..=2);
        let gens: Vec<usize> = (0..k).map(|_| self.rng.gen_range(0..g.order())).collect();
        g.generated_subgroup(&gens)
    }

    pub fn group_expr(&mut self, flavor: Flavor) -> GroupExpr {
        let atom = |gen: &mut Gen| -> GroupExpr {
            let roll = gen.rng.gen_range(0..10);
            match (flavor, roll) {
                (Flavor::Finite, _) | (_, 0..=4) => GroupExpr::finite(gen.finite_group(12)),
                (Flavor::Any, 5) => GroupExpr::gl(gen.rng.gen_range(1..=3)),
                (Flavor::Any | Flavor::NoGl, 6..=7) => GroupExpr::torus(gen.rng.gen_range(1..=2)),
                (_, 8) => GroupExpr::Trivial,
                _ => GroupExpr::unipotent(gen.rng.gen_range(1..=3)),
            }
        };
        if self.chance(0.25) {
            let a = atom(self);
            let b = atom(self);
            GroupExpr::product(vec![a, b])
        } else {
            atom(self)
        }
    }

    pub fn rational(&mut self) -> Rational {
        if self.chance(0.25) {
            return ratio(0, 1);
        }
        ratio(self.range(-5, 5), self.range(1, 4))
    }

    pub fn integer(&mut self) -> Rational {
        ratio(self.range(-5, 5), 1)
    }

    /// A constructible function (default 0).
    pub fn function(&mut self, stack: &Arc<StratifiedStack>, integral: bool) -> ConstructibleFn {
        let values = (0..stack.len())
            .map(|_| if integral { self.integer() } else { self.rational() })
            .collect();
        ConstructibleFn::from_parts(stack.clone(), values, ratio(0, 1))
    }

    /// A locally constructible function with a random default.
    pub fn lcf(&mut self, stack: &Arc<StratifiedStack>) -> ConstructibleFn {
        let values = (0..stack.len()).map(|_| self.rational()).collect();
        let default = self.rational();
        ConstructibleFn::from_parts(stack.clone(), values, default)
    }

    pub fn stack(&mut self, max_strata: usize, flavor: Flavor, remainder: bool) -> StratifiedStack {
        let n = self.rng.gen_range(1..=max_strata.min(MAX_STRATA));
        let strata = (0..n)
            .map(|i| {
                let chi = self.range(-FIBER_CHI_RANGE, FIBER_CHI_RANGE);
                Stratum::new(format!("s{i}"), chi, self.group_expr(flavor))
            })
            .collect();
        StratifiedStack::new(strata, remainder).unwrap()
    }

    /// A stack whose stabilizers are finite groups of order at most `max_order`.
    pub fn finite_stack(&mut self, max_strata: usize, max_order: usize, remainder: bool, prefix: &str) -> StratifiedStack {
        let n = self.rng.gen_range(1..=max_strata.min(MAX_STRATA));
        let strata = (0..n)
            .map(|i| {
                let chi = self.range(-FIBER_CHI_RANGE, FIBER_CHI_RANGE);
                Stratum::new(format!("{prefix}{i}"), chi, GroupExpr::finite(self.finite_group(max_order)))
            })
            .collect();
        StratifiedStack::new(strata, remainder).unwrap()
    }

    /// A source group with a homomorphism into `target`: a subgroup `H` of
    /// `target`, optionally times a kernel factor `K`, mapping `(k, h) ↦ h`.
    pub fn hom_into(&mut self, target: &FiniteGroup, kernel_chance: f64, injective: bool) -> GroupHom {
        let (h, emb) = {
            let elems = self.subgroup_of(target);
            target.subgroup(&elems).expect("generated subgroup")
        };
        let kernel = if injective || !self.chance(kernel_chance) {
            None
        } else {
            self.nontrivial_group(MAX_GROUP_ORDER / h.order())
        };
        match kernel {
            None => GroupHom::new_unchecked(h, target.clone(), emb),
            Some(k) => {
                let source = k.direct_product(&h);
                let m = h.order();
                let images = (0..source.order()).map(|p| emb[p % m]).collect();
                GroupHom::new_unchecked(source, target.clone(), images)
            }
        }
    }

    /// A rich morphism into `target` (finite stabilizers), with a freshly
    /// generated source stack. Each target stratum receives up to
    /// `max_per_target` source strata; the source has at most 8 strata.
    pub fn rich_morphism_into(
        &mut self,
        target: &Arc<StratifiedStack>,
        opts: &RichOptions,
        prefix: &str,
    ) -> StackMorphism {
        let mut strata = Vec::new();
        let mut map = Vec::new();
        let budget = MAX_STRATA;
        for (t, ts) in target.strata().iter().enumerate() {
            let gy = ts.stabilizer.as_finite().expect("finite target stabilizer").into_owned();
            let count = self.rng.gen_range(0..=opts.max_per_target);
            for _ in 0..count {
                if strata.len() >= budget {
                    break;
                }
                let hom = self.hom_into(&gy, opts.kernel_chance, opts.injective);
                let fiber = self.range(-FIBER_CHI_RANGE, FIBER_CHI_RANGE);
                strata.push(Stratum::new(
                    format!("{prefix}{}", strata.len()),
                    fiber * ts.coarse_chi,
                    GroupExpr::finite(hom.source().clone()),
                ));
                map.push(StratumMap { to: t, fiber_chi: fiber, stab: StabData::Rich(hom) });
            }
        }
        if strata.is_empty() {
            let t = self.rng.gen_range(0..target.len());
            let ts = target.stratum(t);
            let gy = ts.stabilizer.as_finite().unwrap().into_owned();
            let hom = self.hom_into(&gy, opts.kernel_chance, opts.injective);
            let fiber = self.range(-FIBER_CHI_RANGE, FIBER_CHI_RANGE);
            strata.push(Stratum::new(format!("{prefix}0"), fiber * ts.coarse_chi, GroupExpr::finite(hom.source().clone())));
            map.push(StratumMap { to: t, fiber_chi: fiber, stab: StabData::Rich(hom) });
        }
        let remainder = match &opts.remainder {
            Some(group) if target.has_remainder() => {
                let hom = self.hom_into(group, opts.kernel_chance, opts.injective);
                Some(RemainderMap { fiber_chi: self.range(-FIBER_CHI_RANGE, FIBER_CHI_RANGE), stab: StabData::Rich(hom) })
            }
            _ => None,
        };
        let source = Arc::new(StratifiedStack::new(strata, remainder.is_some()).unwrap());
        StackMorphism::new(source, target.clone(), map, remainder).unwrap()
    }

    /// A lean morphism into `target`. Each source stabilizer is built as
    /// `K × I` over a target stabilizer `I × Q`, declaring `χ(K)` and `χ(Q)`.
    pub fn lean_morphism_into(&mut self, target: &Arc<StratifiedStack>, flavor: Flavor) -> StackMorphism {
        let mut strata = Vec::new();
        let mut map = Vec::new();
        for (t, ts) in target.strata().iter().enumerate() {
            for _ in 0..self.rng.gen_range(0..=2) {
                if strata.len() >= MAX_STRATA {
                    break;
                }
                let kernel = self.group_expr(flavor);
                let (stab, data) = if self.chance(0.5) {
                    // image is the whole target stabilizer
                    (
                        GroupExpr::product(vec![kernel.clone(), ts.stabilizer.clone()]),
                        StabData::lean(kernel.euler_char(), 1),
                    )
                } else {
                    // image is trivial; the quotient is the whole target stabilizer
                    (kernel.clone(), StabData::lean(kernel.euler_char(), ts.stabilizer.euler_char()))
                };
                let fiber = self.range(-FIBER_CHI_RANGE, FIBER_CHI_RANGE);
                strata.push(Stratum::new(format!("u{}", strata.len()), fiber * ts.coarse_chi, stab));
                map.push(StratumMap { to: t, fiber_chi: fiber, stab: data });
            }
        }
        if strata.is_empty() {
            let ts = target.stratum(0);
            strata.push(Stratum::new("u0", ts.coarse_chi, ts.stabilizer.clone()));
            map.push(StratumMap { to: 0, fiber_chi: 1, stab: StabData::lean(1, 1) });
        }
        let source = Arc::new(StratifiedStack::new(strata, false).unwrap());
        StackMorphism::new(source, target.clone(), map, None).unwrap()
    }

    /// A finite group acting on at most `max_points` points, as a disjoint
    /// union of coset spaces `G/H`.
    pub fn gset(&mut self, max_order: usize, max_points: usize) -> FiniteGSet {
        let g = self.finite_group(max_order);
        let mut orbits: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut size = 0;
        let target = self.rng.gen_range(0..=max_points);
        while size < target {
            let room = target - size;
            let mut h = self.subgroup_of(&g);
            if g.order() / h.len() > room {
                h = (0..g.order()).collect();
            }
            let (cosets, action) = coset_action(&g, &h);
            orbits.push(action);
            size += cosets;
        }
        let mut perm: Vec<usize> = (0..size).collect();
        perm.shuffle(&mut self.rng);
        let mut action = vec![vec![0; size]; g.order()];
        for x in 0..g.order() {
            let mut offset = 0;
            for orbit in &orbits {
                let n = orbit[x].len();
                for p in 0..n {
                    action[x][perm[offset + p]] = perm[offset + orbit[x][p]];
                }
                offset += n;
            }
        }
        FiniteGSet::new(g, size, action).expect("coset actions are actions")
    }
}

/// Left multiplication on the left cosets `gH`.
fn coset_action(g: &FiniteGroup, h: &[usize]) -> (usize, Vec<Vec<usize>>) {
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut count = 0;
    for x in 0..g.order() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        for &k in h {
            coset_of[g.mul(x, k)] = count;
        }
        count += 1;
    }
    let reps: Vec<usize> = (0..count).map(|c| coset_of.iter().position(|&d| d == c).unwrap()).collect();
    let action = (0..g.order())
        .map(|x| reps.iter().map(|&r| coset_of[g.mul(x, r)]).collect())
        .collect();
    (count, action)
}

#[derive(Debug, Clone)]
pub struct RichOptions {
    pub max_per_target: usize,
    pub kernel_chance: f64,
    pub injective: bool,
    /// Stabilizer of the target remainder, when the source should carry one.
    pub remainder: Option<FiniteGroup>,
}

impl Default for RichOptions {
    fn default() -> Self {
        RichOptions { max_per_target: 2, kernel_chance: 0.5, injective: false, remainder: None }
    }
}
