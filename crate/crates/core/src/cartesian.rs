//! Fibre products of stratified stacks with finite stabilizers, and the
//! commutation of stack pushforward with pullback in Cartesian squares.
//!
//! Over a point `y` of `H` with preimages `z ∈ F` (under `φ`) and `x ∈ G`
//! (under `ψ`), the points of `E = F ×_H G` lying over `(z, x)` are the
//! double cosets `ψ(G_x) \ G_y / φ(G_z)`, and the point `ψ(G_x) β φ(G_z)` has
//! stabilizer `{(α, γ) ∈ G_x × G_z : ψ(α) β = β φ(γ)}`. Each double coset
//! becomes its own stratum of `E`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupcat::{FiniteGroup, GroupExpr, GroupHom};
use crate::pushpull::{
    pullback, pushforward_naive, pushforward_stack, validate_morphism, StabData, StackMorphism,
    StratumMap,
};
use crate::rational::Rational;
use crate::strata::{same_stack, ConstructibleFn, ConstructibleSet, StratifiedStack, Stratum};

/// `E → G` (`eta`) and `E → F` (`theta`) completing `φ: F → H`, `ψ: G → H`.
#[derive(Debug, Clone)]
pub struct CartesianSquare {
    pub phi: StackMorphism,
    pub psi: StackMorphism,
    pub e: Arc<StratifiedStack>,
    pub eta: StackMorphism,
    pub theta: StackMorphism,
}

fn rich_hom(m: &StackMorphism, i: usize) -> Result<&GroupHom> {
    let s = m.source().stratum(i);
    let t = m.target().stratum(m.record(i).to);
    for st in [s, t] {
        if !st.stabilizer.is_finite() {
            return Err(Error::NonFiniteStabilizer(st.id.clone()));
        }
    }
    match &m.record(i).stab {
        StabData::Rich(h) => Ok(h),
        StabData::Lean { .. } => Err(Error::InsufficientStabData(format!(
            "stratum {:?} needs an explicit stabilizer homomorphism",
            s.id
        ))),
    }
}

/// Builds the fibre product square for a representable `phi: F → H` and
/// `psi: G → H`, both with rich stabilizer data on finite stabilizers.
pub fn fiber_product(phi: &StackMorphism, psi: &StackMorphism) -> Result<CartesianSquare> {
    if !same_stack(phi.target(), psi.target()) {
        return Err(Error::StackMismatch);
    }
    for m in [phi, psi] {
        validate_morphism(m).map_err(|v| Error::InvalidMorphism(v.to_string()))?;
    }
    if phi.source().has_remainder() || psi.source().has_remainder() {
        return Err(Error::RemainderUnsupported);
    }
    let f_stack = phi.source();
    let g_stack = psi.source();
    let phi_homs = (0..f_stack.len()).map(|i| rich_hom(phi, i)).collect::<Result<Vec<_>>>()?;
    let psi_homs = (0..g_stack.len()).map(|i| rich_hom(psi, i)).collect::<Result<Vec<_>>>()?;
    if let Some(i) = phi_homs.iter().position(|h| !h.is_injective()) {
        return Err(Error::NotRepresentable(f_stack.stratum(i).id.clone()));
    }

    let mut strata = Vec::new();
    let mut theta_map = Vec::new();
    let mut eta_map = Vec::new();
    for (zi, phi_z) in phi_homs.iter().enumerate() {
        let t = phi.record(zi).to;
        let h_stratum = phi.target().stratum(t);
        let gy = phi_z.target();
        for (xi, psi_x) in psi_homs.iter().enumerate() {
            if psi.record(xi).to != t {
                continue;
            }
            let fiber_phi = phi.record(zi).fiber_chi;
            let fiber_psi = psi.record(xi).fiber_chi;
            let coarse_chi = h_stratum.coarse_chi * fiber_phi * fiber_psi;
            let cosets = gy.double_cosets(&psi_x.image(), &phi_z.image())?;
            for (k, &(beta, _)) in cosets.iter().enumerate() {
                let (stab, to_gx, to_gz) = coset_stabilizer(psi_x, phi_z, beta);
                let id = format!(
                    "({},{})#{}",
                    f_stack.stratum(zi).id,
                    g_stack.stratum(xi).id,
                    k
                );
                strata.push(Stratum::new(id, coarse_chi, GroupExpr::finite(stab)));
                theta_map.push(StratumMap { to: zi, fiber_chi: fiber_psi, stab: StabData::Rich(to_gz) });
                eta_map.push(StratumMap { to: xi, fiber_chi: fiber_phi, stab: StabData::Rich(to_gx) });
            }
        }
    }
    let e = Arc::new(StratifiedStack::new(strata, false)?);
    let theta = StackMorphism::new(e.clone(), f_stack.clone(), theta_map, None)?;
    let eta = StackMorphism::new(e.clone(), g_stack.clone(), eta_map, None)?;
    debug_assert!(validate_morphism(&theta).is_ok() && validate_morphism(&eta).is_ok());
    debug_assert!(eta.is_representable());
    Ok(CartesianSquare { phi: phi.clone(), psi: psi.clone(), e, eta, theta })
}

/// `{(α, γ) : ψ(α) β = β φ(γ)}` as a standalone group, with its projections
/// to `G_x` and `G_z`.
fn coset_stabilizer(psi_x: &GroupHom, phi_z: &GroupHom, beta: usize) -> (FiniteGroup, GroupHom, GroupHom) {
    let gx = psi_x.source();
    let gz = phi_z.source();
    let gy = psi_x.target();
    let pairs = gx.direct_product(gz);
    let m = gz.order();
    let elems: Vec<usize> = (0..pairs.order())
        .filter(|&p| {
            let (alpha, gamma) = (p / m, p % m);
            gy.mul(psi_x.apply(alpha), beta) == gy.mul(beta, phi_z.apply(gamma))
        })
        .collect();
    let (stab, embedding) = pairs.subgroup(&elems).expect("stabilizer of a double coset is a subgroup");
    let to_gx = embedding.iter().map(|&p| p / m).collect();
    let to_gz = embedding.iter().map(|&p| p % m).collect();
    (
        stab.clone(),
        GroupHom::new_unchecked(stab.clone(), gx.clone(), to_gx),
        GroupHom::new_unchecked(stab, gz.clone(), to_gz),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PushKind {
    Stack,
    Naive,
}

/// Both sides of the square evaluated on `δ_C`, one row per stratum of `G`.
#[derive(Debug, Clone)]
pub struct CommutationReport {
    pub left: ConstructibleFn,
    pub right: ConstructibleFn,
    pub rows: Vec<(String, Rational, Rational)>,
}

impl CommutationReport {
    pub fn holds(&self) -> bool {
        self.left == self.right
    }
}

/// Compares `(push(η) ∘ θ^*) δ_C` with `(ψ^* ∘ push(φ)) δ_C` using stack
/// pushforwards.
pub fn verify_commutation(sq: &CartesianSquare, c: &ConstructibleSet) -> Result<CommutationReport> {
    verify_commutation_with(sq, c, PushKind::Stack)
}

pub fn verify_commutation_with(
    sq: &CartesianSquare,
    c: &ConstructibleSet,
    kind: PushKind,
) -> Result<CommutationReport> {
    let push = |m: &StackMorphism, f: &ConstructibleFn| match kind {
        PushKind::Stack => pushforward_stack(m, f),
        PushKind::Naive => pushforward_naive(m, f),
    };
    let delta = c.indicator();
    let left = push(&sq.eta, &pullback(&sq.theta, &delta)?)?;
    let right = pullback(&sq.psi, &push(&sq.phi, &delta)?)?;
    let rows = sq
        .psi
        .source()
        .strata()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.id.clone(), left.value(i).clone(), right.value(i).clone()))
        .collect();
    Ok(CommutationReport { left, right, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcat::library::{cyclic, symmetric};
    use crate::rational::int;

    fn pt() -> Arc<StratifiedStack> {
        Arc::new(StratifiedStack::point())
    }

    fn pt_into_bz2(h: &Arc<StratifiedStack>) -> StackMorphism {
        let hom = GroupHom::new(FiniteGroup::trivial(), cyclic(2), vec![0]).unwrap();
        StackMorphism::from_ids(pt(), h.clone(), vec![("pt", "pt", 1, StabData::Rich(hom))], None).unwrap()
    }

    #[test]
    fn point_point_bz2_square() {
        let h = Arc::new(StratifiedStack::classifying(GroupExpr::finite(cyclic(2))));
        let sq = fiber_product(&pt_into_bz2(&h), &pt_into_bz2(&h)).unwrap();
        assert_eq!(sq.e.len(), 2);
        for s in sq.e.strata() {
            assert_eq!(s.coarse_chi, 1);
            assert_eq!(s.stabilizer.euler_char(), 1);
        }
        assert!(validate_morphism(&sq.eta).is_ok());
        assert!(validate_morphism(&sq.theta).is_ok());
        assert!(sq.eta.is_representable());

        let c = ConstructibleSet::all(sq.phi.source().clone());
        let stk = verify_commutation(&sq, &c).unwrap();
        assert!(stk.holds());
        assert_eq!(stk.rows, vec![("pt".to_string(), int(2), int(2))]);

        let na = verify_commutation_with(&sq, &c, PushKind::Naive).unwrap();
        assert!(!na.holds());
        assert_eq!(na.rows, vec![("pt".to_string(), int(2), int(1))]);
    }

    #[test]
    fn identity_phi_reproduces_g() {
        let s3 = symmetric(3);
        let h = Arc::new(StratifiedStack::classifying(GroupExpr::finite(s3.clone())));
        let t = (0..6).find(|&x| x != s3.identity() && s3.mul(x, x) == s3.identity()).unwrap();
        let (sub, emb) = s3.subgroup(&s3.generated_subgroup(&[t])).unwrap();
        let g = Arc::new(StratifiedStack::classifying(GroupExpr::finite(sub.clone())));
        let psi = StackMorphism::from_ids(
            g.clone(),
            h.clone(),
            vec![("pt", "pt", 1, StabData::Rich(GroupHom::new(sub, s3, emb).unwrap()))],
            None,
        )
        .unwrap();
        let sq = fiber_product(&StackMorphism::identity(h), &psi).unwrap();
        assert_eq!(sq.e.len(), g.len());
        assert_eq!(sq.e.stratum(0).coarse_chi, g.stratum(0).coarse_chi);
        assert_eq!(sq.e.stratum(0).stabilizer.euler_char(), 2);
        let c = ConstructibleSet::all(sq.phi.source().clone());
        let report = verify_commutation(&sq, &c).unwrap();
        assert!(report.holds());
        assert_eq!(report.right, pullback(&psi, &c.indicator()).unwrap());
    }

    #[test]
    fn trivial_stabilizers_over_a_point() {
        let kp1 = Arc::new(StratifiedStack::projective_space(1));
        let kp2 = Arc::new(StratifiedStack::projective_space(2));
        let to_pt = |x: &Arc<StratifiedStack>| {
            let recs = x
                .strata()
                .iter()
                .map(|s| (s.id.as_str(), "pt", s.coarse_chi, StabData::identity(&GroupExpr::Trivial)))
                .collect();
            StackMorphism::from_ids(x.clone(), pt(), recs, None).unwrap()
        };
        let sq = fiber_product(&to_pt(&kp1), &to_pt(&kp2)).unwrap();
        assert_eq!(sq.e.len(), kp1.len() * kp2.len());
        let total: i64 = sq.e.strata().iter().map(|s| s.coarse_chi).sum();
        assert_eq!(total, 2 * 3);
    }

    #[test]
    fn rejects_bad_inputs() {
        let h = Arc::new(StratifiedStack::classifying(GroupExpr::finite(cyclic(2))));
        let collapse = GroupHom::new(cyclic(2), cyclic(2), vec![0, 0]).unwrap();
        let bz2 = Arc::new(StratifiedStack::classifying(GroupExpr::finite(cyclic(2))));
        let not_rep =
            StackMorphism::from_ids(bz2, h.clone(), vec![("pt", "pt", 1, StabData::Rich(collapse))], None).unwrap();
        assert_eq!(
            fiber_product(&not_rep, &pt_into_bz2(&h)).unwrap_err(),
            Error::NotRepresentable("pt".into())
        );

        let th = Arc::new(StratifiedStack::classifying(GroupExpr::torus(1)));
        let lean = StackMorphism::from_ids(pt(), th.clone(), vec![("pt", "pt", 1, StabData::lean(1, 0))], None).unwrap();
        assert!(matches!(fiber_product(&lean, &lean), Err(Error::NonFiniteStabilizer(_))));
    }
}
