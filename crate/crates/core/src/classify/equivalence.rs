use crate::error::{Error, Result};
use crate::gates::PermutationGate;
use crate::hierarchy::is_clifford;
use crate::monomial::MonomialOperator;

/// `p2 = g_left · p1 · g_right` with monomial Cliffords `g_left`, `g_right`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonomialEquivalence {
    pub p1: PermutationGate,
    pub p2: PermutationGate,
    pub g_left: MonomialOperator,
    pub g_right: MonomialOperator,
}

/// Splits a monomial Clifford `G = A · D` into its permutation part `A`, which
/// must be affine, and its diagonal part `D = A⁻¹ G`.
pub fn decompose_monomial_clifford(
    g: &MonomialOperator,
) -> Result<(PermutationGate, MonomialOperator)> {
    let a = PermutationGate::new(g.num_qubits(), g.perm().to_vec())?;
    if !a.is_affine() {
        return Err(Error::Decomposition(
            "permutation part of a monomial Clifford is not affine".into(),
        ));
    }
    let d = a.inverse().to_monomial().compose(g)?;
    debug_assert!(d.is_diagonal());
    Ok((a, d))
}

/// Builds `g_left = A_L D_L` and `g_right = A_R D_R` with
/// `D_R = A_R⁻¹ P1⁻¹ D_L⁻¹ P1 A_R`, so that `g_left · p1 · g_right = A_L P1 A_R`.
/// Returns `None` when `D_R` is not Clifford.
pub fn sample_monomial_equivalence(
    p1: &PermutationGate,
    a_left: &PermutationGate,
    d_left: &MonomialOperator,
    a_right: &PermutationGate,
) -> Result<Option<MonomialEquivalence>> {
    if !d_left.is_diagonal() {
        return Err(Error::InvalidGate("D_L must be diagonal".into()));
    }
    let p1m = p1.to_monomial();
    let arm = a_right.to_monomial();
    let d_right = arm
        .inverse()
        .compose(&p1m.inverse())?
        .compose(&d_left.inverse())?
        .compose(&p1m)?
        .compose(&arm)?;
    if !is_clifford(&d_right) {
        return Ok(None);
    }
    let g_left = a_left.to_monomial().compose(d_left)?;
    let g_right = arm.compose(&d_right)?;
    let p2 = a_left.compose(p1)?.compose(a_right)?;
    Ok(Some(MonomialEquivalence {
        p1: p1.clone(),
        p2,
        g_left,
        g_right,
    }))
}

/// Checks that the affine parts of the two monomial Cliffords already relate
/// the permutations: `A_L · p1 · A_R = p2`.
pub fn monomial_equiv_implies_affine(eq: &MonomialEquivalence) -> Result<bool> {
    let product = eq
        .g_left
        .compose(&eq.p1.to_monomial())?
        .compose(&eq.g_right)?;
    if !product.equal_up_to_phase(&eq.p2.to_monomial()) {
        return Err(Error::Verification(
            "g_left · p1 · g_right differs from p2".into(),
        ));
    }
    if !is_clifford(&eq.g_left) || !is_clifford(&eq.g_right) {
        return Err(Error::Verification("outer factors must be Clifford".into()));
    }
    let (a_left, _) = decompose_monomial_clifford(&eq.g_left)?;
    let (a_right, _) = decompose_monomial_clifford(&eq.g_right)?;
    Ok(a_left.compose(&eq.p1)?.compose(&a_right)? == eq.p2)
}
