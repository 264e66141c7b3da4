//! Principal `G`-coverings and the symmetric-group correspondence.
//!
//! A principal covering carries a `G`-torsor over every positive-dimension
//! cell and a transition element per incidence; equivariant relabelings act
//! on transitions exactly like sheet relabelings act on degree-`d`
//! attachments, so the covering engine serves both. Automorphism orders are
//! gauge stabilizers counted element by element.

use crate::complex::{BraneComplex, ColoredComplex};
use crate::covering::{
    hurwitz_with, Bounds, CoveringBase, CoveringClass, CoveringError, HurwitzValue, OmegaClass, Sector,
};
use crate::group::{symmetric_lex, FiniteGroup};

/// Classes of principal `G`-coverings of a graph.
pub fn g_covering_classes(sigma: &ColoredComplex, g: &FiniteGroup) -> Result<Vec<CoveringClass>, CoveringError> {
    let b = Bounds::default();
    Sector::new(sigma)?.classes(g, &b)
}

/// Classes of principal `G`-coverings of a brane complex with the given local invariants.
pub fn enumerate_g_coverings(
    omega: &BraneComplex,
    g: &FiniteGroup,
    constraints: &[Option<CoveringClass>],
) -> Result<Vec<OmegaClass>, CoveringError> {
    let b = Bounds::default();
    let base = CoveringBase::new(omega, &b)?;
    base.check_constraints(constraints)?;
    Ok(base
        .table(g, &b)?
        .classes
        .into_iter()
        .filter(|c| crate::covering::matches(&c.local, constraints))
        .collect())
}

/// Hurwitz number of principal `G`-coverings.
pub fn hurwitz_g(
    omega: &BraneComplex,
    g: &FiniteGroup,
    constraints: &[Option<CoveringClass>],
) -> Result<HurwitzValue, CoveringError> {
    hurwitz_with(omega, g, constraints, &Bounds::default())
}

/// Element of the lexicographic symmetric group with the same permutation.
pub fn to_degree_element(g: &FiniteGroup, lex: &FiniteGroup, t: usize) -> Result<usize, CoveringError> {
    let p = g.perm(t).ok_or(CoveringError::NotSymmetricGroup)?;
    (0..lex.order())
        .find(|&i| lex.perm(i) == Some(p))
        .ok_or(CoveringError::NotSymmetricGroup)
}

/// The degree-`d` class associated with a class of principal `S_d`-coverings:
/// every torsor is replaced by `{1, .., d}` through the defining action.
pub fn sd_correspondence(
    sector: &Sector,
    g: &FiniteGroup,
    class: &CoveringClass,
) -> Result<CoveringClass, CoveringError> {
    let d = g.symmetric_degree().ok_or(CoveringError::NotSymmetricGroup)?;
    let lex = symmetric_lex(d);
    let labels = class
        .labels
        .iter()
        .map(|&t| to_degree_element(g, &lex, t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(sector.class_of(&lex, &labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{bigon_circle, point};
    use crate::group::{catalog_group, make_group, GroupSpec};

    #[test]
    fn circle_classes_follow_centralizers() {
        let c2 = catalog_group("C2").unwrap();
        let a: Vec<u64> = g_covering_classes(&bigon_circle(), &c2)
            .unwrap()
            .iter()
            .map(|c| c.aut_order)
            .collect();
        assert_eq!(a, vec![2, 2]);
        let s3 = make_group(&GroupSpec::Symmetric(3)).unwrap();
        let mut a: Vec<u64> = g_covering_classes(&bigon_circle(), &s3)
            .unwrap()
            .iter()
            .map(|c| c.aut_order)
            .collect();
        a.sort();
        assert_eq!(a, vec![2, 3, 6]);
        for g in [c2, s3] {
            let p = g_covering_classes(&point(), &g).unwrap();
            assert_eq!(p.len(), 1);
            assert_eq!(p[0].aut_order, g.order() as u64);
        }
    }

    #[test]
    fn correspondence_is_a_bijection_on_circle_classes() {
        let b = Bounds::default();
        let s = Sector::new(&bigon_circle()).unwrap();
        for d in 2..=3 {
            let g = make_group(&GroupSpec::Symmetric(d)).unwrap();
            let lex = symmetric_lex(d);
            let mut images: Vec<_> = s
                .classes(&g, &b)
                .unwrap()
                .iter()
                .map(|c| sd_correspondence(&s, &g, c).unwrap())
                .collect();
            images.sort_by(|x, y| x.labels.cmp(&y.labels));
            assert_eq!(images, s.classes(&lex, &b).unwrap());
        }
        let c2 = catalog_group("C2").unwrap();
        let c = s.trivial_class(&c2);
        assert_eq!(sd_correspondence(&s, &c2, &c), Err(CoveringError::NotSymmetricGroup));
    }
}
