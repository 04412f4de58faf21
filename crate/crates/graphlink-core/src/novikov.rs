//! Novikov homology of a graph multilink from its splice diagram: vertex
//! classification, the non-fibered core subdiagram, its presentation matrix,
//! and the assembled module.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::diagram::{Arrow, SpliceDiagram};
use crate::error::Error;
use crate::matrix::{cokernel, IntegerMatrix};
use crate::splice::{fiber_multiplicity, induced_multiplicity_at, linking, normalize, reduce, LinkEnd};

/// How a vertex's Seifert splice element sits with respect to the chosen
/// multiplicities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexStatus {
    /// Nonzero fiber-linking value.
    Fibered,
    /// Fiber-linking value zero but some multiplicity of the splice element
    /// (own arrow or induced edge multiplicity) nonzero.
    NonFiberedNonZero,
    /// Every multiplicity of the splice element is zero.
    ZeroVertex,
}

/// Per-vertex status together with the fiber-linking value l_v(m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexClassification {
    pub statuses: BTreeMap<String, (VertexStatus, BigInt)>,
}

impl VertexClassification {
    pub fn status(&self, v: &str) -> Option<VertexStatus> {
        self.statuses.get(v).map(|(s, _)| *s)
    }

    pub fn is_fibered(&self, v: &str) -> bool {
        matches!(self.status(v), Some(VertexStatus::Fibered))
    }
}

/// Classifies every vertex. A vertex is fibered iff l_v(m) != 0; a
/// non-fibered vertex is a zero-vertex iff every multiplicity of its splice
/// element — its own arrows and the multiplicities induced on each incident
/// edge when the star is split off — vanishes.
pub fn classify_vertices(diagram: &SpliceDiagram) -> Result<VertexClassification, Error> {
    let mut statuses = BTreeMap::new();
    for v in diagram.vertices() {
        let ell = fiber_multiplicity(diagram, v)?;
        let status = if !ell.is_zero() {
            VertexStatus::Fibered
        } else if splice_element_is_zero(diagram, v)? {
            VertexStatus::ZeroVertex
        } else {
            VertexStatus::NonFiberedNonZero
        };
        statuses.insert(v.clone(), (status, ell));
    }
    Ok(VertexClassification { statuses })
}

fn splice_element_is_zero(diagram: &SpliceDiagram, v: &str) -> Result<bool, Error> {
    for a in diagram.arrows() {
        if a.base == v && !a.multiplicity.is_zero() {
            return Ok(false);
        }
    }
    for e in diagram.edges() {
        if e.ends.0 != v && e.ends.1 != v {
            continue;
        }
        if !induced_multiplicity_at(diagram, v, &e.id)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The non-fibered core: the subdiagram left after cutting every edge that
/// joins a fibered vertex to a non-fibered one (the cut ends become arrows
/// with the induced multiplicities) and erasing the all-fibered components.
/// Carries the counts that enter the free-rank formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaPrime {
    pub subdiagram: SpliceDiagram,
    pub classification: VertexClassification,
    /// Components of the input diagram.
    pub components_in: usize,
    /// Components of the subdiagram.
    pub components_out: usize,
    /// Arrows of the subdiagram (induced ones included).
    pub arrow_count: usize,
    /// Vertices of the subdiagram.
    pub vertex_count: usize,
    /// Per vertex, the product of the weights of the subdiagram's arrows
    /// based there; empty product is 1.
    pub alpha: BTreeMap<String, BigInt>,
}

pub fn gamma_prime(diagram: &SpliceDiagram) -> Result<GammaPrime, Error> {
    let classification = classify_vertices(diagram)?;
    let components_in = diagram.components().len();

    let keep: BTreeSet<String> = diagram
        .vertices()
        .iter()
        .filter(|v| !classification.is_fibered(v))
        .cloned()
        .collect();

    let mut vertices: Vec<String> = keep.iter().cloned().collect();
    vertices.sort();
    let mut edges = Vec::new();
    let mut arrows: Vec<Arrow> =
        diagram.arrows().iter().filter(|a| keep.contains(&a.base)).cloned().collect();
    let stubs =
        diagram.stubs().iter().filter(|s| keep.contains(&s.base)).cloned().collect::<Vec<_>>();

    for e in diagram.edges() {
        let keep0 = keep.contains(&e.ends.0);
        let keep1 = keep.contains(&e.ends.1);
        match (keep0, keep1) {
            (true, true) => edges.push(e.clone()),
            (true, false) | (false, true) => {
                // Mixed edge: the retained end gains an arrow carrying the
                // induced multiplicity of the cut.
                let (base, weight) =
                    if keep0 { (&e.ends.0, &e.weights.0) } else { (&e.ends.1, &e.weights.1) };
                let id_base = format!("{}_cut", e.id);
                let mut id = id_base;
                while diagram.has_id(&id) || arrows.iter().any(|a| a.id == id) {
                    id.push('_');
                }
                arrows.push(Arrow {
                    id,
                    base: base.clone(),
                    weight: weight.clone(),
                    multiplicity: induced_multiplicity_at(diagram, base, &e.id)?,
                });
            }
            (false, false) => {}
        }
    }

    let subdiagram = SpliceDiagram::new(vertices, edges, arrows, stubs);

    #[cfg(debug_assertions)]
    debug_zero_vertex_agreement(&subdiagram, &classification)?;

    let mut alpha = BTreeMap::new();
    for v in subdiagram.vertices() {
        let mut product = BigInt::one();
        for a in subdiagram.arrows() {
            if a.base == *v {
                product *= &a.weight;
            }
        }
        alpha.insert(v.clone(), product);
    }

    Ok(GammaPrime {
        components_out: subdiagram.components().len(),
        arrow_count: subdiagram.arrows().len(),
        vertex_count: subdiagram.vertices().len(),
        subdiagram,
        classification,
        components_in,
        alpha,
    })
}

/// The zero-vertex test reads the same inside the cut-out subdiagram as in
/// the full diagram; both are computed in debug builds and any disagreement
/// is reported instead of silently picking one.
#[cfg(debug_assertions)]
fn debug_zero_vertex_agreement(
    sub: &SpliceDiagram,
    classification: &VertexClassification,
) -> Result<(), Error> {
    for v in sub.vertices() {
        let in_full = classification.status(v) == Some(VertexStatus::ZeroVertex);
        let in_sub = splice_element_is_zero(sub, v)?;
        if in_full != in_sub {
            return Err(Error::SignatureDeterminismViolation {
                detail: format!(
                    "zero-vertex test disagrees at `{v}`: full diagram {in_full}, core {in_sub}"
                ),
            });
        }
    }
    Ok(())
}

/// The square presentation matrix of the theorem, rows and columns indexed
/// by the subdiagram's vertices in sorted order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationData {
    pub vertex_order: Vec<String>,
    pub matrix: IntegerMatrix,
}

/// Entry (v, w) is l(v,w)/alpha(w) when v and w lie in one component of the
/// core and v is not a zero-vertex, else 0. The division is exact because
/// every arrow at w is adjacent to, and not on, any geodesic ending at w;
/// a nonzero remainder is reported as a bug.
pub fn presentation_matrix(gp: &GammaPrime) -> Result<PresentationData, Error> {
    let sub = &gp.subdiagram;
    let order: Vec<String> = sub.vertices().to_vec();
    let comps = sub.components();
    let comp_of = |v: &String| comps.iter().position(|c| c.contains(v));

    let k = order.len();
    let mut m = IntegerMatrix::zero(k, k);
    for (i, v) in order.iter().enumerate() {
        if gp.classification.status(v) == Some(VertexStatus::ZeroVertex) {
            continue;
        }
        for (j, w) in order.iter().enumerate() {
            if comp_of(v) != comp_of(w) {
                continue;
            }
            let l = linking(sub, &LinkEnd::Vertex(v.clone()), &LinkEnd::Vertex(w.clone()))?;
            let (q, r) = l.div_rem(&gp.alpha[w]);
            if !r.is_zero() {
                return Err(Error::DivisibilityViolation { v: v.clone(), w: w.clone() });
            }
            m.set(i, j, q);
        }
    }
    Ok(PresentationData { vertex_order: order, matrix: m })
}

/// A Novikov module in canonical form: a free rank plus invariant factors
/// d1 | d2 | ..., each greater than one. Two modules are equal iff the
/// fields are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NovikovModule {
    pub free_rank: u64,
    pub torsion: Vec<BigInt>,
}

impl NovikovModule {
    pub fn free(rank: u64) -> Self {
        NovikovModule { free_rank: rank, torsion: Vec::new() }
    }

    pub fn trivial() -> Self {
        NovikovModule::free(0)
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl core::fmt::Display for NovikovModule {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut sep = |f: &mut core::fmt::Formatter<'_>| -> core::fmt::Result {
            if first {
                first = false;
                Ok(())
            } else {
                write!(f, " + ")
            }
        };
        if self.free_rank > 0 {
            sep(f)?;
            if self.free_rank == 1 {
                write!(f, "L")?;
            } else {
                write!(f, "L^{}", self.free_rank)?;
            }
        }
        for d in &self.torsion {
            sep(f)?;
            write!(f, "L/({d})")?;
        }
        Ok(())
    }
}

/// Computes the Novikov homology of a diagram with multiplicities. The
/// pipeline handles the all-zero multiplicity vector separately, then
/// alternates reduction and normalization to a joint fixpoint (deleting a
/// zero piece can expose a fresh reduction move, and the formula needs a
/// diagram that is minimal and normalized at once), builds the non-fibered
/// core and its presentation matrix, and reads the module off the matrix's
/// Smith form. The free rank is
/// (arrows + components_in - components_out - vertices - 1) of the core
/// plus the matrix's zero invariant factors.
pub fn novikov_homology(diagram: &SpliceDiagram) -> Result<NovikovModule, Error> {
    if diagram.arrows().is_empty() {
        return Err(Error::NoArrows);
    }

    // The theorem assumes a nonzero multiplicity vector; for m = 0 the
    // module is free of rank the number of link components. Neither
    // reduction nor normalization ever drops an arrow.
    if diagram.multiplicities_all_zero() {
        return Ok(NovikovModule::free(diagram.arrows().len() as u64));
    }

    let mut current = reduce(diagram);
    loop {
        let next = reduce(&normalize(&current));
        if next == current {
            break;
        }
        current = next;
    }

    let gp = gamma_prime(&current)?;
    let pres = presentation_matrix(&gp)?;
    let summary = cokernel(&pres.matrix);

    let base = gp.arrow_count as i64 + gp.components_in as i64
        - gp.components_out as i64
        - gp.vertex_count as i64
        - 1;
    if base < 0 {
        return Err(Error::NegativeFreeRank { value: base });
    }
    Ok(NovikovModule {
        free_rank: base as u64 + summary.free_rank as u64,
        torsion: summary.torsion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{InternalEdge, Stub};
    use alloc::vec;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn star(stub_weights: &[i64], arrows: &[(i64, i64)]) -> SpliceDiagram {
        SpliceDiagram::new(
            vec!["v".into()],
            vec![],
            arrows
                .iter()
                .enumerate()
                .map(|(i, (w, m))| Arrow {
                    id: format!("a{}", i + 1),
                    base: "v".into(),
                    weight: big(*w),
                    multiplicity: big(*m),
                })
                .collect(),
            stub_weights
                .iter()
                .enumerate()
                .map(|(i, w)| Stub { id: format!("s{}", i + 1), base: "v".into(), weight: big(*w) })
                .collect(),
        )
    }

    #[test]
    fn classify_star_cases() {
        let c = classify_vertices(&star(&[2, 3], &[(1, 1)])).unwrap();
        assert_eq!(c.status("v"), Some(VertexStatus::Fibered));
        assert_eq!(c.statuses["v"].1, big(6));

        // m on the vanishing hyperplane but nonzero
        let c = classify_vertices(&star(&[2, 3], &[(1, 1), (1, -1)])).unwrap();
        assert_eq!(c.status("v"), Some(VertexStatus::NonFiberedNonZero));

        let c = classify_vertices(&star(&[2, 3], &[(1, 0), (1, 0)])).unwrap();
        assert_eq!(c.status("v"), Some(VertexStatus::ZeroVertex));
    }

    #[test]
    fn gamma_prime_of_fibered_star_is_empty() {
        let gp = gamma_prime(&star(&[2, 3], &[(1, 1)])).unwrap();
        assert_eq!(gp.components_in, 1);
        assert_eq!(gp.components_out, 0);
        assert_eq!(gp.arrow_count, 0);
        assert_eq!(gp.vertex_count, 0);
    }

    #[test]
    fn gamma_prime_of_non_fibered_star_is_everything() {
        let d = star(&[2, 3], &[(1, 1), (1, -1)]);
        let gp = gamma_prime(&d).unwrap();
        assert_eq!(
            (gp.components_in, gp.components_out, gp.arrow_count, gp.vertex_count),
            (1, 1, 2, 1)
        );
        assert_eq!(gp.alpha["v"], big(1));
    }

    #[test]
    fn gamma_prime_cuts_mixed_edges() {
        // l_w = 210 + 35*(m_x + m_y) vanishes at m = (5, -11) while
        // l_u = 6 + 210*(m_x + m_y) = -1254 stays nonzero, so the edge is
        // mixed: u fibered, w not.
        let d = SpliceDiagram::new(
            vec!["u".into(), "w".into()],
            vec![InternalEdge {
                id: "e".into(),
                ends: ("u".into(), "w".into()),
                weights: (big(1), big(1)),
            }],
            vec![
                Arrow { id: "p".into(), base: "u".into(), weight: big(1), multiplicity: big(1) },
                Arrow { id: "x".into(), base: "w".into(), weight: big(1), multiplicity: big(5) },
                Arrow { id: "y".into(), base: "w".into(), weight: big(1), multiplicity: big(-11) },
            ],
            vec![
                Stub { id: "s1".into(), base: "u".into(), weight: big(2) },
                Stub { id: "s2".into(), base: "u".into(), weight: big(3) },
                Stub { id: "t1".into(), base: "w".into(), weight: big(5) },
                Stub { id: "t2".into(), base: "w".into(), weight: big(7) },
            ],
        );
        let c = classify_vertices(&d).unwrap();
        assert!(c.is_fibered("u"));
        assert_eq!(c.status("w"), Some(VertexStatus::NonFiberedNonZero));

        let gp = gamma_prime(&d).unwrap();
        assert_eq!(gp.vertex_count, 1);
        assert!(gp.subdiagram.has_vertex("w"));
        // the cut edge shows up as an extra arrow at w carrying the induced
        // multiplicity 1 * lk(new arrow at u, p) = 2*3 = 6
        assert_eq!(gp.arrow_count, 3);
        let induced = gp.subdiagram.arrow("e_cut").unwrap();
        assert_eq!(induced.multiplicity, big(6));
        assert_eq!(gp.alpha["w"], big(1));
    }

    #[test]
    fn presentation_matrix_of_star_is_stub_product() {
        let d = star(&[2, 3], &[(1, 1), (1, -1)]);
        let gp = gamma_prime(&d).unwrap();
        let p = presentation_matrix(&gp).unwrap();
        assert_eq!(p.vertex_order, vec![String::from("v")]);
        assert_eq!(p.matrix.get(0, 0), &big(6));
    }

    #[test]
    fn zero_vertex_rows_are_zero() {
        let d = star(&[2, 3], &[(1, 0), (1, 0)]);
        let gp = gamma_prime(&d).unwrap();
        let p = presentation_matrix(&gp).unwrap();
        assert_eq!(p.matrix.get(0, 0), &big(0));
    }

    #[test]
    fn novikov_of_fibered_multilink_is_trivial() {
        assert_eq!(novikov_homology(&star(&[2, 3], &[(1, 1)])).unwrap(), NovikovModule::trivial());
    }

    #[test]
    fn novikov_matches_star_closed_form_on_v() {
        // stubs {2,3}, arrows weights {1,1}, m = (1,-1): torsion (6), no free part
        let d = star(&[2, 3], &[(1, 1), (1, -1)]);
        let module = novikov_homology(&d).unwrap();
        assert_eq!(module, NovikovModule { free_rank: 0, torsion: vec![big(6)] });
    }

    #[test]
    fn novikov_at_zero_is_free_of_arrow_rank() {
        let d = star(&[2, 3], &[(1, 0), (1, 0), (1, 0)]);
        assert_eq!(novikov_homology(&d).unwrap(), NovikovModule::free(3));
    }

    #[test]
    fn novikov_requires_arrows() {
        let d = star(&[2, 3], &[]);
        assert!(matches!(novikov_homology(&d), Err(Error::NoArrows)));
    }

    #[test]
    fn novikov_scale_invariance() {
        // on the vanishing hyperplane: L/(30) + L for three arrows
        let d = star(&[2, 3, 5], &[(1, 1), (1, -1), (1, 0)]);
        let m1 = novikov_homology(&d).unwrap();
        assert_eq!(m1, NovikovModule { free_rank: 1, torsion: vec![big(30)] });
        let d3 = star(&[2, 3, 5], &[(1, 3), (1, -3), (1, 0)]);
        assert_eq!(m1, novikov_homology(&d3).unwrap());
    }

    /// The engineered chain where three vertices go non-fibered at once and
    /// the raw count n + c - r - k - 1 dips below zero. The input fails the
    /// strict realizability heuristic and is reported, never clamped.
    #[test]
    fn negative_free_rank_is_reported() {
        let d = SpliceDiagram::new(
            vec!["u1".into(), "u2".into(), "u3".into()],
            vec![
                InternalEdge {
                    id: "e1".into(),
                    ends: ("u1".into(), "u2".into()),
                    weights: (big(1), big(6)),
                },
                InternalEdge {
                    id: "e2".into(),
                    ends: ("u2".into(), "u3".into()),
                    weights: (big(3), big(2)),
                },
            ],
            vec![
                Arrow { id: "x".into(), base: "u1".into(), weight: big(2), multiplicity: big(-2) },
                Arrow { id: "y".into(), base: "u3".into(), weight: big(1), multiplicity: big(1) },
            ],
            vec![],
        );
        assert!(!d.validate(true).is_empty());
        assert!(matches!(
            novikov_homology(&d),
            Err(Error::NegativeFreeRank { value: -2 })
        ));
    }

    /// Normalization can expose a reduction move: once the arrowless branch
    /// at z goes, v is a pendant unit vertex and must be absorbed before
    /// the formula is read off. The final minimal diagram is the star with
    /// stubs {2, 9}, whose module on the vanishing locus is L/(18); reading
    /// the formula off the intermediate non-minimal diagram would give
    /// L/(2) instead.
    #[test]
    fn pipeline_iterates_reduce_and_normalize_to_a_joint_fixpoint() {
        let d = SpliceDiagram::new(
            vec!["u".into(), "v".into(), "z".into()],
            vec![
                InternalEdge {
                    id: "e0".into(),
                    ends: ("v".into(), "u".into()),
                    weights: (big(1), big(9)),
                },
                InternalEdge {
                    id: "e1".into(),
                    ends: ("v".into(), "z".into()),
                    weights: (big(3), big(1)),
                },
            ],
            vec![
                Arrow { id: "x".into(), base: "u".into(), weight: big(1), multiplicity: big(1) },
                Arrow { id: "y".into(), base: "u".into(), weight: big(1), multiplicity: big(-1) },
            ],
            vec![
                Stub { id: "s".into(), base: "u".into(), weight: big(2) },
                Stub { id: "t".into(), base: "z".into(), weight: big(5) },
            ],
        );
        assert_eq!(
            novikov_homology(&d).unwrap(),
            NovikovModule { free_rank: 0, torsion: vec![big(18)] }
        );
    }

    #[test]
    fn module_display_forms() {
        assert_eq!(format!("{}", NovikovModule::trivial()), "0");
        assert_eq!(format!("{}", NovikovModule::free(2)), "L^2");
        let m = NovikovModule { free_rank: 1, torsion: vec![big(6)] };
        assert_eq!(format!("{m}"), "L + L/(6)");
    }
}
