//! Stratification of multiplicity space: the homogeneous integer linear
//! forms whose vanishing pattern determines the Novikov module, exhaustive
//! box sweeps with a per-stratum census, and randomized constancy checks.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::diagram::{MultiplicityAssignment, SpliceDiagram};
use crate::error::Error;
use crate::novikov::{novikov_homology, NovikovModule};
use crate::splice::{linking, reduce, split, LinkEnd};

/// Where a form comes from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum FormOrigin {
    /// The fiber-linking value of a vertex as a function of m.
    FiberMultiplicity(String),
    /// The multiplicity of one arrow: (vertex, arrow).
    ArrowAtVertex(String, String),
    /// The multiplicity induced at a vertex's end of an incident edge when
    /// the star is split off: (vertex, edge).
    InducedEdge(String, String),
}

/// A homogeneous linear form in the multiplicities, with exact integer
/// coefficients. Zero coefficients are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub coefficients: BTreeMap<String, BigInt>,
    pub origin: FormOrigin,
}

impl LinearForm {
    pub fn evaluate(&self, m: &MultiplicityAssignment) -> BigInt {
        let mut sum = BigInt::zero();
        for (arrow, coeff) in &self.coefficients {
            if let Some(v) = m.values.get(arrow) {
                sum += coeff * v;
            }
        }
        sum
    }

    /// Coefficient vector divided by its gcd, sign of the first nonzero
    /// entry made positive. Proportional forms define the same hyperplane
    /// and collapse to one key.
    fn primitive_key(&self) -> Vec<(String, BigInt)> {
        let mut g = BigInt::zero();
        for c in self.coefficients.values() {
            g = g.gcd(c);
        }
        if g.is_zero() {
            return Vec::new();
        }
        let mut out: Vec<(String, BigInt)> =
            self.coefficients.iter().map(|(a, c)| (a.clone(), c / &g)).collect();
        if let Some((_, first)) = out.first() {
            if first.is_negative() {
                for (_, c) in out.iter_mut() {
                    *c = -&*c;
                }
            }
        }
        out
    }
}

/// The vanishing pattern of the form list at some m: the sorted indices of
/// the forms that vanish.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Signature(pub Vec<usize>);

/// The linear forms attached to a reduced diagram: one fiber-linking form
/// per vertex, one coordinate form per arrow, one induced-multiplicity form
/// per (vertex, incident edge). Identically zero forms are dropped and
/// forms defining the same hyperplane are deduplicated, first origin wins.
pub fn hyperplane_forms(diagram: &SpliceDiagram) -> Result<Vec<LinearForm>, Error> {
    let mut raw: Vec<LinearForm> = Vec::new();

    for v in diagram.vertices() {
        let mut coefficients = BTreeMap::new();
        for a in diagram.arrows() {
            let c = linking(diagram, &LinkEnd::Vertex(v.clone()), &LinkEnd::Arrow(a.id.clone()))?;
            if !c.is_zero() {
                coefficients.insert(a.id.clone(), c);
            }
        }
        raw.push(LinearForm { coefficients, origin: FormOrigin::FiberMultiplicity(v.clone()) });
    }

    for a in diagram.arrows() {
        let mut coefficients = BTreeMap::new();
        coefficients.insert(a.id.clone(), BigInt::from(1));
        raw.push(LinearForm {
            coefficients,
            origin: FormOrigin::ArrowAtVertex(a.base.clone(), a.id.clone()),
        });
    }

    for e in diagram.edges() {
        let result = split(diagram, &e.id)?;
        // The form at ends.0 sums over the far piece (piece_b), and vice
        // versa: coefficient of arrow x is lk(new far arrow, x) there.
        let far_coeffs = |piece: &SpliceDiagram, new_arrow: &str| -> Result<_, Error> {
            let mut coefficients = BTreeMap::new();
            for x in piece.arrows() {
                if x.id == new_arrow {
                    continue;
                }
                let c = linking(
                    piece,
                    &LinkEnd::Arrow(String::from(new_arrow)),
                    &LinkEnd::Arrow(x.id.clone()),
                )?;
                if !c.is_zero() {
                    coefficients.insert(x.id.clone(), c);
                }
            }
            Ok(coefficients)
        };
        raw.push(LinearForm {
            coefficients: far_coeffs(&result.piece_b, &result.new_arrow_b)?,
            origin: FormOrigin::InducedEdge(e.ends.0.clone(), e.id.clone()),
        });
        raw.push(LinearForm {
            coefficients: far_coeffs(&result.piece_a, &result.new_arrow_a)?,
            origin: FormOrigin::InducedEdge(e.ends.1.clone(), e.id.clone()),
        });
    }

    raw.sort_by(|a, b| a.origin.cmp(&b.origin));
    let mut seen: Vec<Vec<(String, BigInt)>> = Vec::new();
    let mut out = Vec::new();
    for form in raw {
        let key = form.primitive_key();
        if key.is_empty() || seen.contains(&key) {
            continue;
        }
        seen.push(key);
        out.push(form);
    }
    Ok(out)
}

/// Options for [`sweep`].
#[derive(Debug, Clone)]
pub struct SweepOptions {
    /// Half-width of the exhaustive box: m ranges over [-B, B]^n.
    pub box_radius: u64,
    /// Maximum number of box points the sweep may evaluate.
    pub budget: u64,
    /// Seed for the constancy sampler; recorded in the report.
    pub seed: u64,
    /// Random samples to draw per discovered stratum (0 skips sampling).
    pub samples_per_stratum: u32,
    /// Half-width of the sampling box.
    pub sample_box: u64,
    /// Maximum raw draws per stratum before giving up.
    pub sample_draw_budget: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            box_radius: 3,
            budget: 1_000_000,
            seed: 0,
            samples_per_stratum: 0,
            sample_box: 50,
            sample_draw_budget: 5_000_000,
        }
    }
}

/// One stratum discovered by the sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumEntry {
    pub signature: Signature,
    pub module: NovikovModule,
    /// A witness point, keyed by arrow id.
    pub sample: BTreeMap<String, BigInt>,
    /// Box points realizing the signature.
    pub count: u64,
}

/// Result of the randomized constancy check for one stratum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstancyReport {
    pub signature: Signature,
    pub requested: u32,
    pub found: u32,
    pub draws: u64,
    /// False when the draw budget ran out before any sample was found.
    pub realized: bool,
    /// True when every found sample produced the stratum's module.
    pub consistent: bool,
}

/// Full report of a box sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub forms: Vec<LinearForm>,
    pub strata: Vec<StratumEntry>,
    /// The module at m = 0, reported apart: that point sits outside the
    /// main theorem's hypotheses.
    pub m_zero: NovikovModule,
    pub distinct_modules: usize,
    /// 3^k - 2(k - c) for the reduced diagram.
    pub bound: BigInt,
    pub bound_satisfied: bool,
    pub seed: u64,
    pub box_radius: u64,
    pub vertex_count: usize,
    pub component_count: usize,
    pub constancy: Vec<ConstancyReport>,
}

fn dense_coefficients(forms: &[LinearForm], arrow_ids: &[String]) -> Vec<Vec<BigInt>> {
    forms
        .iter()
        .map(|f| {
            arrow_ids
                .iter()
                .map(|a| f.coefficients.get(a).cloned().unwrap_or_else(BigInt::zero))
                .collect()
        })
        .collect()
}

fn signature_dense(coeffs: &[Vec<BigInt>], m: &[BigInt]) -> Signature {
    let mut vanish = Vec::new();
    for (idx, row) in coeffs.iter().enumerate() {
        let mut sum = BigInt::zero();
        for (c, v) in row.iter().zip(m) {
            if !c.is_zero() && !v.is_zero() {
                sum += c * v;
            }
        }
        if sum.is_zero() {
            vanish.push(idx);
        }
    }
    Signature(vanish)
}

/// Evaluates the Novikov module at every m in the box, groups points by the
/// vanishing pattern of the hyperplane forms, checks one module per
/// signature, and compares the number of distinct modules over m != 0 with
/// the bound 3^k - 2(k - c). With `samples_per_stratum > 0` each discovered
/// stratum is re-sampled at random in the wider sampling box.
pub fn sweep(diagram: &SpliceDiagram, opts: &SweepOptions) -> Result<SweepReport, Error> {
    if diagram.arrows().is_empty() {
        return Err(Error::NoArrows);
    }
    let reduced = reduce(diagram);
    let arrow_ids: Vec<String> = reduced.arrows().iter().map(|a| a.id.clone()).collect();
    let n = arrow_ids.len();

    let width = BigInt::from(2 * opts.box_radius + 1);
    let points = num_traits::pow::pow(width, n);
    if points > BigInt::from(opts.budget) {
        return Err(Error::BudgetExceeded { points, budget: opts.budget });
    }

    let forms = hyperplane_forms(&reduced)?;
    let coeffs = dense_coefficients(&forms, &arrow_ids);
    let k = reduced.vertices().len();
    let c = reduced.components().len();

    let radius = opts.box_radius as i64;
    let mut current: Vec<i64> = alloc::vec![-radius; n];
    let mut census: BTreeMap<Signature, StratumEntry> = BTreeMap::new();
    let mut m_zero = None;
    let mut working = reduced.clone();
    loop {
        let m_big: Vec<BigInt> = current.iter().map(|&x| BigInt::from(x)).collect();
        working.set_multiplicities_in_order(&m_big);
        let module = novikov_homology(&working)?;

        if current.iter().all(|&x| x == 0) {
            m_zero = Some(module);
        } else {
            let sig = signature_dense(&coeffs, &m_big);
            match census.get_mut(&sig) {
                None => {
                    let sample =
                        arrow_ids.iter().cloned().zip(m_big.iter().cloned()).collect();
                    census.insert(
                        sig.clone(),
                        StratumEntry { signature: sig, module, sample, count: 1 },
                    );
                }
                Some(entry) => {
                    if entry.module != module {
                        return Err(Error::SignatureDeterminismViolation {
                            detail: format!(
                                "signature {:?} produced both {} and {}",
                                entry.signature.0, entry.module, module
                            ),
                        });
                    }
                    entry.count += 1;
                }
            }
        }

        // odometer
        let mut pos = 0;
        loop {
            if pos == n {
                break;
            }
            current[pos] += 1;
            if current[pos] <= radius {
                break;
            }
            current[pos] = -radius;
            pos += 1;
        }
        if pos == n {
            break;
        }
    }

    let mut distinct: Vec<&NovikovModule> = Vec::new();
    for entry in census.values() {
        if !distinct.contains(&&entry.module) {
            distinct.push(&entry.module);
        }
    }
    let distinct_modules = distinct.len();
    let bound = num_traits::pow::pow(BigInt::from(3), k)
        - BigInt::from(2) * (BigInt::from(k) - BigInt::from(c));
    let bound_satisfied = BigInt::from(distinct_modules) <= bound;

    let mut constancy = Vec::new();
    if opts.samples_per_stratum > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for entry in census.values() {
            constancy.push(constancy_check_inner(
                &reduced,
                &arrow_ids,
                &coeffs,
                entry,
                opts,
                &mut rng,
            )?);
        }
    }

    Ok(SweepReport {
        forms,
        strata: census.into_values().collect(),
        m_zero: m_zero.expect("box always contains 0"),
        distinct_modules,
        bound,
        bound_satisfied,
        seed: opts.seed,
        box_radius: opts.box_radius,
        vertex_count: k,
        component_count: c,
        constancy,
    })
}

fn uniform_in_symmetric_range(rng: &mut ChaCha8Rng, radius: u64) -> i64 {
    let size = 2 * radius + 1;
    let zone = (u64::MAX / size) * size;
    loop {
        let x = rng.next_u64();
        if x < zone {
            return (x % size) as i64 - radius as i64;
        }
    }
}

fn constancy_check_inner(
    reduced: &SpliceDiagram,
    arrow_ids: &[String],
    coeffs: &[Vec<BigInt>],
    entry: &StratumEntry,
    opts: &SweepOptions,
    rng: &mut ChaCha8Rng,
) -> Result<ConstancyReport, Error> {
    // Arrows whose coordinate is forced to zero by the signature: any
    // vanishing form supported on a single arrow.
    let mut forced_zero = alloc::vec![false; arrow_ids.len()];
    for &idx in &entry.signature.0 {
        let nonzero: Vec<usize> = (0..arrow_ids.len())
            .filter(|&j| !coeffs[idx][j].is_zero())
            .collect();
        if let [only] = nonzero[..] {
            forced_zero[only] = true;
        }
    }

    let mut working = reduced.clone();
    let mut found = 0u32;
    let mut draws = 0u64;
    let mut consistent = true;
    let mut m = alloc::vec![BigInt::zero(); arrow_ids.len()];
    while found < opts.samples_per_stratum && draws < opts.sample_draw_budget {
        draws += 1;
        for (j, slot) in m.iter_mut().enumerate() {
            *slot = if forced_zero[j] {
                BigInt::zero()
            } else {
                BigInt::from(uniform_in_symmetric_range(rng, opts.sample_box))
            };
        }
        if m.iter().all(Zero::is_zero) {
            continue;
        }
        if signature_dense(coeffs, &m) != entry.signature {
            continue;
        }
        working.set_multiplicities_in_order(&m);
        if novikov_homology(&working)? != entry.module {
            consistent = false;
        }
        found += 1;
    }
    Ok(ConstancyReport {
        signature: entry.signature.clone(),
        requested: opts.samples_per_stratum,
        found,
        draws,
        realized: found > 0,
        consistent,
    })
}

/// Standalone constancy check against a signature discovered elsewhere:
/// sweeps are its usual source. Returns [`ConstancyReport`]; an exhausted
/// draw budget is reported (`realized: false`), not an error.
pub fn stratum_constancy_check(
    diagram: &SpliceDiagram,
    entry: &StratumEntry,
    opts: &SweepOptions,
) -> Result<ConstancyReport, Error> {
    let reduced = reduce(diagram);
    let arrow_ids: Vec<String> = reduced.arrows().iter().map(|a| a.id.clone()).collect();
    let forms = hyperplane_forms(&reduced)?;
    let coeffs = dense_coefficients(&forms, &arrow_ids);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    constancy_check_inner(&reduced, &arrow_ids, &coeffs, entry, opts, &mut rng)
}
