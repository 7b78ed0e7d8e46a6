//! Reduction theory: relation normalization, good-reduction verdicts via
//! Hilbert-function comparison over the base and residue fields,
//! leading-relation checks for lifting the graded picture, and Lie-algebra
//! reductors.

use serde::{Deserialize, Serialize};

use crate::field::Field;
use crate::ncpoly::{FreeAlgebra, FreePoly, NcError, Presentation};
use crate::pbw::{make_enveloping, PBWSpec, PbwError};
use crate::valfilt::GaussContext;
use crate::valued_field::{Val, ValuedField};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("zero relation")]
    ZeroRelation,
    #[error(transparent)]
    Nc(#[from] NcError),
    #[error(transparent)]
    Pbw(#[from] PbwError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("structure constants have the wrong shape")]
    BadShape,
    #[error("structure constants are not antisymmetric at ({i}, {j}, {k})")]
    NotAntisymmetric { i: usize, j: usize, k: usize },
    #[error("Jacobi identity fails on the basis triple ({i}, {j}, {k})")]
    JacobiFailure { i: usize, j: usize, k: usize },
    #[error(transparent)]
    Pbw(#[from] PbwError),
}

/// Scales a nonzero relation by a power of the uniformizer so that all
/// coefficients are integral and at least one is a unit.
pub fn normalize_relation<K: ValuedField>(
    field: &K,
    p: &FreePoly<K>,
) -> Result<FreePoly<K>, ReductionError> {
    let min = p
        .terms()
        .map(|(_, c)| field.valuation(c))
        .min()
        .unwrap_or(Val::Infinity);
    let Val::Finite(m) = min else {
        return Err(ReductionError::ZeroRelation);
    };
    let shift = field.pi_pow(-m);
    let alg =
        FreeAlgebra::new(field.clone(), dummy_names(p.arity())).expect("generated names are valid");
    Ok(alg.scale(&shift, p))
}

fn dummy_names(arity: usize) -> Vec<String> {
    (0..arity).map(|i| format!("g{i}")).collect()
}

/// Coefficientwise residue of each normalized relation.
pub fn reduce_presentation<K: ValuedField>(
    field: &K,
    pres: &Presentation<K>,
) -> Result<Presentation<K::Residue>, ReductionError> {
    let rf = field.residue_field().clone();
    let alg = FreeAlgebra::new(rf.clone(), pres.algebra().gen_names().to_vec())?;
    let mut relations = Vec::new();
    for r in pres.relations() {
        let normalized = normalize_relation(field, r)?;
        let mut reduced = alg.zero();
        for (w, c) in normalized.terms() {
            let rc = field
                .residue(c)
                .expect("normalized coefficients are integral");
            reduced = alg
                .add(&reduced, &alg.monomial(w.clone(), rc))
                .expect("same algebra");
        }
        // normalization leaves a unit coefficient, so reductions stay nonzero
        assert!(!reduced.is_zero(), "normalized relation reduced to zero");
        relations.push(reduced);
    }
    Ok(Presentation::new(alg, relations)?)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    GoodReduction,
    FailsAtDegree { degree: usize },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ReductionRow {
    pub degree: usize,
    pub dim_base: u64,
    pub dim_residue: u64,
    pub equal: bool,
}

/// Degreewise comparison of the Hilbert functions over the base field and
/// over the residue field, with the verdict and the graded-reductor flag.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ReductionReport {
    pub max_degree: usize,
    pub rows: Vec<ReductionRow>,
    pub verdict: Verdict,
    /// For a discrete value group this is equivalent to the verdict.
    pub graded_reductor: bool,
}

impl ReductionReport {
    pub fn good(&self) -> bool {
        self.verdict == Verdict::GoodReduction
    }
}

/// Compares `dim A_n` over the base field with the reduced algebra's
/// dimensions over the residue field for all `n <= max_degree`. Equality
/// through the bound is the good-reduction criterion at that bound.
pub fn good_reduction_check<K: ValuedField>(
    field: &K,
    pres: &Presentation<K>,
    max_degree: usize,
) -> Result<ReductionReport, ReductionError> {
    if !pres.is_homogeneous() {
        return Err(ReductionError::Nc(NcError::NonHomogeneousPresentation));
    }
    let reduced = reduce_presentation(field, pres)?;
    let dims_base = pres.hilbert_graded(max_degree)?;
    let dims_residue = reduced.hilbert_graded(max_degree)?;
    let mut rows = Vec::with_capacity(max_degree + 1);
    let mut verdict = Verdict::GoodReduction;
    for n in 0..=max_degree {
        // the reduced relation span can only lose rank degreewise
        assert!(
            dims_base[n] <= dims_residue[n],
            "reduction increased the relation span at degree {n}"
        );
        let equal = dims_base[n] == dims_residue[n];
        if !equal && verdict == Verdict::GoodReduction {
            verdict = Verdict::FailsAtDegree { degree: n };
        }
        rows.push(ReductionRow {
            degree: n,
            dim_base: dims_base[n],
            dim_residue: dims_residue[n],
            equal,
        });
    }
    Ok(ReductionReport {
        max_degree,
        rows,
        verdict,
        graded_reductor: verdict == Verdict::GoodReduction,
    })
}

/// Top-degree homogeneous components of the relations (the generators of
/// the leading-term ideal).
pub fn leading_relations<F: Field>(pres: &Presentation<F>) -> Vec<FreePoly<F>> {
    pres.relations()
        .iter()
        .map(|r| pres.algebra().leading_component(r))
        .collect()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GradedRelationRow {
    pub degree: usize,
    /// Dimension of degree n of the free algebra modulo the leading
    /// relations.
    pub leading_quotient_dim: u64,
    /// Increment of the filtered dimensions of the rewrite system.
    pub filtered_increment: u64,
    pub equal: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GradedRelationTable {
    pub max_degree: usize,
    pub rows: Vec<GradedRelationRow>,
    pub all_equal: bool,
}

/// Checks degreewise that the free algebra modulo the leading relations of
/// the defining equations has the dimensions of the associated graded
/// algebra (filtered dimension increments). Equality through the bound
/// certifies the graded presentation at desk scale.
pub fn graded_relation_check<K: ValuedField>(
    ctx: &GaussContext<K>,
    max_degree: usize,
) -> Result<GradedRelationTable, ReductionError> {
    let alg = ctx.spec().free_algebra();
    let relations = ctx.spec().defining_relations();
    let pres = Presentation::new(alg.clone(), relations)?;
    let leading = leading_relations(&pres);
    let filtered = ctx.spec().filtered_dims(max_degree);
    let mut rows = Vec::new();
    let mut all_equal = true;
    for n in 0..=max_degree {
        let (rank, _) = alg.ideal_component_rank(&leading, n)?;
        let total = (alg.arity() as u64)
            .checked_pow(n as u32)
            .expect("word space dimension fits in u64");
        let left = total - rank as u64;
        let right = if n == 0 {
            filtered[0]
        } else {
            filtered[n] - filtered[n - 1]
        };
        let equal = left == right;
        all_equal &= equal;
        rows.push(GradedRelationRow {
            degree: n,
            leading_quotient_dim: left,
            filtered_increment: right,
            equal,
        });
    }
    Ok(GradedRelationTable {
        max_degree,
        rows,
        all_equal,
    })
}

/// A finite-dimensional Lie algebra by basis names and structure constants
/// `constants[i][j][k]`, meaning `[x_i, x_j] = sum_k constants[i][j][k] x_k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieData<F: Field> {
    basis: Vec<String>,
    constants: Vec<Vec<Vec<F::Elem>>>,
}

impl<F: Field> LieData<F> {
    /// Validates the shape and antisymmetry (the Jacobi identity is checked
    /// separately, see [`LieData::jacobi_failure`]).
    pub fn new(
        field: &F,
        basis: Vec<String>,
        constants: Vec<Vec<Vec<F::Elem>>>,
    ) -> Result<Self, LieError> {
        let g = basis.len();
        if g == 0
            || constants.len() != g
            || constants
                .iter()
                .any(|row| row.len() != g || row.iter().any(|v| v.len() != g))
        {
            return Err(LieError::BadShape);
        }
        for i in 0..g {
            for j in 0..g {
                for k in 0..g {
                    // alternating, not merely antisymmetric: [x,x] = 0 is
                    // not implied by antisymmetry in characteristic 2
                    if constants[i][j][k] != field.neg(&constants[j][i][k])
                        || (i == j && !field.is_zero(&constants[i][j][k]))
                    {
                        return Err(LieError::NotAntisymmetric { i, j, k });
                    }
                }
            }
        }
        Ok(LieData { basis, constants })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn constants(&self) -> &Vec<Vec<Vec<F::Elem>>> {
        &self.constants
    }

    pub fn is_abelian(&self, field: &F) -> bool {
        self.constants
            .iter()
            .flatten()
            .flatten()
            .all(|c| field.is_zero(c))
    }

    /// First basis triple on which the Jacobi identity fails, if any.
    pub fn jacobi_failure(&self, field: &F) -> Option<(usize, usize, usize)> {
        let g = self.dim();
        let c = &self.constants;
        for i in 0..g {
            for j in (i + 1)..g {
                for k in (j + 1)..g {
                    for d in 0..g {
                        let mut acc = field.zero();
                        for m in 0..g {
                            // [[x_i,x_j],x_k] + [[x_j,x_k],x_i] + [[x_k,x_i],x_j]
                            let t1 = field.mul(&c[i][j][m], &c[m][k][d]);
                            let t2 = field.mul(&c[j][k][m], &c[m][i][d]);
                            let t3 = field.mul(&c[k][i][m], &c[m][j][d]);
                            acc = field.add(&acc, &field.add(&t1, &field.add(&t2, &t3)));
                        }
                        if !field.is_zero(&acc) {
                            return Some((i, j, k));
                        }
                    }
                }
            }
        }
        None
    }
}

/// Everything `lie_reduce` produces: the integrally rescaled bracket, its
/// reduction, the Jacobi verdicts, and the enveloping rewrite system of the
/// reduced Lie algebra.
#[derive(Clone, Debug)]
pub struct LieReduction<K: ValuedField> {
    /// Uniform basis rescaling exponent: `x_i -> pi^s x_i` multiplies every
    /// constant by `pi^s`.
    pub scale_exponent: i64,
    pub scaled: LieData<K>,
    pub reduced: LieData<K::Residue>,
    pub jacobi_reduced: bool,
    /// True when a nonabelian bracket reduced to the abelian one; with the
    /// minimal rescaling this cannot happen, but it is reported, not
    /// trusted.
    pub degenerate: bool,
    pub enveloping: PBWSpec<K::Residue>,
}

/// Rescales the basis so all structure constants are integral with at
/// least one unit, reduces them, verifies the reduced Jacobi identity and
/// emits the enveloping rewrite system over the residue field.
pub fn lie_reduce<K: ValuedField>(
    field: &K,
    data: &LieData<K>,
) -> Result<LieReduction<K>, LieError> {
    if let Some((i, j, k)) = data.jacobi_failure(field) {
        return Err(LieError::JacobiFailure { i, j, k });
    }
    let min = data
        .constants
        .iter()
        .flatten()
        .flatten()
        .map(|c| field.valuation(c))
        .min()
        .unwrap_or(Val::Infinity);
    let scale_exponent = match min {
        Val::Infinity => 0,
        Val::Finite(m) => -m,
    };
    let shift = field.pi_pow(scale_exponent);
    let scaled_constants: Vec<Vec<Vec<K::Elem>>> = data
        .constants
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| v.iter().map(|c| field.mul(&shift, c)).collect())
                .collect()
        })
        .collect();
    let scaled = LieData::new(field, data.basis.clone(), scaled_constants)
        .expect("rescaling preserves antisymmetry");

    let rf = field.residue_field().clone();
    let reduced_constants: Vec<Vec<Vec<<K::Residue as Field>::Elem>>> = scaled
        .constants
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    v.iter()
                        .map(|c| field.residue(c).expect("scaled constants are integral"))
                        .collect()
                })
                .collect()
        })
        .collect();
    let reduced = LieData::new(&rf, data.basis.clone(), reduced_constants)
        .expect("reduction preserves antisymmetry");

    let jacobi_reduced = reduced.jacobi_failure(&rf).is_none();
    let degenerate = reduced.is_abelian(&rf) && !data.is_abelian(field);
    let enveloping = make_enveloping(rf, data.basis.clone(), reduced.constants())?;
    Ok(LieReduction {
        scale_exponent,
        scaled,
        reduced,
        jacobi_reduced,
        degenerate,
        enveloping,
    })
}
