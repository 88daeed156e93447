//! Isolated complete intersection singularities: germ validation, Milnor
//! numbers via the Lê-Greuel recursion, the contraction complex on Kähler
//! differentials, and the index of a tangent vector field computed by three
//! independent routes.

use rand::SeedableRng;

use crate::complexes::{
    euler_characteristic, euler_characteristic_free, koszul_complex,
    mixed_double_complex, subsets, FreeComplex, PresentedComplex,
};
use crate::localalg::{
    colength, is_member, syzygies, RingSpec, SubmodulePresentation,
};
use crate::multiplicities::{
    alternating_multiplicity_terms, find_admissible_transform, transform_system,
};
use crate::polyring::{Poly, PolyVec, Rational};
use crate::qmatrix::QMatrix;
use crate::AlgError;

/// A germ (X, 0) ⊆ (ℂ^n, 0) cut out by a regular sequence f = (f_1..f_m)
/// with an isolated singularity at the origin.
#[derive(Debug, Clone)]
pub struct ICISGerm {
    pub ambient: RingSpec,
    pub f: Vec<Poly>,
}

/// A vector field V = Σ V_i ∂/∂x_i tangent to the germ with an isolated zero.
#[derive(Debug, Clone)]
pub struct VectorField {
    pub components: Vec<Poly>,
}

/// The index computation with all cross-checked intermediate values.
#[derive(Debug, Clone)]
pub struct IndexReport {
    pub chi_k0: i64,
    pub chi_omega: i64,
    pub milnor: u64,
    pub index_formula: i64,
    pub index_direct: i64,
    /// The signed summands (-1)^j e(…) of the alternating multiplicity.
    pub terms: Vec<i64>,
    pub transform_used: QMatrix,
    pub agreement: bool,
}

fn derivative_rows(f: &[Poly], n: usize) -> Vec<Vec<Poly>> {
    f.iter()
        .map(|fi| (0..n).map(|j| fi.derivative(j)).collect())
        .collect()
}

fn det(mat: &[Vec<Poly>], nvars: usize) -> Poly {
    let n = mat.len();
    if n == 0 {
        return Poly::one(nvars);
    }
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut acc = Poly::zero(nvars);
    for j in 0..n {
        if mat[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = mat[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let cof = mat[0][j].mul(&det(&minor, nvars));
        if j % 2 == 0 {
            acc = acc.add(&cof);
        } else {
            acc = acc.sub(&cof);
        }
    }
    acc
}

/// All m×m minors of the m×n Jacobian matrix of f.
fn maximal_minors(f: &[Poly], n: usize, nvars: usize) -> Vec<Poly> {
    let rows = derivative_rows(f, n);
    let m = f.len();
    let mut out = Vec::new();
    for cols in subsets(n, m) {
        let sub: Vec<Vec<Poly>> = rows
            .iter()
            .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
            .collect();
        let d = det(&sub, nvars);
        if !d.is_zero() {
            out.push(d);
        }
    }
    out
}

/// Koszul-homology test: f is a regular sequence in the local ring iff the
/// Koszul complex is exact away from degree 0 (membership checks only, no
/// lengths needed).
fn is_regular_sequence(ring: &RingSpec, f: &[Poly]) -> Result<bool, AlgError> {
    let k = koszul_complex(ring, f)?;
    for deg in k.lo..0 {
        let cols = k.diff_at(deg).unwrap().to_vec();
        let target_rank = k.rank_at(deg + 1);
        let pres = SubmodulePresentation::new(ring.clone(), target_rank, cols)?;
        let kernel = syzygies(&pres);
        let image = match k.diff_at(deg - 1) {
            Some(prev) => prev.to_vec(),
            None => Vec::new(),
        };
        let image_pres =
            SubmodulePresentation::new(ring.clone(), k.rank_at(deg), image)?;
        for g in &kernel.generators {
            if !g.is_zero() && !is_member(g, &image_pres) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn ideal_is_finite(ring: &RingSpec, gens: &[Poly]) -> Result<bool, AlgError> {
    let pres = SubmodulePresentation::ideal(ring.clone(), gens.to_vec());
    Ok(colength(&pres).is_finite())
}

impl ICISGerm {
    /// Validates the complete-intersection and isolated-singularity
    /// hypotheses at construction.
    pub fn new(variables: Vec<String>, f: Vec<Poly>) -> Result<Self, AlgError> {
        let ambient = RingSpec::new(variables, Vec::new())?;
        let n = ambient.nvars();
        let m = f.len();
        if m == 0 {
            return Err(AlgError::InvalidInput(
                "at least one defining equation is required".into(),
            ));
        }
        if m >= n {
            return Err(AlgError::InvalidInput(format!(
                "need m < n for a positive-dimensional germ (m = {m}, n = {n})"
            )));
        }
        for fi in &f {
            if fi.nvars() != n {
                return Err(AlgError::VariableCountMismatch(fi.nvars(), n));
            }
            if !fi.has_zero_constant_term() {
                return Err(AlgError::ConstantTerm);
            }
            if fi.is_zero() {
                return Err(AlgError::ZeroInput);
            }
        }
        if !is_regular_sequence(&ambient, &f)? {
            return Err(AlgError::InvalidInput(
                "the defining equations are not a regular sequence".into(),
            ));
        }
        // singular locus of V(f) is at most the origin
        let mut sing = f.clone();
        sing.extend(maximal_minors(&f, n, n));
        if !ideal_is_finite(&ambient, &sing)? {
            return Err(AlgError::NotIsolated);
        }
        Ok(ICISGerm { ambient, f })
    }

    pub fn n(&self) -> usize {
        self.ambient.nvars()
    }

    pub fn m(&self) -> usize {
        self.f.len()
    }

    /// dim X = n - m.
    pub fn dim(&self) -> usize {
        self.n() - self.m()
    }

    /// The local ring O_X = O_ambient / (f).
    pub fn quotient_ring(&self) -> RingSpec {
        RingSpec {
            variables: self.ambient.variables.clone(),
            relations: self.f.clone(),
        }
    }

    /// The m×n Jacobian matrix ∂f_i/∂x_j as rows.
    pub fn jacobian_rows(&self) -> Vec<Vec<Poly>> {
        derivative_rows(&self.f, self.n())
    }
}

impl VectorField {
    pub fn new(components: Vec<Poly>) -> Result<Self, AlgError> {
        for v in &components {
            if !v.has_zero_constant_term() {
                return Err(AlgError::ConstantTerm);
            }
        }
        Ok(VectorField { components })
    }

    /// Check tangency (Σ V_j ∂f_i/∂x_j ≡ 0 mod (f)) and that the zero of V
    /// on X is isolated.
    pub fn validate_on(&self, germ: &ICISGerm) -> Result<(), AlgError> {
        let n = germ.n();
        if self.components.len() != n {
            return Err(AlgError::VariableCountMismatch(self.components.len(), n));
        }
        let f_ideal =
            SubmodulePresentation::ideal(germ.ambient.clone(), germ.f.clone());
        for row in germ.jacobian_rows() {
            let mut s = Poly::zero(n);
            for (vj, dfj) in self.components.iter().zip(&row) {
                s = s.add(&vj.mul(dfj));
            }
            if !s.is_zero() && !is_member(&PolyVec::from_poly(s), &f_ideal) {
                return Err(AlgError::RelationViolated);
            }
        }
        let mut zero_locus = germ.f.clone();
        zero_locus.extend(self.components.iter().cloned());
        if !ideal_is_finite(&germ.ambient, &zero_locus)? {
            return Err(AlgError::NotIsolated);
        }
        Ok(())
    }
}

/// The data (a, A) of the mixed complex: a = V and A = the Jacobian matrix
/// reduced into the quotient ring, with the structural relation verified.
pub fn jacobian_and_relation(
    germ: &ICISGerm,
    vf: &VectorField,
) -> Result<(Vec<Poly>, Vec<Vec<Poly>>), AlgError> {
    vf.validate_on(germ)?;
    let rows = germ.jacobian_rows();
    for row in &rows {
        for entry in row {
            if !entry.has_zero_constant_term() {
                return Err(AlgError::UnitJacobianEntry);
            }
        }
    }
    Ok((vf.components.clone(), rows))
}

// ---------------------------------------------------------------------------
// Milnor number (Lê-Greuel recursion)
// ---------------------------------------------------------------------------

fn ideal_colength(ring: &RingSpec, gens: &[Poly]) -> Result<u64, AlgError> {
    let pres = SubmodulePresentation::ideal(ring.clone(), gens.to_vec());
    colength(&pres)
        .finite()
        .ok_or(AlgError::NotIsolated)
}

fn milnor_rec(
    ambient: &RingSpec,
    f: &[Poly],
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<u64, AlgError> {
    let n = ambient.nvars();
    let m = f.len();
    if m == 1 {
        let jac: Vec<Poly> = (0..n).map(|j| f[0].derivative(j)).collect();
        return ideal_colength(ambient, &jac);
    }
    // μ(X_m) + μ(X_{m-1}) = L(O / ((g_1..g_{m-1}) + I_m(Jac g))), where the
    // sub-germ (g_1..g_{m-1}) must itself be an ICIS; the minors ideal is
    // invariant under invertible row operations g = h·f.
    let minors = maximal_minors(f, n, n);
    let mut attempt = 0usize;
    loop {
        let h = if attempt == 0 {
            QMatrix::identity(m)
        } else {
            QMatrix::random(m, rng)
        };
        attempt += 1;
        if attempt > 32 {
            return Err(AlgError::TransformNotFound);
        }
        if h.inverse().is_none() {
            continue;
        }
        let g: Vec<Poly> = (0..m)
            .map(|i| {
                let mut acc = Poly::zero(n);
                for (l, fl) in f.iter().enumerate() {
                    let c: &Rational = h.get(i, l);
                    if !num_traits::Zero::is_zero(c) {
                        acc = acc.add(&fl.scale(c));
                    }
                }
                acc
            })
            .collect();
        let sub = &g[..m - 1];
        if sub.iter().any(|p| p.is_zero() || !p.has_zero_constant_term()) {
            continue;
        }
        if !is_regular_sequence(ambient, sub)? {
            continue;
        }
        let mut sub_sing = sub.to_vec();
        sub_sing.extend(maximal_minors(sub, n, n));
        if !ideal_is_finite(ambient, &sub_sing)? {
            continue;
        }
        let mut total = sub.to_vec();
        total.extend(minors.iter().cloned());
        let Ok(length) = ideal_colength(ambient, &total) else {
            continue;
        };
        let mu_sub = milnor_rec(ambient, sub, rng)?;
        if length < mu_sub {
            return Err(AlgError::Disagreement(
                "Lê-Greuel length smaller than the sub-germ Milnor number".into(),
            ));
        }
        return Ok(length - mu_sub);
    }
}

/// The Milnor number μ(X, 0): Jacobian-ideal colength for hypersurfaces,
/// Lê-Greuel recursion (with seeded certify-and-retry coordinate mixes) for
/// higher codimension.
pub fn milnor_number(germ: &ICISGerm, seed: u64) -> Result<u64, AlgError> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    milnor_rec(&germ.ambient, &germ.f, &mut rng)
}

// ---------------------------------------------------------------------------
// The contraction complex on Kähler differentials
// ---------------------------------------------------------------------------

/// The complex (Ω^d_{X,0} → … → Ω^0_{X,0}) with differential the contraction
/// i_V, placed in cohomological degrees -d..0 (degree -p holds Ω^p). Ω^p is
/// presented by Λ^p O_X^n modulo df_i ∧ Λ^{p-1}.
pub fn kaehler_contraction_complex(
    germ: &ICISGerm,
    vf: &VectorField,
) -> Result<PresentedComplex, AlgError> {
    vf.validate_on(germ)?;
    let n = germ.n();
    let d = germ.dim();
    let ring = germ.quotient_ring();
    let jac = germ.jacobian_rows();

    // bases of Λ^p for p = d down to 0, stored by complex index k = d - p
    let bases: Vec<Vec<Vec<usize>>> = (0..=d).map(|k| subsets(n, d - k)).collect();
    let pos: Vec<std::collections::HashMap<Vec<usize>, usize>> = bases
        .iter()
        .map(|b| {
            b.iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i))
                .collect()
        })
        .collect();
    let ranks: Vec<usize> = bases.iter().map(|b| b.len()).collect();

    // differential i_V : Λ^p -> Λ^{p-1}
    let mut diffs = Vec::new();
    for k in 0..d {
        let mut cols = Vec::with_capacity(ranks[k]);
        for set in &bases[k] {
            let mut col = PolyVec::zero(n, ranks[k + 1]);
            for (l, &j) in set.iter().enumerate() {
                let vj = &vf.components[j];
                if vj.is_zero() {
                    continue;
                }
                let mut rest = set.clone();
                rest.remove(l);
                let tgt = pos[k + 1][&rest];
                let add = if l % 2 == 0 { vj.clone() } else { vj.neg() };
                col.set_component(tgt, col.component(tgt).add(&add));
            }
            cols.push(col);
        }
        diffs.push(cols);
    }

    // term relations: df_i ∧ Λ^{p-1} inside Λ^p
    let mut term_relations = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let p = d - k;
        let mut rels = Vec::new();
        if p >= 1 {
            for row in &jac {
                for small in subsets(n, p - 1) {
                    let mut v = PolyVec::zero(n, ranks[k]);
                    for (j, dfj) in row.iter().enumerate() {
                        if dfj.is_zero() {
                            continue;
                        }
                        let posn = small.partition_point(|&x| x < j);
                        if small.get(posn) == Some(&j) {
                            continue;
                        }
                        let mut big = small.clone();
                        big.insert(posn, j);
                        let tgt = pos[k][&big];
                        let add = if posn % 2 == 0 { dfj.clone() } else { dfj.neg() };
                        v.set_component(tgt, v.component(tgt).add(&add));
                    }
                    if !v.is_zero() {
                        rels.push(v);
                    }
                }
            }
        }
        term_relations.push(rels);
    }

    let pc = PresentedComplex {
        complex: FreeComplex {
            ring,
            lo: -(d as i64),
            ranks,
            diffs,
        },
        term_relations,
    };
    pc.complex.check_d_squared()?;
    pc.check_relation_invariance()?;
    Ok(pc)
}

// ---------------------------------------------------------------------------
// The index
// ---------------------------------------------------------------------------

/// Compute the index of the vector field by three routes (mixed complex,
/// alternating multiplicities, contraction complex on Ω•) and cross-check.
pub fn index_of_vector_field(
    germ: &ICISGerm,
    vf: &VectorField,
    seed: u64,
) -> Result<IndexReport, AlgError> {
    let d = germ.dim();
    let sign_d: i64 = if d % 2 == 0 { 1 } else { -1 };
    let ring = germ.quotient_ring();
    let (a, rows) = jacobian_and_relation(germ, vf)?;

    // route 1: Euler characteristic of the mixed complex
    let k0 = mixed_double_complex(&ring, &a, &rows, 0)?;
    let chi_k0 = euler_characteristic_free(&k0)?;

    // route 2: alternating multiplicities after an admissible transform
    let g = find_admissible_transform(&ring, &a, &rows, seed)?;
    let (a2, rows2) = transform_system(&a, &rows, &g)?;
    let idx: Vec<usize> = (0..=d).collect();
    let terms = alternating_multiplicity_terms(&ring, &a2, &rows2, &idx)?;
    let s: i64 = terms.iter().sum();
    if s != chi_k0 {
        return Err(AlgError::Disagreement(format!(
            "alternating multiplicity {s} != chi(K_0) = {chi_k0} (terms {terms:?})"
        )));
    }

    // route 3: the contraction complex on Kähler differentials
    let omega = kaehler_contraction_complex(germ, vf)?;
    let chi_omega = euler_characteristic(&omega)?;
    if chi_omega != sign_d * chi_k0 {
        return Err(AlgError::Disagreement(format!(
            "chi(Omega, i_V) = {chi_omega} but (-1)^d chi(K_0) = {}",
            sign_d * chi_k0
        )));
    }

    let milnor = milnor_number(germ, seed)?;
    let index_formula = sign_d * chi_k0 - sign_d * (milnor as i64);
    let index_direct = chi_omega - sign_d * (milnor as i64);
    let agreement = s == chi_k0 && chi_omega == sign_d * chi_k0
        && index_formula == index_direct;
    if !agreement {
        return Err(AlgError::Disagreement(format!(
            "index routes differ: formula {index_formula}, direct {index_direct}"
        )));
    }
    Ok(IndexReport {
        chi_k0,
        chi_omega,
        milnor,
        index_formula,
        index_direct,
        terms,
        transform_used: g,
        agreement,
    })
}

// ---------------------------------------------------------------------------
