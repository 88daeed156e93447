//! Standard bases over the localized (quotient) ring via Mora's weak normal
//! form, colengths, syzygies, lifting, and subquotient lengths. This is the
//! length oracle every other module consumes.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::polyring::{Monomial, MonomialOrder, Poly, PolyVec, Rational};
use crate::{AlgError, Length};

/// The ambient localized ring: ℚ[variables] localized at the origin, modulo
/// the listed relations (empty for the plain local ring).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingSpec {
    pub variables: Vec<String>,
    pub relations: Vec<Poly>,
}

impl RingSpec {
    pub fn new(variables: Vec<String>, relations: Vec<Poly>) -> Result<Self, AlgError> {
        let nvars = variables.len();
        for r in &relations {
            if r.nvars() != nvars {
                return Err(AlgError::VariableCountMismatch(r.nvars(), nvars));
            }
            if !r.has_zero_constant_term() {
                return Err(AlgError::ConstantTerm);
            }
        }
        Ok(RingSpec {
            variables,
            relations,
        })
    }

    pub fn polynomial(names: &[&str]) -> Self {
        RingSpec {
            variables: names.iter().map(|s| s.to_string()).collect(),
            relations: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    /// Krull dimension, assuming the relations form a regular sequence (all
    /// fixture quotient rings are complete intersections).
    pub fn dimension(&self) -> usize {
        self.nvars().saturating_sub(self.relations.len())
    }

    pub fn parse(&self, text: &str) -> Result<Poly, AlgError> {
        crate::polyring::parse_poly(text, &self.variables)
    }

    /// Relation generators spread over the basis vectors of R^rank.
    pub fn relation_vectors(&self, rank: usize) -> Vec<PolyVec> {
        let mut out = Vec::new();
        for rel in &self.relations {
            for j in 0..rank {
                out.push(PolyVec::unit(rel.clone(), rank, j));
            }
        }
        out
    }
}

/// A finitely generated submodule of R^rank given by generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubmodulePresentation {
    pub ring: RingSpec,
    pub rank: usize,
    pub generators: Vec<PolyVec>,
}

impl SubmodulePresentation {
    pub fn new(
        ring: RingSpec,
        rank: usize,
        generators: Vec<PolyVec>,
    ) -> Result<Self, AlgError> {
        for g in &generators {
            if g.rank() != rank {
                return Err(AlgError::RankMismatch(g.rank(), rank));
            }
            if g.nvars() != ring.nvars() {
                return Err(AlgError::VariableCountMismatch(g.nvars(), ring.nvars()));
            }
        }
        Ok(SubmodulePresentation {
            ring,
            rank,
            generators,
        })
    }

    /// Ideal presentation: rank-1 submodule from ring elements.
    pub fn ideal(ring: RingSpec, gens: Vec<Poly>) -> Self {
        SubmodulePresentation {
            ring,
            rank: 1,
            generators: gens.into_iter().map(PolyVec::from_poly).collect(),
        }
    }
}

/// Standard basis with its order and source presentation.
#[derive(Debug, Clone)]
pub struct StandardBasis {
    pub order: MonomialOrder,
    pub elements: Vec<PolyVec>,
    pub source: SubmodulePresentation,
}

// ---------------------------------------------------------------------------
// Mora weak normal form
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct Reducer {
    vec: PolyVec,
    cofactor: Poly,
    comp: usize,
    mono: Monomial,
    coeff: Rational,
    ecart: u32,
}

fn make_reducer(v: &PolyVec, cofactor: Poly, order: &MonomialOrder) -> Option<Reducer> {
    let (comp, mono, coeff) = order.leading_term(v)?;
    let ecart = v.total_degree().unwrap_or(0).saturating_sub(mono.degree());
    Some(Reducer {
        vec: v.clone(),
        cofactor,
        comp,
        mono: mono.clone(),
        coeff: coeff.clone(),
        ecart,
    })
}

/// Mora weak normal form with cofactor: returns (h, u) such that
/// h = u * f + (combination of the reducers), with u a local unit.
fn mora_nf_cofactor(
    f: &PolyVec,
    reducers: &[PolyVec],
    order: &MonomialOrder,
) -> (PolyVec, Poly) {
    let nvars = f.nvars();
    let mut pool: Vec<Reducer> = reducers
        .iter()
        .filter_map(|g| make_reducer(g, Poly::zero(nvars), order))
        .collect();
    let mut h = f.clone();
    let mut u = Poly::one(nvars);
    let mut steps: u64 = 0;
    loop {
        let Some((hc, hm, hcoef)) = order.leading_term(&h) else {
            break;
        };
        let hm = hm.clone();
        let hcoef = hcoef.clone();
        let h_ecart = h.total_degree().unwrap_or(0).saturating_sub(hm.degree());
        let mut best: Option<usize> = None;
        for (i, t) in pool.iter().enumerate() {
            if t.comp == hc && t.mono.divides(&hm) {
                match best {
                    None => best = Some(i),
                    Some(b) => {
                        if t.ecart < pool[b].ecart {
                            best = Some(i);
                        }
                    }
                }
            }
        }
        let Some(i) = best else { break };
        if pool[i].ecart > h_ecart {
            if let Some(r) = make_reducer(&h, u.clone(), order) {
                pool.push(r);
            }
        }
        let m = pool[i].mono.div_into(&hm);
        let c = &hcoef / &pool[i].coeff;
        h = h.sub(&pool[i].vec.mul_term(&m, &c));
        u = u.sub(&pool[i].cofactor.mul_term(&m, &c));
        steps += 1;
        assert!(steps < 2_000_000, "mora normal form did not terminate");
    }
    (h, u)
}

/// Mora weak normal form of `f` against the generator list `gens`.
pub fn mora_normal_form(
    f: &PolyVec,
    gens: &[PolyVec],
    order: &MonomialOrder,
) -> Result<PolyVec, AlgError> {
    for g in gens {
        if g.rank() != f.rank() {
            return Err(AlgError::RankMismatch(g.rank(), f.rank()));
        }
    }
    Ok(mora_nf_cofactor(f, gens, order).0)
}

// ---------------------------------------------------------------------------
// Standard basis computation (with a process-wide cache)
// ---------------------------------------------------------------------------

type CacheKey = (Vec<PolyVec>, MonomialOrder);
type Cache = Mutex<HashMap<CacheKey, Arc<Vec<PolyVec>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn normalize(v: &PolyVec, order: &MonomialOrder) -> PolyVec {
    match order.leading_term(v) {
        Some((_, _, c)) => {
            let inv = Rational::one() / c.clone();
            v.scale(&inv)
        }
        None => v.clone(),
    }
}

fn lcm_mono(a: &Monomial, b: &Monomial) -> Monomial {
    Monomial(a.0.iter().zip(&b.0).map(|(x, y)| *x.max(y)).collect())
}

/// Standard basis of the module generated by `gens` (no implicit relations;
/// callers augment with ring relations as appropriate).
pub fn standard_basis_raw(gens: &[PolyVec], order: &MonomialOrder) -> Arc<Vec<PolyVec>> {
    let key = (gens.to_vec(), *order);
    if let Some(hit) = cache().lock().unwrap().get(&key) {
        return hit.clone();
    }

    struct Elt {
        vec: PolyVec,
        comp: usize,
        mono: Monomial,
    }
    let mut basis: Vec<Elt> = Vec::new();
    let push = |basis: &mut Vec<Elt>, v: PolyVec, order: &MonomialOrder| -> Option<usize> {
        let v = normalize(&v, order);
        let (comp, mono, _) = order.leading_term(&v)?;
        let mono = mono.clone();
        basis.push(Elt {
            vec: v,
            comp,
            mono,
        });
        Some(basis.len() - 1)
    };

    let mut pairs: Vec<(u32, usize, usize)> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        if let Some(i) = push(&mut basis, g.clone(), order) {
            for j in 0..i {
                if basis[j].comp == basis[i].comp {
                    let d = lcm_mono(&basis[j].mono, &basis[i].mono).degree();
                    pairs.push((d, j, i));
                }
            }
        }
    }

    while !pairs.is_empty() {
        // smallest lcm degree first
        let mut k = 0;
        for i in 1..pairs.len() {
            if pairs[i].0 < pairs[k].0 {
                k = i;
            }
        }
        let (_, i, j) = pairs.swap_remove(k);
        let lcm = lcm_mono(&basis[i].mono, &basis[j].mono);
        let mi = basis[i].mono.div_into(&lcm);
        let mj = basis[j].mono.div_into(&lcm);
        let one = Rational::one();
        let s = basis[i]
            .vec
            .mul_term(&mi, &one)
            .sub(&basis[j].vec.mul_term(&mj, &one));
        let vecs: Vec<PolyVec> = basis.iter().map(|e| e.vec.clone()).collect();
        let (r, _) = mora_nf_cofactor(&s, &vecs, order);
        if r.is_zero() {
            continue;
        }
        if let Some(newi) = push(&mut basis, r, order) {
            for j2 in 0..newi {
                if basis[j2].comp == basis[newi].comp {
                    let d = lcm_mono(&basis[j2].mono, &basis[newi].mono).degree();
                    pairs.push((d, j2, newi));
                }
            }
        }
    }

    // drop elements whose leading term is a proper multiple of another's
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            if basis[j].comp == basis[i].comp && basis[j].mono.divides(&basis[i].mono) {
                if basis[j].mono != basis[i].mono || j < i {
                    keep[i] = false;
                    break;
                }
            }
        }
    }
    let result: Arc<Vec<PolyVec>> = Arc::new(
        basis
            .into_iter()
            .zip(keep)
            .filter_map(|(e, k)| k.then_some(e.vec))
            .collect(),
    );
    cache()
        .lock()
        .unwrap()
        .insert(key, result.clone());
    result
}

/// Standard basis of the presentation, with the quotient-ring relations
/// implicitly included.
pub fn standard_basis(
    p: &SubmodulePresentation,
    order: &MonomialOrder,
) -> StandardBasis {
    let mut gens = p.generators.clone();
    gens.extend(p.ring.relation_vectors(p.rank));
    let elements = standard_basis_raw(&gens, order).as_ref().clone();
    StandardBasis {
        order: *order,
        elements,
        source: p.clone(),
    }
}

// ---------------------------------------------------------------------------
// Colength
// ---------------------------------------------------------------------------

/// Count monomials in the box below `bounds` that no lead divides.
fn count_standard_monomials(leads: &[Monomial], bounds: &[u32]) -> u64 {
    let nvars = bounds.len();
    let mut count = 0u64;
    let mut cur = vec![0u32; nvars];
    'outer: loop {
        let m = Monomial(cur.clone());
        if !leads.iter().any(|l| l.divides(&m)) {
            count += 1;
        }
        // increment odometer
        for i in 0..nvars {
            cur[i] += 1;
            if cur[i] < bounds[i] {
                continue 'outer;
            }
            cur[i] = 0;
        }
        break;
    }
    if nvars == 0 {
        // single monomial 1, counted by the first pass
    }
    count
}

/// Length of R^rank / N over the local ring (quotient relations included).
pub fn colength(p: &SubmodulePresentation) -> Length {
    if p.rank == 0 {
        return Length::Finite(0);
    }
    let order = MonomialOrder::local();
    let sb = standard_basis(p, &order);
    let nvars = p.ring.nvars();
    let mut leads: Vec<Vec<Monomial>> = vec![Vec::new(); p.rank];
    for e in &sb.elements {
        if let Some((c, m, _)) = order.leading_term(e) {
            leads[c].push(m.clone());
        }
    }
    let mut total = 0u64;
    for comp_leads in &leads {
        let mut bounds = vec![0u32; nvars];
        for i in 0..nvars {
            // smallest pure power of variable i in the leading ideal
            let b = comp_leads
                .iter()
                .filter(|m| m.0.iter().enumerate().all(|(j, &e)| j == i || e == 0))
                .map(|m| m.0[i])
                .min();
            match b {
                Some(b) => bounds[i] = b,
                None => return Length::Infinite,
            }
        }
        if nvars == 0 {
            // R = ℚ: component is either killed by a unit generator or free
            if comp_leads.is_empty() {
                return Length::Infinite;
            }
            continue;
        }
        if bounds.iter().all(|&b| b == 0) {
            continue;
        }
        total += count_standard_monomials(comp_leads, &bounds);
    }
    Length::Finite(total)
}

// ---------------------------------------------------------------------------
// Syzygies and lifting
// ---------------------------------------------------------------------------

fn extended_generators(p: &SubmodulePresentation) -> (usize, usize, Vec<PolyVec>) {
    let r = p.rank;
    let k = p.generators.len();
    let nvars = p.ring.nvars();
    let mut ext = Vec::new();
    for (i, g) in p.generators.iter().enumerate() {
        let tail = PolyVec::unit(Poly::one(nvars), k, i);
        ext.push(g.concat(&tail));
    }
    for rel in p.ring.relation_vectors(r) {
        ext.push(rel.concat(&PolyVec::zero(nvars, k)));
    }
    (r, k, ext)
}

/// Generators of the kernel of R^{|G|} → R^rank, eᵢ ↦ Gᵢ, over the quotient
/// ring (relations included).
pub fn syzygies(p: &SubmodulePresentation) -> SubmodulePresentation {
    let (r, k, ext) = extended_generators(p);
    let order = MonomialOrder::local_elimination();
    let sb = standard_basis_raw(&ext, &order);
    let mut gens = Vec::new();
    for e in sb.iter() {
        if e.slice(0, r).is_zero() {
            gens.push(e.slice(r, k));
        }
    }
    SubmodulePresentation {
        ring: p.ring.clone(),
        rank: k,
        generators: gens,
    }
}

/// Result of a successful lift: u * f = Σ coeffs[i] * Gᵢ modulo the ring
/// relations, with `unit` a local unit.
#[derive(Debug, Clone)]
pub struct Lift {
    pub coeffs: Vec<Poly>,
    pub unit: Poly,
}

/// Express `f` in terms of the presentation's generators, or None when `f`
/// does not lie in the submodule (plus relations) over the local ring.
pub fn lift(f: &PolyVec, p: &SubmodulePresentation) -> Option<Lift> {
    assert_eq!(f.rank(), p.rank);
    let (r, k, ext) = extended_generators(p);
    let order = MonomialOrder::local_elimination();
    let sb = standard_basis_raw(&ext, &order);
    let f_ext = f.concat(&PolyVec::zero(f.nvars(), k));
    let (h, u) = mora_nf_cofactor(&f_ext, sb.as_slice(), &order);
    if !h.slice(0, r).is_zero() {
        return None;
    }
    debug_assert!(!u.constant_term().is_zero(), "cofactor must be a unit");
    let coeffs = h
        .slice(r, k)
        .components()
        .iter()
        .map(|q| q.neg())
        .collect();
    Some(Lift { coeffs, unit: u })
}

/// Membership of `f` in the submodule over the local ring.
pub fn is_member(f: &PolyVec, p: &SubmodulePresentation) -> bool {
    lift(f, p).is_some()
}

/// Length of (kernel)/(image) inside R^rank, where the submodule generated by
/// `image_gens` must be contained in the one generated by `kernel_gens`.
pub fn subquotient_length(
    ring: &RingSpec,
    rank: usize,
    kernel_gens: &[PolyVec],
    image_gens: &[PolyVec],
) -> Result<Length, AlgError> {
    let kp = SubmodulePresentation::new(ring.clone(), rank, kernel_gens.to_vec())?;
    let s = kernel_gens.len();
    let mut pres_gens: Vec<PolyVec> = Vec::new();
    for (idx, img) in image_gens.iter().enumerate() {
        match lift(img, &kp) {
            Some(l) => pres_gens.push(PolyVec::from_components(ring.nvars(), l.coeffs)),
            None => return Err(AlgError::ImageNotInKernel(idx)),
        }
    }
    pres_gens.extend(syzygies(&kp).generators);
    let pres = SubmodulePresentation {
        ring: ring.clone(),
        rank: s,
        generators: pres_gens,
    };
    Ok(colength(&pres))
}

// ---------------------------------------------------------------------------
