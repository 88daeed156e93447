//! Free and presented complexes: Koszul, generalized Koszul, the mixed double
//! complex, tensor products, homology lengths and Euler characteristics.

use std::collections::{BTreeMap, HashMap};

use crate::localalg::{
    is_member, subquotient_length, syzygies, RingSpec, SubmodulePresentation,
};
use crate::polyring::{Poly, PolyVec};
use crate::{AlgError, Length};

/// Cohomological complex of free modules, degrees `lo ..= lo + ranks.len() - 1`.
/// `diffs[k]` holds the columns of the differential out of degree `lo + k`;
/// column `j` is the image of the j-th basis vector, an element of the free
/// module one degree up.
#[derive(Debug, Clone)]
pub struct FreeComplex {
    pub ring: RingSpec,
    pub lo: i64,
    pub ranks: Vec<usize>,
    pub diffs: Vec<Vec<PolyVec>>,
}

impl FreeComplex {
    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.lo..=self.hi()
    }

    pub fn rank_at(&self, deg: i64) -> usize {
        let idx = deg - self.lo;
        if idx < 0 || idx as usize >= self.ranks.len() {
            0
        } else {
            self.ranks[idx as usize]
        }
    }

    /// Columns of the differential out of `deg`, if that degree is not the top.
    pub fn diff_at(&self, deg: i64) -> Option<&[PolyVec]> {
        let idx = deg - self.lo;
        if idx < 0 || idx as usize >= self.diffs.len() {
            None
        } else {
            Some(&self.diffs[idx as usize])
        }
    }

    /// Image of `v` (an element of the term at `deg`) under the differential.
    pub fn apply(&self, deg: i64, v: &PolyVec) -> PolyVec {
        let cols = self.diff_at(deg).expect("no differential at this degree");
        let target = self.rank_at(deg + 1);
        let mut out = PolyVec::zero(self.ring.nvars(), target);
        for (j, col) in cols.iter().enumerate() {
            out = out.add(&col.mul_poly(v.component(j)));
        }
        out
    }

    /// Check d² = 0 modulo the ring relations.
    pub fn check_d_squared(&self) -> Result<(), AlgError> {
        for k in 0..self.diffs.len().saturating_sub(1) {
            let deg = self.lo + k as i64;
            let target_rank = self.rank_at(deg + 2);
            let pres = SubmodulePresentation::new(
                self.ring.clone(),
                target_rank,
                Vec::new(),
            )?;
            for col in &self.diffs[k] {
                let image = self.apply(deg + 1, col);
                let ok = if self.ring.relations.is_empty() {
                    image.is_zero()
                } else {
                    image.is_zero() || is_member(&image, &pres)
                };
                if !ok {
                    return Err(AlgError::Disagreement(format!(
                        "d^2 != 0 out of degree {deg}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// View as a presented complex with no term relations (terms are free
    /// modules over the quotient ring).
    pub fn presented(&self) -> PresentedComplex {
        PresentedComplex {
            complex: self.clone(),
            term_relations: vec![Vec::new(); self.ranks.len()],
        }
    }
}

/// Complex whose term at degree i is R^{r_i} / (term relations); homology is
/// computed as a subquotient inside the free cover.
#[derive(Debug, Clone)]
pub struct PresentedComplex {
    pub complex: FreeComplex,
    /// Relation generators per degree, indexed parallel to `complex.ranks`.
    pub term_relations: Vec<Vec<PolyVec>>,
}

impl PresentedComplex {
    pub fn relations_at(&self, deg: i64) -> &[PolyVec] {
        let idx = (deg - self.complex.lo) as usize;
        &self.term_relations[idx]
    }

    /// Check that every differential maps term relations into term relations.
    pub fn check_relation_invariance(&self) -> Result<(), AlgError> {
        let c = &self.complex;
        for deg in c.lo..c.hi() {
            let target = SubmodulePresentation::new(
                c.ring.clone(),
                c.rank_at(deg + 1),
                self.relations_at(deg + 1).to_vec(),
            )?;
            for rel in self.relations_at(deg) {
                let image = c.apply(deg, rel);
                if !image.is_zero() && !is_member(&image, &target) {
                    return Err(AlgError::Disagreement(format!(
                        "differential does not preserve relations at degree {deg}"
                    )));
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Basis bookkeeping for exterior and symmetric powers
// ---------------------------------------------------------------------------

/// Strictly increasing index list identifying e_{j1} ∧ … ∧ e_{jp}.
pub type ExteriorBasisIndex = Vec<usize>;

/// All p-subsets of {0..n-1} in lexicographic order.
pub fn subsets(n: usize, p: usize) -> Vec<ExteriorBasisIndex> {
    let mut out = Vec::new();
    if p > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..p).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic p-subset
        let mut i = p;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - p {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..p {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Exponent vectors of total degree `t` in `m` symbols, in a fixed order.
pub fn sym_monomials(m: usize, t: u32) -> Vec<Vec<u32>> {
    if m == 0 {
        return if t == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    fn rec(m: usize, t: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if m == 1 {
            cur.push(t);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=t).rev() {
            cur.push(e);
            rec(m - 1, t - e, cur, out);
            cur.pop();
        }
    }
    rec(m, t, &mut Vec::new(), &mut out);
    out
}

/// Sign and result of e_j ∧ e_J, or None when j ∈ J.
fn wedge(j: usize, set: &[usize]) -> Option<(i64, ExteriorBasisIndex)> {
    let pos = set.partition_point(|&x| x < j);
    if set.get(pos) == Some(&j) {
        return None;
    }
    let mut out = set.to_vec();
    out.insert(pos, j);
    let sign = if pos % 2 == 0 { 1 } else { -1 };
    Some((sign, out))
}

/// All (sign, removed index, remaining set) triples of the contraction of e_J.
fn contractions(set: &[usize]) -> Vec<(i64, usize, ExteriorBasisIndex)> {
    set.iter()
        .enumerate()
        .map(|(l, &j)| {
            let mut rest = set.to_vec();
            rest.remove(l);
            let sign = if l % 2 == 0 { 1 } else { -1 };
            (sign, j, rest)
        })
        .collect()
}

fn check_maximal_ideal(ring: &RingSpec, elems: &[&Poly]) -> Result<(), AlgError> {
    for p in elems {
        if p.nvars() != ring.nvars() {
            return Err(AlgError::VariableCountMismatch(p.nvars(), ring.nvars()));
        }
        if !p.has_zero_constant_term() {
            return Err(AlgError::ConstantTerm);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Complex constructors
// ---------------------------------------------------------------------------

/// Koszul complex of a = (a_1, …, a_k): degrees -k..0, Λ^p R^k at degree
/// p - k, differential the exterior multiplication by Σ a_j e_j.
pub fn koszul_complex(ring: &RingSpec, a: &[Poly]) -> Result<FreeComplex, AlgError> {
    check_maximal_ideal(ring, &a.iter().collect::<Vec<_>>())?;
    let k = a.len();
    let nvars = ring.nvars();
    let bases: Vec<Vec<ExteriorBasisIndex>> = (0..=k).map(|p| subsets(k, p)).collect();
    let index: Vec<HashMap<ExteriorBasisIndex, usize>> = bases
        .iter()
        .map(|b| {
            b.iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i))
                .collect()
        })
        .collect();
    let ranks: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let mut diffs = Vec::new();
    for p in 0..k {
        let mut cols = Vec::with_capacity(ranks[p]);
        for set in &bases[p] {
            let mut col = PolyVec::zero(nvars, ranks[p + 1]);
            for (j, aj) in a.iter().enumerate() {
                if aj.is_zero() {
                    continue;
                }
                if let Some((sign, next)) = wedge(j, set) {
                    let t = index[p + 1][&next];
                    let add = if sign < 0 { aj.neg() } else { aj.clone() };
                    col.set_component(t, col.component(t).add(&add));
                }
            }
            cols.push(col);
        }
        diffs.push(cols);
    }
    let c = FreeComplex {
        ring: ring.clone(),
        lo: -(k as i64),
        ranks,
        diffs,
    };
    c.check_d_squared()?;
    Ok(c)
}

/// Generalized Koszul complex L_ν of an m×n matrix A: degrees -n..0, term at
/// degree q - n is Λ^{n-q} R^n ⊗ S_{ν+q} R^m, differential the contraction
/// d'' = Σ_i (Σ_j A_{ij} e_j* ⌟ ·) ⊗ x_i.
pub fn generalized_koszul(
    ring: &RingSpec,
    a_mat: &[Vec<Poly>],
    nu: u32,
) -> Result<FreeComplex, AlgError> {
    let m = a_mat.len();
    let n = if m == 0 {
        return Err(AlgError::InvalidInput("empty matrix".into()));
    } else {
        a_mat[0].len()
    };
    for row in a_mat {
        if row.len() != n {
            return Err(AlgError::InvalidInput("ragged matrix".into()));
        }
        check_maximal_ideal(ring, &row.iter().collect::<Vec<_>>())?;
    }
    let nvars = ring.nvars();

    // basis of degree q - n: (J, s) with |J| = n - q, |s| = ν + q
    let mut bases: Vec<Vec<(ExteriorBasisIndex, Vec<u32>)>> = Vec::new();
    for q in 0..=n {
        let mut b = Vec::new();
        for set in subsets(n, n - q) {
            for s in sym_monomials(m, nu + q as u32) {
                b.push((set.clone(), s));
            }
        }
        bases.push(b);
    }
    let index: Vec<HashMap<(ExteriorBasisIndex, Vec<u32>), usize>> = bases
        .iter()
        .map(|b| {
            b.iter()
                .enumerate()
                .map(|(i, x)| (x.clone(), i))
                .collect()
        })
        .collect();
    let ranks: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let mut diffs = Vec::new();
    for q in 0..n {
        let mut cols = Vec::with_capacity(ranks[q]);
        for (set, s) in &bases[q] {
            let mut col = PolyVec::zero(nvars, ranks[q + 1]);
            for (sign, j, rest) in contractions(set) {
                for (i, row) in a_mat.iter().enumerate() {
                    let entry = &row[j];
                    if entry.is_zero() {
                        continue;
                    }
                    let mut s2 = s.clone();
                    s2[i] += 1;
                    let t = index[q + 1][&(rest.clone(), s2)];
                    let add = if sign < 0 { entry.neg() } else { entry.clone() };
                    col.set_component(t, col.component(t).add(&add));
                }
            }
            cols.push(col);
        }
        diffs.push(cols);
    }
    let c = FreeComplex {
        ring: ring.clone(),
        lo: -(n as i64),
        ranks,
        diffs,
    };
    c.check_d_squared()?;
    Ok(c)
}

/// Total complex of the mixed double complex K_ν: K^{pq} = Λ^{p-q} R^n ⊗
/// S_{ν+q} R^m over the triangle 0 ≤ q ≤ p ≤ n, total degree p + q, total
/// differential D = d' + d''. Cartan calculus makes d' and d'' anticommute
/// whenever Σ_j a_j A_{ij} = 0 in the ring, so no extra sign twist is needed
/// (and d² = 0 is still verified explicitly below).
pub fn mixed_double_complex(
    ring: &RingSpec,
    a: &[Poly],
    a_mat: &[Vec<Poly>],
    nu: u32,
) -> Result<FreeComplex, AlgError> {
    let n = a.len();
    let m = a_mat.len();
    check_maximal_ideal(ring, &a.iter().collect::<Vec<_>>())?;
    for row in a_mat {
        if row.len() != n {
            return Err(AlgError::InvalidInput(
                "matrix width must match the length of a".into(),
            ));
        }
        check_maximal_ideal(ring, &row.iter().collect::<Vec<_>>())?;
    }
    let nvars = ring.nvars();
    // the structural relation Σ_j a_j A_{ij} = 0 in R, for every row i
    let rel_pres = SubmodulePresentation::new(ring.clone(), 1, Vec::new())?;
    for row in a_mat {
        let mut s = Poly::zero(nvars);
        for (aj, entry) in a.iter().zip(row) {
            s = s.add(&aj.mul(entry));
        }
        let ok = s.is_zero()
            || (!ring.relations.is_empty()
                && is_member(&PolyVec::from_poly(s.clone()), &rel_pres));
        if !ok {
            return Err(AlgError::RelationViolated);
        }
    }

    // basis of total degree t: (q, J, s) with p = t - q, q ≤ p ≤ n, |J| = p-q,
    // |s| = ν + q
    type Key = (usize, ExteriorBasisIndex, Vec<u32>);
    let top = 2 * n;
    let mut bases: Vec<Vec<Key>> = Vec::new();
    for t in 0..=top {
        let mut b = Vec::new();
        for q in 0..=t.min(n) {
            let p = t - q;
            if p < q || p > n {
                continue;
            }
            for set in subsets(n, p - q) {
                for s in sym_monomials(m, nu + q as u32) {
                    b.push((q, set.clone(), s));
                }
            }
        }
        bases.push(b);
    }
    let index: Vec<HashMap<Key, usize>> = bases
        .iter()
        .map(|b| {
            b.iter()
                .enumerate()
                .map(|(i, x)| (x.clone(), i))
                .collect()
        })
        .collect();
    let ranks: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let mut diffs = Vec::new();
    for t in 0..top {
        let mut cols = Vec::with_capacity(ranks[t]);
        for (q, set, s) in &bases[t] {
            let p = t - q;
            let mut col = PolyVec::zero(nvars, ranks[t + 1]);
            // d': wedge with Σ a_j e_j, (p, q) -> (p+1, q)
            if p < n {
                for (j, aj) in a.iter().enumerate() {
                    if aj.is_zero() {
                        continue;
                    }
                    if let Some((sign, next)) = wedge(j, set) {
                        let tgt = index[t + 1][&(*q, next, s.clone())];
                        let add = if sign < 0 { aj.neg() } else { aj.clone() };
                        col.set_component(tgt, col.component(tgt).add(&add));
                    }
                }
            }
            // d'': contraction against A, (p, q) -> (p, q+1)
            if q + 1 <= p {
                for (sign, j, rest) in contractions(set) {
                    for (i, row) in a_mat.iter().enumerate() {
                        let entry = &row[j];
                        if entry.is_zero() {
                            continue;
                        }
                        let mut s2 = s.clone();
                        s2[i] += 1;
                        let tgt = index[t + 1][&(q + 1, rest.clone(), s2)];
                        let add = if sign < 0 { entry.neg() } else { entry.clone() };
                        col.set_component(tgt, col.component(tgt).add(&add));
                    }
                }
            }
            cols.push(col);
        }
        diffs.push(cols);
    }
    let c = FreeComplex {
        ring: ring.clone(),
        lo: 0,
        ranks,
        diffs,
    };
    c.check_d_squared()?;
    Ok(c)
}

/// Total complex of C ⊗ D with the standard sign convention: on the block
/// C_i ⊗ D_j the differential is d_C ⊗ 1 + (-1)^i ⊗ d_D.
pub fn tensor_total(c: &FreeComplex, d: &FreeComplex) -> Result<FreeComplex, AlgError> {
    if c.ring != d.ring {
        return Err(AlgError::RingMismatch);
    }
    let nvars = c.ring.nvars();
    let lo = c.lo + d.lo;
    let hi = c.hi() + d.hi();
    let len = (hi - lo + 1) as usize;

    // block offsets: at total degree t, blocks (i, t-i) for i in C's range,
    // ordered by ascending i, laid out a-major
    let mut offsets: Vec<BTreeMap<i64, usize>> = vec![BTreeMap::new(); len];
    let mut ranks = vec![0usize; len];
    for t in lo..=hi {
        let k = (t - lo) as usize;
        let mut off = 0;
        for i in c.lo..=c.hi() {
            let j = t - i;
            let r = c.rank_at(i) * d.rank_at(j);
            if r > 0 {
                offsets[k].insert(i, off);
                off += r;
            }
        }
        ranks[k] = off;
    }

    let mut diffs = Vec::new();
    for t in lo..hi {
        let k = (t - lo) as usize;
        let mut cols = Vec::with_capacity(ranks[k]);
        for &i in offsets[k].keys() {
            let j = t - i;
            let rd = d.rank_at(j);
            for a_idx in 0..c.rank_at(i) {
                for b_idx in 0..rd {
                    let mut col = PolyVec::zero(nvars, ranks[k + 1]);
                    // d_C ⊗ 1 : lands in block (i+1, j)
                    if let Some(ccols) = c.diff_at(i) {
                        if let Some(&toff) = offsets[k + 1].get(&(i + 1)) {
                            let tcol = &ccols[a_idx];
                            for b2 in 0..c.rank_at(i + 1) {
                                let tgt = toff + b2 * d.rank_at(j) + b_idx;
                                let add = tcol.component(b2);
                                if !add.is_zero() {
                                    col.set_component(tgt, col.component(tgt).add(add));
                                }
                            }
                        }
                    }
                    // (-1)^i ⊗ d_D : lands in block (i, j+1)
                    if let Some(dcols) = d.diff_at(j) {
                        if let Some(&toff) = offsets[k + 1].get(&i) {
                            let tcol = &dcols[b_idx];
                            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
                            for b2 in 0..d.rank_at(j + 1) {
                                let tgt = toff + a_idx * d.rank_at(j + 1) + b2;
                                let add = if sign < 0 {
                                    tcol.component(b2).neg()
                                } else {
                                    tcol.component(b2).clone()
                                };
                                if !add.is_zero() {
                                    col.set_component(tgt, col.component(tgt).add(&add));
                                }
                            }
                        }
                    }
                    cols.push(col);
                }
            }
        }
        diffs.push(cols);
    }
    let out = FreeComplex {
        ring: c.ring.clone(),
        lo,
        ranks,
        diffs,
    };
    out.check_d_squared()?;
    Ok(out)
}

/// Tensor a free complex with the module E = R^r / N: each term R^{r_i}
/// becomes R^{r_i · r} with the relations of N replicated per block.
pub fn tensor_with_module(
    c: &FreeComplex,
    e: &SubmodulePresentation,
) -> Result<PresentedComplex, AlgError> {
    if c.ring != e.ring {
        return Err(AlgError::RingMismatch);
    }
    let nvars = c.ring.nvars();
    let r = e.rank;
    let ranks: Vec<usize> = c.ranks.iter().map(|&x| x * r).collect();
    let mut diffs = Vec::new();
    for (k, cols) in c.diffs.iter().enumerate() {
        let target = ranks[k + 1];
        let mut out_cols = Vec::with_capacity(ranks[k]);
        for col in cols {
            for u in 0..r {
                let mut oc = PolyVec::zero(nvars, target);
                for b in 0..col.rank() {
                    let p = col.component(b);
                    if !p.is_zero() {
                        oc.set_component(b * r + u, p.clone());
                    }
                }
                out_cols.push(oc);
            }
        }
        diffs.push(out_cols);
    }
    let mut term_relations = Vec::with_capacity(c.ranks.len());
    for &ri in &c.ranks {
        let mut rels = Vec::new();
        for a_idx in 0..ri {
            for w in &e.generators {
                let mut v = PolyVec::zero(nvars, ri * r);
                for u in 0..r {
                    v.set_component(a_idx * r + u, w.component(u).clone());
                }
                rels.push(v);
            }
        }
        term_relations.push(rels);
    }
    let out = PresentedComplex {
        complex: FreeComplex {
            ring: c.ring.clone(),
            lo: c.lo,
            ranks,
            diffs,
        },
        term_relations,
    };
    out.check_relation_invariance()?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Homology
// ---------------------------------------------------------------------------

/// Length of the homology of the presented complex in each degree.
pub fn homology_lengths(
    pc: &PresentedComplex,
) -> Result<BTreeMap<i64, Length>, AlgError> {
    let c = &pc.complex;
    let ring = &c.ring;
    let nvars = ring.nvars();
    let mut out = BTreeMap::new();
    for deg in c.lo..=c.hi() {
        let r = c.rank_at(deg);
        if r == 0 {
            out.insert(deg, Length::Finite(0));
            continue;
        }
        // kernel of the outgoing differential (into the presented target)
        let kernel_gens: Vec<PolyVec> = match c.diff_at(deg) {
            None => (0..r)
                .map(|i| PolyVec::unit(Poly::one(nvars), r, i))
                .collect(),
            Some(cols) => {
                let target_rank = c.rank_at(deg + 1);
                let mut gens: Vec<PolyVec> = cols.to_vec();
                let ncols = gens.len();
                gens.extend(pc.relations_at(deg + 1).iter().cloned());
                let pres =
                    SubmodulePresentation::new(ring.clone(), target_rank, gens)?;
                syzygies(&pres)
                    .generators
                    .iter()
                    .map(|s| s.slice(0, ncols))
                    .filter(|v| !v.is_zero())
                    .collect()
            }
        };
        // image of the incoming differential plus the term relations
        let mut image_gens: Vec<PolyVec> = match c.diff_at(deg - 1) {
            Some(cols) => cols.to_vec(),
            None => Vec::new(),
        };
        image_gens.extend(pc.relations_at(deg).iter().cloned());
        out.insert(
            deg,
            subquotient_length(ring, r, &kernel_gens, &image_gens)?,
        );
    }
    Ok(out)
}

/// Euler characteristic Σ (-1)^i L(H^i); errors with the first degree whose
/// homology has infinite length.
pub fn euler_characteristic(pc: &PresentedComplex) -> Result<i64, AlgError> {
    let h = homology_lengths(pc)?;
    let mut chi: i64 = 0;
    for (deg, len) in &h {
        match len {
            Length::Finite(l) => {
                let sign = if deg.rem_euclid(2) == 0 { 1 } else { -1 };
                chi += sign * (*l as i64);
            }
            Length::Infinite => return Err(AlgError::NotFiniteLength(*deg)),
        }
    }
    Ok(chi)
}

/// Euler characteristic of a free complex (no term relations).
pub fn euler_characteristic_free(c: &FreeComplex) -> Result<i64, AlgError> {
    euler_characteristic(&c.presented())
}

// ---------------------------------------------------------------------------
