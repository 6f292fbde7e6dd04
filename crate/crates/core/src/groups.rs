//! Partially ordered abelian groups with decidable positivity.
//!
//! Two families of carriers are supported:
//!
//! - `ℤⁿ` with either the coordinatewise order or the order whose positive
//!   cone is the monoid generated by a finite set of vectors. Cone membership
//!   is decided by a bounded search, the bound coming from a linear
//!   functional that is strictly positive on every generator.
//! - `d×d` Hermitian matrices with the Loewner order, decided through the
//!   minimum eigenvalue up to a tolerance.
//!
//! Integer arithmetic is overflow-checked; it never wraps.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::{Error, Result};

/// Default eigenvalue cutoff and entrywise equality tolerance for Hermitian carriers.
pub const DEFAULT_PSD_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntVector(Vec<i64>);

impl IntVector {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        Ok(IntVector(entries))
    }

    pub fn zeros(dimension: usize) -> Self {
        IntVector(vec![0; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    fn zip_checked(&self, other: &Self, op: fn(i64, i64) -> Option<i64>) -> Result<Self> {
        if self.dimension() != other.dimension() {
            return Err(Error::GroupMismatch);
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| op(a, b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(IntVector)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_checked(other, i64::checked_add)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_checked(other, i64::checked_sub)
    }

    pub fn checked_neg(&self) -> Result<Self> {
        self.checked_scale(-1)
    }

    pub fn checked_scale(&self, k: i64) -> Result<Self> {
        self.0
            .iter()
            .map(|&v| v.checked_mul(k).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(IntVector)
    }

    /// Exact dot product, computed in `i128`.
    pub fn dot(&self, other: &Self) -> Result<i128> {
        if self.dimension() != other.dimension() {
            return Err(Error::GroupMismatch);
        }
        Ok(dot_wide(&self.0, &other.0))
    }
}

fn dot_wide(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

/// Generators of a conical submonoid of `ℤⁿ` together with a functional `f`
/// such that `f(g) > 0` for every generator `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSpec {
    generators: Vec<IntVector>,
    functional: IntVector,
    // f(g_i), cached
    weights: Vec<i128>,
}

impl ConeSpec {
    /// Builds a cone. When `functional` is `None` the all-ones vector is used.
    pub fn new(generators: Vec<IntVector>, functional: Option<IntVector>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidCone("no generators".into()))?;
        let dim = first.dimension();
        let functional = functional.unwrap_or_else(|| IntVector(vec![1; dim]));
        if functional.dimension() != dim || generators.iter().any(|g| g.dimension() != dim) {
            return Err(Error::InvalidCone("dimension mismatch".into()));
        }
        let mut weights = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            let w = dot_wide(&functional.0, &g.0);
            if w <= 0 {
                return Err(Error::InvalidCone(alloc::format!(
                    "functional is not strictly positive on generator {i} (f(g) = {w})"
                )));
            }
            weights.push(w);
        }
        Ok(ConeSpec { generators, functional, weights })
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    pub fn functional(&self) -> &IntVector {
        &self.functional
    }

    pub fn dimension(&self) -> usize {
        self.functional.dimension()
    }

    /// Value of the positivity functional on `x`.
    pub fn weight(&self, x: &IntVector) -> i128 {
        dot_wide(&self.functional.0, &x.0)
    }

    /// Smallest value of the functional over the generators.
    pub fn min_weight(&self) -> i128 {
        self.weights.iter().copied().min().unwrap_or(1)
    }

    /// Decides whether `x` is a nonnegative integer combination of the
    /// generators. Each coefficient `k_i` is bounded by `f(x) / f(g_i)`.
    pub fn contains(&self, x: &IntVector) -> bool {
        if x.dimension() != self.dimension() {
            return false;
        }
        let rest: Vec<i128> = x.0.iter().map(|&v| v as i128).collect();
        self.search(0, rest)
    }

    fn search(&self, index: usize, rest: Vec<i128>) -> bool {
        if rest.iter().all(|&v| v == 0) {
            return true;
        }
        if index == self.generators.len() {
            return false;
        }
        let budget: i128 = rest.iter().zip(&self.functional.0).map(|(&r, &f)| r * f as i128).sum();
        if budget <= 0 {
            return false;
        }
        let g = &self.generators[index].0;
        let max_k = budget / self.weights[index];
        let mut rest = rest;
        for k in 0..=max_k {
            if k > 0 {
                for (r, &gv) in rest.iter_mut().zip(g) {
                    *r -= gv as i128;
                }
            }
            if self.search(index + 1, rest.clone()) {
                return true;
            }
        }
        false
    }

    /// All cone members `x` with `f(x) ≤ bound`, deduplicated and sorted.
    pub fn members_up_to(&self, bound: i128) -> Vec<IntVector> {
        let mut out = Vec::new();
        if bound < 0 {
            return Vec::new();
        }
        let mut acc = vec![0i128; self.dimension()];
        self.collect_members(0, &mut acc, bound, &mut out);
        let mut members: Vec<IntVector> = out
            .into_iter()
            .filter_map(|v| {
                v.iter()
                    .map(|&e| i64::try_from(e).ok())
                    .collect::<Option<Vec<_>>>()
                    .map(IntVector)
            })
            .collect();
        members.sort();
        members.dedup();
        members
    }

    fn collect_members(&self, index: usize, acc: &mut Vec<i128>, budget: i128, out: &mut Vec<Vec<i128>>) {
        if index == self.generators.len() {
            out.push(acc.clone());
            return;
        }
        let g = &self.generators[index].0;
        let w = self.weights[index];
        let mut k = 0;
        loop {
            self.collect_members(index + 1, acc, budget - k * w, out);
            if (k + 1) * w > budget {
                break;
            }
            k += 1;
            for (a, &gv) in acc.iter_mut().zip(g) {
                *a += gv as i128;
            }
        }
        for (a, &gv) in acc.iter_mut().zip(g) {
            *a -= k * gv as i128;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum IntOrder {
    Coordinatewise,
    Cone(ConeSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntVectorGroup {
    dimension: usize,
    order: IntOrder,
}

impl IntVectorGroup {
    pub fn coordinatewise(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::EmptyVector);
        }
        Ok(IntVectorGroup { dimension, order: IntOrder::Coordinatewise })
    }

    pub fn cone(cone: ConeSpec) -> Self {
        IntVectorGroup { dimension: cone.dimension(), order: IntOrder::Cone(cone) }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn order(&self) -> &IntOrder {
        &self.order
    }

    pub fn is_positive(&self, x: &IntVector) -> bool {
        match &self.order {
            IntOrder::Coordinatewise => x.0.iter().all(|&v| v >= 0),
            IntOrder::Cone(c) => c.contains(x),
        }
    }
}

/// A `d×d` complex matrix stored row-major, Hermitian up to the tolerance it
/// was built with (and exactly symmetrized afterwards).
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Validates `‖H − H*‖_max ≤ tol` and stores `(H + H*)/2`.
    pub fn new(dim: usize, entries: Vec<Complex64>, tol: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        if entries.len() != dim * dim {
            return Err(Error::TableSize { expected: dim * dim, actual: entries.len() });
        }
        let raw = HermitianMatrix { dim, entries };
        let mut residual: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                residual = residual.max(modulus(raw.at(i, j) - raw.at(j, i).conj()));
            }
        }
        if residual.is_nan() || residual > tol {
            return Err(Error::NotHermitian { residual });
        }
        Ok(raw.symmetrized())
    }

    pub fn from_real_rows(rows: &[&[f64]], tol: f64) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::TableSize { expected: dim * dim, actual: rows.iter().map(|r| r.len()).sum() });
        }
        let entries = rows.iter().flat_map(|r| r.iter().map(|&v| Complex64::new(v, 0.0))).collect();
        Self::new(dim, entries, tol)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let dim = values.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, &v) in values.iter().enumerate() {
            entries[i * dim + i] = Complex64::new(v, 0.0);
        }
        HermitianMatrix { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianMatrix { dim, entries: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    fn symmetrized(self) -> Self {
        let d = self.dim;
        let mut entries = self.entries.clone();
        for i in 0..d {
            for j in 0..d {
                entries[i * d + j] = (self.at(i, j) + self.at(j, i).conj()) * 0.5;
            }
        }
        HermitianMatrix { dim: d, entries }
    }

    fn zip(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::GroupMismatch);
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| op(a, b)).collect();
        Ok(HermitianMatrix { dim: self.dim, entries })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, k: f64) -> Self {
        HermitianMatrix { dim: self.dim, entries: self.entries.iter().map(|&a| a * k).collect() }
    }

    /// Plain matrix product `self · other`, returned as raw row-major entries.
    pub fn mul_raw(&self, other: &Self) -> Result<Vec<Complex64>> {
        if self.dim != other.dim {
            return Err(Error::GroupMismatch);
        }
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.at(i, k);
                for j in 0..d {
                    out[i * d + j] += a * other.at(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Product of two matrices whose product is Hermitian within `tol`
    /// (for instance, commuting Hermitian matrices).
    pub fn hermitian_product(&self, other: &Self, tol: f64) -> Result<Self> {
        Self::new(self.dim, self.mul_raw(other)?, tol)
    }

    /// `‖self·other − other·self‖_max`.
    pub fn commutator_norm(&self, other: &Self) -> Result<f64> {
        let ab = self.mul_raw(other)?;
        let ba = other.mul_raw(self)?;
        Ok(ab.iter().zip(&ba).map(|(&x, &y)| modulus(x - y)).fold(0.0, f64::max))
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::GroupMismatch);
        }
        Ok(self.entries.iter().zip(&other.entries).map(|(&x, &y)| modulus(x - y)).fold(0.0, f64::max))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        // H = A + iB is unitarily similar to the real symmetric [[A, -B], [B, A]]
        // up to doubled multiplicities.
        let d = self.dim;
        let n = 2 * d;
        let mut m = vec![0.0; n * n];
        for i in 0..d {
            for j in 0..d {
                let z = self.at(i, j);
                m[i * n + j] = z.re;
                m[(i + d) * n + (j + d)] = z.re;
                m[i * n + (j + d)] = -z.im;
                m[(i + d) * n + j] = z.im;
            }
        }
        let doubled = symmetric_eigenvalues(m, n);
        doubled.into_iter().step_by(2).collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }
}

fn modulus(z: Complex64) -> f64 {
    libm::hypot(z.re, z.im)
}

/// Cyclic Jacobi eigenvalue iteration for a real symmetric `n×n` matrix
/// stored row-major. Returns eigenvalues sorted ascending.
fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    let frob: f64 = libm::sqrt(a.iter().map(|v| v * v).sum());
    if frob == 0.0 {
        return vec![0.0; n];
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if libm::sqrt(off) <= 1e-17 * frob {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let t = 1.0 / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                    if theta < 0.0 { -t } else { t }
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut diag: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    diag.sort_by(f64::total_cmp);
    diag
}

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianGroup {
    dimension: usize,
    psd_tolerance: f64,
}

impl HermitianGroup {
    pub fn new(dimension: usize, psd_tolerance: f64) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::EmptyVector);
        }
        if !psd_tolerance.is_finite() || psd_tolerance < 0.0 {
            return Err(Error::InvalidTolerance(psd_tolerance));
        }
        Ok(HermitianGroup { dimension, psd_tolerance })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn psd_tolerance(&self) -> f64 {
        self.psd_tolerance
    }

    pub fn is_positive(&self, x: &HermitianMatrix) -> bool {
        x.min_eigenvalue() >= -self.psd_tolerance
    }
}

/// A carrier group: which ambient group the effects live in.
#[derive(Clone, Debug, PartialEq)]
pub enum Group {
    Int(IntVectorGroup),
    Hermitian(HermitianGroup),
}

/// An element of some [`Group`]. The variant and dimension act as the group tag.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupElement {
    Int(IntVector),
    Hermitian(HermitianMatrix),
}

impl GroupElement {
    pub fn int(entries: &[i64]) -> Self {
        GroupElement::Int(IntVector(entries.to_vec()))
    }

    pub fn dimension(&self) -> usize {
        match self {
            GroupElement::Int(v) => v.dimension(),
            GroupElement::Hermitian(m) => m.dimension(),
        }
    }

    pub fn as_int(&self) -> Option<&IntVector> {
        match self {
            GroupElement::Int(v) => Some(v),
            GroupElement::Hermitian(_) => None,
        }
    }

    pub fn as_hermitian(&self) -> Option<&HermitianMatrix> {
        match self {
            GroupElement::Hermitian(m) => Some(m),
            GroupElement::Int(_) => None,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (GroupElement::Int(a), GroupElement::Int(b)) => a.checked_add(b).map(GroupElement::Int),
            (GroupElement::Hermitian(a), GroupElement::Hermitian(b)) => a.add(b).map(GroupElement::Hermitian),
            _ => Err(Error::GroupMismatch),
        }
    }

    pub fn subtract(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (GroupElement::Int(a), GroupElement::Int(b)) => a.checked_sub(b).map(GroupElement::Int),
            (GroupElement::Hermitian(a), GroupElement::Hermitian(b)) => a.sub(b).map(GroupElement::Hermitian),
            _ => Err(Error::GroupMismatch),
        }
    }

    pub fn negate(&self) -> Result<Self> {
        self.scalar_multiply(-1)
    }

    pub fn scalar_multiply(&self, k: i64) -> Result<Self> {
        match self {
            GroupElement::Int(a) => a.checked_scale(k).map(GroupElement::Int),
            GroupElement::Hermitian(a) => Ok(GroupElement::Hermitian(a.scale(k as f64))),
        }
    }
}

impl Group {
    pub fn dimension(&self) -> usize {
        match self {
            Group::Int(g) => g.dimension(),
            Group::Hermitian(g) => g.dimension(),
        }
    }

    /// Whether `x` carries this group's tag (variant and dimension).
    pub fn contains(&self, x: &GroupElement) -> bool {
        matches!(
            (self, x),
            (Group::Int(_), GroupElement::Int(_)) | (Group::Hermitian(_), GroupElement::Hermitian(_))
        ) && x.dimension() == self.dimension()
    }

    fn check(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) { Ok(()) } else { Err(Error::GroupMismatch) }
    }

    pub fn zero(&self) -> GroupElement {
        match self {
            Group::Int(g) => GroupElement::Int(IntVector::zeros(g.dimension())),
            Group::Hermitian(g) => GroupElement::Hermitian(HermitianMatrix::zeros(g.dimension())),
        }
    }

    /// Tolerance used for eigenvalue cutoffs and equality; 0 on integer carriers.
    pub fn tolerance(&self) -> f64 {
        match self {
            Group::Int(_) => 0.0,
            Group::Hermitian(g) => g.psd_tolerance(),
        }
    }

    pub fn is_positive(&self, x: &GroupElement) -> bool {
        match (self, x) {
            (Group::Int(g), GroupElement::Int(v)) if v.dimension() == g.dimension() => g.is_positive(v),
            (Group::Hermitian(g), GroupElement::Hermitian(m)) if m.dimension() == g.dimension() => {
                g.is_positive(m)
            }
            _ => false,
        }
    }

    /// `x ≤ y` iff `y − x` is positive.
    pub fn leq(&self, x: &GroupElement, y: &GroupElement) -> Result<bool> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.is_positive(&y.subtract(x)?))
    }

    /// Exact equality on integer carriers, entrywise within the PSD tolerance on Hermitian ones.
    pub fn equals(&self, x: &GroupElement, y: &GroupElement) -> Result<bool> {
        self.check(x)?;
        self.check(y)?;
        match (x, y) {
            (GroupElement::Int(a), GroupElement::Int(b)) => Ok(a == b),
            (GroupElement::Hermitian(a), GroupElement::Hermitian(b)) => {
                Ok(a.max_abs_diff(b)? <= self.tolerance())
            }
            _ => Err(Error::GroupMismatch),
        }
    }

    /// Distance between two elements: 0/1 on integer carriers, max-entry norm on Hermitian ones.
    pub fn residual(&self, x: &GroupElement, y: &GroupElement) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        match (x, y) {
            (GroupElement::Int(a), GroupElement::Int(b)) => Ok(if a == b { 0.0 } else { 1.0 }),
            (GroupElement::Hermitian(a), GroupElement::Hermitian(b)) => a.max_abs_diff(b),
            _ => Err(Error::GroupMismatch),
        }
    }
}

/// A group with a distinguished positive, nonzero unit `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitalGroup {
    group: Group,
    unit: GroupElement,
}

impl UnitalGroup {
    pub fn new(group: Group, unit: GroupElement) -> Result<Self> {
        if !group.contains(&unit) {
            return Err(Error::GroupMismatch);
        }
        if !group.is_positive(&unit) || group.equals(&unit, &group.zero())? {
            return Err(Error::InvalidUnit);
        }
        Ok(UnitalGroup { group, unit })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn unit(&self) -> &GroupElement {
        &self.unit
    }
}
