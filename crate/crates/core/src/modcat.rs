//! Finite-dimensional algebras, modules and bimodules over an exact field,
//! with tensor and hom functors, finite (co)limits and split tests.
//!
//! Conventions:
//! - an algebra of dimension `d` is stored by its left multiplication
//!   matrices `L_a` (column `b` of `L_a` is `e_a e_b`) and its unit vector;
//! - a left module stores one action matrix per basis element of its algebra;
//! - a bimodule stores left matrices `L_a` and right matrices `R_b` with
//!   `v · b = R_b v`, so `R_{bc} = R_c R_b`;
//! - `e_p ⊗ e_q` in a plain tensor of spaces of dimensions `m, n` has index
//!   `p * n + q`, matching [`Matrix::kron`].

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Quotient, Scalar};
use crate::report::ValidationReport;

/// A unital associative algebra given by structure constants.
#[derive(Clone, Debug)]
pub struct Algebra {
    name: String,
    field: Field,
    left: Vec<Matrix>,
    unit: Matrix,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Algebra) -> bool {
        self.field == other.field && self.unit == other.unit && self.left == other.left
    }
}

impl Eq for Algebra {}

/// Whether two shared algebras are the same (by pointer, then by value).
pub fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Algebra {
    /// From left multiplication matrices and the unit, without validation.
    pub fn from_left_multiplication(name: &str, field: Field, left: Vec<Matrix>, unit: Matrix) -> Result<Algebra> {
        let d = left.len();
        if d == 0 {
            return Err(Error::Invalid("an algebra needs a nonzero basis".into()));
        }
        if left.iter().any(|l| l.shape() != (d, d)) || unit.shape() != (d, 1) {
            return Err(Error::DimensionMismatch(format!("structure constants of `{name}` are not {d}x{d}")));
        }
        Ok(Algebra { name: name.to_string(), field, left, unit })
    }

    /// From `products[a][b] = coordinates of e_a e_b`.
    pub fn from_structure_constants(name: &str, field: Field, products: &[Vec<Vec<Scalar>>], unit: &[Scalar]) -> Result<Algebra> {
        let d = products.len();
        if products.iter().any(|row| row.len() != d || row.iter().any(|v| v.len() != d)) || unit.len() != d {
            return Err(Error::DimensionMismatch(format!("structure constants of `{name}` are not {d}x{d}x{d}")));
        }
        let left = (0..d).map(|a| Matrix::from_fn(field, d, d, |k, b| products[a][b][k].clone())).collect();
        Algebra::from_left_multiplication(name, field, left, Matrix::column_vector(field, unit))
    }

    /// Validates and wraps for sharing.
    pub fn checked(self) -> Result<Arc<Algebra>> {
        let r = self.validate();
        match r.first() {
            None => Ok(Arc::new(self)),
            Some(v) => Err(Error::Invalid(format!("algebra `{}` fails {}: {}", self.name, v.axiom, v.detail))),
        }
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground(field: Field) -> Arc<Algebra> {
        Arc::new(Algebra { name: "k".into(), field, left: vec![Matrix::identity(field, 1)], unit: Matrix::identity(field, 1) })
    }

    /// Monoid algebra from a table `table[a][b] = index of a·b`.
    pub fn monoid_algebra(name: &str, field: Field, table: &[Vec<usize>], unit: usize) -> Result<Arc<Algebra>> {
        let d = table.len();
        let left = (0..d)
            .map(|a| Matrix::from_fn(field, d, d, |k, b| if table[a][b] == k { field.one() } else { field.zero() }))
            .collect();
        Algebra::from_left_multiplication(name, field, left, Matrix::unit_vector(field, d, unit))?.checked()
    }

    /// Group algebra of the cyclic group of order `n`, basis `1, g, ..., g^{n-1}`.
    pub fn cyclic_group_algebra(field: Field, n: usize) -> Arc<Algebra> {
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Algebra::monoid_algebra(&format!("kC{n}"), field, &table, 0).expect("group algebra is valid")
    }

    /// `k[x]/(x^n)` with basis `1, x, ..., x^{n-1}`.
    pub fn truncated_polynomial(field: Field, n: usize) -> Arc<Algebra> {
        let left = (0..n)
            .map(|a| Matrix::from_fn(field, n, n, |k, b| if a + b == k { field.one() } else { field.zero() }))
            .collect();
        let name = format!("k[x]/(x^{n})");
        Algebra::from_left_multiplication(&name, field, left, Matrix::unit_vector(field, n, 0))
            .and_then(|a| a.checked())
            .expect("truncated polynomial ring is valid")
    }

    /// Upper triangular `2 x 2` matrices, basis `E11, E12, E22`.
    pub fn upper_triangular(field: Field) -> Arc<Algebra> {
        // E11 E11 = E11, E11 E12 = E12, E12 E22 = E12, E22 E22 = E22.
        let mut table = vec![vec![None; 3]; 3];
        table[0][0] = Some(0);
        table[0][1] = Some(1);
        table[1][2] = Some(1);
        table[2][2] = Some(2);
        let left = (0..3)
            .map(|a| Matrix::from_fn(field, 3, 3, |k, b| if table[a][b] == Some(k) { field.one() } else { field.zero() }))
            .collect();
        let unit = Matrix::from_i64(field, &[vec![1], vec![0], vec![1]]);
        Algebra::from_left_multiplication("T2(k)", field, left, unit)
            .and_then(|a| a.checked())
            .expect("triangular algebra is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.left.len()
    }

    pub fn left_multiplication(&self, a: usize) -> &Matrix {
        &self.left[a]
    }

    pub fn unit(&self) -> &Matrix {
        &self.unit
    }

    /// Right multiplication by `e_a`: column `b` is `e_b e_a`.
    pub fn right_multiplication(&self, a: usize) -> Matrix {
        let d = self.dim();
        Matrix::hstack(self.field, d, &(0..d).map(|b| self.left[b].column(a)).collect::<Vec<_>>())
    }

    /// Coordinates of `e_a e_b`.
    pub fn product(&self, a: usize, b: usize) -> Matrix {
        self.left[a].column(b)
    }

    /// `Σ_k v_k X_k` for a coordinate vector `v`.
    pub fn combine(&self, v: &Matrix, xs: &[Matrix]) -> Matrix {
        let mut acc = Matrix::zeros(self.field, xs[0].rows(), xs[0].cols());
        for (k, x) in xs.iter().enumerate() {
            let c = v.get(k, 0);
            if !c.is_zero() {
                acc.add_assign(&x.scale(&c));
            }
        }
        acc
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new(format!("algebra {}", self.name));
        let d = self.dim();
        for a in 0..d {
            for b in 0..d {
                let lhs = self.left[a].mul(&self.left[b]);
                let rhs = self.combine(&self.product(a, b), &self.left);
                r.check_eq(&lhs, &rhs, "associativity", &[&a.to_string(), &b.to_string()]);
            }
        }
        r.check_eq(&self.combine(&self.unit, &self.left), &Matrix::identity(self.field, d), "left unit", &[]);
        for a in 0..d {
            r.check_eq(&self.left[a].mul(&self.unit), &Matrix::unit_vector(self.field, d, a), "right unit", &[&a.to_string()]);
        }
        r
    }

    /// The opposite algebra, `e_a ∗ e_b = e_b e_a`.
    pub fn opposite(&self) -> Algebra {
        let d = self.dim();
        let left = (0..d).map(|a| self.right_multiplication(a)).collect();
        Algebra { name: format!("{}^op", self.name), field: self.field, left, unit: self.unit.clone() }
    }

    /// The regular left module.
    pub fn regular_module(self: &Arc<Self>) -> Module {
        Module { algebra: self.clone(), dim: self.dim(), action: self.left.clone() }
    }

    /// The regular bimodule `A` over `(A, A)`.
    pub fn regular_bimodule(self: &Arc<Self>) -> Bimodule {
        let d = self.dim();
        Bimodule {
            left_algebra: self.clone(),
            right_algebra: self.clone(),
            dim: d,
            left: self.left.clone(),
            right: (0..d).map(|b| self.right_multiplication(b)).collect(),
        }
    }

    /// Algebra morphism check for a `d' x d` matrix `f: self → other`.
    pub fn is_homomorphism(&self, other: &Algebra, f: &Matrix) -> bool {
        if f.shape() != (other.dim(), self.dim()) || f.mul(&self.unit) != other.unit {
            return false;
        }
        (0..self.dim()).all(|a| {
            (0..self.dim()).all(|b| f.mul(&self.product(a, b)) == other.combine(&f.column(a), &other.left).mul(&f.column(b)))
        })
    }
}

/// A finite-dimensional left module.
#[derive(Clone, Debug)]
pub struct Module {
    algebra: Arc<Algebra>,
    dim: usize,
    action: Vec<Matrix>,
}

impl PartialEq for Module {
    fn eq(&self, other: &Module) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.dim == other.dim && self.action == other.action
    }
}

impl Module {
    pub fn new(algebra: &Arc<Algebra>, dim: usize, action: Vec<Matrix>) -> Result<Module> {
        if action.len() != algebra.dim() || action.iter().any(|m| m.shape() != (dim, dim)) {
            return Err(Error::DimensionMismatch(format!("module over `{}` needs {} matrices of size {dim}", algebra.name, algebra.dim())));
        }
        Ok(Module { algebra: algebra.clone(), dim, action })
    }

    /// Builds and validates.
    pub fn checked(algebra: &Arc<Algebra>, dim: usize, action: Vec<Matrix>) -> Result<Module> {
        let m = Module::new(algebra, dim, action)?;
        match m.validate().first() {
            None => Ok(m),
            Some(v) => Err(Error::Invalid(format!("module fails {}: {}", v.axiom, v.detail))),
        }
    }

    pub fn zero(algebra: &Arc<Algebra>) -> Module {
        Module { algebra: algebra.clone(), dim: 0, action: vec![Matrix::zeros(algebra.field, 0, 0); algebra.dim()] }
    }

    /// `A^n` with basis `e_q ⊗ e_b` at index `q * d + b`.
    pub fn free(algebra: &Arc<Algebra>, n: usize) -> Module {
        let f = algebra.field;
        let action = algebra.left.iter().map(|l| Matrix::identity(f, n).kron(l)).collect();
        Module { algebra: algebra.clone(), dim: n * algebra.dim(), action }
    }

    /// A vector space as a module over the ground field algebra.
    pub fn vector_space(algebra: &Arc<Algebra>, dim: usize) -> Module {
        assert_eq!(algebra.dim(), 1, "not the ground field");
        Module { algebra: algebra.clone(), dim, action: vec![Matrix::identity(algebra.field, dim).scale(&algebra.left[0].get(0, 0))] }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    /// Action of an algebra element given by coordinates.
    pub fn act(&self, v: &Matrix) -> Matrix {
        if self.dim == 0 {
            return Matrix::zeros(self.field(), 0, 0);
        }
        self.algebra.combine(v, &self.action)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new("module");
        let a = &self.algebra;
        let f = self.field();
        r.check_eq(&self.act(a.unit()), &Matrix::identity(f, self.dim), "unit acts as identity", &[]);
        for x in 0..a.dim() {
            for y in 0..a.dim() {
                let lhs = self.action[x].mul(&self.action[y]);
                let rhs = self.act(&a.product(x, y));
                r.check_eq(&lhs, &rhs, "action is multiplicative", &[&x.to_string(), &y.to_string()]);
            }
        }
        r
    }

    fn require_same_algebra(&self, other: &Module) -> Result<()> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch(format!("`{}` vs `{}`", self.algebra.name, other.algebra.name)))
        }
    }

    /// Whether `f: self → other` is A-linear.
    pub fn is_linear_map_to(&self, other: &Module, f: &Matrix) -> bool {
        f.shape() == (other.dim, self.dim) && (0..self.action.len()).all(|a| f.mul(&self.action[a]) == other.action[a].mul(f))
    }

    /// Basis of `Hom_A(self, other)` as `other.dim x self.dim` matrices.
    pub fn hom_basis(&self, other: &Module) -> Result<Vec<Matrix>> {
        self.require_same_algebra(other)?;
        let mut sys = LinearSystem::new(self.field());
        let x = sys.unknown(other.dim, self.dim);
        for a in 0..self.action.len() {
            sys.equation(
                other.dim,
                self.dim,
                vec![Term::new(Matrix::identity(self.field(), other.dim), x, self.action[a].clone()), Term::new(other.action[a].neg(), x, Matrix::identity(self.field(), self.dim))],
                None,
            );
        }
        Ok(sys.kernel().into_iter().map(|mut v| v.remove(0)).collect())
    }

    /// Direct sum with injections and projections.
    pub fn direct_sum(algebra: &Arc<Algebra>, parts: &[Module]) -> Result<Biproduct> {
        for p in parts {
            if !same_algebra(algebra, &p.algebra) {
                return Err(Error::AlgebraMismatch(p.algebra.name.clone()));
            }
        }
        let f = algebra.field;
        let dims: Vec<usize> = parts.iter().map(|p| p.dim).collect();
        let total: usize = dims.iter().sum();
        let action = (0..algebra.dim())
            .map(|a| Matrix::block_diag(f, &parts.iter().map(|p| p.action[a].clone()).collect::<Vec<_>>()))
            .collect();
        let module = Module { algebra: algebra.clone(), dim: total, action };
        let (injections, projections) = block_maps(f, &dims);
        Ok(Biproduct { module, injections, projections })
    }

    /// Submodule spanned by the independent columns of `basis`, with its inclusion.
    ///
    /// The span must be stable under the action.
    pub fn submodule(&self, basis: &Matrix) -> Module {
        let k = basis.cols();
        if k == 0 {
            return Module::zero(&self.algebra);
        }
        let linv = basis.left_inverse().expect("submodule basis must be independent");
        let action = self.action.iter().map(|a| linv.mul(&a.mul(basis))).collect::<Vec<_>>();
        debug_assert!(self.action.iter().zip(&action).all(|(a, s)| a.mul(basis) == basis.mul(s)));
        Module { algebra: self.algebra.clone(), dim: k, action }
    }

    /// Quotient by the span of the columns of `relations` (a submodule).
    pub fn quotient(&self, relations: &Matrix) -> (Module, Quotient) {
        let q = Quotient::of(self.field(), self.dim, relations);
        let action = self.action.iter().map(|a| q.projection.mul(&a.mul(&q.section))).collect();
        (Module { algebra: self.algebra.clone(), dim: q.dim(), action }, q)
    }

    /// The canonical surjection `A^{dim M} → M` sending the unit of the
    /// `q`-th copy to the `q`-th basis vector.
    pub fn free_cover(&self) -> (Module, Matrix) {
        let n = self.dim;
        let d = self.algebra.dim();
        let free = Module::free(&self.algebra, n);
        let mut cover = Matrix::zeros(self.field(), n, n * d);
        for q in 0..n {
            for b in 0..d {
                cover.set_block(0, q * d + b, &self.action[b].column(q));
            }
        }
        (free, cover)
    }

    /// Field dual `M* = Hom_k(M, k)` as a module over the opposite algebra.
    pub fn dual(&self) -> Module {
        let op = Arc::new(self.algebra.opposite());
        Module { algebra: op, dim: self.dim, action: self.action.iter().map(|a| a.transpose()).collect() }
    }

    /// Same as [`Module::dual`] but over a supplied copy of the opposite algebra.
    pub fn dual_over(&self, opposite: &Arc<Algebra>) -> Module {
        Module { algebra: opposite.clone(), dim: self.dim, action: self.action.iter().map(|a| a.transpose()).collect() }
    }

    /// Projective iff the free cover splits; the section is the witness.
    pub fn projectivity(&self) -> Option<Matrix> {
        let (free, cover) = self.free_cover();
        split_epi(&free, self, &cover).expect("free cover is an epimorphism")
    }

    pub fn is_projective(&self) -> bool {
        self.projectivity().is_some()
    }

    /// Injective iff the dual over the opposite algebra is projective.
    pub fn is_injective(&self) -> bool {
        self.dual().is_projective()
    }

    /// Same module data over an equal algebra handle.
    pub fn rebase(&self, algebra: &Arc<Algebra>) -> Module {
        assert!(same_algebra(&self.algebra, algebra));
        Module { algebra: algebra.clone(), dim: self.dim, action: self.action.clone() }
    }
}

/// Injections and projections for a block decomposition `dims`.
pub fn block_maps(field: Field, dims: &[usize]) -> (Vec<Matrix>, Vec<Matrix>) {
    let total: usize = dims.iter().sum();
    let mut inj = Vec::new();
    let mut proj = Vec::new();
    let mut off = 0;
    for &d in dims {
        let mut i = Matrix::zeros(field, total, d);
        i.set_block(off, 0, &Matrix::identity(field, d));
        proj.push(i.transpose());
        inj.push(i);
        off += d;
    }
    (inj, proj)
}

/// A module morphism with its endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleMorphism {
    pub source: Module,
    pub target: Module,
    pub matrix: Matrix,
}

impl ModuleMorphism {
    pub fn new(source: &Module, target: &Module, matrix: Matrix) -> Result<ModuleMorphism> {
        source.require_same_algebra(target)?;
        if matrix.shape() != (target.dim, source.dim) {
            return Err(Error::DimensionMismatch(format!(
                "morphism matrix is {:?}, expected {}x{}",
                matrix.shape(),
                target.dim,
                source.dim
            )));
        }
        Ok(ModuleMorphism { source: source.clone(), target: target.clone(), matrix })
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new("module morphism");
        for a in 0..self.source.action.len() {
            let lhs = self.matrix.mul(&self.source.action[a]);
            let rhs = self.target.action[a].mul(&self.matrix);
            r.check_eq(&lhs, &rhs, "A-linearity", &[&a.to_string()]);
        }
        r
    }

    /// Kernel, image and cokernel with their canonical maps.
    pub fn factorization(&self) -> Factorization {
        let f = &self.matrix;
        let ker_basis = f.kernel();
        let kernel = self.source.submodule(&ker_basis);
        let im_basis = f.image();
        let image = self.target.submodule(&im_basis);
        let coimage = im_basis.left_inverse().map(|l| l.mul(f)).unwrap_or_else(|| Matrix::zeros(f.field(), 0, self.source.dim));
        let (cokernel, q) = self.target.quotient(&im_basis);
        Factorization {
            kernel,
            kernel_inclusion: ker_basis,
            image,
            image_inclusion: im_basis,
            coimage_projection: coimage,
            cokernel,
            cokernel_projection: q.projection,
            cokernel_section: q.section,
        }
    }

    /// A section `s` with `f s = 1` if one exists.
    pub fn split_epi(&self) -> Result<Option<Matrix>> {
        split_epi(&self.source, &self.target, &self.matrix)
    }

    /// A retraction `r` with `r f = 1` if one exists.
    pub fn split_mono(&self) -> Result<Option<Matrix>> {
        split_mono(&self.source, &self.target, &self.matrix)
    }
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub kernel: Module,
    pub kernel_inclusion: Matrix,
    pub image: Module,
    pub image_inclusion: Matrix,
    /// `source → image`, so that `image_inclusion ∘ coimage_projection = f`.
    pub coimage_projection: Matrix,
    pub cokernel: Module,
    pub cokernel_projection: Matrix,
    pub cokernel_section: Matrix,
}

#[derive(Clone, Debug)]
pub struct Biproduct {
    pub module: Module,
    pub injections: Vec<Matrix>,
    pub projections: Vec<Matrix>,
}

/// Solves for an A-linear section of an epimorphism `f: m → n`.
pub fn split_epi(m: &Module, n: &Module, f: &Matrix) -> Result<Option<Matrix>> {
    if f.rank() != n.dim {
        return Err(Error::NotEpi);
    }
    let field = m.field();
    let mut sys = LinearSystem::new(field);
    let s = sys.unknown(m.dim, n.dim);
    for a in 0..m.action.len() {
        sys.equation(
            m.dim,
            n.dim,
            vec![Term::new(Matrix::identity(field, m.dim), s, n.action[a].clone()), Term::new(m.action[a].neg(), s, Matrix::identity(field, n.dim))],
            None,
        );
    }
    sys.equation(n.dim, n.dim, vec![Term::new(f.clone(), s, Matrix::identity(field, n.dim))], Some(Matrix::identity(field, n.dim)));
    Ok(sys.solve().ok().map(|mut v| v.remove(0)))
}

/// Solves for an A-linear retraction of a monomorphism `f: m → n`.
pub fn split_mono(m: &Module, n: &Module, f: &Matrix) -> Result<Option<Matrix>> {
    if f.rank() != m.dim {
        return Err(Error::NotMono);
    }
    let field = m.field();
    let mut sys = LinearSystem::new(field);
    let r = sys.unknown(m.dim, n.dim);
    for a in 0..m.action.len() {
        sys.equation(
            m.dim,
            n.dim,
            vec![Term::new(Matrix::identity(field, m.dim), r, n.action[a].clone()), Term::new(m.action[a].neg(), r, Matrix::identity(field, n.dim))],
            None,
        );
    }
    sys.equation(m.dim, m.dim, vec![Term::new(Matrix::identity(field, m.dim), r, f.clone())], Some(Matrix::identity(field, m.dim)));
    Ok(sys.solve().ok().map(|mut v| v.remove(0)))
}

/// A bimodule `B` over `(A_j, A_i)`: left `A_j`-action, right `A_i`-action.
#[derive(Clone, Debug)]
pub struct Bimodule {
    left_algebra: Arc<Algebra>,
    right_algebra: Arc<Algebra>,
    dim: usize,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
}

impl PartialEq for Bimodule {
    fn eq(&self, other: &Bimodule) -> bool {
        same_algebra(&self.left_algebra, &other.left_algebra)
            && same_algebra(&self.right_algebra, &other.right_algebra)
            && self.left == other.left
            && self.right == other.right
    }
}

impl Bimodule {
    pub fn new(left_algebra: &Arc<Algebra>, right_algebra: &Arc<Algebra>, dim: usize, left: Vec<Matrix>, right: Vec<Matrix>) -> Result<Bimodule> {
        if left.len() != left_algebra.dim()
            || right.len() != right_algebra.dim()
            || left.iter().chain(&right).any(|m| m.shape() != (dim, dim))
        {
            return Err(Error::DimensionMismatch("bimodule action matrices have the wrong shape".into()));
        }
        Ok(Bimodule { left_algebra: left_algebra.clone(), right_algebra: right_algebra.clone(), dim, left, right })
    }

    pub fn checked(self) -> Result<Bimodule> {
        match self.validate().first() {
            None => Ok(self),
            Some(v) => Err(Error::Invalid(format!("bimodule fails {}: {}", v.axiom, v.detail))),
        }
    }

    /// `T` as a `(T, S)`-bimodule through an algebra morphism `f: S → T`.
    pub fn from_homomorphism(target: &Arc<Algebra>, source: &Arc<Algebra>, f: &Matrix) -> Result<Bimodule> {
        if !source.is_homomorphism(target, f) {
            return Err(Error::NotAFunctor("edge map is not a unital algebra morphism".into()));
        }
        let d = target.dim();
        let right_mult: Vec<Matrix> = (0..d).map(|b| target.right_multiplication(b)).collect();
        let right = (0..source.dim()).map(|b| target.combine(&f.column(b), &right_mult)).collect();
        Bimodule::new(target, source, d, target.left.clone(), right)
    }

    pub fn left_algebra(&self) -> &Arc<Algebra> {
        &self.left_algebra
    }

    pub fn right_algebra(&self) -> &Arc<Algebra> {
        &self.right_algebra
    }

    pub fn field(&self) -> Field {
        self.left_algebra.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_action(&self) -> &[Matrix] {
        &self.left
    }

    pub fn right_action(&self) -> &[Matrix] {
        &self.right
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new("bimodule");
        let f = self.field();
        let id = Matrix::identity(f, self.dim);
        let (aj, ai) = (&self.left_algebra, &self.right_algebra);
        r.check_eq(&aj.combine(aj.unit(), &self.left), &id, "left unit", &[]);
        r.check_eq(&ai.combine(ai.unit(), &self.right), &id, "right unit", &[]);
        for a in 0..aj.dim() {
            for b in 0..aj.dim() {
                let lhs = self.left[a].mul(&self.left[b]);
                r.check_eq(&lhs, &aj.combine(&aj.product(a, b), &self.left), "left action", &[&a.to_string(), &b.to_string()]);
            }
        }
        for a in 0..ai.dim() {
            for b in 0..ai.dim() {
                let lhs = self.right[b].mul(&self.right[a]);
                r.check_eq(&lhs, &ai.combine(&ai.product(a, b), &self.right), "right action", &[&a.to_string(), &b.to_string()]);
            }
        }
        for a in 0..aj.dim() {
            for b in 0..ai.dim() {
                r.check_eq(&self.left[a].mul(&self.right[b]), &self.right[b].mul(&self.left[a]), "actions commute", &[&a.to_string(), &b.to_string()]);
            }
        }
        r
    }

    /// Whether a matrix `B → C` commutes with both actions.
    pub fn is_bimodule_map_to(&self, other: &Bimodule, f: &Matrix) -> bool {
        f.shape() == (other.dim, self.dim)
            && (0..self.left.len()).all(|a| f.mul(&self.left[a]) == other.left[a].mul(f))
            && (0..self.right.len()).all(|b| f.mul(&self.right[b]) == other.right[b].mul(f))
    }

    /// Basis of bimodule maps `self → other`.
    pub fn bimodule_hom_basis(&self, other: &Bimodule) -> Vec<Matrix> {
        let f = self.field();
        let mut sys = LinearSystem::new(f);
        let x = sys.unknown(other.dim, self.dim);
        let (i_o, i_s) = (Matrix::identity(f, other.dim), Matrix::identity(f, self.dim));
        for (mine, theirs) in self.left.iter().zip(&other.left).chain(self.right.iter().zip(&other.right)) {
            sys.equation(other.dim, self.dim, vec![Term::new(i_o.clone(), x, mine.clone()), Term::new(theirs.neg(), x, i_s.clone())], None);
        }
        sys.kernel().into_iter().map(|mut v| v.remove(0)).collect()
    }

    /// `B` as a left module over its left algebra.
    pub fn as_left_module(&self) -> Module {
        Module { algebra: self.left_algebra.clone(), dim: self.dim, action: self.left.clone() }
    }

    /// `B` as a right module, i.e. a left module over the opposite algebra.
    pub fn as_right_module(&self) -> Module {
        Module { algebra: Arc::new(self.right_algebra.opposite()), dim: self.dim, action: self.right.clone() }
    }

    /// Exactness of `B ⊗ -`: projectivity as a right module.
    pub fn is_right_projective(&self) -> bool {
        self.as_right_module().is_projective()
    }

    /// `B ⊗_{A_i} M` with the quotient from the plain tensor.
    pub fn tensor(&self, m: &Module) -> Result<Tensor> {
        if !same_algebra(&self.right_algebra, &m.algebra) {
            return Err(Error::AlgebraMismatch(format!("`{}` vs `{}`", self.right_algebra.name, m.algebra.name)));
        }
        let f = self.field();
        let (bd, n) = (self.dim, m.dim);
        let (im, ib) = (Matrix::identity(f, n), Matrix::identity(f, bd));
        let relations: Vec<Matrix> = (0..self.right.len()).map(|a| self.right[a].kron(&im).sub(&ib.kron(&m.action[a]))).collect();
        let rel = Matrix::hstack(f, bd * n, &relations);
        let q = Quotient::of(f, bd * n, &rel);
        let action = self.left.iter().map(|l| q.projection.mul(&l.kron(&im)).mul(&q.section)).collect();
        let module = Module { algebra: self.left_algebra.clone(), dim: q.dim(), action };
        Ok(Tensor { module, quotient: q, left_dim: bd, right_dim: n })
    }

    /// `B ⊗ f` between already computed tensors.
    pub fn tensor_on_morphism(&self, source: &Tensor, target: &Tensor, f: &Matrix) -> Matrix {
        let id = Matrix::identity(self.field(), self.dim);
        target.quotient.projection.mul(&id.kron(f)).mul(&source.quotient.section)
    }

    /// `self ⊗_{A_j} inner` for `self` over `(A_k, A_j)`, `inner` over `(A_j, A_i)`.
    pub fn tensor_bimodule(&self, inner: &Bimodule) -> Result<BimoduleTensor> {
        if !same_algebra(&self.right_algebra, &inner.left_algebra) {
            return Err(Error::AlgebraMismatch(format!("`{}` vs `{}`", self.right_algebra.name, inner.left_algebra.name)));
        }
        let f = self.field();
        let (m2, m1) = (self.dim, inner.dim);
        let (i1, i2) = (Matrix::identity(f, m1), Matrix::identity(f, m2));
        let relations: Vec<Matrix> = (0..self.right.len()).map(|a| self.right[a].kron(&i1).sub(&i2.kron(&inner.left[a]))).collect();
        let q = Quotient::of(f, m2 * m1, &Matrix::hstack(f, m2 * m1, &relations));
        let left = self.left.iter().map(|l| q.projection.mul(&l.kron(&i1)).mul(&q.section)).collect();
        let right = inner.right.iter().map(|r| q.projection.mul(&i2.kron(r)).mul(&q.section)).collect();
        let bimodule = Bimodule { left_algebra: self.left_algebra.clone(), right_algebra: inner.right_algebra.clone(), dim: q.dim(), left, right };
        Ok(BimoduleTensor { bimodule, quotient: q, outer_dim: m2, inner_dim: m1 })
    }

    /// `Hom_{A_j}(B, N)` as a left `A_i`-module.
    pub fn hom(&self, n: &Module) -> Result<HomModule> {
        if !same_algebra(&self.left_algebra, &n.algebra) {
            return Err(Error::AlgebraMismatch(format!("`{}` vs `{}`", self.left_algebra.name, n.algebra.name)));
        }
        let as_module = self.as_left_module();
        let basis = as_module.hom_basis(n)?;
        let f = self.field();
        let cols: Vec<Matrix> = basis.iter().map(|h| h.vectorize()).collect();
        let stacked = Matrix::hstack(f, n.dim * self.dim, &cols);
        let coords = if basis.is_empty() { Matrix::zeros(f, 0, n.dim * self.dim) } else { stacked.left_inverse().expect("hom basis is independent") };
        let action = self
            .right
            .iter()
            .map(|r| {
                let cols: Vec<Matrix> = basis.iter().map(|h| coords.mul(&h.mul(r).vectorize())).collect();
                Matrix::hstack(f, basis.len(), &cols)
            })
            .collect();
        let module = Module { algebra: self.right_algebra.clone(), dim: basis.len(), action };
        Ok(HomModule { module, basis, coords, bimodule_dim: self.dim, target_dim: n.dim })
    }

    /// `Hom(B, g)` between already computed hom modules.
    pub fn hom_on_morphism(&self, source: &HomModule, target: &HomModule, g: &Matrix) -> Matrix {
        let cols: Vec<Matrix> = source.basis.iter().map(|h| target.coordinates(&g.mul(h))).collect();
        Matrix::hstack(self.field(), target.module.dim, &cols)
    }

    /// Transpose of `f: B ⊗ M → N` to `M → Hom(B, N)`.
    pub fn transpose_to_hom(&self, tensor: &Tensor, hom: &HomModule, f: &Matrix) -> Matrix {
        let field = self.field();
        let (bd, md) = (self.dim, tensor.right_dim);
        let cols: Vec<Matrix> = (0..md)
            .map(|q| {
                let plain: Vec<Matrix> = (0..bd).map(|p| f.mul(&tensor.quotient.projection.column(p * md + q))).collect();
                let x = Matrix::hstack(field, hom.target_dim, &plain);
                hom.coordinates(&x)
            })
            .collect();
        Matrix::hstack(field, hom.module.dim, &cols)
    }

    /// Inverse of [`Bimodule::transpose_to_hom`].
    pub fn transpose_from_hom(&self, tensor: &Tensor, hom: &HomModule, g: &Matrix) -> Matrix {
        let field = self.field();
        let (bd, md) = (self.dim, tensor.right_dim);
        let mut plain = Matrix::zeros(field, hom.target_dim, bd * md);
        for q in 0..md {
            let x = hom.element(&g.column(q));
            for p in 0..bd {
                plain.set_block(0, p * md + q, &x.column(p));
            }
        }
        plain.mul(&tensor.quotient.section)
    }
}

/// `B ⊗_A M` with the quotient map from the plain tensor `B ⊗_k M`.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub module: Module,
    pub quotient: Quotient,
    pub left_dim: usize,
    pub right_dim: usize,
}

/// `B2 ⊗_{A_j} B1` with the quotient map from `B2 ⊗_k B1`.
#[derive(Clone, Debug)]
pub struct BimoduleTensor {
    pub bimodule: Bimodule,
    pub quotient: Quotient,
    pub outer_dim: usize,
    pub inner_dim: usize,
}

/// `Hom_{A_j}(B, N)` with a basis of `N.dim x B.dim` matrices.
#[derive(Clone, Debug)]
pub struct HomModule {
    pub module: Module,
    pub basis: Vec<Matrix>,
    coords: Matrix,
    bimodule_dim: usize,
    target_dim: usize,
}

impl HomModule {
    /// Coordinates of an A-linear map `B → N` in the basis.
    pub fn coordinates(&self, x: &Matrix) -> Matrix {
        self.coords.mul(&x.vectorize())
    }

    /// The map `B → N` with the given coordinates.
    pub fn element(&self, v: &Matrix) -> Matrix {
        let f = self.module.field();
        let mut acc = Matrix::zeros(f, self.target_dim, self.bimodule_dim);
        for (t, h) in self.basis.iter().enumerate() {
            let c = v.get(t, 0);
            if !c.is_zero() {
                acc.add_assign(&h.scale(&c));
            }
        }
        acc
    }
}

/// A finite diagram of modules indexed by a shape category.
///
/// `objects[x]` is the module at shape object `x`, `maps[u]` the matrix of
/// shape morphism `u` (identities included).
pub struct ModuleDiagram<'a> {
    pub shape: &'a crate::fincat::FinCategory,
    pub objects: Vec<Module>,
    pub maps: Vec<Matrix>,
}

impl ModuleDiagram<'_> {
    fn check(&self, algebra: &Arc<Algebra>) -> Result<()> {
        let s = self.shape;
        if self.objects.len() != s.num_objects() || self.maps.len() != s.num_morphisms() {
            return Err(Error::ShapeMismatch("module diagram does not cover its shape".into()));
        }
        for u in 0..s.num_morphisms() {
            let (x, y) = (s.source(u), s.target(u));
            if self.maps[u].shape() != (self.objects[y].dim, self.objects[x].dim) {
                return Err(Error::ShapeMismatch(format!("map at `{}` has the wrong size", s.morphism_name(u))));
            }
        }
        if self.objects.iter().any(|m| !same_algebra(&m.algebra, algebra)) {
            return Err(Error::AlgebraMismatch("diagram modules live over different algebras".into()));
        }
        Ok(())
    }

    /// Coequalizer of `⊕_u M_{s(u)} ⇉ ⊕_x M_x`.
    pub fn colimit(&self, algebra: &Arc<Algebra>) -> Result<Colimit> {
        self.check(algebra)?;
        let f = algebra.field;
        let s = self.shape;
        let dims: Vec<usize> = self.objects.iter().map(|m| m.dim).collect();
        let sum = Module::direct_sum(algebra, &self.objects)?;
        let total = sum.module.dim;
        let mut rels = Vec::new();
        for u in 0..s.num_morphisms() {
            if s.is_identity(u) {
                continue;
            }
            let (x, y) = (s.source(u), s.target(u));
            rels.push(sum.injections[y].mul(&self.maps[u]).sub(&sum.injections[x]));
        }
        let rel = Matrix::hstack(f, total, &rels);
        let (object, q) = sum.module.quotient(&rel);
        let legs = (0..dims.len()).map(|x| q.projection.mul(&sum.injections[x])).collect();
        Ok(Colimit { object, legs, section: q.section, dims })
    }

    /// Equalizer of `⊕_x M_x ⇉ ⊕_u M_{t(u)}`.
    pub fn limit(&self, algebra: &Arc<Algebra>) -> Result<Limit> {
        self.check(algebra)?;
        let f = algebra.field;
        let s = self.shape;
        let dims: Vec<usize> = self.objects.iter().map(|m| m.dim).collect();
        let sum = Module::direct_sum(algebra, &self.objects)?;
        let total = sum.module.dim;
        let mut rows = Vec::new();
        for u in 0..s.num_morphisms() {
            if s.is_identity(u) {
                continue;
            }
            let (x, y) = (s.source(u), s.target(u));
            rows.push(self.maps[u].mul(&sum.projections[x]).sub(&sum.projections[y]));
        }
        let constraint = Matrix::vstack(f, total, &rows);
        let basis = if rows.is_empty() { Matrix::identity(f, total) } else { constraint.kernel() };
        let object = sum.module.submodule(&basis);
        let coords = if basis.cols() == 0 { Matrix::zeros(f, 0, total) } else { basis.left_inverse().unwrap() };
        let legs = (0..dims.len()).map(|x| sum.projections[x].mul(&basis)).collect();
        Ok(Limit { object, legs, coords, dims })
    }
}

/// A colimit with its cocone.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub object: Module,
    /// `λ_x: M_x → colim`.
    pub legs: Vec<Matrix>,
    section: Matrix,
    dims: Vec<usize>,
}

impl Colimit {
    /// The unique `h` with `h λ_x = g_x` for a cocone `g` into a space of dimension `target_dim`.
    pub fn factor(&self, target_dim: usize, cocone: &[Matrix]) -> Matrix {
        let f = self.object.field();
        assert_eq!(cocone.len(), self.dims.len());
        let joined = Matrix::hstack(f, target_dim, cocone);
        joined.mul(&self.section)
    }
}

/// A limit with its cone.
#[derive(Clone, Debug)]
pub struct Limit {
    pub object: Module,
    /// `p_x: lim → M_x`.
    pub legs: Vec<Matrix>,
    coords: Matrix,
    dims: Vec<usize>,
}

impl Limit {
    /// The unique `h` with `p_x h = g_x` for a cone `g` out of a space of dimension `source_dim`.
    pub fn factor(&self, source_dim: usize, cone: &[Matrix]) -> Matrix {
        let f = self.object.field();
        assert_eq!(cone.len(), self.dims.len());
        let joined = Matrix::vstack(f, source_dim, cone);
        self.coords.mul(&joined)
    }
}

/// One summand `left · X_block · right` of a linear matrix equation.
#[derive(Clone, Debug)]
pub struct Term {
    pub left: Matrix,
    pub block: usize,
    pub right: Matrix,
}

impl Term {
    pub fn new(left: Matrix, block: usize, right: Matrix) -> Term {
        Term { left, block, right }
    }
}

/// A system of linear matrix equations `Σ L X_k R = C` in several unknown
/// matrices, solved exactly through `vec(L X R) = (R^T ⊗ L) vec(X)`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    field: Field,
    blocks: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    width: usize,
    rows: Vec<Matrix>,
    rhs: Vec<Matrix>,
}

impl LinearSystem {
    pub fn new(field: Field) -> LinearSystem {
        LinearSystem { field, blocks: Vec::new(), offsets: Vec::new(), width: 0, rows: Vec::new(), rhs: Vec::new() }
    }

    /// Registers an unknown `rows x cols` matrix and returns its block index.
    pub fn unknown(&mut self, rows: usize, cols: usize) -> usize {
        assert!(self.rows.is_empty(), "declare unknowns before equations");
        self.blocks.push((rows, cols));
        self.offsets.push(self.width);
        self.width += rows * cols;
        self.blocks.len() - 1
    }

    /// Adds `Σ terms = rhs` (zero when `rhs` is `None`), an `rows x cols` equation.
    pub fn equation(&mut self, rows: usize, cols: usize, terms: Vec<Term>, rhs: Option<Matrix>) {
        let n = rows * cols;
        if n == 0 {
            return;
        }
        let mut coeff = Matrix::zeros(self.field, n, self.width);
        for t in terms {
            let (br, bc) = self.blocks[t.block];
            assert_eq!(t.left.shape(), (rows, br), "term left factor has the wrong shape");
            assert_eq!(t.right.shape(), (bc, cols), "term right factor has the wrong shape");
            if br * bc == 0 {
                continue;
            }
            let k = t.right.transpose().kron(&t.left);
            let off = self.offsets[t.block];
            let cur = coeff.block(0, off, n, br * bc);
            coeff.set_block(0, off, &cur.add(&k));
        }
        self.rows.push(coeff);
        self.rhs.push(match rhs {
            Some(c) => {
                assert_eq!(c.shape(), (rows, cols));
                c.vectorize()
            }
            None => Matrix::zeros(self.field, n, 1),
        });
    }

    fn assemble(&self) -> (Matrix, Matrix) {
        let total: usize = self.rows.iter().map(|r| r.rows()).sum();
        (Matrix::vstack(self.field, self.width, &self.rows), Matrix::vstack(self.field, 1, &self.rhs).reshape(total, 1))
    }

    fn split(&self, v: &Matrix) -> Vec<Matrix> {
        self.blocks
            .iter()
            .zip(&self.offsets)
            .map(|(&(r, c), &off)| Matrix::unvectorize(&v.block(off, 0, r * c, 1), r, c))
            .collect()
    }

    /// Basis of the solution space of the homogeneous system.
    pub fn kernel(&self) -> Vec<Vec<Matrix>> {
        if self.width == 0 {
            return Vec::new();
        }
        if self.rows.is_empty() {
            let id = Matrix::identity(self.field, self.width);
            return (0..self.width).map(|k| self.split(&id.column(k))).collect();
        }
        let (a, _) = self.assemble();
        let k = a.kernel();
        (0..k.cols()).map(|c| self.split(&k.column(c))).collect()
    }

    /// One solution of the affine system.
    pub fn solve(&self) -> Result<Vec<Matrix>> {
        if self.rows.is_empty() {
            return Ok(self.split(&Matrix::zeros(self.field, self.width, 1)));
        }
        let (a, b) = self.assemble();
        if self.width == 0 {
            return if b.is_zero() { Ok(self.split(&Matrix::zeros(self.field, 0, 1))) } else { Err(Error::Inconsistent) };
        }
        Ok(self.split(&a.solve(&b)?))
    }
}

/// Serializable summary of a module.
#[derive(Clone, Debug, Serialize)]
pub struct ModuleSummary {
    pub algebra: String,
    pub dim: usize,
    pub action: Vec<Matrix>,
}

impl From<&Module> for ModuleSummary {
    fn from(m: &Module) -> ModuleSummary {
        ModuleSummary { algebra: m.algebra.name.clone(), dim: m.dim, action: m.action.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const F2: Field = Field::Prime(2);
    const F3: Field = Field::Prime(3);

    fn trivial_c2(f: Field) -> Module {
        let a = Algebra::cyclic_group_algebra(f, 2);
        Module::checked(&a, 1, vec![Matrix::identity(f, 1), Matrix::identity(f, 1)]).unwrap()
    }

    fn augmentation(f: Field) -> ModuleMorphism {
        let a = Algebra::cyclic_group_algebra(f, 2);
        ModuleMorphism::new(&a.regular_module(), &trivial_c2(f), Matrix::from_i64(f, &[vec![1, 1]])).unwrap()
    }

    #[test]
    fn algebras_validate() {
        let k = Algebra::ground(F2);
        assert!(k.validate().passed());
        assert!(Algebra::cyclic_group_algebra(F2, 2).validate().passed());
        assert!(Algebra::upper_triangular(Field::Rational).validate().passed());
        let a = Algebra::truncated_polynomial(F3, 2);
        let mut bad = (*a).clone();
        bad.unit = Matrix::from_i64(F3, &[vec![0], vec![1]]);
        assert!(!bad.validate().passed());
    }

    #[test]
    fn hom_dimensions() {
        let k = Algebra::ground(Field::Rational);
        let v2 = Module::vector_space(&k, 2);
        let v3 = Module::vector_space(&k, 3);
        assert_eq!(v2.hom_basis(&v3).unwrap().len(), 6);
        assert_eq!(trivial_c2(F2).hom_basis(&trivial_c2(F2)).unwrap().len(), 1);
        assert!(v2.hom_basis(&Module::zero(&k)).unwrap().is_empty());
        let other = Algebra::ground(F2);
        assert!(matches!(Module::vector_space(&other, 1).hom_basis(&trivial_c2(F2)), Err(Error::AlgebraMismatch(_))));
    }

    #[test]
    fn augmentation_kernel_is_trivial_module() {
        let fac = augmentation(F2).factorization();
        assert_eq!(fac.kernel.dim(), 1);
        assert!(fac.kernel.action()[1].is_identity());
        assert_eq!(fac.cokernel.dim(), 0);
    }

    #[test]
    fn augmentation_splits_only_in_odd_characteristic() {
        assert!(augmentation(F2).split_epi().unwrap().is_none());
        let s = augmentation(F3).split_epi().unwrap().unwrap();
        assert!(augmentation(F3).matrix.mul(&s).is_identity());
        assert!(!trivial_c2(F2).is_projective());
        assert!(trivial_c2(F3).is_projective());
    }

    #[test]
    fn tensor_of_kc2_with_regular() {
        let a = Algebra::cyclic_group_algebra(F2, 2);
        let k = Algebra::ground(F2);
        // kC2 as a (k, kC2)-bimodule: restrict the left action along k → kC2.
        let reg = a.regular_bimodule();
        let b = Bimodule::new(&k, &a, 2, vec![Matrix::identity(F2, 2)], reg.right_action().to_vec()).unwrap();
        assert!(b.validate().passed());
        let t = b.tensor(&a.regular_module()).unwrap();
        assert_eq!(t.module.dim(), 2);
    }

    #[test]
    fn regular_tensor_is_identity_up_to_iso() {
        let a = Algebra::truncated_polynomial(F3, 2);
        let m = a.regular_module();
        let t = a.regular_bimodule().tensor(&m).unwrap();
        assert_eq!(t.module.dim(), m.dim());
    }

    #[test]
    fn hom_transpose_round_trip() {
        let a = Algebra::truncated_polynomial(F3, 2);
        let b = a.regular_bimodule();
        let m = a.regular_module();
        let t = b.tensor(&m).unwrap();
        let h = b.hom(&m).unwrap();
        assert_eq!(h.module.dim(), 2);
        for f in t.module.hom_basis(&m).unwrap() {
            let g = b.transpose_to_hom(&t, &h, &f);
            assert!(m.is_linear_map_to(&h.module, &g));
            assert_eq!(b.transpose_from_hom(&t, &h, &g), f);
        }
    }

    #[test]
    fn pushout_by_hand() {
        // x <- z -> y with z = k^2, f = (1 0), g = (2 0): the pushout is
        // (k ⊕ k) / im(f, -g), and im(f, -g) is spanned by (1, -2), so it is k.
        // The shape has z initial, so the limit is k^2.
        let k = Algebra::ground(Field::Rational);
        let shape = crate::fincat::FinCategory::from_quiver(&["x", "y", "z"], &[("f", "z", "x"), ("g", "z", "y")]).unwrap();
        let mods: Vec<Module> = ["x", "y", "z"].iter().map(|o| Module::vector_space(&k, if *o == "z" { 2 } else { 1 })).collect();
        let mut maps = Vec::new();
        for m in shape.morphisms() {
            let mat = match m.id.as_str() {
                "f" => Matrix::from_i64(Field::Rational, &[vec![1, 0]]),
                "g" => Matrix::from_i64(Field::Rational, &[vec![2, 0]]),
                _ => Matrix::identity(Field::Rational, mods[m.source].dim()),
            };
            maps.push(mat);
        }
        let d = ModuleDiagram { shape: &shape, objects: mods, maps };
        let c = d.colimit(&k).unwrap();
        assert_eq!(c.object.dim(), 1);
        let l = d.limit(&k).unwrap();
        assert_eq!(l.object.dim(), 2);
    }

    #[test]
    fn free_and_dual_free_are_projective_and_injective() {
        let a = Algebra::upper_triangular(F3);
        assert!(Module::free(&a, 2).is_projective());
        let op = Arc::new(a.opposite());
        assert!(Module::free(&op, 2).dual().is_injective());
    }
}
