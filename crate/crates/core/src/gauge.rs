//! Lie-algebra data, invariant symmetric tensors and gauge generators on the
//! connection bundle.

use std::fmt;

use crate::error::{Error, Result};
use crate::forms::VectorField;
use crate::jet::{total_derivative, JetContext};
use crate::report::VerificationReport;
use crate::symbolic::{Indeterminate, Polynomial, Rational};

/// Structure constants `c^r_{pq}` of a finite-dimensional Lie algebra,
/// validated for antisymmetry and the Jacobi identity.
#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    dim: usize,
    // c[(r * dim + p) * dim + q]
    c: Vec<Rational>,
}

impl LieAlgebra {
    /// Builds an algebra from its nonzero structure constants `(r, p, q, c^r_{pq})`.
    ///
    /// Both orientations `c^r_{pq}` and `c^r_{qp}` must be listed.
    pub fn from_structure_constants(
        name: impl Into<String>,
        dim: usize,
        entries: &[(usize, usize, usize, Rational)],
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        let mut c = vec![Rational::zero(); dim * dim * dim];
        let mut seen = std::collections::BTreeSet::new();
        for (r, p, q, v) in entries {
            let (r, p, q) = (*r, *p, *q);
            if r >= dim || p >= dim || q >= dim {
                return Err(Error::InvalidAlgebra(format!("index ({r},{p},{q}) out of range for dimension {dim}")));
            }
            if !seen.insert((r, p, q)) {
                return Err(Error::InvalidAlgebra(format!("c^{r}_{{{p}{q}}} listed twice")));
            }
            c[(r * dim + p) * dim + q] = v.clone();
        }
        let alg = LieAlgebra { name: name.into(), dim, c };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<()> {
        let m = self.dim;
        for r in 0..m {
            for p in 0..m {
                for q in p..m {
                    let pq = self.structure(r, p, q);
                    let qp = self.structure(r, q, p);
                    if &(pq + qp) != &Rational::zero() {
                        return Err(Error::AntisymmetryViolation {
                            r,
                            p,
                            q,
                            pq: pq.to_string(),
                            qp: qp.to_string(),
                        });
                    }
                }
            }
        }
        for p in 0..m {
            for q in 0..m {
                for s in 0..m {
                    for r in 0..m {
                        let v = self.jacobi_component(p, q, s, r);
                        if !v.is_zero() {
                            return Err(Error::JacobiViolation { p, q, s, r, value: v.to_string() });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `r`-component of `[[e_p,e_q],e_s] + [[e_q,e_s],e_p] + [[e_s,e_p],e_q]`.
    fn jacobi_component(&self, p: usize, q: usize, s: usize, r: usize) -> Rational {
        let mut acc = Rational::zero();
        for t in 0..self.dim {
            acc += &(self.structure(t, p, q) * self.structure(r, t, s));
            acc += &(self.structure(t, q, s) * self.structure(r, t, p));
            acc += &(self.structure(t, s, p) * self.structure(r, t, q));
        }
        acc
    }

    /// `m`-dimensional abelian algebra (`u(1)` for `m = 1`).
    pub fn abelian(dim: usize) -> Self {
        let name = if dim == 1 { "u1".to_string() } else { format!("u1^{dim}") };
        LieAlgebra { name, dim, c: vec![Rational::zero(); dim * dim * dim] }
    }

    pub fn u1() -> Self {
        Self::abelian(1)
    }

    /// `su(2)` with `c^r_{pq} = ε_{rpq}`.
    pub fn su2() -> Self {
        let mut entries = Vec::new();
        for (r, p, q) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            entries.push((r, p, q, Rational::one()));
            entries.push((r, q, p, -Rational::one()));
        }
        Self::from_structure_constants("su2", 3, &entries).expect("su(2) is a Lie algebra")
    }

    /// Same constants as [`su2`](Self::su2).
    pub fn so3() -> Self {
        LieAlgebra { name: "so3".into(), ..Self::su2() }
    }

    /// `g ⊕ h`, with the indices of `h` shifted by `dim g`.
    pub fn direct_sum(&self, other: &LieAlgebra) -> Self {
        let m = self.dim + other.dim;
        let mut c = vec![Rational::zero(); m * m * m];
        for (alg, off) in [(self, 0), (other, self.dim)] {
            for r in 0..alg.dim {
                for p in 0..alg.dim {
                    for q in 0..alg.dim {
                        c[((r + off) * m + p + off) * m + q + off] = alg.structure(r, p, q).clone();
                    }
                }
            }
        }
        LieAlgebra { name: format!("{}+{}", self.name, other.name), dim: m, c }
    }

    /// Built-in algebras: `u1`, `u1^m`, `su2`, `so3`, and `+`-separated sums
    /// such as `u1+su2`.
    pub fn builtin(name: &str) -> Result<Self> {
        let parts: Vec<&str> = name.split('+').map(str::trim).collect();
        let mut out: Option<LieAlgebra> = None;
        for part in parts {
            let alg = match part {
                "u1" => Self::u1(),
                "su2" => Self::su2(),
                "so3" => Self::so3(),
                p if p.starts_with("u1^") => {
                    let m: usize = p[3..]
                        .parse()
                        .map_err(|_| Error::InvalidAlgebra(format!("bad abelian power `{p}`")))?;
                    if m == 0 {
                        return Err(Error::InvalidAlgebra("u1^0 is empty".into()));
                    }
                    Self::abelian(m)
                }
                other => return Err(Error::InvalidAlgebra(format!("unknown built-in algebra `{other}`"))),
            };
            out = Some(match out {
                None => alg,
                Some(prev) => prev.direct_sum(&alg),
            });
        }
        out.ok_or_else(|| Error::InvalidAlgebra("empty algebra name".into()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `c^r_{pq}`
    pub fn structure(&self, r: usize, p: usize, q: usize) -> &Rational {
        &self.c[(r * self.dim + p) * self.dim + q]
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(Rational::is_zero)
    }

    /// Nonzero `(r, p, q, c^r_{pq})`.
    pub fn nonzero_constants(&self) -> Vec<(usize, usize, usize, Rational)> {
        let m = self.dim;
        let mut out = Vec::new();
        for r in 0..m {
            for p in 0..m {
                for q in 0..m {
                    let v = self.structure(r, p, q);
                    if !v.is_zero() {
                        out.push((r, p, q, v.clone()));
                    }
                }
            }
        }
        out
    }

    /// `κ_{mn} = Σ_{p,q} c^p_{mq} c^q_{np}`.
    pub fn killing_form(&self) -> Vec<Vec<Rational>> {
        let d = self.dim;
        let mut k = vec![vec![Rational::zero(); d]; d];
        for (m, row) in k.iter_mut().enumerate() {
            for (n, entry) in row.iter_mut().enumerate() {
                for p in 0..d {
                    for q in 0..d {
                        *entry += &(self.structure(p, m, q) * self.structure(q, n, p));
                    }
                }
            }
        }
        k
    }

    /// `[ξ, η]^r = c^r_{pq} ξ^p η^q`.
    pub fn section_bracket(&self, xi: &[Polynomial], eta: &[Polynomial]) -> Vec<Polynomial> {
        assert_eq!(xi.len(), self.dim);
        assert_eq!(eta.len(), self.dim);
        let mut out = vec![Polynomial::zero(); self.dim];
        for (r, p, q, c) in self.nonzero_constants() {
            out[r] += (&xi[p] * &eta[q]).scale(&c);
        }
        out
    }
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra({}, dim {})", self.name, self.dim)
    }
}

/// Fully symmetric tensor `b_{r₁…r_k}` defining an invariant polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct InvariantTensor {
    name: String,
    dim: usize,
    degree: usize,
    entries: Vec<Rational>,
}

fn flat_index(dim: usize, idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| acc * dim + i)
}

fn all_tuples(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..degree {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..dim).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

fn permutations(idx: &[usize]) -> Vec<Vec<usize>> {
    if idx.len() <= 1 {
        return vec![idx.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..idx.len() {
        let mut rest = idx.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

impl InvariantTensor {
    /// Builds a symmetric tensor from entries given on any index ordering;
    /// the value is copied to every permutation. Conflicting values for
    /// permutations of one index set are rejected.
    pub fn from_entries(
        name: impl Into<String>,
        dim: usize,
        degree: usize,
        entries: &[(Vec<usize>, Rational)],
    ) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidTensor("degree must be positive".into()));
        }
        let mut values = vec![Rational::zero(); dim.pow(degree as u32)];
        let mut set = vec![false; values.len()];
        for (idx, v) in entries {
            if idx.len() != degree {
                return Err(Error::InvalidTensor(format!("entry {idx:?} has wrong length for degree {degree}")));
            }
            if idx.iter().any(|&i| i >= dim) {
                return Err(Error::InvalidTensor(format!("entry {idx:?} out of range for dimension {dim}")));
            }
            for p in permutations(idx) {
                let f = flat_index(dim, &p);
                if set[f] && &values[f] != v {
                    return Err(Error::InvalidTensor(format!(
                        "conflicting values for permutations of {idx:?}: {} vs {v}",
                        values[f]
                    )));
                }
                values[f] = v.clone();
                set[f] = true;
            }
        }
        Ok(InvariantTensor { name: name.into(), dim, degree, entries: values })
    }

    /// Degree-2 tensor from a matrix; must be symmetric.
    pub fn from_matrix(name: impl Into<String>, m: &[Vec<Rational>]) -> Result<Self> {
        let dim = m.len();
        for (i, row) in m.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidTensor("matrix is not square".into()));
            }
            for j in 0..dim {
                if m[i][j] != m[j][i] {
                    return Err(Error::InvalidTensor(format!("matrix not symmetric at ({i},{j})")));
                }
            }
        }
        let entries = m.iter().flat_map(|row| row.iter().cloned()).collect();
        Ok(InvariantTensor { name: name.into(), dim, degree: 2, entries })
    }

    /// Killing form of the algebra as a degree-2 tensor.
    pub fn killing(alg: &LieAlgebra) -> Self {
        Self::from_matrix("killing", &alg.killing_form()).expect("the Killing form is symmetric")
    }

    /// `b_{r…r} = 1` for every `r`, zero elsewhere (invariant on abelian algebras).
    pub fn power_sum(dim: usize, degree: usize) -> Self {
        let entries: Vec<(Vec<usize>, Rational)> =
            (0..dim).map(|r| (vec![r; degree], Rational::one())).collect();
        Self::from_entries("power-sum", dim, degree, &entries).expect("diagonal entries are consistent")
    }

    /// Cubic invariant on `u(1) ⊕ su(2)` (index 0 is `u(1)`):
    /// `b_{000} = 1`, `b_{0ij} = κ_{ij}` on the `su(2)` block, symmetrized.
    pub fn u1_su2_cubic() -> Self {
        let su2 = LieAlgebra::su2();
        let kappa = su2.killing_form();
        let mut entries = vec![(vec![0, 0, 0], Rational::one())];
        for i in 0..3 {
            for j in 0..3 {
                if !kappa[i][j].is_zero() {
                    entries.push((vec![0, i + 1, j + 1], kappa[i][j].clone()));
                }
            }
        }
        Self::from_entries("u1-su2-cubic", 4, 3, &entries).expect("symmetric by construction")
    }

    /// Built-in tensors by name for a given algebra and degree.
    pub fn builtin(name: &str, alg: &LieAlgebra, degree: usize) -> Result<Self> {
        let t = match name {
            "killing" => {
                if degree != 2 {
                    return Err(Error::InvalidTensor("the Killing form has degree 2".into()));
                }
                Self::killing(alg)
            }
            "power-sum" => Self::power_sum(alg.dim(), degree),
            "u1-su2-cubic" => {
                if degree != 3 || alg.dim() != 4 {
                    return Err(Error::InvalidTensor("u1-su2-cubic needs degree 3 on u1+su2".into()));
                }
                Self::u1_su2_cubic()
            }
            other => return Err(Error::InvalidTensor(format!("unknown built-in tensor `{other}`"))),
        };
        Ok(t)
    }

    pub fn scaled(&self, h: &Rational) -> Self {
        InvariantTensor {
            name: self.name.clone(),
            dim: self.dim,
            degree: self.degree,
            entries: self.entries.iter().map(|e| e * h).collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, idx: &[usize]) -> &Rational {
        &self.entries[flat_index(self.dim, idx)]
    }

    /// All index tuples with a nonzero entry, in lexicographic order.
    pub fn nonzero_entries(&self) -> Vec<(Vec<usize>, Rational)> {
        all_tuples(self.dim, self.degree)
            .into_iter()
            .filter_map(|t| {
                let v = self.get(&t).clone();
                (!v.is_zero()).then_some((t, v))
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        all_tuples(self.dim, self.degree)
            .iter()
            .all(|t| permutations(t).iter().all(|p| self.get(p) == self.get(t)))
    }
}

impl fmt::Debug for InvariantTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InvariantTensor({}, dim {}, degree {})", self.name, self.dim, self.degree)
    }
}

/// Ad-invariance of `b`: for every `q` and every index tuple `s`,
/// `Σ_j Σ_t c^t_{q s_j} b_{s_1…t…s_k} = 0` (slot `j` replaced by `t`).
///
/// For symmetric `b` this is the polarized form of
/// `k b_{r₁…r_k} c^{r₁}_{pq} ε^p ε^{r₂}⋯ε^{r_k} = 0`.
pub fn check_invariant_tensor(alg: &LieAlgebra, b: &InvariantTensor) -> VerificationReport {
    let check = format!("ad-invariance of {} on {}", b.name(), alg.name());
    if alg.dim() != b.dim() {
        return VerificationReport::error(check, format!("dimension mismatch: algebra {} vs tensor {}", alg.dim(), b.dim()));
    }
    if !b.is_symmetric() {
        return VerificationReport::error(check, "tensor is not symmetric");
    }
    let m = alg.dim();
    let mut lines = Vec::new();
    for q in 0..m {
        for s in all_tuples(m, b.degree()) {
            if s.windows(2).any(|w| w[0] > w[1]) {
                continue;
            }
            let mut acc = Rational::zero();
            for j in 0..s.len() {
                let mut idx = s.clone();
                for t in 0..m {
                    let c = alg.structure(t, q, s[j]);
                    if c.is_zero() {
                        continue;
                    }
                    idx[j] = t;
                    acc += &(c * b.get(&idx));
                }
            }
            if !acc.is_zero() {
                lines.push(format!("q={q};s={s:?} : {acc}"));
            }
        }
    }
    VerificationReport::from_lines(check, lines)
}

/// Infinitesimal gauge transformation `ξ_C = (∂_μ ξ^r + c^r_{pq} a^p_μ ξ^q) ∂/∂a^r_μ`.
#[derive(Clone, Debug)]
pub struct GaugeGenerator {
    params: Vec<Polynomial>,
    field: VectorField,
}

impl GaugeGenerator {
    pub fn params(&self) -> &[Polynomial] {
        &self.params
    }

    pub fn field(&self) -> &VectorField {
        &self.field
    }
}

/// Generator built from the symbolic parameters `ξ^r`.
pub fn gauge_generator(alg: &LieAlgebra, ctx: &JetContext) -> Result<GaugeGenerator> {
    let params: Vec<Polynomial> = (0..alg.dim()).map(|r| Polynomial::var(Indeterminate::xi(r, &[]))).collect();
    gauge_generator_with_params(alg, ctx, &params)
}

/// Generator for explicit parameters `ξ^r`, given as polynomials in the base
/// coordinates and function symbols.
pub fn gauge_generator_with_params(
    alg: &LieAlgebra,
    ctx: &JetContext,
    params: &[Polynomial],
) -> Result<GaugeGenerator> {
    if ctx.fields().gauge_dim != alg.dim() {
        return Err(Error::InvalidAlgebra(format!(
            "jet context has {} connection components, algebra has dimension {}",
            ctx.fields().gauge_dim,
            alg.dim()
        )));
    }
    if params.len() != alg.dim() {
        return Err(Error::InvalidAlgebra(format!("expected {} gauge parameters", alg.dim())));
    }
    for p in params {
        if let Some(v) = p.variables().into_iter().find(|v| v.is_field_jet()) {
            return Err(Error::Unsupported(format!("gauge parameter depends on field coordinate {v}")));
        }
    }
    let constants = alg.nonzero_constants();
    let mut field = VectorField::new();
    for mu in 0..ctx.base_dim() {
        for r in 0..alg.dim() {
            let mut comp = total_derivative(&params[r], mu, ctx)?;
            for (rr, p, q, c) in &constants {
                if *rr == r {
                    comp += (&Polynomial::var(Indeterminate::a(*p, mu)) * &params[*q]).scale(c);
                }
            }
            field.set(Indeterminate::a(r, mu), comp);
        }
    }
    Ok(GaugeGenerator { params: params.to_vec(), field })
}
