//! Jet-bundle operators: total derivatives, the horizontal projection `h₀`,
//! the horizontal differential `d_H`, contact forms and prolongation of
//! vertical vector fields.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::forms::{multi_indices, Chart, ExteriorForm, VectorField};
use crate::symbolic::{Indeterminate, Kind, Polynomial};

/// Field content of a jet space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    /// Dimension of the gauge algebra (number of `a^r_μ` families); zero for
    /// no connection block.
    pub gauge_dim: usize,
    /// Number of matter fields `z^A`.
    pub matter_dim: usize,
}

/// Base dimension, field content and jet order. Immutable once built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct JetContext {
    base_dim: usize,
    fields: FieldSpec,
    jet_order: usize,
}

impl JetContext {
    pub fn new(base_dim: usize, fields: FieldSpec, jet_order: usize) -> Result<Self> {
        if jet_order < 1 {
            return Err(Error::Unsupported("jet order must be at least 1".into()));
        }
        if base_dim == 0 {
            return Err(Error::Unsupported("base dimension must be positive".into()));
        }
        Ok(JetContext { base_dim, fields, jet_order })
    }

    /// Jet space of a connection bundle over an `n`-dimensional base.
    pub fn connection(base_dim: usize, gauge_dim: usize, jet_order: usize) -> Result<Self> {
        Self::new(base_dim, FieldSpec { gauge_dim, matter_dim: 0 }, jet_order)
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn fields(&self) -> FieldSpec {
        self.fields
    }

    pub fn jet_order(&self) -> usize {
        self.jet_order
    }

    pub fn chart(&self) -> Chart {
        Chart::new(self.base_dim, self.fields.gauge_dim, self.fields.matter_dim, self.jet_order)
    }

    /// Order-0 field coordinates `a^r_μ` then `z^A`.
    pub fn field_coordinates(&self) -> Vec<Indeterminate> {
        let mut out = Vec::new();
        for r in 0..self.fields.gauge_dim {
            for mu in 0..self.base_dim {
                out.push(Indeterminate::a(r, mu));
            }
        }
        for a in 0..self.fields.matter_dim {
            out.push(Indeterminate::z(a, &[]));
        }
        out
    }

    /// First-order jet `y^i_λ` of an order-0 field coordinate.
    pub fn first_jet(&self, field: Indeterminate, lambda: usize) -> Indeterminate {
        field.derive(lambda).expect("order-0 field has room for a derivative")
    }

    fn raise(&self, v: Indeterminate, lambda: usize) -> Result<Indeterminate> {
        if v.order() >= self.jet_order {
            return Err(Error::JetOrderExceeded { symbol: v.to_string(), max: self.jet_order });
        }
        self.chart().derive_symbol(v, lambda)
    }
}

/// `d_λ f = ∂_λ f + Σ y_{Λ+λ} ∂f/∂y_Λ`, with `B`, `ξ` differentiated by the
/// function-symbol rule.
pub fn total_derivative(f: &Polynomial, lambda: usize, ctx: &JetContext) -> Result<Polynomial> {
    let chart = ctx.chart();
    f.derivation(|v| match v.kind() {
        Kind::BaseCoord => Ok((v.fiber() == lambda).then(Polynomial::one)),
        Kind::ConnJet | Kind::MatterJet => Ok(Some(Polynomial::var(ctx.raise(v, lambda)?))),
        Kind::BackgroundFn | Kind::GaugeParam => Ok(Some(Polynomial::var(chart.derive_symbol(v, lambda)?))),
        Kind::AuxScalar => Ok(None),
    })
}

/// Iterated total derivative `d_Λ f`.
pub fn total_derivative_multi(f: &Polynomial, lambdas: &[usize], ctx: &JetContext) -> Result<Polynomial> {
    let mut out = f.clone();
    for &l in lambdas {
        out = total_derivative(&out, l, ctx)?;
    }
    Ok(out)
}

/// `h₀(dy_Λ) = y_{Λ+λ} dx^λ`, `h₀(dx^λ) = dx^λ`.
pub fn horizontal_projection(form: &ExteriorForm, ctx: &JetContext) -> Result<ExteriorForm> {
    let chart = ctx.chart();
    let form = if form.chart() == chart { form.clone() } else { form.on_chart(chart)? };
    form.pull_back(chart, &BTreeMap::new(), |c| match c.kind() {
        Kind::BaseCoord => Ok(None),
        Kind::ConnJet | Kind::MatterJet => {
            let mut img = ExteriorForm::zero(chart, 1);
            for l in 0..ctx.base_dim() {
                let raised = ctx.raise(c, l)?;
                img = &img + &ExteriorForm::monomial(chart, Polynomial::var(raised), &[Indeterminate::x(l)])?;
            }
            Ok(Some(img))
        }
        _ => Err(Error::NotInChart(format!("d{c} has no horizontal projection"))),
    })
}

/// `d_H α = dx^λ ∧ d_λ α` on horizontal forms.
pub fn horizontal_differential(form: &ExteriorForm, ctx: &JetContext) -> Result<ExteriorForm> {
    if let Some((basis, _)) = form.terms().find(|(b, _)| b.iter().any(|c| c.kind() != Kind::BaseCoord)) {
        let c = basis.iter().find(|c| c.kind() != Kind::BaseCoord).expect("found above");
        return Err(Error::NotHorizontal(c.to_string()));
    }
    let chart = form.chart();
    let mut out = ExteriorForm::zero(chart, form.degree() + 1);
    for l in 0..ctx.base_dim() {
        let dl = form.map_coefficients(|p| total_derivative(p, l, ctx))?;
        if dl.is_zero() {
            continue;
        }
        let dx = ExteriorForm::differential(chart, Indeterminate::x(l))?;
        out = &out + &dx.wedge(&dl);
    }
    Ok(out)
}

/// Contact form `θ = dy_Λ − y_{Λ+λ} dx^λ`.
pub fn contact_form(v: Indeterminate, ctx: &JetContext) -> Result<ExteriorForm> {
    let chart = ctx.chart();
    if !v.is_field_jet() || !chart.contains(v) {
        return Err(Error::NotInChart(v.to_string()));
    }
    let mut out = ExteriorForm::differential(chart, v)?;
    for l in 0..ctx.base_dim() {
        let raised = ctx.raise(v, l)?;
        out = &out - &ExteriorForm::monomial(chart, Polynomial::var(raised), &[Indeterminate::x(l)])?;
    }
    Ok(out)
}

/// Prolongation of a vertical field `u = u^i ∂_i` to jets of order `order`:
/// the component on `y^i_Λ` is `d_Λ u^i`.
pub fn prolong(u: &VectorField, order: usize, ctx: &JetContext) -> Result<VectorField> {
    if order > ctx.jet_order() {
        return Err(Error::JetOrderExceeded { symbol: format!("prolongation to order {order}"), max: ctx.jet_order() });
    }
    for (v, _) in u.components() {
        if !v.is_field_jet() {
            return Err(Error::NotVertical(v.to_string()));
        }
        if v.order() != 0 {
            return Err(Error::Unsupported(format!("prolong expects components on order-0 fields, got {v}")));
        }
    }
    let mut out = u.clone();
    let bases: Vec<Indeterminate> = u.components().map(|(v, _)| *v).collect();
    for k in 1..=order {
        for deriv in multi_indices(ctx.base_dim(), k) {
            let target_index = crate::symbolic::MultiIndex::new(&deriv).expect("short multi-index");
            let (lambda, parent_index) = target_index.split_last().expect("k >= 1");
            for &b in &bases {
                let parent = out.component(b.with_deriv(parent_index));
                if parent.is_zero() {
                    continue;
                }
                out.set(b.with_deriv(target_index), total_derivative(&parent, lambda, ctx)?);
            }
        }
    }
    Ok(out)
}
