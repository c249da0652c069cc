use std::fmt;

/// Maximum length of a derivative multi-index.
pub const MAX_DERIV: usize = 6;

/// Kinds of indeterminate, listed in their fixed total order.
///
/// `BaseCoord < ConnJet < MatterJet < BackgroundFn < GaugeParam < AuxScalar`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    /// Base coordinate `x^λ`.
    BaseCoord,
    /// Connection jet coordinate `a^r_{Λ;μ}`.
    ConnJet,
    /// Matter jet coordinate `z^A_Λ`.
    MatterJet,
    /// Background section derivative `∂_Λ B^r_μ` (function of `x` only).
    BackgroundFn,
    /// Gauge parameter derivative `∂_Λ ξ^r` (function of `x` only).
    GaugeParam,
    /// Homotopy parameter `t`.
    AuxScalar,
}

/// Sorted derivative multi-index `Λ`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex {
    len: u8,
    idx: [u8; MAX_DERIV],
}

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex { len: 0, idx: [0; MAX_DERIV] };

    /// Builds a multi-index from arbitrary (unsorted) base indices.
    pub fn new(indices: &[usize]) -> Option<Self> {
        if indices.len() > MAX_DERIV {
            return None;
        }
        let mut m = MultiIndex::EMPTY;
        for &i in indices {
            m = m.with(i)?;
        }
        Some(m)
    }

    pub fn order(&self) -> usize {
        self.len as usize
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.idx[..self.len as usize]
    }

    /// `sort(Λ ∪ {λ})`, or `None` past [`MAX_DERIV`].
    pub fn with(&self, lambda: usize) -> Option<Self> {
        if self.len as usize == MAX_DERIV {
            return None;
        }
        let l = u8::try_from(lambda).ok()?;
        let mut out = *self;
        let mut pos = self.len as usize;
        while pos > 0 && out.idx[pos - 1] > l {
            out.idx[pos] = out.idx[pos - 1];
            pos -= 1;
        }
        out.idx[pos] = l;
        out.len += 1;
        Some(out)
    }

    /// Removes the last (largest) index, returning it with the remainder.
    pub fn split_last(&self) -> Option<(usize, Self)> {
        if self.len == 0 {
            return None;
        }
        let mut rest = *self;
        rest.len -= 1;
        let last = rest.idx[rest.len as usize];
        rest.idx[rest.len as usize] = 0;
        Some((last as usize, rest))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, i) in self.as_slice().iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str(")")
    }
}

/// A polynomial indeterminate.
///
/// Field order drives the derived total order: kind first, then derivative
/// order, then fibre and component indices, then the multi-index itself.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Indeterminate {
    kind: Kind,
    order: u8,
    fiber: u8,
    comp: u8,
    deriv: MultiIndex,
}

impl Indeterminate {
    fn raw(kind: Kind, fiber: usize, comp: usize, deriv: MultiIndex) -> Self {
        Indeterminate {
            kind,
            order: deriv.len,
            fiber: u8::try_from(fiber).expect("fibre index out of range"),
            comp: u8::try_from(comp).expect("component index out of range"),
            deriv,
        }
    }

    /// `x^λ`
    pub fn x(lambda: usize) -> Self {
        Self::raw(Kind::BaseCoord, lambda, 0, MultiIndex::EMPTY)
    }

    /// `a^r_μ`
    pub fn a(r: usize, mu: usize) -> Self {
        Self::raw(Kind::ConnJet, r, mu, MultiIndex::EMPTY)
    }

    /// `a^r_{Λ;μ}`, the `Λ`-derivative of `a^r_μ`.
    pub fn a_jet(r: usize, mu: usize, deriv: &[usize]) -> Self {
        Self::raw(Kind::ConnJet, r, mu, MultiIndex::new(deriv).expect("multi-index too long"))
    }

    /// `z^A_Λ`
    pub fn z(field: usize, deriv: &[usize]) -> Self {
        Self::raw(Kind::MatterJet, field, 0, MultiIndex::new(deriv).expect("multi-index too long"))
    }

    /// `∂_Λ B^r_μ`
    pub fn b(r: usize, mu: usize, deriv: &[usize]) -> Self {
        Self::raw(Kind::BackgroundFn, r, mu, MultiIndex::new(deriv).expect("multi-index too long"))
    }

    /// `∂_Λ ξ^r`
    pub fn xi(r: usize, deriv: &[usize]) -> Self {
        Self::raw(Kind::GaugeParam, r, 0, MultiIndex::new(deriv).expect("multi-index too long"))
    }

    /// Homotopy parameter `t`.
    pub fn t() -> Self {
        Self::raw(Kind::AuxScalar, 0, 0, MultiIndex::EMPTY)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// `λ` for `x^λ`, `r` for `a`, `B`, `ξ`, `A` for `z`.
    pub fn fiber(&self) -> usize {
        self.fiber as usize
    }

    /// `μ` for `a` and `B`; zero otherwise.
    pub fn comp(&self) -> usize {
        self.comp as usize
    }

    pub fn deriv(&self) -> MultiIndex {
        self.deriv
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    /// Jet or function-symbol variable with one more derivative in direction `λ`.
    pub fn derive(&self, lambda: usize) -> Option<Self> {
        match self.kind {
            Kind::ConnJet | Kind::MatterJet | Kind::BackgroundFn | Kind::GaugeParam => {
                let deriv = self.deriv.with(lambda)?;
                Some(Indeterminate { order: deriv.len, deriv, ..*self })
            }
            Kind::BaseCoord | Kind::AuxScalar => None,
        }
    }

    /// Same symbol with the multi-index replaced.
    pub fn with_deriv(&self, deriv: MultiIndex) -> Self {
        Indeterminate { order: deriv.len, deriv, ..*self }
    }

    /// The underived symbol (`Λ = ()`).
    pub fn base(&self) -> Self {
        self.with_deriv(MultiIndex::EMPTY)
    }

    /// Jet coordinate of a field (connection or matter).
    pub fn is_field_jet(&self) -> bool {
        matches!(self.kind, Kind::ConnJet | Kind::MatterJet)
    }

    /// Function of `x` that is not a chart coordinate (`B`, `ξ`).
    pub fn is_function_symbol(&self) -> bool {
        matches!(self.kind, Kind::BackgroundFn | Kind::GaugeParam)
    }
}

impl fmt::Display for Indeterminate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::BaseCoord => write!(f, "x[{}]", self.fiber),
            Kind::ConnJet => write!(f, "a[r={};mu={};D={}]", self.fiber, self.comp, self.deriv),
            Kind::MatterJet => write!(f, "z[A={};D={}]", self.fiber, self.deriv),
            Kind::BackgroundFn => write!(f, "B[r={};mu={};D={}]", self.fiber, self.comp, self.deriv),
            Kind::GaugeParam => write!(f, "xi[r={};D={}]", self.fiber, self.deriv),
            Kind::AuxScalar => f.write_str("t"),
        }
    }
}

impl fmt::Debug for Indeterminate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_index_sorted() {
        let v = Indeterminate::a_jet(0, 1, &[2, 0]);
        assert_eq!(v, Indeterminate::a_jet(0, 1, &[0, 2]));
        assert_eq!(v.to_string(), "a[r=0;mu=1;D=(0,2)]");
        assert_eq!(Indeterminate::a(0, 1).derive(2).unwrap().to_string(), "a[r=0;mu=1;D=(2)]");
    }

    #[test]
    fn display_tags() {
        assert_eq!(Indeterminate::a(0, 1).to_string(), "a[r=0;mu=1;D=()]");
        assert_eq!(Indeterminate::b(1, 0, &[2, 0]).to_string(), "B[r=1;mu=0;D=(0,2)]");
        assert_eq!(Indeterminate::xi(2, &[1]).to_string(), "xi[r=2;D=(1)]");
        assert_eq!(Indeterminate::x(0).to_string(), "x[0]");
        assert_eq!(Indeterminate::t().to_string(), "t");
        assert_eq!(Indeterminate::z(1, &[]).to_string(), "z[A=1;D=()]");
    }

    #[test]
    fn kind_order() {
        assert!(Indeterminate::x(4) < Indeterminate::a(0, 0));
        assert!(Indeterminate::a(3, 3) < Indeterminate::a_jet(0, 0, &[0]));
        assert!(Indeterminate::z(0, &[]) < Indeterminate::b(0, 0, &[]));
        assert!(Indeterminate::xi(9, &[]) < Indeterminate::t());
    }

    #[test]
    fn derive_capacity() {
        let mut v = Indeterminate::xi(0, &[]);
        for _ in 0..MAX_DERIV {
            v = v.derive(1).unwrap();
        }
        assert!(v.derive(0).is_none());
        assert!(Indeterminate::x(0).derive(0).is_none());
    }

    #[test]
    fn split_last_inverts_with() {
        let m = MultiIndex::new(&[3, 1, 2]).unwrap();
        let (l, rest) = m.split_last().unwrap();
        assert_eq!(l, 3);
        assert_eq!(rest.with(l).unwrap(), m);
        assert_eq!(rest, MultiIndex::new(&[1, 2]).unwrap());
    }
}
