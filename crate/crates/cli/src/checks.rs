//! Named checks that an experiment can request.

use std::fmt;

/// Tolerance of the Frenet-versus-extremal κ₁ comparison.
pub const ROUTE_AGREEMENT_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    ModelInvariants,
    Theorem1,
    Theorem2Parallel,
    J2,
    RvRwOrthogonality,
    DotKappa,
    CovDerivR,
    HType,
    LocalConditionD,
    Nondegenerate,
    Step2Decomposition,
    NormalizationIdentity,
    CompareProjections,
    Kappa1Constant,
    Kappa2Vanishing,
    RouteAgreement,
    BaseR2,
}

/// How a check's tolerance is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ToleranceKind {
    /// Exact algebra up to rounding.
    Algebraic,
    /// Involves integration or finite differences.
    Numeric,
    /// Residual is a negated eigenvalue or singular value; passes when it is
    /// below −tol_algebraic.
    Spectral,
    Fixed(f64),
}

impl Check {
    pub const ALL: [Check; 17] = [
        Check::ModelInvariants,
        Check::Theorem1,
        Check::Theorem2Parallel,
        Check::J2,
        Check::RvRwOrthogonality,
        Check::DotKappa,
        Check::CovDerivR,
        Check::HType,
        Check::LocalConditionD,
        Check::Nondegenerate,
        Check::Step2Decomposition,
        Check::NormalizationIdentity,
        Check::CompareProjections,
        Check::Kappa1Constant,
        Check::Kappa2Vanishing,
        Check::RouteAgreement,
        Check::BaseR2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::ModelInvariants => "model-invariants",
            Check::Theorem1 => "theorem1",
            Check::Theorem2Parallel => "theorem2-parallel",
            Check::J2 => "j2",
            Check::RvRwOrthogonality => "rvrw-orthogonality",
            Check::DotKappa => "dot-kappa",
            Check::CovDerivR => "cov-deriv-r",
            Check::HType => "htype",
            Check::LocalConditionD => "local-condition-d",
            Check::Nondegenerate => "nondegenerate",
            Check::Step2Decomposition => "step2-decomposition",
            Check::NormalizationIdentity => "normalization-identity",
            Check::CompareProjections => "compare-projections",
            Check::Kappa1Constant => "kappa1-constant",
            Check::Kappa2Vanishing => "kappa2-vanishing",
            Check::RouteAgreement => "route-agreement",
            Check::BaseR2 => "base-r2",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Check::ModelInvariants => "orthonormal dπ(X_i), dπ(V_k) = 0, independent frame",
            Check::Theorem1 => "|J_β(t) η̇| constant along lifted base geodesics",
            Check::Theorem2Parallel => "J_β(t) η̇ parallel along base geodesics",
            Check::J2 => "J_α²v = −|J_α v|² v",
            Check::RvRwOrthogonality => "⟨J_α v, J_α w⟩ = 0 for w ⊥ v, J_α v",
            Check::DotKappa => "⟨αR(v,·), α(∇_v R)(v,·)⟩ = 0",
            Check::CovDerivR => "∇_v R = 0 on horizontal vectors",
            Check::HType => "J_α² = −|α|² Id and the polarized identity",
            Check::LocalConditionD => "−A_k² diagonal and positive semi-definite",
            Check::Nondegenerate => "extended cometric positive-definite",
            Check::Step2Decomposition => "𝒟 and R(𝒟, 𝒟) span TM",
            Check::NormalizationIdentity => "|α|² = (1/n) Σ |J_α e_i|²",
            Check::CompareProjections => "sub-Riemannian and extended-metric projections coincide",
            Check::Kappa1Constant => "projected curves have constant κ₁",
            Check::Kappa2Vanishing => "projected curves have vanishing κ₂",
            Check::RouteAgreement => "Frenet and extremal κ₁ agree",
            Check::BaseR2 => "R^N(u,v)²w = −|R^N(u,v)w|² w on the base",
        }
    }

    pub fn tolerance_kind(self) -> ToleranceKind {
        match self {
            Check::ModelInvariants
            | Check::J2
            | Check::RvRwOrthogonality
            | Check::HType
            | Check::LocalConditionD
            | Check::NormalizationIdentity
            | Check::BaseR2 => ToleranceKind::Algebraic,
            Check::Nondegenerate | Check::Step2Decomposition => ToleranceKind::Spectral,
            Check::RouteAgreement => ToleranceKind::Fixed(ROUTE_AGREEMENT_TOLERANCE),
            Check::Theorem1
            | Check::Theorem2Parallel
            | Check::DotKappa
            | Check::CovDerivR
            | Check::CompareProjections
            | Check::Kappa1Constant
            | Check::Kappa2Vanishing => ToleranceKind::Numeric,
        }
    }

    pub fn from_name(name: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn tolerance(self, algebraic: f64, numeric: f64) -> f64 {
        match self.tolerance_kind() {
            ToleranceKind::Algebraic => algebraic,
            ToleranceKind::Numeric => numeric,
            ToleranceKind::Spectral => -algebraic,
            ToleranceKind::Fixed(t) => t,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
