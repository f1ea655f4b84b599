//! Literal transcriptions of every closed-form polynomial the elimination
//! chain is checked against. `a`, `b`, `g` stand for alpha, beta, gamma.
//!
//! Nothing here is trusted: each formula is compared with a value the
//! polynomial engine derives independently.

use crate::mpoly::{Domain, MPoly};

/// The three equations of the derivative system.
pub const F1: &str = "a*x^2 + a^2*x + u*g*y^2 + u*b^2*z";
pub const F2: &str = "b*y^2 + b^2*y + u*a*z^2 + u*g^2*x";
pub const F3: &str = "g*z^2 + g^2*z + u*b*x^2 + u*a^2*y";

/// z eliminated between the first and second / first and third equations.
pub const R1: &str = "a^3*x^4 + a^5*x^2 + u^2*b^4*g^2*x + u^2*a*g^2*y^4 + u*b^5*y^2 + u*b^6*y";
pub const R2: &str = "a^2*g*x^4 + (a^4*g + u*a*b^2*g^2 + u^3*b^5)*x^2 + u*a^2*b^2*g^2*x \
                      + u^2*g^3*y^4 + u^2*b^2*g^3*y^2 + u^3*a^2*b^4*y";

/// The combination that cancels x^4; quadratic in x with leading coefficient `L`.
pub const QUADRATIC_IN_X: &str = "(a^2*g^2 + u^2*a*b^3)*x^2 + (a^3*g^2 + u*b^2*g^3)*x \
                                  + (u*a*g^3 + b^3*g)*y^2 + (u^2*a^3*b^2 + b^4*g)*y";
pub const L: &str = "a^2*g^2 + u^2*a*b^3";

/// x^4 * L^3 = A x + B y^4 + C y^2 + D y.
pub const COEFF_A: &str = "g^6*(a^3 + u*b^2*g)^3";
pub const COEFF_B: &str = "a*g^2*(a*g^2 + u^2*b^3)*(u*a*g^2 + b^3)^2";
pub const COEFF_C: &str = "(a^4*g^2 + u^2*a^3*b^3 + u*a*b^2*g^3 + b^5*g)\
                           *(u^4*a^4*b^4 + u*a^3*g^5 + u^3*a^2*b^3*g^3 + a^2*b^3*g^3 + u^2*a*b^6*g + u^2*b^2*g^6)";
pub const COEFF_D: &str = "g^4*b^2*(a^3 + u*b^2*g)^2*(u^2*a^3 + b^2*g)";

pub const H: &str = "u*a^7 + u^2*a^4*b^2*g + u*a^2*b*g^4 + u^3*a*b^4*g^2 + u^5*b^7 + g^7";

/// Right-hand side of the equation linear in x: (u^3 b^6 g^2 H) x = Q(y).
pub const Q: &str = "(u + 1)^2*(u^2 + u + 1)^2*a*b^6*g^2*(a*g^2 + u^2*b^3)*y^4 \
    + b^4*(u^4*a^8*g^2 + u^6*a^7*b^3 + u^5*a^5*b^2*g^3 + u^4*a^4*b^5*g + u*a^3*b*g^6 \
        + u^3*a^2*b^4*g^4 + a^2*b^4*g^4 + u^5*a*b^7*g^2 + u^2*a*b^7*g^2 + u^3*a*g^9 \
        + u^7*b^10 + u^2*b^3*g^7)*y^2 \
    + u*b^6*(u^5*a^7*b^2 + u^3*a^4*b^4*g + u^3*a^3*g^6 + a^3*g^6 + u^2*a^2*b^3*g^4 \
        + u^4*a*b^6*g^2 + u^6*b^9 + u*b^2*g^7)*y";
pub const Q_Y4_COEFF: &str = "(u + 1)^2*(u^2 + u + 1)^2*a*b^6*g^2*(a*g^2 + u^2*b^3)";

/// Linear factors of H over GF(8)(xi), xi^7 = u, as printed. The fourth
/// factor repeats the alpha-coefficient of the third.
pub const H_FACTORS_PRINTED: [&str; 7] = [
    "xi^5*b + xi*a + g",
    "xi^5*b + e1*xi*a + e3*g",
    "xi^5*b + e2*xi*a + e6*g",
    "xi^5*b + e2*xi*a + e2*g",
    "xi^5*b + e4*xi*a + e5*g",
    "xi^5*b + e5*xi*a + e1*g",
    "xi^5*b + e6*xi*a + e4*g",
];

/// The printed list with the fourth alpha-coefficient read as eta^3, which
/// completes the pattern (eta^i, eta^(3i)).
pub const H_FACTORS: [&str; 7] = [
    "xi^5*b + xi*a + g",
    "xi^5*b + e1*xi*a + e3*g",
    "xi^5*b + e2*xi*a + e6*g",
    "xi^5*b + e3*xi*a + e2*g",
    "xi^5*b + e4*xi*a + e5*g",
    "xi^5*b + e5*xi*a + e1*g",
    "xi^5*b + e6*xi*a + e4*g",
];

/// Known factors of the y-eliminant apart from P itself.
pub const ELIMINANT_PREFACTOR: &str = "u*a*b^10*(a*g^2 + u^2*b^3)^3*y*(y + b)";
pub const ELIMINANT_CURVE_FACTOR: &str = "a*g^2 + u^2*b^3";

/// Coefficients of P(y), constant term first. Index 1 is `b * A2` and
/// index 2 is filled from [`A2_AMENDED`].
pub const P_COEFFS: [&str; 7] = [
    "u^4*(u + 1)*(u^2 + u + 1)*a^2*b^3*g^4\
     *(u*a^7 + u^2*a^4*b^2*g + u*a^2*b*g^4 + u^3*a*b^4*g^2 + u^5*b^7 + g^7)",
    "",
    "",
    "(u + 1)^4*(u^2 + u + 1)^4*a^2*b^7*g^4",
    "(u + 1)^4*(u^2 + u + 1)^4*a^2*b^6*g^4",
    "(u + 1)^4*(u^2 + u + 1)^4*a^2*b^5*g^4",
    "(u + 1)^4*(u^2 + u + 1)^4*a^2*b^4*g^4",
];

/// A2 exactly as printed, including the stray trailing `u^8`.
pub const A2_PRINTED: &str = "u^2*(u^6*a^14 + u^2*a^8*b^4*g^2 + a^4*b^2*g^8 + u^8*a^3*b^5*g^6 \
    + u^2*a^3*b^5*g^6 + u^10*a^2*b^8*g^4 + u^7*a*b^4*g^9 + u*a*b^4*g^9 + u^8*b^14*u^8 \
    + u^9*b^7*g^7 + u^3*b^7*g^7 + u^4*g^14)";
/// A2 with the bracket term read as u^8 b^14.
pub const A2_AMENDED: &str = "u^2*(u^6*a^14 + u^2*a^8*b^4*g^2 + a^4*b^2*g^8 + u^8*a^3*b^5*g^6 \
    + u^2*a^3*b^5*g^6 + u^10*a^2*b^8*g^4 + u^7*a*b^4*g^9 + u*a*b^4*g^9 + u^8*b^14 \
    + u^9*b^7*g^7 + u^3*b^7*g^7 + u^4*g^14)";

/// Intersection of the surface with gamma = 0.
pub const GAMMA0_CURVE: &str = "u^8*(a^7 + u*b^7)^2*y*(y + b)";

/// alpha = u^2 beta^3 / gamma^2: the quadratic equation collapses to this
/// relation, linear in x.
pub const DEGENERATE_ALPHA: (&str, &str) = ("u^2*b^3", "g^2");
pub const DEGENERATE_LINEAR: &str =
    "u*g^2*(u^5*b^7 + g^7)*x + b*(u^3*g^7*y^2 + g^7*y^2 + u^8*b^8*y + b*g^7*y)";
pub const DEGENERATE_Q1: &str = "u^10*g^4*b^19*y*(y + b)*(\
    (u + 1)^4*(u^2 + u + 1)^4*b^10*g^28*(y^6 + b*y^5 + b^2*y^4 + b^3*y^3) \
    + u^2*(u^5*b^7 + g^7)^2*(u^10*b^14 + u^5*b^7*g^7 + u^2*b^7*g^7 + g^14)^2*(y^2 + b*y) \
    + u^4*(u + 1)*(u^2 + u + 1)*(u^5*b^7 + g^7)^3*b^9*g^14)";
pub const DEGENERATE_Q1_LEAD: &str = "(u + 1)^4*(u^2 + u + 1)^4*b^10*g^28";

pub(crate) fn gf2(s: &str) -> MPoly {
    MPoly::parse(s, Domain::Gf2).expect("transcribed formula parses")
}

pub(crate) fn gf8(s: &str) -> MPoly {
    MPoly::parse(s, Domain::Gf8).expect("transcribed formula parses")
}

/// All transcriptions as polynomials. Fields are public so tests can plant
/// errors and confirm that exactly the affected check fails.
#[derive(Debug, Clone)]
pub struct Transcriptions {
    pub f: [MPoly; 3],
    pub r1: MPoly,
    pub r2: MPoly,
    pub quadratic_in_x: MPoly,
    pub coeff_a: MPoly,
    pub coeff_b: MPoly,
    pub coeff_c: MPoly,
    pub coeff_d: MPoly,
    pub h: MPoly,
    pub q: MPoly,
    pub q_y4_coeff: MPoly,
    pub h_factors: Vec<MPoly>,
    pub h_factors_printed: Vec<MPoly>,
    pub eliminant_prefactor: MPoly,
    /// A0..A6 with A1 = b * A2 and A2 amended.
    pub p_coeffs: Vec<MPoly>,
    pub a2_printed: MPoly,
    pub gamma0_curve: MPoly,
    pub degenerate_linear: MPoly,
    pub degenerate_q1: MPoly,
    pub degenerate_q1_lead: MPoly,
}

impl Transcriptions {
    pub fn standard() -> Self {
        let a2 = gf2(A2_AMENDED);
        let mut p_coeffs: Vec<MPoly> = P_COEFFS
            .iter()
            .map(|s| if s.is_empty() { MPoly::zero(Domain::Gf2) } else { gf2(s) })
            .collect();
        p_coeffs[1] = &gf2("b") * &a2;
        p_coeffs[2] = a2;
        Transcriptions {
            f: [gf2(F1), gf2(F2), gf2(F3)],
            r1: gf2(R1),
            r2: gf2(R2),
            quadratic_in_x: gf2(QUADRATIC_IN_X),
            coeff_a: gf2(COEFF_A),
            coeff_b: gf2(COEFF_B),
            coeff_c: gf2(COEFF_C),
            coeff_d: gf2(COEFF_D),
            h: gf2(H),
            q: gf2(Q),
            q_y4_coeff: gf2(Q_Y4_COEFF),
            h_factors: H_FACTORS.iter().map(|s| gf8(s)).collect(),
            h_factors_printed: H_FACTORS_PRINTED.iter().map(|s| gf8(s)).collect(),
            eliminant_prefactor: gf2(ELIMINANT_PREFACTOR),
            p_coeffs,
            a2_printed: gf2(A2_PRINTED),
            gamma0_curve: gf2(GAMMA0_CURVE),
            degenerate_linear: gf2(DEGENERATE_LINEAR),
            degenerate_q1: gf2(DEGENERATE_Q1),
            degenerate_q1_lead: gf2(DEGENERATE_Q1_LEAD),
        }
    }

    /// P(y) = A6 y^6 + ... + A0 assembled from the coefficient list.
    pub fn surface_polynomial(&self) -> MPoly {
        MPoly::from_coefficients(Domain::Gf2, crate::mpoly::Var::Y, &self.p_coeffs)
    }
}

impl Default for Transcriptions {
    fn default() -> Self {
        Self::standard()
    }
}
