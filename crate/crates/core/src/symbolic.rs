//! Codazzi and Gauss residuals of the Levi-Civita connection in the adapted
//! orthonormal frame, as exact polynomials in the connection coefficients,
//! the tensor coefficients `a4`, `a6`, the mean curvature `H` and opaque
//! frame derivatives such as `T(a4)`.

use crate::error::{Error, Result};
use crate::poly::{Bindings, Polynomial, Symbol};
use crate::tensor::{metric_eval, CanonicalK, FrameIndex, FrameSignature, FrameVector};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub type SymbolicVector = FrameVector<Polynomial>;

const ORTHO: FrameSignature = FrameSignature::Orthonormal;

/// Only the mean curvature is constant along the hypersurface.
pub fn is_constant(s: &Symbol) -> bool {
    matches!(s, Symbol::Named(n) if n == "H")
}

fn p(name: &str) -> Polynomial {
    Polynomial::named(name)
}

fn vec3(a: Polynomial, b: Polynomial, c: Polynomial) -> SymbolicVector {
    FrameVector([a, b, c])
}

/// `table[i][j]` is the covariant derivative of `e_j` along `e_i`. Metric
/// compatibility leaves nine free coefficients; the `b` coefficients are the
/// rotation speed of the `V`, `W` plane.
pub fn connection_table() -> [[SymbolicVector; 3]; 3] {
    let z = Polynomial::zero;
    let row = |a: &str, c: &str, b: &str| [vec3(z(), p(a), p(c)), vec3(p(a), z(), -p(b)), vec3(p(c), p(b), z())];
    [row("a12", "a13", "b13"), row("a22", "a23", "b23"), row("a32", "a33", "b33")]
}

pub fn symbolic_k() -> CanonicalK<Polynomial> {
    CanonicalK::Ortho { a4: p("a4"), a6: p("a6") }
}

/// Levi-Civita derivative of the field `z` along `y`, where both are given
/// by frame components that may vary from point to point.
pub fn nabla_hat(y: &SymbolicVector, z: &SymbolicVector) -> SymbolicVector {
    let table = connection_table();
    let mut acc = FrameVector::zero();
    for i in 0..3 {
        if y.0[i].is_zero() {
            continue;
        }
        for j in 0..3 {
            if z.0[j].is_zero() {
                continue;
            }
            acc = acc + table[i][j].scale(&(&y.0[i] * &z.0[j]));
        }
        let dir = FrameIndex::from_index(i);
        let dz = z.map(|c| c.frame_derivative(dir, &is_constant));
        acc = acc + dz.scale(&y.0[i]);
    }
    acc
}

/// Table entry for a pair of frame vectors; constant components carry no
/// derivative terms.
pub fn nabla_hat_symbolic(x: FrameIndex, y: FrameIndex) -> SymbolicVector {
    nabla_hat(&FrameVector::basis(x.index()), &FrameVector::basis(y.index()))
}

fn k(x: &SymbolicVector, y: &SymbolicVector) -> SymbolicVector {
    crate::tensor::difference_tensor_eval(&symbolic_k(), x, y)
}

/// `(nabla_X K)(Y, Z) - (nabla_Y K)(X, Z)`.
pub fn codazzi_residual(x: FrameIndex, y: FrameIndex, z: FrameIndex) -> SymbolicVector {
    let (x, y, z): (SymbolicVector, SymbolicVector, SymbolicVector) =
        (FrameVector::basis(x.index()), FrameVector::basis(y.index()), FrameVector::basis(z.index()));
    let nk = |a: &SymbolicVector, b: &SymbolicVector, c: &SymbolicVector| {
        nabla_hat(a, &k(b, c)) - k(&nabla_hat(a, b), c) - k(b, &nabla_hat(a, c))
    };
    nk(&x, &y, &z) - nk(&y, &x, &z)
}

/// Levi-Civita curvature minus its value predicted by the Gauss equation.
pub fn gauss_residual(x: FrameIndex, y: FrameIndex, z: FrameIndex) -> SymbolicVector {
    let (x, y, z): (SymbolicVector, SymbolicVector, SymbolicVector) =
        (FrameVector::basis(x.index()), FrameVector::basis(y.index()), FrameVector::basis(z.index()));
    let h = p("H");
    let bracket = nabla_hat(&x, &y) - nabla_hat(&y, &x);
    nabla_hat(&x, &nabla_hat(&y, &z))
        - nabla_hat(&y, &nabla_hat(&x, &z))
        - nabla_hat(&bracket, &z)
        - x.scale(&(&h * &metric_eval(&y, &z, ORTHO)))
        + y.scale(&(&h * &metric_eval(&x, &z, ORTHO)))
        + k(&x, &k(&y, &z))
        - k(&y, &k(&x, &z))
}

use FrameIndex::{T, V, W};

/// Frame triples at which the Codazzi residual is evaluated, up to the
/// antisymmetry in the first two slots and the symmetry of `K`.
pub const CODAZZI_TRIPLES: [(FrameIndex, FrameIndex, FrameIndex); 9] =
    [(V, T, T), (W, T, T), (T, V, V), (W, V, V), (T, W, W), (V, W, W), (T, V, W), (V, W, T), (W, T, V)];

/// Frame triples at which the Gauss residual is evaluated.
pub const GAUSS_TRIPLES: [(FrameIndex, FrameIndex, FrameIndex); 9] =
    [(T, V, V), (T, W, V), (V, W, V), (T, V, T), (T, W, T), (V, W, T), (T, V, W), (T, W, W), (V, W, W)];

/// The Codazzi triple whose content is implied by the others and is left
/// out of the displayed system.
pub const REDUNDANT_CODAZZI_TRIPLE: (FrameIndex, FrameIndex, FrameIndex) = (T, V, W);

/// Reference form of the Codazzi system in the adapted frame.
pub const CODAZZI_SYSTEM: [&str; 17] = [
    "V(a4) = -2*a12*a4",
    "T(a4) = -4*a22*a4 + a12*a6",
    "0 = 4*a23*a4 + a13*a6",
    "W(a4) = -2*a13*a4",
    "0 = 4*a32*a4 + a13*a6",
    "T(a4) = -4*a33*a4 - a12*a6",
    "T(a6) - V(a4) = 3*a12*a4 - a22*a6",
    "0 = a13*a4 + (a23 + 3*b13)*a6",
    "W(a4) = (a23 + a32)*a6",
    "W(a6) = (-a23 + 3*a32)*a4 - 3*b23*a6",
    "V(a6) = (-a22 + a33)*a4 + 3*b33*a6",
    "T(a6) = -a12*a4 - a33*a6",
    "W(a4) = -3*a13*a4 + (-a32 + 3*b13)*a6",
    "V(a4) = (-a22 + a33)*a6",
    "W(a6) = (3*a23 - a32)*a4 - 3*b23*a6",
    "0 = (a23 - a32)*a4",
    "W(a4) = -a13*a4 + (a32 - 3*b13)*a6",
];

/// Connection relations forced by the Codazzi system when `a6^2 != 4 a4^2`.
pub const GENERIC_RELATIONS: [(&str, &str); 4] = [("a13", "0"), ("a32", "-a23"), ("a12", "0"), ("a33", "a22")];

/// Reference form of the Gauss system under [`GENERIC_RELATIONS`].
pub const GAUSS_SYSTEM: [&str; 7] = [
    "T(a22) = -a22^2 + a23^2 + H - 3*a4^2",
    "T(a23) = -2*a22*a23",
    "W(a22) + V(a23) = 0",
    "W(a23) - V(a22) = 0",
    "V(b13) - T(b23) = a22*b23 + (a23 + b13)*b33",
    "T(b33) - W(b13) = (a23 + b13)*b23 - a22*b33",
    "V(b33) - W(b23) = -a22^2 - a23^2 + 2*a23*b13 + b23^2 + b33^2 + H + a4^2 + 2*a6^2",
];

pub fn triple_label(t: (FrameIndex, FrameIndex, FrameIndex)) -> String {
    format!("{}{}{}", t.0.name(), t.1.name(), t.2.name())
}

#[derive(Clone, Debug, Serialize)]
pub struct Component {
    /// `kind[XYZ].i`, with `i` the frame component `T`, `V` or `W`.
    pub label: String,
    pub residual: String,
}

#[derive(Clone, Debug)]
pub struct LabelledResidual {
    pub label: String,
    pub poly: Polynomial,
}

fn components(
    kind: &str,
    triples: &[(FrameIndex, FrameIndex, FrameIndex)],
    f: fn(FrameIndex, FrameIndex, FrameIndex) -> SymbolicVector,
) -> Vec<LabelledResidual> {
    triples
        .iter()
        .flat_map(|&t| {
            let r = f(t.0, t.1, t.2);
            let lab = triple_label(t);
            (0..3).map(move |i| LabelledResidual {
                label: format!("{kind}[{lab}].{}", FrameIndex::from_index(i).name()),
                poly: r.0[i].clone(),
            })
        })
        .collect()
}

pub fn codazzi_components() -> Vec<LabelledResidual> {
    components("codazzi", &CODAZZI_TRIPLES, codazzi_residual)
}

pub fn gauss_components() -> Vec<LabelledResidual> {
    components("gauss", &GAUSS_TRIPLES, gauss_residual)
}

#[derive(Clone, Debug, Serialize)]
pub struct EquationMatch {
    pub reference: String,
    pub normal_form: String,
    /// Labels of computed components equal to the reference up to a factor.
    pub matched_by: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SystemMatch {
    pub equations: Vec<EquationMatch>,
    /// Nonzero computed components that match no reference equation.
    pub unmatched_components: Vec<Component>,
    pub components_checked: usize,
    pub passed: bool,
}

/// Structural comparison of computed residual components with a reference
/// list of equations: every nonzero component must be a rational multiple of
/// some reference equation and every reference equation must be hit.
pub fn match_system(computed: &[LabelledResidual], reference: &[&str]) -> Result<SystemMatch> {
    let refs: Vec<Polynomial> =
        reference.iter().map(|s| Polynomial::parse_equation(s).map(|q| q.normal_form())).collect::<Result<_>>()?;
    let mut equations: Vec<EquationMatch> = reference
        .iter()
        .zip(&refs)
        .map(|(s, q)| EquationMatch { reference: s.to_string(), normal_form: q.to_string(), matched_by: Vec::new() })
        .collect();
    let mut unmatched = Vec::new();
    for c in computed {
        if c.poly.is_zero() {
            continue;
        }
        let nf = c.poly.normal_form();
        let hits: Vec<usize> = (0..refs.len()).filter(|&i| refs[i] == nf).collect();
        if hits.is_empty() {
            unmatched.push(Component { label: c.label.clone(), residual: c.poly.to_string() });
        }
        for i in hits {
            equations[i].matched_by.push(c.label.clone());
        }
    }
    let passed = unmatched.is_empty() && equations.iter().all(|e| !e.matched_by.is_empty());
    Ok(SystemMatch { components_checked: computed.len(), equations, unmatched_components: unmatched, passed })
}

/// Codazzi components excluding the redundant triple.
pub fn displayed_codazzi_components() -> Vec<LabelledResidual> {
    let skip = triple_label(REDUNDANT_CODAZZI_TRIPLE);
    codazzi_components().into_iter().filter(|c| !c.label.contains(&format!("[{skip}]"))).collect()
}

pub fn verify_codazzi_system() -> Result<SystemMatch> {
    match_system(&displayed_codazzi_components(), &CODAZZI_SYSTEM)
}

pub fn generic_bindings() -> Bindings {
    Bindings::parse(&GENERIC_RELATIONS)
        .and_then(|b| b.with_derivative_closure(&is_constant))
        .expect("generic relations are acyclic")
}

/// Gauss components that carry information once [`GENERIC_RELATIONS`] hold.
/// The remaining components are consequences of the Codazzi relations or of
/// each other and are not part of the reference system.
pub fn verify_gauss_system() -> Result<SystemMatch> {
    let b = generic_bindings();
    let comps: Vec<LabelledResidual> =
        gauss_components().into_iter().map(|c| LabelledResidual { label: c.label, poly: b.apply(&c.poly) }).collect();
    let refs: Vec<Polynomial> =
        GAUSS_SYSTEM.iter().map(|s| Polynomial::parse_equation(s).map(|q| q.normal_form())).collect::<Result<_>>()?;
    let hitting: Vec<LabelledResidual> =
        comps.into_iter().filter(|c| !c.poly.is_zero() && refs.contains(&c.poly.normal_form())).collect();
    match_system(&hitting, &GAUSS_SYSTEM)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SymmetryCase {
    SO2,
    S3,
    Z3,
    Z3Degenerate,
}

impl SymmetryCase {
    pub const ALL: [SymmetryCase; 4] =
        [SymmetryCase::SO2, SymmetryCase::S3, SymmetryCase::Z3, SymmetryCase::Z3Degenerate];

    pub fn name(self) -> &'static str {
        match self {
            SymmetryCase::SO2 => "so2",
            SymmetryCase::S3 => "s3",
            SymmetryCase::Z3 => "z3",
            SymmetryCase::Z3Degenerate => "z3-degenerate",
        }
    }

    /// Relations among connection coefficients and first derivatives of the
    /// tensor coefficients that solve the Codazzi system in this case.
    pub fn relations(self) -> &'static [(&'static str, &'static str)] {
        match self {
            SymmetryCase::SO2 => &[
                ("a12", "0"),
                ("a13", "0"),
                ("a23", "0"),
                ("a32", "0"),
                ("a33", "a22"),
                ("a6", "0"),
                ("T(a4)", "-4*a22*a4"),
                ("V(a4)", "0"),
                ("W(a4)", "0"),
            ],
            SymmetryCase::S3 => &[
                ("a4", "0"),
                ("a12", "0"),
                ("a13", "0"),
                ("a23", "-3*b13"),
                ("a32", "3*b13"),
                ("a33", "a22"),
                ("T(a6)", "-a22*a6"),
                ("V(a6)", "3*b33*a6"),
                ("W(a6)", "-3*b23*a6"),
            ],
            SymmetryCase::Z3 => &[
                ("a12", "0"),
                ("a13", "0"),
                ("a23", "0"),
                ("a32", "0"),
                ("a33", "a22"),
                ("b13", "0"),
                ("T(a4)", "-4*a22*a4"),
                ("V(a4)", "0"),
                ("W(a4)", "0"),
                ("T(a6)", "-a22*a6"),
                ("V(a6)", "3*b33*a6"),
                ("W(a6)", "-3*b23*a6"),
            ],
            SymmetryCase::Z3Degenerate => &[
                ("a6", "2*a4"),
                ("a12", "2*a22"),
                ("a33", "-a22"),
                ("b33", "-a22"),
                ("a13", "-2*a23"),
                ("a32", "a23"),
                ("b23", "-a23"),
                ("b13", "0"),
                ("T(a4)", "0"),
                ("V(a4)", "-4*a22*a4"),
                ("W(a4)", "4*a23*a4"),
            ],
        }
    }

    /// Case relations closed under frame derivatives.
    pub fn bindings(self) -> Bindings {
        Bindings::parse(self.relations())
            .and_then(|b| b.with_derivative_closure(&is_constant))
            .expect("case relations are acyclic")
    }
}

impl fmt::Display for SymmetryCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SymmetryCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        SymmetryCase::ALL.into_iter().find(|c| c.name() == norm).ok_or_else(|| Error::UnknownCase(s.to_string()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub case: SymmetryCase,
    pub relations: Vec<String>,
    pub components_checked: usize,
    pub nonzero: Vec<Component>,
    pub passed: bool,
}

/// Substitutes the case relations into all 27 Codazzi components.
pub fn verify_case(case: SymmetryCase) -> CaseReport {
    let b = case.bindings();
    let comps = codazzi_components();
    let nonzero: Vec<Component> = comps
        .iter()
        .filter_map(|c| {
            let r = b.apply(&c.poly);
            (!r.is_zero()).then(|| Component { label: c.label.clone(), residual: r.to_string() })
        })
        .collect();
    CaseReport {
        case,
        relations: case.relations().iter().map(|(l, r)| format!("{l} = {r}")).collect(),
        components_checked: comps.len(),
        passed: nonzero.is_empty(),
        nonzero,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Contradiction {
    pub case: SymmetryCase,
    /// Rational coefficients of the Gauss components entering the combination.
    pub combination: Vec<(String, String)>,
    pub result: String,
    /// Same combination after additionally setting `a4 = 0`.
    pub result_at_zero: String,
    pub proportional_to_a4_squared: bool,
}

/// Looks for a rational combination of the Gauss residual components, after
/// the case relations and their derivatives are substituted, in which every
/// monomial other than powers of `a4` cancels.
pub fn derive_contradiction(case: SymmetryCase) -> Result<Contradiction> {
    let b = case.bindings();
    let comps: Vec<LabelledResidual> = gauss_components()
        .into_iter()
        .map(|c| LabelledResidual { label: c.label, poly: b.apply(&c.poly) })
        .filter(|c| !c.poly.is_zero())
        .collect();
    let a4 = Symbol::named("a4");
    let allowed = |m: &crate::poly::Monomial| m.factors().iter().all(|(s, _)| *s == a4);

    let mut forbidden: Vec<crate::poly::Monomial> = Vec::new();
    for c in &comps {
        for (m, _) in c.poly.terms() {
            if !allowed(m) && !forbidden.contains(m) {
                forbidden.push(m.clone());
            }
        }
    }
    // Columns are components, rows are forbidden monomials.
    let matrix: Vec<Vec<BigRational>> = forbidden
        .iter()
        .map(|m| {
            comps
                .iter()
                .map(|c| {
                    c.poly.terms().find(|(n, _)| *n == m).map(|(_, q)| q.clone()).unwrap_or_else(BigRational::zero)
                })
                .collect()
        })
        .collect();
    for v in nullspace(matrix, comps.len()) {
        let mut combo = Polynomial::zero();
        for (c, q) in comps.iter().zip(&v) {
            combo = combo + c.poly.scale(q);
        }
        if combo.is_zero() {
            continue;
        }
        let target = Polynomial::named("a4").pow(2);
        let proportional = combo.ratio_to(&target).is_some();
        let zero_a4 = Bindings::parse(&[("a4", "0")])?;
        return Ok(Contradiction {
            case,
            combination: comps
                .iter()
                .zip(&v)
                .filter(|(_, q)| !q.is_zero())
                .map(|(c, q)| (c.label.clone(), q.to_string()))
                .collect(),
            result_at_zero: zero_a4.apply(&combo).to_string(),
            result: combo.to_string(),
            proportional_to_a4_squared: proportional,
        });
    }
    Err(Error::Config(format!("no contradiction found for case {case}")))
}

/// Basis of the right nullspace of a dense rational matrix.
fn nullspace(mut m: Vec<Vec<BigRational>>, ncols: usize) -> Vec<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(r) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, r);
        let inv = BigRational::one() / m[row][col].clone();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..ncols {
                    let d = &f * &m[row][c];
                    m[r][c] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            // Present with the smallest integer coefficients.
            let scale = v.iter().fold(num_bigint::BigInt::one(), |acc, q| num_integer::Integer::lcm(&acc, q.denom()));
            v.into_iter().map(|q| q * BigRational::from_integer(scale.clone())).collect()
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RicciReport {
    pub entries: Vec<(String, String)>,
    pub scalar_minus_expected: String,
    pub pick_contraction: String,
    pub pick_closed_form: String,
    pub passed: bool,
}

/// Ricci tensor of the canonical form with symbolic `H`, `a4`, `a6`.
pub fn ricci_report() -> RicciReport {
    use crate::tensor::{pick_closed_form, pick_invariant, ricci_matrix, scalar_curvature, CurvatureContext};
    let ctx = CurvatureContext::new(symbolic_k(), p("H"));
    let ric = ricci_matrix(&ctx);
    let diag = ["-2*(H - 3*a4^2)", "2*(H - a4^2 + a6^2)", "2*(H - a4^2 + a6^2)"];
    let mut ok = true;
    let mut entries = Vec::new();
    for i in 0..3 {
        for j in i..3 {
            let e = if i == j { Polynomial::parse(diag[i]).expect("literal parses") } else { Polynomial::zero() };
            ok &= e == ric[i][j] && ric[i][j] == ric[j][i];
            entries.push((
                format!("{}{}", FrameIndex::from_index(i).name(), FrameIndex::from_index(j).name()),
                ric[i][j].to_string(),
            ));
        }
    }
    let j_contraction = pick_invariant(&ctx.k);
    let j_closed = pick_closed_form(&ctx.k);
    let diff = scalar_curvature(&ctx) - (p("H") + j_contraction.clone());
    ok &= diff.is_zero() && j_contraction == j_closed;
    RicciReport {
        entries,
        scalar_minus_expected: diff.to_string(),
        pick_contraction: j_contraction.to_string(),
        pick_closed_form: j_closed.to_string(),
        passed: ok,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub version: &'static str,
    pub codazzi: SystemMatch,
    pub gauss: SystemMatch,
    pub cases: Vec<CaseReport>,
    pub contradiction: Contradiction,
    pub ricci: RicciReport,
    pub passed: bool,
}

/// Runs every symbolic check, restricted to one case if given.
pub fn verify_identities(only: Option<SymmetryCase>) -> Result<IdentityReport> {
    let codazzi = verify_codazzi_system()?;
    let gauss = verify_gauss_system()?;
    let cases: Vec<CaseReport> = match only {
        Some(c) => vec![verify_case(c)],
        None => SymmetryCase::ALL.iter().map(|&c| verify_case(c)).collect(),
    };
    let contradiction = derive_contradiction(SymmetryCase::Z3Degenerate)?;
    let ricci = ricci_report();
    let passed = codazzi.passed
        && gauss.passed
        && cases.iter().all(|c| c.passed)
        && contradiction.proportional_to_a4_squared
        && contradiction.result_at_zero == "0"
        && ricci.passed;
    Ok(IdentityReport { version: crate::VERSION, codazzi, gauss, cases, contradiction, ricci, passed })
}

pub fn components_by_label(list: &[LabelledResidual]) -> BTreeMap<String, Polynomial> {
    list.iter().map(|c| (c.label.clone(), c.poly.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(s: &str) -> Polynomial {
        Polynomial::parse_equation(s).unwrap()
    }

    #[test]
    fn connection_table_is_metric() {
        // h(nabla_X e_j, e_k) + h(e_j, nabla_X e_k) = 0 for a constant frame.
        let t = connection_table();
        for row in &t {
            for j in 0..3 {
                for k in 0..3 {
                    let s = metric_eval(&row[j], &FrameVector::basis(k), ORTHO)
                        + metric_eval(&FrameVector::basis(j), &row[k], ORTHO);
                    assert!(s.is_zero());
                }
            }
        }
    }

    #[test]
    fn nabla_of_constant_frame_is_table() {
        let n = nabla_hat_symbolic(T, V);
        assert_eq!(n, connection_table()[0][1]);
    }

    #[test]
    fn nabla_of_scaled_field_has_derivative_marker() {
        let z = FrameVector([p("f"), Polynomial::zero(), Polynomial::zero()]);
        let n = nabla_hat(&FrameVector::basis(1), &z);
        assert_eq!(n.0[0], Polynomial::parse("V(f)").unwrap());
        assert_eq!(n.0[1], Polynomial::parse("a22*f").unwrap());
    }

    #[test]
    fn first_codazzi_triple() {
        let r = codazzi_residual(V, T, T);
        assert_eq!(r.0[0], Polynomial::parse("-2*V(a4) - 4*a12*a4").unwrap());
        assert_eq!(r.0[2].normal_form(), eq("0 = 4*a23*a4 + a13*a6").normal_form());
    }

    #[test]
    fn codazzi_is_antisymmetric_in_first_slots() {
        for &(x, y, z) in &CODAZZI_TRIPLES {
            assert_eq!(codazzi_residual(x, y, z), -codazzi_residual(y, x, z));
        }
    }

    #[test]
    fn misweighted_b23_term_is_rejected() {
        let bad = eq("W(a6) = (-a23 + 3*a32)*a4 - b23*a6").normal_form();
        assert!(codazzi_components().iter().all(|c| c.poly.normal_form() != bad));
    }

    #[test]
    fn case_names_round_trip() {
        for c in SymmetryCase::ALL {
            assert_eq!(c.name().parse::<SymmetryCase>().unwrap(), c);
        }
        assert!("so3".parse::<SymmetryCase>().is_err());
    }

    #[test]
    fn nullspace_of_small_matrix() {
        let q = |n: i64| BigRational::from_integer(n.into());
        let ns = nullspace(vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]], 3);
        assert_eq!(ns.len(), 2);
    }
}
