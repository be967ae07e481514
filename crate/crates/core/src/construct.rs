//! Generator-matrix constructions of Hermitian self-dual codes from a unitary
//! matrix L, closed-form solvers for the bordered families, extension vectors
//! and the building-up / embedding steps.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linalg::{hermitian_dot, Matrix, MatrixJson};
use crate::unitary::{group_closure, Abcd, Convention, Exponents, UnitaryGenSet, WordFamily};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// (Lᵀ | αL)
    Eq5,
    /// (Iₙ | αL)
    Eq6,
    /// (Jₙ − Iₙ | aL), n ≡ 2 mod p
    Eq7,
    /// (Jₙ + Iₙ | aL), n ≡ −2 mod p
    Eq8,
    BorderedMinus,
    BorderedPlus,
    Extended,
    Eq17,
    Buildup,
    Embed,
}

impl Construction {
    pub const ALL: [Construction; 10] = [
        Construction::Eq5,
        Construction::Eq6,
        Construction::Eq7,
        Construction::Eq8,
        Construction::BorderedMinus,
        Construction::BorderedPlus,
        Construction::Extended,
        Construction::Eq17,
        Construction::Buildup,
        Construction::Embed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Construction::Eq5 => "eq5",
            Construction::Eq6 => "eq6",
            Construction::Eq7 => "eq7",
            Construction::Eq8 => "eq8",
            Construction::BorderedMinus => "bordered_minus",
            Construction::BorderedPlus => "bordered_plus",
            Construction::Extended => "extended",
            Construction::Eq17 => "eq17",
            Construction::Buildup => "buildup",
            Construction::Embed => "embed",
        }
    }

    /// Code length produced from an n×n unitary matrix.
    pub fn length(self, n: usize) -> usize {
        match self {
            Construction::Eq5 | Construction::Eq6 | Construction::Eq7 | Construction::Eq8 => 2 * n,
            Construction::Embed => 2 * n,
            _ => 2 * n + 2,
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Construction::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown construction {s:?}")))
    }
}

fn check_unitary(l: &Matrix) -> Result<()> {
    if l.is_unitary()? {
        Ok(())
    } else {
        Err(Error::NotUnitary)
    }
}

fn check_alpha(ctx: &FieldCtx, a: Elem) -> Result<()> {
    if ctx.norm(a) == ctx.neg(Elem::ONE) {
        Ok(())
    } else {
        Err(Error::BadAlpha)
    }
}

fn n_mod_p(ctx: &FieldCtx, n: usize) -> u64 {
    n as u64 % ctx.p() as u64
}

/// G = (Lᵀ | αL).
pub fn construct_eq5(l: &Matrix, alpha: Elem) -> Result<LinearCode> {
    check_unitary(l)?;
    check_alpha(l.ctx(), alpha)?;
    Ok(LinearCode::new(l.transpose().hstack(&l.scalar_mul(alpha))?))
}

/// G = (Iₙ | αL).
pub fn construct_eq6(l: &Matrix, alpha: Elem) -> Result<LinearCode> {
    check_unitary(l)?;
    check_alpha(l.ctx(), alpha)?;
    let id = Matrix::identity(l.ctx(), l.rows());
    Ok(LinearCode::new(id.hstack(&l.scalar_mul(alpha))?))
}

fn j_pm_i(ctx: &Arc<FieldCtx>, n: usize, plus: bool) -> Matrix {
    let diag = if plus { ctx.from_int(2) } else { Elem::ZERO };
    Matrix::from_fn(ctx, n, n, |i, j| if i == j { diag } else { Elem::ONE })
}

/// G = (Jₙ − Iₙ | aL), requires n ≡ 2 (mod p).
pub fn construct_eq7(l: &Matrix, a: Elem) -> Result<LinearCode> {
    let ctx = l.ctx();
    let n = l.rows();
    if n_mod_p(ctx, n) != 2 % ctx.p() as u64 {
        return Err(Error::CongruenceViolated {
            n,
            p: ctx.p() as u64,
            requirement: "n ≡ 2".into(),
        });
    }
    check_unitary(l)?;
    check_alpha(ctx, a)?;
    Ok(LinearCode::new(j_pm_i(ctx, n, false).hstack(&l.scalar_mul(a))?))
}

/// G = (Jₙ + Iₙ | aL), requires n ≡ −2 (mod p).
pub fn construct_eq8(l: &Matrix, a: Elem) -> Result<LinearCode> {
    let ctx = l.ctx();
    let n = l.rows();
    let p = ctx.p() as u64;
    if (n_mod_p(ctx, n) + 2) % p != 0 {
        return Err(Error::CongruenceViolated {
            n,
            p,
            requirement: "n ≡ −2".into(),
        });
    }
    check_unitary(l)?;
    check_alpha(ctx, a)?;
    Ok(LinearCode::new(j_pm_i(ctx, n, true).hstack(&l.scalar_mul(a))?))
}

/// Which bordered family: core Jₙ − Iₙ (minus) or Jₙ + Iₙ (plus).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Minus,
    Plus,
}

impl Family {
    /// The constants (c₁, c₂) of the parameter system: n ∓ 2 and n ∓ 1.
    fn offsets(self) -> (i64, i64) {
        match self {
            Family::Minus => (-2, -1),
            Family::Plus => (2, 1),
        }
    }

    pub fn construction(self) -> Construction {
        match self {
            Family::Minus => Construction::BorderedMinus,
            Family::Plus => Construction::BorderedPlus,
        }
    }
}

/// The seven border parameters, listed in table order (δ, θ, β, α, γ, a, λ).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct BorderedParams {
    pub delta: Elem,
    pub theta: Elem,
    pub beta: Elem,
    pub alpha: Elem,
    pub gamma: Elem,
    pub a: Elem,
    pub lambda: Elem,
}

impl BorderedParams {
    pub fn from_array(v: [Elem; 7]) -> Self {
        BorderedParams {
            delta: v[0],
            theta: v[1],
            beta: v[2],
            alpha: v[3],
            gamma: v[4],
            a: v[5],
            lambda: v[6],
        }
    }

    pub fn to_array(&self) -> [Elem; 7] {
        [
            self.delta,
            self.theta,
            self.beta,
            self.alpha,
            self.gamma,
            self.a,
            self.lambda,
        ]
    }

    /// Residuals of the three equations of the family's parameter system.
    pub fn residuals(&self, ctx: &FieldCtx, n: usize, family: Family) -> [Elem; 3] {
        let (c1, c2) = family.offsets();
        let nn = ctx.from_int(n as i64);
        let e1 = ctx.add(
            ctx.add(ctx.norm(self.delta), ctx.from_int(n as i64 + c1)),
            ctx.norm(self.gamma),
        );
        let e2 = [
            ctx.norm(self.theta),
            ctx.mul(nn, ctx.norm(self.beta)),
            ctx.norm(self.alpha),
            ctx.mul(nn, ctx.norm(self.lambda)),
        ]
        .into_iter()
        .fold(Elem::ZERO, |s, t| ctx.add(s, t));
        let e3 = [
            ctx.mul(self.theta, ctx.conj(self.delta)),
            ctx.mul(ctx.from_int(n as i64 + c2), self.beta),
            ctx.mul(self.alpha, ctx.conj(self.gamma)),
            ctx.mul(self.lambda, ctx.conj(self.a)),
        ]
        .into_iter()
        .fold(Elem::ZERO, |s, t| ctx.add(s, t));
        [e1, e2, e3]
    }

    pub fn check_system(&self, ctx: &FieldCtx, n: usize, family: Family) -> Result<()> {
        for (i, r) in self.residuals(ctx, n, family).iter().enumerate() {
            if !r.is_zero() {
                return Err(Error::SystemViolated(i as u8 + 1));
            }
        }
        Ok(())
    }
}

/// The (n+1)×(2n+2) bordered matrix, without any checks.
pub fn bordered_matrix(l: &Matrix, params: &BorderedParams, family: Family) -> Matrix {
    let ctx = l.ctx();
    let f = &**ctx;
    let n = l.rows();
    let core = j_pm_i(ctx, n, family == Family::Plus);
    let row_sum: Vec<Elem> = (0..n)
        .map(|j| (0..n).fold(Elem::ZERO, |s, i| f.add(s, l.get(i, j))))
        .collect();
    Matrix::from_fn(ctx, n + 1, 2 * n + 2, |i, j| {
        if i == 0 {
            match j {
                0 => params.theta,
                j if j <= n => params.beta,
                j if j == n + 1 => params.alpha,
                j => f.mul(params.lambda, row_sum[j - n - 2]),
            }
        } else {
            let r = i - 1;
            match j {
                0 => params.delta,
                j if j <= n => core.get(r, j - 1),
                j if j == n + 1 => params.gamma,
                j => f.mul(params.a, l.get(r, j - n - 2)),
            }
        }
    })
}

/// Bordered construction. The result is always self-orthogonal; when
/// `require_self_dual` is set a rank-n generator is rejected.
pub fn construct_bordered(
    l: &Matrix,
    params: &BorderedParams,
    family: Family,
    require_self_dual: bool,
) -> Result<LinearCode> {
    let ctx = l.ctx();
    check_unitary(l)?;
    check_alpha(ctx, params.a)?;
    params.check_system(ctx, l.rows(), family)?;
    let code = LinearCode::new(bordered_matrix(l, params, family));
    if require_self_dual && code.dimension() != l.rows() + 1 {
        return Err(Error::RankDeficient {
            rank: code.dimension(),
            expected: l.rows() + 1,
        });
    }
    Ok(code)
}

/// Identifies one closed-form case: family, δ ∈ {0, 1} and the case number.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BorderedCase {
    pub family: Family,
    pub delta: u8,
    pub case: u8,
}

impl BorderedCase {
    /// Every case: 3 for δ = 0 and 4 for δ = 1 in each family.
    pub fn all() -> Vec<BorderedCase> {
        let mut out = Vec::new();
        for family in [Family::Minus, Family::Plus] {
            for (delta, cases) in [(0u8, 3u8), (1, 4)] {
                for case in 1..=cases {
                    out.push(BorderedCase { family, delta, case });
                }
            }
        }
        out
    }

    /// γ^(q+1) for this case: 2−n, 1−n, −2−n or −3−n.
    pub fn gamma_norm(&self, n: usize) -> i64 {
        let n = n as i64;
        match (self.family, self.delta) {
            (Family::Minus, 0) => 2 - n,
            (Family::Minus, _) => 1 - n,
            (Family::Plus, 0) => -2 - n,
            (Family::Plus, _) => -3 - n,
        }
    }

    /// θ ∈ GF(p) must satisfy this polynomial congruence in cases δ=1/1 and δ=1/2.
    fn theta_congruence(&self, n: i64, t: i64) -> i64 {
        match (self.family, self.case) {
            (Family::Minus, 1) => (t - 2) * (t - 2) * n - (2 * t * t - 4 * t + 4),
            (Family::Minus, _) => (t - 1) * (t - 1) * n - (2 * t * t - 2 * t + 1),
            (Family::Plus, 1) => (t - 2) * (t - 2) * n + 2 * t * t - 4 * t - 4,
            (Family::Plus, _) => (t - 1) * (t - 1) * n + 2 * t * t - 2 * t - 1,
        }
    }

    fn needs_prime_field_theta(&self) -> bool {
        self.delta == 1 && self.case <= 2
    }

    fn needs_root_theta(&self) -> bool {
        (self.delta == 0 && self.case == 2) || (self.delta == 1 && self.case == 3)
    }
}

impl fmt::Display for BorderedCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::Minus => "minus",
            Family::Plus => "plus",
        };
        write!(f, "{fam}/delta{}/case{}", self.delta, self.case)
    }
}

/// Optional overrides for the free choices of a closed-form case.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct CaseChoices {
    pub theta: Option<Elem>,
    pub gamma: Option<Elem>,
    pub a: Option<Elem>,
}

/// Closed-form parameters for one case of the bordered families. γ is the
/// smallest-log root of the family's norm equation unless overridden, θ
/// defaults to 1 where it is free, and `a` defaults to the canonical α.
pub fn solve_bordered_params(
    ctx: &FieldCtx,
    n: usize,
    case: BorderedCase,
    choices: CaseChoices,
) -> Result<BorderedParams> {
    let f = ctx;
    let p = ctx.p() as i64;
    let ni = n as i64;
    let nm = ni.rem_euclid(p);
    let guard = |cond: bool, msg: &str| {
        if cond {
            Ok(())
        } else {
            Err(Error::GuardViolated(msg.to_string()))
        }
    };
    let k = |v: i64| f.from_int(v);
    let div = |x: Elem, y: Elem, what: &str| {
        f.div(x, y)
            .map_err(|_| Error::GuardViolated(format!("{what} vanishes")))
    };

    if !(1..=4).contains(&case.case) || case.delta > 1 || (case.delta == 0 && case.case == 4) {
        return Err(Error::GuardViolated(format!("no such case {case}")));
    }
    let a = choices.a.unwrap_or_else(|| ctx.alpha_for_minus_one());
    check_alpha(ctx, a)?;

    let gnorm = case.gamma_norm(n);
    guard(gnorm.rem_euclid(p) != 0, "γ^(q+1) ≡ 0 (mod p)")?;
    let gamma = match choices.gamma {
        Some(g) => {
            guard(f.norm(g) == k(gnorm), "γ override does not satisfy its norm equation")?;
            g
        }
        None => f.norm_root(k(gnorm)).map_err(|_| Error::NoGammaRoot)?,
    };
    let gq = f.conj(gamma);
    let delta = if case.delta == 0 { Elem::ZERO } else { Elem::ONE };

    let theta = if case.needs_root_theta() {
        guard(nm != 0, "n ≡ 0 (mod p)")?;
        let root = f.norm_root(k(ni))?;
        match choices.theta {
            Some(t) => {
                guard(f.norm(t) == k(ni), "θ override is not a (q+1)-th root of n")?;
                t
            }
            None => root,
        }
    } else if case.needs_prime_field_theta() {
        let ok = |t: i64| case.theta_congruence(ni, t).rem_euclid(p) == 0;
        match choices.theta {
            Some(t) => {
                guard(f.is_in_prime_field(t), "θ must lie in GF(p)")?;
                let ti = (0..p).find(|&v| k(v) == t).expect("prime field element");
                guard(ok(ti), "θ does not satisfy the case congruence")?;
                t
            }
            None => {
                let ti = (0..p)
                    .find(|&t| ok(t))
                    .ok_or_else(|| Error::GuardViolated("no θ in GF(p) solves the case congruence".into()))?;
                k(ti)
            }
        }
    } else {
        let t = choices.theta.unwrap_or(Elem::ONE);
        guard(!t.is_zero(), "θ must be nonzero")?;
        t
    };

    let at = f.mul(a, theta);
    let (beta, alpha, lambda) = match (case.family, case.delta, case.case) {
        (Family::Minus, 0, 1) => {
            let beta = f.mul(at, gamma);
            (beta, div(f.mul(k(1 - ni), beta), gq, "γ")?, Elem::ZERO)
        }
        (Family::Minus, 0, 2) => {
            let beta = div(Elem::ONE, f.add(k(ni - 1), f.mul(at, gq)), "n−1+aθγ^q")?;
            (beta, f.mul(at, beta), a)
        }
        (Family::Minus, 0, 3) => {
            let beta = div(f.mul(at, gq), k(2 - ni), "2−n")?;
            (beta, at, f.mul(beta, a))
        }
        (Family::Minus, 1, 1) => {
            guard(p != 2, "p must be odd")?;
            guard(nm != 3 % p, "n ≡ 3 (mod p)")?;
            let alpha = div(f.sub(k(2 * (1 - ni)), theta), gq, "γ")?;
            (k(2), alpha, Elem::ZERO)
        }
        (Family::Minus, 1, 2) => {
            guard(nm != 2 % p, "n ≡ 2 (mod p)")?;
            let alpha = div(f.sub(k(1 - ni), theta), gq, "γ")?;
            (Elem::ONE, alpha, Elem::ZERO)
        }
        (Family::Minus, 1, 3) => {
            let beta = div(
                f.sub(Elem::ONE, theta),
                f.add(k(ni - 1), f.mul(at, gq)),
                "n−1+aθγ^q",
            )?;
            (beta, f.mul(at, beta), a)
        }
        (Family::Minus, 1, 4) => {
            guard(nm != 2 % p, "n ≡ 2 (mod p)")?;
            let beta = div(
                f.mul(theta, f.add(Elem::ONE, f.mul(a, gq))),
                k(2 - ni),
                "2−n",
            )?;
            (beta, at, f.mul(beta, a))
        }
        (Family::Plus, 0, 1) => {
            let beta = f.mul(at, gamma);
            (beta, div(f.mul(k(-(ni + 1)), beta), gq, "γ")?, Elem::ZERO)
        }
        (Family::Plus, 0, 2) => {
            let beta = div(Elem::ONE, f.add(k(ni + 1), f.mul(at, gq)), "1+n+aθγ^q")?;
            (beta, f.mul(at, beta), a)
        }
        (Family::Plus, 0, 3) => {
            guard(nm != 0, "n ≡ 0 (mod p)")?;
            let beta = div(f.neg(f.mul(at, gq)), k(ni), "n")?;
            (beta, at, f.mul(beta, a))
        }
        (Family::Plus, 1, 1) => {
            guard(p != 2, "p must be odd")?;
            guard(nm != 1 % p, "n ≡ 1 (mod p)")?;
            let alpha = div(f.sub(k(-2 * (1 + ni)), theta), gq, "γ")?;
            (k(2), alpha, Elem::ZERO)
        }
        (Family::Plus, 1, 2) => {
            guard(nm != 0, "n ≡ 0 (mod p)")?;
            let alpha = div(f.sub(k(-(1 + ni)), theta), gq, "γ")?;
            (Elem::ONE, alpha, Elem::ZERO)
        }
        (Family::Plus, 1, 3) => {
            guard(nm != 1 % p, "n ≡ 1 (mod p)")?;
            let beta = div(
                f.sub(Elem::ONE, theta),
                f.add(k(ni + 1), f.mul(at, gq)),
                "n+1+aθγ^q",
            )?;
            (beta, f.mul(at, beta), a)
        }
        (Family::Plus, 1, 4) => {
            guard(nm != 0 && (nm + 2) % p != 0, "n ≡ 0 or −2 (mod p)")?;
            let beta = div(
                f.neg(f.mul(theta, f.add(Elem::ONE, f.mul(a, gq)))),
                k(ni),
                "n",
            )?;
            (beta, at, f.mul(beta, a))
        }
        _ => unreachable!("case range checked above"),
    };
    let params = BorderedParams {
        delta,
        theta,
        beta,
        alpha,
        gamma,
        a,
        lambda,
    };
    params.check_system(ctx, n, case.family)?;
    Ok(params)
}

/// Extension data for the (n+2)-column extended construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionSpec {
    pub lambdas: Vec<Elem>,
    pub x: Vec<Elem>,
    pub a: Elem,
}

/// Rows L′ᵢ = (aLᵢ | aλᵢ, λᵢ).
pub fn extended_rows(l: &Matrix, lambdas: &[Elem], a: Elem) -> Result<Matrix> {
    let n = l.rows();
    if lambdas.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} lambdas for n = {n}",
            lambdas.len()
        )));
    }
    let f = &**l.ctx();
    Ok(Matrix::from_fn(l.ctx(), n, n + 2, |i, j| match j {
        j if j < n => f.mul(a, l.get(i, j)),
        j if j == n => f.mul(a, lambdas[i]),
        _ => lambdas[i],
    }))
}

/// Generator (Iₙ | aL | aλᵢ, λᵢ) over (0 | x).
pub fn construct_extended(l: &Matrix, spec: &ExtensionSpec) -> Result<LinearCode> {
    let ctx = l.ctx();
    let f = &**ctx;
    let n = l.rows();
    check_unitary(l)?;
    check_alpha(ctx, spec.a)?;
    let lp = extended_rows(l, &spec.lambdas, spec.a)?;
    if spec.x.len() != n + 2 {
        return Err(Error::SpecViolated(format!("x has length {}", spec.x.len())));
    }
    if !hermitian_dot(f, &spec.x, &spec.x).is_zero() {
        return Err(Error::SpecViolated("x ∗ x ≠ 0".into()));
    }
    if let Some(i) = (0..n).find(|&i| !hermitian_dot(f, lp.row(i), &spec.x).is_zero()) {
        return Err(Error::SpecViolated(format!("L′{} ∗ x ≠ 0", i + 1)));
    }
    let top = Matrix::identity(ctx, n).hstack(&lp)?;
    let mut bottom = vec![Elem::ZERO; n];
    bottom.extend_from_slice(&spec.x);
    let g = top.vstack(&Matrix::from_rows(ctx, &[bottom])?)?;
    Ok(LinearCode::new(g))
}

/// The vector y: y₁ = 1, y_(n+1) = 0, y_(n+2) = −1/m₁,ₙ₊₂^q and
/// yᵢ = −y_(n+2)·mᵢ,ₙ₊₂^q, read off the echelon form M of L′.
pub fn extension_y(l: &Matrix, lambdas: &[Elem], a: Elem) -> Result<Vec<Elem>> {
    let f = &**l.ctx();
    let n = l.rows();
    let m = extended_rows(l, lambdas, a)?.echelon_form().matrix;
    let m1 = m.get(0, n + 1);
    if m1.is_zero() {
        return Err(Error::DegenerateExtension);
    }
    let last = f.neg(f.inv(f.conj(m1))?);
    let mut y = vec![Elem::ZERO; n + 2];
    y[0] = Elem::ONE;
    for (i, yi) in y.iter_mut().enumerate().take(n).skip(1) {
        *yi = f.neg(f.mul(last, f.conj(m.get(i, n + 1))));
    }
    y[n + 1] = last;
    Ok(y)
}

/// x₀ = (0, …, 0, a, 1).
pub fn x0(ctx: &FieldCtx, n: usize, a: Elem) -> Vec<Elem> {
    let mut v = vec![Elem::ZERO; n + 2];
    v[n] = a;
    v[n + 1] = Elem::ONE;
    let _ = ctx;
    v
}

/// Every nonzero x = αx₀ + βy with x ∗ x = 0, α outer, β inner,
/// both in element order.
pub fn find_extension_vectors(l: &Matrix, lambdas: &[Elem], a: Elem) -> Result<Vec<Vec<Elem>>> {
    let ctx = l.ctx();
    let f = &**ctx;
    check_unitary(l)?;
    check_alpha(f, a)?;
    let n = l.rows();
    let y = extension_y(l, lambdas, a)?;
    let base = x0(f, n, a);
    let lp = extended_rows(l, lambdas, a)?;
    let mut out = Vec::new();
    for alpha in f.elements() {
        for beta in f.elements() {
            if alpha.is_zero() && beta.is_zero() {
                continue;
            }
            let x: Vec<Elem> = base
                .iter()
                .zip(&y)
                .map(|(&u, &v)| f.add(f.mul(alpha, u), f.mul(beta, v)))
                .collect();
            if hermitian_dot(f, &x, &x).is_zero() {
                debug_assert!((0..n).all(|i| hermitian_dot(f, lp.row(i), &x).is_zero()));
                out.push(x);
            }
        }
    }
    Ok(out)
}

fn check_eq17(ctx: &FieldCtx, n: usize) -> Result<()> {
    if n_mod_p(ctx, n) != 1 % ctx.p() as u64 {
        return Err(Error::CongruenceViolated {
            n,
            p: ctx.p() as u64,
            requirement: "n ≡ 1".into(),
        });
    }
    Ok(())
}

/// x₁ = (a(L₁ + ⋯ + Lₙ), 0, 1).
pub fn eq17_explicit_x(l: &Matrix, a: Elem) -> Vec<Elem> {
    let f = &**l.ctx();
    let n = l.rows();
    let mut x: Vec<Elem> = (0..n)
        .map(|j| f.mul(a, (0..n).fold(Elem::ZERO, |s, i| f.add(s, l.get(i, j)))))
        .collect();
    x.push(Elem::ZERO);
    x.push(Elem::ONE);
    x
}

/// The family {αx₁ + βx₀ : α, β ∈ GF(q)} minus zero, filtered by z ∗ z = 0.
pub fn eq17_vectors(l: &Matrix, a: Elem) -> Result<Vec<Vec<Elem>>> {
    let f = &**l.ctx();
    check_eq17(f, l.rows())?;
    let x1 = eq17_explicit_x(l, a);
    let x0v = x0(f, l.rows(), a);
    let mut out = Vec::new();
    for alpha in f.subfield_elements() {
        for beta in f.subfield_elements() {
            if alpha.is_zero() && beta.is_zero() {
                continue;
            }
            let z: Vec<Elem> = x1
                .iter()
                .zip(&x0v)
                .map(|(&u, &v)| f.add(f.mul(alpha, u), f.mul(beta, v)))
                .collect();
            if hermitian_dot(f, &z, &z).is_zero() {
                out.push(z);
            }
        }
    }
    Ok(out)
}

/// Extended construction with all λᵢ = 1, requiring n ≡ 1 (mod p). With
/// `x = None` the explicit vector (aΣLᵢ, 0, 1) is used.
pub fn construct_eq17(l: &Matrix, a: Elem, x: Option<&[Elem]>) -> Result<LinearCode> {
    let f = &**l.ctx();
    let n = l.rows();
    check_eq17(f, n)?;
    let x = x.map_or_else(|| eq17_explicit_x(l, a), |v| v.to_vec());
    let spec = ExtensionSpec {
        lambdas: vec![Elem::ONE; n],
        x,
        a,
    };
    construct_extended(l, &spec)
}

/// Building-up: from a self-dual code of length 2n and x with x ∗ x = −1, the
/// generator with first row (1, 0 | x) and rows (−yᵢ, a·yᵢ | gᵢ), yᵢ = gᵢ ∗ x.
pub fn build_up(c0: &LinearCode, x: &[Elem], a: Elem) -> Result<LinearCode> {
    let ctx = c0.ctx();
    let f = &**ctx;
    if f.norm(a) != f.neg(Elem::ONE) {
        return Err(Error::PreconditionFailed("a^(q+1) ≠ −1".into()));
    }
    if !c0.is_self_dual_h() {
        return Err(Error::PreconditionFailed("seed code is not self-dual".into()));
    }
    if x.len() != c0.length() {
        return Err(Error::PreconditionFailed("x length differs from seed length".into()));
    }
    if hermitian_dot(f, x, x) != f.neg(Elem::ONE) {
        return Err(Error::PreconditionFailed("x ∗ x ≠ −1".into()));
    }
    let g0 = c0.generator();
    let mut rows = Vec::with_capacity(g0.rows() + 1);
    let mut first = vec![Elem::ONE, Elem::ZERO];
    first.extend_from_slice(x);
    rows.push(first);
    for i in 0..g0.rows() {
        let y = hermitian_dot(f, g0.row(i), x);
        let mut r = vec![f.neg(y), f.mul(a, y)];
        r.extend_from_slice(g0.row(i));
        rows.push(r);
    }
    Ok(LinearCode::new(Matrix::from_rows(ctx, &rows)?))
}

/// Vectors x with x ∗ x = −1, in lexicographic element order, at most `limit`.
pub fn buildup_vectors(ctx: &FieldCtx, len: usize, limit: usize) -> Vec<Vec<Elem>> {
    let minus_one = ctx.neg(Elem::ONE);
    let elems: Vec<Elem> = ctx.elements().collect();
    let q = elems.len();
    let mut out = Vec::new();
    let total = (q as u128).saturating_pow(len as u32);
    let mut idx = vec![0usize; len];
    let mut count = 0u128;
    while count < total && out.len() < limit {
        let v: Vec<Elem> = idx.iter().map(|&i| elems[i]).collect();
        if hermitian_dot(ctx, &v, &v) == minus_one {
            out.push(v);
        }
        for d in (0..len).rev() {
            idx[d] += 1;
            if idx[d] < q {
                break;
            }
            idx[d] = 0;
        }
        count += 1;
    }
    out
}

/// Embeds a self-orthogonal [2n−1, n−1] or [2n, n−1] code into a self-dual
/// [2n, n] code by padding a zero coordinate (odd length) and adjoining the
/// first isotropic vector of C₀^⊥H outside C₀.
pub fn embed_lengthen(c: &LinearCode) -> Result<LinearCode> {
    let ctx = c.ctx();
    let f = &**ctx;
    if !c.is_self_orthogonal_h() {
        return Err(Error::PreconditionFailed("code is not self-orthogonal".into()));
    }
    let g = if c.length() % 2 == 1 {
        c.generator().hstack(&Matrix::zeros(ctx, c.dimension(), 1))?
    } else {
        c.generator().clone()
    };
    let len = g.cols();
    if 2 * (c.dimension() + 1) != len {
        return Err(Error::PreconditionFailed(format!(
            "expected a [{}, {}] code, got [{}, {}]",
            len,
            len / 2 - 1,
            c.length(),
            c.dimension()
        )));
    }
    let dual = LinearCode::new(g.clone()).hermitian_dual();
    let mut span = g.clone();
    let mut comp: Vec<Vec<Elem>> = Vec::new();
    let dual_basis = dual.generator().echelon_form().matrix;
    for i in 0..dual_basis.rows() {
        let row = Matrix::from_rows(ctx, &[dual_basis.row(i).to_vec()])?;
        let next = span.vstack(&row)?;
        if next.rank() > span.rank() {
            span = next;
            comp.push(dual_basis.row(i).to_vec());
        }
    }
    if comp.len() != 2 {
        return Err(Error::NoIsotropicVector);
    }
    for c1 in f.elements() {
        for c2 in f.elements() {
            if c1.is_zero() && c2.is_zero() {
                continue;
            }
            let x: Vec<Elem> = comp[0]
                .iter()
                .zip(&comp[1])
                .map(|(&u, &v)| f.add(f.mul(c1, u), f.mul(c2, v)))
                .collect();
            if hermitian_dot(f, &x, &x).is_zero() {
                let out = g.vstack(&Matrix::from_rows(ctx, &[x])?)?;
                return Ok(LinearCode::new(out));
            }
        }
    }
    Err(Error::NoIsotropicVector)
}

/// Replayable description of one constructed code. Element-valued fields are
/// strings in the "0", "1", "w^k" or integer form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub construction: Option<Construction>,
    pub q2: u64,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ijkl: Option<Exponents>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<Convention>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abcd: Option<[String; 4]>,
    /// Index into the BFS-ordered closure of the generators, for n ≤ 3.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closure_index: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<String>>,
    /// Explicit unitary matrix; overrides ijkl and closure_index.
    #[serde(default, rename = "L", skip_serializing_if = "Option::is_none")]
    pub l: Option<MatrixJson>,
    /// Explicit generator: the seed for buildup and embed, or a stand-alone code.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<MatrixJson>,
}

/// Parameter keys of the bordered families, in table order.
pub const BORDERED_KEYS: [&str; 7] = ["delta", "theta", "beta", "alpha", "gamma", "a", "lambda"];

fn parse_elems(ctx: &FieldCtx, v: &[String]) -> Result<Vec<Elem>> {
    v.iter().map(|s| ctx.parse_elem(s)).collect()
}

pub fn elems_to_strings(v: &[Elem]) -> Vec<String> {
    v.iter().map(|e| e.to_string()).collect()
}

impl ConstructionSpec {
    pub fn ctx(&self) -> Result<Arc<FieldCtx>> {
        FieldCtx::from_order(self.q2)
    }

    fn param(&self, ctx: &FieldCtx, key: &str) -> Result<Option<Elem>> {
        self.params.get(key).map(|s| ctx.parse_elem(s)).transpose()
    }

    pub fn parsed_abcd(&self, ctx: &FieldCtx) -> Result<Option<Abcd>> {
        match &self.abcd {
            None => Ok(None),
            Some(v) => {
                let e = parse_elems(ctx, v)?;
                Ok(Some([e[0], e[1], e[2], e[3]]))
            }
        }
    }

    /// The n×n unitary matrix this spec refers to.
    pub fn unitary(&self, ctx: &Arc<FieldCtx>) -> Result<Matrix> {
        if let Some(l) = &self.l {
            return l.to_matrix(ctx);
        }
        let gens = match self.parsed_abcd(ctx)? {
            Some(abcd) => UnitaryGenSet::with_abcd(ctx, self.n, abcd)?,
            None => UnitaryGenSet::new(ctx, self.n)?,
        };
        if let Some(idx) = self.closure_index {
            let gs: Vec<Matrix> = gens.all().into_iter().cloned().collect();
            let (elems, _) = group_closure(&gs, idx as u64 + 1)?;
            return elems
                .into_iter()
                .nth(idx)
                .ok_or_else(|| Error::PreconditionFailed(format!("closure has no element {idx}")));
        }
        match self.ijkl {
            Some([0, 0, 0, 0]) | None => Ok(Matrix::identity(ctx, self.n)),
            Some(e) => {
                let fam = WordFamily::new(
                    &gens,
                    self.m.unwrap_or(self.n as u64),
                    self.convention.unwrap_or(Convention::Printed),
                )?;
                Ok(fam.matrix(e))
            }
        }
    }

    /// Bordered parameters, either all seven explicit or solved from a "case"
    /// entry such as "minus/delta0/case2" with optional theta, gamma, a overrides.
    pub fn bordered_params(&self, ctx: &FieldCtx, family: Family) -> Result<BorderedParams> {
        if let Some(case) = self.params.get("case") {
            let case = parse_case(case)?;
            if case.family != family {
                return Err(Error::Parse(format!("case {case} does not match family")));
            }
            let choices = CaseChoices {
                theta: self.param(ctx, "theta")?,
                gamma: self.param(ctx, "gamma")?,
                a: self.param(ctx, "a")?,
            };
            return solve_bordered_params(ctx, self.n, case, choices);
        }
        let mut v = [Elem::ZERO; 7];
        for (slot, key) in v.iter_mut().zip(BORDERED_KEYS) {
            *slot = self
                .param(ctx, key)?
                .ok_or_else(|| Error::Parse(format!("missing parameter {key}")))?;
        }
        Ok(BorderedParams::from_array(v))
    }

    pub fn set_bordered_params(&mut self, p: &BorderedParams) {
        for (key, e) in BORDERED_KEYS.iter().zip(p.to_array()) {
            self.params.insert(key.to_string(), e.to_string());
        }
    }

    /// Rebuilds the code this spec describes.
    pub fn build(&self) -> Result<LinearCode> {
        let ctx = self.ctx()?;
        let f = &*ctx;
        let Some(construction) = self.construction else {
            return match &self.generator {
                Some(g) => Ok(LinearCode::new(g.to_matrix(&ctx)?)),
                None => Err(Error::Parse("spec has no construction or generator".into())),
            };
        };
        let scale = |key: &str| -> Result<Elem> {
            Ok(self.param(f, key)?.unwrap_or_else(|| f.alpha_for_minus_one()))
        };
        match construction {
            Construction::Eq5 => construct_eq5(&self.unitary(&ctx)?, scale("alpha")?),
            Construction::Eq6 => construct_eq6(&self.unitary(&ctx)?, scale("alpha")?),
            Construction::Eq7 => construct_eq7(&self.unitary(&ctx)?, scale("a")?),
            Construction::Eq8 => construct_eq8(&self.unitary(&ctx)?, scale("a")?),
            Construction::BorderedMinus | Construction::BorderedPlus => {
                let family = if construction == Construction::BorderedMinus {
                    Family::Minus
                } else {
                    Family::Plus
                };
                let params = self.bordered_params(f, family)?;
                construct_bordered(&self.unitary(&ctx)?, &params, family, false)
            }
            Construction::Extended => {
                let l = self.unitary(&ctx)?;
                let a = scale("a")?;
                let lambdas = parse_elems(
                    f,
                    self.lambdas
                        .as_ref()
                        .ok_or_else(|| Error::Parse("extended needs lambdas".into()))?,
                )?;
                let x = match &self.x {
                    Some(x) => parse_elems(f, x)?,
                    None => find_extension_vectors(&l, &lambdas, a)?
                        .into_iter()
                        .next()
                        .ok_or(Error::NoIsotropicVector)?,
                };
                construct_extended(&l, &ExtensionSpec { lambdas, x, a })
            }
            Construction::Eq17 => {
                let x = self.x.as_ref().map(|x| parse_elems(f, x)).transpose()?;
                construct_eq17(&self.unitary(&ctx)?, scale("a")?, x.as_deref())
            }
            Construction::Buildup => {
                let seed = self.seed(&ctx)?;
                let x = parse_elems(
                    f,
                    self.x
                        .as_ref()
                        .ok_or_else(|| Error::Parse("buildup needs x".into()))?,
                )?;
                build_up(&seed, &x, scale("a")?)
            }
            Construction::Embed => embed_lengthen(&self.seed(&ctx)?),
        }
    }

    fn seed(&self, ctx: &Arc<FieldCtx>) -> Result<LinearCode> {
        let g = self
            .generator
            .as_ref()
            .ok_or_else(|| Error::Parse("spec needs a generator".into()))?;
        Ok(LinearCode::new(g.to_matrix(ctx)?))
    }
}

/// Parses "minus/delta0/case1" (the `Display` form of a case).
pub fn parse_case(s: &str) -> Result<BorderedCase> {
    let bad = || Error::Parse(format!("bad case {s:?}, expected e.g. minus/delta0/case1"));
    let parts: Vec<&str> = s.split('/').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let family = match parts[0] {
        "minus" => Family::Minus,
        "plus" => Family::Plus,
        _ => return Err(bad()),
    };
    let delta = parts[1].strip_prefix("delta").and_then(|d| d.parse().ok()).ok_or_else(bad)?;
    let case = parts[2].strip_prefix("case").and_then(|d| d.parse().ok()).ok_or_else(bad)?;
    Ok(BorderedCase { family, delta, case })
}
