//! Local automorphisms: shape characterizations, the point-witness solver
//! and local-but-not-global examples.
//!
//! A linear map `Phi` is local when every `x` has an automorphism `phi_x`
//! with `Phi(x) = phi_x(x)`. Two shape variants are available:
//!
//! * [`ShapeVariant::Literal`]: the textbook zero pattern (lower triangular,
//!   `(n-1, n)` free and row `n` supported on columns 1 and `n` for the
//!   filiform families, `(n, n) = 1` for `mu14`).
//! * [`ShapeVariant::Derived`]: what the definition actually forces. It adds
//!   the `(n-2, n)` entry for `mu12`/`mu14` (automorphisms use it) and
//!   diagonal relations coupling `b_mm` with `b_nn` for `mu12`, `mu13` and
//!   `mu14`. Without them, `x = e_m + e_n` has no witness.
//!
//! The solver branches on `m`, the first nonzero coordinate of `x`. It first
//! pins `a_1` from the root constraints of that branch, then recovers the
//! remaining parameters row by row; every unknown enters its row linearly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{make_algebra, AlgebraFamily, FamilyTag};
use crate::automorphism::{
    build_automorphism, is_automorphism, small_nonzero_rational, small_rational, AutFailure, AutoParams,
};
use crate::error::Error;
use crate::linalg::{SquareMatrix, Vector};
use crate::quadratic::QuadScalar;
use crate::scalar::{nth_roots, ApproxScalar, ExactScalar, Mode, Scalar};
use crate::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeVariant {
    Literal,
    Derived,
}

impl fmt::Display for ShapeVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShapeVariant::Literal => "literal",
            ShapeVariant::Derived => "derived",
        })
    }
}

/// Right-hand side of a diagonal relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagonalRhs {
    One,
    Diagonal { index: usize, power: u32 },
}

/// `b_{index,index}^power = rhs`, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagonalRelation {
    pub index: usize,
    pub power: u32,
    pub rhs: DiagonalRhs,
}

impl DiagonalRelation {
    fn holds(&self, m: &SquareMatrix<ExactScalar>) -> bool {
        let d = |k: usize| m.get(k - 1, k - 1);
        let lhs = d(self.index).pow(self.power);
        match &self.rhs {
            DiagonalRhs::One => lhs == ExactScalar::one(),
            DiagonalRhs::Diagonal { index, power } => lhs == d(*index).pow(*power),
        }
    }
}

impl fmt::Display for DiagonalRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.index;
        match &self.rhs {
            DiagonalRhs::One if self.power == 1 => write!(f, "b({k},{k}) = 1"),
            DiagonalRhs::One => write!(f, "b({k},{k})^{} = 1", self.power),
            DiagonalRhs::Diagonal { index: j, power } => {
                write!(f, "b({k},{k})^{} = b({j},{j})^{power}", self.power)
            }
        }
    }
}

/// Zero pattern, fixed entries, nonzero entries and diagonal relations.
/// Positions are 1-based `(row, col)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalShape {
    pub family: AlgebraFamily,
    pub variant: ShapeVariant,
    pub zeros: BTreeSet<(usize, usize)>,
    pub fixed: BTreeMap<(usize, usize), ExactScalar>,
    pub nonzero: BTreeSet<(usize, usize)>,
    pub relations: Vec<DiagonalRelation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeRule {
    Zero,
    Fixed,
    Nonzero,
    Relation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Error)]
#[error("entry ({row}, {col}) is {found}: {expected}")]
pub struct ShapeViolation {
    pub row: usize,
    pub col: usize,
    pub rule: ShapeRule,
    pub found: String,
    pub expected: String,
}

impl LocalShape {
    pub fn new(family: AlgebraFamily, variant: ShapeVariant) -> Self {
        let AlgebraFamily { tag, n } = family;
        let mut free: BTreeSet<(usize, usize)> = BTreeSet::new();
        for i in 1..=n {
            for j in 1..=i {
                free.insert((i, j));
            }
        }
        if tag.is_filiform() {
            free.retain(|&(i, j)| i < n || j == 1 || j == n);
            free.insert((n - 1, n));
            if variant == ShapeVariant::Derived && matches!(tag, FamilyTag::Mu12 | FamilyTag::Mu14) {
                free.insert((n - 2, n));
            }
        }
        let mut zeros = BTreeSet::new();
        for i in 1..=n {
            for j in 1..=n {
                if !free.contains(&(i, j)) {
                    zeros.insert((i, j));
                }
            }
        }
        let mut fixed = BTreeMap::new();
        if tag == FamilyTag::Mu14 {
            fixed.insert((n, n), ExactScalar::one());
        }
        let nonzero = (1..=n).map(|k| (k, k)).filter(|p| !fixed.contains_key(p)).collect();
        let relations = match variant {
            ShapeVariant::Literal => Vec::new(),
            ShapeVariant::Derived => derived_relations(tag, n),
        };
        LocalShape { family, variant, zeros, fixed, nonzero, relations }
    }

    /// Checks zeros, fixed entries and nonzero entries (row-major first
    /// violation), but not the diagonal relations.
    pub fn check_pattern(&self, m: &SquareMatrix<ExactScalar>) -> Result<(), ShapeViolation> {
        let n = self.family.n;
        if m.dim() != n {
            return Err(ShapeViolation {
                row: 0,
                col: 0,
                rule: ShapeRule::Zero,
                found: format!("{0}x{0} matrix", m.dim()),
                expected: format!("{n}x{n} matrix"),
            });
        }
        for i in 1..=n {
            for j in 1..=n {
                let v = m.get(i - 1, j - 1);
                let fail = |rule, expected: String| {
                    Err(ShapeViolation { row: i, col: j, rule, found: v.to_string(), expected })
                };
                if self.zeros.contains(&(i, j)) && !v.is_zero() {
                    return fail(ShapeRule::Zero, "must be 0".into());
                }
                if let Some(want) = self.fixed.get(&(i, j)) {
                    if v != want {
                        return fail(ShapeRule::Fixed, format!("must be {want}"));
                    }
                }
                if self.nonzero.contains(&(i, j)) && v.is_zero() {
                    return fail(ShapeRule::Nonzero, "must be nonzero".into());
                }
            }
        }
        Ok(())
    }

    pub fn check(&self, m: &SquareMatrix<ExactScalar>) -> Result<(), ShapeViolation> {
        self.check_pattern(m)?;
        for rel in &self.relations {
            if !rel.holds(m) {
                let k = rel.index;
                return Err(ShapeViolation {
                    row: k,
                    col: k,
                    rule: ShapeRule::Relation,
                    found: m.get(k - 1, k - 1).to_string(),
                    expected: format!("must satisfy {rel}"),
                });
            }
        }
        Ok(())
    }

    /// Seeded random member of the shape with small rational entries.
    pub fn random_member(&self, rng: &mut impl Rng) -> SquareMatrix<ExactScalar> {
        let n = self.family.n;
        let mut m = SquareMatrix::<ExactScalar>::zeros(n);
        for i in 1..=n {
            for j in 1..=n {
                if self.zeros.contains(&(i, j)) || i == j {
                    continue;
                }
                m.set(i - 1, j - 1, small_rational(rng));
            }
        }
        let diag = if self.relations.is_empty() {
            (0..n).map(|_| small_nonzero_rational(rng)).collect()
        } else {
            self.related_diagonal(rng)
        };
        for (k, d) in diag.into_iter().enumerate() {
            m.set(k, k, d);
        }
        for (&(i, j), v) in &self.fixed {
            m.set(i - 1, j - 1, v.clone());
        }
        debug_assert!(self.check(&m).is_ok());
        m
    }

    /// Diagonal satisfying the relations: powers of a common rational `c`
    /// with random signs where the relations allow them.
    fn related_diagonal(&self, rng: &mut impl Rng) -> Vec<ExactScalar> {
        let n = self.family.n;
        let c = small_nonzero_rational(rng);
        let mut base: Vec<ExactScalar> = (0..n).map(|_| small_nonzero_rational(rng)).collect();
        match self.family.tag {
            FamilyTag::Mu12 => {
                base[n - 1] = c.pow(n as u32 - 1);
                for m in 2..n.saturating_sub(2) {
                    base[m - 1] = c.pow(2 * m as u32);
                }
            }
            FamilyTag::Mu13 => {
                base[n - 1] = c.pow(n as u32 - 2);
                for m in 2..=n - 2 {
                    base[m - 1] = c.pow(m as u32);
                }
            }
            _ => base = vec![ExactScalar::one(); n],
        }
        let mut probe = SquareMatrix::diagonal(base.clone());
        for _ in 0..20 {
            let signed: Vec<ExactScalar> =
                base.iter().map(|d| if rng.gen_bool(0.5) { -d.clone() } else { d.clone() }).collect();
            probe = SquareMatrix::diagonal(signed.clone());
            if self.relations.iter().all(|r| r.holds(&probe)) {
                return signed;
            }
        }
        debug_assert!(self.relations.iter().all(|r| r.holds(&SquareMatrix::diagonal(base.clone()))), "{probe:?}");
        base
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn derived_relations(tag: FamilyTag, n: usize) -> Vec<DiagonalRelation> {
    let rel = |index: usize, power: usize, rhs_power: usize| DiagonalRelation {
        index,
        power: power as u32,
        rhs: DiagonalRhs::Diagonal { index: n, power: rhs_power as u32 },
    };
    match tag {
        // x = e_m + e_n: a^m = b_mm and a^{n-1} = b_nn^2 must share a root
        FamilyTag::Mu12 => (2..n.saturating_sub(2))
            .map(|m| {
                let g = gcd(m, n - 1);
                rel(m, (n - 1) / g, 2 * m / g)
            })
            .collect(),
        // x = e_m + e_n: a^m = b_mm and a^{n-2} = b_nn must share a root
        FamilyTag::Mu13 => (2..=n - 2)
            .map(|m| {
                let g = gcd(m, n - 2);
                rel(m, (n - 2) / g, m / g)
            })
            .collect(),
        // a_1 = 1 and x = e_k give b_kk = 1
        FamilyTag::Mu14 => {
            (1..n).map(|k| DiagonalRelation { index: k, power: 1, rhs: DiagonalRhs::One }).collect()
        }
        FamilyTag::Mu0 | FamilyTag::Mu11 => Vec::new(),
    }
}

/// Checks `m` against the derived local shape of `family`.
pub fn matches_local_shape(family: AlgebraFamily, m: &SquareMatrix<ExactScalar>) -> Result<(), ShapeViolation> {
    LocalShape::new(family, ShapeVariant::Derived).check(m)
}

/// Parameters of a witness in whichever mode produced it.
#[derive(Debug, Clone, PartialEq)]
pub enum WitnessParams {
    Exact(AutoParams<ExactScalar>),
    /// Exact over `Q(√q)`; values serialize as `"u + v*sqrt(q)"`.
    Quadratic(AutoParams<QuadScalar>),
    Approx(AutoParams<ApproxScalar>),
}

impl Serialize for WitnessParams {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            WitnessParams::Exact(p) => p.serialize(serializer),
            WitnessParams::Quadratic(p) => p.serialize(serializer),
            WitnessParams::Approx(p) => p.serialize(serializer),
        }
    }
}

impl WitnessParams {
    pub fn a1(&self) -> ApproxScalar {
        match self {
            WitnessParams::Exact(p) => p.a1().to_approx(),
            WitnessParams::Quadratic(p) => p.a1().to_approx(),
            WitnessParams::Approx(p) => *p.a1(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub branch: usize,
    pub params: WitnessParams,
    /// Largest entry of `|Phi x - phi_x x|`, each scaled by `max(1, |(Phi x)_i|)`.
    pub residual: f64,
    pub exactness: Mode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Error)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessError {
    #[error("x is the zero vector")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("shape violation: {violation}")]
    Shape { violation: ShapeViolation },
    #[error("branch {branch}: no a_1 satisfies {}", constraints.join(", "))]
    NoConsistentRoot { branch: usize, constraints: Vec<String> },
    #[error("branch {branch}: residual {residual:e} at row {row}")]
    Residual { branch: usize, row: usize, residual: f64 },
    #[error("branch {branch}: witness is not an automorphism: {failure}")]
    NotAutomorphism { branch: usize, failure: AutFailure },
    #[error("branch {branch}: {message}")]
    Params { branch: usize, message: String },
}

/// `a_1^power = value`; power 0 means `value` must be 1.
#[derive(Debug, Clone)]
struct RootConstraint {
    power: u32,
    value: ExactScalar,
}

impl fmt::Display for RootConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.power {
            0 => write!(f, "1 = {}", self.value),
            p => write!(f, "a_1^{p} = {}", self.value),
        }
    }
}

#[derive(Debug, Clone)]
enum Root {
    Exact(ExactScalar),
    Quad(QuadScalar),
    Approx(ApproxScalar),
}

impl Root {
    fn meets(&self, c: &RootConstraint) -> bool {
        match self {
            Root::Exact(a) => a.pow(c.power) == c.value,
            Root::Quad(a) => a.pow(c.power) == QuadScalar::rational(&c.value),
            Root::Approx(a) => a.pow(c.power).close_to(&c.value.to_approx()),
        }
    }

    fn tier(&self) -> u8 {
        match self {
            Root::Exact(_) => 0,
            Root::Quad(_) => 1,
            Root::Approx(_) => 2,
        }
    }

    fn to_quad(&self) -> Option<QuadScalar> {
        match self {
            Root::Exact(a) => Some(QuadScalar::rational(a)),
            Root::Quad(a) => Some(a.clone()),
            Root::Approx(_) => None,
        }
    }

    fn to_approx(&self) -> ApproxScalar {
        match self {
            Root::Exact(a) => a.to_approx(),
            Root::Quad(a) => a.to_approx(),
            Root::Approx(a) => *a,
        }
    }
}

/// Picks `a_1`: rational roots, then square roots in `Q(√q)`, then complex
/// floats; within a tier, the first that also meets the preferred
/// constraints.
fn select_a1(forced: &[RootConstraint], preferred: &[RootConstraint], mode: Mode) -> Option<Root> {
    let mut cands = match forced.iter().find(|c| c.power >= 1) {
        Some(c) => {
            let roots = nth_roots(&c.value, c.power);
            let mut v: Vec<Root> = roots.rational_roots(c.power).into_iter().map(Root::Exact).collect();
            if c.power == 2 {
                if let Some(w) = QuadScalar::sqrt_of(&c.value) {
                    v.extend([Root::Quad(w.clone()), Root::Quad(-w)]);
                }
            }
            v.extend(roots.approx.into_iter().map(Root::Approx));
            v
        }
        None => vec![Root::Exact(ExactScalar::one())],
    };
    if mode == Mode::Approx {
        cands = cands.iter().filter(|r| r.tier() != 1).map(|r| Root::Approx(r.to_approx())).collect();
    }
    cands.retain(|r| r.to_approx().norm() > 0.0);
    for tier in 0..3 {
        for with_preferred in [true, false] {
            let hit = cands.iter().find(|r| {
                r.tier() == tier
                    && forced.iter().all(|c| r.meets(c))
                    && (!with_preferred || preferred.iter().all(|c| r.meets(c)))
            });
            if let Some(r) = hit {
                return Some(r.clone());
            }
        }
    }
    None
}

/// Values fixed before forward substitution.
struct Pinned<S> {
    a1: S,
    /// `mu12`: the radical `r`; `mu11`: `b_n`.
    b_n: Option<S>,
}

/// Finds an automorphism `phi_x` with `phi_x(x) = Phi(x)`.
///
/// `Mode::Exact` works over the rationals and falls back to complex floats
/// only when a required root leaves them; `Mode::Approx` uses floats
/// throughout.
pub fn solve_witness(
    family: AlgebraFamily,
    phi: &SquareMatrix<ExactScalar>,
    x: &Vector<ExactScalar>,
    mode: Mode,
) -> Result<WitnessReport, WitnessError> {
    let AlgebraFamily { tag, n } = family;
    if x.len() != n {
        return Err(WitnessError::DimensionMismatch { expected: n, got: x.len() });
    }
    LocalShape::new(family, ShapeVariant::Derived)
        .check_pattern(phi)
        .map_err(|violation| WitnessError::Shape { violation })?;
    let m = x.leading_index().ok_or(WitnessError::ZeroVector)?;

    let d = |k: usize| phi.get(k - 1, k - 1).clone();
    let xn_nonzero = !x[n - 1].is_zero();
    let at = |power: usize, value: ExactScalar| RootConstraint { power: power as u32, value };
    let mut forced = Vec::new();
    let mut preferred = Vec::new();
    let mut radical_pin = None;
    if tag == FamilyTag::Mu14 {
        forced.push(at(1, ExactScalar::one()));
    }
    if !tag.is_filiform() || m == 1 {
        forced.push(at(m, d(m)));
    } else {
        // row m is pure in a_1 unless a_n (mu12, mu14 at m = n-2) or
        // b_{n-1} (m = n-1) can absorb it
        let absorbed = xn_nonzero
            && ((m == n - 2 && matches!(tag, FamilyTag::Mu12 | FamilyTag::Mu14)) || m == n - 1);
        if m <= n - 1 {
            if absorbed {
                preferred.push(at(m, d(m)));
            } else {
                forced.push(at(m, d(m)));
            }
        }
        // row n with x_1 = 0: b_nn x_n = (last column)_n x_n
        if xn_nonzero {
            match tag {
                FamilyTag::Mu12 => {
                    forced.push(at(n - 1, d(n).pow(2)));
                    radical_pin = Some(d(n));
                }
                FamilyTag::Mu13 => forced.push(at(n - 2, d(n))),
                FamilyTag::Mu14 => forced.push(at(0, d(n))),
                _ => {}
            }
        }
    }

    let a1 = select_a1(&forced, &preferred, mode).ok_or_else(|| WitnessError::NoConsistentRoot {
        branch: m,
        constraints: forced.iter().map(ToString::to_string).collect(),
    })?;

    // mu12 radical r with r^2 = a_1^{n-1}
    let approx_radical = |a: ApproxScalar| Root::Approx(a.pow(n as u32 - 1).nth_roots(2)[0]);
    let radical = match (tag, radical_pin, &a1) {
        (FamilyTag::Mu12, Some(r), _) => Some(Root::Exact(r)),
        (FamilyTag::Mu12, None, Root::Exact(a)) => {
            let square = a.pow(n as u32 - 1);
            Some(match (square.exact_root(2), QuadScalar::sqrt_of(&square)) {
                (Some(r), _) => Root::Exact(r),
                (None, Some(w)) if mode == Mode::Exact => Root::Quad(w),
                _ => approx_radical(a.to_approx()),
            })
        }
        (FamilyTag::Mu12, None, Root::Quad(a)) => Some(match a.pow(n as u32 - 1).square_roots().into_iter().next() {
            Some(r) => Root::Quad(r),
            None => approx_radical(a.to_approx()),
        }),
        (FamilyTag::Mu12, None, Root::Approx(a)) => Some(approx_radical(*a)),
        _ => None,
    };
    let b_n = match tag {
        FamilyTag::Mu11 => Some(Root::Exact(d(n))),
        _ => radical,
    };

    let tier = b_n.as_ref().map_or(a1.tier(), |b| b.tier().max(a1.tier()));
    if mode == Mode::Exact && tier == 0 {
        let unwrap = |r: Root| match r {
            Root::Exact(v) => v,
            _ => unreachable!(),
        };
        let pinned = Pinned { a1: unwrap(a1), b_n: b_n.map(unwrap) };
        let (params, residual) = substitute(family, phi, x, m, pinned)?;
        Ok(WitnessReport { branch: m, params: WitnessParams::Exact(params), residual, exactness: Mode::Exact })
    } else if mode == Mode::Exact && tier == 1 {
        let quad = |r: Root| r.to_quad().expect("quadratic tier");
        let pinned = Pinned { a1: quad(a1), b_n: b_n.map(quad) };
        let (params, residual) = substitute(family, &phi.to_mode(), &x.to_mode(), m, pinned)?;
        Ok(WitnessReport { branch: m, params: WitnessParams::Quadratic(params), residual, exactness: Mode::Exact })
    } else {
        let pinned = Pinned { a1: a1.to_approx(), b_n: b_n.map(|r| r.to_approx()) };
        let (params, residual) = substitute(family, &phi.to_mode(), &x.to_mode(), m, pinned)?;
        Ok(WitnessReport { branch: m, params: WitnessParams::Approx(params), residual, exactness: Mode::Approx })
    }
}

/// Forward substitution with `a_1` (and the last-column value) pinned.
fn substitute<S: Scalar>(
    family: AlgebraFamily,
    phi: &SquareMatrix<S>,
    x: &Vector<S>,
    m: usize,
    pinned: Pinned<S>,
) -> Result<(AutoParams<S>, f64), WitnessError> {
    let AlgebraFamily { tag, n } = family;
    let filiform = tag.is_filiform();
    let params_err = |e: Error| WitnessError::Params { branch: m, message: e.to_string() };
    let target = phi.mat_vec(x).map_err(params_err)?;

    let mut a = vec![S::zero(); n];
    a[0] = pinned.a1.clone();
    let mut p = AutoParams {
        family: tag,
        n,
        a,
        b_nm1: filiform.then(S::zero),
        b_n: pinned.b_n.clone(),
        sqrt_a1: None,
    };
    // gap of 0-based `row` under the current parameters
    let gap = |p: &AutoParams<S>, row: usize| -> Result<S, WitnessError> {
        let image = build_automorphism(p).map_err(params_err)?.mat_vec(x).map_err(params_err)?;
        Ok(target[row].clone() - &image[row])
    };
    let step = |g: S, coef: &S| -> Result<S, WitnessError> {
        g.checked_div(coef).ok_or(WitnessError::Params { branch: m, message: "zero pivot".into() })
    };

    let xm = x[m - 1].clone();
    let xn = x[n - 1].clone();
    let last_row = if filiform { n - 1 } else { n };
    let coef = S::from_i64(m as i64) * &pinned.a1.pow(m as u32 - 1) * &xm;
    // each step adds gap / coefficient to its unknown; in floats the sweep
    // is repeated to shave off rounding left by large intermediate values
    let sweep = |p: &mut AutoParams<S>| -> Result<(), WitnessError> {
        if filiform && m == 1 {
            // row n: b_n1 x_1 + b_nn x_n = a_n x_1 + (last column)_n x_n
            let g = gap(p, n - 1)?;
            p.a[n - 1] = p.a[n - 1].clone() + &step(g, &xm)?;
        } else if matches!(tag, FamilyTag::Mu12 | FamilyTag::Mu14) && m >= n - 2 && !xn.is_zero() {
            // row n-2 carries -a_n (r / a_1) x_n (mu12) or -a_n x_n (mu14)
            let mut c = -xn.clone();
            if tag == FamilyTag::Mu12 {
                let r = pinned.b_n.clone().expect("mu12 radical is pinned");
                c = c * &step(r, &pinned.a1)?;
            }
            let g = gap(p, n - 3)?;
            p.a[n - 1] = p.a[n - 1].clone() + &step(g, &c)?;
        }
        // rows m+1..: a_{i-m+1} enters row i with coefficient m a_1^{m-1} x_m
        for i in m + 1..=last_row {
            let u = i - m + 1;
            let g = gap(p, i - 1)?;
            p.a[u - 1] = p.a[u - 1].clone() + &step(g, &coef)?;
        }
        if filiform && !xn.is_zero() {
            let g = gap(p, n - 2)?;
            if !g.is_zero() {
                let b = p.b_nm1.take().expect("filiform");
                p.b_nm1 = Some(b + &step(g, &xn)?);
            }
        }
        Ok(())
    };

    let mut best: Option<(AutoParams<S>, f64)> = None;
    for _ in 0..4 {
        sweep(&mut p)?;
        let image = build_automorphism(&p).map_err(params_err)?.mat_vec(x).map_err(params_err)?;
        let residual = image.max_scaled_distance(&target);
        let improved = best.as_ref().map_or(true, |(_, r)| residual < *r);
        if improved {
            best = Some((p.clone(), residual));
        }
        if residual <= 1e-14 || !improved {
            break;
        }
    }
    let (p, residual) = best.expect("at least one sweep");

    let matrix = build_automorphism(&p).map_err(params_err)?;
    let image = matrix.mat_vec(x).map_err(params_err)?;
    if let Some(row) = image.first_mismatch(&target) {
        return Err(WitnessError::Residual { branch: m, row, residual });
    }
    is_automorphism(&make_algebra(family), &matrix)
        .map_err(|failure| WitnessError::NotAutomorphism { branch: m, failure })?;
    Ok((p, residual))
}

/// Sample points for the witness sweep: the basis vectors, then for each
/// branch `m < n` a point with `x_m != 0` and `x_n != 0` (these probe the
/// diagonal relations), then random points cycling through the branches.
/// Always at least `2n - 1` points.
pub fn sample_points(n: usize, samples: usize, seed: u64) -> Vec<Vector<ExactScalar>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = samples.max(2 * n - 1);
    (0..total)
        .map(|t| {
            if t < n {
                return Vector::basis(n, t + 1);
            }
            let (m, force_last) = if t < 2 * n - 1 { (t - n + 1, true) } else { (t % n + 1, false) };
            let mut x = vec![ExactScalar::zero(); n];
            x[m - 1] = small_nonzero_rational(&mut rng);
            for v in x.iter_mut().skip(m) {
                *v = if rng.gen_ratio(1, 4) { ExactScalar::zero() } else { small_rational(&mut rng) };
            }
            if force_last && m < n && x[n - 1].is_zero() {
                x[n - 1] = small_nonzero_rational(&mut rng);
            }
            Vector::new(x)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessEntry {
    pub x: Vec<ExactScalar>,
    pub branch: usize,
    pub residual: f64,
    pub mode: Mode,
    pub params: WitnessParams,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessFailure {
    pub x: Vec<ExactScalar>,
    pub error: WitnessError,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalVerdict {
    pub shape: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape_violation: Option<ShapeViolation>,
    pub witnesses: Vec<WitnessEntry>,
    pub failures: Vec<WitnessFailure>,
    pub verdict: Verdict,
}

impl LocalVerdict {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn run_witnesses(
    family: AlgebraFamily,
    m: &SquareMatrix<ExactScalar>,
    points: Vec<Vector<ExactScalar>>,
    mode: Mode,
) -> (Vec<WitnessEntry>, Vec<WitnessFailure>) {
    let mut witnesses = Vec::new();
    let mut failures = Vec::new();
    for x in points {
        match solve_witness(family, m, &x, mode) {
            Ok(r) => witnesses.push(WitnessEntry {
                x: x.into_entries(),
                branch: r.branch,
                residual: r.residual,
                mode: r.exactness,
                params: r.params,
            }),
            Err(error) => failures.push(WitnessFailure { x: x.into_entries(), error }),
        }
    }
    (witnesses, failures)
}

/// Sampled witness verifier on its own: passes iff every sample point has a
/// witness. Shape relations are not consulted, so this is an independent
/// check of which shape is right.
pub fn verify_witnesses(
    family: AlgebraFamily,
    m: &SquareMatrix<ExactScalar>,
    samples: usize,
    seed: u64,
    mode: Mode,
) -> LocalVerdict {
    let (witnesses, failures) = run_witnesses(family, m, sample_points(family.n, samples, seed), mode);
    let verdict = if failures.is_empty() { Verdict::Pass } else { Verdict::Fail };
    LocalVerdict { shape: Verdict::Pass, shape_violation: None, witnesses, failures, verdict }
}

/// Derived shape check plus witnesses on `samples` seeded points covering
/// every branch.
pub fn is_local_automorphism(
    family: AlgebraFamily,
    m: &SquareMatrix<ExactScalar>,
    samples: usize,
    seed: u64,
    mode: Mode,
) -> LocalVerdict {
    if let Err(v) = matches_local_shape(family, m) {
        return LocalVerdict {
            shape: Verdict::Fail,
            shape_violation: Some(v),
            witnesses: Vec::new(),
            failures: Vec::new(),
            verdict: Verdict::Fail,
        };
    }
    verify_witnesses(family, m, samples, seed, mode)
}

/// A local automorphism that is not an automorphism: the identity with one
/// entry changed. `mu0`, `mu11`: `(2,2) = 2`. `mu12`..`mu14` force diagonal
/// relations, so the off-diagonal `(3,2) = 1` is used instead.
pub fn counterexample(family: AlgebraFamily) -> SquareMatrix<ExactScalar> {
    let mut m = SquareMatrix::identity(family.n);
    match family.tag {
        FamilyTag::Mu0 | FamilyTag::Mu11 => m.set(1, 1, ExactScalar::from(2)),
        _ => m.set(2, 1, ExactScalar::one()),
    }
    m
}

/// How one shape variant fares under the witness verifier.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantTally {
    pub variant: ShapeVariant,
    pub sampled: usize,
    pub certified: usize,
    /// Samples that also satisfy the derived shape (relations included).
    pub derived_members: usize,
    /// Samples whose verifier verdict disagrees with derived-shape membership.
    pub divergences: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeDiscrepancyReport {
    pub family: FamilyTag,
    pub n: usize,
    pub literal: VariantTally,
    pub derived: VariantTally,
    /// `"derived"`, `"literal"`, `"both"` or `"none"`: which shapes had every
    /// sample certified.
    pub certified_shape: String,
    pub divergences: usize,
}

/// Samples `count` matrices from each shape variant and runs the witness
/// verifier on each.
pub fn shape_discrepancy_report(
    family: AlgebraFamily,
    count: usize,
    samples: usize,
    seed: u64,
) -> ShapeDiscrepancyReport {
    let derived_shape = LocalShape::new(family, ShapeVariant::Derived);
    let tally = |variant: ShapeVariant, salt: u64| {
        let shape = LocalShape::new(family, variant);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt);
        let mut t = VariantTally { variant, sampled: count, certified: 0, derived_members: 0, divergences: 0 };
        for k in 0..count {
            let m = shape.random_member(&mut rng);
            let certified = verify_witnesses(family, &m, samples, seed.wrapping_add(k as u64), Mode::Exact).passed();
            let member = derived_shape.check(&m).is_ok();
            t.certified += certified as usize;
            t.derived_members += member as usize;
            t.divergences += (certified != member) as usize;
        }
        t
    };
    let literal = tally(ShapeVariant::Literal, 0x5eed_0001);
    let derived = tally(ShapeVariant::Derived, 0x5eed_0002);
    let certified_shape = match (literal.certified == count, derived.certified == count) {
        (true, true) => "both",
        (false, true) => "derived",
        (true, false) => "literal",
        (false, false) => "none",
    }
    .to_string();
    let divergences = literal.divergences + derived.divergences;
    ShapeDiscrepancyReport { family: family.tag, n: family.n, literal, derived, certified_shape, divergences }
}
