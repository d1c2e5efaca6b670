//! Named states, seeded random ensembles and the dilution builder.
//!
//! The parametric families are transcribed entry by entry from their displayed
//! matrices, including the `1/(1+8a)` and `1/(1+7b)` normalizations.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::bipartite::{
    permute_to_bipartition, tensor, BipartiteShape, DensityOperator, FourFactorDims,
};
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, HermitianOperator, ZERO};

/// Largest total dimension accepted by [`dilute`].
pub const DILUTION_DIM_CAP: usize = 64;

fn invalid(name: &str, value: f64, bound: &str) -> Error {
    Error::InvalidParameter {
        name: name.to_string(),
        value,
        bound: bound.to_string(),
    }
}

fn require_closed(name: &str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !(value >= lo && value <= hi) {
        return Err(invalid(name, value, &format!("must lie in [{lo}, {hi}]")));
    }
    Ok(())
}

fn require_open(name: &str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !(value > lo && value < hi) {
        return Err(invalid(name, value, &format!("must lie in ({lo}, {hi})")));
    }
    Ok(())
}

fn require_unit_norm(a: f64, b: f64) -> Result<()> {
    let n = a * a + b * b;
    if (n - 1.0).abs() > 1e-9 {
        return Err(invalid("a^2 + b^2", n, "must equal 1"));
    }
    Ok(())
}

fn qubits(op: HermitianOperator) -> Result<DensityOperator> {
    DensityOperator::new(op, BipartiteShape::qubits())
}

fn real(n: usize, entries: &[f64]) -> HermitianOperator {
    HermitianOperator::from_real(n, entries).expect("literal matrix is symmetric")
}

/// `x |Ψ⁻><Ψ⁻| + (1-x)/4 · 1`.
pub fn werner(x: f64) -> Result<DensityOperator> {
    require_closed("x", x, 0.0, 1.0)?;
    let d = (1.0 - x) / 4.0;
    let c = (1.0 + x) / 4.0;
    let h = -x / 2.0;
    qubits(real(
        4,
        &[
            d, 0., 0., 0., //
            0., c, h, 0., //
            0., h, c, 0., //
            0., 0., 0., d,
        ],
    ))
}

/// `x |ψ><ψ| + (1-x)/2 (|00><00| + |11><11|)` with `|ψ> = a|01> + b|10>`.
pub fn gisin(x: f64, a: f64, b: f64) -> Result<DensityOperator> {
    require_closed("x", x, 0.0, 1.0)?;
    require_unit_norm(a, b)?;
    let d = (1.0 - x) / 2.0;
    qubits(real(
        4,
        &[
            d,
            0.,
            0.,
            0., //
            0.,
            x * a * a,
            x * a * b,
            0., //
            0.,
            x * a * b,
            x * b * b,
            0., //
            0.,
            0.,
            0.,
            d,
        ],
    ))
}

/// `x |Ψ⁻><Ψ⁻| + (1-x) |00><00|`.
pub fn singlet_plus_ground(x: f64) -> Result<DensityOperator> {
    require_closed("x", x, 0.0, 1.0)?;
    let h = x / 2.0;
    qubits(real(
        4,
        &[
            1.0 - x,
            0.,
            0.,
            0., //
            0.,
            h,
            -h,
            0., //
            0.,
            -h,
            h,
            0., //
            0.,
            0.,
            0.,
            0.,
        ],
    ))
}

/// `p |ψ1><ψ1| + (1-p) |ψ2><ψ2|` with `|ψ1> = a|00> + b|11>`, `|ψ2> = a|01> + b|10>`.
///
/// `a = 0` or `b = 0` is accepted so that the product-state boundary is reachable.
pub fn horodecki_two_qubit(p: f64, a: f64, b: f64) -> Result<DensityOperator> {
    require_closed("p", p, 0.0, 1.0)?;
    if a < 0.0 {
        return Err(invalid("a", a, "must be non-negative"));
    }
    if b < 0.0 {
        return Err(invalid("b", b, "must be non-negative"));
    }
    require_unit_norm(a, b)?;
    let q = 1.0 - p;
    qubits(real(
        4,
        &[
            p * a * a,
            0.,
            0.,
            p * a * b, //
            0.,
            q * a * a,
            q * a * b,
            0., //
            0.,
            q * a * b,
            q * b * b,
            0., //
            p * a * b,
            0.,
            0.,
            p * b * b,
        ],
    ))
}

/// Bound entangled 3x3 family, `0 < a < 1`.
pub fn horodecki_3x3(a: f64) -> Result<DensityOperator> {
    require_open("a", a, 0.0, 1.0)?;
    let u = (1.0 + a) / 2.0;
    let v = (1.0 - a * a).sqrt() / 2.0;
    #[rustfmt::skip]
    let m = [
        a,  0., 0., 0., a,  0., 0., 0., a,
        0., a,  0., 0., 0., 0., 0., 0., 0.,
        0., 0., a,  0., 0., 0., 0., 0., 0.,
        0., 0., 0., a,  0., 0., 0., 0., 0.,
        a,  0., 0., 0., a,  0., 0., 0., a,
        0., 0., 0., 0., 0., a,  0., 0., 0.,
        0., 0., 0., 0., 0., 0., u,  0., v,
        0., 0., 0., 0., 0., 0., 0., a,  0.,
        a,  0., 0., 0., a,  0., v,  0., u,
    ];
    DensityOperator::new(
        real(9, &m).scale(1.0 / (1.0 + 8.0 * a)),
        BipartiteShape { d_a: 3, d_b: 3 },
    )
}

/// Bound entangled 2x4 family, `0 < b < 1`.
pub fn horodecki_2x4(b: f64) -> Result<DensityOperator> {
    require_open("b", b, 0.0, 1.0)?;
    let u = (1.0 + b) / 2.0;
    let v = (1.0 - b * b).sqrt() / 2.0;
    #[rustfmt::skip]
    let m = [
        b,  0., 0., 0., 0., b,  0., 0.,
        0., b,  0., 0., 0., 0., b,  0.,
        0., 0., b,  0., 0., 0., 0., b,
        0., 0., 0., b,  0., 0., 0., 0.,
        0., 0., 0., 0., u,  0., 0., v,
        b,  0., 0., 0., 0., b,  0., 0.,
        0., b,  0., 0., 0., 0., b,  0.,
        0., 0., b,  0., v,  0., 0., u,
    ];
    DensityOperator::new(
        real(8, &m).scale(1.0 / (1.0 + 7.0 * b)),
        BipartiteShape { d_a: 2, d_b: 4 },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    /// Index used by the named-state parameter `k`.
    pub fn from_index(k: usize) -> Option<Self> {
        Self::ALL.get(k).copied()
    }

    pub fn amplitudes(self) -> [Complex64; 4] {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match self {
            BellState::PhiPlus => [s, ZERO, ZERO, s],
            BellState::PhiMinus => [s, ZERO, ZERO, -s],
            BellState::PsiPlus => [ZERO, s, s, ZERO],
            BellState::PsiMinus => [ZERO, s, -s, ZERO],
        }
    }
}

pub fn bell(which: BellState) -> DensityOperator {
    DensityOperator::from_trusted(
        HermitianOperator::projector(&which.amplitudes()),
        BipartiteShape::qubits(),
    )
}

pub fn singlet() -> DensityOperator {
    bell(BellState::PsiMinus)
}

/// `cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>`.
pub fn qubit_ket(theta: f64, phi: f64) -> [Complex64; 2] {
    [
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ]
}

/// Pure product of two qubit states given by Bloch angles.
pub fn product_pure(theta_a: f64, phi_a: f64, theta_b: f64, phi_b: f64) -> DensityOperator {
    let a = HermitianOperator::projector(&qubit_ket(theta_a, phi_a));
    let b = HermitianOperator::projector(&qubit_ket(theta_b, phi_b));
    DensityOperator::from_trusted(tensor(&a, &b), BipartiteShape::qubits())
}

pub fn maximally_mixed(d_a: usize, d_b: usize) -> Result<DensityOperator> {
    let shape = BipartiteShape::new(d_a, d_b)?;
    Ok(DensityOperator::from_trusted(
        HermitianOperator::identity(shape.dim()).scale(1.0 / shape.dim() as f64),
        shape,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateFamily {
    Werner,
    #[serde(alias = "gisin")]
    GisinMixture,
    SingletPlusGround,
    HorodeckiTwoQubit,
    #[serde(rename = "horodecki3x3")]
    Horodecki3x3,
    #[serde(rename = "horodecki2x4")]
    Horodecki2x4,
    #[serde(alias = "singlet")]
    Bell,
    ProductPure,
    MaximallyMixed,
}

impl StateFamily {
    pub const ALL: [StateFamily; 9] = [
        StateFamily::Werner,
        StateFamily::GisinMixture,
        StateFamily::SingletPlusGround,
        StateFamily::HorodeckiTwoQubit,
        StateFamily::Horodecki3x3,
        StateFamily::Horodecki2x4,
        StateFamily::Bell,
        StateFamily::ProductPure,
        StateFamily::MaximallyMixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StateFamily::Werner => "werner",
            StateFamily::GisinMixture => "gisin-mixture",
            StateFamily::SingletPlusGround => "singlet-plus-ground",
            StateFamily::HorodeckiTwoQubit => "horodecki-two-qubit",
            StateFamily::Horodecki3x3 => "horodecki3x3",
            StateFamily::Horodecki2x4 => "horodecki2x4",
            StateFamily::Bell => "bell",
            StateFamily::ProductPure => "product-pure",
            StateFamily::MaximallyMixed => "maximally-mixed",
        }
    }

    /// Accepts canonical names and the aliases `gisin` and `singlet`.
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "gisin" => Some(StateFamily::GisinMixture),
            "singlet" => Some(StateFamily::Bell),
            _ => Self::ALL.into_iter().find(|f| f.name() == name),
        }
    }

    /// Parameter swept by default.
    pub fn primary_param(self) -> Option<&'static str> {
        match self {
            StateFamily::Werner | StateFamily::GisinMixture | StateFamily::SingletPlusGround => {
                Some("x")
            }
            StateFamily::HorodeckiTwoQubit => Some("p"),
            StateFamily::Horodecki3x3 => Some("a"),
            StateFamily::Horodecki2x4 => Some("b"),
            StateFamily::ProductPure => Some("theta_a"),
            StateFamily::Bell | StateFamily::MaximallyMixed => None,
        }
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A named state family plus its parameters, as read from the command line or JSON.
///
/// Parameters per family (defaults in brackets):
/// - `werner`, `singlet-plus-ground`: `x`
/// - `gisin-mixture`: `x`, `a` [1/√2], `b` [√(1-a²)]
/// - `horodecki-two-qubit`: `p`, `a` [1/√2], `b` [√(1-a²)]
/// - `horodecki3x3`: `a`; `horodecki2x4`: `b`
/// - `bell`: `k` in {0: Φ⁺, 1: Φ⁻, 2: Ψ⁺, 3: Ψ⁻} [3]
/// - `product-pure`: `theta_a`, `phi_a`, `theta_b`, `phi_b` [0]
/// - `maximally-mixed`: `d_a`, `d_b` [2]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedStateSpec {
    pub name: StateFamily,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl NamedStateSpec {
    pub fn new(name: StateFamily) -> Self {
        Self {
            name,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    fn required(&self, key: &str) -> Result<f64> {
        self.params
            .get(key)
            .copied()
            .ok_or_else(|| Error::InvalidParameter {
                name: key.to_string(),
                value: f64::NAN,
                bound: format!("required by `{}`", self.name),
            })
    }

    fn optional(&self, key: &str, default: f64) -> f64 {
        self.params.get(key).copied().unwrap_or(default)
    }

    fn amplitude_pair(&self) -> (f64, f64) {
        let a = self.optional("a", std::f64::consts::FRAC_1_SQRT_2);
        let b = self
            .params
            .get("b")
            .copied()
            .unwrap_or_else(|| (1.0 - a * a).max(0.0).sqrt());
        (a, b)
    }

    fn dimension(&self, key: &str) -> Result<usize> {
        let v = self.optional(key, 2.0);
        if v < 1.0 || v.fract() != 0.0 || v > 64.0 {
            return Err(invalid(key, v, "must be an integer in [1, 64]"));
        }
        Ok(v as usize)
    }

    pub fn construct(&self) -> Result<DensityOperator> {
        let known: &[&str] = match self.name {
            StateFamily::Werner | StateFamily::SingletPlusGround => &["x"],
            StateFamily::GisinMixture => &["x", "a", "b"],
            StateFamily::HorodeckiTwoQubit => &["p", "a", "b"],
            StateFamily::Horodecki3x3 => &["a"],
            StateFamily::Horodecki2x4 => &["b"],
            StateFamily::Bell => &["k"],
            StateFamily::ProductPure => &["theta_a", "phi_a", "theta_b", "phi_b"],
            StateFamily::MaximallyMixed => &["d_a", "d_b"],
        };
        if let Some(extra) = self.params.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(Error::InvalidParameter {
                name: extra.clone(),
                value: self.params[extra],
                bound: format!(
                    "not a parameter of `{}` (expected one of {known:?})",
                    self.name
                ),
            });
        }
        match self.name {
            StateFamily::Werner => werner(self.required("x")?),
            StateFamily::GisinMixture => {
                let (a, b) = self.amplitude_pair();
                gisin(self.required("x")?, a, b)
            }
            StateFamily::SingletPlusGround => singlet_plus_ground(self.required("x")?),
            StateFamily::HorodeckiTwoQubit => {
                let (a, b) = self.amplitude_pair();
                horodecki_two_qubit(self.required("p")?, a, b)
            }
            StateFamily::Horodecki3x3 => horodecki_3x3(self.required("a")?),
            StateFamily::Horodecki2x4 => horodecki_2x4(self.required("b")?),
            StateFamily::Bell => {
                let k = self.optional("k", 3.0);
                let which = (k.fract() == 0.0 && k >= 0.0)
                    .then(|| BellState::from_index(k as usize))
                    .flatten()
                    .ok_or_else(|| invalid("k", k, "must be 0, 1, 2 or 3"))?;
                Ok(bell(which))
            }
            StateFamily::ProductPure => Ok(product_pure(
                self.optional("theta_a", 0.0),
                self.optional("phi_a", 0.0),
                self.optional("theta_b", 0.0),
                self.optional("phi_b", 0.0),
            )),
            StateFamily::MaximallyMixed => {
                maximally_mixed(self.dimension("d_a")?, self.dimension("d_b")?)
            }
        }
    }
}

impl fmt::Display for NamedStateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.params.is_empty() {
            let parts: Vec<String> = self
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            write!(f, "({})", parts.join(", "))?;
        }
        Ok(())
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    // column-major fill order
    DMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

fn random_ket<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// `G G† / Tr(G G†)` with `G` a `(d_A d_B) × rank` complex Ginibre matrix.
pub fn random_density(d_a: usize, d_b: usize, rank: usize, seed: u64) -> Result<DensityOperator> {
    let shape = BipartiteShape::new(d_a, d_b)?;
    let n = shape.dim();
    if rank == 0 || rank > n {
        return Err(invalid(
            "rank",
            rank as f64,
            &format!("must lie in [1, {n}]"),
        ));
    }
    let mut rng = rng_from_seed(seed);
    let g = ginibre(n, rank, &mut rng);
    let gg = HermitianOperator::hermitize(&g * g.adjoint());
    let t = gg.trace();
    Ok(DensityOperator::from_trusted(gg.scale(1.0 / t), shape))
}

/// Explicit convex mixture of pure product states.
#[derive(Debug, Clone)]
pub struct SeparableMixture {
    pub shape: BipartiteShape,
    pub weights: Vec<f64>,
    pub components: Vec<(HermitianOperator, HermitianOperator)>,
}

impl SeparableMixture {
    pub fn state(&self) -> DensityOperator {
        let mut acc = HermitianOperator::zeros(self.shape.dim());
        for (w, (a, b)) in self.weights.iter().zip(&self.components) {
            acc = &acc + &tensor(a, b).scale(*w);
        }
        DensityOperator::from_trusted(HermitianOperator::hermitize(acc.into_matrix()), self.shape)
    }
}

/// `terms` random pure product states mixed with flat-Dirichlet weights.
pub fn random_separable_mixture(
    d_a: usize,
    d_b: usize,
    terms: usize,
    seed: u64,
) -> Result<SeparableMixture> {
    let shape = BipartiteShape::new(d_a, d_b)?;
    if terms == 0 {
        return Err(invalid("terms", 0.0, "must be at least 1"));
    }
    let mut rng = rng_from_seed(seed);
    let raw: Vec<f64> = (0..terms).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.into_iter().map(|w| w / total).collect();
    let components = (0..terms)
        .map(|_| {
            let a = random_ket(d_a, &mut rng);
            let b = random_ket(d_b, &mut rng);
            (
                HermitianOperator::projector(&a),
                HermitianOperator::projector(&b),
            )
        })
        .collect();
    Ok(SeparableMixture {
        shape,
        weights,
        components,
    })
}

pub fn random_separable(
    d_a: usize,
    d_b: usize,
    terms: usize,
    seed: u64,
) -> Result<DensityOperator> {
    Ok(random_separable_mixture(d_a, d_b, terms, seed)?.state())
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of `diag(R)` removed.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let qr = ginibre(d, d, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..d {
        let rkk = r[(k, k)];
        let phase = if rkk.norm() > 0.0 {
            rkk / rkk.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// `U_A ⊗ U_B` with independent Haar factors.
pub fn random_product_unitary(d_a: usize, d_b: usize, seed: u64) -> ComplexMatrix {
    let mut rng = rng_from_seed(seed);
    let ua = random_unitary(d_a, &mut rng);
    let ub = random_unitary(d_b, &mut rng);
    kron(&ua, &ub)
}

/// `inner ⊗ outer` regrouped to the `(A A') | (B B')` bipartition.
pub fn dilute(inner: &DensityOperator, outer: &DensityOperator) -> Result<DensityOperator> {
    let dim = inner.dim() * outer.dim();
    if dim > DILUTION_DIM_CAP {
        return Err(Error::DimensionCap {
            dim,
            cap: DILUTION_DIM_CAP,
        });
    }
    let (si, so) = (inner.shape(), outer.shape());
    let dims = FourFactorDims::new(si.d_a, si.d_b, so.d_a, so.d_b);
    let (op, shape) = permute_to_bipartition(&tensor(inner.op(), outer.op()), dims)?;
    Ok(DensityOperator::from_trusted(op, shape))
}
