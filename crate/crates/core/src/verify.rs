//! End-to-end verification: flexibility, volume expansion, diagonal rates,
//! the volume polynomial at the instance's lengths and the multiplicity of
//! the volume as its root, assembled into a versioned report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::embedding::{AnyEmbedding, Embedding, Representation};
use crate::error::{AnalysisError, PolyError};
use crate::numeric::{format_rational, int, rat, Rational, Scalar};
use crate::poly::multiplicity::{
    is_double_root, multiplicity_exact, multiplicity_floating, multiplicity_in_v, MultiplicityMode,
    FLOATING_THRESHOLD,
};
use crate::poly::multipoly::PolyJson;
use crate::poly::unipoly::{UniPoly, UniPolyJson};
use crate::poly::volpoly::{
    classify, compose_family, specialize, variable_names, volume_polynomial, FamilyPolynomial, PolyClass,
    SpecializeOptions, SpecializedVolumePolynomial, VolumePolynomial,
};
use crate::rigidity::{
    flex_analysis_exact, flex_analysis_floating, trivial_generators, FlexAnalysis, FlexKind, DEFAULT_TOLERANCE,
};
use crate::surface::CombinatorialSurface;
use crate::volume::{diagonal_rates, diagonal_witness, oriented_volume, perturb, volume_expansion, DiagonalRateReport};

pub const REPORT_SCHEMA: &str = "flexilab/report/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Floating,
}

/// `±1/10, ±1/100, ±1/1000`.
pub fn default_eps() -> Vec<Rational> {
    [10, 100, 1000].iter().flat_map(|&d| [rat(1, d), rat(-1, d)]).collect()
}

#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub mode: Mode,
    /// Relative singular-value threshold (floating mode).
    pub tolerance: f64,
    pub eps_samples: Vec<Rational>,
    /// Seeds the interpolation line of the octahedron polynomial.
    pub seed: u64,
    pub jobs: usize,
    /// Compose the volume polynomial with the perturbed family (exact mode).
    pub family_identity: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            mode: Mode::Exact,
            tolerance: DEFAULT_TOLERANCE,
            eps_samples: default_eps(),
            seed: 0,
            jobs: 1,
            family_identity: true,
        }
    }
}

impl AnalysisOptions {
    fn specialize_options(&self) -> SpecializeOptions {
        SpecializeOptions { seed: SpecializeOptions::default().seed ^ self.seed, jobs: self.jobs }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

/// Which term of `V(P_ε) = V0 + εV1 + ε²V2 + ε³V3` separates the volumes of
/// `P_ε` and `P_−ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProofPath {
    /// `V1 ≠ 0`: the volume moves at first order.
    FirstOrder,
    /// `V1 = 0, V3 ≠ 0`.
    ThirdOrder,
    /// `V1 = V3 = 0`: the expansion is even; the argument goes through the
    /// small diagonals.
    EvenExpansion,
}

/// Report values: exact rationals as strings, floating values as numbers.
pub trait ReportScalar: Scalar {
    fn from_rational(r: &Rational) -> Self;
    fn to_value(&self) -> Value;
    fn to_key(&self) -> String;
}

impl ReportScalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_value(&self) -> Value {
        Value::String(format_rational(self))
    }
    fn to_key(&self) -> String {
        format_rational(self)
    }
}

impl ReportScalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        r.as_f64()
    }
    fn to_value(&self) -> Value {
        serde_json::json!(self)
    }
    fn to_key(&self) -> String {
        format!("{self:?}")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceInfo {
    pub name: String,
    pub hash: String,
    pub params: BTreeMap<String, String>,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub genus: usize,
    pub representation: Representation,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlexSummary {
    pub rank: usize,
    pub kernel_dim: usize,
    pub trivial_dim: usize,
    pub flex_dim: usize,
    pub flexible: bool,
    pub tolerance_used: Option<f64>,
    pub singular_values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagonalRow {
    /// 1-based hinge edge.
    pub hinge: [usize; 2],
    /// 1-based apexes.
    pub apexes: [usize; 2],
    pub is_also_edge: bool,
    pub degenerate: bool,
    /// `(x_k − x_l)·(Z_k − Z_l)`; the length rate is this over the length.
    pub dot: Value,
    pub rate: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoRootWitness {
    pub eps: String,
    pub volume_plus: Value,
    pub volume_minus: Value,
    pub difference: Value,
    /// The difference equals `2(εV1 + ε³V3)`.
    pub odd_part_identity: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParityRow {
    pub eps: String,
    /// Non-degenerate small diagonals with `d²(ε) − d²(−ε) ≠ 0`.
    pub nonzero_odd_parts: usize,
    /// Every odd part equals `4ε (Δx·ΔZ)`.
    pub identity_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlexReport {
    /// 1-based index in the nontrivial basis.
    pub index: usize,
    pub vectors: Vec<[Value; 3]>,
    pub residual: Value,
    /// `[V0, V1, V2, V3]`.
    pub expansion: [Value; 4],
    pub proof_path: ProofPath,
    pub diagonal_rates: Vec<DiagonalRow>,
    pub nonzero_rate_count: usize,
    pub two_root_witness: Option<TwoRootWitness>,
    pub parity: Vec<ParityRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagonalWitness {
    pub flex_index: usize,
    pub diagonal: DiagonalRow,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolynomialReport {
    pub class: PolyClass,
    /// `2N`.
    pub degree_v: usize,
    /// Integer-coefficient polynomial in `V, l_1..l_m` when available.
    pub symbolic: Option<PolyJson>,
    /// Specialized at the instance's squared lengths, monic in `W = V²`.
    pub specialized_raw: UniPolyJson,
    pub specialized_squarefree: UniPolyJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplicityReport {
    pub mode: MultiplicityMode,
    pub raw: usize,
    pub squarefree: usize,
    /// The raw multiplicity recomputed directly on the polynomial in `V`.
    pub raw_via_v: usize,
    /// `Q(V0) = Q'(V0) = 0`.
    pub double_root: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EpsRow {
    pub eps: String,
    pub volume: String,
    /// `l(ε) = l + ε² L` holds edge by edge.
    pub lengths_law: bool,
    /// `Q(V(P_ε), l(ε))`.
    pub residual: String,
    /// `Q'_V · V'(ε) + 2ε Σ_i (Σ_k ∂a_i/∂l_k L_k) V^(2N−2i)`.
    pub derivative_residual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyIdentityReport {
    /// 1-based nontrivial flex, or `None` when a rigid rotation was used.
    pub flex_index: Option<usize>,
    pub flex_kind: FlexKind,
    /// `Q(V(ε), l(ε))` is the zero polynomial in `ε`.
    pub composed_is_zero: bool,
    pub rows: Vec<EpsRow>,
    pub all_zero: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema: &'static str,
    pub instance: InstanceInfo,
    pub mode: Mode,
    pub planar_flag: bool,
    pub volume: Value,
    pub flexibility: FlexSummary,
    pub flexes: Vec<FlexReport>,
    pub diagonal_witness: Option<DiagonalWitness>,
    pub volume_polynomial: Option<PolynomialReport>,
    pub volume_polynomial_note: Option<String>,
    pub multiplicity: Option<MultiplicityReport>,
    pub family_identity: Option<FamilyIdentityReport>,
    pub theorem_verdict: Verdict,
    pub verdict_reason: String,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

/// Deterministic digest of the instance, its parameters and the options.
pub fn instance_hash(
    name: &str,
    params: &BTreeMap<String, String>,
    surface: &CombinatorialSurface,
    embedding: &AnyEmbedding,
    opts: &AnalysisOptions,
) -> String {
    let mut h = Sha256::new();
    let mut line = |s: String| {
        h.update(s.as_bytes());
        h.update(b"\n");
    };
    line(format!("name {name}"));
    for (k, v) in params {
        line(format!("param {k}={v}"));
    }
    line(format!("n {}", surface.vertex_count()));
    for f in surface.faces_one_based() {
        line(format!("face {} {} {}", f[0], f[1], f[2]));
    }
    match embedding {
        AnyEmbedding::Exact(e) => e.coords().iter().for_each(|p| line(format!("x {} {} {}", p[0].to_key(), p[1].to_key(), p[2].to_key()))),
        AnyEmbedding::Floating(e) => e.coords().iter().for_each(|p| line(format!("x {:?} {:?} {:?}", p[0], p[1], p[2]))),
    }
    line(format!("mode {:?} tol {:?} seed {}", opts.mode, opts.tolerance, opts.seed));
    line(format!("eps {}", opts.eps_samples.iter().map(format_rational).collect::<Vec<_>>().join(",")));
    let digest = h.finalize();
    let mut out = String::from("sha256:");
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

fn negligible<T: Scalar>(x: &T, scale: f64) -> bool {
    if T::EXACT {
        x.is_exactly_zero()
    } else {
        x.as_f64().abs() <= FLOATING_THRESHOLD * scale.max(1.0)
    }
}

fn diagonal_row<T: ReportScalar>(r: &DiagonalRateReport<T>) -> DiagonalRow {
    let d = &r.diagonal;
    DiagonalRow {
        hinge: [d.hinge.0 + 1, d.hinge.1 + 1],
        apexes: [d.apexes.0 + 1, d.apexes.1 + 1],
        is_also_edge: d.is_also_edge,
        degenerate: r.degenerate,
        dot: r.rate.dot.to_value(),
        rate: (!r.degenerate).then(|| r.rate.rate()),
    }
}

fn flex_report<T: ReportScalar>(
    surface: &CombinatorialSurface,
    emb: &Embedding<T>,
    index: usize,
    vectors: &[[T; 3]],
    residual: &T,
    eps_samples: &[Rational],
) -> (FlexReport, Vec<DiagonalRateReport<T>>) {
    let ex = volume_expansion(surface, emb, vectors);
    let scale = ex.coeffs.iter().map(|c| c.as_f64().abs()).fold(0.0, f64::max);
    let v1_zero = negligible(ex.v1(), scale);
    let v3_zero = negligible(ex.v3(), scale);
    let proof_path = match (v1_zero, v3_zero) {
        (false, _) => ProofPath::FirstOrder,
        (true, false) => ProofPath::ThirdOrder,
        (true, true) => ProofPath::EvenExpansion,
    };
    let rates = diagonal_rates(surface, emb, vectors);
    let rate_scale = |r: &DiagonalRateReport<T>| r.rate.d0_squared.as_f64() + r.rate.flex_squared.as_f64();
    let nonzero_rate_count = rates.iter().filter(|r| !r.degenerate && !negligible(&r.rate.dot, rate_scale(r))).count();

    let two_root_witness = if v1_zero && v3_zero {
        None
    } else {
        eps_samples.iter().find_map(|e| {
            let eps: T = T::from_rational(e);
            let neg = -eps.clone();
            let vp = oriented_volume(surface, &perturb(emb, vectors, &eps));
            let vm = oriented_volume(surface, &perturb(emb, vectors, &neg));
            let diff = vp.clone() - vm.clone();
            if negligible(&diff, scale) {
                return None;
            }
            let expected = ex.odd_part(&eps);
            Some(TwoRootWitness {
                eps: format_rational(e),
                volume_plus: vp.to_value(),
                volume_minus: vm.to_value(),
                difference: diff.to_value(),
                odd_part_identity: negligible(&(diff - expected), scale),
            })
        })
    };

    let parity = eps_samples
        .iter()
        .filter(|e| e.numer() > &0.into())
        .map(|e| {
            let eps: T = T::from_rational(e);
            let plus = perturb(emb, vectors, &eps);
            let minus = perturb(emb, vectors, &(-eps.clone()));
            let mut nonzero = 0;
            let mut ok = true;
            for r in rates.iter().filter(|r| !r.degenerate) {
                let (k, l) = r.diagonal.apexes;
                let odd = plus.squared_distance(k, l) - minus.squared_distance(k, l);
                let expected = T::from_int(4) * eps.clone() * r.rate.dot.clone();
                if !negligible(&odd, rate_scale(r)) {
                    nonzero += 1;
                }
                if !negligible(&(odd - expected), rate_scale(r)) {
                    ok = false;
                }
            }
            ParityRow { eps: format_rational(e), nonzero_odd_parts: nonzero, identity_holds: ok }
        })
        .collect();

    let report = FlexReport {
        index,
        vectors: vectors.iter().map(|p| [p[0].to_value(), p[1].to_value(), p[2].to_value()]).collect(),
        residual: residual.to_value(),
        expansion: [ex.v0().to_value(), ex.v1().to_value(), ex.v2().to_value(), ex.v3().to_value()],
        proof_path,
        diagonal_rates: rates.iter().map(diagonal_row).collect(),
        nonzero_rate_count,
        two_root_witness,
        parity,
    };
    (report, rates)
}

fn geometric_part<T: ReportScalar>(
    surface: &CombinatorialSurface,
    emb: &Embedding<T>,
    fa: &FlexAnalysis<T>,
    eps_samples: &[Rational],
    witness_tol: T,
) -> (Vec<FlexReport>, Option<DiagonalWitness>) {
    let mut flexes = Vec::new();
    let mut witness = None;
    for (k, f) in fa.nontrivial_basis.iter().enumerate() {
        let (rep, rates) = flex_report(surface, emb, k + 1, &f.vectors, &f.residual, eps_samples);
        if witness.is_none() {
            if let Some(w) = diagonal_witness(&rates, &witness_tol) {
                witness = Some(DiagonalWitness { flex_index: k + 1, diagonal: diagonal_row(&w) });
            }
        }
        flexes.push(rep);
    }
    (flexes, witness)
}

fn summary<T>(fa: &FlexAnalysis<T>) -> FlexSummary {
    FlexSummary {
        rank: fa.rank,
        kernel_dim: fa.kernel_dim,
        trivial_dim: fa.trivial_dim,
        flex_dim: fa.flex_dim,
        flexible: fa.is_flexible(),
        tolerance_used: fa.tolerance_used,
        singular_values: fa.singular_values.clone(),
    }
}

/// Runs the full analysis of one instance.
pub fn analyze(
    name: &str,
    params: &[(String, String)],
    surface: &CombinatorialSurface,
    embedding: &AnyEmbedding,
    opts: &AnalysisOptions,
) -> Result<AnalysisReport, AnalysisError> {
    if embedding.len() != surface.vertex_count() {
        return Err(AnalysisError::Input(format!(
            "{} coordinates for {} vertices",
            embedding.len(),
            surface.vertex_count()
        )));
    }
    let params: BTreeMap<String, String> = params.iter().cloned().collect();
    let exact = embedding.to_exact().ok_or_else(|| AnalysisError::Input("non-finite coordinate".into()))?;
    let instance = InstanceInfo {
        name: name.into(),
        hash: instance_hash(name, &params, surface, embedding, opts),
        params,
        vertices: surface.vertex_count(),
        edges: surface.edges().len(),
        faces: surface.faces().len(),
        genus: surface.genus(),
        representation: embedding.representation(),
    };

    let (planar_flag, volume, flexibility, flexes, witness, flexible, v0_f64, first_flex) = match opts.mode {
        Mode::Exact => {
            let fa = flex_analysis_exact(surface, &exact)?;
            let (flexes, w) = geometric_part(surface, &exact, &fa, &opts.eps_samples, Rational::from_int(0));
            let v0 = oriented_volume(surface, &exact);
            let first = fa.nontrivial_basis.first().map(|f| f.vectors.clone());
            (exact.is_coplanar(), v0.to_value(), summary(&fa), flexes, w, fa.is_flexible(), v0.as_f64(), first)
        }
        Mode::Floating => {
            let fl = embedding.to_floating();
            let fa = flex_analysis_floating(surface, &fl, opts.tolerance)?;
            let (flexes, w) = geometric_part(surface, &fl, &fa, &opts.eps_samples, FLOATING_THRESHOLD);
            let v0 = oriented_volume(surface, &fl);
            (fl.is_coplanar_tol(FLOATING_THRESHOLD), v0.to_value(), summary(&fa), flexes, w, fa.is_flexible(), v0, None)
        }
    };

    let v0_exact = oriented_volume(surface, &exact);
    let lengths = exact.squared_edge_lengths(surface);
    let mut note = None;
    let mut poly_report = None;
    let mut mult = None;
    let mut family = None;
    match classify(surface) {
        Err(PolyError::UnsupportedClass) => note = Some("unsupported combinatorial class".to_string()),
        Err(e) => return Err(e.into()),
        Ok(labels) => {
            let class = labels.class();
            let symbolic = match volume_polynomial(surface) {
                Ok(q) => Some(q),
                Err(PolyError::SymbolicUnavailable(_)) => None,
                Err(e) => return Err(e.into()),
            };
            let spec = specialize(surface, &lengths, &opts.specialize_options())?;
            mult = Some(multiplicity_report(&spec, &v0_exact, v0_f64, opts.mode));
            poly_report = Some(PolynomialReport {
                class,
                degree_v: 2 * class.w_degree(),
                symbolic: symbolic.as_ref().map(|q| q.poly().to_json()),
                specialized_raw: spec.raw.to_json("W"),
                specialized_squarefree: spec.squarefree.to_json("W"),
            });
            if opts.mode == Mode::Exact && opts.family_identity {
                let (index, kind, z) = match first_flex {
                    Some(z) => (Some(1), FlexKind::Nontrivial, z),
                    // rigid instances: rotation about the z-axis
                    None => (None, FlexKind::Trivial, trivial_generators(&exact).swap_remove(5)),
                };
                let mut rep = eps_identity_check(surface, &exact, &z, symbolic.as_ref(), &opts.eps_samples, opts)?;
                rep.flex_index = index;
                rep.flex_kind = kind;
                family = Some(rep);
            }
        }
    }

    let (theorem_verdict, verdict_reason) = match (&mult, flexible) {
        (_, false) => (Verdict::NotApplicable, "infinitesimally rigid".to_string()),
        (None, true) => (Verdict::NotApplicable, "no volume polynomial for this class".to_string()),
        (Some(m), true) => {
            if m.raw >= 2 && m.squarefree >= 2 {
                (Verdict::Pass, format!("volume is a root of multiplicity {} (square-free part: {})", m.raw, m.squarefree))
            } else {
                (Verdict::Fail, format!("flexible but multiplicity is {} (square-free part: {})", m.raw, m.squarefree))
            }
        }
    };

    Ok(AnalysisReport {
        schema: REPORT_SCHEMA,
        instance,
        mode: opts.mode,
        planar_flag,
        volume,
        flexibility,
        flexes,
        diagonal_witness: witness,
        volume_polynomial: poly_report,
        volume_polynomial_note: note,
        multiplicity: mult,
        family_identity: family,
        theorem_verdict,
        verdict_reason,
    })
}

fn multiplicity_report(
    spec: &SpecializedVolumePolynomial,
    v0: &Rational,
    v0_f64: f64,
    mode: Mode,
) -> MultiplicityReport {
    match mode {
        Mode::Exact => MultiplicityReport {
            mode: MultiplicityMode::Exact,
            raw: multiplicity_exact(&spec.raw, v0),
            squarefree: multiplicity_exact(&spec.squarefree, v0),
            raw_via_v: multiplicity_in_v(&spec.raw_in_v(), v0),
            double_root: is_double_root(&spec.raw_in_v(), v0),
        },
        Mode::Floating => {
            let raw = multiplicity_floating(&spec.raw_in_v(), v0_f64, FLOATING_THRESHOLD);
            MultiplicityReport {
                mode: MultiplicityMode::Floating,
                raw,
                squarefree: multiplicity_floating(&spec.squarefree_in_v(), v0_f64, FLOATING_THRESHOLD),
                raw_via_v: raw,
                double_root: raw >= 2,
            }
        }
    }
}

/// `V(ε)` as a polynomial.
fn volume_poly(surface: &CombinatorialSurface, emb: &Embedding<Rational>, z: &[[Rational; 3]]) -> UniPoly {
    UniPoly::new(volume_expansion(surface, emb, z).coeffs.to_vec())
}

/// `Q(V(ε), l(ε))` composed as a polynomial in `ε`.
pub fn compose_in_eps(family: &FamilyPolynomial, v: &UniPoly) -> UniPoly {
    let v2 = v.mul(v);
    let mut total = UniPoly::zero();
    let mut power = UniPoly::one();
    for c in &family.coeffs {
        total = total.add(&c.in_square().mul(&power));
        power = power.mul(&v2);
    }
    total
}

/// Checks the volume polynomial along the family `P_ε = x + εZ`: its value
/// and its ε-derivative at each sample, and the composition as a polynomial
/// in `ε`.
pub fn eps_identity_check(
    surface: &CombinatorialSurface,
    emb: &Embedding<Rational>,
    z: &[[Rational; 3]],
    symbolic: Option<&VolumePolynomial>,
    eps_samples: &[Rational],
    opts: &AnalysisOptions,
) -> Result<FamilyIdentityReport, AnalysisError> {
    let lengths = emb.squared_edge_lengths(surface);
    let rates: Vec<Rational> = surface
        .edges()
        .iter()
        .map(|&(i, j)| {
            let d = crate::numeric::sub3(&z[i], &z[j]);
            crate::numeric::dot3(&d, &d)
        })
        .collect();
    let family = compose_family(surface, &lengths, &rates, &opts.specialize_options())?;
    let v = volume_poly(surface, emb, z);
    let composed_is_zero = compose_in_eps(&family, &v).is_zero();
    let mut samples: Vec<Rational> = vec![int(0)];
    samples.extend(eps_samples.iter().cloned());
    let mut rows = Vec::new();
    for e in &samples {
        let p = perturb(emb, z, e);
        let vol = oriented_volume(surface, &p);
        let sigma = e * e;
        let le = p.squared_edge_lengths(surface);
        let lengths_law = le.iter().zip(&lengths).zip(&rates).all(|((a, b), r)| a == &(b + &sigma * r));
        let q = family.at(&sigma);
        let residual = q.eval(&(&vol * &vol));
        let q_v = q.in_square();
        let dv = v.derivative().eval(e);
        let dl = match symbolic {
            Some(sq) => symbolic_length_derivative(sq, &le, &rates, &vol)?,
            None => family.sigma_derivative_at(&sigma).eval(&(&vol * &vol)),
        };
        let derivative_residual = q_v.derivative().eval(&vol) * dv + int(2) * e * dl;
        rows.push(EpsRow {
            eps: format_rational(e),
            volume: format_rational(&vol),
            lengths_law,
            residual: format_rational(&residual),
            derivative_residual: format_rational(&derivative_residual),
        });
    }
    let all_zero = composed_is_zero
        && rows.iter().all(|r| r.lengths_law && r.residual == "0" && r.derivative_residual == "0");
    Ok(FamilyIdentityReport { flex_index: None, flex_kind: FlexKind::Nontrivial, composed_is_zero, rows, all_zero })
}

/// `Σ_k ∂Q/∂l_k (V, l) · L_k` from the symbolic polynomial (monic in `V`).
fn symbolic_length_derivative(
    q: &VolumePolynomial,
    l: &[Rational],
    rates: &[Rational],
    v: &Rational,
) -> Result<Rational, PolyError> {
    let names = variable_names(l.len());
    let monic = q.monic();
    let mut vals: Vec<(&str, Rational)> = vec![("V", v.clone())];
    vals.extend(names[1..].iter().map(|s| s.as_str()).zip(l.iter().cloned()));
    let mut total = Rational::from_int(0);
    for (k, name) in names[1..].iter().enumerate() {
        if rates[k].is_exactly_zero() {
            continue;
        }
        total += monic.derivative(name)?.evaluate(&vals)? * &rates[k];
    }
    Ok(total)
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Human-readable rendering.
pub fn render_text(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let i = &r.instance;
    let _ = writeln!(s, "instance      {} ({})", i.name, i.hash);
    for (k, v) in &i.params {
        let _ = writeln!(s, "  param       {k} = {v}");
    }
    let _ = writeln!(s, "surface       n={} edges={} faces={} genus={}", i.vertices, i.edges, i.faces, i.genus);
    let _ = writeln!(s, "mode          {:?}", r.mode);
    let _ = writeln!(s, "volume        {}", value_text(&r.volume));
    let _ = writeln!(s, "planar        {}", r.planar_flag);
    let f = &r.flexibility;
    let _ = writeln!(
        s,
        "rigidity      rank={} kernel={} trivial={} flex_dim={} ({})",
        f.rank,
        f.kernel_dim,
        f.trivial_dim,
        f.flex_dim,
        if f.flexible { "infinitesimally flexible" } else { "infinitesimally rigid" }
    );
    for fr in &r.flexes {
        let e: Vec<String> = fr.expansion.iter().map(value_text).collect();
        let _ = writeln!(
            s,
            "flex {:<8} V0..V3 = [{}]  proof path: {:?}  nonzero diagonal rates: {}",
            fr.index,
            e.join(", "),
            fr.proof_path,
            fr.nonzero_rate_count
        );
        if let Some(w) = &fr.two_root_witness {
            let _ = writeln!(
                s,
                "  two roots   eps={} V+={} V-={}",
                w.eps,
                value_text(&w.volume_plus),
                value_text(&w.volume_minus)
            );
        }
    }
    match &r.diagonal_witness {
        Some(w) => {
            let _ = writeln!(
                s,
                "diagonal      flex {} hinge {:?} apexes {:?} rate {:?}",
                w.flex_index, w.diagonal.hinge, w.diagonal.apexes, w.diagonal.rate
            );
        }
        None => {
            let _ = writeln!(s, "diagonal      no small diagonal changes at first order");
        }
    }
    if let Some(p) = &r.volume_polynomial {
        let _ = writeln!(s, "polynomial    class={} degree={} in V", p.class, p.degree_v);
        let _ = writeln!(s, "  raw (W=V^2) {}", p.specialized_raw.coeffs.join(" "));
    }
    if let Some(n) = &r.volume_polynomial_note {
        let _ = writeln!(s, "polynomial    {n}");
    }
    if let Some(m) = &r.multiplicity {
        let _ = writeln!(
            s,
            "multiplicity  {} (square-free part: {}, mode {:?}, Q(V0)=Q'(V0)=0: {})",
            m.raw, m.squarefree, m.mode, m.double_root
        );
    }
    if let Some(fi) = &r.family_identity {
        let _ = writeln!(s, "family        composed identity zero: {}, all samples zero: {}", fi.composed_is_zero, fi.all_zero);
    }
    let _ = writeln!(s, "verdict       {:?}: {}", r.theorem_verdict, r.verdict_reason);
    s
}
