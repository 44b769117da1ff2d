//! Instance generators and verification campaigns.
//!
//! A campaign draws clutters from a [`GeneratorConfig`], keeps those that are
//! clean and tangled, and runs named [`Check`]s on them. Failures are collected
//! as [`Violation`]s that carry enough to be replayed one by one.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::clutter::{Clutter, ClutterError, ExtNat, MemberSet, MinorSpec};
use crate::obstructions::{self, recognize_blocker_of_extended_odd_hole, recognize_delta};
use crate::params::{self, ParamReport, SidePattern};
use crate::structure::{self, GeometryReport, MinCoverGraph, SetSystem, Side};
use crate::text;

/// Largest `n` [`enumerate_clutters`] accepts.
pub const ENUMERATION_LIMIT: usize = 6;
/// Default exhaustive campaign bound; `n = 6` needs [`GeneratorConfig::deep`].
pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 5;
pub const DEFAULT_VIOLATION_CAP: usize = 100;
pub const DEFAULT_MINOR_SPECS: usize = 10;

const CHUNK: usize = 1 << 14;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("n = {n} exceeds the enumeration bound {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error("member sizes {min}..={max} are infeasible over {n} elements")]
    SizeRangeInfeasible { n: usize, min: usize, max: usize },
    #[error("bad dimension: {0}")]
    BadDimension(String),
    #[error("config needs {0}")]
    MissingField(&'static str),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    Clutter(#[from] ClutterError),
}

// ---------------------------------------------------------------------------
// exhaustive enumeration

/// Every antichain of subsets of `[n]` exactly once, in a fixed order. The
/// family is tracked as a bit mask over the `2^n <= 64` subsets.
pub struct Antichains {
    n: usize,
    comparable: Vec<u64>,
    stack: Vec<(usize, u64, u64)>,
}

pub fn enumerate_clutters(n: usize) -> Result<Antichains, HarnessError> {
    if n > ENUMERATION_LIMIT {
        return Err(HarnessError::BoundExceeded {
            n,
            bound: ENUMERATION_LIMIT,
        });
    }
    let subsets = 1usize << n;
    let comparable = (0..subsets)
        .map(|s| {
            (0..subsets)
                .filter(|&t| s & t == s || s & t == t)
                .fold(0u64, |acc, t| acc | 1 << t)
        })
        .collect();
    Ok(Antichains {
        n,
        comparable,
        stack: vec![(0, 0, 0)],
    })
}

impl Iterator for Antichains {
    type Item = Clutter;

    fn next(&mut self) -> Option<Clutter> {
        let subsets = 1usize << self.n;
        while let Some((mut pos, chosen, forbidden)) = self.stack.pop() {
            while pos < subsets && forbidden >> pos & 1 == 1 {
                pos += 1;
            }
            if pos == subsets {
                let members = (0..subsets)
                    .filter(|s| chosen >> s & 1 == 1)
                    .map(|s| MemberSet::from_bits(s as u64))
                    .collect();
                return Some(Clutter::from_sets(self.n, members).expect("antichain by construction"));
            }
            self.stack.push((pos + 1, chosen | 1 << pos, forbidden | self.comparable[pos]));
            self.stack.push((pos + 1, chosen, forbidden));
        }
        None
    }
}

// ---------------------------------------------------------------------------
// families

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Delta(usize),
    /// The cycle edges `{1,2}, ..., {n,1}` only.
    OddHole(usize),
    /// Over `2d` elements: the member of point `p` holds `2i - 1` when
    /// `p_i = 1` and `2i` when `p_i = 0`.
    Cuboid(SetSystem),
}

impl Family {
    /// The cuboid of the points of `{0,1}^3` with one or two ones.
    pub fn f6() -> Family {
        let points = (1..7).map(MemberSet::from_bits).collect();
        Family::Cuboid(SetSystem::new(3, points).expect("distinct points"))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Delta(n) => write!(f, "delta:{n}"),
            Family::OddHole(n) => write!(f, "odd-hole:{n}"),
            Family::Cuboid(s) => {
                write!(f, "cuboid:{}:", s.dimension())?;
                let pts: Vec<String> = s.points().iter().map(|p| text::format_point(*p, s.dimension())).collect();
                f.write_str(&pts.join(","))
            }
        }
    }
}

impl FromStr for Family {
    type Err = HarnessError;

    /// `delta:N`, `odd-hole:N`, `f6`, or `cuboid:D:p1,p2,...` with 0/1 points.
    fn from_str(s: &str) -> Result<Family, HarnessError> {
        let unknown = || HarnessError::UnknownFamily(s.to_string());
        if s == "f6" {
            return Ok(Family::f6());
        }
        let (kind, rest) = s.split_once(':').ok_or_else(unknown)?;
        match kind {
            "delta" => Ok(Family::Delta(rest.parse().map_err(|_| unknown())?)),
            "odd-hole" => Ok(Family::OddHole(rest.parse().map_err(|_| unknown())?)),
            "cuboid" => {
                let (d, pts) = rest.split_once(':').unwrap_or((rest, ""));
                let body: Vec<&str> = pts.split(',').filter(|p| !p.is_empty()).collect();
                let doc = format!("setsystem {d}\n{}\n", body.join("\n"));
                let system = text::parse_set_system(&doc).map_err(|_| unknown())?;
                Ok(Family::Cuboid(system))
            }
            _ => Err(unknown()),
        }
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn make_family(family: &Family) -> Result<Clutter, HarnessError> {
    match *family {
        Family::Delta(n) => {
            if !(3..=crate::clutter::MAX_GROUND).contains(&n) {
                return Err(HarnessError::BadDimension(format!("delta needs 3 <= n, got {n}")));
            }
            let hub = MemberSet::singleton(1);
            let mut members: Vec<MemberSet> = (2..=n).map(|v| hub.with(v)).collect();
            members.push(MemberSet::full(n).without(1));
            Ok(Clutter::from_sets(n, members)?)
        }
        Family::OddHole(n) => {
            if n < 5 || n % 2 == 0 || n > crate::clutter::MAX_GROUND {
                return Err(HarnessError::BadDimension(format!("odd hole needs odd n >= 5, got {n}")));
            }
            let members = (1..=n)
                .map(|i| MemberSet::singleton(i).with(i % n + 1))
                .collect();
            Ok(Clutter::from_sets(n, members)?)
        }
        Family::Cuboid(ref s) => {
            let d = s.dimension();
            if 2 * d > crate::clutter::MAX_GROUND {
                return Err(HarnessError::BadDimension(format!("cuboid of dimension {d} is too large")));
            }
            let members = s
                .points()
                .iter()
                .map(|p| (1..=d).map(|i| if p.contains(i) { 2 * i - 1 } else { 2 * i }).collect())
                .collect();
            Ok(Clutter::from_sets(2 * d, members)?)
        }
    }
}

// ---------------------------------------------------------------------------
// random instances

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GeneratorKind {
    Exhaustive,
    Random,
    Family,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorConfig {
    pub kind: GeneratorKind,
    pub n: usize,
    pub count: usize,
    /// Seeds ChaCha8 (`rand_chacha`); the same seed gives the same instances.
    pub seed: u64,
    pub family: Option<Family>,
    pub member_size_range: Option<(usize, usize)>,
    /// Allows exhaustive campaigns at `n = 6`.
    pub deep: bool,
    pub violation_cap: usize,
    /// Random minor specs per instance for the duality check.
    pub minor_specs: usize,
    pub clean_budget: usize,
}

impl GeneratorConfig {
    fn base(kind: GeneratorKind, n: usize) -> Self {
        GeneratorConfig {
            kind,
            n,
            count: 0,
            seed: 0,
            family: None,
            member_size_range: None,
            deep: false,
            violation_cap: DEFAULT_VIOLATION_CAP,
            minor_specs: DEFAULT_MINOR_SPECS,
            clean_budget: obstructions::DEFAULT_CLEAN_BUDGET,
        }
    }

    pub fn exhaustive(n: usize) -> Self {
        GeneratorConfig::base(GeneratorKind::Exhaustive, n)
    }

    pub fn random(n: usize, count: usize, seed: u64) -> Self {
        GeneratorConfig {
            count,
            seed,
            ..GeneratorConfig::base(GeneratorKind::Random, n)
        }
    }

    pub fn family(family: Family) -> Self {
        GeneratorConfig {
            count: 1,
            family: Some(family),
            ..GeneratorConfig::base(GeneratorKind::Family, 0)
        }
    }

    pub fn with_sizes(mut self, min: usize, max: usize) -> Self {
        self.member_size_range = Some((min, max));
        self
    }

    pub fn deep(mut self) -> Self {
        self.deep = true;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn size_range(&self) -> Result<(usize, usize), HarnessError> {
        let n = self.n;
        let (min, max) = self
            .member_size_range
            .unwrap_or(if n >= 2 { (1, n - 1) } else { (n, n) });
        if min > max || max > n {
            return Err(HarnessError::SizeRangeInfeasible { n, min, max });
        }
        Ok((min, max))
    }
}

/// Draws up to `2n` members one at a time, redrawing any candidate comparable
/// to an accepted member; gives up growing after 64 consecutive redraws.
fn sample_clutter(rng: &mut ChaCha8Rng, n: usize, (min, max): (usize, usize)) -> Clutter {
    let target = rng.gen_range(1..=2 * n.max(1));
    let mut members: Vec<MemberSet> = Vec::with_capacity(target);
    let mut misses = 0;
    while members.len() < target && misses < 64 {
        let size = rng.gen_range(min..=max);
        let cand: MemberSet = sample(rng, n, size).into_iter().map(|i| i + 1).collect();
        if members.iter().any(|m| m.is_subset(cand) || cand.is_subset(*m)) {
            misses += 1;
            continue;
        }
        misses = 0;
        members.push(cand);
    }
    Clutter::from_sets(n, members).expect("antichain by construction")
}

/// The first random clutter of a RANDOM config.
pub fn random_clutter(config: &GeneratorConfig) -> Result<Clutter, HarnessError> {
    Ok(random_clutters(config, 1)?.remove(0))
}

/// The first `count` random clutters of a RANDOM config.
pub fn random_clutters(config: &GeneratorConfig, count: usize) -> Result<Vec<Clutter>, HarnessError> {
    if config.kind != GeneratorKind::Random {
        return Err(HarnessError::MissingField("kind RANDOM"));
    }
    let range = config.size_range()?;
    if config.n > crate::clutter::MAX_GROUND {
        return Err(HarnessError::BoundExceeded {
            n: config.n,
            bound: crate::clutter::MAX_GROUND,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    Ok((0..count).map(|_| sample_clutter(&mut rng, config.n, range)).collect())
}

/// A random set-system: each point of `{0,1}^d` kept with probability `p`.
pub fn random_set_system(rng: &mut impl Rng, d: usize, p: f64) -> SetSystem {
    assert!(d < 32);
    let points = (0..1u64 << d)
        .filter(|_| rng.gen_bool(p))
        .map(MemberSet::from_bits)
        .collect();
    SetSystem::new(d, points).expect("distinct points")
}

/// Every instance a config describes, in order, handed over in chunks.
fn for_each_chunk(
    config: &GeneratorConfig,
    mut f: impl FnMut(usize, Vec<Clutter>),
) -> Result<(), HarnessError> {
    match config.kind {
        GeneratorKind::Exhaustive => {
            let bound = if config.deep {
                ENUMERATION_LIMIT
            } else {
                DEFAULT_EXHAUSTIVE_BOUND
            };
            if config.n > bound {
                return Err(HarnessError::BoundExceeded { n: config.n, bound });
            }
            let mut it = enumerate_clutters(config.n)?;
            let mut base = 0;
            loop {
                let chunk: Vec<Clutter> = it.by_ref().take(CHUNK).collect();
                if chunk.is_empty() {
                    break;
                }
                let len = chunk.len();
                f(base, chunk);
                base += len;
            }
        }
        GeneratorKind::Random => {
            let range = config.size_range()?;
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let mut base = 0;
            while base < config.count {
                let len = CHUNK.min(config.count - base);
                let chunk = (0..len).map(|_| sample_clutter(&mut rng, config.n, range)).collect();
                f(base, chunk);
                base += len;
            }
        }
        GeneratorKind::Family => {
            let family = config.family.as_ref().ok_or(HarnessError::MissingField("family"))?;
            f(0, vec![make_family(family)?]);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// checks

/// A named property checked per instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `G(C)` is bipartite and the setcore is well defined.
    Structure,
    CoreFormula,
    SetcoreInjective,
    CoreCoveringNumber,
    SmallDimensionCube,
    SetcoreGeometry,
    DeletionContraction,
    SameSideLemma,
    IrreducibleMonochromatic,
    Mu1AtLeast3,
    Chain,
    Theorem,
    Mu1EqualsLambda,
    RainbowIsMonochromatic,
    Witnesses,
    OrientationStable,
    BlockerInvolution,
    MinorDuality,
    CoveringNumberFromBlocker,
    FamilyRecognized,
}

impl Check {
    /// Run on clean tangled instances by `verify_theorem`.
    pub const THEOREM: &'static [Check] = &[Check::Structure, Check::SetcoreGeometry, Check::Theorem];

    /// Run on clean tangled instances by `verify_lemmas`.
    pub const LEMMAS: &'static [Check] = &[
        Check::Structure,
        Check::CoreFormula,
        Check::SetcoreInjective,
        Check::CoreCoveringNumber,
        Check::SmallDimensionCube,
        Check::SetcoreGeometry,
        Check::DeletionContraction,
        Check::SameSideLemma,
        Check::IrreducibleMonochromatic,
        Check::Mu1AtLeast3,
        Check::Chain,
        Check::Theorem,
        Check::Mu1EqualsLambda,
        Check::RainbowIsMonochromatic,
        Check::Witnesses,
        Check::OrientationStable,
    ];

    /// Run on every instance by `verify_lemmas`.
    pub const ALL_INSTANCES: &'static [Check] = &[Check::BlockerInvolution, Check::CoveringNumberFromBlocker];

    pub fn name(self) -> &'static str {
        match self {
            Check::Structure => "structure",
            Check::CoreFormula => "core_formula",
            Check::SetcoreInjective => "setcore_injective",
            Check::CoreCoveringNumber => "core_covering_number",
            Check::SmallDimensionCube => "small_dimension_cube",
            Check::SetcoreGeometry => "setcore_geometry",
            Check::DeletionContraction => "deletion_contraction",
            Check::SameSideLemma => "same_side_lemma",
            Check::IrreducibleMonochromatic => "irreducible_monochromatic",
            Check::Mu1AtLeast3 => "mu1_at_least_3",
            Check::Chain => "chain",
            Check::Theorem => "theorem",
            Check::Mu1EqualsLambda => "mu1_equals_lambda",
            Check::RainbowIsMonochromatic => "rainbow_is_monochromatic",
            Check::Witnesses => "witnesses",
            Check::OrientationStable => "orientation_stable",
            Check::BlockerInvolution => "blocker_involution",
            Check::MinorDuality => "minor_duality",
            Check::CoveringNumberFromBlocker => "covering_number_from_blocker",
            Check::FamilyRecognized => "family_recognized",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub instance: usize,
    /// The instance in clutter text format.
    pub clutter: String,
    pub check: Check,
    pub minor_spec: Option<MinorSpec>,
    pub family: Option<Family>,
    pub expected: String,
    pub actual: String,
}

impl Violation {
    /// Re-runs the check on the stored instance; `true` when it fails again.
    pub fn replay(&self) -> bool {
        let Ok(c) = text::parse_clutter(&self.clutter) else {
            return false;
        };
        let outcome = match self.check {
            Check::MinorDuality => check_duality(&c, self.minor_spec.unwrap_or_default()),
            Check::FamilyRecognized => match &self.family {
                Some(family) => check_family(&c, family),
                None => return false,
            },
            Check::BlockerInvolution | Check::CoveringNumberFromBlocker => run_plain(self.check, &c),
            check => match Context::build(&c) {
                Ok(ctx) => run_clean_tangled(check, &c, &ctx),
                Err(m) => Err(m),
            },
        };
        outcome.is_err()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub expected: String,
    pub actual: String,
}

fn mismatch(expected: impl fmt::Display, actual: impl fmt::Display) -> Mismatch {
    Mismatch {
        expected: expected.to_string(),
        actual: actual.to_string(),
    }
}

fn ensure(ok: bool, expected: impl fmt::Display, actual: impl fmt::Display) -> Result<(), Mismatch> {
    if ok {
        Ok(())
    } else {
        Err(mismatch(expected, actual))
    }
}

/// Everything the clean-tangled checks share.
pub struct Context {
    pub graph: MinCoverGraph,
    pub core: Vec<MemberSet>,
    pub setcore: SetSystem,
    pub geometry: GeometryReport,
    pub report: ParamReport,
}

impl Context {
    pub fn build(c: &Clutter) -> Result<Context, Mismatch> {
        let fail = |e: &dyn fmt::Display| mismatch("bipartite graph with a well-defined setcore", e);
        let graph = structure::min_cover_graph(c).map_err(|e| fail(&e))?;
        let core = structure::core(c).map_err(|e| fail(&e))?;
        let setcore = structure::setcore_with(c, &graph).map_err(|e| fail(&e))?;
        let geometry = if setcore.is_empty() {
            let (lambda, _) = params::connectivity(&setcore);
            GeometryReport {
                nonempty: false,
                no_duplicated_coordinates: true,
                complementary_coordinates: Vec::new(),
                affine_rank: 0,
                full_dimensional: false,
                lambda,
                lambda_at_least_3: false,
            }
        } else {
            structure::check_setcore_geometry(&setcore).map_err(|e| fail(&e))?
        };
        let report = params::param_report_with(c, &graph).map_err(|e| fail(&e))?;
        Ok(Context {
            graph,
            core,
            setcore,
            geometry,
            report,
        })
    }
}

fn fmt_values(r: &ParamReport) -> String {
    format!(
        "mu={} mu1={} mu2={} mu3={} lambda={}",
        r.mu, r.mu1, r.mu2, r.mu3, r.lambda
    )
}

fn fmt_sets(sets: &[MemberSet]) -> String {
    let parts: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

/// Runs one clean-tangled check.
pub fn run_clean_tangled(check: Check, c: &Clutter, ctx: &Context) -> Result<(), Mismatch> {
    let g = &ctx.graph;
    let r = &ctx.report;
    match check {
        Check::Structure => Ok(()),
        Check::CoreFormula => {
            let formula = structure::core_by_component_formula(c, g).map_err(|e| mismatch("core", e))?;
            ensure(formula == ctx.core, fmt_sets(&ctx.core), fmt_sets(&formula))
        }
        Check::SetcoreInjective => ensure(
            ctx.setcore.len() == ctx.core.len(),
            format!("{} points", ctx.core.len()),
            format!("{} points", ctx.setcore.len()),
        ),
        Check::CoreCoveringNumber => {
            let tau = Clutter::from_sets(c.ground_size(), ctx.core.clone())
                .map(|k| k.covering_number())
                .map_err(|e| mismatch("core is an antichain", e))?;
            ensure(
                !ctx.core.is_empty() && tau == ExtNat::Finite(2),
                "nonempty core with tau = 2",
                format!("{} core members, tau = {tau}", ctx.core.len()),
            )
        }
        Check::SmallDimensionCube => {
            if g.d() > 2 {
                return Ok(());
            }
            ensure(
                ctx.setcore == SetSystem::cube(g.d()),
                format!("{{0,1}}^{}", g.d()),
                text::format_set_system(&ctx.setcore).replace('\n', " "),
            )
        }
        Check::SetcoreGeometry => ensure(ctx.geometry.passes(), "all geometry checks pass", format!("{:?}", ctx.geometry)),
        Check::DeletionContraction => check_deletion_contraction(c, ctx),
        Check::SameSideLemma => {
            let n = c.ground_size();
            for u in 1..=n {
                for v in 1..=n {
                    if u == v {
                        continue;
                    }
                    let same_part = g
                        .components
                        .iter()
                        .any(|k| (k.u.contains(u) && k.u.contains(v)) || (k.v.contains(u) && k.v.contains(v)));
                    if same_part {
                        continue;
                    }
                    if !ctx.core.iter().any(|m| m.contains(u) && !m.contains(v)) {
                        return Err(mismatch(
                            format!("a core member containing {u} but not {v}"),
                            "none",
                        ));
                    }
                }
            }
            Ok(())
        }
        Check::IrreducibleMonochromatic => {
            for p in SidePattern::all(g.d()) {
                if p.chosen() == 0 || !c.is_cover(p.union(g)) {
                    continue;
                }
                if params::is_irreducible(c, g, &p) != Ok(true) {
                    continue;
                }
                if !one_per_side_minimal_cover_exists(c, g, &p) {
                    return Err(mismatch(
                        format!("minimal cover with one element per side of {p}"),
                        "none",
                    ));
                }
            }
            Ok(())
        }
        Check::Mu1AtLeast3 => ensure(
            !r.mu1.is_finite() || r.mu1 >= ExtNat::Finite(3),
            "mu1 infinite or >= 3",
            format!("mu1 = {}", r.mu1),
        ),
        Check::Chain => ensure(
            r.mu1 >= r.mu2 && r.mu2 >= r.mu3 && r.mu3 >= r.mu && r.mu >= r.mu1,
            "mu1 >= mu2 >= mu3 >= mu >= mu1",
            fmt_values(r),
        ),
        Check::Theorem => ensure(r.all_equal(), "mu = mu1 = mu2 = mu3 = lambda", fmt_values(r)),
        Check::Mu1EqualsLambda => check_mu1_lambda(ctx),
        Check::RainbowIsMonochromatic => match r.witnesses.rainbow_cover {
            None => Ok(()),
            Some(b) => match SidePattern::containing(b, g) {
                Some(p) if c.is_cover(p.union(g)) => Ok(()),
                other => Err(mismatch(
                    format!("rainbow cover {b} inside a covering side pattern"),
                    format!("{other:?}"),
                )),
            },
        },
        Check::Witnesses => check_witnesses(c, ctx),
        Check::OrientationStable => {
            let mut raw = c.to_raw();
            raw.reverse();
            let half = raw.len() / 2;
            raw.rotate_left(half);
            let shuffled = Clutter::validate(c.ground_size(), &raw).map_err(|e| mismatch("valid clutter", e))?;
            let again = structure::setcore(&shuffled).map_err(|e| mismatch("setcore", e))?;
            ensure(
                again == ctx.setcore,
                text::format_set_system(&ctx.setcore).replace('\n', " "),
                text::format_set_system(&again).replace('\n', " "),
            )
        }
        Check::BlockerInvolution | Check::CoveringNumberFromBlocker => run_plain(check, c),
        Check::MinorDuality | Check::FamilyRecognized => Ok(()),
    }
}

fn check_deletion_contraction(c: &Clutter, ctx: &Context) -> Result<(), Mismatch> {
    let g = &ctx.graph;
    if g.d() < 2 {
        return Ok(());
    }
    for (i, comp) in g.components.iter().enumerate() {
        for kept in [Side::U, Side::V] {
            let minor = structure::side_minor(c, g, i, kept).map_err(|e| mismatch("side minor", e))?;
            let m = &minor.clutter;
            let label = format!("component {} keeping {kept:?}", i + 1);
            if !structure::is_tangled(m) {
                return Err(mismatch(format!("{label}: tangled minor"), m));
            }
            let clean = obstructions::is_clean(m, None).map_err(|e| mismatch("clean minor", e))?;
            if let Some(w) = clean.witness {
                return Err(mismatch(format!("{label}: clean minor"), format!("{m} has {w:?}")));
            }
            let (deleted, contracted) = (comp.side(kept.flip()), comp.side(kept));
            let image: Vec<MemberSet> = ctx
                .core
                .iter()
                .filter(|k| !k.intersects(deleted))
                .map(|k| relabel_into(k.difference(contracted), &minor.origin))
                .collect();
            let minor_core = structure::core(m).map_err(|e| mismatch("core of minor", e))?;
            if let Some(extra) = minor_core.iter().find(|k| !image.contains(k)) {
                return Err(mismatch(
                    format!("{label}: core of minor inside {}", fmt_sets(&image)),
                    format!("{extra} is not"),
                ));
            }
        }
    }
    Ok(())
}

fn relabel_into(set: MemberSet, origin: &[usize]) -> MemberSet {
    origin
        .iter()
        .enumerate()
        .filter(|(_, &e)| set.contains(e))
        .map(|(k, _)| k + 1)
        .collect()
}

/// A minimal cover of `c` with exactly one element in each chosen side.
fn one_per_side_minimal_cover_exists(c: &Clutter, g: &MinCoverGraph, p: &SidePattern) -> bool {
    let sides: Vec<Vec<usize>> = p
        .0
        .iter()
        .zip(&g.components)
        .filter_map(|(choice, comp)| choice.map(|s| comp.side(s).to_vec()))
        .collect();
    let mut idx = vec![0usize; sides.len()];
    loop {
        let b: MemberSet = idx.iter().zip(&sides).map(|(&i, side)| side[i]).collect();
        if c.is_cover(b) && b.iter().all(|e| !c.is_cover(b.without(e))) {
            return true;
        }
        // odometer
        let mut k = 0;
        loop {
            if k == sides.len() {
                return false;
            }
            idx[k] += 1;
            if idx[k] < sides[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn check_mu1_lambda(ctx: &Context) -> Result<(), Mismatch> {
    let r = &ctx.report;
    let g = &ctx.graph;
    if r.mu1 != r.lambda {
        return Err(mismatch("mu1 = lambda", fmt_values(r)));
    }
    if let Some(sel) = r.witnesses.core_cover {
        let q = params::selection_to_gsc(sel, g);
        let valid = params::gsc_valid(&ctx.setcore, &q) == Ok(true);
        ensure(
            valid && ExtNat::from(q.variables()) == r.mu1,
            format!("core cover {sel} translates to a valid GSC inequality on {} variables", r.mu1),
            format!("{q} valid={valid}"),
        )?;
    }
    if let Some(q) = r.witnesses.gsc {
        let sel = params::gsc_to_selection(&q, g);
        let covers = ctx.core.iter().all(|m| m.intersects(sel));
        ensure(
            covers && ExtNat::from(sel.len()) == r.lambda,
            format!("{q} translates to a core cover of size {}", r.lambda),
            format!("{sel} covers={covers}"),
        )?;
    }
    Ok(())
}

fn check_witnesses(c: &Clutter, ctx: &Context) -> Result<(), Mismatch> {
    let r = &ctx.report;
    let g = &ctx.graph;
    let w = &r.witnesses;
    let sized = |v: ExtNat, k: usize| v == ExtNat::from(k);
    if let Some(b) = w.rainbow_cover {
        ensure(
            params::is_rainbow_cover(c, g, b) && sized(r.mu, b.len()),
            format!("rainbow cover of size {}", r.mu),
            b,
        )?;
    }
    if let Some(b) = w.core_cover {
        let covers = ctx.core.iter().all(|m| m.intersects(b));
        ensure(covers && sized(r.mu1, b.len()), format!("core cover of size {}", r.mu1), b)?;
    }
    if let Some(p) = &w.mu2_pattern {
        ensure(
            c.is_cover(p.union(g)) && sized(r.mu2, p.chosen()),
            format!("covering pattern on {} components", r.mu2),
            p,
        )?;
    }
    if let Some(p) = &w.mu3_pattern {
        ensure(
            params::is_irreducible(c, g, p) == Ok(true) && sized(r.mu3, p.chosen()),
            format!("irreducible covering pattern on {} components", r.mu3),
            p,
        )?;
    }
    if let Some(q) = &w.gsc {
        ensure(
            params::gsc_valid(&ctx.setcore, q) == Ok(true) && sized(r.lambda, q.variables()),
            format!("valid GSC inequality on {} variables", r.lambda),
            q,
        )?;
    }
    let missing = [
        (r.mu, w.rainbow_cover.is_none()),
        (r.mu1, w.core_cover.is_none()),
        (r.mu2, w.mu2_pattern.is_none()),
        (r.mu3, w.mu3_pattern.is_none()),
        (r.lambda, w.gsc.is_none()),
    ];
    ensure(
        missing.iter().all(|(v, none)| v.is_finite() != *none),
        "a witness exactly for each finite value",
        fmt_values(r),
    )
}

fn run_plain(check: Check, c: &Clutter) -> Result<(), Mismatch> {
    match check {
        Check::BlockerInvolution => {
            let bb = c.blocker().blocker();
            ensure(&bb == c, c, &bb)
        }
        Check::CoveringNumberFromBlocker => {
            if c.is_empty() {
                return Ok(());
            }
            let b = c.blocker();
            let smallest = b.members().iter().map(|m| ExtNat::from(m.len())).min().unwrap_or(ExtNat::Infinity);
            ensure(c.covering_number() == smallest, smallest, c.covering_number())
        }
        _ => Ok(()),
    }
}

/// `b(C \ I / J) = b(C) / I \ J`.
pub fn check_duality(c: &Clutter, spec: MinorSpec) -> Result<(), Mismatch> {
    let left = c.minor(spec).map_err(|e| mismatch("valid spec", e))?.clutter.blocker();
    let right = c
        .blocker()
        .minor(spec.swapped())
        .map_err(|e| mismatch("valid spec", e))?
        .clutter;
    ensure(left == right, &right, &left)
}

/// Recognition of the obstruction a family instance is built to be.
pub fn check_family(c: &Clutter, family: &Family) -> Result<(), Mismatch> {
    match family {
        Family::Delta(n) => {
            let found = recognize_delta(c);
            let clean = obstructions::is_clean(c, Some(c.ground_size())).map(|r| r.is_clean());
            ensure(
                found == Some(*n) && clean == Ok(false),
                format!("delta of dimension {n}, not clean"),
                format!("{found:?}, clean={clean:?}"),
            )
        }
        Family::OddHole(n) => {
            let b = c.blocker();
            let found = recognize_blocker_of_extended_odd_hole(&b);
            let clean = obstructions::is_clean(&b, Some(b.ground_size())).map(|r| r.is_clean());
            ensure(
                found == Some(*n) && clean == Ok(false),
                format!("blocker is the blocker of an extended odd hole of dimension {n}, not clean"),
                format!("{found:?}, clean={clean:?}"),
            )
        }
        Family::Cuboid(s) => {
            let d = s.dimension();
            let both_values =
                (1..=d).all(|i| s.points().iter().any(|p| p.contains(i)) && s.points().iter().any(|p| !p.contains(i)));
            if !both_values {
                return Ok(());
            }
            ensure(structure::is_tangled(c), "tangled cuboid", "not tangled")
        }
    }
}

// ---------------------------------------------------------------------------
// campaigns

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub config: GeneratorConfig,
    pub instances_total: usize,
    pub tangled_count: usize,
    pub clean_tangled_count: usize,
    /// Family instances whose intended obstruction was confirmed.
    pub obstructions_recognized: usize,
    pub violations: usize,
    pub violation_details: Vec<Violation>,
    pub runtime_ms: u128,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Campaign {
    Theorem,
    Lemmas,
}

#[derive(Default)]
struct Outcome {
    tangled: bool,
    clean_tangled: bool,
    recognized: bool,
    violations: Vec<Violation>,
}

fn check_instance(index: usize, c: &Clutter, config: &GeneratorConfig, campaign: Campaign) -> Outcome {
    let mut out = Outcome::default();
    let mut record = |check: Check, spec: Option<MinorSpec>, family: Option<&Family>, m: Mismatch| {
        out.violations.push(Violation {
            instance: index,
            clutter: text::format_clutter(c),
            check,
            minor_spec: spec,
            family: family.cloned(),
            expected: m.expected,
            actual: m.actual,
        })
    };

    if campaign == Campaign::Lemmas {
        for &check in Check::ALL_INSTANCES {
            if let Err(m) = run_plain(check, c) {
                record(check, None, None, m);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(index as u64);
        for _ in 0..config.minor_specs {
            let spec = random_minor_spec(&mut rng, c.ground_size());
            if let Err(m) = check_duality(c, spec) {
                record(Check::MinorDuality, Some(spec), None, m);
            }
        }
        if let Some(family) = &config.family {
            match check_family(c, family) {
                Ok(()) => out.recognized = !matches!(family, Family::Cuboid(_)),
                Err(m) => record(Check::FamilyRecognized, None, Some(family), m),
            }
        }
    }

    let tangled = structure::is_tangled(c);
    out.tangled = tangled;
    if !tangled {
        return out;
    }
    match obstructions::is_clean(c, Some(config.clean_budget)) {
        Ok(r) if r.is_clean() => {}
        _ => return out,
    }
    out.clean_tangled = true;

    let checks = match campaign {
        Campaign::Theorem => Check::THEOREM,
        Campaign::Lemmas => Check::LEMMAS,
    };
    match Context::build(c) {
        Ok(ctx) => {
            for &check in checks {
                if let Err(m) = run_clean_tangled(check, c, &ctx) {
                    record(check, None, None, m);
                }
            }
        }
        Err(m) => record(Check::Structure, None, None, m),
    }
    out
}

/// A uniformly random disjoint `(I, J)`: each element is deleted, contracted
/// or kept with equal odds.
pub fn random_minor_spec(rng: &mut impl Rng, n: usize) -> MinorSpec {
    let mut spec = MinorSpec::default();
    for e in 1..=n {
        match rng.gen_range(0..3) {
            0 => spec.delete = spec.delete.with(e),
            1 => spec.contract = spec.contract.with(e),
            _ => {}
        }
    }
    spec
}

fn run_campaign(config: &GeneratorConfig, campaign: Campaign) -> Result<VerificationReport, HarnessError> {
    let start = Instant::now();
    let mut report = VerificationReport {
        config: config.clone(),
        instances_total: 0,
        tangled_count: 0,
        clean_tangled_count: 0,
        obstructions_recognized: 0,
        violations: 0,
        violation_details: Vec::new(),
        runtime_ms: 0,
    };
    for_each_chunk(config, |base, chunk| {
        let outcomes: Vec<Outcome> = chunk
            .par_iter()
            .enumerate()
            .map(|(i, c)| check_instance(base + i, c, config, campaign))
            .collect();
        report.instances_total += chunk.len();
        for o in outcomes {
            report.tangled_count += o.tangled as usize;
            report.clean_tangled_count += o.clean_tangled as usize;
            report.obstructions_recognized += o.recognized as usize;
            report.violations += o.violations.len();
            let room = config.violation_cap.saturating_sub(report.violation_details.len());
            report.violation_details.extend(o.violations.into_iter().take(room));
        }
    })?;
    report.runtime_ms = start.elapsed().as_millis();
    Ok(report)
}

/// For each clean tangled instance: structure, setcore geometry, and the
/// five-way equality `mu = mu1 = mu2 = mu3 = lambda`.
pub fn verify_theorem(config: &GeneratorConfig) -> Result<VerificationReport, HarnessError> {
    run_campaign(config, Campaign::Theorem)
}

/// Every structural and parameter property on clean tangled instances, plus
/// blocker involution, minor duality and family recognition on all instances.
pub fn verify_lemmas(config: &GeneratorConfig) -> Result<VerificationReport, HarnessError> {
    run_campaign(config, Campaign::Lemmas)
}
