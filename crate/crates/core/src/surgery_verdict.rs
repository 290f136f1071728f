//! Decision rules for whether a capped-off surface stays norm-minimizing
//! after Dehn filling along its own boundary slopes.
//!
//! Every rule is one-directional: `GuaranteedNormMinimizing` is a theorem,
//! `PossiblyExceptional` only names the hypothesis that blocked the
//! guarantee.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{self, LinkData, SurfaceClass};
use crate::lattice::angle_cmp;
use crate::norm_ball::{self, NormBall};
use crate::rational::Q;
use crate::slope_arith::Slope;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    GuaranteedNormMinimizing,
    PossiblyExceptional,
    Indeterminate,
}

/// Which decision rule produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Two components, both filled: a non-corner class of genus > 1 that is
    /// not of minimal genus in its face cone caps off to a norm-minimizing
    /// surface.
    FullFillingTwoComponent,
    /// Some but not all components filled: every non-corner class is fine.
    PartialFilling,
    /// The cone-minimal-genus rule for any number of components.
    ConeGenusAnyComponents,
    /// Degenerate slope layers on the last component, then induction on the
    /// filled link.
    RayLayers,
    /// Two components: a class outside the general exceptional set caps off
    /// to a norm-minimizing surface.
    ExceptionalSetMembership,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum Reason {
    Corner,
    GenusAtMostOne,
    ConeMinimalGenus,
    /// The boundary slope on the last component is `0` (`pair` absent) or
    /// kills the linking number of components `pair` after surgery.
    DegenerateLayer { pair: Option<(usize, usize)> },
    NeedsFilledNormData,
    NeedsSearchBound,
    /// After filling the last component, the class lands in the
    /// two-component exceptional set.
    InFilledExceptionalSet,
    /// The filled manifold has a degenerate norm, which the induction allows.
    DegenerateFilledNorm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchExtent {
    Exhaustive,
    /// Only classes with all coefficients in `[-bound, bound]` were examined.
    Bounded { bound: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeMinimum {
    pub genus: i64,
    pub witness: SurfaceClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    Corner,
    SlopeZero,
    LinkingVanishes,
    Recursion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerCheck {
    pub layer: Layer,
    pub fired: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub rule: Rule,
    pub reasons: Vec<Reason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone_minimum: Option<ConeMinimum>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchExtent>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub layers: Vec<LayerCheck>,
    /// Verdict of the filled link, when the layer rule recursed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filled: Option<Box<Verdict>>,
}

impl Verdict {
    fn new(outcome: Outcome, rule: Rule, reasons: Vec<Reason>) -> Verdict {
        Verdict { outcome, rule, reasons, genus: None, cone_minimum: None, search: None, layers: Vec::new(), filled: None }
    }

    fn guaranteed(rule: Rule) -> Verdict {
        Verdict::new(Outcome::GuaranteedNormMinimizing, rule, Vec::new())
    }

    fn possibly(rule: Rule, reason: Reason) -> Verdict {
        Verdict::new(Outcome::PossiblyExceptional, rule, vec![reason])
    }

    fn indeterminate(rule: Rule, reason: Reason) -> Verdict {
        Verdict::new(Outcome::Indeterminate, rule, vec![reason])
    }

    pub fn is_guaranteed(&self) -> bool {
        self.outcome == Outcome::GuaranteedNormMinimizing
    }
}

fn check_dims(link: &LinkData, ball: &NormBall, s: &SurfaceClass) -> Result<()> {
    if ball.dim() != link.n() {
        return Err(Error::DimensionMismatch { expected: link.n(), found: ball.dim() });
    }
    if s.dim() != link.n() {
        return Err(Error::DimensionMismatch { expected: link.n(), found: s.dim() });
    }
    Ok(())
}

fn require_primitive(s: &SurfaceClass) -> Result<()> {
    if !s.is_primitive() {
        return Err(Error::NotPrimitive(s.coeffs().to_vec()));
    }
    Ok(())
}

fn require_meets_every_component(link: &LinkData, s: &SurfaceClass) -> Result<()> {
    for i in 0..link.n() {
        if homology::boundary_component_count_on(link, s, i)? == 0 {
            return Err(Error::Hypothesis(format!(
                "class {s} has no boundary on P{}; restrict the link to the sublink the class meets and rerun",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Verdict for a two-component link with both components filled.
pub fn verdict_full_fill_2comp(link: &LinkData, ball: &NormBall, s: &SurfaceClass) -> Result<Verdict> {
    let rule = Rule::FullFillingTwoComponent;
    if link.n() != 2 {
        return Err(Error::Unsupported(format!("this rule covers 2-component links, got {}", link.n())));
    }
    check_dims(link, ball, s)?;
    link.pairwise_nonzero()?;
    require_primitive(s)?;
    if ball.is_corner(s)? {
        return Ok(Verdict::possibly(rule, Reason::Corner));
    }
    let g = norm_ball::genus_of_class(link, ball, s)?;
    let mut v = if g <= 1 {
        Verdict::possibly(rule, Reason::GenusAtMostOne)
    } else {
        let face = ball.face_of(s)?;
        let (gmin, witness) = norm_ball::min_genus_in_cone(link, ball, &face)?;
        let mut v = if g == gmin { Verdict::possibly(rule, Reason::ConeMinimalGenus) } else { Verdict::guaranteed(rule) };
        v.cone_minimum = Some(ConeMinimum { genus: gmin, witness });
        v.search = Some(SearchExtent::Exhaustive);
        v
    };
    v.genus = Some(g);
    Ok(v)
}

/// Verdict when only the components in `fill` are filled.
pub fn verdict_partial_fill(link: &LinkData, ball: &NormBall, s: &SurfaceClass, fill: &[usize]) -> Result<Verdict> {
    check_dims(link, ball, s)?;
    let mut seen = vec![false; link.n()];
    for &i in fill {
        if i >= link.n() {
            return Err(Error::IndexOutOfRange { index: i, len: link.n() });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::Hypothesis(format!("component P{} listed twice in the fill set", i + 1)));
        }
    }
    if fill.is_empty() {
        return Err(Error::Hypothesis("the fill set is empty; nothing is filled".into()));
    }
    if fill.len() == link.n() {
        return Err(Error::Hypothesis("every component is filled; use the full-filling verdict instead".into()));
    }
    link.pairwise_nonzero()?;
    require_primitive(s)?;
    require_meets_every_component(link, s)?;
    Ok(if ball.is_corner(s)? {
        Verdict::possibly(Rule::PartialFilling, Reason::Corner)
    } else {
        Verdict::guaranteed(Rule::PartialFilling)
    })
}

/// The cone-minimal-genus rule for `n ≥ 2` components. For `n > 2` the cone
/// search needs a coefficient bound, and the verdict records that it was
/// bounded.
pub fn verdict_ncomp(link: &LinkData, ball: &NormBall, s: &SurfaceClass, search_bound: Option<u64>) -> Result<Verdict> {
    if link.n() == 2 {
        let mut v = verdict_full_fill_2comp(link, ball, s)?;
        v.rule = Rule::ConeGenusAnyComponents;
        return Ok(v);
    }
    let rule = Rule::ConeGenusAnyComponents;
    if link.n() < 2 {
        return Err(Error::Unsupported("the cone-genus rule needs at least 2 components".into()));
    }
    check_dims(link, ball, s)?;
    link.pairwise_nonzero()?;
    require_primitive(s)?;
    require_meets_every_component(link, s)?;
    if ball.is_corner(s)? {
        return Ok(Verdict::possibly(rule, Reason::Corner));
    }
    let g = norm_ball::genus_of_class(link, ball, s)?;
    if g <= 1 {
        let mut v = Verdict::possibly(rule, Reason::GenusAtMostOne);
        v.genus = Some(g);
        return Ok(v);
    }
    let Some(bound) = search_bound else {
        let mut v = Verdict::indeterminate(rule, Reason::NeedsSearchBound);
        v.genus = Some(g);
        return Ok(v);
    };
    let face = ball.maximizers(s)?[0];
    let mut best: Option<ConeMinimum> = None;
    let b = bound as i64;
    let n = link.n();
    let mut coeffs = vec![-b; n];
    loop {
        let beta = SurfaceClass::new(coeffs.clone());
        if beta.is_primitive() && ball.maximizers(&beta)? == [face] {
            let gb = norm_ball::genus_of_class(link, ball, &beta)?;
            if best.as_ref().is_none_or(|m| gb < m.genus) {
                best = Some(ConeMinimum { genus: gb, witness: beta });
            }
        }
        // Odometer over the box.
        let Some(k) = (0..n).rev().find(|&k| coeffs[k] < b) else { break };
        coeffs[k] += 1;
        for c in &mut coeffs[k + 1..] {
            *c = -b;
        }
    }
    let best = best.expect("s itself lies in its cone and in the box when bound ≥ max |coeff|");
    let mut v = if best.genus < g { Verdict::guaranteed(rule) } else { Verdict::possibly(rule, Reason::ConeMinimalGenus) };
    v.genus = Some(g);
    v.cone_minimum = Some(best);
    v.search = Some(SearchExtent::Bounded { bound });
    Ok(v)
}

/// Euler characteristic of the cut-and-paste sum `aR + bT`.
pub fn cut_paste_chi(chi_r: i64, chi_t: i64, a: i64, b: i64) -> i64 {
    a * chi_r + b * chi_t
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionalRule {
    /// Orders 1, `|lk| = 1`, every face unimodular: corners and bisectors.
    UnimodularFaces,
    /// Orders 1: combinations up to `|lk| + 1`.
    UnitOrders,
    /// Any orders: combinations up to `2|lk|m₁²m₂²`.
    General,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum MemberReason {
    Corner,
    /// A lattice point inside the parallelogram of two adjacent corners.
    ParallelogramInterior,
    /// `c1 + c2` for adjacent corners.
    Bisector,
    /// `a·β₁ + b·β₂` for adjacent rays of the augmented list.
    Combination { a: i64, b: i64, beta1: SurfaceClass, beta2: SurfaceClass },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionalMember {
    pub class: SurfaceClass,
    pub reason: MemberReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionalSet {
    pub rule: ExceptionalRule,
    /// Members sorted by angle, then by size along a ray.
    pub members: Vec<ExceptionalMember>,
    /// The closed-form cardinality bound as published.
    pub bound: u64,
    /// Number of candidates the construction can produce before removing
    /// duplicates: `[n_x + Σ(det − 1)]·(1 + C(K, 2))` with `K` the combination
    /// limit. Always at least `members.len()`.
    pub construction_count: u64,
    /// Largest `a + b` used for combinations; 0 when there are none.
    pub combination_limit: u64,
}

impl ExceptionalSet {
    pub fn contains(&self, s: &SurfaceClass) -> bool {
        self.members.iter().any(|m| &m.class == s)
    }

    pub fn classes(&self) -> Vec<SurfaceClass> {
        self.members.iter().map(|m| m.class.clone()).collect()
    }

    pub fn within_bound(&self) -> bool {
        self.members.len() as u64 <= self.bound
    }
}

fn binom2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

fn class_order(a: &SurfaceClass, b: &SurfaceClass) -> Ordering {
    angle_cmp(a.xy(), b.xy()).then_with(|| a.xy().map(i64::abs).cmp(&b.xy().map(i64::abs)))
}

fn finish(rule: ExceptionalRule, found: Vec<ExceptionalMember>, bound: u64, construction_count: u64, limit: u64) -> ExceptionalSet {
    // Keep the first reason recorded for each class.
    let mut uniq: BTreeMap<SurfaceClass, MemberReason> = BTreeMap::new();
    for m in found {
        uniq.entry(m.class).or_insert(m.reason);
    }
    let mut members: Vec<ExceptionalMember> = uniq.into_iter().map(|(class, reason)| ExceptionalMember { class, reason }).collect();
    members.sort_by(|a, b| class_order(&a.class, &b.class));
    ExceptionalSet { rule, members, bound, construction_count, combination_limit: limit }
}

fn two_component_checks(link: &LinkData, ball: &NormBall) -> Result<()> {
    if link.n() != 2 || ball.dim() != 2 {
        return Err(Error::Unsupported(format!("exceptional sets are enumerated for 2-component links, got {}", link.n())));
    }
    link.pairwise_nonzero()
}

/// Corners and bisectors, when every face is unimodular, orders are 1 and
/// `|lk| = 1`.
pub fn exceptional_set_det1(link: &LinkData, ball: &NormBall) -> Result<ExceptionalSet> {
    two_component_checks(link, ball)?;
    if link.orders()? != [1, 1] {
        return Err(Error::Hypothesis(format!("torsion orders must be (1, 1), got {:?}", link.orders()?)));
    }
    if link.lk(0, 1).abs_ne_one() {
        return Err(Error::Hypothesis(format!("|lk| must be 1, got {}", crate::rational::fmt_rational(&link.lk(0, 1)))));
    }
    let faces = ball.faces()?;
    if let Some(f) = faces.iter().find(|f| f.determinant() != 1) {
        return Err(Error::Hypothesis(format!("face spanned by {} and {} has determinant {}, not 1", f.c1, f.c2, f.determinant())));
    }
    let mut found: Vec<ExceptionalMember> = ball.corners()?.into_iter().map(|class| ExceptionalMember { class, reason: MemberReason::Corner }).collect();
    for f in &faces {
        found.push(ExceptionalMember { class: &f.c1 + &f.c2, reason: MemberReason::Bisector });
    }
    let n = faces.len() as u64;
    Ok(finish(ExceptionalRule::UnimodularFaces, found, 2 * n, 2 * n, 2))
}

trait AbsOne {
    fn abs_ne_one(&self) -> bool;
}

impl AbsOne for Q {
    fn abs_ne_one(&self) -> bool {
        *self != Q::from_integer(1) && *self != Q::from_integer(-1)
    }
}

/// Corners, parallelogram interiors, and the rays between them in angular
/// order, reduced to primitive representatives.
fn augmented(ball: &NormBall) -> Result<(Vec<ExceptionalMember>, Vec<SurfaceClass>)> {
    let mut base: Vec<ExceptionalMember> = ball.corners()?.into_iter().map(|class| ExceptionalMember { class, reason: MemberReason::Corner }).collect();
    for f in ball.faces()? {
        for p in norm_ball::interior_lattice_points(&f.c1, &f.c2)? {
            base.push(ExceptionalMember { class: p, reason: MemberReason::ParallelogramInterior });
        }
    }
    let mut rays: Vec<SurfaceClass> = base.iter().map(|m| m.class.primitive()).collect();
    rays.sort_by(class_order);
    rays.dedup();
    Ok((base, rays))
}

fn combination_set(rule: ExceptionalRule, ball: &NormBall, limit: u64, bound_factor: u64) -> Result<ExceptionalSet> {
    let (base, rays) = augmented(ball)?;
    let base_len = base.len() as u64;
    let mut found = base;
    let k = rays.len();
    let lim = limit as i64;
    for i in 0..k {
        let (b1, b2) = (&rays[i], &rays[(i + 1) % k]);
        for a in 1..lim {
            for b in 1..=lim - a {
                found.push(ExceptionalMember {
                    class: &b1.scaled(a) + &b2.scaled(b),
                    reason: MemberReason::Combination { a, b, beta1: b1.clone(), beta2: b2.clone() },
                });
            }
        }
    }
    Ok(finish(rule, found, base_len * (1 + bound_factor), base_len * (1 + binom2(limit)), limit))
}

/// Exceptional set for torsion orders `(1, 1)`.
pub fn exceptional_set_nullhomologous(link: &LinkData, ball: &NormBall) -> Result<ExceptionalSet> {
    two_component_checks(link, ball)?;
    if link.orders()? != [1, 1] {
        return Err(Error::Hypothesis(format!(
            "torsion orders must be (1, 1), got {:?}; use the general exceptional set",
            link.orders()?
        )));
    }
    let lk = link.lk(0, 1);
    if !lk.is_integer() {
        return Err(Error::InconsistentData("orders (1, 1) force an integral linking number".into()));
    }
    let l = lk.to_integer().unsigned_abs();
    combination_set(ExceptionalRule::UnitOrders, ball, l + 1, binom2(l))
}

/// Exceptional set for arbitrary torsion orders.
pub fn exceptional_set_general(link: &LinkData, ball: &NormBall) -> Result<ExceptionalSet> {
    two_component_checks(link, ball)?;
    let c = homology::boundary_bound(link)?;
    combination_set(ExceptionalRule::General, ball, c, binom2(c.saturating_sub(1)))
}

/// Data of the manifold obtained by filling the last component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilledData {
    /// Link of the remaining components, with verified orders.
    pub link: LinkData,
    pub ball: NormBall,
    /// The capped class in the filled manifold.
    pub class: SurfaceClass,
}

/// Supplies the norm of a filled complement, which cannot be derived from
/// homology alone. Implementations must be side-effect free.
pub trait FilledNormOracle {
    /// Data after filling the last component of `link` along `slope`, for the
    /// class `s`, or `None` when the oracle knows nothing about it. Return
    /// [`Error::DegenerateNorm`] when the filled norm is degenerate.
    fn filled(&self, link: &LinkData, s: &SurfaceClass, slope: Slope) -> Result<Option<FilledData>>;
}

/// Options for [`exceptional_ray_layers_ncomp`].
#[derive(Clone, Debug, Default)]
pub struct LayerOptions {
    /// Relabel components first: new component `k` is old component
    /// `order[k]`. The last one in the new order is filled first.
    pub order: Option<Vec<usize>>,
}

/// The layer test that depends only on the slope on the last component:
/// slope `0` or `lk_ij / (lk_in·lk_jn)` for some pair `i < j < n`. Works for
/// any nonzero class, so it is scale invariant.
pub fn slope_layer(link: &LinkData, s: &SurfaceClass) -> Result<Option<Reason>> {
    let n = link.n();
    let q = homology::boundary_slope_on(link, s, n - 1)?;
    if q == Slope::ZERO {
        return Ok(Some(Reason::DegenerateLayer { pair: None }));
    }
    if let Some(q) = q.as_ratio() {
        for i in 0..n - 1 {
            for j in i + 1..n - 1 {
                let den = link.lk(i, n - 1) * link.lk(j, n - 1);
                if !den.is_zero() && link.lk(i, j) / den == q {
                    return Ok(Some(Reason::DegenerateLayer { pair: Some((i + 1, j + 1)) }));
                }
            }
        }
    }
    Ok(None)
}

/// Layered exceptional-ray test for links with more than two components.
pub fn exceptional_ray_layers_ncomp(
    link: &LinkData,
    ball: &NormBall,
    s: &SurfaceClass,
    oracle: Option<&dyn FilledNormOracle>,
    options: &LayerOptions,
) -> Result<Verdict> {
    if link.n() <= 2 {
        return Err(Error::Unsupported("the layer rule is for 3 or more components; use the exceptional sets for 2".into()));
    }
    check_dims(link, ball, s)?;
    match &options.order {
        Some(order) => {
            homology::check_permutation(order, link.n())?;
            let link = link.permuted(order)?;
            let ball = ball.permuted(order)?;
            layers(&link, &ball, &s.permuted(order), oracle)
        }
        None => layers(link, ball, s, oracle),
    }
}

fn layers(link: &LinkData, ball: &NormBall, s: &SurfaceClass, oracle: Option<&dyn FilledNormOracle>) -> Result<Verdict> {
    let rule = Rule::RayLayers;
    let n = link.n();
    link.pairwise_nonzero()?;
    require_primitive(s)?;
    require_meets_every_component(link, s)?;
    let mut checks = Vec::new();
    let corner = ball.is_corner(s)?;
    checks.push(LayerCheck { layer: Layer::Corner, fired: corner, detail: format!("{} maximizing functionals", ball.maximizers(s)?.len()) });
    let done = |mut v: Verdict, checks: Vec<LayerCheck>| {
        v.layers = checks;
        Ok(v)
    };
    if corner {
        return done(Verdict::possibly(rule, Reason::Corner), checks);
    }
    let q = homology::boundary_slope_on(link, s, n - 1)?;
    let layer = slope_layer(link, s)?;
    let zero = matches!(layer, Some(Reason::DegenerateLayer { pair: None }));
    checks.push(LayerCheck { layer: Layer::SlopeZero, fired: zero, detail: format!("slope on P{n} is {q}") });
    if zero {
        return done(Verdict::possibly(rule, layer.unwrap()), checks);
    }
    let pair = match &layer {
        Some(Reason::DegenerateLayer { pair: Some(p) }) => Some(*p),
        _ => None,
    };
    checks.push(LayerCheck {
        layer: Layer::LinkingVanishes,
        fired: pair.is_some(),
        detail: match pair {
            Some((i, j)) => format!("slope {q} equals lk{i}{j}/(lk{i}{n}·lk{j}{n}), so the surgered lk{i}{j} is 0"),
            None => "no surgered linking number vanishes".into(),
        },
    });
    if pair.is_some() {
        return done(Verdict::possibly(rule, layer.unwrap()), checks);
    }
    let Some(oracle) = oracle else {
        checks.push(LayerCheck { layer: Layer::Recursion, fired: false, detail: "no data for the filled manifold".into() });
        return done(Verdict::indeterminate(rule, Reason::NeedsFilledNormData), checks);
    };
    let filled = match oracle.filled(link, s, q) {
        Ok(Some(f)) => f,
        Ok(None) => {
            checks.push(LayerCheck { layer: Layer::Recursion, fired: false, detail: format!("oracle has no data for {s} filled along {q}") });
            return done(Verdict::indeterminate(rule, Reason::NeedsFilledNormData), checks);
        }
        Err(Error::DegenerateNorm(msg)) => {
            checks.push(LayerCheck { layer: Layer::Recursion, fired: true, detail: format!("filled norm is degenerate: {msg}") });
            return done(Verdict::indeterminate(rule, Reason::DegenerateFilledNorm), checks);
        }
        Err(e) => return Err(e),
    };
    let expected = homology::surgered_linking(link, n - 1, q)?;
    if filled.link.linking() != expected.linking() {
        return Err(Error::InconsistentData(format!(
            "filled link data disagrees with the surgered linking matrix after slope {q} on P{n}"
        )));
    }
    filled.link.orders()?;
    let sub = if n - 1 == 2 {
        let e = exceptional_set_general(&filled.link, &filled.ball)?;
        require_primitive(&filled.class)?;
        if e.contains(&filled.class) {
            Verdict::possibly(Rule::ExceptionalSetMembership, Reason::InFilledExceptionalSet)
        } else {
            Verdict::guaranteed(Rule::ExceptionalSetMembership)
        }
    } else {
        layers(&filled.link, &filled.ball, &filled.class, Some(oracle))?
    };
    checks.push(LayerCheck {
        layer: Layer::Recursion,
        fired: true,
        detail: format!("filled P{n} along {q}; class becomes {}", filled.class),
    });
    let mut v = match sub.outcome {
        Outcome::GuaranteedNormMinimizing => Verdict::guaranteed(rule),
        Outcome::PossiblyExceptional => Verdict::new(Outcome::PossiblyExceptional, rule, sub.reasons.clone()),
        Outcome::Indeterminate => Verdict::new(Outcome::Indeterminate, rule, sub.reasons.clone()),
    };
    v.filled = Some(Box::new(sub));
    done(v, checks)
}
