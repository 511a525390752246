//! Utility-region conditions for successful de-anonymisation.
//!
//! Conditions are kept in their printed order: `C1` is the `2l` condition,
//! `C2` the `2(1-h)` condition, `C3` the `2l(1-R)/R` condition and `C4` the
//! `2(1-h)R/(1-R)` condition. Each reads
//!
//! ```text
//! U_u + a_k U_a > 1 + a_k - s * b_k
//! ```
//!
//! with slack scale `s = 1` for local utility and `s = w (N - 1) / 2` for
//! global utility.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perturb::EdgeNoiseSpec;

/// Density and pair-probability range of the underlying graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphParams {
    pub n: usize,
    pub density: f64,
    pub l: f64,
    pub h: f64,
}

impl GraphParams {
    pub fn new(n: usize, density: f64, l: f64, h: f64) -> Result<Self> {
        let p = GraphParams { n, density, l, h };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid(format!("n = {} must be at least 2", self.n)));
        }
        if !(self.density > 0.0 && self.density < 1.0) {
            return Err(Error::invalid(format!(
                "density = {} must lie in (0, 1)",
                self.density
            )));
        }
        if !(self.l > 0.0 && self.l <= self.h && self.h < 1.0) {
            return Err(Error::invalid(format!(
                "need 0 < l <= h < 1 (l = {}, h = {})",
                self.l, self.h
            )));
        }
        Ok(())
    }

    /// `(a_k, b_k)` for the four conditions.
    fn coefficients(&self) -> [(f64, f64); 4] {
        let (r, l, h) = (self.density, self.l, self.h);
        [
            (2.0 * l, r * l),
            (2.0 * (1.0 - h), (1.0 - h) * (1.0 - r)),
            (2.0 * l * (1.0 - r) / r, l * (1.0 - r)),
            (2.0 * (1.0 - h) * r / (1.0 - r), r * (1.0 - h)),
        ]
    }
}

/// A pair of utilities for the anonymised and auxiliary graphs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UtilityPair {
    pub u_a: f64,
    pub u_u: f64,
}

impl UtilityPair {
    pub fn new(u_a: f64, u_u: f64) -> Result<Self> {
        for (name, v) in [("u_a", u_a), ("u_u", u_u)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(format!("{name} = {v} must lie in [0, 1]")));
            }
        }
        Ok(UtilityPair { u_a, u_u })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    C1,
    C2,
    C3,
    C4,
}

impl Condition {
    pub const ALL: [Condition; 4] = [Condition::C1, Condition::C2, Condition::C3, Condition::C4];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Density regime of the utility region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    A,
    B,
    C,
    D,
}

impl Regime {
    pub const ALL: [Regime; 4] = [Regime::A, Regime::B, Regime::C, Regime::D];

    /// Binding set conventionally attributed to this regime.
    /// [`ConditionReport::binding`] holds the geometrically active set, which
    /// does not always agree.
    pub fn stated_binding(self) -> &'static [Condition] {
        match self {
            Regime::A => &[Condition::C1],
            Regime::B => &[Condition::C1, Condition::C2],
            Regime::C => &[Condition::C4],
            Regime::D => &[Condition::C3, Condition::C4],
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
    pub all_satisfied: bool,
    pub regime: Regime,
    /// Conditions that are not implied by the others inside `[0, 1]^2`.
    pub binding: Vec<Condition>,
}

impl ConditionReport {
    pub fn conditions(&self) -> [bool; 4] {
        [self.c1, self.c2, self.c3, self.c4]
    }

    pub fn get(&self, c: Condition) -> bool {
        self.conditions()[c.index()]
    }
}

/// Margins this close to zero count as equality, so the strict inequality
/// fails on a boundary regardless of rounding.
const TIE_TOLERANCE: f64 = 1e-12;

fn evaluate(params: &GraphParams, pair: &UtilityPair, slack: f64) -> [bool; 4] {
    params
        .coefficients()
        .map(|(a, b)| (pair.u_u + a * pair.u_a) - (1.0 + a - slack * b) > TIE_TOLERANCE)
}

fn report(params: &GraphParams, pair: &UtilityPair, slack: f64) -> ConditionReport {
    let [c1, c2, c3, c4] = evaluate(params, pair, slack);
    ConditionReport {
        c1,
        c2,
        c3,
        c4,
        all_satisfied: c1 && c2 && c3 && c4,
        regime: classify_regime(params),
        binding: active_conditions(params, slack),
    }
}

/// Local-utility conditions, strict inequalities evaluated as printed.
pub fn check_theorem1(params: &GraphParams, pair: &UtilityPair) -> ConditionReport {
    report(params, pair, 1.0)
}

/// Global-utility conditions: the final term of each local condition is
/// scaled by `w (N - 1) / 2`.
pub fn check_theorem2(params: &GraphParams, pair: &UtilityPair, w: u32) -> Result<ConditionReport> {
    if w == 0 {
        return Err(Error::invalid("walk length w must be at least 1"));
    }
    params.validate()?;
    Ok(report(params, pair, theorem2_slack(params.n, w)))
}

/// `w (N - 1) / 2`.
pub fn theorem2_slack(n: usize, w: u32) -> f64 {
    w as f64 * (n as f64 - 1.0) / 2.0
}

pub fn classify_regime(params: &GraphParams) -> Regime {
    let (r, l, h) = (params.density, params.l, params.h);
    let lower = 0.5f64.min((1.0 - h) / (1.0 - h + l));
    let upper = 0.5f64.max(l / (1.0 - h + l));
    if r < lower {
        Regime::A
    } else if r < 0.5 {
        Regime::B
    } else if r < upper {
        Regime::C
    } else {
        Regime::D
    }
}

/// Conditions whose boundary line contributes a segment of positive length
/// to the boundary of the satisfied region inside the unit square.
///
/// Works in distortion coordinates `x = 1 - U_a`, `y = 1 - U_u`, where
/// condition `k` reads `y + a_k x < s b_k`. Coincident lines are attributed
/// to the lowest-numbered condition.
pub fn active_conditions(params: &GraphParams, slack: f64) -> Vec<Condition> {
    let coef = params.coefficients();
    let mut out = Vec::new();
    'outer: for k in 0..4 {
        let (ak, bk) = (coef[k].0, slack * coef[k].1);
        // Segment of y = bk - ak x inside the square.
        let mut lo = 0.0f64.max((bk - 1.0) / ak);
        let mut hi = 1.0f64.min(bk / ak);
        for (j, &(aj, bj)) in coef.iter().enumerate() {
            if j == k {
                continue;
            }
            let bj = slack * bj;
            // Points on line k satisfy condition j iff (aj - ak) x < bj - bk.
            let (da, db) = (aj - ak, bj - bk);
            if da == 0.0 {
                if db > 0.0 || (db == 0.0 && j > k) {
                    continue;
                }
                continue 'outer;
            }
            let t = db / da;
            if da > 0.0 {
                hi = hi.min(t);
            } else {
                lo = lo.max(t);
            }
        }
        if lo < hi {
            out.push(Condition::ALL[k]);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub u_a: f64,
    pub u_u: f64,
    pub conditions: [bool; 4],
    pub all: bool,
}

/// Local-utility conditions evaluated on a square lattice over `[0, 1]^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionGrid {
    pub params: GraphParams,
    pub resolution: usize,
    /// Row-major: cell `i * resolution + j` has `u_a = i / (res - 1)`,
    /// `u_u = j / (res - 1)`.
    pub cells: Vec<GridCell>,
}

impl RegionGrid {
    pub fn cell(&self, i: usize, j: usize) -> &GridCell {
        &self.cells[i * self.resolution + j]
    }

    /// Cells where the conjunction of `subset` differs from `all`.
    pub fn mismatches(&self, subset: &[Condition]) -> usize {
        self.cells
            .iter()
            .filter(|c| subset.iter().all(|k| c.conditions[k.index()]) != c.all)
            .count()
    }

    pub fn satisfied_count(&self) -> usize {
        self.cells.iter().filter(|c| c.all).count()
    }
}

pub fn region_grid(params: &GraphParams, resolution: usize) -> Result<RegionGrid> {
    params.validate()?;
    if resolution < 2 {
        return Err(Error::invalid("grid resolution must be at least 2"));
    }
    let step = (resolution - 1) as f64;
    let mut cells = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        for j in 0..resolution {
            let pair = UtilityPair {
                u_a: i as f64 / step,
                u_u: j as f64 / step,
            };
            let conditions = evaluate(params, &pair, 1.0);
            cells.push(GridCell {
                u_a: pair.u_a,
                u_u: pair.u_u,
                conditions,
                all: conditions.iter().all(|&c| c),
            });
        }
    }
    Ok(RegionGrid {
        params: *params,
        resolution,
        cells,
    })
}

/// Rates at which the auxiliary graph's edge state is flipped when read
/// through the anonymised graph, for a pair with edge probability `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectionRates {
    /// `Pr(edge in G_a | no edge in G_u)`.
    pub p_ua_add: f64,
    /// `Pr(no edge in G_a | edge in G_u)`.
    pub p_ua_del: f64,
}

pub fn projection_rates(p: f64, aux: &EdgeNoiseSpec, anon: &EdgeNoiseSpec) -> Result<ProjectionRates> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("p = {p} must lie in (0, 1)")));
    }
    aux.validate()?;
    anon.validate()?;
    let (ua, ud) = (aux.p_add, aux.p_del);
    let (aa, ad) = (anon.p_add, anon.p_del);

    let add_den = (1.0 - ua) * (1.0 - p) + ud * p;
    let del_den = ua * (1.0 - p) + (1.0 - ud) * p;
    if add_den <= 0.0 || del_den <= 0.0 {
        return Err(Error::invalid(
            "projection undefined: auxiliary noise leaves no mass on one edge state",
        ));
    }
    let add_num = aa * (1.0 - ua) * (1.0 - p) + (1.0 - ad) * ud * p;
    let del_num = (1.0 - aa) * ua * (1.0 - p) + ad * (1.0 - ud) * p;
    Ok(ProjectionRates {
        p_ua_add: add_num / add_den,
        p_ua_del: del_num / del_den,
    })
}

/// Largest anonymisation noise (fraction of swapped edges) that still keeps
/// the `C1` condition satisfied for a delete/insert perturbation, given the
/// auxiliary noise. Zero once the auxiliary noise alone reaches `l / 2`.
pub fn max_safe_noise(l: f64, noise_u: f64) -> Result<f64> {
    if !(l > 0.0 && l <= 1.0) {
        return Err(Error::invalid(format!("l = {l} must lie in (0, 1]")));
    }
    if !(noise_u >= 0.0 && noise_u.is_finite()) {
        return Err(Error::invalid(format!("noise_u = {noise_u} must be >= 0")));
    }
    if noise_u >= l / 2.0 {
        return Ok(0.0);
    }
    Ok((l / 2.0 - noise_u) / (2.0 * l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(r: f64, l: f64, h: f64) -> GraphParams {
        GraphParams::new(1000, r, l, h).unwrap()
    }

    #[test]
    fn perfect_utility_satisfies_everything() {
        for (r, l, h) in [(0.2, 0.1, 0.9), (0.7, 0.3, 0.8), (0.5, 0.5, 0.5), (0.01, 0.01, 0.99)] {
            let rep = check_theorem1(&params(r, l, h), &UtilityPair::new(1.0, 1.0).unwrap());
            assert!(rep.all_satisfied, "{r} {l} {h}");
        }
    }

    #[test]
    fn c1_examples() {
        let p = params(0.2, 0.1, 0.9);
        assert!(check_theorem1(&p, &UtilityPair::new(1.0, 0.99).unwrap()).c1);
        assert!(!check_theorem1(&p, &UtilityPair::new(1.0, 0.97).unwrap()).c1);
    }

    #[test]
    fn boundary_points_are_not_satisfied() {
        // C1 with U_a = 1 holds iff U_u > 1 - R l; at equality it fails.
        let p = params(0.5, 0.5, 0.5);
        let rep = check_theorem1(&p, &UtilityPair::new(1.0, 0.75).unwrap());
        assert!(!rep.c1);
    }

    #[test]
    fn theorem2_examples() {
        let p = GraphParams::new(5, 0.2, 0.1, 0.9).unwrap();
        let one = UtilityPair::new(1.0, 1.0).unwrap();
        assert!(check_theorem2(&p, &one, 3).unwrap().all_satisfied);
        assert!(check_theorem2(&p, &one, 0).is_err());

        let big = GraphParams::new(10_000, 0.2, 0.1, 0.9).unwrap();
        for (ua, uu) in [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (0.3, 0.6)] {
            let rep = check_theorem2(&big, &UtilityPair::new(ua, uu).unwrap(), 10).unwrap();
            assert!(rep.all_satisfied);
            assert!(rep.binding.is_empty());
        }
    }

    #[test]
    fn theorem2_terms_are_scaled_local_terms() {
        let p = GraphParams::new(5, 0.3, 0.2, 0.7).unwrap();
        assert_eq!(theorem2_slack(5, 1), 2.0);
        // With slack 2 every local condition's right side is lower, so any
        // pair passing the local check passes the global one.
        for i in 0..=20 {
            for j in 0..=20 {
                let pair = UtilityPair::new(i as f64 / 20.0, j as f64 / 20.0).unwrap();
                let t1 = check_theorem1(&p, &pair).conditions();
                let t2 = check_theorem2(&p, &pair, 1).unwrap().conditions();
                for k in 0..4 {
                    assert!(!t1[k] || t2[k]);
                }
            }
        }
    }

    #[test]
    fn regime_examples() {
        assert_eq!(classify_regime(&params(0.1, 0.05, 0.9)), Regime::A);
        assert_eq!(classify_regime(&params(0.9, 0.9, 0.95)), Regime::C);
        assert_eq!(classify_regime(&params(0.96, 0.9, 0.95)), Regime::D);
        // 1-h = 0.4 < l = 0.5: min{0.5, 0.4/0.9} = 0.444
        assert_eq!(classify_regime(&params(0.45, 0.5, 0.6)), Regime::B);
        assert_eq!(classify_regime(&params(0.5, 0.05, 0.9)), Regime::D);
    }

    #[test]
    fn region_grid_shape() {
        let g = region_grid(&params(0.2, 0.1, 0.9), 2).unwrap();
        assert_eq!(g.cells.len(), 4);
        assert!(g.cell(1, 1).all);
        assert_eq!((g.cell(1, 0).u_a, g.cell(1, 0).u_u), (1.0, 0.0));
        assert!(region_grid(&params(0.2, 0.1, 0.9), 1).is_err());
        assert_eq!(region_grid(&params(0.2, 0.1, 0.9), 101).unwrap().cells.len(), 10_201);
    }

    #[test]
    fn active_conditions_match_grid() {
        // l <= 1 - h and R < 0.5: only C1 binds.
        let p = params(0.2, 0.1, 0.7);
        assert_eq!(active_conditions(&p, 1.0), vec![Condition::C1]);
        assert_eq!(region_grid(&p, 101).unwrap().mismatches(&[Condition::C1]), 0);
        // l > 1 - h and R < 0.5: C1 and C4.
        let p = params(0.2, 0.5, 0.6);
        assert_eq!(active_conditions(&p, 1.0), vec![Condition::C1, Condition::C4]);
        let g = region_grid(&p, 101).unwrap();
        assert_eq!(g.mismatches(&[Condition::C1, Condition::C4]), 0);
        assert!(g.mismatches(&[Condition::C1]) > 0);
        // R > 0.5 and l >= 1 - h: C2 alone.
        let p = params(0.7, 0.5, 0.6);
        assert_eq!(active_conditions(&p, 1.0), vec![Condition::C2]);
        // R > 0.5 and l < 1 - h: C2 and C3.
        let p = params(0.7, 0.1, 0.6);
        assert_eq!(active_conditions(&p, 1.0), vec![Condition::C2, Condition::C3]);
        assert_eq!(region_grid(&p, 101).unwrap().mismatches(&[Condition::C2, Condition::C3]), 0);
    }

    #[test]
    fn projection_examples() {
        let anon = EdgeNoiseSpec::new(0.1, 0.2).unwrap();
        let r = projection_rates(0.5, &EdgeNoiseSpec::NONE, &anon).unwrap();
        assert!((r.p_ua_add - 0.1).abs() < 1e-15);
        assert!((r.p_ua_del - 0.2).abs() < 1e-15);
        for p in [0.01, 0.3, 0.99] {
            let r = projection_rates(p, &EdgeNoiseSpec::NONE, &anon).unwrap();
            assert!((r.p_ua_add - 0.1).abs() < 1e-12 && (r.p_ua_del - 0.2).abs() < 1e-12);
        }
        assert!(projection_rates(0.0, &anon, &anon).is_err());
        assert!(projection_rates(1.0, &anon, &anon).is_err());
    }

    /// Conditional probabilities by summing the joint law of
    /// `(e, e_u, e_a)` over all eight states.
    fn projection_by_enumeration(p: f64, aux: &EdgeNoiseSpec, anon: &EdgeNoiseSpec) -> (f64, f64) {
        let flip = |spec: &EdgeNoiseSpec, from: bool, to: bool| {
            let (keep, change) = if from { (1.0 - spec.p_del, spec.p_del) } else { (1.0 - spec.p_add, spec.p_add) };
            if from == to { keep } else { change }
        };
        let mut joint = [[0.0f64; 2]; 2]; // [e_u][e_a]
        for e in [false, true] {
            let pe = if e { p } else { 1.0 - p };
            for eu in [false, true] {
                for ea in [false, true] {
                    joint[eu as usize][ea as usize] += pe * flip(aux, e, eu) * flip(anon, e, ea);
                }
            }
        }
        let add = joint[0][1] / (joint[0][0] + joint[0][1]);
        let del = joint[1][0] / (joint[1][0] + joint[1][1]);
        (add, del)
    }

    proptest! {
        #[test]
        fn projection_matches_enumeration(p in 0.01f64..0.99, a in 0.0f64..0.99, b in 0.0f64..0.99,
                                          c in 0.0f64..0.99, d in 0.0f64..0.99) {
            let aux = EdgeNoiseSpec::new(a, b).unwrap();
            let anon = EdgeNoiseSpec::new(c, d).unwrap();
            let r = projection_rates(p, &aux, &anon).unwrap();
            let (add, del) = projection_by_enumeration(p, &aux, &anon);
            prop_assert!((r.p_ua_add - add).abs() < 1e-12);
            prop_assert!((r.p_ua_del - del).abs() < 1e-12);
        }

        #[test]
        fn exactly_one_regime(r in 0.001f64..0.999, x in 0.001f64..0.998, y in 0.001f64..0.998) {
            let (l, h) = (x.min(y), x.max(y));
            let p = params(r, l, h);
            let regime = classify_regime(&p);
            let lower = 0.5f64.min((1.0 - h) / (1.0 - h + l));
            let upper = 0.5f64.max(l / (1.0 - h + l));
            let hits = [r < lower, lower <= r && r < 0.5, 0.5 <= r && r < upper, r >= upper];
            prop_assert_eq!(hits.iter().filter(|&&b| b).count(), 1);
            let idx = hits.iter().position(|&b| b).unwrap();
            prop_assert_eq!(regime, [Regime::A, Regime::B, Regime::C, Regime::D][idx]);
        }

        #[test]
        fn satisfied_region_is_upward_closed(r in 0.01f64..0.99, x in 0.01f64..0.98, y in 0.01f64..0.98,
                                             ua in 0.0f64..1.0, uu in 0.0f64..1.0,
                                             da in 0.0f64..1.0, du in 0.0f64..1.0) {
            let p = params(r, x.min(y), x.max(y));
            let lo = UtilityPair::new(ua, uu).unwrap();
            let hi = UtilityPair::new(ua + (1.0 - ua) * da, uu + (1.0 - uu) * du).unwrap();
            let a = check_theorem1(&p, &lo);
            if a.all_satisfied {
                prop_assert!(check_theorem1(&p, &hi).all_satisfied);
            }
            prop_assert_eq!(a.all_satisfied, a.c1 && a.c2 && a.c3 && a.c4);
        }

        #[test]
        fn safe_noise_threshold_is_c1_boundary(l in 0.01f64..0.99, frac in 0.0f64..0.99, r in 0.001f64..0.2) {
            let noise_u = frac * l / 2.0;
            let t = max_safe_noise(l, noise_u).unwrap();
            let h = l.clamp(0.5, 0.999);
            let p = params(r, l.min(h), h);
            let below = UtilityPair::new(1.0 - 2.0 * r * t * 0.99, 1.0 - 2.0 * r * noise_u).unwrap();
            let above = UtilityPair::new(1.0 - 2.0 * r * (t * 1.01 + 1e-9), 1.0 - 2.0 * r * noise_u).unwrap();
            prop_assert!(check_theorem1(&p, &below).c1);
            prop_assert!(!check_theorem1(&p, &above).c1);
        }
    }

    #[test]
    fn safe_noise_examples() {
        for l in [0.01, 0.1, 0.5, 0.9, 1.0] {
            assert_eq!(max_safe_noise(l, 0.0).unwrap(), 0.25);
            assert_eq!(max_safe_noise(l, l / 2.0).unwrap(), 0.0);
        }
        assert!((max_safe_noise(0.1, 0.025).unwrap() - 0.125).abs() < 1e-15);
        assert!(max_safe_noise(0.0, 0.0).is_err());
        assert!(max_safe_noise(0.5, -0.1).is_err());
    }
}
