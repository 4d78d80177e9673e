//! Seeded streams of test functions.
//!
//! * `lipschitz`: piecewise-linear and smooth bounded-slope scale functions
//!   times random interval constants, plus explicit `lower`/`upper` pairs.
//! * `convex_lipschitz`: nonnegative max-of-affine (optionally plus a
//!   hyperbolic `√(1+t²)` term) scale functions times `C ⪰ 0`.
//! * `sublinear`: norm-like scale functions times `C` with a positive upper
//!   endpoint, on origin-symmetric boxes.
//! * `pathological`: removable-discontinuity and quadrant-blow-up templates;
//!   element 0 is the fixed quadrant instance with `C = [3,8]`.
//!
//! Members depend only on `(kind, seed, index)`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::expr::{CmpOp, Expr, Predicate};
use crate::interval::Interval;
use crate::ivf::{DomainBox, Form, Ivf};
use crate::sampling::stream_rng;

/// Half-width of the boxes used by the smooth families.
pub const FAMILY_RADIUS: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Lipschitz,
    ConvexLipschitz,
    Sublinear,
    Pathological,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Lipschitz => "lipschitz",
            FamilyKind::ConvexLipschitz => "convex_lipschitz",
            FamilyKind::Sublinear => "sublinear",
            FamilyKind::Pathological => "pathological",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            FamilyKind::Lipschitz,
            FamilyKind::ConvexLipschitz,
            FamilyKind::Sublinear,
            FamilyKind::Pathological,
        ]
        .into_iter()
        .find(|k| k.name() == s.replace('-', "_"))
        .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

/// Infinite deterministic stream of IVFs of one kind.
#[derive(Clone, Debug)]
pub struct Family {
    kind: FamilyKind,
    seed: u64,
    index: u64,
}

impl Iterator for Family {
    type Item = Ivf;
    fn next(&mut self) -> Option<Ivf> {
        let f = family_member(self.kind, self.seed, self.index);
        self.index += 1;
        Some(f)
    }
}

pub fn generator_family(kind: FamilyKind, seed: u64) -> Family {
    Family { kind, seed, index: 0 }
}

/// The `index`-th member of a family.
pub fn family_member(kind: FamilyKind, seed: u64, index: u64) -> Ivf {
    let stream = index.wrapping_mul(4).wrapping_add(kind as u64);
    let mut rng = stream_rng(seed, stream);
    match kind {
        FamilyKind::Lipschitz => lipschitz(&mut rng),
        FamilyKind::ConvexLipschitz => convex_lipschitz(&mut rng),
        FamilyKind::Sublinear => sublinear(&mut rng),
        FamilyKind::Pathological => pathological(&mut rng, index),
    }
}

/// Uniform in `[lo, hi)`, rounded to two decimals so members print compactly.
fn coef(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let v = rng.random_range(lo..hi);
    let r = (v * 100.0).round() / 100.0;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn affine(rng: &mut ChaCha8Rng, n: usize, slope: f64) -> Expr {
    let a: Vec<f64> = (0..n).map(|_| coef(rng, -slope, slope)).collect();
    Expr::Dot(a) + coef(rng, -1.0, 1.0)
}

fn interval(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).expect("ordered constants")
}

fn random_c(rng: &mut ChaCha8Rng, lo_min: f64, lo_max: f64) -> Interval {
    let lo = coef(rng, lo_min, lo_max);
    interval(lo, lo + coef(rng, 0.0, 3.0))
}

fn dims(rng: &mut ChaCha8Rng) -> usize {
    if rng.random::<bool>() {
        2
    } else {
        1
    }
}

fn pick_var(rng: &mut ChaCha8Rng, n: usize) -> Expr {
    Expr::var(rng.random_range(0..n))
}

fn lipschitz_scale(rng: &mut ChaCha8Rng, n: usize, template: u32) -> Expr {
    match template {
        0 => {
            let kink = (pick_var(rng, n) - coef(rng, -1.0, 1.0)).abs() * coef(rng, -1.0, 1.0);
            let hinge = (pick_var(rng, n) - coef(rng, -1.0, 1.0)).max(Expr::c(0.0)) * coef(rng, -1.0, 1.0);
            affine(rng, n, 1.0) + kink + hinge
        }
        1 => {
            let wave = (pick_var(rng, n) * coef(rng, 0.5, 2.0)).sin() * coef(rng, -1.0, 1.0);
            wave + pick_var(rng, n) * coef(rng, -1.0, 1.0)
        }
        _ => {
            let t = affine(rng, n, 1.0);
            (1.0 + t.clone() * t).sqrt() * coef(rng, -1.0, 1.0) + pick_var(rng, n).cos() * coef(rng, -1.0, 1.0)
        }
    }
}

fn lipschitz(rng: &mut ChaCha8Rng) -> Ivf {
    let n = dims(rng);
    let dom = DomainBox::symmetric(n, FAMILY_RADIUS);
    let template = rng.random_range(0..4u32);
    if template == 3 {
        let mid = lipschitz_scale(rng, n, 0);
        let wave = pick_var(rng, n).sin();
        let width = coef(rng, 0.1, 1.0) + coef(rng, 0.0, 0.5) * wave.clone() * wave;
        return Ivf::bounds(dom, mid.clone() - width.clone(), mid + width).expect("width is positive");
    }
    let scale = lipschitz_scale(rng, n, template);
    let c = random_c(rng, -3.0, 3.0);
    Ivf::scale_form(scale, c, dom).expect("scale forms are always ordered")
}

fn convex_lipschitz(rng: &mut ChaCha8Rng) -> Ivf {
    let n = dims(rng);
    let pieces = rng.random_range(1..=3);
    let mut g = Expr::c(0.0);
    for _ in 0..pieces {
        g = g.max(affine(rng, n, 1.5));
    }
    if rng.random::<bool>() {
        let t = affine(rng, n, 1.0);
        g = g + (1.0 + t.clone() * t).sqrt() * coef(rng, 0.0, 1.0);
    }
    let c = random_c(rng, 0.0, 2.0);
    Ivf::scale_form(g, c, DomainBox::symmetric(n, FAMILY_RADIUS)).expect("scale forms are always ordered")
}

fn sublinear(rng: &mut ChaCha8Rng) -> Ivf {
    let n = dims(rng);
    let x1 = Expr::var(0);
    let g = match (n, rng.random_range(0..4u32)) {
        (1, _) | (_, 0) => x1.abs() * coef(rng, 0.2, 2.0),
        (_, 1) => {
            let (a, b, c) = (coef(rng, -1.0, 1.0), coef(rng, -1.0, 1.0), coef(rng, -1.0, 1.0));
            // AᵀA + I/2 with A = [[a, b], [0, c]]
            let q = vec![vec![a * a + 0.5, a * b], vec![a * b, b * b + c * c + 0.5]];
            Expr::quad(&q).sqrt()
        }
        (_, 2) => x1.abs() * coef(rng, 0.2, 2.0) + Expr::var(1).abs() * coef(rng, 0.2, 2.0),
        _ => x1.abs().max(Expr::var(1).abs() * coef(rng, 0.2, 2.0)),
    };
    let hi = coef(rng, 0.2, 3.0);
    let lo = coef(rng, -3.0, hi);
    Ivf::scale_form(g, interval(lo, hi), DomainBox::symmetric(n, FAMILY_RADIUS))
        .expect("scale forms are always ordered")
}

/// `F(x) = x₁²(1 + 1/x₂) ⊙ C` on `[-1,1] × [0,1]`, zero at the origin.
pub fn quadrant_blowup(coefficient: f64, c: Interval) -> Ivf {
    let (x1, x2) = (Expr::var(0), Expr::var(1));
    let dom = DomainBox::new(vec![(-1.0, 1.0), (0.0, 1.0)]).expect("fixed box");
    let scale = if coefficient == 1.0 {
        x1.pow(Expr::c(2.0)) * (1.0 + 1.0 / x2.clone())
    } else {
        x1.pow(Expr::c(2.0)) * (1.0 + 1.0 / x2.clone()) * coefficient
    };
    let origin = Predicate::cmp(Expr::var(0), CmpOp::Eq, 0.0).and(Predicate::cmp(x2.clone(), CmpOp::Eq, 0.0));
    Ivf::new(
        dom,
        Some(Predicate::cmp(x2, CmpOp::Ge, 0.0)),
        vec![crate::ivf::Branch {
            when: origin,
            form: Form::Bounds {
                lower: Expr::c(0.0),
                upper: Expr::c(0.0),
            },
        }],
        Form::Scale { scale, c },
    )
    .expect("scale forms are always ordered")
}

/// `F(x) = (sin²x / x) ⊙ C` on `[-1,1]`, with `F(0) = k ⊙ C`.
pub fn removable_jump(k: f64, c: Interval) -> Ivf {
    let x = Expr::var(0);
    Ivf::new(
        DomainBox::symmetric(1, 1.0),
        None,
        vec![crate::ivf::Branch {
            when: Predicate::cmp(x.clone(), CmpOp::Eq, 0.0),
            form: Form::Scale { scale: Expr::c(k), c },
        }],
        Form::Scale {
            scale: x.clone().sin().pow(Expr::c(2.0)) / x,
            c,
        },
    )
    .expect("scale forms are always ordered")
}

fn pathological(rng: &mut ChaCha8Rng, index: u64) -> Ivf {
    if index == 0 {
        return quadrant_blowup(1.0, interval(3.0, 8.0));
    }
    if index % 2 == 1 {
        let c = random_c(rng, 0.5, 2.0);
        removable_jump(coef(rng, 2.0, 8.0), c)
    } else {
        let c = random_c(rng, 0.5, 4.0);
        quadrant_blowup(coef(rng, 0.5, 2.0), c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ivf::IntervalFn;

    #[test]
    fn streams_are_deterministic() {
        for kind in [
            FamilyKind::Lipschitz,
            FamilyKind::ConvexLipschitz,
            FamilyKind::Sublinear,
            FamilyKind::Pathological,
        ] {
            let a: Vec<Ivf> = generator_family(kind, 1).take(12).collect();
            let b: Vec<Ivf> = generator_family(kind, 1).take(12).collect();
            assert_eq!(a, b);
            let c: Vec<Ivf> = generator_family(kind, 2).take(12).collect();
            assert_ne!(a, c);
        }
    }

    #[test]
    fn members_round_trip_through_text() {
        for kind in [FamilyKind::Lipschitz, FamilyKind::Sublinear, FamilyKind::Pathological] {
            for f in generator_family(kind, 5).take(10) {
                let again = crate::parse::parse_ivf(&f.to_string()).unwrap();
                assert_eq!(again, f, "{f}");
            }
        }
    }

    #[test]
    fn pathological_head_is_the_quadrant_instance() {
        let f = generator_family(FamilyKind::Pathological, 99).next().unwrap();
        assert_eq!(f.eval(&[1.0, 1.0]).unwrap(), interval(6.0, 16.0));
        assert_eq!(f.eval(&[0.0, 0.0]).unwrap(), Interval::ZERO);
        assert!(!f.admits(&[0.5, -0.1]));
    }

    #[test]
    fn kind_names() {
        assert_eq!("convex-lipschitz".parse::<FamilyKind>(), Ok(FamilyKind::ConvexLipschitz));
        assert!("nope".parse::<FamilyKind>().is_err());
    }
}
