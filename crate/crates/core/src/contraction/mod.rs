//! Radii polynomials: turning bounds on a Newton-like operator into a proof.
//!
//! For an operator `T` with `‖T(x̄) - x̄‖ <= Y` and
//! `‖DT(x)‖ <= Z0 + Z1 + Z2 r + Z3 r²/2 + Z4 r³/6` on the ball of radius `r`,
//! `T` has a unique fixed point in `B(x̄, r)` whenever
//!
//! ```text
//! P(r) = Z4/24 r⁴ + Z3/6 r³ + Z2/2 r² - (1 - Z1 - Z0) r + Y < 0
//! Q(r) = Z4/6 r³ + Z3/2 r² + Z2 r - (1 - Z1 - Z0)         < 0
//! ```
//!
//! Since `Q = P'` and `Q` is increasing, the admissible radii form the
//! interval `(r_min, r_max)` between the first root of `P` and the root of `Q`.
//! For product spaces the conditions are imposed per component and the
//! windows intersected.

use serde::{Deserialize, Serialize};

use crate::interval::{hex_f64, Interval};

/// Upper bounds entering the radii polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiiBounds {
    pub y: Interval,
    pub z0: Interval,
    pub z1: Interval,
    pub z2: Interval,
    pub z3: Interval,
    pub z4: Interval,
}

impl RadiiBounds {
    pub fn new(y: f64, z1: f64, z2: f64, z3: f64, z4: f64) -> Self {
        let p = Interval::point;
        RadiiBounds {
            y: p(y),
            z0: Interval::ZERO,
            z1: p(z1),
            z2: p(z2),
            z3: p(z3),
            z4: p(z4),
        }
    }

    pub fn with_z0(mut self, z0: Interval) -> Self {
        self.z0 = z0;
        self
    }

    /// Bounds are used through their upper endpoints only.
    fn upper(&self) -> [Interval; 6] {
        let u = |v: Interval| Interval::point(v.hi());
        [u(self.y), u(self.z0), u(self.z1), u(self.z2), u(self.z3), u(self.z4)]
    }

    fn is_valid(&self) -> bool {
        self.upper().iter().all(|v| v.is_finite() && v.hi() >= 0.0)
    }
}

/// Interval coefficients of `P` (degree 4) and `Q` (degree 3), lowest first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiiPolynomials {
    pub p: [Interval; 5],
    pub q: [Interval; 4],
}

pub fn radii_polynomials(b: &RadiiBounds) -> RadiiPolynomials {
    let [y, z0, z1, z2, z3, z4] = b.upper();
    let lin = -(Interval::ONE - z1 - z0);
    let half = Interval::point(0.5);
    let sixth = Interval::ONE.div(Interval::point(6.0)).unwrap();
    let twentyfourth = Interval::ONE.div(Interval::point(24.0)).unwrap();
    RadiiPolynomials {
        p: [y, lin, z2 * half, z3 * sixth, z4 * twentyfourth],
        q: [lin, z2, z3 * half, z4 * sixth],
    }
}

fn horner(c: &[Interval], r: f64) -> Interval {
    let r = Interval::point(r);
    c.iter().rev().fold(Interval::ZERO, |acc, &a| acc * r + a)
}

impl RadiiPolynomials {
    pub fn eval_p(&self, r: f64) -> Interval {
        horner(&self.p, r)
    }

    pub fn eval_q(&self, r: f64) -> Interval {
        horner(&self.q, r)
    }
}

/// Admissible radius window of one component.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub r_min: Interval,
    pub r_max: Interval,
}

/// Outcome of a radii-polynomial certification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationCertificate {
    pub success: bool,
    /// Chosen radius; `P(r) < 0` and `Q(r) < 0` hold there in every component.
    #[serde(with = "hex_f64")]
    pub radius: f64,
    pub r_min: Interval,
    pub r_max: Interval,
    pub windows: Vec<Window>,
    pub bounds: Vec<RadiiBounds>,
    pub diagnostic: Option<String>,
}

impl ValidationCertificate {
    fn failure(bounds: &[RadiiBounds], windows: Vec<Window>, msg: String) -> Self {
        ValidationCertificate {
            success: false,
            radius: f64::NAN,
            r_min: Interval::ENTIRE,
            r_max: Interval::ENTIRE,
            windows,
            bounds: bounds.to_vec(),
            diagnostic: Some(msg),
        }
    }

    /// Re-evaluate the radii polynomials of the stored bounds at the stored radius.
    pub fn reverify(&self) -> bool {
        self.success
            && self.radius > 0.0
            && self.bounds.iter().all(|b| {
                let pq = radii_polynomials(b);
                pq.eval_p(self.radius).hi() < 0.0 && pq.eval_q(self.radius).hi() < 0.0
            })
    }
}

/// Midpoint in the ordering of nonnegative doubles; bisecting on it reaches
/// neighbouring doubles in at most 64 steps at any scale.
fn bit_mid(a: f64, b: f64) -> f64 {
    f64::from_bits((a.to_bits() / 2) + (b.to_bits() / 2) + (a.to_bits() & b.to_bits() & 1))
}

const MAX_BISECTIONS: usize = 128;

/// Shrink `[a, b]` around the root of `Q`, with `Q(a) < 0 < Q(b)` certified.
fn bracket_q_root(pq: &RadiiPolynomials, mut a: f64, mut b: f64) -> (f64, f64) {
    for _ in 0..MAX_BISECTIONS {
        let c = bit_mid(a, b);
        if c <= a || c >= b {
            break;
        }
        let v = pq.eval_q(c);
        if v.hi() < 0.0 {
            a = c;
        } else if v.lo() > 0.0 {
            b = c;
        } else {
            break;
        }
    }
    (a, b)
}

/// Shrink `[a, b]` around the first root of `P`, with `P(b) < 0` certified
/// and `P > 0` on `[0, a]` (or `a = 0`).
fn bracket_p_root(pq: &RadiiPolynomials, mut a: f64, mut b: f64) -> (f64, f64) {
    for _ in 0..MAX_BISECTIONS {
        let c = bit_mid(a, b);
        if c <= a || c >= b {
            break;
        }
        let v = pq.eval_p(c);
        if v.hi() < 0.0 {
            b = c;
        } else if v.lo() > 0.0 {
            a = c;
        } else {
            break;
        }
    }
    (a, b)
}

/// Certify a single set of bounds.
pub fn certify(b: &RadiiBounds) -> ValidationCertificate {
    certify_componentwise(std::slice::from_ref(b))
}

/// Certify with `Z3 = Z4 = 0` and radii restricted to `r <= r_star`,
/// the setting of a Newton operator whose `Z2` was bounded on `B(x̄, r_star)`.
pub fn certify_affine(y: Interval, z1: Interval, z2: Interval, r_star: f64) -> ValidationCertificate {
    let b = RadiiBounds {
        y,
        z0: Interval::ZERO,
        z1,
        z2,
        z3: Interval::ZERO,
        z4: Interval::ZERO,
    };
    certify_capped(std::slice::from_ref(&b), Some(r_star))
}

/// Common radius for a product of components: `max r_min < min r_max`.
pub fn certify_componentwise(bs: &[RadiiBounds]) -> ValidationCertificate {
    certify_capped(bs, None)
}

fn certify_capped(bs: &[RadiiBounds], cap: Option<f64>) -> ValidationCertificate {
    if bs.is_empty() {
        return ValidationCertificate::failure(bs, vec![], "no bounds given".into());
    }
    if let Some((m, _)) = bs.iter().enumerate().find(|(_, b)| !b.is_valid()) {
        return ValidationCertificate::failure(
            bs,
            vec![],
            format!("component {m}: bounds are not finite nonnegative numbers"),
        );
    }
    let polys: Vec<RadiiPolynomials> = bs.iter().map(radii_polynomials).collect();
    let y_max = bs.iter().map(|b| b.y.hi()).fold(0.0, f64::max);
    let upper = (y_max + 1.0) * 1e3;

    // Root of Q per component.
    let mut q_roots = Vec::with_capacity(bs.len());
    for (m, pq) in polys.iter().enumerate() {
        if !(pq.q[0].hi() < 0.0) {
            return ValidationCertificate::failure(
                bs,
                vec![],
                format!(
                    "component {m}: Z0 + Z1 = {:e} is not below 1",
                    (bs[m].z0 + bs[m].z1).hi()
                ),
            );
        }
        let (c, d) = if pq.eval_q(upper).lo() > 0.0 {
            bracket_q_root(pq, 0.0, upper)
        } else {
            (upper, f64::INFINITY)
        };
        q_roots.push((c, d));
    }
    let mut r_max_lo = q_roots.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    if let Some(cap) = cap {
        r_max_lo = r_max_lo.min(cap);
    }

    // First root of P per component, below the common upper end.
    let mut windows = Vec::with_capacity(bs.len());
    let mut failures = Vec::new();
    for (m, pq) in polys.iter().enumerate() {
        let at_top = pq.eval_p(r_max_lo);
        let r_max = Interval::new(q_roots[m].0, q_roots[m].1);
        if at_top.hi() < 0.0 {
            let (a, b) = bracket_p_root(pq, 0.0, r_max_lo);
            windows.push(Window {
                r_min: Interval::new(a, b),
                r_max,
            });
        } else {
            windows.push(Window {
                r_min: Interval::ENTIRE,
                r_max,
            });
            failures.push(format!(
                "component {m}: P({r_max_lo:e}) = {at_top} is not negative"
            ));
        }
    }
    if !failures.is_empty() {
        return ValidationCertificate::failure(bs, windows, failures.join("; "));
    }
    let r_min = windows
        .iter()
        .map(|w| w.r_min)
        .fold(Interval::ZERO, Interval::max);
    let radius = r_min.hi();
    let ok = radius > 0.0
        && radius <= r_max_lo
        && polys
            .iter()
            .all(|pq| pq.eval_p(radius).hi() < 0.0 && pq.eval_q(radius).hi() < 0.0);
    let r_max = Interval::new(
        r_max_lo,
        q_roots.iter().map(|r| r.1).fold(f64::INFINITY, f64::min),
    );
    if !ok {
        return ValidationCertificate::failure(
            bs,
            windows,
            format!("no common radius: max r_min = {r_min}, min r_max = {r_max}"),
        );
    }
    ValidationCertificate {
        success: true,
        radius,
        r_min,
        r_max,
        windows,
        bounds: bs.to_vec(),
        diagnostic: None,
    }
}
