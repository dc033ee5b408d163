//! Seeded invariant groups over the whole stack.
//!
//! Each group draws random inputs from a ChaCha stream and checks a law
//! exactly. [`Fault::CorruptCoefficient`] perturbs one computed coefficient
//! so callers can confirm that a broken expansion is caught.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exact::{int, rat, trig_value, Cyclotomic, CyclotomicField, Rational, Trig};
use crate::modular::{
    eta_product, log_deriv_lambert, theta2_jet, theta2_series, theta2_triple_product, ThetaPoint,
};
use crate::qexp::{lambert, QExpansion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Adds 1 to one coefficient of the η expansion in the pentagonal group.
    CorruptCoefficient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelftestOptions {
    pub seed: u64,
    pub fault: Fault,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions {
            seed: 0x7e7a_2024,
            fault: Fault::None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
    #[serde(rename = "elapsed_ms", serialize_with = "millis")]
    pub elapsed: Duration,
}

fn millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

impl GroupReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Group {
    checks: usize,
    failures: Vec<String>,
}

impl Group {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn check_result<T>(&mut self, r: crate::Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => {
                self.checks += 1;
                Some(v)
            }
            Err(e) => {
                self.checks += 1;
                self.failures.push(format!("{}: {e}", what()));
                None
            }
        }
    }
}

/// Names of the groups, in run order.
pub const GROUPS: [&str; 10] = [
    "ring-laws",
    "q-derivation",
    "scale-q",
    "division",
    "trigonometry",
    "pentagonal",
    "triple-product",
    "parity-shift",
    "heat-equation",
    "lambert",
];

/// Runs every group and returns one report per group.
pub fn run(opts: &SelftestOptions) -> Vec<GroupReport> {
    GROUPS
        .iter()
        .enumerate()
        .map(|(i, &name)| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64));
            let mut g = Group {
                checks: 0,
                failures: Vec::new(),
            };
            let start = Instant::now();
            match name {
                "ring-laws" => ring_laws(&mut g, &mut rng),
                "q-derivation" => q_derivation(&mut g, &mut rng),
                "scale-q" => scale_q(&mut g, &mut rng),
                "division" => division(&mut g, &mut rng),
                "trigonometry" => trigonometry(&mut g, &mut rng),
                "pentagonal" => pentagonal(&mut g, opts.fault),
                "triple-product" => triple_product(&mut g),
                "parity-shift" => parity_shift(&mut g),
                "heat-equation" => heat_equation(&mut g, &mut rng),
                "lambert" => lambert_forms(&mut g, &mut rng),
                _ => unreachable!(),
            }
            GroupReport {
                name,
                checks: g.checks,
                failures: g.failures,
                elapsed: start.elapsed(),
            }
        })
        .collect()
}

// Precision bounds are not additive, so laws are compared below the common
// certified precision.
fn agree<F: crate::exact::Coefficient>(a: &QExpansion<F>, b: &QExpansion<F>) -> bool {
    let p = a.precision().clone().min(b.precision().clone());
    a.equal_to(b, &p).map(|c| c.is_equal()).unwrap_or(false)
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

fn rational_series(rng: &mut ChaCha8Rng, base: Rational, len: usize) -> QExpansion<Rational> {
    let coeffs = (0..len)
        .map(|_| {
            if rng.gen_bool(0.3) {
                int(0)
            } else {
                small_rational(rng)
            }
        })
        .collect();
    let precision = &base + int(len as i64);
    QExpansion::new((), base, coeffs, precision).expect("fits by construction")
}

fn cyclotomic(rng: &mut ChaCha8Rng, field: &std::sync::Arc<CyclotomicField>) -> Cyclotomic {
    let coords: Vec<Rational> = (0..field.degree()).map(|_| small_rational(rng)).collect();
    field
        .from_coords(&coords)
        .expect("degree-sized coordinates")
}

fn cyclotomic_series(
    rng: &mut ChaCha8Rng,
    field: &std::sync::Arc<CyclotomicField>,
    len: usize,
) -> QExpansion<Cyclotomic> {
    let coeffs = (0..len).map(|_| cyclotomic(rng, field)).collect();
    QExpansion::new(field.clone(), int(0), coeffs, int(len as i64)).expect("fits")
}

fn random_series(rng: &mut ChaCha8Rng, len: usize) -> QExpansion<Rational> {
    let base = rat(rng.gen_range(0..=6), [1, 8, 24][rng.gen_range(0..3)]);
    rational_series(rng, base, len)
}

fn ring_laws(g: &mut Group, rng: &mut ChaCha8Rng) {
    for _ in 0..20 {
        let a = random_series(rng, 12);
        let b = random_series(rng, 12);
        let c = random_series(rng, 12);
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        g.check(ab == ba, || format!("commutativity: {a} * {b}"));
        let left = ab.mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        g.check(agree(&left, &right), || "associativity of product".into());
        let same = rational_series(rng, a.base().clone(), 12);
        let lhs = a.add(&same).unwrap().mul(&c).unwrap();
        let rhs = a.mul(&c).unwrap().add(&same.mul(&c).unwrap()).unwrap();
        g.check(agree(&lhs, &rhs), || "distributivity".into());
        g.check(a.add(&a.neg()).unwrap().is_zero(), || {
            "additive inverse".into()
        });
        g.check(a.square() == a.mul(&a).unwrap(), || {
            "square matches product".into()
        });
    }
    for m in [5u64, 8, 12, 15, 20] {
        let field = CyclotomicField::new(m);
        for _ in 0..6 {
            let (x, y, z) = (
                cyclotomic(rng, &field),
                cyclotomic(rng, &field),
                cyclotomic(rng, &field),
            );
            g.check(&(&x * &y) * &z == &x * &(&y * &z), || {
                format!("associativity in Q(zeta{m})")
            });
            g.check(&x * &(&y + &z) == &(&x * &y) + &(&x * &z), || {
                format!("distributivity in Q(zeta{m})")
            });
            if !x.is_zero() {
                let inv = x.inverse().unwrap();
                g.check((&x * &inv) == field.one(), || format!("inverse of {x}"));
            }
        }
        let a = cyclotomic_series(rng, &field, 8);
        let b = cyclotomic_series(rng, &field, 8);
        g.check(a.mul(&b).unwrap() == b.mul(&a).unwrap(), || {
            format!("series commutativity in Q(zeta{m})")
        });
    }
}

fn q_derivation(g: &mut Group, rng: &mut ChaCha8Rng) {
    for _ in 0..20 {
        let a = random_series(rng, 12);
        let b = random_series(rng, 12);
        let lhs = a.mul(&b).unwrap().q_ddq();
        let rhs = a
            .q_ddq()
            .mul(&b)
            .unwrap()
            .add(&a.mul(&b.q_ddq()).unwrap())
            .unwrap();
        g.check(agree(&lhs, &rhs), || {
            format!("Leibniz rule for {a} and {b}")
        });
    }
}

fn scale_q(g: &mut Group, rng: &mut ChaCha8Rng) {
    for _ in 0..20 {
        let s = rng.gen_range(1..=5);
        let a = random_series(rng, 10);
        let b = random_series(rng, 10);
        let lhs = a.mul(&b).unwrap().scale_q(s);
        let rhs = a.scale_q(s).mul(&b.scale_q(s)).unwrap();
        g.check(agree(&lhs, &rhs), || format!("q -> q^{s} on a product"));
        let c = rational_series(rng, a.base().clone(), 10);
        let lhs = a.add(&c).unwrap().scale_q(s);
        let rhs = a.scale_q(s).add(&c.scale_q(s)).unwrap();
        g.check(agree(&lhs, &rhs), || format!("q -> q^{s} on a sum"));
    }
}

fn division(g: &mut Group, rng: &mut ChaCha8Rng) {
    for _ in 0..20 {
        let a = random_series(rng, 12);
        let mut b = random_series(rng, 12);
        if b.is_zero() {
            b = QExpansion::one((), int(12));
        }
        let Some(quot) = g.check_result(a.div(&b), || "division".into()) else {
            continue;
        };
        g.check(agree(&quot.mul(&b).unwrap(), &a), || {
            format!("({a}) / ({b}) times divisor")
        });
    }
    let field = CyclotomicField::new(12);
    let a = cyclotomic_series(rng, &field, 8);
    let b = QExpansion::one(field.clone(), int(8))
        .add(
            &cyclotomic_series(rng, &field, 8)
                .mul(&QExpansion::monomial(field.one(), int(1), int(8)))
                .unwrap(),
        )
        .unwrap();
    let quot = a.div(&b).unwrap();
    g.check(agree(&quot.mul(&b).unwrap(), &a), || {
        "cyclotomic division".into()
    });
}

fn trigonometry(g: &mut Group, rng: &mut ChaCha8Rng) {
    for _ in 0..40 {
        let q = rng.gen_range(1..=30u64);
        let p = rng.gen_range(-(2 * q as i64)..(2 * q as i64));
        let s = trig_value(Trig::Sin, p, q).unwrap();
        let c = trig_value(Trig::Cos, p, q).unwrap();
        let one = &(&s * &s) + &(&c * &c);
        g.check(one.to_rational() == Some(int(1)), || {
            format!("sin^2 + cos^2 at {p}pi/{q}")
        });
        g.check(s.is_real() && c.is_real(), || {
            format!("real sin and cos at {p}pi/{q}")
        });
        match trig_value(Trig::Tan, p, q) {
            Ok(t) => g.check(&t * &c == s, || format!("tan * cos = sin at {p}pi/{q}")),
            Err(_) => g.check(c.is_zero(), || format!("spurious pole at {p}pi/{q}")),
        }
    }
}

fn pentagonal(g: &mut Group, fault: Fault) {
    let order = 200u64;
    let mut eta = eta_product(1, order);
    if fault == Fault::CorruptCoefficient {
        let mut coeffs = eta.coeffs().to_vec();
        coeffs[7] = &coeffs[7] + int(1);
        eta = QExpansion::new((), eta.base().clone(), coeffs, eta.precision().clone()).unwrap();
    }
    let mut coeffs = vec![int(0); order as usize];
    for j in -20i64..=20 {
        let e = j * (3 * j - 1) / 2;
        if (0..order as i64).contains(&e) {
            coeffs[e as usize] = int(if j % 2 == 0 { 1 } else { -1 });
        }
    }
    let base = rat(1, 24);
    let precision = &base + int(order as i64);
    let sparse = QExpansion::new((), base, coeffs, precision.clone()).unwrap();
    let m = eta.equal_to(&sparse, &precision).unwrap();
    g.check(m.is_equal(), || {
        let m = m.mismatch().unwrap();
        format!("eta at q^{}: {} vs {}", m.exponent, m.lhs, m.rhs)
    });
}

fn triple_product(g: &mut Group) {
    for k in 1..=8u64 {
        for l in 0..2 * k as i64 {
            let pt = ThetaPoint::at(l, 2 * k);
            let a = theta2_series(&pt, 60);
            let b = theta2_triple_product(&pt, 60);
            let ok = a.equal_to(&b, &(rat(1, 8) + int(60))).map(|c| c.is_equal());
            g.check(ok == Ok(true), || {
                format!("triple product at {l}pi/{}", 2 * k)
            });
        }
    }
}

fn parity_shift(g: &mut Group) {
    for k in 1..=6u64 {
        for l in 0..2 * k as i64 {
            let m = 4 * k;
            let plus = theta2_jet(&ThetaPoint::new(l, 2 * k, 1, m).unwrap(), 3, 30);
            let minus = theta2_jet(&ThetaPoint::new(-l, 2 * k, 1, m).unwrap(), 3, 30);
            for j in 0..=3 {
                let expect = if j % 2 == 0 {
                    plus.coeff(j).clone()
                } else {
                    plus.coeff(j).neg()
                };
                g.check(minus.coeff(j) == &expect, || {
                    format!("parity at {l}pi/{}, slot {j}", 2 * k)
                });
            }
            let shifted =
                theta2_series(&ThetaPoint::new(l + 2 * k as i64, 2 * k, 1, m).unwrap(), 30);
            g.check(shifted == plus.coeff(0).neg(), || {
                format!("pi shift at {l}pi/{}", 2 * k)
            });
        }
    }
}

fn heat_equation(g: &mut Group, rng: &mut ChaCha8Rng) {
    for _ in 0..12 {
        let den = rng.gen_range(1..=12u64);
        let num = rng.gen_range(-(2 * den as i64)..(2 * den as i64));
        let s = rng.gen_range(1..=3u64);
        let pt = ThetaPoint::at(num, den).with_q_power(s).unwrap();
        let f = theta2_jet(&pt, 4, 30);
        let heat = f
            .q_ddq()
            .scale(&int(8))
            .truncate_degree(2)
            .add(&f.d_dz().unwrap().d_dz().unwrap().scale(&int(s as i64)))
            .unwrap();
        // at q^s the weights are s(2n+1)²/8 against (2n+1)²
        g.check(heat.is_zero(), || format!("heat equation at {pt}"));
    }
}

fn lambert_forms(g: &mut Group, rng: &mut ChaCha8Rng) {
    for _ in 0..10 {
        let b = rng.gen_range(1..=8u64);
        let a = rng.gen_range(1..=b);
        let order = 60u64;
        let series = lambert(a, b, order);
        let mut coeffs = vec![int(0); order as usize];
        let mut d = a;
        while d < order {
            for n in 1..order {
                let e = d * n;
                if e >= order {
                    break;
                }
                coeffs[e as usize] = &coeffs[e as usize] + int(1);
            }
            d += b;
        }
        let oracle = QExpansion::new((), int(0), coeffs, int(order as i64)).unwrap();
        g.check(series == oracle, || format!("lambert({a}, {b}) double sum"));
    }
    for k in 1..=6u64 {
        for l in (0..2 * k as i64).filter(|&l| l != k as i64) {
            let s = log_deriv_lambert(l, k, 20).unwrap();
            g.check(s.coeffs().iter().all(Cyclotomic::is_real), || {
                format!("real coefficients at {l}pi/{}", 2 * k)
            });
        }
    }
    g.check(log_deriv_lambert(0, 5, 20).unwrap().is_zero(), || {
        "odd function vanishes at 0".into()
    });
}
