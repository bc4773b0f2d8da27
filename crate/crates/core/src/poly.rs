//! Real roots of real polynomials by critical-point isolation. Signs are
//! evaluated in double-double arithmetic so that close root pairs separate.

/// Unevaluated sum hi + lo with |lo| <= ulp(hi) / 2.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

#[allow(clippy::should_implement_trait)]
impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        quick_two_sum(s, e + self.lo + o.lo)
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        quick_two_sum(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    pub fn scale(self, k: f64) -> Dd {
        self.mul(Dd::new(k))
    }
}

/// Horner evaluation of p and p'; coefficients are ordered from the highest
/// degree down.
pub fn eval_with_derivative(coeffs: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

pub fn eval(coeffs: &[f64], x: f64) -> f64 {
    eval_with_derivative(coeffs, x).0
}

/// p(x), p'(x), p''(x)/2 in double-double.
pub fn taylor_dd(coeffs: &[Dd], x: f64) -> (f64, f64, f64) {
    let xd = Dd::new(x);
    let (mut p, mut d1, mut d2) = (Dd::ZERO, Dd::ZERO, Dd::ZERO);
    for &c in coeffs {
        d2 = d2.mul(xd).add(d1);
        d1 = d1.mul(xd).add(p);
        p = p.mul(xd).add(c);
    }
    (p.to_f64(), d1.to_f64(), d2.to_f64())
}

/// Real nonzero roots, ascending. Zero roots (trailing zero coefficients) are
/// stripped, which is what the callers need since z = 0 is excluded.
pub fn real_nonzero_roots(coeffs: &[f64]) -> Vec<f64> {
    let dd: Vec<Dd> = coeffs.iter().map(|c| Dd::new(*c)).collect();
    real_nonzero_roots_dd(&dd)
}

pub fn real_nonzero_roots_dd(coeffs: &[Dd]) -> Vec<f64> {
    let mut c: Vec<Dd> = coeffs.to_vec();
    while c.first().is_some_and(|x| x.to_f64() == 0.0) {
        c.remove(0);
    }
    while c.last().is_some_and(|x| x.to_f64() == 0.0) {
        c.pop();
    }
    let mut out = real_roots(&c);
    out.retain(|x| *x != 0.0);
    out
}

fn derivative(c: &[Dd]) -> Vec<Dd> {
    let n = c.len() - 1;
    c[..n].iter().enumerate().map(|(i, ci)| ci.scale((n - i) as f64)).collect()
}

/// All real roots by isolation: between consecutive real critical points the
/// polynomial is monotone, so each interval holds at most one root.
fn real_roots(c: &[Dd]) -> Vec<f64> {
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![-c[1].to_f64() / c[0].to_f64()];
    }
    let lead = c[0].to_f64().abs();
    let bound = 1.0 + c[1..].iter().fold(0.0f64, |acc, x| acc.max(x.to_f64().abs() / lead));
    let mut knots = vec![-bound];
    knots.extend(real_roots(&derivative(c)).into_iter().filter(|x| x.abs() < bound));
    knots.push(bound);
    let mut out: Vec<f64> = Vec::new();
    for w in knots.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if !(hi > lo) {
            continue;
        }
        let (plo, phi) = (value_or_zero(c, lo), value_or_zero(c, hi));
        if plo == 0.0 {
            if out.last() != Some(&lo) {
                out.push(lo);
            }
            continue;
        }
        if phi == 0.0 {
            out.push(hi);
            continue;
        }
        if (plo < 0.0) != (phi < 0.0) {
            out.push(bracketed(c, lo, hi, plo < 0.0));
        }
    }
    out
}

/// p(x), flushed to zero when it is below the rounding level of the
/// double-double evaluation. This keeps exact double roots (common on the
/// boundary curves) from turning into a complex pair.
fn value_or_zero(c: &[Dd], x: f64) -> f64 {
    let p = taylor_dd(c, x).0;
    let mag = c.iter().fold(0.0f64, |acc, ci| acc * x.abs() + ci.to_f64().abs());
    if p.abs() <= 1e-28 * mag {
        0.0
    } else {
        p
    }
}

/// Root of a monotone stretch [lo, hi] with p(lo) of sign `neg_at_lo`.
/// Newton steps are taken when they stay inside the bracket; otherwise the
/// bracket is halved, geometrically when it spans several orders of magnitude.
fn bracketed(c: &[Dd], mut lo: f64, mut hi: f64, neg_at_lo: bool) -> f64 {
    let mut x = 0.5 * (lo + hi);
    for _ in 0..400 {
        let (p, dp, _) = taylor_dd(c, x);
        if p == 0.0 {
            return x;
        }
        if (p < 0.0) == neg_at_lo {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - p / dp;
        let next = if dp != 0.0 && newton > lo && newton < hi {
            newton
        } else if lo > 0.0 && hi > 4.0 * lo {
            (lo * hi).sqrt()
        } else if hi < 0.0 && lo < 4.0 * hi {
            -(lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if next == x || next <= lo || next >= hi {
            // the bracket is down to adjacent doubles
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                let (pl, ph) = (taylor_dd(c, lo).0.abs(), taylor_dd(c, hi).0.abs());
                return if pl <= ph { lo } else { hi };
            }
            x = mid;
            continue;
        }
        x = next;
    }
    x
}
