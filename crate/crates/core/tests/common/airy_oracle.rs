//! Fixed-point Maclaurin evaluation of Ai and Bi with 150 decimal digits.
//! Slow but independent of the floating-point implementation under test.

use num_bigint::BigInt;

const DIGITS: u32 = 150;
const C1: &str = "0.35502805388781723926006318600418317639797917419917724058332651030081004245012671295717424605404027168842";
const C2: &str = "0.258819403792806798405183560189203963479091138354934582210001813856102772676790280654196405827275384313371";
const SQRT3: &str = "1.73205080756887729352744634150587236694280525381038062805580697945193301690880003708114618675724857567563";

fn scale() -> BigInt {
    BigInt::from(10u32).pow(DIGITS)
}

fn parse_fixed(s: &str) -> BigInt {
    let (int, frac) = s.split_once('.').unwrap();
    let mut digits = format!("{int}{frac}");
    let exp = DIGITS as usize - frac.len();
    digits.extend(std::iter::repeat('0').take(exp));
    digits.parse().unwrap()
}

/// Exact dyadic value of `x` in fixed point.
fn from_f64(x: f64) -> BigInt {
    let bits = x.abs();
    let mut m = bits;
    let mut e = 0i32;
    while m.fract() != 0.0 {
        m *= 2.0;
        e += 1;
    }
    let mant = BigInt::from(m as u128);
    let v = mant * scale() / (BigInt::from(2u32).pow(e as u32));
    if x < 0.0 {
        -v
    } else {
        v
    }
}

fn to_f64(v: &BigInt) -> f64 {
    format!("{v}e-{DIGITS}").parse().unwrap()
}

/// `(Ai(x), Bi(x))` from the Maclaurin series in 150-digit fixed point.
pub fn airy_oracle(x: f64) -> (f64, f64) {
    let s = scale();
    let s3 = &s * &s * &s;
    let xf = from_f64(x);
    let x3 = &xf * &xf * &xf;
    let mut f = s.clone();
    let mut g = xf.clone();
    let mut tf = s.clone();
    let mut tg = xf.clone();
    for k in 1u64.. {
        tf = &tf * &x3 / &s3 / BigInt::from((3 * k - 1) * 3 * k);
        tg = &tg * &x3 / &s3 / BigInt::from(3 * k * (3 * k + 1));
        f += &tf;
        g += &tg;
        if tf == BigInt::from(0) && tg == BigInt::from(0) {
            break;
        }
    }
    let c1 = parse_fixed(C1);
    let c2 = parse_fixed(C2);
    let r3 = parse_fixed(SQRT3);
    let ai = (&c1 * &f - &c2 * &g) / &s;
    let bi = &r3 * ((&c1 * &f + &c2 * &g) / &s) / &s;
    (to_f64(&ai), to_f64(&bi))
}
