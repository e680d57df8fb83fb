//! printf-style `%.<p>g` formatting for CSV/dump output.

/// Formats `x` like C's `printf("%.{prec}g", x)`.
pub fn fmt_g(x: f64, prec: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let p = prec.max(1);
    // scientific rendering gives the correctly rounded exponent
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::fmt_g;

    #[test]
    fn matches_printf() {
        assert_eq!(fmt_g(0.0, 10), "0");
        assert_eq!(fmt_g(1.0, 10), "1");
        assert_eq!(fmt_g(0.1, 10), "0.1");
        assert_eq!(fmt_g(1.0 / 3.0, 10), "0.3333333333");
        assert_eq!(fmt_g(123456.0, 3), "1.23e+05");
        assert_eq!(fmt_g(1e-5, 10), "1e-05");
        assert_eq!(fmt_g(0.0001234, 10), "0.0001234");
        assert_eq!(fmt_g(-2.5e300, 10), "-2.5e+300");
        assert_eq!(fmt_g(9999999999.5, 10), "1e+10");
        assert_eq!(fmt_g(0.1, 17), "0.10000000000000001");
        assert_eq!(fmt_g(f64::NAN, 10), "nan");
    }

    #[test]
    fn round_trips_at_17_digits() {
        for &x in &[std::f64::consts::PI, 1e-300, 6.02214076e23, -0.0625, 123.456] {
            assert_eq!(fmt_g(x, 17).parse::<f64>().unwrap(), x);
        }
    }
}
