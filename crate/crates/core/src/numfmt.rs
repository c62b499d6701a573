//! Locale-free number formatting shared by the text emitters.

/// Significant digits written to CSV and SVG output.
pub const SIGNIFICANT_DIGITS: usize = 10;

/// Formats `x` as a plain decimal with [`SIGNIFICANT_DIGITS`] significant
/// digits, trailing zeros removed. Non-finite values are written as `NaN`,
/// `inf` or `-inf`.
pub fn sig(x: f64) -> String {
    sig_digits(x, SIGNIFICANT_DIGITS)
}

pub fn sig_digits(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let mut body: String = mantissa.chars().filter(|c| *c != '.').collect();

    let mut out = String::from(sign);
    if exp < 0 {
        out.push_str("0.");
        for _ in 0..(-exp - 1) {
            out.push('0');
        }
        out.push_str(&body);
    } else {
        let int_len = exp as usize + 1;
        while body.len() < int_len {
            body.push('0');
        }
        out.push_str(&body[..int_len]);
        if body.len() > int_len {
            out.push('.');
            out.push_str(&body[int_len..]);
        }
    }
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    out
}

/// Rounds half away from zero at `decimals` places and formats with exactly
/// that many decimals.
pub fn round_half_up(x: f64, decimals: u32) -> String {
    let scale = 10f64.powi(decimals as i32);
    // Nudge by a few ulps so values printed as ...5 in shortest form round up.
    let scaled = x * scale;
    let nudged = scaled + scaled.abs() * 4.0 * f64::EPSILON * scaled.signum();
    let rounded = (nudged.abs() + 0.5).floor() * scaled.signum() / scale;
    format!("{:.*}", decimals as usize, rounded)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(0.841316419424964), "0.8413164194");
        assert_eq!(sig(0.5), "0.5");
        assert_eq!(sig(1.0), "1");
        assert_eq!(sig(0.0), "0");
        assert_eq!(sig(-0.25), "-0.25");
        assert_eq!(sig(123.456), "123.456");
        assert_eq!(sig(1234567890123.0), "1234567890000");
        assert_eq!(sig(0.000012345), "0.000012345");
        assert_eq!(sig(2.0 / 3.0), "0.6666666667");
    }

    #[test]
    fn half_up_rounding() {
        assert_eq!(round_half_up(0.8413164, 3), "0.841");
        assert_eq!(round_half_up(0.8535533906, 3), "0.854");
        assert_eq!(round_half_up(0.8815, 3), "0.882");
        assert_eq!(round_half_up(0.125, 2), "0.13");
        assert_eq!(round_half_up(-0.125, 2), "-0.13");
    }
}
