//! Stable float formatting for CSV output: 6 significant digits, '.'
//! decimal separator, no trailing zeros, scientific notation outside
//! [1e-4, 1e6). The rendering is pure string manipulation on an exact
//! `{:e}` base so identical inputs always produce identical bytes.

const SIGNIFICANT_DIGITS: i32 = 6;

pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let rendered = format!("{:.*e}", (SIGNIFICANT_DIGITS - 1) as usize, x);
    let (mantissa, exp_str) = rendered.split_once('e').expect("exponent present");
    let exp: i32 = exp_str.parse().expect("integer exponent");

    if exp < -4 || exp >= SIGNIFICANT_DIGITS {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }

    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let point = exp + 1; // digit count left of the decimal point
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..-point {
            out.push('0');
        }
        out.push_str(&digits);
    } else {
        let point = point as usize;
        out.push_str(&digits[..point]);
        if point < digits.len() {
            out.push('.');
            out.push_str(&digits[point..]);
        }
    }
    trim_zeros(&out).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
