use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParsedPrice {
    pub amount: f64,
    pub currency: Option<&'static str>,
}

/// Parses `[¥$]?<digits>` optionally followed by a currency word.
/// `¥` and `yuan` mean CNY, `$` means USD. Anything else is `None`.
pub fn parse_price(text: &str) -> Option<ParsedPrice> {
    let text = text.trim();
    let (symbol, rest) = if let Some(r) = text.strip_prefix('¥') {
        (Some("CNY"), r)
    } else if let Some(r) = text.strip_prefix('$') {
        (Some("USD"), r)
    } else {
        (None, text)
    };

    let digits_end = rest
        .find(|c: char| !c.is_ascii_digit())
        .unwrap_or(rest.len());
    if digits_end == 0 {
        return None;
    }
    let amount: f64 = rest[..digits_end].parse().ok()?;
    let word = rest[digits_end..].trim();

    let named = match word.to_lowercase().as_str() {
        "" => None,
        "yuan" | "cny" | "rmb" => Some("CNY"),
        "usd" | "dollars" | "dollar" => Some("USD"),
        _ => return None,
    };
    let currency = match (symbol, named) {
        (Some(a), Some(b)) if a != b => return None,
        (a, b) => a.or(b),
    };
    Some(ParsedPrice { amount, currency })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(amount: f64, currency: Option<&'static str>) -> Option<ParsedPrice> {
        Some(ParsedPrice { amount, currency })
    }

    #[test]
    fn grammar() {
        assert_eq!(parse_price("¥50000"), p(50000.0, Some("CNY")));
        assert_eq!(parse_price("23500 yuan"), p(23500.0, Some("CNY")));
        assert_eq!(parse_price("$1299"), p(1299.0, Some("USD")));
        assert_eq!(parse_price("4200"), p(4200.0, None));
        assert_eq!(parse_price("¥8800 yuan"), p(8800.0, Some("CNY")));
    }

    #[test]
    fn rejects_other_text() {
        for s in [
            "",
            "yuan",
            "call for price",
            "12.5k",
            "$12 yuan",
            "¥",
            "about 300",
        ] {
            assert_eq!(parse_price(s), None, "{s:?}");
        }
    }
}
