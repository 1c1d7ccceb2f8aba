use qmlab::numkit::UnitVector3;

/// Comma-separated floats. Whitespace around items is ignored.
pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    if s.trim().is_empty() {
        return Err("empty list".into());
    }
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let v: f64 = t.parse().map_err(|_| format!("'{t}' is not a number"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("'{t}' is not finite"))
            }
        })
        .collect()
}

/// Comma-separated nonnegative integers.
pub fn parse_indices(s: &str) -> Result<Vec<usize>, String> {
    s.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| format!("'{}' is not an index", t.trim()))).collect()
}

/// Exactly `n` angles in degrees, returned in radians.
pub fn parse_angles_deg(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v = parse_list(s)?;
    if v.len() != n {
        return Err(format!("expected {n} angles, got {}", v.len()));
    }
    Ok(v.into_iter().map(f64::to_radians).collect())
}

/// Parsed axis and whether it had to be renormalized by more than 1e-6.
pub fn parse_vector(s: &str) -> Result<(UnitVector3, bool), String> {
    let v = parse_list(s)?;
    let [x, y, z] = v[..] else {
        return Err(format!("expected 3 components, got {}", v.len()));
    };
    let norm = (x * x + y * y + z * z).sqrt();
    if !(norm > 1e-12) {
        return Err("zero-length vector".into());
    }
    let u = UnitVector3::normalize(x, y, z).map_err(|e| e.to_string())?;
    Ok((u, (norm - 1.0).abs() > 1e-6))
}
