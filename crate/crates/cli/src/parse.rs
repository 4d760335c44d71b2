use tetra_core::{Complex64, Tolerances};

/// Parses `re,im` or a bare real.
pub fn complex(s: &str) -> Result<Complex64, String> {
    let t = s.trim();
    let (re, im) = match t.split_once(',') {
        Some((re, im)) => (re, im),
        None => (t, "0"),
    };
    let re: f64 = re.trim().parse().map_err(|_| format!("`{s}` is not a complex number (use re,im)"))?;
    let im: f64 = im.trim().parse().map_err(|_| format!("`{s}` is not a complex number (use re,im)"))?;
    if !re.is_finite() || !im.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(Complex64::new(re, im))
}

pub fn complexes(items: &[String], expected: usize, what: &str) -> Result<Vec<Complex64>, String> {
    if items.len() != expected {
        return Err(format!("{what} needs {expected} complex values, got {}", items.len()));
    }
    items.iter().map(|s| complex(s)).collect()
}

/// Splits `--tol.NAME=V` (or `--tol.NAME V`) flags off the argument list and
/// applies them to the default tolerances.
pub fn split_tolerances(args: Vec<String>) -> Result<(Vec<String>, Tolerances), String> {
    let mut tol = Tolerances::default();
    let mut rest = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let Some(spec) = a.strip_prefix("--tol.") else {
            rest.push(a);
            continue;
        };
        let (name, value) = match spec.split_once('=') {
            Some((n, v)) => (n.to_string(), v.to_string()),
            None => {
                let v = it.next().ok_or_else(|| format!("--tol.{spec} needs a value"))?;
                (spec.to_string(), v)
            }
        };
        let v: f64 = value
            .parse()
            .map_err(|_| format!("tolerance {name}: `{value}` is not a number"))?;
        tol.set(&name, v).map_err(|e| e.to_string())?;
    }
    Ok((rest, tol))
}
