//! Parsers for the compact command-line forms of parameters, grids and
//! schedules.

use rlspace::operators::{EvalGrid, GeometricSchedule};
use rlspace::{Error, Result, WeightParams};

fn numbers(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| Error::InvalidParams(format!("not a number: {t:?}"))))
        .collect()
}

/// `n,p,s,alpha`.
pub fn params(text: &str) -> Result<WeightParams> {
    let v = numbers(text)?;
    let [n, p, s, alpha] = v[..] else {
        return Err(Error::InvalidParams(format!("expected n,p,s,alpha, got {text:?}")));
    };
    if n.fract() != 0.0 || n < 1.0 {
        return Err(Error::InvalidParams(format!("dimension must be a positive integer, got {n}")));
    }
    WeightParams::new(n as u32, p, s, alpha)
}

/// `lo,hi` integer range.
pub fn int_range(text: &str) -> Result<(i32, i32)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let parse = |t: &str| t.parse::<i32>().map_err(|_| Error::InvalidParams(format!("not an integer: {t:?}")));
    match parts[..] {
        [lo, hi] => Ok((parse(lo)?, parse(hi)?)),
        _ => Err(Error::InvalidParams(format!("expected lo,hi, got {text:?}"))),
    }
}

fn tagged<'a>(text: &'a str, tag: &str, arity: usize) -> Option<Vec<&'a str>> {
    let rest = text.strip_prefix(tag)?.strip_prefix(':')?;
    let parts: Vec<&str> = rest.split(':').collect();
    (parts.len() == arity).then_some(parts)
}

fn num(t: &str) -> Result<f64> {
    t.trim().parse::<f64>().map_err(|_| Error::InvalidParams(format!("not a number: {t:?}")))
}

/// Evaluation points: `x1,x2,...` or `lin:a:b:count`.
pub fn grid_points(text: &str) -> Result<Vec<f64>> {
    if let Some(p) = tagged(text, "lin", 3) {
        let count = p[2].trim().parse::<usize>().map_err(|_| Error::InvalidParams(format!("bad count {:?}", p[2])))?;
        return Ok(EvalGrid::linspace(num(p[0])?, num(p[1])?, count));
    }
    numbers(text)
}

/// Frequencies or radii: `v1,v2,...`, `pow2:lo:hi` for `2^lo .. 2^hi`, or
/// `geom:start:end` with ratio `2^{1/4}`. The empty string is the empty
/// schedule.
pub fn schedule_values(text: &str) -> Result<Vec<f64>> {
    if let Some(p) = tagged(text, "pow2", 2) {
        let (lo, hi) = int_range(&format!("{},{}", p[0], p[1]))?;
        return Ok(GeometricSchedule::powers(2.0, lo, hi).values().to_vec());
    }
    if let Some(p) = tagged(text, "geom", 2) {
        return Ok(GeometricSchedule::with_default_ratio(num(p[0])?, num(p[1])?)?.values().to_vec());
    }
    let v = numbers(text)?;
    if !v.is_empty() {
        GeometricSchedule::from_values(v.clone())?;
    }
    Ok(v)
}

/// Nonempty schedule.
pub fn schedule(text: &str) -> Result<GeometricSchedule> {
    let v = schedule_values(text)?;
    if v.is_empty() {
        return Err(Error::InvalidParams("empty schedule".into()));
    }
    GeometricSchedule::from_values(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_quadruples() {
        let w = params("1, 0.5, 2, -0.75").unwrap();
        assert_eq!((w.n(), w.p(), w.s(), w.alpha()), (1, 0.5, 2.0, -0.75));
        assert!(params("1,1,2").is_err());
        assert!(params("1.5,1,2,0").is_err());
        assert!(params("1,x,2,0").is_err());
    }

    #[test]
    fn grids_and_schedules() {
        assert_eq!(grid_points("4").unwrap(), vec![4.0]);
        assert_eq!(grid_points("lin:0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(schedule_values("pow2:0:3").unwrap(), vec![1.0, 2.0, 4.0, 8.0]);
        assert_eq!(schedule_values("").unwrap(), Vec::<f64>::new());
        assert_eq!(schedule_values("geom:1:2").unwrap().len(), 5);
        assert!(schedule("").is_err());
        assert!(schedule_values("0,1").is_err());
        assert_eq!(int_range("-6,6").unwrap(), (-6, 6));
    }
}
