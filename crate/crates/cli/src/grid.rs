use num_complex::Complex64;
use selberg::Error;

fn num(tok: &str) -> Result<f64, Error> {
    tok.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad number `{tok}`")))
}

/// `start:stop:step` inclusive of `stop` up to rounding, or a single value.
pub fn parse_range(s: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if b < a {
                return Err(Error::Invalid(format!("range `{s}` is empty")));
            }
            if b == a {
                return Ok(vec![a]);
            }
            if !(step > 0.0) {
                return Err(Error::Invalid(format!("range `{s}` needs a positive step")));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize;
            Ok((0..=count).map(|k| a + k as f64 * step).collect())
        }
        _ => Err(Error::Parse(format!("range `{s}` must be `start:stop:step`"))),
    }
}

/// `re0:re1:step,im0:im1:step` as the Cartesian product, real part outer.
pub fn parse_s_grid(s: &str) -> Result<Vec<Complex64>, Error> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("s-grid `{s}` must be `re-range,im-range`")))?;
    let re = parse_range(re)?;
    let im = parse_range(im)?;
    Ok(re
        .iter()
        .flat_map(|&x| im.iter().map(move |&y| Complex64::new(x, y)))
        .collect())
}

/// Comma list of values, or `lo:hi:count` spaced geometrically from `hi` down to `lo`.
pub fn parse_t_grid(s: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [lo, hi, count] => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad count `{count}`")))?;
            if !(lo > 0.0 && hi > lo) || count < 2 {
                return Err(Error::Invalid(format!("t-grid `{s}` needs 0 < lo < hi and count ≥ 2")));
            }
            let ratio = (lo / hi).powf(1.0 / (count - 1) as f64);
            (0..count).map(|k| hi * ratio.powi(k as i32)).collect()
        }
        _ => s.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
    };
    if let Some(t) = grid.iter().find(|t| !(**t > 0.0)) {
        return Err(Error::Invalid(format!("t = {t} must be positive")));
    }
    Ok(grid)
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',').map(num).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1:2:0.5").unwrap(), vec![1.0, 1.5, 2.0]);
        assert_eq!(parse_range("3").unwrap(), vec![3.0]);
        assert!(parse_range("2:1:0.1").is_err());
        assert_eq!(parse_s_grid("2:3:1,0:0:1").unwrap().len(), 2);
    }

    #[test]
    fn t_grids() {
        let g = parse_t_grid("0.001:0.01:5").unwrap();
        assert_eq!(g.len(), 5);
        assert!((g[0] - 0.01).abs() < 1e-15 && (g[4] - 0.001).abs() < 1e-15);
        assert!(g.windows(2).all(|w| w[0] > w[1]));
        assert!(parse_t_grid("0.1,-1").is_err());
    }
}
