//! Parameter lists on the command line: `a,b,c`, with `start:end:step`
//! ranges (inclusive) allowed for integers.

/// A parsed list argument.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

fn parse_int_list<T>(s: &str) -> Result<Vec<T>, String>
where
    T: std::str::FromStr + Copy + PartialOrd + std::ops::Add<Output = T> + Default,
{
    let num = |x: &str| {
        x.trim()
            .parse::<T>()
            .map_err(|_| format!("{x:?} is not a nonnegative integer"))
    };
    let mut out = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let fields: Vec<&str> = part.split(':').collect();
        match fields.as_slice() {
            [x] => out.push(num(x)?),
            [a, b] | [a, b, _] => {
                let (start, end) = (num(a)?, num(b)?);
                let step = match fields.get(2) {
                    Some(s) => num(s)?,
                    None => num("1")?,
                };
                if step <= T::default() {
                    return Err(format!("range {part:?} needs a positive step"));
                }
                let mut x = start;
                while x <= end {
                    out.push(x);
                    x = x + step;
                }
            }
            _ => return Err(format!("cannot parse {part:?}")),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

pub fn parse_usize_list(s: &str) -> Result<List<usize>, String> {
    parse_int_list(s).map(List)
}

pub fn parse_u64_list(s: &str) -> Result<List<u64>, String> {
    parse_int_list(s).map(List)
}

pub fn parse_f64_list(s: &str) -> Result<List<f64>, String> {
    let v = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| format!("{x:?} is not a number"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err("empty list".into());
    }
    Ok(List(v))
}
