use std::str::FromStr;

/// Integer list given as `A`, `A..B` (inclusive), `A..B:S` or `A,B,C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntList(pub Vec<i64>);

fn parse_int(s: &str) -> Result<i64, String> {
    s.trim()
        .parse::<i64>()
        .map_err(|_| format!("'{s}' is not an integer"))
}

impl FromStr for IntList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.contains(',') {
            return s.split(',').map(parse_int).collect::<Result<_, _>>().map(IntList);
        }
        let Some((start, rest)) = s.split_once("..") else {
            return parse_int(s).map(|v| IntList(vec![v]));
        };
        let (end, step) = match rest.split_once(':') {
            Some((e, st)) => (e, parse_int(st)?),
            None => (rest, 1),
        };
        if step <= 0 {
            return Err(format!("range step must be positive, got {step}"));
        }
        let (a, b) = (parse_int(start)?, parse_int(end)?);
        let mut out = Vec::new();
        let mut v = a;
        while v <= b {
            out.push(v);
            v = match v.checked_add(step) {
                Some(next) => next,
                None => break,
            };
        }
        Ok(IntList(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Vec<i64> {
        s.parse::<IntList>().unwrap().0
    }

    #[test]
    fn forms() {
        assert_eq!(parse("7"), vec![7]);
        assert_eq!(parse("2..5"), vec![2, 3, 4, 5]);
        assert_eq!(parse("0..10:4"), vec![0, 4, 8]);
        assert_eq!(parse("3,1,2"), vec![3, 1, 2]);
        assert_eq!(parse("-2"), vec![-2]);
        assert!(parse("5..2").is_empty());
        assert!("1..4:0".parse::<IntList>().is_err());
        assert!("x".parse::<IntList>().is_err());
        assert!("1,,2".parse::<IntList>().is_err());
    }
}
