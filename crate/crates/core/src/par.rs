//! Sequential or data-parallel execution of independent checks.
//!
//! Results always come back in input order, so reports are identical under
//! both strategies. Without the `parallel` feature, `Parallel` runs
//! sequentially.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Sequential,
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sequential" | "seq" => Ok(Strategy::Sequential),
            "parallel" | "par" => Ok(Strategy::Parallel),
            _ => Err(format!("unknown strategy `{s}`")),
        }
    }
}

impl Strategy {
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Strategy::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Keeps the items for which `f` holds, in input order.
    pub fn filter<T, F>(self, items: Vec<T>, f: F) -> Vec<T>
    where
        T: Send + Sync,
        F: Fn(&T) -> bool + Sync + Send,
    {
        let keep = self.map(&items, f);
        items.into_iter().zip(keep).filter_map(|(x, k)| k.then_some(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let f = |x: &u64| x * x % 17;
        assert_eq!(Strategy::Sequential.map(&xs, f), Strategy::Parallel.map(&xs, f));
        let even = |x: &u64| x.is_multiple_of(2);
        assert_eq!(Strategy::Sequential.filter(xs.clone(), even), Strategy::Parallel.filter(xs, even));
    }

    #[test]
    fn parses() {
        assert_eq!("seq".parse::<Strategy>().unwrap(), Strategy::Sequential);
        assert!("fast".parse::<Strategy>().is_err());
    }
}
