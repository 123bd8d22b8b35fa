//! Named example programs with their expected verdicts.

use serde::Serialize;

use crate::lattice::{BlameMode, Lattice};
use crate::par::Strategy;
use crate::syntax::{normalize_type, parse_term, parse_type, show_type};
use crate::typecheck::{check_against, check_with, CheckOptions, System, TypingEnv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "type", rename_all = "lowercase")]
pub enum Verdict {
    /// Accepted at exactly this type.
    Accept(&'static str),
    Reject,
}

#[derive(Debug, Clone, Serialize)]
pub struct Example {
    pub name: &'static str,
    pub lattice: &'static str,
    pub blame: BlameMode,
    pub system: System,
    pub source: &'static str,
    pub expected: Verdict,
}

impl Example {
    pub fn lattice(&self) -> Lattice {
        Lattice::builtin(self.lattice).expect("corpus lattices are builtin").with_blame_mode(self.blame)
    }
}

const F_T: &str = "fun x:T[H](unit+unit). bind y = x in y";
const F_W: &str = "fun x:W[H](unit+unit). bind y = x in y";
const G_T: &str = "fun x:T[H](unit+unit). bind y = x in case y of z. inj1 () | z. inj2 ()";
const G_W: &str = "fun x:W[H](unit+unit). bind y = x in case y of z. inj1 () | z. inj2 ()";
const F_PRIME: &str = "fun x:T[H](unit+unit). eta[H] ((fun x:T[H](unit+unit). bind y = x in y) x)";
const G_PRIME: &str =
    "fun x:T[H](unit+unit). eta[H] ((fun x:T[H](unit+unit). bind y = x in case y of z. inj1 () | z. inj2 ()) x)";
const H: &str = "fun x:T[H](unit+unit). bind y = weaken x in case y of z. inj1 () | z. inj2 ()";
const M: &str = "fun x:T[L](unit+unit). eta[H] (bind y = x in case y of z. inj1 () | z. inj2 ())";
const N: &str = "fun x:T[L](unit+unit). \
    (fun x:T[H](unit+unit). bind y = weaken x in case y of z. inj1 () | z. inj2 ()) \
    ((fun x:T[L](unit+unit). eta[H] (bind y = x in case y of z. inj1 () | z. inj2 ())) x)";
const K: &str = "fun x:W[H](unit+(unit+unit)). bind y = x in case y of z. inj1 () | z. inj2 (weta[H] z)";
const STRENGTHEN: &str = "fun x:W[H](unit+unit). bind y = x in eta[H] y";
const BLAME_1: &str = "bind x = weaken (eta[H] inj1 ()) in eta[!H] x";
const BLAME_2: &str = "bind x = weaken (eta[H] inj2 ()) in eta[!H] x";
const CD_1: &str = "fun x:T[H](unit+unit). bind y = x in inj1 ()";
const CD_2: &str = "fun x:T[H](unit+unit). bind y = x in inj2 ()";
/// `not` and `match` are let-bound through applied lambdas.
pub const SWITCH: &str = "(fun not:(unit+unit)^L -> unit+unit. \
      (fun match:unit+unit -> (unit+unit)^L -> unit + T[L](unit+unit). \
         fun x:T[L](unit+unit). fun b:unit+unit. bind b' = x in match b b') \
      (fun b:unit+unit. fun b':(unit+unit)^L. case b of _. inj2 (eta[L] (not b')) | _. inj1 ())) \
    (fun b':(unit+unit)^L. case b' of _. inj2 () | _. inj1 ())";
const SWITCH_DCC: &str = "(fun not:unit+unit -> unit+unit. \
      (fun match:unit+unit -> unit+unit -> unit + T[L](unit+unit). \
         fun x:T[L](unit+unit). fun b:unit+unit. bind b' = x in match b b') \
      (fun b:unit+unit. fun b':unit+unit. case b of _. inj2 (eta[L] (not b')) | _. inj1 ())) \
    (fun b':unit+unit. case b' of _. inj2 () | _. inj1 ())";

/// The example programs, in presentation order.
pub fn corpus() -> Vec<Example> {
    use System::*;
    use Verdict::*;
    let ex = |name, lattice, system, source, expected| Example {
        name,
        lattice,
        blame: BlameMode::Preserve,
        system,
        source,
        expected,
    };
    vec![
        ex("f", "two", Dcc, F_T, Reject),
        ex("f-dccd", "two", Dccd, F_W, Reject),
        ex("g", "two", Dcc, G_T, Reject),
        ex("g-dccd", "two", Dccd, G_W, Accept("W[H](unit+unit) -> unit+unit")),
        ex("f'", "two", Dcc, F_PRIME, Accept("T[H](unit+unit) -> T[H](unit+unit)")),
        ex("g'", "two", Dcc, G_PRIME, Accept("T[H](unit+unit) -> T[H](unit+unit)")),
        ex("h", "two", Dccdc, H, Reject),
        ex("m", "two", Dcc, M, Accept("T[L](unit+unit) -> T[H](unit+unit)")),
        ex("n", "two", Dccdc, N, Reject),
        ex("k", "two", Dccd, K, Accept("W[H](unit+(unit+unit)) -> unit + W[H](unit+unit)")),
        ex("strengthen", "two", Dccdc, STRENGTHEN, Accept("W[H](unit+unit) -> T[H](unit+unit)")),
        ex("blame-1", "two", Dccdc, BLAME_1, Accept("T[!H](W[H](unit+unit))")),
        ex("blame-2", "two", Dccdc, BLAME_2, Accept("T[!H](W[H](unit+unit))")),
        ex("cd-inj1", "two", Dcccd, CD_1, Accept("T[H](unit+unit) -> unit+unit")),
        ex("cd-inj2", "two", Dcccd, CD_2, Accept("T[H](unit+unit) -> unit+unit")),
        ex("cd-inj1-dcc", "two", Dcc, CD_1, Reject),
        ex("cd-inj2-dcc", "two", Dcc, CD_2, Reject),
        ex(
            "switch",
            "diamond",
            Dcccd,
            SWITCH,
            Accept("T[L](unit+unit) -> unit+unit -> unit + T[L](unit+unit)"),
        ),
        ex("switch-dcc", "diamond", Dcc, SWITCH_DCC, Reject),
    ]
}

pub fn find(name: &str) -> Option<Example> {
    corpus().into_iter().find(|e| e.name == name)
}

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub name: &'static str,
    pub system: System,
    pub expected: Verdict,
    /// The inferred type, when accepted.
    pub actual_type: Option<String>,
    pub error: Option<String>,
    pub passed: bool,
}

pub fn run_example(ex: &Example) -> Outcome {
    let lat = ex.lattice();
    let outcome = |actual_type, error, passed| Outcome {
        name: ex.name,
        system: ex.system,
        expected: ex.expected,
        actual_type,
        error,
        passed,
    };
    let term = match parse_term(ex.source, &lat) {
        Ok(t) => t,
        Err(e) => return outcome(None, Some(e.to_string()), false),
    };
    let env = TypingEnv::closed(&lat, ex.system);
    let opts = CheckOptions::default();
    match ex.expected {
        Verdict::Accept(ty) => {
            let expected = match parse_type(ty, &lat) {
                Ok(t) => normalize_type(&lat, &t),
                Err(e) => return outcome(None, Some(e.to_string()), false),
            };
            let report = check_against(&lat, &env, &term, &expected, &opts);
            match report.result {
                Ok(t) => outcome(Some(show_type(&lat, &t)), None, t == expected),
                Err(e) => outcome(None, Some(e.to_string()), false),
            }
        }
        Verdict::Reject => match check_with(&lat, &env, &term, &opts).result {
            Ok(t) => outcome(Some(show_type(&lat, &t)), None, false),
            Err(e) => outcome(None, Some(e.to_string()), true),
        },
    }
}

pub fn run_corpus(strategy: Strategy) -> Vec<Outcome> {
    strategy.map(&corpus(), run_example)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_example_matches() {
        for o in run_corpus(Strategy::Sequential) {
            assert!(o.passed, "{}: {:?} / {:?}", o.name, o.actual_type, o.error);
        }
    }

    #[test]
    fn bind_rejections_name_the_rule() {
        let o = run_example(&find("f-dccd").unwrap());
        assert!(o.error.unwrap().contains("T^D-bind side condition failed"));
    }
}
