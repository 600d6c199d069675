//! Method selection and result records shared by the command-line tool.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ArithError, BigInt};
use crate::graph::{complement_in_host, Graph, GraphError, Problem};
use crate::oracle::{self, OracleError};
use crate::qt::{self, QtError};
use crate::tree::{self, TreeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Auto,
    Tree,
    Qt,
    Csplit,
    Kirchhoff,
    CstMatrix,
    Enumerate,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Auto,
        Method::Tree,
        Method::Qt,
        Method::Csplit,
        Method::Kirchhoff,
        Method::CstMatrix,
        Method::Enumerate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Tree => "tree",
            Method::Qt => "qt",
            Method::Csplit => "csplit",
            Method::Kirchhoff => "kirchhoff",
            Method::CstMatrix => "cst-matrix",
            Method::Enumerate => "enumerate",
        }
    }

    pub fn is_oracle(self) -> bool {
        matches!(
            self,
            Method::Kirchhoff | Method::CstMatrix | Method::Enumerate
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method {s:?}"))
    }
}

/// What gets removed from `K_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subtrahend {
    Graph(Graph),
    CompleteSplit { clique: usize, stable: usize },
}

impl Subtrahend {
    pub fn vertex_count(&self) -> usize {
        match self {
            Subtrahend::Graph(g) => g.vertex_count(),
            Subtrahend::CompleteSplit { clique, stable } => clique + stable,
        }
    }

    pub fn to_graph(&self) -> Graph {
        match self {
            Subtrahend::Graph(g) => g.clone(),
            Subtrahend::CompleteSplit { clique, stable } => Graph::complete_split(*clique, *stable),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountResult {
    pub tau: String,
    pub method_used: Method,
    pub fallback_reason: Option<String>,
    pub elapsed_ms: f64,
    pub n: usize,
    pub k_or_p: usize,
}

impl CountResult {
    pub fn tau(&self) -> BigInt {
        self.tau.parse().expect("tau is a decimal integer")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Qt(#[from] QtError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("subtrahend is not a complete split graph")]
    NotCompleteSplit,
    #[error("{0} is an oracle, not an engine")]
    NotAnEngine(Method),
}

impl CountError {
    /// 1 for invalid input, 2 when a requested method's precondition fails.
    pub fn exit_code(&self) -> i32 {
        match self {
            CountError::Tree(TreeError::Graph(_)) | CountError::Qt(QtError::Graph(_)) => 1,
            CountError::Tree(TreeError::NotATree | TreeError::ZeroPivot { .. })
            | CountError::Qt(
                QtError::NotQuasiThreshold { .. }
                | QtError::Disconnected { .. }
                | QtError::ZeroPivot { .. }
                | QtError::Empty
                | QtError::EmptyClique,
            )
            | CountError::NotCompleteSplit => 2,
            _ => 1,
        }
    }
}

impl CountError {
    /// Name of the underlying failure, e.g. `NotQuasiThreshold`.
    pub fn kind(&self) -> &'static str {
        fn graph(e: &GraphError) -> &'static str {
            match e {
                GraphError::BadHeader { .. } => "BadHeader",
                GraphError::BadEdgeLine { .. } => "BadEdgeLine",
                GraphError::Loop { .. } => "Loop",
                GraphError::DuplicateEdge { .. } => "DuplicateEdge",
                GraphError::OutOfRange { .. } => "OutOfRange",
                GraphError::EdgeCountMismatch { .. } => "EdgeCountMismatch",
                GraphError::TooLarge { .. } => "TooLarge",
                GraphError::EmptyHost => "EmptyHost",
            }
        }
        fn arith(e: &ArithError) -> &'static str {
            match e {
                ArithError::ZeroDenominator => "ZeroDenominator",
                ArithError::DivisionByZero => "DivisionByZero",
                ArithError::NotInteger(_) => "NotInteger",
                ArithError::Parse(_) => "Parse",
                ArithError::PrimeRetriesExhausted(_) => "PrimeRetriesExhausted",
            }
        }
        match self {
            CountError::Graph(e)
            | CountError::Tree(TreeError::Graph(e))
            | CountError::Qt(QtError::Graph(e)) => graph(e),
            CountError::Arith(e)
            | CountError::Tree(TreeError::Arith(e))
            | CountError::Qt(QtError::Arith(e)) => arith(e),
            CountError::Tree(TreeError::NotATree) => "NotATree",
            CountError::Tree(TreeError::ZeroPivot { .. })
            | CountError::Qt(QtError::ZeroPivot { .. }) => "ZeroPivot",
            CountError::Qt(QtError::Empty) => "Empty",
            CountError::Qt(QtError::Disconnected { .. }) => "Disconnected",
            CountError::Qt(QtError::NotQuasiThreshold { .. }) => "NotQuasiThreshold",
            CountError::Qt(QtError::EmptyClique) => "EmptyClique",
            CountError::Oracle(OracleError::TooLarge { .. }) => "TooLarge",
            CountError::Oracle(OracleError::Empty) => "Empty",
            CountError::Oracle(OracleError::NotInteger(_)) => "NotInteger",
            CountError::NotCompleteSplit => "NotCompleteSplit",
            CountError::NotAnEngine(_) => "NotAnEngine",
        }
    }
}

fn run_oracle(method: Method, p: &Problem) -> Result<BigInt, CountError> {
    Ok(match method {
        Method::Kirchhoff => oracle::kirchhoff_count(&complement_in_host(p)),
        Method::CstMatrix => oracle::cst_matrix_count(p)?,
        Method::Enumerate => oracle::enumerate_count(&complement_in_host(p))?,
        other => unreachable!("{other} is not an oracle"),
    })
}

/// Runs one method. Explicit methods never fall back; `Auto` tries the tree
/// engine, the complete-split formula, the QT engine, then Kirchhoff, and
/// records why it moved on.
pub fn count(n: usize, h: &Subtrahend, method: Method) -> Result<CountResult, CountError> {
    let start = Instant::now();
    let k_or_p = h.vertex_count();
    if let Subtrahend::CompleteSplit { clique, stable } = *h {
        if matches!(method, Method::Auto | Method::Csplit) {
            let tau = qt::count_kn_minus_csplit(n, clique, stable)?;
            return Ok(finish(tau, Method::Csplit, None, start, n, k_or_p));
        }
    }
    let problem = Problem::new(n, h.to_graph())?;
    let (tau, used, reason) = match method {
        Method::Auto => auto(&problem)?,
        Method::Tree => (tree::count_kn_minus_tree(&problem)?, Method::Tree, None),
        Method::Qt => (qt::count_kn_minus_qt(&problem)?, Method::Qt, None),
        Method::Csplit => {
            let (clique, stable) =
                qt::csplit_parts(problem.h()).ok_or(CountError::NotCompleteSplit)?;
            (
                qt::count_kn_minus_csplit(n, clique, stable)?,
                Method::Csplit,
                None,
            )
        }
        oracle => (run_oracle(oracle, &problem)?, oracle, None),
    };
    Ok(finish(tau, used, reason, start, n, k_or_p))
}

fn finish(
    tau: BigInt,
    method_used: Method,
    fallback_reason: Option<String>,
    start: Instant,
    n: usize,
    k_or_p: usize,
) -> CountResult {
    CountResult {
        tau: tau.to_string(),
        method_used,
        fallback_reason,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        n,
        k_or_p,
    }
}

fn auto(problem: &Problem) -> Result<(BigInt, Method, Option<String>), CountError> {
    let n = problem.n();
    // Isolated vertices of H leave K_n - H unchanged.
    let core = problem.h().without_isolated();
    let core = if core.vertex_count() == 0 {
        Graph::empty(1)
    } else {
        core
    };
    let reduced = Problem::new(n, core.clone())?;
    let kirchhoff = |reason: String| -> Result<_, CountError> {
        Ok((
            run_oracle(Method::Kirchhoff, problem)?,
            Method::Kirchhoff,
            Some(reason),
        ))
    };

    if core.is_tree() {
        return match tree::count_kn_minus_tree(&reduced) {
            Ok(tau) => Ok((tau, Method::Tree, None)),
            Err(e @ TreeError::ZeroPivot { .. }) => kirchhoff(format!("tree engine: {e}")),
            Err(e) => Err(e.into()),
        };
    }
    if !core.is_connected() {
        return kirchhoff("subtrahend has several components with edges".into());
    }
    if let Some((clique, stable)) = qt::csplit_parts(&core) {
        if stable >= 1 {
            return Ok((
                qt::count_kn_minus_csplit(n, clique, stable)?,
                Method::Csplit,
                None,
            ));
        }
    }
    match qt::count_kn_minus_qt(&reduced) {
        Ok(tau) => Ok((tau, Method::Qt, None)),
        Err(e @ (QtError::ZeroPivot { .. } | QtError::NotQuasiThreshold { .. })) => {
            kirchhoff(format!("qt engine: {e}"))
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub engine: CountResult,
    pub oracle: Method,
    pub oracle_tau: String,
    pub equal: bool,
}

/// Runs `engine` and `oracle` on the same input. `perturb` adds one to the
/// engine's answer so harnesses can check that a mismatch is caught.
pub fn verify(
    n: usize,
    h: &Subtrahend,
    engine: Method,
    against: Method,
    perturb: bool,
) -> Result<Verification, CountError> {
    if !against.is_oracle() {
        return Err(CountError::NotAnEngine(against));
    }
    let mut result = count(n, h, engine)?;
    if perturb {
        result.tau = (result.tau() + BigInt::from(1)).to_string();
    }
    let problem = Problem::new(n, h.to_graph())?;
    let oracle_tau = run_oracle(against, &problem)?.to_string();
    Ok(Verification {
        equal: oracle_tau == result.tau,
        engine: result,
        oracle: against,
        oracle_tau,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(h: Graph) -> Subtrahend {
        Subtrahend::Graph(h)
    }

    #[test]
    fn auto_dispatch_order() {
        let r = count(4, &g(Graph::path(3)), Method::Auto).unwrap();
        assert_eq!((r.tau.as_str(), r.method_used), ("3", Method::Tree));

        let r = count(6, &g(Graph::empty(6)), Method::Auto).unwrap();
        assert_eq!((r.tau.as_str(), r.method_used), ("1296", Method::Tree));

        let r = count(7, &g(Graph::complete_split(2, 3)), Method::Auto).unwrap();
        assert_eq!(r.method_used, Method::Csplit);
        assert_eq!(
            r.tau(),
            oracle::kirchhoff_count(&complement_in_host(
                &Problem::new(7, Graph::complete_split(2, 3)).unwrap()
            ))
        );

        let r = count(6, &g(Graph::complete(4)), Method::Auto).unwrap();
        assert_eq!(r.method_used, Method::Qt);

        let r = count(
            6,
            &g(Graph::path(5).relabel(&[1, 2, 3, 4, 5])),
            Method::Auto,
        )
        .unwrap();
        assert_eq!(r.method_used, Method::Tree);

        let r = count(5, &g(Graph::cycle(4)), Method::Auto).unwrap();
        assert_eq!(r.method_used, Method::Kirchhoff);
        assert!(r.fallback_reason.unwrap().contains("not quasi-threshold"));

        let two = Graph::from_edges(4, &[(1, 2), (3, 4)]).unwrap();
        let r = count(5, &g(two), Method::Auto).unwrap();
        assert_eq!(r.method_used, Method::Kirchhoff);
        assert!(r.fallback_reason.is_some());
    }

    #[test]
    fn explicit_methods_do_not_fall_back() {
        let e = count(4, &g(Graph::path(4)), Method::Qt).unwrap_err();
        assert!(matches!(
            e,
            CountError::Qt(QtError::NotQuasiThreshold { .. })
        ));
        assert_eq!(e.exit_code(), 2);
        let e = count(5, &g(Graph::cycle(4)), Method::Tree).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = count(5, &g(Graph::path(4)), Method::Csplit).unwrap_err();
        assert_eq!(e, CountError::NotCompleteSplit);
        let e = count(9, &g(Graph::path(3)), Method::Enumerate).unwrap_err();
        assert_eq!(e.exit_code(), 1);
        let e = count(2, &g(Graph::path(3)), Method::Tree).unwrap_err();
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn csplit_input() {
        let s = Subtrahend::CompleteSplit {
            clique: 1,
            stable: 3,
        };
        let r = count(5, &s, Method::Auto).unwrap();
        assert_eq!(
            (r.tau.as_str(), r.method_used, r.k_or_p),
            ("16", Method::Csplit, 4)
        );
        let r = count(5, &s, Method::Kirchhoff).unwrap();
        assert_eq!(r.tau, "16");
    }

    #[test]
    fn verify_reports_mismatch() {
        let t = g(crate::oracle::random_labeled_tree(5, 1));
        let v = verify(7, &t, Method::Tree, Method::Kirchhoff, false).unwrap();
        assert!(v.equal);
        let v = verify(7, &t, Method::Tree, Method::Kirchhoff, true).unwrap();
        assert!(!v.equal);
        assert!(verify(7, &t, Method::Tree, Method::Qt, false).is_err());
    }

    #[test]
    fn json_round_trip() {
        let r = count(4, &g(Graph::path(3)), Method::Auto).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.starts_with(r#"{"tau":"3","method_used":"tree","fallback_reason":null"#));
        let back: CountResult = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
    }
}
