//! Command execution: routes a parsed map to the core engines and
//! renders a deterministic report with the documented exit code
//! (0 definitive, 2 inconclusive or not decomposable, 1 input error).

use ytri_core::decompose::{decompose_dispatch, DecomposeError, DecompositionReport};
use ytri_core::inject::{check_injectivity, InjectivityOptions, InjectivityStatus};
use ytri_core::inverse::{invert_chain, verify_inverse, InverseObject};
use ytri_core::mapalg::{classify, NonSingularity, PlanarMap};
use ytri_core::rational::Rat;

use crate::parse::{parse_map, parse_point, ParseError};
use crate::report::{Report, Value};

pub const TOOL_NAME: &str = "ytri";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit code for definitive results (certificate, chain, witness, value).
pub const EXIT_OK: i32 = 0;
/// Exit code for input errors (parse failures, bad points).
pub const EXIT_INPUT: i32 = 1;
/// Exit code for honest non-answers (inconclusive, not decomposable).
pub const EXIT_INCONCLUSIVE: i32 = 2;

#[derive(Debug, Clone)]
pub enum Command {
    Classify {
        map: String,
    },
    Decompose {
        map: String,
    },
    Invert {
        map: String,
        tolerance_bits: u32,
    },
    CheckInjectivity {
        map: String,
        budget: usize,
        seed: u64,
        assume_nonsingular: bool,
    },
    Eval {
        map: String,
        at: String,
    },
    VerifyChain {
        map: String,
    },
}

pub struct Outcome {
    pub report: Report,
    pub exit: i32,
}

/// Runs a command; `Err` means an input problem (exit 1).
pub fn execute(command: &Command) -> Result<Outcome, ParseError> {
    match command {
        Command::Classify { map } => {
            let f = parse_map(map)?;
            Ok(run_classify(&f))
        }
        Command::Decompose { map } => {
            let f = parse_map(map)?;
            Ok(run_decompose(&f))
        }
        Command::Invert {
            map,
            tolerance_bits,
        } => {
            let f = parse_map(map)?;
            Ok(run_invert(&f, *tolerance_bits))
        }
        Command::CheckInjectivity {
            map,
            budget,
            seed,
            assume_nonsingular,
        } => {
            let f = parse_map(map)?;
            Ok(run_check_injectivity(&f, *budget, *seed, *assume_nonsingular))
        }
        Command::Eval { map, at } => {
            let f = parse_map(map)?;
            let point = parse_point(at)?;
            Ok(run_eval(&f, &point))
        }
        Command::VerifyChain { map } => {
            let f = parse_map(map)?;
            Ok(run_verify_chain(&f))
        }
    }
}

fn header(report: &mut Report, command: &str, f: &PlanarMap) {
    report.push_leaf("tool", TOOL_NAME);
    report.push_leaf("version", TOOL_VERSION);
    report.push_leaf("command", command);
    let mut input = Value::node();
    input.push_leaf("map", format!("{} ; {}", f.p().display(), f.q().display()));
    input.push_leaf("strip", f.strip());
    report.push("input", input);
}

fn run_classify(f: &PlanarMap) -> Outcome {
    let mut report = Report::new();
    header(&mut report, "classify", f);
    let c = classify(f);
    let mut result = Value::node();
    result.push_leaf("map_type", format!("({}, {})", c.map_type.0, c.map_type.1));
    result.push_leaf("d_f", c.d_f.display());
    result.push_leaf("is_delta_map", c.is_delta_map);
    if let Some(delta) = &c.delta {
        result.push_leaf("delta", delta.display('x'));
    }
    result.push_leaf("is_jacobian_map", c.is_jacobian_map);
    let mut ns = Value::node();
    match &c.non_singularity {
        NonSingularity::NonSingular(cert) => {
            ns.push_leaf("status", "non-singular");
            ns.push_leaf(
                "certificate",
                format!("delta = {} has no zero in {}", cert.delta.display('x'), f.strip()),
            );
        }
        NonSingularity::Singular(witness) => {
            ns.push_leaf("status", "singular");
            ns.push_leaf("witness", witness);
        }
        NonSingularity::Unknown => {
            ns.push_leaf("status", "unknown");
            ns.push_leaf(
                "reason",
                "determinant depends on y with even degree; not decided",
            );
        }
    }
    result.push("non_singularity", ns);
    report.push("result", result);
    Outcome {
        report,
        exit: EXIT_OK,
    }
}

fn decomposition_value(report: &DecompositionReport) -> Value {
    let mut node = Value::node();
    node.push_leaf("route", report.route);
    node.push_leaf("verified", report.verified);
    node.push_leaf("triangular_count", report.triangular_count);
    node.push_leaf("quasi_triangular_count", report.quasi_triangular_count);
    node.push_leaf("all_factors_triangular", report.all_factors_triangular);
    let mut factors = Value::node();
    for (i, factor) in report.chain.factors().iter().enumerate() {
        factors.push_leaf(format!("{}", i + 1), factor.describe());
    }
    node.push("factors_outermost_first", factors);
    node.push_leaf(
        "composition_convention",
        "F = factor_1 ∘ factor_2 ∘ ... ∘ factor_k (outermost first)",
    );
    node
}

fn diagnosis_value(e: &DecomposeError) -> Value {
    let mut node = Value::node();
    node.push_leaf("error", e);
    if let DecomposeError::NotDecomposable { diagnosis } = e {
        let mut list = Value::node();
        for (route, reason) in diagnosis {
            list.push_leaf(route.to_string(), reason);
        }
        node.push("diagnosis", list);
    }
    node
}

fn run_decompose(f: &PlanarMap) -> Outcome {
    let mut report = Report::new();
    header(&mut report, "decompose", f);
    match decompose_dispatch(f) {
        Ok(decomposition) => {
            report.push("result", decomposition_value(&decomposition));
            Outcome {
                report,
                exit: EXIT_OK,
            }
        }
        Err(e) => {
            report.push("result", diagnosis_value(&e));
            Outcome {
                report,
                exit: EXIT_INCONCLUSIVE,
            }
        }
    }
}

fn run_invert(f: &PlanarMap, tolerance_bits: u32) -> Outcome {
    let mut report = Report::new();
    header(&mut report, "invert", f);
    let decomposition = match decompose_dispatch(f) {
        Ok(d) => d,
        Err(e) => {
            report.push("result", diagnosis_value(&e));
            return Outcome {
                report,
                exit: EXIT_INCONCLUSIVE,
            };
        }
    };
    let mut result = Value::node();
    result.push_leaf("route", decomposition.route);
    match invert_chain(&decomposition.chain, tolerance_bits) {
        Ok(inverse) => {
            let mut inv = Value::node();
            match &inverse.object {
                InverseObject::ExplicitMap { map } => {
                    inv.push_leaf("kind", "explicit");
                    inv.push_leaf(
                        "map",
                        format!("{} ; {}", map.p().display(), map.q().display()),
                    );
                }
                InverseObject::Evaluable {
                    steps,
                    tolerance_log2,
                } => {
                    inv.push_leaf("kind", "evaluable");
                    inv.push_leaf("tolerance", format!("2^-{tolerance_log2}"));
                    let mut list = Value::node();
                    for (i, step) in steps.iter().enumerate() {
                        list.push_leaf(format!("{}", i + 1), step.describe());
                    }
                    inv.push("steps_outermost_first", list);
                }
            }
            inv.push_leaf("image", &inverse.image);
            let verified = verify_inverse(f, &inverse.object);
            match verified {
                Ok(()) => inv.push_leaf("verified", true),
                Err(mismatch) => {
                    inv.push_leaf("verified", false);
                    inv.push_leaf("mismatch", mismatch)
                }
            };
            result.push("inverse", inv);
            report.push("result", result);
            Outcome {
                report,
                exit: EXIT_OK,
            }
        }
        Err(e) => {
            result.push_leaf("error", e);
            report.push("result", result);
            Outcome {
                report,
                exit: EXIT_INCONCLUSIVE,
            }
        }
    }
}

fn run_check_injectivity(
    f: &PlanarMap,
    budget: usize,
    seed: u64,
    assume_nonsingular: bool,
) -> Outcome {
    let mut report = Report::new();
    header(&mut report, "check-injectivity", f);
    let opts = InjectivityOptions {
        budget,
        seed,
        assume_nonsingular,
    };
    let verdict = check_injectivity(f, &opts);
    let mut result = Value::node();
    result.push_leaf("falsifier_budget", budget);
    result.push_leaf("falsifier_seed", seed);
    if assume_nonsingular {
        result.push_leaf("assume_nonsingular", true);
    }
    let exit = match &verdict.status {
        InjectivityStatus::InjectiveCertified(tag) => {
            result.push_leaf("status", "injective-certified");
            result.push_leaf("criterion", tag);
            EXIT_OK
        }
        InjectivityStatus::NotInjective(witness) => {
            result.push_leaf("status", "not-injective");
            result.push_leaf("witness", witness);
            EXIT_OK
        }
        InjectivityStatus::Inconclusive => {
            result.push_leaf("status", "inconclusive");
            EXIT_INCONCLUSIVE
        }
    };
    let mut criteria = Value::node();
    for (i, record) in verdict.criteria.iter().enumerate() {
        let mut entry = Value::node();
        entry.push_leaf("criterion", record.tag);
        entry.push_leaf("outcome", record.outcome);
        entry.push_leaf("detail", &record.detail);
        criteria.push(format!("{}", i + 1), entry);
    }
    result.push("criteria", criteria);
    report.push("result", result);
    Outcome { report, exit }
}

fn run_eval(f: &PlanarMap, at: &(Rat, Rat)) -> Outcome {
    let mut report = Report::new();
    header(&mut report, "eval", f);
    match f.eval(&at.0, &at.1) {
        Ok((u, v)) => {
            let mut result = Value::node();
            result.push_leaf("at", format!("({}, {})", at.0, at.1));
            result.push_leaf("image", format!("({u}, {v})"));
            report.push("result", result);
            Outcome {
                report,
                exit: EXIT_OK,
            }
        }
        Err(e) => {
            let mut result = Value::node();
            result.push_leaf("error", e);
            report.push("result", result);
            Outcome {
                report,
                exit: EXIT_INPUT,
            }
        }
    }
}

fn run_verify_chain(f: &PlanarMap) -> Outcome {
    let mut report = Report::new();
    header(&mut report, "verify-chain", f);
    match decompose_dispatch(f) {
        Ok(decomposition) => {
            let mut result = decomposition_value(&decomposition);
            let recomposed = decomposition.recompose();
            result.push_leaf("recomposition_equals_input", recomposed == *f);
            result.push_leaf(
                "determinants_match",
                recomposed.jacobian_det() == f.jacobian_det(),
            );
            report.push("result", result);
            Outcome {
                report,
                exit: EXIT_OK,
            }
        }
        Err(e) => {
            report.push("result", diagnosis_value(&e));
            Outcome {
                report,
                exit: EXIT_INCONCLUSIVE,
            }
        }
    }
}

/// The built-in regression corpus: name and command per fixture.
pub fn fixture_commands() -> Vec<(&'static str, Command)> {
    let linear_pair = "(x^2+1)*y + 2*x ; (x^2+1)*y + x";
    let parabola = "x^2 ; x^2*y";
    let quadratic_pair = "x^3*y^2 + x ; x^3*y^2 + x + y";
    vec![
        (
            "classify_linear_pair",
            Command::Classify {
                map: linear_pair.into(),
            },
        ),
        (
            "classify_parabola_half_strip",
            Command::Classify {
                map: format!("{parabola} on (0, inf)"),
            },
        ),
        (
            "classify_parabola_full_line",
            Command::Classify {
                map: parabola.into(),
            },
        ),
        (
            "classify_quadratic_pair",
            Command::Classify {
                map: quadratic_pair.into(),
            },
        ),
        (
            "decompose_linear_pair",
            Command::Decompose {
                map: linear_pair.into(),
            },
        ),
        (
            "decompose_scaled_shear",
            Command::Decompose {
                map: "x ; (x^2+1)*y".into(),
            },
        ),
        (
            "decompose_quadratic_stage",
            Command::Decompose {
                map: "2*y^2 + x^3 + x ; y".into(),
            },
        ),
        (
            "decompose_quadratic_pair_fails",
            Command::Decompose {
                map: quadratic_pair.into(),
            },
        ),
        (
            "invert_linear_pair",
            Command::Invert {
                map: linear_pair.into(),
                tolerance_bits: 40,
            },
        ),
        (
            "invert_triangular_jacobian",
            Command::Invert {
                map: "y + x^3 + 2*x ; 3*y + x^3".into(),
                tolerance_bits: 40,
            },
        ),
        (
            "inject_linear_pair",
            Command::CheckInjectivity {
                map: linear_pair.into(),
                budget: 2000,
                seed: 1,
                assume_nonsingular: false,
            },
        ),
        (
            "inject_quadratic_pair_inconclusive",
            Command::CheckInjectivity {
                map: quadratic_pair.into(),
                budget: 2000,
                seed: 1,
                assume_nonsingular: false,
            },
        ),
        (
            "inject_square_witness",
            Command::CheckInjectivity {
                map: "x ; y^2".into(),
                budget: 1000,
                seed: 7,
                assume_nonsingular: false,
            },
        ),
        (
            "inject_parabola_fiber",
            Command::CheckInjectivity {
                map: parabola.into(),
                budget: 1000,
                seed: 0,
                assume_nonsingular: false,
            },
        ),
        (
            "eval_quadratic_pair",
            Command::Eval {
                map: quadratic_pair.into(),
                at: "1,2".into(),
            },
        ),
        (
            "verify_chain_linear_pair",
            Command::VerifyChain {
                map: linear_pair.into(),
            },
        ),
    ]
}
