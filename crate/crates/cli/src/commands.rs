use std::sync::Arc;

use polycal::calibration::certify_calibrated;
use polycal::groups::{CoefficientGroup, VectorGroup};
use polycal::io::{AnyChain, AnyGroup, Bundle, ChainJson, ComplexJson, JsonGroup, SolveResultJson};
use polycal::{
    deform_experiment, flat_norm_solve, generate_example, min_mass_fixed_boundary, minimality_certificate, phi, Chain,
    Conclusion, EmbeddedComplex, ExampleName, ExampleParams, SolveStatus, SolverConfig, SubdivisionRule, Subgroup,
};
use serde_json::{json, Value};

use crate::inputs::{solver_config, GroupNormRequest, Inputs};
use crate::{Args, Failure};

type Outcome = Result<(Value, bool), Failure>;

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable report")
}

pub fn run(args: &Args) -> Outcome {
    let inputs = Inputs::load(&args.inputs)?;
    match args.command.as_str() {
        "validate" => validate(&inputs, args),
        "stationarity" => stationarity(&inputs, args),
        "chainify" => chainify(&inputs),
        "certify" => certify(&inputs, args),
        "minimize" => minimize(&inputs, args),
        "flatnorm" => flatnorm(&inputs, args),
        "deform" => deform(&inputs, args),
        "groupnorm" => groupnorm(&inputs),
        "demo" => demo(&inputs, args),
        other => Err(Failure::Input(format!("unknown command `{other}`"))),
    }
}

fn validate(inputs: &Inputs, args: &Args) -> Outcome {
    let (_, k) = inputs.complex()?;
    let report = k.validate_geometry(args.tol);
    let counts: Vec<usize> = (0..=k.dim()).map(|d| k.count(d)).collect();
    let valid = report.valid;
    Ok((
        json!({ "complex_hash": k.content_hash(), "counts": counts, "report": report }),
        valid,
    ))
}

fn stationarity(inputs: &Inputs, args: &Args) -> Outcome {
    let (_, v, gamma) = inputs.varifold()?;
    let report = v.stationarity(&gamma, args.tol)?;
    let stationary = report.stationary;
    Ok((to_value(&report), stationary))
}

fn chainify(inputs: &Inputs) -> Outcome {
    let (k, v, gamma) = inputs.varifold()?;
    let chain = v.chainify()?;
    let bundle = Bundle {
        complex: ComplexJson::from_complex(&k, Some(&gamma)),
        varifold: None,
        chain: Some(ChainJson::from_chain(&chain)),
        radius: inputs.radius,
    };
    Ok((to_value(&bundle), true))
}

fn certify(inputs: &Inputs, args: &Args) -> Outcome {
    let cfg = solver_config(args.solver_config.as_deref(), args.seed)?;
    let cert = if inputs.varifold.is_some() {
        let (_, v, gamma) = inputs.varifold()?;
        minimality_certificate(&v, &gamma, args.tol, cfg.as_ref())?
    } else {
        match chain_input(inputs)? {
            (_, AnyChain::Multivector(a)) => certify_calibrated(&a, args.tol)?,
            _ => {
                return Err(Failure::Input(
                    "certify needs a varifold or a chain over Λ_m ℝ^N".into(),
                ))
            }
        }
    };
    let ok = cert.conclusion == Conclusion::CalibratedMinimizer;
    Ok((to_value(&cert), ok))
}

fn chain_input(inputs: &Inputs) -> Result<(Arc<EmbeddedComplex>, AnyChain), Failure> {
    let (_, k) = inputs.complex()?;
    let chain = inputs
        .chain
        .as_ref()
        .ok_or_else(|| Failure::Input("no chain supplied".into()))?
        .build(&k)?;
    Ok((k, chain))
}

fn refine<G: CoefficientGroup>(chain: Chain<G>, times: usize) -> Result<Chain<G>, Failure> {
    let mut chain = chain;
    for _ in 0..times {
        let (fine, corr) = chain.complex().subdivide(&SubdivisionRule::Barycentric)?;
        chain = chain.transport(&Arc::new(fine), &corr)?;
    }
    Ok(chain)
}

fn solver_or_default(args: &Args) -> Result<SolverConfig, Failure> {
    Ok(
        solver_config(args.solver_config.as_deref(), args.seed)?.unwrap_or(SolverConfig {
            seed: args.seed,
            ..SolverConfig::default()
        }),
    )
}

fn minimize(inputs: &Inputs, args: &Args) -> Outcome {
    let cfg = solver_or_default(args)?;
    let chain = if inputs.varifold.is_some() {
        let (_, v, _) = inputs.varifold()?;
        AnyChain::Multivector(v.chainify()?)
    } else {
        chain_input(inputs)?.1
    };
    match chain {
        AnyChain::Multivector(a) => {
            let calibrated = a.group().grade == a.dim() && !args.as_boundary;
            minimize_with(refine(a, args.refine)?, &cfg, args.as_boundary, |c| {
                calibrated.then(|| phi(c)).transpose()
            })
        }
        AnyChain::Real(a) => minimize_with(refine(a, args.refine)?, &cfg, args.as_boundary, |_| Ok(None)),
        _ => Err(Failure::Input("the solver supports ℝ and Λ_m ℝ^N coefficients".into())),
    }
}

fn minimize_with<G: VectorGroup + JsonGroup>(
    chain: Chain<G>,
    cfg: &SolverConfig,
    as_boundary: bool,
    lower: impl Fn(&Chain<G>) -> polycal::Result<Option<f64>>,
) -> Outcome {
    let (boundary, reference) = if as_boundary {
        (chain.clone(), None)
    } else {
        (chain.boundary()?, Some(chain.mass()))
    };
    let lower_bound = lower(&chain)?;
    let res = min_mass_fixed_boundary(&boundary, cfg, lower_bound)?;
    let ok = res.status == SolveStatus::Converged;
    Ok((
        json!({
            "complex": ComplexJson::from_complex(chain.complex(), None),
            "reference_mass": reference,
            "result": SolveResultJson::from_result(&res),
        }),
        ok,
    ))
}

fn flatnorm(inputs: &Inputs, args: &Args) -> Outcome {
    let cfg = solver_or_default(args)?;
    match chain_input(inputs)?.1 {
        AnyChain::Multivector(a) => {
            let p = if a.group().grade == a.dim() {
                Some(phi(&a)?)
            } else {
                None
            };
            flat_with(&a, &cfg, args.tol, p)
        }
        AnyChain::Real(a) => flat_with(&a, &cfg, args.tol, None),
        _ => Err(Failure::Input(
            "the flat norm supports ℝ and Λ_m ℝ^N coefficients".into(),
        )),
    }
}

fn flat_with<G: VectorGroup + JsonGroup>(a: &Chain<G>, cfg: &SolverConfig, tol: f64, p: Option<f64>) -> Outcome {
    let res = flat_norm_solve(a, cfg)?;
    let mass = a.mass();
    let ok = res.status == SolveStatus::Converged && res.value <= mass + tol && p.is_none_or(|p| p <= res.value + tol);
    Ok((
        json!({
            "value": res.value,
            "mass": mass,
            "phi": p,
            "filling": ChainJson::from_chain(&res.filling),
            "remainder": ChainJson::from_chain(&res.remainder),
            "status": res.status,
            "iterations": res.iterations,
            "restricted_to_complex": true,
        }),
        ok,
    ))
}

fn deform(inputs: &Inputs, args: &Args) -> Outcome {
    let (_, v, gamma) = inputs.varifold()?;
    let magnitude = args.magnitude.unwrap_or(0.1 * inputs.radius.unwrap_or(1.0));
    let report = match deform_experiment(&v, &gamma, args.trials, magnitude, args.seed) {
        Ok(r) => r,
        Err(polycal::Error::Precondition(msg)) => return Err(Failure::Check(msg)),
        Err(e) => return Err(e.into()),
    };
    let passed = report.passed;
    Ok((to_value(&report), passed))
}

fn groupnorm(inputs: &Inputs) -> Outcome {
    let req = inputs
        .groupnorm
        .as_ref()
        .ok_or_else(|| Failure::Input("groupnorm needs a {group, coords | value} document".into()))?;
    match req.group.build()? {
        AnyGroup::SubgroupMultivector(h) => subgroup_norm(&h, req),
        AnyGroup::SubgroupReal(h) => subgroup_norm(&h, req),
        AnyGroup::Multivector(g) => plain_norm(&g, req),
        AnyGroup::Real(g) => plain_norm(&g, req),
        AnyGroup::Integer(g) => plain_norm(&g, req),
    }
}

fn plain_norm<G: JsonGroup>(g: &G, req: &GroupNormRequest) -> Outcome {
    let value = req
        .value
        .as_ref()
        .ok_or_else(|| Failure::Input("a plain group needs `value`".into()))?;
    let e = g.decode(value)?;
    Ok((
        json!({ "group": g.descriptor(), "value": value, "norm": g.norm(&e) }),
        true,
    ))
}

fn subgroup_norm<G: JsonGroup>(h: &Subgroup<G>, req: &GroupNormRequest) -> Outcome {
    let element = match (&req.coords, &req.value) {
        (Some(coords), _) => h.element(coords.clone())?,
        (None, Some(v)) => h.represent(&h.ambient().decode(v)?)?,
        (None, None) => return Err(Failure::Input("groupnorm needs `coords` or `value`".into())),
    };
    let norm = h.norm(&element);
    let cheapest = h
        .cheapest_representation(&element.value, h.representation_cost(&element.coords))
        .map(|(c, _)| c);
    let ball = match req.lambda {
        Some(lambda) => Some(
            h.norm_ball(lambda)?
                .into_iter()
                .map(|b| json!({ "coords": b.coords, "value": h.ambient().encode(&b.value), "norm": b.norm }))
                .collect::<Vec<_>>(),
        ),
        None => None,
    };
    Ok((
        json!({
            "group": h.descriptor(),
            "coords": element.coords,
            "value": h.ambient().encode(&element.value),
            "norm": norm,
            "ambient_norm": h.ambient().norm(&element.value),
            "cheapest_coords": cheapest,
            "integral_norms": h.integrality_check(),
            "lambda": req.lambda,
            "ball": ball,
        }),
        true,
    ))
}

fn demo(inputs: &Inputs, args: &Args) -> Outcome {
    let name: ExampleName = args
        .name
        .as_deref()
        .ok_or_else(|| Failure::Input("demo needs an example name".into()))?
        .parse()?;
    let params = ExampleParams {
        radius: args.radius,
        refinement: args.refinement,
        net: inputs.net.clone(),
    };
    let ex = generate_example(name, &params)?;
    Ok((to_value(&Bundle::from_example(&ex)), true))
}
