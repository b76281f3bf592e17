use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use permsym::casebook::{self, CoinMeasure, Riemann};
use permsym::hilbert::{AsOperator, DensityOperator, Operator, StateVector};
use permsym::linalg::{MatrixJson, VectorJson};
use permsym::models::{self, ModelJson, Theory, TheoryJson};
use permsym::sectors::{self, SectorProjectors};
use permsym::symmetriser;
use permsym::{AssemblyConfig, PermutationRep};

use crate::{read_input, CliError, Dims, Format, Measure, Report};

pub struct Context {
    pub tolerance: f64,
    pub format: Format,
}

impl Context {
    fn json_only(&self, command: &str) -> Result<(), CliError> {
        if self.format != Format::Json {
            return Err(CliError::Usage(format!("{command} only writes JSON")));
        }
        Ok(())
    }
}

fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("reports serialise")
}

fn ok(body: String) -> Result<Report, CliError> {
    Ok(Report { body, passed: true })
}

fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed {what} JSON: {e}")))
}

/// A matrix given bare or as the `matrix` field of an earlier report.
fn parse_matrix(text: &str) -> Result<MatrixJson, CliError> {
    let value: Value = parse_json(text, "matrix")?;
    let inner = match value {
        Value::Object(mut map) if map.contains_key("matrix") => map.remove("matrix").unwrap_or_default(),
        other => other,
    };
    serde_json::from_value(inner).map_err(|e| CliError::Input(format!("malformed matrix JSON: {e}")))
}

fn config(dims: &Dims) -> Result<AssemblyConfig, CliError> {
    Ok(AssemblyConfig::new(dims.n, dims.d)?)
}

fn complex_json(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn decompose(ctx: &Context, dims: &Dims, seed: u64) -> Result<Report, CliError> {
    let rep = PermutationRep::new(config(dims)?)?;
    let sectors = SectorProjectors::new(&rep);
    let [s, a, p] = sectors.ranks()?;
    let table = permsym::CharacterTable::new(dims.n)?;
    let mut components = Vec::new();
    let mut worst_invariance = 0.0f64;
    let mut irreducible = true;
    let mut text = format!("S {s}\nA {a}\nP {p}\n");
    for lambda in table.irreps() {
        let comp = sectors::isotypic_projector(lambda, &rep, &table)?;
        let rays = sectors::generalised_rays_seeded(&comp, &rep, seed)?;
        let _ = writeln!(
            text,
            "{lambda:?} rank {} irrep_dim {} multiplicity {}",
            comp.rank(),
            comp.irrep_dim(),
            comp.multiplicity()
        );
        let mut bases = Vec::new();
        for ray in &rays {
            worst_invariance = worst_invariance.max(ray.invariance_residual(&rep));
            irreducible &= ray.commutant_dimension(&rep)? == 1;
            bases.push(MatrixJson::from_matrix(ray.basis()));
        }
        components.push(json!({
            "label": lambda,
            "rank": comp.rank(),
            "irrep_dim": comp.irrep_dim(),
            "multiplicity": comp.multiplicity(),
            "rays": bases,
        }));
    }
    let passed = worst_invariance <= ctx.tolerance.max(permsym::EPS_RANK) && irreducible;
    let body = match ctx.format {
        Format::Json => to_json(&json!({
            "n": dims.n,
            "d": dims.d,
            "seed": seed,
            "tolerance": ctx.tolerance,
            "ranks": {"S": s, "A": a, "P": p},
            "components": components,
            "max_invariance_residual": worst_invariance,
            "irreducible": irreducible,
        })),
        Format::Text => text,
        Format::Csv => return Err(CliError::Usage("decompose writes JSON or text".into())),
    };
    Ok(Report { body, passed })
}

pub fn symmetrise(ctx: &Context, dims: &Dims, input: &str) -> Result<Report, CliError> {
    ctx.json_only("symmetrise")?;
    let config = config(dims)?;
    let rep = PermutationRep::new(config)?;
    let a = Operator::new(config, parse_matrix(&read_input(input)?)?.to_matrix()?)?;
    let out = symmetriser::symmetrise(&rep, &a)?;
    let residual = rep.max_commutator(out.matrix());
    Ok(Report {
        body: to_json(&json!({
            "n": dims.n,
            "d": dims.d,
            "seed": null,
            "tolerance": ctx.tolerance,
            "commutator_residual": residual,
            "matrix": MatrixJson::from_matrix(out.matrix()),
        })),
        passed: residual <= ctx.tolerance,
    })
}

pub fn verify_identities(ctx: &Context, dims: &Dims, samples: usize, seed: u64) -> Result<Report, CliError> {
    ctx.json_only("verify-identities")?;
    let report = symmetriser::verify_identities(config(dims)?, samples, seed, ctx.tolerance)?;
    Ok(Report { body: to_json(&report), passed: report.passed })
}

pub fn classify(ctx: &Context, dims: &Dims, input: Option<&str>, basis: Option<&str>) -> Result<Report, CliError> {
    ctx.json_only("classify")?;
    let config = config(dims)?;
    let state = match (input, basis) {
        (Some(path), _) => {
            let v: VectorJson = parse_json(&read_input(path)?, "vector")?;
            StateVector::normalized(config, v.to_vector()?)?
        }
        (None, Some(label)) => {
            let digits = label
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Usage(format!("bad basis label '{label}': {e}")))?;
            StateVector::basis(config, &digits)?
        }
        (None, None) => return Err(CliError::Usage("classify needs --input or --basis".into())),
    };
    let rep = PermutationRep::new(config)?;
    let sectors = SectorProjectors::new(&rep);
    let c = sectors::classify_vector(&state, &sectors)?;
    let moved: Vec<String> = sectors::non_fixing_permutations(&rep, &state).map(|p| p.cycle_string()).collect();
    ok(to_json(&json!({
        "n": dims.n,
        "d": dims.d,
        "seed": null,
        "tolerance": ctx.tolerance,
        "label": c.label,
        "norms": {"S": c.norms[0], "A": c.norms[1], "P": c.norms[2]},
        "non_fixing_permutations": moved,
    })))
}

pub fn superselect(ctx: &Context, dims: &Dims, input: &str) -> Result<Report, CliError> {
    ctx.json_only("superselect")?;
    let config = config(dims)?;
    let rep = PermutationRep::new(config)?;
    let w = DensityOperator::new(config, parse_matrix(&read_input(input)?)?.to_matrix()?)?;
    let sectors = SectorProjectors::new(&rep);
    let family: Vec<_> = sectors.family().into_iter().cloned().collect();
    let cut = symmetriser::superselect(&w, &family)?;
    let sp = symmetriser::satisfies_sp(&rep, &sectors, &cut)?;
    ok(to_json(&json!({
        "n": dims.n,
        "d": dims.d,
        "seed": null,
        "tolerance": ctx.tolerance,
        "satisfies_sp": sp,
        "matrix": MatrixJson::from_matrix(cut.matrix()),
    })))
}

pub fn coins(ctx: &Context, measure: Measure) -> Result<Report, CliError> {
    let measure = match measure {
        Measure::Bose => CoinMeasure::Bose,
        Measure::Mb => CoinMeasure::MaxwellBoltzmann,
        Measure::Fd => CoinMeasure::FermiDirac,
    };
    let stats = casebook::coin_statistics(measure);
    match ctx.format {
        Format::Json => ok(serde_json::to_string(&stats).expect("serialises")),
        Format::Text => ok(stats.outcomes.iter().map(|(l, p)| format!("{l} {p}\n")).collect()),
        Format::Csv => {
            let mut s = String::from("outcome,probability\n");
            for (l, p) in &stats.outcomes {
                let _ = writeln!(s, "{l},{p}");
            }
            ok(s)
        }
    }
}

fn parse_complex(text: &str, flag: &str) -> Result<Complex64, CliError> {
    Complex64::from_str(text.trim())
        .map_err(|_| CliError::Usage(format!("--{flag}: '{text}' is not a complex number like 1+0i")))
}

pub fn bloch(ctx: &Context, xi: &str, eta: &str) -> Result<Report, CliError> {
    ctx.json_only("bloch without --sweep")?;
    let (xi, eta) = (parse_complex(xi, "xi")?, parse_complex(eta, "eta")?);
    let point = casebook::bloch_point(xi, eta)?;
    let z = match point.z {
        Riemann::Finite(z) => json!(complex_json(z)),
        Riemann::Infinity => json!("infinity"),
    };
    ok(to_json(&json!({
        "xi": complex_json(xi),
        "eta": complex_json(eta),
        "seed": null,
        "tolerance": ctx.tolerance,
        "z": z,
        "p": point.p,
        "q": complex_json(point.q),
        "height": point.height,
        "planar": complex_json(point.planar),
        "sphere": point.sphere(),
    })))
}

/// Header of the `bloch --sweep` CSV.
pub const SWEEP_HEADER: &str = "re_z,im_z,p,re_q,im_q,x,y,up";

/// A K×K grid of z over [−radius, radius]², then the point at infinity
/// (written with empty z cells).
pub fn bloch_sweep(k: usize, radius: f64) -> Result<Report, CliError> {
    if k < 2 {
        return Err(CliError::Usage("--sweep needs at least 2 points per axis".into()));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(CliError::Usage("--radius must be positive".into()));
    }
    let step = 2.0 * radius / (k - 1) as f64;
    let mut out = format!("{SWEEP_HEADER}\n");
    for i in 0..k {
        for j in 0..k {
            let z = Complex64::new(-radius + step * i as f64, -radius + step * j as f64);
            let pt = casebook::point_from_z(z);
            let [x, y, up] = pt.sphere();
            let _ = writeln!(out, "{},{},{},{},{},{x},{y},{up}", z.re, z.im, pt.p, pt.q.re, pt.q.im);
        }
    }
    let _ = writeln!(out, ",,0,0,0,0,0,-1");
    ok(out)
}

pub fn fig3(ctx: &Context, seed: u64) -> Result<Report, CliError> {
    ctx.json_only("fig3")?;
    let report = casebook::fig3_analysis(seed)?;
    let mut value = serde_json::to_value(&report).expect("serialises");
    value["seed"] = json!(seed);
    Ok(Report { body: to_json(&value), passed: report.passed })
}

pub fn model(input: &str, formula: Option<&str>) -> Result<Report, CliError> {
    let m = parse_json::<ModelJson>(&read_input(input)?, "model")?.to_model()?;
    let class = models::permute_class(&m)?;
    let mut value = json!({
        "model": m.to_json(),
        "symmetric": models::is_symmetric_model(&m)?,
        "fully_symmetric": models::is_fully_symmetric_model(&m)?,
        "permute_class_size": class.len(),
        "canonical_permute": models::canonical_permute(&m)?.to_json(),
        "permutes": class.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
        "state_description": models::state_description(&m).to_string(),
        "structure_description": models::structure_description(&m).to_string(),
    });
    if let Some(text) = formula {
        let f = models::parse_formula(text)?;
        value["formula"] = json!({"text": f.to_string(), "satisfied": models::satisfies(&m, &f)?});
    }
    ok(to_json(&value))
}

fn theory_summary(t: &Theory) -> Result<Value, CliError> {
    let gpc = t.gpc_check()?;
    let quotient = if gpc.permutable {
        let q = t.quotient_selection()?;
        json!(q
            .iter()
            .map(|(theta, ms)| (theta.clone(), ms.iter().map(|m| m.to_json()).collect::<Vec<_>>()))
            .collect::<BTreeMap<_, _>>())
    } else {
        Value::Null
    };
    Ok(json!({
        "permutable": gpc.permutable,
        "fixity": gpc.fixed,
        "gpc": gpc,
        "quotient": quotient,
    }))
}

pub fn theory(input: &str) -> Result<Report, CliError> {
    let t = Theory::from_json(&parse_json::<TheoryJson>(&read_input(input)?, "theory")?)?;
    let summary = theory_summary(&t)?;
    let passed = summary["gpc"]["violation"] == json!(false);
    Ok(Report { body: to_json(&summary), passed })
}

pub fn toy_theories() -> Result<Report, CliError> {
    let (renovators, scribes) = casebook::toy_theories();
    let mut out = serde_json::Map::new();
    let mut passed = true;
    for (name, t) in [("renovators", &renovators), ("scribes", &scribes)] {
        let mut summary = theory_summary(t)?;
        passed &= summary["gpc"]["violation"] == json!(false);
        summary["theory"] = serde_json::to_value(t.to_json()).expect("serialises");
        out.insert(name.to_string(), summary);
    }
    Ok(Report { body: to_json(&out), passed })
}
