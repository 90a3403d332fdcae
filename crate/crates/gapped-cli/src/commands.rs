//! Subcommand implementations.

use std::path::Path;

use gapped::scalar::Exact;
use gapped::{rat, Rat};
use serde_json::{json, Value};

use crate::{sig12, FixtureKind, IndexMode, Outcome, ToleranceProfile};

fn read_json(path: &Path) -> Result<Value, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Outcome::InputError(format!("/: {e}")))
}

fn parse_rat(s: &str, path: &str) -> Result<Rat, Outcome> {
    Rat::parse_ratio(s).ok_or_else(|| Outcome::InputError(format!("{path}: bad rational {s:?}")))
}

pub mod novikov_cmd {
    use super::*;
    use gapped::Nov;

    pub fn run(input: &Path, cap: Option<&str>) -> Outcome {
        match run_inner(input, cap) {
            Ok(v) => Outcome::Success(v),
            Err(o) => o,
        }
    }

    fn run_inner(input: &Path, cap_flag: Option<&str>) -> Result<Value, Outcome> {
        let value = read_json(input)?;
        let op = value
            .get("op")
            .and_then(Value::as_str)
            .ok_or_else(|| Outcome::InputError("/op: missing".into()))?;
        let args = value
            .get("args")
            .and_then(Value::as_array)
            .ok_or_else(|| Outcome::InputError("/args: missing".into()))?;
        let scalars: Vec<Nov> = args
            .iter()
            .enumerate()
            .map(|(i, a)| {
                serde_json::from_value(a.clone())
                    .map_err(|e| Outcome::InputError(format!("/args/{i}: {e}")))
            })
            .collect::<Result<_, _>>()?;
        let cap = match (value.get("cap").and_then(Value::as_str), cap_flag) {
            (Some(s), _) => Some(parse_rat(s, "/cap")?),
            (None, Some(s)) => Some(parse_rat(s, "--cap")?),
            (None, None) => None,
        };
        let need = |n: usize| -> Result<(), Outcome> {
            if scalars.len() != n {
                Err(Outcome::InputError(format!("/args: expected {n} scalars")))
            } else {
                Ok(())
            }
        };
        let result = match op {
            "add" => {
                need(2)?;
                json!({ "result": scalars[0].add(&scalars[1]) })
            }
            "mul" => {
                need(2)?;
                json!({ "result": scalars[0].mul(&scalars[1]) })
            }
            "valuation" => {
                need(1)?;
                json!({ "result": scalars[0].valuation().map(|v| v.format_ratio()) })
            }
            "invert" => {
                need(1)?;
                let cap = cap.ok_or_else(|| {
                    Outcome::InputError("/cap: required for inversion".into())
                })?;
                match scalars[0].invert(&cap) {
                    Ok(inv) => json!({ "result": inv }),
                    Err(e) => return Err(Outcome::InputError(format!("/args/0: {e}"))),
                }
            }
            other => return Err(Outcome::InputError(format!("/op: unknown {other:?}"))),
        };
        Ok(result)
    }
}

pub mod spectral_cmd {
    use super::*;
    use gapped::filtered::WireComplex;
    use gapped::spectral::{
        compute_pages, detect_gap, stabilization, vanishing_criterion, FiltrationScheme,
    };
    use gapped::Complex;

    pub fn run(input: &Path, step: Option<&str>, rmax: usize) -> Outcome {
        match run_inner(input, step, rmax) {
            Ok(v) => Outcome::Success(v),
            Err(o) => o,
        }
    }

    fn run_inner(input: &Path, step: Option<&str>, rmax: usize) -> Result<Value, Outcome> {
        let value = read_json(input)?;
        let wire: WireComplex = serde_json::from_value(value)
            .map_err(|e| Outcome::InputError(format!("/: {e}")))?;
        let complex = Complex::from_wire(&wire).map_err(Outcome::InputError)?;
        let report = complex.check();
        if !report.passed() {
            return Err(Outcome::InputError(format!(
                "/differential: {}",
                report.violations[0]
            )));
        }
        let scheme = match step {
            Some(s) => FiltrationScheme::new(&complex, parse_rat(s, "--step")?),
            None => FiltrationScheme::default_for(&complex),
        }
        .map_err(|e| Outcome::InputError(format!("--step: {e}")))?;
        let pages = compute_pages(&complex, &scheme, rmax)
            .map_err(|e| Outcome::InputError(format!("/: {e}")))?;
        let stab = stabilization(&complex, &pages);
        let vanish = vanishing_criterion(&complex);
        let pages_json: Vec<Value> = pages
            .pages
            .iter()
            .map(|p| {
                json!({
                    "r": p.r,
                    "cells": p.cells.iter().map(|c| json!({"p": c.p, "q": c.q, "rank": c.rank})).collect::<Vec<_>>(),
                })
            })
            .collect();
        Ok(json!({
            "gap": detect_gap(&complex).map(|g| g.format_ratio()),
            "step": scheme.step().format_ratio(),
            "layers": pages.layers,
            "pages": pages_json,
            "stabilized_at": stab.stabilized_at,
            "matches_homology": stab.matches_homology,
            "vanishing_criterion": vanish.criterion,
            "vanishing_confirmed": vanish.elimination_confirms,
        }))
    }
}

pub mod triangle_cmd {
    use super::*;
    use gapped::triangle::{
        assemble_cone, check_hypotheses, extract_les, vanishing_lemma, TriangleData, WireTriangle,
    };

    pub fn run(input: &Path) -> Outcome {
        match run_inner(input) {
            Ok(v) => v,
            Err(o) => o,
        }
    }

    fn run_inner(input: &Path) -> Result<Outcome, Outcome> {
        let value = read_json(input)?;
        let wire: WireTriangle = serde_json::from_value(value)
            .map_err(|e| Outcome::InputError(format!("/: {e}")))?;
        let t = TriangleData::<Rat>::from_wire(&wire).map_err(Outcome::InputError)?;
        if !t.chain_identities_hold() {
            return Ok(Outcome::Negative(json!({
                "hypotheses": { "chain_identities": false },
                "exact": false,
            })));
        }
        let hyp = check_hypotheses(&t);
        if !hyp.all_pass() {
            return Ok(Outcome::Negative(json!({
                "hypotheses": { "pass": false, "failures": hyp.failures },
                "exact": false,
            })));
        }
        let cone = match assemble_cone(&t) {
            Ok(c) => c,
            Err(e) => return Ok(Outcome::Negative(json!({ "cone": format!("{e}") }))),
        };
        let vanish = match vanishing_lemma(&cone, &t.epsilon) {
            Ok(v) => v,
            Err(e) => return Ok(Outcome::Negative(json!({ "vanishing": format!("{e}") }))),
        };
        let les = match extract_les(&t) {
            Ok(l) => l,
            Err(e) => return Ok(Outcome::Negative(json!({ "les": format!("{e}") }))),
        };
        let nodes: Vec<Value> = les
            .nodes
            .iter()
            .map(|n| {
                json!({
                    "space": n.space,
                    "degree": n.degree,
                    "dim": n.dim,
                    "rank_in": n.rank_in,
                    "rank_out": n.rank_out,
                    "exact": n.exact,
                })
            })
            .collect();
        let exact = les.exact_everywhere();
        let report = json!({
            "hypotheses": { "pass": true },
            "cone_acyclic": vanish.certified(),
            "nodes": nodes,
            "exact": exact,
        });
        Ok(if exact { Outcome::Success(report) } else { Outcome::Negative(report) })
    }
}

pub mod ainfty_cmd {
    use super::*;
    use gapped::ainfty::{
        deform as deform_fn, mc_solve, relation_check, AInftyData, BoundingCochain, McOutcome,
        WireAInfty,
    };
    use gapped::Nov;

    fn load(input: &Path) -> Result<AInftyData<Rat>, Outcome> {
        let value = read_json(input)?;
        let wire: WireAInfty = serde_json::from_value(value)
            .map_err(|e| Outcome::InputError(format!("/: {e}")))?;
        AInftyData::from_wire(&wire).map_err(Outcome::InputError)
    }

    pub fn check(input: &Path) -> Outcome {
        let a = match load(input) {
            Ok(a) => a,
            Err(o) => return o,
        };
        let report = relation_check(&a);
        let witnesses: Vec<Value> = report
            .witnesses
            .iter()
            .take(10)
            .map(|w| {
                json!({
                    "arity": w.arity,
                    "tuple": w.tuple.iter().map(|&g| a.generators()[g].name.clone()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let value = json!({ "passed": report.passed(), "witnesses": witnesses });
        if report.passed() {
            Outcome::Success(value)
        } else {
            Outcome::Negative(value)
        }
    }

    pub fn solve(input: &Path) -> Outcome {
        let a = match load(input) {
            Ok(a) => a,
            Err(o) => return o,
        };
        match mc_solve(&a) {
            Ok(McOutcome::Solved(b)) => {
                let coords: Vec<Value> = b
                    .coords
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| !s.is_zero())
                    .map(|(g, s)| json!({"generator": a.generators()[g].name, "scalar": s}))
                    .collect();
                Outcome::Success(json!({ "solved": true, "cochain": coords }))
            }
            Ok(McOutcome::Obstructed { level, class }) => Outcome::Negative(json!({
                "solved": false,
                "obstruction_level": level.format_ratio(),
                "class": class
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| *c != &rat(0, 1))
                    .map(|(g, c)| json!({"generator": a.generators()[g].name, "coeff": c.format_ratio()}))
                    .collect::<Vec<_>>(),
            })),
            Err(e) => Outcome::InputError(format!("/: {e}")),
        }
    }

    pub fn deform(input: &Path, cochain: &Path) -> Outcome {
        let a = match load(input) {
            Ok(a) => a,
            Err(o) => return o,
        };
        let cvalue = match read_json(cochain) {
            Ok(v) => v,
            Err(o) => return o,
        };
        let mut coords = vec![Nov::zero().truncate(a.cap().clone()); a.generators().len()];
        let Some(list) = cvalue.as_array() else {
            return Outcome::InputError("/: cochain must be a list".into());
        };
        for (n, item) in list.iter().enumerate() {
            let name = item.get("generator").and_then(Value::as_str);
            let Some(name) = name else {
                return Outcome::InputError(format!("/{n}/generator: missing"));
            };
            let Some(idx) = a.generators().iter().position(|g| g.name == name) else {
                return Outcome::InputError(format!("/{n}/generator: unknown {name:?}"));
            };
            let scalar: Nov = match serde_json::from_value(
                item.get("scalar").cloned().unwrap_or(Value::Null),
            ) {
                Ok(s) => s,
                Err(e) => return Outcome::InputError(format!("/{n}/scalar: {e}")),
            };
            coords[idx] = coords[idx].add(&scalar);
        }
        match deform_fn(&a, &BoundingCochain { coords }) {
            Ok(d) => {
                let wire = d.algebra.to_wire();
                Outcome::Success(json!({
                    "mc_solved": d.mc_solved,
                    "algebra": serde_json::to_value(&wire).expect("wire"),
                }))
            }
            Err(e) => Outcome::InputError(format!("/: {e}")),
        }
    }
}

pub mod index_cmd {
    use super::*;
    use gapped::dims::{disc_moduli_dimension, sft_dimension, OrbitIndex};
    use gapped::maslov::{
        loop_maslov, maslov_morse, rotating_line, rotating_plane, rs_index_doubled,
        LagrangianPath,
    };

    pub fn run(mode: IndexMode, input: &Path) -> Outcome {
        match run_inner(mode, input) {
            Ok(v) => v,
            Err(o) => o,
        }
    }

    fn parse_path(v: &Value, at: &str) -> Result<LagrangianPath<f64>, Outcome> {
        if let Some(rot) = v.get("rotation") {
            let angle_pi = rot.get("angle_pi").and_then(Value::as_f64).unwrap_or(1.0);
            let samples = rot.get("samples").and_then(Value::as_u64).unwrap_or(32) as usize;
            let n = rot.get("n").and_then(Value::as_u64).unwrap_or(1) as usize;
            let angle = angle_pi * std::f64::consts::PI;
            return Ok(if n == 1 {
                rotating_line(angle, samples)
            } else {
                rotating_plane(n, angle, samples)
            });
        }
        let frames = v
            .get("frames")
            .and_then(Value::as_array)
            .ok_or_else(|| Outcome::InputError(format!("{at}/frames: missing")))?;
        let mut parsed = Vec::new();
        for (k, f) in frames.iter().enumerate() {
            let cols: Vec<Vec<f64>> = serde_json::from_value(f.clone())
                .map_err(|e| Outcome::InputError(format!("{at}/frames/{k}: {e}")))?;
            parsed.push(cols);
        }
        let times: Vec<f64> = match v.get("times") {
            Some(t) => serde_json::from_value(t.clone())
                .map_err(|e| Outcome::InputError(format!("{at}/times: {e}")))?,
            None => (0..parsed.len()).map(|k| k as f64 / (parsed.len() - 1).max(1) as f64).collect(),
        };
        LagrangianPath::new(parsed, times)
            .map_err(|e| Outcome::InputError(format!("{at}: {e}")))
    }

    fn run_inner(mode: IndexMode, input: &Path) -> Result<Outcome, Outcome> {
        let value = read_json(input)?;
        match mode {
            IndexMode::Loop => {
                let path = parse_path(&value, "/")?;
                match loop_maslov(&path) {
                    Ok(w) => Ok(Outcome::Success(json!({ "winding": w }))),
                    Err(e) => Err(Outcome::InputError(format!("/: {e}"))),
                }
            }
            IndexMode::Rs => {
                let path = parse_path(&value, "/")?;
                let reference: Vec<Vec<f64>> = serde_json::from_value(
                    value.get("reference").cloned().unwrap_or(Value::Null),
                )
                .map_err(|e| Outcome::InputError(format!("/reference: {e}")))?;
                match rs_index_doubled(&path, &reference) {
                    Ok(d) => Ok(Outcome::Success(
                        json!({ "doubled_index": d, "index": d as f64 / 2.0 }),
                    )),
                    Err(e) => Err(Outcome::InputError(format!("/: {e}"))),
                }
            }
            IndexMode::Mm => {
                let edges = ["bottom", "right", "top", "left"];
                let mut paths = Vec::new();
                for e in edges {
                    let v = value
                        .get(e)
                        .ok_or_else(|| Outcome::InputError(format!("/{e}: missing")))?;
                    paths.push(parse_path(v, &format!("/{e}"))?);
                }
                match maslov_morse(&paths[0], &paths[1], &paths[2], &paths[3]) {
                    Ok(m) => Ok(Outcome::Success(json!({ "index": m }))),
                    Err(e) => Err(Outcome::InputError(format!("/: {e}"))),
                }
            }
            IndexMode::Dim => {
                if let Some(disc) = value.get("disc") {
                    let n = disc.get("n").and_then(Value::as_i64).unwrap_or(2);
                    let mu = disc.get("mu").and_then(Value::as_i64).unwrap_or(0);
                    let k = disc.get("k").and_then(Value::as_i64).unwrap_or(0);
                    return Ok(Outcome::Success(
                        json!({ "dimension": disc_moduli_dimension(n, mu, k) }),
                    ));
                }
                let n = value.get("n").and_then(Value::as_i64).unwrap_or(2);
                let c1 = value.get("c1").and_then(Value::as_i64).unwrap_or(0);
                let index = if let Some(m) = value.get("morse").and_then(Value::as_i64) {
                    OrbitIndex::Morse(m)
                } else if let Some(cz2) = value.get("cz_doubled").and_then(Value::as_i64) {
                    OrbitIndex::CzDoubled(cz2)
                } else {
                    return Err(Outcome::InputError("/: need morse or cz_doubled".into()));
                };
                let d = sft_dimension(n, index, c1);
                Ok(Outcome::Success(json!({
                    "dimension": d.dimension,
                    "empty_for_generic": d.empty_for_generic,
                })))
            }
        }
    }

}

pub mod dehn_cmd {
    use super::*;
    use gapped::dehn::{
        apply_matrix, differential, k_lambda, liouville, model_dehn_twist, phi_map,
        project_quadric_tangent, project_to_quadric, push_forward, quadric_liouville,
        quadric_value, random_orthogonal, random_point, random_tangent, sigma, symplectic_form,
        CotangentPoint, TwistProfile, FD_STEP,
    };
    use num_complex::Complex;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub fn run(
        n: usize,
        lambda: f64,
        delta: f64,
        samples: usize,
        seed: u64,
        profile_kind: ToleranceProfile,
    ) -> Outcome {
        let prof = TwistProfile::<f64>::new(1.0, delta);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pi = std::f64::consts::PI;

        // Endpoint identities of the rotation.
        let p0 = random_point::<f64, _>(&mut rng, n, 0.1, 0.9);
        let ident = sigma(&p0, 0.0).expect("identity");
        let anti = sigma(&p0, pi).expect("antipode");
        let sigma_identity = point_distance(&p0, &ident);
        let sigma_antipode = point_distance(&p0.antipode(), &anti);

        // Flow composition.
        let mut flow_max: f64 = 0.0;
        for _ in 0..samples {
            let p = random_point::<f64, _>(&mut rng, n, 0.1, 1.5);
            let (s, t) = (rng.gen_range(0.0..1.2), rng.gen_range(0.0..1.2));
            let a = sigma(&sigma(&p, t).expect("flow"), s).expect("flow");
            let b = sigma(&p, s + t).expect("flow");
            flow_max = flow_max.max(point_distance(&a, &b));
        }

        // Symplecticity of the twist.
        let mut sympl_max: f64 = 0.0;
        for _ in 0..samples {
            let p = random_point::<f64, _>(&mut rng, n, 0.02, lambda * 0.95);
            let xi = random_tangent(&mut rng, &p);
            let eta = random_tangent(&mut rng, &p);
            let map = |pt: &CotangentPoint<f64>| model_dehn_twist(pt, &prof, lambda);
            let dxi = push_forward(map, &p, &xi, FD_STEP);
            let deta = push_forward(map, &p, &eta, FD_STEP);
            sympl_max =
                sympl_max.max((symplectic_form(&xi, &eta) - symplectic_form(&dxi, &deta)).abs());
        }

        // Exactness of the twist.
        let mut exact_max: f64 = 0.0;
        for _ in 0..samples {
            let p = random_point::<f64, _>(&mut rng, n, 0.05, lambda * 0.95);
            let xi = random_tangent(&mut rng, &p);
            let map = |pt: &CotangentPoint<f64>| model_dehn_twist(pt, &prof, lambda);
            let q = map(&p);
            let dxi = push_forward(map, &p, &xi, FD_STEP);
            let pulled = liouville(&q, &dxi);
            let here = liouville(&p, &xi);
            let dk = differential(
                |pt: &CotangentPoint<f64>| k_lambda(&prof, lambda, pt.mu()),
                &p,
                &xi,
                FD_STEP,
            );
            exact_max = exact_max.max((pulled - here - dk).abs());
        }

        // Profile functional equation.
        let mut feq_max: f64 = 0.0;
        for k in 0..=300 {
            let t = lambda / 2.0 * (k as f64 / 300.0);
            let r_l = |t: f64| lambda * prof.r(t / lambda);
            feq_max = feq_max.max((r_l(-t) - (r_l(t) - t)).abs());
        }

        // Equivariance of the twist and of the chart; chart pullback.
        let mut equiv_max: f64 = 0.0;
        let mut phi_equiv_max: f64 = 0.0;
        let mut phi_pull_max: f64 = 0.0;
        for _ in 0..samples.min(60) {
            let p = random_point::<f64, _>(&mut rng, n, 0.02, lambda * 0.95);
            let a = random_orthogonal::<f64, _>(&mut rng, n + 1);
            let pa = CotangentPoint { u: apply_matrix(&a, &p.u), v: apply_matrix(&a, &p.v) };
            let qa = model_dehn_twist(&pa, &prof, lambda);
            let q = model_dehn_twist(&p, &prof, lambda);
            let aq = CotangentPoint { u: apply_matrix(&a, &q.u), v: apply_matrix(&a, &q.v) };
            equiv_max = equiv_max.max(point_distance(&qa, &aq));

            let x = random_quadric(&mut rng, n);
            debug_assert!(quadric_value(&x).norm() < 1e-10);
            let ax = {
                let re: Vec<f64> = x.iter().map(|z| z.re).collect();
                let im: Vec<f64> = x.iter().map(|z| z.im).collect();
                let are = apply_matrix(&a, &re);
                let aim = apply_matrix(&a, &im);
                are.iter().zip(aim.iter()).map(|(&r, &i)| Complex::new(r, i)).collect::<Vec<_>>()
            };
            let left = phi_map(&ax).expect("off the singularity");
            let pp = phi_map(&x).expect("off the singularity");
            let right = CotangentPoint { u: apply_matrix(&a, &pp.u), v: apply_matrix(&a, &pp.v) };
            phi_equiv_max = phi_equiv_max.max(point_distance(&left, &right));

            let raw: Vec<Complex<f64>> = (0..=n)
                .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let xi = project_quadric_tangent(&x, &raw);
            let walk = |s: f64| -> CotangentPoint<f64> {
                let y: Vec<Complex<f64>> = x
                    .iter()
                    .zip(xi.iter())
                    .map(|(a, b)| *a + Complex::new(s, 0.0) * *b)
                    .collect();
                phi_map(&project_to_quadric(&y)).expect("projection stays off zero")
            };
            let plus = walk(FD_STEP);
            let minus = walk(-FD_STEP);
            let dphi = gapped::dehn::Tangent {
                du: plus
                    .u
                    .iter()
                    .zip(minus.u.iter())
                    .map(|(a, b)| (a - b) / (2.0 * FD_STEP))
                    .collect(),
                dv: plus
                    .v
                    .iter()
                    .zip(minus.v.iter())
                    .map(|(a, b)| (a - b) / (2.0 * FD_STEP))
                    .collect(),
            };
            phi_pull_max =
                phi_pull_max.max((liouville(&pp, &dphi) - quadric_liouville(&x, &xi)).abs());
        }

        let wobbly = prof.wobble_check(Some(delta), 600);
        let (tol_sigma, tol_sympl, tol_exact, tol_feq, tol_equiv, tol_pull) =
            match profile_kind {
                ToleranceProfile::Strict => (1e-13, 1e-7, 1e-5, 1e-13, 1e-11, 1e-5),
                ToleranceProfile::Default => (1e-12, 1e-6, 1e-4, 1e-12, 1e-10, 1e-4),
            };
        let pass = sigma_identity <= tol_sigma
            && sigma_antipode <= tol_sigma
            && flow_max <= 1e-9
            && sympl_max <= tol_sympl
            && exact_max <= tol_exact
            && feq_max <= tol_feq
            && equiv_max <= tol_equiv
            && phi_equiv_max <= tol_equiv
            && phi_pull_max <= tol_pull
            && wobbly;
        let report = json!({
            "n": n,
            "lambda": sig12(lambda),
            "samples": samples,
            "residuals": {
                "sigma_identity": sig12(sigma_identity),
                "sigma_antipode": sig12(sigma_antipode),
                "flow_composition": sig12(flow_max),
                "symplecticity": sig12(sympl_max),
                "exactness": sig12(exact_max),
                "profile_functional_equation": sig12(feq_max),
                "twist_equivariance": sig12(equiv_max),
                "chart_equivariance": sig12(phi_equiv_max),
                "chart_pullback": sig12(phi_pull_max),
            },
            "wobbly": wobbly,
            "pass": pass,
        });
        if pass {
            Outcome::Success(report)
        } else {
            Outcome::Negative(report)
        }
    }

    fn point_distance(a: &CotangentPoint<f64>, b: &CotangentPoint<f64>) -> f64 {
        let mut m: f64 = 0.0;
        for (x, y) in a.u.iter().zip(b.u.iter()).chain(a.v.iter().zip(b.v.iter())) {
            m = m.max((x - y).abs());
        }
        m
    }

    fn random_quadric(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex<f64>> {
        loop {
            let a: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut b: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let na = (a.iter().map(|x| x * x).sum::<f64>()).sqrt();
            if na < 0.2 {
                continue;
            }
            let d = a.iter().zip(b.iter()).map(|(x, y)| x * y).sum::<f64>() / (na * na);
            for (x, y) in b.iter_mut().zip(a.iter()) {
                *x -= d * *y;
            }
            let nb = (b.iter().map(|x| x * x).sum::<f64>()).sqrt();
            if nb < 0.2 {
                continue;
            }
            for x in b.iter_mut() {
                *x *= na / nb;
            }
            return a.iter().zip(b.iter()).map(|(&re, &im)| Complex::new(re, im)).collect();
        }
    }
}

pub mod fixture_cmd {
    use super::*;
    use gapped::fixtures;

    pub fn run(kind: FixtureKind, seed: u64) -> Outcome {
        let value = match kind {
            FixtureKind::GappedComplex => {
                let c = fixtures::gapped_complex(seed, 10, false);
                serde_json::to_value(c.to_wire()).expect("wire")
            }
            FixtureKind::AcyclicComplex => {
                let c = fixtures::gapped_complex(seed, 10, true);
                serde_json::to_value(c.to_wire()).expect("wire")
            }
            FixtureKind::Triangle => {
                let t = fixtures::triangle_fixture(seed, 3);
                serde_json::to_value(t.to_wire()).expect("wire")
            }
            FixtureKind::AinftyAssoc => {
                let a = fixtures::ainfty_assoc(seed, 4);
                serde_json::to_value(a.to_wire()).expect("wire")
            }
            FixtureKind::AinftySolvable => {
                let (a, _) = fixtures::ainfty_solvable(seed, 3);
                serde_json::to_value(a.to_wire()).expect("wire")
            }
            FixtureKind::AinftyObstructed => {
                let (a, _) = fixtures::ainfty_obstructed(seed, 3);
                serde_json::to_value(a.to_wire()).expect("wire")
            }
        };
        Outcome::Success(value)
    }
}
