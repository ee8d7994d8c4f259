//! Browser bindings: the rank profile of a catalog algebra, the sombrero
//! restoration sweep and the Euler-top flow. Each export returns a JSON
//! string; the plain functions behind them are what the tests call.

use pdsa_core::liealg::catalog;
use pdsa_core::poisson::{self, rank_scan, standard_loci, Sampler};
use pdsa_core::polyring::{parse_rational, MultiPoly, Rational};
use pdsa_core::strata::catalog_representation;
use pdsa_core::symbreak::{self, catalog_potential, NewtonConfig};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn to_js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// Exact and float rank on the standard loci of `algebra`.
pub fn rank_profile_json(algebra: &str, seed: u64) -> Result<String, String> {
    let spec = catalog(algebra).map_err(|e| e.to_string())?;
    let j = poisson::from_spec(&spec).map_err(|e| e.to_string())?;
    let loci = standard_loci(&spec).map_err(|e| e.to_string())?;
    let report = rank_scan(&j, &spec.name, &Sampler::Loci(loci), seed, 1e-9).map_err(|e| e.to_string())?;
    let rows: Vec<_> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "locus": r.locus,
                "rank": r.rank,
                "corank": r.corank,
                "float_agrees": r.float_agrees,
                "casimirs": r.casimirs,
            })
        })
        .collect();
    Ok(json!({"algebra": spec.name, "dim": spec.dim(), "rows": rows}).to_string())
}

/// Vacuum norm, spectrum and zero-mode labels of the sombrero
/// `|φ|⁴ + g1 |φ|² + 1` for `count` values of `g1` in `[lo, hi]`.
pub fn sombrero_sweep_json(lo: f64, hi: f64, count: usize) -> Result<String, String> {
    if count < 2 || !lo.is_finite() || !hi.is_finite() {
        return Err("need finite bounds and at least two points".into());
    }
    let exact = |x: f64| parse_rational(&format!("{x:e}")).map_err(|e| e.to_string());
    let (lo, hi) = (exact(lo)?, exact(hi)?);
    let step = (&hi - &lo) / Rational::from_integer((count as i64 - 1).into());
    let values: Vec<Rational> = (0..count)
        .map(|i| &lo + &step * Rational::from_integer((i as i64).into()))
        .collect();
    let c = catalog_potential("sombrero").map_err(|e| e.to_string())?;
    let rep = catalog_representation(c.rep_name).map_err(|e| e.to_string())?.rep;
    let pts = symbreak::sweep(&c.potential, &rep, "g1", &values, &c.start, &NewtonConfig::default())
        .map_err(|e| e.to_string())?;
    let rows: Vec<_> = pts
        .iter()
        .map(|p| {
            let r = &p.report;
            json!({
                "g1": pdsa_core::polyring::to_f64(&p.control),
                "norm": r.vacuum.point.iter().map(|x| x * x).sum::<f64>().sqrt(),
                "spectrum": r.mass.spectrum,
                "tangent": r.goldstone.n_tangent,
                "n0": r.goldstone.n_n0,
                "n1": r.goldstone.n_n1,
                "mixed": r.goldstone.n_mixed,
            })
        })
        .collect();
    Ok(json!({"points": rows}).to_string())
}

/// RK4 flow of `H = Σ μ_i² / (2 I_i)` under the so(3) bracket, with the
/// drift of `|μ|²` and of the energy.
pub fn euler_top_json(inertia: &[f64], mu0: &[f64], dt: f64, steps: usize) -> Result<String, String> {
    if inertia.len() != 3 || mu0.len() != 3 {
        return Err("inertia and initial momentum need three components".into());
    }
    if inertia.iter().any(|i| !(i.is_finite() && *i > 0.0)) {
        return Err("moments of inertia must be positive".into());
    }
    let spec = catalog("so3").map_err(|e| e.to_string())?;
    let j = poisson::from_spec(&spec).map_err(|e| e.to_string())?;
    let mut h = MultiPoly::zero(3);
    for (i, moment) in inertia.iter().enumerate() {
        let m = parse_rational(&format!("{moment:e}")).map_err(|e| e.to_string())?;
        let coeff = Rational::new(1.into(), 2.into()) / m;
        h = &h + &MultiPoly::var(3, i).pow(2).scale(&coeff);
    }
    let c = j.parse_poly("mu1^2 + mu2^2 + mu3^2").map_err(|e| e.to_string())?;
    let every = (steps / 500).max(1);
    let f = poisson::integrate_flow(&j, &h, mu0, dt, steps, &[c, h.clone()], every).map_err(|e| e.to_string())?;
    Ok(json!({
        "trajectory": f.trajectory,
        "final": f.final_state,
        "casimir_drift": f.casimir_drift[0],
        "energy_drift": f.casimir_drift[1],
        "steps": f.steps,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn rank_profile(algebra: &str, seed: u64) -> Result<String, JsValue> {
    to_js(rank_profile_json(algebra, seed))
}

#[wasm_bindgen]
pub fn sombrero_sweep(lo: f64, hi: f64, count: usize) -> Result<String, JsValue> {
    to_js(sombrero_sweep_json(lo, hi, count))
}

#[wasm_bindgen]
pub fn euler_top(inertia: Vec<f64>, mu0: Vec<f64>, dt: f64, steps: usize) -> Result<String, JsValue> {
    to_js(euler_top_json(&inertia, &mu0, dt, steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn rank_profile_of_gravity() {
        let v = parse(rank_profile_json("gravity", 1).unwrap());
        let ranks: Vec<u64> = v["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["rank"].as_u64().unwrap())
            .collect();
        assert_eq!(ranks, vec![4, 2, 0]);
        assert!(rank_profile_json("nonesuch", 1).is_err());
    }

    #[test]
    fn sweep_labels() {
        let v = parse(sombrero_sweep_json(-1.0, 0.0, 6).unwrap());
        let pts = v["points"].as_array().unwrap();
        assert_eq!(pts[0]["tangent"], 2);
        assert_eq!(pts[5]["n1"], 3);
        assert!(sombrero_sweep_json(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn euler_top_conserves() {
        let v = parse(euler_top_json(&[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0], 1e-3, 10_000).unwrap());
        assert!(v["casimir_drift"].as_f64().unwrap() < 1e-8);
        assert!(v["energy_drift"].as_f64().unwrap() < 1e-8);
        assert!(euler_top_json(&[1.0, -2.0, 3.0], &[1.0, 1.0, 1.0], 1e-3, 10).is_err());
    }
}
