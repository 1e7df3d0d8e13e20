use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use earoot::affine::{diagram_automorphism, twisted_fixed_points, Affinization, BaseAlgebra, TwistedAutomorphism};
use earoot::ears::EarsPresentation;
use earoot::fixpoint::{isolated_by_search, Character, FixedRootSystem};
use earoot::qtorus::{core_and_tameness, fixed_subalgebra, roots_of_fixed, ExampleScenario};
use earoot::Cyclotomic;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::report::{Claim, Report};

/// Window precedence: `--window`, then the scenario, then `EAROOT_WINDOW`,
/// then the per-command default.
#[derive(Clone, Copy, Debug)]
pub struct WindowChoice {
    pub flag: Option<i64>,
    pub env: Option<i64>,
}

impl WindowChoice {
    fn resolve(self, scenario: Option<i64>, default: i64) -> Result<i64> {
        let r = self.flag.or(scenario).or(self.env).unwrap_or(default);
        if r < 0 {
            bail!("window radius must be nonnegative, got {r}");
        }
        Ok(r)
    }
}

/// Splits off the `expect` block, which is not part of the library schema.
fn split_expect(mut raw: Value) -> (Value, Value) {
    let expect = raw.as_object_mut().and_then(|m| m.remove("expect")).unwrap_or(Value::Null);
    (raw, expect)
}

fn parse<T: for<'de> Deserialize<'de>>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).with_context(|| format!("invalid {what}"))
}

fn expect_bool(expect: &Value, key: &str) -> Option<bool> {
    expect.get(key).and_then(Value::as_bool)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EarsScenario {
    presentation: EarsPresentation,
    window: Option<i64>,
}

pub fn ears_verify(raw: Value, window: WindowChoice) -> Result<Report> {
    let (body, expect) = split_expect(raw.clone());
    let sc: EarsScenario = parse(body, "ears scenario")?;
    let r = window.resolve(sc.window, 2)?;
    let report = sc.presentation.axioms_check(r);
    let mut claims: Vec<Claim> = ["R1", "R2", "R3", "R4"]
        .iter()
        .map(|ax| {
            let v = report.verdicts.iter().find(|v| v.axiom == *ax);
            Claim::new(*ax, report.passed(ax), v.and_then(|v| v.witness.clone()))
        })
        .collect();
    for flag in ["R5", "R6", "R7"] {
        if let Some(want) = expect_bool(&expect, flag) {
            claims.push(Claim::expect(format!("{flag} flag"), &want, &report.passed(flag)));
        }
    }
    let isolated: Vec<String> = sc.presentation.isolated_classes().iter().map(|c| c.label()).collect();
    let data = json!({
        "axioms": report.verdicts,
        "isolated_classes": isolated,
        "window_roots": sc.presentation.window_roots(r).len(),
    });
    Ok(Report::new("ears verify", raw, r, claims, data))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FixpointScenario {
    presentation: EarsPresentation,
    character: Character,
    dim_h_sigma: Option<usize>,
    window: Option<i64>,
}

pub fn fixpoint_decompose(raw: Value, window: WindowChoice) -> Result<Report> {
    let (body, expect) = split_expect(raw.clone());
    let sc: FixpointScenario = parse(body, "fixpoint scenario")?;
    let r = window.resolve(sc.window, 2)?;
    let base = sc.presentation.clone();
    let f = FixedRootSystem::new(sc.presentation, sc.character).context("invalid character for this presentation")?;
    let dim_h = sc.dim_h_sigma.unwrap_or(base.rank() + 2 * base.nullity());

    let isolated = f.isolated_classes();
    let labels: Vec<String> = isolated.iter().map(|c| c.label()).collect();
    let radius = 2 * f.modulus();
    let disagreements: Vec<String> = f
        .isotropic_classes()
        .iter()
        .filter(|c| isolated.contains(c) != isolated_by_search(&f, c.residue.entries(), radius))
        .map(|c| c.label())
        .collect();
    let sears = f.sears_check(r);
    let fixed_equals_base = f.window_roots(r) == base.window_roots(r);
    let decomposition = f.decompose_fixed(dim_h);

    let mut claims = vec![
        Claim::new(
            format!("exact isolation agrees with search at radius {radius}"),
            disagreements.is_empty(),
            (!disagreements.is_empty()).then(|| format!("classes {disagreements:?}")),
        ),
    ];
    // Indecomposability is only expected when the fixed roots form one component.
    let single = decomposition.as_ref().is_ok_and(|d| d.k == 1);
    if single {
        let witness = sears.verdicts.iter().find(|v| !v.pass).and_then(|v| v.witness.clone());
        claims.push(Claim::new("SEARS window check", sears.pass, witness));
    }
    if let Some(list) = expect.get("isolated_includes").and_then(Value::as_array) {
        for want in list.iter().filter_map(Value::as_str) {
            let present = labels.iter().any(|l| l == want);
            claims.push(Claim::new(format!("{want} is isolated"), present, (!present).then(|| format!("isolated = {labels:?}"))));
        }
    }
    if let Some(want) = expect.get("isolated").and_then(Value::as_array) {
        let want: Vec<String> = want.iter().filter_map(Value::as_str).map(String::from).collect();
        claims.push(Claim::expect("isolated classes", &want, &labels));
    }
    if let Some(want) = expect_bool(&expect, "fixed_equals_base") {
        claims.push(Claim::expect("R^sigma = R on the window", &want, &fixed_equals_base));
    }
    let decomposition_value = match &decomposition {
        Ok(d) => {
            if let Some(k) = expect.get("k").and_then(Value::as_u64) {
                claims.push(Claim::expect("k", &(k as usize), &d.k));
            }
            if let Some(w) = expect.get("dim_W").and_then(Value::as_u64) {
                claims.push(Claim::expect("dim_W", &(w as usize), &d.dim_w));
            }
            if let Some(h) = expect_bool(&expect, "has_I") {
                claims.push(Claim::expect("has_I", &h, &d.has_i));
            }
            if let Some(types) = expect.get("types").and_then(Value::as_array) {
                let want: Vec<String> = types.iter().filter_map(Value::as_str).map(String::from).collect();
                let got: Vec<String> = d.components.iter().map(|c| c.ty.to_string()).collect();
                claims.push(Claim::expect("component types", &want, &got));
            }
            serde_json::to_value(d)?
        }
        Err(e) => {
            if expect.get("k").is_some() {
                claims.push(Claim::new("k", false, Some(e.to_string())));
            }
            json!({ "error": e.to_string() })
        }
    };
    let data = json!({
        "modulus": f.modulus(),
        "summary": if fixed_equals_base { "R^sigma = R" } else { "R^sigma is a proper subset of R" },
        "isolated": labels,
        "decomposition": decomposition_value,
        "sears": sears,
    });
    Ok(Report::new("fixpoint decompose", raw, r, claims, data))
}

pub fn qtorus_run(raw: Value, window: WindowChoice) -> Result<Report> {
    let (body, expect) = split_expect(raw.clone());
    let scenario_window = body.get("window").and_then(Value::as_i64);
    let sc: ExampleScenario = parse(body, "quantum torus scenario")?;
    let r = window.resolve(scenario_window, 2)?;
    let sc = sc.with_window(r);
    let roots = roots_of_fixed(&sc)?;
    let tameness = core_and_tameness(&sc)?;
    let mut claims = vec![
        Claim::new("A4 on the fixed Cartan", roots.a4, roots.a4_witness.clone()),
        Claim::new("fixed-point shape", roots.shape.pass, roots.shape.witness.clone()),
    ];
    if let Some(types) = expect.get("types").and_then(Value::as_array) {
        let want: Vec<String> = types.iter().filter_map(Value::as_str).map(String::from).collect();
        let got: Vec<String> = roots.types.iter().map(|t| t.to_string()).collect();
        claims.push(Claim::expect("types", &want, &got));
    }
    if let Some(want) = expect.get("tameness").and_then(Value::as_str) {
        let got = serde_json::to_value(&tameness.verdict)?;
        claims.push(Claim::expect("tameness verdict", &Value::from(want), &got));
    }
    if expect_bool(&expect, "explicit_witness") == Some(true) {
        let ok = tameness.explicit_witness.as_ref().is_some_and(|x| x.in_fixed && !x.in_core && x.orthogonal_to_core);
        claims.push(Claim::new("explicit witness is fixed, outside the core and orthogonal to it", ok, None));
    }
    let data = json!({
        "roots": roots,
        "tameness": tameness,
    });
    Ok(Report::new("qtorus run", raw, r, claims, data))
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum BaseSpec {
    #[serde(rename = "sl2")]
    Sl2,
    #[serde(rename = "sl3")]
    Sl3,
    QtorusScenario(ExampleScenario),
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum SigmaSpec {
    Trivial,
    Diagram,
    Character(Character),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AffineScenario {
    base: BaseSpec,
    sigma: SigmaSpec,
    order: Option<u32>,
    window: Option<i64>,
}

pub fn affinize_run(raw: Value, window: WindowChoice) -> Result<Report> {
    let (body, expect) = split_expect(raw.clone());
    let sc: AffineScenario = parse(body, "affinization scenario")?;
    let r = window.resolve(sc.window, 3)?;
    let (base, sl_rank) = match &sc.base {
        BaseSpec::Sl2 => (BaseAlgebra::<Cyclotomic>::sl(2)?, Some(2)),
        BaseSpec::Sl3 => (BaseAlgebra::<Cyclotomic>::sl(3)?, Some(3)),
        BaseSpec::QtorusScenario(q) => (BaseAlgebra::from_fixed_degree_zero(&fixed_subalgebra::<Cyclotomic>(q)?)?, None),
    };
    let tw = match &sc.sigma {
        SigmaSpec::Trivial => TwistedAutomorphism::trivial(base.dim()),
        SigmaSpec::Diagram => match sl_rank {
            Some(n @ 3) => TwistedAutomorphism { base_sigma: diagram_automorphism(n), order: 2, zeta: Cyclotomic::zeta(2) },
            _ => bail!("the diagram automorphism is only available on sl3"),
        },
        SigmaSpec::Character(chi) => {
            let m = u32::try_from(chi.order()).context("character order out of range")?;
            TwistedAutomorphism::character(&base, chi, Cyclotomic::zeta(m))?
        }
    };
    if let Some(m) = sc.order {
        if m != tw.order {
            bail!("order {m} does not match the automorphism, which has order {}", tw.order);
        }
    }
    let fp = twisted_fixed_points(Affinization::new(base), tw, r)?;
    let eala = fp.eala_check();
    let mut claims: Vec<Claim> =
        fp.automorphism_checks.iter().map(|v| Claim::new(v.axiom.clone(), v.pass, v.witness.clone())).collect();
    for v in &eala.verdicts {
        let want = expect_bool(&expect, &v.axiom).unwrap_or(true);
        let detail = v.witness.clone().or_else(|| (want != v.pass).then(|| format!("expected pass = {want}")));
        claims.push(Claim::new(v.axiom.clone(), want == v.pass, detail));
    }
    if let Some(want) = expect.get("degree_zero_dim").and_then(Value::as_u64) {
        let got = fp.blocks.iter().filter(|b| b.degree == 0).map(|b| b.basis.len()).sum::<usize>();
        claims.push(Claim::expect("degree-zero loop part dimension", &(want as usize), &got));
    }
    let dims: BTreeMap<String, usize> = fp.dims_by_degree().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    let data = json!({
        "fixed_cartan_dim": fp.fixed_cartan.len(),
        "dims_by_degree": dims,
        "roots": fp.roots(),
        "eala": eala,
    });
    Ok(Report::new("affinize run", raw, r, claims, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_resolution_order() {
        let w = WindowChoice { flag: None, env: Some(5) };
        assert_eq!(w.resolve(None, 2).unwrap(), 5);
        assert_eq!(w.resolve(Some(1), 2).unwrap(), 1);
        assert_eq!(WindowChoice { flag: Some(0), env: Some(5) }.resolve(Some(1), 2).unwrap(), 0);
        assert_eq!(WindowChoice { flag: None, env: None }.resolve(None, 3).unwrap(), 3);
        assert!(WindowChoice { flag: Some(-1), env: None }.resolve(None, 2).is_err());
    }

    #[test]
    fn expect_block_is_split_off() {
        let (body, expect) = split_expect(json!({"window": 2, "expect": {"k": 1}}));
        assert_eq!(body, json!({"window": 2}));
        assert_eq!(expect["k"], 1);
        let (_, none) = split_expect(json!({"window": 2}));
        assert!(none.is_null());
    }

    #[test]
    fn trivial_character_keeps_the_root_system() {
        let raw = json!({
            "presentation": {"type": "A2", "nullity": 1, "S": ["0", "1"]},
            "character": {"order": 1, "alpha": [0, 0], "delta": [0]},
            "expect": {"fixed_equals_base": true, "k": 1}
        });
        let report = fixpoint_decompose(raw, WindowChoice { flag: Some(1), env: None }).unwrap();
        assert!(report.pass, "{:?}", report.verdicts);
        assert_eq!(report.data["summary"], "R^sigma = R");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let raw = json!({"base": "sl2", "sigma": "trivial", "radius": 3});
        assert!(affinize_run(raw, WindowChoice { flag: None, env: None }).is_err());
    }
}
