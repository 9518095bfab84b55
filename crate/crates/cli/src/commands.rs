use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Duration;

use kostka::counting::{self, BinomialPolynomial};
use kostka::euler::{self, ConditionSet};
use kostka::faces::{self, KostkaPolytope, Limits};
use kostka::hilbert::{self, ScanBudget, ScanVerdict};
use kostka::partition::{ConePoint, Partition};
use kostka::rays::{self, RayLabel};
use serde_json::{json, Value};

use crate::report::{aligned, spaced, Report};

pub enum CliError {
    Kostka(kostka::Error),
    Input(String),
    /// A check command found counterexamples; the report lists them.
    CheckFailed(Report),
}

impl From<kostka::Error> for CliError {
    fn from(e: kostka::Error) -> Self {
        CliError::Kostka(e)
    }
}

pub type CliResult = Result<Report, CliError>;

fn label_cell(l: &RayLabel) -> String {
    format!("{} {} {}", l.a, l.b, l.l)
}

fn labels_cell(ls: &[RayLabel]) -> String {
    ls.iter().map(label_cell).collect::<Vec<_>>().join(";")
}

fn point_json(p: &ConePoint) -> Value {
    serde_json::to_value(p).expect("cone points serialize")
}

/// Decimal integers that fit `u64` become JSON numbers, larger ones strings.
fn big_json(s: String) -> Value {
    match s.parse::<u64>() {
        Ok(v) => json!(v),
        Err(_) => json!(s),
    }
}

fn label(r: usize, a: usize, b: usize, l: usize) -> Result<RayLabel, CliError> {
    let lab = RayLabel::new(a, b, l)?;
    lab.check(r)?;
    Ok(lab)
}

pub fn rays(r: usize) -> CliResult {
    let poly = KostkaPolytope::new(r)?;
    let mut items = Vec::new();
    let mut rows = Vec::new();
    for &l in poly.labels() {
        let p = rays::primitive_generator(r, l)?;
        items.push(json!({"label": l, "lambda": p.lambda(), "mu": p.mu()}));
        rows.push(vec![
            l.a.to_string(),
            l.b.to_string(),
            l.l.to_string(),
            spaced(p.lambda().padded(r)),
            spaced(p.mu().padded(r)),
        ]);
    }
    Ok(Report::new(json!({"r": r, "rays": items}), &["a", "b", "l", "lambda", "mu"], rows))
}

pub fn incidence(r: usize, a: usize, b: usize, l: usize) -> CliResult {
    let lab = label(r, a, b, l)?;
    let hs: Vec<String> = rays::facet_incidence(r, lab)?.iter().map(|f| f.to_string()).collect();
    let rows = hs.iter().map(|h| vec![h.clone()]).collect();
    Ok(Report::new(json!({"r": r, "label": lab, "hyperplanes": hs}), &["hyperplane"], rows))
}

pub fn faces(r: usize, dim: Option<usize>, count_only: bool, limits: &Limits) -> CliResult {
    let poly = KostkaPolytope::new(r)?;
    let top = 2 * r - 2;
    if let Some(d) = dim {
        if d > top {
            return Err(CliError::Input(format!("P_{r} has dimension {top}, no {d}-faces")));
        }
    }
    if count_only {
        let counts = poly.face_counts(dim.unwrap_or(top), limits)?;
        let dims: Vec<usize> = match dim {
            Some(d) => vec![d],
            None => (0..=top).collect(),
        };
        let obj: serde_json::Map<String, Value> =
            dims.iter().map(|&d| (d.to_string(), json!(counts[d]))).collect();
        let rows = dims.iter().map(|&d| vec![r.to_string(), d.to_string(), counts[d].to_string()]).collect();
        let mut report = Report::new(json!({"r": r, "counts": obj}), &["r", "dim", "count"], rows);
        if dim.is_some() {
            report = report.with_table(format!("{}\n", counts[dims[0]]));
        }
        return Ok(report);
    }
    let max_dim = dim.unwrap_or(top);
    let levels = poly.face_levels(max_dim, limits)?;
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    for (d, level) in levels.iter().enumerate() {
        if dim.is_some_and(|x| x != d) {
            continue;
        }
        for m in level {
            let labels = poly.face(m.clone()).labels();
            rows.push(vec![r.to_string(), d.to_string(), labels.len().to_string(), labels_cell(&labels)]);
            lines.push(serde_json::to_value(faces::FaceRecord { r, dim: d as i64, labels }).unwrap());
        }
    }
    Ok(Report::lines(lines, &["r", "dim", "size", "labels"], rows))
}

pub fn edge(r: usize, u: [usize; 3], v: [usize; 3]) -> CliResult {
    let u = label(r, u[0], u[1], u[2])?;
    let v = label(r, v[0], v[1], v[2])?;
    let poly = KostkaPolytope::new(r)?;
    let is_edge = poly.is_edge(u, v)?;
    let closure = poly.minimal_face(&[u, v])?;
    let dim = poly.face_dimension(&closure);
    let labels = closure.labels();
    Ok(Report::new(
        json!({"r": r, "u": u, "v": v, "edge": is_edge, "closure": labels, "closure_dim": dim}),
        &["r", "u", "v", "edge", "closure", "closure_dim"],
        vec![vec![
            r.to_string(),
            label_cell(&u),
            label_cell(&v),
            is_edge.to_string(),
            labels_cell(&labels),
            dim.to_string(),
        ]],
    ))
}

pub fn maxface(closed_form: bool, args: &[usize], limits: &Limits) -> CliResult {
    match (closed_form, args) {
        (true, &[d]) => {
            let m = faces::m_closed_form(d);
            Ok(Report::new(json!({"d": d, "m": m}), &["d", "m"], vec![vec![d.to_string(), m.to_string()]]))
        }
        (false, &[r, d]) => {
            let m = KostkaPolytope::new(r)?.max_face_vertices(d, limits)?;
            Ok(Report::new(
                json!({"r": r, "d": d, "max_vertices": m}),
                &["r", "d", "max_vertices"],
                vec![vec![r.to_string(), d.to_string(), m.to_string()]],
            ))
        }
        (true, _) => Err(CliError::Input("maxface --closed-form takes one argument: d".into())),
        (false, _) => Err(CliError::Input("maxface takes two arguments: r d".into())),
    }
}

fn read_values(path: &Path) -> Result<BTreeMap<usize, u64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let raw: BTreeMap<String, u64> = serde_json::from_str(&text).map_err(|e| {
        CliError::Input(format!("{}: expected a JSON object {{\"r\": f_d(r), ...}}: {e}", path.display()))
    })?;
    raw.into_iter()
        .map(|(k, v)| {
            k.parse::<usize>()
                .map(|k| (k, v))
                .map_err(|_| CliError::Input(format!("key {k:?} is not an integer r")))
        })
        .collect()
}

fn polynomial_rows(p: &BinomialPolynomial, evals: &[(u64, String)]) -> Vec<Vec<String>> {
    let mut rows: Vec<Vec<String>> =
        p.alpha.iter().map(|(k, a)| vec!["alpha".into(), k.to_string(), a.to_string()]).collect();
    rows.extend(evals.iter().map(|(r, v)| vec!["f".into(), r.to_string(), v.clone()]));
    rows
}

pub fn fit(d: usize, values: Option<&Path>, eval_up_to: Option<u64>, limits: &Limits) -> CliResult {
    let values = match values {
        Some(path) => read_values(path)?,
        None => counting::enumerated_values(d, limits)?,
    };
    let p = counting::fit_face_polynomial(d, &values)?;
    let mut out = serde_json::to_value(&p).unwrap();
    let evals: Vec<(u64, String)> =
        (1..=eval_up_to.unwrap_or(0)).map(|r| (r, p.evaluate(r).to_string())).collect();
    if eval_up_to.is_some() {
        let obj: serde_json::Map<String, Value> =
            evals.iter().map(|(r, v)| (r.to_string(), big_json(v.clone()))).collect();
        out["values"] = Value::Object(obj);
    }
    Ok(Report::new(out, &["kind", "index", "value"], polynomial_rows(&p, &evals)))
}

pub fn fvector(r: usize, limits: &Limits) -> CliResult {
    let fv = counting::f_vector(r, limits)?;
    let rows = fv.f.iter().enumerate().map(|(i, f)| vec![(i as i64 - 1).to_string(), f.to_string()]).collect();
    Ok(Report::new(serde_json::to_value(&fv).unwrap(), &["k", "f"], rows))
}

pub fn hvector(r: usize, check: bool, limits: &Limits) -> CliResult {
    let hv = counting::h_vector(r, limits)?;
    let rows = hv.h.iter().enumerate().map(|(i, h)| vec![i.to_string(), h.to_string()]).collect();
    if !check {
        return Ok(Report::new(serde_json::to_value(&hv).unwrap(), &["k", "h"], rows));
    }
    let c = counting::check_h_conjecture_for(&hv);
    let table = format!(
        "h = ({})\nh_k = 1 for {} <= k <= {}: {}\n",
        hv.h.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
        r - 1,
        2 * r - 2,
        match c.witness {
            None => "yes".to_string(),
            Some(k) => format!("no, h_{k} = {}", hv.h[k]),
        }
    );
    Ok(Report::new(serde_json::to_value(&c).unwrap(), &["k", "h"], rows).with_table(table))
}

fn hb_entry(p: &ConePoint) -> Result<(Value, Vec<String>), CliError> {
    let hb = hilbert::is_hilbert_basis_element(p)?;
    let column = hilbert::column_sum_test(p)?;
    let split = hilbert::column_split(p)?;
    let split_json = split.as_ref().map(|(a, b)| json!([point_json(a), point_json(b)]));
    let split_cell = split
        .as_ref()
        .map(|(a, b)| {
            format!(
                "{}/{} + {}/{}",
                spaced(a.lambda().parts()),
                spaced(a.mu().parts()),
                spaced(b.lambda().parts()),
                spaced(b.mu().parts())
            )
        })
        .unwrap_or_default();
    Ok((
        json!({"point": point_json(p), "hilbert_basis": hb, "column_test": column, "split": split_json}),
        vec![
            p.r().to_string(),
            spaced(p.lambda().parts()),
            spaced(p.mu().parts()),
            hb.to_string(),
            column.to_string(),
            split_cell,
        ],
    ))
}

pub fn hb_check(path: &Path) -> CliResult {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Input(e.to_string()))?
    } else {
        fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?
    };
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("malformed JSON: {e}")))?;
    let (many, items) = match value {
        Value::Array(v) => (true, v),
        v => (false, vec![v]),
    };
    let mut out = Vec::new();
    let mut rows = Vec::new();
    for item in items {
        let p: ConePoint = serde_json::from_value(item)
            .map_err(|e| CliError::Input(format!("malformed cone point: {e}")))?;
        let (j, row) = hb_entry(&p)?;
        out.push(j);
        rows.push(row);
    }
    let json = if many { Value::Array(out) } else { out.remove(0) };
    Ok(Report::new(json, &["r", "lambda", "mu", "hilbert_basis", "column_test", "split"], rows))
}

fn pair_row(p: &hilbert::InitialPair) -> Vec<String> {
    let mut row = vec![p.lambda1.to_string(), p.mu1.to_string()];
    row.extend(p.conditions.iter().map(|c| c.to_string()));
    row.push(p.sufficient().to_string());
    row
}

const PAIR_HEADER: [&str; 6] = ["lambda1", "mu1", "cond1", "cond2", "cond3", "sufficient"];

pub fn initial_classify(l1: Option<u64>, m1: Option<u64>, range: Option<u64>, failing_only: bool) -> CliResult {
    match (l1, m1, range) {
        (Some(l), Some(m), None) => {
            let p = hilbert::classify_initial_pair(l, m)?;
            Ok(Report::new(serde_json::to_value(p).unwrap(), &PAIR_HEADER, vec![pair_row(&p)]))
        }
        (None, None, Some(max)) => {
            let pairs: Vec<hilbert::InitialPair> = (2..=max)
                .flat_map(|l| (1..l).map(move |m| (l, m)))
                .map(|(l, m)| hilbert::classify_initial_pair(l, m).expect("m < l"))
                .filter(|p| !failing_only || !p.sufficient())
                .collect();
            let rows = pairs.iter().map(pair_row).collect();
            Ok(Report::new(serde_json::to_value(&pairs).unwrap(), &PAIR_HEADER, rows))
        }
        _ => Err(CliError::Input("give either L1 M1 or --range L".into())),
    }
}

fn construction_report(family: &str, l1: u64, m1: u64, r: usize, p: &ConePoint) -> Result<(Value, Vec<String>), CliError> {
    let hb = hilbert::is_hilbert_basis_element(p)?;
    let on2 = hilbert::lies_on_2face(p);
    Ok((
        json!({"family": family, "pair": [l1, m1], "r": r, "point": point_json(p),
               "hilbert_basis": hb, "lies_on_2face": on2}),
        vec![
            family.to_string(),
            l1.to_string(),
            m1.to_string(),
            r.to_string(),
            spaced(p.lambda().parts()),
            spaced(p.mu().parts()),
            hb.to_string(),
            on2.to_string(),
        ],
    ))
}

const CONSTRUCT_HEADER: [&str; 8] = ["family", "lambda1", "mu1", "r", "lambda", "mu", "hilbert_basis", "lies_on_2face"];

pub fn construct(family: &str, l1: Option<u64>, m1: Option<u64>, max: u64) -> CliResult {
    if family == "all" {
        let mut rows = Vec::new();
        let mut failures = Vec::new();
        let (mut n1, mut n2) = (0, 0);
        for l in 2..=max {
            for m in 1..l {
                let mut results = vec![("gcd1", hilbert::construct_gcd1(l, m))];
                if hilbert::gcd2_hypothesis(l, m) {
                    results.push(("gcd2", hilbert::construct_gcd2(l, m)));
                }
                for (fam, res) in results {
                    if fam == "gcd1" { n1 += 1 } else { n2 += 1 }
                    match res {
                        Ok((r, p)) => {
                            let (j, row) = construction_report(fam, l, m, r, &p)?;
                            if !(j["hilbert_basis"] == true && j["lies_on_2face"] == true) {
                                failures.push(j);
                            }
                            rows.push(row);
                        }
                        Err(e) => failures.push(json!({"family": fam, "pair": [l, m], "error": e.to_string()})),
                    }
                }
            }
        }
        let ok = failures.is_empty();
        let report = Report::new(
            json!({"max": max, "gcd1": n1, "gcd2": n2, "failures": failures}),
            &CONSTRUCT_HEADER,
            rows,
        );
        return if ok { Ok(report) } else { Err(CliError::CheckFailed(report)) };
    }
    let (Some(l), Some(m)) = (l1, m1) else {
        return Err(CliError::Input(format!("construct {family} needs L1 M1")));
    };
    let (r, p) = match family {
        "gcd1" => hilbert::construct_gcd1(l, m)?,
        _ => hilbert::construct_gcd2(l, m)?,
    };
    let (j, row) = construction_report(family, l, m, r, &p)?;
    Ok(Report::new(j, &CONSTRUCT_HEADER, vec![row]))
}

pub fn scan_initial(l1: u64, m1: u64, r: usize, seconds: Option<f64>, max_candidates: u64) -> CliResult {
    let budget = ScanBudget { max_candidates, time_limit: seconds.map(Duration::from_secs_f64) };
    let out = hilbert::scan_initial(l1, m1, r, &budget)?;
    let (verdict, cert) = match &out.verdict {
        ScanVerdict::Found { certificate, source } => (
            format!("found ({source})"),
            format!("{} / {}", spaced(certificate.lambda().parts()), spaced(certificate.mu().parts())),
        ),
        ScanVerdict::ExhaustedNo => ("exhausted-no".into(), String::new()),
        ScanVerdict::BudgetExceeded => ("budget-exceeded".into(), String::new()),
    };
    Ok(Report::new(
        serde_json::to_value(&out).unwrap(),
        &["lambda1", "mu1", "r", "verdict", "certificate", "candidates"],
        vec![vec![l1.to_string(), m1.to_string(), r.to_string(), verdict, cert, out.candidates.to_string()]],
    ))
}

pub fn probability(b: u64) -> CliResult {
    let iv = euler::initial_pair_probability(b)?;
    let mut j = serde_json::to_value(&iv).unwrap();
    j["B"] = json!(b);
    let lo = euler::to_decimal(&iv.lower, 12);
    let hi = euler::to_decimal(&iv.upper, 12);
    Ok(Report::new(
        j,
        &["B", "lower", "upper", "lower_decimal", "upper_decimal"],
        vec![vec![b.to_string(), iv.lower.to_string(), iv.upper.to_string(), lo.clone(), hi.clone()]],
    )
    .with_table(format!("B = {b}\n{lo} <= p <= {hi}\n")))
}

pub fn density(n: u64, conditions: &str) -> CliResult {
    let d = if conditions == "any" {
        euler::inclusion_exclusion_estimate(n)?
    } else {
        euler::empirical_density(n, conditions.parse::<ConditionSet>()?)?
    };
    let dec = euler::to_decimal(&d, 12);
    Ok(Report::new(
        json!({"N": n, "I": conditions, "density": d.to_string(), "decimal": dec}),
        &["N", "I", "density", "decimal"],
        vec![vec![n.to_string(), conditions.to_string(), d.to_string(), dec]],
    ))
}

/// Grid with a corner label, row labels and one column per key.
fn grid(corner: &str, cols: &[usize], rows: &[(String, BTreeMap<usize, String>)]) -> String {
    let header: Vec<String> =
        std::iter::once(corner.to_string()).chain(cols.iter().map(|c| c.to_string())).collect();
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|(name, vals)| {
            std::iter::once(name.clone())
                .chain(cols.iter().map(|c| vals.get(c).cloned().unwrap_or_default()))
                .collect()
        })
        .collect();
    aligned(&header, &body)
}

pub fn table1(max_r: usize, limits: &Limits) -> CliResult {
    if max_r < 2 {
        return Err(CliError::Input("table1 needs --max-r >= 2".into()));
    }
    let mut m = serde_json::Map::new();
    let mut rows = Vec::new();
    let mut grid_rows = Vec::new();
    for r in 2..=max_r {
        let levels = KostkaPolytope::new(r)?.face_levels(2 * r - 2, limits)?;
        let mut obj = serde_json::Map::new();
        let mut vals = BTreeMap::new();
        for (d, level) in levels.iter().enumerate().skip(2) {
            let best = level.iter().map(|f| f.len()).max().unwrap_or(0);
            obj.insert(d.to_string(), json!(best));
            vals.insert(d, best.to_string());
            rows.push(vec![r.to_string(), d.to_string(), best.to_string()]);
        }
        m.insert(r.to_string(), Value::Object(obj));
        grid_rows.push((r.to_string(), vals));
    }
    let cols: Vec<usize> = (2..=2 * max_r - 2).collect();
    let stable: BTreeMap<usize, String> = cols.iter().map(|&d| (d, faces::m_closed_form(d).to_string())).collect();
    let closed: serde_json::Map<String, Value> =
        cols.iter().map(|&d| (d.to_string(), json!(faces::m_closed_form(d)))).collect();
    grid_rows.push(("m(d)".to_string(), stable));
    Ok(Report::new(json!({"m": m, "closed_form": closed}), &["r", "d", "m"], rows)
        .with_table(grid("r\\d", &cols, &grid_rows)))
}

pub fn table2(max_r: usize, max_d: usize, limits: &Limits) -> CliResult {
    let mut f: BTreeMap<usize, BTreeMap<usize, u64>> = BTreeMap::new();
    for r in 1..=max_r {
        let counts = KostkaPolytope::new(r)?.face_counts(max_d.min(2 * r - 2), limits)?;
        for d in 0..=max_d {
            f.entry(d).or_default().insert(r, counts.get(d).copied().unwrap_or(0));
        }
    }
    let json = json!({"f": f});
    let rows = f
        .iter()
        .flat_map(|(d, row)| row.iter().map(move |(r, v)| vec![d.to_string(), r.to_string(), v.to_string()]))
        .collect();
    let cols: Vec<usize> = (1..=max_r).collect();
    let grid_rows: Vec<(String, BTreeMap<usize, String>)> = f
        .iter()
        .map(|(d, row)| (d.to_string(), row.iter().map(|(r, v)| (*r, v.to_string())).collect()))
        .collect();
    Ok(Report::new(json, &["d", "r", "f"], rows).with_table(grid("d\\r", &cols, &grid_rows)))
}

pub fn edge_check(r: usize) -> CliResult {
    let poly = KostkaPolytope::new(r)?;
    let labels = poly.labels();
    let mut pairs = 0u64;
    let mut edges = 0u64;
    let mut mismatches = Vec::new();
    for (i, &u) in labels.iter().enumerate() {
        for &v in &labels[i + 1..] {
            pairs += 1;
            let rule = poly.is_edge(u, v)?;
            let oracle = poly.is_edge_by_closure(u, v)?;
            edges += rule as u64;
            if rule != oracle {
                mismatches.push(json!({"u": u, "v": v, "rule": rule, "oracle": oracle}));
            }
        }
    }
    let ok = mismatches.is_empty();
    let report = Report::new(
        json!({"r": r, "pairs": pairs, "edges": edges, "mismatches": mismatches}),
        &["r", "pairs", "edges", "mismatches"],
        vec![vec![r.to_string(), pairs.to_string(), edges.to_string(), mismatches.len().to_string()]],
    );
    if ok { Ok(report) } else { Err(CliError::CheckFailed(report)) }
}

pub fn hb_oracle(max_r: usize, max_size: u64) -> CliResult {
    let mut points = 0u64;
    let mut irreducible = 0u64;
    let mut disagreements = Vec::new();
    let mut column_disagreements = Vec::new();
    for r in 1..=max_r {
        for n in 1..=max_size {
            let parts = Partition::all(n, r, n);
            for l in &parts {
                for m in &parts {
                    let Ok(p) = ConePoint::new(r, l.clone(), m.clone()) else { continue };
                    points += 1;
                    let hb = hilbert::is_hilbert_basis_element(&p)?;
                    let oracle = hilbert::decompose_bounded(&p, max_size)?.is_none();
                    irreducible += oracle as u64;
                    if hb != oracle {
                        disagreements.push(point_json(&p));
                    }
                    if hilbert::column_sum_test(&p)? != oracle {
                        column_disagreements.push(point_json(&p));
                    }
                }
            }
        }
    }
    let ok = disagreements.is_empty();
    let report = Report::new(
        json!({"max_r": max_r, "max_size": max_size, "points": points, "irreducible": irreducible,
               "disagreements": disagreements, "column_test_disagreements": column_disagreements}),
        &["max_r", "max_size", "points", "irreducible", "disagreements", "column_test_disagreements"],
        vec![vec![
            max_r.to_string(),
            max_size.to_string(),
            points.to_string(),
            irreducible.to_string(),
            disagreements.len().to_string(),
            column_disagreements.len().to_string(),
        ]],
    );
    if ok { Ok(report) } else { Err(CliError::CheckFailed(report)) }
}
