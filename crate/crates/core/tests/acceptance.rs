use std::process::ExitCode;
use std::time::Instant;

use periodika::additive::{
    additive_stp_witness, classify_additive, classify_prime_power, crt_split_cyclic, decompose_crt,
    default_h_max, is_sensitive_additive, is_surjective_additive, permutative_power, FactorClass,
    PermutativePower, StpVerdict,
};
use periodika::configs::Configuration;
use periodika::engine::{iterate, step_cyclic, step_ep};
use periodika::oracles::{equicontinuity_oracle, surjectivity_oracle};
use periodika::periodicity::{
    find_stp_witness, product_witness_scan, stp_empty_scan, ProductScanBounds, WitnessSearch,
    DEFAULT_SCAN_MID_MAX, DEFAULT_SCAN_TAIL_MAX, DEFAULT_SCAN_T_MAX, DEFAULT_VIOLATION_CAP,
};
use periodika::sweep::all_rules;
use periodika::{AdditiveRule, CyclicConfig, EpConfig, Letter, TableRule};

type Check = Result<String, String>;

fn sweep_rules() -> Vec<AdditiveRule> {
    (2..=6).flat_map(|m| all_rules(m, 1).unwrap()).collect()
}

fn cyclic_words(k: usize, max_len: usize) -> Vec<CyclicConfig> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        let count = k.pow(len as u32);
        for mut idx in 0..count {
            let mut w = vec![0 as Letter; len];
            for slot in w.iter_mut().rev() {
                *slot = (idx % k) as Letter;
                idx /= k;
            }
            out.push(CyclicConfig::new(w, 0).unwrap());
        }
    }
    out
}

fn rule(m: u64, c: &[i64]) -> AdditiveRule {
    AdditiveRule::from_dense(m, c).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn surjectivity_agreement() -> Check {
    let rules = sweep_rules();
    for f in &rules {
        let oracle = surjectivity_oracle(&f.to_table().unwrap()).map_err(|e| e.to_string())?;
        ensure(oracle == is_surjective_additive(f), || {
            format!("{f}: oracle says {oracle}")
        })?;
    }
    Ok(format!("{} rules agree", rules.len()))
}

fn equicontinuity_dichotomy() -> Check {
    let mut checked = 0;
    for f in sweep_rules().iter().filter(|f| is_surjective_additive(f)) {
        let out = equicontinuity_oracle(&f.to_table().unwrap(), 64).map_err(|e| e.to_string())?;
        match (is_sensitive_additive(f), out.cert()) {
            (false, Some(c)) => ensure(c.q + c.p <= 64, || format!("{f}: q+p = {}", c.q + c.p))?,
            (false, None) => return Err(format!("{f}: equicontinuous but uncertified")),
            (true, Some(c)) => {
                return Err(format!("{f}: sensitive yet F^{} = F^{}", c.q, c.q + c.p))
            }
            (true, None) => {}
        }
        checked += 1;
    }
    Ok(format!("{checked} surjective rules"))
}

fn crt_conjugacy() -> Check {
    let mut checked = 0;
    for f in sweep_rules()
        .iter()
        .filter(|f| matches!(f.modulus(), 4 | 6) && is_surjective_additive(f))
    {
        let factors = decompose_crt(f);
        let table = f.to_table().unwrap();
        let factor_tables: Vec<TableRule> =
            factors.iter().map(|p| p.rule.to_table().unwrap()).collect();
        for x in cyclic_words(f.modulus() as usize, 4) {
            let lhs = crt_split_cyclic(&step_cyclic(&table, &x).unwrap(), &factors).unwrap();
            let rhs: Vec<CyclicConfig> = crt_split_cyclic(&x, &factors)
                .unwrap()
                .iter()
                .zip(&factor_tables)
                .map(|(part, t)| step_cyclic(t, part).unwrap())
                .collect();
            ensure(lhs == rhs, || format!("{f} on {x}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} configurations"))
}

fn permutative_powers() -> Check {
    let mut certs = 0;
    for f in sweep_rules().iter().filter(|f| is_surjective_additive(f)) {
        for factor in decompose_crt(f) {
            let b = periodika::additive::boundary_indices(&factor).map_err(|e| e.to_string())?;
            let bound = 4 * factor.modulus() as u32;
            let cert = match permutative_power(&factor, default_h_max(&factor)).unwrap() {
                PermutativePower::Found(c) => c,
                PermutativePower::NotFoundWithin(h) => {
                    return Err(format!("{f} mod {}: none within {h}", factor.modulus()))
                }
            };
            let (lo, hi) = (cert.h as i64 * b.left, cert.h as i64 * b.right);
            let support: Vec<i64> = cert.coeffs.keys().copied().collect();
            ensure(cert.h <= bound, || format!("{f}: h = {}", cert.h))?;
            ensure(
                support.first() == Some(&lo) && support.last() == Some(&hi),
                || format!("{f}: support {support:?} vs [{lo}, {hi}]"),
            )?;
            ensure(
                cert.coeffs[&lo] % factor.p != 0 && cert.coeffs[&hi] % factor.p != 0,
                || format!("{f}: extreme coefficients divisible by {}", factor.p),
            )?;
            ensure(factor.rule.power(cert.h).coeffs() == &cert.coeffs, || {
                format!("{f}: certificate is not f^{}", cert.h)
            })?;
            certs += 1;
        }
    }
    Ok(format!("{certs} certificates"))
}

fn golden_reports() -> Check {
    let cases = [
        (
            rule(2, &[1, 0, 1]),
            include_str!("golden/rule90.json"),
            FactorClass::PositivelyExpansive,
        ),
        (
            rule(4, &[2, 1, 2]),
            include_str!("golden/m4_212.json"),
            FactorClass::Equicontinuous,
        ),
        (
            rule(2, &[0, 0, 1]),
            include_str!("golden/shift.json"),
            FactorClass::TransitiveNotExpansive,
        ),
    ];
    for (f, golden, class) in cases {
        let factors = decompose_crt(&f);
        ensure(classify_prime_power(&factors[0]) == Ok(class), || {
            format!("{f}: class")
        })?;
        let json = classify_additive(&f).unwrap().to_json() + "\n";
        ensure(json == golden, || {
            format!("{f}: report differs from golden")
        })?;
        let again = periodika::additive::ClassificationReport::from_json(&json)
            .unwrap()
            .to_json()
            + "\n";
        ensure(again == json, || format!("{f}: report does not round-trip"))?;
    }
    let m4 = rule(4, &[2, 1, 2]);
    ensure(
        m4.power(2).coeffs() == AdditiveRule::identity(4).unwrap().coeffs(),
        || "(2,1,2) mod 4 squared is not the identity".into(),
    )?;
    Ok("3 reports byte-identical".into())
}

fn stp_trichotomy() -> Check {
    let search = WitnessSearch::default();
    let (mut empty, mut witnessed) = (0, 0);
    for f in sweep_rules().iter().filter(|f| is_surjective_additive(f)) {
        let report = classify_additive(f).unwrap();
        let any_equicontinuous = decompose_crt(f)
            .iter()
            .any(|p| classify_prime_power(p) == Ok(FactorClass::Equicontinuous));
        let table = f.to_table().unwrap();
        match report.stp {
            StpVerdict::Empty => {
                ensure(!any_equicontinuous, || {
                    format!("{f}: Empty with an equicontinuous factor")
                })?;
                let scan = stp_empty_scan(&table, 2, 3, 32, DEFAULT_VIOLATION_CAP).unwrap();
                ensure(scan.violations.is_empty(), || {
                    format!(
                        "{f}: {} violations, first {}",
                        scan.violations.len(),
                        scan.violations[0].config
                    )
                })?;
                empty += 1;
            }
            StpVerdict::Residual | StpVerdict::Dense => {
                ensure(any_equicontinuous, || {
                    format!("{f}: {} without an equicontinuous factor", report.stp)
                })?;
                let w = additive_stp_witness(f, &search)
                    .unwrap()
                    .ok_or_else(|| format!("{f}: no witness"))?;
                ensure(!w.config.is_spatially_periodic(), || {
                    format!("{f}: periodic witness")
                })?;
                ensure(
                    iterate(&table, &w.config, w.period).unwrap() == w.config,
                    || format!("{f}: witness {} does not return", w.config),
                )?;
                witnessed += 1;
            }
            StpVerdict::Unknown => return Err(format!("{f}: surjective rule left Unknown")),
        }
    }
    Ok(format!(
        "{empty} empty scans clean, {witnessed} witnesses verified"
    ))
}

fn blocking_pipeline() -> Check {
    let table = rule(4, &[2, 1, 2]).to_table().unwrap();
    let w = find_stp_witness(&table, &WitnessSearch::default())
        .unwrap()
        .ok_or("no witness")?;
    let expected = EpConfig::defect(0, vec![1], 0);
    ensure(w.config == expected && w.period == 2, || {
        format!("got {} with t = {}", w.config, w.period)
    })?;
    let once = step_ep(&table, &w.config).unwrap();
    let twice = step_ep(&table, &once).unwrap();
    ensure(once != w.config && twice == w.config, || {
        "engine disagrees".into()
    })?;
    Ok(format!("{} with t = 2", w.config))
}

fn sensitive_with_stp() -> Check {
    let f = rule(6, &[4, 1, 4]);
    let report = classify_additive(&f).unwrap();
    ensure(report.sensitive && report.stp == StpVerdict::Dense, || {
        format!("sensitive = {}, stp = {}", report.sensitive, report.stp)
    })?;
    let m4 = rule(4, &[2, 1, 2]).to_table().unwrap();
    let r90 = rule(2, &[1, 0, 1]).to_table().unwrap();
    let hits = product_witness_scan(&m4, &r90, &ProductScanBounds::default()).unwrap();
    let product = periodika::oracles::product_rule(&m4, &r90).unwrap();
    ensure(!hits.is_empty(), || "no product witness".into())?;
    for h in &hits {
        ensure(
            iterate(&product, &h.encoded, h.period).unwrap() == h.encoded,
            || format!("{} does not return", h.encoded),
        )?;
        ensure(!h.encoded.is_spatially_periodic(), || {
            format!("{} is periodic", h.encoded)
        })?;
    }
    Ok(format!("{} product witnesses", hits.len()))
}

fn expansive_scans() -> Check {
    for f in [
        rule(2, &[1, 0, 1]),
        rule(2, &[1, 1, 0]),
        rule(2, &[0, 1, 1]),
    ] {
        let scan = stp_empty_scan(
            &f.to_table().unwrap(),
            DEFAULT_SCAN_TAIL_MAX,
            DEFAULT_SCAN_MID_MAX,
            DEFAULT_SCAN_T_MAX,
            DEFAULT_VIOLATION_CAP,
        )
        .unwrap();
        ensure(scan.violations.is_empty(), || {
            format!("{f}: {} violations", scan.violations.len())
        })?;
    }
    Ok("3 scans clean".into())
}

fn engine_exactness() -> Check {
    let mut cases = 0usize;
    for m in 2..=4u64 {
        let rules = all_rules(m, 1).unwrap();
        let configs = cyclic_words(m as usize, 6);
        for f in &rules {
            let table = f.to_table().unwrap();
            // powers beyond radius 4 over Z_4 exceed the table cap
            let h_max = if m == 4 { 4 } else { 6 };
            let powers: Vec<TableRule> = (1..=h_max)
                .map(|h| f.power(h).to_table().unwrap())
                .collect();
            for x in &configs {
                let fx = step_cyclic(&table, x).unwrap();
                ensure(
                    step_cyclic(&table, &x.shift(1)).unwrap() == fx.shift(1),
                    || format!("{f}: shift commutation fails on {x}"),
                )?;
                ensure(step_ep(&table, &x.to_ep()).unwrap() == fx.to_ep(), || {
                    format!("{f}: cyclic and eventually periodic steps differ on {x}")
                })?;
                if x.period() <= 4 {
                    let mut y = x.clone();
                    for power in &powers {
                        y = step_cyclic(&table, &y).unwrap();
                        ensure(step_cyclic(power, x).unwrap() == y, || {
                            format!("{f}: power rule disagrees on {x}")
                        })?;
                    }
                }
                cases += 1;
            }
        }
        for g in &rules {
            for f in rules.iter().step_by(7) {
                let fg = f.compose(g).unwrap().to_table().unwrap();
                let (ft, gt) = (f.to_table().unwrap(), g.to_table().unwrap());
                for x in configs.iter().filter(|x| x.period() <= 4) {
                    let lhs = step_cyclic(&fg, x).unwrap();
                    ensure(
                        lhs == step_cyclic(&ft, &step_cyclic(&gt, x).unwrap()).unwrap(),
                        || format!("{f} after {g} differs on {x}"),
                    )?;
                }
            }
        }
    }
    let defect = EpConfig::defect(0, vec![1, 0, 1], -2);
    for f in all_rules(2, 1).unwrap() {
        let t = f.to_table().unwrap();
        ensure(
            step_ep(&t, &defect.shift(3)).unwrap() == step_ep(&t, &defect).unwrap().shift(3),
            || format!("{f}: shift commutation fails on {defect}"),
        )?;
    }
    Ok(format!("{cases} rule-configuration pairs"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        (
            "surjectivity criterion vs balance oracle",
            surjectivity_agreement,
        ),
        ("equicontinuity dichotomy", equicontinuity_dichotomy),
        ("crt conjugacy", crt_conjugacy),
        ("permutative powers", permutative_powers),
        ("trichotomy golden reports", golden_reports),
        ("stp verdicts, scans and witnesses", stp_trichotomy),
        ("blocking word to witness", blocking_pipeline),
        ("sensitive rule with nonempty stp", sensitive_with_stp),
        ("expansive and one-sided scans", expansive_scans),
        ("engine exactness", engine_exactness),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = check();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
