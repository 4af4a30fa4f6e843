//! Reference assertions for the built-in fixtures.

use serde::Serialize;

use crate::acceptance::es_direct;
use crate::diagnostics::{
    epsilon_lsc_probe, existence_report, lsc_probe, uniqueness_report, usc_report, Classification,
    Existence, ProbeOptions, UscVerdict, DEFAULT_UNIQUENESS_SAMPLES,
};
use crate::error::Result;
use crate::fixtures::{p1_generators, p2_z, FixtureId};
use crate::model::ProblemInstance;
use crate::polyhedra::HPolyhedron;
use crate::rational::{fmt_vec, int, neg, rat, scale, zeros, Rat};
use crate::risk_engine::{augmented_set, optimal_set, rho, rho_via_augmented, Closedness};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assertion {
    pub fixture: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckSummary {
    pub fixtures: usize,
    pub assertions: usize,
    pub failures: usize,
    pub results: Vec<Assertion>,
}

impl CheckSummary {
    pub fn all_passed(&self) -> bool {
        self.failures == 0
    }

    pub fn table(&self) -> String {
        let width = self.results.iter().map(|a| a.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for a in &self.results {
            out.push_str(&format!(
                "{:<20} {:<width$}  {}  {}\n",
                a.fixture,
                a.name,
                if a.passed { "PASS" } else { "FAIL" },
                a.detail
            ));
        }
        out.push_str(&format!(
            "{} fixtures, {} assertions, {} failures\n",
            self.fixtures, self.assertions, self.failures
        ));
        out
    }
}

struct Recorder<'a> {
    fixture: &'a str,
    out: Vec<Assertion>,
}

impl Recorder<'_> {
    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.out.push(Assertion {
            fixture: self.fixture.to_string(),
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    /// Records a failed assertion when the computation itself errors.
    fn run<T>(&mut self, name: &str, r: Result<T>, f: impl FnOnce(&T) -> (bool, String)) {
        match r {
            Ok(v) => {
                let (ok, detail) = f(&v);
                self.check(name, ok, detail);
            }
            Err(e) => self.check(name, false, format!("error: {e}")),
        }
    }
}

fn show(v: &[Rat]) -> String {
    format!("({})", fmt_vec(v).join(","))
}

fn check_p1(r: &mut Recorder, inst: &ProblemInstance) {
    let zero = zeros(3);
    r.run("rho(0) = -1/6", rho(inst, &zero), |v| {
        (
            v.value == rat(-1, 6) && v.attained,
            show(std::slice::from_ref(&v.value)),
        )
    });
    r.run(
        "rho via augmented set",
        rho_via_augmented(inst, &zero),
        |v| (*v == rat(-1, 6), show(std::slice::from_ref(v))),
    );
    r.run(
        "augmented set is {x1+x2+x3 >= -1/2}",
        augmented_set(inst),
        |a| {
            let mut expected = HPolyhedron::universe(3);
            expected.push_ineq(vec![int(1); 3], rat(-1, 2));
            let ok = a.closedness == Closedness::Closed
                && a.pieces.len() == 1
                && a.pieces[0].same_set(&expected);
            (ok, format!("{} piece(s)", a.pieces.len()))
        },
    );
    r.run("R(0) = {(-1/2,0,0)}", optimal_set(inst, &zero), |s| {
        let v = s.vertices();
        let ok = v == vec![vec![rat(-1, 2), int(0), int(0)]]
            && s.rays().is_empty()
            && s.lineality().is_empty();
        (
            ok,
            format!(
                "vertices {:?}",
                v.iter().map(|p| show(p)).collect::<Vec<_>>()
            ),
        )
    });
    r.run(
        "acceptance set generators",
        inst.compiled.polyhedral().unwrap().branches[0].vrep(),
        |v| {
            let mut verts = v.vertices.clone();
            verts.sort();
            let mut expected = p1_generators();
            expected.sort();
            let ok = verts == expected && v.rays.len() == 3 && v.lineality.is_empty();
            (
                ok,
                format!("{} vertices, {} rays", v.vertices.len(), v.rays.len()),
            )
        },
    );
    r.run("existence", existence_report(inst), |e| {
        (e.verdict == Existence::AllExist, format!("{:?}", e.verdict))
    });
    r.run(
        "uniqueness by sampling",
        uniqueness_report(inst, DEFAULT_UNIQUENESS_SAMPLES, 1),
        |u| {
            (
                u.falsification_witness.is_none(),
                format!("{} samples", u.samples_checked),
            )
        },
    );
    r.run("usc", usc_report(inst), |u| {
        (u.verdict == UscVerdict::Usc, format!("{:?}", u.verdict))
    });
    r.run(
        "probe along (1,0,0)",
        lsc_probe(
            inst,
            &zero,
            &[int(1), int(0), int(0)],
            &ProbeOptions::default(),
        ),
        |p| {
            // R(X + t e1) = R(X) - t e1, so both deviations equal t.
            let shift = p
                .scales
                .iter()
                .zip(&p.deficits_lsc)
                .zip(&p.deficits_outer)
                .all(|((t, a), b)| a == t && b == t);
            (
                p.classification == Classification::ConsistentWithLsc && shift,
                p.classification.name().to_string(),
            )
        },
    );
}

fn check_p2(r: &mut Recorder, inst: &ProblemInstance) {
    let zero = zeros(3);
    let origin = zeros(2);
    r.run("rho(0) = 0", rho(inst, &zero), |v| {
        (v.value == int(0), show(std::slice::from_ref(&v.value)))
    });
    r.run("R(0) = {lZ : l <= 0}", optimal_set(inst, &zero), |s| {
        let ok = s.vertices() == vec![origin.clone()]
            && s.rays() == vec![vec![int(0), int(-1)]]
            && s.lineality().is_empty();
        (
            ok,
            format!("vertices {}, rays {}", s.vertices().len(), s.rays().len()),
        )
    });
    for n in [1, 2, 5, 100] {
        let x = vec![int(0), rat(-1, n), int(0)];
        r.run(
            &format!("R(-1/{n} 1_F) = {{0}}"),
            optimal_set(inst, &x),
            |s| {
                let ok = s.vertices() == vec![origin.clone()] && s.is_bounded();
                (ok, format!("{} vertices", s.vertices().len()))
            },
        );
    }
    let minus_f = vec![int(0), int(-1), int(0)];
    let opts = ProbeOptions::default();
    r.run(
        "lsc probe along -1_F",
        lsc_probe(inst, &zero, &minus_f, &opts),
        |p| {
            let constant = p.deficits_lsc.iter().all(|d| *d == opts.half_width);
            let ok = constant
                && p.classification
                    == (Classification::ViolationWitness {
                        delta: opts.half_width.clone(),
                    });
            (ok, p.classification.name().to_string())
        },
    );
    let eps = rat(1, 10);
    r.run(
        "epsilon probe along -1_F",
        epsilon_lsc_probe(inst, &zero, &minus_f, &eps, &opts),
        |p| {
            let tail_is_scale = p
                .scales
                .iter()
                .zip(&p.deficits_lsc)
                .all(|(t, d)| *t >= eps || d == t);
            let ok = p.classification == Classification::ConsistentWithLsc
                && tail_is_scale
                && p.hypotheses
                    .as_ref()
                    .is_some_and(|h| h.interior_positive_payoff);
            (ok, p.classification.name().to_string())
        },
    );
    r.run("usc", usc_report(inst), |u| {
        let ok = matches!(&u.verdict, UscVerdict::NotUsc { scalable_witness } if *scalable_witness == vec![int(0), int(-1)])
            && u.unbounded_at_zero == Some(true);
        (ok, format!("{:?}", u.verdict))
    });
    r.run("-Z is acceptable at zero price", Ok(()), |_| {
        let z = neg(&p2_z());
        (
            inst.accepts(&z) && inst.accepts(&scale(&z, &int(7))),
            String::new(),
        )
    });
}

fn check_p3(r: &mut Recorder, inst: &ProblemInstance) {
    for x in [[0, 0], [1, -2], [-3, 1], [2, 5]] {
        let pos = vec![int(x[0]), int(x[1])];
        let expected = -(int(x[0] + x[1] + 2)) / int(2);
        r.run(&format!("rho({},{})", x[0], x[1]), rho(inst, &pos), |v| {
            (
                v.value == expected && !v.attained,
                show(std::slice::from_ref(&v.value)),
            )
        });
    }
    r.run("R(0) empty", optimal_set(inst, &zeros(2)), |s| {
        (s.is_empty() && s.certificate.is_some(), "Empty".into())
    });
    r.run("existence", existence_report(inst), |e| {
        (
            e.verdict == Existence::NoneExistCertificate,
            format!("{:?}", e.verdict),
        )
    });
}

fn check_p4(r: &mut Recorder, inst: &ProblemInstance) {
    let alpha = rat(1, 2);
    for x in [[0, 0, 0, 0], [1, -1, 2, -3], [-4, 0, 0, 1], [3, 3, 3, 3]] {
        let pos: Vec<Rat> = x.iter().map(|&v| int(v)).collect();
        let expected = es_direct(&pos, &alpha, &inst.space);
        r.run(
            &format!("rho = ES at {}", show(&pos)),
            rho(inst, &pos),
            |v| (v.value == expected, show(std::slice::from_ref(&v.value))),
        );
    }
    let pa = inst.compiled.polyhedral().unwrap();
    r.run(
        "lifted set is a cone",
        pa.branches[0].recession_cone(),
        |c| (c.same_set(&pa.branches[0]), String::new()),
    );
}

fn check_p5(r: &mut Recorder, inst: &ProblemInstance) {
    let zero = zeros(2);
    r.run("rho(0) = 0", rho(inst, &zero), |v| {
        (v.value == int(0), show(std::slice::from_ref(&v.value)))
    });
    r.run("R(0) = {0}", optimal_set(inst, &zero), |s| {
        (
            s.vertices() == vec![zeros(2)] && s.is_bounded(),
            format!("{} vertices", s.vertices().len()),
        )
    });
    r.run("existence", existence_report(inst), |e| {
        (
            e.verdict == Existence::PerPosition,
            format!("{:?}", e.verdict),
        )
    });
}

pub fn run_fixture(id: FixtureId) -> Vec<Assertion> {
    let inst = id.build();
    let mut r = Recorder {
        fixture: id.id(),
        out: Vec::new(),
    };
    match id {
        FixtureId::P1R3Unique => check_p1(&mut r, &inst),
        FixtureId::P2VarLsc => check_p2(&mut r, &inst),
        FixtureId::P3Star2d => check_p3(&mut r, &inst),
        FixtureId::P4EsCash => check_p4(&mut r, &inst),
        FixtureId::P5StaircaseTrunc => check_p5(&mut r, &inst),
    }
    r.out
}

pub fn run_checks(only: Option<FixtureId>) -> CheckSummary {
    let ids: Vec<FixtureId> = match only {
        Some(id) => vec![id],
        None => FixtureId::ALL.to_vec(),
    };
    let results: Vec<Assertion> = ids.iter().flat_map(|&id| run_fixture(id)).collect();
    CheckSummary {
        fixtures: ids.len(),
        assertions: results.len(),
        failures: results.iter().filter(|a| !a.passed).count(),
        results,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_assertion_passes() {
        let s = run_checks(None);
        assert!(s.all_passed(), "{}", s.table());
        assert_eq!(s.fixtures, 5);
    }

    #[test]
    fn only_filters() {
        let s = run_checks(Some(FixtureId::P3Star2d));
        assert_eq!(s.fixtures, 1);
        assert!(s.results.iter().all(|a| a.fixture == "p3_star2d"));
    }
}
