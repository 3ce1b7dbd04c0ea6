use torsionlab::lambdacollect::{emit_system, emitted_golden, PdeSystem, Provenance};
use torsionlab::laxlab::CaseTag;

fn dump_or_compare(case: CaseTag, emitted: &PdeSystem) {
    let path = format!("{}/data/v1/emitted_{}.txt", env!("CARGO_MANIFEST_DIR"), case.name());
    if std::env::var_os("TORSIONLAB_BLESS").is_some() {
        std::fs::write(&path, emitted.to_lines().join("\n") + "\n").unwrap();
    }
    let golden = emitted_golden(case).unwrap();
    assert_eq!(&golden, emitted, "{case}");
}

#[test]
fn real_emission_matches_golden() {
    dump_or_compare(CaseTag::RealRoots, &emit_system(CaseTag::RealRoots).unwrap());
}

#[test]
fn complex_emission_matches_golden() {
    let emitted = emit_system(CaseTag::ComplexRoots).unwrap();
    assert_eq!(emitted.len(), 517);
    dump_or_compare(CaseTag::ComplexRoots, &emitted);
}

#[test]
fn golden_round_trip() {
    for case in CaseTag::ALL {
        let g = emitted_golden(case).unwrap();
        let again = PdeSystem::parse(&g.to_lines().join("\n"), Provenance::Emitted(case)).unwrap();
        assert_eq!(g, again);
    }
}
