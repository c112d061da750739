use std::process::Command;

use orbicycle::Budget;
use orbicycle_cli::{parse_scene, run, run_text, Format, SceneErrorKind, Status};
use proptest::prelude::*;

const LINES: &str = include_str!("../scenes/lines.scene");
const TOUR: &str = include_str!("../scenes/tour.scene");

fn scene_path(name: &str) -> String {
    format!("{}/scenes/{}", env!("CARGO_MANIFEST_DIR"), name)
}

#[test]
fn minimal_scene_parses() {
    let s = parse_scene("[model]\nM = A1\n[cycle]\nX on M = up(u)\nY on M = down(y, z)\n").unwrap();
    assert_eq!(s.cycles.len(), 2);
    assert!(s.commands.is_empty());
    assert!(s.models.contains_key("M"));
}

#[test]
fn duplicate_cycle_is_a_name_error() {
    let e = parse_scene("[model]\nM = A1\n[cycle]\nX on M = up(u)\nX on M = up(v)\n").unwrap_err();
    assert_eq!(e.kind, SceneErrorKind::Name);
    assert_eq!((e.line, e.column), (5, 1));
    assert!(e.message.contains("'X'"), "{}", e.message);
}

#[test]
fn undeclared_variable_is_a_chart_error() {
    let e = parse_scene("[model]\nM = A1\n[cycle]\nX on M = up(u + w)\n").unwrap_err();
    assert_eq!(e.kind, SceneErrorKind::Chart);
    assert_eq!((e.line, e.column), (4, 17));
    // downstairs coordinates are not upstairs ones
    let e = parse_scene("[model]\nM = A1\n[cycle]\nX on M = down(u)\n").unwrap_err();
    assert_eq!(e.kind, SceneErrorKind::Chart);
}

#[test]
fn syntax_errors_carry_positions() {
    let e = parse_scene("[model]\nM = A1\n[cycle]\nX on M = up(u +)\n").unwrap_err();
    assert_eq!(e.kind, SceneErrorKind::Parse);
    assert_eq!(e.line, 4);
    let e = parse_scene("[model]\nM = A1\n[run]\nfrobnicate\n").unwrap_err();
    assert_eq!((e.kind, e.line, e.column), (SceneErrorKind::Parse, 4, 1));
    let e = parse_scene("[model]\nM = B7\n").unwrap_err();
    assert_eq!(e.kind, SceneErrorKind::Name);
    let e = parse_scene("X on M = up(u)\n").unwrap_err();
    assert_eq!(e.kind, SceneErrorKind::Parse);
}

#[test]
fn references_are_checked() {
    let e = parse_scene("[model]\nM = A1\n[run]\nintersect X Y\n").unwrap_err();
    assert_eq!((e.kind, e.column), (SceneErrorKind::Name, 11));
    let e = parse_scene("[model]\nM = A1\nN = trivial-2\n[cycle]\nX on M = up(u)\nY on N = up(t1)\n[run]\nintersect X Y\n")
        .unwrap_err();
    assert_eq!(e.kind, SceneErrorKind::Chart);
    let e = parse_scene("[model]\nM = A1\n[cycle]\nX on M = up(u)\n[run]\nshow M\n").unwrap_err();
    assert!(e.message.contains("is a model"), "{}", e.message);
}

#[test]
fn coordinate_lines_meet_in_half_the_origin() {
    let r = run(&parse_scene(LINES).unwrap(), 0);
    assert_eq!(r.exit_code(), 0);
    let text = r.render(Format::Text);
    assert!(text.contains("cycle: 1/2 · [origin]"), "{}", text);
    let json = r.render(Format::Json);
    assert!(json.contains("\"cycle\": \"1/2 · [origin]\""), "{}", json);
}

#[test]
fn improper_pair_fails_verification() {
    let scene = "[model]\nM = A1\n[cycle]\nX on M = up(u)\n[run]\nverify commutative X X\nverify roundtrip X\n";
    let r = run_text(scene, 0, Budget::default());
    assert_eq!(r.exit_code(), 1);
    assert_eq!(r.commands[0].status, Status::Fail);
    assert_eq!(r.commands[1].status, Status::Pass);
    let cx = &r.commands[0].fields["counterexample"];
    assert_eq!(cx["kind"], "NotProper");
}

#[test]
fn engine_errors_exit_with_two() {
    let scene = "[model]\nM = A1\n[cycle]\nX on M = up(u)\n[run]\nintersect X X\nshow X\n";
    let r = run_text(scene, 0, Budget::default());
    assert_eq!(r.commands[0].status, Status::Error);
    assert_eq!(r.commands[0].fields["error"]["kind"], "NotProper");
    assert_eq!(r.commands[1].status, Status::Ok);
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn empty_command_list() {
    let r = run_text("[model]\nM = A1\n[run]\n", 7, Budget::default());
    assert!(r.commands.is_empty());
    assert_eq!(r.exit_code(), 0);
    let r = run_text("", 7, Budget::default());
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn bound_results_feed_later_commands() {
    let scene = "[model]\nM = A1\n[cycle]\nX on M = up(u)\nY on M = up(v)\n[run]\nO = intersect X Y\nR = roundtrip O\nshow R\n";
    let r = run_text(scene, 0, Budget::default());
    assert_eq!(r.exit_code(), 0);
    assert_eq!(r.commands[2].fields["cycle"], "1 · [origin]");
}

#[test]
fn tour_scene_passes() {
    let r = run_text(TOUR, 0, Budget::default());
    let text = r.render(Format::Text);
    assert_eq!(r.exit_code(), 0, "{}", text);
    assert!(r.commands.iter().all(|c| c.status != Status::Error));
}

#[test]
fn budgets_are_enforced() {
    let tight = Budget { max_pairs: 1, max_terms: 2, degree_bound: 64 };
    let r = run_text(LINES, 0, tight);
    assert_eq!(r.exit_code(), 2);
    let json = r.render(Format::Json);
    assert!(json.contains("EffortExceeded"), "{}", json);
}

#[test]
fn reports_are_reproducible() {
    for scene in [LINES, TOUR] {
        for format in [Format::Text, Format::Json] {
            let a = run_text(scene, 11, Budget::default()).render(format);
            let b = run_text(scene, 11, Budget::default()).render(format);
            assert_eq!(a, b);
        }
    }
}

fn keys_sorted(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Object(m) => {
            let keys: Vec<&String> = m.keys().collect();
            keys.windows(2).all(|w| w[0] < w[1]) && m.values().all(keys_sorted)
        }
        serde_json::Value::Array(a) => a.iter().all(keys_sorted),
        _ => true,
    }
}

#[test]
fn json_report_matches_text_report() {
    let r = run_text(TOUR, 0, Budget::default());
    let json: serde_json::Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
    let text = r.render(Format::Text);
    assert!(keys_sorted(&json));
    let raw = r.render(Format::Json);
    let top: Vec<&str> = raw
        .lines()
        .filter(|l| l.starts_with("  \"") )
        .map(|l| l.trim_start().split('"').nth(1).unwrap())
        .collect();
    assert_eq!(top, ["budgets", "commands", "exit_code", "field", "seed", "warnings"]);
    let commands = json["commands"].as_array().unwrap();
    assert_eq!(commands.len(), r.commands.len());
    for c in commands {
        let header = format!("[{}] line {}: {}", c["index"], c["line"], c["command"].as_str().unwrap());
        assert!(text.contains(&header), "{}", header);
        if let Some(z) = c.get("cycle") {
            assert!(text.contains(&format!("cycle: {}", z.as_str().unwrap())));
        }
    }
}

#[test]
fn binary_runs_scenes() {
    let bin = env!("CARGO_BIN_EXE_orbicycle");
    let out = Command::new(bin).arg(scene_path("lines.scene")).arg("--seed").arg("3").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("seed: 3\n"));
    assert!(stdout.contains("1/2 · [origin]"));

    let out = Command::new(bin).args([&scene_path("lines.scene"), "--format", "json", "--max-pairs", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["budgets"]["max_pairs"], 1);

    let out = Command::new(bin).arg(scene_path("missing.scene")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, .. ProptestConfig::default() })]

    #[test]
    fn mangled_scenes_never_crash(cut in 0usize..400, insert in "[ -~\\n]{0,12}") {
        let mut text: Vec<char> = LINES.chars().collect();
        let at = cut.min(text.len());
        text.splice(at..at, insert.chars());
        let text: String = text.into_iter().collect();
        let budget = Budget { max_pairs: 2_000, max_terms: 20_000, degree_bound: 16 };
        let r = run_text(&text, 0, budget);
        prop_assert!((0..=2).contains(&r.exit_code()));
    }

    #[test]
    fn arbitrary_text_never_crashes(text in "\\PC{0,200}") {
        let r = run_text(&text, 0, Budget::default());
        prop_assert!((0..=2).contains(&r.exit_code()));
    }
}
