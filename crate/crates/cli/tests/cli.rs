use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use phylotriple::io::read_triples;
use phylotriple::model::newick;

fn phylotriple(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phylotriple")).args(args).output().unwrap()
}

fn path(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

fn read(p: &Path) -> String {
    fs::read_to_string(p).unwrap()
}

#[test]
fn staged_commands_reproduce_the_full_run() {
    let tmp = tempfile::tempdir().unwrap();
    let sim = tmp.path().join("sim");
    let full = tmp.path().join("full");
    let o = phylotriple(&["simulate", "--species", "6", "--families", "60", "--seed", "4", "--out", &path(&sim)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = phylotriple(&[
        "run",
        "--orthology",
        &path(&sim.join("orthology.tsv")),
        "--species-map",
        &path(&sim.join("species_map.tsv")),
        "--out",
        &path(&full),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    // noise-free input: every extracted triple is displayed by the true tree
    let truth = newick::parse(read(&sim.join("true_species_tree.nwk")).trim()).unwrap().displayed_triples();
    let extracted = read_triples("x", &read(&full.join("species_triples.tsv"))).unwrap();
    assert!(!extracted.is_empty());
    assert!(extracted.triples().all(|t| truth.contains(t)));

    let staged = tmp.path().join("staged");
    let o = phylotriple(&[
        "edit",
        "--orthology",
        &path(&sim.join("orthology.tsv")),
        "--species-map",
        &path(&sim.join("species_map.tsv")),
        "--out",
        &path(&staged),
    ]);
    assert!(o.status.success());
    assert_eq!(read(&staged.join("gene_trees.nwk")), read(&full.join("gene_trees.nwk")));
    let o = phylotriple(&[
        "extract",
        "--gene-trees",
        &path(&staged.join("gene_trees.nwk")),
        "--species-map",
        &path(&sim.join("species_map.tsv")),
        "--out",
        &path(&staged),
    ]);
    assert!(o.status.success());
    assert_eq!(read(&staged.join("species_triples.tsv")), read(&full.join("species_triples.tsv")));
    let o = phylotriple(&["subset", "--triples", &path(&staged.join("species_triples.tsv")), "--out", &path(&staged)]);
    assert!(o.status.success());
    assert_eq!(read(&staged.join("selected_triples.tsv")), read(&full.join("selected_triples.tsv")));
    let o = phylotriple(&[
        "tree",
        "--triples",
        &path(&staged.join("selected_triples.tsv")),
        "--extracted",
        &path(&staged.join("species_triples.tsv")),
        "--out",
        &path(&staged),
    ]);
    assert!(o.status.success());
    assert_eq!(read(&staged.join("species_tree.nwk")), read(&full.join("species_tree.nwk")));

    let report: serde_json::Value = serde_json::from_str(&read(&full.join("report.json"))).unwrap();
    assert_eq!(report["exact"], true);
    assert_eq!(report["species_tree"].as_str().unwrap(), read(&full.join("species_tree.nwk")).trim());
}

#[test]
fn conflicting_trio_gets_its_weight_share_as_support() {
    let tmp = tempfile::tempdir().unwrap();
    let triples = tmp.path().join("t.tsv");
    fs::write(&triples, "A\tB\tC\t3\nA\tC\tB\t1\nB\tC\tA\t1\n").unwrap();
    let out = tmp.path().join("out");
    let o = phylotriple(&["subset", "--triples", &path(&triples), "--out", &path(&out)]);
    assert!(o.status.success());
    assert_eq!(read(&out.join("selected_triples.tsv")), "#species\tA\tB\tC\nA\tB\tC\t3\n");
    let o = phylotriple(&[
        "tree",
        "--triples",
        &path(&out.join("selected_triples.tsv")),
        "--extracted",
        &path(&triples),
        "--out",
        &path(&out),
    ]);
    assert!(o.status.success());
    assert_eq!(read(&out.join("species_tree.nwk")), "((A,B)0.600,C);\n");
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let map = tmp.path().join("map.tsv");
    fs::write(&map, "a\tA\nb\tB\nc\tC\n").unwrap();
    let clique = tmp.path().join("clique.tsv");
    fs::write(&clique, "a\tb\na\tc\nb\tc\n").unwrap();
    let run = |rel: &Path, out: &str| {
        phylotriple(&[
            "run",
            "--orthology",
            &path(rel),
            "--species-map",
            &path(&map),
            "--out",
            &path(&tmp.path().join(out)),
        ])
    };
    // a single speciation carries no triple
    assert_eq!(run(&clique, "o1").status.code(), Some(2));

    let missing = tmp.path().join("missing.tsv");
    fs::write(&missing, "a\tb\n# comment\nb\tz\n").unwrap();
    let o = run(&missing, "o2");
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("missing.tsv:3") && err.contains("z"), "{err}");

    let bad = tmp.path().join("bad.tsv");
    fs::write(&bad, "a\tb\t1.5\n").unwrap();
    assert_eq!(run(&bad, "o3").status.code(), Some(1));
}

#[test]
fn export_only_writes_lp_files() {
    let tmp = tempfile::tempdir().unwrap();
    let map = tmp.path().join("map.tsv");
    fs::write(&map, "a\tA\nb\tB\nc\tC\nd\tD\n").unwrap();
    let rel = tmp.path().join("p4.tsv");
    fs::write(&rel, "a\tb\nb\tc\nc\td\n").unwrap();
    let out = tmp.path().join("out");
    let o = phylotriple(&[
        "run",
        "--solver",
        "export-only",
        "--orthology",
        &path(&rel),
        "--species-map",
        &path(&map),
        "--out",
        &path(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let lp = read(&out.join("lp").join("edit_0000.lp"));
    assert!(lp.contains("Minimize"), "{lp}");
    assert!(lp.contains("Binary"));
}

#[test]
fn distance_of_identical_trees_is_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let t = tmp.path().join("t.nwk");
    fs::write(&t, "((a,b),(c,(d,e)));\n").unwrap();
    let o = phylotriple(&["distance", &path(&t), &path(&t), "--samples", "50"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    for line in text.lines() {
        let fields: Vec<&str> = line.split('\t').collect();
        assert!(fields[1..].iter().all(|v| v.parse::<f64>().unwrap() == 0.0), "{line}");
    }
}
