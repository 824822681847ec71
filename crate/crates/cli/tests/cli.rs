use std::process::{Command, Output};

use cdg_core::basis::NodalBasis;
use cdg_core::forms::{assemble, Problem, Scheme, SchemeConfig};
use cdg_core::mesh::{four_triangle_mesh, SwitchAssignment, SwitchStrategy};

fn cdglab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdglab")).args(args).output().expect("binary runs")
}

fn cdglab_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdglab")).args(args).env("CDGLAB_THREADS", threads).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Rows as field vectors, header dropped.
fn rows(csv: &str) -> Vec<Vec<String>> {
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("scheme,switch,p,n,c11,eta,metric,value,rate,status"));
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn tmp(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("cdglab-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).display().to_string()
}

#[test]
fn solve_matches_library() {
    let out = stdout(&cdglab(&["solve", "--scheme", "cdg", "--p", "2", "--n", "4", "--c11-boundary", "1"]));
    let r = rows(&out);
    assert_eq!(r.len(), 3);
    let l2: f64 = r.iter().find(|r| r[6] == "error_l2").unwrap()[7].parse().unwrap();

    use cdg_core::manufactured::ManufacturedSolution;
    use cdg_core::mesh::{BoundaryMarker, Mesh};
    let mesh = Mesh::structured(4, false, &BoundaryMarker::AllDirichlet).unwrap();
    let basis = NodalBasis::new(2).unwrap();
    let sw = SwitchAssignment::new(&mesh, SwitchStrategy::Consistent).unwrap();
    let ex = ManufacturedSolution::default();
    let sol = cdg_core::solve(&mesh, &basis, &sw, &ex.problem(), &SchemeConfig::new(Scheme::Cdg).with_c11(0.0, 1.0)).unwrap();
    let lib = cdg_core::analysis::l2_error(&mesh, &basis, &sol.u, &|x, y| ex.u(x, y));
    assert!((l2 - lib).abs() <= 1e-6 * lib, "{l2} vs {lib}");
    assert!(r.iter().all(|r| r[9] == "ok"));
}

#[test]
fn poly_exact_is_reproduced() {
    for scheme in ["cdg", "ldg", "br2"] {
        let out = stdout(&cdglab(&["solve", "--poly-exact", "--seed", "42", "--scheme", scheme, "--p", "1,3", "--n", "3", "--c11-boundary", "1"]));
        for r in rows(&out).iter().filter(|r| r[6].starts_with("error")) {
            let v: f64 = r[7].parse().unwrap();
            assert!(v <= 1e-9, "{scheme}: {r:?}");
        }
    }
}

#[test]
fn single_cell_convergence_has_empty_rate() {
    let r = rows(&stdout(&cdglab(&["convergence", "--p", "1", "--n", "2"])));
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][8], "");
    assert_eq!(r[0][6], "error_l2");
}

#[test]
fn table_grid_shape_and_rates() {
    let r = rows(&stdout(&cdglab(&["convergence", "--c11-interior", "0,1,10"])));
    assert_eq!(r.len(), 75);
    for row in &r {
        let rate = &row[8];
        if row[3] == "2" {
            assert_eq!(rate, "");
        } else {
            let p: f64 = row[2].parse().unwrap();
            let rate: f64 = rate.parse().unwrap();
            if row[3] == "32" {
                assert!((rate - (p + 1.0)).abs() <= 0.15, "{row:?}");
            }
        }
    }
    // Three-scheme comparison grid.
    let r = rows(&stdout(&cdglab(&["convergence", "--scheme", "cdg,ldg,br2", "--c11-boundary", "1", "--n", "2,4"])));
    assert_eq!(r.len(), 30);
}

#[test]
fn nullspace_dimensions() {
    let r = rows(&stdout(&cdglab(&["nullspace"])));
    assert_eq!(r.len(), 28);
    for row in r {
        let p: usize = row[2].parse().unwrap();
        let expected = if row[0] == "LDG" && row[1] == "natural" { p + 2 } else { 1 };
        assert_eq!(row[7], expected.to_string(), "{row:?}");
    }
}

#[test]
fn spectrum_ratio_and_mesh_independence() {
    let out = stdout(&cdglab(&["spectrum", "--scheme", "cdg,br2", "--p", "3", "--n", "8,16,32", "--c11-boundary", "1"]));
    let r = rows(&out);
    let val = |s: &str, n: &str| -> f64 { r.iter().find(|x| x[0] == s && x[3] == n).unwrap()[7].parse().unwrap() };
    let ratio = val("BR2", "32") / val("CDG", "32");
    assert!((ratio - 1.5).abs() <= 0.15, "ratio {ratio}");
    for s in ["CDG", "BR2"] {
        let v = [val(s, "8"), val(s, "16"), val(s, "32")];
        let spread = (v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min)) / v[2];
        assert!(spread <= 0.01, "{s}: {v:?}");
    }
}

#[test]
fn memory_table() {
    let r = rows(&stdout(&cdglab(&["memory"])));
    assert_eq!(r.len(), 45);
    let get = |s: &str, d: usize, p: &str| -> String {
        r.iter().find(|x| x[0] == s && x[6] == format!("nnz_per_element_d{d}") && x[2] == p).unwrap()[7].clone()
    };
    assert_eq!((get("CDG", 2, "3"), get("LDG", 2, "3"), get("BR2", 2, "3")), ("220".into(), "236".into(), "292".into()));
    assert_eq!((get("CDG", 3, "4"), get("LDG", 3, "4"), get("BR2", 3, "4")), ("3325".into(), "3775".into(), "4525".into()));
    assert_eq!((get("CDG", 1, "1"), get("BR2", 1, "1")), ("8".into(), "10".into()));
}

#[test]
fn sparsity_from_mesh_json_with_exports() {
    let mesh_path = tmp("four.json");
    stdout(&cdglab(&["mesh", "--four-triangle", "--out", &mesh_path]));
    let pbm = tmp("pattern_{scheme}.pbm");
    let mat = tmp("matrix_{scheme}.txt");
    let out = stdout(&cdglab(&["sparsity", "--mesh", &mesh_path, "--p", "3", "--pbm", &pbm, "--matrix", &mat]));
    let r = rows(&out);
    let get = |s: &str, m: &str| r.iter().find(|x| x[0] == s && x[6] == m).unwrap()[7].clone();
    assert_eq!(get("LDG", "dofs"), "40");
    assert_eq!(get("LDG", "noncompact_pairs"), "1");
    assert_eq!(get("CDG", "noncompact_pairs"), "0");
    assert_eq!(get("CDG", "interior_nnz_max"), "220");

    let json = stdout(&cdglab(&["sparsity", "--mesh", &mesh_path, "--p", "3", "--scheme", "ldg", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let meta = v["metadata"].as_array().unwrap();
    assert!(meta.iter().any(|m| m[0] == "noncompact_pairs_LDG" && m[1] == "2-3"));

    let text = std::fs::read_to_string(pbm.replace("{scheme}", "LDG")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("P1"));
    assert_eq!(lines.next(), Some("40 40"));
    assert_eq!(lines.count(), 40);

    // Coordinate export round-trips to the library matrix.
    let mesh = four_triangle_mesh();
    let basis = NodalBasis::new(3).unwrap();
    let sw = SwitchAssignment::new(&mesh, SwitchStrategy::Consistent).unwrap();
    let a = assemble(&mesh, &basis, &sw, &Problem::laplace(), &SchemeConfig::new(Scheme::Cdg).with_c11(0.0, 1.0)).unwrap().matrix;
    let text = std::fs::read_to_string(mat.replace("{scheme}", "CDG")).unwrap();
    let mut count = 0;
    for line in text.lines() {
        let f: Vec<&str> = line.split(' ').collect();
        let (i, j, v): (usize, usize, f64) = (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap());
        assert_eq!(v, a.get(i, j));
        count += 1;
    }
    assert_eq!(count, a.entries().len());
}

#[test]
fn empty_mesh_is_rejected() {
    let path = tmp("empty.json");
    std::fs::write(&path, r#"{"vertices":[],"elements":[],"interior_faces":[],"boundary_faces":[],"periodic":false,"n":0}"#).unwrap();
    let o = cdglab(&["sparsity", "--mesh", &path]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("no elements"));
    assert!(!cdglab(&["solve", "--n", "0"]).status.success());
    assert!(!cdglab(&["solve", "--p", "0"]).status.success());
    assert!(!cdglab(&["sparsity", "--mesh", &tmp("missing.json")]).status.success());
}

#[test]
fn failed_cells_are_reported_with_nonzero_exit() {
    // No Dirichlet boundary: the system is singular.
    let o = cdglab(&["solve", "--periodic", "--n", "2", "--p", "1"]);
    assert!(!o.status.success());
    let r = rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(r.len(), 3);
    assert!(r.iter().all(|x| x[9] == "failed" && x[7].is_empty()));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["convergence", "--scheme", "cdg,ldg,br2", "--p", "1,2", "--n", "2,4", "--switch", "natural,consistent", "--c11-boundary", "1"];
    let serial = stdout(&cdglab_threads(&args, "0"));
    let parallel = stdout(&cdglab_threads(&args, "3"));
    assert_eq!(serial, parallel);
    assert_eq!(serial, stdout(&cdglab_threads(&args, "3")));
    let json = stdout(&cdglab(&["convergence", "--p", "1", "--n", "2,4", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn out_flag_writes_file() {
    let path = tmp("mem.csv");
    let o = cdglab(&["memory", "--p", "1", "--out", &path]);
    assert!(o.status.success() && o.stdout.is_empty());
    assert_eq!(rows(&std::fs::read_to_string(&path).unwrap()).len(), 9);
}
