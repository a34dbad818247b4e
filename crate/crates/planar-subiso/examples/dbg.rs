use planar_subiso::embedded_dp::*;
use planar_subiso::generate;
use planar_subiso::oracle;
use planar_subiso::sphere_cut::sc_decomposition;
use planar_subiso::plane_graph::PlaneGraph;
use planar_subiso::graph::AbstractGraph;

fn check(hname: &str, host: &PlaneGraph, pname: &str, pattern: &PlaneGraph) {
    let expected = oracle::brute_count(host.graph(), pattern.graph()).unwrap();
    let scd = sc_decomposition(host, 0).unwrap();
    let ctx = PatternCtx::new(pattern.clone()).unwrap();
    let required = vec![true; host.n()];
    let excluded = vec![false; host.n()];
    match run_dp(&scd, host, &ctx, &required, &excluded, &DpOptions::default()) {
        Ok(res) => {
            let tag = if res.count == expected { "ok " } else { "BAD" };
            println!("{tag} {hname} x {pname}: dp={} oracle={} (aut={})", res.count, expected, ctx.aut);
        }
        Err(e) => println!("ERR {hname} x {pname}: {e}"),
    }
}

fn main() {
    let k4 = {
        let g = AbstractGraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        PlaneGraph::build(g, vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]]).unwrap()
    };
    let hosts: Vec<(&str, PlaneGraph)> = vec![
        ("p3", generate::path(3)),
        ("p4", generate::path(4)),
        ("c3", generate::cycle(3)),
        ("c4", generate::cycle(4)),
        ("c5", generate::cycle(5)),
        ("star3", generate::star(3)),
        ("k4", k4.clone()),
        ("grid2", generate::grid(2)),
        ("wheel5", generate::wheel(5)),
        ("grid3", generate::grid(3)),
    ];
    let patterns: Vec<(&str, PlaneGraph)> = vec![
        ("k2", generate::path(2)),
        ("p3", generate::path(3)),
        ("p4", generate::path(4)),
        ("star3", generate::star(3)),
        ("c3", generate::cycle(3)),
        ("c4", generate::cycle(4)),
    ];
    for (hn, h) in &hosts {
        for (pn, p) in &patterns {
            if p.n() <= h.n() {
                check(hn, h, pn, p);
            }
        }
    }
}
