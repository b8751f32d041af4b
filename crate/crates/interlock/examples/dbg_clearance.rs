use interlock::chain::*;
use interlock::construct::*;
use interlock::geom::*;

fn main() {
    let tp = TrapezoidParams::default();
    let trap = build_trapezoid16(&tp).expect("trapezoid");
    let (two, certs) = thread_two_chain(&tp, &trap).expect("thread");
    let scene = Scene {
        chains: vec![trap.chain.clone(), two],
        epsilon: tp.epsilon,
        tau: tp.epsilon / 100.0,
        certificates: certs,
        provenance: Provenance::adhoc("dbg"),
    };
    let names = ["s0","x2","y2","a1","b1","c4","d4","e4","f4","g4","h4","k2","l2","m2","p3","q3","s1"];
    let edge_name = |ci: usize, ei: usize| -> String {
        if ci == 0 { format!("T[{}-{}]", names[ei], names[ei+1]) } else { format!("2ch[{}]", ei) }
    };
    let edges: Vec<(usize, usize, Segment)> = scene.edges().collect();
    let mut pairs: Vec<(f64, String, String)> = Vec::new();
    for a in 0..edges.len() {
        for b in a+1..edges.len() {
            let (ca, ea, ref sa) = edges[a];
            let (cb, eb, ref sb) = edges[b];
            if ca == cb && ea.abs_diff(eb) == 1 { continue; }
            let d = seg_seg_distance(sa, sb);
            pairs.push((d, edge_name(ca, ea), edge_name(cb, eb)));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    println!("tau = {}", scene.tau);
    for (d, a, b) in pairs.iter().take(15) {
        println!("{:.9}  ({:.4} eps)  {} -- {}", d, d / tp.epsilon, a, b);
    }
}
